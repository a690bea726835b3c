//! Small dense helpers on top of `nalgebra`.

use nalgebra::DMatrix;
use num_complex::Complex64;

/// Dense complex matrix, row/column indexed as usual.
pub type ComplexMatrix = DMatrix<Complex64>;

pub const ZERO: Complex64 = Complex64::new(0.0, 0.0);
pub const ONE: Complex64 = Complex64::new(1.0, 0.0);

pub fn max_abs(m: &ComplexMatrix) -> f64 {
    m.iter().fold(0.0_f64, |acc, z| acc.max(z.norm()))
}

/// Largest entrywise deviation between `a` and `b`.
pub fn max_abs_diff(a: &ComplexMatrix, b: &ComplexMatrix) -> f64 {
    assert_eq!(a.shape(), b.shape());
    a.iter()
        .zip(b.iter())
        .fold(0.0_f64, |acc, (x, y)| acc.max((x - y).norm()))
}

pub fn trace(m: &ComplexMatrix) -> Complex64 {
    m.diagonal().iter().sum()
}

/// Hermiticity test with the scale-aware tolerance `rel * dim * max|A|`.
pub fn is_hermitian(m: &ComplexMatrix, rel: f64) -> bool {
    if !m.is_square() {
        return false;
    }
    let tol = rel * m.nrows() as f64 * max_abs(m).max(f64::MIN_POSITIVE);
    let n = m.nrows();
    for r in 0..n {
        for c in r..n {
            if (m[(r, c)] - m[(c, r)].conj()).norm() > tol {
                return false;
            }
        }
    }
    true
}

/// Eigenvalues of a Hermitian matrix in ascending order.
///
/// Only the lower triangle is read. Backed by faer's self-adjoint solver.
pub fn hermitian_eigenvalues(m: &ComplexMatrix) -> Vec<f64> {
    assert!(m.is_square());
    let n = m.nrows();
    let fm = faer::Mat::<faer::c64>::from_fn(n, n, |r, c| {
        let z = m[(r, c)];
        faer::c64::new(z.re, z.im)
    });
    let mut ev = fm
        .self_adjoint_eigenvalues(faer::Side::Lower)
        .expect("self-adjoint eigensolver did not converge");
    ev.sort_by(f64::total_cmp);
    ev
}

pub fn matrix_power(m: &ComplexMatrix, k: u32) -> ComplexMatrix {
    let mut out = ComplexMatrix::identity(m.nrows(), m.ncols());
    for _ in 0..k {
        out = &out * m;
    }
    out
}

/// Base-`d` digits of `index`, most significant first, `len` digits.
pub fn digits(mut index: usize, d: usize, len: usize) -> Vec<usize> {
    let mut out = vec![0; len];
    for slot in out.iter_mut().rev() {
        *slot = index % d;
        index /= d;
    }
    out
}

/// Inverse of [`digits`].
pub fn from_digits(ds: &[usize], d: usize) -> usize {
    ds.iter().fold(0, |acc, &x| acc * d + x)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn digits_round_trip() {
        for idx in 0..81 {
            let ds = digits(idx, 3, 4);
            assert_eq!(from_digits(&ds, 3), idx);
        }
        assert_eq!(digits(5, 2, 4), vec![0, 1, 0, 1]);
    }

    #[test]
    fn eigenvalues_of_pauli_x() {
        let m = ComplexMatrix::from_row_slice(2, 2, &[ZERO, ONE, ONE, ZERO]);
        let ev = hermitian_eigenvalues(&m);
        assert!((ev[0] + 1.0).abs() < 1e-14 && (ev[1] - 1.0).abs() < 1e-14);
    }

    #[test]
    fn eigenvalues_of_rank_one_projector() {
        // |phi><phi| with phi = sum_a |aa>, d = 8
        let d = 8;
        let mut m = ComplexMatrix::zeros(d * d, d * d);
        for a in 0..d {
            for b in 0..d {
                m[(a * d + a, b * d + b)] = ONE;
            }
        }
        let ev = hermitian_eigenvalues(&m);
        assert!(ev.iter().all(|x| x.is_finite()));
        assert!((ev[d * d - 1] - d as f64).abs() < 1e-12);
        assert!(ev[..d * d - 1].iter().all(|x| x.abs() < 1e-12));
    }

    #[test]
    fn hermitian_check_rejects_skew() {
        let i = Complex64::new(0.0, 1.0);
        let herm = ComplexMatrix::from_row_slice(2, 2, &[ONE, i, -i, ONE]);
        let skew = ComplexMatrix::from_row_slice(2, 2, &[ONE, i, i, ONE]);
        assert!(is_hermitian(&herm, 1e-12));
        assert!(!is_hermitian(&skew, 1e-12));
    }
}
