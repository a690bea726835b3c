//! Generalized Pauli (clock and shift) operators and the two single-qudit
//! channels built from them.
//!
//! Both channels have a twirl form, a weighted sum of conjugations by
//! `X^i Z^j`, and a closed form:
//!
//! * depolarizing: `E(A) = (1-p) A + (p/d) tr(A) 1`
//! * phase damping: `E(A) = (1-p) A + p diag(A)`
//!
//! The closed forms are what everything downstream uses. The twirl sums are
//! kept as an independent check.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{trace, ComplexMatrix, ONE, ZERO};

/// Largest dimension accepted by [`choi_matrix`] (the Choi matrix has `d^4` entries).
pub const CHOI_MAX_DIM: usize = 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ChannelKind {
    Depolarizing,
    PhaseDamping,
}

impl ChannelKind {
    pub const ALL: [ChannelKind; 2] = [ChannelKind::Depolarizing, ChannelKind::PhaseDamping];

    pub fn as_str(self) -> &'static str {
        match self {
            ChannelKind::Depolarizing => "depolarizing",
            ChannelKind::PhaseDamping => "phase-damping",
        }
    }
}

impl fmt::Display for ChannelKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ChannelKind {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "depolarizing" | "depolarising" | "dep" => Ok(ChannelKind::Depolarizing),
            "phase-damping" | "phase_damping" | "phasedamping" | "pd" => {
                Ok(ChannelKind::PhaseDamping)
            }
            other => Err(format!(
                "unknown channel '{other}' (expected depolarizing or phase-damping)"
            )),
        }
    }
}

/// A single-qudit channel of the given kind and strength.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChannelModel {
    kind: ChannelKind,
    p: f64,
    d: usize,
}

impl ChannelModel {
    pub fn new(kind: ChannelKind, p: f64, d: usize) -> Result<Self> {
        if d < 2 {
            return Err(Error::InvalidDimension(d));
        }
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::ProbabilityOutOfRange(p));
        }
        Ok(ChannelModel { kind, p, d })
    }

    pub fn depolarizing(p: f64, d: usize) -> Result<Self> {
        Self::new(ChannelKind::Depolarizing, p, d)
    }

    pub fn phase_damping(p: f64, d: usize) -> Result<Self> {
        Self::new(ChannelKind::PhaseDamping, p, d)
    }

    pub fn kind(&self) -> ChannelKind {
        self.kind
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn d(&self) -> usize {
        self.d
    }

    /// Same channel at a different strength.
    pub fn with_p(&self, p: f64) -> Result<Self> {
        Self::new(self.kind, p, self.d)
    }
}

fn check_dim(d: usize) -> Result<()> {
    if d < 2 {
        Err(Error::InvalidDimension(d))
    } else {
        Ok(())
    }
}

fn check_operand(channel: &ChannelModel, a: &ComplexMatrix) -> Result<()> {
    if !a.is_square() {
        return Err(Error::NotSquare {
            rows: a.nrows(),
            cols: a.ncols(),
        });
    }
    if a.nrows() != channel.d {
        return Err(Error::DimensionMismatch {
            expected: channel.d,
            found: a.nrows(),
        });
    }
    Ok(())
}

/// `X|i> = |i+1 mod d>`.
pub fn shift_matrix(d: usize) -> Result<ComplexMatrix> {
    check_dim(d)?;
    let mut x = ComplexMatrix::zeros(d, d);
    for i in 0..d {
        x[((i + 1) % d, i)] = ONE;
    }
    Ok(x)
}

/// `Z|i> = w^i |i>` with `w = exp(2 pi i / d)`.
pub fn clock_matrix(d: usize) -> Result<ComplexMatrix> {
    check_dim(d)?;
    let omega = root_of_unity(d);
    let mut z = ComplexMatrix::zeros(d, d);
    let mut phase = ONE;
    for i in 0..d {
        z[(i, i)] = phase;
        phase *= omega;
    }
    Ok(z)
}

/// `exp(2 pi i / d)`.
pub fn root_of_unity(d: usize) -> Complex64 {
    Complex64::from_polar(1.0, 2.0 * PI / d as f64)
}

/// Closed-form channel action. Linear in `a`; no trace or positivity checks.
pub(crate) fn apply_linear(channel: &ChannelModel, a: &ComplexMatrix) -> ComplexMatrix {
    let p = channel.p;
    let mut out = a * Complex64::from(1.0 - p);
    match channel.kind {
        ChannelKind::Depolarizing => {
            let shift = trace(a) * (p / channel.d as f64);
            for k in 0..channel.d {
                out[(k, k)] += shift;
            }
        }
        ChannelKind::PhaseDamping => {
            for k in 0..channel.d {
                out[(k, k)] += a[(k, k)] * p;
            }
        }
    }
    out
}

/// Apply the channel to a single-qudit density matrix using the closed form.
pub fn apply_channel(channel: &ChannelModel, rho: &ComplexMatrix) -> Result<ComplexMatrix> {
    check_operand(channel, rho)?;
    Ok(apply_linear(channel, rho))
}

/// Apply the channel through its explicit conjugation sum. Accepts any
/// operator, not only density matrices.
pub fn apply_channel_twirl(channel: &ChannelModel, a: &ComplexMatrix) -> Result<ComplexMatrix> {
    check_operand(channel, a)?;
    let d = channel.d;
    let p = channel.p;
    let x = shift_matrix(d)?;
    let z = clock_matrix(d)?;

    // Z^j A Z^{-j} for j = 0..d
    let mut z_pow = ComplexMatrix::identity(d, d);
    let mut dephased = Vec::with_capacity(d);
    for _ in 0..d {
        dephased.push(&z_pow * a * z_pow.adjoint());
        z_pow = &z * &z_pow;
    }

    let mut acc = ComplexMatrix::zeros(d, d);
    let weight = match channel.kind {
        ChannelKind::Depolarizing => {
            let mut x_pow = ComplexMatrix::identity(d, d);
            for _ in 0..d {
                let x_adj = x_pow.adjoint();
                for term in &dephased {
                    acc += &x_pow * term * &x_adj;
                }
                x_pow = &x * &x_pow;
            }
            p / (d * d) as f64
        }
        ChannelKind::PhaseDamping => {
            for term in &dephased {
                acc += term;
            }
            p / d as f64
        }
    };
    Ok(a * Complex64::from(1.0 - p) + acc * Complex64::from(weight))
}

/// Choi matrix `sum_{a,b} E(|a><b|) (x) |a><b|`, row index `x*d + a`.
pub fn choi_matrix(channel: &ChannelModel) -> Result<ComplexMatrix> {
    let d = channel.d;
    if d > CHOI_MAX_DIM {
        return Err(Error::Capacity {
            dim: d * d,
            cap: CHOI_MAX_DIM * CHOI_MAX_DIM,
        });
    }
    let mut choi = ComplexMatrix::zeros(d * d, d * d);
    let mut unit = ComplexMatrix::zeros(d, d);
    for a in 0..d {
        for b in 0..d {
            unit[(a, b)] = ONE;
            let image = apply_linear(channel, &unit);
            unit[(a, b)] = ZERO;
            for x in 0..d {
                for y in 0..d {
                    choi[(x * d + a, y * d + b)] = image[(x, y)];
                }
            }
        }
    }
    Ok(choi)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{hermitian_eigenvalues, is_hermitian, matrix_power, max_abs_diff};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn random_density(d: usize, rng: &mut ChaCha8Rng) -> ComplexMatrix {
        let g = ComplexMatrix::from_fn(d, d, |_, _| {
            c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
        });
        let m = &g * g.adjoint();
        let t = trace(&m);
        m / t
    }

    #[test]
    fn shift_is_pauli_x_for_qubits() {
        let x = shift_matrix(2).unwrap();
        assert_eq!(
            x,
            ComplexMatrix::from_row_slice(2, 2, &[ZERO, ONE, ONE, ZERO])
        );
    }

    #[test]
    fn shift_moves_basis_states_up() {
        let x = shift_matrix(3).unwrap();
        for i in 0..3 {
            assert_eq!(x[((i + 1) % 3, i)], ONE);
            assert_eq!(x.column(i).iter().filter(|z| **z != ZERO).count(), 1);
        }
    }

    #[test]
    fn clock_is_pauli_z_for_qubits() {
        let z = clock_matrix(2).unwrap();
        assert!((z[(0, 0)] - ONE).norm() < 1e-15);
        assert!((z[(1, 1)] + ONE).norm() < 1e-15);
        assert_eq!(z[(0, 1)], ZERO);
    }

    #[test]
    fn clock_phases_for_qutrits() {
        let z = clock_matrix(3).unwrap();
        let w = Complex64::from_polar(1.0, 2.0 * PI / 3.0);
        assert!((z[(1, 1)] - w).norm() < 1e-15);
        assert!((z[(2, 2)] - w * w).norm() < 1e-15);
    }

    #[test]
    fn rejects_dimension_one() {
        assert_eq!(shift_matrix(1), Err(Error::InvalidDimension(1)));
        assert_eq!(clock_matrix(0), Err(Error::InvalidDimension(0)));
        assert!(ChannelModel::depolarizing(0.1, 1).is_err());
    }

    #[test]
    fn rejects_bad_probability_and_shapes() {
        assert_eq!(
            ChannelModel::depolarizing(1.5, 2),
            Err(Error::ProbabilityOutOfRange(1.5))
        );
        assert!(ChannelModel::phase_damping(-0.1, 2).is_err());
        let ch = ChannelModel::depolarizing(0.2, 3).unwrap();
        let rho = ComplexMatrix::identity(2, 2);
        assert_eq!(
            apply_channel(&ch, &rho),
            Err(Error::DimensionMismatch {
                expected: 3,
                found: 2
            })
        );
        assert!(apply_channel_twirl(&ch, &rho).is_err());
    }

    #[test]
    fn powers_and_weyl_commutation() {
        for d in 2..=16 {
            let x = shift_matrix(d).unwrap();
            let z = clock_matrix(d).unwrap();
            let id = ComplexMatrix::identity(d, d);
            assert!(max_abs_diff(&matrix_power(&x, d as u32), &id) < 1e-12);
            assert!(max_abs_diff(&matrix_power(&z, d as u32), &id) < 1e-12);
            let zx = &z * &x;
            let xz = (&x * &z) * root_of_unity(d);
            assert!(max_abs_diff(&zx, &xz) < 1e-12, "d = {d}");
        }
    }

    #[test]
    fn full_depolarizing_gives_maximally_mixed() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for d in 2..=5 {
            let rho = random_density(d, &mut rng);
            let ch = ChannelModel::depolarizing(1.0, d).unwrap();
            let out = apply_channel(&ch, &rho).unwrap();
            let target = ComplexMatrix::identity(d, d) / c(d as f64, 0.0);
            assert!(max_abs_diff(&out, &target) < 1e-15);
        }
    }

    #[test]
    fn full_phase_damping_keeps_diagonal() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let rho = random_density(4, &mut rng);
        let ch = ChannelModel::phase_damping(1.0, 4).unwrap();
        let out = apply_channel(&ch, &rho).unwrap();
        let diag = ComplexMatrix::from_diagonal(&rho.diagonal());
        assert!(max_abs_diff(&out, &diag) < 1e-15);
    }

    #[test]
    fn qutrit_depolarizing_arithmetic() {
        let mut rho = ComplexMatrix::zeros(3, 3);
        rho[(0, 0)] = ONE;
        let ch = ChannelModel::depolarizing(0.4, 3).unwrap();
        let out = apply_channel(&ch, &rho).unwrap();
        assert!((out[(0, 0)].re - (0.6 + 0.4 / 3.0)).abs() < 1e-15);
        assert!((out[(1, 1)].re - 0.4 / 3.0).abs() < 1e-15);
        assert!((out[(2, 2)].re - 0.4 / 3.0).abs() < 1e-15);
        assert!((out[(0, 0)].re - 0.733_333_333_333_333_3).abs() < 1e-12);
    }

    #[test]
    fn depolarizing_twirl_fixes_maximally_mixed() {
        for d in 2..=6 {
            let mixed = ComplexMatrix::identity(d, d) / c(d as f64, 0.0);
            for p in [0.0, 0.3, 1.0] {
                let ch = ChannelModel::depolarizing(p, d).unwrap();
                assert!(max_abs_diff(&apply_channel_twirl(&ch, &mixed).unwrap(), &mixed) < 1e-15);
                assert!(max_abs_diff(&apply_channel(&ch, &mixed).unwrap(), &mixed) <= 1e-15);
            }
        }
    }

    #[test]
    fn phase_damping_twirl_on_qubit_coherence() {
        // Z^0 |0><1| Z^0 + Z |0><1| Z^dag = |0><1| - |0><1| = 0
        let mut a = ComplexMatrix::zeros(2, 2);
        a[(0, 1)] = ONE;
        let ch = ChannelModel::phase_damping(0.3, 2).unwrap();
        let out = apply_channel_twirl(&ch, &a).unwrap();
        let expected = &a * c(0.7, 0.0);
        assert!(max_abs_diff(&out, &expected) < 1e-15);
    }

    #[test]
    fn twirl_matches_closed_form() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for kind in ChannelKind::ALL {
            for d in 2..=8 {
                for step in 0..=10 {
                    let ch = ChannelModel::new(kind, step as f64 / 10.0, d).unwrap();
                    for _ in 0..100 {
                        let rho = random_density(d, &mut rng);
                        let twirl = apply_channel_twirl(&ch, &rho).unwrap();
                        let closed = apply_channel(&ch, &rho).unwrap();
                        assert!(
                            max_abs_diff(&twirl, &closed) < 1e-12,
                            "{kind} d={d} p={}",
                            ch.p()
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn trace_and_hermiticity_preserved() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for kind in ChannelKind::ALL {
            for d in 2..=8 {
                for step in 0..=10 {
                    let ch = ChannelModel::new(kind, step as f64 / 10.0, d).unwrap();
                    let rho = random_density(d, &mut rng);
                    let out = apply_channel(&ch, &rho).unwrap();
                    assert!((trace(&out) - trace(&rho)).norm() < 1e-12);
                    assert!(is_hermitian(&out, 1e-12));
                }
            }
        }
    }

    #[test]
    fn choi_of_identity_is_projector_on_phi() {
        for kind in ChannelKind::ALL {
            let ch = ChannelModel::new(kind, 0.0, 3).unwrap();
            let choi = choi_matrix(&ch).unwrap();
            for r in 0..9 {
                for col in 0..9 {
                    let on_phi = r % 4 == 0 && col % 4 == 0;
                    let want = if on_phi { ONE } else { ZERO };
                    assert_eq!(choi[(r, col)], want);
                }
            }
        }
    }

    #[test]
    fn choi_of_full_qubit_depolarizer() {
        let ch = ChannelModel::depolarizing(1.0, 2).unwrap();
        let choi = choi_matrix(&ch).unwrap();
        let target = ComplexMatrix::identity(4, 4) * c(0.5, 0.0);
        assert!(max_abs_diff(&choi, &target) < 1e-15);
        for ev in hermitian_eigenvalues(&choi) {
            assert!((ev - 0.5).abs() < 1e-14);
        }
    }

    #[test]
    fn choi_positive_semidefinite() {
        for kind in ChannelKind::ALL {
            for d in 2..=8 {
                for step in 0..=10 {
                    let ch = ChannelModel::new(kind, step as f64 / 10.0, d).unwrap();
                    let choi = choi_matrix(&ch).unwrap();
                    assert!(is_hermitian(&choi, 1e-12));
                    let min = hermitian_eigenvalues(&choi)[0];
                    assert!(min >= -1e-12, "{kind} d={d} p={} min={min}", ch.p());
                }
            }
        }
        let ch = ChannelModel::depolarizing(0.7, 3).unwrap();
        assert!(hermitian_eigenvalues(&choi_matrix(&ch).unwrap())[0] >= -1e-12);
    }

    #[test]
    fn choi_dimension_cap() {
        let ch = ChannelModel::depolarizing(0.1, 17).unwrap();
        assert!(matches!(choi_matrix(&ch), Err(Error::Capacity { .. })));
    }

    #[test]
    fn channel_kind_parses() {
        assert_eq!(
            "phase-damping".parse::<ChannelKind>().unwrap(),
            ChannelKind::PhaseDamping
        );
        assert_eq!(
            "Depolarizing".parse::<ChannelKind>().unwrap(),
            ChannelKind::Depolarizing
        );
        assert!("amplitude-damping".parse::<ChannelKind>().is_err());
    }
}
