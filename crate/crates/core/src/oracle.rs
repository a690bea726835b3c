//! Brute-force reference: full density matrix, site-by-site channels,
//! explicit partial transpose, dense Hermitian eigendecomposition.
//!
//! Everything here is quadratic in `d^N` memory and cubic in time, and is
//! only meant for small instances that certify the closed forms in
//! [`crate::analytic`].

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::ghz::{Bipartition, GhzSpec};
use crate::linalg::{hermitian_eigenvalues, is_hermitian, max_abs, trace, ComplexMatrix};
use crate::qudit::{ChannelKind, ChannelModel};

/// Relative scale of the negative-eigenvalue cutoff, see [`negativity_threshold`].
pub const NEGATIVITY_REL_TOL: f64 = 1e-12;
/// Oracle negativity at or below this counts as zero when bisecting.
pub const ZERO_NEGATIVITY: f64 = 1e-11;
/// Bisection resolution of [`oracle_critical_p`].
pub const ORACLE_BISECTION_TOL: f64 = 1e-8;

/// Dense `d^N × d^N` state of `N` qudits.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    d: usize,
    qudits: usize,
    matrix: ComplexMatrix,
}

impl DensityMatrix {
    pub fn new(d: usize, qudits: usize, matrix: ComplexMatrix) -> Result<Self> {
        let dim = d.checked_pow(qudits as u32).ok_or(Error::Capacity {
            dim: usize::MAX,
            cap: usize::MAX,
        })?;
        if !matrix.is_square() {
            return Err(Error::NotSquare {
                rows: matrix.nrows(),
                cols: matrix.ncols(),
            });
        }
        if matrix.nrows() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: matrix.nrows(),
            });
        }
        Ok(DensityMatrix { d, qudits, matrix })
    }

    /// `|Psi><Psi|` for the GHZ state.
    pub fn pure(spec: &GhzSpec, cap: usize) -> Result<Self> {
        Ok(DensityMatrix {
            d: spec.d(),
            qudits: spec.qudits(),
            matrix: spec.density_matrix(cap)?,
        })
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn qudits(&self) -> usize {
        self.qudits
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.matrix
    }

    /// Unit trace, Hermitian, and no eigenvalue below `-1e-10`.
    pub fn validate(&self) -> Result<()> {
        let tr = trace(&self.matrix);
        if (tr - Complex64::new(1.0, 0.0)).norm() > 1e-10 {
            return Err(Error::NotDensityMatrix(format!("trace {tr}")));
        }
        if !is_hermitian(&self.matrix, 1e-12) {
            return Err(Error::NotDensityMatrix("not Hermitian".into()));
        }
        let min = hermitian_eigenvalues(&self.matrix)[0];
        if min < -1e-10 {
            return Err(Error::NotDensityMatrix(format!("eigenvalue {min}")));
        }
        Ok(())
    }

    fn stride(&self, site: usize) -> usize {
        self.d.pow((self.qudits - 1 - site) as u32)
    }

    /// Apply a single-qudit channel to one site, in place.
    pub fn apply_site(&mut self, channel: &ChannelModel, site: usize) -> Result<()> {
        if channel.d() != self.d {
            return Err(Error::DimensionMismatch {
                expected: self.d,
                found: channel.d(),
            });
        }
        if site >= self.qudits {
            return Err(Error::InvalidSubset {
                sites: vec![site],
                qudits: self.qudits,
            });
        }
        let d = self.d;
        let dim = self.dim();
        let stride = self.stride(site);
        let p = channel.p();
        let digit = |idx: usize| (idx / stride) % d;
        match channel.kind() {
            ChannelKind::PhaseDamping => {
                let damp = 1.0 - p;
                for c in 0..dim {
                    let dc = digit(c);
                    for r in 0..dim {
                        if digit(r) != dc {
                            self.matrix[(r, c)] *= damp;
                        }
                    }
                }
            }
            ChannelKind::Depolarizing => {
                // (1-p) rho + (p/d) 1_site (x) tr_site(rho)
                let old = std::mem::replace(&mut self.matrix, ComplexMatrix::zeros(dim, dim));
                let mix = p / d as f64;
                for c in 0..dim {
                    let dc = digit(c);
                    let c0 = c - dc * stride;
                    for r in 0..dim {
                        let dr = digit(r);
                        let mut v = old[(r, c)] * (1.0 - p);
                        if dr == dc {
                            let r0 = r - dr * stride;
                            let traced: Complex64 = (0..d)
                                .map(|k| old[(r0 + k * stride, c0 + k * stride)])
                                .sum();
                            v += traced * mix;
                        }
                        self.matrix[(r, c)] = v;
                    }
                }
            }
        }
        Ok(())
    }
}

/// Partially transposed state together with the transposed sites.
#[derive(Debug, Clone, PartialEq)]
pub struct PtMatrix {
    d: usize,
    qudits: usize,
    sites: Vec<usize>,
    matrix: ComplexMatrix,
}

impl PtMatrix {
    pub fn d(&self) -> usize {
        self.d
    }

    pub fn qudits(&self) -> usize {
        self.qudits
    }

    pub fn sites(&self) -> &[usize] {
        &self.sites
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    /// View the transposed matrix as a state again, e.g. to transpose twice.
    pub fn into_density(self) -> DensityMatrix {
        DensityMatrix {
            d: self.d,
            qudits: self.qudits,
            matrix: self.matrix,
        }
    }

    /// Spectrum, ascending.
    pub fn eigenvalues(&self) -> Vec<f64> {
        hermitian_eigenvalues(&self.matrix)
    }
}

/// Evolve the GHZ state with the same channel acting on every qudit.
pub fn evolve(spec: &GhzSpec, channel: &ChannelModel, cap: usize) -> Result<DensityMatrix> {
    let order: Vec<usize> = (0..spec.qudits()).collect();
    evolve_in_order(spec, channel, &order, cap)
}

/// As [`evolve`], visiting the sites in the given order.
pub fn evolve_in_order(
    spec: &GhzSpec,
    channel: &ChannelModel,
    order: &[usize],
    cap: usize,
) -> Result<DensityMatrix> {
    if channel.d() != spec.d() {
        return Err(Error::DimensionMismatch {
            expected: spec.d(),
            found: channel.d(),
        });
    }
    let mut rho = DensityMatrix::pure(spec, cap)?;
    if channel.p() == 0.0 {
        return Ok(rho);
    }
    for &site in order {
        rho.apply_site(channel, site)?;
    }
    Ok(rho)
}

/// Transpose the tensor factors of the given sites.
///
/// Entry `((a, b), (a', b'))`, with `b` the digits on the transposed sites,
/// moves to `((a, b'), (a', b))`. Applying it twice restores the input
/// exactly.
pub fn partial_transpose(rho: &DensityMatrix, part: &Bipartition) -> Result<PtMatrix> {
    let sites = part.sites(rho.qudits);
    if sites.iter().any(|&s| s >= rho.qudits) || sites.len() != part.n() {
        return Err(Error::InvalidSubset {
            sites,
            qudits: rho.qudits,
        });
    }
    let d = rho.d;
    let dim = rho.dim();
    let strides: Vec<usize> = sites.iter().map(|&s| rho.stride(s)).collect();
    let sub: Vec<usize> = (0..dim)
        .map(|idx| strides.iter().map(|&st| ((idx / st) % d) * st).sum())
        .collect();
    let mut out = ComplexMatrix::zeros(dim, dim);
    for c in 0..dim {
        for r in 0..dim {
            let nr = r - sub[r] + sub[c];
            let nc = c - sub[c] + sub[r];
            out[(nr, nc)] = rho.matrix[(r, c)];
        }
    }
    Ok(PtMatrix {
        d,
        qudits: rho.qudits,
        sites,
        matrix: out,
    })
}

/// Cutoff `1e-12 * dim * max|entry|` below which negative eigenvalues are
/// treated as solver noise.
pub fn negativity_threshold(pt: &PtMatrix) -> f64 {
    NEGATIVITY_REL_TOL * pt.dim() as f64 * max_abs(&pt.matrix)
}

/// Sum of `|lambda|` over eigenvalues below `-tau`.
pub fn negativity_exact(pt: &PtMatrix) -> f64 {
    let tau = negativity_threshold(pt);
    pt.eigenvalues()
        .into_iter()
        .take_while(|&ev| ev < -tau)
        .map(|ev| -ev)
        .sum()
}

/// Evolve, transpose, diagonalize.
pub fn oracle_negativity(
    spec: &GhzSpec,
    channel: &ChannelModel,
    part: &Bipartition,
    cap: usize,
) -> Result<f64> {
    let rho = evolve(spec, channel, cap)?;
    Ok(negativity_exact(&partial_transpose(&rho, part)?))
}

/// Smallest eigenvalue of the transposed state, without any cutoff.
pub fn oracle_min_eigenvalue(
    spec: &GhzSpec,
    channel: &ChannelModel,
    part: &Bipartition,
    cap: usize,
) -> Result<f64> {
    let rho = evolve(spec, channel, cap)?;
    Ok(partial_transpose(&rho, part)?.eigenvalues()[0])
}

/// Strength at which the oracle negativity of the `(N-n)|n` split first
/// reaches zero, by bisection on `[0, 1]`.
///
/// Phase damping reports 1. A state with no negativity at `p = 0` reports 0.
pub fn oracle_critical_p(spec: &GhzSpec, kind: ChannelKind, n: usize, cap: usize) -> Result<f64> {
    let part = Bipartition::new(n, spec.qudits())?;
    spec.check_cap(cap)?;
    if kind == ChannelKind::PhaseDamping {
        return Ok(1.0);
    }
    let neg = |p: f64| -> Result<f64> {
        oracle_negativity(spec, &ChannelModel::new(kind, p, spec.d())?, &part, cap)
    };
    if neg(0.0)? <= ZERO_NEGATIVITY {
        return Ok(0.0);
    }
    let (mut lo, mut hi) = (0.0, 1.0);
    while hi - lo > ORACLE_BISECTION_TOL {
        let mid = 0.5 * (lo + hi);
        if neg(mid)? <= ZERO_NEGATIVITY {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}
