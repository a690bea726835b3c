//! The generalized GHZ state `sum_i a_i |i>^{(x)N}` and bipartitions of its
//! qudits.
//!
//! Site 0 is the most significant digit when a multi-qudit basis state is
//! flattened to an index in `0..d^N`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::ComplexMatrix;

/// Default limit on `d^N` for anything that builds a dense matrix.
pub const DEFAULT_DENSE_CAP: usize = 4096;

/// Amplitudes below this magnitude are stored as exact zeros.
pub const ZERO_AMPLITUDE: f64 = 1e-15;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GhzSpec {
    d: usize,
    qudits: usize,
    alphas: Vec<Complex64>,
    rescale: f64,
    #[serde(skip)]
    weight_total: f64,
}

/// A set of level pairs sharing the same weight pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PairClass {
    pub i: usize,
    pub j: usize,
    pub count: usize,
}

impl GhzSpec {
    /// Validate and normalize. `rescale` records the factor that was applied.
    pub fn new(d: usize, qudits: usize, alphas: &[Complex64]) -> Result<Self> {
        if d < 2 {
            return Err(Error::InvalidDimension(d));
        }
        if qudits < 2 {
            return Err(Error::InvalidQuditCount(qudits));
        }
        if alphas.len() != d {
            return Err(Error::AmplitudeCount {
                expected: d,
                found: alphas.len(),
            });
        }
        if alphas
            .iter()
            .any(|a| !a.re.is_finite() || !a.im.is_finite())
        {
            return Err(Error::NonFiniteAmplitude);
        }
        let norm = alphas.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        if norm == 0.0 {
            return Err(Error::ZeroAmplitudes);
        }
        let rescale = 1.0 / norm;
        let alphas = alphas
            .iter()
            .map(|a| {
                let scaled = a * rescale;
                if scaled.norm() < ZERO_AMPLITUDE {
                    Complex64::new(0.0, 0.0)
                } else {
                    scaled
                }
            })
            .collect::<Vec<_>>();
        let weight_total = alphas.iter().map(|a| a.norm_sqr()).sum();
        Ok(GhzSpec {
            d,
            qudits,
            alphas,
            rescale,
            weight_total,
        })
    }

    /// `a_i = 1/sqrt(d)` for every level.
    pub fn equal(d: usize, qudits: usize) -> Result<Self> {
        Self::new(d, qudits, &vec![Complex64::new(1.0, 0.0); d.max(1)][..d])
    }

    /// Real non-negative amplitudes.
    pub fn from_magnitudes(qudits: usize, magnitudes: &[f64]) -> Result<Self> {
        let alphas: Vec<Complex64> = magnitudes.iter().map(|&m| Complex64::new(m, 0.0)).collect();
        Self::new(magnitudes.len(), qudits, &alphas)
    }

    pub fn d(&self) -> usize {
        self.d
    }

    /// Number of qudits `N`.
    pub fn qudits(&self) -> usize {
        self.qudits
    }

    pub fn alphas(&self) -> &[Complex64] {
        &self.alphas
    }

    pub fn rescale(&self) -> f64 {
        self.rescale
    }

    /// `|a_i|^2`.
    pub fn weight(&self, i: usize) -> f64 {
        self.alphas[i].norm_sqr()
    }

    pub fn is_zero(&self, i: usize) -> bool {
        self.alphas[i] == Complex64::new(0.0, 0.0)
    }

    pub fn nonzero_levels(&self) -> usize {
        (0..self.d).filter(|&i| !self.is_zero(i)).count()
    }

    /// At most one nonzero amplitude: the state is a product state and has
    /// no entanglement to lose.
    pub fn is_product(&self) -> bool {
        self.nonzero_levels() <= 1
    }

    /// Level pairs `i < j` with `a_i a_j != 0`, in lexicographic order.
    pub fn entangled_pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.all_pairs()
            .filter(|&(i, j)| !self.is_zero(i) && !self.is_zero(j))
    }

    /// Entangled pairs grouped by their (unordered) weight pair
    /// `{|a_i|^2, |a_j|^2}`, which is all the analytic formulas depend on.
    ///
    /// Each class is represented by its lexicographically first pair and
    /// carries the number of pairs in it. Classes come in lexicographic
    /// order of their representatives. Costs `O(d + k^2)` for `k` distinct
    /// weights rather than `O(d^2)`.
    pub fn pair_classes(&self) -> Vec<PairClass> {
        // distinct nonzero weights with their first two levels and multiplicity
        let mut groups: Vec<(u64, usize, Option<usize>, usize)> = Vec::new();
        for i in 0..self.d {
            if self.is_zero(i) {
                continue;
            }
            let key = self.weight(i).to_bits();
            match groups.iter_mut().find(|g| g.0 == key) {
                Some(g) => {
                    if g.2.is_none() {
                        g.2 = Some(i);
                    }
                    g.3 += 1;
                }
                None => groups.push((key, i, None, 1)),
            }
        }
        let mut classes = Vec::new();
        for (a, ga) in groups.iter().enumerate() {
            if let Some(second) = ga.2 {
                classes.push(PairClass {
                    i: ga.1,
                    j: second,
                    count: ga.3 * (ga.3 - 1) / 2,
                });
            }
            for gb in &groups[a + 1..] {
                classes.push(PairClass {
                    i: ga.1,
                    j: gb.1,
                    count: ga.3 * gb.3,
                });
            }
        }
        classes.sort_by_key(|c| (c.i, c.j));
        classes
    }

    /// `sum_l |a_l|^2` excluding levels `i` and `j`.
    pub fn weight_outside(&self, i: usize, j: usize) -> f64 {
        (self.weight_total - self.weight(i) - self.weight(j)).max(0.0)
    }

    /// All level pairs `i < j`, in lexicographic order.
    pub fn all_pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        let d = self.d;
        (0..d).flat_map(move |i| (i + 1..d).map(move |j| (i, j)))
    }

    /// `d^N`, or `None` on overflow.
    pub fn hilbert_dim(&self) -> Option<usize> {
        self.d.checked_pow(self.qudits as u32)
    }

    pub fn check_cap(&self, cap: usize) -> Result<usize> {
        match self.hilbert_dim() {
            Some(dim) if dim <= cap => Ok(dim),
            Some(dim) => Err(Error::Capacity { dim, cap }),
            None => Err(Error::Capacity {
                dim: usize::MAX,
                cap,
            }),
        }
    }

    /// Index of `|i i ... i>`.
    pub fn repeated_index(&self, level: usize) -> usize {
        (0..self.qudits).fold(0, |acc, _| acc * self.d + level)
    }

    /// Same amplitudes with the phases `exp(i theta_k)` applied.
    pub fn with_phases(&self, thetas: &[f64]) -> Result<Self> {
        let alphas: Vec<Complex64> = self
            .alphas
            .iter()
            .zip(thetas.iter().chain(std::iter::repeat(&0.0)))
            .map(|(a, &t)| a * Complex64::from_polar(1.0, t))
            .collect();
        Self::new(self.d, self.qudits, &alphas)
    }

    /// Same amplitudes on a different number of qudits.
    pub fn with_qudits(&self, qudits: usize) -> Result<Self> {
        Self::new(self.d, qudits, &self.alphas)
    }

    /// Dense `|Psi><Psi|`.
    pub fn density_matrix(&self, cap: usize) -> Result<ComplexMatrix> {
        let dim = self.check_cap(cap)?;
        let mut rho = ComplexMatrix::zeros(dim, dim);
        for i in 0..self.d {
            let r = self.repeated_index(i);
            for j in 0..self.d {
                let c = self.repeated_index(j);
                rho[(r, c)] = self.alphas[i] * self.alphas[j].conj();
            }
        }
        Ok(rho)
    }
}

/// An `(N-n)|n` split, optionally naming which `n` sites form the
/// transposed side. Without explicit sites the last `n` sites are used.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Bipartition {
    n: usize,
    sites: Option<Vec<usize>>,
}

impl Bipartition {
    pub fn new(n: usize, qudits: usize) -> Result<Self> {
        if n == 0 || n >= qudits {
            return Err(Error::InvalidPartition { n, qudits });
        }
        Ok(Bipartition { n, sites: None })
    }

    /// Explicit subset. Sites are sorted; duplicates or out-of-range sites
    /// are rejected. The full site set is accepted and means a global
    /// transpose.
    pub fn with_sites(sites: &[usize], qudits: usize) -> Result<Self> {
        let mut sorted = sites.to_vec();
        sorted.sort_unstable();
        sorted.dedup();
        let bad =
            sorted.len() != sites.len() || sorted.is_empty() || sorted.iter().any(|&s| s >= qudits);
        if bad {
            return Err(Error::InvalidSubset {
                sites: sites.to_vec(),
                qudits,
            });
        }
        Ok(Bipartition {
            n: sorted.len(),
            sites: Some(sorted),
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Transposed sites, ascending.
    pub fn sites(&self, qudits: usize) -> Vec<usize> {
        match &self.sites {
            Some(s) => s.clone(),
            None => (qudits - self.n..qudits).collect(),
        }
    }

    /// Sites not in the transposed side.
    pub fn complement(&self, qudits: usize) -> Result<Self> {
        let mine = self.sites(qudits);
        let rest: Vec<usize> = (0..qudits).filter(|s| !mine.contains(s)).collect();
        Self::with_sites(&rest, qudits)
    }
}
