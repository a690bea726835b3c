//! Closed-form negativity of the noisy GHZ state.
//!
//! After local noise and a partial transpose over `n` of the `N` qudits, the
//! only off-diagonal entries left couple `|i..i j..j>` with `|j..j i..i>`
//! (the transposed side holds the `n` trailing digits). Each level pair
//! `i < j` therefore contributes one 2×2 block
//!
//! ```text
//! [ lambda_n          a_i a_j* c ]
//! [ a_i* a_j c        lambda_{N-n} ]      c = (1-p)^N
//! ```
//!
//! and every other eigenvalue is a non-negative diagonal entry. The
//! negativity is the sum over pairs of the negative part of the smaller
//! block eigenvalue.
//!
//! Critical strengths are found per pair, then maximized over pairs whose
//! amplitudes are both nonzero.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ghz::{GhzSpec, PairClass};
use crate::qudit::{ChannelKind, ChannelModel};
use crate::roots::{smallest_root, BISECTION_TOL, SCAN_STEP};

/// Diagonal weights of one depolarized qudit initially in `|l><l|`:
/// `(stay on l, land on any given other level)`.
fn depolarized_weights(d: usize, p: f64) -> (f64, f64) {
    let df = d as f64;
    (1.0 - (df - 1.0) * p / df, p / df)
}

fn check_pair(spec: &GhzSpec, i: usize, j: usize) -> Result<()> {
    if i >= j || j >= spec.d() {
        return Err(Error::InvalidPair { i, j, d: spec.d() });
    }
    Ok(())
}

fn check_partition(spec: &GhzSpec, n: usize) -> Result<()> {
    if n == 0 || n >= spec.qudits() {
        return Err(Error::InvalidPartition {
            n,
            qudits: spec.qudits(),
        });
    }
    Ok(())
}

fn check_p(p: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::ProbabilityOutOfRange(p));
    }
    Ok(())
}

fn check_channel(spec: &GhzSpec, channel: &ChannelModel) -> Result<()> {
    if channel.d() != spec.d() {
        return Err(Error::DimensionMismatch {
            expected: spec.d(),
            found: channel.d(),
        });
    }
    Ok(())
}

fn powi(x: f64, k: usize) -> f64 {
    x.powi(k as i32)
}

/// Population of the depolarized state on `|i..i j..j>` (N-n copies of `i`,
/// then n copies of `j`) coming from the levels other than `i` and `j`:
/// every site has been flipped, so each contributes `(p/d)^N |a_l|^2`.
fn background(spec: &GhzSpec, p: f64, i: usize, j: usize) -> f64 {
    let (_, flip) = depolarized_weights(spec.d(), p);
    spec.weight_outside(i, j) * powi(flip, spec.qudits())
}

fn lambda_unchecked(spec: &GhzSpec, p: f64, i: usize, j: usize, n: usize) -> f64 {
    let big_n = spec.qudits();
    let (keep, flip) = depolarized_weights(spec.d(), p);
    spec.weight(i) * powi(flip, n) * powi(keep, big_n - n)
        + spec.weight(j) * powi(flip, big_n - n) * powi(keep, n)
        + background(spec, p, i, j)
}

/// Diagonal entry of the depolarized state at `|i..i j..j>` with `j` on the
/// `n` transposed sites.
///
/// The first two terms come from the `|i>^N` and `|j>^N` components. The
/// third, `(p/d)^N sum_{l != i,j} |a_l|^2`, comes from the remaining levels
/// and vanishes for qubits or when only `a_i, a_j` are nonzero.
pub fn lambda_n(spec: &GhzSpec, p: f64, i: usize, j: usize, n: usize) -> Result<f64> {
    check_p(p)?;
    check_pair(spec, i, j)?;
    check_partition(spec, n)?;
    Ok(lambda_unchecked(spec, p, i, j, n))
}

/// Spectrum data for one level pair and bipartition size.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PairBlock {
    pub i: usize,
    pub j: usize,
    pub n: usize,
    pub p: f64,
    pub kind: ChannelKind,
    /// Diagonal at `|i..i j..j>`.
    pub lambda_n: f64,
    /// Diagonal at `|j..j i..i>`.
    pub lambda_complement: f64,
    /// Part of both diagonals owed to levels other than `i`, `j`.
    pub background: f64,
    /// `|a_i a_j| (1-p)^N`, the modulus of the off-diagonal entry.
    pub coherence: f64,
    pub xi: f64,
    pub eta: f64,
    /// `xi^2 - eta`, evaluated in the manifestly non-negative form.
    pub radicand: f64,
    /// Smaller block eigenvalue: `mu` for depolarizing, `nu` for phase damping.
    pub eigenvalue: f64,
}

impl PairBlock {
    pub fn mu(&self) -> Option<f64> {
        (self.kind == ChannelKind::Depolarizing).then_some(self.eigenvalue)
    }

    pub fn nu(&self) -> Option<f64> {
        (self.kind == ChannelKind::PhaseDamping).then_some(self.eigenvalue)
    }

    /// `max(-eigenvalue, 0)`.
    pub fn contribution(&self) -> f64 {
        (-self.eigenvalue).max(0.0)
    }
}

fn block_unchecked(
    spec: &GhzSpec,
    kind: ChannelKind,
    p: f64,
    i: usize,
    j: usize,
    n: usize,
) -> PairBlock {
    let big_n = spec.qudits();
    let amp = (spec.weight(i) * spec.weight(j)).sqrt();
    let decay = powi(1.0 - p, big_n);
    let coherence = amp * decay;
    match kind {
        ChannelKind::Depolarizing => {
            let lambda_n = lambda_unchecked(spec, p, i, j, n);
            let lambda_complement = lambda_unchecked(spec, p, i, j, big_n - n);
            let xi = 0.5 * (lambda_n + lambda_complement);
            let eta = lambda_n * lambda_complement - coherence * coherence;
            let half_gap = 0.5 * (lambda_n - lambda_complement);
            let radicand = half_gap * half_gap + coherence * coherence;
            debug_assert!(radicand >= 0.0);
            PairBlock {
                i,
                j,
                n,
                p,
                kind,
                lambda_n,
                lambda_complement,
                background: background(spec, p, i, j),
                coherence,
                xi,
                eta,
                radicand,
                eigenvalue: xi - radicand.sqrt(),
            }
        }
        ChannelKind::PhaseDamping => PairBlock {
            i,
            j,
            n,
            p,
            kind,
            lambda_n: 0.0,
            lambda_complement: 0.0,
            background: 0.0,
            coherence,
            xi: 0.0,
            eta: -coherence * coherence,
            radicand: coherence * coherence,
            eigenvalue: -coherence,
        },
    }
}

/// The 2×2 block for pair `(i, j)` under `channel`, transposing `n` sites.
pub fn pair_block(
    spec: &GhzSpec,
    channel: &ChannelModel,
    i: usize,
    j: usize,
    n: usize,
) -> Result<PairBlock> {
    check_channel(spec, channel)?;
    check_pair(spec, i, j)?;
    check_partition(spec, n)?;
    Ok(block_unchecked(spec, channel.kind(), channel.p(), i, j, n))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PairContribution {
    pub i: usize,
    pub j: usize,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PartitionNegativity {
    pub n: usize,
    pub value: f64,
    pub contributions: Vec<PairContribution>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NegativityReport {
    pub d: usize,
    pub qudits: usize,
    pub kind: ChannelKind,
    pub p: f64,
    pub partitions: Vec<PartitionNegativity>,
}

impl NegativityReport {
    /// Negativity for bipartition size `n`, if it was computed.
    pub fn value(&self, n: usize) -> Option<f64> {
        self.partitions.iter().find(|e| e.n == n).map(|e| e.value)
    }
}

fn partition_negativity(
    spec: &GhzSpec,
    kind: ChannelKind,
    p: f64,
    n: usize,
) -> PartitionNegativity {
    let contributions: Vec<PairContribution> = spec
        .all_pairs()
        .map(|(i, j)| PairContribution {
            i,
            j,
            value: block_unchecked(spec, kind, p, i, j, n).contribution(),
        })
        .collect();
    let value = contributions.iter().map(|c| c.value).sum();
    PartitionNegativity {
        n,
        value,
        contributions,
    }
}

/// Negativity of the `(N-n)|n` split.
pub fn negativity(spec: &GhzSpec, channel: &ChannelModel, n: usize) -> Result<NegativityReport> {
    check_channel(spec, channel)?;
    check_partition(spec, n)?;
    Ok(NegativityReport {
        d: spec.d(),
        qudits: spec.qudits(),
        kind: channel.kind(),
        p: channel.p(),
        partitions: vec![partition_negativity(spec, channel.kind(), channel.p(), n)],
    })
}

/// Negativity for every `n` in `1..N`.
pub fn negativity_profile(spec: &GhzSpec, channel: &ChannelModel) -> Result<NegativityReport> {
    check_channel(spec, channel)?;
    Ok(NegativityReport {
        d: spec.d(),
        qudits: spec.qudits(),
        kind: channel.kind(),
        p: channel.p(),
        partitions: (1..spec.qudits())
            .map(|n| partition_negativity(spec, channel.kind(), channel.p(), n))
            .collect(),
    })
}

/// Scalar shortcut for `negativity(..).value(n)`.
pub fn negativity_value(spec: &GhzSpec, channel: &ChannelModel, n: usize) -> Result<f64> {
    check_channel(spec, channel)?;
    check_partition(spec, n)?;
    Ok(partition_negativity(spec, channel.kind(), channel.p(), n).value)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CriticalKind {
    /// Strength at which the most balanced split loses all negativity.
    VanishBalanced,
    /// Strength at which the `(N-n)|n` split loses all negativity.
    VanishPartition,
    /// Strength at which the block eigenvalue has shrunk to `epsilon` of its
    /// noiseless value.
    EpsilonThreshold,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    ClosedForm,
    Bisection,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::ClosedForm => "closed-form",
            Method::Bisection => "bisection",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "warning", rename_all = "kebab-case")]
pub enum Warning {
    /// The scan saw more than one sign change; the smallest root is reported.
    MultipleRoots {
        i: usize,
        j: usize,
        sign_changes: usize,
    },
    /// The closed form treats each pair as a two-level system and ignores
    /// the population of the other `levels` nonzero levels.
    BackgroundOmitted { levels: usize },
    /// No sign change was found on `[0, 1]` for this pair.
    NoRoot { i: usize, j: usize },
}

impl fmt::Display for Warning {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Warning::MultipleRoots { i, j, sign_changes } => {
                write!(
                    f,
                    "pair ({i},{j}): {sign_changes} sign changes, smallest root reported"
                )
            }
            Warning::BackgroundOmitted { levels } => {
                let plural = if *levels == 1 { "" } else { "s" };
                write!(
                    f,
                    "closed form ignores background from {levels} other nonzero level{plural}"
                )
            }
            Warning::NoRoot { i, j } => write!(f, "pair ({i},{j}): no root in [0,1]"),
        }
    }
}

/// Critical strength of one pair. Pairs with the same weights share a value
/// and are reported once, represented by the first of them, with `count`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PairCritical {
    pub i: usize,
    pub j: usize,
    pub p: f64,
    pub count: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CriticalProbability {
    pub kind: CriticalKind,
    pub channel: ChannelKind,
    /// Bipartition size the value refers to.
    pub n: usize,
    pub epsilon: Option<f64>,
    /// Max over pairs; `None` for a product state.
    pub value: Option<f64>,
    pub pairs: Vec<PairCritical>,
    pub method: Method,
    pub warnings: Vec<Warning>,
}

impl CriticalProbability {
    pub fn multiplicity_warning(&self) -> bool {
        self.warnings
            .iter()
            .any(|w| matches!(w, Warning::MultipleRoots { .. }))
    }

    /// Warnings joined with `"; "`, empty when there are none.
    pub fn warning_text(&self) -> String {
        self.warnings
            .iter()
            .map(|w| w.to_string())
            .collect::<Vec<_>>()
            .join("; ")
    }

    fn assemble(
        kind: CriticalKind,
        channel: ChannelKind,
        n: usize,
        epsilon: Option<f64>,
        pairs: Vec<PairCritical>,
        method: Method,
        warnings: Vec<Warning>,
    ) -> Self {
        let value = pairs.iter().map(|c| c.p).reduce(f64::max);
        CriticalProbability {
            kind,
            channel,
            n,
            epsilon,
            value,
            pairs,
            method,
            warnings,
        }
    }
}

/// Per-pair vanishing point of the balanced split, `n = N/2`, from the
/// explicit two-level solution of `mu = 0`:
///
/// ```text
///            2 g d
/// p = -----------------------------        g = |a_i a_j|^(2/N)
///     2 g d + s (s + sqrt(4 g + s^2))      s = (|a_i|^2 + |a_j|^2)^(1/N)
/// ```
///
/// Exact when the state has at most two nonzero amplitudes. With more, the
/// other levels raise the block diagonal by `(p/d)^N sum |a_l|^2` and the true
/// vanishing point is slightly smaller; a [`Warning::BackgroundOmitted`] is
/// attached and [`critical_p_partition`] gives the exact value.
pub fn critical_p_balanced_closed_form(spec: &GhzSpec) -> Result<CriticalProbability> {
    let big_n = spec.qudits();
    if !big_n.is_multiple_of(2) {
        return Err(Error::OddQuditCount(big_n));
    }
    let d = spec.d() as f64;
    let inv_n = 1.0 / big_n as f64;
    let pairs = spec
        .pair_classes()
        .into_iter()
        .map(|PairClass { i, j, count }| {
            let (wi, wj) = (spec.weight(i), spec.weight(j));
            let g = (wi * wj).powf(inv_n);
            let s = (wi + wj).powf(inv_n);
            let p = 2.0 * g * d / (2.0 * g * d + s * (s + (4.0 * g + s * s).sqrt()));
            PairCritical { i, j, p, count }
        })
        .collect();
    let mut warnings = Vec::new();
    if spec.nonzero_levels() > 2 {
        warnings.push(Warning::BackgroundOmitted {
            levels: spec.nonzero_levels() - 2,
        });
    }
    Ok(CriticalProbability::assemble(
        CriticalKind::VanishBalanced,
        ChannelKind::Depolarizing,
        big_n / 2,
        None,
        pairs,
        Method::ClosedForm,
        warnings,
    ))
}

fn scan_pairs<F>(spec: &GhzSpec, f: F) -> (Vec<PairCritical>, Vec<Warning>)
where
    F: Fn(usize, usize, f64) -> f64,
{
    let mut pairs = Vec::new();
    let mut warnings = Vec::new();
    for PairClass { i, j, count } in spec.pair_classes() {
        let scan = smallest_root(|p| f(i, j, p), 0.0, 1.0, SCAN_STEP, BISECTION_TOL);
        if scan.sign_changes > 1 {
            warnings.push(Warning::MultipleRoots {
                i,
                j,
                sign_changes: scan.sign_changes,
            });
        }
        match scan.root {
            Some(p) => pairs.push(PairCritical { i, j, p, count }),
            None => warnings.push(Warning::NoRoot { i, j }),
        }
    }
    (pairs, warnings)
}

/// Smallest strength at which the `(N-n)|n` negativity vanishes.
///
/// Depolarizing: per pair, the smallest root of `eta_n(p) = 0` on `[0, 1]`
/// (`mu` and `eta` share their sign since `xi >= 0`). Phase damping never
/// reaches zero before `p = 1`.
pub fn critical_p_partition(
    spec: &GhzSpec,
    kind: ChannelKind,
    n: usize,
) -> Result<CriticalProbability> {
    check_partition(spec, n)?;
    let critical = match kind {
        ChannelKind::Depolarizing => {
            let (pairs, warnings) =
                scan_pairs(spec, |i, j, p| block_unchecked(spec, kind, p, i, j, n).eta);
            CriticalProbability::assemble(
                CriticalKind::VanishPartition,
                kind,
                n,
                None,
                pairs,
                Method::Bisection,
                warnings,
            )
        }
        ChannelKind::PhaseDamping => {
            let pairs = spec
                .pair_classes()
                .into_iter()
                .map(|c| PairCritical {
                    i: c.i,
                    j: c.j,
                    p: 1.0,
                    count: c.count,
                })
                .collect();
            CriticalProbability::assemble(
                CriticalKind::VanishPartition,
                kind,
                n,
                None,
                pairs,
                Method::ClosedForm,
                Vec::new(),
            )
        }
    };
    Ok(critical)
}

/// Strength at which the pair eigenvalue has decayed to `epsilon` times its
/// noiseless value, `mu_n(p) = epsilon * mu_n(0)`, maximized over pairs.
///
/// For `n = N/2` this is the balanced threshold equation including the
/// background from other levels. Phase damping has the closed form
/// `1 - epsilon^(1/N)` for every pair and every `n`.
pub fn epsilon_threshold(
    spec: &GhzSpec,
    kind: ChannelKind,
    n: usize,
    epsilon: f64,
) -> Result<CriticalProbability> {
    check_partition(spec, n)?;
    if !(epsilon > 0.0 && epsilon < 1.0) {
        return Err(Error::EpsilonOutOfRange(epsilon));
    }
    let critical = match kind {
        ChannelKind::Depolarizing => {
            let (pairs, warnings) = scan_pairs(spec, |i, j, p| {
                let start = block_unchecked(spec, kind, 0.0, i, j, n).eigenvalue;
                block_unchecked(spec, kind, p, i, j, n).eigenvalue - epsilon * start
            });
            CriticalProbability::assemble(
                CriticalKind::EpsilonThreshold,
                kind,
                n,
                Some(epsilon),
                pairs,
                Method::Bisection,
                warnings,
            )
        }
        ChannelKind::PhaseDamping => {
            let p = 1.0 - epsilon.powf(1.0 / spec.qudits() as f64);
            let pairs = spec
                .pair_classes()
                .into_iter()
                .map(|c| PairCritical {
                    i: c.i,
                    j: c.j,
                    p,
                    count: c.count,
                })
                .collect();
            CriticalProbability::assemble(
                CriticalKind::EpsilonThreshold,
                kind,
                n,
                Some(epsilon),
                pairs,
                Method::ClosedForm,
                Vec::new(),
            )
        }
    };
    Ok(critical)
}

/// Two-level form of the balanced threshold equation for pair `(i, j)`:
///
/// `(|a_i|^2 + |a_j|^2) (p/d)^(N/2) (1 - (d-1)p/d)^(N/2) - |a_i a_j| (1-p)^N + epsilon |a_i a_j|`
///
/// Its root at `epsilon -> 0` is the closed form of
/// [`critical_p_balanced_closed_form`]. Requires even `N`.
pub fn two_level_threshold_residual(
    spec: &GhzSpec,
    i: usize,
    j: usize,
    p: f64,
    epsilon: f64,
) -> Result<f64> {
    check_pair(spec, i, j)?;
    check_p(p)?;
    let big_n = spec.qudits();
    if !big_n.is_multiple_of(2) {
        return Err(Error::OddQuditCount(big_n));
    }
    let (keep, flip) = depolarized_weights(spec.d(), p);
    let amp = (spec.weight(i) * spec.weight(j)).sqrt();
    let half = big_n / 2;
    Ok(
        (spec.weight(i) + spec.weight(j)) * powi(flip, half) * powi(keep, half)
            - amp * powi(1.0 - p, big_n)
            + epsilon * amp,
    )
}

/// Large-`N` limit of the balanced vanishing point, `2d / (2d + 1 + sqrt 5)`.
pub fn asymptote_balanced(d: usize) -> f64 {
    let two_d = 2.0 * d as f64;
    two_d / (two_d + 1.0 + 5f64.sqrt())
}

/// Large-`N` estimate of the epsilon threshold, `-ln(epsilon) / N`.
pub fn epsilon_scaling_estimate(qudits: usize, epsilon: f64) -> f64 {
    -epsilon.ln() / qudits as f64
}

/// Large-`d` limit of the epsilon threshold, `1 - epsilon^(1/N)`.
pub fn epsilon_large_d_limit(qudits: usize, epsilon: f64) -> f64 {
    1.0 - epsilon.powf(1.0 / qudits as f64)
}
