//! Batch evaluation over `(d, N)` grids, asymptote comparisons, and the
//! analytic-versus-oracle verification harness.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::analytic::{
    asymptote_balanced, critical_p_balanced_closed_form, critical_p_partition,
    epsilon_large_d_limit, epsilon_scaling_estimate, epsilon_threshold, negativity_value,
    CriticalProbability,
};
use crate::error::{Error, Result};
use crate::ghz::{Bipartition, GhzSpec, DEFAULT_DENSE_CAP};
use crate::oracle::{evolve, negativity_exact, partial_transpose};
use crate::qudit::{ChannelKind, ChannelModel};
use crate::roots::{BISECTION_TOL, SCAN_STEP};
use crate::table::{Cell, Provenance, SweepTable};

/// Oracle agreement required of every verified instance.
pub const VERIFY_TOL: f64 = 1e-10;
/// Looser agreement for instances above [`LARGE_DIM`].
pub const VERIFY_TOL_LARGE: f64 = 1e-9;
pub const LARGE_DIM: usize = 512;

/// Seed for the random amplitude vectors of [`default_suite`].
pub const SUITE_SEED: u64 = 0x6768_7a5f_7375_6974;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Quantity {
    /// Vanishing point of the most balanced split.
    PBalanced,
    /// Vanishing point of the `(N-1)|1` split.
    PLeastBalanced,
    /// Epsilon threshold of the most balanced split.
    PEpsilon,
    /// Negativity against `p`.
    NegativityCurve,
}

impl Quantity {
    pub fn as_str(self) -> &'static str {
        match self {
            Quantity::PBalanced => "p-balanced",
            Quantity::PLeastBalanced => "p-least-balanced",
            Quantity::PEpsilon => "p-epsilon",
            Quantity::NegativityCurve => "negativity-curve",
        }
    }
}

impl fmt::Display for Quantity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Quantity {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "p-balanced" => Ok(Quantity::PBalanced),
            "p-least-balanced" | "p-1" => Ok(Quantity::PLeastBalanced),
            "p-epsilon" => Ok(Quantity::PEpsilon),
            "negativity-curve" | "negativity" => Ok(Quantity::NegativityCurve),
            other => Err(format!(
                "unknown quantity '{other}' (expected p-balanced, p-least-balanced, p-epsilon or negativity-curve)"
            )),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum AmplitudePolicy {
    /// `a_i = 1/sqrt(d)`.
    Equal,
    /// Amplitudes per dimension; grid points without an entry become
    /// warning rows.
    Explicit(BTreeMap<usize, Vec<Complex64>>),
}

impl AmplitudePolicy {
    fn spec(&self, d: usize, qudits: usize) -> Result<GhzSpec> {
        match self {
            AmplitudePolicy::Equal => GhzSpec::equal(d, qudits),
            AmplitudePolicy::Explicit(map) => match map.get(&d) {
                Some(alphas) => GhzSpec::new(d, qudits, alphas),
                None => Err(Error::InvalidRequest(format!(
                    "no amplitudes given for d = {d}"
                ))),
            },
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRequest {
    pub ds: Vec<usize>,
    pub qudits: Vec<usize>,
    pub channel: ChannelKind,
    pub epsilon: Option<f64>,
    pub amplitudes: AmplitudePolicy,
    pub quantity: Quantity,
    /// Strengths for [`Quantity::NegativityCurve`].
    pub p_grid: Vec<f64>,
    /// Split size for [`Quantity::NegativityCurve`]; defaults to `N/2`
    /// rounded down.
    pub partition: Option<usize>,
}

impl SweepRequest {
    /// Grid of the figure captions: `N in {4, 6, 8}`, equal amplitudes,
    /// depolarizing noise, `epsilon = 0.01`.
    pub fn figure_grid(quantity: Quantity, ds: Vec<usize>) -> Self {
        SweepRequest {
            ds,
            qudits: vec![4, 6, 8],
            channel: ChannelKind::Depolarizing,
            epsilon: Some(0.01),
            amplitudes: AmplitudePolicy::Equal,
            quantity,
            p_grid: Vec::new(),
            partition: None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidRequest(msg));
        if self.ds.is_empty() {
            return bad("empty d list".into());
        }
        if self.qudits.is_empty() {
            return bad("empty N list".into());
        }
        if let Some(&d) = self.ds.iter().find(|&&d| d < 2) {
            return Err(Error::InvalidDimension(d));
        }
        if let Some(&n) = self.qudits.iter().find(|&&n| n < 2) {
            return Err(Error::InvalidQuditCount(n));
        }
        if self.quantity == Quantity::PEpsilon {
            match self.epsilon {
                Some(e) if e > 0.0 && e < 1.0 => {}
                Some(e) => return Err(Error::EpsilonOutOfRange(e)),
                None => return bad("p-epsilon needs epsilon".into()),
            }
        }
        if self.quantity == Quantity::NegativityCurve {
            if self.p_grid.is_empty() {
                return bad("negativity-curve needs a p grid".into());
            }
            if let Some(&p) = self.p_grid.iter().find(|p| !(0.0..=1.0).contains(*p)) {
                return Err(Error::ProbabilityOutOfRange(p));
            }
        }
        Ok(())
    }

    fn provenance(&self) -> Provenance {
        let mut settings = vec![
            ("quantity".to_string(), self.quantity.to_string()),
            ("channel".to_string(), self.channel.to_string()),
            ("scan_step".to_string(), format!("{SCAN_STEP:e}")),
            ("bisection_tol".to_string(), format!("{BISECTION_TOL:e}")),
        ];
        if let Some(e) = self.epsilon.filter(|_| self.quantity == Quantity::PEpsilon) {
            settings.push(("epsilon".to_string(), e.to_string()));
        }
        Provenance::new(settings)
    }
}

#[cfg(feature = "parallel")]
fn map_ordered<T, R, F>(items: &[T], f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    use rayon::prelude::*;
    items.par_iter().map(f).collect()
}

#[cfg(not(feature = "parallel"))]
fn map_ordered<T, R, F>(items: &[T], f: F) -> Vec<R>
where
    F: Fn(&T) -> R,
{
    items.iter().map(f).collect()
}

fn critical_row(d: usize, qudits: usize, result: Result<CriticalProbability>) -> Vec<Cell> {
    match result {
        Ok(c) => vec![
            d.into(),
            qudits.into(),
            c.value.into(),
            c.method.to_string().into(),
            c.warning_text().into(),
        ],
        Err(e) => vec![
            d.into(),
            qudits.into(),
            Cell::Float(None),
            "".into(),
            e.to_string().into(),
        ],
    }
}

/// Most balanced vanishing point: the closed form for even `N` under
/// depolarizing noise, the root finder at `n = N/2` (rounded down) otherwise.
pub fn balanced_critical(spec: &GhzSpec, kind: ChannelKind) -> Result<CriticalProbability> {
    if kind == ChannelKind::Depolarizing && spec.qudits().is_multiple_of(2) {
        critical_p_balanced_closed_form(spec)
    } else {
        critical_p_partition(spec, kind, spec.qudits() / 2)
    }
}

/// Evaluate the requested quantity over the grid. Rows come in
/// lexicographic `(d, N)` order (then `p` for curves).
pub fn run_sweep(req: &SweepRequest) -> Result<SweepTable> {
    req.validate()?;
    let mut grid: Vec<(usize, usize)> = req
        .ds
        .iter()
        .flat_map(|&d| req.qudits.iter().map(move |&n| (d, n)))
        .collect();
    grid.sort_unstable();
    grid.dedup();

    let provenance = req.provenance();
    let table = match req.quantity {
        Quantity::NegativityCurve => {
            let mut table = SweepTable::new(
                &["d", "N", "n", "p", "value", "method", "warning"],
                provenance,
            );
            let blocks = map_ordered(&grid, |&(d, qudits)| curve_rows(req, d, qudits));
            for rows in blocks {
                for row in rows {
                    table.push(row);
                }
            }
            table
        }
        quantity => {
            let mut table = SweepTable::new(&["d", "N", "value", "method", "warning"], provenance);
            let rows = map_ordered(&grid, |&(d, qudits)| {
                let result = req
                    .amplitudes
                    .spec(d, qudits)
                    .and_then(|spec| match quantity {
                        Quantity::PBalanced => balanced_critical(&spec, req.channel),
                        Quantity::PLeastBalanced => critical_p_partition(&spec, req.channel, 1),
                        Quantity::PEpsilon => epsilon_threshold(
                            &spec,
                            req.channel,
                            qudits / 2,
                            req.epsilon.unwrap_or_default(),
                        ),
                        Quantity::NegativityCurve => unreachable!(),
                    });
                critical_row(d, qudits, result)
            });
            for row in rows {
                table.push(row);
            }
            table
        }
    };
    Ok(table)
}

fn curve_rows(req: &SweepRequest, d: usize, qudits: usize) -> Vec<Vec<Cell>> {
    let n = req.partition.unwrap_or(qudits / 2);
    let spec = match req.amplitudes.spec(d, qudits) {
        Ok(s) => s,
        Err(e) => {
            return vec![vec![
                d.into(),
                qudits.into(),
                n.into(),
                Cell::Float(None),
                Cell::Float(None),
                "".into(),
                e.to_string().into(),
            ]]
        }
    };
    req.p_grid
        .iter()
        .map(|&p| {
            let value =
                ChannelModel::new(req.channel, p, d).and_then(|ch| negativity_value(&spec, &ch, n));
            let (value, warning) = match value {
                Ok(v) => (Some(v), String::new()),
                Err(e) => (None, e.to_string()),
            };
            vec![
                d.into(),
                qudits.into(),
                n.into(),
                p.into(),
                value.into(),
                "analytic".into(),
                warning.into(),
            ]
        })
        .collect()
}

/// Exact critical values next to their limiting laws, equal amplitudes,
/// depolarizing noise.
///
/// Columns: the balanced vanishing point against `2d/(2d+1+sqrt 5)`, and the
/// balanced epsilon threshold against `-ln(eps)/N` and `1 - eps^(1/N)`,
/// each with its relative deviation.
pub fn asymptote_report(ds: &[usize], qudits: &[usize], epsilon: f64) -> Result<SweepTable> {
    if ds.is_empty() || qudits.is_empty() {
        return Err(Error::InvalidRequest("empty d or N list".into()));
    }
    if !(epsilon > 0.0 && epsilon < 1.0) {
        return Err(Error::EpsilonOutOfRange(epsilon));
    }
    let mut grid: Vec<(usize, usize)> = ds
        .iter()
        .flat_map(|&d| qudits.iter().map(move |&n| (d, n)))
        .collect();
    grid.sort_unstable();
    grid.dedup();

    let provenance = Provenance::new(vec![
        ("epsilon".into(), epsilon.to_string()),
        ("scan_step".into(), format!("{SCAN_STEP:e}")),
        ("bisection_tol".into(), format!("{BISECTION_TOL:e}")),
    ]);
    let mut table = SweepTable::new(
        &[
            "d",
            "N",
            "p_balanced",
            "balanced_limit",
            "balanced_rel_dev",
            "p_epsilon",
            "log_estimate",
            "log_rel_dev",
            "large_d_limit",
            "large_d_rel_dev",
            "warning",
        ],
        provenance,
    );
    let rel = |x: Option<f64>, y: f64| x.map(|x| (x - y) / y);
    let rows = map_ordered(&grid, |&(d, qudits)| -> Vec<Cell> {
        let spec = match GhzSpec::equal(d, qudits) {
            Ok(s) => s,
            Err(e) => {
                let mut row: Vec<Cell> = vec![d.into(), qudits.into()];
                row.extend((0..8).map(|_| Cell::Float(None)));
                row.push(e.to_string().into());
                return row;
            }
        };
        let mut warnings = Vec::new();
        let balanced = match balanced_critical(&spec, ChannelKind::Depolarizing) {
            Ok(c) => c.value,
            Err(e) => {
                warnings.push(e.to_string());
                None
            }
        };
        let eps = match epsilon_threshold(&spec, ChannelKind::Depolarizing, qudits / 2, epsilon) {
            Ok(c) => {
                if c.multiplicity_warning() {
                    warnings.push(c.warning_text());
                }
                c.value
            }
            Err(e) => {
                warnings.push(e.to_string());
                None
            }
        };
        let limit = asymptote_balanced(d);
        let log_est = epsilon_scaling_estimate(qudits, epsilon);
        let large_d = epsilon_large_d_limit(qudits, epsilon);
        vec![
            d.into(),
            qudits.into(),
            balanced.into(),
            limit.into(),
            rel(balanced, limit).into(),
            eps.into(),
            log_est.into(),
            rel(eps, log_est).into(),
            large_d.into(),
            rel(eps, large_d).into(),
            warnings.join("; ").into(),
        ]
    });
    for row in rows {
        table.push(row);
    }
    Ok(table)
}

/// One state and channel to cross-check against the oracle.
#[derive(Debug, Clone, PartialEq)]
pub struct VerifyInstance {
    pub label: String,
    pub spec: GhzSpec,
    pub channel: ChannelKind,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerifyRow {
    pub label: String,
    pub d: usize,
    pub qudits: usize,
    pub channel: ChannelKind,
    /// Largest `|analytic - oracle|` over the p grid and split sizes.
    pub max_deviation: Option<f64>,
    /// Largest `N_n - N_{n+1}` for `n < N/2` over both routes; positive
    /// values break the balance ordering.
    pub ordering_violation: Option<f64>,
    pub tolerance: f64,
    pub pass: bool,
    pub wall_ms: f64,
    pub skipped: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerifyReport {
    pub rows: Vec<VerifyRow>,
}

impl VerifyReport {
    /// All non-skipped rows pass. Vacuously true for an empty report.
    pub fn passed(&self) -> bool {
        self.rows.iter().all(|r| r.pass || r.skipped.is_some())
    }

    pub fn max_deviation(&self) -> f64 {
        self.rows
            .iter()
            .filter_map(|r| r.max_deviation)
            .fold(0.0, f64::max)
    }

    pub fn to_table(&self, with_timing: bool) -> SweepTable {
        let mut table = SweepTable::new(
            &[
                "label",
                "d",
                "N",
                "channel",
                "max_deviation",
                "ordering_violation",
                "tolerance",
                "pass",
                "wall_ms",
                "note",
            ],
            Provenance::new(vec![("tolerance".into(), format!("{VERIFY_TOL:e}"))]),
        );
        for r in &self.rows {
            table.push(vec![
                r.label.clone().into(),
                r.d.into(),
                r.qudits.into(),
                r.channel.to_string().into(),
                r.max_deviation.into(),
                r.ordering_violation.into(),
                r.tolerance.into(),
                r.pass.into(),
                if with_timing { Some(r.wall_ms) } else { None }.into(),
                r.skipped.clone().unwrap_or_default().into(),
            ]);
        }
        table
    }
}

/// Agreement required for a `dim`-dimensional instance.
pub fn verify_tolerance(dim: usize) -> f64 {
    if dim > LARGE_DIM {
        VERIFY_TOL_LARGE
    } else {
        VERIFY_TOL
    }
}

fn verify_one(
    inst: &VerifyInstance,
    p_grid: &[f64],
    ns: Option<&[usize]>,
    cap: usize,
) -> VerifyRow {
    let start = Instant::now();
    let spec = &inst.spec;
    let qudits = spec.qudits();
    let mut row = VerifyRow {
        label: inst.label.clone(),
        d: spec.d(),
        qudits,
        channel: inst.channel,
        max_deviation: None,
        ordering_violation: None,
        tolerance: verify_tolerance(spec.hilbert_dim().unwrap_or(usize::MAX)),
        pass: false,
        wall_ms: 0.0,
        skipped: None,
    };
    if let Err(e) = spec.check_cap(cap) {
        row.skipped = Some(e.to_string());
        return row;
    }
    let all_ns: Vec<usize> = (1..qudits).collect();
    let ns = ns.unwrap_or(&all_ns);
    let outcome = (|| -> Result<(f64, f64)> {
        let mut max_dev = 0.0_f64;
        let mut violation = f64::NEG_INFINITY;
        for &p in p_grid {
            let channel = ChannelModel::new(inst.channel, p, spec.d())?;
            let rho = evolve(spec, &channel, cap)?;
            let mut analytic = BTreeMap::new();
            let mut oracle = BTreeMap::new();
            for &n in ns {
                let part = Bipartition::new(n, qudits)?;
                let exact = negativity_exact(&partial_transpose(&rho, &part)?);
                let closed = negativity_value(spec, &channel, n)?;
                max_dev = max_dev.max((exact - closed).abs());
                analytic.insert(n, closed);
                oracle.insert(n, exact);
            }
            for values in [&analytic, &oracle] {
                for n in 1..qudits / 2 {
                    if let (Some(a), Some(b)) = (values.get(&n), values.get(&(n + 1))) {
                        violation = violation.max(a - b);
                    }
                }
            }
        }
        Ok((max_dev, violation))
    })();
    match outcome {
        Ok((dev, violation)) => {
            row.max_deviation = Some(dev);
            row.ordering_violation = violation.is_finite().then_some(violation);
            row.pass = dev <= row.tolerance;
        }
        Err(e) => row.skipped = Some(e.to_string()),
    }
    row.wall_ms = start.elapsed().as_secs_f64() * 1e3;
    row
}

/// Compare analytic and oracle negativity on every instance, strength in
/// `p_grid`, and split size in `ns` (all `1..N` when `None`). Instances over
/// the dense cap are reported as skipped.
pub fn verify(
    instances: &[VerifyInstance],
    p_grid: &[f64],
    ns: Option<&[usize]>,
    cap: usize,
) -> VerifyReport {
    VerifyReport {
        rows: map_ordered(instances, |inst| verify_one(inst, p_grid, ns, cap)),
    }
}

/// `0, 0.1, ..., 1.0`.
pub fn tenth_grid() -> Vec<f64> {
    (0..=10).map(|k| k as f64 / 10.0).collect()
}

/// Random complex amplitudes with real and imaginary parts uniform in
/// `[-1, 1]`, normalized.
pub fn random_amplitudes(d: usize, rng: &mut impl Rng) -> Vec<Complex64> {
    (0..d)
        .map(|_| Complex64::new(rng.gen_range(-1.0..=1.0), rng.gen_range(-1.0..=1.0)))
        .collect()
}

/// `d in {2, 3}`, `N in {2, 3, 4}`, both channels, equal amplitudes plus
/// `random_count` seeded random amplitude vectors per `(d, N)`.
pub fn suite(
    ds: &[usize],
    qudit_counts: &[usize],
    random_count: usize,
    seed: u64,
) -> Vec<VerifyInstance> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();
    for &d in ds {
        for &qudits in qudit_counts {
            let mut states = vec![("equal".to_string(), GhzSpec::equal(d, qudits))];
            for k in 0..random_count {
                let alphas = random_amplitudes(d, &mut rng);
                states.push((format!("random-{k}"), GhzSpec::new(d, qudits, &alphas)));
            }
            for (label, spec) in states {
                let Ok(spec) = spec else { continue };
                for channel in ChannelKind::ALL {
                    out.push(VerifyInstance {
                        label: label.clone(),
                        spec: spec.clone(),
                        channel,
                    });
                }
            }
        }
    }
    out
}

/// The certification suite: `d in {2, 3}`, `N in {2, 3, 4}`, both channels,
/// equal amplitudes and 20 random vectors per `(d, N)`.
pub fn default_suite() -> Vec<VerifyInstance> {
    suite(&[2, 3], &[2, 3, 4], 20, SUITE_SEED)
}

/// A reduced suite for quick checks: `d in {2, 3}`, `N in {2, 4}`, equal
/// amplitudes only.
pub fn quick_suite() -> Vec<VerifyInstance> {
    suite(&[2, 3], &[2, 4], 0, SUITE_SEED)
}

/// One `d = 2`, `N = 10` depolarizing instance (a 1024×1024 eigenproblem per
/// point), checked at a few strengths for `n = 1` and `n = 5`.
pub fn large_instance() -> (Vec<VerifyInstance>, Vec<f64>, Vec<usize>) {
    let spec = GhzSpec::equal(2, 10).expect("valid spec");
    (
        vec![VerifyInstance {
            label: "equal".into(),
            spec,
            channel: ChannelKind::Depolarizing,
        }],
        vec![0.1, 0.3],
        vec![1, 5],
    )
}

/// Dense cap that admits every instance of [`default_suite`].
pub const SUITE_CAP: usize = DEFAULT_DENSE_CAP;
