//! Acceptance criteria 1 to 9. Prints one line per criterion and exits
//! non-zero if any criterion fails.

use std::process::ExitCode;
use std::time::Instant;

use ghz_decay::analytic::{epsilon_large_d_limit, negativity_value, two_level_threshold_residual};
use ghz_decay::linalg::{
    hermitian_eigenvalues, is_hermitian, matrix_power, max_abs, max_abs_diff, trace,
};
use ghz_decay::oracle::{negativity_exact, oracle_min_eigenvalue, ZERO_NEGATIVITY};
use ghz_decay::qudit::{
    apply_channel, apply_channel_twirl, choi_matrix, clock_matrix, root_of_unity, shift_matrix,
};
use ghz_decay::roots::{smallest_root, BISECTION_TOL, SCAN_STEP};
use ghz_decay::sweep::{
    default_suite, random_amplitudes, run_sweep, tenth_grid, verify, Quantity, SweepRequest,
    VerifyReport, SUITE_CAP,
};
use ghz_decay::{
    asymptote_balanced, critical_p_balanced_closed_form, epsilon_scaling_estimate,
    epsilon_threshold, evolve, oracle_critical_p, pair_block, partial_transpose, Bipartition,
    ChannelKind, ChannelModel, Complex64, GhzSpec,
};
use nalgebra::DMatrix;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

struct Suite {
    report: VerifyReport,
    seconds: f64,
}

fn run_default_suite() -> Suite {
    let start = Instant::now();
    let report = verify(&default_suite(), &tenth_grid(), None, SUITE_CAP);
    Suite {
        report,
        seconds: start.elapsed().as_secs_f64(),
    }
}

fn criterion_1(suite: &Suite) -> Outcome {
    let rows = &suite.report.rows;
    let skipped = rows.iter().filter(|r| r.skipped.is_some()).count();
    let failed = rows.iter().filter(|r| !r.pass).count();
    outcome(
        failed == 0 && skipped == 0 && rows.len() == 2 * 2 * 3 * 21,
        format!(
            "oracle equivalence: max |analytic - oracle| = {:.2e} over {} instances, {} failed, {} skipped (tol 1e-10)",
            suite.report.max_deviation(),
            rows.len(),
            failed,
            skipped
        ),
    )
}

fn criterion_2_specs() -> Vec<(String, GhzSpec)> {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut out = Vec::new();
    for d in [2, 3] {
        for qudits in [2, 4] {
            out.push((
                format!("d={d} N={qudits} equal"),
                GhzSpec::equal(d, qudits).unwrap(),
            ));
            for k in 0..3 {
                let alphas = random_amplitudes(d, &mut rng);
                out.push((
                    format!("d={d} N={qudits} random-{k}"),
                    GhzSpec::new(d, qudits, &alphas).unwrap(),
                ));
            }
        }
    }
    out
}

fn criterion_2() -> Outcome {
    let mut worst_a = 0.0_f64;
    let mut worst_b = 0.0_f64;
    let mut failures = Vec::new();
    for (label, spec) in criterion_2_specs() {
        let closed = critical_p_balanced_closed_form(&spec).unwrap();
        for pair in &closed.pairs {
            let root = smallest_root(
                |p| two_level_threshold_residual(&spec, pair.i, pair.j, p, 0.0).unwrap(),
                0.0,
                1.0,
                SCAN_STEP,
                BISECTION_TOL,
            )
            .root
            .unwrap_or(f64::NAN);
            let dev = (root - pair.p).abs();
            worst_a = worst_a.max(dev);
            if dev.is_nan() || dev > 1e-10 {
                failures.push(format!(
                    "{label} (a) pair ({},{}) dev {dev:.1e}",
                    pair.i, pair.j
                ));
            }
        }
        let oracle = oracle_critical_p(
            &spec,
            ChannelKind::Depolarizing,
            spec.qudits() / 2,
            SUITE_CAP,
        )
        .unwrap();
        let dev = (oracle - closed.value.unwrap()).abs();
        worst_b = worst_b.max(dev);
        if dev.is_nan() || dev > 1e-6 {
            failures.push(format!("{label} (b) dev {dev:.1e}"));
        }
    }
    let summary = format!(
        "closed-form balanced vanishing point: max dev vs two-level root {worst_a:.1e} (tol 1e-10), vs oracle zero-crossing {worst_b:.1e} (tol 1e-6)"
    );
    if failures.is_empty() {
        outcome(true, summary)
    } else {
        outcome(
            false,
            format!("{summary}; failing: {}", failures.join(", ")),
        )
    }
}

fn criterion_3() -> Outcome {
    let p = |qudits: usize| {
        critical_p_balanced_closed_form(&GhzSpec::equal(2, qudits).unwrap())
            .unwrap()
            .value
            .unwrap()
    };
    let p2 = p(2);
    let values: Vec<f64> = (1..=32).map(|h| p(2 * h)).collect();
    let increasing = values.windows(2).all(|w| w[1] > w[0] + 1e-12);
    let limit = asymptote_balanced(2);
    let gap = (p(64) - limit).abs();
    let oracle = oracle_critical_p(
        &GhzSpec::equal(2, 2).unwrap(),
        ChannelKind::Depolarizing,
        1,
        SUITE_CAP,
    )
    .unwrap();
    let pass =
        (p2 - 0.422650).abs() < 1e-6 && (oracle - p2).abs() < 1e-6 && increasing && gap < 2e-3;
    outcome(
        pass,
        format!(
            "qubit reduction: p(N=2) = {p2:.6} (oracle {oracle:.6}), increasing over N=2..64: {increasing}, |p(N=64) - {limit:.6}| = {gap:.2e} (tol 2e-3)"
        ),
    )
}

fn criterion_4() -> Outcome {
    let mut p_grid: Vec<f64> = tenth_grid().into_iter().filter(|&p| p < 1.0).collect();
    p_grid.extend([0.99, 0.999]);
    let mut failures = Vec::new();
    let mut checked = 0;
    let mut smallest_raw = f64::INFINITY;
    for inst in default_suite()
        .into_iter()
        .filter(|i| i.channel == ChannelKind::PhaseDamping)
    {
        let spec = &inst.spec;
        let key = format!("d={} N={} {}", spec.d(), spec.qudits(), inst.label);
        for n in 1..spec.qudits() {
            let part = Bipartition::new(n, spec.qudits()).unwrap();
            for &p in &p_grid {
                let ch = ChannelModel::phase_damping(p, spec.d()).unwrap();
                let analytic = negativity_value(spec, &ch, n).unwrap();
                let raw = oracle_min_eigenvalue(spec, &ch, &part, SUITE_CAP).unwrap();
                smallest_raw = smallest_raw.min(-raw);
                checked += 1;
                let lowest_block = spec
                    .entangled_pairs()
                    .map(|(i, j)| pair_block(spec, &ch, i, j, n).unwrap().eigenvalue)
                    .fold(f64::INFINITY, f64::min);
                if !(analytic > 0.0 && raw < 0.0 && (raw - lowest_block).abs() <= 1e-10) {
                    failures.push(format!(
                        "{key} n={n} p={p}: analytic {analytic:e}, oracle min eigenvalue {raw:e}"
                    ));
                }
            }
            let ch = ChannelModel::phase_damping(1.0, spec.d()).unwrap();
            let analytic = negativity_value(spec, &ch, n).unwrap();
            let rho = evolve(spec, &ch, SUITE_CAP).unwrap();
            let oracle = negativity_exact(&partial_transpose(&rho, &part).unwrap());
            if analytic != 0.0 || oracle > ZERO_NEGATIVITY {
                failures.push(format!(
                    "{key} n={n} p=1: analytic {analytic:e}, oracle {oracle:e}"
                ));
            }
        }
    }
    let mut eps_dev = 0.0_f64;
    let mut eps_same = true;
    for d in [2, 3, 5, 8] {
        for qudits in [2, 3, 4, 6] {
            let spec = GhzSpec::equal(d, qudits).unwrap();
            for eps in [0.01_f64, 0.001, 0.5] {
                let expected = 1.0 - eps.powf(1.0 / qudits as f64);
                for n in 1..qudits {
                    let v = epsilon_threshold(&spec, ChannelKind::PhaseDamping, n, eps)
                        .unwrap()
                        .value
                        .unwrap();
                    eps_same &= v == epsilon_large_d_limit(qudits, eps);
                    eps_dev = eps_dev.max((v - expected).abs());
                }
            }
        }
    }
    let pass = failures.is_empty() && eps_same && eps_dev == 0.0;
    let mut detail = format!(
        "phase damping: {checked} (instance, n, p <= 0.999) points negative, smallest |oracle min eigenvalue| {smallest_raw:.2e}; zero at p = 1; p_eps = 1 - eps^(1/N) with max dev {eps_dev:e}"
    );
    if !failures.is_empty() {
        detail.push_str(&format!(
            "; {} failures, first: {}",
            failures.len(),
            failures[0]
        ));
    }
    outcome(pass, detail)
}

fn sweep_values(quantity: Quantity, ds: Vec<usize>) -> Vec<Vec<f64>> {
    let req = SweepRequest::figure_grid(quantity, ds.clone());
    let table = run_sweep(&req).unwrap();
    let values = table.column_f64("value").unwrap();
    let per_n = req.qudits.len();
    (0..ds.len())
        .map(|k| {
            values[k * per_n..(k + 1) * per_n]
                .iter()
                .map(|v| v.expect("value"))
                .collect()
        })
        .collect()
}

fn increasing(xs: impl IntoIterator<Item = f64>) -> bool {
    let xs: Vec<f64> = xs.into_iter().collect();
    xs.windows(2).all(|w| w[1] > w[0] + 1e-12)
}

fn decreasing(xs: impl IntoIterator<Item = f64>) -> bool {
    let xs: Vec<f64> = xs.into_iter().collect();
    xs.windows(2).all(|w| w[1] < w[0] - 1e-12)
}

fn criterion_5() -> Outcome {
    let ds: Vec<usize> = (2..=50).collect();
    let qudits = [4, 6, 8];
    let mut failures = Vec::new();
    let checks: [(Quantity, &str, bool); 3] = [
        (Quantity::PBalanced, "p_balanced", true),
        (Quantity::PEpsilon, "p_eps", false),
        (Quantity::PLeastBalanced, "p_1", false),
    ];
    for (quantity, name, up_in_n) in checks {
        let grid = sweep_values(quantity, ds.clone());
        for row in &grid {
            let ok = if up_in_n {
                increasing(row.iter().copied())
            } else {
                decreasing(row.iter().copied())
            };
            if !ok {
                failures.push(format!(
                    "{name} not {} in N",
                    if up_in_n { "increasing" } else { "decreasing" }
                ));
                break;
            }
        }
        for k in 0..qudits.len() {
            if !increasing(grid.iter().map(|row| row[k])) {
                failures.push(format!("{name} not increasing in d at N={}", qudits[k]));
            }
        }
    }
    let big = sweep_values(Quantity::PBalanced, vec![10_000]);
    let bal_gap = big[0].iter().map(|v| (1.0 - v).abs()).fold(0.0, f64::max);
    let big_eps = sweep_values(Quantity::PEpsilon, vec![10_000]);
    let eps_gap = big_eps[0]
        .iter()
        .zip(qudits)
        .map(|(v, n)| (v - epsilon_large_d_limit(n, 0.01)).abs())
        .fold(0.0, f64::max);
    if bal_gap >= 1e-3 {
        failures.push(format!("p_balanced(d=1e4) misses 1 by {bal_gap:.2e}"));
    }
    if eps_gap >= 1e-3 {
        failures.push(format!(
            "p_eps(d=1e4) misses 1 - eps^(1/N) by {eps_gap:.2e}"
        ));
    }
    let detail = format!(
        "scaling on d=2..50, N=4,6,8: orderings {}, |1 - p_balanced(d=1e4)| = {bal_gap:.2e}, |p_eps(d=1e4) - limit| = {eps_gap:.2e}",
        if failures.is_empty() { "hold".to_string() } else { failures.join(", ") }
    );
    outcome(failures.is_empty(), detail)
}

fn criterion_6() -> Outcome {
    let mut worst = 0.0_f64;
    for d in [2, 3, 5] {
        let spec = GhzSpec::equal(d, 200).unwrap();
        for eps in [0.01, 0.001] {
            let exact = epsilon_threshold(&spec, ChannelKind::Depolarizing, 100, eps)
                .unwrap()
                .value
                .unwrap();
            let estimate = epsilon_scaling_estimate(200, eps);
            worst = worst.max(((exact - estimate) / estimate).abs());
        }
    }
    outcome(
        worst < 0.05,
        format!(
            "p_eps ~ -ln(eps)/N at N=200: max relative deviation {:.2}% (tol 5%)",
            worst * 100.0
        ),
    )
}

fn criterion_7(suite: &Suite) -> Outcome {
    let worst = suite
        .report
        .rows
        .iter()
        .filter_map(|r| r.ordering_violation)
        .fold(f64::NEG_INFINITY, f64::max);
    let pass = worst <= 1e-12;
    outcome(pass, format!("N_1 <= ... <= N_floor(N/2) on every suite instance, both paths: largest step-down {worst:.2e} (slack 1e-12)"))
}

fn random_state(d: usize, rng: &mut ChaCha8Rng) -> DMatrix<Complex64> {
    let v = random_amplitudes(d * d, rng);
    let a = DMatrix::from_vec(d, d, v);
    let b = &a * a.adjoint();
    let t = trace(&b);
    b / t
}

fn criterion_8() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut worst_trace = 0.0_f64;
    let mut worst_twirl = 0.0_f64;
    let mut worst_choi = 0.0_f64;
    let mut hermitian = true;
    let mut unital = 0.0_f64;
    for d in 2..=8 {
        for kind in ChannelKind::ALL {
            for p in tenth_grid() {
                let ch = ChannelModel::new(kind, p, d).unwrap();
                for _ in 0..100 {
                    let rho = random_state(d, &mut rng);
                    let out = apply_channel(&ch, &rho).unwrap();
                    worst_trace = worst_trace.max((trace(&out) - trace(&rho)).norm());
                    hermitian &= is_hermitian(&out, 1e-12);
                    worst_twirl = worst_twirl
                        .max(max_abs_diff(&out, &apply_channel_twirl(&ch, &rho).unwrap()));
                }
                let choi = choi_matrix(&ch).unwrap();
                worst_choi = worst_choi.min(hermitian_eigenvalues(&choi)[0]);
                if kind == ChannelKind::Depolarizing {
                    let mixed =
                        DMatrix::<Complex64>::identity(d, d) / Complex64::new(d as f64, 0.0);
                    unital = unital.max(max_abs_diff(&apply_channel(&ch, &mixed).unwrap(), &mixed));
                }
            }
        }
    }
    let mut weyl = 0.0_f64;
    let mut period = 0.0_f64;
    for d in 2..=16 {
        let x = shift_matrix(d).unwrap();
        let z = clock_matrix(d).unwrap();
        let id = DMatrix::<Complex64>::identity(d, d);
        weyl = weyl.max(max_abs(&(&z * &x - (&x * &z) * root_of_unity(d))));
        period = period.max(max_abs_diff(&matrix_power(&x, d as u32), &id));
        period = period.max(max_abs_diff(&matrix_power(&z, d as u32), &id));
    }
    let pass = worst_trace <= 1e-12
        && hermitian
        && worst_choi >= -1e-12
        && worst_twirl <= 1e-12
        && weyl <= 1e-12
        && period <= 1e-12
        && unital <= 1e-15;
    outcome(
        pass,
        format!(
            "channels d<=8: trace err {worst_trace:.1e}, hermitian {hermitian}, min Choi eigenvalue {worst_choi:.1e}, twirl err {worst_twirl:.1e}, unital err {unital:.1e}; Weyl err {weyl:.1e}, X^d/Z^d err {period:.1e} (d<=16)"
        ),
    )
}

fn criterion_9(suite: &Suite) -> Outcome {
    let spec = GhzSpec::equal(2, 10).unwrap();
    let ch = ChannelModel::depolarizing(0.3, 2).unwrap();
    let start = Instant::now();
    let rho = evolve(&spec, &ch, SUITE_CAP).unwrap();
    let oracle =
        negativity_exact(&partial_transpose(&rho, &Bipartition::new(5, 10).unwrap()).unwrap());
    let seconds = start.elapsed().as_secs_f64();
    let dev = (oracle - negativity_value(&spec, &ch, 5).unwrap()).abs();
    let pass = suite.seconds < 120.0 && seconds < 30.0 && dev <= 1e-9;
    outcome(
        pass,
        format!(
            "timing: default suite {:.1} s (limit 120 s), d=2 N=10 instance {seconds:.2} s (limit 30 s, deviation {dev:.1e})",
            suite.seconds
        ),
    )
}

fn main() -> ExitCode {
    let suite = run_default_suite();
    let results = [
        criterion_1(&suite),
        criterion_2(),
        criterion_3(),
        criterion_4(),
        criterion_5(),
        criterion_6(),
        criterion_7(&suite),
        criterion_8(),
        criterion_9(&suite),
    ];
    let mut failed = 0;
    for (k, r) in results.iter().enumerate() {
        println!(
            "criterion {} {}: {}",
            k + 1,
            if r.pass { "PASS" } else { "FAIL" },
            r.detail
        );
        failed += usize::from(!r.pass);
    }
    println!(
        "acceptance: {} passed, {failed} failed",
        results.len() - failed
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
