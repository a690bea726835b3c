use std::collections::BTreeMap;

use ghz_decay::analytic::negativity as negativity_report;
use ghz_decay::oracle::{negativity_exact, NEGATIVITY_REL_TOL};
use ghz_decay::roots::{BISECTION_TOL, SCAN_STEP};
use ghz_decay::sweep::{
    asymptote_report, balanced_critical, default_suite, large_instance, quick_suite, run_sweep,
    tenth_grid, verify, AmplitudePolicy, Quantity, SweepRequest, SUITE_CAP, VERIFY_TOL,
    VERIFY_TOL_LARGE,
};
use ghz_decay::table::{format_float, Cell, Provenance, SweepTable};
use ghz_decay::{
    critical_p_partition, epsilon_threshold, evolve, partial_transpose, Bipartition, ChannelKind,
    ChannelModel, Complex64, CriticalProbability, Error, GhzSpec, DEFAULT_DENSE_CAP,
};

use crate::args::{
    AsymptoteArgs, Channel, CriticalArgs, NegativityArgs, QuantityArg, StateArgs, SuiteArg,
    SweepArgs, VerifyArgs,
};
use crate::error::CliError;
use crate::output::{emit, PlotSpec};
use crate::parse::{
    amplitude_file, amplitude_map_file, complex_list, float_grid, int_list, real_list,
    AmplitudeFile,
};

fn kind(channel: Channel) -> ChannelKind {
    match channel {
        Channel::Depolarizing => ChannelKind::Depolarizing,
        Channel::PhaseDamping => ChannelKind::PhaseDamping,
    }
}

fn spec_error(source: &str, err: Error) -> CliError {
    match err {
        Error::InvalidDimension(_) => CliError::field("d", err),
        Error::InvalidQuditCount(_) => CliError::field("N", err),
        other => CliError::field(source, other),
    }
}

const SOURCE_REQUIRED: &str =
    "exactly one amplitude source is required: --equal, --alphas, --alphas-file or --magnitudes";

pub fn build_spec(state: &StateArgs) -> Result<GhzSpec, CliError> {
    let (source, alphas): (&str, Vec<Complex64>) = if state.equal {
        let d = state
            .d
            .ok_or_else(|| CliError::Config("--d: required with --equal".into()))?;
        return GhzSpec::equal(d, state.qudits).map_err(|e| spec_error("equal", e));
    } else if let Some(text) = &state.alphas {
        ("alphas", complex_list("alphas", text)?)
    } else if let Some(path) = &state.alphas_file {
        ("alphas-file", amplitude_file("alphas-file", path)?)
    } else if let Some(text) = &state.magnitudes {
        (
            "magnitudes",
            real_list("magnitudes", text)?
                .into_iter()
                .map(|m| Complex64::new(m, 0.0))
                .collect(),
        )
    } else {
        return Err(CliError::Config(SOURCE_REQUIRED.into()));
    };
    if let Some(d) = state.d {
        if d != alphas.len() {
            return Err(CliError::Config(format!(
                "--{source}: {} amplitudes given but --d is {d}",
                alphas.len()
            )));
        }
    }
    GhzSpec::new(alphas.len(), state.qudits, &alphas).map_err(|e| spec_error(source, e))
}

fn channel_model(
    kind: ChannelKind,
    p: f64,
    d: usize,
    field: &str,
) -> Result<ChannelModel, CliError> {
    ChannelModel::new(kind, p, d).map_err(|e| CliError::field(field, e))
}

fn strengths(p: Option<f64>, grid: Option<&str>) -> Result<(Vec<f64>, &'static str), CliError> {
    match (p, grid) {
        (Some(p), None) => Ok((vec![p], "p")),
        (None, Some(g)) => Ok((float_grid("p-grid", g)?, "p-grid")),
        _ => Err(CliError::Config(
            "--p: exactly one of --p or --p-grid is required".into(),
        )),
    }
}

fn base_settings(kind: ChannelKind) -> Vec<(String, String)> {
    vec![("channel".into(), kind.to_string())]
}

pub fn negativity(args: &NegativityArgs) -> Result<(), CliError> {
    let spec = build_spec(&args.state)?;
    let kind = kind(args.state.channel);
    let (ps, p_field) = strengths(args.p, args.p_grid.as_deref())?;
    let qudits = spec.qudits();
    let (parts, sites_text): (Vec<Bipartition>, Option<String>) = match (&args.subset, args.n) {
        (Some(text), _) => {
            let sites = int_list("subset", text)?;
            let part = Bipartition::with_sites(&sites, qudits)
                .map_err(|e| CliError::field("subset", e))?;
            let label = part
                .sites(qudits)
                .iter()
                .map(usize::to_string)
                .collect::<Vec<_>>()
                .join(" ");
            (vec![part], Some(label))
        }
        (None, Some(n)) => (
            vec![Bipartition::new(n, qudits).map_err(|e| CliError::field("n", e))?],
            None,
        ),
        (None, None) => (
            (1..qudits)
                .map(|n| Bipartition::new(n, qudits))
                .collect::<Result<_, _>>()?,
            None,
        ),
    };
    let cap = args.cap.unwrap_or(DEFAULT_DENSE_CAP);
    if args.oracle {
        spec.check_cap(cap).map_err(|e| CliError::field("cap", e))?;
    }
    let n_field = if sites_text.is_some() { "subset" } else { "n" };

    let mut columns = vec!["d", "N", "channel", "n"];
    if sites_text.is_some() {
        columns.push("sites");
    }
    columns.extend(["p", "value"]);
    if args.oracle {
        columns.push("oracle");
    }
    if args.pairs {
        columns.push("pairs");
    }
    let mut settings = base_settings(kind);
    if args.oracle {
        settings.push((
            "oracle_cutoff".into(),
            format!("{NEGATIVITY_REL_TOL:e}*dim*max|entry|"),
        ));
    }
    let mut table = SweepTable::new(&columns, Provenance::new(settings));
    for &p in &ps {
        let channel = channel_model(kind, p, spec.d(), p_field)?;
        let rho = if args.oracle {
            Some(evolve(&spec, &channel, cap).map_err(|e| CliError::field("cap", e))?)
        } else {
            None
        };
        for part in &parts {
            let report = negativity_report(&spec, &channel, part.n())
                .map_err(|e| CliError::field(n_field, e))?;
            let entry = &report.partitions[0];
            let mut row: Vec<Cell> = vec![
                spec.d().into(),
                qudits.into(),
                kind.to_string().into(),
                part.n().into(),
            ];
            if let Some(label) = &sites_text {
                row.push(label.clone().into());
            }
            row.extend([p.into(), entry.value.into()]);
            if let Some(rho) = &rho {
                row.push(negativity_exact(&partial_transpose(rho, part)?).into());
            }
            if args.pairs {
                let text = entry
                    .contributions
                    .iter()
                    .filter(|c| !spec.is_zero(c.i) && !spec.is_zero(c.j))
                    .map(|c| {
                        format!(
                            "{}-{}={}",
                            c.i,
                            c.j,
                            format_float(c.value, args.output.precision)
                        )
                    })
                    .collect::<Vec<_>>()
                    .join(" ");
                row.push(text.into());
            }
            table.push(row);
        }
    }
    let plot = PlotSpec {
        x: "p",
        series: &["n"],
        y: &["value"],
        ylabel: "negativity",
    };
    emit(&table, &args.output, Some(&plot))
}

fn critical_rows(
    table: &mut SweepTable,
    spec: &GhzSpec,
    quantity: &str,
    c: &CriticalProbability,
    pairs: bool,
) {
    let head = |pair: String, count: usize, value: Option<f64>, warning: String| -> Vec<Cell> {
        vec![
            spec.d().into(),
            spec.qudits().into(),
            c.channel.to_string().into(),
            quantity.into(),
            c.n.into(),
            c.epsilon.into(),
            pair.into(),
            count.into(),
            value.into(),
            c.method.to_string().into(),
            warning.into(),
        ]
    };
    let total = c.pairs.iter().map(|p| p.count).sum();
    table.push(head("max".into(), total, c.value, c.warning_text()));
    if pairs {
        for p in &c.pairs {
            table.push(head(
                format!("{}-{}", p.i, p.j),
                p.count,
                Some(p.p),
                String::new(),
            ));
        }
    }
}

pub fn critical(args: &CriticalArgs) -> Result<(), CliError> {
    let spec = build_spec(&args.state)?;
    let kind = kind(args.state.channel);
    if args.n.is_some() && args.epsilon.is_none() {
        return Err(CliError::Config(
            "--n: only used with --epsilon; use --partition for vanishing points".into(),
        ));
    }
    let (quantity, result) = if let Some(eps) = args.epsilon {
        let n = args.n.unwrap_or(spec.qudits() / 2);
        (
            "p-epsilon",
            epsilon_threshold(&spec, kind, n, eps).map_err(|e| match e {
                Error::EpsilonOutOfRange(_) => CliError::field("epsilon", e),
                other => CliError::field("n", other),
            })?,
        )
    } else if let Some(n) = args.partition {
        (
            "p-partition",
            critical_p_partition(&spec, kind, n).map_err(|e| CliError::field("partition", e))?,
        )
    } else {
        ("p-balanced", balanced_critical(&spec, kind)?)
    };
    let mut settings = base_settings(kind);
    settings.extend([
        ("scan_step".into(), format!("{SCAN_STEP:e}")),
        ("bisection_tol".into(), format!("{BISECTION_TOL:e}")),
    ]);
    let mut table = SweepTable::new(
        &[
            "d", "N", "channel", "quantity", "n", "epsilon", "pair", "count", "value", "method",
            "warning",
        ],
        Provenance::new(settings),
    );
    critical_rows(&mut table, &spec, quantity, &result, args.pairs);
    emit(&table, &args.output, None)?;
    if result.value.is_none() {
        return Err(CliError::Degenerate(
            "at most one nonzero amplitude, so there is no entanglement to lose".into(),
        ));
    }
    Ok(())
}

fn sweep_amplitudes(args: &SweepArgs, ds: &[usize]) -> Result<AmplitudePolicy, CliError> {
    let single = |field: &str, alphas: Vec<Complex64>| -> Result<AmplitudePolicy, CliError> {
        match ds {
            [d] if *d == alphas.len() => Ok(AmplitudePolicy::Explicit(BTreeMap::from([(*d, alphas)]))),
            [d] => Err(CliError::Config(format!("--{field}: {} amplitudes given but --d is {d}", alphas.len()))),
            _ => Err(CliError::Config(format!(
                "--{field}: one amplitude list needs a single --d; use an --alphas-file object for several"
            ))),
        }
    };
    if let Some(text) = &args.alphas {
        single("alphas", complex_list("alphas", text)?)
    } else if let Some(text) = &args.magnitudes {
        single(
            "magnitudes",
            real_list("magnitudes", text)?
                .into_iter()
                .map(|m| Complex64::new(m, 0.0))
                .collect(),
        )
    } else if let Some(path) = &args.alphas_file {
        match amplitude_map_file("alphas-file", path)? {
            AmplitudeFile::Single(alphas) => single("alphas-file", alphas),
            AmplitudeFile::PerDimension(map) => Ok(AmplitudePolicy::Explicit(map)),
        }
    } else {
        Ok(AmplitudePolicy::Equal)
    }
}

pub fn sweep(args: &SweepArgs) -> Result<(), CliError> {
    let ds = int_list("d", &args.d)?;
    let qudits = int_list("N", &args.qudits)?;
    let quantity = match args.quantity {
        QuantityArg::PBalanced => Quantity::PBalanced,
        QuantityArg::PLeastBalanced => Quantity::PLeastBalanced,
        QuantityArg::PEpsilon => Quantity::PEpsilon,
        QuantityArg::NegativityCurve => Quantity::NegativityCurve,
    };
    let p_grid = if quantity == Quantity::NegativityCurve {
        float_grid("p-grid", &args.p_grid)?
    } else {
        Vec::new()
    };
    let req = SweepRequest {
        amplitudes: sweep_amplitudes(args, &ds)?,
        ds,
        qudits,
        channel: kind(args.channel),
        epsilon: Some(args.epsilon),
        quantity,
        p_grid,
        partition: args.n,
    };
    let table = run_sweep(&req).map_err(|e| match e {
        Error::InvalidDimension(_) => CliError::field("d", e),
        Error::InvalidQuditCount(_) => CliError::field("N", e),
        Error::EpsilonOutOfRange(_) => CliError::field("epsilon", e),
        Error::ProbabilityOutOfRange(_) => CliError::field("p-grid", e),
        other => CliError::from(other),
    })?;
    let plot = if quantity == Quantity::NegativityCurve {
        PlotSpec {
            x: "p",
            series: &["d", "N"],
            y: &["value"],
            ylabel: "negativity",
        }
    } else {
        PlotSpec {
            x: "d",
            series: &["N"],
            y: &["value"],
            ylabel: quantity.as_str(),
        }
    };
    emit(&table, &args.output, Some(&plot))
}

pub fn verify_cmd(args: &VerifyArgs) -> Result<(), CliError> {
    let cap = args.cap.unwrap_or(SUITE_CAP);
    let report = match args.suite {
        SuiteArg::Default => verify(&default_suite(), &tenth_grid(), None, cap),
        SuiteArg::Quick => verify(&quick_suite(), &tenth_grid(), None, cap),
        SuiteArg::Large => {
            let (instances, ps, ns) = large_instance();
            verify(&instances, &ps, Some(&ns), cap)
        }
    };
    let mut table = report.to_table(!args.output.deterministic);
    table
        .provenance
        .settings
        .push(("tolerance_large".into(), format!("{VERIFY_TOL_LARGE:e}")));
    emit(&table, &args.output, None)?;
    let failed = report
        .rows
        .iter()
        .filter(|r| !r.pass && r.skipped.is_none())
        .count();
    let skipped = report.rows.iter().filter(|r| r.skipped.is_some()).count();
    eprintln!(
        "verify: {} instances, {failed} failed, {skipped} skipped, max deviation {:.3e} (tolerance {VERIFY_TOL:e})",
        report.rows.len(),
        report.max_deviation()
    );
    if failed > 0 {
        return Err(CliError::VerifyFailed(format!(
            "{failed} instance(s) exceeded their tolerance"
        )));
    }
    Ok(())
}

pub fn asymptotes(args: &AsymptoteArgs) -> Result<(), CliError> {
    let ds = int_list("d", &args.d)?;
    let qudits = int_list("N", &args.qudits)?;
    let table = asymptote_report(&ds, &qudits, args.epsilon).map_err(|e| match e {
        Error::EpsilonOutOfRange(_) => CliError::field("epsilon", e),
        other => CliError::from(other),
    })?;
    let plot = PlotSpec {
        x: "N",
        series: &["d"],
        y: &["p_balanced", "balanced_limit"],
        ylabel: "p",
    };
    emit(&table, &args.output, Some(&plot))
}
