use std::io::Write;
use std::path::Path;
use std::time::SystemTime;

use ghz_decay::table::{check_precision, SweepTable};

use crate::args::{Format, OutputArgs};
use crate::error::CliError;

/// How to draw a table: `y` columns against `x`, one curve per distinct
/// combination of the `series` columns.
pub struct PlotSpec {
    pub x: &'static str,
    pub series: &'static [&'static str],
    pub y: &'static [&'static str],
    pub ylabel: &'static str,
}

pub fn render(table: &SweepTable, out: &OutputArgs) -> Result<String, CliError> {
    check_precision(out.precision).map_err(|e| CliError::field("precision", e))?;
    Ok(match out.format {
        Format::Csv => {
            let mut comment = table.provenance.summary();
            comment.push_str(&format!("; precision={}", out.precision));
            if !out.deterministic {
                comment.push_str(&format!(
                    "; generated={}",
                    humantime::format_rfc3339_seconds(SystemTime::now())
                ));
            }
            table.to_csv(out.precision, Some(&comment))
        }
        Format::Json => {
            let mut s = serde_json::to_string_pretty(&table.to_json(out.precision))
                .expect("JSON values serialize");
            s.push('\n');
            s
        }
    })
}

/// Write via a temporary file in the target directory, then rename.
pub fn write_atomic(path: &Path, contents: &str) -> Result<(), CliError> {
    let io = |e: std::io::Error| CliError::Io(format!("{}: {e}", path.display()));
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(io)?;
    tmp.write_all(contents.as_bytes()).map_err(io)?;
    tmp.as_file().sync_all().map_err(io)?;
    tmp.persist(path).map_err(|e| io(e.error))?;
    Ok(())
}

fn gnuplot_quote(s: &str) -> String {
    format!("'{}'", s.replace('\'', "''"))
}

pub fn plot_script(table: &SweepTable, spec: &PlotSpec, data: &Path) -> String {
    let index = |name: &str| table.column_index(name).expect("plot columns exist");
    let mut series: Vec<Vec<String>> = Vec::new();
    for row in &table.rows {
        let key: Vec<String> = spec
            .series
            .iter()
            .map(|c| render_key(&row[index(c)]))
            .collect();
        if !series.contains(&key) {
            series.push(key);
        }
    }
    let data_name = gnuplot_quote(&data.display().to_string());
    let mut curves = Vec::new();
    for key in &series {
        let condition = spec
            .series
            .iter()
            .zip(key)
            .map(|(c, v)| format!("strcol({}) eq {}", gnuplot_quote(c), gnuplot_quote(v)))
            .collect::<Vec<_>>()
            .join(" && ");
        let label = spec
            .series
            .iter()
            .zip(key)
            .map(|(c, v)| format!("{c}={v}"))
            .collect::<Vec<_>>()
            .join(" ");
        for y in spec.y {
            let x = format!("column({})", gnuplot_quote(spec.x));
            let x = if condition.is_empty() {
                x
            } else {
                format!("({condition} ? {x} : NaN)")
            };
            let title = match (spec.y.len(), label.is_empty()) {
                (1, false) => label.clone(),
                (1, true) => y.to_string(),
                (_, false) => format!("{y} {label}"),
                (_, true) => y.to_string(),
            };
            curves.push(format!(
                "{data_name} using {x}:{} with linespoints title {}",
                gnuplot_quote(y),
                gnuplot_quote(&title)
            ));
        }
    }
    let mut s = String::new();
    s.push_str(&format!("# gnuplot script for {}\n", data.display()));
    s.push_str("set datafile separator ','\n");
    s.push_str("set datafile columnheaders\n");
    s.push_str(&format!("set xlabel {}\n", gnuplot_quote(spec.x)));
    s.push_str(&format!("set ylabel {}\n", gnuplot_quote(spec.ylabel)));
    s.push_str("set key outside right\n");
    s.push_str("set grid\n");
    s.push_str(&format!("plot {}\n", curves.join(", \\\n     ")));
    s
}

fn render_key(cell: &ghz_decay::table::Cell) -> String {
    use ghz_decay::table::Cell;
    match cell {
        Cell::Int(v) => v.to_string(),
        Cell::Text(t) => t.clone(),
        Cell::Bool(b) => b.to_string(),
        Cell::Float(v) => v.map(|v| v.to_string()).unwrap_or_default(),
    }
}

/// Render and emit the table, plus the plot script when requested.
pub fn emit(table: &SweepTable, out: &OutputArgs, plot: Option<&PlotSpec>) -> Result<(), CliError> {
    let text = render(table, out)?;
    if let Some(script) = &out.plot_script {
        let Some(spec) = plot else {
            return Err(CliError::Config(
                "--plot-script: this command has no plot".into(),
            ));
        };
        let Some(data) = &out.out else {
            return Err(CliError::Config(
                "--plot-script: needs --out so the script can reference the data".into(),
            ));
        };
        if out.format != Format::Csv {
            return Err(CliError::Config("--plot-script: needs --format csv".into()));
        }
        write_atomic(data, &text)?;
        return write_atomic(script, &plot_script(table, spec, data));
    }
    match &out.out {
        Some(path) => write_atomic(path, &text),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(text.as_bytes())
                .map_err(|e| CliError::Io(format!("stdout: {e}")))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use ghz_decay::table::Provenance;

    fn table() -> SweepTable {
        let mut t = SweepTable::new(&["d", "N", "value"], Provenance::new(vec![]));
        for (d, n, v) in [(2usize, 4usize, 0.5), (2, 6, 0.6), (3, 4, 0.55)] {
            t.push(vec![d.into(), n.into(), v.into()]);
        }
        t
    }

    fn out(format: Format, deterministic: bool) -> OutputArgs {
        OutputArgs {
            out: None,
            format,
            precision: 12,
            deterministic,
            plot_script: None,
            config: None,
        }
    }

    #[test]
    fn deterministic_csv_has_no_timestamp() {
        let s = render(&table(), &out(Format::Csv, true)).unwrap();
        assert!(s.starts_with("# ghz-decay "));
        assert!(!s.contains("generated="));
        assert!(s.contains("\nd,N,value\n2,4,0.5\n"));
        assert!(!s.contains('\r'));
        let s = render(&table(), &out(Format::Csv, false)).unwrap();
        assert!(s.lines().next().unwrap().contains("generated="));
    }

    #[test]
    fn json_mirrors_columns() {
        let s = render(&table(), &out(Format::Json, true)).unwrap();
        let v: serde_json::Value = serde_json::from_str(&s).unwrap();
        assert_eq!(v[2]["d"], 3);
        assert_eq!(v[2]["value"], 0.55);
    }

    #[test]
    fn precision_is_checked() {
        let mut o = out(Format::Csv, true);
        o.precision = 5;
        assert!(render(&table(), &o)
            .unwrap_err()
            .to_string()
            .contains("--precision"));
    }

    #[test]
    fn plot_script_has_one_curve_per_series() {
        let spec = PlotSpec {
            x: "d",
            series: &["N"],
            y: &["value"],
            ylabel: "p",
        };
        let s = plot_script(&table(), &spec, Path::new("fig.csv"));
        assert!(s.contains("strcol('N') eq '4'"));
        assert!(s.contains("strcol('N') eq '6'"));
        assert_eq!(s.matches("with linespoints").count(), 2);
    }

    #[test]
    fn atomic_write_replaces_file() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("x.csv");
        write_atomic(&path, "old\n").unwrap();
        write_atomic(&path, "new\n").unwrap();
        assert_eq!(std::fs::read_to_string(&path).unwrap(), "new\n");
        assert_eq!(std::fs::read_dir(dir.path()).unwrap().count(), 1);
    }
}
