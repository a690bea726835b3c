//! WebAssembly bindings for the demo page in `www/`.
//!
//! Each export has a plain Rust counterpart in [`api`] that returns
//! `Result<_, String>`, so the logic runs and is tested natively.

use wasm_bindgen::prelude::*;

pub mod api {
    use ghz_decay::analytic::negativity_value;
    use ghz_decay::sweep::{balanced_critical, run_sweep, Quantity, SweepRequest};
    use ghz_decay::{
        critical_p_balanced_closed_form, critical_p_partition, epsilon_threshold, ChannelKind,
        ChannelModel, Complex64, GhzSpec,
    };
    use serde_json::json;

    /// Largest `d` range a single call will sweep.
    pub const MAX_SWEEP_POINTS: usize = 2000;

    fn channel(name: &str) -> Result<ChannelKind, String> {
        name.parse()
    }

    /// Empty text gives equal amplitudes; otherwise comma-separated
    /// magnitudes, one per level.
    pub fn spec(d: usize, qudits: usize, magnitudes: &str) -> Result<GhzSpec, String> {
        let text = magnitudes.trim();
        if text.is_empty() {
            return GhzSpec::equal(d, qudits).map_err(|e| e.to_string());
        }
        let values = text
            .split(',')
            .map(|s| {
                s.trim()
                    .parse::<f64>()
                    .map_err(|_| format!("'{}' is not a number", s.trim()))
            })
            .collect::<Result<Vec<_>, _>>()?;
        let alphas: Vec<Complex64> = values.into_iter().map(|m| Complex64::new(m, 0.0)).collect();
        GhzSpec::new(d, qudits, &alphas).map_err(|e| e.to_string())
    }

    /// Negativity of the `(N-n)|n` split at `points` evenly spaced strengths
    /// from 0 to 1.
    pub fn negativity_curve(
        d: usize,
        qudits: usize,
        channel_name: &str,
        n: usize,
        magnitudes: &str,
        points: usize,
    ) -> Result<Vec<f64>, String> {
        if !(2..=10_000).contains(&points) {
            return Err(format!("points = {points} outside [2, 10000]"));
        }
        let spec = spec(d, qudits, magnitudes)?;
        let kind = channel(channel_name)?;
        (0..points)
            .map(|k| {
                let p = k as f64 / (points - 1) as f64;
                let ch = ChannelModel::new(kind, p, d).map_err(|e| e.to_string())?;
                negativity_value(&spec, &ch, n).map_err(|e| e.to_string())
            })
            .collect()
    }

    /// Equal-amplitude critical strength for every `d` in `d_min..=d_max`.
    /// `quantity` is `p-balanced`, `p-least-balanced` or `p-epsilon`.
    /// Missing values come back as NaN.
    pub fn critical_vs_d(
        qudits: usize,
        d_min: usize,
        d_max: usize,
        quantity: &str,
        epsilon: f64,
    ) -> Result<Vec<f64>, String> {
        if d_min > d_max || d_max - d_min >= MAX_SWEEP_POINTS {
            return Err(format!(
                "d range {d_min}..={d_max} must be nonempty and at most {MAX_SWEEP_POINTS} long"
            ));
        }
        let quantity: Quantity = quantity.parse()?;
        if quantity == Quantity::NegativityCurve {
            return Err("use negativity_curve for curves".into());
        }
        let mut req = SweepRequest::figure_grid(quantity, (d_min..=d_max).collect());
        req.qudits = vec![qudits];
        req.epsilon = Some(epsilon);
        let table = run_sweep(&req).map_err(|e| e.to_string())?;
        Ok(table
            .column_f64("value")
            .expect("sweep tables have a value column")
            .into_iter()
            .map(|v| v.unwrap_or(f64::NAN))
            .collect())
    }

    /// Critical strengths of one state under depolarizing noise, as a JSON
    /// object with the exact and closed-form balanced vanishing points, the
    /// `(N-1)|1` vanishing point, and the epsilon threshold.
    pub fn critical_summary(
        d: usize,
        qudits: usize,
        magnitudes: &str,
        epsilon: f64,
    ) -> Result<String, String> {
        let spec = spec(d, qudits, magnitudes)?;
        let kind = ChannelKind::Depolarizing;
        let half = qudits / 2;
        let exact = critical_p_partition(&spec, kind, half).map_err(|e| e.to_string())?;
        let closed = if qudits.is_multiple_of(2) {
            critical_p_balanced_closed_form(&spec)
                .map_err(|e| e.to_string())?
                .value
        } else {
            None
        };
        let balanced = balanced_critical(&spec, kind).map_err(|e| e.to_string())?;
        let least = critical_p_partition(&spec, kind, 1).map_err(|e| e.to_string())?;
        let eps = epsilon_threshold(&spec, kind, half, epsilon).map_err(|e| e.to_string())?;
        Ok(json!({
            "p_balanced_exact": exact.value,
            "p_balanced_closed_form": closed,
            "p_least_balanced": least.value,
            "p_epsilon": eps.value,
            "warnings": balanced.warning_text(),
        })
        .to_string())
    }
}

#[wasm_bindgen]
pub fn negativity_curve(
    d: usize,
    qudits: usize,
    channel: &str,
    n: usize,
    magnitudes: &str,
    points: usize,
) -> Result<Vec<f64>, JsError> {
    api::negativity_curve(d, qudits, channel, n, magnitudes, points).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn critical_vs_d(
    qudits: usize,
    d_min: usize,
    d_max: usize,
    quantity: &str,
    epsilon: f64,
) -> Result<Vec<f64>, JsError> {
    api::critical_vs_d(qudits, d_min, d_max, quantity, epsilon).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn critical_summary(
    d: usize,
    qudits: usize,
    magnitudes: &str,
    epsilon: f64,
) -> Result<String, JsError> {
    api::critical_summary(d, qudits, magnitudes, epsilon).map_err(|e| JsError::new(&e))
}
