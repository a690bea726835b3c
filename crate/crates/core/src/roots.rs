//! Bracket scan plus bisection for scalar roots on an interval.

/// Grid step of the bracketing scan.
pub const SCAN_STEP: f64 = 1e-3;
/// Absolute bisection tolerance on the abscissa.
pub const BISECTION_TOL: f64 = 1e-12;
pub const MAX_BISECTIONS: usize = 200;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScanResult {
    /// Smallest root found, if any sign change was seen.
    pub root: Option<f64>,
    /// Number of sign changes seen on the scan grid.
    pub sign_changes: usize,
}

fn sign(v: f64) -> i8 {
    if v > 0.0 {
        1
    } else if v < 0.0 {
        -1
    } else {
        0
    }
}

/// Bisect `f` on `[lo, hi]`, assuming `f(lo)` and `f(hi)` differ in sign
/// (or `f(hi) == 0`).
pub fn bisect<F: Fn(f64) -> f64>(f: F, mut lo: f64, mut hi: f64, tol: f64, max_iter: usize) -> f64 {
    let s_lo = sign(f(lo));
    if s_lo == 0 {
        return lo;
    }
    for _ in 0..max_iter {
        if hi - lo <= tol {
            break;
        }
        let mid = 0.5 * (lo + hi);
        let s = sign(f(mid));
        if s == 0 {
            return mid;
        }
        if s == s_lo {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Scan `[lo, hi]` on a uniform grid of spacing `step`, count sign changes,
/// and bisect the first bracket.
///
/// Zero samples do not count as a sign change on their own; a sign change
/// is recorded when a nonzero sample differs in sign from the previous
/// nonzero sample.
pub fn smallest_root<F: Fn(f64) -> f64>(f: F, lo: f64, hi: f64, step: f64, tol: f64) -> ScanResult {
    let steps = ((hi - lo) / step).round().max(1.0) as usize;
    let at = |k: usize| {
        if k == steps {
            hi
        } else {
            lo + (hi - lo) * k as f64 / steps as f64
        }
    };

    let mut first: Option<(f64, f64)> = None;
    let mut changes = 0;
    let mut last_sign = 0i8;
    let mut last_x = lo;
    for k in 0..=steps {
        let x = at(k);
        let s = sign(f(x));
        if s == 0 {
            if last_sign != 0 && first.is_none() {
                // exact zero on the grid ends the first bracket
                first = Some((x, x));
            }
            continue;
        }
        if last_sign != 0 && s != last_sign {
            changes += 1;
            if first.is_none() {
                first = Some((last_x, x));
            }
        }
        last_sign = s;
        last_x = x;
    }

    let root = first.map(|(a, b)| {
        if a == b {
            a
        } else {
            bisect(&f, a, b, tol, MAX_BISECTIONS)
        }
    });
    ScanResult {
        root,
        sign_changes: changes,
    }
}
