//! The interpolated bound `b ≤ c − (a + c)·g⁻¹((c − a)/(c + a))` with
//! `g(x) = x(1 − log x)` on `[0, 1]`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::landau::{compute_abc, direct_bound, LandauQuantities};
use crate::opcore::{Generator, NormKind, StateVector};

pub fn g_eval(x: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&x) {
        return Err(Error::domain(format!("g is defined on [0, 1], got {x}")));
    }
    if x == 0.0 {
        return Ok(0.0);
    }
    Ok(x * (1.0 - x.ln()))
}

/// Bracketing inverse of the increasing function `g`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GInverseSolver {
    pub tolerance: f64,
    pub max_iterations: usize,
    /// Newton steps are tried only below this `x`; `g'(x) = −log x` vanishes at 1.
    pub newton_cutoff: f64,
}

impl Default for GInverseSolver {
    fn default() -> Self {
        Self {
            tolerance: 1e-12,
            max_iterations: 200,
            newton_cutoff: 0.9,
        }
    }
}

impl GInverseSolver {
    pub fn new(tolerance: f64, max_iterations: usize) -> Result<Self> {
        if !(tolerance > 0.0) {
            return Err(Error::argument(format!(
                "solver tolerance must be positive, got {tolerance}"
            )));
        }
        Ok(Self {
            tolerance,
            max_iterations,
            ..Self::default()
        })
    }
}

/// `x ∈ [0, 1]` with `|g(x) − y| ≤ tolerance`.
pub fn g_inverse(y: f64, solver: &GInverseSolver) -> Result<f64> {
    if !(0.0..=1.0).contains(&y) {
        return Err(Error::domain(format!("g⁻¹ is defined on [0, 1], got {y}")));
    }
    if y == 0.0 || y == 1.0 {
        return Ok(y);
    }
    let (mut lo, mut hi) = (0.0f64, 1.0f64);
    // g(x) ≥ x on [0, 1], so y is an upper bound for the root
    hi = hi.min(y);
    let mut x = 0.5 * (lo + hi);
    for _ in 0..solver.max_iterations {
        let gx = g_eval(x)?;
        let residual = gx - y;
        if residual.abs() <= solver.tolerance {
            return Ok(x);
        }
        if residual < 0.0 {
            lo = x;
        } else {
            hi = x;
        }
        let bisect = 0.5 * (lo + hi);
        if bisect <= lo || bisect >= hi {
            return Ok(x);
        }
        x = if x < solver.newton_cutoff {
            let candidate = x - residual / (-x.ln());
            if candidate > lo && candidate < hi {
                candidate
            } else {
                bisect
            }
        } else {
            bisect
        };
    }
    Ok(x)
}

/// `c − (a + c)·g⁻¹((c − a)/(c + a))`.
///
/// Requires `0 < a ≤ c`; `a > c` is reported as a domain error rather than
/// clamped.
pub fn interpolated_bound(q: &LandauQuantities, solver: &GInverseSolver) -> Result<f64> {
    if !(q.a > 0.0) {
        return Err(Error::domain(format!("interpolated bound needs a > 0, got {}", q.a)));
    }
    if q.a > q.c {
        return Err(Error::domain(format!(
            "interpolated bound needs a <= c, got a = {}, c = {}",
            q.a, q.c
        )));
    }
    if q.a == q.c {
        return Ok(q.c);
    }
    let y = (q.c - q.a) / (q.c + q.a);
    Ok(q.c - (q.a + q.c) * g_inverse(y, solver)?)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OmegaScanRow {
    pub omega: f64,
    pub a: f64,
    pub b: f64,
    pub c: f64,
    /// `None` where `a > c`.
    pub interpolated_bound: Option<f64>,
    pub direct_bound: f64,
    /// `b²/(ac)`.
    pub ratio: f64,
}

/// Evaluates both bounds for each `ω'` in input order. Exploratory: no
/// relation between the two bounds is asserted.
///
/// Callers should pass only `ω'` no larger than a certified `ω`, since
/// shrinking `ω` preserves the exponential hypotheses.
pub fn omega_scan(
    generator: &Generator,
    f: &StateVector,
    norm: NormKind,
    omegas: &[f64],
    solver: &GInverseSolver,
) -> Result<Vec<OmegaScanRow>> {
    if omegas.is_empty() {
        return Err(Error::argument("omega list is empty"));
    }
    omegas
        .iter()
        .map(|&omega| {
            let q = compute_abc(generator, f, omega, norm)?;
            let interpolated = match interpolated_bound(&q, solver) {
                Ok(v) => Some(v),
                Err(Error::Domain(_)) => None,
                Err(e) => return Err(e),
            };
            Ok(OmegaScanRow {
                omega,
                a: q.a,
                b: q.b,
                c: q.c,
                interpolated_bound: interpolated,
                direct_bound: direct_bound(&q).bound,
                ratio: q.b * q.b / (q.a * q.c),
            })
        })
        .collect()
}

/// CSV with header `omega,a,b,c,interpolated_bound,direct_bound,ratio`.
/// A missing interpolated bound is an empty field.
pub fn omega_scan_csv(rows: &[OmegaScanRow]) -> String {
    let mut out = String::from("omega,a,b,c,interpolated_bound,direct_bound,ratio\n");
    for r in rows {
        let interp = r.interpolated_bound.map(|v| v.to_string()).unwrap_or_default();
        out.push_str(&format!(
            "{},{},{},{},{},{},{}\n",
            r.omega, r.a, r.b, r.c, interp, r.direct_bound, r.ratio
        ));
    }
    out
}
