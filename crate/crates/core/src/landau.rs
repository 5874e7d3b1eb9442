//! Orbital hypotheses and the Banach-space inequalities they imply.
//!
//! Given `A`, `f ≠ 0`, `ω > 0` and an admissible `φ`, the hypotheses are
//!
//! ```text
//! ‖e^{tA} f‖ ≤ φ(ωt) ‖f‖,    ‖e^{tA} A²f‖ ≤ φ''(ωt) ‖A²f‖,    t ≥ 0.
//! ```
//!
//! They are checked on a finite time grid. On instances that pass, the
//! localized quantities `a = ‖f‖`, `b = ‖Af‖/ω`, `c = ‖A²f‖/ω²` satisfy
//! `D(s) = φ(s)(a+c) + s(c−b) + (a−c) ≥ 0` for every `s ≥ 0`, and hence
//! `b² ≤ 4ac`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::opcore::{apply, expm_apply, norm, Generator, NormKind, StateVector};
use crate::phi::{ComparisonFunction, PhiKind};

/// Default tolerance on orbit ratios (`ratio ≤ 1 + tol`).
pub const RATIO_TOL: f64 = 1e-10;
/// Default relative slack on inequality margins.
pub const INEQ_TOL: f64 = 1e-9;
/// Ratios above `1 − NEAR_VIOLATION` trigger local grid refinement.
pub const NEAR_VIOLATION: f64 = 1e-4;
const REFINE_FACTOR: usize = 10;

/// How the time grid `{0} ∪ geometric(t_min, T)` is laid out.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TimeGridSpec {
    /// Number of geometric points.
    pub points: usize,
    /// Horizon `T` is the first time with `φ(ωT) ≤ tail_tol`.
    pub tail_tol: f64,
    /// `t_min = min_scaled_time / ω`.
    pub min_scaled_time: f64,
    /// Hard cap `T ≤ max_scaled_horizon / ω`.
    pub max_scaled_horizon: f64,
}

impl Default for TimeGridSpec {
    fn default() -> Self {
        Self {
            points: 512,
            tail_tol: 1e-8,
            min_scaled_time: 1e-4,
            max_scaled_horizon: 1e5,
        }
    }
}

impl TimeGridSpec {
    /// Horizon in scaled time `ωT`.
    pub fn scaled_horizon(&self, phi: &ComparisonFunction) -> Result<f64> {
        let cap = match phi.max_argument() {
            Some(m) => self.max_scaled_horizon.min(m),
            None => self.max_scaled_horizon,
        };
        if phi.eval(cap)? > self.tail_tol {
            return Ok(cap);
        }
        // φ is decreasing: bracket the first crossing, then bisect.
        let mut hi = 1.0f64.min(cap);
        while phi.eval(hi)? > self.tail_tol {
            hi = (2.0 * hi).min(cap);
        }
        let mut lo = 0.0;
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if phi.eval(mid)? > self.tail_tol {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        Ok(hi)
    }

    /// Grid `{0} ∪ geometric(t_min, T)` in real time.
    pub fn build(&self, phi: &ComparisonFunction, omega: f64) -> Result<Vec<f64>> {
        if self.points < 2 {
            return Err(Error::argument("time grid needs at least two geometric points"));
        }
        let horizon = self.scaled_horizon(phi)? / omega;
        let t_min = (self.min_scaled_time / omega).min(horizon);
        Ok(std::iter::once(0.0)
            .chain(geometric(t_min, horizon, self.points))
            .collect())
    }
}

/// `n` geometrically spaced points from `lo` to `hi` inclusive.
pub fn geometric(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    if n == 1 || hi <= lo {
        return vec![lo];
    }
    let ratio = (hi / lo).ln() / (n - 1) as f64;
    let mut out: Vec<f64> = (0..n).map(|i| lo * (ratio * i as f64).exp()).collect();
    out[n - 1] = hi;
    out
}

/// The data of the orbital hypotheses.
#[derive(Debug, Clone)]
pub struct OrbitalHypothesis<'a> {
    pub generator: &'a Generator,
    pub f: &'a StateVector,
    pub omega: f64,
    pub phi: &'a ComparisonFunction,
    pub norm: NormKind,
    pub grid: TimeGridSpec,
    pub ratio_tol: f64,
}

impl<'a> OrbitalHypothesis<'a> {
    pub fn new(
        generator: &'a Generator,
        f: &'a StateVector,
        omega: f64,
        phi: &'a ComparisonFunction,
        norm: NormKind,
    ) -> Result<Self> {
        if !(omega > 0.0) || !omega.is_finite() {
            return Err(Error::argument(format!("omega must be positive, got {omega}")));
        }
        if f.is_zero() {
            return Err(Error::argument("distinguished vector f must be nonzero"));
        }
        if f.dim() != generator.dim() {
            return Err(Error::argument("dimension mismatch between generator and f"));
        }
        Ok(Self {
            generator,
            f,
            omega,
            phi,
            norm,
            grid: TimeGridSpec::default(),
            ratio_tol: RATIO_TOL,
        })
    }

    pub fn with_grid(mut self, grid: TimeGridSpec) -> Self {
        self.grid = grid;
        self
    }

    pub fn with_ratio_tol(mut self, tol: f64) -> Self {
        self.ratio_tol = tol;
        self
    }
}

/// Maximum of one orbit ratio over the grid.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct OrbitCheck {
    pub max_ratio: f64,
    pub argmax_t: f64,
    pub pass: bool,
    /// Set when the orbit starts at the zero vector; the check is then vacuous.
    pub degenerate: bool,
    /// Set when near-violation refinement added points around the argmax.
    pub refined: bool,
    /// Earliest grid time with `ratio > 1 + tol`, if any.
    pub first_violation_t: Option<f64>,
    /// `(t, ratio)` for every evaluated time, sorted by `t`.
    #[serde(skip)]
    pub curve: Vec<(f64, f64)>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OrbitalCheckReport {
    pub max_ratio_f: f64,
    pub argmax_t_f: f64,
    pub pass_f: bool,
    pub max_ratio_a2f: f64,
    pub argmax_t_a2f: f64,
    pub pass_a2f: bool,
    pub a2f_degenerate: bool,
    pub first_violation_t_f: Option<f64>,
    pub first_violation_t_a2f: Option<f64>,
    pub horizon: f64,
    pub t_min: f64,
    pub grid_points: usize,
    pub ratio_tol: f64,
    pub pass: bool,
    #[serde(skip)]
    pub f_orbit: OrbitCheck,
    #[serde(skip)]
    pub a2f_orbit: OrbitCheck,
}

fn ratio(numerator: f64, denominator: f64) -> f64 {
    if denominator > 0.0 {
        numerator / denominator
    } else if numerator == 0.0 {
        0.0
    } else {
        f64::INFINITY
    }
}

/// `max_t ‖e^{tA} v‖ / (bound(t)·‖v‖)` over `grid`, with local refinement
/// when the maximum comes close to 1.
pub(crate) fn orbit_max_ratio(
    generator: &Generator,
    v: &StateVector,
    kind: NormKind,
    grid: &[f64],
    tol: f64,
    bound: impl Fn(f64) -> Result<f64>,
) -> Result<OrbitCheck> {
    let v_norm = norm(v, kind);
    if v_norm == 0.0 {
        return Ok(OrbitCheck {
            max_ratio: 0.0,
            argmax_t: 0.0,
            pass: true,
            degenerate: true,
            refined: false,
            first_violation_t: None,
            curve: Vec::new(),
        });
    }
    let eval = |t: f64| -> Result<f64> {
        let orbit = match expm_apply(generator, t, v) {
            Ok(w) => norm(&w, kind),
            Err(Error::Overflow(_)) => f64::INFINITY,
            Err(e) => return Err(e),
        };
        Ok(ratio(orbit, bound(t)? * v_norm))
    };

    let mut curve = grid.iter().map(|&t| Ok((t, eval(t)?))).collect::<Result<Vec<_>>>()?;
    let argmax = |curve: &[(f64, f64)]| {
        let mut best = 0;
        for (i, &(_, r)) in curve.iter().enumerate() {
            if r > curve[best].1 {
                best = i;
            }
        }
        best
    };

    let mut refined = false;
    let k = argmax(&curve);
    if curve[k].1 > 1.0 - NEAR_VIOLATION {
        let lo = if k > 0 { curve[k - 1].0 } else { curve[k].0 };
        let hi = if k + 1 < curve.len() {
            curve[k + 1].0
        } else {
            curve[k].0
        };
        let extra: Vec<f64> = (1..2 * REFINE_FACTOR)
            .map(|i| lo + (hi - lo) * i as f64 / (2 * REFINE_FACTOR) as f64)
            .filter(|&t| t > lo && t < hi && t != curve[k].0)
            .collect();
        for t in extra {
            curve.push((t, eval(t)?));
        }
        curve.sort_by(|x, y| x.0.total_cmp(&y.0));
        refined = true;
    }

    let k = argmax(&curve);
    let (argmax_t, max_ratio) = curve[k];
    let first_violation_t = curve.iter().find(|&&(_, r)| !(r <= 1.0 + tol)).map(|&(t, _)| t);
    Ok(OrbitCheck {
        max_ratio,
        argmax_t,
        pass: max_ratio <= 1.0 + tol,
        degenerate: false,
        refined,
        first_violation_t,
        curve,
    })
}

/// Checks both orbital bounds on the grid described by `hyp.grid`.
///
/// The verdict covers the grid only; nothing is claimed beyond the horizon.
pub fn check_orbital(hyp: &OrbitalHypothesis<'_>) -> Result<OrbitalCheckReport> {
    let grid = hyp.grid.build(hyp.phi, hyp.omega)?;
    let af = apply(hyp.generator, hyp.f)?;
    let a2f = apply(hyp.generator, &af)?;
    let omega = hyp.omega;
    let f_orbit = orbit_max_ratio(hyp.generator, hyp.f, hyp.norm, &grid, hyp.ratio_tol, |t| {
        hyp.phi.eval(omega * t)
    })?;
    let a2f_orbit = orbit_max_ratio(hyp.generator, &a2f, hyp.norm, &grid, hyp.ratio_tol, |t| {
        hyp.phi.deriv2(omega * t)
    })?;
    Ok(OrbitalCheckReport {
        max_ratio_f: f_orbit.max_ratio,
        argmax_t_f: f_orbit.argmax_t,
        pass_f: f_orbit.pass,
        max_ratio_a2f: a2f_orbit.max_ratio,
        argmax_t_a2f: a2f_orbit.argmax_t,
        pass_a2f: a2f_orbit.pass,
        a2f_degenerate: a2f_orbit.degenerate,
        first_violation_t_f: f_orbit.first_violation_t,
        first_violation_t_a2f: a2f_orbit.first_violation_t,
        horizon: *grid.last().expect("non-empty grid"),
        t_min: grid[1],
        grid_points: grid.len(),
        ratio_tol: hyp.ratio_tol,
        pass: f_orbit.pass && a2f_orbit.pass,
        f_orbit,
        a2f_orbit,
    })
}

/// `a = ‖f‖`, `b = ‖Af‖/ω`, `c = ‖A²f‖/ω²`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LandauQuantities {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub omega: f64,
    pub norm: NormKind,
}

pub fn compute_abc(generator: &Generator, f: &StateVector, omega: f64, kind: NormKind) -> Result<LandauQuantities> {
    if f.is_zero() {
        return Err(Error::argument("distinguished vector f must be nonzero"));
    }
    if !(omega > 0.0) || !omega.is_finite() {
        return Err(Error::argument(format!("omega must be positive, got {omega}")));
    }
    let af = apply(generator, f)?;
    let a2f = apply(generator, &af)?;
    let q = LandauQuantities {
        a: norm(f, kind),
        b: norm(&af, kind) / omega,
        c: norm(&a2f, kind) / (omega * omega),
        omega,
        norm: kind,
    };
    if ![q.a, q.b, q.c].iter().all(|x| x.is_finite()) {
        return Err(Error::Overflow("Landau quantities are not finite".into()));
    }
    Ok(q)
}

/// `D(s) = φ(s)(a+c) + s(c−b) + (a−c)` sampled on a grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DynamicalScan {
    #[serde(skip)]
    pub s: Vec<f64>,
    #[serde(skip)]
    pub values: Vec<f64>,
    pub grid_points: usize,
    pub s_max: f64,
    pub min_value: f64,
    pub argmin_s: f64,
}

/// Union of 1001 linear points on `[0, 10]` and 1000 geometric points on
/// `[1e−3, 10 + 4√(c/a)]`.
pub fn default_s_grid(q: &LandauQuantities) -> Vec<f64> {
    let s_max = 10.0 + 4.0 * (q.c / q.a).sqrt();
    let mut grid: Vec<f64> = (0..=1000).map(|i| i as f64 / 100.0).collect();
    grid.extend(geometric(1e-3, s_max, 1000));
    grid.sort_by(f64::total_cmp);
    grid.dedup();
    grid
}

pub fn dynamical_value(q: &LandauQuantities, phi_s: f64, s: f64) -> f64 {
    phi_s * (q.a + q.c) + s * (q.c - q.b) + (q.a - q.c)
}

pub fn dynamical_scan(q: &LandauQuantities, phi: &ComparisonFunction, s_grid: &[f64]) -> Result<DynamicalScan> {
    if s_grid.first() != Some(&0.0) {
        return Err(Error::argument("s grid must start at 0"));
    }
    if s_grid.windows(2).any(|w| !(w[0] <= w[1])) {
        return Err(Error::argument("s grid must be sorted"));
    }
    let values = s_grid
        .iter()
        .map(|&s| Ok(dynamical_value(q, phi.eval(s)?, s)))
        .collect::<Result<Vec<_>>>()?;
    let mut best = 0;
    for (i, &v) in values.iter().enumerate() {
        if v < values[best] {
            best = i;
        }
    }
    Ok(DynamicalScan {
        grid_points: s_grid.len(),
        s_max: *s_grid.last().expect("non-empty"),
        min_value: values[best],
        argmin_s: s_grid[best],
        s: s_grid.to_vec(),
        values,
    })
}

/// `4ac − b²`.
pub fn landau_margin(q: &LandauQuantities) -> f64 {
    4.0 * q.a * q.c - q.b * q.b
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DirectBound {
    /// Minimizer of `2/s + s(c/a)/2` after normalizing `a = 1`.
    pub s_star: Option<f64>,
    /// Upper bound on `b` in the original scale: `2√(ac)`.
    pub bound: f64,
    /// `c = 0`: the bound degenerates to its limit 0 and only `b = 0` is consistent.
    pub degenerate: bool,
}

/// Minimizes `b ≤ 2/s + sc/2` over `s > 0` after normalizing `‖f‖ = 1`.
pub fn direct_bound(q: &LandauQuantities) -> DirectBound {
    if q.c > 0.0 {
        let c_norm = q.c / q.a;
        DirectBound {
            s_star: Some(2.0 / c_norm.sqrt()),
            bound: 2.0 * (q.a * q.c).sqrt(),
            degenerate: false,
        }
    } else {
        DirectBound {
            s_star: None,
            bound: 0.0,
            degenerate: true,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OrderingReport {
    pub a_le_b: bool,
    pub b_le_c: bool,
    /// True only for exponential `φ` on certified instances; otherwise the
    /// flags are informational.
    pub asserted: bool,
    pub pass: bool,
}

/// Checks `a ≤ b ≤ c` within `tol·(a + c)`.
pub fn ordering_check(q: &LandauQuantities, phi_kind: PhiKind, hypotheses_certified: bool, tol: f64) -> OrderingReport {
    let slack = tol * (q.a + q.c);
    let a_le_b = q.a <= q.b + slack;
    let b_le_c = q.b <= q.c + slack;
    OrderingReport {
        a_le_b,
        b_le_c,
        asserted: phi_kind == PhiKind::Exponential && hypotheses_certified,
        pass: a_le_b && b_le_c,
    }
}

/// Largest `ω` with `‖e^{tA}f‖ ≤ e^{−ωt}‖f‖` on `t_grid`, i.e.
/// `inf_{t>0} −log(‖e^{tA}f‖/‖f‖)/t`. Reported only; never substituted for
/// a user-supplied `ω`.
pub fn empirical_decay_rate(generator: &Generator, f: &StateVector, kind: NormKind, t_grid: &[f64]) -> Result<f64> {
    let f_norm = norm(f, kind);
    if f_norm == 0.0 {
        return Err(Error::argument("distinguished vector f must be nonzero"));
    }
    let mut rate = f64::INFINITY;
    for &t in t_grid.iter().filter(|&&t| t > 0.0) {
        let r = norm(&expm_apply(generator, t, f)?, kind) / f_norm;
        let local = if r > 0.0 { -r.ln() / t } else { f64::INFINITY };
        rate = rate.min(local);
    }
    Ok(rate)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    fn neg_identity() -> Generator {
        Generator::real_diagonal(&[-1.0, -1.0]).unwrap()
    }

    fn diag12() -> Generator {
        Generator::real_diagonal(&[-1.0, -2.0]).unwrap()
    }

    fn rot_decay() -> Generator {
        Generator::from_real_rows(&[vec![-1.0, 1.0], vec![-1.0, -1.0]]).unwrap()
    }

    fn e1() -> StateVector {
        StateVector::from_real(&[1.0, 0.0]).unwrap()
    }

    fn diag_f() -> StateVector {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        StateVector::from_real(&[s, s]).unwrap()
    }

    fn report(a: &Generator, f: &StateVector, omega: f64, phi: &ComparisonFunction) -> OrbitalCheckReport {
        check_orbital(&OrbitalHypothesis::new(a, f, omega, phi, NormKind::L2).unwrap()).unwrap()
    }

    #[test]
    fn orbital_examples() {
        let exp = ComparisonFunction::exponential();
        let r = report(&neg_identity(), &e1(), 1.0, &exp);
        assert!(r.pass);
        assert_abs_diff_eq!(r.max_ratio_f, 1.0, epsilon = 1e-14);
        assert_abs_diff_eq!(r.max_ratio_a2f, 1.0, epsilon = 1e-14);

        let r = report(&rot_decay(), &e1(), 1.0, &exp);
        assert!(r.pass, "{r:?}");
        assert_abs_diff_eq!(r.max_ratio_f, 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(r.max_ratio_a2f, 1.0, epsilon = 1e-12);
        assert!(r.f_orbit.refined);
    }

    #[test]
    fn quadratic_phi_on_mixed_diagonal_orbit() {
        // The A²f = (1,4)/√2 orbit decays like √(e^{−2t} + 16e^{−4t})/√17,
        // which stays below φ''(t) everywhere: the maximum ratio is the
        // value 1 at t = 0.
        let quad = ComparisonFunction::quadratic_rational();
        let r = report(&diag12(), &diag_f(), 1.0, &quad);
        assert!(r.pass_f);
        assert!(r.pass_a2f);
        assert_eq!(r.max_ratio_a2f, 1.0);
        assert_eq!(r.argmax_t_a2f, 0.0);
    }

    #[test]
    fn quadratic_phi_fails_on_pure_exponential_orbit() {
        // A²f = e1 decays exactly like e^{−t}, and e^{−1} > φ''(1) = 0.352.
        let quad = ComparisonFunction::quadratic_rational();
        let r = report(&diag12(), &e1(), 1.0, &quad);
        assert!(r.pass_f);
        assert!(!r.pass_a2f);
        assert!(!r.pass);
        // independent oracle: dense scan of e^{−t}/φ''(t)
        let (mut best_t, mut best) = (0.0, 0.0);
        for i in 1..=200_000 {
            let t = i as f64 * 5e-5;
            let r = (-t as f64).exp() / quad.deriv2(t).unwrap();
            if r > best {
                best = r;
                best_t = t;
            }
        }
        assert!(
            (r.max_ratio_a2f - best).abs() < 1e-3 * best,
            "{} vs {best}",
            r.max_ratio_a2f
        );
        assert!((r.argmax_t_a2f - best_t).abs() < 0.05, "{} vs {best_t}", r.argmax_t_a2f);
        let first = r.first_violation_t_a2f.unwrap();
        assert!(first > 0.8 && first < 0.9, "{first}");
        assert!((-1.0f64).exp() > quad.deriv2(1.0).unwrap());
    }

    #[test]
    fn growing_orbit_fails_instead_of_erroring() {
        let a = Generator::real_diagonal(&[1.0, 1.0]).unwrap();
        let quad = ComparisonFunction::quadratic_rational();
        let r = report(&a, &e1(), 1.0, &quad);
        assert!(!r.pass);
        assert_eq!(r.max_ratio_f, f64::INFINITY);
    }

    #[test]
    fn degenerate_second_orbit() {
        let nil = Generator::shift(2, 0.0, 1.0).unwrap();
        let f = StateVector::from_real(&[0.0, 1.0]).unwrap();
        let r = report(&nil, &f, 1.0, &ComparisonFunction::exponential());
        assert!(r.a2f_degenerate);
        assert!(r.pass_a2f);
        assert!(!r.pass_f);
    }

    #[test]
    fn hypothesis_rejects_bad_input() {
        let exp = ComparisonFunction::exponential();
        let a = neg_identity();
        assert!(OrbitalHypothesis::new(&a, &e1(), 0.0, &exp, NormKind::L2).is_err());
        assert!(OrbitalHypothesis::new(&a, &StateVector::zeros(2), 1.0, &exp, NormKind::L2).is_err());
        assert!(OrbitalHypothesis::new(&a, &StateVector::zeros(3), 1.0, &exp, NormKind::L2).is_err());
    }

    #[test]
    fn horizon_follows_tail_tolerance() {
        let spec = TimeGridSpec::default();
        let exp = ComparisonFunction::exponential();
        assert_abs_diff_eq!(spec.scaled_horizon(&exp).unwrap(), -(1e-8f64).ln(), epsilon = 1e-9);
        let quad = ComparisonFunction::quadratic_rational();
        let expected = -1.0 + (2.0 / 1e-8 - 1.0f64).sqrt();
        assert_abs_diff_eq!(spec.scaled_horizon(&quad).unwrap(), expected, epsilon = 1e-6);
        let grid = spec.build(&exp, 2.0).unwrap();
        assert_eq!(grid[0], 0.0);
        assert_abs_diff_eq!(grid[1], 0.5e-4, epsilon = 1e-18);
        assert_eq!(grid.len(), spec.points + 1);
    }

    #[test]
    fn abc_examples() {
        let q = compute_abc(&neg_identity(), &e1(), 1.0, NormKind::L2).unwrap();
        assert_eq!((q.a, q.b, q.c), (1.0, 1.0, 1.0));

        let q = compute_abc(&diag12(), &diag_f(), 1.0, NormKind::L2).unwrap();
        assert_abs_diff_eq!(q.a, 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(q.b, 2.5f64.sqrt(), epsilon = 1e-15);
        assert_abs_diff_eq!(q.c, 8.5f64.sqrt(), epsilon = 1e-15);
        assert_abs_diff_eq!(q.b, 1.581139, epsilon = 1e-6);
        assert_abs_diff_eq!(q.c, 2.915476, epsilon = 1e-6);

        let q = compute_abc(&rot_decay(), &e1(), 1.0, NormKind::L2).unwrap();
        assert_eq!(q.a, 1.0);
        assert_abs_diff_eq!(q.b, 2f64.sqrt(), epsilon = 1e-15);
        assert_eq!(q.c, 2.0);

        assert!(compute_abc(&diag12(), &StateVector::zeros(2), 1.0, NormKind::L2).is_err());
    }

    fn quantities(a: f64, b: f64, c: f64) -> LandauQuantities {
        LandauQuantities {
            a,
            b,
            c,
            omega: 1.0,
            norm: NormKind::L2,
        }
    }

    /// Independent minimization of `D` by golden-section refinement of a dense scan.
    fn oracle_min(q: &LandauQuantities) -> (f64, f64) {
        let d = |s: f64| (-s).exp() * (q.a + q.c) + s * (q.c - q.b) + (q.a - q.c);
        let (mut best_s, mut best) = (0.0, d(0.0));
        for i in 1..=100_000 {
            let s = i as f64 * 1e-4;
            if d(s) < best {
                best = d(s);
                best_s = s;
            }
        }
        let (mut lo, mut hi) = ((best_s - 1e-4f64).max(0.0), best_s + 1e-4);
        let g = 0.5 * (5f64.sqrt() - 1.0);
        for _ in 0..100 {
            let x1 = hi - g * (hi - lo);
            let x2 = lo + g * (hi - lo);
            if d(x1) < d(x2) {
                hi = x2;
            } else {
                lo = x1;
            }
        }
        let s = 0.5 * (lo + hi);
        (s, d(s))
    }

    #[test]
    fn dynamical_scan_examples() {
        let exp = ComparisonFunction::exponential();
        let q = quantities(1.0, 1.0, 1.0);
        let grid: Vec<f64> = (0..=1000).map(|i| i as f64 / 100.0).collect();
        let scan = dynamical_scan(&q, &exp, &grid).unwrap();
        assert_eq!(scan.values[0], 2.0);
        assert_abs_diff_eq!(scan.min_value, 2.0 * (-10.0f64).exp(), epsilon = 1e-15);
        assert_eq!(scan.argmin_s, 10.0);

        let q = quantities(1.0, 1.581139, 2.915476);
        let (s_star, d_min) = oracle_min(&q);
        // frozen from the oracle: D(s) = 3.915476e^{−s} + 1.334337s − 1.915476
        assert_abs_diff_eq!(s_star, 1.0764, epsilon = 1e-3);
        assert_abs_diff_eq!(d_min, 0.8552, epsilon = 1e-3);
        let scan = dynamical_scan(&q, &exp, &default_s_grid(&q)).unwrap();
        assert_abs_diff_eq!(scan.min_value, d_min, epsilon = 1e-4);
        assert_abs_diff_eq!(scan.argmin_s, s_star, epsilon = 1e-2);

        let q = quantities(1.0, 2f64.sqrt(), 2.0);
        let scan = dynamical_scan(&q, &exp, &default_s_grid(&q)).unwrap();
        assert!(scan.min_value >= 0.0);
        assert!(oracle_min(&q).1 >= 0.0);

        assert!(dynamical_scan(&q, &exp, &[0.5, 1.0]).is_err());
        assert!(dynamical_scan(&q, &exp, &[0.0, 2.0, 1.0]).is_err());
    }

    #[test]
    fn margin_and_bound_examples() {
        assert_eq!(landau_margin(&quantities(1.0, 1.0, 1.0)), 3.0);
        assert_abs_diff_eq!(
            landau_margin(&quantities(1.0, 1.581139, 2.915476)),
            9.1619,
            epsilon = 1e-4
        );
        assert_eq!(landau_margin(&quantities(1.0, 2.0, 1.0)), 0.0);

        let d = direct_bound(&quantities(1.0, 1.0, 1.0));
        assert_eq!((d.s_star, d.bound), (Some(2.0), 2.0));
        let d = direct_bound(&quantities(1.0, 1.581139, 2.915476));
        assert_abs_diff_eq!(d.bound, 3.41496, epsilon = 1e-5);
        let d = direct_bound(&quantities(1.0, 1.414214, 2.0));
        assert_abs_diff_eq!(d.bound, 2.0 * 2f64.sqrt(), epsilon = 1e-15);
        let d = direct_bound(&quantities(1.0, 0.0, 0.0));
        assert!(d.degenerate);
        assert_eq!(d.bound, 0.0);
    }

    #[test]
    fn direct_bound_minimizes_the_relaxed_right_hand_side() {
        for &(a, c) in &[(1.0, 0.3), (2.0, 5.0), (0.5, 11.0)] {
            let q = quantities(a, 0.0, c);
            let d = direct_bound(&q);
            let rhs = |s: f64| 2.0 / s + s * (c / a) / 2.0;
            let grid_min = (1..200_000).map(|i| rhs(i as f64 * 1e-4)).fold(f64::INFINITY, f64::min);
            assert_abs_diff_eq!(d.bound / a, grid_min, epsilon = 1e-6);
            assert_abs_diff_eq!(rhs(d.s_star.unwrap()), d.bound / a, epsilon = 1e-12);
        }
    }

    #[test]
    fn ordering_examples() {
        for (b, c) in [(1.0, 1.0), (1.581139, 2.915476), (1.414214, 2.0)] {
            let r = ordering_check(&quantities(1.0, b, c), PhiKind::Exponential, true, INEQ_TOL);
            assert!(r.pass && r.asserted);
        }
        let r = ordering_check(&quantities(1.0, 2.0, 1.0), PhiKind::QuadraticRational, true, INEQ_TOL);
        assert!(!r.pass && !r.asserted);
    }

    #[test]
    fn integral_estimate_chain_on_certified_instances() {
        // φ(ωt)a ≥ tωb − a − c(φ(ωt) − 1 + ωt) at every grid time
        let exp = ComparisonFunction::exponential();
        for (a, f) in [(diag12(), diag_f()), (rot_decay(), e1()), (neg_identity(), e1())] {
            let r = report(&a, &f, 1.0, &exp);
            assert!(r.pass);
            let q = compute_abc(&a, &f, 1.0, NormKind::L2).unwrap();
            for &(t, _) in &r.f_orbit.curve {
                let p = exp.eval(t).unwrap();
                let rhs = t * q.b - q.a - q.c * (p - 1.0 + t);
                assert!(p * q.a >= rhs - INEQ_TOL * (q.a + q.c));
            }
        }
    }

    #[test]
    fn decay_rate_helper() {
        let grid = geometric(1e-3, 10.0, 50);
        let rate = empirical_decay_rate(&diag12(), &diag_f(), NormKind::L2, &grid).unwrap();
        assert!(rate >= 1.0 && rate < 1.5);
        let rate = empirical_decay_rate(&rot_decay(), &e1(), NormKind::L2, &grid).unwrap();
        assert_abs_diff_eq!(rate, 1.0, epsilon = 1e-10);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]

        #[test]
        fn scale_invariance(scale in 1e-3f64..1e3, x in -1.0f64..1.0, y in -1.0f64..1.0) {
            prop_assume!(x.abs() + y.abs() > 1e-3);
            let exp = ComparisonFunction::exponential();
            let a = rot_decay();
            let f = StateVector::from_real(&[x, y]).unwrap();
            let g = f.scaled(scale);
            let r1 = report(&a, &f, 1.0, &exp);
            let r2 = report(&a, &g, 1.0, &exp);
            prop_assert!((r1.max_ratio_f - r2.max_ratio_f).abs() <= 1e-12 * r1.max_ratio_f);
            prop_assert!((r1.max_ratio_a2f - r2.max_ratio_a2f).abs() <= 1e-12 * r1.max_ratio_a2f);
            let q1 = compute_abc(&a, &f, 1.0, NormKind::L2).unwrap();
            let q2 = compute_abc(&a, &g, 1.0, NormKind::L2).unwrap();
            let grid = default_s_grid(&q1);
            let d1 = dynamical_scan(&q1, &exp, &grid).unwrap();
            let d2 = dynamical_scan(&q2, &exp, &grid).unwrap();
            prop_assert!((d1.min_value / q1.a - d2.min_value / q2.a).abs() <= 1e-12 * (1.0 + q1.c / q1.a));
            let l1 = q1.b * q1.b / (q1.a * q1.c);
            let l2 = q2.b * q2.b / (q2.a * q2.c);
            prop_assert!((l1 - l2).abs() <= 1e-12 * l1);
            let o1 = ordering_check(&q1, PhiKind::Exponential, true, INEQ_TOL);
            let o2 = ordering_check(&q2, PhiKind::Exponential, true, INEQ_TOL);
            prop_assert_eq!(o1, o2);
        }

        #[test]
        fn dynamical_value_at_zero_is_twice_a(a in 1e-3f64..1e3, b in 0.0f64..1e3, c in 0.0f64..1e3) {
            let q = quantities(a, b, c);
            for phi in [ComparisonFunction::exponential(), ComparisonFunction::quadratic_rational()] {
                let scan = dynamical_scan(&q, &phi, &[0.0, 1.0]).unwrap();
                prop_assert!((scan.values[0] - 2.0 * a).abs() <= 1e-15 * (a + c));
            }
        }
    }
}
