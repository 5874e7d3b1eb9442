//! Hilbert-space side: the three-vector identity, restricted dissipativity,
//! the contractivity family and the Kato inequality `‖Af‖² ≤ 2‖f‖‖A²f‖`.
//!
//! The chain checked here is
//!
//! ```text
//! ‖e^{tA}(A+λ)f‖ ≤ ‖(A+λ)f‖            (all t ≥ 0, λ > 0)
//!   ⇒ Re(A(A+λ)f | (A+λ)f) ≤ 0
//!   ⇒ λ²‖Af‖² ≤ ‖A²f‖² + λ⁴‖f‖²
//!   ⇒ ‖Af‖² ≤ 2‖f‖‖A²f‖                  (at λ² = ‖A²f‖/‖f‖)
//! ```
//!
//! Every layer is evaluated independently so a break anywhere is visible.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::landau::{geometric, orbit_max_ratio};
use crate::opcore::{apply, inner, norm, Generator, NormKind, StateVector};

/// Default tolerance for every layer of the chain.
pub const KATO_TOL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq)]
pub struct HilbertTriple {
    pub f1: StateVector,
    pub f2: StateVector,
    pub f3: StateVector,
}

impl HilbertTriple {
    pub fn new(f1: StateVector, f2: StateVector, f3: StateVector) -> Result<Self> {
        if f1.dim() != f2.dim() || f2.dim() != f3.dim() {
            return Err(Error::argument("triple members must have equal dimension"));
        }
        Ok(Self { f1, f2, f3 })
    }

    /// `‖f1‖² + ‖f2‖² + ‖f3‖² + 1`.
    pub fn scale(&self) -> f64 {
        [&self.f1, &self.f2, &self.f3]
            .iter()
            .map(|v| norm(v, NormKind::L2).powi(2))
            .sum::<f64>()
            + 1.0
    }
}

fn sq(v: &StateVector) -> f64 {
    norm(v, NormKind::L2).powi(2)
}

/// `|‖f1+f2+f3‖² + ‖f2‖² − ‖f1‖² − ‖f3‖² − 2Re(f1+f2 | f2+f3)|`.
pub fn triple_identity_residual(triple: &HilbertTriple) -> Result<f64> {
    let HilbertTriple { f1, f2, f3 } = triple;
    if f1.dim() != f2.dim() || f2.dim() != f3.dim() {
        return Err(Error::argument("triple members must have equal dimension"));
    }
    let lhs = sq(&f1.add(f2).add(f3)) + sq(f2);
    let rhs = sq(f1) + sq(f3) + 2.0 * inner(&f1.add(f2), &f2.add(f3))?.re;
    Ok((lhs - rhs).abs())
}

fn check_lambda(lambda: f64) -> Result<()> {
    if !(lambda > 0.0) || !lambda.is_finite() {
        return Err(Error::argument(format!("lambda must be positive, got {lambda}")));
    }
    Ok(())
}

/// `(g, Ag)` with `g = (A+λ)f`.
fn shifted_pair(generator: &Generator, f: &StateVector, lambda: f64) -> Result<(StateVector, StateVector)> {
    let g = apply(generator, f)?.add_scaled(lambda, f);
    let ag = apply(generator, &g)?;
    Ok((g, ag))
}

/// `Re(A(A+λ)f | (A+λ)f)`.
pub fn restricted_dissipativity(generator: &Generator, f: &StateVector, lambda: f64) -> Result<f64> {
    check_lambda(lambda)?;
    let (g, ag) = shifted_pair(generator, f, lambda)?;
    Ok(inner(&ag, &g)?.re)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ContractivityCheck {
    pub lambda: f64,
    pub max_ratio: f64,
    pub argmax_t: f64,
    /// `(A+λ)f = 0`; the check is vacuous.
    pub degenerate: bool,
    pub pass: bool,
    #[serde(skip)]
    pub curve: Vec<(f64, f64)>,
}

/// `max_t ‖e^{tA}(A+λ)f‖ / ‖(A+λ)f‖` over `t_grid`.
pub fn orbital_contractivity(
    generator: &Generator,
    f: &StateVector,
    lambda: f64,
    t_grid: &[f64],
    tol: f64,
) -> Result<ContractivityCheck> {
    check_lambda(lambda)?;
    if t_grid.is_empty() {
        return Err(Error::argument("time grid is empty"));
    }
    let g = apply(generator, f)?.add_scaled(lambda, f);
    let orbit = orbit_max_ratio(generator, &g, NormKind::L2, t_grid, tol, |_| Ok(1.0))?;
    Ok(ContractivityCheck {
        lambda,
        max_ratio: orbit.max_ratio,
        argmax_t: orbit.argmax_t,
        degenerate: orbit.degenerate,
        pass: orbit.pass,
        curve: orbit.curve,
    })
}

/// `‖A²f‖² + λ⁴‖f‖² − λ²‖Af‖²`, defined for `λ ≥ 0`.
pub fn lambda_inequality_margin(generator: &Generator, f: &StateVector, lambda: f64) -> Result<f64> {
    if !(lambda >= 0.0) || !lambda.is_finite() {
        return Err(Error::argument(format!("lambda must be >= 0, got {lambda}")));
    }
    let n = Norms::new(generator, f)?;
    let l2 = lambda * lambda;
    Ok(n.a2f * n.a2f + l2 * l2 * n.f * n.f - l2 * n.af * n.af)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Norms {
    pub f: f64,
    pub af: f64,
    pub a2f: f64,
}

impl Norms {
    fn new(generator: &Generator, f: &StateVector) -> Result<Self> {
        let af = apply(generator, f)?;
        let a2f = apply(generator, &af)?;
        Ok(Self {
            f: norm(f, NormKind::L2),
            af: norm(&af, NormKind::L2),
            a2f: norm(&a2f, NormKind::L2),
        })
    }
}

/// Inputs of a Kato certificate. Always l2.
#[derive(Debug, Clone)]
pub struct KatoProbe<'a> {
    pub generator: &'a Generator,
    pub f: &'a StateVector,
    /// `None` selects the default grid around `λ*`.
    pub lambdas: Option<Vec<f64>>,
    pub t_grid: Vec<f64>,
    pub tol: f64,
}

impl<'a> KatoProbe<'a> {
    pub fn new(generator: &'a Generator, f: &'a StateVector, norm: NormKind, t_grid: Vec<f64>) -> Result<Self> {
        if norm != NormKind::L2 {
            return Err(Error::argument(format!(
                "Kato checks need an inner product; norm {norm} is not supported"
            )));
        }
        if f.is_zero() {
            return Err(Error::argument("distinguished vector f must be nonzero"));
        }
        if f.dim() != generator.dim() {
            return Err(Error::argument("dimension mismatch between generator and f"));
        }
        if t_grid.first() != Some(&0.0) {
            return Err(Error::argument("contractivity time grid must start at 0"));
        }
        Ok(Self {
            generator,
            f,
            lambdas: None,
            t_grid,
            tol: KATO_TOL,
        })
    }

    pub fn with_lambdas(mut self, lambdas: Vec<f64>) -> Self {
        self.lambdas = Some(lambdas);
        self
    }

    pub fn with_tol(mut self, tol: f64) -> Self {
        self.tol = tol;
        self
    }
}

/// Geometric grid of 25 points on `[λ*/10, 10λ*]` plus `λ*` itself.
/// When `λ* = 0` the grid spans `[10⁻², 10²]`.
pub fn default_lambda_grid(lambda_star: f64) -> Vec<f64> {
    let mut grid = if lambda_star > 0.0 {
        let mut g = geometric(lambda_star / 10.0, lambda_star * 10.0, 25);
        g.push(lambda_star);
        g
    } else {
        geometric(1e-2, 1e2, 25)
    };
    grid.sort_by(f64::total_cmp);
    grid.dedup();
    grid
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KatoLambdaRow {
    pub lambda: f64,
    pub contractivity: ContractivityCheck,
    pub dissipativity: f64,
    pub dissipativity_scale: f64,
    pub lambda_margin: f64,
    pub lambda_margin_scale: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum KatoVerdict {
    Certified,
    HypothesisFailed,
    /// Contractivity held on the grid but a later layer broke.
    Violation,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KatoCertificate {
    pub norms: Norms,
    pub rows: Vec<KatoLambdaRow>,
    pub lambda_star: f64,
    /// `(margin of the λ-inequality at λ*)/λ*²`; `None` when `λ* = 0`.
    pub lambda_star_margin_normalized: Option<f64>,
    /// `2‖f‖‖A²f‖ − ‖Af‖²`.
    pub kato_margin: f64,
    pub kato_scale: f64,
    /// `‖A²f‖ = 0`.
    pub degenerate: bool,
    pub contractivity_pass: bool,
    pub dissipativity_pass: bool,
    pub lambda_margins_pass: bool,
    pub kato_margin_pass: bool,
    pub tol: f64,
    pub t_grid_points: usize,
    pub t_horizon: f64,
    pub verdict: KatoVerdict,
}

pub fn kato_certificate(probe: &KatoProbe<'_>) -> Result<KatoCertificate> {
    let (a, f, tol) = (probe.generator, probe.f, probe.tol);
    let norms = Norms::new(a, f)?;
    if ![norms.f, norms.af, norms.a2f].iter().all(|x| x.is_finite()) {
        return Err(Error::Overflow("norms of f, Af, A²f are not finite".into()));
    }
    let degenerate = norms.a2f == 0.0;
    let lambda_star = (norms.a2f / norms.f).sqrt();
    let lambdas = match &probe.lambdas {
        Some(l) => l.clone(),
        None => default_lambda_grid(lambda_star),
    };
    if lambdas.is_empty() {
        return Err(Error::argument("lambda grid is empty"));
    }

    let mut rows = Vec::with_capacity(lambdas.len());
    for &lambda in &lambdas {
        let contractivity = orbital_contractivity(a, f, lambda, &probe.t_grid, tol)?;
        let (g, ag) = shifted_pair(a, f, lambda)?;
        let dissipativity = inner(&ag, &g)?.re;
        let dissipativity_scale = norm(&ag, NormKind::L2) * norm(&g, NormKind::L2);
        let l2 = lambda * lambda;
        let lambda_margin = lambda_inequality_margin(a, f, lambda)?;
        let lambda_margin_scale = norms.a2f * norms.a2f + l2 * l2 * norms.f * norms.f + l2 * norms.af * norms.af;
        rows.push(KatoLambdaRow {
            lambda,
            contractivity,
            dissipativity,
            dissipativity_scale,
            lambda_margin,
            lambda_margin_scale,
        });
    }

    let kato_margin = 2.0 * norms.f * norms.a2f - norms.af * norms.af;
    let kato_scale = norms.f * norms.a2f + norms.af * norms.af;
    let lambda_star_margin_normalized = if lambda_star > 0.0 {
        Some(lambda_inequality_margin(a, f, lambda_star)? / (lambda_star * lambda_star))
    } else {
        None
    };

    let contractivity_pass = rows.iter().all(|r| r.contractivity.pass);
    let dissipativity_pass = rows.iter().all(|r| r.dissipativity <= tol * r.dissipativity_scale);
    let lambda_margins_pass = rows.iter().all(|r| r.lambda_margin >= -tol * r.lambda_margin_scale);
    let kato_margin_pass = if degenerate {
        // λ → 0 in the λ-inequality forces Af = 0
        norms.af <= tol * a.frobenius_norm() * norms.f
    } else {
        kato_margin >= -tol * kato_scale
    };

    let verdict = if !contractivity_pass {
        KatoVerdict::HypothesisFailed
    } else if dissipativity_pass && lambda_margins_pass && kato_margin_pass {
        KatoVerdict::Certified
    } else {
        KatoVerdict::Violation
    };

    Ok(KatoCertificate {
        norms,
        rows,
        lambda_star,
        lambda_star_margin_normalized,
        kato_margin,
        kato_scale,
        degenerate,
        contractivity_pass,
        dissipativity_pass,
        lambda_margins_pass,
        kato_margin_pass,
        tol,
        t_grid_points: probe.t_grid.len(),
        t_horizon: *probe.t_grid.last().expect("non-empty"),
        verdict,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::landau::TimeGridSpec;
    use crate::opcore::Scalar;
    use crate::phi::ComparisonFunction;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    fn t_grid() -> Vec<f64> {
        TimeGridSpec::default()
            .build(&ComparisonFunction::exponential(), 1.0)
            .unwrap()
    }

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

    /// Term-by-term expansion: ‖Σ fᵢ‖² = Σ‖fᵢ‖² + 2 Σ_{i<j} Re(fᵢ|fⱼ), with the
    /// inner product written out componentwise.
    fn expanded_residual(f1: &[Scalar], f2: &[Scalar], f3: &[Scalar]) -> f64 {
        let ip = |u: &[Scalar], v: &[Scalar]| -> f64 { u.iter().zip(v).map(|(a, b)| a.re * b.re + a.im * b.im).sum() };
        let n1 = ip(f1, f1);
        let n2 = ip(f2, f2);
        let n3 = ip(f3, f3);
        let lhs = n1 + n2 + n3 + 2.0 * (ip(f1, f2) + ip(f1, f3) + ip(f2, f3)) + n2;
        let rhs = n1 + n3 + 2.0 * (ip(f1, f2) + ip(f1, f3) + n2 + ip(f2, f3));
        (lhs - rhs).abs()
    }

    #[test]
    fn triple_identity_examples() {
        let z = StateVector::zeros(3);
        let t = HilbertTriple::new(z.clone(), z.clone(), z.clone()).unwrap();
        assert_eq!(triple_identity_residual(&t).unwrap(), 0.0);

        let f1 = StateVector::new(vec![Scalar::new(1.0, 2.0), Scalar::new(-0.5, 0.25)]).unwrap();
        let f3 = StateVector::new(vec![Scalar::new(0.3, -1.0), Scalar::new(2.0, 0.0)]).unwrap();
        let t = HilbertTriple::new(f1.clone(), StateVector::zeros(2), f3.clone()).unwrap();
        assert!(triple_identity_residual(&t).unwrap() <= 1e-12 * t.scale());
        // polarization identity
        let lhs = sq(&f1.add(&f3));
        let rhs = sq(&f1) + sq(&f3) + 2.0 * inner(&f1, &f3).unwrap().re;
        assert_abs_diff_eq!(lhs, rhs, epsilon = 1e-13);

        assert!(HilbertTriple::new(z, StateVector::zeros(2), StateVector::zeros(2)).is_err());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(200))]

        #[test]
        fn triple_identity_on_random_triples(
            data in (1usize..=16).prop_flat_map(|n| proptest::collection::vec((-10.0f64..10.0, -10.0f64..10.0), 3 * n))
        ) {
            let n = data.len() / 3;
            let v: Vec<Scalar> = data.iter().map(|&(re, im)| Scalar::new(re, im)).collect();
            let (f1, rest) = v.split_at(n);
            let (f2, f3) = rest.split_at(n);
            let triple = HilbertTriple::new(
                StateVector::new(f1.to_vec()).unwrap(),
                StateVector::new(f2.to_vec()).unwrap(),
                StateVector::new(f3.to_vec()).unwrap(),
            ).unwrap();
            let scale = triple.scale();
            prop_assert!(triple_identity_residual(&triple).unwrap() <= 1e-12 * scale);
            prop_assert!(expanded_residual(f1, f2, f3) <= 1e-12 * scale);
        }
    }

    #[test]
    fn dissipativity_examples() {
        for lambda in [0.1, 1.0, 5.0] {
            assert!(restricted_dissipativity(&diag12(), &diag_f(), lambda).unwrap() <= 0.0);
        }
        // g = (A+1)f = Sf = (0, −1), Ag = (−1, 1), Re(Ag|g) = −1
        assert_abs_diff_eq!(
            restricted_dissipativity(&rot_decay(), &e1(), 1.0).unwrap(),
            -1.0,
            epsilon = 1e-15
        );
        let id = Generator::real_diagonal(&[1.0, 1.0]).unwrap();
        assert_eq!(restricted_dissipativity(&id, &e1(), 1.0).unwrap(), 4.0);
        assert!(restricted_dissipativity(&id, &e1(), 0.0).is_err());
    }

    #[test]
    fn contractivity_examples() {
        let grid = t_grid();
        let c = orbital_contractivity(&neg_identity(), &e1(), 2.0, &grid, KATO_TOL).unwrap();
        assert!(c.pass && !c.degenerate);
        assert_eq!(c.max_ratio, 1.0);
        assert_eq!(c.argmax_t, 0.0);

        let c = orbital_contractivity(&neg_identity(), &e1(), 1.0, &grid, KATO_TOL).unwrap();
        assert!(c.pass && c.degenerate);

        let c = orbital_contractivity(&rot_decay(), &e1(), 1.0, &grid, KATO_TOL).unwrap();
        assert!(c.pass);
        assert_eq!(c.max_ratio, 1.0);
        for &(t, r) in &c.curve {
            assert!((r - (-t as f64).exp()).abs() <= 1e-12, "t = {t}");
        }
    }

    #[test]
    fn lambda_margin_examples() {
        assert_abs_diff_eq!(
            lambda_inequality_margin(&diag12(), &diag_f(), 0.0).unwrap(),
            8.5,
            epsilon = 1e-13
        );
        let lambda = 8.5f64.powf(0.25);
        let m = lambda_inequality_margin(&diag12(), &diag_f(), lambda).unwrap();
        assert_abs_diff_eq!(m, 17.0 - 8.5f64.sqrt() * 2.5, epsilon = 1e-12);
        assert_abs_diff_eq!(m, 9.711, epsilon = 1e-3);
        assert_abs_diff_eq!(m / (lambda * lambda), 2.0 * 8.5f64.sqrt() - 2.5, epsilon = 1e-12);
        let m = lambda_inequality_margin(&rot_decay(), &e1(), 2f64.sqrt()).unwrap();
        assert_abs_diff_eq!(m, 4.0, epsilon = 1e-13);
        assert!(lambda_inequality_margin(&diag12(), &diag_f(), -1.0).is_err());
    }

    #[test]
    fn certificate_examples() {
        let a = neg_identity();
        let f = e1();
        let probe = KatoProbe::new(&a, &f, NormKind::L2, t_grid())
            .unwrap()
            .with_lambdas(vec![0.5, 1.0, 2.0]);
        let cert = kato_certificate(&probe).unwrap();
        assert_eq!(cert.verdict, KatoVerdict::Certified);
        assert_eq!(cert.kato_margin, 1.0);

        let (a, f) = (diag12(), diag_f());
        let cert = kato_certificate(&KatoProbe::new(&a, &f, NormKind::L2, t_grid()).unwrap()).unwrap();
        assert_eq!(cert.verdict, KatoVerdict::Certified);
        assert_abs_diff_eq!(cert.kato_margin, 3.330952, epsilon = 1e-6);
        assert_eq!(cert.rows.len(), 26);
        let normalized = cert.lambda_star_margin_normalized.unwrap();
        assert!((normalized - cert.kato_margin).abs() <= 1e-10 * cert.kato_margin.abs().max(cert.kato_scale));

        let (a, f) = (rot_decay(), e1());
        let cert = kato_certificate(&KatoProbe::new(&a, &f, NormKind::L2, t_grid()).unwrap()).unwrap();
        assert_eq!(cert.verdict, KatoVerdict::Certified);
        assert_abs_diff_eq!(cert.kato_margin, 2.0, epsilon = 1e-14);
    }

    #[test]
    fn non_dissipative_generator_fails_the_hypothesis() {
        let a = Generator::real_diagonal(&[1.0, -1.0]).unwrap();
        let f = diag_f();
        let cert = kato_certificate(&KatoProbe::new(&a, &f, NormKind::L2, t_grid()).unwrap()).unwrap();
        assert_eq!(cert.verdict, KatoVerdict::HypothesisFailed);
    }

    #[test]
    fn nilpotent_degenerate_case() {
        // A²f = 0 but Af ≠ 0: the contractivity family must fail
        let a = Generator::shift(2, 0.0, 1.0).unwrap();
        let f = StateVector::from_real(&[0.0, 1.0]).unwrap();
        let cert = kato_certificate(&KatoProbe::new(&a, &f, NormKind::L2, t_grid()).unwrap()).unwrap();
        assert!(cert.degenerate);
        assert!(!cert.kato_margin_pass);
        assert_eq!(cert.verdict, KatoVerdict::HypothesisFailed);
        assert!(cert.lambda_star_margin_normalized.is_none());
    }

    #[test]
    fn non_l2_norms_are_rejected() {
        let (a, f) = (diag12(), diag_f());
        assert!(KatoProbe::new(&a, &f, NormKind::L1, t_grid()).is_err());
        assert!(KatoProbe::new(&a, &f, NormKind::Linf, t_grid()).is_err());
        assert!(KatoProbe::new(&a, &StateVector::zeros(2), NormKind::L2, t_grid()).is_err());
    }

    #[test]
    fn default_lambda_grid_contains_lambda_star() {
        let g = default_lambda_grid(1.7);
        assert_eq!(g.len(), 26);
        assert!(g.contains(&1.7));
        assert_abs_diff_eq!(g[0], 0.17, epsilon = 1e-15);
        assert_abs_diff_eq!(*g.last().unwrap(), 17.0, epsilon = 1e-12);
        assert_eq!(default_lambda_grid(0.0).len(), 25);
    }
}
