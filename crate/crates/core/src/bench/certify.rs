//! Runs the checks for one scenario and assembles a certificate.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::scenario::{Entry, Expected, GeneratorSpec, Scenario};
use crate::error::{Error, Result};
use crate::interp::{interpolated_bound, GInverseSolver};
use crate::kato::{kato_certificate, KatoCertificate, KatoProbe, KatoVerdict, KATO_TOL};
use crate::landau::{
    check_orbital, compute_abc, default_s_grid, direct_bound, dynamical_scan, empirical_decay_rate, landau_margin,
    ordering_check, DirectBound, DynamicalScan, LandauQuantities, OrbitalCheckReport, OrbitalHypothesis,
    OrderingReport, TimeGridSpec, INEQ_TOL, RATIO_TOL,
};
use crate::opcore::NormKind;
use crate::phi::{uniform_grid, validate_phi, AdmissibilityReport, ComparisonFunction, PhiKind};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Landau,
    Kato,
    Both,
}

impl Mode {
    /// `both` for l2 scenarios, `landau` otherwise.
    pub fn default_for(norm: NormKind) -> Self {
        if norm.has_inner_product() {
            Mode::Both
        } else {
            Mode::Landau
        }
    }

    fn landau(self) -> bool {
        self != Mode::Kato
    }

    fn kato(self) -> bool {
        self != Mode::Landau
    }
}

impl FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "landau" => Ok(Mode::Landau),
            "kato" => Ok(Mode::Kato),
            "both" => Ok(Mode::Both),
            other => Err(Error::argument(format!(
                "unknown mode `{other}` (expected landau, kato or both)"
            ))),
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Landau => "landau",
            Mode::Kato => "kato",
            Mode::Both => "both",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Certified,
    HypothesisFailed,
    Violation,
    InputError,
}

impl Verdict {
    pub fn exit_code(self) -> i32 {
        match self {
            Verdict::Certified => 0,
            Verdict::HypothesisFailed => 1,
            Verdict::Violation => 2,
            Verdict::InputError => 3,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Certified => "certified",
            Verdict::HypothesisFailed => "hypothesis_failed",
            Verdict::Violation => "violation",
            Verdict::InputError => "input_error",
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Tunable knobs of a run.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CertifyOptions {
    pub time_grid: TimeGridSpec,
    pub ratio_tol: f64,
    pub ineq_tol: f64,
    pub kato_tol: f64,
    /// Grid for the admissibility check of `φ`: `phi_points` uniform points on `[0, phi_tmax]`.
    pub phi_tmax: f64,
    pub phi_points: usize,
    pub solver: GInverseSolver,
}

impl Default for CertifyOptions {
    fn default() -> Self {
        Self {
            time_grid: TimeGridSpec::default(),
            ratio_tol: RATIO_TOL,
            ineq_tol: INEQ_TOL,
            kato_tol: KATO_TOL,
            phi_tmax: 100.0,
            phi_points: 1000,
            solver: GInverseSolver::default(),
        }
    }
}

/// Parameter echo of the scenario.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScenarioEcho {
    pub name: String,
    pub dim: usize,
    pub generator: GeneratorSpec,
    pub f: Vec<Entry>,
    pub omega: f64,
    pub phi: String,
    pub norm: NormKind,
    pub expected: Expected,
    pub seed: Option<u64>,
}

impl ScenarioEcho {
    fn new(s: &Scenario) -> Self {
        let file = s.to_file();
        Self {
            name: s.name.clone(),
            dim: s.generator.dim(),
            generator: file.generator,
            f: file.f.unwrap_or_default(),
            omega: s.omega,
            phi: s.phi_name.clone(),
            norm: s.norm,
            expected: s.expected,
            seed: s.seed(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MarginCheck {
    pub value: f64,
    /// Pass iff `value ≥ −threshold`.
    pub threshold: f64,
    pub pass: bool,
}

impl MarginCheck {
    fn new(value: f64, threshold: f64) -> Self {
        Self {
            value,
            threshold,
            pass: value >= -threshold,
        }
    }
}

/// Landau-side inequality margins. They are always computed; `asserted`
/// says whether the orbital hypotheses passed so that a failing margin
/// counts against the verdict.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LandauMargins {
    pub asserted: bool,
    pub dynamical: DynamicalScan,
    /// `min D(s) ≥ −tol·(a + c)`.
    pub dynamical_check: MarginCheck,
    /// `4ac − b² ≥ −tol·ac`.
    pub landau_check: MarginCheck,
    pub direct: DirectBound,
    /// `2√(ac) − b ≥ −tol·(a + c)`.
    pub direct_check: MarginCheck,
    /// Only defined for `0 < a ≤ c`.
    pub interpolated_bound: Option<f64>,
    /// `bound − b`; asserted only for exponential `φ`.
    pub interpolated_check: Option<MarginCheck>,
    pub ordering: OrderingReport,
    /// `b²/(ac)`; `None` when `ac = 0`.
    pub landau_ratio: Option<f64>,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LandauSection {
    pub phi_admissibility: AdmissibilityReport,
    pub orbital: OrbitalCheckReport,
    pub quantities: LandauQuantities,
    pub margins: LandauMargins,
    /// `inf_t −log(‖e^{tA}f‖/‖f‖)/t` on the time grid; informational.
    pub empirical_decay_rate: f64,
    pub hypotheses_pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KatoSection {
    pub certificate: KatoCertificate,
    /// `‖Af‖²/(‖f‖‖A²f‖)`; `None` when `A²f = 0`.
    pub kato_ratio: Option<f64>,
    /// `|margin(λ*)/λ*² − Kato margin|`, relative to the Kato scale.
    pub lambda_star_consistency: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Sidecars {
    pub orbit_f: Option<String>,
    pub orbit_a2f: Option<String>,
    pub dynamical: Option<String>,
    pub kato_lambda: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Certificate {
    pub schema_version: u32,
    pub scenario: ScenarioEcho,
    pub mode: Mode,
    pub options: CertifyOptions,
    pub landau: Option<LandauSection>,
    pub kato: Option<KatoSection>,
    pub sidecars: Sidecars,
    pub verdict: Verdict,
    pub exit_code: i32,
    /// `None` for exploratory scenarios.
    pub matches_expected: Option<bool>,
    pub error: Option<String>,
}

/// Stem used for certificate and sidecar file names.
pub fn file_stem(name: &str) -> String {
    name.chars()
        .map(|c| {
            if c.is_ascii_alphanumeric() || c == '-' || c == '_' {
                c
            } else {
                '_'
            }
        })
        .collect()
}

fn landau_section(s: &Scenario, opts: &CertifyOptions) -> Result<(LandauSection, Verdict)> {
    let phi_grid = uniform_grid(phi_grid_max(&s.phi, opts.phi_tmax), opts.phi_points);
    let phi_admissibility = validate_phi(&s.phi, &phi_grid)?;

    let hyp = OrbitalHypothesis::new(&s.generator, &s.f, s.omega, &s.phi, s.norm)?
        .with_grid(opts.time_grid)
        .with_ratio_tol(opts.ratio_tol);
    let orbital = check_orbital(&hyp)?;
    let hypotheses_pass = phi_admissibility.pass && orbital.pass;

    let q = compute_abc(&s.generator, &s.f, s.omega, s.norm)?;
    let dynamical = dynamical_scan(&q, &s.phi, &default_s_grid(&q))?;
    let tol = opts.ineq_tol;
    let dynamical_check = MarginCheck::new(dynamical.min_value, tol * (q.a + q.c));
    let landau_check = MarginCheck::new(landau_margin(&q), tol * q.a * q.c);
    let direct = direct_bound(&q);
    let direct_check = MarginCheck::new(direct.bound - q.b, tol * (q.a + q.c));
    let interpolated = if q.a <= q.c {
        Some(interpolated_bound(&q, &opts.solver)?)
    } else {
        None
    };
    let interpolated_check = match (interpolated, s.phi.kind()) {
        (Some(bound), PhiKind::Exponential) => Some(MarginCheck::new(bound - q.b, tol * (q.a + q.c))),
        _ => None,
    };
    let ordering = ordering_check(&q, s.phi.kind(), hypotheses_pass, tol);
    let pass = dynamical_check.pass
        && landau_check.pass
        && direct_check.pass
        && interpolated_check.map_or(true, |c| c.pass)
        && (!ordering.asserted || ordering.pass);
    let ac = q.a * q.c;
    let margins = LandauMargins {
        asserted: hypotheses_pass,
        dynamical,
        dynamical_check,
        landau_check,
        direct,
        direct_check,
        interpolated_bound: interpolated,
        interpolated_check,
        ordering,
        landau_ratio: (ac > 0.0).then(|| q.b * q.b / ac),
        pass,
    };

    let t_grid: Vec<f64> = orbital.f_orbit.curve.iter().map(|&(t, _)| t).collect();
    let rate = empirical_decay_rate(&s.generator, &s.f, s.norm, &t_grid)?;

    let verdict = match (hypotheses_pass, pass) {
        (false, _) => Verdict::HypothesisFailed,
        (true, true) => Verdict::Certified,
        (true, false) => Verdict::Violation,
    };
    Ok((
        LandauSection {
            phi_admissibility,
            orbital,
            quantities: q,
            margins,
            empirical_decay_rate: rate,
            hypotheses_pass,
        },
        verdict,
    ))
}

fn phi_grid_max(phi: &ComparisonFunction, tmax: f64) -> f64 {
    phi.max_argument().map_or(tmax, |m| m.min(tmax))
}

fn kato_section(s: &Scenario, opts: &CertifyOptions) -> Result<(KatoSection, Verdict)> {
    let t_grid = opts.time_grid.build(&ComparisonFunction::exponential(), s.omega)?;
    let probe = KatoProbe::new(&s.generator, &s.f, s.norm, t_grid)?.with_tol(opts.kato_tol);
    let cert = kato_certificate(&probe)?;
    let n = cert.norms;
    let kato_ratio = (n.a2f > 0.0).then(|| n.af * n.af / (n.f * n.a2f));
    let lambda_star_consistency = cert
        .lambda_star_margin_normalized
        .map(|m| (m - cert.kato_margin).abs() / cert.kato_margin.abs().max(cert.kato_scale));
    let verdict = match cert.verdict {
        KatoVerdict::Certified => Verdict::Certified,
        KatoVerdict::HypothesisFailed => Verdict::HypothesisFailed,
        KatoVerdict::Violation => Verdict::Violation,
    };
    Ok((
        KatoSection {
            certificate: cert,
            kato_ratio,
            lambda_star_consistency,
        },
        verdict,
    ))
}

/// Executes the requested pipeline. Never fails: module errors become an
/// `input_error` certificate carrying the message.
pub fn run_certify(scenario: &Scenario, mode: Mode, opts: &CertifyOptions) -> Certificate {
    let mut cert = Certificate {
        schema_version: SCHEMA_VERSION,
        scenario: ScenarioEcho::new(scenario),
        mode,
        options: *opts,
        landau: None,
        kato: None,
        sidecars: Sidecars {
            orbit_f: None,
            orbit_a2f: None,
            dynamical: None,
            kato_lambda: None,
        },
        verdict: Verdict::InputError,
        exit_code: Verdict::InputError.exit_code(),
        matches_expected: None,
        error: None,
    };
    let stem = file_stem(&scenario.name);

    let outcome = (|| -> Result<Verdict> {
        if mode.kato() && !scenario.norm.has_inner_product() {
            return Err(Error::argument(format!(
                "mode {mode} needs the l2 norm, scenario uses {}",
                scenario.norm
            )));
        }
        let mut verdicts = Vec::new();
        if mode.landau() {
            let (section, v) = landau_section(scenario, opts)?;
            cert.landau = Some(section);
            cert.sidecars.orbit_f = Some(format!("{stem}.orbit_f.csv"));
            cert.sidecars.orbit_a2f = Some(format!("{stem}.orbit_a2f.csv"));
            cert.sidecars.dynamical = Some(format!("{stem}.dynamical.csv"));
            verdicts.push(v);
        }
        if mode.kato() {
            let (section, v) = kato_section(scenario, opts)?;
            cert.kato = Some(section);
            cert.sidecars.kato_lambda = Some(format!("{stem}.kato_lambda.csv"));
            verdicts.push(v);
        }
        // violation outranks a failed hypothesis, which outranks success
        Ok(verdicts.into_iter().max().unwrap_or(Verdict::Certified))
    })();

    match outcome {
        Ok(v) => cert.verdict = v,
        Err(e) => {
            cert.verdict = Verdict::InputError;
            cert.error = Some(e.to_string());
        }
    }
    cert.exit_code = cert.verdict.exit_code();
    cert.matches_expected = match scenario.expected {
        Expected::Pass => Some(cert.verdict == Verdict::Certified),
        Expected::Fail => Some(cert.verdict == Verdict::HypothesisFailed),
        Expected::Exploratory => None,
    };
    cert
}
