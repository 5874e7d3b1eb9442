//! Scenario files.
//!
//! A scenario is a JSON document:
//!
//! ```json
//! {
//!   "name": "diag",
//!   "generator": { "kind": "diagonal", "entries": [-1, -2] },
//!   "f": [0.7071067811865476, 0.7071067811865476],
//!   "omega": 1.0,
//!   "phi": "exp",
//!   "norm": "l2",
//!   "expected": "pass"
//! }
//! ```
//!
//! Complex entries are written as `[re, im]`. `f` defaults to the normalized
//! all-ones vector; `omega` may be omitted for generator kinds with a closed
//! form decay rate.

use std::path::Path;

use ndarray::Array2;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::opcore::{Generator, NormKind, Scalar, StateVector};
use crate::phi::ComparisonFunction;

/// A real number or a `[re, im]` pair.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Entry {
    Real(f64),
    Complex([f64; 2]),
}

impl Entry {
    pub fn to_scalar(self) -> Scalar {
        match self {
            Entry::Real(x) => Scalar::new(x, 0.0),
            Entry::Complex([re, im]) => Scalar::new(re, im),
        }
    }

    pub fn from_scalar(z: Scalar) -> Self {
        if z.im == 0.0 {
            Entry::Real(z.re)
        } else {
            Entry::Complex([z.re, z.im])
        }
    }
}

fn default_scale() -> f64 {
    1.0
}

/// Generator constructor parameters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum GeneratorSpec {
    Dense {
        matrix: Vec<Vec<Entry>>,
    },
    /// `−μI` of size `n`.
    ScaledIdentity {
        n: usize,
        mu: f64,
    },
    Diagonal {
        entries: Vec<Entry>,
    },
    /// `−μI + S` with `S` given and real skew-symmetric.
    SkewDissipative {
        mu: f64,
        skew: Vec<Vec<f64>>,
    },
    /// `−μI + S` with the strict upper triangle of `S` uniform on
    /// `[−scale, scale]`, drawn from ChaCha8 seeded with `seed`.
    SkewRandom {
        n: usize,
        mu: f64,
        seed: u64,
        #[serde(default = "default_scale")]
        scale: f64,
    },
    /// Dirichlet Laplacian `(1, −2, 1)/h²`; `spacing` defaults to `1/(n+1)`.
    Laplacian {
        n: usize,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        spacing: Option<f64>,
    },
    /// `−μI + σN` with `N` the upper shift.
    Shift {
        n: usize,
        mu: f64,
        sigma: f64,
    },
}

impl GeneratorSpec {
    pub fn seed(&self) -> Option<u64> {
        match self {
            GeneratorSpec::SkewRandom { seed, .. } => Some(*seed),
            _ => None,
        }
    }

    /// Builds the generator; errors carry the offending field path.
    pub fn build(&self, location: &str) -> Result<Generator> {
        let bad = |field: &str, msg: String| Error::schema(location, format!("generator.{field}"), msg);
        let positive_n = |n: usize| {
            if n == 0 {
                Err(bad("n", "dimension must be positive".into()))
            } else {
                Ok(n)
            }
        };
        let finite = |field: &str, x: f64| {
            if x.is_finite() {
                Ok(x)
            } else {
                Err(bad(field, format!("must be finite, got {x}")))
            }
        };
        match self {
            GeneratorSpec::Dense { matrix } => {
                let n = matrix.len();
                if n == 0 {
                    return Err(bad("matrix", "matrix is empty".into()));
                }
                if let Some(i) = matrix.iter().position(|r| r.len() != n) {
                    return Err(bad(
                        "matrix",
                        format!(
                            "matrix must be square: row {i} has {} entries, expected {n}",
                            matrix[i].len()
                        ),
                    ));
                }
                let m = Array2::from_shape_fn((n, n), |(i, j)| matrix[i][j].to_scalar());
                Generator::dense(m).map_err(|e| bad("matrix", e.to_string()))
            }
            GeneratorSpec::ScaledIdentity { n, mu } => {
                let n = positive_n(*n)?;
                let mu = finite("mu", *mu)?;
                Generator::real_diagonal(&vec![-mu; n]).map_err(|e| bad("mu", e.to_string()))
            }
            GeneratorSpec::Diagonal { entries } => {
                if entries.is_empty() {
                    return Err(bad("entries", "diagonal is empty".into()));
                }
                Generator::diagonal(entries.iter().map(|e| e.to_scalar()).collect())
                    .map_err(|e| bad("entries", e.to_string()))
            }
            GeneratorSpec::SkewDissipative { mu, skew } => {
                let mu = finite("mu", *mu)?;
                if mu < 0.0 {
                    return Err(bad("mu", format!("must be >= 0, got {mu}")));
                }
                let n = skew.len();
                if n == 0 || skew.iter().any(|r| r.len() != n) {
                    return Err(bad("skew", "skew part must be a non-empty square matrix".into()));
                }
                let s = Array2::from_shape_fn((n, n), |(i, j)| skew[i][j]);
                Generator::skew_dissipative(mu, &s).map_err(|e| bad("skew", e.to_string()))
            }
            GeneratorSpec::SkewRandom { n, mu, seed, scale } => {
                let n = positive_n(*n)?;
                let mu = finite("mu", *mu)?;
                if mu < 0.0 {
                    return Err(bad("mu", format!("must be >= 0, got {mu}")));
                }
                let scale = finite("scale", *scale)?;
                if scale < 0.0 {
                    return Err(bad("scale", format!("must be >= 0, got {scale}")));
                }
                Generator::skew_dissipative(mu, &random_skew(n, *seed, scale)).map_err(|e| bad("skew", e.to_string()))
            }
            GeneratorSpec::Laplacian { n, spacing } => {
                let n = positive_n(*n)?;
                let h = laplacian_spacing(n, *spacing);
                if !(h > 0.0) || !h.is_finite() {
                    return Err(bad("spacing", format!("must be positive, got {h}")));
                }
                let off = 1.0 / (h * h);
                let sub = vec![off; n - 1];
                Generator::tridiagonal(&sub, &vec![-2.0 * off; n], &sub).map_err(|e| bad("n", e.to_string()))
            }
            GeneratorSpec::Shift { n, mu, sigma } => {
                let n = positive_n(*n)?;
                let mu = finite("mu", *mu)?;
                let sigma = finite("sigma", *sigma)?;
                Generator::shift(n, -mu, sigma).map_err(|e| bad("sigma", e.to_string()))
            }
        }
    }

    /// Decay rate implied by the construction, when there is a closed form.
    pub fn natural_omega(&self) -> Option<f64> {
        match self {
            GeneratorSpec::Dense { .. } => None,
            GeneratorSpec::ScaledIdentity { mu, .. }
            | GeneratorSpec::SkewDissipative { mu, .. }
            | GeneratorSpec::SkewRandom { mu, .. }
            | GeneratorSpec::Shift { mu, .. } => Some(*mu),
            GeneratorSpec::Diagonal { entries } => entries.iter().map(|e| -e.to_scalar().re).min_by(f64::total_cmp),
            GeneratorSpec::Laplacian { n, spacing } => {
                let h = laplacian_spacing(*n, *spacing);
                Some(laplacian_gap(*n, h))
            }
        }
    }
}

fn laplacian_spacing(n: usize, spacing: Option<f64>) -> f64 {
    spacing.unwrap_or(1.0 / (n as f64 + 1.0))
}

/// Smallest eigenvalue magnitude of the `n`-point Dirichlet Laplacian with spacing `h`.
pub fn laplacian_gap(n: usize, h: f64) -> f64 {
    let theta = std::f64::consts::PI / (n as f64 + 1.0);
    // 1 − cos θ = 2 sin²(θ/2), without cancellation
    4.0 / (h * h) * (0.5 * theta).sin().powi(2)
}

fn random_skew(n: usize, seed: u64, scale: f64) -> Array2<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut s = Array2::zeros((n, n));
    for i in 0..n {
        for j in i + 1..n {
            let x = if scale > 0.0 {
                rng.random_range(-scale..=scale)
            } else {
                0.0
            };
            s[(i, j)] = x;
            s[(j, i)] = -x;
        }
    }
    s
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Expected {
    Pass,
    Fail,
    #[default]
    Exploratory,
}

fn default_phi() -> String {
    "exp".into()
}

fn default_norm() -> NormKind {
    NormKind::L2
}

/// On-disk form of a scenario.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioFile {
    pub name: String,
    pub generator: GeneratorSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub f: Option<Vec<Entry>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub omega: Option<f64>,
    #[serde(default = "default_phi")]
    pub phi: String,
    #[serde(default = "default_norm")]
    pub norm: NormKind,
    #[serde(default)]
    pub expected: Expected,
}

/// A fully resolved scenario.
#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub name: String,
    pub spec: GeneratorSpec,
    pub generator: Generator,
    pub f: StateVector,
    pub omega: f64,
    pub phi_name: String,
    pub phi: ComparisonFunction,
    pub norm: NormKind,
    pub expected: Expected,
}

impl Scenario {
    /// Resolves a parsed file. `base_dir` anchors relative `custom:` paths.
    pub fn resolve(file: ScenarioFile, location: &str, base_dir: Option<&Path>) -> Result<Self> {
        if file.name.trim().is_empty() {
            return Err(Error::schema(location, "name", "must not be empty"));
        }
        let generator = file.generator.build(location)?;
        let n = generator.dim();
        let f = match &file.f {
            Some(entries) => {
                if entries.len() != n {
                    return Err(Error::schema(
                        location,
                        "f",
                        format!("length {} does not match generator dimension {n}", entries.len()),
                    ));
                }
                StateVector::new(entries.iter().map(|e| e.to_scalar()).collect())
                    .map_err(|e| Error::schema(location, "f", e.to_string()))?
            }
            None => StateVector::from_real(&vec![1.0 / (n as f64).sqrt(); n])?,
        };
        if f.is_zero() {
            return Err(Error::schema(location, "f", "distinguished vector must be nonzero"));
        }
        if !f.is_finite() {
            return Err(Error::schema(location, "f", "entries must be finite"));
        }
        let omega = match file.omega.or_else(|| file.generator.natural_omega()) {
            Some(w) => w,
            None => {
                return Err(Error::schema(
                    location,
                    "omega",
                    "required: this generator kind has no closed form decay rate",
                ))
            }
        };
        if !(omega > 0.0) || !omega.is_finite() {
            return Err(Error::schema(
                location,
                "omega",
                format!("must be positive, got {omega}"),
            ));
        }
        let phi = ComparisonFunction::from_name(&file.phi, base_dir)
            .map_err(|e| Error::schema(location, "phi", e.to_string()))?;
        Ok(Self {
            name: file.name,
            spec: file.generator,
            generator,
            f,
            omega,
            phi_name: file.phi,
            phi,
            norm: file.norm,
            expected: file.expected,
        })
    }

    /// File form with `f` and `omega` written out explicitly.
    pub fn to_file(&self) -> ScenarioFile {
        ScenarioFile {
            name: self.name.clone(),
            generator: self.spec.clone(),
            f: Some(self.f.entries().iter().map(|&z| Entry::from_scalar(z)).collect()),
            omega: Some(self.omega),
            phi: self.phi_name.clone(),
            norm: self.norm,
            expected: self.expected,
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(&self.to_file()).expect("scenario serializes");
        s.push('\n');
        s
    }

    pub fn seed(&self) -> Option<u64> {
        self.spec.seed()
    }

    /// Replaces the seed of a randomized generator; other kinds are unchanged.
    pub fn reseeded(&self, new_seed: u64) -> Result<Self> {
        match &self.spec {
            GeneratorSpec::SkewRandom { n, mu, scale, .. } => {
                let spec = GeneratorSpec::SkewRandom {
                    n: *n,
                    mu: *mu,
                    seed: new_seed,
                    scale: *scale,
                };
                let generator = spec.build(&self.name)?;
                Ok(Self {
                    spec,
                    generator,
                    ..self.clone()
                })
            }
            _ => Ok(self.clone()),
        }
    }
}

/// Field path for a deserialization error: the serde path, extended by the
/// field named in unknown/missing-field messages.
fn error_field(path: &str, message: &str) -> String {
    let named = ["unknown field `", "missing field `", "unknown variant `"]
        .iter()
        .find_map(|prefix| {
            let rest = message.split(prefix).nth(1)?;
            Some(rest.split('`').next()?.to_string())
        });
    let path = if path == "." { "" } else { path };
    match (path.is_empty(), named) {
        (true, Some(n)) => n,
        (false, Some(n)) if path.ends_with(&n) || message.starts_with("unknown variant") => path.to_string(),
        (false, Some(n)) => format!("{path}.{n}"),
        (true, None) => "<document>".into(),
        (false, None) => path.to_string(),
    }
}

/// Parses scenario text; `location` names the source in error messages.
pub fn parse_scenario_str(text: &str, location: &str, base_dir: Option<&Path>) -> Result<Scenario> {
    let mut de = serde_json::Deserializer::from_str(text);
    let file: ScenarioFile = serde_path_to_error::deserialize(&mut de).map_err(|e| {
        let path = e.path().to_string();
        let inner = e.into_inner();
        let message = inner.to_string();
        let field = error_field(&path, &message);
        Error::schema(
            format!("{location}:{}:{}", inner.line(), inner.column()),
            field,
            message,
        )
    })?;
    Scenario::resolve(file, location, base_dir)
}

pub fn parse_scenario(path: &Path) -> Result<Scenario> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_scenario_str(&text, &path.display().to_string(), path.parent())
}
