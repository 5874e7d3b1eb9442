//! Built-in scenarios.

use super::scenario::{Entry, Expected, GeneratorSpec, Scenario, ScenarioFile};
use crate::opcore::NormKind;

/// Seed of the catalog's random skew-dissipative instance.
pub const SKEW_RANDOM_SEED: u64 = 20_240_917;

pub struct CatalogEntry {
    pub label: &'static str,
    pub description: &'static str,
    pub scenario: Scenario,
}

fn file(
    name: &str,
    generator: GeneratorSpec,
    f: Option<Vec<f64>>,
    omega: Option<f64>,
    phi: &str,
    expected: Expected,
) -> ScenarioFile {
    ScenarioFile {
        name: name.into(),
        generator,
        f: f.map(|v| v.into_iter().map(Entry::Real).collect()),
        omega,
        phi: phi.into(),
        norm: NormKind::L2,
        expected,
    }
}

fn resolve(f: ScenarioFile) -> Scenario {
    let location = format!("catalog:{}", f.name);
    Scenario::resolve(f, &location, None).expect("catalog scenarios are valid")
}

pub fn catalog_entries() -> Vec<CatalogEntry> {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let raw = [
        (
            "i",
            "A = -I on C^3, f normalized ones, omega = 1",
            file(
                "identity",
                GeneratorSpec::ScaledIdentity { n: 3, mu: 1.0 },
                None,
                Some(1.0),
                "exp",
                Expected::Pass,
            ),
        ),
        (
            "ii",
            "A = diag(-1, -2), f = (1, 1)/sqrt 2, omega = 1",
            file(
                "diag",
                GeneratorSpec::Diagonal {
                    entries: vec![Entry::Real(-1.0), Entry::Real(-2.0)],
                },
                Some(vec![s, s]),
                Some(1.0),
                "exp",
                Expected::Pass,
            ),
        ),
        (
            "iii",
            "rotation decay A = -I + [[0, 1], [-1, 0]], f = e1, omega = 1",
            file(
                "skew2",
                GeneratorSpec::SkewDissipative {
                    mu: 1.0,
                    skew: vec![vec![0.0, 1.0], vec![-1.0, 0.0]],
                },
                Some(vec![1.0, 0.0]),
                Some(1.0),
                "exp",
                Expected::Pass,
            ),
        ),
        (
            "iii",
            "A = -I + S, S seeded random skew-symmetric 6x6, omega = 1",
            file(
                "skew-random",
                GeneratorSpec::SkewRandom {
                    n: 6,
                    mu: 1.0,
                    seed: SKEW_RANDOM_SEED,
                    scale: 0.5,
                },
                None,
                None,
                "exp",
                Expected::Pass,
            ),
        ),
        (
            "iv",
            "Dirichlet Laplacian, n = 8, unit spacing, omega = spectral gap",
            file(
                "laplacian",
                GeneratorSpec::Laplacian {
                    n: 8,
                    spacing: Some(1.0),
                },
                None,
                None,
                "exp",
                Expected::Pass,
            ),
        ),
        (
            "v",
            "A = -I + N (upper shift) on C^3, tight omega = 1",
            file(
                "shift-tight",
                GeneratorSpec::Shift {
                    n: 3,
                    mu: 1.0,
                    sigma: 1.0,
                },
                None,
                Some(1.0),
                "exp",
                Expected::Fail,
            ),
        ),
        (
            "vi",
            "A = diag(-1, -2), f = e1, omega = 1, quadratic-rational phi",
            file(
                "diag-quad",
                GeneratorSpec::Diagonal {
                    entries: vec![Entry::Real(-1.0), Entry::Real(-2.0)],
                },
                Some(vec![1.0, 0.0]),
                Some(1.0),
                "quad",
                Expected::Fail,
            ),
        ),
    ];
    raw.into_iter()
        .map(|(label, description, f)| CatalogEntry {
            label,
            description,
            scenario: resolve(f),
        })
        .collect()
}

pub fn catalog() -> Vec<Scenario> {
    catalog_entries().into_iter().map(|e| e.scenario).collect()
}

pub fn find(name: &str) -> Option<Scenario> {
    catalog().into_iter().find(|s| s.name == name)
}

/// `−I + S` with a seeded random skew part of dimension `n`; used for the
/// randomized regression families.
pub fn skew_random(n: usize, seed: u64) -> Scenario {
    resolve(file(
        &format!("skew-random-{n}-{seed}"),
        GeneratorSpec::SkewRandom {
            n,
            mu: 1.0,
            seed,
            scale: 0.5,
        },
        None,
        None,
        "exp",
        Expected::Pass,
    ))
}
