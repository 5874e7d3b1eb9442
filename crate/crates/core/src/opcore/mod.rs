//! Finite-dimensional operator engine.
//!
//! Generators are small square matrices over `Complex64`; purely real input
//! stays real through every operation because all arithmetic on zero
//! imaginary parts is exact.

mod expm;
mod quadrature;

use std::fmt;

use ndarray::{Array1, Array2};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use expm::matrix_exp;
pub use quadrature::{composite_simpson, composite_simpson_scalar};

pub type Scalar = Complex64;

/// Structure tag selecting fast paths in [`expm_apply`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Structure {
    Dense,
    Diagonal,
    Tridiagonal,
    /// `αI + σN` with `N` the nilpotent upper shift (`N e_{k+1} = e_k`).
    Shift,
    /// `−ωI + S` with `S` real skew-symmetric.
    SkewDissipative,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Generator {
    matrix: Array2<Scalar>,
    structure: Structure,
}

impl Generator {
    pub fn dense(matrix: Array2<Scalar>) -> Result<Self> {
        Self::with_structure(matrix, Structure::Dense)
    }

    /// Dense generator from real rows.
    pub fn from_real_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::argument("generator matrix must be square"));
        }
        let matrix = Array2::from_shape_fn((n, n), |(i, j)| Scalar::new(rows[i][j], 0.0));
        Self::dense(matrix)
    }

    pub fn diagonal(entries: Vec<Scalar>) -> Result<Self> {
        let n = entries.len();
        let mut matrix = Array2::zeros((n, n));
        for (i, d) in entries.into_iter().enumerate() {
            matrix[(i, i)] = d;
        }
        Self::with_structure(matrix, Structure::Diagonal)
    }

    pub fn real_diagonal(entries: &[f64]) -> Result<Self> {
        Self::diagonal(entries.iter().map(|&d| Scalar::new(d, 0.0)).collect())
    }

    pub fn tridiagonal(sub: &[f64], diag: &[f64], sup: &[f64]) -> Result<Self> {
        let n = diag.len();
        if sub.len() + 1 != n.max(1) || sup.len() + 1 != n.max(1) {
            return Err(Error::argument("tridiagonal bands have inconsistent lengths"));
        }
        let mut matrix = Array2::zeros((n, n));
        for i in 0..n {
            matrix[(i, i)] = Scalar::new(diag[i], 0.0);
            if i + 1 < n {
                matrix[(i + 1, i)] = Scalar::new(sub[i], 0.0);
                matrix[(i, i + 1)] = Scalar::new(sup[i], 0.0);
            }
        }
        Self::with_structure(matrix, Structure::Tridiagonal)
    }

    /// `alpha·I + sigma·N`.
    pub fn shift(n: usize, alpha: f64, sigma: f64) -> Result<Self> {
        let mut matrix = Array2::zeros((n, n));
        for i in 0..n {
            matrix[(i, i)] = Scalar::new(alpha, 0.0);
            if i + 1 < n {
                matrix[(i, i + 1)] = Scalar::new(sigma, 0.0);
            }
        }
        Self::with_structure(matrix, Structure::Shift)
    }

    /// `−omega·I + skew`, `skew` real skew-symmetric.
    pub fn skew_dissipative(omega: f64, skew: &Array2<f64>) -> Result<Self> {
        let n = skew.nrows();
        if skew.ncols() != n {
            return Err(Error::argument("skew part must be square"));
        }
        let matrix = Array2::from_shape_fn((n, n), |(i, j)| {
            let d = if i == j { -omega } else { 0.0 };
            Scalar::new(skew[(i, j)] + d, 0.0)
        });
        Self::with_structure(matrix, Structure::SkewDissipative)
    }

    /// Validates that `matrix` is square, finite, and consistent with `structure`.
    pub fn with_structure(matrix: Array2<Scalar>, structure: Structure) -> Result<Self> {
        let n = matrix.nrows();
        if matrix.ncols() != n {
            return Err(Error::argument(format!(
                "generator must be square, got {}x{}",
                n,
                matrix.ncols()
            )));
        }
        if n == 0 {
            return Err(Error::argument("generator must have positive dimension"));
        }
        if matrix.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::argument("generator entries must be finite"));
        }
        let zero = Scalar::new(0.0, 0.0);
        let consistent = match structure {
            Structure::Dense => true,
            Structure::Diagonal => matrix.indexed_iter().all(|((i, j), z)| i == j || *z == zero),
            Structure::Tridiagonal => matrix
                .indexed_iter()
                .all(|((i, j), z)| i.abs_diff(j) <= 1 || *z == zero),
            Structure::Shift => {
                let alpha = matrix[(0, 0)];
                let sigma = if n > 1 { matrix[(0, 1)] } else { zero };
                matrix.indexed_iter().all(|((i, j), z)| {
                    if i == j {
                        *z == alpha
                    } else if j == i + 1 {
                        *z == sigma
                    } else {
                        *z == zero
                    }
                })
            }
            Structure::SkewDissipative => {
                let d = matrix[(0, 0)];
                d.im == 0.0
                    && d.re <= 0.0
                    && matrix
                        .indexed_iter()
                        .all(|((i, j), z)| z.im == 0.0 && if i == j { *z == d } else { z.re == -matrix[(j, i)].re })
            }
        };
        if !consistent {
            return Err(Error::argument(format!(
                "matrix entries are inconsistent with the {structure:?} structure tag"
            )));
        }
        Ok(Self { matrix, structure })
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn structure(&self) -> Structure {
        self.structure
    }

    pub fn matrix(&self) -> &Array2<Scalar> {
        &self.matrix
    }

    /// True when every entry has zero imaginary part.
    pub fn is_real(&self) -> bool {
        self.matrix.iter().all(|z| z.im == 0.0)
    }

    /// Frobenius norm.
    pub fn frobenius_norm(&self) -> f64 {
        self.matrix.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// `A + λI`.
    pub fn shifted(&self, lambda: f64) -> Generator {
        let mut matrix = self.matrix.clone();
        for i in 0..self.dim() {
            matrix[(i, i)] += lambda;
        }
        let structure = match self.structure {
            Structure::SkewDissipative => Structure::Dense,
            s => s,
        };
        Generator { matrix, structure }
    }
}

/// A vector in `Cⁿ`.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector(Array1<Scalar>);

impl StateVector {
    pub fn new(entries: Vec<Scalar>) -> Result<Self> {
        if entries.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::argument("state vector entries must be finite"));
        }
        Ok(Self(Array1::from(entries)))
    }

    pub fn from_real(entries: &[f64]) -> Result<Self> {
        Self::new(entries.iter().map(|&x| Scalar::new(x, 0.0)).collect())
    }

    pub fn zeros(n: usize) -> Self {
        Self(Array1::zeros(n))
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn as_array(&self) -> &Array1<Scalar> {
        &self.0
    }

    pub fn entries(&self) -> &[Scalar] {
        self.0.as_slice().expect("contiguous")
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|z| z.re == 0.0 && z.im == 0.0)
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }

    pub fn scaled(&self, s: f64) -> Self {
        Self(&self.0 * Scalar::new(s, 0.0))
    }

    pub fn scaled_complex(&self, s: Scalar) -> Self {
        Self(&self.0 * s)
    }

    pub fn add(&self, other: &Self) -> Self {
        Self(&self.0 + &other.0)
    }

    pub fn sub(&self, other: &Self) -> Self {
        Self(&self.0 - &other.0)
    }

    /// `self + s·other`.
    pub fn add_scaled(&self, s: f64, other: &Self) -> Self {
        Self(&self.0 + &(&other.0 * Scalar::new(s, 0.0)))
    }
}

impl fmt::Display for StateVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, z) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            if z.im == 0.0 {
                write!(f, "{}", z.re)?;
            } else {
                write!(f, "{z}")?;
            }
        }
        write!(f, ")")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum NormKind {
    L1,
    L2,
    Linf,
}

impl NormKind {
    pub fn has_inner_product(self) -> bool {
        self == NormKind::L2
    }
}

impl fmt::Display for NormKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            NormKind::L1 => "l1",
            NormKind::L2 => "l2",
            NormKind::Linf => "linf",
        })
    }
}

impl std::str::FromStr for NormKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "l1" => Ok(NormKind::L1),
            "l2" => Ok(NormKind::L2),
            "linf" => Ok(NormKind::Linf),
            other => Err(Error::argument(format!(
                "unknown norm `{other}` (expected l1, l2 or linf)"
            ))),
        }
    }
}

fn check_dims(a: &Generator, v: &StateVector) -> Result<()> {
    if a.dim() != v.dim() {
        return Err(Error::argument(format!(
            "dimension mismatch: generator is {0}x{0}, vector has length {1}",
            a.dim(),
            v.dim()
        )));
    }
    Ok(())
}

/// `Av`.
pub fn apply(a: &Generator, v: &StateVector) -> Result<StateVector> {
    check_dims(a, v)?;
    let out = match a.structure {
        Structure::Diagonal => Array1::from_shape_fn(v.dim(), |i| a.matrix[(i, i)] * v.0[i]),
        _ => a.matrix.dot(&v.0),
    };
    Ok(StateVector(out))
}

/// `e^{tA} v`.
///
/// Diagonal generators use entrywise exponentials and shift generators the
/// terminating Taylor series. Everything else goes through scaling and
/// squaring with a diagonal Padé approximant, applied to `A − μI` where
/// `μ = tr(A)/n`.
pub fn expm_apply(a: &Generator, t: f64, v: &StateVector) -> Result<StateVector> {
    check_dims(a, v)?;
    if t.is_nan() || t < 0.0 {
        return Err(Error::domain(format!("semigroup time must be >= 0, got {t}")));
    }
    if t == 0.0 {
        return Ok(v.clone());
    }
    let n = a.dim();
    let out = match a.structure {
        Structure::Diagonal => Array1::from_shape_fn(n, |i| (a.matrix[(i, i)] * t).exp() * v.0[i]),
        Structure::Shift => {
            let alpha = a.matrix[(0, 0)];
            let sigma = if n > 1 { a.matrix[(0, 1)] } else { Scalar::new(0.0, 0.0) };
            // Σ_k (σt)^k/k! N^k v, with (N^k v)_i = v_{i+k}
            let mut acc = v.0.clone();
            let mut coeff = Scalar::new(1.0, 0.0);
            for k in 1..n {
                coeff = coeff * sigma * t / k as f64;
                for i in 0..n - k {
                    acc[i] += coeff * v.0[i + k];
                }
            }
            acc * (alpha * t).exp()
        }
        Structure::Dense | Structure::Tridiagonal | Structure::SkewDissipative => {
            let mu = a.matrix.diag().sum() / n as f64;
            let mut shifted = &a.matrix * Scalar::new(t, 0.0);
            for i in 0..n {
                shifted[(i, i)] -= mu * t;
            }
            let e = matrix_exp(&shifted);
            e.dot(&v.0) * (mu * t).exp()
        }
    };
    let out = StateVector(out);
    if !out.is_finite() {
        return Err(Error::Overflow(format!("e^{{tA}}v is not finite at t = {t}")));
    }
    Ok(out)
}

pub fn norm(v: &StateVector, kind: NormKind) -> f64 {
    match kind {
        NormKind::L1 => v.0.iter().map(|z| z.norm()).sum(),
        NormKind::L2 => {
            // scaled sum of squares avoids overflow/underflow for extreme entries
            let scale = v.0.iter().map(|z| z.norm()).fold(0.0, f64::max);
            if scale == 0.0 || !scale.is_finite() {
                return scale;
            }
            scale * v.0.iter().map(|z| (z / scale).norm_sqr()).sum::<f64>().sqrt()
        }
        NormKind::Linf => v.0.iter().map(|z| z.norm()).fold(0.0, f64::max),
    }
}

/// `(u | v) = Σ uᵢ conj(vᵢ)`: linear in the first argument, conjugate-linear
/// in the second.
pub fn inner(u: &StateVector, v: &StateVector) -> Result<Scalar> {
    if u.dim() != v.dim() {
        return Err(Error::argument(format!(
            "dimension mismatch in inner product: {} vs {}",
            u.dim(),
            v.dim()
        )));
    }
    Ok(u.0.iter().zip(v.0.iter()).map(|(a, b)| a * b.conj()).sum())
}

/// l2 residual of `e^{tA}f = f + tAf + ∫₀ᵗ (t−τ) e^{τA}A²f dτ`, with the
/// integral replaced by composite Simpson on `panels` subintervals.
pub fn verify_integral_representation(a: &Generator, f: &StateVector, t: f64, panels: usize) -> Result<f64> {
    if panels == 0 || panels % 2 != 0 {
        return Err(Error::argument(format!(
            "Simpson panel count must be positive and even, got {panels}"
        )));
    }
    if t.is_nan() || t < 0.0 {
        return Err(Error::domain(format!("time must be >= 0, got {t}")));
    }
    let af = apply(a, f)?;
    let a2f = apply(a, &af)?;
    let integral = composite_simpson(|tau| Ok(expm_apply(a, tau, &a2f)?.scaled(t - tau).0), 0.0, t, panels)?;
    let lhs = expm_apply(a, t, f)?;
    let residual = lhs.sub(f).add_scaled(-t, &af).sub(&StateVector(integral));
    Ok(norm(&residual, NormKind::L2))
}
