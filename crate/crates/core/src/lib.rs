//! Numerical laboratory for Landau and Kato type inequalities along
//! semigroup orbits.
//!
//! A finite square matrix `A` plays the role of a semigroup generator and a
//! nonzero vector `f` the distinguished element. The crate certifies the
//! orbital decay hypotheses
//!
//! ```text
//! ‖e^{tA} f‖ ≤ φ(ωt) ‖f‖,    ‖e^{tA} A²f‖ ≤ φ''(ωt) ‖A²f‖
//! ```
//!
//! on explicit time grids, computes the localized quantities
//! `a = ‖f‖`, `b = ‖Af‖/ω`, `c = ‖A²f‖/ω²`, and checks the inequalities
//! that follow from them:
//!
//! * the dynamical inequality `φ(s)(a+c) + s(c−b) + (a−c) ≥ 0` for `s ≥ 0`,
//! * the localized Landau bound `b² ≤ 4ac`,
//! * the interpolated bound `b ≤ c − (a+c) g⁻¹((c−a)/(c+a))`,
//!   with `g(x) = x(1 − log x)`,
//! * on the Hilbert side, the contractivity family
//!   `‖e^{tA}(A+λ)f‖ ≤ ‖(A+λ)f‖` and the Kato inequality
//!   `‖Af‖² ≤ 2‖f‖‖A²f‖`.
//!
//! Modules:
//!
//! * [`phi`]: comparison functions and their admissibility.
//! * [`opcore`]: generators, vectors, norms, matrix exponential, quadrature.
//! * [`landau`]: orbital checks and the Banach-space inequalities.
//! * [`interp`]: `g`, its inverse, and the interpolated bound.
//! * [`kato`]: the Hilbert-space inequalities.
//! * [`bench`]: scenario catalog, scenario files and certificates.

pub mod bench;
pub mod error;
pub mod interp;
pub mod kato;
pub mod landau;
pub mod opcore;
pub mod phi;

pub use error::{Error, Result};
