use ndarray::Array1;
use num_complex::Complex64;

use crate::error::{Error, Result};

fn check_panels(panels: usize) -> Result<()> {
    if panels == 0 || panels % 2 != 0 {
        return Err(Error::argument(format!(
            "Simpson panel count must be positive and even, got {panels}"
        )));
    }
    Ok(())
}

/// Composite Simpson rule for a vector-valued integrand on `[a, b]`.
pub fn composite_simpson<F>(f: F, a: f64, b: f64, panels: usize) -> Result<Array1<Complex64>>
where
    F: Fn(f64) -> Result<Array1<Complex64>>,
{
    check_panels(panels)?;
    let h = (b - a) / panels as f64;
    let mut acc = f(a)? + f(b)?;
    for k in 1..panels {
        let w = if k % 2 == 1 { 4.0 } else { 2.0 };
        acc = acc + f(a + k as f64 * h)? * Complex64::new(w, 0.0);
    }
    Ok(acc * Complex64::new(h / 3.0, 0.0))
}

pub fn composite_simpson_scalar<F>(f: F, a: f64, b: f64, panels: usize) -> Result<f64>
where
    F: Fn(f64) -> f64,
{
    check_panels(panels)?;
    let h = (b - a) / panels as f64;
    let mut acc = f(a) + f(b);
    for k in 1..panels {
        let w = if k % 2 == 1 { 4.0 } else { 2.0 };
        acc += w * f(a + k as f64 * h);
    }
    Ok(acc * h / 3.0)
}
