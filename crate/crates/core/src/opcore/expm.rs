//! Dense matrix exponential by scaling and squaring with diagonal Padé
//! approximants of degree 3, 5, 7, 9 or 13 (Higham 2005).

use ndarray::Array2;
use num_complex::Complex64;

const THETA_3: f64 = 1.495585217958292e-2;
const THETA_5: f64 = 2.539398330063230e-1;
const THETA_7: f64 = 9.504178996162932e-1;
const THETA_9: f64 = 2.097847961257068e0;
const THETA_13: f64 = 5.371920351148152e0;

const B3: [f64; 4] = [120.0, 60.0, 12.0, 1.0];
const B5: [f64; 6] = [30240.0, 15120.0, 3360.0, 420.0, 30.0, 1.0];
const B7: [f64; 8] = [17297280.0, 8648640.0, 1995840.0, 277200.0, 25200.0, 1512.0, 56.0, 1.0];
const B9: [f64; 10] = [
    17643225600.0,
    8821612800.0,
    2075673600.0,
    302702400.0,
    30270240.0,
    2162160.0,
    110880.0,
    3960.0,
    90.0,
    1.0,
];
const B13: [f64; 14] = [
    64764752532480000.0,
    32382376266240000.0,
    7771770303897600.0,
    1187353796428800.0,
    129060195264000.0,
    10559470521600.0,
    670442572800.0,
    33522128640.0,
    1323241920.0,
    40840800.0,
    960960.0,
    16380.0,
    182.0,
    1.0,
];

/// `exp(A)` for a square complex matrix.
///
/// # Panics
/// Panics if `a` is not square.
pub fn matrix_exp(a: &Array2<Complex64>) -> Array2<Complex64> {
    let n = a.nrows();
    assert_eq!(n, a.ncols(), "matrix_exp requires a square matrix");
    if n == 0 {
        return Array2::zeros((0, 0));
    }
    if n == 1 {
        return Array2::from_elem((1, 1), a[(0, 0)].exp());
    }

    let norm = one_norm(a);
    for (theta, coeffs) in [
        (THETA_3, &B3[..]),
        (THETA_5, &B5[..]),
        (THETA_7, &B7[..]),
        (THETA_9, &B9[..]),
    ] {
        if norm <= theta {
            return pade_low(a, coeffs);
        }
    }

    let squarings = if norm > THETA_13 {
        (norm / THETA_13).log2().ceil() as i32
    } else {
        0
    };
    let scaled = a * Complex64::new(2f64.powi(-squarings), 0.0);
    let mut result = pade13(&scaled);
    for _ in 0..squarings {
        result = result.dot(&result);
    }
    result
}

fn one_norm(a: &Array2<Complex64>) -> f64 {
    a.columns()
        .into_iter()
        .map(|col| col.iter().map(|z| z.norm()).sum::<f64>())
        .fold(0.0, f64::max)
}

fn identity(n: usize) -> Array2<Complex64> {
    Array2::from_diag_elem(n, Complex64::new(1.0, 0.0))
}

fn re(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

/// Padé approximant of degree 3..9 from even powers of `a`.
fn pade_low(a: &Array2<Complex64>, b: &[f64]) -> Array2<Complex64> {
    let n = a.nrows();
    let a2 = a.dot(a);
    let mut power = identity(n);
    let mut u = Array2::<Complex64>::zeros((n, n));
    let mut v = Array2::<Complex64>::zeros((n, n));
    for k in 0..b.len() / 2 {
        u = u + &power * re(b[2 * k + 1]);
        v = v + &power * re(b[2 * k]);
        power = power.dot(&a2);
    }
    let u = a.dot(&u);
    solve(&v - &u, &v + &u)
}

fn pade13(a: &Array2<Complex64>) -> Array2<Complex64> {
    let n = a.nrows();
    let eye = identity(n);
    let a2 = a.dot(a);
    let a4 = a2.dot(&a2);
    let a6 = a2.dot(&a4);
    let w1 = &a6 * re(B13[13]) + &a4 * re(B13[11]) + &a2 * re(B13[9]);
    let w2 = w1.dot(&a6) + &a6 * re(B13[7]) + &a4 * re(B13[5]) + &a2 * re(B13[3]) + &eye * re(B13[1]);
    let u = a.dot(&w2);
    let z1 = &a6 * re(B13[12]) + &a4 * re(B13[10]) + &a2 * re(B13[8]);
    let v = z1.dot(&a6) + &a6 * re(B13[6]) + &a4 * re(B13[4]) + &a2 * re(B13[2]) + &eye * re(B13[0]);
    solve(&v - &u, &v + &u)
}

/// Solves `lhs · X = rhs` by Gaussian elimination with partial pivoting.
fn solve(mut lhs: Array2<Complex64>, mut rhs: Array2<Complex64>) -> Array2<Complex64> {
    let n = lhs.nrows();
    let m = rhs.ncols();
    for col in 0..n {
        let pivot = (col..n)
            .max_by(|&i, &j| lhs[(i, col)].norm().total_cmp(&lhs[(j, col)].norm()))
            .expect("non-empty range");
        if pivot != col {
            for k in 0..n {
                lhs.swap((col, k), (pivot, k));
            }
            for k in 0..m {
                rhs.swap((col, k), (pivot, k));
            }
        }
        let d = lhs[(col, col)];
        for row in col + 1..n {
            let factor = lhs[(row, col)] / d;
            if factor == Complex64::new(0.0, 0.0) {
                continue;
            }
            for k in col..n {
                let x = lhs[(col, k)];
                lhs[(row, k)] -= factor * x;
            }
            for k in 0..m {
                let x = rhs[(col, k)];
                rhs[(row, k)] -= factor * x;
            }
        }
    }
    for col in (0..n).rev() {
        let d = lhs[(col, col)];
        for k in 0..m {
            let mut acc = rhs[(col, k)];
            for j in col + 1..n {
                acc -= lhs[(col, j)] * rhs[(j, k)];
            }
            rhs[(col, k)] = acc / d;
        }
    }
    rhs
}
