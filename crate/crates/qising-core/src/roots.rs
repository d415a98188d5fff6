//! Simultaneous polynomial root finding (Aberth-Ehrlich iteration).

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Iteration cap for the simultaneous phase.
pub const MAX_ABERTH_ITERS: usize = 1000;

/// Horner evaluation of p and p' at z; coefficients ascending.
fn eval_with_derivative(c: &[Complex64], z: Complex64) -> (Complex64, Complex64) {
    let mut p = Complex64::new(0.0, 0.0);
    let mut dp = Complex64::new(0.0, 0.0);
    for &a in c.iter().rev() {
        dp = dp * z + p;
        p = p * z + a;
    }
    (p, dp)
}

/// Evaluates the polynomial with ascending coefficients `c` at `z`.
pub fn poly_eval(c: &[Complex64], z: Complex64) -> Complex64 {
    c.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, &a| acc * z + a)
}

/// All roots of the polynomial with ascending coefficients `c`, with
/// multiplicity. Leading zero coefficients are dropped; zero roots from
/// vanishing low-order coefficients are returned exactly.
pub fn aberth_roots(c: &[Complex64]) -> Result<Vec<Complex64>> {
    let Some(top) = c.iter().rposition(|a| a.norm() > 0.0) else {
        return Err(Error::Domain("zero polynomial".into()));
    };
    let low = c.iter().position(|a| a.norm() > 0.0).unwrap_or(0);
    let mut roots = vec![Complex64::new(0.0, 0.0); low];
    let scale = c[top];
    let coeffs: Vec<Complex64> = c[low..=top].iter().map(|&a| a / scale).collect();
    let n = coeffs.len() - 1;
    if n == 0 {
        return Ok(roots);
    }
    if n == 1 {
        roots.push(-coeffs[0]);
        return Ok(roots);
    }

    // initial guesses on a circle of the geometric-mean radius, offset so
    // no guess sits on a symmetry axis of real polynomials
    let radius = coeffs[0].norm().powf(1.0 / n as f64).max(1e-12);
    let mut z: Vec<Complex64> = (0..n)
        .map(|j| {
            let theta = 2.0 * std::f64::consts::PI * j as f64 / n as f64 + 0.4;
            Complex64::from_polar(radius, theta)
        })
        .collect();

    let mut converged = vec![false; n];
    for _ in 0..MAX_ABERTH_ITERS {
        let mut all = true;
        for i in 0..n {
            if converged[i] {
                continue;
            }
            let (p, dp) = eval_with_derivative(&coeffs, z[i]);
            if p.norm() == 0.0 {
                converged[i] = true;
                continue;
            }
            let ratio = p / dp;
            let repulsion: Complex64 = (0..n)
                .filter(|&j| j != i)
                .map(|j| {
                    let d = z[i] - z[j];
                    if d.norm() == 0.0 {
                        Complex64::new(0.0, 0.0)
                    } else {
                        d.inv()
                    }
                })
                .sum();
            let w = ratio / (Complex64::new(1.0, 0.0) - ratio * repulsion);
            if !w.re.is_finite() || !w.im.is_finite() {
                // derivative vanished; nudge and retry next sweep
                z[i] += Complex64::new(1e-8, 1e-8) * radius;
                all = false;
                continue;
            }
            z[i] -= w;
            if w.norm() <= 4.0 * f64::EPSILON * z[i].norm().max(1e-300) {
                converged[i] = true;
            } else {
                all = false;
            }
        }
        if all {
            break;
        }
    }

    // Newton polish, accepted only when the residual drops
    for zi in z.iter_mut() {
        for _ in 0..3 {
            let (p, dp) = eval_with_derivative(&coeffs, *zi);
            if dp.norm() == 0.0 {
                break;
            }
            let cand = *zi - p / dp;
            if poly_eval(&coeffs, cand).norm() < p.norm() {
                *zi = cand;
            } else {
                break;
            }
        }
    }
    if z.iter().any(|r| !r.re.is_finite() || !r.im.is_finite()) {
        return Err(Error::NoConvergence {
            n_used: MAX_ABERTH_ITERS,
            last_gap: f64::NAN,
        });
    }
    roots.extend(z);
    Ok(roots)
}
