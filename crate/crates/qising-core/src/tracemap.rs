//! The Fibonacci trace map f(x, y, z) = (2xy - z, x, y).
//!
//! Besides plain iteration this module carries a log-magnitude orbit
//! ([`LogOrbit`]) that follows escaping orbits far past the floating range,
//! which the escape-rate functional and the large-generation sign scans need.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::sequences::PHI;

/// Magnitudes above this are reported as saturated by [`apply_f`].
pub const SATURATION: f64 = 1e300;

/// Plain iteration hands over to log-magnitude coordinates above this.
pub const LOG_SWITCH: f64 = 1e100;

/// Steps allowed before an orbit that never certifies is declared non-escaping.
pub const MAX_UNCERTIFIED_STEPS: usize = 1000;

/// Hard cap on escape-rate iterations (phi^1400 is still a finite double).
pub const MAX_ESCAPE_STEPS: usize = 1400;

pub type Mat3 = [[f64; 3]; 3];

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TraceTriple {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl TraceTriple {
    pub const fn new(x: f64, y: f64, z: f64) -> Self {
        TraceTriple { x, y, z }
    }

    pub fn to_array(self) -> [f64; 3] {
        [self.x, self.y, self.z]
    }

    pub fn max_norm(self) -> f64 {
        self.x.abs().max(self.y.abs()).max(self.z.abs())
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite() && self.z.is_finite()
    }

    /// f without overflow checks.
    #[inline]
    pub fn f(self) -> Self {
        TraceTriple::new(2.0 * self.x * self.y - self.z, self.x, self.y)
    }

    /// f^{-1} without overflow checks.
    #[inline]
    pub fn f_inv(self) -> Self {
        TraceTriple::new(self.y, self.z, 2.0 * self.y * self.z - self.x)
    }

    /// f^n without overflow checks.
    pub fn f_pow(self, n: usize) -> Self {
        (0..n).fold(self, |t, _| t.f())
    }

    pub fn dist_max(self, other: Self) -> f64 {
        (self.x - other.x)
            .abs()
            .max((self.y - other.y).abs())
            .max((self.z - other.z).abs())
    }
}

impl From<[f64; 3]> for TraceTriple {
    fn from(a: [f64; 3]) -> Self {
        TraceTriple::new(a[0], a[1], a[2])
    }
}

fn saturate(t: TraceTriple) -> Result<TraceTriple> {
    if t.is_finite() && t.max_norm() <= SATURATION {
        Ok(t)
    } else {
        Err(Error::Saturated)
    }
}

/// (2xy - z, x, y); magnitudes past [`SATURATION`] give [`Error::Saturated`].
pub fn apply_f(t: TraceTriple) -> Result<TraceTriple> {
    saturate(t.f())
}

/// (y, z, 2yz - x); the inverse of [`apply_f`].
pub fn apply_f_inv(t: TraceTriple) -> Result<TraceTriple> {
    saturate(t.f_inv())
}

/// Fricke-Vogt invariant x^2 + y^2 + z^2 - 2xyz - 1.
pub fn fricke_vogt(t: TraceTriple) -> f64 {
    let TraceTriple { x, y, z } = t;
    x * x + y * y + z * z - 2.0 * x * y * z - 1.0
}

/// |x| > 1, |y| > 1 and |xy| > |z|: the forward orbit is unbounded.
pub fn certified_escape(t: TraceTriple) -> bool {
    t.x.abs() > 1.0 && t.y.abs() > 1.0 && (t.x * t.y).abs() > t.z.abs()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OrbitStatus {
    Bounded,
    Escaped,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OrbitOutcome {
    pub status: OrbitStatus,
    pub steps_used: usize,
    pub escape_index: Option<usize>,
    pub rate_estimate: Option<f64>,
    /// Escape was inferred from the size of the orbit, not from the cone test.
    pub magnitude_only: bool,
}

impl OrbitOutcome {
    pub fn is_bounded(&self) -> bool {
        self.status == OrbitStatus::Bounded
    }
}

/// Cheap verdict used by grid sweeps: `Some(n)` if the cone test holds at
/// step n <= cap, `None` otherwise.
pub fn certified_escape_step(t: TraceTriple, cap: usize) -> Option<usize> {
    let mut cur = t;
    for i in 0..=cap {
        if certified_escape(cur) {
            return Some(i);
        }
        cur = cur.f();
        if !cur.is_finite() {
            return Some(i + 1);
        }
    }
    None
}

/// Smallest p <= 6 with f^p(t) = t up to rounding.
pub fn numerical_period(t: TraceTriple) -> Option<usize> {
    let tol = 1e-13 * t.max_norm().max(1.0);
    let mut cur = t;
    (1..=6).find(|_| {
        cur = cur.f();
        cur.dist_max(t) <= tol
    })
}

/// Iterates f from `t` for up to `n_max` steps.
///
/// Escape is reported at the first step where [`certified_escape`] holds.
/// An orbit that leaves the ball of radius `bound` without certifying is
/// followed up to a hard cap and then reported as escaped with
/// `magnitude_only` set. A start point that closes up on itself within six
/// steps is reported as bounded: rounding would otherwise push it off an
/// unstable periodic orbit.
pub fn iterate_orbit(t: TraceTriple, n_max: usize, bound: f64) -> OrbitOutcome {
    let escaped = |i: usize, magnitude_only: bool| OrbitOutcome {
        status: OrbitStatus::Escaped,
        steps_used: i,
        escape_index: Some(i),
        rate_estimate: None,
        magnitude_only,
    };
    if !t.is_finite() {
        return escaped(0, true);
    }
    if !certified_escape(t) && t.max_norm() <= bound && numerical_period(t).is_some() {
        return OrbitOutcome {
            status: OrbitStatus::Bounded,
            steps_used: n_max,
            escape_index: None,
            rate_estimate: None,
            magnitude_only: false,
        };
    }
    let hard_cap = n_max.saturating_mul(2).max(n_max.saturating_add(200));
    let mut cur = t;
    let mut exceeded_at = None;
    for i in 0..=hard_cap {
        if certified_escape(cur) {
            let mut out = escaped(i, false);
            out.rate_estimate = escape_rate(t, 1e-10).ok().filter(|r| *r > 0.0);
            return out;
        }
        if exceeded_at.is_none() && cur.max_norm() > bound {
            exceeded_at = Some(i);
        }
        if i == n_max && exceeded_at.is_none() {
            return OrbitOutcome {
                status: OrbitStatus::Bounded,
                steps_used: n_max,
                escape_index: None,
                rate_estimate: None,
                magnitude_only: false,
            };
        }
        match apply_f(cur) {
            Ok(next) => cur = next,
            Err(_) => {
                let mut out = escaped(exceeded_at.unwrap_or(i + 1), true);
                out.steps_used = i + 1;
                return out;
            }
        }
    }
    let mut out = escaped(exceeded_at.unwrap_or(hard_cap), true);
    out.steps_used = hard_cap;
    out
}

/// Scalars the log-magnitude orbit can run over (real or complex).
pub trait TraceScalar:
    Copy
    + PartialEq
    + fmt::Debug
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
{
    fn zero() -> Self;
    fn one() -> Self;
    fn modulus(self) -> f64;
    fn scale(self, s: f64) -> Self;
    /// v / |v| for non-zero v.
    fn unit(self) -> Self;
    /// Inverse of a value of modulus one.
    fn unit_inverse(self) -> Self;
    /// ln|1 - c|, accurate for small c.
    fn ln_abs_one_minus(c: Self) -> f64;
    fn is_finite(self) -> bool;
}

impl TraceScalar for f64 {
    fn zero() -> Self {
        0.0
    }
    fn one() -> Self {
        1.0
    }
    fn modulus(self) -> f64 {
        self.abs()
    }
    fn scale(self, s: f64) -> Self {
        self * s
    }
    fn unit(self) -> Self {
        self.signum()
    }
    fn unit_inverse(self) -> Self {
        self
    }
    fn ln_abs_one_minus(c: Self) -> f64 {
        (-c).ln_1p()
    }
    fn is_finite(self) -> bool {
        f64::is_finite(self)
    }
}

impl TraceScalar for Complex64 {
    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn one() -> Self {
        Complex64::new(1.0, 0.0)
    }
    fn modulus(self) -> f64 {
        self.norm()
    }
    fn scale(self, s: f64) -> Self {
        self * s
    }
    fn unit(self) -> Self {
        self / self.norm()
    }
    fn unit_inverse(self) -> Self {
        self.conj()
    }
    fn ln_abs_one_minus(c: Self) -> f64 {
        // |1 - c|^2 = 1 + (|c|^2 - 2 Re c)
        0.5 * (c.norm_sqr() - 2.0 * c.re).ln_1p()
    }
    fn is_finite(self) -> bool {
        Complex64::is_finite(self)
    }
}

/// A value stored as phase * exp(ln); zero has phase 0 and ln = -inf.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LogCoord<S> {
    pub phase: S,
    pub ln: f64,
}

impl<S: TraceScalar> LogCoord<S> {
    pub fn from_value(v: S) -> Self {
        let m = v.modulus();
        if m == 0.0 {
            LogCoord {
                phase: S::zero(),
                ln: f64::NEG_INFINITY,
            }
        } else {
            LogCoord {
                phase: v.unit(),
                ln: m.ln(),
            }
        }
    }

    pub fn to_value(self) -> S {
        self.phase.scale(self.ln.exp())
    }

    fn is_zero(&self) -> bool {
        self.ln == f64::NEG_INFINITY
    }

    /// 2xy - z in log form.
    fn trace_step(x: Self, y: Self, z: Self) -> Self {
        if x.is_zero() || y.is_zero() {
            return LogCoord {
                phase: -z.phase,
                ln: z.ln,
            };
        }
        let lp = std::f64::consts::LN_2 + x.ln + y.ln;
        let pp = x.phase * y.phase;
        if z.is_zero() {
            return LogCoord { phase: pp, ln: lp };
        }
        // Factor out the dominant term and fold the other in through ln|1 - c|.
        let (lead_phase, lead_ln, c) = if lp >= z.ln {
            (pp, lp, z.phase * pp.unit_inverse() * S::one().scale((z.ln - lp).exp()))
        } else {
            (
                -z.phase,
                z.ln,
                pp * z.phase.unit_inverse() * S::one().scale((lp - z.ln).exp()),
            )
        };
        let d = S::one() - c;
        let dm = d.modulus();
        if dm == 0.0 {
            return LogCoord {
                phase: S::zero(),
                ln: f64::NEG_INFINITY,
            };
        }
        LogCoord {
            phase: lead_phase * d.unit(),
            ln: lead_ln + S::ln_abs_one_minus(c),
        }
    }
}

#[derive(Debug, Clone, Copy)]
enum OrbitState<S> {
    Plain([S; 3]),
    Log([LogCoord<S>; 3]),
}

/// Forward orbit that switches to log-magnitude coordinates once any
/// coordinate exceeds [`LOG_SWITCH`].
#[derive(Debug, Clone, Copy)]
pub struct LogOrbit<S> {
    state: OrbitState<S>,
    step: usize,
}

impl<S: TraceScalar> LogOrbit<S> {
    pub fn new(t: [S; 3]) -> Self {
        LogOrbit {
            state: OrbitState::Plain(t),
            step: 0,
        }
    }

    pub fn step(&self) -> usize {
        self.step
    }

    pub fn in_log_mode(&self) -> bool {
        matches!(self.state, OrbitState::Log(_))
    }

    pub fn coords(&self) -> [LogCoord<S>; 3] {
        match self.state {
            OrbitState::Plain(p) => p.map(LogCoord::from_value),
            OrbitState::Log(l) => l,
        }
    }

    /// ln|x|, ln|y|, ln|z|.
    pub fn ln_abs(&self) -> [f64; 3] {
        match self.state {
            OrbitState::Plain(p) => p.map(|v| v.modulus().ln()),
            OrbitState::Log(l) => l.map(|c| c.ln),
        }
    }

    /// Phase of the first coordinate (its sign for real orbits).
    pub fn first_phase(&self) -> S {
        self.coords()[0].phase
    }

    /// Plain coordinates, if the orbit has not switched to log mode.
    pub fn plain(&self) -> Option<[S; 3]> {
        match self.state {
            OrbitState::Plain(p) => Some(p),
            OrbitState::Log(_) => None,
        }
    }

    pub fn certified(&self) -> bool {
        let [lx, ly, lz] = self.ln_abs();
        lx > 0.0 && ly > 0.0 && lx + ly > lz
    }

    pub fn advance(&mut self) {
        self.state = match self.state {
            OrbitState::Plain([x, y, z]) => {
                let nx = x.scale(2.0) * y - z;
                if nx.is_finite() && nx.modulus() <= LOG_SWITCH {
                    OrbitState::Plain([nx, x, y])
                } else {
                    let [lx, ly, lz] = [x, y, z].map(LogCoord::from_value);
                    OrbitState::Log([LogCoord::trace_step(lx, ly, lz), lx, ly])
                }
            }
            OrbitState::Log([x, y, z]) => OrbitState::Log([LogCoord::trace_step(x, y, z), x, y]),
        };
        self.step += 1;
    }
}

/// Escape-rate sequences log||f^n(t)|| / phi^n (max-norm) and
/// log|x_n| / phi^n (first coordinate), up to Cauchy stabilisation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EscapeRate {
    pub value: f64,
    pub first_coordinate_value: f64,
    pub certified_at: usize,
    pub norm_estimates: Vec<f64>,
    pub first_estimates: Vec<f64>,
}

impl EscapeRate {
    /// |e_{n+1} - e_n| for the max-norm sequence, starting at the certification step.
    pub fn gaps(&self) -> Vec<f64> {
        self.norm_estimates[self.certified_at..]
            .windows(2)
            .map(|w| (w[1] - w[0]).abs())
            .collect()
    }
}

fn escape_rate_generic<S: TraceScalar>(t: [S; 3], tol: f64) -> Result<EscapeRate> {
    if !(tol > 0.0) {
        return Err(Error::Domain(format!("tolerance must be positive, got {tol}")));
    }
    if !t.iter().all(|v| v.is_finite()) {
        return Err(Error::Domain("starting point must be finite".into()));
    }
    let mut orbit = LogOrbit::new(t);
    let mut norm_estimates = Vec::new();
    let mut first_estimates = Vec::new();
    let mut certified_at = None;
    let mut last_gap = f64::INFINITY;
    for n in 0..=MAX_ESCAPE_STEPS {
        if certified_at.is_none() && orbit.certified() {
            certified_at = Some(n);
        }
        let ln = orbit.ln_abs();
        let pn = PHI.powi(n as i32);
        norm_estimates.push(ln[0].max(ln[1]).max(ln[2]) / pn);
        first_estimates.push(ln[0] / pn);
        match certified_at {
            None if n >= MAX_UNCERTIFIED_STEPS => {
                return Err(Error::NotEscaping { steps: n });
            }
            Some(c) if n >= c + 2 => {
                let gn = (norm_estimates[n] - norm_estimates[n - 1]).abs();
                let gf = (first_estimates[n] - first_estimates[n - 1]).abs();
                last_gap = gn.max(gf);
                if last_gap < tol {
                    return Ok(EscapeRate {
                        value: norm_estimates[n],
                        first_coordinate_value: first_estimates[n],
                        certified_at: c,
                        norm_estimates,
                        first_estimates,
                    });
                }
            }
            _ => {}
        }
        orbit.advance();
    }
    Err(Error::NoConvergence {
        n_used: MAX_ESCAPE_STEPS,
        last_gap,
    })
}

/// Cauchy-stabilised escape rate lim log||f^n(t)|| / phi^n.
pub fn escape_rate(t: TraceTriple, tol: f64) -> Result<f64> {
    escape_rate_detail(t, tol).map(|r| r.value)
}

/// [`escape_rate`] with both estimate sequences.
pub fn escape_rate_detail(t: TraceTriple, tol: f64) -> Result<EscapeRate> {
    escape_rate_generic(t.to_array(), tol)
}

/// Escape rate of a complex starting point.
pub fn escape_rate_complex(t: [Complex64; 3], tol: f64) -> Result<EscapeRate> {
    escape_rate_generic(t, tol)
}

/// P_1 .. P_4, the singular points of the Cayley cubic.
pub fn singularities() -> [TraceTriple; 4] {
    [
        TraceTriple::new(1.0, 1.0, 1.0),
        TraceTriple::new(-1.0, -1.0, 1.0),
        TraceTriple::new(1.0, -1.0, -1.0),
        TraceTriple::new(-1.0, 1.0, -1.0),
    ]
}

/// (x, x/(2x - 1), x), a curve of period-two points.
pub fn rho1_point(x: f64) -> Result<TraceTriple> {
    let den = 2.0 * x - 1.0;
    if den == 0.0 || !x.is_finite() {
        return Err(Error::Domain(format!("rho1 undefined at x = {x}")));
    }
    Ok(TraceTriple::new(x, x / den, x))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Symmetry {
    /// (x, y, z) -> (z, y, x), reversing f.
    S,
    /// (x, y, z) -> (-x, -y, z)
    S2,
    /// (x, y, z) -> (x, -y, -z)
    S3,
    /// (x, y, z) -> (-x, y, -z)
    S4,
}

impl Symmetry {
    pub fn apply(self, t: TraceTriple) -> TraceTriple {
        let TraceTriple { x, y, z } = t;
        match self {
            Symmetry::S => TraceTriple::new(z, y, x),
            Symmetry::S2 => TraceTriple::new(-x, -y, z),
            Symmetry::S3 => TraceTriple::new(x, -y, -z),
            Symmetry::S4 => TraceTriple::new(-x, y, -z),
        }
    }
}

impl FromStr for Symmetry {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "s" => Ok(Symmetry::S),
            "s2" => Ok(Symmetry::S2),
            "s3" => Ok(Symmetry::S3),
            "s4" => Ok(Symmetry::S4),
            other => Err(Error::UnknownSymmetry(other.to_string())),
        }
    }
}

pub fn apply_symmetry(name: &str, t: TraceTriple) -> Result<TraceTriple> {
    Ok(name.parse::<Symmetry>()?.apply(t))
}

/// Jacobian of f at t.
pub fn differential(t: TraceTriple) -> Mat3 {
    [
        [2.0 * t.y, 2.0 * t.x, -1.0],
        [1.0, 0.0, 0.0],
        [0.0, 1.0, 0.0],
    ]
}

pub fn mat3_mul(a: &Mat3, b: &Mat3) -> Mat3 {
    let mut out = [[0.0; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            out[i][j] = (0..3).map(|k| a[i][k] * b[k][j]).sum();
        }
    }
    out
}

pub fn mat3_vec(a: &Mat3, v: [f64; 3]) -> [f64; 3] {
    [0, 1, 2].map(|i| a[i][0] * v[0] + a[i][1] * v[1] + a[i][2] * v[2])
}

pub fn mat3_det(m: &Mat3) -> f64 {
    m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
        - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
}

/// D(f^n) at t by the chain rule.
pub fn differential_iterate(t: TraceTriple, n: usize) -> Mat3 {
    let mut acc = [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]];
    let mut cur = t;
    for _ in 0..n {
        acc = mat3_mul(&differential(cur), &acc);
        cur = cur.f();
    }
    acc
}

/// Coefficients (c2, c1, c0) of det(lambda I - m) = lambda^3 + c2 lambda^2 + c1 lambda + c0.
pub fn char_poly(m: &Mat3) -> [f64; 3] {
    let tr = m[0][0] + m[1][1] + m[2][2];
    let minors = (m[0][0] * m[1][1] - m[0][1] * m[1][0])
        + (m[0][0] * m[2][2] - m[0][2] * m[2][0])
        + (m[1][1] * m[2][2] - m[1][2] * m[2][1]);
    [-tr, minors, -mat3_det(m)]
}

/// Value of the characteristic polynomial at `lambda`, with the sum of the
/// absolute values of its terms (for relative checks).
pub fn char_poly_eval(m: &Mat3, lambda: f64) -> (f64, f64) {
    let [c2, c1, c0] = char_poly(m);
    let terms = [lambda.powi(3), c2 * lambda * lambda, c1 * lambda, c0];
    (terms.iter().sum(), terms.iter().map(|t| t.abs()).sum())
}

/// Roots of lambda^3 + c2 lambda^2 + c1 lambda + c0 by Cardano's formula,
/// with the trigonometric form when all three are real.
pub fn cubic_roots(c: [f64; 3]) -> [Complex64; 3] {
    let [a, b, cc] = c;
    let shift = a / 3.0;
    let p = b - a * a / 3.0;
    let q = 2.0 * a * a * a / 27.0 - a * b / 3.0 + cc;
    let disc = (q / 2.0).powi(2) + (p / 3.0).powi(3);
    let re = |v: f64| Complex64::new(v, 0.0);
    if p == 0.0 && q == 0.0 {
        return [re(-shift); 3];
    }
    if disc <= 0.0 {
        let r = (-p / 3.0).sqrt();
        let arg = (-q / (2.0 * r * r * r)).clamp(-1.0, 1.0);
        let phi = arg.acos();
        let mut roots = [0.0; 3];
        for (k, root) in roots.iter_mut().enumerate() {
            let ang = (phi - 2.0 * std::f64::consts::PI * k as f64) / 3.0;
            *root = 2.0 * r * ang.cos() - shift;
        }
        roots.map(re)
    } else {
        let sq = disc.sqrt();
        let u = (-q / 2.0 + sq).cbrt();
        let v = (-q / 2.0 - sq).cbrt();
        let w = Complex64::new(-0.5, 3f64.sqrt() / 2.0);
        [
            re(u + v - shift),
            w * u + w.conj() * v - shift,
            w.conj() * u + w * v - shift,
        ]
    }
}

/// Eigenvalues of a 3x3 matrix via its characteristic polynomial, each
/// root refined by two Newton steps on the polynomial.
pub fn eigenvalues_3x3(m: &Mat3) -> [Complex64; 3] {
    let c = char_poly(m);
    cubic_roots(c).map(|mut z| {
        for _ in 0..2 {
            let p = ((z + c[0]) * z + c[1]) * z + c[2];
            let dp = (z * 3.0 + 2.0 * c[0]) * z + c[1];
            if dp.norm() > 0.0 {
                z -= p / dp;
            }
        }
        z
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    const P: [TraceTriple; 4] = [
        TraceTriple::new(1.0, 1.0, 1.0),
        TraceTriple::new(-1.0, -1.0, 1.0),
        TraceTriple::new(1.0, -1.0, -1.0),
        TraceTriple::new(-1.0, 1.0, -1.0),
    ];

    #[test]
    fn apply_examples() {
        assert_eq!(apply_f(P[0]).unwrap(), P[0]);
        assert_eq!(apply_f(P[1]).unwrap(), P[2]);
        assert_eq!(apply_f(P[2]).unwrap(), P[3]);
        assert_eq!(apply_f(P[3]).unwrap(), P[1]);
        assert_eq!(
            apply_f(TraceTriple::new(0.0, 0.0, 5.0)).unwrap(),
            TraceTriple::new(-5.0, 0.0, 0.0)
        );
        assert_eq!(apply_f_inv(P[2]).unwrap(), P[1]);
        assert_eq!(apply_f_inv(P[0]).unwrap(), P[0]);
        let t = TraceTriple::new(0.3, 0.7, -0.2);
        let back = apply_f_inv(apply_f(t).unwrap()).unwrap();
        assert!(back.dist_max(t) < 1e-15);
    }

    #[test]
    fn overflow_saturates() {
        let t = TraceTriple::new(1e200, 1e200, 0.0);
        assert_eq!(apply_f(t), Err(Error::Saturated));
        assert_eq!(apply_f_inv(TraceTriple::new(0.0, 1e200, 1e200)), Err(Error::Saturated));
    }

    #[test]
    fn fricke_vogt_examples() {
        assert_eq!(fricke_vogt(P[0]), 0.0);
        assert_eq!(fricke_vogt(TraceTriple::new(0.0, 0.0, 3.0)), 8.0);
        assert_eq!(fricke_vogt(TraceTriple::new(2.0, 3.0, 5.0)), -23.0);
        for p in singularities() {
            assert_eq!(fricke_vogt(p), 0.0);
        }
    }

    #[test]
    fn certified_escape_examples() {
        assert!(certified_escape(TraceTriple::new(2.0, 2.0, 1.0)));
        assert!(!certified_escape(P[0]));
        assert!(!certified_escape(TraceTriple::new(0.5, 10.0, 0.0)));
    }

    #[test]
    fn orbit_examples() {
        let out = iterate_orbit(TraceTriple::new(0.0, 0.0, 0.5), 100, 1e6);
        assert_eq!(out.status, OrbitStatus::Bounded);
        assert_eq!(out.escape_index, None);

        let out = iterate_orbit(TraceTriple::new(2.0, 2.0, 1.0), 100, 1e6);
        assert_eq!(out.status, OrbitStatus::Escaped);
        assert_eq!(out.escape_index, Some(0));
        assert!(!out.magnitude_only);
        assert!(out.rate_estimate.unwrap() > 0.0);

        let out = iterate_orbit(rho1_point(2.0).unwrap(), 1000, 1e6);
        assert_eq!(out.status, OrbitStatus::Bounded);
    }

    #[test]
    fn orbit_escaping_later() {
        // f(1.5, 0.5, 0) = (1.5, 1.5, 0.5) is in the cone.
        let out = iterate_orbit(TraceTriple::new(1.5, 0.5, 0.0), 100, 1e6);
        assert_eq!(out.escape_index, Some(1));
        assert_eq!(certified_escape_step(TraceTriple::new(1.5, 0.5, 0.0), 5), Some(1));
        assert_eq!(certified_escape_step(P[0], 50), None);
    }

    #[test]
    fn escape_rate_examples() {
        let r = escape_rate_detail(TraceTriple::new(10.0, 10.0, 0.0), 1e-12).unwrap();
        assert!(r.value > 0.0);
        assert!((r.value - r.first_coordinate_value).abs() < 1e-12);
        let coarse = escape_rate(TraceTriple::new(10.0, 10.0, 0.0), 1e-6).unwrap();
        assert!((coarse - r.value).abs() < 1e-5);
        assert!(matches!(escape_rate(P[0], 1e-8), Err(Error::NotEscaping { .. })));
    }

    #[test]
    fn escape_rate_gaps_shrink_by_phi() {
        let r = escape_rate_detail(TraceTriple::new(3.0, -2.0, 0.5), 1e-13).unwrap();
        let gaps = r.gaps();
        for w in gaps.windows(2).skip(6).take(30) {
            assert!(w[1] < w[0]);
            assert!((w[1] / w[0] - 1.0 / PHI).abs() < 0.1, "{gaps:?}");
        }
    }

    #[test]
    fn log_orbit_matches_plain_orbit() {
        let t = TraceTriple::new(1.3, -1.7, 0.4);
        let mut orbit = LogOrbit::new(t.to_array());
        let mut plain = t;
        for _ in 0..6 {
            orbit.advance();
            plain = plain.f();
        }
        assert!(!orbit.in_log_mode());
        // force log-mode arithmetic from the same point
        let mut forced = LogOrbit {
            state: OrbitState::Log(t.to_array().map(LogCoord::from_value)),
            step: 0,
        };
        for _ in 0..6 {
            forced.advance();
        }
        for (c, p) in forced.coords().iter().zip(plain.to_array()) {
            assert_relative_eq!(c.to_value(), p, max_relative = 1e-12);
        }
    }

    #[test]
    fn log_orbit_past_overflow_keeps_signs() {
        let t = TraceTriple::new(1.2, -1.5, 0.3);
        let mut orbit = LogOrbit::new(t.to_array());
        let mut prev_signs = (orbit.coords()[0].phase, orbit.coords()[1].phase);
        let mut prev_certified = orbit.certified();
        for _ in 0..60 {
            orbit.advance();
            let c = orbit.coords();
            if prev_certified {
                // inside the cone the new first coordinate has sign x*y
                assert_eq!(c[0].phase, prev_signs.0 * prev_signs.1);
            }
            prev_signs = (c[0].phase, c[1].phase);
            prev_certified = orbit.certified();
        }
        assert!(orbit.in_log_mode());
        assert!(orbit.ln_abs()[0] > 1e6);
    }

    #[test]
    fn complex_escape_rate_agrees_with_real() {
        let t = TraceTriple::new(2.5, 1.5, -0.5);
        let real = escape_rate(t, 1e-12).unwrap();
        let c = escape_rate_complex(t.to_array().map(|v| Complex64::new(v, 0.0)), 1e-12).unwrap();
        assert!((real - c.value).abs() < 1e-10);
        let z = [Complex64::new(1.0, 2.0), Complex64::new(-2.0, 0.5), Complex64::new(0.1, 0.0)];
        let r = escape_rate_complex(z, 1e-10).unwrap();
        assert!(r.value > 0.0);
    }

    #[test]
    fn rho1_examples() {
        assert_eq!(rho1_point(1.0).unwrap(), P[0]);
        let r = rho1_point(2.0).unwrap();
        assert_relative_eq!(r.y, 2.0 / 3.0);
        assert!(r.f().f().dist_max(r) < 1e-15);
        assert_eq!(fricke_vogt(rho1_point(0.0).unwrap()), -1.0);
        assert!(rho1_point(0.5).is_err());
    }

    #[test]
    fn symmetry_examples() {
        let t = TraceTriple::new(1.0, 2.0, 3.0);
        assert_eq!(apply_symmetry("s", t).unwrap(), TraceTriple::new(3.0, 2.0, 1.0));
        assert_eq!(apply_symmetry("s2", P[0]).unwrap(), P[1]);
        assert_eq!(apply_symmetry("s3", P[0]).unwrap(), P[2]);
        assert_eq!(apply_symmetry("s4", P[0]).unwrap(), P[3]);
        assert_eq!(apply_symmetry("s3", t).unwrap(), TraceTriple::new(1.0, -2.0, -3.0));
        assert!(matches!(apply_symmetry("s5", t), Err(Error::UnknownSymmetry(_))));
    }

    #[test]
    fn differential_determinant() {
        let m = differential(TraceTriple::new(0.3, -2.0, 7.0));
        assert_eq!(mat3_det(&m), -1.0);
    }

    #[test]
    fn period_six_eigendata() {
        for a in [0.5, 1.0, 2.0] {
            let t = TraceTriple::new(0.0, 0.0, a);
            let m = differential_iterate(t, 6);
            let s = (4.0 * a.powi(4) + 1.0).sqrt();
            let lam = -4.0 * a * a * s + 8.0 * a.powi(4) + 1.0;
            let (val, scale) = char_poly_eval(&m, lam);
            assert!(val.abs() < 1e-10 * scale, "{a} {val} {scale}");
            let v = [1.0, -(s + 2.0 * a * a - 1.0) / (2.0 * a), 0.0];
            let mv = mat3_vec(&m, v);
            for i in 0..3 {
                assert!((mv[i] - lam * v[i]).abs() < 1e-10);
            }
            let eig = eigenvalues_3x3(&m);
            assert!(eig.iter().any(|z| (z.re - 1.0).abs() < 1e-9 && z.im.abs() < 1e-9));
            assert!(eig.iter().any(|z| (z.re - lam).abs() < 1e-9 * lam.max(1.0)));
        }
    }

    #[test]
    fn cubic_roots_complex_pair() {
        // (l - 2)(l^2 + 1) = l^3 - 2 l^2 + l - 2
        let r = cubic_roots([-2.0, 1.0, -2.0]);
        assert!(r.iter().any(|z| (z - Complex64::new(2.0, 0.0)).norm() < 1e-12));
        assert!(r.iter().any(|z| (z - Complex64::new(0.0, 1.0)).norm() < 1e-12));
        assert!(r.iter().any(|z| (z - Complex64::new(0.0, -1.0)).norm() < 1e-12));
    }

    fn triple() -> impl Strategy<Value = TraceTriple> {
        (-3.0..3.0f64, -3.0..3.0f64, -3.0..3.0f64).prop_map(|(x, y, z)| TraceTriple::new(x, y, z))
    }

    proptest! {
        #[test]
        fn invariant_conserved(t in triple()) {
            let i0 = fricke_vogt(t);
            let i1 = fricke_vogt(t.f());
            prop_assert!((i1 - i0).abs() <= 1e-10 * i0.abs().max(1.0));
        }

        #[test]
        fn inverse_identity(t in triple()) {
            prop_assert!(t.f().f_inv().dist_max(t) < 1e-12);
            prop_assert!(t.f_inv().f().dist_max(t) < 1e-12);
        }

        #[test]
        fn reversing_symmetry(t in triple()) {
            let lhs = Symmetry::S.apply(Symmetry::S.apply(t).f());
            prop_assert!(lhs.dist_max(t.f_inv()) < 1e-12);
        }

        #[test]
        fn intertwining(t in triple()) {
            use Symmetry::*;
            for (a, b) in [(S2, S3), (S3, S4), (S4, S2)] {
                prop_assert!(a.apply(t).f().dist_max(b.apply(t.f())) < 1e-12);
            }
            for s in [S2, S3, S4] {
                prop_assert!(s.apply(t).f_pow(3).dist_max(s.apply(t.f_pow(3))) < 1e-9);
            }
        }

        #[test]
        fn rho1_invariant(x in -5.0..5.0f64) {
            prop_assume!((2.0 * x - 1.0).abs() > 1e-3);
            let img = rho1_point(x).unwrap().f();
            let x2 = x / (2.0 * x - 1.0);
            prop_assume!((2.0 * x2 - 1.0).abs() > 1e-3);
            let expect = rho1_point(x2).unwrap();
            prop_assert!(img.dist_max(expect) <= 1e-12 * expect.max_norm().max(1.0));
        }

        #[test]
        fn period_six(a in 0.1..10.0f64) {
            let t = TraceTriple::new(0.0, 0.0, a);
            prop_assert!(t.f_pow(6).dist_max(t) < 1e-12);
        }
    }
}
