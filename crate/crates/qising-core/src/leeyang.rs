//! Lee-Yang zeros of the classical chain in a uniform imaginary field.
//!
//! With alpha = exp(p(a)/tau), beta = exp(p(b)/tau) and eta the fugacity,
//! the zeros of Z^{(F_k)} lie on the unit circle and are encoded by the
//! real abscissa eta~ = eta + conj(eta) in [-2, 2]. They are the roots of
//! g_k(eta~) = first coordinate of f^{k-1}(gamma(eta~)).

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

pub use crate::sets::{hausdorff_distance, PointSet};

use crate::error::{Error, Result};
use crate::roots::aberth_roots;
use crate::sequences::{fibonacci, substitution_word, CouplingMap};
use crate::tracemap::TraceTriple;

/// Largest ring the exhaustive oracle accepts.
pub const MAX_ORACLE_SITES: usize = 16;

/// Oracle roots further than this from the unit circle are an error.
pub const LEE_YANG_TOL: f64 = 1e-6;

/// Bisection stops below this bracket width.
pub const ROOT_TOL: f64 = 1e-12;

/// A converged root with no sign change within this distance is flagged
/// as a tangency.
pub const TANGENCY_WIDTH: f64 = 1e-8;

/// Laguerre steps allowed per root (convergence is linear at double roots).
pub const MAX_LAGUERRE_ITERS: usize = 200;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FugacityParams {
    pub alpha: f64,
    pub beta: f64,
}

impl FugacityParams {
    pub fn new(alpha: f64, beta: f64) -> Result<Self> {
        let p = FugacityParams { alpha, beta };
        p.validate()?;
        Ok(p)
    }

    /// alpha = exp(p_a / tau), beta = exp(p_b / tau).
    pub fn from_couplings(c: &CouplingMap, tau: f64) -> Result<Self> {
        if !(tau > 0.0 && tau.is_finite()) {
            return Err(Error::Domain(format!("temperature must be positive, got {tau}")));
        }
        Self::new((c.p_a / tau).exp(), (c.p_b / tau).exp())
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [("alpha", self.alpha), ("beta", self.beta)] {
            if !(v > 1.0 && v.is_finite()) {
                return Err(Error::Domain(format!("{name} must exceed 1, got {v}")));
            }
        }
        Ok(())
    }

    fn ln_alpha(&self) -> f64 {
        self.alpha.ln()
    }

    fn ln_beta(&self) -> f64 {
        self.beta.ln()
    }

    /// Slopes of the first two curve coordinates and the constant third.
    fn curve_coefficients(&self) -> (f64, f64, f64) {
        let a2 = self.alpha * self.alpha;
        let b2 = self.beta * self.beta;
        let sa = (a2 * a2 - 1.0).sqrt();
        let sb = (b2 * b2 - 1.0).sqrt();
        (a2 / (2.0 * sa), b2 / (2.0 * sb), (a2 * b2 - 1.0) / (sa * sb))
    }
}

/// gamma(eta~) = (alpha^2 eta~ / 2 sqrt(alpha^4 - 1), beta^2 eta~ / 2 sqrt(beta^4 - 1),
/// (alpha^2 beta^2 - 1) / sqrt((alpha^4 - 1)(beta^4 - 1))).
pub fn fugacity_curve(eta_t: f64, f: &FugacityParams) -> Result<TraceTriple> {
    f.validate()?;
    let (cx, cy, z) = f.curve_coefficients();
    Ok(TraceTriple::new(cx * eta_t, cy * eta_t, z))
}

/// Fricke-Vogt invariant along the curve:
/// (alpha^2 - beta^2)^2 (4 - eta~^2) / (4 (alpha^4 - 1)(beta^4 - 1)).
pub fn fricke_vogt_on_curve(eta_t: f64, f: &FugacityParams) -> f64 {
    let a2 = f.alpha * f.alpha;
    let b2 = f.beta * f.beta;
    (a2 - b2).powi(2) * (4.0 - eta_t * eta_t) / (4.0 * (a2 * a2 - 1.0) * (b2 * b2 - 1.0))
}

/// Number of trace-map steps whose first coordinate defines the zeros of
/// the period-F_k ring.
pub fn iterate_index(k: u32) -> usize {
    k.saturating_sub(1) as usize
}

const ROUNDING: f64 = f64::EPSILON;

/// Laguerre steps are trusted only where the value is this far above its
/// rounding-error bound.
const TRUST_RATIO: f64 = 1e3;

/// Value, first and second derivative in eta~ with first-order rounding
/// error bounds, all times 2^exp.
#[derive(Debug, Clone, Copy, PartialEq)]
struct Jet {
    v: f64,
    d1: f64,
    d2: f64,
    ev: f64,
    e1: f64,
    e2: f64,
    exp: i64,
}

impl Jet {
    fn constant(v: f64) -> Self {
        Jet { v, d1: 0.0, d2: 0.0, ev: ROUNDING * v.abs(), e1: 0.0, e2: 0.0, exp: 0 }.normalized()
    }

    fn linear(slope: f64, x: f64) -> Self {
        let v = slope * x;
        Jet {
            v,
            d1: slope,
            d2: 0.0,
            ev: ROUNDING * v.abs(),
            e1: ROUNDING * slope.abs(),
            e2: 0.0,
            exp: 0,
        }
        .normalized()
    }

    fn scaled(self, s: f64) -> Self {
        Jet {
            v: self.v * s,
            d1: self.d1 * s,
            d2: self.d2 * s,
            ev: self.ev * s,
            e1: self.e1 * s,
            e2: self.e2 * s,
            exp: self.exp,
        }
    }

    fn normalized(self) -> Self {
        let m = self.v.abs().max(self.d1.abs()).max(self.d2.abs());
        if m == 0.0 || (m > 2f64.powi(-100) && m < 2f64.powi(100)) {
            return self;
        }
        let e = m.log2().floor() as i32;
        let mut out = self.scaled(2f64.powi(-e));
        out.exp += e as i64;
        out
    }

    fn at_exp(self, exp: i64) -> Self {
        let shift = (self.exp - exp).clamp(-1100, 0) as i32;
        // two factors keep each power of two representable
        let mut out = self.scaled(2f64.powi(shift / 2)).scaled(2f64.powi(shift - shift / 2));
        out.exp = exp;
        out
    }

    /// 2xy - z.
    fn trace_step(x: Jet, y: Jet, z: Jet) -> Jet {
        let u = ROUNDING;
        let (t0, t1, t2) = (x.v * y.v, x.d1 * y.v + x.v * y.d1, x.d2 * y.v + 2.0 * x.d1 * y.d1 + x.v * y.d2);
        let p = Jet {
            v: 2.0 * t0,
            d1: 2.0 * t1,
            d2: 2.0 * t2,
            ev: 2.0 * (x.v.abs() * y.ev + y.v.abs() * x.ev + u * t0.abs()),
            e1: 2.0
                * (x.d1.abs() * y.ev + y.v.abs() * x.e1 + x.v.abs() * y.e1 + y.d1.abs() * x.ev
                    + 2.0 * u * ((x.d1 * y.v).abs() + (x.v * y.d1).abs())),
            e2: 2.0
                * (x.d2.abs() * y.ev
                    + y.v.abs() * x.e2
                    + 2.0 * (x.d1.abs() * y.e1 + y.d1.abs() * x.e1)
                    + x.v.abs() * y.e2
                    + y.d2.abs() * x.ev
                    + 3.0 * u * ((x.d2 * y.v).abs() + 2.0 * (x.d1 * y.d1).abs() + (x.v * y.d2).abs())),
            exp: x.exp + y.exp,
        };
        let exp = p.exp.max(z.exp);
        let (p, z) = (p.at_exp(exp), z.at_exp(exp));
        let (v, d1, d2) = (p.v - z.v, p.d1 - z.d1, p.d2 - z.d2);
        Jet {
            v,
            d1,
            d2,
            ev: p.ev + z.ev + u * v.abs(),
            e1: p.e1 + z.e1 + u * d1.abs(),
            e2: p.e2 + z.e2 + u * d2.abs(),
            exp,
        }
        .normalized()
    }

    fn trusted(&self) -> bool {
        self.v.abs() > TRUST_RATIO * self.ev
    }
}

/// Jet of g along the curve after m trace-map steps.
fn jet(eta_t: f64, m: usize, coeffs: (f64, f64, f64)) -> Jet {
    let (cx, cy, z0) = coeffs;
    let (mut x, mut y, mut z) = (Jet::linear(cx, eta_t), Jet::linear(cy, eta_t), Jet::constant(z0));
    for _ in 0..m {
        let nx = Jet::trace_step(x, y, z);
        (z, y, x) = (y, x, nx);
    }
    x
}

fn sign_at(eta_t: f64, m: usize, coeffs: (f64, f64, f64)) -> f64 {
    let v = jet(eta_t, m, coeffs).v;
    if v == 0.0 {
        0.0
    } else {
        v.signum()
    }
}

/// g_k(eta~); infinite once the value leaves the floating-point range.
pub fn g_k(eta_t: f64, k: u32, f: &FugacityParams) -> Result<f64> {
    f.validate()?;
    let j = jet(eta_t, iterate_index(k), f.curve_coefficients());
    let e = j.exp.clamp(-2200, 2200) as i32;
    Ok(j.v * 2f64.powi(e / 2) * 2f64.powi(e - e / 2))
}

fn bisect_root(mut lo: f64, mut hi: f64, m: usize, coeffs: (f64, f64, f64)) -> f64 {
    let s_lo = sign_at(lo, m, coeffs);
    while hi - lo > ROOT_TOL {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let s = sign_at(mid, m, coeffs);
        if s == 0.0 {
            return mid;
        }
        if s == s_lo {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// One rightward Laguerre step for a real-rooted polynomial of degree n.
/// Returns `None` when no root lies to the right.
fn laguerre_right(j: &Jet, n: f64) -> Option<f64> {
    let g = j.d1 / j.v;
    let h = g * g - j.d2 / j.v;
    let disc = ((n - 1.0) * (n * h - g * g)).max(0.0);
    let den = g - disc.sqrt();
    (den < 0.0).then(|| -n / den)
}

/// Probes rightward from `r` at geometrically growing offsets until the
/// sign differs from `s_prev` or the offset passes [`TANGENCY_WIDTH`].
/// Returns the probe point, the sign there and whether a change was seen.
fn probe_right(r: f64, s_prev: f64, m: usize, coeffs: (f64, f64, f64)) -> (f64, f64, bool) {
    let mut delta = 1e-14 * r.abs().max(1.0);
    loop {
        let t = r + delta;
        let s = sign_at(t, m, coeffs);
        if s != 0.0 && s != s_prev {
            return (t, s, true);
        }
        if delta > TANGENCY_WIDTH {
            return (t, s_prev, false);
        }
        delta *= 4.0;
    }
}

/// Walks [a, b] from left to right. Where g is well above its rounding
/// error a Laguerre step is taken; for a real-rooted polynomial it lands
/// between the current point and the next root, so clustered roots are not
/// skipped. Inside the rounding band of a root the walk probes with small
/// steps and locates the sign change by bisection.
fn walk_chunk(a: f64, b: f64, n: f64, m: usize, coeffs: (f64, f64, f64)) -> Vec<(f64, bool)> {
    let mut out: Vec<(f64, bool)> = Vec::new();
    let mut x = a;
    let mut s_prev = sign_at(a, m, coeffs);
    // leaving the rounding band of the last root found
    let mut leaving: Option<f64> = None;
    if s_prev == 0.0 {
        out.push((a, false));
        let (t, s, _) = probe_right(a, 0.0, m, coeffs);
        (x, s_prev, leaving) = (t, s, Some(a));
    }
    let mut iters = 0;
    while x < b && iters < MAX_LAGUERRE_ITERS * (1 + out.len()) + 1000 {
        iters += 1;
        let j = jet(x, m, coeffs);
        let cand = if j.trusted() {
            leaving = None;
            match laguerre_right(&j, n) {
                Some(step) if step > 4.0 * f64::EPSILON * x.abs().max(1.0) => x + step,
                Some(_) => x,
                None => break,
            }
        } else if let Some(r) = leaving {
            x + (2.0 * (x - r)).max(1e-14 * x.abs().max(1.0))
        } else {
            x
        };
        if cand == x {
            // converged onto a root without seeing the sign change yet
            let (t, s, crossed) = probe_right(x, s_prev, m, coeffs);
            if crossed {
                let r = bisect_root(x, t, m, coeffs);
                if r <= b {
                    out.push((r, false));
                }
                leaving = Some(r);
            } else if x <= b {
                // no sign change: even multiplicity or a near-tangency
                out.push((x, true));
                leaving = Some(x);
            }
            (x, s_prev) = (t, s);
            continue;
        }
        if cand > b {
            break;
        }
        let s = sign_at(cand, m, coeffs);
        if s != s_prev {
            let r = if s == 0.0 { cand } else { bisect_root(x, cand, m, coeffs) };
            out.push((r, false));
            let (t, s_next) = if s == 0.0 {
                let (t, s2, _) = probe_right(cand, 0.0, m, coeffs);
                (t, s2)
            } else {
                (cand, s)
            };
            (x, s_prev, leaving) = (t, s_next, Some(r));
            continue;
        }
        x = cand;
    }
    out
}

/// Roots of g_k on [-2, 2].
///
/// g_k is a real-rooted polynomial of degree F_k in eta~ (its zeros are the
/// Lee-Yang zeros), so each of the `grid` chunks of an angle-uniform
/// partition is walked with Laguerre steps, which cannot skip a root. Roots
/// are confirmed by a sign change; even-multiplicity roots (tangencies) are
/// flagged.
pub fn zero_set(k: u32, f: &FugacityParams, grid: usize) -> Result<PointSet> {
    f.validate()?;
    if k < 3 {
        return Err(Error::Domain(format!("generation must be at least 3, got {k}")));
    }
    if grid < 10_000 {
        return Err(Error::Domain(format!("grid must be at least 10^4, got {grid}")));
    }
    let m = iterate_index(k);
    let coeffs = f.curve_coefficients();
    let degree = fibonacci(k as usize)? as f64;
    let edges: Vec<f64> = (0..=grid)
        .map(|i| match i {
            0 => -2.0,
            _ if i == grid => 2.0,
            _ => -2.0 * (std::f64::consts::PI * i as f64 / grid as f64).cos(),
        })
        .collect();
    let found: Vec<Vec<(f64, bool)>> = edges
        .par_windows(2)
        .map(|w| walk_chunk(w[0], w[1], degree, m, coeffs))
        .collect();
    let (points, flags): (Vec<f64>, Vec<bool>) = found.into_iter().flatten().unzip();
    PointSet::with_flags(points, flags)
}

/// Coefficients c_j of u^j in eta^N Z(eta), u = eta^2, normalised so the
/// largest Boltzmann weight is 1. Deterministic chunked summation.
pub fn oracle_polynomial(k: u32, f: &FugacityParams) -> Result<Vec<f64>> {
    f.validate()?;
    let w = substitution_word(k)?;
    let n = w.len();
    if n > MAX_ORACLE_SITES {
        return Err(Error::Size {
            what: "oracle ring length",
            limit: MAX_ORACLE_SITES as u64,
            got: n as u64,
        });
    }
    let couplings: Vec<f64> = w
        .iter()
        .map(|s| match s {
            crate::sequences::Symbol::A => f.ln_alpha(),
            crate::sequences::Symbol::B => f.ln_beta(),
        })
        .collect();
    let e_max: f64 = couplings.iter().sum();
    let total: u64 = 1 << n;
    let chunks: u64 = 64.min(total);
    let per = total / chunks;
    let partial: Vec<Vec<f64>> = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut acc = vec![0.0; n + 1];
            for cfg in c * per..(c + 1) * per {
                let spin = |i: usize| if cfg >> i & 1 == 1 { 1.0 } else { -1.0 };
                let mut e = 0.0;
                for (i, &j) in couplings.iter().enumerate() {
                    e += j * spin(i) * spin((i + 1) % n);
                }
                let ups = cfg.count_ones() as usize;
                acc[ups] += (e - e_max).exp();
            }
            acc
        })
        .collect();
    let mut coeffs = vec![0.0; n + 1];
    for p in partial {
        for (c, v) in coeffs.iter_mut().zip(p) {
            *c += v;
        }
    }
    Ok(coeffs)
}

/// All 2F_k roots in eta of eta^{F_k} Z^{(F_k)}(eta).
pub fn oracle_roots(k: u32, f: &FugacityParams) -> Result<Vec<Complex64>> {
    let coeffs = oracle_polynomial(k, f)?;
    let c: Vec<Complex64> = coeffs.iter().map(|&v| Complex64::new(v, 0.0)).collect();
    let mut out = Vec::with_capacity(2 * coeffs.len());
    for u in aberth_roots(&c)? {
        let deviation = (u.norm() - 1.0).abs();
        if deviation > LEE_YANG_TOL {
            return Err(Error::LeeYangViolation { deviation });
        }
        let r = u.sqrt();
        out.push(r);
        out.push(-r);
    }
    Ok(out)
}

/// eta~ = 2 Re(eta) over the upper-half-plane oracle roots.
pub fn zero_set_oracle(k: u32, f: &FugacityParams) -> Result<PointSet> {
    let roots = oracle_roots(k, f)?;
    let pts: Vec<f64> = roots
        .iter()
        .filter(|r| r.im > 0.0)
        .map(|r| (2.0 * r.re).clamp(-2.0, 2.0))
        .collect();
    PointSet::new(pts)
}

/// theta = arccos(eta~ / 2) in [0, pi] for each zero.
pub fn to_circle(ps: &PointSet) -> Result<Vec<f64>> {
    ps.points()
        .iter()
        .map(|&p| {
            if (-2.0..=2.0).contains(&p) {
                Ok((p / 2.0).acos())
            } else {
                Err(Error::Domain(format!("{p} is outside [-2, 2]")))
            }
        })
        .collect()
}

/// Distance from the zeros to the endpoints eta~ = +-2.
pub fn endpoint_margin(ps: &PointSet) -> f64 {
    ps.points()
        .iter()
        .map(|p| (2.0 - p.abs()).abs())
        .fold(f64::INFINITY, f64::min)
}

/// Hausdorff distances between zero sets of consecutive entries of `k_list`.
pub fn convergence_diagnostic(
    f: &FugacityParams,
    k_list: &[u32],
    grid: usize,
) -> Result<Vec<(u32, f64)>> {
    let sets: Vec<PointSet> = k_list
        .iter()
        .map(|&k| zero_set(k, f, grid))
        .collect::<Result<_>>()?;
    let mut out = Vec::new();
    for (i, pair) in sets.windows(2).enumerate() {
        out.push((k_list[i], hausdorff_distance(&pair[0], &pair[1])?));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tracemap::{certified_escape, eigenvalues_3x3, fricke_vogt, TraceTriple};
    use proptest::prelude::*;

    fn fp(pa: f64, pb: f64, tau: f64) -> FugacityParams {
        FugacityParams::from_couplings(&CouplingMap::couplings(pa, pb).unwrap(), tau).unwrap()
    }

    #[test]
    fn domain_errors() {
        assert!(FugacityParams::new(1.0, 2.0).is_err());
        assert!(FugacityParams::new(2.0, 0.5).is_err());
        assert!(fugacity_curve(0.0, &FugacityParams { alpha: 0.9, beta: 2.0 }).is_err());
        let f = fp(1.0, 1.5, 1.0);
        assert!(zero_set(2, &f, 10_000).is_err());
        assert!(zero_set(5, &f, 100).is_err());
        assert!(matches!(zero_set_oracle(8, &f), Err(Error::Size { .. })));
    }

    #[test]
    fn curve_at_zero_is_period_six() {
        let f = fp(1.0, 1.7, 1.3);
        let t = fugacity_curve(0.0, &f).unwrap();
        assert_eq!((t.x, t.y), (0.0, 0.0));
        assert!(t.f_pow(6).dist_max(t) < 1e-12);
    }

    #[test]
    fn endpoints_escape_in_one_step() {
        for f in [fp(1.0, 1.7, 1.3), fp(0.4, 2.0, 0.7), fp(1.0, 1.01, 1.0)] {
            for e in [-2.0, 2.0] {
                let t = fugacity_curve(e, &f).unwrap();
                assert!(
                    certified_escape(t.f()) || certified_escape(t.f_inv()),
                    "{e}: {t:?}"
                );
            }
        }
    }

    #[test]
    fn transversality_signs() {
        let f = fp(1.0, 1.7, 1.3);
        let a = fugacity_curve(0.0, &f).unwrap().z;
        let second = -((4.0 * a.powi(4) + 1.0).sqrt() + 2.0 * a * a - 1.0) / (2.0 * a);
        let (cx, cy, _) = f.curve_coefficients();
        assert!(cy / cx > 0.0 && second < 0.0);
        let ev = eigenvalues_3x3(&crate::tracemap::differential_iterate(TraceTriple::new(0.0, 0.0, a), 6));
        assert!(ev.iter().any(|l| (l.re - 1.0).abs() < 1e-8));
    }

    #[test]
    fn to_circle_examples() {
        let ps = PointSet::new(vec![-2.0, 0.0, 2.0]).unwrap();
        let th = to_circle(&ps).unwrap();
        assert!((th[0] - std::f64::consts::PI).abs() < 1e-15);
        assert!((th[1] - std::f64::consts::FRAC_PI_2).abs() < 1e-15);
        assert_eq!(th[2], 0.0);
    }

    #[test]
    fn oracle_degree_and_unit_modulus() {
        let f = fp(1.0, 1.7, 1.3);
        let r = oracle_roots(3, &f).unwrap();
        assert_eq!(r.len(), 6);
        for k in 3..=6 {
            for z in oracle_roots(k, &f).unwrap() {
                assert!((z.norm() - 1.0).abs() < 1e-8);
            }
            assert_eq!(zero_set_oracle(k, &f).unwrap().len(), fibonacci(k as usize).unwrap());
        }
    }

    #[test]
    fn oracle_pure_case_symmetric() {
        // F_6 = 8 sites: even ring
        let f = fp(1.2, 1.2, 1.0);
        let z = zero_set_oracle(6, &f).unwrap();
        let pts = z.points();
        for (a, b) in pts.iter().zip(pts.iter().rev()) {
            assert!((a + b).abs() < 1e-9);
        }
    }

    #[test]
    fn trace_map_matches_oracle() {
        for f in [fp(1.0, 1.7, 1.3), fp(0.8, 0.5, 0.6), fp(1.0, 1.05, 2.0)] {
            for k in 3..=6 {
                let a = zero_set(k, &f, 10_000).unwrap();
                let b = zero_set_oracle(k, &f).unwrap();
                assert_eq!(a.len(), b.len(), "k = {k}");
                assert!(hausdorff_distance(&a, &b).unwrap() < 1e-8, "k = {k}");
                assert!(endpoint_margin(&a) > 1e-3);
            }
        }
    }

    #[test]
    fn finds_all_zeros_in_clusters() {
        // all F_k zeros are real and simple; clusters near +-2 get tight
        for f in [fp(1.0, 1.7, 1.3), fp(0.5, 1.0, 1.0)] {
            for k in [9u32, 12, 15] {
                let z = zero_set(k, &f, 10_000).unwrap();
                assert_eq!(z.len(), fibonacci(k as usize).unwrap(), "k = {k}");
                assert!(z.flagged_points().is_empty());
            }
        }
    }

    #[test]
    fn grid_refinement_is_stable() {
        let f = fp(1.0, 1.7, 1.3);
        let a = zero_set(10, &f, 10_000).unwrap();
        let b = zero_set(10, &f, 40_000).unwrap();
        assert_eq!(a.len(), b.len());
        assert!(hausdorff_distance(&a, &b).unwrap() < 1e-10);
    }

    #[test]
    fn laguerre_never_overshoots_simple_cluster() {
        // p(x) = (x - 0.1)(x - 0.1 - 1e-6)(x - 0.5) from x = -1
        let roots = [0.1, 0.1 + 1e-6, 0.5];
        let mut x = -1.0f64;
        for _ in 0..60 {
            let (mut v, mut d1, mut d2) = (1.0, 0.0, 0.0);
            for r in roots {
                // product rule for the jet of (x - r)
                d2 = d2 * (x - r) + 2.0 * d1;
                d1 = d1 * (x - r) + v;
                v *= x - r;
            }
            let j = Jet { v, d1, d2, ev: 0.0, e1: 0.0, e2: 0.0, exp: 0 };
            match laguerre_right(&j, 3.0) {
                Some(step) if v != 0.0 => x += step,
                _ => break,
            }
            assert!(x <= 0.1 + 1e-15);
        }
        assert!((x - 0.1).abs() < 1e-12);
    }

    #[test]
    fn odd_ring_has_zero_at_origin() {
        let f = fp(1.0, 1.7, 1.3);
        let z = zero_set(4, &f, 10_000).unwrap();
        assert_eq!(z.len(), 5);
        assert!(z.points().iter().any(|p| p.abs() < 1e-12));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]
        #[test]
        fn fricke_vogt_along_curve(
            pa in 0.1..3.0f64, pb in 0.1..3.0f64, tau in 0.5..4.0f64, e in -2.0..2.0f64,
        ) {
            let f = fp(pa, pb, tau);
            let t = fugacity_curve(e, &f).unwrap();
            let expect = fricke_vogt_on_curve(e, &f);
            let got = fricke_vogt(t);
            let scale = t.x * t.x + t.y * t.y + t.z * t.z + 2.0 * (t.x * t.y * t.z).abs() + 1.0;
            prop_assert!((got - expect).abs() <= 1e-12 * scale);
            prop_assert!(expect >= 0.0);
        }
    }
}
