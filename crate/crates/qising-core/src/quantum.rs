//! Single-fermion spectra of the quantum Ising chain.
//!
//! After the Jordan-Wigner reduction (transverse field normalised to 1) the
//! squared energies x = E^2 are the spectrum of the periodic Jacobi operator
//!
//! a_{n-1} psi_{n-1} + (1 + a_{n-1}^2) psi_n + a_n psi_{n+1} = x psi_n,
//!
//! with a_n = p(w_n). Bands are located inside the brackets formed by the
//! Dirichlet eigenvalues of one period and refined by bisection.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

pub use crate::sets::BandSet;

use crate::error::{Error, Result};
use crate::sequences::{fibonacci, substitution_word, CouplingMap, Word};
use crate::tracemap::{certified_escape, certified_escape_step, TraceTriple};

/// Edges closer than this are treated as touching.
pub const BAND_MERGE_TOL: f64 = 1e-9;

/// Gaps narrower than this (relative) are tested for being closed.
pub const CLOSED_GAP_TOL: f64 = 1e-6;

/// Bisection iteration cap for band edges.
pub const EDGE_BISECTION_ITERS: usize = 200;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpectrumParams {
    pub couplings: CouplingMap,
    pub generation: u32,
    pub grid_resolution: usize,
    pub orbit_cap: usize,
}

impl SpectrumParams {
    /// Parameters with the orbit cap tied to the generation: points of sigma_k
    /// are never certified to escape before step k - 1, so a cap of k - 2
    /// keeps all of them.
    pub fn new(couplings: CouplingMap, generation: u32, grid_resolution: usize) -> Result<Self> {
        let p = SpectrumParams {
            couplings,
            generation,
            grid_resolution,
            orbit_cap: generation.saturating_sub(2) as usize,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        self.couplings.validate()?;
        if self.generation < 2 {
            return Err(Error::Domain(format!(
                "generation must be at least 2, got {}",
                self.generation
            )));
        }
        if self.grid_resolution < 1000 {
            return Err(Error::Domain(format!(
                "grid resolution must be at least 1000, got {}",
                self.grid_resolution
            )));
        }
        Ok(())
    }
}

/// The curve E -> ((E^2 - 1 - p_a^2) / 2p_a, (E^2 - 1 - p_b^2) / 2p_b,
/// (p_a^2 + p_b^2) / 2 p_a p_b) in trace-map coordinates.
pub fn gamma_line(e: f64, c: &CouplingMap) -> TraceTriple {
    let (pa, pb) = (c.p_a, c.p_b);
    let e2 = e * e;
    TraceTriple::new(
        (e2 - 1.0 - pa * pa) / (2.0 * pa),
        (e2 - 1.0 - pb * pb) / (2.0 * pb),
        (pa * pa + pb * pb) / (2.0 * pa * pb),
    )
}

/// Half-trace of the period-F_k monodromy through the trace map:
/// first coordinate of f^{k-1}(gamma(E)).
pub fn trace_map_half_trace(e: f64, c: &CouplingMap, k: u32) -> f64 {
    gamma_line(e, c).f_pow(k.saturating_sub(1) as usize).x
}

fn hopping(w: &Word, c: &CouplingMap) -> Vec<f64> {
    w.iter().map(|s| c.p(s)).collect()
}

/// Trace of the one-period monodromy, computed with exact power-of-two
/// rescaling; overflow saturates to a signed infinity.
fn discriminant_from_hopping(x: f64, a: &[f64]) -> f64 {
    let n = a.len();
    let mut m = [[1.0f64, 0.0], [0.0, 1.0]];
    let mut exponent: i32 = 0;
    for i in 0..n {
        let prev = a[(i + n - 1) % n];
        let b = 1.0 + prev * prev;
        let t00 = (x - b) / a[i];
        let t01 = -prev / a[i];
        m = [
            [t00 * m[0][0] + t01 * m[1][0], t00 * m[0][1] + t01 * m[1][1]],
            m[0],
        ];
        let max = m.iter().flatten().fold(0.0f64, |acc, v| acc.max(v.abs()));
        if max > 1e150 || (max < 1e-150 && max > 0.0) {
            let e = max.log2().round() as i32;
            let f = 2f64.powi(-e);
            for v in m.iter_mut().flatten() {
                *v *= f;
            }
            exponent += e;
        }
    }
    let tr = m[0][0] + m[1][1];
    if exponent > 2100 {
        return tr.signum() * f64::INFINITY;
    }
    let half = exponent / 2;
    tr * 2f64.powi(half) * 2f64.powi(exponent - half)
}

/// tr M(x) for the periodic Jacobi operator with hoppings p(w_n).
pub fn jacobi_discriminant(x: f64, w: &Word, c: &CouplingMap) -> Result<f64> {
    if w.is_empty() {
        return Err(Error::Domain("empty word".into()));
    }
    Ok(discriminant_from_hopping(x, &hopping(w, c)))
}

/// Number of eigenvalues below x of the symmetric tridiagonal matrix with
/// diagonal `d` and off-diagonal `e` (Sturm sequence).
fn sturm_count(d: &[f64], e: &[f64], x: f64) -> usize {
    let mut count = 0;
    let mut q = 1.0;
    for i in 0..d.len() {
        let off = if i == 0 { 0.0 } else { e[i - 1] * e[i - 1] / q };
        q = d[i] - x - off;
        if q == 0.0 {
            q = -f64::EPSILON * (x.abs() + 1.0);
        }
        if q < 0.0 {
            count += 1;
        }
    }
    count
}

/// Eigenvalues of the Dirichlet truncation to sites 1..N-1 (psi_0 = psi_N = 0),
/// ascending. Each lies in the closure of a spectral gap.
pub fn dirichlet_eigenvalues(a: &[f64], upper: f64) -> Vec<f64> {
    let n = a.len();
    if n < 2 {
        return Vec::new();
    }
    let d: Vec<f64> = (1..n).map(|i| 1.0 + a[i - 1] * a[i - 1]).collect();
    let e: Vec<f64> = (1..n - 1).map(|i| a[i]).collect();
    (0..n - 1)
        .into_par_iter()
        .map(|j| {
            let (mut lo, mut hi) = (-1.0f64, upper);
            for _ in 0..200 {
                let mid = 0.5 * (lo + hi);
                if mid <= lo || mid >= hi {
                    break;
                }
                if sturm_count(&d, &e, mid) > j {
                    hi = mid;
                } else {
                    lo = mid;
                }
            }
            0.5 * (lo + hi)
        })
        .collect()
}

/// Bisection for a sign change of g on [lo, hi] with g(lo) <= 0 < g(hi).
fn bisect<G: Fn(f64) -> f64>(g: G, mut lo: f64, mut hi: f64) -> f64 {
    if g(lo) > 0.0 {
        return lo;
    }
    if g(hi) <= 0.0 {
        return hi;
    }
    for _ in 0..EDGE_BISECTION_ITERS {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if g(mid) <= 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Bands {x : |tr M(x)| <= 2} of the period-|w| operator, before merging.
fn raw_x_bands(w: &Word, c: &CouplingMap) -> Result<Vec<(f64, f64)>> {
    if w.is_empty() {
        return Err(Error::Domain("empty word".into()));
    }
    let a = hopping(w, c);
    let n = a.len();
    let p_max = a.iter().cloned().fold(0.0, f64::max);
    let upper = (1.0 + p_max).powi(2) + 1.0;
    let mut brackets = vec![-1.0];
    brackets.extend(dirichlet_eigenvalues(&a, upper));
    brackets.push(upper);
    let bands: Vec<(f64, f64)> = (0..n)
        .into_par_iter()
        .map(|j| {
            // On band j (0-based, ascending) s * tr M rises from -2 to 2.
            let s = if (n - 1 - j).is_multiple_of(2) { 1.0 } else { -1.0 };
            let disc = |x: f64| s * discriminant_from_hopping(x, &a);
            let (lo, hi) = (brackets[j], brackets[j + 1]);
            let left = bisect(|x| disc(x) + 2.0, lo, hi);
            let right = bisect(|x| disc(x) - 2.0, left, hi);
            (left.max(0.0), right.max(0.0))
        })
        .collect();
    let mut bands = bands;
    // Closed gaps: the discriminant only touches +-2, so the two edges are
    // pinned down to roughly sqrt(eps) and need an explicit check.
    for j in 0..n.saturating_sub(1) {
        let (r, l) = (bands[j].1, bands[j + 1].0);
        if l > r && l - r < CLOSED_GAP_TOL * (1.0 + r.abs()) {
            let mid = discriminant_from_hopping(0.5 * (l + r), &a);
            if mid.abs() <= 2.0 + 1e-6 {
                bands[j].1 = l;
            }
        }
    }
    let valid = bands
        .iter()
        .filter(|&&(l, r)| {
            let mid = discriminant_from_hopping(0.5 * (l + r), &a);
            l <= r && mid.abs() <= 2.0 + 1e-6
        })
        .count();
    if valid != n {
        return Err(Error::BandCount {
            expected: n,
            found: valid,
        });
    }
    Ok(bands)
}

/// Bands in the squared-energy variable x = E^2 for an arbitrary period word.
pub fn x_bands_for_word(w: &Word, c: &CouplingMap) -> Result<BandSet> {
    BandSet::with_merge_tol(raw_x_bands(w, c)?, BAND_MERGE_TOL)
}

/// Bands of sigma_k in the x = E^2 variable.
pub fn sigma_k_x_bands(params: &SpectrumParams) -> Result<BandSet> {
    params.validate()?;
    let w = substitution_word(params.generation)?;
    let expected = fibonacci(params.generation as usize)?;
    let raw = raw_x_bands(&w, &params.couplings)?;
    if raw.len() != expected {
        return Err(Error::BandCount {
            expected,
            found: raw.len(),
        });
    }
    BandSet::with_merge_tol(raw, BAND_MERGE_TOL)
}

/// Maps x-bands to the symmetric energy bands E = +-sqrt(x).
pub fn x_to_energy_bands(x: &BandSet) -> Result<BandSet> {
    let mut out = Vec::with_capacity(2 * x.len());
    for &(lo, hi) in x.intervals() {
        // a bottom edge at rounding level is a band touching E = 0
        let lo = if lo < 1e-12 { 0.0 } else { lo };
        let (l, h) = (lo.sqrt(), hi.max(0.0).sqrt());
        out.push((l, h));
        out.push((-h, -l));
    }
    BandSet::with_merge_tol(out, BAND_MERGE_TOL)
}

/// Spectrum sigma_k of the period-F_k approximant, in the energy variable.
pub fn sigma_k(params: &SpectrumParams) -> Result<BandSet> {
    x_to_energy_bands(&sigma_k_x_bands(params)?)
}

/// Grid approximation of the set of energies with bounded curve orbits.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BInftyApprox {
    pub bands: BandSet,
    pub grid_step: f64,
    pub e_max: f64,
}

/// Smallest E_max (by factors of 1.25) at which gamma(E_max) is already in
/// the escape cone.
pub fn escape_bracket(c: &CouplingMap) -> f64 {
    let mut e = 1.0 + c.p_a.max(c.p_b) + 0.5;
    while !certified_escape(gamma_line(e, c)) {
        e *= 1.25;
    }
    e
}

/// Energies on a uniform grid over [-E_max, E_max] whose curve orbit does
/// not escape within `orbit_cap` steps, as a union of grid cells.
pub fn b_infty_approx(params: &SpectrumParams) -> Result<BInftyApprox> {
    params.validate()?;
    let c = params.couplings;
    let e_max = escape_bracket(&c);
    let n = params.grid_resolution;
    let h = 2.0 * e_max / (n - 1) as f64;
    let bounded: Vec<bool> = (0..n)
        .into_par_iter()
        .map(|i| {
            let e = -e_max + h * i as f64;
            certified_escape_step(gamma_line(e, &c), params.orbit_cap).is_none()
        })
        .collect();
    let mut cells = Vec::new();
    let mut i = 0;
    while i < n {
        if bounded[i] {
            let start = i;
            while i + 1 < n && bounded[i + 1] {
                i += 1;
            }
            let lo = -e_max + h * start as f64 - 0.5 * h;
            let hi = -e_max + h * i as f64 + 0.5 * h;
            cells.push((lo, hi));
        }
        i += 1;
    }
    Ok(BInftyApprox {
        bands: BandSet::new(cells)?,
        grid_step: h,
        e_max,
    })
}

fn minkowski_pair(a: &BandSet, b: &BandSet) -> Result<BandSet> {
    let mut sums = Vec::with_capacity(a.len() * b.len());
    for &(al, ah) in a.intervals() {
        for &(bl, bh) in b.intervals() {
            sums.push((al + bl, ah + bh));
        }
    }
    BandSet::new(sums)
}

/// N-fold Minkowski sum B + ... + B.
pub fn fermion_sum(bands: &BandSet, n: usize) -> Result<BandSet> {
    if n == 0 {
        return Err(Error::Domain("fermion number must be at least 1".into()));
    }
    let mut acc = bands.clone();
    for _ in 1..n {
        acc = minkowski_pair(&acc, bands)?;
    }
    Ok(acc)
}
