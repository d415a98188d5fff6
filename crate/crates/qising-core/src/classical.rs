//! Classical Ising chain: transfer matrices, partition functions and free
//! energies (k_B = 1, so K = p / tau and h = q / tau).

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::sequences::{fibonacci_numbers, rotation_word, substitution_word, CouplingMap, Word};
use crate::tracemap::LogOrbit;

pub type Mat2 = [[f64; 2]; 2];

/// Largest chain the exhaustive oracle accepts.
pub const MAX_BRUTE_FORCE_SITES: usize = 20;

/// Largest Fibonacci index used by [`free_energy_limit`].
pub const MAX_LIMIT_GENERATION: u32 = 30;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ThermoParams {
    pub couplings: CouplingMap,
    pub tau: f64,
}

impl ThermoParams {
    pub fn new(couplings: CouplingMap, tau: f64) -> Result<Self> {
        couplings.validate()?;
        if !(tau > 0.0) || !tau.is_finite() {
            return Err(Error::Domain(format!("temperature must be positive, got {tau}")));
        }
        Ok(ThermoParams { couplings, tau })
    }

    /// (K_i, h_i) for every site of `w`.
    pub fn site_parameters(&self, w: &Word) -> Vec<(f64, f64)> {
        w.iter()
            .map(|s| (self.couplings.p(s) / self.tau, self.couplings.q(s) / self.tau))
            .collect()
    }
}

/// [[e^{K+h}, e^{-K-h}], [e^{-K+h}, e^{K-h}]].
pub fn transfer_matrix(k: f64, h: f64) -> Mat2 {
    [
        [(k + h).exp(), (-k - h).exp()],
        [(-k + h).exp(), (k - h).exp()],
    ]
}

pub fn mat2_mul(a: &Mat2, b: &Mat2) -> Mat2 {
    [
        [
            a[0][0] * b[0][0] + a[0][1] * b[1][0],
            a[0][0] * b[0][1] + a[0][1] * b[1][1],
        ],
        [
            a[1][0] * b[0][0] + a[1][1] * b[1][0],
            a[1][0] * b[0][1] + a[1][1] * b[1][1],
        ],
    ]
}

/// A 2x2 matrix times 2^exponent. After each product the matrix is rescaled
/// by a power of two so its largest entry lies in [1/2, 2); the rescaling is
/// exact in binary floating point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScaledMatrix {
    m: Mat2,
    exponent: i64,
}

impl ScaledMatrix {
    pub fn identity() -> Self {
        ScaledMatrix {
            m: [[1.0, 0.0], [0.0, 1.0]],
            exponent: 0,
        }
    }

    pub fn from_matrix(m: Mat2) -> Self {
        let mut s = ScaledMatrix { m, exponent: 0 };
        s.renormalize();
        s
    }

    pub fn matrix(&self) -> &Mat2 {
        &self.m
    }

    /// Natural log of the scale factor.
    pub fn log_scale(&self) -> f64 {
        self.exponent as f64 * std::f64::consts::LN_2
    }

    fn renormalize(&mut self) {
        let max = self.m.iter().flatten().fold(0.0f64, |a, v| a.max(v.abs()));
        if max == 0.0 || !max.is_finite() {
            return;
        }
        let e = max.log2().round() as i32;
        if e != 0 {
            let f = 2f64.powi(-e);
            for v in self.m.iter_mut().flatten() {
                *v *= f;
            }
            self.exponent += e as i64;
        }
    }

    /// self <- t * self.
    pub fn left_mul(&mut self, t: &Mat2) {
        self.m = mat2_mul(t, &self.m);
        self.renormalize();
    }

    /// Represented matrix (may overflow).
    pub fn to_matrix(&self) -> Mat2 {
        let f = self.log_scale().exp();
        self.m.map(|row| row.map(|v| v * f))
    }

    pub fn ln_trace(&self) -> f64 {
        (self.m[0][0] + self.m[1][1]).ln() + self.log_scale()
    }

    /// ln of the largest entry modulus (entrywise infinity norm).
    pub fn ln_norm_inf(&self) -> f64 {
        let r = self.m.iter().flatten().fold(0.0f64, |a, v| a.max(v.abs()));
        r.ln() + self.log_scale()
    }

    /// ln of the sum of entry moduli (entrywise 1-norm).
    pub fn ln_norm_1(&self) -> f64 {
        let c: f64 = self.m.iter().flatten().map(|v| v.abs()).sum();
        c.ln() + self.log_scale()
    }
}

/// Descending product T_N ... T_1 over the sites of `w`.
pub fn transfer_product(w: &Word, t: &ThermoParams) -> ScaledMatrix {
    let mut acc = ScaledMatrix::identity();
    for (k, h) in t.site_parameters(w) {
        acc.left_mul(&transfer_matrix(k, h));
    }
    acc
}

/// ln Z for the periodic chain with couplings read off `w`.
pub fn log_partition(w: &Word, t: &ThermoParams) -> Result<f64> {
    if w.is_empty() {
        return Err(Error::Domain("empty word".into()));
    }
    Ok(transfer_product(w, t).ln_trace())
}

fn check_brute_force_size(w: &Word) -> Result<()> {
    if w.is_empty() {
        return Err(Error::Domain("empty word".into()));
    }
    if w.len() > MAX_BRUTE_FORCE_SITES {
        return Err(Error::Size {
            what: "brute-force chain length",
            limit: MAX_BRUTE_FORCE_SITES as u64,
            got: w.len() as u64,
        });
    }
    Ok(())
}

/// Z by summing exp(sum K_i s_i s_{i+1} + sum h_i s_i) over all 2^N spin
/// configurations with s_{N+1} = s_1.
pub fn brute_force_partition(w: &Word, t: &ThermoParams) -> Result<f64> {
    check_brute_force_size(w)?;
    let sites = t.site_parameters(w);
    let n = sites.len();
    let spin = |mask: u32, i: usize| if mask >> (i % n) & 1 == 0 { 1.0 } else { -1.0 };
    let mut sum = 0.0;
    let mut comp = 0.0;
    for mask in 0..(1u32 << n) {
        let e: f64 = sites
            .iter()
            .enumerate()
            .map(|(i, &(k, h))| {
                let s = spin(mask, i);
                k * s * spin(mask, i + 1) + h * s
            })
            .sum();
        // Neumaier summation
        let v = e.exp();
        let tsum = sum + v;
        comp += if sum.abs() >= v { (sum - tsum) + v } else { (v - tsum) + sum };
        sum = tsum;
    }
    Ok(sum + comp)
}

/// -ln Z / (N tau).
pub fn free_energy_finite(w: &Word, t: &ThermoParams) -> Result<f64> {
    Ok(-log_partition(w, t)? / (w.len() as f64 * t.tau))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FreeEnergyResult {
    pub value: f64,
    pub n_used: usize,
    pub cauchy_gap: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LimitOptions {
    pub tol: f64,
    pub offset: f64,
    /// Chains are taken up to length F_max_generation.
    pub max_generation: u32,
}

impl Default for LimitOptions {
    fn default() -> Self {
        LimitOptions {
            tol: 1e-8,
            offset: 0.0,
            max_generation: MAX_LIMIT_GENERATION,
        }
    }
}

/// Thermodynamic limit of the free energy, taking rotation words of
/// Fibonacci lengths until successive values differ by less than `tol`.
pub fn free_energy_limit(c: &CouplingMap, tau: f64, tol: f64, offset: f64) -> Result<FreeEnergyResult> {
    free_energy_limit_with(
        c,
        tau,
        &LimitOptions {
            tol,
            offset,
            ..LimitOptions::default()
        },
    )
}

pub fn free_energy_limit_with(c: &CouplingMap, tau: f64, opts: &LimitOptions) -> Result<FreeEnergyResult> {
    if !(opts.tol > 0.0) {
        return Err(Error::Domain(format!("tolerance must be positive, got {}", opts.tol)));
    }
    if opts.max_generation < 3 || opts.max_generation > MAX_LIMIT_GENERATION {
        return Err(Error::Domain(format!(
            "max_generation must lie in 3..={MAX_LIMIT_GENERATION}"
        )));
    }
    let t = ThermoParams::new(*c, tau)?;
    let fib = fibonacci_numbers(opts.max_generation as usize)?;
    let mut prev: Option<f64> = None;
    let mut gap = f64::INFINITY;
    let mut n = 0;
    for &len in &fib[2..=opts.max_generation as usize] {
        n = len as usize;
        let value = free_energy_finite(&rotation_word(n, opts.offset)?, &t)?;
        if let Some(p) = prev {
            gap = (value - p).abs();
            if gap < opts.tol {
                return Ok(FreeEnergyResult {
                    value,
                    n_used: n,
                    cauchy_gap: gap,
                });
            }
        }
        prev = Some(value);
    }
    Err(Error::NoConvergence { n_used: n, last_gap: gap })
}

/// Free energy at the fixed length N = F_gen; `cauchy_gap` compares with F_{gen-1}.
pub fn free_energy_at_generation(c: &CouplingMap, tau: f64, offset: f64, gen: u32) -> Result<FreeEnergyResult> {
    if !(2..=MAX_LIMIT_GENERATION).contains(&gen) {
        return Err(Error::Domain(format!("generation must lie in 2..={MAX_LIMIT_GENERATION}")));
    }
    let t = ThermoParams::new(*c, tau)?;
    let fib = fibonacci_numbers(gen as usize)?;
    let n = fib[gen as usize] as usize;
    let value = free_energy_finite(&rotation_word(n, offset)?, &t)?;
    let prev = free_energy_finite(&rotation_word(fib[gen as usize - 1] as usize, offset)?, &t)?;
    Ok(FreeEnergyResult {
        value,
        n_used: n,
        cauchy_gap: (value - prev).abs(),
    })
}

/// -(1/tau) ln lambda_max of transfer_matrix(K, h).
pub fn pure_closed_form(k: f64, h: f64, tau: f64) -> Result<f64> {
    if !(k >= 0.0) || !h.is_finite() || !k.is_finite() {
        return Err(Error::Domain(format!("need finite K >= 0 and h, got K = {k}, h = {h}")));
    }
    if !(tau > 0.0) {
        return Err(Error::Domain(format!("temperature must be positive, got {tau}")));
    }
    // lambda_max = tr/2 + sqrt(tr^2/4 - det) with tr/2 = e^K cosh h and
    // tr^2/4 - det = e^{2K} sinh^2 h + e^{-2K}.
    let lam = k.exp() * h.cosh() + ((2.0 * k).exp() * h.sinh().powi(2) + (-2.0 * k).exp()).sqrt();
    Ok(-lam.ln() / tau)
}

/// Both sides of ln Tr T^{(F_k)} = sum ln d_i + ln 2 + ln|pi f^{k-3}(x_3, x_2, x_1)|,
/// with d_i = sqrt(det T_i) and x_j half-traces of the normalised products of
/// length F_j.
pub fn trace_identity_check(k: u32, t: &ThermoParams) -> Result<(f64, f64)> {
    if k < 3 {
        return Err(Error::Domain(format!("trace identity needs k >= 3, got {k}")));
    }
    let w = substitution_word(k)?;
    let lhs = log_partition(&w, t)?;

    let sites = t.site_parameters(&w);
    let mut ln_d_sum = 0.0;
    let mut normalised = Vec::with_capacity(3);
    for (i, &(kk, h)) in sites.iter().enumerate() {
        let det = 2.0 * (2.0 * kk).sinh();
        if !(det > 0.0) {
            return Err(Error::DegenerateDeterminant { site: i + 1 });
        }
        let d = det.sqrt();
        ln_d_sum += d.ln();
        if i < 3 {
            normalised.push(transfer_matrix(kk, h).map(|row| row.map(|v| v / d)));
        }
    }
    // x_j from prefixes of lengths F_1 = 1, F_2 = 2, F_3 = 3
    let mut prod: Mat2 = [[1.0, 0.0], [0.0, 1.0]];
    let mut half = [0.0; 3];
    for (i, m) in normalised.iter().enumerate() {
        prod = mat2_mul(m, &prod);
        half[i] = 0.5 * (prod[0][0] + prod[1][1]);
    }
    let mut orbit = LogOrbit::new([half[2], half[1], half[0]]);
    for _ in 0..k - 3 {
        orbit.advance();
    }
    let rhs = ln_d_sum + std::f64::consts::LN_2 + orbit.ln_abs()[0];
    Ok((lhs, rhs))
}
