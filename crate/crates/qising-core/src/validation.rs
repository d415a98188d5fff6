//! The acceptance suite: fifteen reproducible checks with pinned tolerances.
//!
//! Random instances come from ChaCha8 with a fixed stream per check, so a
//! check's inputs depend only on the seed and its own id.

use std::time::Instant;

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::classical::{
    brute_force_partition, free_energy_at_generation, free_energy_limit, log_partition,
    pure_closed_form, trace_identity_check, ThermoParams,
};
use crate::error::Result;
use crate::fractal::{
    box_counting, cantor_fixture, dimension_lower_bound, thickness, DimensionEstimate,
};
use crate::leeyang::{
    convergence_diagnostic, endpoint_margin, oracle_roots, zero_set, zero_set_oracle,
    FugacityParams,
};
use crate::quantum::{b_infty_approx, fermion_sum, sigma_k, sigma_k_x_bands, SpectrumParams};
use crate::sequences::{fibonacci, rotation_word, CouplingMap, PHI};
use crate::sets::{hausdorff_distance, BandSet};
use crate::tracemap::{
    differential_iterate, escape_rate_detail, fricke_vogt, mat3_vec, char_poly_eval, rho1_point,
    singularities, Symmetry, TraceTriple,
};

pub const DEFAULT_SEED: u64 = 20_240_917;

pub const ORACLE_TOL: f64 = 1e-10;
pub const TRACE_IDENTITY_TOL: f64 = 1e-8;
pub const FV_STEP_TOL: f64 = 1e-10;
pub const FV_ORBIT_TOL: f64 = 1e-8;
pub const FV_ORBIT_BOUND: f64 = 1e3;
pub const STRUCTURE_TOL: f64 = 1e-12;
pub const EIGEN_TOL: f64 = 1e-8;
pub const PURE_FREE_ENERGY_TOL: f64 = 1e-8;
pub const OFFSET_AGREEMENT_TOL: f64 = 1e-4;
pub const ZERO_SET_TOL: f64 = 1e-8;
pub const UNIT_CIRCLE_TOL: f64 = 1e-8;
pub const ENDPOINT_MARGIN: f64 = 1e-3;
pub const SYMMETRY_TOL: f64 = 1e-9;
pub const CANTOR_DIMENSION: f64 = 0.630_929_753_571_457_4;
pub const CANTOR_DIMENSION_TOL: f64 = 0.02;
pub const CANTOR_R2_MIN: f64 = 0.995;
pub const CANTOR_THICKNESS_TOL: f64 = 1e-6;
pub const LOWER_BOUND_SLACK: f64 = 0.05;
pub const ESCAPE_AGREEMENT_TOL: f64 = 1e-6;
/// Allowed distance of the fitted per-step gap contraction from 1/phi.
pub const ESCAPE_GAP_RATE_TOL: f64 = 0.01;
/// Gaps below this (relative to the rate) are rounding noise and end the fit.
pub const ESCAPE_GAP_FLOOR: f64 = 1e-12;

/// Ratios p_b / p_a (with p_a = 1) used by the fractal checks.
const FRACTAL_RATIOS: [f64; 3] = [1.05, 1.5, 3.0];
const FRACTAL_GENERATION: u32 = 12;
const DIMENSION_EPS: (f64, f64, usize) = (1e-3, 1e-1, 16);
const SPECTRUM_GRID: usize = 2001;
const ZERO_SET_GRID: usize = 10_000;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckResult {
    pub id: u32,
    pub name: String,
    pub pass: bool,
    pub detail: String,
    pub seconds: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub seed: u64,
    pub checks: Vec<CheckResult>,
}

impl ValidationReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }
}

type Outcome = Result<(bool, String)>;

struct Check {
    id: u32,
    name: &'static str,
    run: fn(&mut ChaCha8Rng) -> Outcome,
}

const CHECKS: [Check; 15] = [
    Check { id: 1, name: "partition oracle equivalence", run: oracle_equivalence },
    Check { id: 2, name: "trace identity", run: trace_identity },
    Check { id: 3, name: "Fricke-Vogt conservation", run: fricke_vogt_conservation },
    Check { id: 4, name: "trace map structure", run: trace_map_structure },
    Check { id: 5, name: "period-six eigendata", run: period_six_eigendata },
    Check { id: 6, name: "pure-case free energy", run: pure_free_energy },
    Check { id: 7, name: "rotation-offset independence", run: offset_independence },
    Check { id: 8, name: "Lee-Yang oracle equivalence", run: lee_yang_oracle },
    Check { id: 9, name: "zero-set convergence", run: zero_set_convergence },
    Check { id: 10, name: "band counts and symmetry", run: band_counts },
    Check { id: 11, name: "spectral Hausdorff convergence", run: spectral_convergence },
    Check { id: 12, name: "fractal fixtures", run: fractal_fixtures },
    Check { id: 13, name: "thickness and sum consistency", run: thickness_sum },
    Check { id: 14, name: "dimension trend", run: dimension_trend },
    Check { id: 15, name: "escape-rate Cauchy property", run: escape_rate_cauchy },
];

/// Ids of the checks exercising the classical chain only.
pub const CLASSICAL_CHECKS: [u32; 4] = [1, 2, 6, 7];

pub fn check_ids() -> Vec<u32> {
    CHECKS.iter().map(|c| c.id).collect()
}

/// Runs a single check; an error inside the check counts as a failure.
pub fn run_check(id: u32, seed: u64) -> Option<CheckResult> {
    let check = CHECKS.iter().find(|c| c.id == id)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(id as u64);
    let start = Instant::now();
    let (pass, detail) = match (check.run)(&mut rng) {
        Ok(v) => v,
        Err(e) => (false, format!("error: {e}")),
    };
    Some(CheckResult {
        id,
        name: check.name.to_string(),
        pass,
        detail,
        seconds: start.elapsed().as_secs_f64(),
    })
}

/// Runs the listed checks in order. Unknown ids are skipped.
pub fn run_checks(ids: &[u32], seed: u64) -> ValidationReport {
    ValidationReport {
        seed,
        checks: ids.iter().filter_map(|&id| run_check(id, seed)).collect(),
    }
}

pub fn run_suite(seed: u64) -> ValidationReport {
    run_checks(&check_ids(), seed)
}

fn rel_err(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(f64::MIN_POSITIVE)
}

fn is_non_increasing(v: &[f64]) -> bool {
    v.windows(2).all(|w| w[1] <= w[0])
}

fn fmt_list(v: &[f64]) -> String {
    let parts: Vec<String> = v.iter().map(|x| format!("{x:.3e}")).collect();
    format!("[{}]", parts.join(", "))
}

fn oracle_equivalence(rng: &mut ChaCha8Rng) -> Outcome {
    let mut worst: f64 = 0.0;
    for _ in 0..30 {
        let n = rng.gen_range(1..=12usize);
        let tau = rng.gen_range(0.3..=5.0);
        // K = p / tau and h = q / tau drawn from (0, 2] and [0, 2]
        let k_a = 2.0 - rng.gen_range(0.0..2.0);
        let k_b = 2.0 - rng.gen_range(0.0..2.0);
        let h_a = rng.gen_range(0.0..=2.0);
        let h_b = rng.gen_range(0.0..=2.0);
        let c = CouplingMap::new(k_a * tau, k_b * tau, h_a * tau, h_b * tau)?;
        let t = ThermoParams::new(c, tau)?;
        let w = rotation_word(n, rng.gen_range(0.0..1.0))?;
        let z = brute_force_partition(&w, &t)?;
        worst = worst.max(rel_err(log_partition(&w, &t)?.exp(), z));
    }
    Ok((worst < ORACLE_TOL, format!("30 instances, max rel err {worst:.2e}")))
}

fn trace_identity(rng: &mut ChaCha8Rng) -> Outcome {
    let mut worst: f64 = 0.0;
    for _ in 0..5 {
        let c = CouplingMap::new(
            rng.gen_range(0.2..2.0),
            rng.gen_range(0.2..2.0),
            rng.gen_range(0.0..1.0),
            rng.gen_range(0.0..1.0),
        )?;
        let t = ThermoParams::new(c, rng.gen_range(0.3..5.0))?;
        for k in 3..=12 {
            let (lhs, rhs) = trace_identity_check(k, &t)?;
            worst = worst.max(rel_err(rhs, lhs));
        }
    }
    Ok((worst < TRACE_IDENTITY_TOL, format!("k = 3..12, 5 sets, max rel err {worst:.2e}")))
}

/// Magnitude of the terms of the invariant; drift is measured against it.
fn fv_scale(t: TraceTriple) -> f64 {
    t.x * t.x + t.y * t.y + t.z * t.z + 2.0 * (t.x * t.y * t.z).abs() + 1.0
}

fn fricke_vogt_conservation(rng: &mut ChaCha8Rng) -> Outcome {
    let mut worst_step: f64 = 0.0;
    let mut worst_orbit: f64 = 0.0;
    for _ in 0..10_000 {
        let t0 = TraceTriple::new(
            rng.gen_range(-2.0..2.0),
            rng.gen_range(-2.0..2.0),
            rng.gen_range(-2.0..2.0),
        );
        let i0 = fricke_vogt(t0);
        let t1 = t0.f();
        let scale1 = fv_scale(t0).max(fv_scale(t1));
        worst_step = worst_step.max((fricke_vogt(t1) - i0).abs() / scale1);
        let mut cur = t0;
        let mut scale = fv_scale(t0);
        for _ in 0..20 {
            let next = cur.f();
            if next.max_norm() > FV_ORBIT_BOUND {
                break;
            }
            cur = next;
            scale = scale.max(fv_scale(cur));
            worst_orbit = worst_orbit.max((fricke_vogt(cur) - i0).abs() / scale);
        }
    }
    Ok((
        worst_step < FV_STEP_TOL && worst_orbit < FV_ORBIT_TOL,
        format!("1e4 triples, step drift {worst_step:.2e}, 20-step drift {worst_orbit:.2e}"),
    ))
}

fn trace_map_structure(rng: &mut ChaCha8Rng) -> Outcome {
    let p = singularities();
    let cycle = p[0].f() == p[0]
        && p[1].f() == p[2]
        && p[2].f() == p[3]
        && p[3].f() == p[1];

    let mut period6: f64 = 0.0;
    for i in 1..=100 {
        let a = 0.1 * i as f64;
        let t = TraceTriple::new(0.0, 0.0, a);
        period6 = period6.max(t.f_pow(6).dist_max(t) / a.max(1.0));
    }

    let mut rho: f64 = 0.0;
    for i in 0..200 {
        let x = -3.0 + 0.0301 * i as f64;
        let image = rho1_point(x)?.f();
        let on_curve = rho1_point(image.x)?;
        rho = rho.max(image.dist_max(on_curve) / image.max_norm().max(1.0));
    }

    let mut sym: f64 = 0.0;
    for _ in 0..1000 {
        let t = TraceTriple::new(
            rng.gen_range(-2.0..2.0),
            rng.gen_range(-2.0..2.0),
            rng.gen_range(-2.0..2.0),
        );
        let rev = Symmetry::S.apply(Symmetry::S.apply(t).f());
        let inv = t.f_inv();
        sym = sym.max(rev.dist_max(inv) / inv.max_norm().max(1.0));
        for s in [Symmetry::S2, Symmetry::S3, Symmetry::S4] {
            let lhs = s.apply(t.f_pow(3));
            let rhs = s.apply(t).f_pow(3);
            sym = sym.max(lhs.dist_max(rhs) / rhs.max_norm().max(1.0));
        }
    }
    let pass = cycle && period6 < STRUCTURE_TOL && rho < STRUCTURE_TOL && sym < STRUCTURE_TOL;
    Ok((
        pass,
        format!("cycle {cycle}, f^6 {period6:.1e}, rho1 {rho:.1e}, symmetries {sym:.1e}"),
    ))
}

fn period_six_eigendata(_: &mut ChaCha8Rng) -> Outcome {
    let mut worst_poly: f64 = 0.0;
    let mut worst_vec: f64 = 0.0;
    for a in [0.5f64, 1.0, 2.0] {
        let m = differential_iterate(TraceTriple::new(0.0, 0.0, a), 6);
        let s = (4.0 * a.powi(4) + 1.0).sqrt();
        let lam = -4.0 * a * a * s + 8.0 * a.powi(4) + 1.0;
        let (val, scale) = char_poly_eval(&m, lam);
        worst_poly = worst_poly.max(val.abs() / scale);
        let v = [1.0, -(s + 2.0 * a * a - 1.0) / (2.0 * a), 0.0];
        let mv = mat3_vec(&m, v);
        let norm = v.iter().map(|c| c.abs()).fold(0.0, f64::max) * lam.abs().max(1.0);
        for i in 0..3 {
            worst_vec = worst_vec.max((mv[i] - lam * v[i]).abs() / norm);
        }
    }
    Ok((
        worst_poly < EIGEN_TOL && worst_vec < EIGEN_TOL,
        format!("a in {{0.5, 1, 2}}: char poly {worst_poly:.1e}, kernel {worst_vec:.1e}"),
    ))
}

fn pure_free_energy(rng: &mut ChaCha8Rng) -> Outcome {
    let p = rng.gen_range(0.5..2.0);
    let q = rng.gen_range(0.0..1.0);
    let c = CouplingMap::new(p, p, q, q)?;
    let mut worst: f64 = 0.0;
    for i in 0..50 {
        let tau = 0.3 + 4.7 * i as f64 / 49.0;
        let r = free_energy_limit(&c, tau, 1e-12, 0.0)?;
        let exact = pure_closed_form(p / tau, q / tau, tau)?;
        worst = worst.max((r.value - exact).abs());
    }
    Ok((
        worst < PURE_FREE_ENERGY_TOL,
        format!("p = {p:.3}, q = {q:.3}, 50 temperatures, max diff {worst:.2e}"),
    ))
}

fn offset_independence(rng: &mut ChaCha8Rng) -> Outcome {
    let mut worst: f64 = 0.0;
    let mut negative = true;
    for _ in 0..3 {
        let c = CouplingMap::new(
            rng.gen_range(0.5..2.0),
            rng.gen_range(0.5..2.0),
            rng.gen_range(0.0..0.5),
            rng.gen_range(0.0..0.5),
        )?;
        let tau = rng.gen_range(0.5..3.0);
        let mut values = Vec::new();
        for _ in 0..5 {
            let r = free_energy_at_generation(&c, tau, rng.gen_range(0.0..1.0), 18)?;
            negative &= r.value < 0.0;
            values.push(r.value);
        }
        let lo = values.iter().cloned().fold(f64::INFINITY, f64::min);
        let hi = values.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        worst = worst.max(hi - lo);
    }
    Ok((
        worst < OFFSET_AGREEMENT_TOL && negative,
        format!("N = F_18, 3 sets x 5 offsets, max spread {worst:.2e}, all negative {negative}"),
    ))
}

fn lee_yang_params(rng: &mut ChaCha8Rng) -> Result<FugacityParams> {
    let c = CouplingMap::couplings(rng.gen_range(0.5..2.0), rng.gen_range(0.5..2.0))?;
    FugacityParams::from_couplings(&c, rng.gen_range(0.5..3.0))
}

fn lee_yang_oracle(rng: &mut ChaCha8Rng) -> Outcome {
    let mut worst_h: f64 = 0.0;
    let mut worst_circle: f64 = 0.0;
    let mut margin = f64::INFINITY;
    for _ in 0..2 {
        let f = lee_yang_params(rng)?;
        for k in 3..=6 {
            let z = zero_set(k, &f, ZERO_SET_GRID)?;
            let o = zero_set_oracle(k, &f)?;
            worst_h = worst_h.max(hausdorff_distance(&z, &o)?);
            for r in oracle_roots(k, &f)? {
                worst_circle = worst_circle.max((r.norm() - 1.0).abs());
            }
            margin = margin.min(endpoint_margin(&z));
        }
    }
    Ok((
        worst_h < ZERO_SET_TOL && worst_circle < UNIT_CIRCLE_TOL && margin > ENDPOINT_MARGIN,
        format!(
            "F_k in {{3,5,8,13}}, 2 sets: hdist {worst_h:.1e}, ||eta|-1| {worst_circle:.1e}, \
             endpoint margin {margin:.3e}"
        ),
    ))
}

fn zero_set_convergence(rng: &mut ChaCha8Rng) -> Outcome {
    let mut pass = true;
    let mut parts = Vec::new();
    for _ in 0..2 {
        let f = lee_yang_params(rng)?;
        let d: Vec<f64> = convergence_diagnostic(&f, &[6, 12, 18, 24], ZERO_SET_GRID)?
            .into_iter()
            .map(|(_, h)| h)
            .collect();
        pass &= is_non_increasing(&d);
        parts.push(fmt_list(&d));
    }
    Ok((pass, format!("k = 6 -> 12 -> 18 -> 24: {}", parts.join(" "))))
}

fn band_counts(rng: &mut ChaCha8Rng) -> Outcome {
    let mut pass = true;
    let mut defect: f64 = 0.0;
    let mut bad = Vec::new();
    for _ in 0..3 {
        let c = CouplingMap::couplings(rng.gen_range(0.5..2.0), rng.gen_range(0.5..2.0))?;
        for k in 2..=10 {
            let p = SpectrumParams::new(c, k, SPECTRUM_GRID)?;
            let x = sigma_k_x_bands(&p)?;
            if x.len() != fibonacci(k as usize)? {
                pass = false;
                bad.push(format!("k={k}: {}", x.len()));
            }
            defect = defect.max(sigma_k(&p)?.symmetry_defect());
        }
    }
    pass &= defect < SYMMETRY_TOL;
    let mut detail = format!("k = 2..10, 3 sets, symmetry defect {defect:.1e}");
    if !bad.is_empty() {
        detail.push_str(&format!(", wrong counts {}", bad.join(" ")));
    }
    Ok((pass, detail))
}

fn spectral_convergence(_: &mut ChaCha8Rng) -> Outcome {
    let mut pass = true;
    let mut parts = Vec::new();
    for ratio in [1.1, 1.5, 2.0] {
        let c = CouplingMap::couplings(1.0, ratio)?;
        let sets: Vec<BandSet> = (6..=12)
            .map(|k| sigma_k(&SpectrumParams::new(c, k, SPECTRUM_GRID)?))
            .collect::<Result<_>>()?;
        let d: Vec<f64> = sets
            .windows(2)
            .map(|w| hausdorff_distance(&w[0], &w[1]))
            .collect::<Result<_>>()?;
        pass &= is_non_increasing(&d);
        parts.push(format!("ratio {ratio}: {}", fmt_list(&d)));
    }
    // the grid resolves B_infinity only near p_b = p_a; see the README
    let c = CouplingMap::couplings(1.0, 1.1)?;
    let p = SpectrumParams::new(c, 12, SPECTRUM_GRID)?;
    let approx = b_infty_approx(&p)?;
    let h = hausdorff_distance(&sigma_k(&p)?, &approx.bands)?;
    let ratio = h / approx.grid_step;
    pass &= ratio < 2.0;
    parts.push(format!("k = 12 vs grid: {ratio:.3} grid steps"));
    Ok((pass, parts.join("; ")))
}

fn approximant(ratio: f64) -> Result<BandSet> {
    let c = CouplingMap::couplings(1.0, ratio)?;
    sigma_k(&SpectrumParams::new(c, FRACTAL_GENERATION, SPECTRUM_GRID)?)
}

fn approximant_dimension(s: &BandSet) -> Result<DimensionEstimate> {
    let (lo, hi, levels) = DIMENSION_EPS;
    box_counting(s, lo, hi, levels)
}

fn fractal_fixtures(_: &mut ChaCha8Rng) -> Outcome {
    let cantor = cantor_fixture(10);
    let d = box_counting(&cantor, 3f64.powi(-10), 3f64.powi(-1), 20)?;
    let t = thickness(&cantor)?;
    let mut pass = (d.slope - CANTOR_DIMENSION).abs() <= CANTOR_DIMENSION_TOL
        && d.r_squared > CANTOR_R2_MIN
        && (t.tau - 1.0).abs() <= CANTOR_THICKNESS_TOL;
    let mut pairs = Vec::new();
    for ratio in FRACTAL_RATIOS {
        let s = approximant(ratio)?;
        let lb = dimension_lower_bound(&thickness(&s)?)?;
        let slope = approximant_dimension(&s)?.slope;
        pass &= lb <= slope + LOWER_BOUND_SLACK;
        pairs.push(format!("{ratio}: {lb:.3} <= {slope:.3}"));
    }
    Ok((
        pass,
        format!(
            "cantor slope {:.4} (r2 {:.4}), thickness {:.8}; lower bounds {}",
            d.slope,
            d.r_squared,
            t.tau,
            pairs.join(", ")
        ),
    ))
}

fn thickness_sum(_: &mut ChaCha8Rng) -> Outcome {
    let c = CouplingMap::couplings(1.0, 1.1)?;
    let p = SpectrumParams::new(c, 12, SPECTRUM_GRID)?;
    let s = sigma_k(&p)?;
    let h = b_infty_approx(&p)?.grid_step;
    let t = thickness(&s)?;
    let b = s.hull().map(|(_, hi)| hi).unwrap_or(0.0);
    let sum = fermion_sum(&s, 2)?;
    let single = sum.len() == 1;
    let (lo, hi) = sum.hull().unwrap_or((f64::NAN, f64::NAN));
    let matches = (lo + 2.0 * b).abs() <= h && (hi - 2.0 * b).abs() <= h;
    Ok((
        2.0 * t.nu >= 1.0 && single && matches,
        format!(
            "tau {:.4}, 2 nu {:.4}, sum has {} interval(s), hull [{lo:.6}, {hi:.6}] vs 2b = {:.6}",
            t.tau,
            2.0 * t.nu,
            sum.len(),
            2.0 * b
        ),
    ))
}

fn dimension_trend(_: &mut ChaCha8Rng) -> Outcome {
    let dims: Vec<f64> = FRACTAL_RATIOS
        .iter()
        .map(|&r| approximant_dimension(&approximant(r)?).map(|d| d.slope))
        .collect::<Result<_>>()?;
    let decreasing = dims.windows(2).all(|w| w[1] < w[0]);
    let inside = dims.iter().all(|&d| d > 0.0 && d < 1.0);
    Ok((
        decreasing && inside,
        format!("ratios {FRACTAL_RATIOS:?} at k = {FRACTAL_GENERATION}: {}", fmt_list(&dims)),
    ))
}

/// Per-step contraction exp(slope) of a least-squares fit of ln g_n on n.
fn fitted_contraction(gaps: &[f64]) -> f64 {
    let m = gaps.len() as f64;
    let mx = (m - 1.0) / 2.0;
    let ys: Vec<f64> = gaps.iter().map(|g| g.ln()).collect();
    let my = ys.iter().sum::<f64>() / m;
    let (mut sxy, mut sxx) = (0.0, 0.0);
    for (i, y) in ys.iter().enumerate() {
        let dx = i as f64 - mx;
        sxy += dx * (y - my);
        sxx += dx * dx;
    }
    (sxy / sxx).exp()
}

fn escape_rate_cauchy(rng: &mut ChaCha8Rng) -> Outcome {
    let mut found = 0;
    let mut draws = 0;
    let mut worst_rate: f64 = 0.0;
    let mut worst_agree: f64 = 0.0;
    let mut shrinks = true;
    while found < 20 && draws < 10_000 {
        draws += 1;
        let t = TraceTriple::new(
            rng.gen_range(-3.0..3.0),
            rng.gen_range(-3.0..3.0),
            rng.gen_range(-3.0..3.0),
        );
        let Ok(r) = escape_rate_detail(t, 1e-13) else {
            continue;
        };
        found += 1;
        let floor = ESCAPE_GAP_FLOOR * r.value.abs().max(1.0);
        let gaps: Vec<f64> = r.gaps().into_iter().take_while(|&g| g > floor).collect();
        if gaps.len() < 8 {
            shrinks = false;
            continue;
        }
        // early gaps oscillate in pairs, so the decay is judged by the fit
        let rate = fitted_contraction(&gaps);
        worst_rate = worst_rate.max((rate - 1.0 / PHI).abs());
        shrinks &= gaps[gaps.len() - 1] < gaps[0];
        worst_agree = worst_agree.max((r.value - r.first_coordinate_value).abs());
    }
    Ok((
        found == 20 && shrinks && worst_rate < ESCAPE_GAP_RATE_TOL && worst_agree < ESCAPE_AGREEMENT_TOL,
        format!(
            "{found} starts ({draws} draws), gap contraction within {worst_rate:.1e} of 1/phi, \
             first-coordinate diff {worst_agree:.1e}"
        ),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ids_are_one_to_fifteen() {
        assert_eq!(check_ids(), (1..=15).collect::<Vec<_>>());
        assert!(run_check(99, DEFAULT_SEED).is_none());
    }

    #[test]
    fn cheap_checks_are_deterministic() {
        let a = run_checks(&[3, 4, 5], 7);
        let b = run_checks(&[3, 4, 5], 7);
        for (x, y) in a.checks.iter().zip(&b.checks) {
            assert_eq!(x.detail, y.detail);
            assert!(x.pass, "{}: {}", x.name, x.detail);
        }
    }

    #[test]
    fn monotone_helper() {
        assert!(is_non_increasing(&[3.0, 2.0, 2.0, 1.0]));
        assert!(!is_non_increasing(&[1.0, 2.0]));
    }
}
