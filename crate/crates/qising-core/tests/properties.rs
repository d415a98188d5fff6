//! Cross-module properties: spectra against orbit sweeps, fractal estimators
//! on computed approximants, and the thickness/sum link.

use proptest::prelude::*;
use qising_core::fractal::{
    astels_interval_check, box_counting, box_counting_dithered, cantor_fixture, thickness,
};
use qising_core::quantum::{b_infty_approx, fermion_sum, sigma_k, SpectrumParams};
use qising_core::sequences::CouplingMap;
use qising_core::sets::{hausdorff_distance, BandSet};

fn params(ratio: f64, k: u32, grid: usize) -> SpectrumParams {
    SpectrumParams::new(CouplingMap::couplings(1.0, ratio).unwrap(), k, grid).unwrap()
}

#[test]
fn orbit_sweep_closes_in_on_spectrum() {
    // sigma_k sits inside the sweep at cap k - 2; the excess shrinks with k
    // and reaches grid resolution only around k = 11
    for ratio in [1.1, 1.3] {
        let mut steps = Vec::new();
        for k in 3..=12 {
            let p = params(ratio, k, 4001);
            let s = sigma_k(&p).unwrap();
            let b = b_infty_approx(&p).unwrap();
            for i in 0..p.grid_resolution {
                let e = -b.e_max + b.grid_step * i as f64;
                assert!(!s.contains(e) || b.bands.contains(e), "ratio {ratio}, k {k}, E {e}");
            }
            steps.push(hausdorff_distance(&s, &b.bands).unwrap() / b.grid_step);
        }
        assert!(steps.windows(2).all(|w| w[1] <= w[0]), "ratio {ratio}: {steps:?}");
        assert!(steps[steps.len() - 1] < 2.5, "ratio {ratio}: {steps:?}");
    }
}

#[test]
fn dithering_moves_dimension_little() {
    let sets = [cantor_fixture(8), sigma_k(&params(1.5, 12, 1000)).unwrap()];
    for s in &sets {
        let plain = box_counting(s, 1e-3, 1e-1, 16).unwrap();
        let dithered = box_counting_dithered(s, 1e-3, 1e-1, 16).unwrap();
        let shifted = box_counting_dithered(&s.shifted(0.123_456), 1e-3, 1e-1, 16).unwrap();
        assert!((dithered.slope - shifted.slope).abs() < 1e-3);
        // one anchor against eight differs by lattice effects only
        assert!((plain.slope - dithered.slope).abs() < 0.02);
    }
}

#[test]
fn thick_approximant_sums_to_an_interval() {
    for ratio in [1.05, 1.1, 1.2] {
        let p = params(ratio, 10, 2001);
        let s = sigma_k(&p).unwrap();
        let step = b_infty_approx(&p).unwrap().grid_step;
        if astels_interval_check(&s, 2).unwrap() {
            let (lo, hi) = s.hull().unwrap();
            let sum = fermion_sum(&s, 2).unwrap();
            assert_eq!(sum.len(), 1, "ratio {ratio}");
            let (slo, shi) = sum.hull().unwrap();
            assert!((slo - 2.0 * lo).abs() <= step && (shi - 2.0 * hi).abs() <= step);
        }
    }
}

#[test]
fn strong_modulation_is_thin() {
    let s = sigma_k(&params(3.0, 10, 1000)).unwrap();
    assert!(!astels_interval_check(&s, 2).unwrap());
    assert!(thickness(&s).unwrap().tau < 0.5);
}

fn band_strategy() -> impl Strategy<Value = BandSet> {
    prop::collection::vec((0.0..100.0f64, 0.05..3.0f64), 1..10)
        .prop_map(|v| BandSet::new(v.into_iter().map(|(lo, w)| (lo, lo + w)).collect()).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn astels_implies_interval_sum(s in band_strategy(), m in 1usize..5) {
        if astels_interval_check(&s, m).unwrap() {
            let (lo, hi) = s.hull().unwrap();
            let sum = fermion_sum(&s, m).unwrap();
            prop_assert_eq!(sum.len(), 1);
            let (slo, shi) = sum.hull().unwrap();
            prop_assert!((slo - m as f64 * lo).abs() < 1e-9 * (1.0 + lo.abs()) * m as f64);
            prop_assert!((shi - m as f64 * hi).abs() < 1e-9 * (1.0 + hi.abs()) * m as f64);
        }
    }

    #[test]
    fn sum_of_symmetric_set_is_symmetric(s in band_strategy(), m in 1usize..4) {
        let mut both: Vec<(f64, f64)> = s.intervals().to_vec();
        both.extend(s.reflect().intervals());
        let sym = BandSet::new(both).unwrap();
        let sum = fermion_sum(&sym, m).unwrap();
        prop_assert!(sum.symmetry_defect() < 1e-9 * (1.0 + sum.hull().unwrap().1));
    }
}
