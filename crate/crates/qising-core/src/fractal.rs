//! Box-counting dimension, Newhouse thickness and related gap statistics
//! of finite interval approximants.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::sets::{BandSet, CompactSet};

/// Minimum gain in r^2 for discarding the two extreme scales.
pub const TRIM_GAIN: f64 = 0.005;

/// Number of anchor offsets averaged by [`box_counting_dithered`].
pub const DITHER_OFFSETS: usize = 8;

/// Slack in the Astels test m * nu >= 1.
pub const ASTELS_SLACK: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DimensionEstimate {
    pub slope: f64,
    pub intercept: f64,
    pub r_squared: f64,
    pub scale_range: (f64, f64),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GapBridge {
    pub gap: (f64, f64),
    pub bridge_ratio: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ThicknessEstimate {
    /// `f64::INFINITY` for a single interval.
    pub tau: f64,
    pub nu: f64,
    /// Gaps in presentation order (decreasing length).
    pub gaps: Vec<GapBridge>,
}

/// Middle-thirds Cantor approximation of the given level on [0, 1].
pub fn cantor_fixture(level: u32) -> BandSet {
    let mut iv = vec![(0.0f64, 1.0f64)];
    for _ in 0..level {
        iv = iv
            .iter()
            .flat_map(|&(a, b)| {
                let t = (b - a) / 3.0;
                [(a, a + t), (b - t, b)]
            })
            .collect();
    }
    BandSet::new(iv).expect("finite sorted intervals")
}

/// Number of boxes [anchor + j eps, anchor + (j+1) eps) met by the set.
/// An interval covers floor(lo) ..= ceil(hi) - 1 in box units; a point
/// covers its floor box.
fn occupied_boxes(iv: &[(f64, f64)], anchor: f64, eps: f64) -> u64 {
    let mut count = 0u64;
    let mut last: Option<i64> = None;
    for &(lo, hi) in iv {
        let first = ((lo - anchor) / eps).floor() as i64;
        let end = if hi > lo {
            (((hi - anchor) / eps).ceil() as i64 - 1).max(first)
        } else {
            first
        };
        let start = match last {
            Some(l) if l >= first => l + 1,
            _ => first,
        };
        if end >= start {
            count += (end - start + 1) as u64;
        }
        last = Some(last.map_or(end, |l| l.max(end)));
    }
    count
}

fn regression(xs: &[f64], ys: &[f64]) -> (f64, f64, f64) {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    let syy: f64 = ys.iter().map(|y| (y - my).powi(2)).sum();
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let slope = sxy / sxx;
    let r2 = if syy == 0.0 { 1.0 } else { (sxy * sxy / (sxx * syy)).clamp(0.0, 1.0) };
    (slope, my - slope * mx, r2)
}

fn scales(eps_min: f64, eps_max: f64, levels: usize) -> Result<Vec<f64>> {
    if !(eps_min > 0.0 && eps_min < eps_max && eps_max.is_finite()) {
        return Err(Error::Domain(format!(
            "need 0 < eps_min < eps_max, got {eps_min} and {eps_max}"
        )));
    }
    if levels < 5 {
        return Err(Error::Domain(format!("need at least 5 levels, got {levels}")));
    }
    let ratio = eps_min / eps_max;
    Ok((0..levels)
        .map(|i| eps_max * ratio.powf(i as f64 / (levels - 1) as f64))
        .collect())
}

fn fit(eps: &[f64], counts: &[f64], points_only: bool) -> Result<DimensionEstimate> {
    let mut distinct = counts.to_vec();
    distinct.sort_by(f64::total_cmp);
    distinct.dedup();
    if distinct.len() < 2 {
        if points_only {
            return Ok(DimensionEstimate {
                slope: 0.0,
                intercept: counts[0].ln(),
                r_squared: 1.0,
                scale_range: (eps[eps.len() - 1], eps[0]),
            });
        }
        return Err(Error::DegenerateRegression(format!(
            "box counts are constant ({}) over the scale range",
            counts[0]
        )));
    }
    let xs: Vec<f64> = eps.iter().map(|e| -e.ln()).collect();
    let ys: Vec<f64> = counts.iter().map(|c| c.ln()).collect();
    let (slope, intercept, r2) = regression(&xs, &ys);
    let full = DimensionEstimate {
        slope,
        intercept,
        r_squared: r2,
        scale_range: (eps[eps.len() - 1], eps[0]),
    };
    let n = xs.len();
    if n >= 5 {
        let (s2, i2, r2t) = regression(&xs[1..n - 1], &ys[1..n - 1]);
        if r2t.is_finite() && r2t >= r2 + TRIM_GAIN {
            return Ok(DimensionEstimate {
                slope: s2,
                intercept: i2,
                r_squared: r2t,
                scale_range: (eps[n - 2], eps[1]),
            });
        }
    }
    Ok(full)
}

fn counts_at<S: CompactSet + ?Sized>(s: &S, eps: &[f64], offsets: usize) -> Result<(Vec<f64>, bool)> {
    let iv = s.as_intervals();
    let Some(&(left, _)) = iv.first() else {
        return Err(Error::Domain("box counting of an empty set".into()));
    };
    let points_only = iv.iter().all(|&(a, b)| a == b);
    let counts = eps
        .iter()
        .map(|&e| {
            let total: u64 = (0..offsets)
                .map(|j| occupied_boxes(&iv, left - e * j as f64 / offsets as f64, e))
                .sum();
            total as f64 / offsets as f64
        })
        .collect();
    Ok((counts, points_only))
}

/// Least-squares slope of log N(eps) against log(1/eps) over `levels`
/// geometrically spaced scales, with the box lattice anchored at the left
/// end of the convex hull.
pub fn box_counting<S: CompactSet + ?Sized>(
    s: &S,
    eps_min: f64,
    eps_max: f64,
    levels: usize,
) -> Result<DimensionEstimate> {
    let eps = scales(eps_min, eps_max, levels)?;
    let (counts, points_only) = counts_at(s, &eps, 1)?;
    fit(&eps, &counts, points_only)
}

/// As [`box_counting`], with counts averaged over [`DITHER_OFFSETS`] shifts
/// of the lattice anchor.
pub fn box_counting_dithered<S: CompactSet + ?Sized>(
    s: &S,
    eps_min: f64,
    eps_max: f64,
    levels: usize,
) -> Result<DimensionEstimate> {
    let eps = scales(eps_min, eps_max, levels)?;
    let (counts, points_only) = counts_at(s, &eps, DITHER_OFFSETS)?;
    fit(&eps, &counts, points_only)
}

/// Newhouse thickness for the presentation ordering gaps by decreasing
/// length (ties: leftmost first).
///
/// The bridge on each side of a gap runs to the nearest earlier-ordered gap
/// or to the end of the hull.
pub fn thickness(s: &BandSet) -> Result<ThicknessEstimate> {
    let Some((left, right)) = s.hull() else {
        return Err(Error::Domain("thickness of an empty set".into()));
    };
    let gaps = s.gaps();
    if gaps.is_empty() {
        return Ok(ThicknessEstimate {
            tau: f64::INFINITY,
            nu: 1.0,
            gaps: Vec::new(),
        });
    }
    let len: Vec<f64> = gaps.iter().map(|g| g.1 - g.0).collect();
    let n = gaps.len();

    // nearest gap to the left with length >= (earlier in the order)
    let mut left_end = vec![left; n];
    let mut stack: Vec<usize> = Vec::new();
    for i in 0..n {
        while stack.last().is_some_and(|&j| len[j] < len[i]) {
            stack.pop();
        }
        if let Some(&j) = stack.last() {
            left_end[i] = gaps[j].1;
        }
        stack.push(i);
    }
    // nearest gap to the right with length > (ties go to the left one)
    let mut right_end = vec![right; n];
    stack.clear();
    for i in (0..n).rev() {
        while stack.last().is_some_and(|&j| len[j] <= len[i]) {
            stack.pop();
        }
        if let Some(&j) = stack.last() {
            right_end[i] = gaps[j].0;
        }
        stack.push(i);
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| len[b].total_cmp(&len[a]).then(a.cmp(&b)));
    let mut tau = f64::INFINITY;
    let mut out = Vec::with_capacity(n);
    for i in order {
        let bridge = (gaps[i].0 - left_end[i]).min(right_end[i] - gaps[i].1);
        let ratio = bridge / len[i];
        tau = tau.min(ratio);
        out.push(GapBridge {
            gap: gaps[i],
            bridge_ratio: ratio,
        });
    }
    Ok(ThicknessEstimate {
        tau,
        nu: tau / (1.0 + tau),
        gaps: out,
    })
}

/// m * nu(s) >= 1: the m-fold sum of s is then an interval.
pub fn astels_interval_check(s: &BandSet, m: usize) -> Result<bool> {
    if m < 1 {
        return Err(Error::Domain("m must be at least 1".into()));
    }
    let t = thickness(s)?;
    Ok(m as f64 * t.nu >= 1.0 - ASTELS_SLACK)
}

/// log 2 / log(2 + 1/tau).
pub fn dimension_lower_bound(t: &ThicknessEstimate) -> Result<f64> {
    if !(t.tau > 0.0) {
        return Err(Error::Domain(format!("thickness must be positive, got {}", t.tau)));
    }
    Ok(std::f64::consts::LN_2 / (2.0 + 1.0 / t.tau).ln())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProfileWindow {
    pub center: f64,
    pub estimate: DimensionEstimate,
}

/// Box-counting estimates on `window_count` windows of the hull that
/// overlap by half their width. `eps_max` is capped at the window width;
/// windows where the estimate degenerates are skipped.
pub fn local_dimension_profile(
    s: &BandSet,
    window_count: usize,
    eps_min: f64,
    eps_max: f64,
    levels: usize,
) -> Result<Vec<ProfileWindow>> {
    if window_count < 3 {
        return Err(Error::Domain(format!(
            "need at least 3 windows, got {window_count}"
        )));
    }
    let Some((lo, hi)) = s.hull() else {
        return Err(Error::Domain("profile of an empty set".into()));
    };
    let width = 2.0 * (hi - lo) / (window_count + 1) as f64;
    let eps_max = eps_max.min(width);
    let mut out = Vec::with_capacity(window_count);
    for i in 0..window_count {
        let a = lo + 0.5 * width * i as f64;
        let b = a + width;
        let part = s.clip(a, b);
        if part.is_empty() {
            continue;
        }
        match box_counting(&part, eps_min, eps_max, levels) {
            Ok(estimate) => out.push(ProfileWindow {
                center: 0.5 * (a + b),
                estimate,
            }),
            Err(Error::DegenerateRegression(_)) => continue,
            Err(e) => return Err(e),
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sets::PointSet;
    use proptest::prelude::*;

    const LOG2_LOG3: f64 = 0.630_929_753_571_457_4;

    #[test]
    fn unit_interval_has_dimension_one() {
        let s = BandSet::new(vec![(0.0, 1.0)]).unwrap();
        let d = box_counting(&s, 1e-4, 0.1, 12).unwrap();
        assert!((d.slope - 1.0).abs() < 0.02, "{d:?}");
    }

    #[test]
    fn single_point_has_dimension_zero() {
        let p = PointSet::new(vec![0.3]).unwrap();
        let d = box_counting(&p, 1e-4, 0.1, 8).unwrap();
        assert_eq!(d.slope, 0.0);
        let s = BandSet::new(vec![(0.0, 1.0)]).unwrap();
        assert!(matches!(
            box_counting(&s, 2.0, 5.0, 8),
            Err(Error::DegenerateRegression(_))
        ));
    }

    #[test]
    fn argument_errors() {
        let s = cantor_fixture(3);
        assert!(box_counting(&s, 0.1, 0.01, 8).is_err());
        assert!(box_counting(&s, 0.01, 0.1, 4).is_err());
        assert!(box_counting(&BandSet::empty(), 0.01, 0.1, 8).is_err());
        assert!(local_dimension_profile(&s, 2, 0.01, 0.1, 8).is_err());
        assert!(astels_interval_check(&s, 0).is_err());
    }

    #[test]
    fn cantor_dimension() {
        let c = cantor_fixture(10);
        assert_eq!(c.len(), 1024);
        let d = box_counting(&c, 3f64.powi(-10), 3f64.powi(-1), 20).unwrap();
        assert!((d.slope - LOG2_LOG3).abs() < 0.02, "{d:?}");
        assert!(d.r_squared > 0.995);
        let dd = box_counting_dithered(&c, 3f64.powi(-10), 3f64.powi(-1), 20).unwrap();
        assert!((dd.slope - LOG2_LOG3).abs() < 0.02, "{dd:?}");
    }

    #[test]
    fn occupied_box_rules() {
        // [0, 1] with eps = 0.25 meets boxes 0..=3; the right end sits on a
        // box boundary and does not open box 4
        assert_eq!(occupied_boxes(&[(0.0, 1.0)], 0.0, 0.25), 4);
        assert_eq!(occupied_boxes(&[(0.0, 0.0), (0.1, 0.1)], 0.0, 0.25), 1);
        assert_eq!(occupied_boxes(&[(0.0, 0.1), (0.2, 0.3)], 0.0, 0.25), 2);
    }

    #[test]
    fn thickness_examples() {
        let s = BandSet::new(vec![(0.0, 1.0), (2.0, 3.0)]).unwrap();
        let t = thickness(&s).unwrap();
        assert_eq!(t.tau, 1.0);
        assert_eq!(t.nu, 0.5);
        for level in 1..=8 {
            let t = thickness(&cantor_fixture(level)).unwrap();
            assert!((t.tau - 1.0).abs() < 1e-6, "level {level}: {}", t.tau);
        }
        let one = thickness(&BandSet::new(vec![(0.0, 1.0)]).unwrap()).unwrap();
        assert!(one.tau.is_infinite() && one.nu == 1.0);
    }

    #[test]
    fn thickness_presentation_order() {
        // big gap in the middle, small gaps in the outer pieces
        let s = BandSet::new(vec![(0.0, 1.0), (1.1, 4.0), (6.0, 9.0), (9.5, 10.0)]).unwrap();
        let t = thickness(&s).unwrap();
        let lens: Vec<f64> = t.gaps.iter().map(|g| g.gap.1 - g.gap.0).collect();
        assert!(lens.windows(2).all(|w| w[0] >= w[1]));
        // gap (4,6): bridges 4 and 4 -> 2; gap (9,9.5): bridges 3 and 0.5 -> 1;
        // gap (1,1.1): bridges 1 and 2.9 -> 10
        assert!((t.tau - 1.0).abs() < 1e-12);
        assert!((t.gaps[0].bridge_ratio - 2.0).abs() < 1e-12);
    }

    #[test]
    fn astels_and_lower_bound() {
        let c = cantor_fixture(6);
        assert!(astels_interval_check(&c, 2).unwrap());
        assert!(!astels_interval_check(&c, 1).unwrap());
        let thin = BandSet::new(vec![(0.0, 0.1), (1.1, 1.2)]).unwrap();
        assert!(!astels_interval_check(&thin, 2).unwrap());
        let t = thickness(&c).unwrap();
        assert!((dimension_lower_bound(&t).unwrap() - LOG2_LOG3).abs() < 1e-9);
        let inf = thickness(&BandSet::new(vec![(0.0, 1.0)]).unwrap()).unwrap();
        assert_eq!(dimension_lower_bound(&inf).unwrap(), 1.0);
    }

    #[test]
    fn cantor_profile_is_flat() {
        let c = cantor_fixture(10);
        let p = local_dimension_profile(&c, 3, 3f64.powi(-10), 3f64.powi(-2), 16).unwrap();
        assert!(!p.is_empty());
        let slopes: Vec<f64> = p.iter().map(|w| w.estimate.slope).collect();
        let spread = slopes.iter().cloned().fold(f64::MIN, f64::max)
            - slopes.iter().cloned().fold(f64::MAX, f64::min);
        assert!(spread < 0.03, "{slopes:?}");
    }

    #[test]
    fn interval_profile_is_one() {
        let s = BandSet::new(vec![(0.0, 1.0)]).unwrap();
        for w in local_dimension_profile(&s, 5, 1e-4, 0.1, 10).unwrap() {
            assert!((w.estimate.slope - 1.0).abs() < 0.03);
        }
    }

    fn band_strategy() -> impl Strategy<Value = BandSet> {
        prop::collection::vec((0.01..1.0f64, 0.01..1.0f64), 2..12).prop_map(|pieces| {
            let mut x = 0.0;
            let mut iv = Vec::new();
            for (band, gap) in pieces {
                iv.push((x, x + band));
                x += band + gap;
            }
            BandSet::new(iv).unwrap()
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]
        #[test]
        fn box_counting_translation_invariant(s in band_strategy(), shift in -50.0..50.0f64) {
            let a = box_counting_dithered(&s, 1e-3, 0.5, 10);
            let b = box_counting_dithered(&s.shifted(shift), 1e-3, 0.5, 10);
            if let (Ok(a), Ok(b)) = (a, b) {
                prop_assert!((a.slope - b.slope).abs() < 1e-3);
            }
        }

        #[test]
        fn thickness_is_scale_free(s in band_strategy(), k in 0.1..10.0f64) {
            let scaled = BandSet::new(s.intervals().iter().map(|&(a, b)| (k * a, k * b)).collect()).unwrap();
            let (t1, t2) = (thickness(&s).unwrap().tau, thickness(&scaled).unwrap().tau);
            prop_assert!((t1 - t2).abs() <= 1e-9 * t1.max(1.0));
        }

        #[test]
        fn carving_a_smaller_gap_cannot_thicken(s in band_strategy(), pick in 0usize..100, at in 0.1..0.9f64, frac in 0.01..1.0f64) {
            // removing a gap shorter than every existing gap from one band
            let t0 = thickness(&s).unwrap().tau;
            let min_gap = s.gaps().iter().map(|g| g.1 - g.0).fold(f64::INFINITY, f64::min);
            let i = pick % s.len();
            let (a, b) = s.intervals()[i];
            let w = (frac * min_gap).min(0.5 * (b - a));
            let c = a + at * (b - a - w);
            let mut iv = s.intervals().to_vec();
            iv[i] = (a, c);
            iv.insert(i + 1, (c + w, b));
            let t1 = thickness(&BandSet::new(iv).unwrap()).unwrap().tau;
            prop_assert!(t1 <= t0 + 1e-12, "{} -> {}", t0, t1);
        }

        #[test]
        fn lower_bound_below_box_dimension(level in 4u32..9) {
            let c = cantor_fixture(level);
            let t = thickness(&c).unwrap();
            let d = box_counting(&c, 3f64.powi(-(level as i32)), 3f64.powi(-1), 12).unwrap();
            prop_assert!(dimension_lower_bound(&t).unwrap() <= d.slope + 0.05);
        }
    }
}
