//! Finite unions of closed intervals and finite point sets on the line.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Points closer than this are treated as one.
pub const POINT_DEDUP_TOL: f64 = 1e-10;

/// Sorted, pairwise disjoint closed intervals.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(try_from = "Vec<(f64, f64)>", into = "Vec<(f64, f64)>")]
pub struct BandSet {
    intervals: Vec<(f64, f64)>,
}

impl BandSet {
    pub fn empty() -> Self {
        Self::default()
    }

    /// Sorts the intervals and merges any that overlap or touch.
    pub fn new(intervals: Vec<(f64, f64)>) -> Result<Self> {
        Self::with_merge_tol(intervals, 0.0)
    }

    /// Like [`BandSet::new`], also merging intervals separated by at most `tol`.
    pub fn with_merge_tol(mut intervals: Vec<(f64, f64)>, tol: f64) -> Result<Self> {
        for &(lo, hi) in &intervals {
            if !lo.is_finite() || !hi.is_finite() {
                return Err(Error::Domain(format!("non-finite interval [{lo}, {hi}]")));
            }
            if lo > hi {
                return Err(Error::Domain(format!("reversed interval [{lo}, {hi}]")));
            }
        }
        intervals.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.total_cmp(&b.1)));
        Ok(BandSet {
            intervals: merge_sorted(intervals, tol),
        })
    }

    pub fn intervals(&self) -> &[(f64, f64)] {
        &self.intervals
    }

    pub fn len(&self) -> usize {
        self.intervals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.intervals.is_empty()
    }

    pub fn hull(&self) -> Option<(f64, f64)> {
        Some((self.intervals.first()?.0, self.intervals.last()?.1))
    }

    pub fn total_length(&self) -> f64 {
        self.intervals.iter().map(|(lo, hi)| hi - lo).sum()
    }

    /// Open gaps between consecutive intervals.
    pub fn gaps(&self) -> Vec<(f64, f64)> {
        self.intervals
            .windows(2)
            .map(|w| (w[0].1, w[1].0))
            .collect()
    }

    pub fn contains(&self, x: f64) -> bool {
        let i = self.intervals.partition_point(|iv| iv.1 < x);
        i < self.intervals.len() && self.intervals[i].0 <= x
    }

    /// Image under x -> -x.
    pub fn reflect(&self) -> BandSet {
        BandSet {
            intervals: self.intervals.iter().rev().map(|&(lo, hi)| (-hi, -lo)).collect(),
        }
    }

    /// Largest endpoint mismatch between the set and its mirror image,
    /// or infinity if the interval counts differ.
    pub fn symmetry_defect(&self) -> f64 {
        let r = self.reflect();
        if r.len() != self.len() {
            return f64::INFINITY;
        }
        self.intervals
            .iter()
            .zip(r.intervals())
            .map(|(a, b)| (a.0 - b.0).abs().max((a.1 - b.1).abs()))
            .fold(0.0, f64::max)
    }

    /// Intersection with [lo, hi].
    pub fn clip(&self, lo: f64, hi: f64) -> BandSet {
        BandSet {
            intervals: self
                .intervals
                .iter()
                .filter(|iv| iv.1 >= lo && iv.0 <= hi)
                .map(|&(a, b)| (a.max(lo), b.min(hi)))
                .collect(),
        }
    }

    /// Translate by `shift`.
    pub fn shifted(&self, shift: f64) -> BandSet {
        BandSet {
            intervals: self.intervals.iter().map(|&(a, b)| (a + shift, b + shift)).collect(),
        }
    }
}

impl TryFrom<Vec<(f64, f64)>> for BandSet {
    type Error = Error;

    fn try_from(v: Vec<(f64, f64)>) -> Result<Self> {
        BandSet::new(v)
    }
}

impl From<BandSet> for Vec<(f64, f64)> {
    fn from(b: BandSet) -> Self {
        b.intervals
    }
}

fn merge_sorted(intervals: Vec<(f64, f64)>, tol: f64) -> Vec<(f64, f64)> {
    let mut out: Vec<(f64, f64)> = Vec::with_capacity(intervals.len());
    for (lo, hi) in intervals {
        match out.last_mut() {
            Some(last) if lo - last.1 <= tol => last.1 = last.1.max(hi),
            _ => out.push((lo, hi)),
        }
    }
    out
}

/// Sorted finite point set; `flagged[i]` marks near-double points.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct PointSet {
    points: Vec<f64>,
    flagged: Vec<bool>,
}

impl PointSet {
    pub fn new(points: Vec<f64>) -> Result<Self> {
        let n = points.len();
        Self::with_flags(points, vec![false; n])
    }

    /// Sorts, and collapses points within [`POINT_DEDUP_TOL`] (a merged
    /// point is flagged if any of its members was).
    pub fn with_flags(points: Vec<f64>, flags: Vec<bool>) -> Result<Self> {
        if points.len() != flags.len() {
            return Err(Error::Domain("points and flags differ in length".into()));
        }
        if let Some(p) = points.iter().find(|p| !p.is_finite()) {
            return Err(Error::Domain(format!("non-finite point {p}")));
        }
        let mut pairs: Vec<(f64, bool)> = points.into_iter().zip(flags).collect();
        pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
        let mut out = PointSet::default();
        for (p, f) in pairs {
            match out.points.last() {
                Some(&last) if p - last <= POINT_DEDUP_TOL => {
                    let i = out.flagged.len() - 1;
                    out.flagged[i] |= f;
                }
                _ => {
                    out.points.push(p);
                    out.flagged.push(f);
                }
            }
        }
        Ok(out)
    }

    pub fn points(&self) -> &[f64] {
        &self.points
    }

    pub fn flags(&self) -> &[bool] {
        &self.flagged
    }

    pub fn flagged_points(&self) -> Vec<f64> {
        self.points
            .iter()
            .zip(&self.flagged)
            .filter(|(_, f)| **f)
            .map(|(p, _)| *p)
            .collect()
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

/// Anything representable as sorted disjoint closed intervals (points are
/// degenerate intervals).
pub trait CompactSet {
    fn as_intervals(&self) -> Vec<(f64, f64)>;
}

impl CompactSet for BandSet {
    fn as_intervals(&self) -> Vec<(f64, f64)> {
        self.intervals.clone()
    }
}

impl CompactSet for PointSet {
    fn as_intervals(&self) -> Vec<(f64, f64)> {
        self.points.iter().map(|&p| (p, p)).collect()
    }
}

/// Distance from x to the union of sorted disjoint intervals `b`.
fn dist_to(b: &[(f64, f64)], x: f64) -> f64 {
    let i = b.partition_point(|iv| iv.1 < x);
    let mut d = f64::INFINITY;
    if i < b.len() {
        d = (b[i].0 - x).max(0.0);
    }
    if i > 0 {
        d = d.min(x - b[i - 1].1);
    }
    d
}

/// sup over a in A of dist(a, B). On each interval of A the distance to B
/// peaks at an endpoint or at the point nearest a gap midpoint of B.
fn directed(a: &[(f64, f64)], b: &[(f64, f64)]) -> f64 {
    let mut worst: f64 = 0.0;
    for &(lo, hi) in a {
        worst = worst.max(dist_to(b, lo)).max(dist_to(b, hi));
        if hi > lo {
            // gaps of B meeting (lo, hi)
            let start = b.partition_point(|iv| iv.1 < lo);
            let mut j = start.saturating_sub(1);
            while j + 1 < b.len() && b[j].1 < hi {
                let mid = 0.5 * (b[j].1 + b[j + 1].0);
                worst = worst.max(dist_to(b, mid.clamp(lo, hi)));
                j += 1;
            }
        }
    }
    worst
}

/// Hausdorff distance between two non-empty compact sets.
pub fn hausdorff_distance<A: CompactSet + ?Sized, B: CompactSet + ?Sized>(
    a: &A,
    b: &B,
) -> Result<f64> {
    let ia = a.as_intervals();
    let ib = b.as_intervals();
    if ia.is_empty() || ib.is_empty() {
        return Err(Error::Domain("Hausdorff distance of an empty set".into()));
    }
    Ok(directed(&ia, &ib).max(directed(&ib, &ia)))
}
