//! Brute-force geometric ground truth, independent of every formula in this
//! crate: a direct pair census of gridsegments, canonical enumeration of
//! gridlines with exact point counts, and an exact separability census of
//! two-dimensional threshold functions.
//!
//! Everything here is integer arithmetic on small coordinates; the only
//! guards are explicit resource caps on the quadratic pair loops and the
//! `2^(n1·n2)` function enumeration.

use std::collections::{BTreeMap, HashSet};

use crate::closedform::GridShape;
use crate::numtheory::gcd_vec;
use crate::{Error, ExactInt, Result};

/// Default cap on gridpoint count for the O(N²) pair censuses.
pub const DEFAULT_PAIR_CAP: u64 = 20_000;

/// Default cap on `n1 · n2` for the `2^(n1·n2)` threshold enumeration.
pub const DEFAULT_FUNC_CAP: u64 = 16;

/// Canonical identity of a gridline:
///
/// * `direction` is primitive (component gcd 1) and its first nonzero
///   component is positive;
/// * `anchor` is the extremal gridpoint on the line — `anchor − direction`
///   lies outside the grid.
///
/// Two gridpoint pairs produce equal keys iff they span the same line.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LineKey {
    pub anchor: Vec<i64>,
    pub direction: Vec<i64>,
}

impl LineKey {
    /// Canonicalize the line through two distinct gridpoints of `shape`.
    pub fn from_pair(a: &[i64], b: &[i64], shape: &GridShape) -> Result<LineKey> {
        if a == b {
            return Err(Error::usage("LineKey: points must be distinct"));
        }
        let diff: Vec<i64> = a.iter().zip(b).map(|(x, y)| y - x).collect();
        let g = gcd_vec(&diff)?;
        let mut direction: Vec<i64> = diff.iter().map(|&x| x / g as i64).collect();
        if let Some(&first) = direction.iter().find(|&&x| x != 0) {
            if first < 0 {
                for x in &mut direction {
                    *x = -*x;
                }
            }
        }

        let dims: Vec<i64> = shape.dims().iter().map(|&n| n as i64).collect();
        let mut anchor = a.to_vec();
        loop {
            let prev: Vec<i64> = anchor.iter().zip(&direction).map(|(x, d)| x - d).collect();
            if !in_grid(&prev, &dims) {
                break;
            }
            anchor = prev;
        }
        Ok(LineKey { anchor, direction })
    }

    /// All gridpoints on the line, marched from the anchor.
    pub fn points(&self, shape: &GridShape) -> Vec<Vec<i64>> {
        let dims: Vec<i64> = shape.dims().iter().map(|&n| n as i64).collect();
        let mut out = Vec::new();
        let mut p = self.anchor.clone();
        while in_grid(&p, &dims) {
            out.push(p.clone());
            p = p.iter().zip(&self.direction).map(|(x, d)| x + d).collect();
        }
        out
    }
}

fn in_grid(p: &[i64], dims: &[i64]) -> bool {
    p.iter().zip(dims).all(|(&c, &n)| c >= 0 && c < n)
}

fn enumerate_points(shape: &GridShape) -> Vec<Vec<i64>> {
    let mut out = vec![vec![]];
    for &n in shape.dims() {
        let mut next = Vec::with_capacity(out.len() * n as usize);
        for p in &out {
            for c in 0..n as i64 {
                let mut q = p.clone();
                q.push(c);
                next.push(q);
            }
        }
        out = next;
    }
    out
}

fn check_pair_cap(shape: &GridShape, pair_cap: u64) -> Result<Vec<Vec<i64>>> {
    match shape.point_count_u64() {
        Some(n) if n <= pair_cap => Ok(enumerate_points(shape)),
        _ => Err(Error::resource(format!(
            "grid {shape} has {} points, over the pair cap {pair_cap}",
            shape.point_count()
        ))),
    }
}

/// Census of gridsegments: for every unordered pair of distinct gridpoints
/// with offset gcd `g`, one `(g+1)`-gridsegment. Returns `q → c_q`; zero
/// counts are omitted.
pub fn segment_census(shape: &GridShape, pair_cap: u64) -> Result<BTreeMap<u64, ExactInt>> {
    let points = check_pair_cap(shape, pair_cap)?;
    let mut counts: BTreeMap<u64, u64> = BTreeMap::new();
    let mut diff = vec![0i64; shape.k()];
    for i in 0..points.len() {
        for j in i + 1..points.len() {
            for (d, (x, y)) in diff.iter_mut().zip(points[i].iter().zip(&points[j])) {
                *d = y - x;
            }
            let g = gcd_vec(&diff).expect("k ≥ 2");
            *counts.entry(g + 1).or_insert(0) += 1;
        }
    }
    Ok(counts
        .into_iter()
        .map(|(q, c)| (q, ExactInt::from(c)))
        .collect())
}

/// Census of gridlines: canonicalizes the line through every gridpoint pair,
/// deduplicates, and counts gridpoints on each. Returns `p → l_p`; zero
/// counts are omitted.
pub fn line_census(shape: &GridShape, pair_cap: u64) -> Result<BTreeMap<u64, ExactInt>> {
    let points = check_pair_cap(shape, pair_cap)?;
    let mut keys: HashSet<LineKey> = HashSet::new();
    for i in 0..points.len() {
        for j in i + 1..points.len() {
            keys.insert(LineKey::from_pair(&points[i], &points[j], shape)?);
        }
    }
    let mut counts: BTreeMap<u64, u64> = BTreeMap::new();
    for key in &keys {
        let p = key.points(shape).len() as u64;
        *counts.entry(p).or_insert(0) += 1;
    }
    Ok(counts
        .into_iter()
        .map(|(p, c)| (p, ExactInt::from(c)))
        .collect())
}

/// `l_{≥q}` derived from a [`line_census`] result.
pub fn census_at_least(census: &BTreeMap<u64, ExactInt>, q: u64) -> ExactInt {
    census
        .range(q..)
        .map(|(_, c)| c)
        .sum()
}

/// Exact census of two-dimensional threshold functions on `n1 × n2`:
/// 0/1-valued functions whose preimage classes have disjoint convex hulls.
/// Functions with an empty class (the constants) are separable.
pub fn threshold_census(n1: u64, n2: u64, func_cap: u64) -> Result<ExactInt> {
    if n1 < 2 || n2 < 2 {
        return Err(Error::usage("threshold_census: both extents must be ≥ 2"));
    }
    let cells = n1
        .checked_mul(n2)
        .filter(|&c| c <= func_cap && c <= 62)
        .ok_or_else(|| {
            Error::resource(format!(
                "threshold census on {n1}x{n2} needs 2^{} functions, over the cap of 2^{func_cap}",
                n1.saturating_mul(n2)
            ))
        })?;

    let points: Vec<Point> = (0..n1 as i64)
        .flat_map(|x| (0..n2 as i64).map(move |y| (x, y)))
        .collect();

    let mut separable = 0u64;
    let mut zeros: Vec<Point> = Vec::with_capacity(points.len());
    let mut ones: Vec<Point> = Vec::with_capacity(points.len());
    for mask in 0u64..(1u64 << cells) {
        zeros.clear();
        ones.clear();
        for (bit, &p) in points.iter().enumerate() {
            if mask >> bit & 1 == 0 {
                zeros.push(p);
            } else {
                ones.push(p);
            }
        }
        if hulls_disjoint(&zeros, &ones) {
            separable += 1;
        }
    }
    Ok(ExactInt::from(separable))
}

type Point = (i64, i64);

fn orient(a: Point, b: Point, c: Point) -> i64 {
    (b.0 - a.0) * (c.1 - a.1) - (b.1 - a.1) * (c.0 - a.0)
}

fn on_segment(p: Point, a: Point, b: Point) -> bool {
    orient(a, b, p) == 0
        && p.0 >= a.0.min(b.0)
        && p.0 <= a.0.max(b.0)
        && p.1 >= a.1.min(b.1)
        && p.1 <= a.1.max(b.1)
}

/// Closed segments intersect, including touching and collinear overlap.
fn segments_intersect(p1: Point, p2: Point, p3: Point, p4: Point) -> bool {
    let d1 = orient(p3, p4, p1).signum();
    let d2 = orient(p3, p4, p2).signum();
    let d3 = orient(p1, p2, p3).signum();
    let d4 = orient(p1, p2, p4).signum();
    if d1 * d2 < 0 && d3 * d4 < 0 {
        return true;
    }
    (d1 == 0 && on_segment(p1, p3, p4))
        || (d2 == 0 && on_segment(p2, p3, p4))
        || (d3 == 0 && on_segment(p3, p1, p2))
        || (d4 == 0 && on_segment(p4, p1, p2))
}

/// `p ∈ conv(s)`, exactly. Any point of the hull lies in a segment or a
/// nondegenerate triangle spanned by members of `s`.
fn point_in_hull(p: Point, s: &[Point]) -> bool {
    if s.iter().any(|&a| a == p) {
        return true;
    }
    for i in 0..s.len() {
        for j in i + 1..s.len() {
            if on_segment(p, s[i], s[j]) {
                return true;
            }
        }
    }
    for i in 0..s.len() {
        for j in i + 1..s.len() {
            for k in j + 1..s.len() {
                let (a, b, c) = (s[i], s[j], s[k]);
                if orient(a, b, c) == 0 {
                    continue;
                }
                let d1 = orient(a, b, p).signum();
                let d2 = orient(b, c, p).signum();
                let d3 = orient(c, a, p).signum();
                let has_neg = d1 < 0 || d2 < 0 || d3 < 0;
                let has_pos = d1 > 0 || d2 > 0 || d3 > 0;
                if !(has_neg && has_pos) {
                    return true;
                }
            }
        }
    }
    false
}

/// Disjointness of the convex hulls of two finite point sets. For finite
/// sets this is equivalent to the existence of a line with one class on the
/// closed side and the other on the open side.
fn hulls_disjoint(a: &[Point], b: &[Point]) -> bool {
    if a.is_empty() || b.is_empty() {
        return true;
    }
    if a.iter().any(|&p| point_in_hull(p, b)) || b.iter().any(|&p| point_in_hull(p, a)) {
        return false;
    }
    for i in 0..a.len() {
        for j in i + 1..a.len() {
            for k in 0..b.len() {
                for l in k + 1..b.len() {
                    if segments_intersect(a[i], a[j], b[k], b[l]) {
                        return false;
                    }
                }
            }
        }
    }
    true
}
