//! The distance set-system `F(E) = {N(x) : x ∈ E}` with
//! `N(x) = {y ∈ E : ||x - y|| = t}`, shattering, and VC dimension.

mod witness;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::FieldElement;
use crate::geometry::{Plane, Point, PointSet};

pub use witness::{certified_shattered, find_witness, verify_witness, Clause, FailureReason, Verification, Witness, WitnessOutcome, WitnessSearch, WitnessStep};

const ABSENT: u32 = u32::MAX;

#[derive(Debug, Clone)]
pub struct DistanceSystem {
    t: FieldElement,
    ground: PointSet,
    /// plane index -> position in `ground`, or `ABSENT`
    position: Vec<u32>,
    neighborhoods: Vec<Vec<u32>>,
}

/// Builds every neighborhood by probing `x + S_t` against `E`.
pub fn build_system(plane: &Plane, e: &PointSet, t: FieldElement) -> Result<DistanceSystem> {
    if t.is_zero() {
        return Err(Error::InvalidRadius);
    }
    plane.check(e);
    let mut position = vec![ABSENT; plane.size()];
    for (i, p) in e.iter().enumerate() {
        position[plane.index(p)] = i as u32;
    }
    let circle = plane.circle_points(t);
    let neighborhoods = e
        .iter()
        .map(|x| {
            let mut n: Vec<u32> = circle
                .iter()
                .map(|&s| position[plane.index(plane.add(x, s))])
                .filter(|&pos| pos != ABSENT)
                .collect();
            n.sort_unstable();
            n
        })
        .collect();
    Ok(DistanceSystem { t, ground: e.clone(), position, neighborhoods })
}

impl DistanceSystem {
    pub fn t(&self) -> FieldElement {
        self.t
    }

    pub fn ground(&self) -> &PointSet {
        &self.ground
    }

    pub fn len(&self) -> usize {
        self.ground.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ground.is_empty()
    }

    /// `N(x)` for a point of the ground set.
    pub fn neighborhood(&self, plane: &Plane, x: Point) -> Option<Vec<Point>> {
        let pos = self.position[plane.index(x)];
        (pos != ABSENT).then(|| self.neighborhoods[pos as usize].iter().map(|&i| self.ground.points()[i as usize]).collect())
    }

    pub fn degree(&self, plane: &Plane, x: Point) -> Option<usize> {
        let pos = self.position[plane.index(x)];
        (pos != ABSENT).then(|| self.neighborhoods[pos as usize].len())
    }
}

/// Number of distinct traces `N(x) ∩ X` over `x ∈ E`, with `X` given by
/// ground-set positions.
fn distinct_traces(plane: &Plane, sys: &DistanceSystem, xs: &[Point]) -> usize {
    let mut seen = vec![false; 1usize << xs.len()];
    let mut distinct = 0;
    for y in sys.ground.iter() {
        let mut mask = 0usize;
        for (bit, &x) in xs.iter().enumerate() {
            if plane.distance(x, y) == sys.t {
                mask |= 1 << bit;
            }
        }
        if !std::mem::replace(&mut seen[mask], true) {
            distinct += 1;
        }
    }
    distinct
}

/// True iff every subset of `xs` equals `N(x) ∩ xs` for some `x ∈ E`.
///
/// The empty system shatters nothing, not even the empty set.
pub fn shatters(plane: &Plane, sys: &DistanceSystem, xs: &[Point]) -> Result<bool> {
    let mut seen = vec![false; plane.size()];
    for &x in xs {
        if !sys.ground.contains(plane, x) {
            return Err(Error::NotSubset(x.x1.value(), x.x2.value()));
        }
        if std::mem::replace(&mut seen[plane.index(x)], true) {
            return Err(Error::DuplicatePoint(x.x1.value(), x.x2.value()));
        }
    }
    if sys.is_empty() {
        return Ok(false);
    }
    // at most |E| distinct traces exist
    if xs.len() >= usize::BITS as usize - 1 || (1usize << xs.len()) > sys.len() {
        return Ok(false);
    }
    Ok(distinct_traces(plane, sys, xs) == 1 << xs.len())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VcSearch {
    pub vc_dim: usize,
    pub shattered_example: Vec<Point>,
}

/// Calls `f` on every `k`-subset of `0..n` in lexicographic order until it
/// returns `Some`.
fn first_combination<T>(n: usize, k: usize, mut f: impl FnMut(&[usize]) -> Option<T>) -> Option<T> {
    if k > n {
        return None;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        if let Some(v) = f(&idx) {
            return Some(v);
        }
        let mut i = k;
        loop {
            if i == 0 {
                return None;
            }
            i -= 1;
            if idx[i] < n - k + i {
                break;
            }
        }
        idx[i] += 1;
        for j in i + 1..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

/// First shattered subset of size `d`, if any.
///
/// A shattered `X` with `d ≥ 1` must itself be a trace, so `X ⊆ N(y)` for
/// some `y`; candidates are drawn from each neighborhood in ground order.
fn find_shattered(plane: &Plane, sys: &DistanceSystem, d: usize) -> Option<Vec<Point>> {
    if d == 0 {
        return (!sys.is_empty()).then(Vec::new);
    }
    if d >= usize::BITS as usize - 1 || (1usize << d) > sys.len() {
        return None;
    }
    let ground = sys.ground.points();
    sys.neighborhoods.par_iter().find_map_first(|nb| {
        let pts: Vec<Point> = nb.iter().map(|&i| ground[i as usize]).collect();
        first_combination(pts.len(), d, |combo| {
            let xs: Vec<Point> = combo.iter().map(|&i| pts[i]).collect();
            (distinct_traces(plane, sys, &xs) == 1 << d).then_some(xs)
        })
    })
}

/// Largest `d ≤ cap` such that some `d`-subset of `E` is shattered, with an
/// example. Stops at the first size with no shattered set, since subsets of
/// shattered sets are shattered.
pub fn vc_search(plane: &Plane, sys: &DistanceSystem, cap: usize) -> VcSearch {
    let mut best = VcSearch { vc_dim: 0, shattered_example: Vec::new() };
    for d in 0..=cap {
        match find_shattered(plane, sys, d) {
            Some(xs) => best = VcSearch { vc_dim: d, shattered_example: xs },
            None => break,
        }
    }
    best
}

pub fn vc_dimension(plane: &Plane, sys: &DistanceSystem, cap: usize) -> usize {
    vc_search(plane, sys, cap).vc_dim
}
