//! Constructive three-point shattering witness.
//!
//! The search runs in fixed stages:
//!
//! 1. keep the vertices whose degree lies in `[|E|/(2q), 2|E|/q]`;
//! 2. pick the direction `u ∈ S_t` maximizing `|E ∩ (E - u)|` (first in
//!    lexicographic order on ties) and set `E_u = E ∩ (E - u)`;
//! 3. shuffle `E_u` with the seeded generator and deal it round-robin into
//!    `A, B, C, R`; `D` is `R` together with everything outside `E_u`;
//! 4. scan rhombi `(x¹, y¹²³, x³, y¹³) ∈ A×B×C×D` of side `t` whose sides
//!    `x¹ - y¹²³`, `y¹²³ - y¹³` and `y¹²³ - x³` avoid `±u`;
//! 5. derive `y¹² = x¹ + u`, `x² = y¹²³ + u`, `y²³ = x³ + u`;
//! 6. pick `y¹, y², y³` each adjacent to exactly one `xⁱ`, then `y⁰`
//!    adjacent to none.
//!
//! A rhombus is accepted only if the seven derived points are distinct and
//! `y¹²`, `y¹³`, `y²³` miss `x³`, `x²`, `x¹` respectively; later rhombi are
//! tried when stage 6 fails for an earlier one.

use rand::seq::SliceRandom;
use serde::Serialize;

use super::DistanceSystem;
use crate::error::{Error, Result};
use crate::field::FieldElement;
use crate::geometry::{Plane, Point, PointSet};
use crate::rng;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Witness {
    pub x1: Point,
    pub x2: Point,
    pub x3: Point,
    pub y12: Point,
    pub y13: Point,
    pub y23: Point,
    pub y123: Point,
    pub y1: Point,
    pub y2: Point,
    pub y3: Point,
    pub y0: Point,
    pub u: Point,
    pub t: FieldElement,
}

/// For each `y` label, which of `x¹, x², x³` it must be adjacent to.
const PATTERN: [(&str, [bool; 3]); 8] = [
    ("y123", [true, true, true]),
    ("y12", [true, true, false]),
    ("y13", [true, false, true]),
    ("y23", [false, true, true]),
    ("y1", [true, false, false]),
    ("y2", [false, true, false]),
    ("y3", [false, false, true]),
    ("y0", [false, false, false]),
];

impl Witness {
    pub fn xs(&self) -> [Point; 3] {
        [self.x1, self.x2, self.x3]
    }

    fn y(&self, label: &str) -> Point {
        match label {
            "y123" => self.y123,
            "y12" => self.y12,
            "y13" => self.y13,
            "y23" => self.y23,
            "y1" => self.y1,
            "y2" => self.y2,
            "y3" => self.y3,
            "y0" => self.y0,
            _ => unreachable!("unknown label {label}"),
        }
    }

    /// The eleven labeled points.
    pub fn labeled(&self) -> [(&'static str, Point); 11] {
        [
            ("x1", self.x1),
            ("x2", self.x2),
            ("x3", self.x3),
            ("y12", self.y12),
            ("y13", self.y13),
            ("y23", self.y23),
            ("y123", self.y123),
            ("y1", self.y1),
            ("y2", self.y2),
            ("y3", self.y3),
            ("y0", self.y0),
        ]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum WitnessStep {
    PrunedEmpty,
    NoDirection,
    NoRhombus,
    NoPrivateNeighbor,
    NoIsolatedPoint,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FailureReason {
    pub step: WitnessStep,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum WitnessOutcome {
    Found(Witness),
    Failed(FailureReason),
}

impl WitnessOutcome {
    pub fn witness(&self) -> Option<&Witness> {
        match self {
            WitnessOutcome::Found(w) => Some(w),
            WitnessOutcome::Failed(_) => None,
        }
    }
}

/// Outcome plus the sizes of the intermediate sets.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct WitnessSearch {
    pub outcome: WitnessOutcome,
    pub ground_size: usize,
    pub pruned_size: usize,
    pub direction: Option<Point>,
    pub shifted_size: usize,
    /// `|A|, |B|, |C|, |D|`
    pub part_sizes: [usize; 4],
    pub rhombi_tried: usize,
}

impl WitnessSearch {
    fn fail(mut self, step: WitnessStep, detail: String) -> Self {
        self.outcome = WitnessOutcome::Failed(FailureReason { step, detail });
        self
    }
}

struct Core {
    x: [Point; 3],
    y123: Point,
    y12: Point,
    y13: Point,
    y23: Point,
}

pub fn find_witness(plane: &Plane, e: &PointSet, t: FieldElement, seed: u64) -> Result<WitnessSearch> {
    if t.is_zero() {
        return Err(Error::InvalidRadius);
    }
    plane.check(e);
    let q = plane.q() as f64;
    let circle = plane.circle_points(t);
    let adjacent = |a: Point, b: Point| plane.distance(a, b) == t;
    let mut search = WitnessSearch {
        outcome: WitnessOutcome::Failed(FailureReason { step: WitnessStep::PrunedEmpty, detail: String::new() }),
        ground_size: e.len(),
        pruned_size: 0,
        direction: None,
        shifted_size: 0,
        part_sizes: [0; 4],
        rhombi_tried: 0,
    };

    // 1. degree window
    let n = e.len() as f64;
    let (lo, hi) = (n / (2.0 * q), 2.0 * n / q);
    let pruned = PointSet::from_points(
        plane,
        e.iter().filter(|&x| {
            let deg = circle.iter().filter(|&&s| e.contains(plane, plane.add(x, s))).count() as f64;
            lo <= deg && deg <= hi
        }),
    )?;
    search.pruned_size = pruned.len();
    if pruned.is_empty() {
        return Ok(search.fail(WitnessStep::PrunedEmpty, format!("no vertex has degree in [{lo:.3}, {hi:.3}]")));
    }

    // 2. direction
    let shifted_count = |u: Point| pruned.iter().filter(|&x| pruned.contains(plane, plane.add(x, u))).count();
    let mut best: Option<(Point, usize)> = None;
    for &u in circle {
        let c = shifted_count(u);
        if best.is_none_or(|(_, b)| c > b) {
            best = Some((u, c));
        }
    }
    let Some((u, size)) = best.filter(|&(_, c)| c > 0) else {
        return Ok(search.fail(WitnessStep::NoDirection, "no u with ||u|| = t keeps any point inside the set".into()));
    };
    search.direction = Some(u);
    search.shifted_size = size;
    let neg_u = plane.neg(u);

    // 3. partition
    let mut shifted: Vec<Point> = pruned.iter().filter(|&x| pruned.contains(plane, plane.add(x, u))).collect();
    shifted.shuffle(&mut rng::seeded(seed));
    let mut parts: [Vec<Point>; 4] = Default::default();
    for (i, p) in shifted.into_iter().enumerate() {
        parts[i % 4].push(p);
    }
    let [a, b, c, r] = parts;
    let (a, b, c) = (
        PointSet::from_points(plane, a)?,
        PointSet::from_points(plane, b)?,
        PointSet::from_points(plane, c)?,
    );
    let r = PointSet::from_points(plane, r)?;
    let d = PointSet::from_predicate(plane, |p| {
        pruned.contains(plane, p) && (r.contains(plane, p) || !pruned.contains(plane, plane.add(p, u)))
    });
    search.part_sizes = [a.len(), b.len(), c.len(), d.len()];

    // 4-6. rhombus scan with completion
    let avoid = |v: Point| v == u || v == neg_u;
    let mut first_failure: Option<(WitnessStep, String)> = None;
    for x1 in a.iter() {
        for &s in circle {
            if avoid(s) {
                continue;
            }
            let y123 = plane.add(x1, s);
            if !b.contains(plane, y123) {
                continue;
            }
            for &s2 in circle {
                if avoid(s2) || avoid(plane.sub(s, s2)) {
                    continue;
                }
                let x3 = plane.add(y123, s2);
                let y13 = plane.add(x1, s2);
                if !c.contains(plane, x3) || !d.contains(plane, y13) {
                    continue;
                }
                let core = Core {
                    x: [x1, plane.add(y123, u), x3],
                    y123,
                    y12: plane.add(x1, u),
                    y13,
                    y23: plane.add(x3, u),
                };
                let pts = [core.x[0], core.x[1], core.x[2], core.y123, core.y12, core.y13, core.y23];
                let distinct = (0..7).all(|i| (i + 1..7).all(|j| pts[i] != pts[j]));
                if !distinct || adjacent(core.y12, core.x[2]) || adjacent(core.y23, core.x[0]) || adjacent(core.y13, core.x[1]) {
                    continue;
                }
                search.rhombi_tried += 1;
                match complete(plane, &pruned, t, u, &core) {
                    Ok(w) => {
                        search.outcome = WitnessOutcome::Found(w);
                        return Ok(search);
                    }
                    Err(f) => {
                        first_failure.get_or_insert(f);
                    }
                }
            }
        }
    }
    let (step, detail) = match first_failure {
        Some((step, detail)) => (step, format!("{detail} (after {} candidate rhombi)", search.rhombi_tried)),
        None => (WitnessStep::NoRhombus, "no admissible rhombus in A x B x C x D".to_string()),
    };
    Ok(search.fail(step, detail))
}

fn complete(plane: &Plane, pool: &PointSet, t: FieldElement, u: Point, core: &Core) -> std::result::Result<Witness, (WitnessStep, String)> {
    let adjacent = |a: Point, b: Point| plane.distance(a, b) == t;
    let mut used = vec![core.x[0], core.x[1], core.x[2], core.y123, core.y12, core.y13, core.y23];
    let mut private = [Point::ORIGIN; 3];
    for (i, slot) in private.iter_mut().enumerate() {
        let found = plane.circle_points(t).iter().map(|&s| plane.add(core.x[i], s)).find(|&y| {
            pool.contains(plane, y) && !used.contains(&y) && (0..3).filter(|&k| k != i).all(|k| !adjacent(y, core.x[k]))
        });
        match found {
            Some(y) => {
                *slot = y;
                used.push(y);
            }
            None => return Err((WitnessStep::NoPrivateNeighbor, format!("x{} has no private neighbor", i + 1))),
        }
    }
    let y0 = pool
        .iter()
        .find(|&y| !used.contains(&y) && core.x.iter().all(|&x| !adjacent(x, y)))
        .ok_or((WitnessStep::NoIsolatedPoint, "every remaining point is adjacent to some xi".to_string()))?;
    Ok(Witness {
        x1: core.x[0],
        x2: core.x[1],
        x3: core.x[2],
        y12: core.y12,
        y13: core.y13,
        y23: core.y23,
        y123: core.y123,
        y1: private[0],
        y2: private[1],
        y3: private[2],
        y0,
        u,
        t,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Clause {
    pub name: String,
    pub holds: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Verification {
    pub ok: bool,
    pub clauses: Vec<Clause>,
}

impl Verification {
    /// Names of the clauses that fail.
    pub fn violations(&self) -> Vec<&str> {
        self.clauses.iter().filter(|c| !c.holds).map(|c| c.name.as_str()).collect()
    }
}

/// Checks a witness against `E` and `t` from scratch: membership of all
/// eleven points, pairwise distinctness, and the full adjacency table.
pub fn verify_witness(plane: &Plane, e: &PointSet, t: FieldElement, w: &Witness) -> Verification {
    let mut clauses = Vec::new();
    let labeled = w.labeled();
    for (name, p) in labeled {
        clauses.push(Clause { name: format!("{name} in E"), holds: e.contains(plane, p) });
    }
    let mut all_distinct = true;
    for i in 0..labeled.len() {
        for j in i + 1..labeled.len() {
            if labeled[i].1 == labeled[j].1 {
                all_distinct = false;
                clauses.push(Clause { name: format!("{} != {}", labeled[i].0, labeled[j].0), holds: false });
            }
        }
    }
    if all_distinct {
        clauses.push(Clause { name: "all points distinct".into(), holds: true });
    }
    for (label, pattern) in PATTERN {
        let y = w.y(label);
        for (k, (&x, &want)) in w.xs().iter().zip(&pattern).enumerate() {
            let is = plane.distance(y, x) == t;
            let op = if want { "=" } else { "!=" };
            clauses.push(Clause { name: format!("||{label} - x{}|| {op} t", k + 1), holds: is == want });
        }
    }
    Verification { ok: clauses.iter().all(|c| c.holds), clauses }
}

/// Convenience: verifies and confirms `{x¹, x², x³}` is shattered in `sys`.
pub fn certified_shattered(plane: &Plane, sys: &DistanceSystem, w: &Witness) -> Result<bool> {
    super::shatters(plane, sys, &w.xs())
}
