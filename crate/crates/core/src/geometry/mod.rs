//! Points of `F_q²`, the quadratic form `||x|| = x₁² + x₂²`, circles and
//! point sets.
//!
//! A [`Plane`] bundles the field with two tables that every counter needs:
//! the norm of each point and the circle `S_j = {x : ||x|| = j}` for every
//! radius `j`. Points are addressed densely by `x₁·q + x₂`.

mod io;

use std::fmt;

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::field::{FieldElement, PrimeField};
use crate::rng;

pub use io::{load_point_set, parse_json, parse_text, to_json, to_text, PointSetFile};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Point {
    pub x1: FieldElement,
    pub x2: FieldElement,
}

impl Point {
    pub const ORIGIN: Point = Point { x1: FieldElement::ZERO, x2: FieldElement::ZERO };

    pub fn coords(self) -> [u32; 2] {
        [self.x1.value(), self.x2.value()]
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x1, self.x2)
    }
}

impl Serialize for Point {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.coords().serialize(s)
    }
}

/// The plane `F_q²` with cached norms and circles.
#[derive(Debug, Clone)]
pub struct Plane {
    field: PrimeField,
    norms: Vec<FieldElement>,
    circles: Vec<Vec<Point>>,
}

impl Plane {
    pub fn new(q: u64) -> Result<Self> {
        Ok(Self::from_field(PrimeField::new(q)?))
    }

    pub fn from_field(field: PrimeField) -> Self {
        let q = field.modulus() as usize;
        let mut norms = Vec::with_capacity(q * q);
        let mut circles = vec![Vec::new(); q];
        for a in field.elements() {
            let a2 = field.mul(a, a);
            for b in field.elements() {
                let n = field.add(a2, field.mul(b, b));
                norms.push(n);
                circles[n.value() as usize].push(Point { x1: a, x2: b });
            }
        }
        Plane { field, norms, circles }
    }

    #[inline]
    pub fn field(&self) -> &PrimeField {
        &self.field
    }

    #[inline]
    pub fn q(&self) -> u32 {
        self.field.modulus()
    }

    /// Number of points, `q²`.
    #[inline]
    pub fn size(&self) -> usize {
        self.norms.len()
    }

    pub fn point(&self, x1: u64, x2: u64) -> Point {
        Point { x1: self.field.element(x1), x2: self.field.element(x2) }
    }

    #[inline]
    pub fn index(&self, p: Point) -> usize {
        p.x1.value() as usize * self.q() as usize + p.x2.value() as usize
    }

    #[inline]
    pub fn point_at(&self, idx: usize) -> Point {
        let q = self.q() as usize;
        Point { x1: self.field.element((idx / q) as u64), x2: self.field.element((idx % q) as u64) }
    }

    /// All points in index order.
    pub fn points(&self) -> impl Iterator<Item = Point> + '_ {
        (0..self.size()).map(|i| self.point_at(i))
    }

    #[inline]
    pub fn add(&self, a: Point, b: Point) -> Point {
        Point { x1: self.field.add(a.x1, b.x1), x2: self.field.add(a.x2, b.x2) }
    }

    #[inline]
    pub fn sub(&self, a: Point, b: Point) -> Point {
        Point { x1: self.field.sub(a.x1, b.x1), x2: self.field.sub(a.x2, b.x2) }
    }

    #[inline]
    pub fn neg(&self, a: Point) -> Point {
        Point { x1: self.field.neg(a.x1), x2: self.field.neg(a.x2) }
    }

    /// `||p|| = p₁² + p₂²`.
    #[inline]
    pub fn norm(&self, p: Point) -> FieldElement {
        self.norms[self.index(p)]
    }

    /// `||a - b||`.
    #[inline]
    pub fn distance(&self, a: Point, b: Point) -> FieldElement {
        self.norm(self.sub(a, b))
    }

    /// The bilinear form `x·m = x₁m₁ + x₂m₂`.
    #[inline]
    pub fn dot(&self, x: Point, m: Point) -> FieldElement {
        let f = &self.field;
        f.add(f.mul(x.x1, m.x1), f.mul(x.x2, m.x2))
    }

    /// Points of the circle `S_j`, in index order.
    #[inline]
    pub fn circle_points(&self, j: FieldElement) -> &[Point] {
        &self.circles[j.value() as usize]
    }

    pub fn circle(&self, j: FieldElement) -> PointSet {
        PointSet::from_points_unchecked(self, self.circle_points(j).to_vec())
    }

    pub(crate) fn check(&self, set: &PointSet) {
        assert_eq!(set.q, self.q(), "point set over F_{} used with F_{}", set.q, self.q());
    }
}

/// A subset of `F_q²`: an ordered list of distinct points plus a dense
/// membership indicator.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PointSet {
    q: u32,
    elements: Vec<Point>,
    members: Vec<bool>,
}

impl PointSet {
    pub fn empty(plane: &Plane) -> Self {
        PointSet { q: plane.q(), elements: Vec::new(), members: vec![false; plane.size()] }
    }

    pub fn full(plane: &Plane) -> Self {
        PointSet { q: plane.q(), elements: plane.points().collect(), members: vec![true; plane.size()] }
    }

    /// Builds a set from a list of points, rejecting repeats.
    pub fn from_points(plane: &Plane, points: impl IntoIterator<Item = Point>) -> Result<Self> {
        let mut set = Self::empty(plane);
        for p in points {
            let idx = plane.index(p);
            if set.members[idx] {
                return Err(Error::DuplicatePoint(p.x1.value(), p.x2.value()));
            }
            set.members[idx] = true;
            set.elements.push(p);
        }
        Ok(set)
    }

    /// Builds a set from points known to be distinct.
    pub(crate) fn from_points_unchecked(plane: &Plane, elements: Vec<Point>) -> Self {
        let mut members = vec![false; plane.size()];
        for &p in &elements {
            members[plane.index(p)] = true;
        }
        debug_assert_eq!(members.iter().filter(|&&m| m).count(), elements.len());
        PointSet { q: plane.q(), elements, members }
    }

    /// Builds a set from a predicate over all points; elements come out in
    /// index order.
    pub fn from_predicate(plane: &Plane, mut keep: impl FnMut(Point) -> bool) -> Self {
        let elements: Vec<Point> = plane.points().filter(|&p| keep(p)).collect();
        Self::from_points_unchecked(plane, elements)
    }

    #[inline]
    pub fn q(&self) -> u32 {
        self.q
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.elements.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    #[inline]
    pub fn contains(&self, plane: &Plane, p: Point) -> bool {
        self.members[plane.index(p)]
    }

    #[inline]
    pub fn contains_index(&self, idx: usize) -> bool {
        self.members[idx]
    }

    pub fn iter(&self) -> impl Iterator<Item = Point> + '_ {
        self.elements.iter().copied()
    }

    pub fn points(&self) -> &[Point] {
        &self.elements
    }

    pub fn indicator(&self) -> &[bool] {
        &self.members
    }

    /// Translate by `v`.
    pub fn translate(&self, plane: &Plane, v: Point) -> PointSet {
        plane.check(self);
        Self::from_points_unchecked(plane, self.iter().map(|p| plane.add(p, v)).collect())
    }

    pub fn is_disjoint(&self, other: &PointSet) -> bool {
        self.members.iter().zip(&other.members).all(|(a, b)| !(*a && *b))
    }
}

/// `D(v) = #{(a, b) ∈ A×B : a - b = v}` for every `v ∈ F_q²`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DifferenceTable {
    q: u32,
    counts: Vec<u64>,
}

impl DifferenceTable {
    pub fn q(&self) -> u32 {
        self.q
    }

    #[inline]
    pub fn get(&self, plane: &Plane, v: Point) -> u64 {
        self.counts[plane.index(v)]
    }

    #[inline]
    pub fn get_index(&self, idx: usize) -> u64 {
        self.counts[idx]
    }

    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }
}

pub fn difference_table(plane: &Plane, a: &PointSet, b: &PointSet) -> DifferenceTable {
    plane.check(a);
    plane.check(b);
    let mut counts = vec![0u64; plane.size()];
    for x in a.iter() {
        for y in b.iter() {
            counts[plane.index(plane.sub(x, y))] += 1;
        }
    }
    DifferenceTable { q: plane.q(), counts }
}

/// `E_i ∩ (E_j - x) = {u ∈ E_i : u + x ∈ E_j}`, in the order of `ei`.
pub fn intersect_shift(plane: &Plane, ei: &PointSet, ej: &PointSet, x: Point) -> PointSet {
    plane.check(ei);
    plane.check(ej);
    let kept = ei.iter().filter(|&u| ej.contains(plane, plane.add(u, x))).collect();
    PointSet::from_points_unchecked(plane, kept)
}

/// `{(a, b) : a ∈ F_q, b ∈ X}`.
pub fn gen_example_line_ap(plane: &Plane, xs: &[FieldElement]) -> Result<PointSet> {
    let mut seen = vec![false; plane.q() as usize];
    for &b in xs {
        if std::mem::replace(&mut seen[b.value() as usize], true) {
            return Err(Error::DuplicatePoint(0, b.value()));
        }
    }
    Ok(PointSet::from_predicate(plane, |p| seen[p.x2.value() as usize]))
}

/// `start, start + step, …` with `len` terms, reduced mod q.
pub fn arithmetic_progression(field: &PrimeField, start: u64, step: u64, len: usize) -> Vec<FieldElement> {
    let (s, d) = (field.element(start), field.element(step));
    let mut out = Vec::with_capacity(len);
    let mut cur = s;
    for _ in 0..len {
        out.push(cur);
        cur = field.add(cur, d);
    }
    out
}

/// Includes each point independently with probability `density`.
///
/// Points are visited in index order and each consumes exactly one draw of
/// the generator described in [`crate::rng`].
pub fn gen_random_set(plane: &Plane, density: f64, seed: u64) -> Result<PointSet> {
    if !(0.0..=1.0).contains(&density) {
        return Err(Error::InvalidDensity(density));
    }
    let mut rng = rng::seeded(seed);
    Ok(PointSet::from_predicate(plane, |_| rng::unit_f64(&mut rng) < density))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn plane(q: u64) -> Plane {
        Plane::new(q).unwrap()
    }

    #[test]
    fn norm_examples() {
        let p5 = plane(5);
        assert_eq!(p5.norm(p5.point(3, 4)).value(), 0);
        let p3 = plane(3);
        assert_eq!(p3.norm(p3.point(1, 0)).value(), 1);
        let p7 = plane(7);
        assert_eq!(p7.norm(p7.point(2, 3)).value(), 6);
    }

    #[test]
    fn norm_is_even() {
        for q in [3, 5, 7, 11, 13] {
            let pl = plane(q);
            for p in pl.points() {
                assert_eq!(pl.norm(p), pl.norm(pl.neg(p)));
            }
        }
    }

    #[test]
    fn circle_examples() {
        let p3 = plane(3);
        let s1 = p3.circle(p3.field().element(1));
        let pts: Vec<[u32; 2]> = s1.iter().map(Point::coords).collect();
        assert_eq!(pts, vec![[0, 1], [0, 2], [1, 0], [2, 0]]);
        assert_eq!(p3.circle(FieldElement::ZERO).points(), &[Point::ORIGIN]);
        let p5 = plane(5);
        assert_eq!(p5.circle(FieldElement::ZERO).len(), 9);
    }

    #[test]
    fn circle_sizes_match_brute_force() {
        for q in [3u64, 5, 7, 11, 13] {
            let pl = plane(q);
            for j in pl.field().elements() {
                let mut brute = 0;
                for a in 0..q {
                    for b in 0..q {
                        if (a * a + b * b) % q == j.value() as u64 {
                            brute += 1;
                        }
                    }
                }
                assert_eq!(pl.circle(j).len(), brute, "q = {q}, j = {j}");
            }
        }
    }

    #[test]
    fn difference_table_examples() {
        let pl = plane(3);
        let p = pl.point(1, 2);
        let single = PointSet::from_points(&pl, [p]).unwrap();
        let d = difference_table(&pl, &single, &single);
        assert_eq!(d.get(&pl, Point::ORIGIN), 1);
        assert_eq!(d.total(), 1);

        let full = PointSet::full(&pl);
        let d = difference_table(&pl, &full, &full);
        assert!(d.counts().iter().all(|&c| c == 9));

        let a = PointSet::from_points(&pl, [pl.point(0, 0), pl.point(1, 0)]).unwrap();
        let b = PointSet::from_points(&pl, [pl.point(0, 0)]).unwrap();
        let d = difference_table(&pl, &a, &b);
        assert_eq!(d.get(&pl, pl.point(0, 0)), 1);
        assert_eq!(d.get(&pl, pl.point(1, 0)), 1);
        assert_eq!(d.total(), 2);
    }

    #[test]
    fn intersect_shift_examples() {
        let pl = plane(3);
        let e = gen_random_set(&pl, 0.5, 3).unwrap();
        assert_eq!(intersect_shift(&pl, &e, &e, Point::ORIGIN), e);
        let full = PointSet::full(&pl);
        assert_eq!(intersect_shift(&pl, &full, &full, pl.point(2, 1)).len(), 9);
        let ei = PointSet::from_points(&pl, [pl.point(0, 0)]).unwrap();
        let ej = PointSet::from_points(&pl, [pl.point(1, 1)]).unwrap();
        let r = intersect_shift(&pl, &ei, &ej, pl.point(1, 1));
        assert_eq!(r.points(), &[pl.point(0, 0)]);
    }

    #[test]
    fn line_ap_examples() {
        let pl = plane(5);
        let all: Vec<_> = pl.field().elements().collect();
        assert_eq!(gen_example_line_ap(&pl, &all).unwrap(), PointSet::full(&pl));
        let axis = gen_example_line_ap(&pl, &[FieldElement::ZERO]).unwrap();
        assert_eq!(axis.len(), 5);
        assert!(axis.iter().all(|p| p.x2.is_zero()));
        let two = arithmetic_progression(pl.field(), 0, 1, 2);
        assert_eq!(gen_example_line_ap(&pl, &two).unwrap().len(), 10);
        assert!(gen_example_line_ap(&pl, &[FieldElement::ZERO, FieldElement::ZERO]).is_err());
    }

    #[test]
    fn random_set_contract() {
        let pl = plane(7);
        assert!(gen_random_set(&pl, 0.0, 1).unwrap().is_empty());
        assert_eq!(gen_random_set(&pl, 1.0, 1).unwrap().len(), 49);
        assert_eq!(gen_random_set(&pl, 0.4, 77).unwrap(), gen_random_set(&pl, 0.4, 77).unwrap());
        assert!(matches!(gen_random_set(&pl, 1.5, 0), Err(Error::InvalidDensity(_))));
        assert!(gen_random_set(&pl, -0.1, 0).is_err());
    }

    #[test]
    fn random_set_uses_one_draw_per_point() {
        let pl = plane(5);
        let set = gen_random_set(&pl, 0.5, 2024).unwrap();
        let mut r = rng::seeded(2024);
        let expect: Vec<Point> = pl.points().filter(|_| rng::unit_f64(&mut r) < 0.5).collect();
        assert_eq!(set.points(), expect.as_slice());
    }

    #[test]
    fn from_points_rejects_duplicates() {
        let pl = plane(5);
        let p = pl.point(1, 1);
        assert!(matches!(PointSet::from_points(&pl, [p, p]), Err(Error::DuplicatePoint(1, 1))));
    }

    proptest! {
        #[test]
        fn difference_table_antisymmetry(q in prop::sample::select(vec![3u64, 5, 7, 11]), sa in any::<u64>(), sb in any::<u64>(), d in 0.0f64..=1.0) {
            let pl = plane(q);
            let a = gen_random_set(&pl, d, sa).unwrap();
            let b = gen_random_set(&pl, d, sb).unwrap();
            let ab = difference_table(&pl, &a, &b);
            let ba = difference_table(&pl, &b, &a);
            prop_assert_eq!(ab.total(), (a.len() * b.len()) as u64);
            for v in pl.points() {
                prop_assert_eq!(ab.get(&pl, v), ba.get(&pl, pl.neg(v)));
                prop_assert_eq!(intersect_shift(&pl, &a, &b, v).len() as u64, ba.get(&pl, v));
            }
        }
    }
}
