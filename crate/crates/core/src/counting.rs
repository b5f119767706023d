//! Exact configuration counts.
//!
//! * `N_t(U, V)`: pairs `(u, v) ∈ U×V` with `||u - v|| = t`.
//! * `Par_t(E₁..E₄)`: quadruples `(x, y, z, w) ∈ E₁×E₂×E₃×E₄` with
//!   `x - y = z - w` and `||x - y|| = t`; `Par` sums `Par_t` over every `t`,
//!   zero included.
//! * `Rhom_t(E₁..E₄)`: triples `(u, v, x)` with `||x|| = ||u - v|| = t`,
//!   `u ∈ E₁`, `u + x ∈ E₂`, `v ∈ E₃`, `v + x ∈ E₄`, i.e. the rhombus
//!   `(u, u + x, v + x, v)`. Tuples with `v = u + x` are degenerate and are
//!   included unless explicitly excluded.
//!
//! Each count has a brute-force oracle and a fast method; `Par_t` also has a
//! spectral evaluation ([`par_t_fourier`]) that must round to the same
//! integer.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::{FieldElement, PrimeField};
use crate::fourier::{transform_set, Spectrum};
use crate::geometry::{difference_table, intersect_shift, Plane, PointSet};
use crate::{ComplexValue, COUNT_TOL};

/// Largest modulus accepted by the spectral counter.
pub const FOURIER_MAX_Q: u32 = 31;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Oracle,
    Fast,
    Fourier,
}

impl Method {
    pub fn name(self) -> &'static str {
        match self {
            Method::Oracle => "oracle",
            Method::Fast => "fast",
            Method::Fourier => "fourier",
        }
    }
}

impl std::str::FromStr for Method {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "oracle" => Ok(Method::Oracle),
            "fast" => Ok(Method::Fast),
            "fourier" => Ok(Method::Fourier),
            _ => Err(format!("unknown method {s:?} (expected oracle, fast or fourier)")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Quantity {
    #[serde(rename = "n_t")]
    UnitDistances,
    #[serde(rename = "par_t")]
    ParT,
    #[serde(rename = "par")]
    Par,
    #[serde(rename = "rhom_t")]
    RhomT,
    #[serde(rename = "degenerate")]
    Degenerate,
}

impl Quantity {
    pub fn name(self) -> &'static str {
        match self {
            Quantity::UnitDistances => "n_t",
            Quantity::ParT => "par_t",
            Quantity::Par => "par",
            Quantity::RhomT => "rhom_t",
            Quantity::Degenerate => "degenerate",
        }
    }
}

impl std::str::FromStr for Quantity {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "n_t" => Ok(Quantity::UnitDistances),
            "par_t" => Ok(Quantity::ParT),
            "par" => Ok(Quantity::Par),
            "rhom_t" => Ok(Quantity::RhomT),
            "degenerate" => Ok(Quantity::Degenerate),
            _ => Err(format!("unknown quantity {s:?} (expected n_t, par_t, par, rhom_t or degenerate)")),
        }
    }
}

/// One computed count together with the parameters that produced it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CountResult {
    pub quantity: Quantity,
    pub value: u64,
    pub method: Method,
    pub q: u32,
    pub t: Option<u32>,
    pub set_sizes: Vec<usize>,
}

fn result(plane: &Plane, quantity: Quantity, value: u64, method: Method, t: Option<FieldElement>, sets: &[&PointSet]) -> CountResult {
    CountResult {
        quantity,
        value,
        method,
        q: plane.q(),
        t: t.map(FieldElement::value),
        set_sizes: sets.iter().map(|s| s.len()).collect(),
    }
}

fn check_all(plane: &Plane, sets: &[&PointSet]) {
    for s in sets {
        plane.check(s);
    }
}

fn unsupported(quantity: Quantity, method: Method) -> Error {
    Error::UnsupportedMethod { quantity: quantity.name(), method: method.name() }
}

// ---------------------------------------------------------------------------
// N_t

pub fn unit_distances_oracle(plane: &Plane, u: &PointSet, v: &PointSet, t: FieldElement) -> u64 {
    let mut n = 0;
    for a in u.iter() {
        for b in v.iter() {
            if plane.distance(a, b) == t {
                n += 1;
            }
        }
    }
    n
}

/// Probes `u + S_t` against `v` for every `u`.
pub fn unit_distances_fast(plane: &Plane, u: &PointSet, v: &PointSet, t: FieldElement) -> u64 {
    let circle = plane.circle_points(t);
    let mut n = 0;
    for a in u.iter() {
        for &s in circle {
            if v.contains(plane, plane.add(a, s)) {
                n += 1;
            }
        }
    }
    n
}

pub fn count_unit_distances(plane: &Plane, u: &PointSet, v: &PointSet, t: FieldElement, method: Method) -> Result<CountResult> {
    check_all(plane, &[u, v]);
    let value = match method {
        Method::Oracle => unit_distances_oracle(plane, u, v, t),
        Method::Fast => unit_distances_fast(plane, u, v, t),
        Method::Fourier => return Err(unsupported(Quantity::UnitDistances, method)),
    };
    Ok(result(plane, Quantity::UnitDistances, value, method, Some(t), &[u, v]))
}

// ---------------------------------------------------------------------------
// Par_t and Par

pub fn par_t_oracle(plane: &Plane, [e1, e2, e3, e4]: [&PointSet; 4], t: FieldElement) -> u64 {
    let mut n = 0;
    for x in e1.iter() {
        for y in e2.iter() {
            let d = plane.sub(x, y);
            if plane.norm(d) != t {
                continue;
            }
            for z in e3.iter() {
                for w in e4.iter() {
                    if plane.sub(z, w) == d {
                        n += 1;
                    }
                }
            }
        }
    }
    n
}

/// `Σ_{||v|| = t} D₁₂(v)·D₃₄(v)` over difference tables.
pub fn par_t_fast(plane: &Plane, [e1, e2, e3, e4]: [&PointSet; 4], t: FieldElement) -> u64 {
    let d12 = difference_table(plane, e1, e2);
    let d34 = difference_table(plane, e3, e4);
    plane.circle_points(t).iter().map(|&v| d12.get(plane, v) * d34.get(plane, v)).sum()
}

/// Quadruple loop testing `x - y = z - w` with no side-length filter.
pub fn par_all_oracle(plane: &Plane, [e1, e2, e3, e4]: [&PointSet; 4]) -> u64 {
    let mut n = 0;
    for x in e1.iter() {
        for y in e2.iter() {
            let d = plane.sub(x, y);
            for z in e3.iter() {
                for w in e4.iter() {
                    if plane.sub(z, w) == d {
                        n += 1;
                    }
                }
            }
        }
    }
    n
}

pub fn par_all_fast(plane: &Plane, [e1, e2, e3, e4]: [&PointSet; 4]) -> u64 {
    let d12 = difference_table(plane, e1, e2);
    let d34 = difference_table(plane, e3, e4);
    d12.counts().iter().zip(d34.counts()).map(|(a, b)| a * b).sum()
}

pub fn count_par_t(plane: &Plane, sets: [&PointSet; 4], t: FieldElement, method: Method) -> Result<CountResult> {
    check_all(plane, &sets);
    let value = match method {
        Method::Oracle => par_t_oracle(plane, sets, t),
        Method::Fast => par_t_fast(plane, sets, t),
        Method::Fourier => par_t_fourier(plane, sets, t)?.rounded,
    };
    Ok(result(plane, Quantity::ParT, value, method, Some(t), &sets))
}

pub fn count_par_all(plane: &Plane, sets: [&PointSet; 4], method: Method) -> Result<CountResult> {
    check_all(plane, &sets);
    let value = match method {
        Method::Oracle => par_all_oracle(plane, sets),
        Method::Fast => par_all_fast(plane, sets),
        Method::Fourier => return Err(unsupported(Quantity::Par, method)),
    };
    Ok(result(plane, Quantity::Par, value, method, None, &sets))
}

// ---------------------------------------------------------------------------
// Rhom_t and degenerate rhombi

/// Direct loop over `(u, v, x)`.
pub fn rhom_t_oracle(plane: &Plane, [e1, e2, e3, e4]: [&PointSet; 4], t: FieldElement, exclude_degenerate: bool) -> u64 {
    let circle = plane.circle_points(t);
    let mut n = 0;
    for u in e1.iter() {
        for v in e3.iter() {
            if plane.distance(u, v) != t {
                continue;
            }
            for &x in circle {
                let ux = plane.add(u, x);
                if !e2.contains(plane, ux) || !e4.contains(plane, plane.add(v, x)) {
                    continue;
                }
                if exclude_degenerate && v == ux {
                    continue;
                }
                n += 1;
            }
        }
    }
    n
}

/// `Σ_{||x|| = t} N_t(E₁₂ˣ, E₃₄ˣ)` with `E_ijˣ = E_i ∩ (E_j - x)`.
pub fn rhom_t_fast(plane: &Plane, sets: [&PointSet; 4], t: FieldElement, exclude_degenerate: bool) -> u64 {
    let [e1, e2, e3, e4] = sets;
    let total: u64 = plane
        .circle_points(t)
        .par_iter()
        .map(|&x| {
            let e12 = intersect_shift(plane, e1, e2, x);
            let e34 = intersect_shift(plane, e3, e4, x);
            unit_distances_fast(plane, &e12, &e34, t)
        })
        .sum();
    if exclude_degenerate {
        total - degenerate_fast(plane, sets, t)
    } else {
        total
    }
}

pub fn degenerate_oracle(plane: &Plane, [e1, e2, e3, e4]: [&PointSet; 4], t: FieldElement) -> u64 {
    let mut n = 0;
    for u in e1.iter() {
        for &x in plane.circle_points(t) {
            let v = plane.add(u, x);
            if e2.contains(plane, v) && e3.contains(plane, v) && e4.contains(plane, plane.add(v, x)) {
                n += 1;
            }
        }
    }
    n
}

/// `Σ_{||x|| = t} #{u ∈ E₁₂ˣ : u + x ∈ E₃₄ˣ}`.
pub fn degenerate_fast(plane: &Plane, [e1, e2, e3, e4]: [&PointSet; 4], t: FieldElement) -> u64 {
    plane
        .circle_points(t)
        .par_iter()
        .map(|&x| {
            let e12 = intersect_shift(plane, e1, e2, x);
            let e34 = intersect_shift(plane, e3, e4, x);
            e12.iter().filter(|&u| e34.contains(plane, plane.add(u, x))).count() as u64
        })
        .sum()
}

pub fn count_rhom_t(plane: &Plane, sets: [&PointSet; 4], t: FieldElement, exclude_degenerate: bool, method: Method) -> Result<CountResult> {
    check_all(plane, &sets);
    let value = match method {
        Method::Oracle => rhom_t_oracle(plane, sets, t, exclude_degenerate),
        Method::Fast => rhom_t_fast(plane, sets, t, exclude_degenerate),
        Method::Fourier => return Err(unsupported(Quantity::RhomT, method)),
    };
    Ok(result(plane, Quantity::RhomT, value, method, Some(t), &sets))
}

pub fn count_degenerate_rhom(plane: &Plane, sets: [&PointSet; 4], t: FieldElement, method: Method) -> Result<CountResult> {
    check_all(plane, &sets);
    let value = match method {
        Method::Oracle => degenerate_oracle(plane, sets, t),
        Method::Fast => degenerate_fast(plane, sets, t),
        Method::Fourier => return Err(unsupported(Quantity::Degenerate, method)),
    };
    Ok(result(plane, Quantity::Degenerate, value, method, Some(t), &sets))
}

// ---------------------------------------------------------------------------
// Spectral evaluation of Par_t

/// `Par_t = I + II` evaluated from the spectra of the four sets.
///
/// With `Ŝ_t(n) = q⁻¹δ₀(n) + K_t(n)`, the term `I` collects the principal
/// part `q⁻¹δ₀` on the diagonal `m' = -m`:
/// `I = q⁵ Σ_m Ê₁(-m)Ê₂(m)Ê₃(m)Ê₄(-m) = Par/q`, which does not depend on
/// `t`. The term `II = q⁶ Σ_{m,m'} Ê₁(m)Ê₂(-m)Ê₃(m')Ê₄(-m') K_t(-m-m')`
/// holds everything else, including the `K_t(0)` share of the diagonal.
#[derive(Debug, Clone, Serialize)]
pub struct FourierSplit {
    pub term_i: ComplexValue,
    pub term_ii: ComplexValue,
    pub total: ComplexValue,
    /// `total` rounded to the nearest integer after the tolerance check.
    pub rounded: u64,
}

/// Neumaier-compensated complex accumulator.
#[derive(Default, Clone, Copy)]
struct CompensatedSum {
    sum: ComplexValue,
    comp: ComplexValue,
}

impl CompensatedSum {
    fn add(&mut self, v: ComplexValue) {
        fn step(sum: &mut f64, comp: &mut f64, v: f64) {
            let t = *sum + v;
            if sum.abs() >= v.abs() {
                *comp += (*sum - t) + v;
            } else {
                *comp += (v - t) + *sum;
            }
            *sum = t;
        }
        step(&mut self.sum.re, &mut self.comp.re, v.re);
        step(&mut self.sum.im, &mut self.comp.im, v.im);
    }

    fn value(self) -> ComplexValue {
        self.sum + self.comp
    }
}

/// Rounds a float-derived count, rejecting values that are not within
/// [`COUNT_TOL`] of a nonnegative integer.
pub fn round_count(v: ComplexValue) -> Result<u64> {
    let nearest = v.re.round();
    let distance = (v.re - nearest).abs().max(v.im.abs());
    if distance > COUNT_TOL || nearest < 0.0 {
        return Err(Error::ToleranceExceeded { value: v.re, distance });
    }
    Ok(nearest as u64)
}

pub fn par_t_fourier(plane: &Plane, sets: [&PointSet; 4], t: FieldElement) -> Result<FourierSplit> {
    check_all(plane, &sets);
    let q = plane.q();
    if q > FOURIER_MAX_Q {
        return Err(Error::FourierCap { q, cap: FOURIER_MAX_Q });
    }
    let spectra: Vec<Spectrum> = sets.iter().map(|s| transform_set(plane, s)).collect();
    let circle = transform_set(plane, &plane.circle(t));
    let (e1, e2, e3, e4) = (&spectra[0], &spectra[1], &spectra[2], &spectra[3]);

    let n = plane.size();
    let neg: Vec<usize> = (0..n).map(|i| plane.index(plane.neg(plane.point_at(i)))).collect();
    let qf = q as f64;
    let q5 = qf.powi(5);
    let q6 = qf.powi(6);

    // a(m) = Ê₁(m)Ê₂(-m) and b(m') = Ê₃(m')Ê₄(-m') are the spectra of the
    // difference tables D₁₂ and D₃₄, up to a factor q².
    let a: Vec<ComplexValue> = (0..n).map(|m| e1.coeffs()[m] * e2.coeffs()[neg[m]]).collect();
    let b: Vec<ComplexValue> = (0..n).map(|m| e3.coeffs()[m] * e4.coeffs()[neg[m]]).collect();
    // K_t(k) = Ŝ_t(k) - q⁻¹δ₀(k)
    let mut kernel = circle.coeffs().to_vec();
    kernel[0] -= 1.0 / qf;

    let mut diag = CompensatedSum::default();
    for m in 0..n {
        diag.add(a[m] * b[neg[m]]);
    }
    let term_i = diag.value() * q5;

    // II = q⁶ Σ_k K_t(-k) Σ_m a(m) b(k - m)
    let per_k: Vec<ComplexValue> = (0..n)
        .into_par_iter()
        .map(|k| {
            let pk = plane.point_at(k);
            let mut conv = CompensatedSum::default();
            for (m, &am) in a.iter().enumerate() {
                let km = plane.index(plane.sub(pk, plane.point_at(m)));
                conv.add(am * b[km]);
            }
            conv.value() * kernel[neg[k]]
        })
        .collect();
    let mut rest = CompensatedSum::default();
    for v in per_k {
        rest.add(v);
    }
    let term_ii = rest.value() * q6;

    let total = term_i + term_ii;
    let rounded = round_count(total)?;
    Ok(FourierSplit { term_i, term_ii, total, rounded })
}

/// `#{(a, b, c, d) ∈ X⁴ : a - b = c - d}` computed in `F_q`.
pub fn additive_energy(field: &PrimeField, xs: &[FieldElement]) -> u64 {
    let mut reps = vec![0u64; field.modulus() as usize];
    for &a in xs {
        for &b in xs {
            reps[field.sub(a, b).value() as usize] += 1;
        }
    }
    reps.iter().map(|r| r * r).sum()
}

/// Sum of `|E₁₂ˣ|·|E₃₄ˣ|` over the circle `||x|| = t`, together with the sum
/// of the square roots of the same products.
pub(crate) fn shifted_products(plane: &Plane, [e1, e2, e3, e4]: [&PointSet; 4], t: FieldElement) -> (u64, f64) {
    let mut products = 0u64;
    let mut roots = 0.0;
    for &x in plane.circle_points(t) {
        let p = intersect_shift(plane, e1, e2, x).len() as u64 * intersect_shift(plane, e3, e4, x).len() as u64;
        products += p;
        roots += (p as f64).sqrt();
    }
    (products, roots)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{arithmetic_progression, gen_example_line_ap, gen_random_set};
    use proptest::prelude::*;

    fn plane(q: u64) -> Plane {
        Plane::new(q).unwrap()
    }

    fn one(pl: &Plane) -> FieldElement {
        pl.field().element(1)
    }

    fn random4(pl: &Plane, density: f64, seed: u64) -> [PointSet; 4] {
        std::array::from_fn(|i| gen_random_set(pl, density, seed.wrapping_mul(4).wrapping_add(i as u64)).unwrap())
    }

    fn refs(s: &[PointSet; 4]) -> [&PointSet; 4] {
        [&s[0], &s[1], &s[2], &s[3]]
    }

    #[test]
    fn full_plane_fixtures_q3() {
        let pl = plane(3);
        let f = PointSet::full(&pl);
        let all = [&f, &f, &f, &f];
        let t = one(&pl);
        assert_eq!(unit_distances_oracle(&pl, &f, &f, t), 36);
        assert_eq!(unit_distances_fast(&pl, &f, &f, t), 36);
        assert_eq!(par_t_oracle(&pl, all, t), 324);
        assert_eq!(par_all_oracle(&pl, all), 729);
        assert_eq!(rhom_t_oracle(&pl, all, t, false), 144);
        assert_eq!(degenerate_oracle(&pl, all, t), 36);
        assert_eq!(rhom_t_fast(&pl, all, t, false), 144);
        assert_eq!(rhom_t_fast(&pl, all, t, true), 108);
        assert_eq!(rhom_t_oracle(&pl, all, t, true), 108);
    }

    #[test]
    fn unit_distance_examples() {
        let pl = plane(3);
        let t = one(&pl);
        let p = PointSet::from_points(&pl, [pl.point(1, 1)]).unwrap();
        assert_eq!(count_unit_distances(&pl, &p, &p, t, Method::Fast).unwrap().value, 0);
        let origin = PointSet::from_points(&pl, [crate::geometry::Point::ORIGIN]).unwrap();
        let full = PointSet::full(&pl);
        assert_eq!(count_unit_distances(&pl, &origin, &full, t, Method::Oracle).unwrap().value, 4);
        assert!(count_unit_distances(&pl, &origin, &full, t, Method::Fourier).is_err());
    }

    #[test]
    fn singleton_quadruples() {
        let pl = plane(5);
        let p = PointSet::from_points(&pl, [pl.point(2, 3)]).unwrap();
        let all = [&p, &p, &p, &p];
        for t in pl.field().units() {
            assert_eq!(par_t_oracle(&pl, all, t), 0);
            assert_eq!(par_t_fast(&pl, all, t), 0);
            assert_eq!(rhom_t_fast(&pl, all, t, false), 0);
            assert_eq!(degenerate_fast(&pl, all, t), 0);
        }
        assert_eq!(par_all_fast(&pl, all), 1);
        assert_eq!(par_all_oracle(&pl, all), 1);
    }

    #[test]
    fn empty_sets_count_zero() {
        let pl = plane(7);
        let e = PointSet::empty(&pl);
        let f = PointSet::full(&pl);
        let sets = [&e, &f, &f, &f];
        let t = one(&pl);
        for m in [Method::Oracle, Method::Fast, Method::Fourier] {
            assert_eq!(count_par_t(&pl, sets, t, m).unwrap().value, 0);
        }
        assert_eq!(count_rhom_t(&pl, sets, t, false, Method::Fast).unwrap().value, 0);
        let split = par_t_fourier(&pl, [&e, &e, &e, &e], t).unwrap();
        assert_eq!(split.rounded, 0);
        assert!(split.term_i.norm() < 1e-12 && split.term_ii.norm() < 1e-12);
    }

    #[test]
    fn fourier_split_full_plane_q3() {
        let pl = plane(3);
        let f = PointSet::full(&pl);
        let split = par_t_fourier(&pl, [&f, &f, &f, &f], one(&pl)).unwrap();
        assert_eq!(split.rounded, 324);
        assert!((split.term_i - ComplexValue::new(243.0, 0.0)).norm() < COUNT_TOL);
        assert!((split.term_ii - ComplexValue::new(81.0, 0.0)).norm() < COUNT_TOL);
    }

    #[test]
    fn fourier_matches_oracle_q7() {
        let pl = plane(7);
        for seed in 0..5 {
            let s = random4(&pl, 0.5, seed);
            let t = one(&pl);
            let split = par_t_fourier(&pl, refs(&s), t).unwrap();
            assert_eq!(split.rounded, par_t_oracle(&pl, refs(&s), t));
            let par = par_all_fast(&pl, refs(&s)) as f64;
            assert!((split.term_i.re - par / 7.0).abs() < COUNT_TOL);
            assert!(split.term_i.im.abs() < COUNT_TOL && split.term_ii.im.abs() < COUNT_TOL);
        }
    }

    #[test]
    fn fourier_is_capped() {
        let pl = plane(37);
        let e = PointSet::empty(&pl);
        let err = par_t_fourier(&pl, [&e, &e, &e, &e], one(&pl)).unwrap_err();
        assert!(matches!(err, Error::FourierCap { q: 37, cap: 31 }));
    }

    #[test]
    fn fourier_at_the_cap_is_accurate() {
        let pl = plane(31);
        let f = PointSet::full(&pl);
        let t = one(&pl);
        let split = par_t_fourier(&pl, [&f, &f, &f, &f], t).unwrap();
        assert_eq!(split.rounded, par_t_fast(&pl, [&f, &f, &f, &f], t));
        let s = random4(&pl, 0.5, 11);
        let split = par_t_fourier(&pl, refs(&s), t).unwrap();
        assert_eq!(split.rounded, par_t_fast(&pl, refs(&s), t));
    }

    #[test]
    fn round_count_contract() {
        assert_eq!(round_count(ComplexValue::new(12.0000004, 1e-8)).unwrap(), 12);
        assert!(matches!(round_count(ComplexValue::new(12.01, 0.0)), Err(Error::ToleranceExceeded { .. })));
        assert!(round_count(ComplexValue::new(12.0, 1e-3)).is_err());
        assert!(round_count(ComplexValue::new(-1.0, 0.0)).is_err());
    }

    #[test]
    fn line_ap_parallelograms_factor_through_energy() {
        for q in [5u64, 7, 11] {
            let pl = plane(q);
            let xs = arithmetic_progression(pl.field(), 1, 2, 3);
            let e = gen_example_line_ap(&pl, &xs).unwrap();
            let all = [&e, &e, &e, &e];
            let energy = additive_energy(pl.field(), &xs);
            assert_eq!(par_all_fast(&pl, all), q.pow(3) * energy);
            assert_eq!(par_all_oracle(&pl, all), q.pow(3) * energy);
        }
    }

    #[test]
    fn additive_energy_of_progressions() {
        // (2n³ + n)/3 for a progression that does not wrap around.
        let f = PrimeField::new(101).unwrap();
        for n in 1..8u64 {
            let xs = arithmetic_progression(&f, 3, 5, n as usize);
            assert_eq!(additive_energy(&f, &xs), (2 * n.pow(3) + n) / 3);
        }
    }

    #[test]
    fn disjoint_middle_sets_have_no_degenerates() {
        let pl = plane(7);
        let t = one(&pl);
        let e1 = gen_random_set(&pl, 0.5, 1).unwrap();
        let e2 = PointSet::from_predicate(&pl, |p| p.x1.value() < 3);
        let e3 = PointSet::from_predicate(&pl, |p| p.x1.value() >= 3);
        let e4 = gen_random_set(&pl, 0.5, 2).unwrap();
        let sets = [&e1, &e2, &e3, &e4];
        assert_eq!(degenerate_fast(&pl, sets, t), 0);
        assert_eq!(rhom_t_fast(&pl, sets, t, true), rhom_t_fast(&pl, sets, t, false));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn counters_agree(q in prop::sample::select(vec![3u64, 5, 7, 11, 13]), seed in any::<u64>(), density in 0.0f64..=1.0, tr in 1u64..13) {
            let pl = plane(q);
            let t = pl.field().element(1 + tr % (q - 1));
            let s = random4(&pl, density, seed);
            let sets = refs(&s);
            let par_t = par_t_fast(&pl, sets, t);
            prop_assert_eq!(par_t, par_t_oracle(&pl, sets, t));
            let rhom = rhom_t_fast(&pl, sets, t, false);
            prop_assert_eq!(rhom, rhom_t_oracle(&pl, sets, t, false));
            prop_assert_eq!(rhom_t_fast(&pl, sets, t, true), rhom_t_oracle(&pl, sets, t, true));
            let deg = degenerate_fast(&pl, sets, t);
            prop_assert_eq!(deg, degenerate_oracle(&pl, sets, t));
            prop_assert_eq!(rhom - rhom_t_fast(&pl, sets, t, true), deg);
            prop_assert!(deg <= rhom);
            let (n1, n2, n3, n4) = (s[0].len() as u64, s[1].len() as u64, s[2].len() as u64, s[3].len() as u64);
            prop_assert!(par_t <= n1 * n2 * n3 * n4);
        }

        #[test]
        fn par_is_the_sum_over_radii(q in prop::sample::select(vec![3u64, 5, 7]), seed in any::<u64>(), density in 0.0f64..=1.0) {
            let pl = plane(q);
            let s = random4(&pl, density, seed);
            let sets = refs(&s);
            let by_t: u64 = pl.field().elements().map(|t| par_t_fast(&pl, sets, t)).sum();
            prop_assert_eq!(by_t, par_all_fast(&pl, sets));
            prop_assert_eq!(by_t, par_all_oracle(&pl, sets));
        }

        #[test]
        fn rhombi_are_parallelograms(q in prop::sample::select(vec![3u64, 5, 7, 11]), seed in any::<u64>(), density in 0.0f64..=1.0) {
            let pl = plane(q);
            let s = random4(&pl, density, seed);
            let sets = refs(&s);
            for t in pl.field().units() {
                prop_assert!(rhom_t_fast(&pl, sets, t, false) <= par_t_fast(&pl, sets, t));
            }
        }

        #[test]
        fn first_spectral_term_ignores_radius(q in prop::sample::select(vec![3u64, 5, 7]), seed in any::<u64>(), density in 0.0f64..=1.0) {
            let pl = plane(q);
            let s = random4(&pl, density, seed);
            let sets = refs(&s);
            let splits: Vec<FourierSplit> = pl.field().units().map(|t| par_t_fourier(&pl, sets, t).unwrap()).collect();
            for (t, split) in pl.field().units().zip(&splits) {
                prop_assert_eq!(split.rounded, par_t_oracle(&pl, sets, t));
                prop_assert!((split.term_i - splits[0].term_i).norm() < COUNT_TOL);
                prop_assert!((split.total - split.term_i - split.term_ii).norm() < COUNT_TOL);
            }
        }
    }
}
