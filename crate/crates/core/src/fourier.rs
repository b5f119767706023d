//! The normalized Fourier transform on `F_q²`,
//! `f̂(m) = q⁻² Σ_x f(x) χ(-x·m)`, its inverse `f(x) = Σ_m χ(m·x) f̂(m)`,
//! and the closed-form spectrum of the circles `S_j`.
//!
//! Two transform routes are provided: [`transform_direct`] is the plain
//! `O(q⁴)` double loop and serves as ground truth; [`transform`] separates
//! rows and columns into 1-D transforms for `O(q³)`.

use rayon::prelude::*;
use serde::Serialize;

use crate::bounds::{BoundReport, InputsDigest};
use crate::field::FieldElement;
use crate::geometry::{Plane, Point, PointSet};
use crate::ComplexValue;

const ZERO: ComplexValue = ComplexValue::new(0.0, 0.0);

/// Fourier coefficients indexed like the points of the plane.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    q: u32,
    coeffs: Vec<ComplexValue>,
}

impl Spectrum {
    pub fn zero(plane: &Plane) -> Self {
        Spectrum { q: plane.q(), coeffs: vec![ZERO; plane.size()] }
    }

    /// Wraps a coefficient table laid out in point-index order.
    pub fn from_coeffs(plane: &Plane, coeffs: Vec<ComplexValue>) -> Self {
        assert_eq!(coeffs.len(), plane.size());
        Spectrum { q: plane.q(), coeffs }
    }

    #[inline]
    pub fn get(&self, plane: &Plane, m: Point) -> ComplexValue {
        self.coeffs[plane.index(m)]
    }

    #[inline]
    pub fn coeffs(&self) -> &[ComplexValue] {
        &self.coeffs
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    /// `Σ_m |f̂(m)|²`.
    pub fn energy(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm_sqr()).sum()
    }

    pub fn max_abs_diff(&self, other: &Spectrum) -> f64 {
        self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max)
    }
}

/// Dense `0/1` table of a set's indicator function.
pub fn indicator_values(set: &PointSet) -> Vec<f64> {
    set.indicator().iter().map(|&b| if b { 1.0 } else { 0.0 }).collect()
}

/// Reference transform: one full sum per coefficient.
pub fn transform_direct(plane: &Plane, f: &[f64]) -> Spectrum {
    assert_eq!(f.len(), plane.size());
    let q = plane.q() as usize;
    let chi = plane.field().chi_table();
    let scale = 1.0 / (q * q) as f64;
    let coeffs = (0..plane.size())
        .into_par_iter()
        .map(|mi| {
            let (m1, m2) = (mi / q, mi % q);
            let mut acc = ZERO;
            for x1 in 0..q {
                let base = x1 * m1 % q;
                for x2 in 0..q {
                    let v = f[x1 * q + x2];
                    if v != 0.0 {
                        let dot = (base + x2 * m2) % q;
                        acc += chi[(q - dot) % q] * v;
                    }
                }
            }
            acc * scale
        })
        .collect();
    Spectrum { q: plane.q(), coeffs }
}

/// Row-column transform: 1-D transforms along `x₂`, then along `x₁`.
pub fn transform(plane: &Plane, f: &[f64]) -> Spectrum {
    assert_eq!(f.len(), plane.size());
    let q = plane.q() as usize;
    let chi = plane.field().chi_table();
    let scale = 1.0 / (q * q) as f64;

    // partial[x1 * q + m2] = Σ_{x2} f(x1, x2) χ(-x2·m2)
    let partial: Vec<ComplexValue> = (0..q)
        .into_par_iter()
        .flat_map_iter(|x1| {
            let row = &f[x1 * q..(x1 + 1) * q];
            (0..q).map(move |m2| {
                let mut acc = ZERO;
                for (x2, &v) in row.iter().enumerate() {
                    if v != 0.0 {
                        acc += chi[(q - x2 * m2 % q) % q] * v;
                    }
                }
                acc
            })
        })
        .collect();

    let coeffs = (0..q)
        .into_par_iter()
        .flat_map_iter(|m1| {
            let partial = &partial;
            (0..q).map(move |m2| {
                let mut acc = ZERO;
                for x1 in 0..q {
                    acc += chi[(q - x1 * m1 % q) % q] * partial[x1 * q + m2];
                }
                acc * scale
            })
        })
        .collect();
    Spectrum { q: plane.q(), coeffs }
}

pub fn transform_set(plane: &Plane, set: &PointSet) -> Spectrum {
    plane.check(set);
    transform(plane, &indicator_values(set))
}

/// `f(x) = Σ_m χ(m·x) f̂(m)`, by the same row-column split.
pub fn inverse(plane: &Plane, s: &Spectrum) -> Vec<ComplexValue> {
    let q = plane.q() as usize;
    let chi = plane.field().chi_table();
    let c = &s.coeffs;

    // partial[m1 * q + x2] = Σ_{m2} χ(m2·x2) f̂(m1, m2)
    let partial: Vec<ComplexValue> = (0..q)
        .into_par_iter()
        .flat_map_iter(|m1| {
            (0..q).map(move |x2| (0..q).map(|m2| chi[m2 * x2 % q] * c[m1 * q + m2]).sum::<ComplexValue>())
        })
        .collect();

    (0..q)
        .into_par_iter()
        .flat_map_iter(|x1| {
            let partial = &partial;
            (0..q).map(move |x2| (0..q).map(|m1| chi[m1 * x1 % q] * partial[m1 * q + x2]).sum::<ComplexValue>())
        })
        .collect()
}

/// Evaluates `q⁻¹δ₀(m) + q⁻³ G² Σ_{r ≠ 0} χ(jr + ||m||/(4r))` term by term.
pub fn circle_spectrum_closed(plane: &Plane, j: FieldElement, m: Point) -> ComplexValue {
    let f = plane.field();
    let q = plane.q() as f64;
    let g = f.gauss_sum();
    let norm_m = plane.norm(m);
    let four = f.element(4);
    let sum: ComplexValue = f
        .units()
        .map(|r| {
            let inv_4r = f.inv(f.mul(four, r)).expect("4r is a unit for odd q");
            f.additive_character(f.add(f.mul(j, r), f.mul(norm_m, inv_4r)))
        })
        .sum();
    let delta = if m == Point::ORIGIN { 1.0 / q } else { 0.0 };
    ComplexValue::new(delta, 0.0) + g * g * sum / (q * q * q)
}

/// Largest nonzero-frequency coefficient of a circle, measured against
/// `q^{-3/2}` and `2q^{-3/2}`.
#[derive(Debug, Clone, Serialize)]
pub struct CircleDecay {
    pub q: u32,
    pub j: u32,
    /// `max_{m ≠ 0} |Ŝ_j(m)|` over the frequencies that are checked.
    pub max_coefficient: f64,
    pub argmax: Option<Point>,
    /// `max_coefficient · q^{3/2}`.
    pub scaled_max: f64,
    /// For `j = 0`, nonzero `m` with `||m|| = 0` carry a coefficient of
    /// order `q⁻¹`; they are excluded from the thresholds and recorded here.
    pub exempt_count: usize,
    pub exempt_max: Option<f64>,
    pub unit_constant: BoundReport,
    pub doubled_constant: BoundReport,
}

pub fn check_circle_decay(plane: &Plane, j: FieldElement) -> CircleDecay {
    let circle = plane.circle(j);
    let spectrum = transform_direct(plane, &indicator_values(&circle));
    let mut max = 0.0f64;
    let mut argmax = None;
    let mut exempt_count = 0;
    let mut exempt_max: Option<f64> = None;
    for m in plane.points().skip(1) {
        let v = spectrum.get(plane, m).norm();
        if j.is_zero() && plane.norm(m).is_zero() {
            exempt_count += 1;
            exempt_max = Some(exempt_max.map_or(v, |e| e.max(v)));
            continue;
        }
        if v > max || argmax.is_none() {
            max = v;
            argmax = Some(m);
        }
    }
    let q = plane.q() as f64;
    let base = q.powf(-1.5);
    let inputs = InputsDigest::radius(plane.q(), j.value());
    CircleDecay {
        q: plane.q(),
        j: j.value(),
        max_coefficient: max,
        argmax,
        scaled_max: max / base,
        exempt_count,
        exempt_max,
        unit_constant: BoundReport::new("circle_decay_constant_1", max, base, false, inputs.clone()),
        doubled_constant: BoundReport::new("circle_decay_constant_2", max, 2.0 * base, true, inputs),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::gen_random_set;
    use crate::COMPLEX_TOL;

    fn plane(q: u64) -> Plane {
        Plane::new(q).unwrap()
    }

    #[test]
    fn transform_of_full_plane_is_delta() {
        let pl = plane(5);
        let s = transform_set(&pl, &PointSet::full(&pl));
        assert!((s.get(&pl, Point::ORIGIN) - ComplexValue::new(1.0, 0.0)).norm() < COMPLEX_TOL);
        for m in pl.points().skip(1) {
            assert!(s.get(&pl, m).norm() < COMPLEX_TOL);
        }
    }

    #[test]
    fn transform_of_origin_is_flat() {
        let pl = plane(7);
        let s = transform_set(&pl, &PointSet::from_points(&pl, [Point::ORIGIN]).unwrap());
        for c in s.coeffs() {
            assert!((c - ComplexValue::new(1.0 / 49.0, 0.0)).norm() < COMPLEX_TOL);
        }
    }

    #[test]
    fn circle_coefficient_small_case() {
        // S_1 over F_3 is {(0,1),(0,2),(1,0),(2,0)}; at m = (1,0) the phases
        // are 1, 1, χ(-1), χ(-2), summing to 2 - 1 = 1.
        let pl = plane(3);
        let s1 = pl.circle(pl.field().element(1));
        let direct = transform_direct(&pl, &indicator_values(&s1));
        let c = direct.get(&pl, pl.point(1, 0));
        assert!((c - ComplexValue::new(1.0 / 9.0, 0.0)).norm() < 1e-12);
        let closed = circle_spectrum_closed(&pl, pl.field().element(1), pl.point(1, 0));
        assert!((closed - c).norm() < 1e-12);
        let at0 = circle_spectrum_closed(&pl, pl.field().element(1), Point::ORIGIN);
        assert!((at0 - ComplexValue::new(4.0 / 9.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn closed_form_isolates_delta_term() {
        for q in [3u64, 7, 13] {
            let pl = plane(q);
            let f = pl.field();
            let g = f.gauss_sum();
            for j in f.elements() {
                let at0 = circle_spectrum_closed(&pl, j, Point::ORIGIN);
                let sum: ComplexValue = f.units().map(|r| f.additive_character(f.mul(j, r))).sum();
                let rest = g * g * sum / (q * q * q) as f64;
                assert!((at0 - ComplexValue::new(1.0 / q as f64, 0.0) - rest).norm() < COMPLEX_TOL);
            }
        }
    }

    #[test]
    fn fast_transform_matches_direct() {
        for q in [3u64, 5, 7, 11, 13] {
            let pl = plane(q);
            for seed in 0..5 {
                let f = indicator_values(&gen_random_set(&pl, 0.5, seed).unwrap());
                assert!(transform(&pl, &f).max_abs_diff(&transform_direct(&pl, &f)) < COMPLEX_TOL);
            }
        }
    }

    #[test]
    fn inverse_examples() {
        let pl = plane(7);
        let zero = inverse(&pl, &Spectrum::zero(&pl));
        assert!(zero.iter().all(|c| c.norm() == 0.0));
        let mut delta = vec![ZERO; pl.size()];
        delta[0] = ComplexValue::new(1.0, 0.0);
        let one = inverse(&pl, &Spectrum::from_coeffs(&pl, delta));
        assert!(one.iter().all(|c| (c - ComplexValue::new(1.0, 0.0)).norm() < COMPLEX_TOL));
    }

    #[test]
    fn round_trip_and_plancherel() {
        for q in [3u64, 5, 7, 11, 13, 17, 19, 23, 29, 31] {
            let pl = plane(q);
            let trials = if q <= 13 { 100 } else { 10 };
            for seed in 0..trials {
                let set = gen_random_set(&pl, 0.5, seed * 31 + q).unwrap();
                let f = indicator_values(&set);
                let s = transform(&pl, &f);
                let back = inverse(&pl, &s);
                let err = back.iter().zip(&f).map(|(b, &v)| (b - ComplexValue::new(v, 0.0)).norm()).fold(0.0, f64::max);
                assert!(err < COMPLEX_TOL, "q = {q}: round trip error {err}");
                let expected = set.len() as f64 / (q as f64).powi(2);
                assert!((s.energy() - expected).abs() < COMPLEX_TOL);
                for m in pl.points() {
                    let conj = s.get(&pl, pl.neg(m)).conj();
                    assert!((s.get(&pl, m) - conj).norm() < COMPLEX_TOL);
                }
            }
        }
    }

    #[test]
    fn closed_form_matches_direct_dft_exhaustively() {
        for q in [3u64, 5, 7, 11, 13] {
            let pl = plane(q);
            for j in pl.field().elements() {
                let direct = transform_direct(&pl, &indicator_values(&pl.circle(j)));
                for m in pl.points() {
                    let closed = circle_spectrum_closed(&pl, j, m);
                    assert!((closed - direct.get(&pl, m)).norm() < COMPLEX_TOL, "q={q} j={j} m={m}");
                }
            }
        }
    }

    #[test]
    fn decay_examples() {
        let pl = plane(3);
        let r = check_circle_decay(&pl, pl.field().element(1));
        assert!(r.doubled_constant.holds);
        assert!(r.scaled_max <= 2.0);
        assert_eq!(r.exempt_count, 0);

        let pl = plane(5);
        assert!(check_circle_decay(&pl, pl.field().element(2)).doubled_constant.holds);

        // q = 7 ≡ 3 (mod 4): the only isotropic vector is 0, nothing is exempt.
        let pl = plane(7);
        let r = check_circle_decay(&pl, FieldElement::ZERO);
        assert_eq!(r.exempt_count, 0);

        // q = 13 ≡ 1 (mod 4): 2(q - 1) nonzero isotropic vectors with |Ŝ_0| = (q-1)/q².
        let pl = plane(13);
        let r = check_circle_decay(&pl, FieldElement::ZERO);
        assert_eq!(r.exempt_count, 24);
        assert!((r.exempt_max.unwrap() - 12.0 / 169.0).abs() < COMPLEX_TOL);
        assert!(r.doubled_constant.holds);
    }
}
