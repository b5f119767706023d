//! Prime-field arithmetic with precomputed character tables.
//!
//! [`PrimeField`] owns the modulus `q` together with the additive character
//! `χ(a) = exp(2πi·a/q)`, the quadratic character `η` and the table of
//! multiplicative inverses. All tables are built once; afterwards the context
//! is immutable and can be shared freely between threads.

use std::f64::consts::TAU;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ComplexValue;

/// Largest supported modulus (the largest prime below 2^15).
pub const MAX_MODULUS: u32 = 32749;

/// Canonical residue in `0..q`.
///
/// Elements do not carry their modulus; arithmetic goes through the owning
/// [`PrimeField`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct FieldElement(u32);

impl FieldElement {
    pub const ZERO: FieldElement = FieldElement(0);

    #[inline]
    pub fn value(self) -> u32 {
        self.0
    }

    #[inline]
    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Binary field operation selector for [`PrimeField::arith`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
}

/// The prime field `F_q`, q an odd prime.
#[derive(Debug, Clone)]
pub struct PrimeField {
    q: u32,
    chi: Vec<ComplexValue>,
    eta: Vec<i8>,
    inv: Vec<u32>,
    gauss: ComplexValue,
}

/// Returns true when `n` is prime.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n.is_multiple_of(2) {
        return n == 2;
    }
    let mut d = 3;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

impl PrimeField {
    /// Builds the field context. Rejects even, composite and oversized moduli.
    pub fn new(q: u64) -> Result<Self> {
        if q < 3 || !is_prime(q) {
            return Err(Error::InvalidModulus(q));
        }
        if q > MAX_MODULUS as u64 {
            return Err(Error::ModulusTooLarge(q));
        }
        let q = q as u32;
        let n = q as usize;

        let mut chi = vec![ComplexValue::new(1.0, 0.0); n];
        for a in 1..=n / 2 {
            let (s, c) = (TAU * a as f64 / q as f64).sin_cos();
            chi[a] = ComplexValue::new(c, s);
            chi[n - a] = ComplexValue::new(c, -s);
        }

        let mut eta = vec![-1i8; n];
        eta[0] = 0;
        for a in 1..n {
            eta[(a * a) % n] = 1;
        }

        let mut inv = vec![0u32; n];
        for a in 1..q {
            if inv[a as usize] == 0 {
                let b = mod_pow(a, q - 2, q);
                inv[a as usize] = b;
                inv[b as usize] = a;
            }
        }

        let gauss = (0..n).map(|a| chi[a] * eta[a] as f64).sum();

        Ok(PrimeField { q, chi, eta, inv, gauss })
    }

    #[inline]
    pub fn modulus(&self) -> u32 {
        self.q
    }

    /// Reduces an arbitrary integer into the field.
    #[inline]
    pub fn element(&self, v: u64) -> FieldElement {
        FieldElement((v % self.q as u64) as u32)
    }

    /// Reduces a signed integer into the field.
    #[inline]
    pub fn element_signed(&self, v: i64) -> FieldElement {
        FieldElement(v.rem_euclid(self.q as i64) as u32)
    }

    /// Iterates over all `q` elements in increasing order.
    pub fn elements(&self) -> impl Iterator<Item = FieldElement> {
        (0..self.q).map(FieldElement)
    }

    /// Iterates over the nonzero elements.
    pub fn units(&self) -> impl Iterator<Item = FieldElement> {
        (1..self.q).map(FieldElement)
    }

    #[inline]
    pub fn add(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        let s = a.0 + b.0;
        FieldElement(if s >= self.q { s - self.q } else { s })
    }

    #[inline]
    pub fn sub(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        FieldElement(if a.0 >= b.0 { a.0 - b.0 } else { a.0 + self.q - b.0 })
    }

    #[inline]
    pub fn neg(&self, a: FieldElement) -> FieldElement {
        FieldElement(if a.0 == 0 { 0 } else { self.q - a.0 })
    }

    #[inline]
    pub fn mul(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        FieldElement(a.0 * b.0 % self.q)
    }

    pub fn arith(&self, a: FieldElement, b: FieldElement, op: ArithOp) -> FieldElement {
        match op {
            ArithOp::Add => self.add(a, b),
            ArithOp::Sub => self.sub(a, b),
            ArithOp::Mul => self.mul(a, b),
        }
    }

    pub fn inv(&self, a: FieldElement) -> Result<FieldElement> {
        if a.is_zero() {
            return Err(Error::ZeroInverse);
        }
        Ok(FieldElement(self.inv[a.0 as usize]))
    }

    /// `η(a) ∈ {-1, 0, 1}`.
    #[inline]
    pub fn quadratic_character(&self, a: FieldElement) -> i8 {
        self.eta[a.0 as usize]
    }

    /// `χ(a) = exp(2πi·a/q)`.
    #[inline]
    pub fn additive_character(&self, a: FieldElement) -> ComplexValue {
        self.chi[a.0 as usize]
    }

    /// Raw character table, indexed by residue.
    #[inline]
    pub fn chi_table(&self) -> &[ComplexValue] {
        &self.chi
    }

    #[inline]
    pub fn eta_table(&self) -> &[i8] {
        &self.eta
    }

    /// The Gauss sum `Σ_a η(a)χ(a)`.
    pub fn gauss_sum(&self) -> ComplexValue {
        self.gauss
    }

    /// `η(-1)`: `+1` when `q ≡ 1 (mod 4)`, `-1` otherwise.
    pub fn eta_minus_one(&self) -> i8 {
        self.quadratic_character(FieldElement(self.q - 1))
    }
}

fn mod_pow(base: u32, mut exp: u32, q: u32) -> u32 {
    let q = q as u64;
    let mut acc = 1u64;
    let mut b = base as u64 % q;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * b % q;
        }
        b = b * b % q;
        exp >>= 1;
    }
    acc as u32
}

#[cfg(test)]
mod tests {
    use super::*;

    const SMALL_PRIMES: [u64; 10] = [3, 5, 7, 11, 13, 17, 19, 23, 29, 31];

    fn f(q: u64) -> PrimeField {
        PrimeField::new(q).unwrap()
    }

    #[test]
    fn rejects_bad_moduli() {
        for q in [0, 1, 2, 4, 9, 15, 21, 32768] {
            assert!(matches!(PrimeField::new(q), Err(Error::InvalidModulus(_))), "q = {q}");
        }
        assert!(matches!(PrimeField::new(32771), Err(Error::ModulusTooLarge(_))));
        assert!(PrimeField::new(32749).is_ok());
    }

    #[test]
    fn arith_examples() {
        let f3 = f(3);
        assert_eq!(f3.arith(f3.element(2), f3.element(2), ArithOp::Add).value(), 1);
        let f7 = f(7);
        assert_eq!(f7.arith(f7.element(3), f7.element(5), ArithOp::Mul).value(), 1);
        let f5 = f(5);
        assert_eq!(f5.arith(f5.element(0), f5.element(4), ArithOp::Sub).value(), 1);
    }

    #[test]
    fn arith_matches_integers_exhaustively() {
        for q in [3u64, 5, 7, 11, 13] {
            let fq = f(q);
            for a in 0..q {
                for b in 0..q {
                    let (x, y) = (fq.element(a), fq.element(b));
                    assert_eq!(fq.add(x, y).value() as u64, (a + b) % q);
                    assert_eq!(fq.sub(x, y).value() as u64, (a + q - b) % q);
                    assert_eq!(fq.mul(x, y).value() as u64, a * b % q);
                }
                assert_eq!(fq.neg(fq.element(a)).value() as u64, (q - a) % q);
            }
        }
    }

    #[test]
    fn inverse_examples() {
        let f3 = f(3);
        assert_eq!(f3.inv(f3.element(2)).unwrap().value(), 2);
        let f7 = f(7);
        assert_eq!(f7.inv(f7.element(3)).unwrap().value(), 5);
        let f13 = f(13);
        // scan oracle
        let expected = (1..13u32).find(|b| 4 * b % 13 == 1).unwrap();
        assert_eq!(expected, 10);
        assert_eq!(f13.inv(f13.element(4)).unwrap().value(), expected);
        assert!(matches!(f13.inv(FieldElement::ZERO), Err(Error::ZeroInverse)));
    }

    #[test]
    fn inverse_table_is_complete() {
        for q in SMALL_PRIMES {
            let fq = f(q);
            for a in fq.units() {
                assert_eq!(fq.mul(a, fq.inv(a).unwrap()).value(), 1);
            }
        }
    }

    #[test]
    fn quadratic_character_examples() {
        assert_eq!(f(3).quadratic_character(FieldElement(2)), -1);
        assert_eq!(f(5).quadratic_character(FieldElement(4)), 1);
        assert_eq!(f(7).quadratic_character(FieldElement(0)), 0);
    }

    #[test]
    fn quadratic_character_is_euler_criterion() {
        for q in SMALL_PRIMES {
            let fq = f(q);
            let q32 = q as u32;
            for a in fq.units() {
                let e = mod_pow(a.value(), (q32 - 1) / 2, q32);
                let expect = if e == 1 { 1 } else { -1 };
                assert_eq!(fq.quadratic_character(a), expect);
            }
            assert_eq!(fq.eta_table().iter().map(|&v| v as i32).sum::<i32>(), 0);
        }
    }

    #[test]
    fn quadratic_character_is_multiplicative() {
        for q in SMALL_PRIMES {
            let fq = f(q);
            for a in fq.units() {
                for b in fq.units() {
                    assert_eq!(
                        fq.quadratic_character(fq.mul(a, b)),
                        fq.quadratic_character(a) * fq.quadratic_character(b)
                    );
                }
            }
        }
    }

    #[test]
    fn additive_character_examples() {
        let f3 = f(3);
        assert_eq!(f3.additive_character(FieldElement::ZERO), ComplexValue::new(1.0, 0.0));
        let w = f3.additive_character(FieldElement(1));
        assert!((w.re + 0.5).abs() < 1e-15);
        assert!((w.im - 3f64.sqrt() / 2.0).abs() < 1e-15);
    }

    #[test]
    fn additive_character_is_a_homomorphism() {
        for q in SMALL_PRIMES {
            let fq = f(q);
            for a in fq.elements() {
                assert!((fq.additive_character(a).norm() - 1.0).abs() < 1e-12);
                for b in fq.elements() {
                    let lhs = fq.additive_character(fq.add(a, b));
                    let rhs = fq.additive_character(a) * fq.additive_character(b);
                    assert!((lhs - rhs).norm() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn character_orthogonality() {
        for q in SMALL_PRIMES {
            let fq = f(q);
            for s in fq.elements() {
                let total: ComplexValue = fq.elements().map(|a| fq.additive_character(fq.mul(a, s))).sum();
                let expect = if s.is_zero() { q as f64 } else { 0.0 };
                assert!((total - ComplexValue::new(expect, 0.0)).norm() < 1e-9);
            }
        }
    }

    #[test]
    fn gauss_sum_small_cases() {
        // direct summation over a in {0, 1, 2}: η = (0, 1, -1)
        let f3 = f(3);
        let g = f3.gauss_sum();
        let direct = f3.additive_character(FieldElement(1)) - f3.additive_character(FieldElement(2));
        assert!((g - direct).norm() < 1e-12);
        assert!(g.re.abs() < 1e-12 && (g.im - 3f64.sqrt()).abs() < 1e-12);

        let g5 = f(5).gauss_sum();
        assert!((g5 * g5 - ComplexValue::new(5.0, 0.0)).norm() < 1e-9);
        let g7 = f(7).gauss_sum();
        assert!((g7 * g7 - ComplexValue::new(-7.0, 0.0)).norm() < 1e-9);
    }

    #[test]
    fn gauss_sum_square_is_signed_modulus() {
        for q in SMALL_PRIMES.iter().copied().chain([101, 1009, 32749]) {
            let fq = f(q);
            let g = fq.gauss_sum();
            let tol = 1e-9 * (q as f64).max(1.0);
            assert!((g.norm_sqr() - q as f64).abs() < tol);
            let expected = ComplexValue::new(fq.eta_minus_one() as f64 * q as f64, 0.0);
            assert!((g * g - expected).norm() < tol, "q = {q}");
        }
    }
}
