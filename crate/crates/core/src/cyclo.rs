//! Exact arithmetic in `Z[α]`, where `α = exp(2πi/9)` is a primitive ninth
//! root of unity.
//!
//! Elements are stored on the power basis `1, α, …, α⁵` and kept reduced
//! modulo the minimal polynomial `x⁶ + x³ + 1`. Every quantity the crate
//! manipulates (GHZ amplitudes, operator phases, Mermin weights, eigenvalues
//! and hidden-variable sums) lives in this ring, so equality tests are exact.
//!
//! Coefficients are `i128` and every operation is overflow checked. The
//! `checked_*` methods report overflow as [`CycloError::Overflow`]; the
//! operator impls (`+`, `*`, …) panic on overflow instead of wrapping.

use std::f64::consts::PI;
use std::fmt;
use std::iter::{Product, Sum};
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Degree of the ninth cyclotomic field over `Q`.
pub const DEGREE: usize = 6;

#[derive(Debug, Error, Clone, Copy, PartialEq, Eq)]
pub enum CycloError {
    #[error("integer overflow in cyclotomic arithmetic")]
    Overflow,
    #[error("cyclotomic integer is not divisible by {0}")]
    NotDivisible(i128),
    #[error("division by zero")]
    DivisionByZero,
}

/// A power `α^e` of the primitive ninth root of unity, `e` taken mod 9.
///
/// Multiplying phases adds exponents. `ω = α³` is [`PhaseExponent::OMEGA`].
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(into = "u8", try_from = "u8")]
pub struct PhaseExponent(u8);

impl PhaseExponent {
    pub const ONE: Self = Self(0);
    pub const ALPHA: Self = Self(1);
    pub const OMEGA: Self = Self(3);
    pub const OMEGA_SQUARED: Self = Self(6);

    /// Canonical phase for any integer exponent.
    pub const fn new(e: i64) -> Self {
        Self(e.rem_euclid(9) as u8)
    }

    /// The cube root of unity `ω^m`.
    pub const fn omega_pow(m: i64) -> Self {
        Self::new(3 * m)
    }

    pub const fn value(self) -> u8 {
        self.0
    }

    /// Whether this phase is one of `1, ω, ω²`.
    pub const fn is_cube_root(self) -> bool {
        self.0.is_multiple_of(3)
    }

    /// For a cube root of unity `ω^m`, returns `m ∈ {0,1,2}`.
    pub const fn omega_index(self) -> Option<u8> {
        if self.is_cube_root() {
            Some(self.0 / 3)
        } else {
            None
        }
    }

    /// Complex conjugate (multiplicative inverse) of the phase.
    pub const fn inverse(self) -> Self {
        Self::new(-(self.0 as i64))
    }

    pub const fn pow(self, k: i64) -> Self {
        Self::new(self.0 as i64 * k.rem_euclid(9))
    }

    pub fn to_cyclotomic(self) -> Cyclotomic {
        Cyclotomic::alpha_pow(self.0 as i64)
    }
}

impl Add for PhaseExponent {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Self((self.0 + rhs.0) % 9)
    }
}

impl Sub for PhaseExponent {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        PhaseExponent::new(self.0 as i64 - rhs.0 as i64)
    }
}

impl Sum for PhaseExponent {
    fn sum<I: Iterator<Item = Self>>(iter: I) -> Self {
        iter.fold(Self::ONE, Add::add)
    }
}

impl From<PhaseExponent> for u8 {
    fn from(p: PhaseExponent) -> u8 {
        p.0
    }
}

impl TryFrom<u8> for PhaseExponent {
    type Error = String;
    fn try_from(e: u8) -> Result<Self, String> {
        if e < 9 {
            Ok(Self(e))
        } else {
            Err(format!("phase exponent {e} out of range 0..9"))
        }
    }
}

impl fmt::Display for PhaseExponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.0 {
            0 => write!(f, "1"),
            1 => write!(f, "α"),
            e => write!(f, "α^{e}"),
        }
    }
}

/// An element `Σ cⱼ αʲ` (j = 0..5) of `Z[α]` in reduced form.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Cyclotomic {
    coeffs: [i128; DEGREE],
}

impl Cyclotomic {
    pub const ZERO: Self = Self { coeffs: [0; DEGREE] };
    pub const ONE: Self = Self {
        coeffs: [1, 0, 0, 0, 0, 0],
    };

    /// Builds an element from power-basis coefficients. Six coefficients are
    /// already reduced, so no rewriting happens.
    pub const fn from_coeffs(coeffs: [i128; DEGREE]) -> Self {
        Self { coeffs }
    }

    pub const fn from_int(n: i128) -> Self {
        Self {
            coeffs: [n, 0, 0, 0, 0, 0],
        }
    }

    pub const fn alpha() -> Self {
        Self {
            coeffs: [0, 1, 0, 0, 0, 0],
        }
    }

    pub const fn omega() -> Self {
        Self {
            coeffs: [0, 0, 0, 1, 0, 0],
        }
    }

    /// `α^e` for any integer `e`.
    pub const fn alpha_pow(e: i64) -> Self {
        let e = e.rem_euclid(9) as usize;
        let mut coeffs = [0; DEGREE];
        if e < DEGREE {
            coeffs[e] = 1;
        } else {
            // α^(j+6) = -α^(j+3) - α^j
            coeffs[e - 3] = -1;
            coeffs[e - 6] = -1;
        }
        Self { coeffs }
    }

    /// Reduces a raw coefficient list (coefficient `i` multiplies `α^i`, any
    /// length) to canonical form modulo `x⁶ + x³ + 1`.
    pub fn reduce(raw: &[i128]) -> Result<Self, CycloError> {
        let mut work = raw.to_vec();
        for j in (DEGREE..work.len()).rev() {
            let c = work[j];
            if c == 0 {
                continue;
            }
            work[j] = 0;
            work[j - 3] = work[j - 3].checked_sub(c).ok_or(CycloError::Overflow)?;
            work[j - 6] = work[j - 6].checked_sub(c).ok_or(CycloError::Overflow)?;
        }
        let mut coeffs = [0; DEGREE];
        for (dst, src) in coeffs.iter_mut().zip(work) {
            *dst = src;
        }
        Ok(Self { coeffs })
    }

    pub const fn coeffs(&self) -> [i128; DEGREE] {
        self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs == [0; DEGREE]
    }

    /// The value as a rational integer, when it is one.
    pub fn to_integer(&self) -> Option<i128> {
        if self.coeffs[1..].iter().all(|&c| c == 0) {
            Some(self.coeffs[0])
        } else {
            None
        }
    }

    /// Whether the element is real, i.e. fixed by complex conjugation.
    pub fn is_real(&self) -> bool {
        self.conj() == *self
    }

    /// If the element is `±α^e`, returns `(sign, e)`.
    pub fn as_signed_phase(&self) -> Option<(i8, PhaseExponent)> {
        (0..9).find_map(|e| {
            let p = Self::alpha_pow(e);
            if *self == p {
                Some((1, PhaseExponent::new(e)))
            } else if *self == -p {
                Some((-1, PhaseExponent::new(e)))
            } else {
                None
            }
        })
    }

    /// If the element is `α^e`, returns `e`.
    pub fn as_phase(&self) -> Option<PhaseExponent> {
        match self.as_signed_phase() {
            Some((1, e)) => Some(e),
            _ => None,
        }
    }

    pub fn checked_add(&self, rhs: &Self) -> Result<Self, CycloError> {
        let mut coeffs = [0; DEGREE];
        for (i, c) in coeffs.iter_mut().enumerate() {
            *c = self.coeffs[i]
                .checked_add(rhs.coeffs[i])
                .ok_or(CycloError::Overflow)?;
        }
        Ok(Self { coeffs })
    }

    pub fn checked_sub(&self, rhs: &Self) -> Result<Self, CycloError> {
        self.checked_add(&rhs.checked_neg()?)
    }

    pub fn checked_neg(&self) -> Result<Self, CycloError> {
        let mut coeffs = [0; DEGREE];
        for (dst, &src) in coeffs.iter_mut().zip(&self.coeffs) {
            *dst = src.checked_neg().ok_or(CycloError::Overflow)?;
        }
        Ok(Self { coeffs })
    }

    pub fn checked_mul(&self, rhs: &Self) -> Result<Self, CycloError> {
        let mut raw = [0i128; 2 * DEGREE - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in rhs.coeffs.iter().enumerate() {
                let term = a.checked_mul(b).ok_or(CycloError::Overflow)?;
                raw[i + j] = raw[i + j].checked_add(term).ok_or(CycloError::Overflow)?;
            }
        }
        Self::reduce(&raw)
    }

    pub fn checked_scale(&self, n: i128) -> Result<Self, CycloError> {
        let mut coeffs = [0; DEGREE];
        for (dst, &src) in coeffs.iter_mut().zip(&self.coeffs) {
            *dst = src.checked_mul(n).ok_or(CycloError::Overflow)?;
        }
        Ok(Self { coeffs })
    }

    /// Exact division by a rational integer. The power basis is an integral
    /// basis of `Z[α]`, so divisibility is coefficient-wise.
    pub fn checked_div_int(&self, n: i128) -> Result<Self, CycloError> {
        if n == 0 {
            return Err(CycloError::DivisionByZero);
        }
        let mut coeffs = [0; DEGREE];
        for (dst, &src) in coeffs.iter_mut().zip(&self.coeffs) {
            if src % n != 0 {
                return Err(CycloError::NotDivisible(n));
            }
            *dst = src / n;
        }
        Ok(Self { coeffs })
    }

    pub fn checked_pow(&self, mut exp: u32) -> Result<Self, CycloError> {
        let mut base = *self;
        let mut acc = Self::ONE;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc.checked_mul(&base)?;
            }
            exp >>= 1;
            if exp > 0 {
                base = base.checked_mul(&base)?;
            }
        }
        Ok(acc)
    }

    /// Multiplication by `α^e`, which never overflows beyond a sign flip.
    pub fn mul_phase(&self, phase: PhaseExponent) -> Result<Self, CycloError> {
        self.checked_mul(&phase.to_cyclotomic())
    }

    /// Complex conjugation, `α^j ↦ α^(9-j)`.
    pub fn conj(&self) -> Self {
        let mut raw = [0i128; 9];
        raw[0] = self.coeffs[0];
        for j in 1..DEGREE {
            raw[9 - j] = self.coeffs[j];
        }
        Self::reduce(&raw).expect("conjugation only moves coefficients")
    }

    /// `a · conj(a)`, the squared complex modulus as an element of the
    /// real subfield.
    pub fn checked_norm_squared(&self) -> Result<Self, CycloError> {
        self.checked_mul(&self.conj())
    }

    pub fn norm_squared(&self) -> Self {
        self.checked_norm_squared()
            .expect("overflow in cyclotomic norm")
    }

    /// Numerical embedding with `α ↦ exp(2πi/9)`.
    pub fn to_complex(&self) -> Complex64 {
        self.coeffs
            .iter()
            .enumerate()
            .map(|(j, &c)| Complex64::from_polar(c as f64, 2.0 * PI * j as f64 / 9.0))
            .sum()
    }
}

impl From<i128> for Cyclotomic {
    fn from(n: i128) -> Self {
        Self::from_int(n)
    }
}

impl From<PhaseExponent> for Cyclotomic {
    fn from(p: PhaseExponent) -> Self {
        p.to_cyclotomic()
    }
}

impl Add for Cyclotomic {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        self.checked_add(&rhs).expect("overflow in cyclotomic addition")
    }
}

impl Sub for Cyclotomic {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        self.checked_sub(&rhs).expect("overflow in cyclotomic subtraction")
    }
}

impl Neg for Cyclotomic {
    type Output = Self;
    fn neg(self) -> Self {
        self.checked_neg().expect("overflow in cyclotomic negation")
    }
}

impl Mul for Cyclotomic {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        self.checked_mul(&rhs).expect("overflow in cyclotomic multiplication")
    }
}

impl Sum for Cyclotomic {
    fn sum<I: Iterator<Item = Self>>(iter: I) -> Self {
        iter.fold(Self::ZERO, Add::add)
    }
}

impl Product for Cyclotomic {
    fn product<I: Iterator<Item = Self>>(iter: I) -> Self {
        iter.fold(Self::ONE, Mul::mul)
    }
}

impl fmt::Display for Cyclotomic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (j, &c) in self.coeffs.iter().enumerate() {
            if c == 0 {
                continue;
            }
            let sign = if c < 0 { "-" } else { "+" };
            if first {
                if c < 0 {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            let mag = c.unsigned_abs();
            match (j, mag) {
                (0, m) => write!(f, "{m}")?,
                (1, 1) => write!(f, "α")?,
                (1, m) => write!(f, "{m}α")?,
                (j, 1) => write!(f, "α^{j}")?,
                (j, m) => write!(f, "{m}α^{j}")?,
            }
        }
        Ok(())
    }
}

/// Serialized as the six power-basis coefficients.
impl Serialize for Cyclotomic {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        self.coeffs.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Cyclotomic {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let coeffs = <[i128; DEGREE]>::deserialize(deserializer)?;
        Ok(Self { coeffs })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn a(e: i64) -> Cyclotomic {
        Cyclotomic::alpha_pow(e)
    }

    fn omega() -> Cyclotomic {
        Cyclotomic::omega()
    }

    #[test]
    fn reduce_examples() {
        let mut raw = [0i128; 9];
        raw[6] = 1;
        assert_eq!(
            Cyclotomic::reduce(&raw).unwrap().coeffs(),
            [-1, 0, 0, -1, 0, 0]
        );

        let mut raw = [0i128; 9];
        raw[0] = 1;
        raw[3] = 1;
        raw[6] = 1;
        assert!(Cyclotomic::reduce(&raw).unwrap().is_zero());

        let mut raw = [0i128; 10];
        raw[9] = 1;
        assert_eq!(Cyclotomic::reduce(&raw).unwrap(), Cyclotomic::ONE);
    }

    #[test]
    fn reduce_reports_overflow() {
        let mut raw = [0i128; 9];
        raw[0] = i128::MIN;
        raw[6] = 1;
        assert_eq!(Cyclotomic::reduce(&raw), Err(CycloError::Overflow));
    }

    #[test]
    fn mul_examples() {
        assert_eq!(a(4) * a(5), Cyclotomic::ONE);
        assert_eq!(omega() * a(6), Cyclotomic::ONE);
        let x = Cyclotomic::ONE + a(2);
        assert_eq!(x * x, Cyclotomic::from_coeffs([1, 0, 2, 0, 1, 0]));
    }

    #[test]
    fn mul_reports_overflow() {
        let big = Cyclotomic::from_int(i128::MAX / 2);
        assert_eq!(big.checked_mul(&big), Err(CycloError::Overflow));
        let nearly_max = big.checked_scale(2).unwrap();
        assert_eq!(big.checked_add(&nearly_max), Err(CycloError::Overflow));
    }

    #[test]
    fn conj_examples() {
        assert_eq!(Cyclotomic::alpha().conj(), a(8));
        assert_eq!(Cyclotomic::from_int(-7).conj(), Cyclotomic::from_int(-7));
        assert_eq!(omega().conj(), a(6));
    }

    #[test]
    fn norm_squared_examples() {
        let four_plus_w2 = Cyclotomic::from_int(4) + a(6);
        assert_eq!(four_plus_w2.norm_squared().to_integer(), Some(13));
        assert_eq!(omega().norm_squared().to_integer(), Some(1));
        let m0 = Cyclotomic::ONE + Cyclotomic::from_int(7) * a(6) + omega();
        assert_eq!(m0.norm_squared().to_integer(), Some(36));
    }

    #[test]
    fn to_complex_examples() {
        let z = Cyclotomic::alpha().to_complex();
        let forty = 40f64.to_radians();
        assert!((z.re - forty.cos()).abs() < 1e-12);
        assert!((z.im - forty.sin()).abs() < 1e-12);

        let big_a = (Cyclotomic::ONE + a(6) * a(2)).to_complex().norm();
        assert!((big_a - 1.8794).abs() < 1e-4);
        assert!((big_a - 2.0 * (PI / 9.0).cos()).abs() < 1e-12);
        let c = (Cyclotomic::ONE + omega() * a(2)).to_complex().norm();
        assert!((c - 0.3473).abs() < 1e-4);
        assert!((c - 2.0 * (4.0 * PI / 9.0).cos()).abs() < 1e-12);
    }

    #[test]
    fn roots_of_unity_identities() {
        assert!((Cyclotomic::ONE + omega() + a(6)).is_zero());
        assert_eq!(Cyclotomic::alpha().checked_pow(9).unwrap(), Cyclotomic::ONE);
        assert_eq!(omega().checked_pow(3).unwrap(), Cyclotomic::ONE);
        for e in 0..9 {
            assert_eq!(PhaseExponent::new(e).to_cyclotomic(), Cyclotomic::alpha().checked_pow(e as u32).unwrap());
        }
    }

    #[test]
    fn exact_division() {
        let x = Cyclotomic::from_coeffs([3, -6, 0, 9, 0, 3]);
        assert_eq!(x.checked_div_int(3).unwrap(), Cyclotomic::from_coeffs([1, -2, 0, 3, 0, 1]));
        assert_eq!(x.checked_div_int(2), Err(CycloError::NotDivisible(2)));
        assert_eq!(x.checked_div_int(0), Err(CycloError::DivisionByZero));
    }

    #[test]
    fn phase_helpers() {
        assert_eq!(PhaseExponent::new(-2), PhaseExponent::new(7));
        assert_eq!(PhaseExponent::OMEGA.omega_index(), Some(1));
        assert_eq!(PhaseExponent::ALPHA.omega_index(), None);
        assert_eq!((-a(4)).as_signed_phase(), Some((-1, PhaseExponent::new(4))));
        assert_eq!(a(6).as_phase(), Some(PhaseExponent::OMEGA_SQUARED));
        assert_eq!(Cyclotomic::from_int(2).as_phase(), None);
    }

    #[test]
    fn display() {
        assert_eq!(Cyclotomic::ZERO.to_string(), "0");
        assert_eq!(Cyclotomic::from_coeffs([1, 0, 2, -1, 0, 0]).to_string(), "1 + 2α^2 - α^3");
        assert_eq!(Cyclotomic::from_coeffs([0, -1, 0, 0, 0, 3]).to_string(), "-α + 3α^5");
    }

    fn small() -> impl Strategy<Value = Cyclotomic> {
        proptest::array::uniform6(-1_000_000i128..1_000_000).prop_map(Cyclotomic::from_coeffs)
    }

    proptest! {
        #[test]
        fn ring_laws(x in small(), y in small(), z in small()) {
            prop_assert_eq!(x * y, y * x);
            prop_assert_eq!((x * y) * z, x * (y * z));
            prop_assert_eq!(x * (y + z), x * y + x * z);
            prop_assert_eq!(x + (y - x), y);
        }

        #[test]
        fn conj_is_involutive_automorphism(x in small(), y in small()) {
            prop_assert_eq!(x.conj().conj(), x);
            prop_assert_eq!((x * y).conj(), x.conj() * y.conj());
            prop_assert_eq!((x + y).conj(), x.conj() + y.conj());
        }

        #[test]
        fn norm_is_multiplicative_and_real(x in small(), y in small()) {
            let nx = x.norm_squared();
            prop_assert!(nx.is_real());
            prop_assert_eq!((x * y).norm_squared(), nx * y.norm_squared());
        }

        #[test]
        fn embedding_is_homomorphism(x in small(), y in small()) {
            let (cx, cy) = (x.to_complex(), y.to_complex());
            let prod = (x * y).to_complex();
            let expect = cx * cy;
            // cancellation in the embedding is bounded by the coefficient l1 norms
            let l1 = |c: &Cyclotomic| c.coeffs().iter().map(|v| v.abs() as f64).sum::<f64>().max(1.0);
            let scale = l1(&x) * l1(&y);
            prop_assert!((prod - expect).norm() / scale < 1e-10);
            let sum = (x + y).to_complex();
            prop_assert!((sum - (cx + cy)).norm() / (l1(&x) + l1(&y)) < 1e-10);
            let n = x.norm_squared().to_complex();
            prop_assert!((n.re - cx.norm_sqr()).abs() / (l1(&x) * l1(&x)) < 1e-10);
        }
    }
}
