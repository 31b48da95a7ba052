//! The pluggable coefficient field.
//!
//! Two backends: [`Rat`] (arbitrary-precision rationals, exact) and
//! [`C64`] (double-precision complex). Every series, Fock, and operator
//! type in this crate is generic over [`Scalar`].

use std::fmt::{Debug, Display};
use std::ops::{Add, Mul, Neg, Sub};

use num::complex::Complex64;
use num::{BigInt, BigRational, One, Signed, Zero};

use crate::error::{Error, Result};

pub type Rat = BigRational;
pub type C64 = Complex64;

pub trait Scalar:
    Clone
    + PartialEq
    + Debug
    + Display
    + Send
    + Sync
    + 'static
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
{
    /// True for the exact-rational backend; comparisons are then exact and
    /// tolerances are ignored.
    const EXACT: bool;

    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn from_int(n: i64) -> Self;
    fn from_ratio(num: i64, den: i64) -> Self;

    /// Multiplicative inverse. Dividing by an exact zero is an error,
    /// never a silent NaN.
    fn inv(&self) -> Result<Self>;

    /// Integer power, negative exponents via `inv`.
    fn powi(&self, k: i64) -> Result<Self> {
        if k == 0 {
            return Ok(Self::one());
        }
        let base = if k < 0 { self.inv()? } else { self.clone() };
        let mut acc = Self::one();
        for _ in 0..k.unsigned_abs() {
            acc = acc * base.clone();
        }
        Ok(acc)
    }

    fn div(&self, other: &Self) -> Result<Self> {
        Ok(self.clone() * other.inv()?)
    }

    /// Magnitude as f64, for tolerance checks and resonance guards.
    fn abs(&self) -> f64;

    /// Square root staying inside the backend: rationals succeed only on
    /// perfect squares, complex always succeeds (principal branch).
    fn sqrt(&self) -> Result<Self>;

    /// Numeric image of an exact value; identity on the numeric backend.
    fn to_c64(&self) -> C64;
}

/// Backend-aware closeness: exact backends compare exactly and ignore
/// `tol`; the numeric backend uses |a-b| <= tol * (1 + max(|a|,|b|)).
pub fn scalar_close<S: Scalar>(a: &S, b: &S, tol: f64) -> bool {
    if S::EXACT {
        return a == b;
    }
    let diff = (a.clone() - b.clone()).abs();
    diff <= tol * (1.0 + a.abs().max(b.abs()))
}

impl Scalar for Rat {
    const EXACT: bool = true;

    fn zero() -> Self {
        <Rat as Zero>::zero()
    }
    fn one() -> Self {
        <Rat as One>::one()
    }
    fn is_zero(&self) -> bool {
        <Rat as Zero>::is_zero(self)
    }
    fn from_int(n: i64) -> Self {
        Rat::from_integer(BigInt::from(n))
    }
    fn from_ratio(num: i64, den: i64) -> Self {
        Rat::new(BigInt::from(num), BigInt::from(den))
    }

    fn inv(&self) -> Result<Self> {
        if Scalar::is_zero(self) {
            return Err(Error::DivisionByZero);
        }
        Ok(self.recip())
    }

    fn abs(&self) -> f64 {
        rat_to_f64(&Signed::abs(self))
    }

    fn sqrt(&self) -> Result<Self> {
        if self.is_negative() {
            return Err(Error::NoExactSqrt(self.to_string()));
        }
        let num = self.numer().sqrt();
        let den = self.denom().sqrt();
        if &num * &num == *self.numer() && &den * &den == *self.denom() {
            Ok(Rat::new(num, den))
        } else {
            Err(Error::NoExactSqrt(self.to_string()))
        }
    }

    fn to_c64(&self) -> C64 {
        C64::new(rat_to_f64(self), 0.0)
    }
}

fn rat_to_f64(r: &Rat) -> f64 {
    // Via quotient-and-remainder to stay accurate for big numerators.
    let (q, rem) = (r.numer() / r.denom(), r.numer() % r.denom());
    let q: f64 = format!("{q}").parse().unwrap_or(f64::NAN);
    let frac = fraction_to_f64(&rem, r.denom());
    q + frac
}

fn fraction_to_f64(num: &BigInt, den: &BigInt) -> f64 {
    let scale = BigInt::from(1i64 << 53);
    let scaled = num * &scale / den;
    let scaled: f64 = format!("{scaled}").parse().unwrap_or(f64::NAN);
    scaled / (1i64 << 53) as f64
}

impl Scalar for C64 {
    const EXACT: bool = false;

    fn zero() -> Self {
        C64::new(0.0, 0.0)
    }
    fn one() -> Self {
        C64::new(1.0, 0.0)
    }
    fn is_zero(&self) -> bool {
        self.re == 0.0 && self.im == 0.0
    }
    fn from_int(n: i64) -> Self {
        C64::new(n as f64, 0.0)
    }
    fn from_ratio(num: i64, den: i64) -> Self {
        C64::new(num as f64 / den as f64, 0.0)
    }

    fn inv(&self) -> Result<Self> {
        if self.norm() == 0.0 {
            return Err(Error::DivisionByZero);
        }
        Ok(C64::new(1.0, 0.0) / self)
    }

    fn abs(&self) -> f64 {
        self.norm()
    }

    fn sqrt(&self) -> Result<Self> {
        Ok(Complex64::sqrt(*self))
    }

    fn to_c64(&self) -> C64 {
        *self
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_close_ignores_tol() {
        let a = Rat::from_ratio(1, 3);
        let b = Rat::from_ratio(1, 3);
        assert!(scalar_close(&a, &b, 0.0));
        assert!(!scalar_close(&a, &Rat::from_ratio(1, 4), 1.0));
    }

    #[test]
    fn numeric_close_uses_relative_tol() {
        let a = C64::new(0.1, 0.0);
        let b = C64::new(0.1, 1e-14);
        assert!(scalar_close(&a, &b, 1e-10));
        assert!(!scalar_close(&C64::new(1.0, 0.0), &C64::from_int(2), 1e-10));
    }

    #[test]
    fn exact_zero_division_errors() {
        assert_eq!(Scalar::inv(&<Rat as Scalar>::zero()), Err(Error::DivisionByZero));
        assert!(Scalar::inv(&C64::new(0.0, 0.0)).is_err());
    }

    #[test]
    fn rational_sqrt_perfect_square_only() {
        assert_eq!(
            Rat::from_ratio(81, 16).sqrt().unwrap(),
            Rat::from_ratio(9, 4)
        );
        assert!(Rat::from_ratio(1, 2).sqrt().is_err());
    }

    #[test]
    fn powi_negative() {
        let x = Rat::from_ratio(2, 3);
        assert_eq!(x.powi(-2).unwrap(), Rat::from_ratio(9, 4));
    }

    #[test]
    fn big_rational_to_f64() {
        let r = Rat::from_ratio(1, 3);
        assert!((Scalar::abs(&r) - 1.0 / 3.0).abs() < 1e-12);
    }
}
