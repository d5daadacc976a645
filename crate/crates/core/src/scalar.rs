//! Scalar backends.
//!
//! All geometry in this crate is written against two small traits:
//! [`RealScalar`] for the real field a backend is built on, and [`Scalar`]
//! for the complex field on top of it. There are exactly two instantiations:
//!
//! * exact: [`Rational`] and [`GaussianRational`], arbitrary-precision
//!   rationals and Gaussian rationals; equality is decidable and every
//!   identity is certified exactly;
//! * approximate: `f64` and [`ComplexApprox`], complex doubles; zero tests go
//!   through a [`TolerancePolicy`].
//!
//! The bilinear dot products used throughout the crate never conjugate, so
//! both backends share the same formulas.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_complex::Complex;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::Error;
use crate::Result;

/// Arbitrary-precision rational number, always reduced, denominator positive.
pub type Rational = BigRational;

/// Element of the field of Gaussian rationals.
pub type GaussianRational = Complex<Rational>;

/// Complex double used by the approximate backend.
pub type ComplexApprox = Complex<f64>;

/// Commutative ring operations shared by scalars and polynomials.
pub trait Ring:
    Clone
    + PartialEq
    + fmt::Debug
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
    + Zero
    + One
{
}

impl<T> Ring for T where
    T: Clone
        + PartialEq
        + fmt::Debug
        + Add<Output = T>
        + Sub<Output = T>
        + Mul<Output = T>
        + Neg<Output = T>
        + Zero
        + One
{
}

/// Real field underlying a backend.
pub trait RealScalar:
    Ring + Div<Output = Self> + PartialOrd + Signed + fmt::Display + 'static
{
    /// Whether arithmetic and equality are exact.
    const EXACT: bool;

    fn from_i64(v: i64) -> Self;
    fn from_rational(q: &Rational) -> Self;
    /// Conversion from a double; the exact backend takes the binary value
    /// exactly. Panics on non-finite input.
    fn from_f64_approx(x: f64) -> Self;
    /// Nearest double.
    fn approx(&self) -> f64;
    /// Zero test; exact backends ignore the tolerance.
    fn is_zero_within(&self, tol: f64) -> bool;
    /// Square root inside the field, if one exists there.
    fn exact_sqrt(&self) -> Option<Self>;
}

impl RealScalar for f64 {
    const EXACT: bool = false;

    fn from_i64(v: i64) -> Self {
        v as f64
    }

    fn from_rational(q: &Rational) -> Self {
        q.to_f64().unwrap_or(f64::NAN)
    }

    fn from_f64_approx(x: f64) -> Self {
        x
    }

    fn approx(&self) -> f64 {
        *self
    }

    fn is_zero_within(&self, tol: f64) -> bool {
        self.abs() <= tol
    }

    fn exact_sqrt(&self) -> Option<Self> {
        if *self >= 0.0 {
            Some(self.sqrt())
        } else {
            None
        }
    }
}

impl RealScalar for Rational {
    const EXACT: bool = true;

    fn from_i64(v: i64) -> Self {
        Rational::from_integer(BigInt::from(v))
    }

    fn from_rational(q: &Rational) -> Self {
        q.clone()
    }

    fn from_f64_approx(x: f64) -> Self {
        rational_from_f64(x).expect("finite value")
    }

    fn approx(&self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }

    fn is_zero_within(&self, _tol: f64) -> bool {
        self.is_zero()
    }

    fn exact_sqrt(&self) -> Option<Self> {
        if self.is_negative() {
            return None;
        }
        let n = perfect_sqrt(self.numer())?;
        let d = perfect_sqrt(self.denom())?;
        Some(Rational::new(n, d))
    }
}

fn perfect_sqrt(n: &BigInt) -> Option<BigInt> {
    if n.is_negative() {
        return None;
    }
    let r = n.sqrt();
    if &(&r * &r) == n {
        Some(r)
    } else {
        None
    }
}

/// Complex field of a backend.
pub trait Scalar: Ring + Div<Output = Self> + fmt::Display + 'static {
    type Real: RealScalar;

    /// Whether arithmetic and equality are exact.
    const EXACT: bool;

    fn new(re: Self::Real, im: Self::Real) -> Self;
    fn re(&self) -> Self::Real;
    fn im(&self) -> Self::Real;
    fn conj(&self) -> Self;
    /// The imaginary unit.
    fn i() -> Self;
    fn from_real(r: Self::Real) -> Self;

    fn from_rational(q: &Rational) -> Self {
        Self::from_real(Self::Real::from_rational(q))
    }

    fn from_i64(v: i64) -> Self {
        Self::from_real(Self::Real::from_i64(v))
    }

    /// Squared magnitude re^2 + im^2; exactly comparable in both backends.
    fn mag2(&self) -> Self::Real;

    fn abs_approx(&self) -> f64 {
        self.mag2().approx().sqrt()
    }

    fn approx(&self) -> ComplexApprox;
    fn is_finite_val(&self) -> bool;
    /// Zero test; the exact backend ignores the tolerance.
    fn is_zero_within(&self, tol: f64) -> bool;
    /// Square root inside the field, if one exists there.
    fn exact_sqrt(&self) -> Option<Self>;
}

impl Scalar for GaussianRational {
    type Real = Rational;

    const EXACT: bool = true;

    fn new(re: Rational, im: Rational) -> Self {
        Complex::new(re, im)
    }

    fn re(&self) -> Rational {
        self.re.clone()
    }

    fn im(&self) -> Rational {
        self.im.clone()
    }

    fn conj(&self) -> Self {
        Complex::new(self.re.clone(), -self.im.clone())
    }

    fn i() -> Self {
        Complex::new(Rational::zero(), Rational::one())
    }

    fn from_real(r: Rational) -> Self {
        Complex::new(r, Rational::zero())
    }

    fn mag2(&self) -> Rational {
        &self.re * &self.re + &self.im * &self.im
    }

    fn approx(&self) -> ComplexApprox {
        ComplexApprox::new(self.re.approx(), self.im.approx())
    }

    fn is_finite_val(&self) -> bool {
        true
    }

    fn is_zero_within(&self, _tol: f64) -> bool {
        self.is_zero()
    }

    fn exact_sqrt(&self) -> Option<Self> {
        gaussian_sqrt(self)
    }
}

/// Square root of a Gaussian rational inside the Gaussian rationals.
///
/// Solves (a + bi)^2 = c + di. A solution exists iff |z|^2 is a rational
/// square N^2 and (c + N)/2 is again a rational square.
fn gaussian_sqrt(z: &GaussianRational) -> Option<GaussianRational> {
    let two = Rational::from_i64(2);
    if z.is_zero() {
        return Some(GaussianRational::zero());
    }
    if z.im.is_zero() {
        if let Some(a) = z.re.exact_sqrt() {
            return Some(GaussianRational::from_real(a));
        }
        let b = (-z.re.clone()).exact_sqrt()?;
        return Some(GaussianRational::new(Rational::zero(), b));
    }
    let n = Scalar::mag2(z).exact_sqrt()?;
    let a = ((&z.re + &n) / &two).exact_sqrt()?;
    // z.im != 0 forces a != 0 here.
    let b = &z.im / &(&two * &a);
    let root = GaussianRational::new(a, b);
    if &(&root * &root) == z {
        Some(root)
    } else {
        None
    }
}

impl Scalar for ComplexApprox {
    type Real = f64;

    const EXACT: bool = false;

    fn new(re: f64, im: f64) -> Self {
        Complex::new(re, im)
    }

    fn re(&self) -> f64 {
        self.re
    }

    fn im(&self) -> f64 {
        self.im
    }

    fn conj(&self) -> Self {
        Complex::new(self.re, -self.im)
    }

    fn i() -> Self {
        Complex::new(0.0, 1.0)
    }

    fn from_real(r: f64) -> Self {
        Complex::new(r, 0.0)
    }

    fn mag2(&self) -> f64 {
        self.norm_sqr()
    }

    fn approx(&self) -> ComplexApprox {
        *self
    }

    fn is_finite_val(&self) -> bool {
        self.re.is_finite() && self.im.is_finite()
    }

    fn is_zero_within(&self, tol: f64) -> bool {
        self.norm() <= tol
    }

    fn exact_sqrt(&self) -> Option<Self> {
        Some(self.sqrt())
    }
}

/// Absolute and relative tolerances for floating-point zero and equality
/// tests. The exact backend ignores it.
#[derive(Debug, Clone, PartialEq)]
pub struct TolerancePolicy {
    pub abs_tol: f64,
    pub rel_tol: f64,
}

impl Default for TolerancePolicy {
    fn default() -> Self {
        TolerancePolicy {
            abs_tol: 1e-9,
            rel_tol: 1e-9,
        }
    }
}

impl TolerancePolicy {
    pub fn new(abs_tol: f64, rel_tol: f64) -> Result<Self> {
        if !(abs_tol.is_finite() && rel_tol.is_finite()) || abs_tol < 0.0 || rel_tol < 0.0 {
            return Err(Error::InvalidTolerance);
        }
        Ok(TolerancePolicy { abs_tol, rel_tol })
    }

    /// Uniform tolerance for both the absolute and the relative part.
    pub fn uniform(tol: f64) -> Result<Self> {
        Self::new(tol, tol)
    }

    /// Threshold for a quantity living at the given scale.
    pub fn threshold(&self, scale: f64) -> f64 {
        self.abs_tol + self.rel_tol * scale.abs()
    }

    pub fn is_zero(&self, value: f64, scale: f64) -> bool {
        value.abs() <= self.threshold(scale)
    }

    pub fn close(&self, a: f64, b: f64) -> bool {
        (a - b).abs() <= self.threshold(a.abs().max(b.abs()))
    }
}

/// Renders a rational as `p/q`, omitting the denominator when it is one.
pub fn format_rational(q: &Rational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// Parses a rational from `p/q`, integer, or decimal notation (optionally
/// with a decimal exponent). Decimal inputs convert exactly.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("invalid rational `{s}`"));
    if s.is_empty() {
        return Err(bad());
    }
    if let Some((num, den)) = s.split_once('/') {
        let n: BigInt = num.trim().parse().map_err(|_| bad())?;
        let d: BigInt = den.trim().parse().map_err(|_| bad())?;
        if d.is_zero() {
            return Err(Error::Parse(format!("zero denominator in `{s}`")));
        }
        return Ok(Rational::new(n, d));
    }
    let (mantissa, exponent) = match s.split_once(['e', 'E']) {
        Some((m, e)) => {
            let exp: i64 = e.parse().map_err(|_| bad())?;
            (m, exp)
        }
        None => (s, 0),
    };
    let (sign, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (-1, rest),
        None => (1, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = match digits.split_once('.') {
        Some((i, f)) => (i, f),
        None => (digits, ""),
    };
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(bad());
    }
    let all: String = format!("{int_part}{frac_part}");
    if !all.chars().all(|c| c.is_ascii_digit()) {
        return Err(bad());
    }
    let numer: BigInt = if all.is_empty() {
        BigInt::zero()
    } else {
        all.parse().map_err(|_| bad())?
    };
    let ten = BigInt::from(10);
    let shift = exponent - frac_part.len() as i64;
    let mut value = Rational::from_integer(numer * BigInt::from(sign));
    if shift >= 0 {
        value *= Rational::from_integer(ten.pow(shift as u32));
    } else {
        value /= Rational::from_integer(ten.pow((-shift) as u32));
    }
    Ok(value)
}

/// Exact rational value of a finite double.
pub fn rational_from_f64(x: f64) -> Result<Rational> {
    Rational::from_float(x).ok_or(Error::NonFinite)
}
