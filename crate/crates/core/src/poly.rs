//! Univariate polynomials over a scalar backend.
//!
//! Coefficients are stored in ascending order with no trailing zeros; the
//! zero polynomial has an empty coefficient list. Division and gcds are
//! meaningful over the exact backend, where the coefficients form a field
//! with decidable equality.

use num_traits::{One, Zero};
use std::ops::{Add, Mul, Neg, Sub};

use crate::error::Error;
use crate::scalar::{ComplexApprox, GaussianRational, Scalar};
use crate::Result;

#[derive(Clone, PartialEq, Debug)]
pub struct Poly<S: Scalar> {
    coeffs: Vec<S>,
}

/// Polynomial over the Gaussian rationals.
pub type GaussPoly = Poly<GaussianRational>;

impl<S: Scalar> Poly<S> {
    pub fn new(mut coeffs: Vec<S>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn constant(c: S) -> Self {
        Poly::new(vec![c])
    }

    /// The monomial t.
    pub fn t() -> Self {
        Poly::new(vec![S::zero(), S::one()])
    }

    pub fn coeffs(&self) -> &[S] {
        &self.coeffs
    }

    /// Coefficient of t^k, zero beyond the degree.
    pub fn coeff(&self, k: usize) -> S {
        self.coeffs.get(k).cloned().unwrap_or_else(S::zero)
    }

    /// None for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&S> {
        self.coeffs.last()
    }

    pub fn eval(&self, t: &S) -> S {
        let mut acc = S::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * t.clone() + c.clone();
        }
        acc
    }

    pub fn derivative(&self) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(k, c)| c.clone() * S::from_i64(k as i64))
            .collect();
        Poly::new(coeffs)
    }

    pub fn scale(&self, c: &S) -> Self {
        Poly::new(self.coeffs.iter().map(|x| x.clone() * c.clone()).collect())
    }

    /// Divides by the leading coefficient. Zero stays zero.
    pub fn monic(&self) -> Self {
        match self.leading() {
            None => Poly::new(vec![]),
            Some(lead) => {
                let inv = S::one() / lead.clone();
                self.scale(&inv)
            }
        }
    }

    /// Euclidean division; the divisor must be nonzero.
    pub fn div_rem(&self, divisor: &Self) -> Result<(Self, Self)> {
        let d_deg = divisor.degree().ok_or(Error::DivisionByZero)?;
        let d_lead = divisor.leading().unwrap().clone();
        let mut rem = self.coeffs.clone();
        if rem.len() < divisor.coeffs.len() {
            return Ok((Poly::new(vec![]), Poly::new(rem)));
        }
        let q_len = rem.len() - d_deg;
        let mut quot = vec![S::zero(); q_len];
        for k in (0..q_len).rev() {
            let c = rem[k + d_deg].clone() / d_lead.clone();
            if !c.is_zero() {
                for (j, dj) in divisor.coeffs.iter().enumerate() {
                    let t = rem[k + j].clone() - c.clone() * dj.clone();
                    rem[k + j] = t;
                }
            }
            quot[k] = c;
        }
        Ok((Poly::new(quot), Poly::new(rem)))
    }

    /// Converts coefficients to the float backend.
    pub fn approx(&self) -> Poly<ComplexApprox> {
        Poly::new(self.coeffs.iter().map(|c| c.approx()).collect())
    }
}

impl<S: Scalar> Add for Poly<S> {
    type Output = Poly<S>;
    fn add(self, rhs: Poly<S>) -> Poly<S> {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let coeffs = (0..n).map(|k| self.coeff(k) + rhs.coeff(k)).collect();
        Poly::new(coeffs)
    }
}

impl<S: Scalar> Sub for Poly<S> {
    type Output = Poly<S>;
    fn sub(self, rhs: Poly<S>) -> Poly<S> {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let coeffs = (0..n).map(|k| self.coeff(k) - rhs.coeff(k)).collect();
        Poly::new(coeffs)
    }
}

impl<S: Scalar> Neg for Poly<S> {
    type Output = Poly<S>;
    fn neg(self) -> Poly<S> {
        Poly::new(self.coeffs.into_iter().map(|c| -c).collect())
    }
}

impl<S: Scalar> Mul for Poly<S> {
    type Output = Poly<S>;
    fn mul(self, rhs: Poly<S>) -> Poly<S> {
        if self.coeffs.is_empty() || rhs.coeffs.is_empty() {
            return Poly::new(vec![]);
        }
        let mut coeffs = vec![S::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in rhs.coeffs.iter().enumerate() {
                let t = coeffs[i + j].clone() + a.clone() * b.clone();
                coeffs[i + j] = t;
            }
        }
        Poly::new(coeffs)
    }
}

impl<S: Scalar> Zero for Poly<S> {
    fn zero() -> Self {
        Poly::new(vec![])
    }
    fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }
}

impl<S: Scalar> One for Poly<S> {
    fn one() -> Self {
        Poly::constant(S::one())
    }
}

/// Monic gcd of two exact polynomials by the Euclidean algorithm, with a
/// monic normalization after every remainder step to keep coefficients small.
pub fn poly_gcd(a: &GaussPoly, b: &GaussPoly) -> GaussPoly {
    let mut a = a.monic();
    let mut b = b.monic();
    while !b.is_zero() {
        let (_, r) = a.div_rem(&b).expect("nonzero divisor");
        a = b;
        b = r.monic();
    }
    a
}

/// Monic gcd of a family; zero members are ignored. Errors with
/// [`Error::ZeroFamily`] when every member is zero.
pub fn poly_gcd_many(family: &[GaussPoly]) -> Result<GaussPoly> {
    let mut acc: Option<GaussPoly> = None;
    for p in family {
        if p.is_zero() {
            continue;
        }
        acc = Some(match acc {
            None => p.monic(),
            Some(g) => poly_gcd(&g, p),
        });
    }
    acc.ok_or(Error::ZeroFamily)
}

/// Exact roots of a polynomial of degree at most two, each distinct root
/// once. `None` when the degree is larger or a required square root does not
/// exist in the Gaussian rationals.
pub fn exact_roots_deg_le2(p: &GaussPoly) -> Option<Vec<GaussianRational>> {
    let two = GaussianRational::from_i64(2);
    let four = GaussianRational::from_i64(4);
    match p.degree() {
        None | Some(0) => Some(vec![]),
        Some(1) => {
            let root = -(p.coeff(0) / p.coeff(1));
            Some(vec![root])
        }
        Some(2) => {
            let (c0, c1, c2) = (p.coeff(0), p.coeff(1), p.coeff(2));
            let disc = &c1 * &c1 - &four * &c2 * &c0;
            if disc.is_zero() {
                return Some(vec![-(c1 / (&two * &c2))]);
            }
            let s = Scalar::exact_sqrt(&disc)?;
            let r1 = (-&c1 + &s) / (&two * &c2);
            let r2 = (-&c1 - &s) / (&two * &c2);
            Some(vec![r1, r2])
        }
        Some(_) => None,
    }
}

/// All complex roots of a float polynomial by the Durand-Kerner iteration.
/// Deterministic; close roots are merged afterwards by the caller if needed.
pub fn numeric_roots(p: &Poly<ComplexApprox>) -> Vec<ComplexApprox> {
    let n = match p.degree() {
        None | Some(0) => return vec![],
        Some(n) => n,
    };
    let monic = p.monic();
    let seed = ComplexApprox::new(0.4, 0.9);
    let mut roots: Vec<ComplexApprox> = (0..n).map(|k| seed.powu(k as u32 + 1)).collect();
    for _ in 0..500 {
        let mut shift = 0.0f64;
        for k in 0..n {
            let mut denom = ComplexApprox::new(1.0, 0.0);
            for j in 0..n {
                if j != k {
                    denom *= roots[k] - roots[j];
                }
            }
            if denom.norm() == 0.0 {
                continue;
            }
            let delta = monic.eval(&roots[k]) / denom;
            roots[k] -= delta;
            shift = shift.max(delta.norm());
        }
        if shift < 1e-14 {
            break;
        }
    }
    roots
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;
    use crate::scalar::Rational;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(BigInt::from(n), BigInt::from(d))
    }

    fn g(re: i64, im: i64) -> GaussianRational {
        GaussianRational::new(q(re, 1), q(im, 1))
    }

    fn poly(cs: &[(i64, i64)]) -> GaussPoly {
        GaussPoly::new(cs.iter().map(|&(re, im)| g(re, im)).collect())
    }

    #[test]
    fn eval_cases() {
        // t^2 + 1 at t = i is 0
        let p = poly(&[(1, 0), (0, 0), (1, 0)]);
        assert!(p.eval(&g(0, 1)).is_zero());
        // (1+i) t^2 at t = 1-i is 2 - 2i
        let p = GaussPoly::new(vec![g(0, 0), g(0, 0), g(1, 1)]);
        assert_eq!(p.eval(&g(1, -1)), g(2, -2));
        // zero polynomial evaluates to 0 everywhere
        assert!(GaussPoly::zero().eval(&g(7, 3)).is_zero());
    }

    #[test]
    fn derivative_and_degree() {
        let p = poly(&[(5, 0), (3, 0), (0, 0), (2, 0)]); // 5 + 3t + 2t^3
        assert_eq!(p.degree(), Some(3));
        assert_eq!(p.derivative(), poly(&[(3, 0), (0, 0), (6, 0)]));
        assert_eq!(GaussPoly::zero().degree(), None);
    }

    #[test]
    fn division_is_euclidean() {
        let a = poly(&[(-1, 0), (0, 0), (0, 0), (1, 0)]); // t^3 - 1
        let b = poly(&[(-1, 0), (1, 0)]); // t - 1
        let (quot, rem) = a.div_rem(&b).unwrap();
        assert!(rem.is_zero());
        assert_eq!(quot, poly(&[(1, 0), (1, 0), (1, 0)]));
        assert!(a.div_rem(&GaussPoly::zero()).is_err());
    }

    #[test]
    fn gcd_cases() {
        // gcd(t^2 - 1, t^3 - 1) = t - 1
        let a = poly(&[(-1, 0), (0, 0), (1, 0)]);
        let b = poly(&[(-1, 0), (0, 0), (0, 0), (1, 0)]);
        assert_eq!(poly_gcd_many(&[a, b]).unwrap(), poly(&[(-1, 0), (1, 0)]));
        // gcd(2t, 3t^2) = t (monic)
        let a = GaussPoly::new(vec![g(0, 0), g(2, 0)]);
        let b = GaussPoly::new(vec![g(0, 0), g(0, 0), g(3, 0)]);
        assert_eq!(poly_gcd_many(&[a, b]).unwrap(), GaussPoly::t());
        // gcd(t^2 + 1, (t - i)(t + 2)) = t - i over the Gaussian rationals
        let a = poly(&[(1, 0), (0, 0), (1, 0)]);
        let b = poly(&[(0, -2), (2, -1), (1, 0)]); // (t - i)(t + 2) = t^2 + (2-i)t - 2i
        assert_eq!(poly_gcd_many(&[a, b]).unwrap(), poly(&[(0, -1), (1, 0)]));
    }

    #[test]
    fn gcd_zero_family_is_an_error() {
        assert_eq!(
            poly_gcd_many(&[GaussPoly::zero(), GaussPoly::zero()]),
            Err(Error::ZeroFamily)
        );
        // zero members are ignored, not fatal
        let a = poly(&[(0, 0), (1, 0)]);
        assert_eq!(poly_gcd_many(&[GaussPoly::zero(), a]).unwrap(), GaussPoly::t());
    }

    #[test]
    fn gcd_divides_both_inputs() {
        use rand::Rng;
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        for _ in 0..60 {
            let rand_poly = |rng: &mut rand_chacha::ChaCha8Rng, deg: usize| {
                GaussPoly::new(
                    (0..=deg)
                        .map(|_| g(rng.random_range(-4..5), rng.random_range(-4..5)))
                        .collect(),
                )
            };
            let c = rand_poly(&mut rng, 2);
            let a = rand_poly(&mut rng, 2) * c.clone();
            let b = rand_poly(&mut rng, 2) * c.clone();
            if a.is_zero() && b.is_zero() {
                continue;
            }
            let gcd = poly_gcd_many(&[a.clone(), b.clone()]).unwrap();
            if !c.is_zero() {
                assert!(gcd.degree() >= c.degree());
            }
            for p in [a, b] {
                if !p.is_zero() {
                    let (_, rem) = p.div_rem(&gcd).unwrap();
                    assert!(rem.is_zero());
                }
            }
        }
    }

    #[test]
    fn exact_quadratic_roots() {
        // 1 + t^2 = (t - i)(t + i)
        let p = poly(&[(1, 0), (0, 0), (1, 0)]);
        let roots = exact_roots_deg_le2(&p).unwrap();
        assert_eq!(roots, vec![g(0, 1), g(0, -1)]);
        // t^2 - 2 has no Gaussian rational roots
        let p = poly(&[(-2, 0), (0, 0), (1, 0)]);
        assert!(exact_roots_deg_le2(&p).is_none());
        // (t - 1)^2: the double root appears once
        let p = poly(&[(1, 0), (-2, 0), (1, 0)]);
        assert_eq!(exact_roots_deg_le2(&p).unwrap(), vec![g(1, 0)]);
    }

    #[test]
    fn numeric_roots_of_quartic() {
        // (t^2 + 1)(t - 2)(t + 3)
        let p = poly(&[(1, 0), (0, 0), (1, 0)]) * poly(&[(-2, 0), (1, 0)]) * poly(&[(3, 0), (1, 0)]);
        let mut roots = numeric_roots(&p.approx());
        assert_eq!(roots.len(), 4);
        for (re, im) in [(-3.0, 0.0), (0.0, -1.0), (0.0, 1.0), (2.0, 0.0)] {
            let k = roots
                .iter()
                .position(|r| (r.re - re).abs() < 1e-9 && (r.im - im).abs() < 1e-9)
                .unwrap_or_else(|| panic!("missing root {re}+{im}i in {roots:?}"));
            roots.remove(k);
        }
    }
}
