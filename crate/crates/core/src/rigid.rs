//! Direct isometries of Euclidean 3-space.
//!
//! An isometry is stored as a pair `(m, y)` acting on points by
//! `p -> m p + y`. Construction checks that `m` is special orthogonal, so
//! every held value is a genuine rigid motion; over the rational backend the
//! check is exact.

use num_traits::Zero;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::Error;
use crate::geom::{Mat3, Vec3};
use crate::scalar::{Rational, RealScalar};
use crate::Result;

#[derive(Clone, PartialEq, Debug)]
pub struct Isometry<R: RealScalar> {
    m: Mat3<R>,
    y: Vec3<R>,
}

impl<R: RealScalar> Isometry<R> {
    /// Checks that `m` lies in the rotation group. The double backend
    /// tolerates departures up to `1e-9` per entry.
    pub fn new(m: Mat3<R>, y: Vec3<R>) -> Result<Self> {
        let gram = m.mul_mat(&m.transpose()).sub(&Mat3::identity());
        let det_err = m.det() - R::one();
        let ok = if R::EXACT {
            gram.is_zero() && det_err.is_zero()
        } else {
            gram.0.iter().flatten().all(|c| c.approx().abs() <= 1e-9)
                && det_err.approx().abs() <= 1e-9
        };
        if !ok {
            return Err(Error::Invalid("matrix is not a rotation".into()));
        }
        Ok(Isometry { m, y })
    }

    pub fn identity() -> Self {
        Isometry {
            m: Mat3::identity(),
            y: Vec3::zero(),
        }
    }

    pub fn rotation(m: Mat3<R>) -> Result<Self> {
        Isometry::new(m, Vec3::zero())
    }

    pub fn translation(y: Vec3<R>) -> Self {
        Isometry {
            m: Mat3::identity(),
            y,
        }
    }

    pub fn matrix(&self) -> &Mat3<R> {
        &self.m
    }

    pub fn translation_part(&self) -> &Vec3<R> {
        &self.y
    }

    pub fn apply(&self, p: &Vec3<R>) -> Vec3<R> {
        self.m.mul_vec(p).add(&self.y)
    }

    /// `self` after `other`: `(self.compose(&other)).apply(p)` equals
    /// `self.apply(&other.apply(p))`.
    pub fn compose(&self, other: &Self) -> Self {
        Isometry {
            m: self.m.mul_mat(&other.m),
            y: self.m.mul_vec(&other.y).add(&self.y),
        }
    }

    pub fn inverse(&self) -> Self {
        let mt = self.m.transpose();
        let y = mt.mul_vec(&self.y).neg();
        Isometry { m: mt, y }
    }

    pub fn approx(&self) -> Isometry<f64> {
        Isometry {
            m: self.m.approx(),
            y: self.y.approx(),
        }
    }
}

impl Isometry<f64> {
    /// Rotation about the z-axis by `angle` radians.
    pub fn rotation_z(angle: f64) -> Self {
        let (s, c) = angle.sin_cos();
        Isometry {
            m: Mat3::from_rows(
                Vec3::new(c, -s, 0.0),
                Vec3::new(s, c, 0.0),
                Vec3::new(0.0, 0.0, 1.0),
            ),
            y: Vec3::zero(),
        }
    }
}

/// Rotation matrix of a quaternion `q0 + q1 i + q2 j + q3 k`; any nonzero
/// quaternion works, the norm divides out. Rational input gives an exact
/// rational rotation.
pub fn rotation_from_quaternion<R: RealScalar>(q: &[R; 4]) -> Result<Mat3<R>> {
    let n = q.iter().fold(R::zero(), |acc, c| acc + c.clone() * c.clone());
    if n.is_zero() {
        return Err(Error::ZeroMatrix);
    }
    let two = R::from_i64(2);
    let sq = |k: usize| q[k].clone() * q[k].clone();
    let pr = |a: usize, b: usize| q[a].clone() * q[b].clone();
    let m = Mat3::from_rows(
        Vec3::new(
            sq(0) + sq(1) - sq(2) - sq(3),
            two.clone() * (pr(1, 2) - pr(0, 3)),
            two.clone() * (pr(1, 3) + pr(0, 2)),
        ),
        Vec3::new(
            two.clone() * (pr(1, 2) + pr(0, 3)),
            sq(0) - sq(1) + sq(2) - sq(3),
            two.clone() * (pr(2, 3) - pr(0, 1)),
        ),
        Vec3::new(
            two.clone() * (pr(1, 3) - pr(0, 2)),
            two.clone() * (pr(2, 3) + pr(0, 1)),
            sq(0) - sq(1) - sq(2) + sq(3),
        ),
    );
    Ok(m.scale(&(R::one() / n)))
}

/// Deterministic pseudo-random exact isometry: a rotation from a small
/// integer quaternion and a small rational translation. Useful for
/// conjugation and invariance tests where exactness matters.
pub fn random_rational_isometry(seed: u64) -> Isometry<Rational> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let quat = loop {
        let q: [Rational; 4] =
            std::array::from_fn(|_| Rational::from_i64(rng.random_range(-3i64..=3)));
        if !q.iter().all(|c| c.is_zero()) {
            break q;
        }
    };
    let m = rotation_from_quaternion(&quat).expect("nonzero quaternion");
    let y = Vec3(std::array::from_fn(|_| {
        let num = rng.random_range(-8i64..=8);
        let den = rng.random_range(1i64..=4);
        Rational::from_i64(num) / Rational::from_i64(den)
    }));
    Isometry::new(m, y).expect("quaternion matrix is a rotation")
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn constructor_rejects_non_rotations() {
        let shear = Mat3::from_rows(
            Vec3::new(1.0, 1.0, 0.0),
            Vec3::new(0.0, 1.0, 0.0),
            Vec3::new(0.0, 0.0, 1.0),
        );
        assert!(Isometry::new(shear, Vec3::zero()).is_err());
        // orthogonal with determinant -1
        let reflect = Mat3::from_rows(
            Vec3::new(1.0, 0.0, 0.0),
            Vec3::new(0.0, 1.0, 0.0),
            Vec3::new(0.0, 0.0, -1.0),
        );
        assert!(Isometry::new(reflect, Vec3::zero()).is_err());
    }

    #[test]
    fn compose_matches_function_composition_exactly() {
        let a = random_rational_isometry(1);
        let b = random_rational_isometry(2);
        let p = Vec3::new(q(1, 2), q(-3, 1), q(5, 7));
        assert_eq!(a.compose(&b).apply(&p), a.apply(&b.apply(&p)));
    }

    #[test]
    fn inverse_round_trip_is_exact() {
        for seed in 0..6 {
            let a = random_rational_isometry(seed);
            assert_eq!(a.compose(&a.inverse()), Isometry::identity());
            assert_eq!(a.inverse().compose(&a), Isometry::identity());
        }
    }

    #[test]
    fn rotation_z_values() {
        let r = Isometry::rotation_z(std::f64::consts::FRAC_PI_2);
        let p = r.apply(&Vec3::new(1.0, 0.0, 0.0));
        assert!(p.sub(&Vec3::new(0.0, 1.0, 0.0)).norm() < 1e-15);
        let r = Isometry::rotation_z(0.7).compose(&Isometry::rotation_z(-0.7));
        assert!(r.apply(&Vec3::new(3.0, 4.0, 5.0)).sub(&Vec3::new(3.0, 4.0, 5.0)).norm() < 1e-15);
    }

    #[test]
    fn quaternion_matrices_are_exact_rotations() {
        let m = rotation_from_quaternion(&[q(1, 1), q(2, 1), q(0, 1), q(-1, 1)]).unwrap();
        assert_eq!(m.mul_mat(&m.transpose()), Mat3::identity());
        assert_eq!(m.det(), q(1, 1));
        // unit quaternion k rotates by pi about z
        let m = rotation_from_quaternion(&[q(0, 1), q(0, 1), q(0, 1), q(1, 1)]).unwrap();
        assert_eq!(m.mul_vec(&Vec3::basis(0)), Vec3::basis(0).neg());
        assert!(rotation_from_quaternion(&[q(0, 1), q(0, 1), q(0, 1), q(0, 1)]).is_err());
    }

    #[test]
    fn random_isometry_is_deterministic_and_preserves_distance() {
        let a = random_rational_isometry(42);
        let b = random_rational_isometry(42);
        assert_eq!(a, b);
        assert_ne!(a, random_rational_isometry(43));
        let p = Vec3::new(q(1, 1), q(0, 1), q(0, 1));
        let r = Vec3::new(q(0, 1), q(1, 3), q(-2, 1));
        let d0 = p.sub(&r);
        let d1 = a.apply(&p).sub(&a.apply(&r));
        assert_eq!(d1.dot(&d1), d0.dot(&d0));
    }
}
