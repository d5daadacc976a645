//! n-pods and their leg forms.
//!
//! A pod is a list of legs, each attaching a platform point `p_i` to a base
//! point `P_i` with squared length `d_i^2`. Every leg induces a linear form
//! on the ambient projective space whose zero set cuts out the poses where
//! the leg condition holds; at `h = 1` the form evaluates to the difference
//! of squared distances, at `h = 0` it degenerates to the pseudo-spherical
//! expression that no longer depends on the leg length.

use crate::error::Error;
use crate::geom::{Mat3, Vec3};
use crate::rigid::Isometry;
use crate::scalar::{RealScalar, Scalar, TolerancePolicy};
use crate::variety::{GroupCoords, IsometryPoint};
use crate::Result;

/// Platform points, base points, and squared leg lengths of equal count.
/// Empty pods are allowed; every residual function then returns an empty
/// sequence.
#[derive(Clone, PartialEq, Debug)]
pub struct Pod<R: RealScalar> {
    platform: Vec<Vec3<R>>,
    base: Vec<Vec3<R>>,
    d2: Vec<R>,
}

impl<R: RealScalar> Pod<R> {
    pub fn new(platform: Vec<Vec3<R>>, base: Vec<Vec3<R>>, d2: Vec<R>) -> Result<Self> {
        if platform.len() != base.len() || platform.len() != d2.len() {
            return Err(Error::LengthMismatch("pod"));
        }
        if d2.iter().any(|d| *d < R::zero()) {
            return Err(Error::Invalid("negative squared leg length".into()));
        }
        Ok(Pod { platform, base, d2 })
    }

    /// Pod whose leg lengths are measured in the pose `sigma`, so that
    /// `sigma` itself has all spherical residuals zero.
    pub fn from_pose(
        platform: Vec<Vec3<R>>,
        base: Vec<Vec3<R>>,
        sigma: &Isometry<R>,
    ) -> Result<Self> {
        if platform.len() != base.len() {
            return Err(Error::LengthMismatch("pod"));
        }
        let d2 = platform
            .iter()
            .zip(&base)
            .map(|(p, b)| {
                let diff = sigma.apply(p).sub(b);
                diff.dot(&diff)
            })
            .collect();
        Ok(Pod { platform, base, d2 })
    }

    pub fn len(&self) -> usize {
        self.platform.len()
    }

    pub fn is_empty(&self) -> bool {
        self.platform.is_empty()
    }

    pub fn platform(&self) -> &[Vec3<R>] {
        &self.platform
    }

    pub fn base(&self) -> &[Vec3<R>] {
        &self.base
    }

    pub fn d2(&self) -> &[R] {
        &self.d2
    }

    pub fn leg_form(&self, i: usize) -> LegForm<R> {
        leg_form(&self.platform[i], &self.base[i], &self.d2[i])
    }

    pub fn leg_forms(&self) -> Vec<LegForm<R>> {
        (0..self.len()).map(|i| self.leg_form(i)).collect()
    }

    pub fn approx(&self) -> Pod<f64> {
        Pod {
            platform: self.platform.iter().map(Vec3::approx).collect(),
            base: self.base.iter().map(Vec3::approx).collect(),
            d2: self.d2.iter().map(RealScalar::approx).collect(),
        }
    }
}

/// The linear form of one leg, stored as a coefficient vector laid out like
/// the point coordinates.
#[derive(Clone, PartialEq, Debug)]
pub struct LegForm<R: RealScalar> {
    coeffs: GroupCoords<R>,
}

impl<R: RealScalar> LegForm<R> {
    pub fn coeffs(&self) -> &GroupCoords<R> {
        &self.coeffs
    }
}

/// Builds the leg form of `(p, P, d2)`: the `h` coefficient is
/// `<p,p> + <P,P> - d2`, the matrix block is `-2 P p^t`, the `x` and `y`
/// blocks are `-2p` and `-2P`, and the `r` coefficient is one, so that
/// evaluation at an embedded pose gives the squared-distance defect.
pub fn leg_form<R: RealScalar>(p: &Vec3<R>, base: &Vec3<R>, d2: &R) -> LegForm<R> {
    let minus_two = R::from_i64(-2);
    LegForm {
        coeffs: GroupCoords::new(
            p.dot(p) + base.dot(base) - d2.clone(),
            Mat3::outer(base, p).scale(&minus_two),
            p.scale(&minus_two),
            base.scale(&minus_two),
            R::one(),
        ),
    }
}

/// Evaluates a leg form on the stored representative of a point. For points
/// normalized to `h = 1` this equals `|sigma(p) - P|^2 - d^2`.
pub fn eval_leg<S: Scalar>(form: &LegForm<S::Real>, point: &IsometryPoint<S>) -> S {
    let c = form.coeffs.to_array();
    let x = point.to_array();
    c.into_iter()
        .zip(x)
        .map(|(a, b)| S::from_real(a) * b)
        .fold(S::zero(), |acc, t| acc + t)
}

/// Squared-distance defects `|sigma(p_i) - P_i|^2 - d_i^2` of a pose.
pub fn spherical_residuals<R: RealScalar>(pod: &Pod<R>, sigma: &Isometry<R>) -> Vec<R> {
    pod.platform
        .iter()
        .zip(&pod.base)
        .zip(&pod.d2)
        .map(|((p, b), d2)| {
            let diff = sigma.apply(p).sub(b);
            diff.dot(&diff) - d2.clone()
        })
        .collect()
}

/// The boundary leg conditions `r - 2<p_i,x> - 2<y,P_i> - 2<M p_i, P_i>`,
/// one per leg. These do not involve the leg lengths. The input must be a
/// boundary point; the double backend accepts `|h|` up to the default
/// absolute tolerance.
pub fn pseudo_spherical_residuals<S: Scalar>(
    pod: &Pod<S::Real>,
    beta: &IsometryPoint<S>,
) -> Result<Vec<S>> {
    if !beta.h().is_zero_within(TolerancePolicy::default().abs_tol) {
        return Err(Error::NotBoundary);
    }
    let two = S::from_i64(2);
    Ok(pod
        .platform
        .iter()
        .zip(&pod.base)
        .map(|(p, b)| {
            let pc = p.map(|c| S::from_real(c.clone()));
            let bc = b.map(|c| S::from_real(c.clone()));
            let mp = beta.matrix().mul_vec(&pc);
            beta.r().clone()
                - two.clone() * pc.dot(beta.x())
                - two.clone() * beta.y().dot(&bc)
                - two.clone() * mp.dot(&bc)
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::boundary::{butterfly_point, collinearity_point, inversion_point};
    use crate::rigid::random_rational_isometry;
    use crate::scalar::{GaussianRational, Rational};
    use crate::variety::Side;
    use num_bigint::BigInt;
    use num_traits::{One, Zero};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(BigInt::from(n), BigInt::from(d))
    }

    fn g(re: i64, im: i64) -> GaussianRational {
        GaussianRational::new(q(re, 1), q(im, 1))
    }

    fn v(x: i64, y: i64, z: i64) -> Vec3<Rational> {
        Vec3::new(q(x, 1), q(y, 1), q(z, 1))
    }

    fn rand_q(rng: &mut ChaCha8Rng) -> Rational {
        q(rng.random_range(-8..=8), rng.random_range(1..=4))
    }

    fn rand_vec(rng: &mut ChaCha8Rng) -> Vec3<Rational> {
        Vec3::new(rand_q(rng), rand_q(rng), rand_q(rng))
    }

    #[test]
    fn constructor_validates_lengths_and_signs() {
        assert_eq!(
            Pod::new(vec![v(0, 0, 0)], vec![], vec![]).unwrap_err(),
            Error::LengthMismatch("pod")
        );
        assert!(matches!(
            Pod::new(vec![v(0, 0, 0)], vec![v(1, 0, 0)], vec![q(-1, 1)]).unwrap_err(),
            Error::Invalid(_)
        ));
        let empty = Pod::<Rational>::new(vec![], vec![], vec![]).unwrap();
        assert!(empty.is_empty());
        assert!(spherical_residuals(&empty, &Isometry::identity()).is_empty());
    }

    #[test]
    fn leg_form_pinned_coefficients() {
        let trivial = leg_form(&v(0, 0, 0), &v(0, 0, 0), &q(0, 1));
        let arr = trivial.coeffs().to_array();
        for (k, c) in arr.iter().enumerate() {
            if k == 16 {
                assert_eq!(*c, q(1, 1));
            } else {
                assert_eq!(*c, q(0, 1));
            }
        }

        let l = leg_form(&v(1, 0, 0), &v(0, 0, 0), &q(1, 1));
        let c = l.coeffs();
        assert_eq!(c.h, q(0, 1));
        assert_eq!(c.m, Mat3::zero());
        assert_eq!(c.x, v(-2, 0, 0));
        assert_eq!(c.y, v(0, 0, 0));
        assert_eq!(c.r, q(1, 1));
    }

    #[test]
    fn eval_leg_matches_squared_distance_at_identity() {
        let l = leg_form(&v(1, 0, 0), &v(3, 0, 0), &q(4, 1));
        let id = IsometryPoint::<GaussianRational>::identity();
        assert_eq!(eval_leg(&l, &id), GaussianRational::zero());
    }

    #[test]
    fn eval_leg_matches_squared_distance_for_random_poses() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for seed in 0..50u64 {
            let sigma = random_rational_isometry(seed);
            let p = rand_vec(&mut rng);
            let b = rand_vec(&mut rng);
            let d2 = rand_q(&mut rng) * rand_q(&mut rng);
            let d2 = d2.clone() * d2; // keep it non-negative
            let l = leg_form(&p, &b, &d2);
            let point = IsometryPoint::<GaussianRational>::embed(&sigma);
            let diff = sigma.apply(&p).sub(&b);
            let expected = diff.dot(&diff) - d2;
            assert_eq!(
                eval_leg(&l, &point),
                GaussianRational::from_real(expected),
                "seed {seed}"
            );
        }
    }

    #[test]
    fn every_leg_form_evaluates_to_one_at_the_vertex() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let vertex = IsometryPoint::<GaussianRational>::vertex();
        for _ in 0..10 {
            let l = leg_form(&rand_vec(&mut rng), &rand_vec(&mut rng), &rand_q(&mut rng));
            assert_eq!(eval_leg(&l, &vertex), GaussianRational::one());
        }
    }

    #[test]
    fn pseudo_spherical_pinned_values() {
        let inv = inversion_point::<GaussianRational>(&q(2, 1)).unwrap();
        let pod = Pod::new(vec![v(1, 0, 5)], vec![v(1, 0, -3)], vec![q(0, 1)]).unwrap();
        assert_eq!(
            pseudo_spherical_residuals(&pod, &inv).unwrap(),
            vec![GaussianRational::zero()]
        );

        let bf = butterfly_point::<GaussianRational>();
        let pod2 = Pod::new(vec![v(1, 1, 0)], vec![v(2, 0, 0)], vec![q(0, 1)]).unwrap();
        assert_eq!(
            pseudo_spherical_residuals(&pod2, &bf).unwrap(),
            vec![g(-4, -4)]
        );

        // platform points on the z-axis are on the carrier line of the left
        // collinearity normal form
        let coll = collinearity_point::<GaussianRational>(Side::Left);
        for c in [-7i64, 0, 3] {
            let pod3 = Pod::new(vec![v(0, 0, c)], vec![v(4, -1, 2)], vec![q(5, 1)]).unwrap();
            assert_eq!(
                pseudo_spherical_residuals(&pod3, &coll).unwrap(),
                vec![GaussianRational::zero()]
            );
        }

        // butterfly: platform on the z-axis kills the residual for any base
        let pod4 = Pod::new(vec![v(0, 0, 5)], vec![v(2, 3, 7)], vec![q(1, 1)]).unwrap();
        assert_eq!(
            pseudo_spherical_residuals(&pod4, &bf).unwrap(),
            vec![GaussianRational::zero()]
        );
        assert_eq!(eval_leg(&pod4.leg_form(0), &bf), GaussianRational::zero());
    }

    #[test]
    fn pseudo_spherical_rejects_interior_points() {
        let pod = Pod::new(vec![v(1, 0, 0)], vec![v(0, 1, 0)], vec![q(1, 1)]).unwrap();
        let id = IsometryPoint::<GaussianRational>::identity();
        assert_eq!(
            pseudo_spherical_residuals(&pod, &id).unwrap_err(),
            Error::NotBoundary
        );
    }

    #[test]
    fn pseudo_spherical_is_independent_of_leg_lengths() {
        let platform = vec![v(1, 2, 3), v(0, 1, -1)];
        let base = vec![v(-2, 0, 1), v(1, 1, 1)];
        let pod_a = Pod::new(platform.clone(), base.clone(), vec![q(1, 1), q(2, 1)]).unwrap();
        let pod_b = Pod::new(platform, base, vec![q(99, 1), q(0, 1)]).unwrap();
        let beta = inversion_point::<GaussianRational>(&q(3, 1)).unwrap();
        assert_eq!(
            pseudo_spherical_residuals(&pod_a, &beta).unwrap(),
            pseudo_spherical_residuals(&pod_b, &beta).unwrap()
        );
    }

    #[test]
    fn spherical_residuals_vanish_exactly_in_the_measuring_pose() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let platform: Vec<_> = (0..4).map(|_| rand_vec(&mut rng)).collect();
        let base: Vec<_> = (0..4).map(|_| rand_vec(&mut rng)).collect();
        let sigma = random_rational_isometry(17);
        let pod = Pod::from_pose(platform, base, &sigma).unwrap();
        assert!(spherical_residuals(&pod, &sigma)
            .iter()
            .all(|r| r.is_zero()));
        let shifted = Isometry::translation(v(1, 0, 0)).compose(&sigma);
        assert!(spherical_residuals(&pod, &shifted)
            .iter()
            .any(|r| !r.is_zero()));
    }
}
