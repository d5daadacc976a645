//! The projective model of the isometry group and its compactification.
//!
//! A point has seventeen homogeneous coordinates
//! `(h : m11 .. m33 : x1 x2 x3 : y1 y2 y3 : r)` with the matrix part stored
//! row-major. A direct isometry `p -> M p + y` embeds with `h = 1`,
//! `x = -M^t y` and `r = <y, y>`; the closure adds the boundary hyperplane
//! `h = 0`. Membership is cut out by twenty-one quadratic generators, listed
//! in [`GroupCoords::residual_entries`].
//!
//! [`GroupCoords`] carries the raw multilinear formulas over any [`Ring`],
//! so the same code runs on exact scalars, complex doubles, and polynomial
//! coordinates of one-parameter motions. [`IsometryPoint`] wraps them into a
//! normalized projective point over a [`Scalar`] backend.

use crate::error::Error;
use crate::geom::{Mat3, Vec3};
use crate::rigid::Isometry;
use crate::scalar::{RealScalar, Ring, Scalar};
use crate::Result;

/// Which side a group element acts on.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Side {
    Left,
    Right,
}

/// Raw seventeen-coordinate tuple over an arbitrary commutative ring.
#[derive(Clone, PartialEq, Debug)]
pub struct GroupCoords<T> {
    pub h: T,
    pub m: Mat3<T>,
    pub x: Vec3<T>,
    pub y: Vec3<T>,
    pub r: T,
}

/// Names of the twenty-one defining generators, in report order.
pub const GENERATOR_NAMES: [&str; 21] = [
    "MMt-h2(0,0)",
    "MMt-h2(0,1)",
    "MMt-h2(0,2)",
    "MMt-h2(1,1)",
    "MMt-h2(1,2)",
    "MMt-h2(2,2)",
    "MtM-h2(0,0)",
    "MtM-h2(0,1)",
    "MtM-h2(0,2)",
    "MtM-h2(1,1)",
    "MtM-h2(1,2)",
    "MtM-h2(2,2)",
    "det-h3",
    "Mty+hx(0)",
    "Mty+hx(1)",
    "Mty+hx(2)",
    "Mx+hy(0)",
    "Mx+hy(1)",
    "Mx+hy(2)",
    "xx-rh",
    "yy-rh",
];

impl<T: Ring> GroupCoords<T> {
    pub fn new(h: T, m: Mat3<T>, x: Vec3<T>, y: Vec3<T>, r: T) -> Self {
        GroupCoords { h, m, x, y, r }
    }

    pub fn zero() -> Self {
        GroupCoords {
            h: T::zero(),
            m: Mat3::zero(),
            x: Vec3::zero(),
            y: Vec3::zero(),
            r: T::zero(),
        }
    }

    pub fn all_zero(&self) -> bool {
        self.to_array().iter().all(|c| c.is_zero())
    }

    /// Fixed coordinate order: h, matrix row-major, x, y, r.
    pub fn to_array(&self) -> [T; 17] {
        let g = self;
        [
            g.h.clone(),
            g.m.0[0][0].clone(),
            g.m.0[0][1].clone(),
            g.m.0[0][2].clone(),
            g.m.0[1][0].clone(),
            g.m.0[1][1].clone(),
            g.m.0[1][2].clone(),
            g.m.0[2][0].clone(),
            g.m.0[2][1].clone(),
            g.m.0[2][2].clone(),
            g.x.0[0].clone(),
            g.x.0[1].clone(),
            g.x.0[2].clone(),
            g.y.0[0].clone(),
            g.y.0[1].clone(),
            g.y.0[2].clone(),
            g.r.clone(),
        ]
    }

    pub fn from_array(a: [T; 17]) -> Self {
        let [h, m00, m01, m02, m10, m11, m12, m20, m21, m22, x0, x1, x2, y0, y1, y2, r] = a;
        GroupCoords {
            h,
            m: Mat3([[m00, m01, m02], [m10, m11, m12], [m20, m21, m22]]),
            x: Vec3([x0, x1, x2]),
            y: Vec3([y0, y1, y2]),
            r,
        }
    }

    pub fn map<U: Ring>(&self, mut f: impl FnMut(&T) -> U) -> GroupCoords<U> {
        GroupCoords {
            h: f(&self.h),
            m: self.m.map(&mut f),
            x: self.x.map(&mut f),
            y: self.y.map(&mut f),
            r: f(&self.r),
        }
    }

    pub fn scale(&self, c: &T) -> Self {
        self.map(|v| v.clone() * c.clone())
    }

    /// Values of the twenty-one defining generators, paired with
    /// [`GENERATOR_NAMES`] in order. All vanish exactly on points of the
    /// model, including the boundary.
    pub fn residual_entries(&self) -> Vec<(&'static str, T)> {
        let h2 = self.h.clone() * self.h.clone();
        let h3 = h2.clone() * self.h.clone();
        let mmt = self.m.mul_mat(&self.m.transpose());
        let mtm = self.m.transpose().mul_mat(&self.m);
        let mut out = Vec::with_capacity(21);
        let mut k = 0usize;
        let mut push = |v: T| {
            out.push((GENERATOR_NAMES[k], v));
            k += 1;
        };
        for gram in [&mmt, &mtm] {
            for (i, j) in [(0, 0), (0, 1), (0, 2), (1, 1), (1, 2), (2, 2)] {
                let mut v = gram.at(i, j).clone();
                if i == j {
                    v = v - h2.clone();
                }
                push(v);
            }
        }
        push(self.m.det() - h3);
        let mty_hx = self.m.transpose().mul_vec(&self.y).add(&self.x.scale(&self.h));
        for k3 in 0..3 {
            push(mty_hx.0[k3].clone());
        }
        let mx_hy = self.m.mul_vec(&self.x).add(&self.y.scale(&self.h));
        for k3 in 0..3 {
            push(mx_hy.0[k3].clone());
        }
        push(self.x.dot(&self.x) - self.r.clone() * self.h.clone());
        push(self.y.dot(&self.y) - self.r.clone() * self.h.clone());
        out
    }

    /// Bilinear product extending the group multiplication. On embedded
    /// group elements it matches composition; elsewhere all seventeen
    /// entries may vanish, which callers must treat as undefined.
    pub fn product(&self, o: &Self) -> Self {
        let two = T::one() + T::one();
        GroupCoords {
            h: self.h.clone() * o.h.clone(),
            m: self.m.mul_mat(&o.m),
            x: o.m.transpose().mul_vec(&self.x).add(&o.x.scale(&self.h)),
            y: self.y.scale(&o.h).add(&self.m.mul_vec(&o.y)),
            r: self.r.clone() * o.h.clone() + o.r.clone() * self.h.clone()
                - two * self.x.dot(&o.y),
        }
    }

    /// Left multiplication by the rotation with matrix `mp`.
    pub fn act_left_rotation(&self, mp: &Mat3<T>) -> Self {
        GroupCoords {
            h: self.h.clone(),
            m: mp.mul_mat(&self.m),
            x: self.x.clone(),
            y: mp.mul_vec(&self.y),
            r: self.r.clone(),
        }
    }

    /// Right multiplication by the rotation with matrix `mp`.
    pub fn act_right_rotation(&self, mp: &Mat3<T>) -> Self {
        GroupCoords {
            h: self.h.clone(),
            m: self.m.mul_mat(mp),
            x: mp.transpose().mul_vec(&self.x),
            y: self.y.clone(),
            r: self.r.clone(),
        }
    }

    /// Left multiplication by the translation by `s`.
    pub fn act_left_translation(&self, s: &Vec3<T>) -> Self {
        let two = T::one() + T::one();
        GroupCoords {
            h: self.h.clone(),
            m: self.m.clone(),
            x: self.x.sub(&self.m.transpose().mul_vec(s)),
            y: s.scale(&self.h).add(&self.y),
            r: self.h.clone() * s.dot(s) + self.r.clone() + two * s.dot(&self.y),
        }
    }

    /// Right multiplication by the translation by `t`.
    pub fn act_right_translation(&self, t: &Vec3<T>) -> Self {
        let two = T::one() + T::one();
        GroupCoords {
            h: self.h.clone(),
            m: self.m.clone(),
            x: self.x.sub(&t.scale(&self.h)),
            y: self.y.add(&self.m.mul_vec(t)),
            r: self.r.clone() + self.h.clone() * t.dot(t) - two * self.x.dot(t),
        }
    }

    /// Conjugation-style two-sided action by group elements given as
    /// rotation matrix and translation vector: left factor applied as
    /// rotation then translation, right factor as translation then rotation.
    pub fn act_rigid(&self, m: &Mat3<T>, t: &Vec3<T>, side: Side) -> Self {
        match side {
            Side::Left => self.act_left_rotation(m).act_left_translation(t),
            Side::Right => self.act_right_translation(t).act_right_rotation(m),
        }
    }
}

/// Residual values of the defining generators at a point, in scalar form.
#[derive(Clone, Debug)]
pub struct ResidualReport<S: Scalar> {
    entries: Vec<(&'static str, S)>,
}

impl<S: Scalar> ResidualReport<S> {
    pub fn entries(&self) -> &[(&'static str, S)] {
        &self.entries
    }

    /// Magnitude of the worst generator.
    pub fn max_abs(&self) -> f64 {
        self.entries
            .iter()
            .map(|(_, v)| v.abs_approx())
            .fold(0.0, f64::max)
    }

    /// Exact vanishing of every generator. Meaningful for the exact backend;
    /// for doubles it requires literal zeros.
    pub fn all_zero(&self) -> bool {
        self.entries.iter().all(|(_, v)| v.is_zero())
    }

    /// Names of generators whose magnitude exceeds `tol`.
    pub fn violated(&self, tol: f64) -> Vec<&'static str> {
        self.entries
            .iter()
            .filter(|(_, v)| !v.is_zero_within(tol))
            .map(|(n, _)| *n)
            .collect()
    }
}

/// Normalized projective point of the model's ambient space.
///
/// The constructor rescales: the exact backend makes the first nonzero
/// coordinate (in the fixed order) equal to one, the double backend divides
/// by the coordinate of largest magnitude. Stored coordinates are therefore
/// canonical representatives, and serialization is deterministic.
#[derive(Clone, PartialEq, Debug)]
pub struct IsometryPoint<S: Scalar> {
    coords: GroupCoords<S>,
}

impl<S: Scalar> IsometryPoint<S> {
    pub fn new(coords: GroupCoords<S>) -> Result<Self> {
        let arr = coords.to_array();
        if !S::EXACT && arr.iter().any(|c| !c.is_finite_val()) {
            return Err(Error::NonFinite);
        }
        let pivot = if S::EXACT {
            arr.iter().find(|c| !c.is_zero()).cloned()
        } else {
            // strict comparison keeps the first coordinate on ties, so the
            // representative does not depend on iteration quirks
            let mut best: Option<&S> = None;
            let mut best_mag = 0.0f64;
            for c in arr.iter() {
                let m = c.mag2().approx();
                if m > best_mag {
                    best_mag = m;
                    best = Some(c);
                }
            }
            best.cloned()
        };
        let pivot = pivot.ok_or(Error::ZeroPoint)?;
        let inv = S::one() / pivot;
        Ok(IsometryPoint {
            coords: coords.scale(&inv),
        })
    }

    pub fn from_array(a: [S; 17]) -> Result<Self> {
        Self::new(GroupCoords::from_array(a))
    }

    pub fn coords(&self) -> &GroupCoords<S> {
        &self.coords
    }

    pub fn to_array(&self) -> [S; 17] {
        self.coords.to_array()
    }

    pub fn h(&self) -> &S {
        &self.coords.h
    }

    pub fn matrix(&self) -> &Mat3<S> {
        &self.coords.m
    }

    pub fn x(&self) -> &Vec3<S> {
        &self.coords.x
    }

    pub fn y(&self) -> &Vec3<S> {
        &self.coords.y
    }

    pub fn r(&self) -> &S {
        &self.coords.r
    }

    /// Image of a direct isometry under the group embedding.
    pub fn embed(iso: &Isometry<S::Real>) -> Self {
        let m: Mat3<S> = iso.matrix().map(|c| S::from_real(c.clone()));
        let y: Vec3<S> = iso.translation_part().map(|c| S::from_real(c.clone()));
        let x = m.transpose().mul_vec(&y).neg();
        let r = y.dot(&y);
        IsometryPoint::new(GroupCoords::new(S::one(), m, x, y, r))
            .expect("embedded point is nonzero")
    }

    pub fn identity() -> Self {
        Self::embed(&Isometry::identity())
    }

    /// The distinguished boundary point with all coordinates but `r` zero.
    pub fn vertex() -> Self {
        IsometryPoint::new(GroupCoords::new(
            S::zero(),
            Mat3::zero(),
            Vec3::zero(),
            Vec3::zero(),
            S::one(),
        ))
        .expect("vertex is nonzero")
    }

    pub fn residuals(&self) -> ResidualReport<S> {
        ResidualReport {
            entries: self.coords.residual_entries(),
        }
    }

    /// Errors with the violated-generator condition unless every generator
    /// vanishes within `tol` (exactly, for the exact backend).
    pub fn check_on_variety(&self, tol: f64) -> Result<()> {
        let rep = self.residuals();
        let ok = if S::EXACT {
            rep.all_zero()
        } else {
            rep.max_abs() <= tol
        };
        if ok {
            Ok(())
        } else {
            Err(Error::NotOnVariety)
        }
    }

    pub fn is_boundary(&self, tol: f64) -> bool {
        self.coords.h.is_zero_within(tol)
    }

    /// Projective product; errors when all seventeen coordinates vanish.
    pub fn product(&self, other: &Self) -> Result<Self> {
        let p = self.coords.product(&other.coords);
        if p.all_zero() {
            return Err(Error::UndefinedProduct);
        }
        IsometryPoint::new(p)
    }

    /// One-sided action of a group element.
    pub fn act(&self, sigma: &Isometry<S::Real>, side: Side) -> Self {
        let m: Mat3<S> = sigma.matrix().map(|c| S::from_real(c.clone()));
        let t: Vec3<S> = sigma.translation_part().map(|c| S::from_real(c.clone()));
        let coords = self.coords.act_rigid(&m, &t, side);
        IsometryPoint::new(coords).expect("group action preserves nonzero points")
    }

    /// Projective equality: all two-by-two minors of the coordinate pair
    /// vanish. The exact backend decides exactly; doubles compare within
    /// `tol` relative to the normalized representatives.
    pub fn proj_eq(&self, other: &Self, tol: f64) -> bool {
        let a = self.to_array();
        let b = other.to_array();
        for i in 0..17 {
            for j in (i + 1)..17 {
                let minor = a[i].clone() * b[j].clone() - a[j].clone() * b[i].clone();
                if !minor.is_zero_within(tol) {
                    return false;
                }
            }
        }
        true
    }

    /// Conversion to the double backend.
    pub fn approx(&self) -> IsometryPoint<crate::scalar::ComplexApprox> {
        IsometryPoint::new(self.coords.map(|c| c.approx()))
            .expect("nonzero point stays nonzero")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rigid::random_rational_isometry;
    use crate::scalar::{ComplexApprox, GaussianRational, Rational};
    use num_bigint::BigInt;
    use num_traits::{One, Zero};

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(BigInt::from(n), BigInt::from(d))
    }

    fn g(re: i64, im: i64) -> GaussianRational {
        GaussianRational::new(q(re, 1), q(im, 1))
    }

    type EP = IsometryPoint<GaussianRational>;

    fn embedded(seed: u64) -> EP {
        EP::embed(&random_rational_isometry(seed))
    }

    #[test]
    fn embedded_points_satisfy_all_generators_exactly() {
        for seed in 0..8 {
            let p = embedded(seed);
            let rep = p.residuals();
            assert_eq!(rep.entries().len(), 21);
            assert!(rep.all_zero(), "seed {seed}: {:?}", rep.violated(0.0));
        }
        assert!(EP::identity().residuals().all_zero());
        assert!(EP::vertex().residuals().all_zero());
    }

    #[test]
    fn product_matches_group_composition() {
        for seed in 0..5 {
            let a = random_rational_isometry(seed);
            let b = random_rational_isometry(seed + 100);
            let lhs = EP::embed(&a).product(&EP::embed(&b)).unwrap();
            let rhs = EP::embed(&a.compose(&b));
            assert!(lhs.proj_eq(&rhs, 0.0));
        }
    }

    #[test]
    fn product_with_inverse_is_identity() {
        let a = random_rational_isometry(7);
        let p = EP::embed(&a).product(&EP::embed(&a.inverse())).unwrap();
        assert!(p.proj_eq(&EP::identity(), 0.0));
    }

    #[test]
    fn closed_form_actions_agree_with_products() {
        // the one-sided closed forms are linear in the point, so check them
        // on arbitrary points of the ambient space, not only on the model
        let arbitrary = |s: u64| {
            use rand::Rng;
            use rand::SeedableRng;
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(s);
            EP::from_array(std::array::from_fn(|_| {
                g(rng.random_range(-5..6), rng.random_range(-5..6))
            }))
            .unwrap()
        };
        for seed in 0..5 {
            let p = arbitrary(seed);
            let sigma = random_rational_isometry(seed + 20);
            let emb = EP::embed(&sigma);
            let left = p.act(&sigma, Side::Left);
            assert!(left.proj_eq(&emb.product(&p).unwrap(), 0.0));
            let right = p.act(&sigma, Side::Right);
            assert!(right.proj_eq(&p.product(&emb).unwrap(), 0.0));
        }
    }

    #[test]
    fn action_round_trips() {
        let p = embedded(3);
        let sigma = random_rational_isometry(4);
        for side in [Side::Left, Side::Right] {
            let back = p.act(&sigma, side).act(&sigma.inverse(), side);
            assert!(back.proj_eq(&p, 0.0));
        }
    }

    #[test]
    fn squaring_a_nilpotent_boundary_point_is_undefined() {
        // (0 : M : 0 : 0 : 0) with M = [[1,i,0],[i,-1,0],[0,0,0]] squares to zero
        let m = Mat3([
            [g(1, 0), g(0, 1), g(0, 0)],
            [g(0, 1), g(-1, 0), g(0, 0)],
            [g(0, 0), g(0, 0), g(0, 0)],
        ]);
        let p = IsometryPoint::new(GroupCoords::new(
            GaussianRational::zero(),
            m,
            Vec3::zero(),
            Vec3::zero(),
            GaussianRational::zero(),
        ))
        .unwrap();
        assert!(p.residuals().all_zero());
        assert_eq!(p.product(&p), Err(Error::UndefinedProduct));
    }

    #[test]
    fn normalization_pivots() {
        // exact: first nonzero coordinate becomes one
        let mut a: [GaussianRational; 17] = std::array::from_fn(|_| GaussianRational::zero());
        a[2] = g(0, 3);
        a[16] = g(5, 1);
        let p = EP::from_array(a).unwrap();
        let arr = p.to_array();
        assert!(arr[2].is_one());
        assert_eq!(arr[16], g(5, 1) / g(0, 3));

        // float: the largest coordinate becomes one
        let mut b: [ComplexApprox; 17] = std::array::from_fn(|_| ComplexApprox::zero());
        b[0] = ComplexApprox::new(0.5, 0.0);
        b[16] = ComplexApprox::new(0.0, -4.0);
        let p = IsometryPoint::new(GroupCoords::from_array(b)).unwrap();
        let arr = p.to_array();
        assert_eq!(arr[16], ComplexApprox::one());
        assert_eq!(arr[0], ComplexApprox::new(0.5, 0.0) / ComplexApprox::new(0.0, -4.0));
    }

    #[test]
    fn zero_point_and_non_finite_are_rejected() {
        let z: [GaussianRational; 17] = std::array::from_fn(|_| GaussianRational::zero());
        assert_eq!(EP::from_array(z), Err(Error::ZeroPoint));
        let mut b: [ComplexApprox; 17] = std::array::from_fn(|_| ComplexApprox::zero());
        b[3] = ComplexApprox::new(f64::NAN, 0.0);
        assert_eq!(
            IsometryPoint::new(GroupCoords::from_array(b)),
            Err(Error::NonFinite)
        );
    }

    #[test]
    fn projective_equality_ignores_scale() {
        let p = embedded(9);
        let scaled = IsometryPoint::new(p.coords().scale(&g(2, 7))).unwrap();
        assert!(p.proj_eq(&scaled, 0.0));
        assert!(!p.proj_eq(&EP::identity(), 0.0));
        let pf = p.approx();
        let scaled_f = IsometryPoint::new(pf.coords().scale(&ComplexApprox::new(-0.3, 0.1))).unwrap();
        assert!(pf.proj_eq(&scaled_f, 1e-12));
    }

    #[test]
    fn boundary_test_uses_h() {
        assert!(EP::vertex().is_boundary(0.0));
        assert!(!embedded(2).is_boundary(0.0));
    }

    #[test]
    fn check_on_variety_reports_failure() {
        let mut a: [GaussianRational; 17] = std::array::from_fn(|_| GaussianRational::zero());
        a[0] = g(1, 0); // h = 1 with zero matrix violates the orthogonality generators
        let p = EP::from_array(a).unwrap();
        assert_eq!(p.check_on_variety(0.0), Err(Error::NotOnVariety));
        assert!(!p.residuals().violated(1e-9).is_empty());
        assert!(embedded(5).check_on_variety(0.0).is_ok());
    }

    #[test]
    fn approx_tracks_exact() {
        let p = embedded(6);
        let pf = p.approx();
        assert!(pf.residuals().max_abs() < 1e-12);
        assert!(pf.proj_eq(
            &IsometryPoint::embed(&random_rational_isometry(6).approx()),
            1e-12
        ));
    }
}
