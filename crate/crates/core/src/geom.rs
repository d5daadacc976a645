//! Vectors, matrices, unit directions, and oriented lines.
//!
//! `Vec3` and `Mat3` are generic over any [`Ring`], so the same code serves
//! real coordinates (rational or double) and complex coordinates. The dot
//! product is always the bilinear one, without conjugation; over complex
//! scalars it can vanish on nonzero vectors.

use crate::error::Error;
use crate::scalar::{RealScalar, Ring};
use crate::Result;

#[derive(Clone, Copy, PartialEq, Debug)]
pub struct Vec3<T>(pub [T; 3]);

#[derive(Clone, Copy, PartialEq, Debug)]
pub struct Mat3<T>(pub [[T; 3]; 3]);

impl<T: Ring> Vec3<T> {
    pub fn new(x: T, y: T, z: T) -> Self {
        Vec3([x, y, z])
    }

    pub fn zero() -> Self {
        Vec3([T::zero(), T::zero(), T::zero()])
    }

    /// Standard basis vector, `k` in 0..3.
    pub fn basis(k: usize) -> Self {
        let mut v = Self::zero();
        v.0[k] = T::one();
        v
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|c| c.is_zero())
    }

    pub fn add(&self, rhs: &Self) -> Self {
        Vec3(std::array::from_fn(|k| {
            self.0[k].clone() + rhs.0[k].clone()
        }))
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        Vec3(std::array::from_fn(|k| {
            self.0[k].clone() - rhs.0[k].clone()
        }))
    }

    pub fn neg(&self) -> Self {
        Vec3(std::array::from_fn(|k| -self.0[k].clone()))
    }

    pub fn scale(&self, c: &T) -> Self {
        Vec3(std::array::from_fn(|k| self.0[k].clone() * c.clone()))
    }

    /// Bilinear dot product, no conjugation.
    pub fn dot(&self, rhs: &Self) -> T {
        let mut acc = T::zero();
        for k in 0..3 {
            acc = acc + self.0[k].clone() * rhs.0[k].clone();
        }
        acc
    }

    pub fn cross(&self, rhs: &Self) -> Self {
        let a = &self.0;
        let b = &rhs.0;
        Vec3([
            a[1].clone() * b[2].clone() - a[2].clone() * b[1].clone(),
            a[2].clone() * b[0].clone() - a[0].clone() * b[2].clone(),
            a[0].clone() * b[1].clone() - a[1].clone() * b[0].clone(),
        ])
    }

    pub fn map<U: Ring>(&self, mut f: impl FnMut(&T) -> U) -> Vec3<U> {
        Vec3(std::array::from_fn(|k| f(&self.0[k])))
    }
}

impl<R: RealScalar> Vec3<R> {
    pub fn approx(&self) -> Vec3<f64> {
        self.map(|c| c.approx())
    }
}

impl Vec3<f64> {
    pub fn norm(&self) -> f64 {
        self.dot(self).sqrt()
    }

    /// Errors on zero or non-finite input.
    pub fn normalized(&self) -> Result<Vec3<f64>> {
        let n = self.norm();
        if !n.is_finite() {
            return Err(Error::NonFinite);
        }
        if n == 0.0 {
            return Err(Error::NotUnit);
        }
        Ok(self.scale(&(1.0 / n)))
    }
}

impl<T: Ring> Mat3<T> {
    pub fn from_rows(r0: Vec3<T>, r1: Vec3<T>, r2: Vec3<T>) -> Self {
        Mat3([r0.0, r1.0, r2.0])
    }

    pub fn from_cols(c0: Vec3<T>, c1: Vec3<T>, c2: Vec3<T>) -> Self {
        Mat3::from_rows(c0, c1, c2).transpose()
    }

    pub fn identity() -> Self {
        Mat3(std::array::from_fn(|i| {
            std::array::from_fn(|j| if i == j { T::one() } else { T::zero() })
        }))
    }

    pub fn zero() -> Self {
        Mat3(std::array::from_fn(|_| std::array::from_fn(|_| T::zero())))
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().flatten().all(|c| c.is_zero())
    }

    pub fn row(&self, i: usize) -> Vec3<T> {
        Vec3(self.0[i].clone())
    }

    pub fn col(&self, j: usize) -> Vec3<T> {
        Vec3(std::array::from_fn(|i| self.0[i][j].clone()))
    }

    pub fn at(&self, i: usize, j: usize) -> &T {
        &self.0[i][j]
    }

    pub fn transpose(&self) -> Self {
        Mat3(std::array::from_fn(|i| {
            std::array::from_fn(|j| self.0[j][i].clone())
        }))
    }

    pub fn add(&self, rhs: &Self) -> Self {
        Mat3(std::array::from_fn(|i| {
            std::array::from_fn(|j| self.0[i][j].clone() + rhs.0[i][j].clone())
        }))
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        Mat3(std::array::from_fn(|i| {
            std::array::from_fn(|j| self.0[i][j].clone() - rhs.0[i][j].clone())
        }))
    }

    pub fn scale(&self, c: &T) -> Self {
        Mat3(std::array::from_fn(|i| {
            std::array::from_fn(|j| self.0[i][j].clone() * c.clone())
        }))
    }

    pub fn mul_mat(&self, rhs: &Self) -> Self {
        Mat3(std::array::from_fn(|i| {
            std::array::from_fn(|j| {
                let mut acc = T::zero();
                for k in 0..3 {
                    acc = acc + self.0[i][k].clone() * rhs.0[k][j].clone();
                }
                acc
            })
        }))
    }

    pub fn mul_vec(&self, v: &Vec3<T>) -> Vec3<T> {
        Vec3(std::array::from_fn(|i| self.row(i).dot(v)))
    }

    /// Rank-one matrix u v^t.
    pub fn outer(u: &Vec3<T>, v: &Vec3<T>) -> Self {
        Mat3(std::array::from_fn(|i| {
            std::array::from_fn(|j| u.0[i].clone() * v.0[j].clone())
        }))
    }

    pub fn det(&self) -> T {
        self.row(0).dot(&self.row(1).cross(&self.row(2)))
    }

    pub fn trace(&self) -> T {
        self.0[0][0].clone() + self.0[1][1].clone() + self.0[2][2].clone()
    }

    pub fn map<U: Ring>(&self, mut f: impl FnMut(&T) -> U) -> Mat3<U> {
        Mat3(std::array::from_fn(|i| {
            std::array::from_fn(|j| f(&self.0[i][j]))
        }))
    }
}

impl<R: RealScalar> Mat3<R> {
    pub fn approx(&self) -> Mat3<f64> {
        self.map(|c| c.approx())
    }
}

/// Unit vector in real 3-space. Construction normalizes, so equality of two
/// directions can be tested with [`Direction::angle_to`].
#[derive(Clone, Copy, PartialEq, Debug)]
pub struct Direction(Vec3<f64>);

impl Direction {
    pub fn new(v: Vec3<f64>) -> Result<Self> {
        Ok(Direction(v.normalized()?))
    }

    pub fn from_coords(x: f64, y: f64, z: f64) -> Result<Self> {
        Direction::new(Vec3::new(x, y, z))
    }

    pub fn vec(&self) -> Vec3<f64> {
        self.0
    }

    pub fn antipode(&self) -> Self {
        Direction(self.0.neg())
    }

    /// Angle in [0, pi].
    pub fn angle_to(&self, other: &Direction) -> f64 {
        let c = self.0.dot(&other.0);
        let s = self.0.cross(&other.0).norm();
        s.atan2(c)
    }
}

/// Orthonormal tangent basis at a direction `d`, chosen so that
/// `(e1, e2, -d)` is a right-handed frame. At the south pole `(0,0,-1)` the
/// basis is exactly `((1,0,0), (0,1,0))`. The choice is continuous away from
/// the poles.
pub fn tangent_frame(d: &Direction) -> (Vec3<f64>, Vec3<f64>) {
    let l = d.vec();
    let u = Vec3::new(0.0, 0.0, -1.0);
    let u = if u.dot(&l).abs() > 1.0 - 1e-6 {
        Vec3::new(1.0, 0.0, 0.0)
    } else {
        u
    };
    let e1 = u
        .sub(&l.scale(&u.dot(&l)))
        .normalized()
        .expect("projection of a non-parallel vector is nonzero");
    let e2 = e1.cross(&l);
    (e1, e2)
}

/// Line with a chosen orientation. Over an exact backend the direction must
/// be exactly unit; over doubles it is normalized here.
#[derive(Clone, PartialEq, Debug)]
pub struct OrientedLine<R: RealScalar> {
    point: Vec3<R>,
    dir: Vec3<R>,
}

impl<R: RealScalar> OrientedLine<R> {
    pub fn new(point: Vec3<R>, dir: Vec3<R>) -> Result<Self> {
        if R::EXACT {
            if dir.dot(&dir) != R::one() {
                return Err(Error::NotUnit);
            }
            Ok(OrientedLine { point, dir })
        } else {
            let d = dir.approx().normalized()?;
            Ok(OrientedLine {
                point,
                dir: d.map(|c| R::from_f64_approx(*c)),
            })
        }
    }

    pub fn point(&self) -> &Vec3<R> {
        &self.point
    }

    pub fn dir(&self) -> &Vec3<R> {
        &self.dir
    }

    /// Point at signed parameter `t` along the direction.
    pub fn at(&self, t: &R) -> Vec3<R> {
        self.point.add(&self.dir.scale(t))
    }

    /// Whether `p` lies on the line: (p - point) x dir = 0. Exact backends
    /// decide exactly, doubles use the tolerance against the line scale.
    pub fn contains(&self, p: &Vec3<R>, tol: f64) -> bool {
        let c = p.sub(&self.point).cross(&self.dir);
        if R::EXACT {
            c.is_zero()
        } else {
            let scale = 1.0 + p.approx().norm() + self.point.approx().norm();
            c.approx().norm() <= tol * scale
        }
    }
}

/// Rotation carrying unit vector `a` to unit vector `b`, as an orthogonal
/// matrix with determinant one. Rational unit inputs give a rational output,
/// including the antipodal case.
pub fn rotation_between<R: RealScalar>(a: &Vec3<R>, b: &Vec3<R>) -> Result<Mat3<R>> {
    let one = R::one();
    let c = a.dot(b);
    let denom = one.clone() + c.clone();
    let antipodal = if R::EXACT {
        denom.is_zero()
    } else {
        denom.approx().abs() < 1e-9
    };
    if antipodal {
        // Rotation by pi about an axis w perpendicular to a. Using the basis
        // vector with the smallest component of a keeps w rational and
        // nonzero without any square root.
        let k = (0..3)
            .min_by(|&i, &j| {
                let ai = (a.0[i].clone() * a.0[i].clone()).approx();
                let aj = (a.0[j].clone() * a.0[j].clone()).approx();
                ai.partial_cmp(&aj).unwrap_or(std::cmp::Ordering::Equal)
            })
            .unwrap();
        let w = a.cross(&Vec3::basis(k));
        let ww = w.dot(&w);
        if ww.is_zero() {
            return Err(Error::NotUnit);
        }
        let two = R::from_i64(2);
        return Ok(Mat3::outer(&w, &w)
            .scale(&(two / ww))
            .sub(&Mat3::identity()));
    }
    // I + K + K^2 / (1 + c) with K the cross-product matrix of a x b.
    let v = a.cross(b);
    let k = Mat3::from_rows(
        Vec3::new(R::zero(), -v.0[2].clone(), v.0[1].clone()),
        Vec3::new(v.0[2].clone(), R::zero(), -v.0[0].clone()),
        Vec3::new(-v.0[1].clone(), v.0[0].clone(), R::zero()),
    );
    let k2 = k.mul_mat(&k);
    Ok(Mat3::identity()
        .add(&k)
        .add(&k2.scale(&(one / denom))))
}
