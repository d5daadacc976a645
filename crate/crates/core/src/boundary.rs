//! Boundary points: classification, direction vectors, normal forms.
//!
//! Points with `h = 0` fall into five disjoint classes, decided here by a
//! fixed tree on the vanishing pattern of the blocks: for `M = 0` the pattern
//! of `(x, y)` separates the vertex, similarity, and the two collinearity
//! classes; for `M != 0` the matrix `N = rM + 2yx^t` separates butterfly
//! (`N = 0`) from inversion points.
//!
//! Inversion, butterfly and similarity points carry a pair of unit vectors
//! `(L, R)` obtained by passing their isotropic coordinate vectors through
//! the absolute conic and stereographic projection. The assignment used
//! throughout this crate is: `L` comes from the platform side (the row
//! factor `w` of `M = vw^t`, or the `x` block), `R` from the base side (the
//! column factor `v`, or the `y` block). This is the orientation under which
//! the leg correspondence statements hold literally: the pseudo-spherical
//! residual factors with the platform point paired against `w`/`x` and the
//! base point against `v`/`y`, so the platform line of a butterfly point is
//! parallel to `L` and the base line to `R`. Consequently `L` is unchanged
//! by left multiplications and `R` by right multiplications.

use crate::error::Error;
use crate::geom::{Direction, Mat3, Vec3};
use crate::rigid::Isometry;
use crate::scalar::{ComplexApprox, RealScalar, Scalar};
use crate::variety::{GroupCoords, IsometryPoint, Side};
use crate::Result;
use num_traits::Zero;

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum BoundaryClass {
    Vertex,
    Inversion,
    Butterfly,
    Similarity,
    CollinearityLeft,
    CollinearityRight,
}

impl BoundaryClass {
    pub fn name(&self) -> &'static str {
        match self {
            BoundaryClass::Vertex => "Vertex",
            BoundaryClass::Inversion => "Inversion",
            BoundaryClass::Butterfly => "Butterfly",
            BoundaryClass::Similarity => "Similarity",
            BoundaryClass::CollinearityLeft => "CollinearityLeft",
            BoundaryClass::CollinearityRight => "CollinearityRight",
        }
    }

    pub fn from_name(s: &str) -> Option<Self> {
        Some(match s {
            "Vertex" => BoundaryClass::Vertex,
            "Inversion" => BoundaryClass::Inversion,
            "Butterfly" => BoundaryClass::Butterfly,
            "Similarity" => BoundaryClass::Similarity,
            "CollinearityLeft" => BoundaryClass::CollinearityLeft,
            "CollinearityRight" => BoundaryClass::CollinearityRight,
            _ => return None,
        })
    }

    /// Classes that carry a left/right vector pair.
    pub fn has_left_right(&self) -> bool {
        matches!(
            self,
            BoundaryClass::Inversion | BoundaryClass::Butterfly | BoundaryClass::Similarity
        )
    }
}

fn vec_is_zero<S: Scalar>(v: &Vec3<S>, tol: f64) -> bool {
    v.0.iter().all(|c| c.is_zero_within(tol))
}

fn mat_is_zero<S: Scalar>(m: &Mat3<S>, tol: f64) -> bool {
    m.0.iter().flatten().all(|c| c.is_zero_within(tol))
}

/// Classifies a boundary point. The input must have `h = 0` and satisfy the
/// defining generators, both within `tol` for the double backend and exactly
/// for the exact backend. The decision order (vertex and collinearity tests
/// before the `N` test) is fixed so that near-degenerate float inputs are
/// classified deterministically.
pub fn classify<S: Scalar>(p: &IsometryPoint<S>, tol: f64) -> Result<BoundaryClass> {
    if !p.h().is_zero_within(tol) {
        return Err(Error::NotBoundary);
    }
    p.check_on_variety(tol)?;
    let c = p.coords();
    if mat_is_zero(&c.m, tol) {
        let x0 = vec_is_zero(&c.x, tol);
        let y0 = vec_is_zero(&c.y, tol);
        return Ok(match (x0, y0) {
            (true, true) => BoundaryClass::Vertex,
            (false, false) => BoundaryClass::Similarity,
            (false, true) => BoundaryClass::CollinearityLeft,
            (true, false) => BoundaryClass::CollinearityRight,
        });
    }
    let n = boundary_n(c);
    if mat_is_zero(&n, tol) {
        Ok(BoundaryClass::Butterfly)
    } else {
        Ok(BoundaryClass::Inversion)
    }
}

/// The matrix `N = rM + 2yx^t` separating inversion from butterfly points.
pub fn boundary_n<S: Scalar>(c: &GroupCoords<S>) -> Mat3<S> {
    let two = S::from_i64(2);
    c.m.scale(&c.r).add(&Mat3::outer(&c.y, &c.x).scale(&two))
}

/// Factors a rank-one matrix as `M = v w^t`. The pivot is the entry of
/// largest magnitude (first in row-major order on ties); `w` is the pivot
/// row rescaled so its largest entry is one, `v` is the pivot column.
pub fn rank1_factor<S: Scalar>(m: &Mat3<S>, tol: f64) -> Result<(Vec3<S>, Vec3<S>)> {
    let mut pivot = (0usize, 0usize);
    let mut best = -1.0f64;
    for i in 0..3 {
        for j in 0..3 {
            let mag = m.at(i, j).abs_approx();
            if mag > best {
                best = mag;
                pivot = (i, j);
            }
        }
    }
    if m.at(pivot.0, pivot.1).is_zero_within(tol) {
        return Err(Error::ZeroMatrix);
    }
    let (pi, pj) = pivot;
    let inv = S::one() / m.at(pi, pj).clone();
    let w = m.row(pi).scale(&inv);
    let v = m.col(pj);
    let reconstructed = Mat3::outer(&v, &w);
    let scale = best;
    for i in 0..3 {
        for j in 0..3 {
            let diff = m.at(i, j).clone() - reconstructed.at(i, j).clone();
            if !diff.is_zero_within(tol * scale) {
                return Err(Error::NotRankOne);
            }
        }
    }
    Ok((v, w))
}

/// Carries a point of the absolute conic (a nonzero isotropic vector, up to
/// complex scale) to the unit sphere. Writing `v = a + ib` with real vectors
/// `a`, `b`, the image is the direction of `b x a`; this is invariant under
/// complex rescaling of `v`, equivariant under rotations, and sends
/// conjugation to the antipode. It agrees with composing the inverse conic
/// parametrization with the stereographic chart: `(1, i, 0)` maps to the
/// south pole, `(1, -i, 0)` to the north pole, `(1, 0, i)` to `(0, 1, 0)`.
pub fn direction_from_conic<S: Scalar>(v: &Vec3<S>, tol: f64) -> Result<Direction> {
    let scale = v.0.iter().map(|c| c.mag2().approx()).fold(0.0, f64::max);
    if scale == 0.0 {
        return Err(Error::NotOnConic);
    }
    if !v.dot(v).is_zero_within(tol * scale) {
        return Err(Error::NotOnConic);
    }
    let a = v.map(|c| c.re());
    let b = v.map(|c| c.im());
    let axis = b.cross(&a).approx();
    Direction::new(axis).map_err(|_| Error::NotOnConic)
}

/// The `(L, R)` pair of an inversion, butterfly, or similarity point:
/// `L` from the platform-side vector (`w` or `x`), `R` from the base-side
/// vector (`v` or `y`).
pub fn left_right_vectors<S: Scalar>(
    p: &IsometryPoint<S>,
    tol: f64,
) -> Result<(Direction, Direction)> {
    match classify(p, tol)? {
        BoundaryClass::Inversion | BoundaryClass::Butterfly => {
            let (v, w) = rank1_factor(p.matrix(), tol)?;
            Ok((
                direction_from_conic(&w, tol)?,
                direction_from_conic(&v, tol)?,
            ))
        }
        BoundaryClass::Similarity => Ok((
            direction_from_conic(p.x(), tol)?,
            direction_from_conic(p.y(), tol)?,
        )),
        _ => Err(Error::NoLeftRight),
    }
}

/// Direction of the carrier line encoded by a collinearity point, from its
/// single nonzero isotropic block.
pub fn collinearity_direction<S: Scalar>(p: &IsometryPoint<S>, tol: f64) -> Result<Direction> {
    match classify(p, tol)? {
        BoundaryClass::CollinearityLeft => direction_from_conic(p.x(), tol),
        BoundaryClass::CollinearityRight => direction_from_conic(p.y(), tol),
        _ => Err(Error::NotCollinearity),
    }
}

fn isotropic_block<S: Scalar>(factor: &S) -> Mat3<S> {
    // (1, i, 0) (1, i, 0)^t scaled
    let i = S::i();
    let one = S::one();
    Mat3([
        [
            factor.clone() * one.clone(),
            factor.clone() * i.clone(),
            S::zero(),
        ],
        [
            factor.clone() * i.clone(),
            -(factor.clone() * one),
            S::zero(),
        ],
        [S::zero(), S::zero(), S::zero()],
    ])
}

fn isotropic_vec<S: Scalar>(factor: &S) -> Vec3<S> {
    Vec3::new(factor.clone(), factor.clone() * S::i(), S::zero())
}

/// Inversion normal form `(0 : [[1,i,0],[i,-1,0],[0,0,0]] : 0 : 0 : r)`,
/// `r` real positive.
pub fn inversion_point<S: Scalar>(r: &S::Real) -> Result<IsometryPoint<S>> {
    if !(*r > S::Real::zero()) {
        return Err(Error::NonPositiveParameter);
    }
    IsometryPoint::new(GroupCoords::new(
        S::zero(),
        isotropic_block(&S::one()),
        Vec3::zero(),
        Vec3::zero(),
        S::from_real(r.clone()),
    ))
}

/// Butterfly normal form, the inversion shape with `r = 0`.
pub fn butterfly_point<S: Scalar>() -> IsometryPoint<S> {
    IsometryPoint::new(GroupCoords::new(
        S::zero(),
        isotropic_block(&S::one()),
        Vec3::zero(),
        Vec3::zero(),
        S::zero(),
    ))
    .expect("nonzero by construction")
}

/// Similarity normal form `(0 : 0 : gamma (1,i,0) : (1,i,0) : 0)`,
/// `gamma` real positive.
pub fn similarity_point<S: Scalar>(gamma: &S::Real) -> Result<IsometryPoint<S>> {
    if !(*gamma > S::Real::zero()) {
        return Err(Error::NonPositiveParameter);
    }
    IsometryPoint::new(GroupCoords::new(
        S::zero(),
        Mat3::zero(),
        isotropic_vec(&S::from_real(gamma.clone())),
        isotropic_vec(&S::one()),
        S::zero(),
    ))
}

/// Collinearity normal form of the requested side: `(0:0:(1,i,0):0:0)` for
/// left, `(0:0:0:(1,i,0):0)` for right.
pub fn collinearity_point<S: Scalar>(side: Side) -> IsometryPoint<S> {
    let (x, y) = match side {
        Side::Left => (isotropic_vec(&S::one()), Vec3::zero()),
        Side::Right => (Vec3::zero(), isotropic_vec(&S::one())),
    };
    IsometryPoint::new(GroupCoords::new(S::zero(), Mat3::zero(), x, y, S::zero()))
        .expect("nonzero by construction")
}

/// Witness of a normal-form reduction: two isometries conjugating the input
/// onto the canonical representative of its class.
#[derive(Clone, Debug)]
pub struct NormalFormCertificate {
    pub sigma_left: Isometry<f64>,
    pub sigma_right: Isometry<f64>,
    pub normal_point: IsometryPoint<ComplexApprox>,
    pub class: BoundaryClass,
    /// `r` for inversion points, `gamma` for similarity points.
    pub parameter: Option<f64>,
}

impl NormalFormCertificate {
    /// The conjugate `sigma_left . p . sigma_right` the certificate asserts
    /// to be projectively equal to `normal_point`.
    pub fn conjugated<S: Scalar>(&self, p: &IsometryPoint<S>) -> IsometryPoint<ComplexApprox> {
        p.approx()
            .act(&self.sigma_right, Side::Right)
            .act(&self.sigma_left, Side::Left)
    }
}

/// Orthonormal frame rows `(n1, n2, n3)` adapted to an isotropic vector
/// `w = u1 + i u2`: `n1` along `u1`, `n2` along `u2`, `n3` their cross
/// product. The rotation with these rows carries `w` to a positive real
/// multiple of `(1, i, 0)`.
fn isotropic_frame(w: &Vec3<ComplexApprox>) -> Result<Mat3<f64>> {
    let u1 = w.map(|c| c.re());
    let u2 = w.map(|c| c.im());
    let n1 = u1.normalized().map_err(|_| Error::NotOnConic)?;
    let n2 = u2
        .sub(&n1.scale(&u2.dot(&n1)))
        .normalized()
        .map_err(|_| Error::NotOnConic)?;
    let n3 = n1.cross(&n2);
    Ok(Mat3::from_rows(n1, n2, n3))
}

fn rotation_z_from_phase(c: f64, d: f64) -> Result<Isometry<f64>> {
    Isometry::rotation(Mat3::from_rows(
        Vec3::new(c, d, 0.0),
        Vec3::new(-d, c, 0.0),
        Vec3::new(0.0, 0.0, 1.0),
    ))
}

/// Reduces a boundary point to the normal form of its class and returns the
/// conjugating isometries together with the canonical point and its modulus.
/// The reduction itself runs in doubles (the frame constructions divide by
/// Euclidean norms); exact inputs are converted first.
pub fn normal_form<S: Scalar>(p: &IsometryPoint<S>, tol: f64) -> Result<NormalFormCertificate> {
    let class = classify(p, tol)?;
    let cur = p.approx();
    match class {
        BoundaryClass::Vertex => Err(Error::VertexNoModuli),
        BoundaryClass::Inversion | BoundaryClass::Butterfly => {
            let (v, w) = rank1_factor(cur.matrix(), tol)?;
            let rot_left = Isometry::rotation(isotropic_frame(&v)?)
                .expect("orthonormal frame");
            let rot_right = Isometry::rotation(isotropic_frame(&w)?.transpose())
                .expect("orthonormal frame");
            let cur = cur.act(&rot_left, Side::Left).act(&rot_right, Side::Right);
            // now M is a positive real multiple of the isotropic block;
            // translations remove the x and y blocks
            let m00 = cur.matrix().at(0, 0).clone();
            let zeta = cur.x().0[0] / m00;
            let transl_left = Isometry::translation(Vec3::new(zeta.re, zeta.im, 0.0));
            let cur = cur.act(&transl_left, Side::Left);
            let m00 = cur.matrix().at(0, 0).clone();
            let tau = -(cur.y().0[0] / m00);
            let transl_right = Isometry::translation(Vec3::new(tau.re, tau.im, 0.0));
            let cur = cur.act(&transl_right, Side::Right);
            let sigma_right = rot_right.compose(&transl_right);
            if class == BoundaryClass::Butterfly {
                return Ok(NormalFormCertificate {
                    sigma_left: transl_left.compose(&rot_left),
                    sigma_right,
                    normal_point: butterfly_point(),
                    class,
                    parameter: None,
                });
            }
            // inversion: a final left rotation about z makes r/m00 real
            // positive; its modulus is the invariant of the point
            let rho = cur.r().clone() / cur.matrix().at(0, 0).clone();
            let modulus = rho.norm();
            let phase = rho / ComplexApprox::new(modulus, 0.0);
            let rot_z = rotation_z_from_phase(phase.re, phase.im)?;
            Ok(NormalFormCertificate {
                sigma_left: rot_z.compose(&transl_left.compose(&rot_left)),
                sigma_right,
                normal_point: inversion_point::<ComplexApprox>(&modulus)?,
                class,
                parameter: Some(modulus),
            })
        }
        BoundaryClass::Similarity => {
            let rot_right = Isometry::rotation(isotropic_frame(cur.x())?.transpose())
                .expect("orthonormal frame");
            let rot_left = Isometry::rotation(isotropic_frame(cur.y())?)
                .expect("orthonormal frame");
            let cur = cur.act(&rot_left, Side::Left).act(&rot_right, Side::Right);
            // x and y are now positive real multiples of (1, i, 0); a left
            // translation with <s, y> = -r/2 removes r without moving them
            let eta = cur.y().0[0];
            let zeta = -(cur.r().clone() / (eta * ComplexApprox::new(2.0, 0.0)));
            let transl_left = Isometry::translation(Vec3::new(zeta.re, zeta.im, 0.0));
            let cur = cur.act(&transl_left, Side::Left);
            let gamma = (cur.x().0[0] / cur.y().0[0]).norm();
            Ok(NormalFormCertificate {
                sigma_left: transl_left.compose(&rot_left),
                sigma_right: rot_right,
                normal_point: similarity_point::<ComplexApprox>(&gamma)?,
                class,
                parameter: Some(gamma),
            })
        }
        BoundaryClass::CollinearityLeft => {
            let rot_right = Isometry::rotation(isotropic_frame(cur.x())?.transpose())
                .expect("orthonormal frame");
            let cur = cur.act(&rot_right, Side::Right);
            // right translation with <x, t> = r/2 removes r
            let xi = cur.x().0[0];
            let tau = cur.r().clone() / (xi * ComplexApprox::new(2.0, 0.0));
            let transl_right = Isometry::translation(Vec3::new(tau.re, tau.im, 0.0));
            Ok(NormalFormCertificate {
                sigma_left: Isometry::identity(),
                sigma_right: rot_right.compose(&transl_right),
                normal_point: collinearity_point(Side::Left),
                class,
                parameter: None,
            })
        }
        BoundaryClass::CollinearityRight => {
            let rot_left = Isometry::rotation(isotropic_frame(cur.y())?)
                .expect("orthonormal frame");
            let cur = cur.act(&rot_left, Side::Left);
            let eta = cur.y().0[0];
            let zeta = -(cur.r().clone() / (eta * ComplexApprox::new(2.0, 0.0)));
            let transl_left = Isometry::translation(Vec3::new(zeta.re, zeta.im, 0.0));
            Ok(NormalFormCertificate {
                sigma_left: transl_left.compose(&rot_left),
                sigma_right: Isometry::identity(),
                normal_point: collinearity_point(Side::Right),
                class,
                parameter: None,
            })
        }
    }
}
