//! Bonds: boundary points reachable by self-motions, their construction
//! from geometric data, verification against pods, planar correspondence
//! maps, and extraction as limits of rational motion families.
//!
//! The leg condition of a boundary point couples a platform point only
//! through its projection along `L` and a base point only through its
//! projection along `R`. For butterfly and collinearity points the
//! condition is incidence with a line; for inversion and similarity points
//! it is a Moebius correspondence `kappa(q) = Q` between the two projection
//! planes. The constructors here run the correspondence backwards: given
//! the geometric datum they conjugate the matching normal form into place.

use crate::boundary::{
    butterfly_point, classify, collinearity_point, inversion_point, left_right_vectors,
    rank1_factor, similarity_point, BoundaryClass,
};
use crate::error::Error;
use crate::geom::{tangent_frame, Direction, Mat3, OrientedLine, Vec3};
use crate::pod::{pseudo_spherical_residuals, LegForm, Pod};
use crate::poly::{exact_roots_deg_le2, numeric_roots, poly_gcd_many, GaussPoly, Poly};
use crate::rigid::Isometry;
use crate::scalar::{ComplexApprox, GaussianRational, Rational, RealScalar, Scalar};
use crate::variety::{GroupCoords, IsometryPoint, Side};
use crate::Result;
use num_traits::{One, Zero};

/// The two families of planar correspondence maps.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum MobiusKind {
    Inversion,
    Similarity,
}

impl MobiusKind {
    pub fn name(&self) -> &'static str {
        match self {
            MobiusKind::Inversion => "Inversion",
            MobiusKind::Similarity => "Similarity",
        }
    }
}

/// A regular Moebius map `q -> (aq + b) / (cq + d)`, stored projectively
/// with the largest-magnitude coefficient scaled to one (first wins on
/// ties).
#[derive(Clone, Copy, PartialEq, Debug)]
pub struct PlanarMobius {
    a: ComplexApprox,
    b: ComplexApprox,
    c: ComplexApprox,
    d: ComplexApprox,
}

impl PlanarMobius {
    pub fn new(
        a: ComplexApprox,
        b: ComplexApprox,
        c: ComplexApprox,
        d: ComplexApprox,
    ) -> Result<Self> {
        let coeffs = [a, b, c, d];
        if coeffs.iter().any(|c| !c.is_finite_val()) {
            return Err(Error::NonFinite);
        }
        let mut pivot = ComplexApprox::zero();
        let mut best = 0.0f64;
        for c in &coeffs {
            let m = c.norm_sqr();
            if m > best {
                best = m;
                pivot = *c;
            }
        }
        if best == 0.0 {
            return Err(Error::DegenerateMobius);
        }
        let det = a * d - b * c;
        // determinant degeneracy relative to the coefficient scale
        if det.norm_sqr() <= 1e-24 * best * best {
            return Err(Error::DegenerateMobius);
        }
        Ok(PlanarMobius {
            a: a / pivot,
            b: b / pivot,
            c: c / pivot,
            d: d / pivot,
        })
    }

    pub fn coeffs(&self) -> (ComplexApprox, ComplexApprox, ComplexApprox, ComplexApprox) {
        (self.a, self.b, self.c, self.d)
    }

    pub fn apply(&self, q: ComplexApprox) -> ComplexApprox {
        (self.a * q + self.b) / (self.c * q + self.d)
    }

    /// Affine maps (`c = 0`) are similarities; everything else involves an
    /// inversion.
    pub fn kind(&self, tol: f64) -> MobiusKind {
        if self.c.norm() <= tol {
            MobiusKind::Similarity
        } else {
            MobiusKind::Inversion
        }
    }

    /// Composition `self . other` (apply `other` first).
    pub fn compose(&self, other: &PlanarMobius) -> Result<PlanarMobius> {
        PlanarMobius::new(
            self.a * other.a + self.b * other.c,
            self.a * other.b + self.b * other.d,
            self.c * other.a + self.d * other.c,
            self.c * other.b + self.d * other.d,
        )
    }

    /// Projective closeness of the stored coefficient vectors.
    pub fn proj_close(&self, other: &PlanarMobius, tol: f64) -> bool {
        let u = [self.a, self.b, self.c, self.d];
        let v = [other.a, other.b, other.c, other.d];
        for i in 0..4 {
            for j in (i + 1)..4 {
                if (u[i] * v[j] - u[j] * v[i]).norm() > tol {
                    return false;
                }
            }
        }
        true
    }
}

/// A direct planar isometry `q -> u q + b` with `|u| = 1`.
#[derive(Clone, Copy, PartialEq, Debug)]
pub struct PlanarIsometry {
    u: ComplexApprox,
    b: ComplexApprox,
}

impl PlanarIsometry {
    pub fn new(u: ComplexApprox, b: ComplexApprox) -> Result<Self> {
        if !u.is_finite_val() || !b.is_finite_val() {
            return Err(Error::NonFinite);
        }
        if (u.norm() - 1.0).abs() > 1e-9 {
            return Err(Error::NotUnit);
        }
        Ok(PlanarIsometry { u, b })
    }

    pub fn identity() -> Self {
        PlanarIsometry {
            u: ComplexApprox::one(),
            b: ComplexApprox::zero(),
        }
    }

    pub fn rotation_part(&self) -> ComplexApprox {
        self.u
    }

    pub fn translation_part(&self) -> ComplexApprox {
        self.b
    }

    pub fn apply(&self, q: ComplexApprox) -> ComplexApprox {
        self.u * q + self.b
    }

    pub fn to_mobius(&self) -> PlanarMobius {
        PlanarMobius::new(
            self.u,
            self.b,
            ComplexApprox::zero(),
            ComplexApprox::one(),
        )
        .expect("unit rotation part")
    }

    /// The spatial isometry acting on the first two coordinates as this
    /// planar map and fixing the third.
    pub fn lift(&self) -> Isometry<f64> {
        let rot = Isometry::rotation(Mat3::from_rows(
            Vec3::new(self.u.re, -self.u.im, 0.0),
            Vec3::new(self.u.im, self.u.re, 0.0),
            Vec3::new(0.0, 0.0, 1.0),
        ))
        .expect("unit rotation part");
        Isometry::translation(Vec3::new(self.b.re, self.b.im, 0.0)).compose(&rot)
    }
}

/// A boundary point bundled with its classification data: the class, the
/// left/right vectors when the class carries them, and the planar
/// correspondence map for inversion and similarity points.
#[derive(Clone, Debug)]
pub struct Bond<S: Scalar> {
    point: IsometryPoint<S>,
    class: BoundaryClass,
    left: Option<Direction>,
    right: Option<Direction>,
    planar_map: Option<PlanarMobius>,
}

impl<S: Scalar> Bond<S> {
    /// Classifies a boundary point and derives the attached data.
    pub fn from_point(point: IsometryPoint<S>, tol: f64) -> Result<Self> {
        let class = classify(&point, tol)?;
        let (left, right) = if class.has_left_right() {
            let (l, r) = left_right_vectors(&point, tol)?;
            (Some(l), Some(r))
        } else {
            (None, None)
        };
        let planar_map = match class {
            BoundaryClass::Inversion | BoundaryClass::Similarity => Some(planar_map_from_point(
                &point.approx(),
                class,
                left.as_ref().expect("present for this class"),
                right.as_ref().expect("present for this class"),
            )?),
            _ => None,
        };
        Ok(Bond {
            point,
            class,
            left,
            right,
            planar_map,
        })
    }

    pub fn point(&self) -> &IsometryPoint<S> {
        &self.point
    }

    pub fn class(&self) -> BoundaryClass {
        self.class
    }

    pub fn left(&self) -> Option<&Direction> {
        self.left.as_ref()
    }

    pub fn right(&self) -> Option<&Direction> {
        self.right.as_ref()
    }

    pub fn planar_map(&self) -> Option<&PlanarMobius> {
        self.planar_map.as_ref()
    }

    pub fn approx(&self) -> Bond<ComplexApprox> {
        Bond {
            point: self.point.approx(),
            class: self.class,
            left: self.left,
            right: self.right,
            planar_map: self.planar_map,
        }
    }
}

/// Rotation carrying the south pole to `dir`, with the canonical tangent
/// frame of `dir` as the images of the first two axes.
fn canonical_rho(dir: &Direction) -> Isometry<f64> {
    let (e1, e2) = tangent_frame(dir);
    Isometry::rotation(Mat3::from_cols(e1, e2, dir.vec().neg())).expect("orthonormal frame")
}

/// Complex isotropic vector whose conic direction is `dir` and whose
/// pairing `<., p>` with real points computes the projection onto the
/// tangent frame of `dir`.
fn frame_vector(dir: &Direction) -> Vec3<ComplexApprox> {
    let (e1, e2) = tangent_frame(dir);
    let i = ComplexApprox::i();
    e1.map(|c| ComplexApprox::from_real(*c))
        .add(&e2.map(|c| ComplexApprox::from_real(*c)).scale(&i))
}

/// Factor of `w` along the frame vector of its conic direction, by a
/// least-squares projection (exact proportionality up to rounding).
fn frame_factor(w: &Vec3<ComplexApprox>, dir: &Direction) -> ComplexApprox {
    let u = frame_vector(dir);
    let conj_u = u.map(|c| c.conj());
    let denom = u.dot(&conj_u);
    w.dot(&conj_u) / denom
}

fn planar_map_from_point(
    point: &IsometryPoint<ComplexApprox>,
    class: BoundaryClass,
    left: &Direction,
    right: &Direction,
) -> Result<PlanarMobius> {
    let two = ComplexApprox::new(2.0, 0.0);
    match class {
        BoundaryClass::Inversion => {
            // point = (0 : vw^t : lam w : mu v : r); with w = delta rho_L(1,i,0)
            // and v = eps rho_R(1,i,0) the leg condition reads
            // r - 2 lam delta q - 2 mu eps Q - 2 delta eps q Q = 0
            let (v, w) = rank1_factor(point.matrix(), 1e-9)?;
            let delta = frame_factor(&w, left);
            let eps = frame_factor(&v, right);
            let lam = {
                let cw = w.map(|c| c.conj());
                point.x().dot(&cw) / w.dot(&cw)
            };
            let mu = {
                let cv = v.map(|c| c.conj());
                point.y().dot(&cv) / v.dot(&cv)
            };
            PlanarMobius::new(
                -(two * lam * delta),
                *point.r(),
                two * delta * eps,
                two * mu * eps,
            )
        }
        BoundaryClass::Similarity => {
            // point = (0 : 0 : chi rho_L(1,i,0) : psi rho_R(1,i,0) : r);
            // the leg condition reads r - 2 chi q - 2 psi Q = 0
            let chi = frame_factor(point.x(), left);
            let psi = frame_factor(point.y(), right);
            PlanarMobius::new(
                -(two * chi),
                *point.r(),
                ComplexApprox::zero(),
                two * psi,
            )
        }
        _ => Err(Error::Invalid(
            "planar map exists only for inversion and similarity bonds".into(),
        )),
    }
}

/// The correspondence map of an inversion or similarity bond, expressed in
/// the canonical tangent frames of its left and right vectors.
pub fn extract_planar_map<S: Scalar>(bond: &Bond<S>) -> Result<PlanarMobius> {
    match bond.class {
        BoundaryClass::Inversion | BoundaryClass::Similarity => planar_map_from_point(
            &bond.point.approx(),
            bond.class,
            bond.left().expect("present for this class"),
            bond.right().expect("present for this class"),
        ),
        _ => Err(Error::Invalid(
            "planar map exists only for inversion and similarity bonds".into(),
        )),
    }
}

/// Isometry carrying the south-oriented z-axis onto `g`: rotate the south
/// pole to the line direction, then translate to a point of the line.
fn line_frame<R: RealScalar>(g: &OrientedLine<R>) -> Result<Isometry<R>> {
    let south = Vec3::new(R::zero(), R::zero(), -R::one());
    let rot = Isometry::rotation(crate::geom::rotation_between(&south, g.dir())?)?;
    Ok(Isometry::translation(g.point().clone()).compose(&rot))
}

/// The butterfly bond of a pair of oriented lines: its left vector is the
/// direction of `gl`, its right vector the direction of `gr`, and a leg
/// `(p, P)` has zero residual exactly when `p` lies on `gl` or `P` lies on
/// `gr`.
pub fn butterfly_bond<S: Scalar>(
    gl: &OrientedLine<S::Real>,
    gr: &OrientedLine<S::Real>,
) -> Result<Bond<S>> {
    let sl = line_frame(gl)?;
    let sr = line_frame(gr)?;
    let point = butterfly_point::<S>()
        .act(&sl.inverse(), Side::Right)
        .act(&sr, Side::Left);
    Bond::from_point(point, 1e-9)
}

/// The collinearity bond of an oriented line: a leg `(p, P)` has zero
/// residual exactly when the point of the requested side lies on `g`.
pub fn collinearity_bond<S: Scalar>(g: &OrientedLine<S::Real>, side: Side) -> Result<Bond<S>> {
    let sg = line_frame(g)?;
    let point = match side {
        Side::Left => collinearity_point::<S>(side).act(&sg.inverse(), Side::Right),
        Side::Right => collinearity_point::<S>(side).act(&sg, Side::Left),
    };
    Bond::from_point(point, 1e-9)
}

/// Builds an inversion or similarity bond with prescribed left/right
/// vectors whose correspondence map is `tau1 . kappa0 . tau2`, where
/// `kappa0` is the normal-form map of the requested kind with the given
/// parameter (`r` resp. `gamma`) and `(tau1, tau2)` are planar isometries.
pub fn mobius_bond(
    left: &Direction,
    right: &Direction,
    kind: MobiusKind,
    parameter: f64,
    frames: &(PlanarIsometry, PlanarIsometry),
) -> Result<Bond<ComplexApprox>> {
    let base = match kind {
        MobiusKind::Inversion => inversion_point::<ComplexApprox>(&parameter)?,
        MobiusKind::Similarity => similarity_point::<ComplexApprox>(&parameter)?,
    };
    let (tau1, tau2) = frames;
    let sigma_left = canonical_rho(right).compose(&tau1.lift());
    let sigma_right = tau2.lift().compose(&canonical_rho(left).inverse());
    let point = base
        .act(&sigma_right, Side::Right)
        .act(&sigma_left, Side::Left);
    Bond::from_point(point, 1e-9)
}

/// Splits `kappa` as `tau1 . kappa0 . tau2` and builds the matching bond.
/// Affine maps decompose over the similarity normal form, all others over
/// the inversion normal form.
pub fn mobius_bond_from_map(
    left: &Direction,
    right: &Direction,
    kappa: &PlanarMobius,
) -> Result<Bond<ComplexApprox>> {
    let (a, b, c, d) = kappa.coeffs();
    if c.norm() > 0.0 {
        // kappa = tau1 . (r/2)/q . tau2 with tau2 = q + d/c,
        // tau1 = u1 Q + a/c, u1 r/2 = (bc - ad)/c^2
        let num = b * c - a * d;
        let half_r = num.norm() / c.norm_sqr();
        let u1 = (num / (c * c)) / ComplexApprox::new(half_r, 0.0);
        let tau1 = PlanarIsometry::new(u1, a / c)?;
        let tau2 = PlanarIsometry::new(ComplexApprox::one(), d / c)?;
        mobius_bond(
            left,
            right,
            MobiusKind::Inversion,
            2.0 * half_r,
            &(tau1, tau2),
        )
    } else {
        // affine: kappa(q) = alpha q + beta = tau1 . (-gamma q) . tau2
        // with tau2 = id, u1 = -alpha/|alpha|, b1 = beta
        let alpha = a / d;
        let beta = b / d;
        let gamma = alpha.norm();
        let u1 = -(alpha / ComplexApprox::new(gamma, 0.0));
        let tau1 = PlanarIsometry::new(u1, beta)?;
        mobius_bond(
            left,
            right,
            MobiusKind::Similarity,
            gamma,
            &(tau1, PlanarIsometry::identity()),
        )
    }
}

/// Outcome of testing a bond against a pod.
#[derive(Clone, Debug)]
pub struct BondMembership<S: Scalar> {
    pub residuals: Vec<S>,
    pub max_abs: f64,
    pub member: bool,
}

/// Evaluates every pseudo-spherical leg condition of the pod at the bond
/// point; the bond belongs to the pod when all residuals vanish within
/// `tol`.
pub fn verify_bond<S: Scalar>(
    bond: &Bond<S>,
    pod: &Pod<S::Real>,
    tol: f64,
) -> Result<BondMembership<S>> {
    let residuals = pseudo_spherical_residuals(pod, &bond.point)?;
    let max_abs = residuals.iter().map(|r| r.abs_approx()).fold(0.0, f64::max);
    let member = residuals.iter().all(|r| r.is_zero_within(tol));
    Ok(BondMembership {
        residuals,
        max_abs,
        member,
    })
}

/// A one-parameter family of poses with polynomial coordinates, stored
/// with the common polynomial factor of all 17 coordinates divided out.
#[derive(Clone, PartialEq, Debug)]
pub struct RationalMotion {
    coords: GroupCoords<GaussPoly>,
}

impl RationalMotion {
    pub fn new(coords: GroupCoords<GaussPoly>) -> Result<Self> {
        let arr = coords.to_array();
        let gcd = poly_gcd_many(&arr)?;
        let coords = if gcd.degree() == Some(0) {
            coords
        } else {
            GroupCoords::from_array(arr.map(|p| {
                let (q, _) = p.div_rem(&gcd).expect("gcd divides every coordinate");
                q
            }))
        };
        Ok(RationalMotion { coords })
    }

    pub fn coords(&self) -> &GroupCoords<GaussPoly> {
        &self.coords
    }

    pub fn h(&self) -> &GaussPoly {
        &self.coords.h
    }

    /// Checks the defining residuals as polynomial identities in the
    /// parameter.
    pub fn check_symbolic(&self) -> Result<()> {
        let bad: Vec<&'static str> = self
            .coords
            .residual_entries()
            .into_iter()
            .filter(|(_, p)| !p.is_zero())
            .map(|(name, _)| name)
            .collect();
        if bad.is_empty() {
            Ok(())
        } else {
            Err(Error::NotOnVariety)
        }
    }

    /// The pose at parameter `t0` as a projective point.
    pub fn eval_exact(&self, t0: &GaussianRational) -> Result<IsometryPoint<GaussianRational>> {
        IsometryPoint::new(self.coords.map(|p| p.eval(t0)))
    }

    /// The leg form of one leg composed with this motion, as a polynomial
    /// in the parameter; identically zero exactly when the motion keeps
    /// that leg length.
    pub fn leg_polynomial(&self, form: &LegForm<Rational>) -> GaussPoly {
        let coeffs = form.coeffs().to_array();
        let coords = self.coords.to_array();
        coeffs
            .into_iter()
            .zip(coords)
            .map(|(c, p)| p.scale(&GaussianRational::from_real(c)))
            .fold(GaussPoly::zero(), |acc, p| acc + p)
    }

    /// True when every leg of the pod is preserved along the whole family.
    pub fn is_self_motion_of(&self, pod: &Pod<Rational>) -> bool {
        pod.leg_forms()
            .iter()
            .all(|form| self.leg_polynomial(form).is_zero())
    }
}

/// The rotation family about an oriented axis, in the half-angle
/// parametrization: the parameter value `t` is the tangent of half the
/// rotation angle about the axis direction.
pub fn rotation_motion(axis: &OrientedLine<Rational>) -> Result<RationalMotion> {
    let one = || GaussPoly::one();
    let zero = || GaussPoly::zero();
    let t = GaussPoly::t;
    let two_t = || t().scale(&GaussianRational::from_i64(2));
    // 1 - t^2 and 1 + t^2
    let h = || one() + t() * t();
    let c = || one() - t() * t();
    let m = Mat3::from_rows(
        Vec3::new(c(), -two_t(), zero()),
        Vec3::new(two_t(), c(), zero()),
        Vec3::new(zero(), zero(), h()),
    );
    let base = GroupCoords::new(h(), m, Vec3::zero(), Vec3::zero(), zero());

    // conjugate the canonical z-axis family onto the given axis
    let north = Vec3::new(Rational::zero(), Rational::zero(), Rational::one());
    let rot = Isometry::rotation(crate::geom::rotation_between(&north, axis.dir())?)?;
    let sigma = Isometry::translation(axis.point().clone()).compose(&rot);
    let inv = sigma.inverse();
    let lift_m = |m: &Mat3<Rational>| {
        m.map(|c| GaussPoly::constant(GaussianRational::from_real(c.clone())))
    };
    let lift_v = |v: &Vec3<Rational>| {
        v.map(|c| GaussPoly::constant(GaussianRational::from_real(c.clone())))
    };
    let coords = base
        .act_rigid(&lift_m(sigma.matrix()), &lift_v(sigma.translation_part()), Side::Left)
        .act_rigid(&lift_m(inv.matrix()), &lift_v(inv.translation_part()), Side::Right);
    RationalMotion::new(coords)
}

/// The parameter value at which a limit bond appears.
#[derive(Clone, PartialEq, Debug)]
pub enum RootValue {
    Exact(GaussianRational),
    Approx(ComplexApprox),
}

impl RootValue {
    pub fn approx(&self) -> ComplexApprox {
        match self {
            RootValue::Exact(t) => t.approx(),
            RootValue::Approx(t) => *t,
        }
    }
}

/// A bond obtained as the limit of a motion family at a root of `h`.
#[derive(Clone, Debug)]
pub struct LimitBond {
    pub root: RootValue,
    pub bond: Bond<ComplexApprox>,
    /// Present when the root is Gaussian rational, so the limit point is
    /// evaluated without rounding.
    pub bond_exact: Option<Bond<GaussianRational>>,
}

/// Evaluates the coordinate vector at `t0`, differentiating all 17
/// polynomials together while the value vector vanishes. The order is
/// bounded by the largest coordinate degree; running past it means the
/// family is identically degenerate at `t0`.
fn eval_with_lifting(
    coords: &GroupCoords<GaussPoly>,
    t0: &GaussianRational,
) -> Result<GroupCoords<GaussianRational>> {
    let max_deg = coords
        .to_array()
        .iter()
        .filter_map(|p| p.degree())
        .max()
        .unwrap_or(0);
    let mut work = coords.clone();
    for _ in 0..=max_deg {
        let values = work.map(|p| p.eval(t0));
        if !values.all_zero() {
            return Ok(values);
        }
        work = work.map(|p| p.derivative());
    }
    Err(Error::DegenerateParametrization)
}

fn eval_with_lifting_approx(
    coords: &GroupCoords<Poly<ComplexApprox>>,
    t0: ComplexApprox,
    tol: f64,
) -> Result<GroupCoords<ComplexApprox>> {
    let max_deg = coords
        .to_array()
        .iter()
        .filter_map(|p| p.degree())
        .max()
        .unwrap_or(0);
    let mut work = coords.clone();
    for _ in 0..=max_deg {
        let values = work.map(|p| p.eval(&t0));
        let scale = values
            .to_array()
            .iter()
            .map(|c| c.norm())
            .fold(0.0, f64::max);
        if scale > tol {
            return Ok(values);
        }
        work = work.map(|p| p.derivative());
    }
    Err(Error::DegenerateParametrization)
}

/// The bonds of a motion family: the limits of its poses at the roots of
/// `h`. Roots of a degree at most 2 coordinate are computed exactly over
/// the Gaussian rationals; higher degrees fall back to numerical root
/// finding. Output is ordered by root, lexicographically on (Re, Im).
pub fn limit_bonds(motion: &RationalMotion, tol: f64) -> Result<Vec<LimitBond>> {
    let h = motion.h();
    if h.is_zero() {
        return Err(Error::DegenerateParametrization);
    }
    if h.degree() == Some(0) {
        return Ok(Vec::new());
    }
    let mut out = Vec::new();
    if let Some(mut roots) = exact_roots_deg_le2(h) {
        roots.sort_by(|a, b| {
            (a.re.clone(), a.im.clone())
                .partial_cmp(&(b.re.clone(), b.im.clone()))
                .expect("rational order is total")
        });
        for t0 in roots {
            let values = eval_with_lifting(motion.coords(), &t0)?;
            let point = IsometryPoint::new(values)?;
            let bond_exact = Bond::from_point(point, tol)?;
            out.push(LimitBond {
                root: RootValue::Exact(t0),
                bond: bond_exact.approx(),
                bond_exact: Some(bond_exact),
            });
        }
    } else {
        let hf = h.approx();
        // collapse the clusters a multiple root leaves behind; a double
        // root is only located to about the square root of machine
        // precision, so the merge radius must sit well above that
        let mut roots: Vec<ComplexApprox> = Vec::new();
        for r in numeric_roots(&hf) {
            if !roots.iter().any(|s| (*s - r).norm() < 1e-6) {
                roots.push(r);
            }
        }
        roots.sort_by(|a, b| {
            (a.re, a.im)
                .partial_cmp(&(b.re, b.im))
                .expect("finite values")
        });
        let coords_f = motion.coords().map(|p| p.approx());
        for t0 in roots {
            let values = eval_with_lifting_approx(&coords_f, t0, tol)?;
            let point = IsometryPoint::new(values)?;
            let bond = Bond::from_point(point, tol)?;
            out.push(LimitBond {
                root: RootValue::Approx(t0),
                bond,
                bond_exact: None,
            });
        }
    }
    Ok(out)
}
