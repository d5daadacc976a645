//! Necessary-condition detectors for pod mobility.
//!
//! A mobile pod leaves numerical fingerprints that can be checked without
//! solving for the motion itself: a pair of projection directions whose
//! planar images correspond under a Moebius map, or collinearity patterns
//! among platform and base anchor points. The detectors here find such
//! fingerprints and report them with machine-checkable witnesses. None of
//! them is sufficient for mobility; every report says so.

use crate::bonds::PlanarMobius;
use crate::error::Error;
use crate::geom::{tangent_frame, Direction, OrientedLine, Vec3};
use crate::pod::Pod;
use crate::scalar::ComplexApprox;
use crate::variety::Side;
use crate::Result;
use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Tangent frame of a projection direction, fixed deterministically so
/// extracted planar data is reproducible. For `L = (0,0,-1)` the frame is
/// the standard one: a point `(a,b,c)` projects to `a + ib`.
#[derive(Clone, Copy, Debug)]
pub struct ProjectionFrame {
    l: Direction,
    e1: Vec3<f64>,
    e2: Vec3<f64>,
}

impl ProjectionFrame {
    pub fn new(l: Direction) -> Self {
        let (e1, e2) = tangent_frame(&l);
        ProjectionFrame { l, e1, e2 }
    }

    pub fn direction(&self) -> &Direction {
        &self.l
    }

    pub fn e1(&self) -> &Vec3<f64> {
        &self.e1
    }

    pub fn e2(&self) -> &Vec3<f64> {
        &self.e2
    }

    /// Orthogonal projection along the direction, as a complex number in
    /// the frame coordinates.
    pub fn project(&self, p: &Vec3<f64>) -> ComplexApprox {
        ComplexApprox::new(p.dot(&self.e1), p.dot(&self.e2))
    }
}

/// Projects every point along `l` into the canonical frame coordinates.
pub fn project_points(points: &[Vec3<f64>], l: &Direction) -> Vec<ComplexApprox> {
    let frame = ProjectionFrame::new(*l);
    points.iter().map(|p| frame.project(p)).collect()
}

/// Kernel fit of a planar correspondence: the best homogeneous solution
/// of `c q_i Q_i + d Q_i - a q_i - b = 0` over all pairs.
#[derive(Clone, Copy, Debug)]
pub struct MobiusFit {
    pub coeffs: (ComplexApprox, ComplexApprox, ComplexApprox, ComplexApprox),
    /// Smallest singular value of the pair system; zero means the pairs
    /// lie exactly on a (possibly degenerate) correspondence.
    pub residual: f64,
    /// Fewer than three distinct values on one side: any fit is vacuous.
    pub underdetermined: bool,
    /// The kernel vector as a regular Moebius map, when it is one.
    pub map: Option<PlanarMobius>,
}

/// Smallest-singular-direction of the pair system. Returns the coefficient
/// vector and the singular value.
fn fit_kernel(
    qs: &[ComplexApprox],
    caps: &[ComplexApprox],
) -> ((ComplexApprox, ComplexApprox, ComplexApprox, ComplexApprox), f64) {
    let n = qs.len();
    // complex n x 4 system embedded as real rows [Re M, -Im M; Im M, Re M];
    // zero rows pad the height to 8 so the right factor spans all of R^8
    let rows = (2 * n).max(8);
    let mut m = DMatrix::<f64>::zeros(rows, 8);
    for i in 0..n {
        let row = [-qs[i], -ComplexApprox::new(1.0, 0.0), qs[i] * caps[i], caps[i]];
        for (k, z) in row.iter().enumerate() {
            m[(i, k)] = z.re;
            m[(i, k + 4)] = -z.im;
            m[(n + i, k)] = z.im;
            m[(n + i, k + 4)] = z.re;
        }
    }
    let svd = m.svd(false, true);
    let vt = svd.v_t.expect("requested right singular vectors");
    let mut best = 0usize;
    for k in 1..svd.singular_values.len() {
        if svd.singular_values[k] < svd.singular_values[best] {
            best = k;
        }
    }
    let sigma = svd.singular_values[best];
    let kv = vt.row(best);
    let coeff = |k: usize| ComplexApprox::new(kv[k], kv[k + 4]);
    ((coeff(0), coeff(1), coeff(2), coeff(3)), sigma)
}

fn distinct_count(vals: &[ComplexApprox]) -> usize {
    let scale = 1.0 + vals.iter().map(|v| v.norm()).fold(0.0, f64::max);
    let mut reps: Vec<ComplexApprox> = Vec::new();
    for v in vals {
        if !reps.iter().any(|r| (*r - *v).norm() <= 1e-9 * scale) {
            reps.push(*v);
        }
    }
    reps.len()
}

/// Fits a Moebius correspondence `kappa(q_i) = Q_i` to projected pairs.
/// `None` means no correspondence exists within `tol`. A successful fit
/// with fewer than three distinct values on either side is flagged
/// underdetermined; three points already determine the map, so such fits
/// carry no evidence.
pub fn mobius_fit(
    qs: &[ComplexApprox],
    caps: &[ComplexApprox],
    tol: f64,
) -> Result<Option<MobiusFit>> {
    if qs.len() != caps.len() {
        return Err(Error::LengthMismatch("mobius fit"));
    }
    if qs.is_empty() {
        return Err(Error::Invalid("mobius fit needs at least one pair".into()));
    }
    let (coeffs, residual) = fit_kernel(qs, caps);
    if residual > tol {
        return Ok(None);
    }
    let underdetermined = distinct_count(qs) < 3 || distinct_count(caps) < 3;
    let map = PlanarMobius::new(coeffs.0, coeffs.1, coeffs.2, coeffs.3).ok();
    Ok(Some(MobiusFit {
        coeffs,
        residual,
        underdetermined,
        map,
    }))
}

/// Outcome of testing a point set for collinearity.
enum LineShape {
    /// All points within tolerance of each other.
    Coincident,
    /// A common line with the given unit direction.
    Along(Vec3<f64>),
    NotCollinear,
}

fn line_shape(points: &[Vec3<f64>], idx: &[usize], tol: f64) -> LineShape {
    let scale = 1.0
        + idx
            .iter()
            .map(|&i| points[i].norm())
            .fold(0.0, f64::max);
    let mut anchor: Option<usize> = None;
    let mut dir: Option<Vec3<f64>> = None;
    for &i in idx {
        match anchor {
            None => anchor = Some(i),
            Some(a) => {
                let d = points[i].sub(&points[a]);
                if d.norm() > tol * scale {
                    dir = Some(d.normalized().expect("length checked"));
                    break;
                }
            }
        }
    }
    let (a, d) = match (anchor, dir) {
        (None, _) => return LineShape::Coincident,
        (Some(_), None) => return LineShape::Coincident,
        (Some(a), Some(d)) => (a, d),
    };
    for &i in idx {
        if points[i].sub(&points[a]).cross(&d).norm() > tol * scale {
            return LineShape::NotCollinear;
        }
    }
    LineShape::Along(d)
}

fn is_collinear(points: &[Vec3<f64>], idx: &[usize], tol: f64) -> bool {
    !matches!(line_shape(points, idx, tol), LineShape::NotCollinear)
}

fn all_equal(points: &[Vec3<f64>], idx: &[usize], tol: f64) -> bool {
    matches!(line_shape(points, idx, tol), LineShape::Coincident)
}

/// Supporting line of a collinear index set; `fallback` fixes the
/// direction when the points coincide. `None` for the empty set.
fn supporting_line(
    points: &[Vec3<f64>],
    idx: &[usize],
    tol: f64,
    fallback: Vec3<f64>,
) -> Option<OrientedLine<f64>> {
    let first = *idx.first()?;
    let dir = match line_shape(points, idx, tol) {
        LineShape::Along(d) => d,
        LineShape::Coincident => fallback,
        LineShape::NotCollinear => return None,
    };
    OrientedLine::new(points[first].clone(), dir).ok()
}

/// A split of the leg indices with the platform part collinear and the
/// complementary base part collinear.
#[derive(Clone, Debug)]
pub struct CollinearPartition {
    /// Indices whose platform points are collinear; the complement's base
    /// points are collinear.
    pub indices: Vec<usize>,
    pub platform_line: Option<OrientedLine<f64>>,
    pub base_line: Option<OrientedLine<f64>>,
    /// True when either part has at most two points, which is collinear
    /// for free.
    pub degenerate: bool,
}

impl CollinearPartition {
    /// Re-verifies the witness against the pod.
    pub fn check(&self, pod: &Pod<f64>, tol: f64) -> bool {
        let n = pod.len();
        if self.indices.iter().any(|&i| i >= n) {
            return false;
        }
        let comp: Vec<usize> = (0..n).filter(|i| !self.indices.contains(i)).collect();
        let plat_ok = match &self.platform_line {
            Some(g) => self.indices.iter().all(|&i| g.contains(&pod.platform()[i], tol)),
            None => self.indices.len() <= 1,
        };
        let base_ok = match &self.base_line {
            Some(g) => comp.iter().all(|&i| g.contains(&pod.base()[i], tol)),
            None => comp.len() <= 1,
        };
        plat_ok && base_ok
    }
}

/// Candidate platform index sets that can carry a collinear witness:
/// empty, singletons, maximal sets on a line through two distinct points,
/// and coincidence classes. Any collinear witness set is contained in one
/// of these with a smaller complement, so searching them is complete.
fn candidate_sets(points: &[Vec3<f64>], tol: f64) -> Vec<Vec<usize>> {
    let n = points.len();
    let scale = 1.0 + points.iter().map(|p| p.norm()).fold(0.0, f64::max);
    let mut out: Vec<Vec<usize>> = Vec::new();
    out.push(Vec::new());
    for i in 0..n {
        out.push(vec![i]);
    }
    let push_unique = |s: Vec<usize>, out: &mut Vec<Vec<usize>>| {
        if !out.contains(&s) {
            out.push(s);
        }
    };
    for i in 0..n {
        for j in (i + 1)..n {
            let d = points[j].sub(&points[i]);
            let members: Vec<usize> = if d.norm() > tol * scale {
                let dir = d.normalized().expect("length checked");
                let g = OrientedLine::new(points[i].clone(), dir).expect("unit direction");
                (0..n).filter(|&k| g.contains(&points[k], tol)).collect()
            } else {
                // coincidence class of the shared location
                (0..n)
                    .filter(|&k| points[k].sub(&points[i]).norm() <= tol * scale)
                    .collect()
            };
            push_unique(members, &mut out);
        }
    }
    out
}

/// Searches for a split of the legs with collinear platform part and
/// collinear complementary base part. Returns the first witness in the
/// deterministic candidate order, or `None`.
pub fn collinear_partition(pod: &Pod<f64>, tol: f64) -> Option<CollinearPartition> {
    let n = pod.len();
    let plat = pod.platform();
    let base = pod.base();
    for s in candidate_sets(plat, tol) {
        let comp: Vec<usize> = (0..n).filter(|i| !s.contains(i)).collect();
        if !is_collinear(base, &comp, tol) {
            continue;
        }
        let fallback = Vec3::new(0.0, 0.0, 1.0);
        let platform_line = supporting_line(plat, &s, tol, fallback.clone());
        let base_line = supporting_line(base, &comp, tol, fallback);
        let degenerate = s.len() <= 2 || comp.len() <= 2;
        return Some(CollinearPartition {
            indices: s,
            platform_line,
            base_line,
            degenerate,
        });
    }
    None
}

/// A projection direction pair whose planar images admit a Moebius fit.
#[derive(Clone, Debug)]
pub struct ProjectionPairHit {
    pub left: Direction,
    pub right: Direction,
    pub fit: MobiusFit,
}

fn pair_objective(plat: &[Vec3<f64>], base: &[Vec3<f64>], l: &Direction, r: &Direction) -> f64 {
    let qs = project_points(plat, l);
    let caps = project_points(base, r);
    fit_kernel(&qs, &caps).1
}

fn descend(
    plat: &[Vec3<f64>],
    base: &[Vec3<f64>],
    mut l: Direction,
    mut r: Direction,
) -> (Direction, Direction, f64) {
    let mut f = pair_objective(plat, base, &l, &r);
    let mut h = 0.2f64;
    for _ in 0..200 {
        if h < 1e-12 {
            break;
        }
        let (l1, l2) = tangent_frame(&l);
        let (r1, r2) = tangent_frame(&r);
        let retract = |d: &Direction, t: &Vec3<f64>, s: f64| {
            Direction::new(d.vec().add(&t.scale(&s))).expect("near-unit vector")
        };
        let mut cands: Vec<(Direction, Direction)> = Vec::with_capacity(8);
        for s in [h, -h] {
            cands.push((retract(&l, &l1, s), r));
            cands.push((retract(&l, &l2, s), r));
            cands.push((l, retract(&r, &r1, s)));
            cands.push((l, retract(&r, &r2, s)));
        }
        let mut best: Option<(f64, Direction, Direction)> = None;
        for (cl, cr) in cands {
            let fc = pair_objective(plat, base, &cl, &cr);
            if best.as_ref().is_none_or(|(bf, _, _)| fc < *bf) {
                best = Some((fc, cl, cr));
            }
        }
        let (bf, bl, br) = best.expect("eight candidates");
        if bf < f {
            f = bf;
            l = bl;
            r = br;
        } else {
            h *= 0.5;
        }
    }
    (l, r, f)
}

fn random_direction(rng: &mut ChaCha8Rng) -> Direction {
    loop {
        let w = Vec3::new(
            rng.random_range(-1.0..1.0),
            rng.random_range(-1.0..1.0),
            rng.random_range(-1.0..1.0),
        );
        let n = w.norm();
        if n > 0.1 && n <= 1.0 {
            return Direction::new(w).expect("norm checked");
        }
    }
}

fn dir_key(d: &Direction) -> (f64, f64, f64) {
    let v = d.vec();
    (v.0[0], v.0[1], v.0[2])
}

/// Multi-start search over direction pairs `(L, R)` for projections whose
/// planar images correspond under a Moebius map. Each random start also
/// spawns its antipodal variant `(-L, R)`, which explores the conjugated
/// sheet. Deterministic in `seed`; minima with objective at most `tol`
/// are deduplicated by angular distance and sorted by residual, then by
/// the direction coordinates.
pub fn search_projection_pair(
    pod: &Pod<f64>,
    starts: u32,
    seed: u64,
    tol: f64,
) -> Vec<ProjectionPairHit> {
    let plat = pod.platform();
    let base = pod.base();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut found: Vec<ProjectionPairHit> = Vec::new();
    for _ in 0..starts {
        let l0 = random_direction(&mut rng);
        let r0 = random_direction(&mut rng);
        for li in [l0, l0.antipode()] {
            let (l, r, f) = descend(plat, base, li, r0);
            if f > tol {
                continue;
            }
            let qs = project_points(plat, &l);
            let caps = project_points(base, &r);
            let fit = match mobius_fit(&qs, &caps, tol) {
                Ok(Some(fit)) => fit,
                _ => continue,
            };
            found.push(ProjectionPairHit { left: l, right: r, fit });
        }
    }
    found.sort_by(|a, b| {
        (a.fit.residual, dir_key(&a.left), dir_key(&a.right))
            .partial_cmp(&(b.fit.residual, dir_key(&b.left), dir_key(&b.right)))
            .expect("finite residuals")
    });
    let mut out: Vec<ProjectionPairHit> = Vec::new();
    for hit in found {
        let dup = out.iter().any(|k| {
            k.left.angle_to(&hit.left).max(k.right.angle_to(&hit.right)) < 1e-3
        });
        if !dup {
            out.push(hit);
        }
    }
    out
}

/// Knobs for the mobility detectors.
#[derive(Clone, Copy, Debug)]
pub struct AnalyzeOptions {
    pub starts: u32,
    pub seed: u64,
    /// Residual threshold for projection-pair hits.
    pub tol: f64,
    /// Tolerance for collinearity and coincidence of anchor points.
    pub line_tol: f64,
    /// How many distinct regular hits count as "many" pairs.
    pub min_pairs: usize,
}

impl Default for AnalyzeOptions {
    fn default() -> Self {
        AnalyzeOptions {
            starts: 64,
            seed: 0,
            tol: 1e-6,
            line_tol: 1e-9,
            min_pairs: 5,
        }
    }
}

/// Witness for a collinear platform part whose complementary base points
/// all coincide (or the mirrored statement).
#[derive(Clone, Debug)]
pub struct ConcentratedWitness {
    /// Side carrying the collinear part: `Left` means platform points.
    pub side: Side,
    pub indices: Vec<usize>,
    pub line: Option<OrientedLine<f64>>,
    /// Common location of the complementary points on the other side;
    /// `None` when the complement is empty.
    pub common_point: Option<Vec3<f64>>,
    pub degenerate: bool,
}

impl ConcentratedWitness {
    pub fn check(&self, pod: &Pod<f64>, tol: f64) -> bool {
        let n = pod.len();
        if self.indices.iter().any(|&i| i >= n) {
            return false;
        }
        let comp: Vec<usize> = (0..n).filter(|i| !self.indices.contains(i)).collect();
        let (line_pts, point_pts) = match self.side {
            Side::Left => (pod.platform(), pod.base()),
            Side::Right => (pod.base(), pod.platform()),
        };
        is_collinear(line_pts, &self.indices, tol) && all_equal(point_pts, &comp, tol)
    }
}

/// Witness for platform points on two parallel lines with the base points
/// on two parallel lines over the same index split.
#[derive(Clone, Debug)]
pub struct ParallelWitness {
    pub indices: Vec<usize>,
    pub platform_lines: (OrientedLine<f64>, OrientedLine<f64>),
    pub base_lines: (OrientedLine<f64>, OrientedLine<f64>),
    pub degenerate: bool,
}

impl ParallelWitness {
    pub fn check(&self, pod: &Pod<f64>, tol: f64) -> bool {
        let n = pod.len();
        if self.indices.iter().any(|&i| i >= n) {
            return false;
        }
        let comp: Vec<usize> = (0..n).filter(|i| !self.indices.contains(i)).collect();
        let parallel = |a: &OrientedLine<f64>, b: &OrientedLine<f64>| {
            a.dir().cross(b.dir()).norm() <= tol * 10.0
        };
        let on = |g: &OrientedLine<f64>, pts: &[Vec3<f64>], idx: &[usize]| {
            idx.iter().all(|&i| g.contains(&pts[i], tol))
        };
        on(&self.platform_lines.0, pod.platform(), &self.indices)
            && on(&self.platform_lines.1, pod.platform(), &comp)
            && on(&self.base_lines.0, pod.base(), &self.indices)
            && on(&self.base_lines.1, pod.base(), &comp)
            && parallel(&self.platform_lines.0, &self.platform_lines.1)
            && parallel(&self.base_lines.0, &self.base_lines.1)
    }
}

/// Flags for the higher-mobility necessary conditions.
#[derive(Clone, Debug)]
pub struct MobilityTwoFlags {
    /// Many well-separated projection pairs fit, sampled as at least
    /// `min_pairs` distinct regular hits.
    pub condition_a: bool,
    pub regular_pair_count: usize,
    /// Collinear part on one side with all complementary points on the
    /// other side coincident.
    pub condition_b: bool,
    pub concentrated_witness: Option<ConcentratedWitness>,
    /// Both sides split over the same indices onto two parallel lines.
    pub condition_c: bool,
    pub parallel_witness: Option<ParallelWitness>,
}

/// Combined detector output. Flags are necessary conditions only: a set
/// flag never proves mobility, and an unset flag only rules out motions
/// within the numerical reach of the search.
#[derive(Clone, Debug)]
pub struct AnalysisReport {
    pub note: &'static str,
    pub pod_size: usize,
    pub options: AnalyzeOptions,
    /// There is a projection pair whose images correspond under a regular
    /// Moebius map.
    pub condition_i: bool,
    pub projection_hits: Vec<ProjectionPairHit>,
    /// There is a collinear/collinear split of the legs.
    pub condition_ii: bool,
    pub collinear_witness: Option<CollinearPartition>,
    pub mobility_two: Option<MobilityTwoFlags>,
}

pub const NECESSARY_ONLY: &str =
    "necessary conditions only: flags do not certify that a self-motion exists";

fn indices_of(mask: u64, n: usize) -> Vec<usize> {
    (0..n).filter(|i| mask & (1 << i) != 0).collect()
}

fn concentrated_search(pod: &Pod<f64>, tol: f64) -> Option<ConcentratedWitness> {
    let n = pod.len();
    for side in [Side::Left, Side::Right] {
        let (line_pts, point_pts) = match side {
            Side::Left => (pod.platform(), pod.base()),
            Side::Right => (pod.base(), pod.platform()),
        };
        for mask in 0u64..(1u64 << n) {
            let s = indices_of(mask, n);
            let comp: Vec<usize> = (0..n).filter(|i| !s.contains(i)).collect();
            if !is_collinear(line_pts, &s, tol) || !all_equal(point_pts, &comp, tol) {
                continue;
            }
            let line = supporting_line(line_pts, &s, tol, Vec3::new(0.0, 0.0, 1.0));
            let common_point = comp.first().map(|&i| point_pts[i].clone());
            let degenerate = s.len() <= 2 || comp.len() <= 1;
            return Some(ConcentratedWitness {
                side,
                indices: s,
                line,
                common_point,
                degenerate,
            });
        }
    }
    None
}

fn parallel_search(pod: &Pod<f64>, tol: f64) -> Option<ParallelWitness> {
    let n = pod.len();
    if n < 4 {
        return None;
    }
    let plat = pod.platform();
    let base = pod.base();
    for mask in 0u64..(1u64 << n) {
        let s = indices_of(mask, n);
        if s.len() < 2 || s.len() > n - 2 {
            continue;
        }
        let comp: Vec<usize> = (0..n).filter(|i| !s.contains(i)).collect();
        let pair_lines = |pts: &[Vec3<f64>]| -> Option<(OrientedLine<f64>, OrientedLine<f64>)> {
            let (d1, d2) = match (line_shape(pts, &s, tol), line_shape(pts, &comp, tol)) {
                (LineShape::NotCollinear, _) | (_, LineShape::NotCollinear) => return None,
                (LineShape::Along(a), LineShape::Along(b)) => {
                    if a.cross(&b).norm() > tol * 10.0 {
                        return None;
                    }
                    (a.clone(), b)
                }
                (LineShape::Along(a), LineShape::Coincident) => (a.clone(), a),
                (LineShape::Coincident, LineShape::Along(b)) => (b.clone(), b),
                (LineShape::Coincident, LineShape::Coincident) => {
                    (Vec3::new(0.0, 0.0, 1.0), Vec3::new(0.0, 0.0, 1.0))
                }
            };
            let g1 = OrientedLine::new(pts[s[0]].clone(), d1).ok()?;
            let g2 = OrientedLine::new(pts[comp[0]].clone(), d2).ok()?;
            Some((g1, g2))
        };
        let Some(platform_lines) = pair_lines(plat) else {
            continue;
        };
        let Some(base_lines) = pair_lines(base) else {
            continue;
        };
        let degenerate = s.len() <= 2 || comp.len() <= 2;
        return Some(ParallelWitness {
            indices: s,
            platform_lines,
            base_lines,
            degenerate,
        });
    }
    None
}

fn regular_hit_count(hits: &[ProjectionPairHit]) -> usize {
    hits.iter()
        .filter(|h| h.fit.map.is_some() && !h.fit.underdetermined)
        .count()
}

fn base_report(pod: &Pod<f64>, opts: &AnalyzeOptions) -> AnalysisReport {
    let hits = search_projection_pair(pod, opts.starts, opts.seed, opts.tol);
    let condition_i = regular_hit_count(&hits) > 0;
    let collinear_witness = collinear_partition(pod, opts.line_tol);
    AnalysisReport {
        note: NECESSARY_ONLY,
        pod_size: pod.len(),
        options: *opts,
        condition_i,
        projection_hits: hits,
        condition_ii: collinear_witness.is_some(),
        collinear_witness,
        mobility_two: None,
    }
}

/// Detectors for single-degree mobility: a Moebius projection pair or a
/// collinear/collinear split.
pub fn mobility_one_report(pod: &Pod<f64>, opts: &AnalyzeOptions) -> AnalysisReport {
    base_report(pod, opts)
}

/// Detectors for mobility two or higher, on top of the single-degree
/// report: many projection pairs, a collinear part against coincident
/// complementary points, or matched parallel-line splits.
pub fn mobility_two_report(pod: &Pod<f64>, opts: &AnalyzeOptions) -> AnalysisReport {
    let mut report = base_report(pod, opts);
    let count = regular_hit_count(&report.projection_hits);
    let concentrated_witness = concentrated_search(pod, opts.line_tol);
    let parallel_witness = parallel_search(pod, opts.line_tol);
    report.mobility_two = Some(MobilityTwoFlags {
        condition_a: count >= opts.min_pairs,
        regular_pair_count: count,
        condition_b: concentrated_witness.is_some(),
        concentrated_witness,
        condition_c: parallel_witness.is_some(),
        parallel_witness,
    });
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bonds::MobiusKind;

    fn cf(re: f64, im: f64) -> ComplexApprox {
        ComplexApprox::new(re, im)
    }

    fn vf(x: f64, y: f64, z: f64) -> Vec3<f64> {
        Vec3::new(x, y, z)
    }

    fn south() -> Direction {
        Direction::from_coords(0.0, 0.0, -1.0).unwrap()
    }

    fn north() -> Direction {
        Direction::from_coords(0.0, 0.0, 1.0).unwrap()
    }

    fn float_pod(plat: Vec<Vec3<f64>>, base: Vec<Vec3<f64>>) -> Pod<f64> {
        let n = plat.len();
        Pod::new(plat, base, vec![1.0; n]).unwrap()
    }

    #[test]
    fn projection_pinned_and_antipodal() {
        let p = vf(2.0, 5.0, -3.0);
        let qs = project_points(&[p.clone(), Vec3::zero()], &south());
        assert!((qs[0] - cf(2.0, 5.0)).norm() < 1e-15);
        assert!(qs[1].norm() < 1e-15);
        let qn = project_points(&[p], &north());
        assert!((qn[0] - cf(2.0, -5.0)).norm() < 1e-15);

        // the antipodal frame conjugates the projection exactly
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for _ in 0..10 {
            let l = random_direction(&mut rng);
            let pts = vec![
                vf(
                    rng.random_range(-5.0..5.0),
                    rng.random_range(-5.0..5.0),
                    rng.random_range(-5.0..5.0),
                ),
                vf(1.0, -2.0, 0.5),
            ];
            let a = project_points(&pts, &l);
            let b = project_points(&pts, &l.antipode());
            for (x, y) in a.iter().zip(b.iter()) {
                assert!((x.conj() - *y).norm() < 1e-14);
            }
        }
    }

    #[test]
    fn projection_frame_is_orthonormal() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..20 {
            let l = random_direction(&mut rng);
            let f = ProjectionFrame::new(l);
            assert!((f.e1().norm() - 1.0).abs() < 1e-12);
            assert!((f.e2().norm() - 1.0).abs() < 1e-12);
            assert!(f.e1().dot(f.e2()).abs() < 1e-12);
            assert!(f.e1().dot(&l.vec()).abs() < 1e-12);
            assert!(f.e2().dot(&l.vec()).abs() < 1e-12);
            // (e1, e2, -L) right-handed
            assert!(f.e1().cross(f.e2()).add(&l.vec()).norm() < 1e-12);
        }
        let fs = ProjectionFrame::new(south());
        assert!(fs.e1().sub(&vf(1.0, 0.0, 0.0)).norm() < 1e-15);
        assert!(fs.e2().sub(&vf(0.0, 1.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn mobius_fit_identity_and_inversion() {
        let qs: Vec<ComplexApprox> = vec![
            cf(0.3, 1.0),
            cf(-1.2, 0.4),
            cf(2.0, -0.7),
            cf(0.9, 0.9),
            cf(-0.5, -1.5),
        ];
        let fit = mobius_fit(&qs, &qs, 1e-9).unwrap().unwrap();
        assert!(fit.residual < 1e-12);
        assert!(!fit.underdetermined);
        let id = PlanarMobius::new(cf(1.0, 0.0), cf(0.0, 0.0), cf(0.0, 0.0), cf(1.0, 0.0)).unwrap();
        assert!(fit.map.unwrap().proj_close(&id, 1e-9));

        let caps: Vec<ComplexApprox> = qs.iter().map(|q| cf(1.0, 0.0) / *q).collect();
        let fit2 = mobius_fit(&qs, &caps, 1e-9).unwrap().unwrap();
        assert!(fit2.residual < 1e-12);
        let inv = PlanarMobius::new(cf(0.0, 0.0), cf(1.0, 0.0), cf(1.0, 0.0), cf(0.0, 0.0)).unwrap();
        let map = fit2.map.unwrap();
        assert!(map.proj_close(&inv, 1e-9));
        // soundness: the fitted map reproduces every pair
        for (q, cap) in qs.iter().zip(caps.iter()) {
            assert!((map.apply(*q) - *cap).norm() < 1e-9);
        }
    }

    #[test]
    fn mobius_fit_rejects_and_validates() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        let rand_c = |r: &mut ChaCha8Rng| cf(r.random_range(-3.0..3.0), r.random_range(-3.0..3.0));
        let qs: Vec<ComplexApprox> = (0..6).map(|_| rand_c(&mut rng)).collect();
        let caps: Vec<ComplexApprox> = (0..6).map(|_| rand_c(&mut rng)).collect();
        assert!(mobius_fit(&qs, &caps, 1e-9).unwrap().is_none());

        assert_eq!(
            mobius_fit(&qs, &caps[..4], 1e-9).unwrap_err(),
            Error::LengthMismatch("mobius fit")
        );
        assert!(matches!(
            mobius_fit(&[], &[], 1e-9).unwrap_err(),
            Error::Invalid(_)
        ));
    }

    #[test]
    fn mobius_fit_underdetermined_flag() {
        // two distinct consistent pairs: a fit exists but proves nothing
        let qs = vec![cf(1.0, 0.0), cf(1.0, 0.0), cf(2.0, 0.0), cf(2.0, 0.0)];
        let caps = vec![cf(5.0, 0.0), cf(5.0, 0.0), cf(7.0, 0.0), cf(7.0, 0.0)];
        let fit = mobius_fit(&qs, &caps, 1e-9).unwrap().unwrap();
        assert!(fit.underdetermined);
        assert!(fit.residual < 1e-12);

        // below four pairs the padded system always has a kernel
        let fit_small = mobius_fit(&[cf(1.0, 2.0)], &[cf(3.0, -1.0)], 1e-9)
            .unwrap()
            .unwrap();
        assert!(fit_small.underdetermined);
        assert!(fit_small.residual < 1e-12);
    }

    #[test]
    fn mobius_fit_invariant_under_unit_rotations() {
        let qs: Vec<ComplexApprox> = vec![
            cf(0.3, 1.0),
            cf(-1.2, 0.4),
            cf(2.0, -0.7),
            cf(0.9, 0.9),
            cf(-0.5, -1.5),
            cf(1.4, 0.2),
        ];
        let kappa =
            PlanarMobius::new(cf(1.0, 0.5), cf(0.2, -0.3), cf(0.7, 0.1), cf(1.0, 0.0)).unwrap();
        let caps: Vec<ComplexApprox> = qs.iter().map(|q| kappa.apply(*q)).collect();
        let (_, r0) = fit_kernel(&qs, &caps);

        let u1 = cf(0.6, 0.8);
        let u2 = cf(-0.8, 0.6);
        let qs2: Vec<ComplexApprox> = qs.iter().map(|q| *q * u1).collect();
        let caps2: Vec<ComplexApprox> = caps.iter().map(|c| *c * u2).collect();
        let (_, r1) = fit_kernel(&qs2, &caps2);
        assert!((r0 - r1).abs() < 1e-12);
        assert!(mobius_fit(&qs2, &caps2, 1e-9).unwrap().is_some());

        // and for unrelated data the verdict stays None
        let mut rng = ChaCha8Rng::seed_from_u64(33);
        let noise: Vec<ComplexApprox> = (0..6)
            .map(|_| cf(rng.random_range(-2.0..2.0), rng.random_range(-2.0..2.0)))
            .collect();
        let (_, n0) = fit_kernel(&qs, &noise);
        let noise2: Vec<ComplexApprox> = noise.iter().map(|c| *c * u2).collect();
        let (_, n1) = fit_kernel(&qs2, &noise2);
        assert!((n0 - n1).abs() < 1e-10);
    }

    fn example_partition_pod() -> Pod<f64> {
        // platform 0..2 on the z-axis; base 3..5 on the x-axis
        float_pod(
            vec![
                vf(0.0, 0.0, 1.0),
                vf(0.0, 0.0, 2.0),
                vf(0.0, 0.0, 4.0),
                vf(3.0, 1.0, 0.0),
                vf(-2.0, 5.0, 1.0),
                vf(1.0, 1.0, 7.0),
            ],
            vec![
                vf(2.0, 3.0, 1.0),
                vf(-1.0, 2.0, 5.0),
                vf(4.0, -2.0, 2.0),
                vf(1.0, 0.0, 0.0),
                vf(4.0, 0.0, 0.0),
                vf(-2.0, 0.0, 0.0),
            ],
        )
    }

    #[test]
    fn collinear_partition_finds_planted_split() {
        let pod = example_partition_pod();
        let w = collinear_partition(&pod, 1e-9).expect("planted witness");
        assert_eq!(w.indices, vec![0, 1, 2]);
        assert!(!w.degenerate);
        assert!(w.check(&pod, 1e-9));
        let g = w.platform_line.as_ref().unwrap();
        assert!(g.contains(&vf(0.0, 0.0, 3.0), 1e-9));

        // tampering must fail the check
        let mut bad = w.clone();
        bad.indices = vec![0, 1, 3];
        assert!(!bad.check(&pod, 1e-9));
    }

    #[test]
    fn collinear_partition_small_pods_always_witness() {
        let pod = float_pod(
            vec![vf(1.0, 2.0, 3.0), vf(-4.0, 0.0, 1.0)],
            vec![vf(0.0, 1.0, 0.0), vf(2.0, 2.0, 2.0)],
        );
        let w = collinear_partition(&pod, 1e-9).expect("small pods always split");
        assert!(w.degenerate);
        assert!(w.check(&pod, 1e-9));
    }

    fn brute_force_split(pod: &Pod<f64>, tol: f64) -> bool {
        let n = pod.len();
        let collinear_mask = |pts: &[Vec3<f64>], mask: u64| {
            let idx = indices_of(mask, n);
            // independent triple-based check
            let scale = 1.0 + idx.iter().map(|&i| pts[i].norm()).fold(0.0, f64::max);
            for a in 0..idx.len() {
                for b in (a + 1)..idx.len() {
                    for c in (b + 1)..idx.len() {
                        let u = pts[idx[b]].sub(&pts[idx[a]]);
                        let w = pts[idx[c]].sub(&pts[idx[a]]);
                        if u.cross(&w).norm() > tol * scale * scale {
                            return false;
                        }
                    }
                }
            }
            true
        };
        for mask in 0u64..(1u64 << n) {
            let comp = !mask & ((1u64 << n) - 1);
            if collinear_mask(pod.platform(), mask) && collinear_mask(pod.base(), comp) {
                return true;
            }
        }
        false
    }

    #[test]
    fn collinear_partition_agrees_with_brute_force() {
        let mut rng = ChaCha8Rng::seed_from_u64(60);
        for round in 0..30 {
            let n = rng.random_range(4..=7);
            let mut plat: Vec<Vec3<f64>> = Vec::new();
            let mut base: Vec<Vec3<f64>> = Vec::new();
            for _ in 0..n {
                plat.push(vf(
                    rng.random_range(-6..6) as f64,
                    rng.random_range(-6..6) as f64,
                    rng.random_range(-6..6) as f64,
                ));
                base.push(vf(
                    rng.random_range(-6..6) as f64,
                    rng.random_range(-6..6) as f64,
                    rng.random_range(-6..6) as f64,
                ));
            }
            if round % 3 == 0 {
                // plant a collinear platform part
                let m = rng.random_range(2..=n - 1);
                for (k, p) in plat.iter_mut().take(m).enumerate() {
                    *p = vf(k as f64, 2.0 * k as f64, -1.0);
                }
            }
            let pod = float_pod(plat, base);
            let got = collinear_partition(&pod, 1e-9);
            assert_eq!(
                got.is_some(),
                brute_force_split(&pod, 1e-9),
                "round {round}"
            );
            if let Some(w) = got {
                assert!(w.check(&pod, 1e-9), "round {round}");
            }
        }
    }

    #[test]
    fn search_finds_similarity_projection_pod() {
        // bases are the platform's xy-projection scaled by -2, any heights
        let plat = vec![
            vf(1.0, 0.0, 3.0),
            vf(0.0, 2.0, -1.0),
            vf(-2.0, 1.0, 0.5),
            vf(1.5, -1.0, 2.0),
            vf(0.5, 0.5, -2.0),
            vf(-1.0, -2.0, 1.0),
        ];
        let base: Vec<Vec3<f64>> = plat
            .iter()
            .enumerate()
            .map(|(k, p)| vf(-2.0 * p.0[0], -2.0 * p.0[1], 0.3 * k as f64))
            .collect();
        let pod = float_pod(plat, base);
        let hits = search_projection_pair(&pod, 40, 1, 1e-6);
        assert!(!hits.is_empty());
        let polar = hits.iter().find(|h| {
            (h.left.angle_to(&south()) < 1e-4 && h.right.angle_to(&south()) < 1e-4)
                || (h.left.angle_to(&north()) < 1e-4 && h.right.angle_to(&north()) < 1e-4)
        });
        let hit = polar.expect("matched-pole hit");
        let map = hit.fit.map.as_ref().expect("regular fit");
        assert_eq!(map.kind(1e-6), MobiusKind::Similarity);
        let expect =
            PlanarMobius::new(cf(-2.0, 0.0), cf(0.0, 0.0), cf(0.0, 0.0), cf(1.0, 0.0)).unwrap();
        assert!(map.proj_close(&expect, 1e-3));
    }

    #[test]
    fn search_empty_for_generic_pod() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let pts = |r: &mut ChaCha8Rng| {
            (0..6)
                .map(|_| {
                    vf(
                        r.random_range(-5.0..5.0),
                        r.random_range(-5.0..5.0),
                        r.random_range(-5.0..5.0),
                    )
                })
                .collect::<Vec<_>>()
        };
        let pod = float_pod(pts(&mut rng), pts(&mut rng));
        let hits = search_projection_pair(&pod, 12, 2, 1e-9);
        assert!(hits.is_empty());
    }

    #[test]
    fn search_is_deterministic() {
        let pod = example_partition_pod();
        let a = search_projection_pair(&pod, 10, 7, 1e-6);
        let b = search_projection_pair(&pod, 10, 7, 1e-6);
        assert_eq!(a.len(), b.len());
        for (x, y) in a.iter().zip(b.iter()) {
            assert_eq!(dir_key(&x.left), dir_key(&y.left));
            assert_eq!(dir_key(&x.right), dir_key(&y.right));
            assert_eq!(x.fit.residual, y.fit.residual);
        }
    }

    #[test]
    fn mobility_one_report_flags_collinear_split() {
        let pod = example_partition_pod();
        let opts = AnalyzeOptions {
            starts: 8,
            ..AnalyzeOptions::default()
        };
        let report = mobility_one_report(&pod, &opts);
        assert_eq!(report.note, NECESSARY_ONLY);
        assert_eq!(report.pod_size, 6);
        assert!(report.condition_ii);
        assert!(report.collinear_witness.unwrap().check(&pod, 1e-9));
        assert!(report.mobility_two.is_none());
    }

    #[test]
    fn mobility_reports_generic_pod_all_false() {
        let mut rng = ChaCha8Rng::seed_from_u64(14);
        let pts = |r: &mut ChaCha8Rng| {
            (0..6)
                .map(|_| {
                    vf(
                        r.random_range(-5.0..5.0),
                        r.random_range(-5.0..5.0),
                        r.random_range(-5.0..5.0),
                    )
                })
                .collect::<Vec<_>>()
        };
        let pod = float_pod(pts(&mut rng), pts(&mut rng));
        let opts = AnalyzeOptions {
            starts: 10,
            tol: 1e-9,
            ..AnalyzeOptions::default()
        };
        let report = mobility_two_report(&pod, &opts);
        assert!(!report.condition_i);
        assert!(!report.condition_ii);
        let m2 = report.mobility_two.unwrap();
        assert!(!m2.condition_a);
        assert!(!m2.condition_b);
        assert!(!m2.condition_c);
    }

    #[test]
    fn mobility_two_concentrated_condition() {
        // platform 0..3 collinear, bases 4..5 coincident
        let pod = float_pod(
            vec![
                vf(0.0, 0.0, 0.0),
                vf(1.0, 1.0, 0.0),
                vf(2.0, 2.0, 0.0),
                vf(3.0, 3.0, 0.0),
                vf(5.0, -1.0, 2.0),
                vf(0.0, 4.0, 1.0),
            ],
            vec![
                vf(2.0, 3.0, 1.0),
                vf(-1.0, 2.0, 5.0),
                vf(4.0, -2.0, 2.0),
                vf(0.0, 1.0, 1.0),
                vf(3.0, 3.0, 3.0),
                vf(3.0, 3.0, 3.0),
            ],
        );
        let opts = AnalyzeOptions {
            starts: 4,
            ..AnalyzeOptions::default()
        };
        let report = mobility_two_report(&pod, &opts);
        let m2 = report.mobility_two.unwrap();
        assert!(m2.condition_b);
        let w = m2.concentrated_witness.unwrap();
        assert!(w.check(&pod, 1e-9));
        assert_eq!(w.side, Side::Left);
        assert_eq!(w.indices, vec![0, 1, 2, 3]);
        assert_eq!(w.common_point.unwrap(), vf(3.0, 3.0, 3.0));
    }

    #[test]
    fn mobility_two_parallel_lines_condition() {
        // both sides split {0,1,2} / {3,4,5} onto parallel line pairs
        let pod = float_pod(
            vec![
                vf(0.0, 0.0, 0.0),
                vf(0.0, 0.0, 1.0),
                vf(0.0, 0.0, 3.0),
                vf(1.0, 0.0, 0.5),
                vf(1.0, 0.0, 2.0),
                vf(1.0, 0.0, -1.0),
            ],
            vec![
                vf(2.0, 1.0, 0.0),
                vf(2.0, 3.0, 0.0),
                vf(2.0, -1.0, 0.0),
                vf(5.0, 0.0, 1.0),
                vf(5.0, 2.0, 1.0),
                vf(5.0, 7.0, 1.0),
            ],
        );
        let opts = AnalyzeOptions {
            starts: 4,
            ..AnalyzeOptions::default()
        };
        let report = mobility_two_report(&pod, &opts);
        let m2 = report.mobility_two.unwrap();
        assert!(m2.condition_c);
        let w = m2.parallel_witness.unwrap();
        assert_eq!(w.indices, vec![0, 1, 2]);
        assert!(!w.degenerate);
        assert!(w.check(&pod, 1e-9));

        // condition alpha counting: the planted similarity pod has only
        // isolated pole hits, so the default threshold stays unset
        assert!(!m2.condition_a);
    }

    #[test]
    fn min_pairs_threshold_controls_condition_a() {
        let plat = vec![
            vf(1.0, 0.0, 3.0),
            vf(0.0, 2.0, -1.0),
            vf(-2.0, 1.0, 0.5),
            vf(1.5, -1.0, 2.0),
            vf(0.5, 0.5, -2.0),
            vf(-1.0, -2.0, 1.0),
        ];
        let base: Vec<Vec3<f64>> = plat
            .iter()
            .enumerate()
            .map(|(k, p)| vf(-2.0 * p.0[0], -2.0 * p.0[1], 0.3 * k as f64))
            .collect();
        let pod = float_pod(plat, base);
        let lax = AnalyzeOptions {
            starts: 40,
            seed: 1,
            min_pairs: 1,
            ..AnalyzeOptions::default()
        };
        let report = mobility_two_report(&pod, &lax);
        assert!(report.condition_i);
        assert!(report.mobility_two.unwrap().condition_a);

        let strict = AnalyzeOptions {
            starts: 40,
            seed: 1,
            min_pairs: 50,
            ..AnalyzeOptions::default()
        };
        let report2 = mobility_two_report(&pod, &strict);
        assert!(!report2.mobility_two.unwrap().condition_a);
    }
}
