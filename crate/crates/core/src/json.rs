//! JSON wire formats, schema `podbond-1`.
//!
//! Readers are liberal: a rational field accepts a `"p/q"` string, a decimal
//! string, or a JSON number, and decimal digits convert to rationals verbatim
//! (never through `f64`). Writers are strict: fields are emitted in a fixed
//! order with one canonical spelling per value, so equal inputs always
//! serialize to identical bytes.

use num_traits::Zero;
use serde_json::{Map, Number, Value};

use crate::analyze::{
    AnalysisReport, CollinearPartition, ConcentratedWitness, MobiusFit, ParallelWitness,
    ProjectionPairHit,
};
use crate::bonds::{Bond, BondMembership, PlanarMobius, RationalMotion};
use crate::boundary::NormalFormCertificate;
use crate::error::Error;
use crate::geom::{Direction, Mat3, OrientedLine, Vec3};
use crate::pod::Pod;
use crate::poly::GaussPoly;
use crate::rigid::Isometry;
use crate::scalar::{
    format_rational, parse_rational, ComplexApprox, GaussianRational, Rational, RealScalar, Ring,
    Scalar,
};
use crate::variety::{GroupCoords, IsometryPoint, Side};
use crate::Result;

/// Schema tag carried by every document this module writes. Readers accept
/// documents without the tag but reject any other value.
pub const SCHEMA: &str = "podbond-1";

// ---------------------------------------------------------------------------
// scalar values

fn value_to_rational(v: &Value) -> Result<Rational> {
    match v {
        Value::String(s) => parse_rational(s),
        Value::Number(n) => parse_rational(&n.to_string()),
        other => Err(Error::Parse(format!("expected a rational, got {other}"))),
    }
}

fn value_to_f64(v: &Value) -> Result<f64> {
    match v {
        Value::Number(n) => n
            .as_f64()
            .ok_or_else(|| Error::Parse(format!("number out of range: {n}"))),
        Value::String(s) => Ok(parse_rational(s)?.approx()),
        other => Err(Error::Parse(format!("expected a number, got {other}"))),
    }
}

fn value_to_gauss(v: &Value) -> Result<GaussianRational> {
    match v {
        Value::Object(m) => {
            let part = |k: &str| -> Result<Rational> {
                m.get(k).map_or_else(|| Ok(Rational::zero()), value_to_rational)
            };
            Ok(GaussianRational::new(part("re")?, part("im")?))
        }
        // a bare value is a real scalar
        other => Ok(GaussianRational::from_real(value_to_rational(other)?)),
    }
}

fn value_to_complex(v: &Value) -> Result<ComplexApprox> {
    match v {
        Value::Array(a) if a.len() == 2 => {
            Ok(ComplexApprox::new(value_to_f64(&a[0])?, value_to_f64(&a[1])?))
        }
        Value::Array(a) => Err(Error::Parse(format!(
            "complex value needs [re, im], got {} entries",
            a.len()
        ))),
        other => Ok(ComplexApprox::new(value_to_f64(other)?, 0.0)),
    }
}

fn rational_value(q: &Rational) -> Value {
    Value::String(format_rational(q))
}

fn gauss_value(z: &GaussianRational) -> Value {
    object(vec![
        ("re", rational_value(&z.re)),
        ("im", rational_value(&z.im)),
    ])
}

fn f64_value(x: f64) -> Value {
    Number::from_f64(x).map_or(Value::Null, Value::Number)
}

fn complex_value(z: &ComplexApprox) -> Value {
    Value::Array(vec![f64_value(z.re), f64_value(z.im)])
}

// ---------------------------------------------------------------------------
// assembly helpers

/// Object with the given entries, in the given order.
pub fn object(entries: Vec<(&str, Value)>) -> Value {
    let mut m = Map::new();
    for (k, v) in entries {
        m.insert(k.to_owned(), v);
    }
    Value::Object(m)
}

/// Object with the schema tag first.
pub fn document(entries: Vec<(&str, Value)>) -> Value {
    let mut m = Map::new();
    m.insert("schema".to_owned(), Value::String(SCHEMA.to_owned()));
    for (k, v) in entries {
        m.insert(k.to_owned(), v);
    }
    Value::Object(m)
}

/// Pretty-prints a value with a trailing newline. The output is a pure
/// function of the value, so equal inputs render to identical bytes.
pub fn render(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("value serialization cannot fail");
    s.push('\n');
    s
}

fn root_object(text: &str) -> Result<Map<String, Value>> {
    let v: Value =
        serde_json::from_str(text).map_err(|e| Error::Parse(format!("invalid JSON: {e}")))?;
    let Value::Object(m) = v else {
        return Err(Error::Parse("expected a JSON object".into()));
    };
    if let Some(tag) = m.get("schema") {
        if tag.as_str() != Some(SCHEMA) {
            return Err(Error::Parse(format!(
                "unsupported schema {tag}, expected \"{SCHEMA}\""
            )));
        }
    }
    Ok(m)
}

fn field<'a>(m: &'a Map<String, Value>, k: &str) -> Result<&'a Value> {
    m.get(k)
        .ok_or_else(|| Error::Parse(format!("missing field `{k}`")))
}

fn parse_triple<T: Ring>(v: &Value, f: &impl Fn(&Value) -> Result<T>) -> Result<Vec3<T>> {
    let Value::Array(a) = v else {
        return Err(Error::Parse(format!("expected a triple, got {v}")));
    };
    if a.len() != 3 {
        return Err(Error::Parse(format!("expected 3 entries, got {}", a.len())));
    }
    Ok(Vec3([f(&a[0])?, f(&a[1])?, f(&a[2])?]))
}

fn parse_matrix<T: Ring>(v: &Value, f: &impl Fn(&Value) -> Result<T>) -> Result<Mat3<T>> {
    let Value::Array(rows) = v else {
        return Err(Error::Parse(format!("expected a 3x3 matrix, got {v}")));
    };
    if rows.len() != 3 {
        return Err(Error::Parse(format!("expected 3 rows, got {}", rows.len())));
    }
    let r0 = parse_triple(&rows[0], f)?;
    let r1 = parse_triple(&rows[1], f)?;
    let r2 = parse_triple(&rows[2], f)?;
    Ok(Mat3::from_rows(r0, r1, r2))
}

fn triple_value<T: Ring>(v: &Vec3<T>, f: impl Fn(&T) -> Value) -> Value {
    Value::Array(v.0.iter().map(f).collect())
}

fn matrix_value<T: Ring>(m: &Mat3<T>, f: impl Fn(&T) -> Value) -> Value {
    Value::Array(
        m.0.iter()
            .map(|row| Value::Array(row.iter().map(&f).collect()))
            .collect(),
    )
}

fn direction_value(d: &Direction) -> Value {
    triple_value(&d.vec(), |c| f64_value(*c))
}

fn line_value(l: &OrientedLine<f64>) -> Value {
    object(vec![
        ("point", triple_value(l.point(), |c| f64_value(*c))),
        ("dir", triple_value(l.dir(), |c| f64_value(*c))),
    ])
}

// ---------------------------------------------------------------------------
// pods

/// `{"schema", "platform", "base", "d2"}` with rational strings.
pub fn pod_value(pod: &Pod<Rational>) -> Value {
    document(vec![
        (
            "platform",
            Value::Array(
                pod.platform()
                    .iter()
                    .map(|p| triple_value(p, rational_value))
                    .collect(),
            ),
        ),
        (
            "base",
            Value::Array(
                pod.base()
                    .iter()
                    .map(|p| triple_value(p, rational_value))
                    .collect(),
            ),
        ),
        (
            "d2",
            Value::Array(pod.d2().iter().map(rational_value).collect()),
        ),
    ])
}

/// Same layout with plain JSON numbers; readers convert the printed decimal
/// digits back verbatim.
pub fn float_pod_value(pod: &Pod<f64>) -> Value {
    document(vec![
        (
            "platform",
            Value::Array(
                pod.platform()
                    .iter()
                    .map(|p| triple_value(p, |c| f64_value(*c)))
                    .collect(),
            ),
        ),
        (
            "base",
            Value::Array(
                pod.base()
                    .iter()
                    .map(|p| triple_value(p, |c| f64_value(*c)))
                    .collect(),
            ),
        ),
        (
            "d2",
            Value::Array(pod.d2().iter().map(|c| f64_value(*c)).collect()),
        ),
    ])
}

pub fn parse_pod(text: &str) -> Result<Pod<Rational>> {
    let m = root_object(text)?;
    let points = |v: &Value| -> Result<Vec<Vec3<Rational>>> {
        let Value::Array(a) = v else {
            return Err(Error::Parse("expected an array of points".into()));
        };
        a.iter().map(|p| parse_triple(p, &value_to_rational)).collect()
    };
    let platform = points(field(&m, "platform")?)?;
    let base = points(field(&m, "base")?)?;
    let Value::Array(d2v) = field(&m, "d2")? else {
        return Err(Error::Parse("expected an array for `d2`".into()));
    };
    let d2 = d2v
        .iter()
        .map(value_to_rational)
        .collect::<Result<Vec<_>>>()?;
    Pod::new(platform, base, d2)
}

// ---------------------------------------------------------------------------
// points on the compactification

/// A parsed point, tagged with the backend named in the file.
#[derive(Clone, Debug)]
pub enum ParsedPoint {
    Exact(IsometryPoint<GaussianRational>),
    Float(IsometryPoint<ComplexApprox>),
}

impl ParsedPoint {
    pub fn approx(&self) -> IsometryPoint<ComplexApprox> {
        match self {
            ParsedPoint::Exact(p) => p.approx(),
            ParsedPoint::Float(p) => p.clone(),
        }
    }
}

fn coords_entries<T: Ring>(
    c: &GroupCoords<T>,
    f: impl Fn(&T) -> Value + Copy,
) -> Vec<(&'static str, Value)> {
    vec![
        ("h", f(&c.h)),
        ("M", matrix_value(&c.m, f)),
        ("x", triple_value(&c.x, f)),
        ("y", triple_value(&c.y, f)),
        ("r", f(&c.r)),
    ]
}

/// `{"schema", "backend": "exact", "h", "M", "x", "y", "r"}`.
pub fn exact_point_value(p: &IsometryPoint<GaussianRational>) -> Value {
    let mut entries = vec![("backend", Value::String("exact".into()))];
    entries.extend(coords_entries(p.coords(), gauss_value));
    document(entries)
}

/// Float backend; scalars are `[re, im]` pairs.
pub fn float_point_value(p: &IsometryPoint<ComplexApprox>) -> Value {
    let mut entries = vec![("backend", Value::String("float".into()))];
    entries.extend(coords_entries(p.coords(), complex_value));
    document(entries)
}

fn parse_coords<S: Ring>(
    m: &Map<String, Value>,
    f: &impl Fn(&Value) -> Result<S>,
) -> Result<GroupCoords<S>> {
    Ok(GroupCoords::new(
        f(field(m, "h")?)?,
        parse_matrix(field(m, "M")?, f)?,
        parse_triple(field(m, "x")?, f)?,
        parse_triple(field(m, "y")?, f)?,
        f(field(m, "r")?)?,
    ))
}

pub fn parse_point(text: &str) -> Result<ParsedPoint> {
    let m = root_object(text)?;
    let backend = field(&m, "backend")?
        .as_str()
        .ok_or_else(|| Error::Parse("`backend` must be \"exact\" or \"float\"".into()))?;
    match backend {
        "exact" => Ok(ParsedPoint::Exact(IsometryPoint::new(parse_coords(
            &m,
            &value_to_gauss,
        )?)?)),
        "float" => Ok(ParsedPoint::Float(IsometryPoint::new(parse_coords(
            &m,
            &value_to_complex,
        )?)?)),
        other => Err(Error::Parse(format!(
            "unknown backend `{other}`, expected \"exact\" or \"float\""
        ))),
    }
}

// ---------------------------------------------------------------------------
// direct isometries

/// `{"schema", "M", "y"}` with rational strings; `y` is the translation.
pub fn isometry_value(s: &Isometry<Rational>) -> Value {
    document(vec![
        ("M", matrix_value(s.matrix(), rational_value)),
        ("y", triple_value(s.translation_part(), rational_value)),
    ])
}

pub fn float_isometry_value(s: &Isometry<f64>) -> Value {
    object(vec![
        ("M", matrix_value(s.matrix(), |c| f64_value(*c))),
        ("y", triple_value(s.translation_part(), |c| f64_value(*c))),
    ])
}

pub fn parse_isometry(text: &str) -> Result<Isometry<Rational>> {
    let m = root_object(text)?;
    Isometry::new(
        parse_matrix(field(&m, "M")?, &value_to_rational)?,
        parse_triple(field(&m, "y")?, &value_to_rational)?,
    )
}

// ---------------------------------------------------------------------------
// rational motions

fn poly_value(p: &GaussPoly) -> Value {
    Value::Array(p.coeffs().iter().map(gauss_value).collect())
}

fn value_to_poly(v: &Value) -> Result<GaussPoly> {
    let Value::Array(a) = v else {
        return Err(Error::Parse(format!(
            "expected a coefficient array, got {v}"
        )));
    };
    Ok(GaussPoly::new(
        a.iter().map(value_to_gauss).collect::<Result<Vec<_>>>()?,
    ))
}

/// Seventeen ascending coefficient arrays in the point layout.
pub fn motion_value(motion: &RationalMotion) -> Value {
    document(coords_entries(motion.coords(), poly_value))
}

pub fn parse_motion(text: &str) -> Result<RationalMotion> {
    let m = root_object(text)?;
    RationalMotion::new(parse_coords(&m, &value_to_poly)?)
}

// ---------------------------------------------------------------------------
// bonds and classification

fn planar_map_value(map: &PlanarMobius) -> Value {
    let (a, b, c, d) = map.coeffs();
    object(vec![
        ("a", complex_value(&a)),
        ("b", complex_value(&b)),
        ("c", complex_value(&c)),
        ("d", complex_value(&d)),
    ])
}

fn bond_entries<S: Scalar>(bond: &Bond<S>, point: Value) -> Value {
    let mut entries = vec![
        ("class", Value::String(bond.class().name().into())),
        ("point", point),
    ];
    if let Some(l) = bond.left() {
        entries.push(("L", direction_value(l)));
    }
    if let Some(r) = bond.right() {
        entries.push(("R", direction_value(r)));
    }
    if let Some(map) = bond.planar_map() {
        entries.push(("planar_map", planar_map_value(map)));
    }
    document(entries)
}

pub fn bond_value(bond: &Bond<ComplexApprox>) -> Value {
    bond_entries(bond, float_point_value(bond.point()))
}

pub fn exact_bond_value(bond: &Bond<GaussianRational>) -> Value {
    bond_entries(bond, exact_point_value(bond.point()))
}

pub fn membership_value<S: Scalar>(m: &BondMembership<S>) -> Value {
    object(vec![
        (
            "residuals",
            Value::Array(m.residuals.iter().map(|r| complex_value(&r.approx())).collect()),
        ),
        ("max_abs", f64_value(m.max_abs)),
        ("member", Value::Bool(m.member)),
    ])
}

/// Classification report: class, left/right vectors and moduli where they
/// exist, plus the normal-form certificate that witnesses the reduction.
/// The vertex has no certificate (and can never be a bond).
pub fn classification_value(
    class: crate::boundary::BoundaryClass,
    left: Option<&Direction>,
    right: Option<&Direction>,
    certificate: Option<&NormalFormCertificate>,
) -> Value {
    let mut entries = vec![("class", Value::String(class.name().into()))];
    if let Some(l) = left {
        entries.push(("L", direction_value(l)));
    }
    if let Some(r) = right {
        entries.push(("R", direction_value(r)));
    }
    if let Some(p) = certificate.and_then(|c| c.parameter) {
        entries.push(("parameter", f64_value(p)));
    }
    if class == crate::boundary::BoundaryClass::Vertex {
        entries.push(("note", Value::String("never a bond".into())));
    }
    if let Some(cert) = certificate {
        entries.push((
            "normal_form",
            object(vec![
                ("sigma_left", float_isometry_value(&cert.sigma_left)),
                ("sigma_right", float_isometry_value(&cert.sigma_right)),
                ("normal_point", float_point_value(&cert.normal_point)),
            ]),
        ));
    }
    document(entries)
}

// ---------------------------------------------------------------------------
// analysis reports

pub fn fit_value(fit: &MobiusFit, tol: f64) -> Value {
    let (a, b, c, d) = fit.coeffs;
    let mut entries = vec![
        (
            "coeffs",
            Value::Array(vec![
                complex_value(&a),
                complex_value(&b),
                complex_value(&c),
                complex_value(&d),
            ]),
        ),
        ("residual", f64_value(fit.residual)),
        ("underdetermined", Value::Bool(fit.underdetermined)),
        (
            "regular",
            Value::Bool(fit.map.is_some() && !fit.underdetermined),
        ),
    ];
    if let Some(map) = &fit.map {
        entries.push(("kind", Value::String(map.kind(tol).name().into())));
    }
    object(entries)
}

fn hit_value(hit: &ProjectionPairHit, tol: f64) -> Value {
    object(vec![
        ("L", direction_value(&hit.left)),
        ("R", direction_value(&hit.right)),
        ("fit", fit_value(&hit.fit, tol)),
    ])
}

fn collinear_value(w: &CollinearPartition) -> Value {
    let mut entries = vec![(
        "indices",
        Value::Array(w.indices.iter().map(|&i| Value::from(i)).collect()),
    )];
    if let Some(l) = &w.platform_line {
        entries.push(("platform_line", line_value(l)));
    }
    if let Some(l) = &w.base_line {
        entries.push(("base_line", line_value(l)));
    }
    entries.push(("degenerate", Value::Bool(w.degenerate)));
    object(entries)
}

fn side_name(side: Side) -> &'static str {
    match side {
        Side::Left => "left",
        Side::Right => "right",
    }
}

fn concentrated_value(w: &ConcentratedWitness) -> Value {
    let mut entries = vec![
        ("side", Value::String(side_name(w.side).into())),
        (
            "indices",
            Value::Array(w.indices.iter().map(|&i| Value::from(i)).collect()),
        ),
    ];
    if let Some(l) = &w.line {
        entries.push(("line", line_value(l)));
    }
    if let Some(p) = &w.common_point {
        entries.push(("common_point", triple_value(p, |c| f64_value(*c))));
    }
    entries.push(("degenerate", Value::Bool(w.degenerate)));
    object(entries)
}

fn parallel_value(w: &ParallelWitness) -> Value {
    object(vec![
        (
            "indices",
            Value::Array(w.indices.iter().map(|&i| Value::from(i)).collect()),
        ),
        (
            "platform_lines",
            Value::Array(vec![
                line_value(&w.platform_lines.0),
                line_value(&w.platform_lines.1),
            ]),
        ),
        (
            "base_lines",
            Value::Array(vec![
                line_value(&w.base_lines.0),
                line_value(&w.base_lines.1),
            ]),
        ),
        ("degenerate", Value::Bool(w.degenerate)),
    ])
}

pub fn report_value(r: &AnalysisReport) -> Value {
    let tol = r.options.tol;
    let mut entries = vec![
        ("note", Value::String(r.note.into())),
        ("pod_size", Value::from(r.pod_size)),
        (
            "options",
            object(vec![
                ("starts", Value::from(r.options.starts)),
                ("seed", Value::from(r.options.seed)),
                ("tol", f64_value(r.options.tol)),
                ("line_tol", f64_value(r.options.line_tol)),
                ("min_pairs", Value::from(r.options.min_pairs)),
            ]),
        ),
        ("condition_i", Value::Bool(r.condition_i)),
        (
            "projection_hits",
            Value::Array(r.projection_hits.iter().map(|h| hit_value(h, tol)).collect()),
        ),
        ("condition_ii", Value::Bool(r.condition_ii)),
    ];
    if let Some(w) = &r.collinear_witness {
        entries.push(("collinear_witness", collinear_value(w)));
    }
    if let Some(two) = &r.mobility_two {
        let mut t = vec![
            ("condition_a", Value::Bool(two.condition_a)),
            ("regular_pair_count", Value::from(two.regular_pair_count)),
            ("condition_b", Value::Bool(two.condition_b)),
        ];
        if let Some(w) = &two.concentrated_witness {
            t.push(("concentrated_witness", concentrated_value(w)));
        }
        t.push(("condition_c", Value::Bool(two.condition_c)));
        if let Some(w) = &two.parallel_witness {
            t.push(("parallel_witness", parallel_value(w)));
        }
        entries.push(("mobility_two", object(t)));
    }
    document(entries)
}
