//! Command line surface over the podbond library. Every verdict printed here
//! is reproducible through library calls alone; this binary only parses
//! arguments, reads files, and serializes results.
//!
//! Exit codes: 0 success, 2 malformed input, 3 verification failure,
//! 4 internal degeneracy.

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use num_traits::Zero;
use serde_json::Value;

use podbond::analyze::{self, AnalyzeOptions};
use podbond::bonds::{self, Bond, MobiusKind, PlanarIsometry};
use podbond::boundary::{self, BoundaryClass};
use podbond::geom::{Direction, OrientedLine, Vec3};
use podbond::json::{self, ParsedPoint};
use podbond::pod::{eval_leg, Pod};
use podbond::scalar::{
    parse_rational, ComplexApprox, GaussianRational, Rational, RealScalar, Scalar,
};
use podbond::variety::Side;
use podbond::{Error, Result};

#[derive(Parser)]
#[command(
    name = "podbond",
    version,
    about = "Pentapod/hexapod mobility analysis on the group compactification"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the necessary-condition mobility detectors on a pod.
    Analyze {
        /// Pod JSON file.
        #[arg(long)]
        pod: PathBuf,
        /// 1: mobility-one conditions; 2: also the mobility-two conditions.
        #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u8).range(1..=2))]
        level: u8,
        /// Projection-pair search starts.
        #[arg(long, default_value_t = 64)]
        starts: u32,
        /// Search seed; identical seeds give byte-identical reports.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Residual tolerance for Moebius fits.
        #[arg(long, default_value_t = 1e-6)]
        tol: f64,
        /// Tolerance for collinearity and coincidence tests.
        #[arg(long, default_value_t = 1e-9)]
        line_tol: f64,
        /// Regular projection pairs required for the pair-count condition.
        #[arg(long, default_value_t = 5)]
        min_pairs: usize,
    },
    /// Classify a boundary point and reduce it to its normal form.
    Classify {
        /// Point JSON file (backend "exact" or "float").
        #[arg(long)]
        point: PathBuf,
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
    },
    /// Check that a rational motion is a self-motion of a pod.
    VerifyMotion {
        #[arg(long)]
        pod: PathBuf,
        /// Motion JSON file (seventeen coefficient arrays).
        #[arg(long)]
        motion: PathBuf,
        /// Number of integer parameter samples.
        #[arg(long, default_value_t = 12)]
        samples: u32,
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
        /// Write a CSV of per-leg residuals versus parameter.
        #[arg(long)]
        plot: Option<PathBuf>,
    },
    /// Extract the bonds of a rational motion at the roots of h.
    LimitBonds {
        #[arg(long)]
        motion: PathBuf,
        /// Optional pod; adds a membership verdict per bond.
        #[arg(long)]
        pod: Option<PathBuf>,
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
    },
    /// Construct a bond from geometric data.
    MakeBond {
        #[command(subcommand)]
        kind: MakeBondCommand,
    },
    /// Project a pod along a direction pair and fit a Moebius map.
    ProjectCheck {
        #[arg(long)]
        pod: PathBuf,
        /// Left (platform) projection direction "lx,ly,lz".
        #[arg(long = "L")]
        left: String,
        /// Right (base) projection direction "rx,ry,rz".
        #[arg(long = "R")]
        right: String,
        #[arg(long, default_value_t = 1e-6)]
        tol: f64,
    },
}

#[derive(Subcommand)]
enum MakeBondCommand {
    /// Butterfly bond from a platform line and a base line.
    Butterfly {
        /// Platform line "px,py,pz;dx,dy,dz".
        #[arg(long)]
        gl: String,
        /// Base line "px,py,pz;dx,dy,dz".
        #[arg(long)]
        gr: String,
    },
    /// Collinearity bond from one line.
    Collinearity {
        #[arg(long)]
        g: String,
        /// Which side the line lives on.
        #[arg(long)]
        side: SideArg,
    },
    /// Inversion or similarity bond with a planar Moebius map.
    Mobius {
        /// Left direction "lx,ly,lz".
        #[arg(long)]
        left: String,
        /// Right direction "rx,ry,rz".
        #[arg(long)]
        right: String,
        #[arg(long)]
        kind: KindArg,
        /// Modulus: r for inversions, gamma for similarities; positive.
        #[arg(long)]
        parameter: String,
        /// Planar frames "u1re,u1im,b1re,b1im;u2re,u2im,b2re,b2im"
        /// (unit rotation and translation per side); identity when absent.
        #[arg(long)]
        frames: Option<String>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum SideArg {
    Left,
    Right,
}

#[derive(Clone, Copy, ValueEnum)]
enum KindArg {
    Inversion,
    Similarity,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}

/// Malformed input is 2, failed verification 3, everything the library can
/// only discover mid-computation is an internal degeneracy, 4.
fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Parse(_)
        | Error::Invalid(_)
        | Error::LengthMismatch(_)
        | Error::InvalidTolerance
        | Error::NotUnit
        | Error::NonPositiveParameter
        | Error::ZeroPoint
        | Error::NonFinite => 2,
        Error::NotBoundary | Error::NotOnVariety => 3,
        _ => 4,
    }
}

fn read(path: &PathBuf) -> Result<String> {
    fs::read_to_string(path)
        .map_err(|e| Error::Parse(format!("cannot read {}: {e}", path.display())))
}

fn emit(doc: &Value) {
    print!("{}", json::render(doc));
}

fn run(cmd: Command) -> Result<ExitCode> {
    match cmd {
        Command::Analyze {
            pod,
            level,
            starts,
            seed,
            tol,
            line_tol,
            min_pairs,
        } => {
            let pod = json::parse_pod(&read(&pod)?)?.approx();
            let opts = AnalyzeOptions {
                starts,
                seed,
                tol,
                line_tol,
                min_pairs,
            };
            let report = if level == 1 {
                analyze::mobility_one_report(&pod, &opts)
            } else {
                analyze::mobility_two_report(&pod, &opts)
            };
            emit(&json::report_value(&report));
            Ok(ExitCode::SUCCESS)
        }
        Command::Classify { point, tol } => classify(&read(&point)?, tol),
        Command::VerifyMotion {
            pod,
            motion,
            samples,
            tol,
            plot,
        } => verify_motion(&read(&pod)?, &read(&motion)?, samples, tol, plot),
        Command::LimitBonds { motion, pod, tol } => {
            let pod = match pod {
                Some(p) => Some(json::parse_pod(&read(&p)?)?),
                None => None,
            };
            limit_bonds(&read(&motion)?, pod, tol)
        }
        Command::MakeBond { kind } => make_bond(kind),
        Command::ProjectCheck {
            pod,
            left,
            right,
            tol,
        } => project_check(&read(&pod)?, &left, &right, tol),
    }
}

fn classify(text: &str, tol: f64) -> Result<ExitCode> {
    let point = json::parse_point(text)?;
    // classification itself is backend-generic; run it on the parsed backend
    let class = match &point {
        ParsedPoint::Exact(p) => boundary::classify(p, tol)?,
        ParsedPoint::Float(p) => boundary::classify(p, tol)?,
    };
    let p = point.approx();
    let (left, right) = match class {
        BoundaryClass::Inversion | BoundaryClass::Butterfly | BoundaryClass::Similarity => {
            let (l, r) = boundary::left_right_vectors(&p, tol)?;
            (Some(l), Some(r))
        }
        BoundaryClass::CollinearityLeft => {
            (Some(boundary::collinearity_direction(&p, tol)?), None)
        }
        BoundaryClass::CollinearityRight => {
            (None, Some(boundary::collinearity_direction(&p, tol)?))
        }
        BoundaryClass::Vertex => (None, None),
    };
    let certificate = if class == BoundaryClass::Vertex {
        None
    } else {
        Some(boundary::normal_form(&p, tol)?)
    };
    emit(&json::classification_value(
        class,
        left.as_ref(),
        right.as_ref(),
        certificate.as_ref(),
    ));
    Ok(ExitCode::SUCCESS)
}

/// Integer parameters with h != 0, skipping the finitely many real roots.
fn sample_parameters(motion: &bonds::RationalMotion, count: u32) -> Vec<GaussianRational> {
    let mut out = Vec::with_capacity(count as usize);
    let mut t = 0i64;
    while out.len() < count as usize {
        let t0 = GaussianRational::from_real(Rational::from_integer(t.into()));
        if !motion.h().eval(&t0).is_zero() {
            out.push(t0);
        }
        t += 1;
    }
    out
}

fn verify_motion(
    pod_text: &str,
    motion_text: &str,
    samples: u32,
    tol: f64,
    plot: Option<PathBuf>,
) -> Result<ExitCode> {
    let pod = json::parse_pod(pod_text)?;
    let motion = json::parse_motion(motion_text)?;
    motion.check_symbolic()?;
    let symbolic = motion.is_self_motion_of(&pod);
    let forms = pod.leg_forms();
    let params = sample_parameters(&motion, samples);

    let mut rows: Vec<(String, Vec<f64>)> = Vec::new();
    let mut max_residual = 0.0f64;
    for t0 in &params {
        let point = motion.eval_exact(t0)?;
        let h = point.h().clone();
        let mut row = Vec::with_capacity(forms.len());
        for form in &forms {
            // eval_leg is linear in the projective coordinates; dividing by h
            // restores the affine spherical-condition residual
            let res = (eval_leg(form, &point) / h.clone()).approx();
            debug_assert!(res.im.abs() < 1e-12, "real parameters give real residuals");
            row.push(res.re);
            max_residual = max_residual.max(res.norm());
        }
        rows.push((podbond::scalar::format_rational(&t0.re), row));
    }

    if let Some(path) = plot {
        let mut csv = String::from("t");
        for i in 0..forms.len() {
            csv.push_str(&format!(",leg{i}"));
        }
        csv.push('\n');
        for (t, row) in &rows {
            csv.push_str(t);
            for r in row {
                csv.push_str(&format!(",{r}"));
            }
            csv.push('\n');
        }
        fs::write(&path, csv)
            .map_err(|e| Error::Invalid(format!("cannot write {}: {e}", path.display())))?;
    }

    let ok = symbolic && max_residual <= tol;
    emit(&json::document(vec![
        ("legs", Value::from(pod.len())),
        ("samples", Value::from(params.len())),
        (
            "parameters",
            Value::Array(
                params
                    .iter()
                    .map(|t| Value::String(podbond::scalar::format_rational(&t.re)))
                    .collect(),
            ),
        ),
        ("symbolic", Value::Bool(symbolic)),
        (
            "max_residual",
            serde_json::Number::from_f64(max_residual).map_or(Value::Null, Value::Number),
        ),
        ("ok", Value::Bool(ok)),
    ]));
    if ok {
        Ok(ExitCode::SUCCESS)
    } else {
        Ok(ExitCode::from(3))
    }
}

fn limit_bonds(motion_text: &str, pod: Option<Pod<Rational>>, tol: f64) -> Result<ExitCode> {
    let motion = json::parse_motion(motion_text)?;
    let found = bonds::limit_bonds(&motion, tol)?;
    let float_pod = pod.as_ref().map(Pod::approx);
    let mut items = Vec::new();
    for lb in &found {
        let root = match &lb.root {
            bonds::RootValue::Exact(t) => json::object(vec![
                ("backend", Value::String("exact".into())),
                (
                    "re",
                    Value::String(podbond::scalar::format_rational(&t.re)),
                ),
                (
                    "im",
                    Value::String(podbond::scalar::format_rational(&t.im)),
                ),
            ]),
            bonds::RootValue::Approx(t) => json::object(vec![
                ("backend", Value::String("float".into())),
                ("value", serde_json::json!([t.re, t.im])),
            ]),
        };
        let mut entries = vec![("root", root), ("bond", json::bond_value(&lb.bond))];
        if let Some(pod) = &pod {
            // verify exactly when the limit point is exact
            let membership = match &lb.bond_exact {
                Some(b) => json::membership_value(&bonds::verify_bond(b, pod, tol)?),
                None => json::membership_value(&bonds::verify_bond(
                    &lb.bond,
                    float_pod.as_ref().expect("pod implies float pod"),
                    tol,
                )?),
            };
            entries.push(("membership", membership));
        }
        items.push(json::object(entries));
    }
    emit(&json::document(vec![
        ("count", Value::from(found.len())),
        ("bonds", Value::Array(items)),
    ]));
    Ok(ExitCode::SUCCESS)
}

/// "px,py,pz;dx,dy,dz" with rational entries.
fn parse_line_arg(s: &str) -> Result<(Vec3<Rational>, Vec3<Rational>)> {
    let (p, d) = s
        .split_once(';')
        .ok_or_else(|| Error::Parse(format!("line `{s}` needs the form point;direction")))?;
    Ok((parse_triple_arg(p)?, parse_triple_arg(d)?))
}

fn parse_triple_arg(s: &str) -> Result<Vec3<Rational>> {
    let parts: Vec<&str> = s.split(',').collect();
    if parts.len() != 3 {
        return Err(Error::Parse(format!(
            "`{s}` needs exactly three comma-separated entries"
        )));
    }
    Ok(Vec3([
        parse_rational(parts[0])?,
        parse_rational(parts[1])?,
        parse_rational(parts[2])?,
    ]))
}

fn direction_arg(s: &str) -> Result<Direction> {
    let v = parse_triple_arg(s)?;
    Direction::from_coords(v.0[0].approx(), v.0[1].approx(), v.0[2].approx())
}

/// Builds the bond exactly when the line directions are exactly unit
/// rationals, otherwise normalizes in doubles.
fn line_bond(
    build: impl Fn(&OrientedLine<Rational>) -> Result<Bond<GaussianRational>>,
    build_float: impl Fn(&OrientedLine<f64>) -> Result<Bond<ComplexApprox>>,
    point: Vec3<Rational>,
    dir: Vec3<Rational>,
) -> Result<Value> {
    match OrientedLine::new(point.clone(), dir.clone()) {
        Ok(g) => Ok(json::exact_bond_value(&build(&g)?)),
        Err(Error::NotUnit) => {
            let g = OrientedLine::new(
                point.map(|c| c.approx()),
                dir.map(|c| c.approx()),
            )?;
            Ok(json::bond_value(&build_float(&g)?))
        }
        Err(e) => Err(e),
    }
}

fn make_bond(cmd: MakeBondCommand) -> Result<ExitCode> {
    let doc = match cmd {
        MakeBondCommand::Butterfly { gl, gr } => {
            let (pl, dl) = parse_line_arg(&gl)?;
            let (pr, dr) = parse_line_arg(&gr)?;
            match (
                OrientedLine::new(pl.clone(), dl.clone()),
                OrientedLine::new(pr.clone(), dr.clone()),
            ) {
                (Ok(l), Ok(r)) => json::exact_bond_value(&bonds::butterfly_bond::<
                    GaussianRational,
                >(&l, &r)?),
                (Err(Error::NotUnit), _) | (_, Err(Error::NotUnit)) => {
                    let l = OrientedLine::new(pl.map(|c| c.approx()), dl.map(|c| c.approx()))?;
                    let r = OrientedLine::new(pr.map(|c| c.approx()), dr.map(|c| c.approx()))?;
                    json::bond_value(&bonds::butterfly_bond::<ComplexApprox>(&l, &r)?)
                }
                (Err(e), _) | (_, Err(e)) => return Err(e),
            }
        }
        MakeBondCommand::Collinearity { g, side } => {
            let (p, d) = parse_line_arg(&g)?;
            let side = match side {
                SideArg::Left => Side::Left,
                SideArg::Right => Side::Right,
            };
            line_bond(
                |g| bonds::collinearity_bond::<GaussianRational>(g, side),
                |g| bonds::collinearity_bond::<ComplexApprox>(g, side),
                p,
                d,
            )?
        }
        MakeBondCommand::Mobius {
            left,
            right,
            kind,
            parameter,
            frames,
        } => {
            let l = direction_arg(&left)?;
            let r = direction_arg(&right)?;
            let kind = match kind {
                KindArg::Inversion => MobiusKind::Inversion,
                KindArg::Similarity => MobiusKind::Similarity,
            };
            let parameter = parse_rational(&parameter)?.approx();
            let frames = match frames {
                Some(f) => parse_frames(&f)?,
                None => (PlanarIsometry::identity(), PlanarIsometry::identity()),
            };
            json::bond_value(&bonds::mobius_bond(&l, &r, kind, parameter, &frames)?)
        }
    };
    emit(&doc);
    Ok(ExitCode::SUCCESS)
}

fn parse_frames(s: &str) -> Result<(PlanarIsometry, PlanarIsometry)> {
    let (a, b) = s
        .split_once(';')
        .ok_or_else(|| Error::Parse(format!("frames `{s}` need the form frame;frame")))?;
    Ok((parse_frame(a)?, parse_frame(b)?))
}

fn parse_frame(s: &str) -> Result<PlanarIsometry> {
    let parts: Vec<&str> = s.split(',').collect();
    if parts.len() != 4 {
        return Err(Error::Parse(format!(
            "frame `{s}` needs four entries: u_re,u_im,b_re,b_im"
        )));
    }
    let num = |p: &str| -> Result<f64> { Ok(parse_rational(p)?.approx()) };
    PlanarIsometry::new(
        ComplexApprox::new(num(parts[0])?, num(parts[1])?),
        ComplexApprox::new(num(parts[2])?, num(parts[3])?),
    )
}

fn project_check(pod_text: &str, left: &str, right: &str, tol: f64) -> Result<ExitCode> {
    let pod = json::parse_pod(pod_text)?.approx();
    let l = direction_arg(left)?;
    let r = direction_arg(right)?;
    let qs = analyze::project_points(pod.platform(), &l);
    let caps = analyze::project_points(pod.base(), &r);
    let fit = analyze::mobius_fit(&qs, &caps, tol)?;
    let mut entries = vec![
        ("L", serde_json::json!([l.vec().0[0], l.vec().0[1], l.vec().0[2]])),
        ("R", serde_json::json!([r.vec().0[0], r.vec().0[1], r.vec().0[2]])),
        ("found", Value::Bool(fit.is_some())),
    ];
    if let Some(fit) = &fit {
        entries.push(("fit", json::fit_value(fit, tol)));
    }
    emit(&json::document(entries));
    Ok(ExitCode::SUCCESS)
}
