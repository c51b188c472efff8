use std::fs;
use std::path::Path;

use anyhow::{bail, ensure, Context, Result};
use krein_frames::characterization::{
    construct_j_frame_from_operator, find_j_frame_operator_witness, is_j_frame_operator, is_jframe_synthesis,
    positive_image_test, OperatorCertificate,
};
use krein_frames::jframe::{index_signature, indefinite_reconstruct, is_j_frame, j_frame_operator};
use krein_frames::krein::classify_subspace;
use krein_frames::linalg::{hermitian_defect, rank, rel_residual, singular_values, CMat};
use krein_frames::neutral::{cone_correlation, cone_correlation_oracle};
use krein_frames::sample::gaussian_vector;
use krein_frames::{
    ConeAngleReport, Error, JFrameBounds, JFrameReport, KreinSpace, Side, SubspaceBasis, SubspaceKind, Tolerances,
    VectorFamily,
};
use rand::rngs::StdRng;
use rand::SeedableRng;
use serde_json::{json, Value};

use crate::output::{fmt9, mat, num, Report};
use crate::problem::{matrix, matrix_json, FamilySpec, ProblemFile};

#[derive(Debug, Clone, Copy)]
pub struct Options {
    pub tol: Tolerances,
    pub oracle: Option<usize>,
    pub seed: u64,
}

/// What a command produced. `emitted` is a file body destined for stdout.
#[derive(Debug)]
pub struct Outcome {
    pub pass: bool,
    pub json: Value,
    pub text: String,
    pub emitted: Option<String>,
}

impl Outcome {
    fn from_report(r: Report, pass: bool) -> Self {
        let (pass, json, text) = r.finish(pass);
        Self { pass, json, text, emitted: None }
    }
}

fn space_lines(r: &mut Report, space: &KreinSpace) {
    let (p, q) = (space.dim_plus(), space.dim_minus());
    r.line(format!("space: C^{} with signature ({p}, {q})", space.dim()));
    r.set("space", json!({ "dim": space.dim(), "signature": [p, q] }));
    if q == 0 {
        r.note("no negative side: space is Hilbert");
    } else if p == 0 {
        r.note("no positive side: space is anti-Hilbert");
    }
}

fn cone_json(c: &ConeAngleReport) -> Value {
    let definite = |x: f64| if c.indefinite { Value::Null } else { num(x) };
    json!({
        "c0": num(c.c0),
        "theta": num(c.theta),
        "phi": num(c.phi),
        "alpha": definite(c.alpha),
        "k_norm": definite(c.k_norm),
        "aperture": definite(c.aperture),
        "indefinite": c.indefinite,
    })
}

fn bounds_json(b: &JFrameBounds) -> Value {
    let (bm, am, ap, bp) = b.as_tuple();
    json!([num(bm), num(am), num(ap), num(bp)])
}

fn bounds_text(b: &JFrameBounds) -> String {
    let (bm, am, ap, bp) = b.as_tuple();
    format!("({}, {}, {}, {})", fmt9(bm), fmt9(am), fmt9(ap), fmt9(bp))
}

fn side_report(r: &mut Report, report: &JFrameReport, side: Side) -> Result<Value> {
    let space = report.space();
    let f = report.family();
    let (name, idx, class, m, required) = match side {
        Side::Plus => ("M_plus", &report.partition.plus, &report.class_plus, &report.m_plus, space.dim_plus()),
        Side::Minus => ("M_minus", &report.partition.minus, &report.class_minus, &report.m_minus, space.dim_minus()),
    };
    let labels: Vec<&str> = idx.iter().map(|&i| f.labels()[i].as_str()).collect();
    let alpha = class.definiteness_bound.map_or(f64::NAN, |a| a);
    let maximal = class.dim == required && class.uniformly_definite;
    let named = if labels.is_empty() { String::new() } else { format!(" ({})", labels.join(", ")) };
    r.line(format!(
        "{name}: indices {idx:?}{named}, dim {} of {required}, kind {}, alpha {}, maximal {}",
        class.dim,
        class.kind,
        fmt9(alpha),
        if maximal { "yes" } else { "no" }
    ));
    let cone = if m.dim() > 0 {
        let c = cone_correlation(space, m)?;
        r.line(format!("  cone angle: c0 {}, theta {}", fmt9(c.c0), fmt9(c.theta)));
        cone_json(&c)
    } else {
        Value::Null
    };
    Ok(json!({
        "indices": idx,
        "labels": labels,
        "dim": class.dim,
        "required": required,
        "kind": class.kind.to_string(),
        "alpha": num(alpha),
        "maximal": maximal,
        "degenerate_dim": class.degenerate_part_dim,
        "cone": cone,
    }))
}

pub fn analyze(problem: &ProblemFile, opts: &Options) -> Result<Outcome> {
    let space = problem.space(opts.tol)?;
    let f = problem.family()?;
    ensure!(
        f.ambient_dim() == space.dim(),
        "family vectors live in C^{}, space has dimension {}",
        f.ambient_dim(),
        space.dim()
    );
    let mut r = Report::new("analyze");
    space_lines(&mut r, &space);
    r.line(format!("family: {} vectors", f.len()));

    let report = match is_j_frame(&space, &f) {
        Err(Error::NeutralVector { index, value }) => {
            let reason = format!("column {index} ({}) is J-neutral, [f,f] = {}", f.labels()[index], fmt9(value));
            r.line(format!("verdict: not a J-frame: {reason}"));
            r.set("is_j_frame", json!(false));
            r.set("reason", json!(reason));
            r.set("neutral_index", json!(index));
            return Ok(Outcome::from_report(r, false));
        }
        other => other?,
    };

    let p = &report.partition;
    let plus = side_report(&mut r, &report, Side::Plus)?;
    let minus = side_report(&mut r, &report, Side::Minus)?;
    r.set("partition", json!({ "plus": p.plus, "minus": p.minus, "sigma": p.sigma }));
    r.set("sides", json!({ "plus": plus, "minus": minus }));

    let reason = report.reason();
    r.set("is_j_frame", json!(report.is_j_frame));
    r.set("reason", json!(reason));
    if report.is_j_frame {
        r.line("verdict: J-frame");
    } else {
        r.line(format!("verdict: not a J-frame: {reason}"));
        return Ok(Outcome::from_report(r, false));
    }

    if let (Some(b), Some(c)) = (&report.bounds, &report.crude_bounds) {
        r.line(format!("bounds (B-, A-, A+, B+): {}", bounds_text(b)));
        r.line(format!("crude bounds (B-, A-, A+, B+): {}", bounds_text(c)));
        r.set("bounds", json!({ "optimal": bounds_json(b), "crude": bounds_json(c) }));
    }
    let ops = report.operators.as_ref().context("J-frame report without operators")?;
    r.matrix("S", &ops.s);
    r.matrix("S_plus", &ops.s_plus);
    r.matrix("S_minus", &ops.s_minus);
    r.matrix("Q", &ops.q);
    r.set(
        "operators",
        json!({ "S": mat(&ops.s), "S_plus": mat(&ops.s_plus), "S_minus": mat(&ops.s_minus), "Q": mat(&ops.q) }),
    );

    let mut rng = StdRng::seed_from_u64(opts.seed);
    let x = gaussian_vector(space.dim(), &mut rng);
    let rec = indefinite_reconstruct(&report, &x)?;
    let residual = (&rec.rebuilt - &x).norm().max((&rec.rebuilt_dual - &x).norm()) / x.norm();
    r.line(format!("reconstruction residual (probe vector, seed {}): {}", opts.seed, fmt9(residual)));
    r.set("reconstruction_residual", num(residual));
    Ok(Outcome::from_report(r, true))
}

fn certificate_json(c: &OperatorCertificate) -> Value {
    let diagnostics: serde_json::Map<String, Value> = c.diagnostics.iter().map(|(k, v)| (k.clone(), num(*v))).collect();
    json!({
        "verdict": c.verdict,
        "Q": c.witness_q.as_ref().map(mat),
        "diagnostics": diagnostics,
        "notes": c.notes,
    })
}

fn certificate_lines(r: &mut Report, name: &str, c: &OperatorCertificate) {
    r.line(format!("{name}: {}", if c.verdict { "accepted" } else { "rejected" }));
    for (k, v) in &c.diagnostics {
        r.line(format!("  {k}: {}", fmt9(*v)));
    }
    for n in &c.notes {
        r.line(format!("  {n}"));
    }
}

fn square(a: CMat, n: usize, what: &str) -> Result<CMat> {
    ensure!(a.shape() == (n, n), "{what} is {}x{}, space has dimension {n}", a.nrows(), a.ncols());
    Ok(a)
}

/// Runs the operator tests. With `synthesize`, also builds a J-frame from
/// the supplied split `S1, S2` and writes it as a family file (`-` for stdout).
pub fn check_operator(problem: &ProblemFile, opts: &Options, synthesize: Option<&Path>) -> Result<Outcome> {
    let space = problem.space(opts.tol)?;
    let n = space.dim();
    let w = problem.witnesses();
    let s1 = w.s1.as_ref().map(|m| matrix(m, "witnesses.S1").and_then(|a| square(a, n, "S1"))).transpose()?;
    let s2 = w.s2.as_ref().map(|m| matrix(m, "witnesses.S2").and_then(|a| square(a, n, "S2"))).transpose()?;
    let mut r = Report::new(if synthesize.is_some() { "synthesize" } else { "check-operator" });
    space_lines(&mut r, &space);

    let s = match (&problem.operator, &s1, &s2) {
        (Some(op), _, _) => square(matrix(&op.s, "operator.S")?, n, "S")?,
        (None, Some(a), Some(b)) => {
            r.note("S taken as S1 - S2");
            a - b
        }
        _ => bail!("problem file has no \"operator\" (and no S1, S2 witnesses to form it)"),
    };
    r.matrix("S", &s);

    let tol = opts.tol;
    let js = space.j() * &s;
    let defect = hermitian_defect(&js) / js.norm().max(1.0);
    let selfadjoint = defect <= tol.residual;
    let sv = singular_values(&s);
    let invertible = rank(&s, tol.rank) == n;
    r.line(format!("J-selfadjoint: {} (defect {})", yes(selfadjoint), fmt9(defect)));
    r.line(format!("invertible: {} (smallest singular value {})", yes(invertible), fmt9(sv[n - 1])));
    r.set("j_selfadjoint", json!(selfadjoint));
    r.set("selfadjoint_defect", num(defect));
    r.set("invertible", json!(invertible));
    r.set("smallest_singular_value", num(sv[n - 1]));

    let mut verdict = false;
    if selfadjoint && invertible {
        let (ip, im) = index_signature(&space, &s)?;
        r.line(format!("ind: ({ip}, {im}), fundamental dimensions ({}, {})", space.dim_plus(), space.dim_minus()));
        r.set("ind", json!([ip, im]));

        let qs: Vec<CMat> = match &w.q {
            Some(q) => vec![square(matrix(q, "witnesses.Q")?, n, "Q")?],
            None => Vec::new(),
        };
        let ts: Vec<SubspaceBasis> = match &w.t_subspace {
            Some(t) => vec![space.span(&matrix(t, "witnesses.T_subspace")?)?],
            None => Vec::new(),
        };
        let mut supplied = serde_json::Map::new();
        if let Some(q) = qs.first() {
            let c = is_j_frame_operator(&space, &s, q)?;
            certificate_lines(&mut r, "supplied Q", &c);
            supplied.insert("Q".into(), certificate_json(&c));
        }
        if let Some(t) = ts.first() {
            match positive_image_test(&space, &s, t) {
                Ok(c) => {
                    certificate_lines(&mut r, "supplied T", &c);
                    supplied.insert("T_subspace".into(), certificate_json(&c));
                }
                Err(e @ Error::Geometry(_)) => {
                    r.line(format!("supplied T: rejected\n  {e}"));
                    supplied.insert("T_subspace".into(), json!({ "verdict": false, "notes": [e.to_string()] }));
                }
                Err(e) => return Err(e.into()),
            }
        }
        let found = find_j_frame_operator_witness(&space, &s, &qs, &ts)?;
        certificate_lines(&mut r, "witness search", &found);
        if let Some(q) = &found.witness_q {
            r.matrix("Q", q);
        }
        r.set("supplied", Value::Object(supplied));
        r.set("search", certificate_json(&found));
        verdict = found.verdict;
    } else {
        r.note("S must be J-selfadjoint and invertible to be a J-frame operator");
    }
    r.set("verdict", json!(verdict));
    r.line(format!("verdict: {}", if verdict { "J-frame operator" } else { "not a J-frame operator" }));

    let mut pass = verdict;
    if let (Some(fam), Some(i_plus)) = (&problem.family, &w.i_plus) {
        let t = matrix(&fam.t, "family.T")?;
        ensure!(t.nrows() == n, "family vectors live in C^{}, space has dimension {n}", t.nrows());
        let c = is_jframe_synthesis(&space, &t, i_plus)?;
        certificate_lines(&mut r, &format!("synthesis test with I_plus {i_plus:?}"), &c);
        r.set("synthesis", certificate_json(&c));
        pass &= c.verdict;
    }

    let mut emitted = None;
    if let Some(out) = synthesize {
        let (Some(a), Some(b)) = (&s1, &s2) else {
            bail!("--synthesize needs witnesses S1 and S2");
        };
        match construct_j_frame_from_operator(&space, a, b) {
            Ok(family) => {
                let residual = rel_residual(&j_frame_operator(&space, &family)?, &(a - b));
                let body = family_file(problem, &family)?;
                r.line(format!("synthesized {} vectors, relative residual of TT# against S1 - S2: {}", family.len(), fmt9(residual)));
                r.set("synthesized", json!({ "vectors": family.len(), "residual": num(residual) }));
                if out.as_os_str() == "-" {
                    emitted = Some(body);
                } else {
                    fs::write(out, body).with_context(|| format!("cannot write {}", out.display()))?;
                    r.line(format!("family written to {}", out.display()));
                }
            }
            Err(e @ (Error::Geometry(_) | Error::Operator(_) | Error::Classification(_))) => {
                r.note(format!("synthesis failed: {e}"));
                r.set("synthesized", Value::Null);
                pass = false;
            }
            Err(e) => return Err(e.into()),
        }
    }
    let mut outcome = Outcome::from_report(r, pass);
    outcome.emitted = emitted;
    Ok(outcome)
}

/// A problem file with the input space and `family`, at full precision.
fn family_file(problem: &ProblemFile, family: &VectorFamily) -> Result<String> {
    let file = ProblemFile {
        space: problem.space.clone(),
        family: Some(FamilySpec {
            t: matrix_json(family.synthesis(), |x| x),
            labels: Some(family.labels().to_vec()),
        }),
        ..Default::default()
    };
    Ok(crate::output::render(&serde_json::to_value(&file)?))
}

pub fn angle(problem: &ProblemFile, opts: &Options) -> Result<Outcome> {
    let space = problem.space(opts.tol)?;
    let spec = problem.subspace.as_ref().context("problem file has no \"subspace\"")?;
    let m = space.span(&matrix(&spec.m, "subspace.M")?)?;
    ensure!(m.dim() > 0, "subspace.M spans the zero subspace");
    let class = classify_subspace(&space, &m)?;
    let cone = cone_correlation(&space, &m)?;

    let mut r = Report::new("angle");
    space_lines(&mut r, &space);
    r.line(format!("subspace: dim {}, kind {}", class.dim, class.kind));
    r.set("subspace", json!({ "dim": class.dim, "kind": class.kind.to_string() }));
    let undefined = if cone.indefinite { f64::NAN } else { 1.0 };
    r.line(format!("alpha: {}", fmt9(cone.alpha * undefined)));
    r.line(format!("c0: {}", fmt9(cone.c0)));
    r.line(format!("theta: {}", fmt9(cone.theta)));
    r.line(format!("phi: {}", fmt9(cone.phi)));
    r.line(format!("angular operator norm: {}", fmt9(cone.k_norm * undefined)));
    r.line(format!("aperture: {}", fmt9(cone.aperture * undefined)));
    let mut value = cone_json(&cone);
    if matches!(
        class.kind,
        SubspaceKind::Indefinite | SubspaceKind::Neutral | SubspaceKind::Nonnegative | SubspaceKind::Nonpositive
    ) {
        r.note("subspace contains neutral vectors");
    }
    if let Some(samples) = opts.oracle {
        let est = cone_correlation_oracle(&space, &m, samples, opts.seed)?;
        r.line(format!("oracle c0 ({samples} samples, seed {}): {}", opts.seed, fmt9(est)));
        value["oracle"] = json!({ "samples": samples, "seed": opts.seed, "c0": num(est) });
    }
    r.set("cone", value);
    let pass = cone.is_uniformly_definite(opts.tol.angle);
    Ok(Outcome::from_report(r, pass))
}

fn yes(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}
