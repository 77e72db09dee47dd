//! Request dispatch: one `CommandRequest` in, one `RunReport` out.

use std::fs;
use std::path::PathBuf;

use loopalg::affine::{builtin_catalog, gcm_certificate};
use loopalg::algebra::{
    base_change_check, centroid_graded, check_automorphism, eigengrading, matrix_units, validate_algebra, AlgebraJson,
    AutomorphismJson, FiniteOrderAutomorphism, MultTableAlgebra,
};
use loopalg::classify::{classification_text, classification_table, h1_out, k_vs_r_classes, matrix_algebra_classes};
use loopalg::cyclo::lcm;
use loopalg::descent::{
    build_cocycle, coboundary_witness, default_window, lie_twist, matrix_twist,
    twisted_fixed_points, untwist_iso, TwistData,
};
use loopalg::lie::{chevalley_algebra, AutoSpec, Chevalley, FiniteCartanMatrix, RootSystem};
use loopalg::suite::{verify_selected, AlgebraFixture, FixtureSet};
use loopalg::Error;
use serde::Serialize;
use serde_json::{json, Value};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    Build,
    Grade,
    Classify,
    ExtractGcm,
    Untwist,
    DescentVerify,
    Centroid,
    VerifyAll,
}

#[derive(Debug, Clone, Default, Serialize)]
pub struct CommandRequest {
    pub command: Option<Command>,
    #[serde(rename = "type", skip_serializing_if = "Option::is_none")]
    pub type_label: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub algebra: Option<PathBuf>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub matrix_algebra: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub auto: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub window: Option<i64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub shift: Option<u32>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub only: Vec<u8>,
    #[serde(skip_serializing_if = "std::ops::Not::not")]
    pub no_fixtures: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
}

#[derive(Debug, Clone, Serialize)]
pub struct RunReport {
    pub command: CommandRequest,
    pub status: Status,
    pub payload: Value,
    #[serde(skip)]
    pub text: Option<String>,
}

/// Errors caused by the request rather than by a failed check.
fn is_input_error(e: &Error) -> bool {
    matches!(
        e,
        Error::Input(_)
            | Error::Json(_)
            | Error::UnknownType(_)
            | Error::InvalidCartan(_)
            | Error::InvalidPermutation(_)
            | Error::Dimension(_)
            | Error::ScalarOrder { .. }
            | Error::NotDiagramSymmetry
            | Error::ChargeNotInvariant
            | Error::Unsupported(_)
            | Error::NonToral
            | Error::NotFiniteType(_)
            | Error::Cyclo(_)
    )
}

pub enum RunError {
    Input(String),
    Failed(String),
}

impl From<Error> for RunError {
    fn from(e: Error) -> Self {
        if is_input_error(&e) {
            RunError::Input(e.to_string())
        } else {
            RunError::Failed(e.to_string())
        }
    }
}

fn input(msg: impl Into<String>) -> RunError {
    RunError::Input(msg.into())
}

type Outcome = std::result::Result<(Status, Value, Option<String>), RunError>;

/// What the automorphism-taking commands operate on.
enum Subject {
    Lie(Box<Chevalley>, AutoSpec),
    Matrix(usize, Vec<i64>, u32),
    External(MultTableAlgebra, AutomorphismJson),
}

fn chevalley(label: &str) -> Result<Chevalley, RunError> {
    let cartan = FiniteCartanMatrix::parse(label)?;
    Ok(chevalley_algebra(&RootSystem::new(&cartan)?)?)
}

fn load_algebra(path: &PathBuf) -> Result<MultTableAlgebra, RunError> {
    let text = fs::read_to_string(path).map_err(|e| input(format!("{}: {e}", path.display())))?;
    let json: AlgebraJson = serde_json::from_str(&text).map_err(|e| input(format!("{}: {e}", path.display())))?;
    Ok(MultTableAlgebra::from_json(json)?)
}

fn parse_auto<T: serde::de::DeserializeOwned>(req: &CommandRequest) -> Result<T, RunError> {
    let raw = req.auto.as_deref().ok_or_else(|| input("--auto is required for this command"))?;
    serde_json::from_str(raw).map_err(|e| input(format!("--auto: {e}")))
}

fn sources(req: &CommandRequest) -> usize {
    usize::from(req.type_label.is_some()) + usize::from(req.algebra.is_some()) + usize::from(req.matrix_algebra.is_some())
}

fn subject(req: &CommandRequest) -> Result<Subject, RunError> {
    if sources(req) != 1 {
        return Err(input("give exactly one of --type, --algebra, --matrix-algebra"));
    }
    if let Some(t) = &req.type_label {
        let spec: AutoSpec = match &req.auto {
            Some(_) => parse_auto(req)?,
            None => AutoSpec { pi: None, s: None, m: 1 },
        };
        return Ok(Subject::Lie(Box::new(chevalley(t)?), spec));
    }
    if let Some(n) = req.matrix_algebra {
        let spec: AutoSpec = parse_auto(req)?;
        if spec.pi.is_some() {
            return Err(input("matrix algebras take only toral exponents \"s\""));
        }
        let s = spec.s.unwrap_or_else(|| vec![0; n]);
        if s.len() != n || n == 0 || spec.m == 0 {
            return Err(input(format!("need {n} exponents and a positive m")));
        }
        return Ok(Subject::Matrix(n, s, spec.m));
    }
    let alg = load_algebra(req.algebra.as_ref().expect("one source"))?;
    Ok(Subject::External(alg, parse_auto(req)?))
}

fn automorphism(sub: &Subject) -> Result<(MultTableAlgebra, FiniteOrderAutomorphism), RunError> {
    match sub {
        Subject::Lie(..) | Subject::Matrix(..) => {
            let d = twist_data(sub)?;
            Ok((d.alg, d.source))
        }
        Subject::External(alg, auto) => {
            if auto.period == 0 {
                return Err(input("period must be positive"));
            }
            let order = lcm(alg.scalar_order(), auto.period);
            let alg = alg.embed(order)?;
            let m = auto.clone().into_matrix(order)?;
            Ok((alg.clone(), check_automorphism(&alg, &m, auto.period)?))
        }
    }
}

fn twist_data(sub: &Subject) -> Result<TwistData, RunError> {
    match sub {
        Subject::Lie(ch, spec) => {
            let l = ch.rank();
            Ok(lie_twist(ch, &spec.perm(l)?, &spec.charge(l)?)?)
        }
        Subject::Matrix(n, s, m) => Ok(matrix_twist(*n, s, *m)?),
        Subject::External(..) => Err(input("untwisting needs --type or --matrix-algebra")),
    }
}

fn status(ok: bool) -> Status {
    if ok {
        Status::Pass
    } else {
        Status::Fail
    }
}

fn to_value<T: Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("reports serialize")
}

fn build(req: &CommandRequest) -> Outcome {
    if sources(req) != 1 {
        return Err(input("give exactly one of --type, --algebra, --matrix-algebra"));
    }
    let (alg, mut payload) = if let Some(t) = &req.type_label {
        let ch = chevalley(t)?;
        let rs = ch.roots();
        let payload = json!({
            "type": rs.cartan().label(),
            "rank": rs.rank(),
            "dim": ch.dim(),
            "root_count": rs.len(),
            "positive_roots": rs.roots()[..rs.positive_count()],
        });
        (ch.algebra().clone(), payload)
    } else if let Some(n) = req.matrix_algebra {
        if n == 0 {
            return Err(input("matrix size must be positive"));
        }
        let alg = matrix_units(n, 1);
        (alg.clone(), json!({ "matrix_size": n, "dim": alg.dim() }))
    } else {
        let alg = load_algebra(req.algebra.as_ref().expect("one source"))?;
        (alg.clone(), json!({ "dim": alg.dim() }))
    };
    let report = validate_algebra(&alg);
    payload["labels"] = to_value(&alg.labels());
    payload["validation"] = json!({
        "kind": report.kind,
        "triples_checked": report.triples_checked,
        "violations": report.violations.len(),
        "first_violation": report.violations.first(),
    });
    Ok((status(report.is_valid()), payload, None))
}

fn grade(req: &CommandRequest) -> Outcome {
    let (alg, sigma) = automorphism(&subject(req)?)?;
    let g = eigengrading(&alg, &sigma)?;
    let pairs = g.check_product_rule(&alg)?;
    let window = req.window.unwrap_or(sigma.period() as i64);
    let base = base_change_check(&alg, &g, window)?;
    let payload = json!({
        "period": sigma.period(),
        "dims": g.dims(),
        "product_pairs_checked": pairs,
        "base_change": base,
    });
    Ok((Status::Pass, payload, None))
}

fn descent(req: &CommandRequest) -> Outcome {
    let (alg, sigma) = automorphism(&subject(req)?)?;
    let g = eigengrading(&alg, &sigma)?;
    let cocycle = build_cocycle(&sigma)?;
    let check = cocycle.verify();
    let window = req.window.unwrap_or(default_window(sigma.period()));
    let fixed = twisted_fixed_points(&cocycle, &g, window)?;
    let ok = check.passed() && fixed.report.passed();
    let payload = json!({
        "period": sigma.period(),
        "cocycle": check,
        "fixed_points": fixed,
    });
    Ok((status(ok), payload, None))
}

fn untwist(req: &CommandRequest) -> Outcome {
    let data = twist_data(&subject(req)?)?;
    let window = req.window.unwrap_or(default_window(data.period()));
    let (_, report) = untwist_iso(&data, window)?;
    let coboundary = match coboundary_witness(&data, window) {
        Ok(c) => Some(c),
        Err(Error::NonToral) => None,
        Err(e) => return Err(e.into()),
    };
    let ok = report.passed() && coboundary.as_ref().is_none_or(|c| c.passed());
    let payload = json!({ "untwist": report, "coboundary": coboundary });
    Ok((status(ok), payload, None))
}

fn centroid(req: &CommandRequest) -> Outcome {
    let (alg, sigma) = automorphism(&subject(req)?)?;
    let g = eigengrading(&alg, &sigma)?;
    let shifts: Vec<u32> = match req.shift {
        Some(d) => vec![d % sigma.period()],
        None => (0..sigma.period()).collect(),
    };
    let dims: Vec<Value> = shifts
        .iter()
        .map(|&d| Ok(json!({ "shift": d, "dim": centroid_graded(&alg, &g, d)?.solution_dim })))
        .collect::<Result<_, Error>>()?;
    Ok((Status::Pass, json!({ "period": sigma.period(), "centroid": dims }), None))
}

fn classify(req: &CommandRequest) -> Outcome {
    if let Some(n) = req.matrix_algebra {
        let m = matrix_algebra_classes(n)?;
        return Ok((status(m.class_count == 1), to_value(&m), None));
    }
    let t = req
        .type_label
        .as_deref()
        .ok_or_else(|| input("classify needs --type or --matrix-algebra"))?;
    let cartan = FiniteCartanMatrix::parse(t)?;
    let rows = classification_table(&cartan)?;
    let h1 = h1_out(&cartan)?;
    let k = k_vs_r_classes(&cartan)?;
    let mut labels: Vec<&str> = rows.iter().map(|r| r.affine_label.as_str()).collect();
    labels.sort_unstable();
    labels.dedup();
    let ok = rows.len() == h1.classes.len() && labels.len() == rows.len();
    let text = classification_text(&rows);
    let payload = json!({ "type": t, "h1": h1, "rows": rows, "k_vs_r": k });
    Ok((status(ok), payload, Some(text)))
}

fn extract_gcm(req: &CommandRequest) -> Outcome {
    let Subject::Lie(ch, spec) = subject(req)? else {
        return Err(input("extract-gcm needs --type"));
    };
    let l = ch.rank();
    let report = gcm_certificate(&ch, &spec.perm(l)?, &spec.charge(l)?, req.window, Some(builtin_catalog()))?;
    Ok((Status::Pass, to_value(&report), None))
}

fn verify_all(req: &CommandRequest) -> Outcome {
    let mut fixtures = if req.no_fixtures {
        FixtureSet::empty()
    } else if let Some(path) = &req.algebra {
        FixtureSet {
            algebras: vec![AlgebraFixture {
                name: path.display().to_string(),
                alg: load_algebra(path)?,
                expected_dim: None,
            }],
            ..FixtureSet::empty()
        }
    } else {
        FixtureSet::standard()?
    };
    if req.algebra.is_some() {
        fixtures.determinism = false;
    }
    let report = verify_selected(&fixtures, &req.only);
    let text = report.to_text();
    Ok((status(report.passed()), to_value(&report), Some(text)))
}

pub fn run(req: CommandRequest) -> Result<RunReport, RunError> {
    let command = req.command.ok_or_else(|| input("no command"))?;
    let (status, payload, text) = match command {
        Command::Build => build(&req),
        Command::Grade => grade(&req),
        Command::Classify => classify(&req),
        Command::ExtractGcm => extract_gcm(&req),
        Command::Untwist => untwist(&req),
        Command::DescentVerify => descent(&req),
        Command::Centroid => centroid(&req),
        Command::VerifyAll => verify_all(&req),
    }?;
    Ok(RunReport {
        command: req,
        status,
        payload,
        text,
    })
}

/// Indented `key: value` rendering of a JSON value.
pub fn render_text(v: &Value) -> String {
    let mut out = String::new();
    render(v, 0, &mut out);
    out
}

fn scalar(v: &Value) -> Option<String> {
    match v {
        Value::Null => Some("-".into()),
        Value::String(s) => Some(s.clone()),
        Value::Bool(_) | Value::Number(_) => Some(v.to_string()),
        Value::Array(items) if items.iter().all(|x| !x.is_object()) => Some(v.to_string()),
        _ => None,
    }
}

fn render(v: &Value, depth: usize, out: &mut String) {
    let pad = "  ".repeat(depth);
    match v {
        Value::Object(map) => {
            for (k, x) in map {
                match scalar(x) {
                    Some(s) => out.push_str(&format!("{pad}{k}: {s}\n")),
                    None => {
                        out.push_str(&format!("{pad}{k}:\n"));
                        render(x, depth + 1, out);
                    }
                }
            }
        }
        Value::Array(items) => {
            for (i, x) in items.iter().enumerate() {
                match scalar(x) {
                    Some(s) => out.push_str(&format!("{pad}- {s}\n")),
                    None => {
                        out.push_str(&format!("{pad}[{i}]\n"));
                        render(x, depth + 1, out);
                    }
                }
            }
        }
        _ => out.push_str(&format!("{pad}{}\n", scalar(v).unwrap_or_default())),
    }
}
