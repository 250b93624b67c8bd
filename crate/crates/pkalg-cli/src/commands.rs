use std::fs;
use std::io::Read;
use std::path::Path;

use serde::de::DeserializeOwned;
use serde::Serialize;
use serde_json::{json, Map, Value};
use thiserror::Error;

use pkalg::catalog::{catalog_json, Case};
use pkalg::curvature::curvature_report;
use pkalg::einstein::{einstein_extend, solve_extension_derivations};
use pkalg::error::Error;
use pkalg::family::{build_family, classify as classify_structure, FamilyInstance};
use pkalg::jordan::{decide as decide_type, jordan_type, JordanType};
use pkalg::lie::{almost_abelian, AlmostAbelianPresentation, LieAlgebra};
use pkalg::matrix::Matrix;
use pkalg::pk::{verify_pk, PKStructure};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("cannot read {path}: {message}")]
    Io { path: String, message: String },
    #[error("{0}")]
    Schema(String),
    #[error("{error}")]
    Precondition { error: Error, hint: Option<&'static str> },
}

impl From<Error> for CliError {
    fn from(error: Error) -> Self {
        CliError::Precondition { error, hint: None }
    }
}

impl CliError {
    pub fn to_json(&self) -> String {
        let v = match self {
            CliError::Io { .. } => json!({ "error": "Io", "message": self.to_string() }),
            CliError::Schema(m) => json!({ "error": "Schema", "message": m }),
            CliError::Precondition { error, hint } => {
                let mut v = json!({ "error": error.code(), "message": error.to_string() });
                if let Some(h) = hint {
                    v["hint"] = json!(h);
                }
                v
            }
        };
        v.to_string()
    }
}

type Result<T> = std::result::Result<T, CliError>;

fn read_json(path: &Path) -> Result<Value> {
    let io = |e: std::io::Error| CliError::Io { path: path.display().to_string(), message: e.to_string() };
    let text = if path.as_os_str() == "-" {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s).map_err(io)?;
        s
    } else {
        fs::read_to_string(path).map_err(io)?
    };
    serde_json::from_str(&text).map_err(|e| CliError::Schema(format!("invalid JSON: {e}")))
}

fn parse<T: DeserializeOwned>(v: Value, what: &str) -> Result<T> {
    serde_json::from_value(v).map_err(|e| CliError::Schema(format!("{what}: {e}")))
}

fn pretty<T: Serialize>(x: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(x).map_err(|e| CliError::Schema(e.to_string()))?;
    s.push('\n');
    Ok(s)
}

pub fn emit(output: Option<&Path>, text: &str) -> Result<()> {
    match output {
        Some(p) => fs::write(p, text).map_err(|e| CliError::Io { path: p.display().to_string(), message: e.to_string() }),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn take(obj: &mut Map<String, Value>, key: &str) -> Result<Value> {
    obj.remove(key).ok_or_else(|| CliError::Schema(format!("missing field {key:?}")))
}

fn object(v: Value, what: &str) -> Result<Map<String, Value>> {
    match v {
        Value::Object(m) => Ok(m),
        _ => Err(CliError::Schema(format!("{what} must be a JSON object"))),
    }
}

/// `{"algebra", "J", "g"[, "omega"]}` or `{"D", "J", "g"}`; the second form
/// builds the almost abelian algebra with `e_n` acting by `D`.
fn structure(v: Value) -> Result<(PKStructure, Option<AlmostAbelianPresentation>)> {
    let mut obj = object(v, "structure")?;
    if !obj.contains_key("D") {
        return Ok((parse(Value::Object(obj), "structure")?, None));
    }
    let d: Matrix = parse(take(&mut obj, "D")?, "D")?;
    let j: Matrix = parse(take(&mut obj, "J")?, "J")?;
    let g: Matrix = parse(take(&mut obj, "g")?, "g")?;
    if let Some(k) = obj.keys().next() {
        return Err(CliError::Schema(format!("unknown field {k:?}")));
    }
    if !d.is_square() {
        return Err(CliError::Schema("D must be square".into()));
    }
    let s = PKStructure::new(almost_abelian(&d), j, g).map_err(|e| CliError::Schema(e.to_string()))?;
    Ok((s, Some(AlmostAbelianPresentation::new(d))))
}

pub fn construct(input: &Path) -> Result<String> {
    let f: FamilyInstance = parse(read_json(input)?, "family instance")?;
    let (s, _) = build_family(&f)?;
    pretty(&s)
}

pub fn verify(input: &Path) -> Result<String> {
    let (s, _) = structure(read_json(input)?)?;
    pretty(&verify_pk(&s))
}

/// Needs `g` and either `algebra` or `D`; `J` is ignored.
pub fn curvature(input: &Path) -> Result<String> {
    let mut obj = object(read_json(input)?, "input")?;
    let g: Matrix = parse(take(&mut obj, "g")?, "g")?;
    let l: LieAlgebra = match (obj.remove("algebra"), obj.remove("D")) {
        (Some(a), None) => parse(a, "algebra")?,
        (None, Some(d)) => {
            let d: Matrix = parse(d, "D")?;
            if !d.is_square() {
                return Err(CliError::Schema("D must be square".into()));
            }
            almost_abelian(&d)
        }
        _ => return Err(CliError::Schema("give exactly one of \"algebra\" and \"D\"".into())),
    };
    obj.remove("J");
    obj.remove("omega");
    if let Some(k) = obj.keys().next() {
        return Err(CliError::Schema(format!("unknown field {k:?}")));
    }
    if g.rows() != l.dim() || g.cols() != l.dim() {
        return Err(CliError::Schema(format!("g must be {0}×{0}", l.dim())));
    }
    pretty(&curvature_report(&l, &g)?)
}

const ADAPTED: &str = "classify expects J and g in an adapted basis: e_n spans the ideal's complement, g and J in one of the two standard forms";

pub fn classify(input: &Path) -> Result<String> {
    let (s, p) = structure(read_json(input)?)?;
    let hint = |error: Error| CliError::Precondition { error, hint: Some(ADAPTED) };
    let p = match p {
        Some(p) => p,
        None => AlmostAbelianPresentation::from_algebra(&s.algebra).map_err(hint)?,
    };
    pretty(&classify_structure(&s, &p).map_err(hint)?)
}

/// A Jordan type (JSON array of blocks) or a square matrix.
pub fn decide(input: &Path) -> Result<String> {
    let v = read_json(input)?;
    let j: JordanType = match v {
        Value::Array(_) => parse(v, "Jordan type")?,
        _ => {
            let m: Matrix = parse(v, "matrix")?;
            if !m.is_square() {
                return Err(CliError::Schema("matrix must be square".into()));
            }
            jordan_type(&m)?
        }
    };
    pretty(&decide_type(&j))
}

/// `{"instance": F}` solves for every admissible `Ď` on the base `F`;
/// `{"structure": S, "check_d": Ď}` builds and verifies one extension.
pub fn extend(input: &Path) -> Result<String> {
    let mut obj = object(read_json(input)?, "input")?;
    if let Some(f) = obj.remove("instance") {
        if let Some(k) = obj.keys().next() {
            return Err(CliError::Schema(format!("unknown field {k:?}")));
        }
        let f: FamilyInstance = parse(f, "instance")?;
        let family = solve_extension_derivations(&f)?;
        return pretty(&json!({ "instance": f, "family": family }));
    }
    let (s, _) = structure(take(&mut obj, "structure")?)?;
    let check_d: Matrix = parse(take(&mut obj, "check_d")?, "check_d")?;
    if let Some(k) = obj.keys().next() {
        return Err(CliError::Schema(format!("unknown field {k:?}")));
    }
    pretty(&einstein_extend(&s, &check_d)?)
}

pub fn catalog(dim: usize, case: &str) -> Result<String> {
    if dim != 6 && dim != 8 {
        return Err(CliError::Schema(format!("--dim must be 6 or 8, not {dim}")));
    }
    let case: Case = case.parse().map_err(|e: Error| CliError::Schema(e.to_string()))?;
    Ok(catalog_json(dim, case)?)
}
