//! Built-in comparison algebras from the four-dimensional pseudo-Kähler and
//! six-dimensional nilpotent pseudo-Kähler classifications.
//!
//! The structure constants ship as `resources/v1/named_algebras.json`. Only
//! the isomorphism class matters; matching goes through [`iso_fingerprint`].

use std::sync::OnceLock;

use serde::Deserialize;

use crate::error::{Error, Result};
use crate::jordan::JBlock;
use crate::lie::{iso_fingerprint, AlmostAbelianPresentation, Bracket, Fingerprint, LieAlgebra};
use crate::scalar::Scalar;

const CATALOG: &str = include_str!("../resources/v1/named_algebras.json");

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Parameter {
    pub name: String,
    #[serde(default)]
    pub positive: bool,
}

/// `[e_i, e_j] = c·e_k`, times the parameter when `times` is set.
#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NamedBracket {
    pub i: usize,
    pub j: usize,
    pub k: usize,
    pub c: Scalar,
    #[serde(default)]
    pub times: Option<String>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NamedAlgebra {
    pub name: String,
    pub display: String,
    pub source: String,
    pub dim: usize,
    #[serde(default)]
    pub parameter: Option<Parameter>,
    pub brackets: Vec<NamedBracket>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct CatalogFile {
    version: u32,
    algebras: Vec<NamedAlgebra>,
}

/// Every built-in algebra, in file order.
pub fn named_algebras() -> &'static [NamedAlgebra] {
    static ALL: OnceLock<Vec<NamedAlgebra>> = OnceLock::new();
    ALL.get_or_init(|| {
        let file: CatalogFile = serde_json::from_str(CATALOG).expect("built-in catalog is valid JSON");
        assert_eq!(file.version, 1);
        file.algebras
    })
}

pub fn named(name: &str) -> Result<&'static NamedAlgebra> {
    named_algebras()
        .iter()
        .find(|a| a.name == name)
        .ok_or_else(|| Error::Unsupported(format!("no built-in algebra named {name:?}")))
}

impl NamedAlgebra {
    /// The algebra itself, with `param` substituted for a family member.
    pub fn algebra(&self, param: Option<&Scalar>) -> Result<LieAlgebra> {
        let p = match (&self.parameter, param) {
            (None, None) => None,
            (Some(p), Some(v)) => {
                if p.positive && !v.is_positive() {
                    return Err(Error::InvalidFamilyParams(format!("{} must be positive", p.name)));
                }
                Some(v)
            }
            (None, Some(_)) => return Err(Error::InvalidFamilyParams(format!("{} has no parameter", self.name))),
            (Some(p), None) => return Err(Error::InvalidFamilyParams(format!("{} needs a value for {}", self.name, p.name))),
        };
        let mut out = Vec::with_capacity(self.brackets.len());
        for b in &self.brackets {
            if b.i == 0 || b.j == 0 || b.k == 0 {
                return Err(Error::Unsupported("bracket indices are 1-based".into()));
            }
            let c = match (&b.times, p) {
                (None, _) => b.c.clone(),
                (Some(_), Some(v)) => &b.c * v,
                (Some(t), None) => return Err(Error::InvalidFamilyParams(format!("unknown parameter {t}"))),
            };
            out.push(Bracket { i: b.i - 1, j: b.j - 1, k: b.k - 1, c });
        }
        LieAlgebra::new(self.dim, &out)
    }

    pub fn fingerprint(&self, param: Option<&Scalar>) -> Result<Fingerprint> {
        let l = self.algebra(param)?;
        iso_fingerprint(&AlmostAbelianPresentation::from_algebra(&l)?)
    }
}

/// The built-in algebra isomorphic to `p`, with the parameter value for a
/// family member. For `𝔯′₄,₀,δ` the value is `δ = |λ|/|a|`, recovered from
/// the normalized Jordan type.
pub fn identify(p: &AlmostAbelianPresentation) -> Result<Option<(&'static NamedAlgebra, Option<Scalar>)>> {
    let f = iso_fingerprint(p)?;
    for a in named_algebras() {
        if a.dim != f.dim {
            continue;
        }
        match &a.parameter {
            None => {
                if a.fingerprint(None)? == f {
                    return Ok(Some((a, None)));
                }
            }
            Some(_) => {
                for delta in family_candidates(&f) {
                    if a.fingerprint(Some(&delta))? == f {
                        return Ok(Some((a, Some(delta))));
                    }
                }
            }
        }
    }
    Ok(None)
}

/// Ratios of eigenvalue coordinates; one of them is the modulus of any
/// one-parameter family whose members are scalings of each other.
fn family_candidates(f: &Fingerprint) -> Vec<Scalar> {
    let mut coords: Vec<Scalar> = Vec::new();
    for (b, _) in f.normalized_type.iter() {
        let (re, im) = match b {
            JBlock::J { alpha, .. } => (alpha.clone(), Scalar::zero()),
            JBlock::C { zeta, .. } => (zeta.re.clone(), zeta.im.clone()),
        };
        for x in [re, im] {
            if !x.is_zero() && !coords.contains(&x.abs()) {
                coords.push(x.abs());
            }
        }
    }
    let mut out = Vec::new();
    for a in &coords {
        for b in &coords {
            let r = a / b;
            if !out.contains(&r) {
                out.push(r);
            }
        }
    }
    out
}

#[cfg(test)]
mod tests;
