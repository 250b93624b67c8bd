//! The explicit six- and eight-dimensional normal forms, regenerated from the
//! family constructors with symbolic entries.
//!
//! Every displayed matrix is affine in its parameters (`λ`, `ρ`, `a`, `c₁`,
//! `x`, …), so it is recovered exactly from one evaluation at a base point
//! and one per parameter; a further evaluation checks affinity.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::blocks::{realize, Block, BlockType, XtAssignment};
use crate::error::{Error, Result};
use crate::family::{build_family, FamilyInstance, IsotropicShape};
use crate::matrix::Matrix;
use crate::scalar::{GaussScalar, Scalar};

/// `c + Σ cᵢ·nameᵢ` with rational coefficients.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct LinExpr {
    pub constant: Scalar,
    pub terms: BTreeMap<String, Scalar>,
}

impl LinExpr {
    pub fn constant(c: Scalar) -> Self {
        LinExpr { constant: c, terms: BTreeMap::new() }
    }

    pub fn eval(&self, values: &BTreeMap<String, Scalar>) -> Option<Scalar> {
        let mut x = self.constant.clone();
        for (n, c) in &self.terms {
            x += &(c * values.get(n)?);
        }
        Some(x)
    }
}

impl fmt::Display for LinExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (name, c) in &self.terms {
            let neg = c.is_negative();
            let abs = if neg { -c } else { c.clone() };
            let sign = match (first, neg) {
                (true, true) => "-",
                (true, false) => "",
                (false, true) => "-",
                (false, false) => "+",
            };
            if abs.is_one() {
                write!(f, "{sign}{name}")?;
            } else {
                write!(f, "{sign}{}{name}", plain(&abs))?;
            }
            first = false;
        }
        if first {
            return write!(f, "{}", plain(&self.constant));
        }
        if !self.constant.is_zero() {
            let sign = if self.constant.is_negative() { "-" } else { "+" };
            write!(f, "{sign}{}", plain(&self.constant.abs()))?;
        }
        Ok(())
    }
}

/// `3`, `-1/2`: integers without the `/1`.
fn plain(x: &Scalar) -> String {
    if x.is_integer() {
        x.numer().to_string()
    } else {
        x.to_string()
    }
}

/// A matrix of affine expressions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymbolicMatrix {
    pub rows: Vec<Vec<LinExpr>>,
}

impl SymbolicMatrix {
    /// Parameters in order of first occurrence, row by row.
    pub fn parameters(&self) -> Vec<String> {
        let mut out: Vec<String> = Vec::new();
        for row in &self.rows {
            for e in row {
                for n in e.terms.keys() {
                    if !out.contains(n) {
                        out.push(n.clone());
                    }
                }
            }
        }
        out
    }

    pub fn eval(&self, values: &BTreeMap<String, Scalar>) -> Option<Matrix> {
        let rows = self.rows.iter().map(|r| r.iter().map(|e| e.eval(values)).collect::<Option<Vec<_>>>()).collect::<Option<Vec<_>>>()?;
        Some(Matrix::from_rows(rows))
    }

    pub fn to_strings(&self) -> Vec<Vec<String>> {
        self.rows.iter().map(|r| r.iter().map(|e| e.to_string()).collect()).collect()
    }
}

/// Recovers `f` as an affine matrix function of the named parameters by
/// evaluating at the base point `(1, 3, 5, …)` and at each unit step from it.
/// The base point keeps `ρ > 0` and `x ≥ 0` valid.
pub fn symbolic(names: &[&str], f: impl Fn(&[Scalar]) -> Result<Matrix>) -> Result<SymbolicMatrix> {
    let k = names.len();
    // distinct values everywhere, so equal blocks never merge and reorder
    let base: Vec<Scalar> = (0..k).map(|i| Scalar::int(2 * i as i64 + 1)).collect();
    let at_base = f(&base)?;
    let mut slopes = Vec::with_capacity(k);
    for i in 0..k {
        let mut p = base.clone();
        p[i] = &p[i] + &Scalar::one();
        slopes.push(&f(&p)? - &at_base);
    }
    let (r, c) = (at_base.rows(), at_base.cols());
    let mut rows = vec![vec![LinExpr::default(); c]; r];
    for (a, row) in rows.iter_mut().enumerate() {
        for (b, e) in row.iter_mut().enumerate() {
            let mut constant = at_base[(a, b)].clone();
            for (i, s) in slopes.iter().enumerate() {
                let c = &s[(a, b)];
                if !c.is_zero() {
                    constant -= &(c * &base[i]);
                    e.terms.insert(names[i].to_string(), c.clone());
                }
            }
            e.constant = constant;
        }
    }
    let out = SymbolicMatrix { rows };
    // affinity check at a second point
    let probe: Vec<Scalar> = (0..k).map(|i| Scalar::int(3 + i as i64)).collect();
    let values: BTreeMap<String, Scalar> = names.iter().map(|n| n.to_string()).zip(probe.iter().cloned()).collect();
    if out.eval(&values).as_ref() != Some(&f(&probe)?) {
        return Err(Error::Unsupported("catalog entry is not affine in its parameters".into()));
    }
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Case {
    Iso,
    Noniso,
}

impl std::str::FromStr for Case {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "iso" => Ok(Case::Iso),
            "noniso" => Ok(Case::Noniso),
            _ => Err(Error::Unsupported(format!("case must be iso or noniso, got {s:?}"))),
        }
    }
}

/// One named matrix of a display.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CatalogMatrix {
    pub name: String,
    pub matrix: SymbolicMatrix,
}

/// A display: a label and its matrices in reading order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CatalogEntry {
    pub key: String,
    pub matrices: Vec<CatalogMatrix>,
}

#[derive(Serialize)]
struct MatrixOut {
    name: String,
    parameters: Vec<String>,
    rows: Vec<Vec<String>>,
}

#[derive(Serialize)]
struct EntryOut {
    key: String,
    matrices: Vec<MatrixOut>,
}

#[derive(Serialize)]
struct CatalogOut {
    dim: usize,
    case: Case,
    entries: Vec<EntryOut>,
}

/// Pretty JSON with a trailing newline, the format of the golden files.
pub fn catalog_json(dim: usize, case: Case) -> Result<String> {
    let entries = catalog(dim, case)?
        .into_iter()
        .map(|e| EntryOut {
            key: e.key,
            matrices: e
                .matrices
                .into_iter()
                .map(|m| MatrixOut { name: m.name, parameters: m.matrix.parameters(), rows: m.matrix.to_strings() })
                .collect(),
        })
        .collect();
    let mut s = serde_json::to_string_pretty(&CatalogOut { dim, case, entries }).expect("serializable");
    s.push('\n');
    Ok(s)
}

fn entry(key: &str, matrices: Vec<(&str, SymbolicMatrix)>) -> CatalogEntry {
    CatalogEntry {
        key: key.into(),
        matrices: matrices.into_iter().map(|(n, m)| CatalogMatrix { name: n.into(), matrix: m }).collect(),
    }
}

/// `D` and `g(t)` of `g₀(t(p), a)`; the last parameter is `a`.
fn non_isotropic(key: &str, names: &[&str], t: impl Fn(&[Scalar]) -> Result<BlockType>) -> Result<CatalogEntry> {
    let k = names.len() - 1;
    let d = symbolic(names, |p| {
        let f = FamilyInstance::g0(t(&p[..k])?, p[k].clone(), 1);
        Ok(build_family(&f)?.1.d)
    })?;
    let g = symbolic(&names[..k], |p| Ok(realize(&t(p)?).g))?;
    Ok(entry(key, vec![("D", d), ("g(t)", g)]))
}

fn family_d(f: FamilyInstance) -> Result<Matrix> {
    Ok(build_family(&f)?.1.d)
}

/// `D₂` (`c₂ = 0`) or `D₃` (`c₂ = 1`) with an explicit vector `v ∈ V(t)`.
fn isotropic_with_v(t: &BlockType, v: Vec<Scalar>, c2: i64) -> Result<Matrix> {
    let r = realize(t);
    let shape = IsotropicShape { endo: r.a, v, a: Scalar::zero(), c1: Scalar::zero(), c2: Scalar::int(c2) };
    Ok(shape.derivation(&r.g))
}

fn xt(entries: &[(usize, i8, &Scalar)]) -> XtAssignment {
    entries.iter().fold(XtAssignment::new(), |x, (m, e, v)| x.set(*m, *e, (*v).clone()))
}

fn catalog_6d_noniso() -> Result<Vec<CatalogEntry>> {
    Ok(vec![
        non_isotropic("6d_noniso_(2,0)", &["λ_1", "λ_2", "a"], |p| {
            Ok(BlockType::new().with(Block::imag(0, 1, p[0].clone()), 1).with(Block::imag(0, 1, p[1].clone()), 1))
        })?,
        non_isotropic("6d_noniso_(1,1)-I", &["λ", "a"], |p| Ok(BlockType::single(Block::imag(1, 1, p[0].clone()))))?,
        non_isotropic("6d_noniso_(1,1)-II", &["λ_1", "λ_2", "a"], |p| {
            Ok(BlockType::new().with(Block::imag(0, 1, p[0].clone()), 1).with(Block::imag(0, -1, p[1].clone()), 1))
        })?,
        non_isotropic("6d_noniso_(1,1)-III", &["ρ", "λ", "a"], |p| {
            Ok(BlockType::single(Block::pair(0, GaussScalar::new(p[0].clone(), p[1].clone()))?))
        })?,
    ])
}

fn catalog_6d_iso() -> Result<Vec<CatalogEntry>> {
    let t = |l: &Scalar| BlockType::single(Block::imag(0, 1, l.clone()));
    let nil = BlockType::single(Block::nil(0, 1));
    let d1 = symbolic(&["λ", "c_2"], |p| family_d(FamilyInstance::g1(t(&p[0]), p[1].clone())))?;
    let d4 = symbolic(&["λ", "c_1"], |p| family_d(FamilyInstance::g4(t(&p[0]), p[1].clone())))?;
    let d5 = symbolic(&["λ"], |p| family_d(FamilyInstance::g5(t(&p[0]))))?;
    let d6 = symbolic(&["λ"], |p| family_d(FamilyInstance::g6(t(&p[0]))))?;
    let one = Scalar::one();
    let d2 = symbolic(&[], |_| family_d(FamilyInstance::g2(nil.clone(), xt(&[(0, 1, &one)]))))?;
    let d3 = symbolic(&["x"], |p| family_d(FamilyInstance::g3(nil.clone(), xt(&[(0, 1, &p[0])]))))?;
    Ok(vec![
        entry("6d_iso_D1456", vec![("D_1", d1), ("D_4", d4), ("D_5", d5), ("D_6", d6)]),
        entry("6d_iso_D23", vec![("D_2", d2), ("D_3", d3)]),
    ])
}

fn catalog_8d_noniso() -> Result<Vec<CatalogEntry>> {
    let pm = |m: usize, e: i8, l: &Scalar| Block::imag(m, e, l.clone());
    Ok(vec![
        non_isotropic("8d_noniso_(3,0)", &["λ_1", "λ_2", "λ_3", "a"], |p| {
            Ok(BlockType::new().with(pm(0, 1, &p[0]), 1).with(pm(0, 1, &p[1]), 1).with(pm(0, 1, &p[2]), 1))
        })?,
        non_isotropic("8d_noniso_(2,1)-I", &["λ_1", "λ_2", "a"], |p| {
            Ok(BlockType::new().with(pm(1, 1, &p[0]), 1).with(pm(0, 1, &p[1]), 1))
        })?,
        non_isotropic("8d_noniso_(2,1)-II", &["λ_1", "λ_2", "λ_3", "a"], |p| {
            Ok(BlockType::new().with(pm(0, 1, &p[0]), 1).with(pm(0, 1, &p[1]), 1).with(pm(0, -1, &p[2]), 1))
        })?,
        non_isotropic("8d_noniso_(2,1)-III", &["ρ_1", "λ_1", "λ_2", "a"], |p| {
            Ok(BlockType::new().with(Block::pair(0, GaussScalar::new(p[0].clone(), p[1].clone()))?, 1).with(pm(0, 1, &p[2]), 1))
        })?,
        non_isotropic("8d_noniso_(2,1)-IV", &["λ", "a"], |p| Ok(BlockType::single(pm(2, -1, &p[0]))))?,
    ])
}

fn catalog_8d_iso() -> Result<Vec<CatalogEntry>> {
    let zero = Scalar::zero;
    let one = Scalar::one;
    // two copies of Δ₀⁺(0), with x on each copy separately
    let t0 = BlockType::new().with(Block::nil(0, 1), 2);
    let v0 = |x1: &Scalar, x2: &Scalar| vec![x1.clone(), zero(), x2.clone(), zero()];
    let t1 = BlockType::single(Block::nil(1, 1));
    let t2 = BlockType::new().with(Block::nil(0, 1), 1).with(Block::nil(0, -1), 1);
    let g2 = |t: &BlockType, x: XtAssignment| family_d(FamilyInstance::g2(t.clone(), x));
    let g3 = |t: &BlockType, x: XtAssignment| family_d(FamilyInstance::g3(t.clone(), x));
    let o = one();
    Ok(vec![
        entry(
            "8d_iso_positive_D2",
            vec![
                ("D_2(t_0,(1,x_2))", symbolic(&["x_2"], |p| isotropic_with_v(&t0, v0(&one(), &p[0]), 0))?),
                ("D_2(t_0,(0,1))", symbolic(&[], |_| isotropic_with_v(&t0, v0(&zero(), &one()), 0))?),
            ],
        ),
        entry(
            "8d_iso_positive_D3",
            vec![("D_3(t_0,(x_1,x_2))", symbolic(&["x_1", "x_2"], |p| isotropic_with_v(&t0, v0(&p[0], &p[1]), 1))?)],
        ),
        entry(
            "8d_iso_neutral_t1_D23",
            vec![
                ("D_2(t_1,x)", symbolic(&["x"], |p| g2(&t1, xt(&[(1, 1, &p[0])])))?),
                ("D_3(t_1,x)", symbolic(&["x"], |p| g3(&t1, xt(&[(1, 1, &p[0])])))?),
            ],
        ),
        entry(
            "8d_iso_neutral_t2_D23_I",
            vec![
                ("D_2(t_2,(1,0))", symbolic(&[], |_| g2(&t2, xt(&[(0, 1, &o)])))?),
                ("D_3(t_2,(x^+,0))", symbolic(&["x^+"], |p| g3(&t2, xt(&[(0, 1, &p[0])])))?),
            ],
        ),
        entry(
            "8d_iso_neutral_t2_D23_II",
            vec![
                ("D_2(t_2,(0,1))", symbolic(&[], |_| g2(&t2, xt(&[(0, -1, &o)])))?),
                ("D_3(t_2,(0,x^-))", symbolic(&["x^-"], |p| g3(&t2, xt(&[(0, -1, &p[0])])))?),
            ],
        ),
        entry(
            "8d_iso_neutral_t2_D23_III",
            vec![
                ("D_2(t_2,(1,1))", symbolic(&[], |_| g2(&t2, xt(&[(0, 1, &o), (0, -1, &o)])))?),
                ("D_3(t_2,(1,1))", symbolic(&[], |_| g3(&t2, xt(&[(0, 1, &o), (0, -1, &o)])))?),
            ],
        ),
    ])
}

/// The displays for `dim ∈ {6, 8}` and the chosen case.
pub fn catalog(dim: usize, case: Case) -> Result<Vec<CatalogEntry>> {
    match (dim, case) {
        (6, Case::Noniso) => catalog_6d_noniso(),
        (6, Case::Iso) => catalog_6d_iso(),
        (8, Case::Noniso) => catalog_8d_noniso(),
        (8, Case::Iso) => catalog_8d_iso(),
        _ => Err(Error::Unsupported(format!("no catalog for dimension {dim}; use 6 or 8"))),
    }
}

#[cfg(test)]
mod tests;
