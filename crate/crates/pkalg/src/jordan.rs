//! Jordan types of real matrices and the existence criteria for complex,
//! symplectic and pseudo-Kähler structures on `ℝ^{2n−1} ⋊_D ℝ`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::scalar::{GaussScalar, Scalar};
use crate::spectrum::{gaussian_spectrum, jordan_partition};

/// One real Jordan block. `J { m, alpha }` has size `m + 1`; `C { m, zeta }`
/// is the real block of a complex pair `ζ, ζ̄` of size `m + 1` each, stored
/// with `Im ζ > 0`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum JBlock {
    J { m: usize, alpha: Scalar },
    C { m: usize, zeta: GaussScalar },
}

impl JBlock {
    pub fn j(m: usize, alpha: Scalar) -> Self {
        JBlock::J { m, alpha }
    }

    /// Complex-pair block; the conjugate representative is chosen.
    pub fn c(m: usize, zeta: GaussScalar) -> Self {
        assert!(!zeta.im.is_zero(), "C blocks need a non-real eigenvalue");
        let zeta = if zeta.im.is_negative() { zeta.conj() } else { zeta };
        JBlock::C { m, zeta }
    }

    pub fn m(&self) -> usize {
        match self {
            JBlock::J { m, .. } | JBlock::C { m, .. } => *m,
        }
    }

    pub fn dim(&self) -> usize {
        match self {
            JBlock::J { m, .. } => m + 1,
            JBlock::C { m, .. } => 2 * (m + 1),
        }
    }

    pub fn scaled(&self, k: &Scalar) -> Self {
        match self {
            JBlock::J { m, alpha } => JBlock::j(*m, alpha * k),
            JBlock::C { m, zeta } => JBlock::c(*m, zeta.scale(k)),
        }
    }

    fn is_nilpotent(&self) -> bool {
        matches!(self, JBlock::J { alpha, .. } if alpha.is_zero())
    }
}

impl fmt::Display for JBlock {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            JBlock::J { m, alpha } => write!(f, "J_{m}({alpha})"),
            JBlock::C { m, zeta } => write!(f, "C_{m}({zeta})"),
        }
    }
}

/// A formal sum of Jordan blocks with positive multiplicities.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct JordanType {
    blocks: BTreeMap<JBlock, usize>,
}

impl JordanType {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_blocks(blocks: impl IntoIterator<Item = (JBlock, usize)>) -> Self {
        let mut t = Self::new();
        for (b, k) in blocks {
            t.add(b, k);
        }
        t
    }

    pub fn add(&mut self, b: JBlock, mult: usize) {
        if mult > 0 {
            *self.blocks.entry(b).or_insert(0) += mult;
        }
    }

    pub fn with(mut self, b: JBlock, mult: usize) -> Self {
        self.add(b, mult);
        self
    }

    pub fn plus(&self, other: &JordanType) -> JordanType {
        let mut out = self.clone();
        for (b, k) in &other.blocks {
            out.add(b.clone(), *k);
        }
        out
    }

    /// `self − other`, if `other` is contained in `self`.
    pub fn minus(&self, other: &JordanType) -> Option<JordanType> {
        let mut out = self.clone();
        for (b, k) in &other.blocks {
            let e = out.blocks.get_mut(b)?;
            if *e < *k {
                return None;
            }
            *e -= k;
            if *e == 0 {
                out.blocks.remove(b);
            }
        }
        Some(out)
    }

    pub fn mult(&self, b: &JBlock) -> usize {
        self.blocks.get(b).copied().unwrap_or(0)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&JBlock, usize)> {
        self.blocks.iter().map(|(b, k)| (b, *k))
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.iter().map(|(b, k)| b.dim() * k).sum()
    }

    pub fn is_nilpotent(&self) -> bool {
        self.blocks.keys().all(JBlock::is_nilpotent)
    }

    /// Type of `k·X` for a nonzero rational `k`.
    pub fn scaled(&self, k: &Scalar) -> JordanType {
        assert!(!k.is_zero());
        JordanType::from_blocks(self.iter().map(|(b, m)| (b.scaled(k), m)))
    }

    /// Type of `−X`.
    pub fn negated(&self) -> JordanType {
        self.scaled(&-Scalar::one())
    }

    /// Largest `max(|Re ζ|, |Im ζ|)` over the eigenvalues.
    pub fn max_eigen_coordinate(&self) -> Scalar {
        self.blocks
            .keys()
            .map(|b| match b {
                JBlock::J { alpha, .. } => alpha.abs(),
                JBlock::C { zeta, .. } => zeta.re.abs().max(zeta.im.abs()),
            })
            .max()
            .unwrap_or_else(Scalar::zero)
    }

    /// Real eigenvalues occurring in J blocks.
    pub fn real_eigenvalues(&self) -> BTreeSet<Scalar> {
        self.blocks
            .keys()
            .filter_map(|b| match b {
                JBlock::J { alpha, .. } => Some(alpha.clone()),
                JBlock::C { .. } => None,
            })
            .collect()
    }

    fn max_m(&self) -> usize {
        self.blocks.keys().map(JBlock::m).max().unwrap_or(0)
    }
}

impl fmt::Display for JordanType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.blocks.is_empty() {
            return write!(f, "0");
        }
        for (i, (b, k)) in self.iter().enumerate() {
            if i > 0 {
                write!(f, "+")?;
            }
            if k > 1 {
                write!(f, "{k}")?;
            }
            write!(f, "{b}")?;
        }
        Ok(())
    }
}

#[derive(Serialize, Deserialize)]
struct BlockJson {
    kind: String,
    m: usize,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    alpha: Option<Scalar>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    zeta: Option<GaussScalar>,
    mult: usize,
}

impl Serialize for JordanType {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let v: Vec<BlockJson> = self
            .iter()
            .map(|(b, mult)| match b {
                JBlock::J { m, alpha } => {
                    BlockJson { kind: "J".into(), m: *m, alpha: Some(alpha.clone()), zeta: None, mult }
                }
                JBlock::C { m, zeta } => {
                    BlockJson { kind: "C".into(), m: *m, alpha: None, zeta: Some(zeta.clone()), mult }
                }
            })
            .collect();
        v.serialize(s)
    }
}

impl<'de> Deserialize<'de> for JordanType {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let v = Vec::<BlockJson>::deserialize(d)?;
        let mut t = JordanType::new();
        for b in v {
            if b.mult == 0 {
                return Err(D::Error::custom("block multiplicity must be positive"));
            }
            let block = match (b.kind.as_str(), b.alpha, b.zeta) {
                ("J", Some(alpha), None) => JBlock::j(b.m, alpha),
                ("C", None, Some(zeta)) if !zeta.im.is_zero() => JBlock::c(b.m, zeta),
                _ => return Err(D::Error::custom("expected kind J with alpha or kind C with non-real zeta")),
            };
            t.add(block, b.mult);
        }
        Ok(t)
    }
}

/// Jordan type of a real square matrix.
pub fn jordan_type(m: &Matrix) -> Result<JordanType> {
    if !m.is_square() {
        return Err(Error::Dimension("jordan_type needs a square matrix".into()));
    }
    let mut t = JordanType::new();
    let mut complex: Option<crate::matrix::CMatrix> = None;
    for (z, _) in gaussian_spectrum(m)? {
        if z.is_real() {
            for size in jordan_partition(m, &z.re) {
                t.add(JBlock::j(size - 1, z.re.clone()), 1);
            }
        } else if z.im.is_positive() {
            let c = complex.get_or_insert_with(|| m.to_complex());
            for size in jordan_partition(c, &z) {
                t.add(JBlock::c(size - 1, z.clone()), 1);
            }
        }
    }
    Ok(t)
}

/// The three semigroups of Jordan types used by the existence criteria.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SemigroupId {
    /// Types of matrices commuting with a complex structure.
    GlC,
    /// Types of matrices in some symplectic algebra.
    GlSp,
    /// Types `j(A(t))` of skew-Hermitian endomorphisms.
    Q,
}

fn pair_partner(zeta: &GaussScalar) -> GaussScalar {
    GaussScalar::new(-&zeta.re, zeta.im.clone())
}

/// Multiplicity of `C_m(ζ)` equals that of `C_m(−ζ̄)` whenever `Re ζ ≠ 0`.
fn complex_pairs_balanced(j: &JordanType) -> bool {
    j.iter().all(|(b, k)| match b {
        JBlock::C { m, zeta } if !zeta.re.is_zero() => j.mult(&JBlock::c(*m, pair_partner(zeta))) == k,
        _ => true,
    })
}

pub fn in_semigroup(j: &JordanType, s: SemigroupId) -> bool {
    match s {
        SemigroupId::GlC => j.iter().all(|(b, k)| matches!(b, JBlock::C { .. }) || k % 2 == 0),
        SemigroupId::GlSp => {
            complex_pairs_balanced(j)
                && j.iter().all(|(b, k)| match b {
                    JBlock::J { m, alpha } if alpha.is_zero() => m % 2 == 1 || k % 2 == 0,
                    JBlock::J { m, alpha } => j.mult(&JBlock::j(*m, -alpha)) == k,
                    JBlock::C { .. } => true,
                })
        }
        SemigroupId::Q => {
            complex_pairs_balanced(j)
                && j.iter().all(|(b, k)| match b {
                    JBlock::J { alpha, .. } if alpha.is_zero() => k % 2 == 0,
                    JBlock::J { m, alpha } => k % 2 == 0 && j.mult(&JBlock::j(*m, -alpha)) == k,
                    JBlock::C { .. } => true,
                })
        }
    }
}

/// Real numbers worth trying as the eigenvalue of a distinguished block.
fn candidates(j: &JordanType) -> BTreeSet<Scalar> {
    let mut c = j.real_eigenvalues();
    c.insert(Scalar::zero());
    c
}

fn residual_in(j: &JordanType, head: &JordanType, s: SemigroupId) -> bool {
    j.minus(head).is_some_and(|r| in_semigroup(&r, s))
}

fn one(b: JBlock) -> JordanType {
    JordanType::new().with(b, 1)
}

/// Whether `ℝ^{2n−1} ⋊_D ℝ` with `j(D) = j` admits a complex structure.
pub fn admits_complex(j: &JordanType) -> bool {
    let top = j.max_m();
    candidates(j).into_iter().any(|a| {
        residual_in(j, &one(JBlock::j(0, a.clone())), SemigroupId::GlC)
            || (0..=top).any(|k| {
                let head = one(JBlock::j(k, a.clone())).with(JBlock::j(k + 1, a.clone()), 1);
                residual_in(j, &head, SemigroupId::GlC)
            })
    })
}

/// Whether `ℝ^{2n−1} ⋊_D ℝ` with `j(D) = j` admits a symplectic form.
pub fn admits_symplectic(j: &JordanType) -> bool {
    let top = j.max_m();
    let zero = Scalar::zero();
    if (0..=top).step_by(2).any(|m| residual_in(j, &one(JBlock::j(m, zero.clone())), SemigroupId::GlSp)) {
        return true;
    }
    candidates(j).into_iter().filter(|c| !c.is_zero()).any(|c| {
        residual_in(j, &one(JBlock::j(0, c.clone())), SemigroupId::GlSp)
            || (0..=top).any(|m| {
                let head = one(JBlock::j(m, -&c)).with(JBlock::j(m + 1, c.clone()), 1);
                residual_in(j, &head, SemigroupId::GlSp)
            })
    })
}

/// Whether `ℝ^{2n−1} ⋊_D ℝ` with `j(D) = j` admits a pseudo-Kähler structure.
pub fn admits_pk(j: &JordanType) -> bool {
    let top = j.max_m();
    let zero = Scalar::zero();
    if (0..=top).any(|m| {
        let head = one(JBlock::j(m, zero.clone())).with(JBlock::j(m + 1, zero.clone()), 1);
        residual_in(j, &head, SemigroupId::Q)
    }) {
        return true;
    }
    candidates(j).into_iter().any(|a| {
        residual_in(j, &one(JBlock::j(0, a.clone())), SemigroupId::Q)
            || residual_in(j, &one(JBlock::j(0, a.clone())).with(JBlock::j(0, -&a), 2), SemigroupId::Q)
    })
}

/// Complex and symplectic structures exist but no pseudo-Kähler one does.
pub fn cs_not_pk(j: &JordanType) -> bool {
    let top = j.max_m();
    candidates(j).into_iter().filter(|c| !c.is_zero()).any(|c| {
        (0..=top).any(|m| {
            let head = JordanType::new()
                .with(JBlock::j(m, -&c), 2)
                .with(JBlock::j(m, c.clone()), 1)
                .with(JBlock::j(m + 1, c.clone()), 1);
            residual_in(j, &head, SemigroupId::Q)
        })
    })
}

/// The four existence answers at once.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Decision {
    pub complex: bool,
    pub symplectic: bool,
    pub pseudo_kahler: bool,
    pub cs_not_pk: bool,
}

pub fn decide(j: &JordanType) -> Decision {
    Decision {
        complex: admits_complex(j),
        symplectic: admits_symplectic(j),
        pseudo_kahler: admits_pk(j),
        cs_not_pk: cs_not_pk(j),
    }
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use crate::scalar::qi;
    use proptest::prelude::*;

    pub(crate) fn jb(m: usize, a: i64) -> JBlock {
        JBlock::j(m, qi(a))
    }

    fn ci(m: usize, im: i64) -> JBlock {
        JBlock::c(m, GaussScalar::ints(0, im))
    }

    pub(crate) fn ty(blocks: &[(JBlock, usize)]) -> JordanType {
        JordanType::from_blocks(blocks.iter().cloned())
    }

    /// All multisets of the given blocks with total dimension at most `max_dim`.
    pub(crate) fn enumerate_types(blocks: &[JBlock], max_dim: usize) -> Vec<JordanType> {
        fn go(blocks: &[JBlock], i: usize, room: usize, cur: &mut JordanType, out: &mut Vec<JordanType>) {
            if i == blocks.len() {
                out.push(cur.clone());
                return;
            }
            let d = blocks[i].dim();
            let mut k = 0;
            while k * d <= room {
                let mut next = cur.clone();
                next.add(blocks[i].clone(), k);
                go(blocks, i + 1, room - k * d, &mut next, out);
                k += 1;
            }
        }
        let mut out = Vec::new();
        go(blocks, 0, max_dim, &mut JordanType::new(), &mut out);
        out
    }

    #[test]
    fn jordan_type_examples() {
        assert_eq!(jordan_type(&Matrix::zeros(3, 3)).unwrap(), ty(&[(jb(0, 0), 3)]));
        let d2 = crate::lie::tests::d2_6d();
        assert_eq!(jordan_type(&d2).unwrap(), ty(&[(jb(1, 0), 1), (jb(2, 0), 1)]));
        let rot = Matrix::from_ints(&[&[0, 3], &[-3, 0]]);
        assert_eq!(jordan_type(&rot).unwrap(), ty(&[(ci(0, 3), 1)]));
        let bad = Matrix::from_ints(&[&[0, 1], &[2, 0]]);
        assert_eq!(jordan_type(&bad), Err(Error::NonGaussianSpectrum));
    }

    #[test]
    fn semigroup_examples() {
        assert!(in_semigroup(&ty(&[(ci(0, 1), 1)]), SemigroupId::Q));
        assert!(!in_semigroup(&ty(&[(jb(0, 1), 1)]), SemigroupId::Q));
        assert!(in_semigroup(&ty(&[(jb(1, 0), 1)]), SemigroupId::GlSp));
        assert!(!in_semigroup(&ty(&[(jb(0, 0), 1)]), SemigroupId::GlSp));
        assert!(in_semigroup(&ty(&[(jb(0, 1), 1), (jb(0, -1), 1)]), SemigroupId::GlSp));
        assert!(!in_semigroup(&ty(&[(jb(0, 1), 1), (jb(0, -1), 1)]), SemigroupId::Q));
        let pair = ty(&[(JBlock::c(0, GaussScalar::ints(1, 2)), 1), (JBlock::c(0, GaussScalar::ints(-1, 2)), 1)]);
        assert!(in_semigroup(&pair, SemigroupId::Q));
        let lone = ty(&[(JBlock::c(0, GaussScalar::ints(1, 2)), 1)]);
        assert!(!in_semigroup(&lone, SemigroupId::Q));
        assert!(in_semigroup(&lone, SemigroupId::GlC));
    }

    #[test]
    fn decision_examples() {
        assert!(admits_complex(&ty(&[(jb(0, 5), 1)])));
        assert!(admits_complex(&ty(&[(jb(0, 0), 3), (jb(1, 0), 1)])));
        assert!(!admits_complex(&ty(&[(jb(1, 0), 2)])));
        assert!(admits_symplectic(&ty(&[(jb(0, 0), 1)])));
        assert!(admits_symplectic(&ty(&[(jb(0, 1), 2), (jb(0, -1), 1)])));
        assert!(admits_symplectic(&ty(&[(jb(0, 1), 1)])));
        assert!(admits_pk(&ty(&[(jb(0, 1), 1), (jb(0, -1), 2)])));
        let notpk = ty(&[(jb(0, -1), 2), (jb(0, 1), 1), (jb(1, 1), 1)]);
        assert!(!admits_pk(&notpk));
        assert!(cs_not_pk(&notpk));
        assert_eq!(
            decide(&notpk),
            Decision { complex: true, symplectic: true, pseudo_kahler: false, cs_not_pk: true }
        );
        assert!(!cs_not_pk(&ty(&[(jb(0, 1), 1)])));
        assert!(cs_not_pk(&notpk.clone().with(ci(0, 1), 1)));
    }

    #[test]
    fn nilpotent_complex_implies_pk() {
        let blocks: Vec<JBlock> = (0..7).map(|m| jb(m, 0)).collect();
        let all = enumerate_types(&blocks, 7);
        assert_eq!(all.len(), 1 + 1 + 2 + 3 + 5 + 7 + 11 + 15);
        for j in all {
            if admits_complex(&j) {
                assert!(admits_pk(&j), "{j}");
            }
        }
    }

    #[test]
    fn cs_not_pk_equivalence() {
        let mut blocks = Vec::new();
        for m in 0..5 {
            for a in [0, 1, -1] {
                blocks.push(jb(m, a));
            }
        }
        blocks.push(ci(0, 1));
        blocks.push(ci(1, 1));
        for j in enumerate_types(&blocks, 5) {
            let d = decide(&j);
            assert_eq!(d.cs_not_pk, d.complex && d.symplectic && !d.pseudo_kahler, "{j}");
        }
    }

    #[test]
    fn json_round_trip() {
        let j = ty(&[(jb(1, 0), 2), (ci(0, 1), 1)]);
        let s = serde_json::to_string(&j).unwrap();
        assert_eq!(
            s,
            r#"[{"kind":"J","m":1,"alpha":"0/1","mult":2},{"kind":"C","m":0,"zeta":"0/1+1/1 i","mult":1}]"#
        );
        assert_eq!(serde_json::from_str::<JordanType>(&s).unwrap(), j);
        assert_eq!(j.to_string(), "2J_1(0/1)+C_0(0/1+1/1 i)");
    }

    fn arb_block() -> impl Strategy<Value = JBlock> {
        prop_oneof![
            (0usize..3, -2i64..=2).prop_map(|(m, a)| jb(m, a)),
            (0usize..2, -2i64..=2, 1i64..=2).prop_map(|(m, re, im)| JBlock::c(m, GaussScalar::ints(re, im))),
        ]
    }

    fn arb_type() -> impl Strategy<Value = JordanType> {
        proptest::collection::vec((arb_block(), 1usize..3), 0..4).prop_map(JordanType::from_blocks)
    }

    proptest! {
        #[test]
        fn semigroups_closed_under_sum(a in arb_type(), b in arb_type()) {
            for s in [SemigroupId::GlC, SemigroupId::GlSp, SemigroupId::Q] {
                if in_semigroup(&a, s) && in_semigroup(&b, s) {
                    prop_assert!(in_semigroup(&a.plus(&b), s));
                }
            }
        }

        #[test]
        fn negation_matches_matrix(m in proptest::collection::vec(-2i64..=2, 9)) {
            let a = Matrix::from_fn(3, 3, |i, j| qi(m[3 * i + j]));
            if let Ok(t) = jordan_type(&a) {
                prop_assert_eq!(jordan_type(&-&a).unwrap(), t.negated());
                prop_assert_eq!(t.dim(), 3);
            }
        }
    }
}
