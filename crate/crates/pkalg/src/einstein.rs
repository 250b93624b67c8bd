//! Pseudo-Kähler-Einstein extensions `(𝔤 ⊕_{−2ω} ⟨b⟩) ⋊ ⟨e₀⟩` of nilpotent
//! almost abelian pseudo-Kähler algebras.
//!
//! The extension needs a derivation `Ď = Id + Ďᵃ` of `𝔤` with `Ďᵃ` in the
//! unitary algebra `u(g, J)`. For a fixed base algebra every condition is
//! linear in `Ďᵃ`, so the admissible `Ď` form an affine space which is solved
//! exactly and reported through named coordinates.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::blocks::{Block, BlockType, XtAssignment};
use crate::curvature::{curvature, curvature_report, levi_civita, CurvatureReport};
use crate::error::{Error, Result};
use crate::family::{build_family, FamilyInstance};
use crate::lie::{AlmostAbelianPresentation, Bracket, LieAlgebra};
use crate::matrix::{is_zero_vec, standard_j, unit, Matrix};
use crate::pk::{verify_pk, PKStructure};
use crate::scalar::Scalar;

/// `M = K + α⊗e_N + e^N⊗(k·e_N + u)` on `𝔤 = 𝔥 ⊕ ⟨e_N⟩`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DerivationSplit {
    pub k_h: Matrix,
    pub alpha: Vec<Scalar>,
    pub u: Vec<Scalar>,
    pub k: Scalar,
}

impl DerivationSplit {
    pub fn of(m: &Matrix) -> Self {
        let h = m.rows() - 1;
        DerivationSplit {
            k_h: m.submatrix(0, h, 0, h),
            alpha: (0..h).map(|j| m[(h, j)].clone()).collect(),
            u: (0..h).map(|i| m[(i, h)].clone()).collect(),
            k: m[(h, h)].clone(),
        }
    }

    pub fn matrix(&self) -> Matrix {
        let h = self.k_h.rows();
        let mut m = Matrix::zeros(h + 1, h + 1);
        m.set_block(0, 0, &self.k_h);
        for i in 0..h {
            m[(h, i)] = self.alpha[i].clone();
            m[(i, h)] = self.u[i].clone();
        }
        m[(h, h)] = self.k.clone();
        m
    }
}

/// Derivation test through the split: `[K, D] = kD`, and either `α = 0` or
/// `Im D ⊆ ker α ⊆ ker D`.
pub fn general_derivation_check(p: &AlmostAbelianPresentation, s: &DerivationSplit) -> bool {
    let d = &p.d;
    if s.k_h.commutator(d) != d.scale(&s.k) {
        return false;
    }
    if is_zero_vec(&s.alpha) {
        return true;
    }
    let alpha = Matrix::from_rows(vec![s.alpha.clone()]);
    (&alpha * d).is_zero() && alpha.kernel().iter().all(|x| is_zero_vec(&d.mul_vec(x)))
}

/// A basis of `u(g, J) = {X : XJ = JX, Xᵀg + gX = 0}` in reduced echelon form.
pub fn unitary_algebra_basis(j: &Matrix, g: &Matrix) -> Vec<Matrix> {
    let n = j.rows();
    let idx = |r: usize, c: usize| r * n + c;
    let mut rows = Vec::new();
    for r in 0..n {
        for c in 0..n {
            // (XJ − JX)_{rc} and (Xᵀg + gX)_{rc}
            let mut comm = vec![Scalar::zero(); n * n];
            let mut skew = vec![Scalar::zero(); n * n];
            for t in 0..n {
                comm[idx(r, t)] += &j[(t, c)];
                comm[idx(t, c)] -= &j[(r, t)];
                skew[idx(t, r)] += &g[(t, c)];
                skew[idx(t, c)] += &g[(r, t)];
            }
            rows.push(comm);
            rows.push(skew);
        }
    }
    Matrix::from_rows(rows)
        .kernel()
        .into_iter()
        .map(|v| Matrix::from_fn(n, n, |r, c| v[idx(r, c)].clone()))
        .collect()
}

/// Named coordinates on `u(g, J)` for the isotropic layout
/// `⟨e₁, e₂⟩ ⊕ V ⊕ ⟨e_{2n−1}, e_{2n}⟩`:
/// `d11, d12, d1m, dm1` (with `m = 2n−1`), `z, w ∈ V` and the `p`
/// coordinates of `P − Id ∈ u(V)`.
pub fn isotropic_skew_basis(g_v: &Matrix) -> (Vec<String>, Vec<Matrix>) {
    let k = g_v.rows();
    let n = k + 4;
    let (p, q) = (n - 2, n - 1);
    let j_v = standard_j(k / 2);
    let mut names = Vec::new();
    let mut basis = Vec::new();
    let mut push = |name: String, m: Matrix| {
        names.push(name);
        basis.push(m);
    };
    let set = |entries: &[(usize, usize, Scalar)]| {
        let mut m = Matrix::zeros(n, n);
        for (r, c, x) in entries {
            m[(*r, *c)] = x.clone();
        }
        m
    };
    let one = Scalar::one;
    let neg = || -Scalar::one();
    push("d11".into(), set(&[(0, 0, one()), (1, 1, one()), (p, p, neg()), (q, q, neg())]));
    push("d12".into(), set(&[(0, 1, one()), (1, 0, neg()), (p, q, one()), (q, p, neg())]));
    let m = n - 1;
    let label = |a: usize, b: usize| if a < 10 && b < 10 { format!("d{a}{b}") } else { format!("d{a},{b}") };
    push(label(1, m), set(&[(0, p, one()), (1, q, one())]));
    push(label(m, 1), set(&[(p, 0, one()), (q, 1, one())]));
    for (letter, is_z) in [("z", true), ("w", false)] {
        for i in 0..k {
            let x = unit::<Scalar>(k, i);
            let jx = j_v.mul_vec(&x);
            let flat_x = g_v.mul_vec(&x);
            let flat_jx = g_v.mul_vec(&jx);
            let mut mat = Matrix::zeros(n, n);
            for r in 0..k {
                if is_z {
                    // rows 1, 2: −(Jz)^♭, z^♭; columns 2n−1, 2n: z, Jz
                    mat[(0, 2 + r)] = -&flat_jx[r];
                    mat[(1, 2 + r)] = flat_x[r].clone();
                    mat[(2 + r, p)] = x[r].clone();
                    mat[(2 + r, q)] = jx[r].clone();
                } else {
                    // columns 1, 2: w, Jw; rows 2n−1, 2n: (Jw)^♭, −w^♭
                    mat[(2 + r, 0)] = x[r].clone();
                    mat[(2 + r, 1)] = jx[r].clone();
                    mat[(p, 2 + r)] = flat_jx[r].clone();
                    mat[(q, 2 + r)] = -&flat_x[r];
                }
            }
            push(format!("{letter}{}", i + 1), mat);
        }
    }
    let inner = unitary_algebra_basis(&j_v, g_v);
    let single = inner.len() == 1;
    for (i, b) in inner.into_iter().enumerate() {
        let mut mat = Matrix::zeros(n, n);
        mat.set_block(2, 2, &b);
        push(if single { "p".into() } else { format!("p{}", i + 1) }, mat);
    }
    (names, basis)
}

/// The affine family `Ď = base + Σ tᵢ·directions[i]` of admissible
/// derivations; `parameters[i]` names the coordinate `tᵢ`. `constraints`
/// lists residual nonlinear conditions and is empty for numeric bases.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExtensionFamily {
    pub parameters: Vec<String>,
    pub base: Matrix,
    pub directions: Vec<Matrix>,
    #[serde(default)]
    pub constraints: Vec<String>,
    /// Every named coordinate as an affine function of the free parameters:
    /// constant term first, then one coefficient per free parameter.
    pub coordinates: BTreeMap<String, Vec<Scalar>>,
}

impl ExtensionFamily {
    /// `Ď` at the given parameter values.
    pub fn instantiate(&self, values: &[Scalar]) -> Result<Matrix> {
        if values.len() != self.parameters.len() {
            return Err(Error::Dimension(format!("{} parameter values needed", self.parameters.len())));
        }
        let mut m = self.base.clone();
        for (t, d) in values.iter().zip(&self.directions) {
            if !t.is_zero() {
                m = &m + &d.scale(t);
            }
        }
        Ok(m)
    }

    /// Named coordinates of `Ď` at the given parameter values.
    pub fn derivation(&self, values: &[Scalar]) -> Result<ExtensionDerivation> {
        let check_d = self.instantiate(values)?;
        let params = self
            .coordinates
            .iter()
            .map(|(name, aff)| {
                let mut x = aff[0].clone();
                for (c, t) in aff[1..].iter().zip(values) {
                    x += &(c * t);
                }
                (name.clone(), x)
            })
            .collect();
        Ok(ExtensionDerivation { check_d, params })
    }

    /// `E = Ď + 2 b*⊗b` on `𝔤 ⊕ ⟨b⟩` at the given parameter values.
    pub fn e_matrix(&self, values: &[Scalar]) -> Result<Matrix> {
        Ok(e_matrix(&self.instantiate(values)?))
    }
}

/// `Ď` together with its named coordinates.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExtensionDerivation {
    pub check_d: Matrix,
    pub params: BTreeMap<String, Scalar>,
}

pub fn e_matrix(check_d: &Matrix) -> Matrix {
    let n = check_d.rows();
    let mut e = Matrix::zeros(n + 1, n + 1);
    e.set_block(0, 0, check_d);
    e[(n, n)] = Scalar::int(2);
    e
}

/// Derivation defect of `M` on the pairs `i < j`, flattened.
fn derivation_defect(l: &LieAlgebra, m: &Matrix) -> Vec<Scalar> {
    let n = l.dim();
    let mut out = Vec::with_capacity(n * n * (n - 1) / 2);
    for i in 0..n {
        for j in i + 1..n {
            let lhs = m.mul_vec(&l.bracket_basis(i, j));
            let t1 = l.bracket(&m.column(i), &unit(n, j));
            let t2 = l.bracket(&unit(n, i), &m.column(j));
            for a in 0..n {
                out.push(&(&lhs[a] - &t1[a]) - &t2[a]);
            }
        }
    }
    out
}

/// Solves `Id + Σ θᵢ Bᵢ ∈ Der(l)` exactly.
pub fn solve_in_basis(l: &LieAlgebra, names: &[String], basis: &[Matrix]) -> Option<ExtensionFamily> {
    let n = l.dim();
    let id = Matrix::identity(n);
    let m = basis.len();
    let cols: Vec<Vec<Scalar>> = basis.iter().map(|b| derivation_defect(l, b)).collect();
    let rhs: Vec<Scalar> = derivation_defect(l, &id).iter().map(|x| -x).collect();
    let rows = rhs.len();
    let mut aug = Matrix::zeros(rows, m + 1);
    for r in 0..rows {
        for (c, col) in cols.iter().enumerate() {
            aug[(r, c)] = col[r].clone();
        }
        aug[(r, m)] = rhs[r].clone();
    }
    let (red, pivots) = aug.rref();
    if pivots.last() == Some(&m) {
        return None;
    }
    let free: Vec<usize> = (0..m).filter(|c| !pivots.contains(c)).collect();
    // coordinate c = const + Σ coeff_f t_f
    let mut coords: Vec<Vec<Scalar>> = vec![vec![Scalar::zero(); free.len() + 1]; m];
    for (fi, &f) in free.iter().enumerate() {
        coords[f][fi + 1] = Scalar::one();
    }
    for (r, &p) in pivots.iter().enumerate() {
        coords[p][0] = red[(r, m)].clone();
        for (fi, &f) in free.iter().enumerate() {
            coords[p][fi + 1] = -&red[(r, f)];
        }
    }
    let combine = |k: usize| {
        let mut acc = if k == 0 { id.clone() } else { Matrix::zeros(n, n) };
        for (c, b) in coords.iter().zip(basis) {
            if !c[k].is_zero() {
                acc = &acc + &b.scale(&c[k]);
            }
        }
        acc
    };
    Some(ExtensionFamily {
        parameters: free.iter().map(|&f| names[f].clone()).collect(),
        base: combine(0),
        directions: (1..=free.len()).map(combine).collect(),
        constraints: Vec::new(),
        coordinates: names.iter().cloned().zip(coords).collect(),
    })
}

/// All admissible `Ď` for a family instance. Isotropic bases must be
/// nilpotent. Non-isotropic ones are solved over a basis of `u(g, J)`; in
/// indefinite signature some non-abelian ones do admit a solution.
pub fn solve_extension_derivations(f: &FamilyInstance) -> Result<Option<ExtensionFamily>> {
    let (s, _) = build_family(f)?;
    let l = &s.algebra;
    if f.is_isotropic() {
        if !l.is_nilpotent() {
            return Err(Error::NotNilpotent);
        }
        let k = s.dim() - 4;
        let (names, basis) = isotropic_skew_basis(&s.g.submatrix(2, 2 + k, 2, 2 + k));
        Ok(solve_in_basis(l, &names, &basis))
    } else {
        let basis = unitary_algebra_basis(&s.j, &s.g);
        let names: Vec<String> = (1..=basis.len()).map(|i| format!("u{i}")).collect();
        Ok(solve_in_basis(l, &names, &basis))
    }
}

/// `𝔤̃` with basis `e₁…e_N, b, e₀`, its structure and the verified Einstein
/// constant `dim 𝔤̃ + 2`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExtendedAlgebra {
    pub algebra: LieAlgebra,
    #[serde(rename = "J")]
    pub j: Matrix,
    pub g: Matrix,
    pub einstein_constant: Scalar,
    #[serde(rename = "E")]
    pub e: Matrix,
    pub curvature: CurvatureReport,
}

/// Checks the hypotheses on `Ď`, builds `𝔤̃` and verifies Jacobi, the
/// pseudo-Kähler conditions and `Ric = (dim 𝔤̃ + 2)·g̃` exactly.
pub fn einstein_extend(s: &PKStructure, check_d: &Matrix) -> Result<ExtendedAlgebra> {
    let l = &s.algebra;
    let n = l.dim();
    if !l.is_nilpotent() {
        return Err(Error::NotNilpotent);
    }
    let bad = |m: &str| Err(Error::InvalidDerivation(m.into()));
    if check_d.rows() != n || !check_d.is_square() {
        return bad("wrong size");
    }
    let skew = check_d - &Matrix::identity(n);
    if &skew * &s.j != &s.j * &skew {
        return bad("skew part does not commute with J");
    }
    if !(&(&skew.transpose() * &s.g) + &(&s.g * &skew)).is_zero() {
        return bad("Ď − Id is not skew-symmetric for g");
    }
    if !l.is_derivation(check_d) {
        return bad("Ď is not a derivation");
    }
    let (b, e0) = (n, n + 1);
    let mut brackets = l.brackets();
    // db* = −2ω, i.e. b*([X, Y]) = 2ω(X, Y)
    for i in 0..n {
        for j in i + 1..n {
            let w = &s.omega[(i, j)];
            if !w.is_zero() {
                brackets.push(Bracket { i, j, k: b, c: w * &Scalar::int(2) });
            }
        }
    }
    // [e₀, X] = ĎX, [e₀, b] = 2b, stored as [X, e₀] = −ĎX
    for j in 0..n {
        for k in 0..n {
            let c = &check_d[(k, j)];
            if !c.is_zero() {
                brackets.push(Bracket { i: j, j: e0, k, c: -c });
            }
        }
    }
    brackets.push(Bracket { i: b, j: e0, k: b, c: Scalar::int(-2) });
    let algebra = LieAlgebra::new(n + 2, &brackets).map_err(|_| Error::InvalidDerivation("extension violates Jacobi".into()))?;
    let mut j = Matrix::zeros(n + 2, n + 2);
    j.set_block(0, 0, &s.j);
    j[(e0, b)] = Scalar::one();
    j[(b, e0)] = -Scalar::one();
    let mut g = Matrix::zeros(n + 2, n + 2);
    g.set_block(0, 0, &s.g);
    g[(b, b)] = -Scalar::one();
    g[(e0, e0)] = -Scalar::one();
    let ext = PKStructure::new(algebra, j, g)?;
    if !verify_pk(&ext).is_pseudo_kahler() {
        return bad("extension is not pseudo-Kähler");
    }
    let einstein_constant = Scalar::int(n as i64 + 4);
    let c = levi_civita(&ext.algebra, &ext.g)?;
    let k = curvature(&c, &ext.algebra, &ext.g)?;
    if k.ricci != ext.g.scale(&einstein_constant) {
        return bad("extension is not Einstein");
    }
    let report = curvature_report(&ext.algebra, &ext.g)?;
    Ok(ExtendedAlgebra { algebra: ext.algebra, j: ext.j, g: ext.g, einstein_constant, e: e_matrix(check_d), curvature: report })
}

/// The four nilpotent six-dimensional isotropic bases with `V = Δ₀⁺(0)`:
/// `g₂` (`x = 1`), `g₃(x)`, `g₄(c₁)` and `g₅`.
pub fn six_dimensional_bases(x: Scalar, c1: Scalar) -> [FamilyInstance; 4] {
    let t = BlockType::single(Block::nil(0, 1));
    [
        FamilyInstance::g2(t.clone(), XtAssignment::new().set(0, 1, Scalar::one())),
        FamilyInstance::g3(t.clone(), XtAssignment::new().set(0, 1, x)),
        FamilyInstance::g4(t.clone(), c1),
        FamilyInstance::g5(t),
    ]
}

/// Extension families over the six-dimensional nilpotent isotropic bases at
/// `x = 1`, `c₁ = 0`; `None` where no admissible `Ď` exists.
pub fn classify_6d_extensions() -> Result<Vec<(FamilyInstance, Option<ExtensionFamily>)>> {
    six_dimensional_bases(Scalar::one(), Scalar::zero())
        .into_iter()
        .map(|f| Ok((f.clone(), solve_extension_derivations(&f)?)))
        .collect()
}
