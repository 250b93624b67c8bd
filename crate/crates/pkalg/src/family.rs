//! The seven families `g₀ … g₆` of almost abelian pseudo-Kähler algebras,
//! the derivation shapes behind them, the stabilizer of the ideal `𝔥` and
//! unitary equivalence of family members.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::blocks::{decompose_real, realize, reflect, signature, v_of_x, Block, BlockType, XtAssignment};
use crate::error::{Error, Result};
use crate::jordan::{jordan_type, JBlock, JordanType};
use crate::lie::{almost_abelian, AlmostAbelianPresentation};
use crate::matrix::{bilinear, is_zero_vec, standard_j, vec_scale, vec_sub, Matrix};
use crate::pk::PKStructure;
use crate::scalar::Scalar;

/// Optional parameters; which ones a family accepts is checked by
/// [`FamilyInstance::validate`].
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FamilyParams {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub a: Option<Scalar>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eps: Option<i8>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub c1: Option<Scalar>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub c2: Option<Scalar>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub x: Option<XtAssignment>,
}

/// A member `g_i(t, …)` of one of the seven families.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FamilyInstance {
    pub family: u8,
    pub t: BlockType,
    #[serde(default)]
    pub params: FamilyParams,
}

impl FamilyInstance {
    fn with(family: u8, t: BlockType, params: FamilyParams) -> Self {
        FamilyInstance { family, t, params }
    }

    pub fn g0(t: BlockType, a: Scalar, eps: i8) -> Self {
        Self::with(0, t, FamilyParams { a: Some(a), eps: Some(eps), ..Default::default() })
    }

    pub fn g1(t: BlockType, c2: Scalar) -> Self {
        Self::with(1, t, FamilyParams { c2: Some(c2), ..Default::default() })
    }

    pub fn g2(t: BlockType, x: XtAssignment) -> Self {
        Self::with(2, t, FamilyParams { x: Some(x), ..Default::default() })
    }

    pub fn g3(t: BlockType, x: XtAssignment) -> Self {
        Self::with(3, t, FamilyParams { x: Some(x), ..Default::default() })
    }

    pub fn g4(t: BlockType, c1: Scalar) -> Self {
        Self::with(4, t, FamilyParams { c1: Some(c1), ..Default::default() })
    }

    pub fn g5(t: BlockType) -> Self {
        Self::with(5, t, FamilyParams::default())
    }

    pub fn g6(t: BlockType) -> Self {
        Self::with(6, t, FamilyParams::default())
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |s: String| Err(Error::InvalidFamilyParams(s));
        let p = &self.params;
        let allowed: &[&str] = match self.family {
            0 => &["a", "eps"],
            1 => &["c2"],
            2 | 3 => &["x"],
            4 => &["c1"],
            5 | 6 => &[],
            f => return bad(format!("family index {f} is not in 0..=6")),
        };
        let present =
            [("a", p.a.is_some()), ("eps", p.eps.is_some()), ("c1", p.c1.is_some()), ("c2", p.c2.is_some()), ("x", p.x.is_some())];
        for (name, here) in present {
            if here && !allowed.contains(&name) {
                return bad(format!("g{} takes no parameter {name}", self.family));
            }
        }
        match self.family {
            0 => match p.eps {
                Some(1) | Some(-1) => {}
                Some(e) => return bad(format!("eps must be ±1, got {e}")),
                None => return bad("g0 needs eps".into()),
            },
            2 | 3 => {
                let Some(x) = &p.x else {
                    return bad(format!("g{} needs x", self.family));
                };
                if !self.t.contains_nilpotent() {
                    return bad("x needs a nilpotent block in t".into());
                }
                if x.is_zero() {
                    return bad("x must be nonzero".into());
                }
                x.validate(&self.t).map_err(|e| Error::InvalidFamilyParams(e.to_string()))?;
            }
            _ => {}
        }
        Ok(())
    }

    pub fn is_isotropic(&self) -> bool {
        self.family != 0
    }

    /// Real dimension of the algebra.
    pub fn dim(&self) -> usize {
        self.t.real_dim() + if self.is_isotropic() { 4 } else { 2 }
    }

    /// The scalar `a` of the derivation.
    pub fn a(&self) -> Scalar {
        match self.family {
            0 => self.params.a.clone().unwrap_or_else(Scalar::zero),
            1 => Scalar::one(),
            _ => Scalar::zero(),
        }
    }

    pub fn eps(&self) -> i8 {
        self.params.eps.unwrap_or(1)
    }

    pub fn c1(&self) -> Scalar {
        match self.family {
            4 => self.params.c1.clone().unwrap_or_else(Scalar::zero),
            5 => Scalar::one(),
            _ => Scalar::zero(),
        }
    }

    pub fn c2(&self) -> Scalar {
        match self.family {
            1 => self.params.c2.clone().unwrap_or_else(Scalar::zero),
            3 | 4 => Scalar::one(),
            _ => Scalar::zero(),
        }
    }

    pub fn x(&self) -> XtAssignment {
        self.params.x.clone().unwrap_or_default()
    }

    /// Same instance with every accepted parameter spelled out and `t` sorted.
    pub fn normalized(&self) -> FamilyInstance {
        let t = self.t.canonical();
        match self.family {
            0 => FamilyInstance::g0(t, self.a(), self.eps()),
            1 => FamilyInstance::g1(t, self.c2()),
            2 => FamilyInstance::g2(t, self.x()),
            3 => FamilyInstance::g3(t, self.x()),
            4 => FamilyInstance::g4(t, self.c1()),
            5 => FamilyInstance::g5(t),
            _ => FamilyInstance::g6(t),
        }
    }

    /// `D = 0`.
    pub fn is_abelian(&self) -> bool {
        matches!(self.family, 0 | 6) && self.t.is_zero_endomorphism() && self.a().is_zero()
    }

    /// The components of `D_i(t, …)`.
    pub fn shape(&self) -> Result<Shape> {
        self.validate()?;
        let r = realize(&self.t);
        if !self.is_isotropic() {
            return Ok(Shape::NonIsotropic(NonIsotropicShape { endo: r.a, a: self.a() }));
        }
        let v = match self.family {
            2 | 3 => v_of_x(&self.t, &self.x())?,
            _ => vec![Scalar::zero(); r.dim_v],
        };
        Ok(Shape::Isotropic(IsotropicShape { endo: r.a, v, a: self.a(), c1: self.c1(), c2: self.c2() }))
    }
}

impl fmt::Display for FamilyInstance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "g{}({}", self.family, self.t)?;
        match self.family {
            0 => write!(f, ", a={}, eps={}", self.a(), self.eps())?,
            1 => write!(f, ", c2={}", self.c2())?,
            2 | 3 => {
                for ((m, eps), x) in self.x().entries() {
                    write!(f, ", x(Δ_{m}^{})={x}", if eps > 0 { "+" } else { "-" })?;
                }
            }
            4 => write!(f, ", c1={}", self.c1())?,
            _ => {}
        }
        write!(f, ")")
    }
}

/// `D = diag(A, a)` on `𝔥 = 𝔥₁ ⊕ ⟨e_{2n−1}⟩`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NonIsotropicShape {
    pub endo: Matrix,
    pub a: Scalar,
}

impl NonIsotropicShape {
    pub fn derivation(&self) -> Matrix {
        let k = self.endo.rows();
        let mut d = Matrix::zeros(k + 1, k + 1);
        d.set_block(0, 0, &self.endo);
        d[(k, k)] = self.a.clone();
        d
    }
}

/// The five components of `D` on `𝔥 = ⟨e₁, e₂⟩ ⊕ V ⊕ ⟨e_{2n−1}⟩`; `endo` is `A`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IsotropicShape {
    pub endo: Matrix,
    pub v: Vec<Scalar>,
    pub a: Scalar,
    pub c1: Scalar,
    pub c2: Scalar,
}

impl IsotropicShape {
    /// Rows `(−a, 0, −(J_V v)^♭, c₁)`, `(0, −a, v^♭, c₂)`, `(0, 0, A, v)`, `(0, 0, 0, a)`.
    pub fn derivation(&self, g_v: &Matrix) -> Matrix {
        let k = self.endo.rows();
        let n = k + 3;
        let jv = standard_j(k / 2).mul_vec(&self.v);
        let flat_jv = g_v.mul_vec(&jv);
        let flat_v = g_v.mul_vec(&self.v);
        let mut d = Matrix::zeros(n, n);
        d[(0, 0)] = -&self.a;
        d[(1, 1)] = -&self.a;
        for i in 0..k {
            d[(0, 2 + i)] = -&flat_jv[i];
            d[(1, 2 + i)] = flat_v[i].clone();
            d[(2 + i, n - 1)] = self.v[i].clone();
        }
        d.set_block(2, 2, &self.endo);
        d[(0, n - 1)] = self.c1.clone();
        d[(1, n - 1)] = self.c2.clone();
        d[(n - 1, n - 1)] = self.a.clone();
        d
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Shape {
    NonIsotropic(NonIsotropicShape),
    Isotropic(IsotropicShape),
}

/// `J` standard and `g = g₁ + ε(e^{2n−1}⊗e^{2n−1} + e^{2n}⊗e^{2n})`.
pub fn non_isotropic_metric(g1: &Matrix, eps: i8) -> (Matrix, Matrix) {
    let k = g1.rows();
    let mut g = Matrix::zeros(k + 2, k + 2);
    g.set_block(0, 0, g1);
    g[(k, k)] = Scalar::int(eps as i64);
    g[(k + 1, k + 1)] = Scalar::int(eps as i64);
    (standard_j(k / 2 + 1), g)
}

/// `J` standard and `g = e^1⊙e^{2n} − e^2⊙e^{2n−1} + g_V`.
pub fn isotropic_metric(g_v: &Matrix) -> (Matrix, Matrix) {
    let k = g_v.rows();
    let n = k + 4;
    let mut g = Matrix::zeros(n, n);
    g.set_block(2, 2, g_v);
    g[(0, n - 1)] = Scalar::one();
    g[(n - 1, 0)] = Scalar::one();
    g[(1, n - 2)] = Scalar::int(-1);
    g[(n - 2, 1)] = Scalar::int(-1);
    (standard_j(n / 2), g)
}

fn structure(d: Matrix, j: Matrix, g: Matrix) -> Result<(PKStructure, AlmostAbelianPresentation)> {
    let s = PKStructure::new(almost_abelian(&d), j, g)?;
    Ok((s, AlmostAbelianPresentation::new(d)))
}

pub fn build_non_isotropic(shape: &NonIsotropicShape, g1: &Matrix, eps: i8) -> Result<(PKStructure, AlmostAbelianPresentation)> {
    let (j, g) = non_isotropic_metric(g1, eps);
    structure(shape.derivation(), j, g)
}

pub fn build_isotropic(shape: &IsotropicShape, g_v: &Matrix) -> Result<(PKStructure, AlmostAbelianPresentation)> {
    let (j, g) = isotropic_metric(g_v);
    structure(shape.derivation(g_v), j, g)
}

/// The algebra `g_i(t, …)` with its fixed pseudo-Kähler structure.
pub fn build_family(f: &FamilyInstance) -> Result<(PKStructure, AlmostAbelianPresentation)> {
    let g_v = realize(&f.t).g;
    match f.shape()? {
        Shape::NonIsotropic(s) => build_non_isotropic(&s, &g_v, f.eps()),
        Shape::Isotropic(s) => build_isotropic(&s, &g_v),
    }
}

/// Metric data of an adapted basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AdaptedMetric {
    NonIsotropic { g1: Matrix, eps: i8 },
    Isotropic { g_v: Matrix },
}

const ADAPTED: &str = "inputs must already use an adapted basis (J standard, g in one of the two normal forms, 𝔥 spanned by the first 2n−1 vectors)";

/// Gram matrix of `g` on `𝔥₀ = 𝔥^⊥ ⊕ J𝔥^⊥`, with `𝔥` the span of all basis
/// vectors but the last.
pub fn h0_gram(s: &PKStructure) -> Result<Matrix> {
    let n = s.dim();
    if n < 2 {
        return Err(Error::Dimension("need dimension at least 2".into()));
    }
    let perp = s.g.submatrix(0, n - 1, 0, n).kernel();
    if perp.len() != 1 {
        return Err(Error::DegenerateMetric);
    }
    let w = &perp[0];
    let jw = s.j.mul_vec(w);
    let basis = [w.clone(), jw];
    Ok(Matrix::from_fn(2, 2, |i, k| bilinear(&s.g, &basis[i], &basis[k])))
}

pub fn adapted_metric(s: &PKStructure) -> Result<AdaptedMetric> {
    let n = s.dim();
    if n % 2 != 0 || n < 2 || s.j != standard_j(n / 2) {
        return Err(Error::NotStandardBasis(format!("J is not the standard complex structure; {ADAPTED}")));
    }
    let gram = h0_gram(s)?;
    if gram.is_zero() {
        if n < 4 {
            return Err(Error::NotStandardBasis(ADAPTED.into()));
        }
        let g_v = s.g.submatrix(2, n - 2, 2, n - 2);
        if isotropic_metric(&g_v).1 != s.g {
            return Err(Error::NotStandardBasis(format!("isotropic metric is not in normal form; {ADAPTED}")));
        }
        return Ok(AdaptedMetric::Isotropic { g_v });
    }
    if gram.det().is_positive() {
        let e = &s.g[(n - 1, n - 1)];
        let eps = if e.is_one() {
            1
        } else if (-e).is_one() {
            -1
        } else {
            return Err(Error::NotStandardBasis(format!("g(e_2n, e_2n) = {e} is not ±1; {ADAPTED}")));
        };
        let g1 = s.g.submatrix(0, n - 2, 0, n - 2);
        if non_isotropic_metric(&g1, eps).1 != s.g {
            return Err(Error::NotStandardBasis(format!("non-isotropic metric is not in normal form; {ADAPTED}")));
        }
        return Ok(AdaptedMetric::NonIsotropic { g1, eps });
    }
    Err(Error::ShapeViolation("g restricted to 𝔥₀ is neither zero nor definite".into()))
}

fn in_unitary_algebra(a: &Matrix, g: &Matrix) -> bool {
    let j = standard_j(a.rows() / 2);
    &(a * &j) == &(&j * a) && (&(&a.transpose() * g) + &(g * a)).is_zero()
}

fn first_mismatch(found: &Matrix, expected: &Matrix) -> Error {
    for i in 0..found.rows() {
        for k in 0..found.cols() {
            if found[(i, k)] != expected[(i, k)] {
                return Error::ShapeViolation(format!(
                    "D entry ({}, {}) is {}, expected {}",
                    i + 1,
                    k + 1,
                    found[(i, k)],
                    expected[(i, k)]
                ));
            }
        }
    }
    Error::ShapeViolation("D does not match".into())
}

pub fn extract_non_isotropic(d: &Matrix, g1: &Matrix) -> Result<NonIsotropicShape> {
    let k = d.rows() - 1;
    let shape = NonIsotropicShape { endo: d.submatrix(0, k, 0, k), a: d[(k, k)].clone() };
    let expected = shape.derivation();
    if &expected != d {
        return Err(first_mismatch(d, &expected));
    }
    if !in_unitary_algebra(&shape.endo, g1) {
        return Err(Error::ShapeViolation("A is not in u(𝔥₁, J₁, g₁)".into()));
    }
    Ok(shape)
}

pub fn extract_isotropic(d: &Matrix, g_v: &Matrix) -> Result<IsotropicShape> {
    let n = d.rows();
    let k = n - 3;
    let shape = IsotropicShape {
        endo: d.submatrix(2, 2 + k, 2, 2 + k),
        v: (0..k).map(|i| d[(2 + i, n - 1)].clone()).collect(),
        a: d[(n - 1, n - 1)].clone(),
        c1: d[(0, n - 1)].clone(),
        c2: d[(1, n - 1)].clone(),
    };
    let expected = shape.derivation(g_v);
    if &expected != d {
        return Err(first_mismatch(d, &expected));
    }
    if !in_unitary_algebra(&shape.endo, g_v) {
        return Err(Error::ShapeViolation("A is not in u(V, J_V, g_V)".into()));
    }
    Ok(shape)
}

/// Recognizes which normal form `D` takes and reads off its components.
pub fn characterize(s: &PKStructure, p: &AlmostAbelianPresentation) -> Result<Shape> {
    if p.d.rows() + 1 != s.dim() || almost_abelian(&p.d).brackets() != s.algebra.brackets() {
        return Err(Error::Dimension("presentation does not describe the given algebra".into()));
    }
    match adapted_metric(s)? {
        AdaptedMetric::NonIsotropic { g1, .. } => Ok(Shape::NonIsotropic(extract_non_isotropic(&p.d, &g1)?)),
        AdaptedMetric::Isotropic { g_v } => Ok(Shape::Isotropic(extract_isotropic(&p.d, &g_v)?)),
    }
}

/// Element `Γ(x, y, u, C)` of the stabilizer of `𝔥` in `U(𝔤, J, g)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StabilizerElement {
    pub x: Scalar,
    pub y: Scalar,
    pub u: Vec<Scalar>,
    pub c: Matrix,
}

impl StabilizerElement {
    pub fn identity(dim_v: usize) -> Self {
        StabilizerElement { x: Scalar::one(), y: Scalar::zero(), u: vec![Scalar::zero(); dim_v], c: Matrix::identity(dim_v) }
    }

    pub fn validate(&self, g_v: &Matrix) -> Result<()> {
        let k = g_v.rows();
        if self.x.is_zero() {
            return Err(Error::InvalidFamilyParams("stabilizer needs x ≠ 0".into()));
        }
        if self.u.len() != k || self.c.rows() != k || self.c.cols() != k {
            return Err(Error::Dimension(format!("u and C must live on V of dimension {k}")));
        }
        let j = standard_j(k / 2);
        if &self.c * &j != &j * &self.c || &(&self.c.transpose() * g_v) * &self.c != *g_v {
            return Err(Error::InvalidFamilyParams("C is not in U(V, J_V, g_V)".into()));
        }
        Ok(())
    }

    /// The matrix of `Γ` on `𝔤`.
    pub fn matrix(&self, g_v: &Matrix) -> Result<Matrix> {
        self.validate(g_v)?;
        let k = g_v.rows();
        let n = k + 4;
        let j = standard_j(k / 2);
        let cinv_u = self.c.inverse().expect("unitary").mul_vec(&self.u);
        let row0 = g_v.mul_vec(&j.mul_vec(&cinv_u));
        let row1 = g_v.mul_vec(&cinv_u);
        let half = &bilinear(g_v, &self.u, &self.u) * &(&self.x / &Scalar::int(2));
        let ju = j.mul_vec(&self.u);
        let mut m = Matrix::zeros(n, n);
        m[(0, 0)] = self.x.clone();
        m[(1, 1)] = self.x.clone();
        for i in 0..k {
            m[(0, 2 + i)] = -(&self.x * &row0[i]);
            m[(1, 2 + i)] = &self.x * &row1[i];
            m[(2 + i, n - 2)] = self.u[i].clone();
            m[(2 + i, n - 1)] = ju[i].clone();
        }
        m.set_block(2, 2, &self.c);
        m[(0, n - 2)] = self.y.clone();
        m[(0, n - 1)] = -&half;
        m[(1, n - 2)] = half;
        m[(1, n - 1)] = self.y.clone();
        m[(n - 2, n - 2)] = self.x.inv();
        m[(n - 1, n - 1)] = self.x.inv();
        Ok(m)
    }
}

/// New components of `D` in the frame `E_i = Γ e_i`, by the closed-form rules.
pub fn stabilizer_transform(s: &IsotropicShape, gamma: &StabilizerElement, g_v: &Matrix) -> Result<IsotropicShape> {
    gamma.validate(g_v)?;
    let j = standard_j(g_v.rows() / 2);
    let x = &gamma.x;
    let (x2, x3) = (x * x, &(x * x) * x);
    let cinv = gamma.c.inverse().expect("unitary");
    let u = &gamma.u;
    let au = s.endo.mul_vec(u);
    let jv = j.mul_vec(&s.v);
    let ju = j.mul_vec(u);
    let two = Scalar::int(2);
    let c1 = &s.c1 / &x3 - &(&(&two * &s.a) * &gamma.y) / &x2 - &(&two * &bilinear(g_v, &jv, u)) / &x2
        + &bilinear(g_v, &ju, &au) / x;
    let mut w = vec_scale(&au, &x.inv());
    for (wi, vi) in w.iter_mut().zip(&s.v) {
        *wi += &(vi / &x2);
    }
    let w = vec_sub(&w, &vec_scale(u, &(&s.a / x)));
    Ok(IsotropicShape {
        endo: (&(&cinv * &s.endo) * &gamma.c).scale(&x.inv()),
        v: cinv.mul_vec(&w),
        a: &s.a / x,
        c1,
        c2: &s.c2 / &x3,
    })
}

/// The same transformation computed as `(1/x) Γ|_𝔥⁻¹ D Γ|_𝔥`.
pub fn conjugate_directly(s: &IsotropicShape, gamma: &StabilizerElement, g_v: &Matrix) -> Result<IsotropicShape> {
    let m = gamma.matrix(g_v)?;
    let h = m.rows() - 1;
    let gh = m.submatrix(0, h, 0, h);
    let inv = gh.inverse().expect("stabilizer element is invertible");
    let d = (&(&inv * &s.derivation(g_v)) * &gh).scale(&gamma.x.inv());
    extract_isotropic(&d, g_v)
}

/// Complex signature of the whole metric of `f`.
fn total_signature(f: &FamilyInstance) -> (usize, usize) {
    let (p, q) = signature(&f.t);
    match f.family {
        0 if f.eps() > 0 => (p + 1, q),
        0 => (p, q + 1),
        _ => (p + 1, q + 1),
    }
}

/// Keys of `x` after `A ↦ k A` with `k` of the given sign.
fn mapped_key(m: usize, eps: i8, sign: i32) -> (usize, i8) {
    if sign < 0 && m % 2 == 1 {
        (m, -eps)
    } else {
        (m, eps)
    }
}

fn paired(x: &XtAssignment, m: usize) -> bool {
    x.get(m, 1).is_one() && x.get(m, -1).is_one()
}

/// Whether `x′` is the image of `x` under the rescaling with `|k| = kk`
/// (or some `|k|` when `kk` is `None`): `x′(Δ′)² = x(Δ)²·|k|^{−4−m}` off
/// `(1, 1)` pairs.
fn x_matches(x: &XtAssignment, x2: &XtAssignment, sign: i32, kk: Option<&Scalar>) -> bool {
    if x.entries().count() != x2.entries().count() {
        return false;
    }
    let mut ratios: Vec<(i32, Scalar)> = Vec::new();
    for ((m, eps), v) in x.entries() {
        let (m2, e2) = mapped_key(m, eps, sign);
        if paired(x, m) {
            if !paired(x2, m2) {
                return false;
            }
            continue;
        }
        let w = x2.get(m2, e2);
        if w.is_zero() || paired(x2, m2) {
            return false;
        }
        ratios.push((4 + m as i32, &(&w * &w) / &(v * v)));
    }
    match (kk, ratios.first()) {
        (_, None) => true,
        (Some(k), _) => ratios.iter().all(|(e, r)| *r == k.pow(-e)),
        (None, Some((e0, r0))) => ratios.iter().all(|(e, r)| r.pow(*e0) == r0.pow(*e)),
    }
}

/// Rational `|k|` with `max|ζ(t)|² = k² max|ζ(t′)|²`, when `t` is not nilpotent.
fn norm_ratio(t: &BlockType, t2: &BlockType) -> Option<Scalar> {
    let n2 = t2.max_norm_sq();
    if n2.is_zero() {
        return None;
    }
    (&t.max_norm_sq() / &n2).sqrt()
}

fn scale_equivalent(t: &BlockType, t2: &BlockType) -> bool {
    if t.is_nilpotent() || t2.is_nilpotent() {
        return t.is_nilpotent() && t2.is_nilpotent() && (t == t2 || reflect(t) == *t2);
    }
    let Some(k) = norm_ratio(t, t2) else { return false };
    t.scaled(&k.inv()) == *t2 || t.scaled(&-k.inv()) == *t2
}

fn g2_equivalent(t: &BlockType, x: &XtAssignment, t2: &BlockType, x2: &XtAssignment) -> bool {
    for sign in [1, -1] {
        if t.is_nilpotent() {
            let image = if sign > 0 { t.clone() } else { reflect(t) };
            if image == *t2 && x_matches(x, x2, sign, None) {
                return true;
            }
        } else if let Some(k) = norm_ratio(t, t2) {
            let kk = if sign > 0 { k.inv() } else { -k.inv() };
            if t.scaled(&kk) == *t2 && x_matches(x, x2, sign, Some(&k)) {
                return true;
            }
        }
    }
    false
}

/// Whether a unitary Lie algebra isomorphism `F → F′` exists.
///
/// Both abelian: equal metric signature. `g₀`: `(t, a) ~ (r(t), −a)`.
/// `g₂`: `t′` is the type of `A(t)/k` and `x′(Δ′) = x(Δ)·|k|^{−2−m/2}` off
/// `(1, 1)` pairs, with `Δ′` the reflected block when `k < 0`. `g₆`: `t′` is
/// the type of `k·A(t)`. Otherwise only identical instances.
pub fn unitary_equivalent(f: &FamilyInstance, f2: &FamilyInstance) -> bool {
    if f.validate().is_err() || f2.validate().is_err() || f.dim() != f2.dim() {
        return false;
    }
    if f.is_abelian() || f2.is_abelian() {
        return f.is_abelian() && f2.is_abelian() && total_signature(f) == total_signature(f2);
    }
    if f.family != f2.family {
        return false;
    }
    if f.normalized() == f2.normalized() {
        return true;
    }
    match f.family {
        0 => f.eps() == f2.eps() && f.a() == -f2.a() && reflect(&f.t) == f2.t,
        2 => g2_equivalent(&f.t, &f.x(), &f2.t, &f2.x()),
        6 => scale_equivalent(&f.t, &f2.t),
        _ => false,
    }
}

fn nil_type(plus: usize, minus: usize) -> BlockType {
    BlockType::new().with(Block::nil(0, 1), plus).with(Block::nil(0, -1), minus)
}

/// The rescaling of `x` under `A ↦ A/k`, when it stays rational.
fn rescaled_x(x: &XtAssignment, k: &Scalar) -> Option<XtAssignment> {
    let sign = k.signum();
    let kk = k.abs();
    let mut out = XtAssignment::new();
    for ((m, eps), v) in x.entries() {
        let (m2, e2) = mapped_key(m, eps, sign);
        let w = if paired(x, m) { Scalar::one() } else { (&(v * v) * &kk.pow(-(4 + m as i32))).sqrt()? };
        out = out.set(m2, e2, w);
    }
    Some(out)
}

/// Preferred member of the unitary equivalence class of `f`.
///
/// Abelian algebras become `g₀((p−1)Δ₀⁺(0) + qΔ₀⁻(0), 0, +1)` (or the `ε = −1`
/// form when `p = 0`); `g₀` picks `a > 0`, or the smaller of `t`, `r(t)`;
/// `g₆` and `g₂` rescale so the largest eigenvalue coordinate is 1 (for
/// nilpotent `g₂`, so the first non-paired `x` is 1) and keep the smaller
/// candidate. A `g₂` rescaling that would leave the rationals returns the
/// input unchanged.
pub fn canonical_representative(f: &FamilyInstance) -> Result<FamilyInstance> {
    f.validate()?;
    let f = f.normalized();
    if f.is_abelian() {
        let (p, q) = total_signature(&f);
        return Ok(if p > 0 {
            FamilyInstance::g0(nil_type(p - 1, q), Scalar::zero(), 1)
        } else {
            FamilyInstance::g0(nil_type(0, q - 1), Scalar::zero(), -1)
        });
    }
    let key = |g: &FamilyInstance| (g.t.key(), serde_json::to_string(&g.params).unwrap_or_default());
    let pick = |cands: Vec<FamilyInstance>| cands.into_iter().min_by_key(key).expect("nonempty");
    Ok(match f.family {
        0 => {
            let r = FamilyInstance::g0(reflect(&f.t).canonical(), -f.a(), f.eps());
            if f.a().is_positive() {
                f
            } else if f.a().is_negative() {
                r
            } else {
                pick(vec![f, r])
            }
        }
        6 => {
            if f.t.is_nilpotent() {
                pick(vec![f.clone(), FamilyInstance::g6(reflect(&f.t).canonical())])
            } else {
                let m = f.t.max_eigen_coordinate().inv();
                pick(vec![FamilyInstance::g6(f.t.scaled(&m).canonical()), FamilyInstance::g6(f.t.scaled(&-m).canonical())])
            }
        }
        2 => {
            let x = f.x();
            let k = if f.t.is_nilpotent() {
                let first = x.entries().find(|((m, _), _)| !paired(&x, *m));
                match first {
                    Some(((m, _), v)) => (v * v).root(4 + m as u32),
                    None => Some(Scalar::one()),
                }
            } else {
                Some(f.t.max_eigen_coordinate())
            };
            let mut cands = Vec::new();
            if let Some(k) = k {
                for kk in [k.clone(), -k] {
                    if let Some(x2) = rescaled_x(&x, &kk) {
                        cands.push(FamilyInstance::g2(f.t.scaled(&kk.inv()).canonical(), x2));
                    }
                }
            }
            if cands.len() < 2 {
                f
            } else {
                pick(cands)
            }
        }
        _ => f,
    })
}

/// Result of [`classify`]: a family member unitarily isomorphic to the input
/// and the preferred representative of its class.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Classification {
    pub instance: FamilyInstance,
    pub canonical: FamilyInstance,
}

/// Multiset permutations of the entries of `t`.
fn orderings(t: &BlockType) -> Vec<BlockType> {
    fn go(rest: &mut Vec<(Block, usize)>, acc: &mut Vec<(Block, usize)>, out: &mut Vec<BlockType>) {
        if rest.is_empty() {
            out.push(BlockType::from_blocks(acc.iter().cloned()));
            return;
        }
        for i in 0..rest.len() {
            let e = rest.remove(i);
            acc.push(e.clone());
            go(rest, acc, out);
            acc.pop();
            rest.insert(i, e);
        }
    }
    let mut out = Vec::new();
    go(&mut t.key(), &mut Vec::new(), &mut out);
    out
}

/// Real matrix of multiplication by the unit `c + s i` on complex coordinates
/// `[from, to)` of a realized space of real dimension `dim`.
fn phase(dim: usize, from: usize, to: usize, c: &Scalar, s: &Scalar) -> Matrix {
    let mut m = Matrix::identity(dim);
    for z in from..to {
        let (r, i) = (2 * z, 2 * z + 1);
        m[(r, r)] = c.clone();
        m[(r, i)] = s.clone();
        m[(i, r)] = -s;
        m[(i, i)] = c.clone();
    }
    m
}

fn cube_root_scale(t: &BlockType, c: &Scalar) -> Result<BlockType> {
    if t.is_nilpotent() {
        return Ok(if c.is_positive() { t.clone() } else { reflect(t) });
    }
    let k = c.cbrt().ok_or_else(|| Error::Irrational(format!("cube root of {c}")))?;
    Ok(t.scaled(&k.inv()))
}

/// The `a = 0`, `v ≠ 0` branch: needs `A`, `g_V` already in block form.
fn classify_nilpotent_v(s: &IsotropicShape, g_v: &Matrix, t: &BlockType) -> Result<FamilyInstance> {
    let k = g_v.rows();
    let unsupported = |m: &str| Error::Unsupported(format!("a = 0, v ≠ 0: {m}"));
    let perm = orderings(t)
        .into_iter()
        .find(|p| {
            let r = realize(p);
            r.a == s.endo && r.g == *g_v
        })
        .ok_or_else(|| unsupported("A and g_V must equal A(t), g(t) for some ordering of the blocks"))?;
    // Rotate each first-copy nilpotent block so its v-coordinate is real.
    let mut c = Matrix::identity(k);
    let mut x = XtAssignment::new();
    let mut off = 0;
    let mut seen = Vec::new();
    for b in perm.expanded() {
        let len = b.complex_dim();
        if let Block::PM { m, eps, zeta } = b {
            if zeta.is_zero() && !seen.contains(b) {
                seen.push(b.clone());
                let i = 2 * (off + m);
                let (re, im) = (&s.v[i], -&s.v[i + 1]);
                let norm = (re * re + &im * &im).sqrt().ok_or_else(|| Error::Irrational(format!("|v| on {b}")))?;
                if !norm.is_zero() {
                    c = &c * &phase(k, off, off + len, &(re / &norm), &(&im / &norm));
                    x = x.set(*m, *eps, norm);
                }
            }
        }
        off += len;
    }
    x.validate(&perm).map_err(|_| unsupported("components on v(Δ) are not in X_t"))?;
    let vx = v_of_x(&perm, &x)?;
    let target = vec_sub(&c.mul_vec(&vx), &s.v);
    let u = s.endo.solve(&target).ok_or_else(|| unsupported("v − C v(x) is not in im A"))?;
    let step = StabilizerElement { x: Scalar::one(), y: Scalar::zero(), u, c };
    let mut cur = stabilizer_transform(s, &step, g_v)?;
    debug_assert_eq!(cur.v, vx);
    if !cur.c1.is_zero() {
        let jv = standard_j(k / 2).mul_vec(&cur.v);
        let (u0, gu) = s
            .endo
            .kernel()
            .into_iter()
            .map(|u| {
                let gu = bilinear(g_v, &jv, &u);
                (u, gu)
            })
            .find(|(_, gu)| !gu.is_zero())
            .ok_or_else(|| unsupported("no u ∈ ker A pairs with J v"))?;
        let u = vec_scale(&u0, &(&cur.c1 / &(&Scalar::int(2) * &gu)));
        let step = StabilizerElement { u, ..StabilizerElement::identity(k) };
        cur = stabilizer_transform(&cur, &step, g_v)?;
    }
    if cur.c2.is_zero() {
        return Ok(FamilyInstance::g2(perm, x));
    }
    if cur.c2.is_one() {
        return Ok(FamilyInstance::g3(perm, x));
    }
    let kk = cur.c2.cbrt().ok_or_else(|| Error::Irrational(format!("cube root of c2 = {}", cur.c2)))?;
    let x2 = rescaled_x(&x, &kk).ok_or_else(|| Error::Irrational("rescaled x".into()))?;
    Ok(FamilyInstance::g3(perm.scaled(&kk.inv()), x2))
}

fn classify_isotropic(s: &IsotropicShape, g_v: &Matrix) -> Result<FamilyInstance> {
    let t = decompose_real(&s.endo, g_v)?;
    let k = g_v.rows();
    if !s.a.is_zero() {
        let shifted = &s.endo - &Matrix::identity(k).scale(&s.a);
        let u = shifted.solve(&vec_scale(&s.v, &Scalar::int(-1))).ok_or_else(|| {
            Error::NotFamilyInstance(
                "a ≠ 0 but A − a·Id is singular and v is not in its image, so v cannot be removed by the stabilizer".into(),
            )
        })?;
        let s1 = stabilizer_transform(s, &StabilizerElement { u, ..StabilizerElement::identity(k) }, g_v)?;
        let y = &s1.c1 / &(&Scalar::int(2) * &s1.a);
        let s2 = stabilizer_transform(&s1, &StabilizerElement { y, ..StabilizerElement::identity(k) }, g_v)?;
        let s3 = stabilizer_transform(&s2, &StabilizerElement { x: s.a.clone(), ..StabilizerElement::identity(k) }, g_v)?;
        return Ok(FamilyInstance::g1(decompose_real(&s3.endo, g_v)?, s3.c2));
    }
    if !is_zero_vec(&s.v) {
        return classify_nilpotent_v(s, g_v, &t);
    }
    if !s.c2.is_zero() {
        return Ok(FamilyInstance::g4(cube_root_scale(&t, &s.c2)?, &s.c1 / &s.c2));
    }
    if !s.c1.is_zero() {
        return Ok(FamilyInstance::g5(cube_root_scale(&t, &s.c1)?));
    }
    Ok(FamilyInstance::g6(t))
}

/// Finds the family member unitarily isomorphic to `(s, p)`. The input must
/// be in an adapted basis.
pub fn classify(s: &PKStructure, p: &AlmostAbelianPresentation) -> Result<Classification> {
    let instance = match (characterize(s, p)?, adapted_metric(s)?) {
        (Shape::NonIsotropic(sh), AdaptedMetric::NonIsotropic { g1, eps }) => {
            FamilyInstance::g0(decompose_real(&sh.endo, &g1)?, sh.a, eps)
        }
        (Shape::Isotropic(sh), AdaptedMetric::Isotropic { g_v }) => classify_isotropic(&sh, &g_v)?,
        _ => unreachable!("characterize follows the metric case"),
    };
    let canonical = canonical_representative(&instance)?;
    Ok(Classification { instance, canonical })
}

/// Jordan type of `A(t)`.
pub fn block_jordan_type(t: &BlockType) -> JordanType {
    let mut j = JordanType::new();
    for (b, k) in t.blocks() {
        let (m, z) = (b.m(), b.zeta());
        match b {
            Block::PM { .. } if z.is_zero() => j.add(JBlock::j(m, Scalar::zero()), 2 * k),
            Block::PM { .. } => j.add(JBlock::c(m, z.clone()), *k),
            Block::Pair { .. } if z.is_real() => {
                j.add(JBlock::j(m, z.re.clone()), 2 * k);
                j.add(JBlock::j(m, -&z.re), 2 * k);
            }
            Block::Pair { .. } => {
                j.add(JBlock::c(m, z.clone()), *k);
                j.add(JBlock::c(m, -z.conj()), *k);
            }
        }
    }
    j
}

/// Jordan type of `D_i(t, …)` from the closed forms, without building `D`.
pub fn family_jordan_type(f: &FamilyInstance) -> Result<JordanType> {
    f.validate()?;
    let ja = block_jordan_type(&f.t);
    let z = Scalar::zero;
    let jz = |m: usize| JBlock::j(m, z());
    Ok(match f.family {
        0 => ja.with(JBlock::j(0, f.a()), 1),
        1 => ja.with(JBlock::j(0, Scalar::one()), 1).with(JBlock::j(0, Scalar::int(-1)), 2),
        4 | 5 => ja.with(jz(1), 1).with(jz(0), 1),
        6 => ja.with(jz(0), 3),
        _ => {
            let x = f.x();
            let m = x.entries().map(|((m, _), _)| m).max().expect("x is nonzero");
            if paired(&x, m) {
                let minus = JordanType::new().with(jz(m), 4);
                ja.minus(&minus).expect("two nilpotent blocks of order m").with(jz(m), 1).with(jz(m + 1), 3)
            } else {
                let minus = JordanType::new().with(jz(m), 2);
                ja.minus(&minus).expect("a nilpotent block of order m").with(jz(m + 1), 1).with(jz(m + 2), 1)
            }
        }
    })
}

/// `jordan_type` of the built derivation, for cross-checking the closed forms.
pub fn built_jordan_type(f: &FamilyInstance) -> Result<JordanType> {
    let (_, p) = build_family(f)?;
    jordan_type(&p.d)
}
