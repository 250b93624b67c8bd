//! Lie algebras given by structure constants, almost abelian algebras and
//! their invariants.

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::jordan::{jordan_type, JordanType};
use crate::matrix::{is_zero_vec, span_basis, Matrix};
use crate::scalar::Scalar;

/// A finite-dimensional real Lie algebra `[e_i, e_j] = Σ_k c_{ij}^k e_k`
/// (indices are 0-based in the API, 1-based in JSON).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LieAlgebra {
    dim: usize,
    c: Vec<Scalar>,
    labels: Option<Vec<String>>,
}

/// One nonzero structure constant `[e_i, e_j] ∋ c·e_k` with `i < j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Bracket {
    pub i: usize,
    pub j: usize,
    pub k: usize,
    pub c: Scalar,
}

/// The cyclic sums `[[e_i,e_j],e_l] + [[e_j,e_l],e_i] + [[e_l,e_i],e_j]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JacobiDefect {
    dim: usize,
    values: Vec<Scalar>,
}

impl JacobiDefect {
    /// Component `k` of the cyclic sum on `(e_i, e_j, e_l)`.
    pub fn get(&self, i: usize, j: usize, l: usize, k: usize) -> &Scalar {
        let n = self.dim;
        &self.values[((i * n + j) * n + l) * n + k]
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(Scalar::is_zero)
    }

    pub fn max_abs(&self) -> Scalar {
        self.values.iter().map(Scalar::abs).max().unwrap_or_else(Scalar::zero)
    }

    /// First basis triple with a nonzero cyclic sum.
    pub fn witness(&self) -> Option<(usize, usize, usize)> {
        let n = self.dim;
        let pos = self.values.iter().position(|v| !v.is_zero())?;
        let t = pos / n;
        Some((t / (n * n), (t / n) % n, t % n))
    }
}

impl LieAlgebra {
    /// Builds the algebra and checks the Jacobi identity.
    pub fn new(dim: usize, brackets: &[Bracket]) -> Result<Self> {
        let l = Self::from_brackets_unchecked(dim, brackets)?;
        if !l.jacobi_defect().is_zero() {
            return Err(Error::NotLieAlgebra);
        }
        Ok(l)
    }

    /// Builds the bracket without checking Jacobi; for testing defects.
    pub fn from_brackets_unchecked(dim: usize, brackets: &[Bracket]) -> Result<Self> {
        let mut c = vec![Scalar::zero(); dim * dim * dim];
        for b in brackets {
            if b.i >= b.j || b.j >= dim || b.k >= dim {
                return Err(Error::Dimension(format!("bad bracket index ({}, {}, {})", b.i, b.j, b.k)));
            }
            c[(b.i * dim + b.j) * dim + b.k] += &b.c;
            c[(b.j * dim + b.i) * dim + b.k] -= &b.c;
        }
        Ok(LieAlgebra { dim, c, labels: None })
    }

    pub fn abelian(dim: usize) -> Self {
        LieAlgebra { dim, c: vec![Scalar::zero(); dim * dim * dim], labels: None }
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Self {
        assert_eq!(labels.len(), self.dim);
        self.labels = Some(labels);
        self
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn structure(&self, i: usize, j: usize, k: usize) -> &Scalar {
        &self.c[(i * self.dim + j) * self.dim + k]
    }

    /// `[e_i, e_j]` as a coordinate vector.
    pub fn bracket_basis(&self, i: usize, j: usize) -> Vec<Scalar> {
        let n = self.dim;
        self.c[(i * n + j) * n..(i * n + j + 1) * n].to_vec()
    }

    pub fn bracket(&self, x: &[Scalar], y: &[Scalar]) -> Vec<Scalar> {
        let n = self.dim;
        let mut out = vec![Scalar::zero(); n];
        for i in 0..n {
            if x[i].is_zero() {
                continue;
            }
            for j in 0..n {
                if y[j].is_zero() || i == j {
                    continue;
                }
                let f = &x[i] * &y[j];
                for (k, o) in out.iter_mut().enumerate() {
                    let c = self.structure(i, j, k);
                    if !c.is_zero() {
                        *o += &(&f * c);
                    }
                }
            }
        }
        out
    }

    /// Matrix of `ad(e_i)`.
    pub fn ad(&self, i: usize) -> Matrix {
        Matrix::from_fn(self.dim, self.dim, |k, j| self.structure(i, j, k).clone())
    }

    /// Matrix of `ad(x)`.
    pub fn ad_of(&self, x: &[Scalar]) -> Matrix {
        let mut m = Matrix::zeros(self.dim, self.dim);
        for (i, xi) in x.iter().enumerate() {
            if !xi.is_zero() {
                m = &m + &self.ad(i).scale(xi);
            }
        }
        m
    }

    /// Nonzero structure constants with `i < j`.
    pub fn brackets(&self) -> Vec<Bracket> {
        let n = self.dim;
        let mut out = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                for k in 0..n {
                    let c = self.structure(i, j, k);
                    if !c.is_zero() {
                        out.push(Bracket { i, j, k, c: c.clone() });
                    }
                }
            }
        }
        out
    }

    pub fn is_abelian(&self) -> bool {
        self.c.iter().all(Scalar::is_zero)
    }

    pub fn jacobi_defect(&self) -> JacobiDefect {
        let n = self.dim;
        let e = |i: usize| crate::matrix::unit::<Scalar>(n, i);
        let mut values = Vec::with_capacity(n * n * n * n);
        for i in 0..n {
            for j in 0..n {
                for l in 0..n {
                    let a = self.bracket(&self.bracket_basis(i, j), &e(l));
                    let b = self.bracket(&self.bracket_basis(j, l), &e(i));
                    let c = self.bracket(&self.bracket_basis(l, i), &e(j));
                    for k in 0..n {
                        values.push(&a[k] + &b[k] + &c[k]);
                    }
                }
            }
        }
        JacobiDefect { dim: n, values }
    }

    /// Basis of `[g, g]`.
    pub fn derived_algebra(&self) -> Vec<Vec<Scalar>> {
        let n = self.dim;
        let mut vs = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                let v = self.bracket_basis(i, j);
                if !is_zero_vec(&v) {
                    vs.push(v);
                }
            }
        }
        span_basis(&vs)
    }

    /// First Betti number `dim g − dim [g, g]`.
    pub fn b1(&self) -> usize {
        self.dim - self.derived_algebra().len()
    }

    pub fn is_unimodular(&self) -> bool {
        (0..self.dim).all(|i| self.ad(i).trace().is_zero())
    }

    /// Dimensions of `g = g¹ ⊇ g² = [g, g¹] ⊇ …` until the series stabilises.
    pub fn lower_central_series(&self) -> Vec<usize> {
        let n = self.dim;
        let mut current: Vec<Vec<Scalar>> = (0..n).map(|i| crate::matrix::unit(n, i)).collect();
        let mut dims = vec![n];
        loop {
            let mut next = Vec::new();
            for i in 0..n {
                let ad = self.ad(i);
                for v in &current {
                    let w = ad.mul_vec(v);
                    if !is_zero_vec(&w) {
                        next.push(w);
                    }
                }
            }
            let next = span_basis(&next);
            let d = next.len();
            if d == *dims.last().unwrap() {
                return dims;
            }
            dims.push(d);
            if d == 0 {
                return dims;
            }
            current = next;
        }
    }

    pub fn is_nilpotent(&self) -> bool {
        self.lower_central_series().last() == Some(&0)
    }

    /// Whether `d` is a derivation: `d[x,y] = [dx,y] + [x,dy]` on basis pairs.
    pub fn is_derivation(&self, d: &Matrix) -> bool {
        let n = self.dim;
        let e = |i: usize| crate::matrix::unit::<Scalar>(n, i);
        for i in 0..n {
            for j in i + 1..n {
                let lhs = d.mul_vec(&self.bracket_basis(i, j));
                let a = self.bracket(&d.column(i), &e(j));
                let b = self.bracket(&e(i), &d.column(j));
                if lhs != crate::matrix::vec_add(&a, &b) {
                    return false;
                }
            }
        }
        true
    }
}

/// `ℝ^m ⋊_D ℝ`: basis `e_1…e_m` of the abelian ideal plus `e_{m+1}` with
/// `[e_{m+1}, e_j] = Σ_k D_{kj} e_k`.
pub fn almost_abelian(d: &Matrix) -> LieAlgebra {
    assert!(d.is_square(), "derivation must be square");
    let m = d.rows();
    let n = m + 1;
    let mut c = vec![Scalar::zero(); n * n * n];
    for j in 0..m {
        for k in 0..m {
            let x = &d[(k, j)];
            if !x.is_zero() {
                c[(m * n + j) * n + k] = x.clone();
                c[(j * n + m) * n + k] = -x;
            }
        }
    }
    LieAlgebra { dim: n, c, labels: None }
}

/// An almost abelian algebra recorded by the endomorphism `D` of its
/// codimension-one abelian ideal.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlmostAbelianPresentation {
    pub d: Matrix,
}

impl AlmostAbelianPresentation {
    pub fn new(d: Matrix) -> Self {
        assert!(d.is_square());
        AlmostAbelianPresentation { d }
    }

    pub fn algebra(&self) -> LieAlgebra {
        almost_abelian(&self.d)
    }

    /// Finds a coordinate hyperplane `span(e_i : i ≠ k)` that is an abelian
    /// ideal (trying the last basis vector first) and returns `ad(e_k)` on it.
    pub fn from_algebra(l: &LieAlgebra) -> Result<Self> {
        let n = l.dim();
        if n == 0 {
            return Err(Error::Dimension("zero-dimensional algebra".into()));
        }
        'outer: for k in (0..n).rev() {
            let rest: Vec<usize> = (0..n).filter(|&i| i != k).collect();
            for &i in &rest {
                for &j in &rest {
                    if !is_zero_vec(&l.bracket_basis(i, j)) {
                        continue 'outer;
                    }
                }
                if !l.structure(k, i, k).is_zero() {
                    continue 'outer;
                }
            }
            let d = Matrix::from_fn(n - 1, n - 1, |a, b| l.structure(k, rest[b], rest[a]).clone());
            return Ok(AlmostAbelianPresentation { d });
        }
        Err(Error::Unsupported("no coordinate hyperplane is an abelian ideal".into()))
    }
}

/// Isomorphism invariant of an almost abelian algebra: the Jordan type of
/// `D` up to a nonzero real rescaling, plus the two exceptional flags.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Fingerprint {
    pub dim: usize,
    pub abelian: bool,
    pub heis3_plus_abelian: bool,
    pub normalized_type: JordanType,
}

/// Rescales `j(D)` so the largest eigenvalue coordinate (max of `|Re|` and
/// `|Im|`) is 1, picking the sign with the smaller block list.
pub fn iso_fingerprint(p: &AlmostAbelianPresentation) -> Result<Fingerprint> {
    let j = jordan_type(&p.d)?;
    let dim = p.d.rows() + 1;
    let abelian = p.d.is_zero();
    let heis = !abelian && p.d.rank() == 1 && j.is_nilpotent();
    let scale = j.max_eigen_coordinate();
    let normalized_type = if scale.is_zero() {
        j
    } else {
        let k = scale.inv();
        let a = j.scaled(&k);
        let b = j.scaled(&-k);
        a.min(b)
    };
    Ok(Fingerprint { dim, abelian, heis3_plus_abelian: heis, normalized_type })
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct BracketJson {
    i: usize,
    j: usize,
    k: usize,
    c: Scalar,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct LieAlgebraJson {
    dim: usize,
    brackets: Vec<BracketJson>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    labels: Option<Vec<String>>,
}

/// `{"dim": n, "brackets": [{"i":1,"j":2,"k":3,"c":"1/1"}, ...]}` with
/// 1-based indices and `i < j`.
impl Serialize for LieAlgebra {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let brackets = self
            .brackets()
            .into_iter()
            .map(|b| BracketJson { i: b.i + 1, j: b.j + 1, k: b.k + 1, c: b.c })
            .collect();
        LieAlgebraJson { dim: self.dim, brackets, labels: self.labels.clone() }.serialize(s)
    }
}

/// Rejects zero indices and structure constants failing the Jacobi identity.
impl<'de> Deserialize<'de> for LieAlgebra {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = LieAlgebraJson::deserialize(d)?;
        let mut brackets = Vec::with_capacity(raw.brackets.len());
        for b in raw.brackets {
            if b.i == 0 || b.j == 0 || b.k == 0 {
                return Err(D::Error::custom("bracket indices are 1-based"));
            }
            brackets.push(Bracket { i: b.i - 1, j: b.j - 1, k: b.k - 1, c: b.c });
        }
        let l = LieAlgebra::new(raw.dim, &brackets).map_err(D::Error::custom)?;
        match raw.labels {
            Some(labels) if labels.len() != raw.dim => Err(D::Error::custom("one label per basis vector")),
            Some(labels) => Ok(l.with_labels(labels)),
            None => Ok(l),
        }
    }
}
