//! Levi-Civita connection, Riemann and Ricci tensors of left-invariant
//! metrics, algebraic Ricci solitons and completeness of flat metrics.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::family::{build_family, FamilyInstance, Shape};
use crate::lie::LieAlgebra;
use crate::matrix::{bilinear, span_dim, standard_j, unit, Matrix};
use crate::scalar::Scalar;

/// `nabla[i]` is the matrix of `∇_{e_i}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Connection {
    pub nabla: Vec<Matrix>,
}

impl Connection {
    pub fn dim(&self) -> usize {
        self.nabla.len()
    }

    /// `∇_X = Σ x_i ∇_{e_i}`.
    pub fn along(&self, x: &[Scalar]) -> Matrix {
        let n = self.dim();
        let mut m = Matrix::zeros(n, n);
        for (xi, op) in x.iter().zip(&self.nabla) {
            if !xi.is_zero() {
                m = &m + &op.scale(xi);
            }
        }
        m
    }

    /// The bracket recovered from torsion-freeness, `[X,Y] = ∇_X Y − ∇_Y X`.
    pub fn torsion_free_bracket(&self, i: usize, j: usize) -> Vec<Scalar> {
        let a = self.nabla[i].column(j);
        let b = self.nabla[j].column(i);
        a.iter().zip(&b).map(|(x, y)| x - y).collect()
    }
}

/// Koszul formula `2g(∇_X Y, Z) = g([X,Y],Z) − g([Y,Z],X) + g([Z,X],Y)`.
pub fn levi_civita(l: &LieAlgebra, g: &Matrix) -> Result<Connection> {
    let n = l.dim();
    if g.rows() != n || !g.is_symmetric() {
        return Err(Error::DegenerateMetric);
    }
    let g_inv = g.inverse().ok_or(Error::DegenerateMetric)?;
    let half = Scalar::new(1, 2);
    // lowered[i][j][k] = g([e_i, e_j], e_k)
    let lowered_brackets: Vec<Vec<Scalar>> =
        (0..n * n).map(|p| g.vec_mul(&l.bracket_basis(p / n, p % n))).collect();
    let gb = |i: usize, j: usize, k: usize| &lowered_brackets[i * n + j][k];
    let mut nabla = Vec::with_capacity(n);
    for i in 0..n {
        let mut op = Matrix::zeros(n, n);
        for j in 0..n {
            let lowered: Vec<Scalar> = (0..n).map(|k| &(gb(i, j, k) - gb(j, k, i)) + gb(k, i, j)).collect();
            let col = g_inv.mul_vec(&lowered);
            for (k, c) in col.into_iter().enumerate() {
                op[(k, j)] = &c * &half;
            }
        }
        nabla.push(op);
    }
    Ok(Connection { nabla })
}

/// `riemann[i·n + j]` is `R(e_i, e_j)`; `Ric = g(ric·, ·)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Curvature {
    pub riemann: Vec<Matrix>,
    pub ricci: Matrix,
    pub ricci_operator: Matrix,
}

impl Curvature {
    pub fn dim(&self) -> usize {
        self.ricci.rows()
    }

    pub fn r(&self, i: usize, j: usize) -> &Matrix {
        &self.riemann[i * self.dim() + j]
    }

    pub fn is_flat(&self) -> bool {
        self.riemann.iter().all(Matrix::is_zero)
    }

    pub fn is_ricci_flat(&self) -> bool {
        self.ricci.is_zero()
    }
}

/// `R(X,Y) = [∇_X, ∇_Y] − ∇_{[X,Y]}` and `Ric(v,w) = tr(z ↦ R(z,v)w)`.
pub fn curvature(c: &Connection, l: &LieAlgebra, g: &Matrix) -> Result<Curvature> {
    let n = l.dim();
    if c.dim() != n || g.rows() != n {
        return Err(Error::Dimension(format!("connection, algebra and metric must have dimension {n}")));
    }
    let mut riemann = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            let r = &c.nabla[i].commutator(&c.nabla[j]) - &c.along(&l.bracket_basis(i, j));
            riemann.push(r);
        }
    }
    let ricci = Matrix::from_fn(n, n, |v, w| {
        let mut s = Scalar::zero();
        for z in 0..n {
            s += &riemann[z * n + v][(z, w)];
        }
        s
    });
    let g_inv = g.inverse().ok_or(Error::DegenerateMetric)?;
    let ricci_operator = &g_inv * &ricci;
    Ok(Curvature { riemann, ricci, ricci_operator })
}

/// Ricci tensor through a `g`-orthogonal frame `f_i` with nonzero lengths:
/// `Ric(v,w) = Σ g(R(f_i,v)w, f_i) / g(f_i,f_i)`. The frame need not be
/// normalized, so null pairs enter as `e ± e'` without square roots.
pub fn ricci_in_frame(k: &Curvature, g: &Matrix, frame: &[Vec<Scalar>]) -> Result<Matrix> {
    let n = k.dim();
    if frame.len() != n {
        return Err(Error::Dimension(format!("frame needs {n} vectors")));
    }
    let mut norms = Vec::with_capacity(n);
    for (a, f) in frame.iter().enumerate() {
        for h in &frame[..a] {
            if !bilinear(g, f, h).is_zero() {
                return Err(Error::Unsupported("frame is not orthogonal".into()));
            }
        }
        let len = bilinear(g, f, f);
        if len.is_zero() {
            return Err(Error::DegenerateMetric);
        }
        norms.push(len);
    }
    // R(f, e_v) = Σ f_z R(e_z, e_v)
    let r_along = |f: &[Scalar], v: usize| {
        let mut m = Matrix::zeros(n, n);
        for (z, fz) in f.iter().enumerate() {
            if !fz.is_zero() {
                m = &m + &k.r(z, v).scale(fz);
            }
        }
        m
    };
    let mut ric: Matrix = Matrix::zeros(n, n);
    for (f, len) in frame.iter().zip(&norms) {
        let gf = g.mul_vec(f);
        for v in 0..n {
            let rf = r_along(f, v);
            for w in 0..n {
                let col = rf.column(w);
                let val: Scalar = col.iter().zip(&gf).fold(Scalar::zero(), |s, (x, y)| s + &(x * y));
                let mut e = ric[(v, w)].clone();
                e += &(&val / len);
                ric[(v, w)] = e;
            }
        }
    }
    Ok(ric)
}

/// `ric = λ·Id + δ` with `δ` a derivation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Soliton {
    pub lambda: Scalar,
    pub delta: Matrix,
}

/// `ric − λ·Id` is a derivation iff `D(ric) + λ·[x,y] = 0` where `D(M)` is the
/// derivation defect, so `λ` is pinned by any nonzero bracket. On abelian
/// algebras every `λ` works and `λ = 0` is returned.
pub fn ricci_soliton(l: &LieAlgebra, k: &Curvature) -> Option<Soliton> {
    let n = l.dim();
    let ric = &k.ricci_operator;
    let mut lambda: Option<Scalar> = None;
    let mut constraints = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            let xy = l.bracket_basis(i, j);
            let lhs = ric.mul_vec(&xy);
            let t1 = l.bracket(&ric.column(i), &unit(n, j));
            let t2 = l.bracket(&unit(n, i), &ric.column(j));
            for a in 0..n {
                let defect = &(&lhs[a] - &t1[a]) - &t2[a];
                constraints.push((defect, xy[a].clone()));
            }
        }
    }
    // defect + λ·c = 0 for every entry
    for (defect, c) in &constraints {
        if !c.is_zero() {
            let l0 = -(defect / c);
            match &lambda {
                Some(prev) if prev != &l0 => return None,
                _ => lambda = Some(l0),
            }
        }
    }
    let lambda = lambda.unwrap_or_else(Scalar::zero);
    if constraints.iter().any(|(d, c)| !(d + &(&lambda * c)).is_zero()) {
        return None;
    }
    let delta = ric - &Matrix::identity(n).scale(&lambda);
    debug_assert!(l.is_derivation(&delta));
    Some(Soliton { lambda, delta })
}

/// Completeness of a flat connection: the operators `∇_{e_i}` must be
/// simultaneously strictly triangularizable. Decided by the flag
/// `W_{k+1} = {w : ∇_{e_i} w ∈ W_k for all i}` starting from `W_0 = 0`.
pub fn flat_complete(c: &Connection) -> Result<bool> {
    let n = c.dim();
    let ops = &c.nabla;
    // flatness from ∇ alone: the bracket is recovered by torsion-freeness
    for i in 0..n {
        for j in 0..n {
            let curv = &ops[i].commutator(&ops[j]) - &c.along(&c.torsion_free_bracket(i, j));
            if !curv.is_zero() {
                return Err(Error::NotFlat);
            }
        }
    }
    let mut w: Vec<Vec<Scalar>> = Vec::new();
    loop {
        // rows of `ann` cut out W_k
        let ann = if w.is_empty() {
            Matrix::identity(n)
        } else {
            let wm = Matrix::from_rows(w.clone());
            let k = wm.kernel();
            if k.is_empty() {
                return Ok(true);
            }
            Matrix::from_rows(k)
        };
        let mut rows = Vec::new();
        for op in ops {
            rows.extend((&ann * op).to_rows());
        }
        let next = Matrix::from_rows(rows).kernel();
        if next.len() == n {
            return Ok(true);
        }
        if next.len() == w.len() {
            return Ok(false);
        }
        w = next;
    }
}

/// Dimension of the image of `X ↦ ∇_X` in `gl(𝔤)`.
pub fn nabla_rank(c: &Connection) -> usize {
    let flat: Vec<Vec<Scalar>> = c.nabla.iter().map(|m| m.entries().to_vec()).collect();
    span_dim(&flat)
}

/// Connection and curvature of a family instance in closed form, built
/// directly from its parameters.
pub fn closed_form(f: &FamilyInstance) -> Result<(Connection, Vec<Matrix>, Matrix)> {
    let (s, _) = build_family(f)?;
    let n = s.dim();
    let zero = Matrix::zeros(n, n);
    let mut nabla = vec![zero.clone(); n];
    let mut riemann = vec![zero.clone(); n * n];
    let mut ricci = zero.clone();
    let (p, q) = (n - 2, n - 1);
    match f.shape()? {
        Shape::NonIsotropic(sh) => {
            let a = &sh.a;
            let mut np = zero.clone();
            np[(q, p)] = a.clone();
            np[(p, q)] = -a;
            let mut nq = zero.clone();
            nq.set_block(0, 0, &sh.endo);
            riemann[p * n + q] = np.scale(a);
            riemann[q * n + p] = -&riemann[p * n + q];
            nabla[p] = np;
            nabla[q] = nq;
            let a2 = a * a;
            ricci[(p, p)] = -&a2;
            ricci[(q, q)] = -&a2;
        }
        Shape::Isotropic(sh) => {
            let k = n - 4;
            let g_v = s.g.submatrix(2, 2 + k, 2, 2 + k);
            let j_v = standard_j(k / 2);
            let (a, c1, c2) = (&sh.a, &sh.c1, &sh.c2);
            let mut np = zero.clone();
            np[(0, p)] = -c2;
            np[(1, q)] = -c2;
            let mut nq = zero.clone();
            nq[(0, 0)] = -a;
            nq[(1, 1)] = -a;
            for x in 0..k {
                let ex = unit(k, x);
                nq[(0, 2 + x)] = bilinear(&g_v, &sh.v, &j_v.mul_vec(&ex));
                nq[(1, 2 + x)] = bilinear(&g_v, &sh.v, &ex);
            }
            nq.set_block(2, 2, &sh.endo);
            let jv = j_v.mul_vec(&sh.v);
            nq[(0, p)] = c1.clone();
            nq[(1, q)] = c1.clone();
            for x in 0..k {
                nq[(2 + x, p)] = sh.v[x].clone();
                nq[(2 + x, q)] = jv[x].clone();
            }
            nq[(p, p)] = a.clone();
            nq[(q, q)] = a.clone();
            riemann[p * n + q] = np.scale(&(a * &Scalar::int(3)));
            riemann[q * n + p] = -&riemann[p * n + q];
            nabla[p] = np;
            nabla[q] = nq;
        }
    }
    Ok((Connection { nabla }, riemann, ricci))
}

/// Compares the Koszul pipeline with [`closed_form`] on every operator,
/// every curvature endomorphism and the Ricci tensor.
pub fn closed_form_check(f: &FamilyInstance) -> Result<bool> {
    let (s, _) = build_family(f)?;
    let c = levi_civita(&s.algebra, &s.g)?;
    let k = curvature(&c, &s.algebra, &s.g)?;
    let (c0, r0, ric0) = closed_form(f)?;
    Ok(c == c0 && k.riemann == r0 && k.ricci == ric0)
}

/// JSON summary of the curvature of a metric Lie algebra.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CurvatureReport {
    pub flat: bool,
    pub ricci_flat: bool,
    pub ricci: Matrix,
    pub soliton: Option<Soliton>,
}

pub fn curvature_report(l: &LieAlgebra, g: &Matrix) -> Result<CurvatureReport> {
    let c = levi_civita(l, g)?;
    let k = curvature(&c, l, g)?;
    Ok(CurvatureReport {
        flat: k.is_flat(),
        ricci_flat: k.is_ricci_flat(),
        soliton: ricci_soliton(l, &k),
        ricci: k.ricci,
    })
}

#[cfg(test)]
mod tests;
