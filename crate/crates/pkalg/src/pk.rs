//! Almost pseudo-Hermitian structures on Lie algebras and the pseudo-Kähler
//! conditions: integrability, closedness of ω and compatibility.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lie::LieAlgebra;
use crate::matrix::{is_zero_vec, unit, vec_add, vec_sub, Matrix};
use crate::scalar::Scalar;

/// `(J, g)` on a Lie algebra with `ω(X, Y) = g(JX, Y)`, i.e. `Ω = Jᵀ g`.
/// In JSON `omega` is optional on input and must agree with `J` and `g`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "PKStructureJson")]
pub struct PKStructure {
    pub algebra: LieAlgebra,
    #[serde(rename = "J")]
    pub j: Matrix,
    pub g: Matrix,
    pub omega: Matrix,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct PKStructureJson {
    algebra: LieAlgebra,
    #[serde(rename = "J")]
    j: Matrix,
    g: Matrix,
    #[serde(default)]
    omega: Option<Matrix>,
}

impl TryFrom<PKStructureJson> for PKStructure {
    type Error = Error;

    fn try_from(raw: PKStructureJson) -> Result<Self> {
        let s = PKStructure::new(raw.algebra, raw.j, raw.g)?;
        match raw.omega {
            Some(w) if w != s.omega => Err(Error::Dimension("omega does not equal Jᵀg".into())),
            _ => Ok(s),
        }
    }
}

impl PKStructure {
    pub fn new(algebra: LieAlgebra, j: Matrix, g: Matrix) -> Result<Self> {
        let n = algebra.dim();
        if j.rows() != n || j.cols() != n || g.rows() != n || g.cols() != n {
            return Err(Error::Dimension(format!("J and g must be {n}×{n}")));
        }
        let omega = &j.transpose() * &g;
        Ok(PKStructure { algebra, j, g, omega })
    }

    pub fn dim(&self) -> usize {
        self.algebra.dim()
    }
}

/// `N(e_i, e_j) = [X,Y] + J[JX,Y] + J[X,JY] − [JX,JY]` on basis pairs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Nijenhuis {
    dim: usize,
    values: Vec<Vec<Scalar>>,
}

impl Nijenhuis {
    pub fn get(&self, i: usize, j: usize) -> &[Scalar] {
        &self.values[i * self.dim + j]
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|v| is_zero_vec(v))
    }

    pub fn witness(&self) -> Option<(usize, usize)> {
        let p = self.values.iter().position(|v| !is_zero_vec(v))?;
        Some((p / self.dim, p % self.dim))
    }
}

pub fn nijenhuis(l: &LieAlgebra, j: &Matrix) -> Nijenhuis {
    let n = l.dim();
    let jcols: Vec<Vec<Scalar>> = (0..n).map(|i| j.column(i)).collect();
    let mut values = Vec::with_capacity(n * n);
    for a in 0..n {
        for b in 0..n {
            let x = unit(n, a);
            let y = unit(n, b);
            let t1 = l.bracket_basis(a, b);
            let t2 = j.mul_vec(&l.bracket(&jcols[a], &y));
            let t3 = j.mul_vec(&l.bracket(&x, &jcols[b]));
            let t4 = l.bracket(&jcols[a], &jcols[b]);
            values.push(vec_sub(&vec_add(&vec_add(&t1, &t2), &t3), &t4));
        }
    }
    Nijenhuis { dim: n, values }
}

/// `dω(X,Y,Z) = −ω([X,Y],Z) − ω([Y,Z],X) − ω([Z,X],Y)` on basis triples.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ThreeForm {
    dim: usize,
    values: Vec<Scalar>,
}

impl ThreeForm {
    pub fn get(&self, i: usize, j: usize, k: usize) -> &Scalar {
        &self.values[(i * self.dim + j) * self.dim + k]
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(Scalar::is_zero)
    }

    pub fn witness(&self) -> Option<(usize, usize, usize)> {
        let n = self.dim;
        let p = self.values.iter().position(|v| !v.is_zero())?;
        Some((p / (n * n), (p / n) % n, p % n))
    }
}

pub fn d_omega(l: &LieAlgebra, omega: &Matrix) -> ThreeForm {
    let n = l.dim();
    let om = |x: &[Scalar], k: usize| -> Scalar {
        let mut s = Scalar::zero();
        for (i, xi) in x.iter().enumerate() {
            if !xi.is_zero() {
                s += &(xi * &omega[(i, k)]);
            }
        }
        s
    };
    let mut values = Vec::with_capacity(n * n * n);
    for i in 0..n {
        for j in 0..n {
            let xy = l.bracket_basis(i, j);
            for k in 0..n {
                let yz = l.bracket_basis(j, k);
                let zx = l.bracket_basis(k, i);
                values.push(-(om(&xy, k) + om(&yz, i) + om(&zx, j)));
            }
        }
    }
    ThreeForm { dim: n, values }
}

/// Outcome of [`verify_pk`]. Witness indices are 1-based basis labels.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PKReport {
    pub integrable: bool,
    pub closed: bool,
    pub compatible: bool,
    pub metric_nondegenerate: bool,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub nijenhuis_witness: Option<[usize; 2]>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub d_omega_witness: Option<[usize; 3]>,
}

impl PKReport {
    pub fn is_pseudo_kahler(&self) -> bool {
        self.integrable && self.closed && self.compatible && self.metric_nondegenerate
    }
}

/// Checks all four conditions exactly. `compatible` covers `J² = −Id`,
/// `gᵀ = g` and `g(J·, J·) = g`.
pub fn verify_pk(s: &PKStructure) -> PKReport {
    let n = s.dim();
    let id = Matrix::identity(n);
    let compatible =
        &s.j * &s.j == -&id && s.g.is_symmetric() && &(&s.j.transpose() * &s.g) * &s.j == s.g;
    let metric_nondegenerate = !s.g.det().is_zero();
    let nij = nijenhuis(&s.algebra, &s.j);
    let dw = d_omega(&s.algebra, &s.omega);
    PKReport {
        integrable: nij.is_zero(),
        closed: dw.is_zero(),
        compatible,
        metric_nondegenerate,
        nijenhuis_witness: nij.witness().map(|(a, b)| [a + 1, b + 1]),
        d_omega_witness: dw.witness().map(|(a, b, c)| [a + 1, b + 1, c + 1]),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lie::almost_abelian;
    use crate::matrix::standard_j;
    use crate::scalar::qi;

    fn non_isotropic_4d(a_block: &Matrix, a: i64) -> PKStructure {
        let mut d = Matrix::zeros(3, 3);
        d.set_block(0, 0, a_block);
        d[(2, 2)] = qi(a);
        PKStructure::new(almost_abelian(&d), standard_j(2), Matrix::identity(4)).unwrap()
    }

    #[test]
    fn abelian_is_pk() {
        let s = PKStructure::new(almost_abelian(&Matrix::zeros(3, 3)), standard_j(2), Matrix::identity(4)).unwrap();
        assert!(nijenhuis(&s.algebra, &s.j).is_zero());
        assert!(d_omega(&s.algebra, &s.omega).is_zero());
        assert!(verify_pk(&s).is_pseudo_kahler());
    }

    #[test]
    fn rotation_block_is_pk() {
        let s = non_isotropic_4d(&Matrix::from_ints(&[&[0, 3], &[-3, 0]]), 1);
        let r = verify_pk(&s);
        assert!(r.is_pseudo_kahler(), "{r:?}");
        assert_eq!(r.nijenhuis_witness, None);
    }

    #[test]
    fn non_commuting_block_breaks_integrability() {
        let s = non_isotropic_4d(&Matrix::from_ints(&[&[1, 0], &[0, 2]]), 0);
        let nij = nijenhuis(&s.algebra, &s.j);
        assert!(!nij.is_zero());
        assert!(!is_zero_vec(nij.get(0, 3)));
        assert!(!verify_pk(&s).integrable);
    }

    #[test]
    fn symmetric_block_breaks_closedness() {
        let s = non_isotropic_4d(&Matrix::from_ints(&[&[1, 0], &[0, 1]]), 0);
        let r = verify_pk(&s);
        assert!(r.integrable);
        assert!(!r.closed);
        assert!(r.d_omega_witness.is_some());
    }

    #[test]
    fn omega_convention() {
        let s = non_isotropic_4d(&Matrix::zeros(2, 2), 0);
        // ω(e1, e2) = g(Je1, e2) = g(e2, e2) = 1
        assert_eq!(s.omega[(0, 1)], qi(1));
        assert!(s.omega.is_antisymmetric());
    }

    #[test]
    fn json_round_trip() {
        let s = non_isotropic_4d(&Matrix::from_ints(&[&[0, 2], &[-2, 0]]), 1);
        let v = serde_json::to_value(&s).unwrap();
        assert!(v.get("J").is_some() && v.get("omega").is_some());
        assert_eq!(serde_json::from_value::<PKStructure>(v.clone()).unwrap(), s);
        let mut no_omega = v.clone();
        no_omega.as_object_mut().unwrap().remove("omega");
        assert_eq!(serde_json::from_value::<PKStructure>(no_omega).unwrap(), s);
        let mut wrong = v;
        wrong["omega"] = serde_json::to_value(Matrix::<Scalar>::zeros(4, 4)).unwrap();
        assert!(serde_json::from_value::<PKStructure>(wrong).is_err());
    }

    #[test]
    fn degenerate_metric_flagged() {
        let mut s = non_isotropic_4d(&Matrix::zeros(2, 2), 0);
        s.g = Matrix::zeros(4, 4);
        let r = verify_pk(&s);
        assert!(!r.metric_nondegenerate);
    }
}
