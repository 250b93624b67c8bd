use super::*;
use crate::blocks::{Block, BlockType, XtAssignment};
use crate::lie::almost_abelian;
use crate::matrix::{vec_add, vec_sub};
use crate::scalar::{q, qi};
use crate::sweep;

fn rot(l: i64) -> BlockType {
    BlockType::single(Block::imag(0, 1, qi(l)))
}

fn nil(m: usize, eps: i8) -> BlockType {
    BlockType::single(Block::nil(m, eps))
}

fn pipeline(f: &FamilyInstance) -> (crate::pk::PKStructure, Connection, Curvature) {
    let (s, _) = build_family(f).unwrap();
    let c = levi_civita(&s.algebra, &s.g).unwrap();
    let k = curvature(&c, &s.algebra, &s.g).unwrap();
    (s, c, k)
}

/// `e^i ⊗ e_j` as a matrix: sends `e_i` to `e_j`.
fn tensor(n: usize, i: usize, j: usize) -> Matrix {
    let mut m = Matrix::zeros(n, n);
    m[(j, i)] = Scalar::one();
    m
}

/// Gram-Schmidt over the rationals, pairing null vectors as `u ± w`.
fn orthogonal_frame(g: &Matrix) -> Vec<Vec<Scalar>> {
    let n = g.rows();
    let mut rest: Vec<Vec<Scalar>> = (0..n).map(|i| unit(n, i)).collect();
    let mut frame: Vec<Vec<Scalar>> = Vec::new();
    while !rest.is_empty() {
        let pick = rest.iter().position(|v| !bilinear(g, v, v).is_zero());
        let f = match pick {
            Some(p) => rest.remove(p),
            None => {
                let u = rest[0].clone();
                let w = rest.iter().position(|w| !bilinear(g, &u, w).is_zero()).unwrap();
                vec_add(&u, &rest[w])
            }
        };
        let len = bilinear(g, &f, &f);
        rest = rest
            .into_iter()
            .map(|v| {
                let c = &bilinear(g, &v, &f) / &len;
                vec_sub(&v, &f.iter().map(|x| x * &c).collect::<Vec<_>>())
            })
            .filter(|v| !crate::matrix::is_zero_vec(v))
            .collect();
        rest = crate::matrix::span_basis(&rest);
        frame.push(f);
    }
    frame
}

#[test]
fn abelian_connection_vanishes() {
    let l = LieAlgebra::abelian(4);
    let g = Matrix::diagonal(&[qi(1), qi(-1), qi(2), q(1, 3)]);
    let c = levi_civita(&l, &g).unwrap();
    assert!(c.nabla.iter().all(Matrix::is_zero));
    let k = curvature(&c, &l, &g).unwrap();
    assert!(k.is_flat());
    assert_eq!(flat_complete(&c), Ok(true));
}

#[test]
fn degenerate_metric_rejected() {
    let l = LieAlgebra::abelian(2);
    let g = Matrix::from_ints(&[&[1, 1], &[1, 1]]);
    assert_eq!(levi_civita(&l, &g), Err(Error::DegenerateMetric));
}

#[test]
fn non_isotropic_connection() {
    for eps in [1, -1] {
        let (_, c, k) = pipeline(&FamilyInstance::g0(rot(3), qi(1), eps));
        // ∇_{e3} e3 = e4
        assert_eq!(c.nabla[2].column(2), unit(4, 3));
        assert!(c.nabla[0].is_zero() && c.nabla[1].is_zero());
        assert!(!k.is_flat());
        assert!(!k.is_ricci_flat());
    }
}

#[test]
fn non_isotropic_ricci_six_dimensional() {
    let t = rot(1).with(Block::imag(0, -1, qi(2)), 1);
    let (_, _, k) = pipeline(&FamilyInstance::g0(t, qi(2), 1));
    let mut expected = Matrix::zeros(6, 6);
    expected[(4, 4)] = qi(-4);
    expected[(5, 5)] = qi(-4);
    assert_eq!(k.ricci, expected);
}

#[test]
fn isotropic_connection_with_c2() {
    let f = FamilyInstance::g4(nil(0, 1), qi(1));
    assert_eq!((f.a(), f.c2()), (qi(0), qi(1)));
    let (_, c, _) = pipeline(&f);
    let expected = -&(&tensor(6, 4, 0) + &tensor(6, 5, 1));
    assert_eq!(c.nabla[4], expected);
}

#[test]
fn isotropic_curvature_with_a_and_c2() {
    let f = FamilyInstance::g1(nil(0, -1), qi(1));
    let (_, _, k) = pipeline(&f);
    let n = 6;
    let expected = (&tensor(n, 4, 0) + &tensor(n, 5, 1)).scale(&qi(-3));
    for i in 0..n {
        for j in 0..n {
            match (i, j) {
                (4, 5) => assert_eq!(k.r(i, j), &expected),
                (5, 4) => assert_eq!(k.r(i, j), &-&expected),
                _ => assert!(k.r(i, j).is_zero(), "R(e{}, e{})", i + 1, j + 1),
            }
        }
    }
    assert!(k.is_ricci_flat());
    assert!(!k.is_flat());
}

#[test]
fn flatness_examples() {
    let (_, c, k) = pipeline(&FamilyInstance::g0(nil(1, 1), qi(0), -1));
    assert!(k.is_flat());
    assert_eq!(flat_complete(&c), Ok(true));
    let (_, c, k) = pipeline(&FamilyInstance::g3(nil(0, 1), XtAssignment::new().set(0, 1, qi(1))));
    assert!(k.is_flat());
    assert_eq!(flat_complete(&c), Ok(true));
    let (_, c, k) = pipeline(&FamilyInstance::g0(rot(1), qi(1), 1));
    assert!(!k.is_flat());
    assert_eq!(flat_complete(&c), Err(Error::NotFlat));
}

#[test]
fn incomplete_flat_connection_detected() {
    // ∇_{e1} = Id on ℝ: the affine structure of the half-line
    let c = Connection { nabla: vec![Matrix::identity(1)] };
    assert_eq!(flat_complete(&c), Ok(false));
}

#[test]
fn soliton_examples() {
    for a in [qi(1), qi(2), q(-1, 2)] {
        let f = FamilyInstance::g0(rot(1), a.clone(), 1);
        let (s, _, k) = pipeline(&f);
        let sol = ricci_soliton(&s.algebra, &k).unwrap();
        assert_eq!(sol.lambda, -(&a * &a));
        assert!(s.algebra.is_derivation(&sol.delta));
    }
    let (s, _, k) = pipeline(&FamilyInstance::g0(rot(1), qi(1), 1));
    let sol = ricci_soliton(&s.algebra, &k).unwrap();
    assert_eq!(sol.delta.submatrix(0, 2, 0, 2), Matrix::identity(2));
    assert_eq!(sol.delta, Matrix::diagonal(&[qi(1), qi(1), qi(0), qi(0)]));
    // negative ε flips the sign of ric on the last two vectors
    let (s, _, k) = pipeline(&FamilyInstance::g0(rot(1), qi(2), -1));
    let sol = ricci_soliton(&s.algebra, &k).unwrap();
    assert_eq!(sol.lambda, qi(4));
    // flat
    let (s, _, k) = pipeline(&FamilyInstance::g5(nil(0, 1)));
    let sol = ricci_soliton(&s.algebra, &k).unwrap();
    assert_eq!(sol.lambda, qi(0));
    assert!(sol.delta.is_zero());
}

#[test]
fn soliton_outside_the_families() {
    // Heisenberg algebra: every left-invariant Riemannian metric is a nilsoliton
    let l = LieAlgebra::new(3, &[crate::lie::Bracket { i: 0, j: 1, k: 2, c: qi(1) }]).unwrap();
    let g = Matrix::diagonal(&[qi(1), qi(2), qi(1)]);
    let c = levi_civita(&l, &g).unwrap();
    let k = curvature(&c, &l, &g).unwrap();
    let sol = ricci_soliton(&l, &k).unwrap();
    assert!(l.is_derivation(&sol.delta));
    assert_eq!(&sol.delta + &Matrix::identity(3).scale(&sol.lambda), k.ricci_operator);
    // e3 acting by diag(1, 2) with a metric mixing e1 and e3
    let l = almost_abelian(&Matrix::from_ints(&[&[1, 0], &[0, 2]]));
    let g = Matrix::from_ints(&[&[1, 0, 1], &[0, 1, 0], &[1, 0, 3]]);
    let c = levi_civita(&l, &g).unwrap();
    let k = curvature(&c, &l, &g).unwrap();
    let sol = ricci_soliton(&l, &k).unwrap();
    assert!(l.is_derivation(&sol.delta));
    // the same D with e1, e2 not orthogonal is not a soliton
    let g = Matrix::from_ints(&[&[1, 1, 0], &[1, 2, 0], &[0, 0, 1]]);
    let c = levi_civita(&l, &g).unwrap();
    let k = curvature(&c, &l, &g).unwrap();
    assert_eq!(ricci_soliton(&l, &k), None);
}

#[test]
fn closed_form_examples() {
    assert_eq!(closed_form_check(&FamilyInstance::g0(nil(1, 1), qi(1), 1)), Ok(true));
    let f = FamilyInstance::g1(rot(2), qi(2));
    assert_eq!(closed_form_check(&f), Ok(true));
    let (_, c, _) = pipeline(&f);
    // ∇_{e6} e5 = c₁e₁ + v + a·e₅ with c₁ = 0, v = 0, a = 1
    assert_eq!(c.nabla[5].column(4), unit(6, 4));
    assert_eq!(closed_form_check(&FamilyInstance::g0(BlockType::new(), qi(0), 1)), Ok(true));
    assert_eq!(closed_form_check(&FamilyInstance::g6(nil(0, 1))), Ok(true));
}

#[test]
fn nabla_rank_distinguishes_h10_metrics() {
    let x = XtAssignment::new().set(0, 1, qi(1));
    let without_c2 = FamilyInstance::g2(nil(0, 1), x.clone());
    let with_c2 = FamilyInstance::g3(nil(0, 1), x);
    let (s2, c2, _) = pipeline(&without_c2);
    let (s3, c3, _) = pipeline(&with_c2);
    assert!(s2.algebra.is_nilpotent() && s3.algebra.is_nilpotent());
    assert_eq!(nabla_rank(&c2), 1);
    assert_eq!(nabla_rank(&c3), 2);
    assert!(!c2.nabla[5].is_zero());
}

#[test]
fn report_json() {
    let (s, _) = build_family(&FamilyInstance::g0(BlockType::new(), qi(1), 1)).unwrap();
    let r = curvature_report(&s.algebra, &s.g).unwrap();
    assert!(!r.flat && !r.ricci_flat);
    let json = serde_json::to_value(&r).unwrap();
    assert_eq!(json["soliton"]["lambda"], "-1/1");
    assert_eq!(json["ricci"]["entries"][0][0], "-1/1");
    let back: CurvatureReport = serde_json::from_value(json).unwrap();
    assert_eq!(back, r);
    let (s, _) = build_family(&FamilyInstance::g6(BlockType::new())).unwrap();
    let r = curvature_report(&s.algebra, &s.g).unwrap();
    assert!(r.flat && r.ricci_flat);
}

#[test]
fn null_pair_frame_gives_the_same_ricci() {
    // E₁ ∝ e₁ + e_{2n}, E₂ ∝ e₂ + e_{2n−1}, E_{2n−1} ∝ e₂ − e_{2n−1}, E_{2n} ∝ e₁ − e_{2n}
    let f = FamilyInstance::g1(rot(1), qi(2));
    let (s, _, k) = pipeline(&f);
    let n = s.dim();
    let e = |i: usize| unit::<Scalar>(n, i);
    let mut frame = vec![vec_add(&e(0), &e(n - 1)), vec_add(&e(1), &e(n - 2))];
    for i in 2..n - 2 {
        frame.push(e(i));
    }
    frame.push(vec_sub(&e(1), &e(n - 2)));
    frame.push(vec_sub(&e(0), &e(n - 1)));
    // g_V for a rotation block is the identity, so e₃, e₄ are orthonormal
    let ric = ricci_in_frame(&k, &s.g, &frame).unwrap();
    assert_eq!(ric, k.ricci);
    assert!(ric.is_zero());
    // the E₁ term of Ric(e_{2n−1}, e_{2n−1}) is (3/2)·a·c₂ = 3
    let p = n - 2;
    let f1 = &frame[0];
    let r = k.r(0, p) + k.r(n - 1, p);
    let term = &bilinear(&s.g, &r.column(p), f1) / &bilinear(&s.g, f1, f1);
    assert_eq!(term, qi(3));
}

#[test]
fn sweep_invariants() {
    let mut unimodular = 0;
    for f in sweep::instances(4) {
        let (s, c, k) = pipeline(&f);
        let l = &s.algebra;
        let n = s.dim();
        for i in 0..n {
            for j in 0..n {
                assert_eq!(c.torsion_free_bracket(i, j), l.bracket_basis(i, j), "{f}: torsion");
                assert!(k.r(i, j) == &-k.r(j, i));
            }
            // g(∇_X Y, Z) + g(Y, ∇_X Z) = 0
            let m = &(&c.nabla[i].transpose() * &s.g) + &(&s.g * &c.nabla[i]);
            assert!(m.is_zero(), "{f}: metric compatibility");
        }
        for i in 0..n {
            for j in 0..n {
                for z in 0..n {
                    let b = vec_add(
                        &vec_add(&k.r(i, j).column(z), &k.r(j, z).column(i)),
                        &k.r(z, i).column(j),
                    );
                    assert!(crate::matrix::is_zero_vec(&b), "{f}: Bianchi");
                }
            }
        }
        assert!(k.ricci.is_symmetric());
        assert_eq!(ricci_in_frame(&k, &s.g, &orthogonal_frame(&s.g)).unwrap(), k.ricci, "{f}");
        if f.is_isotropic() {
            assert!(k.is_ricci_flat(), "{f}");
        }
        if l.is_unimodular() {
            unimodular += 1;
            assert!(k.is_flat(), "{f}");
        } else if !f.is_isotropic() {
            assert!(!k.is_flat(), "{f}");
        }
        if l.is_nilpotent() {
            assert_eq!(flat_complete(&c), Ok(true), "{f}");
        }
        if !f.is_isotropic() {
            let sol = ricci_soliton(l, &k).expect("non-isotropic instances are solitons");
            let a2 = &f.a() * &f.a();
            assert_eq!(sol.lambda, -(&a2 * &Scalar::int(f.eps() as i64)), "{f}");
        }
        assert_eq!(closed_form_check(&f), Ok(true), "{f}");
    }
    assert!(unimodular > 0);
}
