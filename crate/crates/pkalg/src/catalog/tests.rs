use super::*;
use crate::family::isotropic_metric;
use crate::lie::{almost_abelian, iso_fingerprint, AlmostAbelianPresentation};
use crate::pk::{verify_pk, PKStructure};
use crate::scalar::{q, qi};

fn expr(c: i64, terms: &[(&str, Scalar)]) -> LinExpr {
    LinExpr { constant: qi(c), terms: terms.iter().map(|(n, x)| (n.to_string(), x.clone())).collect() }
}

#[test]
fn expression_display() {
    assert_eq!(expr(0, &[]).to_string(), "0");
    assert_eq!(expr(-1, &[]).to_string(), "-1");
    assert_eq!(LinExpr::constant(q(1, 2)).to_string(), "1/2");
    assert_eq!(expr(0, &[("λ_1", qi(-1))]).to_string(), "-λ_1");
    assert_eq!(expr(0, &[("x^+", qi(1))]).to_string(), "x^+");
    assert_eq!(expr(1, &[("a", qi(2)), ("c_1", qi(-1))]).to_string(), "2a-c_1+1");
    assert_eq!(expr(0, &[("ρ", q(-1, 3))]).to_string(), "-1/3ρ");
}

#[test]
fn symbolic_recovers_affine_maps() {
    let m = symbolic(&["s", "t"], |p| Ok(Matrix::from_rows(vec![vec![&p[0] - &p[1], qi(4)], vec![&p[1] * &qi(3), qi(0)]]))).unwrap();
    assert_eq!(m.to_strings(), [["s-t", "4"], ["3t", "0"]]);
    assert_eq!(m.parameters(), ["s", "t"]);
    let square = symbolic(&["s"], |p| Ok(Matrix::from_rows(vec![vec![&p[0] * &p[0]]])));
    assert!(matches!(square, Err(Error::Unsupported(_))));
}

#[test]
fn catalog_shapes() {
    let sizes = [(6, Case::Noniso, vec![2, 2, 2, 2]), (6, Case::Iso, vec![4, 2]), (8, Case::Noniso, vec![2; 5]), (8, Case::Iso, vec![2, 1, 2, 2, 2, 2])];
    for (dim, case, counts) in sizes {
        let c = catalog(dim, case).unwrap();
        assert_eq!(c.iter().map(|e| e.matrices.len()).collect::<Vec<_>>(), counts);
        for e in &c {
            let d = &e.matrices[0].matrix;
            assert_eq!(d.rows.len(), dim - 1, "{}", e.key);
        }
    }
    assert!(catalog(4, Case::Iso).is_err());
    assert_eq!("iso".parse::<Case>().unwrap(), Case::Iso);
    assert!("both".parse::<Case>().is_err());
}

#[test]
fn displayed_examples() {
    let c = catalog(6, Case::Iso).unwrap();
    let d3 = &c[1].matrices[1].matrix;
    assert_eq!(d3.to_strings()[1], ["0", "0", "x", "0", "1"]);
    let c = catalog(6, Case::Noniso).unwrap();
    assert_eq!(c[3].matrices[0].matrix.to_strings()[2], ["0", "0", "-ρ", "λ", "0"]);
}

#[test]
fn d4_and_d5_are_isomorphic() {
    let c = catalog(6, Case::Iso).unwrap();
    let at = |i: usize, vals: &[(&str, i64)]| {
        let v: BTreeMap<String, Scalar> = vals.iter().map(|(n, x)| (n.to_string(), qi(*x))).collect();
        AlmostAbelianPresentation::new(c[0].matrices[i].matrix.eval(&v).unwrap())
    };
    for c1 in [-2, 0, 3] {
        let f4 = iso_fingerprint(&at(1, &[("λ", 0), ("c_1", c1)])).unwrap();
        assert_eq!(f4, iso_fingerprint(&at(2, &[("λ", 0)])).unwrap());
    }
}

#[test]
fn catalog_matrices_are_pseudo_kahler() {
    for dim in [6, 8] {
        for e in catalog(dim, Case::Iso).unwrap() {
            for m in &e.matrices {
                let vals: BTreeMap<String, Scalar> = m.matrix.parameters().into_iter().zip([q(1, 2), qi(2), qi(-3)].into_iter().cycle()).collect();
                let d = m.matrix.eval(&vals).unwrap();
                let k = dim - 4;
                let g_v = match e.key.as_str() {
                    k if k.contains("t1") => realize(&BlockType::single(Block::nil(1, 1))).g,
                    k if k.contains("t2") => realize(&BlockType::new().with(Block::nil(0, 1), 1).with(Block::nil(0, -1), 1)).g,
                    _ => Matrix::identity(k),
                };
                let (j, g) = isotropic_metric(&g_v);
                let s = PKStructure::new(almost_abelian(&d), j, g).unwrap();
                assert!(verify_pk(&s).is_pseudo_kahler(), "{} {}", e.key, m.name);
            }
        }
    }
}

#[test]
fn transcribed_t1_display_is_not_closed() {
    // rows 1 and 2 of the printed D₂(t₁, x) use v = (0, x, 0, 0) while the last
    // column uses v(x) = (0, 0, x, 0)
    let printed = Matrix::from_ints(&[
        &[0, 0, 0, 0, 0, 1, 0],
        &[0, 0, 0, 0, -1, 0, 0],
        &[0, 0, 0, 0, 1, 0, 0],
        &[0, 0, 0, 0, 0, 1, 0],
        &[0, 0, 0, 0, 0, 0, 1],
        &[0, 0, 0, 0, 0, 0, 0],
        &[0, 0, 0, 0, 0, 0, 0],
    ]);
    let g_v = realize(&BlockType::single(Block::nil(1, 1))).g;
    let (j, g) = isotropic_metric(&g_v);
    let s = PKStructure::new(almost_abelian(&printed), j.clone(), g.clone()).unwrap();
    let report = verify_pk(&s);
    assert!(report.integrable && !report.closed);
    let generated = catalog(8, Case::Iso).unwrap()[2].matrices[0].matrix.eval(&[("x".to_string(), qi(1))].into()).unwrap();
    assert!(verify_pk(&PKStructure::new(almost_abelian(&generated), j, g).unwrap()).is_pseudo_kahler());
}
