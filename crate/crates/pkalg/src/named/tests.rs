use super::*;
use crate::blocks::{Block, BlockType, XtAssignment};
use crate::family::{build_family, FamilyInstance};
use crate::matrix::Matrix;
use crate::scalar::{q, qi};

fn fp(f: FamilyInstance) -> Fingerprint {
    let (_, p) = build_family(&f).unwrap();
    iso_fingerprint(&p).unwrap()
}

fn name_of(f: FamilyInstance) -> (String, Option<Scalar>) {
    let (_, p) = build_family(&f).unwrap();
    let (a, d) = identify(&p).unwrap().expect("a built-in algebra");
    (a.name.clone(), d)
}

#[test]
fn catalog_loads_and_is_almost_abelian() {
    let all = named_algebras();
    assert_eq!(all.len(), 8);
    for a in all {
        let v = a.parameter.as_ref().map(|_| qi(2));
        let l = a.algebra(v.as_ref()).unwrap();
        assert_eq!(l.dim(), a.dim);
        assert!(!l.is_abelian());
        a.fingerprint(v.as_ref()).unwrap();
    }
    assert!(named("h10").unwrap().algebra(None).unwrap().is_nilpotent());
    assert!(named("nope").is_err());
    let r = named("r'4,0,delta").unwrap();
    assert!(r.algebra(None).is_err());
    assert!(r.algebra(Some(&qi(0))).is_err());
    assert!(named("h6").unwrap().algebra(Some(&qi(1))).is_err());
}

#[test]
fn pairwise_distinct() {
    let all = named_algebras();
    for (i, a) in all.iter().enumerate() {
        for b in &all[i + 1..] {
            let v = Some(qi(3));
            let fa = a.fingerprint(a.parameter.as_ref().and(v.as_ref())).unwrap();
            let fb = b.fingerprint(b.parameter.as_ref().and(v.as_ref())).unwrap();
            assert_ne!(fa, fb, "{} {}", a.name, b.name);
        }
    }
}

#[test]
fn four_dimensional_example() {
    let t = |l: i64| BlockType::single(Block::imag(0, 1, qi(l)));
    assert_eq!(name_of(FamilyInstance::g0(t(0), qi(2), 1)).0, "rr3,0");
    assert_eq!(name_of(FamilyInstance::g0(t(3), qi(0), -1)).0, "rr'3,0");
    let (n, delta) = name_of(FamilyInstance::g0(t(3), qi(-2), 1));
    assert_eq!((n.as_str(), delta), ("r'4,0,delta", Some(q(3, 2))));
    let empty = BlockType::new();
    assert_eq!(name_of(FamilyInstance::g1(empty.clone(), qi(5))).0, "r4,-1,-1");
    assert_eq!(name_of(FamilyInstance::g4(empty.clone(), qi(1))).0, "rh3");
    assert_eq!(name_of(FamilyInstance::g5(empty)).0, "rh3");
}

#[test]
fn delta_is_scale_invariant() {
    let r = named("r'4,0,delta").unwrap();
    for (l, a) in [(1, 1), (2, 2), (-4, 4)] {
        let t = BlockType::single(Block::imag(0, 1, qi(l)));
        assert_eq!(fp(FamilyInstance::g0(t, qi(a), 1)), r.fingerprint(Some(&qi(1))).unwrap());
    }
}

#[test]
fn six_dimensional_example() {
    let nil = |e: i8| BlockType::single(Block::nil(1, e));
    assert_eq!(name_of(FamilyInstance::g0(nil(1), qi(0), 1)).0, "h6");
    assert_eq!(name_of(FamilyInstance::g0(nil(-1), qi(0), -1)).0, "h6");
    let t = BlockType::single(Block::nil(0, 1));
    let x = XtAssignment::new().set(0, 1, qi(1));
    assert_eq!(name_of(FamilyInstance::g2(t.clone(), x.clone())).0, "h10");
    assert_eq!(name_of(FamilyInstance::g3(t.clone(), x)).0, "h10");
    assert_eq!(name_of(FamilyInstance::g4(t.clone(), qi(-2))).0, "h8");
    assert_eq!(name_of(FamilyInstance::g5(t)).0, "h8");
}

#[test]
fn neutral_example_matrix_is_h6() {
    // A in u(1,1) on h_1 with g_1 = diag(1,1,-1,-1), padded by a = 0
    let a = Matrix::from_ints(&[&[0, 1, 1, 0], &[-1, 0, 0, 1], &[1, 0, 0, -1], &[0, 1, 1, 0]]);
    let d = Matrix::block_diag(&[a, Matrix::zeros(1, 1)]);
    let (n, _) = identify(&AlmostAbelianPresentation::new(d)).unwrap().unwrap();
    assert_eq!(n.name, "h6");
}
