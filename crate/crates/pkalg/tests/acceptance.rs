//! Acceptance criteria 1–11, one PASS/FAIL line each. Runs without the
//! libtest harness so every line is printed even when a criterion fails.

use std::collections::BTreeMap;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use pkalg::blocks::{cayley_unitary, complex_form, decompose, enumerate_types, realize};
use pkalg::catalog::{catalog_json, Case};
use pkalg::curvature::{closed_form, curvature, flat_complete, levi_civita};
use pkalg::einstein::{classify_6d_extensions, e_matrix, einstein_extend, solve_extension_derivations, ExtensionFamily};
use pkalg::family::{build_family, conjugate_directly, family_jordan_type, stabilizer_transform, FamilyInstance, IsotropicShape, StabilizerElement};
use pkalg::jordan::{admits_complex, admits_pk, admits_symplectic, cs_not_pk, jordan_type, JBlock, JordanType};
use pkalg::matrix::{realify, CMatrix, Matrix};
use pkalg::named::identify;
use pkalg::pk::verify_pk;
use pkalg::scalar::{q, qi, GaussScalar, Scalar};
use pkalg::sweep;

type Outcome = Result<String, String>;

fn failures(what: &str, bad: &[String]) -> Outcome {
    let shown: Vec<&str> = bad.iter().take(5).map(String::as_str).collect();
    Err(format!("{} {what}: {}", bad.len(), shown.join("; ")))
}

/// Criteria 1, 2, 3, 4 and 6 share one pass over the sweep.
struct SweepResults {
    count: usize,
    not_pk: Vec<String>,
    closed_form: Vec<String>,
    ricci_formula: Vec<String>,
    flat: Vec<String>,
    complete: Vec<String>,
    b1: Vec<String>,
    jordan: Vec<String>,
    unimodular: usize,
    nilpotent: usize,
}

fn run_sweep() -> SweepResults {
    let all = sweep::instances(4);
    let mut r = SweepResults {
        count: all.len(),
        not_pk: vec![],
        closed_form: vec![],
        ricci_formula: vec![],
        flat: vec![],
        complete: vec![],
        b1: vec![],
        jordan: vec![],
        unimodular: 0,
        nilpotent: 0,
    };
    for f in &all {
        let name = f.to_string();
        let (s, p) = build_family(f).expect("sweep instance builds");
        let l = &s.algebra;
        let n = s.dim();
        if !verify_pk(&s).is_pseudo_kahler() {
            r.not_pk.push(name.clone());
        }
        let c = levi_civita(l, &s.g).expect("nondegenerate");
        let k = curvature(&c, l, &s.g).expect("nondegenerate");
        match closed_form(f) {
            Ok((c0, r0, ric0)) if c == c0 && k.riemann == r0 && k.ricci == ric0 => {}
            _ => r.closed_form.push(name.clone()),
        }
        let expected = if f.is_isotropic() {
            Matrix::zeros(n, n)
        } else {
            let a2 = -(&f.a() * &f.a());
            let mut m = Matrix::zeros(n, n);
            m[(n - 2, n - 2)] = a2.clone();
            m[(n - 1, n - 1)] = a2;
            m
        };
        if k.ricci != expected {
            r.ricci_formula.push(name.clone());
        }
        if l.is_unimodular() {
            r.unimodular += 1;
            if !k.is_flat() {
                r.flat.push(name.clone());
            }
        }
        let rank = p.d.rank();
        if l.b1() != n - rank {
            r.b1.push(format!("{name}: b1 ≠ dim − rank D"));
        }
        if l.is_nilpotent() {
            r.nilpotent += 1;
            if flat_complete(&c) != Ok(true) {
                r.complete.push(name.clone());
            }
            if l.b1() < 3 {
                r.b1.push(format!("{name} (dim {n}): b1 = {}", l.b1()));
            }
        }
        match (family_jordan_type(f), jordan_type(&p.d)) {
            (Ok(a), Ok(b)) if a == b => {}
            _ => r.jordan.push(name),
        }
    }
    r
}

fn criterion_1(s: &SweepResults) -> Outcome {
    if s.count < 300 {
        return Err(format!("only {} instances", s.count));
    }
    if !s.not_pk.is_empty() {
        return failures("instances not pseudo-Kähler", &s.not_pk);
    }
    Ok(format!("{} instances, all four conditions hold", s.count))
}

fn criterion_2(s: &SweepResults) -> Outcome {
    if !s.closed_form.is_empty() {
        return failures("closed-form mismatches", &s.closed_form);
    }
    if !s.ricci_formula.is_empty() {
        return failures("Ricci formula mismatches", &s.ricci_formula);
    }
    Ok(format!("{} instances match ∇, R and Ric exactly", s.count))
}

fn criterion_3(s: &SweepResults) -> Outcome {
    if !s.flat.is_empty() {
        return failures("unimodular but not flat", &s.flat);
    }
    if !s.complete.is_empty() {
        return failures("nilpotent but not complete", &s.complete);
    }
    Ok(format!("{} unimodular flat, {} nilpotent complete", s.unimodular, s.nilpotent))
}

fn criterion_4(s: &SweepResults) -> Outcome {
    if !s.b1.is_empty() {
        return failures("b1 failures", &s.b1);
    }
    Ok(format!("{} nilpotent instances with b1 ≥ 3", s.nilpotent))
}

fn criterion_5() -> Outcome {
    let g = GaussScalar::ints;
    let pm = [g(0, 0), g(0, 1), g(0, -1)];
    let pair = [g(1, 0), g(1, 1)];
    let types: Vec<_> = enumerate_types(4, &pm, &pair).into_iter().filter(|t| t.complex_dim() > 0).collect();
    if types.len() < 200 {
        return Err(format!("only {} types", types.len()));
    }
    let mut bad = Vec::new();
    for t in &types {
        let (a, h) = complex_form(t);
        if decompose(&a, &h).as_ref() != Ok(t) {
            bad.push(t.to_string());
        }
    }
    if !bad.is_empty() {
        return failures("round-trip failures", &bad);
    }
    Ok(format!("{} block types of real dimension ≤ 8", types.len()))
}

fn criterion_6(s: &SweepResults) -> Outcome {
    if !s.jordan.is_empty() {
        return failures("Jordan type mismatches", &s.jordan);
    }
    Ok(format!("{} instances", s.count))
}

fn partitions(n: usize, max: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for first in (1..=n.min(max)).rev() {
        for mut rest in partitions(n - first, first) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

/// All Jordan types of dimension `dim` built from `blocks`.
fn types_of_dim(blocks: &[JBlock], dim: usize) -> Vec<JordanType> {
    fn go(blocks: &[JBlock], i: usize, room: usize, cur: JordanType, out: &mut Vec<JordanType>) {
        if room == 0 {
            out.push(cur);
            return;
        }
        if i == blocks.len() {
            return;
        }
        let d = blocks[i].dim();
        let mut k = 0;
        while k * d <= room {
            go(blocks, i + 1, room - k * d, cur.clone().with(blocks[i].clone(), k), out);
            k += 1;
        }
    }
    let mut out = Vec::new();
    go(blocks, 0, dim, JordanType::new(), &mut out);
    out
}

fn criterion_7() -> Outcome {
    let mut bad = Vec::new();
    let mut nilpotent = 0;
    for n in (1..=7).step_by(2) {
        for p in partitions(n, n) {
            let j = JordanType::from_blocks(p.iter().map(|&s| (JBlock::j(s - 1, Scalar::zero()), 1)));
            nilpotent += 1;
            if admits_complex(&j) && !admits_pk(&j) {
                bad.push(format!("nilpotent {j}: complex without pk"));
            }
        }
    }
    let mut blocks = Vec::new();
    for m in 0..5 {
        for a in [qi(0), qi(1), qi(-1)] {
            blocks.push(JBlock::j(m, a));
        }
    }
    for m in 0..2 {
        blocks.push(JBlock::c(m, GaussScalar::ints(0, 1)));
    }
    let mut general = 0;
    let mut hits = 0;
    for n in (1..=5).step_by(2) {
        for j in types_of_dim(&blocks, n) {
            general += 1;
            let lhs = cs_not_pk(&j);
            hits += lhs as usize;
            if lhs != (admits_complex(&j) && admits_symplectic(&j) && !admits_pk(&j)) {
                bad.push(format!("{j}: cs_not_pk disagrees"));
            }
        }
    }
    if !bad.is_empty() {
        return failures("disagreements", &bad);
    }
    Ok(format!("{nilpotent} nilpotent types, {general} types over {{0, ±1, ±i}} ({hits} cs-not-pk)"))
}

fn name_of(f: &FamilyInstance) -> Result<String, String> {
    let (_, p) = build_family(f).map_err(|e| e.to_string())?;
    match identify(&p) {
        Ok(Some((a, _))) => Ok(a.name.clone()),
        Ok(None) => Ok("none".into()),
        Err(e) => Err(e.to_string()),
    }
}

fn criterion_8() -> Outcome {
    let mut bad = Vec::new();
    let mut checked = 0;
    for f in sweep::instances(2) {
        let (s, _) = build_family(&f).expect("sweep instance builds");
        let l = &s.algebra;
        if l.is_abelian() {
            continue;
        }
        let expected = match (l.dim(), f.family) {
            (4, 0) => {
                let lambda_zero = realize(&f.t).a.is_zero();
                match (lambda_zero, f.a().is_zero()) {
                    (true, false) => "rr3,0",
                    (false, true) => "rr'3,0",
                    (false, false) => "r'4,0,delta",
                    (true, true) => unreachable!("abelian"),
                }
            }
            (4, 1) => "r4,-1,-1",
            (4, 4 | 5) => "rh3",
            (6, _) if !l.is_nilpotent() => continue,
            (6, 0) => "h6",
            (6, 2 | 3) => "h10",
            (6, 4 | 5) => "h8",
            _ => continue,
        };
        checked += 1;
        match name_of(&f) {
            Ok(n) if n == expected => {}
            other => bad.push(format!("{f}: expected {expected}, got {other:?}")),
        }
    }
    if !bad.is_empty() {
        return failures("misidentified", &bad);
    }
    if checked == 0 {
        return Err("nothing checked".into());
    }
    Ok(format!("{checked} four- and six-dimensional instances identified"))
}

/// An E-matrix family written out entry by entry: integers or `±name`.
fn printed_family(rows: &[[&str; 7]]) -> (Matrix, Vec<Matrix>) {
    let mut names: Vec<&str> = Vec::new();
    let mut base = Matrix::zeros(7, 7);
    let mut dirs: BTreeMap<&str, Matrix> = BTreeMap::new();
    for (i, row) in rows.iter().enumerate() {
        for (j, e) in row.iter().enumerate() {
            if let Ok(v) = e.parse::<i64>() {
                base[(i, j)] = qi(v);
                continue;
            }
            let (sign, name) = match e.strip_prefix('-') {
                Some(n) => (-1, n),
                None => (1, *e),
            };
            if !names.contains(&name) {
                names.push(name);
            }
            dirs.entry(name).or_insert_with(|| Matrix::zeros(7, 7))[(i, j)] = qi(sign);
        }
    }
    (base, names.iter().map(|n| dirs[n].clone()).collect())
}

fn flat(m: &Matrix) -> Vec<Scalar> {
    m.entries().to_vec()
}

fn rank_of(vs: &[Vec<Scalar>]) -> usize {
    if vs.is_empty() {
        return 0;
    }
    Matrix::from_rows(vs.to_vec()).rank()
}

/// Whether two affine families of matrices are the same affine subspace.
fn same_affine(a: &(Matrix, Vec<Matrix>), b: &(Matrix, Vec<Matrix>)) -> bool {
    let da: Vec<_> = a.1.iter().map(flat).collect();
    let db: Vec<_> = b.1.iter().map(flat).collect();
    let both: Vec<_> = da.iter().chain(&db).cloned().collect();
    let ra = rank_of(&da);
    if ra != rank_of(&db) || ra != rank_of(&both) {
        return false;
    }
    let mut with_shift = da.clone();
    with_shift.push(flat(&(&a.0 - &b.0)));
    rank_of(&with_shift) == ra
}

fn solved_e_family(fam: &ExtensionFamily) -> (Matrix, Vec<Matrix>) {
    let base = e_matrix(&fam.base);
    let dirs = fam.directions.iter().map(|d| &e_matrix(&(&fam.base + d)) - &base).collect();
    (base, dirs)
}

fn criterion_9() -> Outcome {
    let first = printed_family(&[
        ["1", "0", "0", "-z1", "d15", "0", "0"],
        ["0", "1", "z1", "0", "0", "d15", "0"],
        ["0", "0", "1", "0", "z1", "0", "0"],
        ["0", "0", "0", "1", "0", "z1", "0"],
        ["0", "0", "0", "0", "1", "0", "0"],
        ["0", "0", "0", "0", "0", "1", "0"],
        ["0", "0", "0", "0", "0", "0", "2"],
    ]);
    let second = printed_family(&[
        ["1", "0", "z2", "-z1", "d15", "0", "0"],
        ["0", "1", "z1", "z2", "0", "d15", "0"],
        ["w1", "-w2", "1", "p", "z1", "-z2", "0"],
        ["w2", "w1", "-p", "1", "z2", "z1", "0"],
        ["0", "0", "-w2", "w1", "1", "0", "0"],
        ["0", "0", "-w1", "-w2", "0", "1", "0"],
        ["0", "0", "0", "0", "0", "0", "2"],
    ]);
    let mut problems = Vec::new();
    let mut sampled = 0;
    let bases = classify_6d_extensions().map_err(|e| e.to_string())?;
    for (f, fam) in &bases {
        let printed = if f.family <= 3 { &first } else { &second };
        let Some(fam) = fam else {
            problems.push(format!("{f}: no admissible Ď, one E-shape expected"));
            continue;
        };
        if !same_affine(&solved_e_family(fam), printed) {
            let d11 = fam.coordinates.get("d11").map(|c| c[0].to_string()).unwrap_or_default();
            problems.push(format!("{f}: solved E-family (d11 = {d11}) differs from the expected shape"));
        }
        let (s, _) = build_family(f).map_err(|e| e.to_string())?;
        let k = fam.parameters.len();
        for vals in [vec![qi(0); k], vec![qi(1); k], (0..k).map(|i| q(i as i64 - 1, 2)).collect()] {
            let d = fam.instantiate(&vals).map_err(|e| e.to_string())?;
            match einstein_extend(&s, &d) {
                Ok(ext) if ext.curvature.ricci == ext.g.scale(&qi(10)) => sampled += 1,
                other => problems.push(format!("{f}: extension not Einstein: {other:?}")),
            }
        }
    }
    let mut exceptions = Vec::new();
    for f in sweep::instances(4).into_iter().filter(|f| !f.is_isotropic()) {
        let (s, _) = build_family(&f).map_err(|e| e.to_string())?;
        if s.algebra.is_abelian() {
            continue;
        }
        if let Ok(Some(_)) = solve_extension_derivations(&f) {
            exceptions.push(f.to_string());
        }
    }
    if !exceptions.is_empty() {
        problems.push(format!("{} non-abelian non-isotropic bases admit Ď: {}", exceptions.len(), exceptions.join(", ")));
    }
    if problems.is_empty() {
        Ok(format!("two E-shapes, {sampled} sampled extensions Einstein"))
    } else {
        Err(format!("{} sampled extensions Einstein; {}", sampled, problems.join("; ")))
    }
}

fn random_skew_hermitian(rng: &mut ChaCha8Rng, n: usize) -> CMatrix {
    let mut k = CMatrix::zeros(n, n);
    for i in 0..n {
        k[(i, i)] = GaussScalar::new(qi(0), q(rng.gen_range(-4..=4), rng.gen_range(1..=3)));
        for j in i + 1..n {
            let z = GaussScalar::new(q(rng.gen_range(-4..=4), rng.gen_range(1..=3)), q(rng.gen_range(-4..=4), rng.gen_range(1..=3)));
            k[(j, i)] = -z.conj();
            k[(i, j)] = z;
        }
    }
    k
}

fn random_q(rng: &mut ChaCha8Rng) -> Scalar {
    q(rng.gen_range(-5..=5), rng.gen_range(1..=4))
}

fn criterion_10() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let types: Vec<_> = sweep::block_types(4).into_iter().filter(|t| t.complex_dim() > 0).collect();
    let mut bad = Vec::new();
    let mut done = 0;
    while done < 200 {
        let t = &types[rng.gen_range(0..types.len())];
        let (_, h) = complex_form(t);
        let g_v = realize(t).g;
        let k = t.complex_dim();
        let Some(c) = cayley_unitary(&h, &random_skew_hermitian(&mut rng, k)) else { continue };
        let hinv = h.inverse().expect("nondegenerate");
        let endo = realify(&(&hinv * &random_skew_hermitian(&mut rng, k)));
        let dv = 2 * k;
        let sh = IsotropicShape {
            endo,
            v: (0..dv).map(|_| random_q(&mut rng)).collect(),
            a: random_q(&mut rng),
            c1: random_q(&mut rng),
            c2: random_q(&mut rng),
        };
        let mut x = random_q(&mut rng);
        if x.is_zero() {
            x = qi(1);
        }
        let gamma = StabilizerElement { x, y: random_q(&mut rng), u: (0..dv).map(|_| random_q(&mut rng)).collect(), c: realify(&c) };
        let rules = stabilizer_transform(&sh, &gamma, &g_v);
        let direct = conjugate_directly(&sh, &gamma, &g_v);
        if rules.is_err() || rules != direct {
            bad.push(format!("{t}"));
        }
        done += 1;
    }
    if !bad.is_empty() {
        return failures("mismatches", &bad);
    }
    Ok(format!("{done} random instances"))
}

fn criterion_11() -> Outcome {
    let dir = concat!(env!("CARGO_MANIFEST_DIR"), "/tests/golden");
    let mut bad = Vec::new();
    let mut files = 0;
    for (dim, case, tag) in [(6, Case::Iso, "iso"), (6, Case::Noniso, "noniso"), (8, Case::Iso, "iso"), (8, Case::Noniso, "noniso")] {
        let golden = std::fs::read_to_string(format!("{dir}/catalog_{dim}_{tag}.json")).map_err(|e| e.to_string())?;
        let ours = catalog_json(dim, case).map_err(|e| e.to_string())?;
        files += 1;
        if ours == golden {
            continue;
        }
        let a: serde_json::Value = serde_json::from_str(&ours).map_err(|e| e.to_string())?;
        let b: serde_json::Value = serde_json::from_str(&golden).map_err(|e| e.to_string())?;
        let keys: Vec<String> = match (a["entries"].as_array(), b["entries"].as_array()) {
            (Some(x), Some(y)) if x.len() == y.len() => {
                x.iter().zip(y).filter(|(p, q)| p != q).map(|(p, _)| p["key"].as_str().unwrap_or("?").to_string()).collect()
            }
            _ => vec!["entry lists differ".into()],
        };
        bad.push(format!("catalog_{dim}_{tag}.json: {}", keys.join(", ")));
    }
    if !bad.is_empty() {
        return failures("files differ", &bad);
    }
    Ok(format!("{files} files byte-match"))
}

fn main() {
    let t0 = Instant::now();
    let sweep = run_sweep();
    let results: Vec<(usize, &str, Outcome)> = vec![
        (1, "axiom sweep", criterion_1(&sweep)),
        (2, "curvature closed forms", criterion_2(&sweep)),
        (3, "unimodular flat, nilpotent complete", criterion_3(&sweep)),
        (4, "first Betti number", criterion_4(&sweep)),
        (5, "block round trip", criterion_5()),
        (6, "Jordan cross-validation", criterion_6(&sweep)),
        (7, "existence oracle", criterion_7()),
        (8, "named algebras", criterion_8()),
        (9, "Einstein extensions", criterion_9()),
        (10, "stabilizer rules", criterion_10()),
        (11, "catalog golden files", criterion_11()),
    ];
    let mut failed = 0;
    for (n, name, r) in &results {
        match r {
            Ok(detail) => println!("criterion {n:>2} PASS  {name}: {detail}"),
            Err(detail) => {
                failed += 1;
                println!("criterion {n:>2} FAIL  {name}: {detail}");
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed in {:.1?}", results.len() - failed, t0.elapsed());
    if failed > 0 {
        std::process::exit(1);
    }
}
