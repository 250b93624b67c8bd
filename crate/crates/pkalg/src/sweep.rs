//! The fixed rational grids used to sweep family instances.

use crate::blocks::{enumerate_types, Block, BlockType, XtAssignment};
use crate::family::FamilyInstance;
use crate::scalar::{q, qi, GaussScalar, Scalar};

/// Grid for `a`, `c₁`, `c₂` and imaginary parts `λ`.
pub fn scalar_grid() -> Vec<Scalar> {
    vec![qi(-2), qi(-1), q(-1, 2), qi(0), q(1, 2), qi(1), qi(2)]
}

/// Grid for real parts `ρ > 0` of pair blocks.
pub fn rho_grid() -> Vec<Scalar> {
    vec![q(1, 2), qi(1), qi(2)]
}

/// Grid for the values of `x ∈ X_t`.
pub fn x_grid() -> Vec<Scalar> {
    vec![q(1, 2), qi(1), qi(2)]
}

/// Every block type of real dimension at most `max_real_dim` over the grids.
pub fn block_types(max_real_dim: usize) -> Vec<BlockType> {
    let pm: Vec<GaussScalar> = scalar_grid().into_iter().map(GaussScalar::imag).collect();
    let mut pair = Vec::new();
    for r in rho_grid() {
        for l in scalar_grid() {
            pair.push(GaussScalar::new(r.clone(), l));
        }
    }
    enumerate_types(max_real_dim / 2, &pm, &pair)
}

/// Every nonzero `x ∈ X_t` with values from the grid (and the `(1, 1)` pairs).
pub fn assignments(t: &BlockType) -> Vec<XtAssignment> {
    let mut keys: Vec<(usize, i8)> = Vec::new();
    for (b, _) in t.blocks() {
        if let Block::PM { m, eps, .. } = b {
            if b.is_nilpotent() {
                keys.push((*m, *eps));
            }
        }
    }
    let mut out = vec![XtAssignment::new()];
    for (i, &(m, eps)) in keys.iter().enumerate() {
        let partner = keys[..i].contains(&(m, -eps));
        let mut next = Vec::new();
        for x in &out {
            next.push(x.clone());
            let other = x.get(m, -eps);
            if partner && !other.is_zero() {
                if other.is_one() {
                    next.push(x.clone().set(m, eps, Scalar::one()));
                }
                continue;
            }
            for v in x_grid() {
                next.push(x.clone().set(m, eps, v));
            }
        }
        out = next;
    }
    out.retain(|x| !x.is_zero() && x.validate(t).is_ok());
    out
}

/// All family instances with `t` of real dimension at most `max_real_dim`
/// and parameters from the grids.
pub fn instances(max_real_dim: usize) -> Vec<FamilyInstance> {
    let mut out = Vec::new();
    for t in block_types(max_real_dim) {
        for a in scalar_grid() {
            for eps in [1, -1] {
                out.push(FamilyInstance::g0(t.clone(), a.clone(), eps));
            }
            out.push(FamilyInstance::g1(t.clone(), a.clone()));
            out.push(FamilyInstance::g4(t.clone(), a));
        }
        for x in assignments(&t) {
            out.push(FamilyInstance::g2(t.clone(), x.clone()));
            out.push(FamilyInstance::g3(t.clone(), x));
        }
        out.push(FamilyInstance::g5(t.clone()));
        out.push(FamilyInstance::g6(t));
    }
    out
}
