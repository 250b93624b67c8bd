//! Blocks of skew-Hermitian endomorphisms of indefinite Hermitian spaces:
//! construction, realization, signature, the reflection `r`, nilpotent
//! representatives `v(x)` and decomposition.

use std::cmp::Reverse;
use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::{hermitian_inertia, in_span, realify, span_basis, standard_j, CMatrix, Matrix};
use crate::scalar::{GaussScalar, Scalar};
use crate::spectrum::{gaussian_spectrum_complex, jordan_partition};

/// `Δ_m^ε(ζ)` with `ζ` imaginary, or `Δ_m(ζ, −ζ̄)` with `Re ζ > 0`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Block {
    PM { m: usize, eps: i8, zeta: GaussScalar },
    Pair { m: usize, zeta: GaussScalar },
}

impl Block {
    pub fn pm(m: usize, eps: i8, zeta: GaussScalar) -> Result<Self> {
        if eps != 1 && eps != -1 {
            return Err(Error::InvalidAssignment(format!("sign must be ±1, got {eps}")));
        }
        if !zeta.re.is_zero() {
            return Err(Error::Unsupported(format!("Δ^±_m(ζ) needs imaginary ζ, got {zeta}")));
        }
        Ok(Block::PM { m, eps, zeta })
    }

    /// Pair block; `ζ` is replaced by `−ζ̄` when `Re ζ < 0`.
    pub fn pair(m: usize, zeta: GaussScalar) -> Result<Self> {
        if zeta.re.is_zero() {
            return Err(Error::Unsupported(format!("Δ_m(ζ,−ζ̄) needs Re ζ ≠ 0, got {zeta}")));
        }
        let zeta = if zeta.re.is_negative() { -zeta.conj() } else { zeta };
        Ok(Block::Pair { m, zeta })
    }

    /// `Δ_m^ε(0)`.
    pub fn nil(m: usize, eps: i8) -> Self {
        Block::pm(m, eps, GaussScalar::zero()).expect("valid sign")
    }

    /// `Δ_m^ε(iλ)`.
    pub fn imag(m: usize, eps: i8, lambda: Scalar) -> Self {
        Block::pm(m, eps, GaussScalar::imag(lambda)).expect("valid sign")
    }

    pub fn m(&self) -> usize {
        match self {
            Block::PM { m, .. } | Block::Pair { m, .. } => *m,
        }
    }

    pub fn zeta(&self) -> &GaussScalar {
        match self {
            Block::PM { zeta, .. } | Block::Pair { zeta, .. } => zeta,
        }
    }

    pub fn is_nilpotent(&self) -> bool {
        matches!(self, Block::PM { zeta, .. } if zeta.is_zero())
    }

    /// Complex dimension of `V(Δ)`.
    pub fn complex_dim(&self) -> usize {
        match self {
            Block::PM { m, .. } => m + 1,
            Block::Pair { m, .. } => 2 * (m + 1),
        }
    }

    pub fn real_dim(&self) -> usize {
        2 * self.complex_dim()
    }

    pub fn signature(&self) -> (usize, usize) {
        match self {
            Block::PM { m, eps, .. } => {
                if m % 2 == 1 {
                    let k = (m + 1) / 2;
                    (k, k)
                } else {
                    let k = m / 2;
                    let sign = if k % 2 == 0 { 1 } else { -1 };
                    if sign == *eps {
                        (k + 1, k)
                    } else {
                        (k, k + 1)
                    }
                }
            }
            Block::Pair { m, .. } => (m + 1, m + 1),
        }
    }

    /// The block `r(Δ)` representing `−A(Δ)`.
    pub fn reflect(&self) -> Block {
        match self {
            Block::PM { m, eps, zeta } => {
                let eps = if m % 2 == 0 { *eps } else { -eps };
                Block::PM { m: *m, eps, zeta: -zeta }
            }
            Block::Pair { m, zeta } => Block::Pair { m: *m, zeta: zeta.conj() },
        }
    }

    /// Complex endomorphism and Hermitian form of the block.
    pub fn complex_form(&self) -> (CMatrix, CMatrix) {
        match self {
            Block::PM { m, eps, zeta } => {
                let h = hermitian_form_matrix(*m).scale(&GaussScalar::real(Scalar::int(*eps as i64)));
                (jordan_block(zeta, *m), h)
            }
            Block::Pair { m, zeta } => {
                let a = CMatrix::block_diag(&[jordan_block(zeta, *m), jordan_block(&-zeta.conj(), *m)]);
                (a, hermitian_form_matrix(2 * m + 1))
            }
        }
    }

    /// The block of `k·A(Δ)` for real `k ≠ 0`.
    pub fn scaled(&self, k: &Scalar) -> Block {
        let b = match self {
            Block::PM { m, eps, zeta } => Block::PM { m: *m, eps: *eps, zeta: zeta.scale(&k.abs()) },
            Block::Pair { m, zeta } => Block::Pair { m: *m, zeta: zeta.scale(&k.abs()) },
        };
        if k.is_negative() {
            b.reflect()
        } else {
            b
        }
    }

    fn sort_key(&self) -> (u8, Reverse<usize>, Reverse<i8>, GaussScalar) {
        match self {
            Block::Pair { m, zeta } => (0, Reverse(*m), Reverse(0), zeta.clone()),
            Block::PM { m, eps, zeta } => (1, Reverse(*m), Reverse(*eps), zeta.clone()),
        }
    }
}

impl PartialOrd for Block {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

/// Pair blocks first, then larger `m`, then `ε = +1`, then `ζ`.
impl Ord for Block {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.sort_key().cmp(&other.sort_key())
    }
}

impl fmt::Display for Block {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Block::PM { m, eps, zeta } => {
                write!(f, "Δ_{m}^{}({zeta})", if *eps > 0 { "+" } else { "-" })
            }
            Block::Pair { m, zeta } => write!(f, "Δ_{m}({zeta})"),
        }
    }
}

/// `h_m`: antidiagonal with `h[k][m−k] = (−1)^k` for even `m` and
/// `i(−1)^k` for odd `m`.
pub fn hermitian_form_matrix(m: usize) -> CMatrix {
    let mut h = CMatrix::zeros(m + 1, m + 1);
    for k in 0..=m {
        let s = if k % 2 == 0 { 1 } else { -1 };
        h[(k, m - k)] = if m % 2 == 0 { GaussScalar::ints(s, 0) } else { GaussScalar::ints(0, s) };
    }
    h
}

/// Upper Jordan block `A_{ζ,m}` of size `m + 1`.
pub fn jordan_block(zeta: &GaussScalar, m: usize) -> CMatrix {
    CMatrix::from_fn(m + 1, m + 1, |i, j| {
        if i == j {
            zeta.clone()
        } else if j == i + 1 {
            GaussScalar::one()
        } else {
            GaussScalar::zero()
        }
    })
}

/// An element of the free abelian semigroup on blocks. The stored order is
/// the order of assembly in [`realize`]; equality ignores it.
#[derive(Clone, Debug, Default)]
pub struct BlockType {
    blocks: Vec<(Block, usize)>,
}

impl BlockType {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_blocks(blocks: impl IntoIterator<Item = (Block, usize)>) -> Self {
        let mut t = Self::new();
        for (b, k) in blocks {
            t.push(b, k);
        }
        t
    }

    pub fn single(b: Block) -> Self {
        Self::from_blocks([(b, 1)])
    }

    /// Appends `k` copies, merging with an existing entry for the same block.
    pub fn push(&mut self, b: Block, k: usize) {
        if k == 0 {
            return;
        }
        if let Some(e) = self.blocks.iter_mut().find(|(x, _)| *x == b) {
            e.1 += k;
        } else {
            self.blocks.push((b, k));
        }
    }

    pub fn with(mut self, b: Block, k: usize) -> Self {
        self.push(b, k);
        self
    }

    pub fn blocks(&self) -> &[(Block, usize)] {
        &self.blocks
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    pub fn mult(&self, b: &Block) -> usize {
        self.blocks.iter().find(|(x, _)| x == b).map_or(0, |e| e.1)
    }

    /// Same multiset, sorted by the canonical block order.
    pub fn canonical(&self) -> BlockType {
        let mut blocks = self.blocks.clone();
        blocks.sort_by(|a, b| a.0.cmp(&b.0));
        BlockType { blocks }
    }

    pub fn complex_dim(&self) -> usize {
        self.blocks.iter().map(|(b, k)| b.complex_dim() * k).sum()
    }

    pub fn real_dim(&self) -> usize {
        2 * self.complex_dim()
    }

    pub fn contains_nilpotent(&self) -> bool {
        self.blocks.iter().any(|(b, _)| b.is_nilpotent())
    }

    /// Blocks laid out copy by copy, in assembly order.
    pub fn expanded(&self) -> impl Iterator<Item = &Block> {
        self.blocks.iter().flat_map(|(b, k)| std::iter::repeat(b).take(*k))
    }

    pub fn plus(&self, other: &BlockType) -> BlockType {
        let mut t = self.clone();
        for (b, k) in &other.blocks {
            t.push(b.clone(), *k);
        }
        t
    }

    /// Canonically sorted `(block, multiplicity)` list, usable as an ordering key.
    pub fn key(&self) -> Vec<(Block, usize)> {
        self.canonical().blocks
    }

    /// `A(t) = 0`, i.e. only copies of `Δ_0^±(0)`.
    pub fn is_zero_endomorphism(&self) -> bool {
        self.blocks.iter().all(|(b, _)| b.is_nilpotent() && b.m() == 0)
    }

    /// Only blocks with `ζ = 0`.
    pub fn is_nilpotent(&self) -> bool {
        self.blocks.iter().all(|(b, _)| b.is_nilpotent())
    }

    /// Largest `|ζ|²` over the blocks.
    pub fn max_norm_sq(&self) -> Scalar {
        self.blocks.iter().map(|(b, _)| b.zeta().norm_sq()).max().unwrap_or_else(Scalar::zero)
    }

    /// Largest of `|Re ζ|`, `|Im ζ|` over the blocks.
    pub fn max_eigen_coordinate(&self) -> Scalar {
        self.blocks
            .iter()
            .flat_map(|(b, _)| [b.zeta().re.abs(), b.zeta().im.abs()])
            .max()
            .unwrap_or_else(Scalar::zero)
    }

    /// The type of `k·A(t)`.
    pub fn scaled(&self, k: &Scalar) -> BlockType {
        self.map_blocks(|b| b.scaled(k))
    }

    /// Applies `f` to every block, keeping the order.
    pub fn map_blocks(&self, f: impl Fn(&Block) -> Block) -> BlockType {
        BlockType::from_blocks(self.blocks.iter().map(|(b, k)| (f(b), *k)))
    }
}

impl PartialEq for BlockType {
    fn eq(&self, other: &Self) -> bool {
        self.canonical().blocks == other.canonical().blocks
    }
}

impl Eq for BlockType {}

impl fmt::Display for BlockType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.blocks.is_empty() {
            return write!(f, "0");
        }
        for (i, (b, k)) in self.blocks.iter().enumerate() {
            if i > 0 {
                write!(f, "+")?;
            }
            if *k > 1 {
                write!(f, "{k}")?;
            }
            write!(f, "{b}")?;
        }
        Ok(())
    }
}

#[derive(Serialize, Deserialize)]
struct BlockJson {
    kind: String,
    m: usize,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    eps: Option<i8>,
    zeta: GaussScalar,
    mult: usize,
}

impl Serialize for BlockType {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let v: Vec<BlockJson> = self
            .blocks
            .iter()
            .map(|(b, mult)| match b {
                Block::PM { m, eps, zeta } => {
                    BlockJson { kind: "pm".into(), m: *m, eps: Some(*eps), zeta: zeta.clone(), mult: *mult }
                }
                Block::Pair { m, zeta } => {
                    BlockJson { kind: "pair".into(), m: *m, eps: None, zeta: zeta.clone(), mult: *mult }
                }
            })
            .collect();
        v.serialize(s)
    }
}

impl<'de> Deserialize<'de> for BlockType {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let v = Vec::<BlockJson>::deserialize(d)?;
        let mut t = BlockType::new();
        for b in v {
            if b.mult == 0 {
                return Err(D::Error::custom("block multiplicity must be positive"));
            }
            let block = match (b.kind.as_str(), b.eps) {
                ("pm", Some(eps)) => Block::pm(b.m, eps, b.zeta),
                ("pair", None) => Block::pair(b.m, b.zeta),
                _ => return Err(D::Error::custom("expected kind pm with eps or kind pair without eps")),
            }
            .map_err(D::Error::custom)?;
            t.push(block, b.mult);
        }
        Ok(t)
    }
}

/// `V(t)` as a real space with `A(t)`, `J(t)` and `g(t) = Re h(t)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Realization {
    pub dim_v: usize,
    pub a: Matrix,
    pub j: Matrix,
    pub g: Matrix,
}

/// Complex `A(t)` and `h(t)` assembled block-diagonally in the stored order.
pub fn complex_form(t: &BlockType) -> (CMatrix, CMatrix) {
    let (mut az, mut hz) = (Vec::new(), Vec::new());
    for b in t.expanded() {
        let (a, h) = b.complex_form();
        az.push(a);
        hz.push(h);
    }
    (CMatrix::block_diag(&az), CMatrix::block_diag(&hz))
}

/// Real form of `t`. The complex coordinate `z_k` becomes the real pair
/// `(Re z_k, −Im z_k)`, so that `J(t)` is the standard `J e_{2k−1} = e_{2k}`.
pub fn realize(t: &BlockType) -> Realization {
    let (a, h) = complex_form(t);
    let n = t.complex_dim();
    Realization { dim_v: 2 * n, a: realify(&a), j: standard_j(n), g: realify(&h) }
}

pub fn signature(t: &BlockType) -> (usize, usize) {
    t.blocks.iter().fold((0, 0), |(p, q), (b, k)| {
        let (bp, bq) = b.signature();
        (p + k * bp, q + k * bq)
    })
}

pub fn reflect(t: &BlockType) -> BlockType {
    t.map_blocks(Block::reflect)
}

/// Values `x(Δ_m^ε(0)) ≥ 0` keyed by `(m, ε)`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct XtAssignment {
    values: BTreeMap<(usize, i8), Scalar>,
}

impl XtAssignment {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn set(mut self, m: usize, eps: i8, x: Scalar) -> Self {
        if x.is_zero() {
            self.values.remove(&(m, eps));
        } else {
            self.values.insert((m, eps), x);
        }
        self
    }

    pub fn get(&self, m: usize, eps: i8) -> Scalar {
        self.values.get(&(m, eps)).cloned().unwrap_or_else(Scalar::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.values.values().all(Scalar::is_zero)
    }

    pub fn entries(&self) -> impl Iterator<Item = ((usize, i8), &Scalar)> {
        self.values.iter().map(|(k, v)| (*k, v))
    }

    /// Multiplies every value by `k`, except the entries of a `(1, 1)` pair.
    pub fn scaled(&self, k: &Scalar) -> XtAssignment {
        let mut out = XtAssignment::new();
        for (&(m, eps), x) in &self.values {
            let paired = self.get(m, -eps).is_one() && x.is_one();
            out = out.set(m, eps, if paired { x.clone() } else { x * k });
        }
        out
    }

    /// Checks membership in `X_t`.
    pub fn validate(&self, t: &BlockType) -> Result<()> {
        for (&(m, eps), x) in &self.values {
            if x.is_negative() {
                return Err(Error::InvalidAssignment(format!("x(Δ_{m}^{eps}(0)) = {x} is negative")));
            }
            if t.mult(&Block::nil(m, eps)) == 0 {
                return Err(Error::InvalidAssignment(format!("Δ_{m}^{eps}(0) does not occur in the type")));
            }
            let other = self.get(m, -eps);
            if !other.is_zero() && !(x.is_one() && other.is_one()) {
                return Err(Error::InvalidAssignment(format!(
                    "x(Δ_{m}^+(0)) and x(Δ_{m}^-(0)) must not both be nonzero unless both equal 1"
                )));
            }
        }
        Ok(())
    }
}

impl Serialize for XtAssignment {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let map: BTreeMap<String, &Scalar> = self
            .values
            .iter()
            .map(|(&(m, eps), x)| (format!("pm_{m}_{}", if eps > 0 { "+" } else { "-" }), x))
            .collect();
        map.serialize(s)
    }
}

impl<'de> Deserialize<'de> for XtAssignment {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let map = BTreeMap::<String, Scalar>::deserialize(d)?;
        let mut x = XtAssignment::new();
        for (k, v) in map {
            let bad = || D::Error::custom(format!("bad key {k:?}, expected pm_<m>_<+|->"));
            let rest = k.strip_prefix("pm_").ok_or_else(bad)?;
            let (m, sign) = rest.rsplit_once('_').ok_or_else(bad)?;
            let m: usize = m.parse().map_err(|_| bad())?;
            let eps = match sign {
                "+" => 1,
                "-" => -1,
                _ => return Err(bad()),
            };
            x = x.set(m, eps, v);
        }
        Ok(x)
    }
}

/// Real offset of the first copy of `b` in `V(t)`.
fn first_copy_offset(t: &BlockType, b: &Block) -> Option<usize> {
    let mut off = 0;
    for c in t.expanded() {
        if c == b {
            return Some(off);
        }
        off += c.real_dim();
    }
    None
}

/// `v(Δ)`: the last standard basis vector of the first copy of `V(Δ)`.
pub fn nilpotent_vector(t: &BlockType, m: usize, eps: i8) -> Result<Vec<Scalar>> {
    let b = Block::nil(m, eps);
    let off = first_copy_offset(t, &b)
        .ok_or_else(|| Error::InvalidAssignment(format!("{b} does not occur in the type")))?;
    let mut v = vec![Scalar::zero(); t.real_dim()];
    v[off + 2 * m] = Scalar::one();
    Ok(v)
}

/// `v(x) = Σ x(Δ) v(Δ)`.
pub fn v_of_x(t: &BlockType, x: &XtAssignment) -> Result<Vec<Scalar>> {
    x.validate(t)?;
    let mut v = vec![Scalar::zero(); t.real_dim()];
    for ((m, eps), xv) in x.entries() {
        let e = nilpotent_vector(t, m, eps)?;
        for (vi, ei) in v.iter_mut().zip(e) {
            if !ei.is_zero() {
                *vi += &(xv * &ei);
            }
        }
    }
    Ok(v)
}

/// Block type of `(A, h)` with `h` Hermitian nondegenerate and `A`
/// skew-Hermitian. Counts of `Δ_m^±(ζ)` come from the inertia of
/// `F(x, y) = h(N^m x, y) / h_m[0][m]`, `N = A − ζ`, on
/// `ker N^{m+1} / (ker N^m + N ker N^{m+2})`.
pub fn decompose(a: &CMatrix, h: &CMatrix) -> Result<BlockType> {
    let n = h.rows();
    if !h.is_square() || !a.is_square() || a.rows() != n {
        return Err(Error::Dimension("decompose needs square matrices of equal size".into()));
    }
    if !h.is_hermitian() || h.det().is_zero() {
        return Err(Error::DegenerateForm);
    }
    if !(&(&a.adjoint() * h) + &(h * a)).is_zero() {
        return Err(Error::NotSkewHermitian);
    }
    let mut t = BlockType::new();
    for (z, _) in gaussian_spectrum_complex(a)? {
        if z.re.is_positive() {
            for size in jordan_partition(a, &z) {
                t.push(Block::Pair { m: size - 1, zeta: z.clone() }, 1);
            }
        } else if z.re.is_zero() {
            for (m, plus, minus) in imaginary_counts(a, h, &z)? {
                t.push(Block::PM { m, eps: 1, zeta: z.clone() }, plus);
                t.push(Block::PM { m, eps: -1, zeta: z.clone() }, minus);
            }
        }
    }
    if t.complex_dim() != n {
        return Err(Error::Unsupported("block extraction did not exhaust the space".into()));
    }
    Ok(t.canonical())
}

/// Real-form entry point: `J` must be the standard complex structure.
pub fn decompose_real(a: &Matrix, g: &Matrix) -> Result<BlockType> {
    let ac = crate::matrix::complexify(a).ok_or_else(|| Error::NotStandardBasis("A does not commute with J".into()))?;
    let hc = crate::matrix::complexify(g).ok_or_else(|| Error::NotStandardBasis("g is not J-invariant".into()))?;
    decompose(&ac, &hc)
}

fn imaginary_counts(a: &CMatrix, h: &CMatrix, z: &GaussScalar) -> Result<Vec<(usize, usize, usize)>> {
    let dim = a.rows();
    let mut nm = a.clone();
    for i in 0..dim {
        nm[(i, i)] = &nm[(i, i)] - z;
    }
    // kernels[j] = ker N^j
    let mut kernels: Vec<Vec<Vec<GaussScalar>>> = vec![Vec::new()];
    let mut powers = vec![CMatrix::identity(dim)];
    loop {
        let p = &nm * powers.last().unwrap();
        let k = p.kernel();
        let done = k.len() == kernels.last().unwrap().len();
        powers.push(p);
        kernels.push(k);
        if done {
            break;
        }
    }
    let top = kernels.len() - 1;
    let mut out = Vec::new();
    for m in 0..top.saturating_sub(1) {
        let mut sub = kernels[m].clone();
        if m + 2 <= top {
            sub.extend(kernels[m + 2].iter().map(|v| nm.mul_vec(v)));
        }
        let mut sub = span_basis(&sub);
        let mut gens = Vec::new();
        for v in &kernels[m + 1] {
            if !in_span(&sub, v) {
                sub.push(v.clone());
                sub = span_basis(&sub);
                gens.push(v.clone());
            }
        }
        if gens.is_empty() {
            continue;
        }
        let c = hermitian_form_matrix(m)[(0, m)].clone();
        let c_inv = c.inv();
        let nmv: Vec<Vec<GaussScalar>> = gens.iter().map(|v| powers[m].mul_vec(v)).collect();
        let hg: Vec<Vec<GaussScalar>> = gens.iter().map(|v| h.mul_vec(v)).collect();
        let gram = CMatrix::from_fn(gens.len(), gens.len(), |i, j| {
            let s = nmv[i].iter().zip(&hg[j]).fold(GaussScalar::zero(), |acc, (x, y)| acc + x.conj() * y.clone());
            s * c_inv.clone()
        });
        let (p, q, zeros) = hermitian_inertia(&gram);
        if zeros != 0 || !gram.is_hermitian() {
            return Err(Error::DegenerateForm);
        }
        out.push((m, p, q));
    }
    Ok(out)
}

/// Cayley transform `(I − h⁻¹S)⁻¹(I + h⁻¹S)` of a skew-Hermitian `S`. The
/// result preserves `h` whenever it is defined.
pub fn cayley_unitary(h: &CMatrix, s: &CMatrix) -> Option<CMatrix> {
    let k = &h.inverse()? * s;
    let id = CMatrix::identity(h.rows());
    Some(&(&id - &k).inverse()? * &(&id + &k))
}

/// All block types of complex dimension at most `max` whose `Δ^±` blocks
/// use eigenvalues from `pm_zetas` and pair blocks from `pair_zetas`.
pub fn enumerate_types(max: usize, pm_zetas: &[GaussScalar], pair_zetas: &[GaussScalar]) -> Vec<BlockType> {
    let mut blocks = Vec::new();
    for m in 0..max {
        for z in pm_zetas {
            blocks.push(Block::pm(m, 1, z.clone()).expect("grid value has the right shape"));
            blocks.push(Block::pm(m, -1, z.clone()).expect("grid value has the right shape"));
        }
        for z in pair_zetas {
            blocks.push(Block::pair(m, z.clone()).expect("grid value has the right shape"));
        }
    }
    blocks.retain(|b| b.complex_dim() <= max);
    fn go(blocks: &[Block], i: usize, room: usize, cur: BlockType, out: &mut Vec<BlockType>) {
        if i == blocks.len() {
            out.push(cur);
            return;
        }
        let d = blocks[i].complex_dim();
        let mut k = 0;
        while k * d <= room {
            go(blocks, i + 1, room - k * d, cur.clone().with(blocks[i].clone(), k), out);
            k += 1;
        }
    }
    let mut out = Vec::new();
    go(&blocks, 0, max, BlockType::new(), &mut out);
    out
}
