//! Dense exact matrices and the linear algebra built on row reduction.

use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Neg, Sub};

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::scalar::{Field, GaussScalar, Scalar};

/// Dense row-major matrix over a field. `Matrix` alone means rational entries.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Matrix<T = Scalar> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

/// Matrix with Gaussian-rational entries.
pub type CMatrix = Matrix<GaussScalar>;

impl<T: Field> Matrix<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![T::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = T::one();
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Matrix { rows, cols, data }
    }

    /// Builds from a list of rows. Panics if rows have different lengths.
    pub fn from_rows(rows: Vec<Vec<T>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        Matrix { rows: r, cols: c, data: rows.into_iter().flatten().collect() }
    }

    /// A matrix whose columns are the given vectors of length `n`.
    pub fn from_columns(n: usize, cols: &[Vec<T>]) -> Self {
        Self::from_fn(n, cols.len(), |i, j| cols[j][i].clone())
    }

    pub fn diagonal(d: &[T]) -> Self {
        let mut m = Self::zeros(d.len(), d.len());
        for (i, x) in d.iter().enumerate() {
            m[(i, i)] = x.clone();
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn row(&self, i: usize) -> Vec<T> {
        self.data[i * self.cols..(i + 1) * self.cols].to_vec()
    }

    pub fn column(&self, j: usize) -> Vec<T> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<T>> {
        (0..self.rows).map(|i| self.row(i)).collect()
    }

    pub fn entries(&self) -> &[T] {
        &self.data
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(T::is_zero)
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].clone())
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    pub fn conj(&self) -> Self {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(T::conj).collect() }
    }

    pub fn scale(&self, s: &T) -> Self {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|x| x.mul_ref(s)).collect() }
    }

    pub fn map<U: Field>(&self, f: impl Fn(&T) -> U) -> Matrix<U> {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(f).collect() }
    }

    pub fn trace(&self) -> T {
        assert!(self.is_square());
        let mut t = T::zero();
        for i in 0..self.rows {
            t += &self[(i, i)];
        }
        t
    }

    pub fn mul_vec(&self, v: &[T]) -> Vec<T> {
        assert_eq!(v.len(), self.cols, "vector length");
        (0..self.rows)
            .map(|i| {
                let mut s = T::zero();
                for (j, x) in v.iter().enumerate() {
                    let a = &self[(i, j)];
                    if !a.is_zero() && !x.is_zero() {
                        s += &a.mul_ref(x);
                    }
                }
                s
            })
            .collect()
    }

    /// Row vector times matrix.
    pub fn vec_mul(&self, v: &[T]) -> Vec<T> {
        assert_eq!(v.len(), self.rows, "vector length");
        (0..self.cols)
            .map(|j| {
                let mut s = T::zero();
                for (i, x) in v.iter().enumerate() {
                    let a = &self[(i, j)];
                    if !a.is_zero() && !x.is_zero() {
                        s += &x.mul_ref(a);
                    }
                }
                s
            })
            .collect()
    }

    pub fn pow(&self, k: u32) -> Self {
        assert!(self.is_square());
        let mut r = Self::identity(self.rows);
        for _ in 0..k {
            r = &r * self;
        }
        r
    }

    pub fn commutator(&self, o: &Self) -> Self {
        &(self * o) - &(o * self)
    }

    pub fn submatrix(&self, r0: usize, r1: usize, c0: usize, c1: usize) -> Self {
        Self::from_fn(r1 - r0, c1 - c0, |i, j| self[(r0 + i, c0 + j)].clone())
    }

    pub fn set_block(&mut self, r0: usize, c0: usize, b: &Self) {
        for i in 0..b.rows {
            for j in 0..b.cols {
                self[(r0 + i, c0 + j)] = b[(i, j)].clone();
            }
        }
    }

    pub fn block_diag(blocks: &[Self]) -> Self {
        let r: usize = blocks.iter().map(|b| b.rows).sum();
        let c: usize = blocks.iter().map(|b| b.cols).sum();
        let mut m = Self::zeros(r, c);
        let (mut i, mut j) = (0, 0);
        for b in blocks {
            m.set_block(i, j, b);
            i += b.rows;
            j += b.cols;
        }
        m
    }

    /// Reduced row echelon form and the pivot columns.
    pub fn rref(&self) -> (Self, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(p) = (r..m.rows).find(|&i| !m[(i, c)].is_zero()) else {
                continue;
            };
            m.swap_rows(r, p);
            let inv = m[(r, c)].inv();
            for j in c..m.cols {
                m[(r, j)] = m[(r, j)].mul_ref(&inv);
            }
            for i in 0..m.rows {
                if i != r && !m[(i, c)].is_zero() {
                    let f = m[(i, c)].clone();
                    for j in c..m.cols {
                        if !m[(r, j)].is_zero() {
                            let d = f.mul_ref(&m[(r, j)]);
                            m[(i, j)] -= &d;
                        }
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for j in 0..self.cols {
                self.data.swap(a * self.cols + j, b * self.cols + j);
            }
        }
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Kernel basis, returned as the rows of a reduced echelon matrix so the
    /// answer depends only on the kernel itself.
    pub fn kernel(&self) -> Vec<Vec<T>> {
        let (r, pivots) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        let raw: Vec<Vec<T>> = free
            .iter()
            .map(|&f| {
                let mut v = vec![T::zero(); self.cols];
                v[f] = T::one();
                for (k, &p) in pivots.iter().enumerate() {
                    v[p] = -r[(k, f)].clone();
                }
                v
            })
            .collect();
        span_basis(&raw)
    }

    /// `(rank, kernel basis)`.
    pub fn rank_kernel(&self) -> (usize, Vec<Vec<T>>) {
        (self.rank(), self.kernel())
    }

    pub fn inverse(&self) -> Option<Self> {
        assert!(self.is_square());
        let n = self.rows;
        let mut aug = Self::zeros(n, 2 * n);
        aug.set_block(0, 0, self);
        aug.set_block(0, n, &Self::identity(n));
        let (r, pivots) = aug.rref();
        if pivots.len() < n || pivots.iter().any(|&p| p >= n) {
            return None;
        }
        Some(r.submatrix(0, n, n, 2 * n))
    }

    /// Some solution of `self · x = b`, if one exists.
    pub fn solve(&self, b: &[T]) -> Option<Vec<T>> {
        assert_eq!(b.len(), self.rows);
        let mut aug = Self::zeros(self.rows, self.cols + 1);
        aug.set_block(0, 0, self);
        for (i, x) in b.iter().enumerate() {
            aug[(i, self.cols)] = x.clone();
        }
        let (r, pivots) = aug.rref();
        if pivots.last() == Some(&self.cols) {
            return None;
        }
        let mut x = vec![T::zero(); self.cols];
        for (k, &p) in pivots.iter().enumerate() {
            x[p] = r[(k, self.cols)].clone();
        }
        Some(x)
    }

    pub fn det(&self) -> T {
        assert!(self.is_square());
        let mut m = self.clone();
        let n = self.rows;
        let mut det = T::one();
        for c in 0..n {
            let Some(p) = (c..n).find(|&i| !m[(i, c)].is_zero()) else {
                return T::zero();
            };
            if p != c {
                m.swap_rows(p, c);
                det = -det;
            }
            det = det.mul_ref(&m[(c, c)]);
            let inv = m[(c, c)].inv();
            for i in c + 1..n {
                if !m[(i, c)].is_zero() {
                    let f = m[(i, c)].mul_ref(&inv);
                    for j in c..n {
                        let d = f.mul_ref(&m[(c, j)]);
                        m[(i, j)] -= &d;
                    }
                }
            }
        }
        det
    }
}

impl Matrix<Scalar> {
    /// Integer-entry convenience constructor.
    pub fn from_ints(rows: &[&[i64]]) -> Self {
        Matrix::from_rows(rows.iter().map(|r| r.iter().map(|&x| Scalar::int(x)).collect()).collect())
    }

    pub fn to_complex(&self) -> CMatrix {
        self.map(|x| GaussScalar::real(x.clone()))
    }

    pub fn is_symmetric(&self) -> bool {
        self.is_square() && *self == self.transpose()
    }

    pub fn is_antisymmetric(&self) -> bool {
        self.is_square() && *self == -&self.transpose()
    }
}

impl CMatrix {
    pub fn is_hermitian(&self) -> bool {
        self.is_square() && *self == self.adjoint()
    }
}

/// Real form of a complex matrix: each entry `a+bi` becomes the block
/// `[[a, b], [-b, a]]`.
///
/// With this convention the standard complex structure `J e_{2k-1} = e_{2k}`
/// is the real form of `-i`, a Hermitian form `h` realises to `g = Re h`,
/// and a complex skew-Hermitian endomorphism (`A*h + hA = 0`) realises to a
/// `g`-skew, `J`-commuting real one.
pub fn realify(m: &CMatrix) -> Matrix {
    let mut r = Matrix::zeros(2 * m.rows(), 2 * m.cols());
    for i in 0..m.rows() {
        for j in 0..m.cols() {
            let z = &m[(i, j)];
            r[(2 * i, 2 * j)] = z.re.clone();
            r[(2 * i, 2 * j + 1)] = z.im.clone();
            r[(2 * i + 1, 2 * j)] = -&z.im;
            r[(2 * i + 1, 2 * j + 1)] = z.re.clone();
        }
    }
    r
}

/// Inverse of [`realify`]. Returns `None` unless every 2×2 block has the
/// shape `[[a, b], [-b, a]]`.
pub fn complexify(m: &Matrix) -> Option<CMatrix> {
    if m.rows() % 2 != 0 || m.cols() % 2 != 0 {
        return None;
    }
    let mut c = CMatrix::zeros(m.rows() / 2, m.cols() / 2);
    for i in 0..c.rows() {
        for j in 0..c.cols() {
            let a = &m[(2 * i, 2 * j)];
            let b = &m[(2 * i, 2 * j + 1)];
            if m[(2 * i + 1, 2 * j + 1)] != *a || m[(2 * i + 1, 2 * j)] != -b {
                return None;
            }
            c[(i, j)] = GaussScalar::new(a.clone(), b.clone());
        }
    }
    Some(c)
}

/// The standard complex structure on ℝ^{2k}: `J e_{2i-1} = e_{2i}`.
pub fn standard_j(k: usize) -> Matrix {
    let mut j = Matrix::zeros(2 * k, 2 * k);
    for i in 0..k {
        j[(2 * i + 1, 2 * i)] = Scalar::one();
        j[(2 * i, 2 * i + 1)] = -Scalar::one();
    }
    j
}

/// Basis of the span of `vecs`, as the nonzero rows of
/// the reduced echelon form.
pub fn span_basis<T: Field>(vecs: &[Vec<T>]) -> Vec<Vec<T>> {
    if vecs.is_empty() {
        return Vec::new();
    }
    let (r, p) = Matrix::from_rows(vecs.to_vec()).rref();
    (0..p.len()).map(|i| r.row(i)).collect()
}

/// Dimension of the span.
pub fn span_dim<T: Field>(vecs: &[Vec<T>]) -> usize {
    if vecs.is_empty() {
        return 0;
    }
    Matrix::from_rows(vecs.to_vec()).rank()
}

/// Whether `v` lies in the span of `basis`.
pub fn in_span<T: Field>(basis: &[Vec<T>], v: &[T]) -> bool {
    let mut all = basis.to_vec();
    all.push(v.to_vec());
    span_dim(&all) == span_dim(basis)
}

pub fn dot<T: Field>(a: &[T], b: &[T]) -> T {
    let mut s = T::zero();
    for (x, y) in a.iter().zip(b) {
        if !x.is_zero() && !y.is_zero() {
            s += &x.mul_ref(y);
        }
    }
    s
}

/// `x^T M y` (no conjugation).
pub fn bilinear<T: Field>(m: &Matrix<T>, x: &[T], y: &[T]) -> T {
    dot(x, &m.mul_vec(y))
}

pub fn unit<T: Field>(n: usize, k: usize) -> Vec<T> {
    let mut v = vec![T::zero(); n];
    v[k] = T::one();
    v
}

pub fn vec_add<T: Field>(a: &[T], b: &[T]) -> Vec<T> {
    a.iter().zip(b).map(|(x, y)| x.clone() + y.clone()).collect()
}

pub fn vec_sub<T: Field>(a: &[T], b: &[T]) -> Vec<T> {
    a.iter().zip(b).map(|(x, y)| x.clone() - y.clone()).collect()
}

pub fn vec_scale<T: Field>(a: &[T], s: &T) -> Vec<T> {
    a.iter().map(|x| x.mul_ref(s)).collect()
}

pub fn is_zero_vec<T: Field>(a: &[T]) -> bool {
    a.iter().all(T::is_zero)
}

/// Inertia `(positive, negative, zero)` of a real symmetric matrix, by
/// symmetric elimination. A zero diagonal with a nonzero off-diagonal entry
/// `a_ij` is handled by the congruence `e_i ↦ e_i + e_j`.
pub fn inertia(m: &Matrix) -> (usize, usize, usize) {
    assert!(m.is_square());
    let n = m.rows();
    let mut a = m.to_rows();
    let mut active: Vec<usize> = (0..n).collect();
    let (mut p, mut q) = (0, 0);
    loop {
        let pivot = active.iter().copied().find(|&i| !a[i][i].is_zero());
        let pivot = match pivot {
            Some(i) => i,
            None => {
                let pair = active
                    .iter()
                    .flat_map(|&i| active.iter().map(move |&j| (i, j)))
                    .find(|&(i, j)| i != j && !a[i][j].is_zero());
                let Some((i, j)) = pair else { break };
                for k in 0..n {
                    let v = a[j][k].clone();
                    a[i][k] += &v;
                }
                for k in 0..n {
                    let v = a[k][j].clone();
                    a[k][i] += &v;
                }
                i
            }
        };
        let d = a[pivot][pivot].clone();
        if d.is_positive() {
            p += 1;
        } else {
            q += 1;
        }
        active.retain(|&k| k != pivot);
        for &k in &active {
            let f = &a[k][pivot] / &d;
            if f.is_zero() {
                continue;
            }
            for &l in &active {
                let v = &f * &a[pivot][l];
                a[k][l] -= &v;
            }
        }
    }
    (p, q, n - p - q)
}

/// Inertia of a Hermitian matrix over ℚ(i), read off its real form.
pub fn hermitian_inertia(h: &CMatrix) -> (usize, usize, usize) {
    let (p, q, z) = inertia(&realify(h));
    (p / 2, q / 2, z / 2)
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct MatrixJson<T> {
    rows: usize,
    cols: usize,
    entries: Vec<Vec<T>>,
}

/// `{"rows": r, "cols": c, "entries": [[...], ...]}` with string entries.
impl<T: Field + Serialize> Serialize for Matrix<T> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        MatrixJson { rows: self.rows, cols: self.cols, entries: self.to_rows() }.serialize(s)
    }
}

impl<'de, T: Field + Deserialize<'de>> Deserialize<'de> for Matrix<T> {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let m = MatrixJson::<T>::deserialize(d)?;
        if m.entries.len() != m.rows || m.entries.iter().any(|r| r.len() != m.cols) {
            return Err(D::Error::custom(format!("entries do not form a {}×{} matrix", m.rows, m.cols)));
        }
        Ok(Matrix { rows: m.rows, cols: m.cols, data: m.entries.into_iter().flatten().collect() })
    }
}

impl<T> Index<(usize, usize)> for Matrix<T> {
    type Output = T;
    fn index(&self, (i, j): (usize, usize)) -> &T {
        assert!(i < self.rows && j < self.cols, "index ({i},{j}) out of range");
        &self.data[i * self.cols + j]
    }
}

impl<T> IndexMut<(usize, usize)> for Matrix<T> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut T {
        assert!(i < self.rows && j < self.cols, "index ({i},{j}) out of range");
        &mut self.data[i * self.cols + j]
    }
}

impl<'a, T: Field> Mul<&'a Matrix<T>> for &'a Matrix<T> {
    type Output = Matrix<T>;
    fn mul(self, o: &'a Matrix<T>) -> Matrix<T> {
        assert_eq!(self.cols, o.rows, "matrix product shape");
        let mut r = Matrix::zeros(self.rows, o.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..o.cols {
                    let b = &o[(k, j)];
                    if !b.is_zero() {
                        let p = a.mul_ref(b);
                        r[(i, j)] += &p;
                    }
                }
            }
        }
        r
    }
}

impl<'a, T: Field> Add<&'a Matrix<T>> for &'a Matrix<T> {
    type Output = Matrix<T>;
    fn add(self, o: &'a Matrix<T>) -> Matrix<T> {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols), "matrix sum shape");
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&o.data).map(|(a, b)| a.clone() + b.clone()).collect(),
        }
    }
}

impl<'a, T: Field> Sub<&'a Matrix<T>> for &'a Matrix<T> {
    type Output = Matrix<T>;
    fn sub(self, o: &'a Matrix<T>) -> Matrix<T> {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols), "matrix difference shape");
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&o.data).map(|(a, b)| a.clone() - b.clone()).collect(),
        }
    }
}

impl<T: Field> Neg for &Matrix<T> {
    type Output = Matrix<T>;
    fn neg(self) -> Matrix<T> {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|a| -a.clone()).collect() }
    }
}

impl<T: Field> fmt::Debug for Matrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "[{}x{}]", self.rows, self.cols)?;
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(|x| format!("{x:?}")).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        Ok(())
    }
}
