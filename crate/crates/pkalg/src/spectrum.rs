//! Characteristic polynomials, Gaussian-rational spectra and Jordan chains.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::matrix::{in_span, realify, span_basis, CMatrix, Matrix};
use crate::scalar::{Field, GaussScalar, Scalar};

/// Polynomial with rational coefficients, lowest degree first.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Poly(pub Vec<Scalar>);

impl Poly {
    fn trim(mut self) -> Self {
        while self.0.last().is_some_and(Scalar::is_zero) {
            self.0.pop();
        }
        self
    }

    pub fn degree(&self) -> Option<usize> {
        self.0.iter().rposition(|c| !c.is_zero())
    }

    pub fn is_zero(&self) -> bool {
        self.degree().is_none()
    }

    pub fn eval(&self, x: &Scalar) -> Scalar {
        let mut acc = Scalar::zero();
        for c in self.0.iter().rev() {
            acc = &acc * x + c;
        }
        acc
    }

    pub fn eval_gauss(&self, x: &GaussScalar) -> GaussScalar {
        let mut acc = GaussScalar::zero();
        for c in self.0.iter().rev() {
            acc = &acc * x + GaussScalar::real(c.clone());
        }
        acc
    }

    pub fn derivative(&self) -> Poly {
        Poly(self.0.iter().enumerate().skip(1).map(|(k, c)| c * &Scalar::int(k as i64)).collect()).trim()
    }

    pub fn mul(&self, o: &Poly) -> Poly {
        if self.is_zero() || o.is_zero() {
            return Poly(vec![]);
        }
        let mut r = vec![Scalar::zero(); self.0.len() + o.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            for (j, b) in o.0.iter().enumerate() {
                r[i + j] += &(a * b);
            }
        }
        Poly(r).trim()
    }

    /// Quotient and remainder.
    pub fn divrem(&self, d: &Poly) -> (Poly, Poly) {
        let dd = d.degree().expect("division by zero polynomial");
        let lead = d.0[dd].clone();
        let mut rem = self.clone().trim();
        let Some(n) = rem.degree() else {
            return (Poly(vec![]), rem);
        };
        if n < dd {
            return (Poly(vec![]), rem);
        }
        let mut quo = vec![Scalar::zero(); n - dd + 1];
        while let Some(rd) = rem.degree() {
            if rd < dd {
                break;
            }
            let c = &rem.0[rd] / &lead;
            for (k, dc) in d.0.iter().enumerate().take(dd + 1) {
                let t = &c * dc;
                rem.0[rd - dd + k] -= &t;
            }
            quo[rd - dd] = c;
            rem = rem.trim();
        }
        (Poly(quo).trim(), rem)
    }

    pub fn monic(&self) -> Poly {
        let d = self.degree().expect("zero polynomial");
        let lead = self.0[d].clone();
        Poly(self.0.iter().map(|c| c / &lead).collect()).trim()
    }

    pub fn gcd(&self, o: &Poly) -> Poly {
        let (mut a, mut b) = (self.clone().trim(), o.clone().trim());
        while !b.is_zero() {
            let r = a.divrem(&b).1;
            a = b;
            b = r;
        }
        if a.is_zero() {
            a
        } else {
            a.monic()
        }
    }

    /// Primitive integer polynomial with positive leading coefficient and the
    /// same roots.
    pub fn primitive(&self) -> Vec<BigInt> {
        let mut l = BigInt::one();
        for c in &self.0 {
            l = l.lcm(c.denom());
        }
        let mut ints: Vec<BigInt> = self.0.iter().map(|c| c.numer() * (&l / c.denom())).collect();
        let mut g = BigInt::zero();
        for c in &ints {
            g = g.gcd(c);
        }
        if !g.is_zero() {
            for c in ints.iter_mut() {
                *c = &*c / &g;
            }
        }
        if ints.last().is_some_and(|c| c.is_negative()) {
            for c in ints.iter_mut() {
                *c = -&*c;
            }
        }
        ints
    }
}

/// `det(X·Id − M)` by the Faddeev–LeVerrier recursion.
pub fn char_poly(m: &Matrix) -> Poly {
    assert!(m.is_square());
    let n = m.rows();
    let mut coeffs = vec![Scalar::zero(); n + 1];
    coeffs[n] = Scalar::one();
    let mut mk = Matrix::zeros(n, n);
    for k in 1..=n {
        let mut next = m * &mk;
        for i in 0..n {
            next[(i, i)] += &coeffs[n - k + 1];
        }
        mk = next;
        let t = (m * &mk).trace();
        coeffs[n - k] = -(t / Scalar::int(k as i64));
    }
    Poly(coeffs)
}

fn positive_divisors(n: &BigInt) -> Vec<BigInt> {
    let n = n.abs();
    if n.is_zero() {
        return vec![];
    }
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = BigInt::one();
    while &d * &d <= n {
        if (&n % &d).is_zero() {
            small.push(d.clone());
            let e = &n / &d;
            if e != d {
                large.push(e);
            }
        }
        d += 1;
    }
    large.reverse();
    small.extend(large);
    small
}

/// Distinct roots of a square-free polynomial over ℚ(i); errors if some
/// irreducible factor is not linear or of the form (X−ζ)(X−ζ̄).
fn squarefree_roots(p: &Poly) -> Result<Vec<GaussScalar>> {
    let mut roots = Vec::new();
    let mut rest = p.clone().trim();
    if rest.degree().is_none() {
        return Ok(roots);
    }
    if rest.0[0].is_zero() {
        roots.push(GaussScalar::zero());
        rest = rest.divrem(&Poly(vec![Scalar::zero(), Scalar::one()])).0;
    }
    // rational roots p/q with p | a0, q | an
    let ints = rest.primitive();
    if rest.degree().unwrap_or(0) >= 1 {
        let a0 = ints[0].clone();
        let an = ints.last().cloned().unwrap_or_else(BigInt::one);
        'outer: for num in positive_divisors(&a0) {
            for den in positive_divisors(&an) {
                for sign in [1, -1] {
                    let r = Scalar::from_bigints(&num * sign, den.clone());
                    if rest.eval(&r).is_zero() {
                        roots.push(GaussScalar::real(r.clone()));
                        rest = rest.divrem(&Poly(vec![-r, Scalar::one()])).0;
                        if rest.degree() == Some(0) {
                            break 'outer;
                        }
                    }
                }
            }
        }
    }
    // conjugate pairs: primitive quadratic factors b X² + c X + d with
    // b | lead, d | const, 4bd − c² a positive square
    while rest.degree().is_some_and(|d| d >= 1) {
        if rest.degree() == Some(1) {
            return Err(Error::NonGaussianSpectrum);
        }
        let ints = rest.primitive();
        let found = find_gauss_quadratic(&ints);
        let Some((b, c, d, s)) = found else {
            return Err(Error::NonGaussianSpectrum);
        };
        let two_b = Scalar::from(&b * 2);
        let re = Scalar::from(-c.clone()) / two_b.clone();
        let im = Scalar::from(s) / two_b;
        roots.push(GaussScalar::new(re.clone(), im.clone()));
        roots.push(GaussScalar::new(re, -im));
        let quad = Poly(vec![Scalar::from(d), Scalar::from(c), Scalar::from(b)]);
        rest = rest.divrem(&quad).0;
    }
    Ok(roots)
}

fn find_gauss_quadratic(ints: &[BigInt]) -> Option<(BigInt, BigInt, BigInt, BigInt)> {
    let p = Poly(ints.iter().map(|c| Scalar::from(c.clone())).collect());
    let a0 = &ints[0];
    let an = ints.last()?;
    for b in positive_divisors(an) {
        for d in positive_divisors(a0) {
            let four_bd: BigInt = &b * &d * 4;
            let mut c = BigInt::zero();
            while &c * &c < four_bd {
                let s2 = &four_bd - &c * &c;
                let s = s2.sqrt();
                if &s * &s == s2 {
                    for cc in [c.clone(), -c.clone()] {
                        let quad = Poly(vec![Scalar::from(d.clone()), Scalar::from(cc.clone()), Scalar::from(b.clone())]);
                        if p.divrem(&quad).1.is_zero() {
                            return Some((b.clone(), cc, d.clone(), s.clone()));
                        }
                        if c.is_zero() {
                            break;
                        }
                    }
                }
                c += 1;
            }
        }
    }
    None
}

/// All roots of `p` with multiplicity, if `p` splits over ℚ(i).
pub fn poly_roots(p: &Poly) -> Result<Vec<(GaussScalar, usize)>> {
    let sf = p.divrem(&p.gcd(&p.derivative())).0;
    let roots = squarefree_roots(&sf)?;
    let mut out = Vec::new();
    for r in roots {
        let mut mult = 0;
        let mut rest = p.clone();
        loop {
            let (quo, rem) = divide_linear_gauss(&rest, &r);
            if !rem.is_zero() {
                break;
            }
            mult += 1;
            rest = quo;
        }
        out.push((r, mult));
    }
    out.sort();
    Ok(out)
}

/// Division of a real polynomial by (X − ζ) carried out over ℚ(i), returned
/// only when ζ is a root: then the quotient is re-expressed through the real
/// minimal polynomial to stay in ℚ[X].
fn divide_linear_gauss(p: &Poly, z: &GaussScalar) -> (Poly, GaussScalar) {
    if z.is_real() {
        let (q, r) = p.divrem(&Poly(vec![-z.re.clone(), Scalar::one()]));
        let rem = GaussScalar::real(r.0.first().cloned().unwrap_or_else(Scalar::zero));
        return (q, rem);
    }
    // divide by the real quadratic (X−ζ)(X−ζ̄) once per root ζ; the conjugate
    // root is handled by its own call against the original polynomial
    let quad = Poly(vec![z.norm_sq(), -(&z.re * &Scalar::int(2)), Scalar::one()]);
    let (q, r) = p.divrem(&quad);
    if r.is_zero() {
        (q, GaussScalar::zero())
    } else {
        (q, GaussScalar::one())
    }
}

/// Eigenvalues with algebraic multiplicity of a rational square matrix,
/// sorted. Fails with [`Error::NonGaussianSpectrum`] when the characteristic
/// polynomial does not split over ℚ(i).
pub fn gaussian_spectrum(m: &Matrix) -> Result<Vec<(GaussScalar, usize)>> {
    if !m.is_square() {
        return Err(Error::Dimension("spectrum of a non-square matrix".into()));
    }
    poly_roots(&char_poly(m))
}

/// Eigenvalues with algebraic multiplicity of a Gaussian-rational matrix.
pub fn gaussian_spectrum_complex(m: &CMatrix) -> Result<Vec<(GaussScalar, usize)>> {
    if !m.is_square() {
        return Err(Error::Dimension("spectrum of a non-square matrix".into()));
    }
    let n = m.rows();
    // the real form carries spec(M) together with its conjugate
    let candidates = gaussian_spectrum(&realify(m))?;
    let mut out = Vec::new();
    for (z, _) in candidates {
        let k = generalized_eigenspace(m, &z).len();
        if k > 0 {
            out.push((z, k));
        }
    }
    debug_assert_eq!(out.iter().map(|x| x.1).sum::<usize>(), n);
    Ok(out)
}

fn shifted<T: Field>(m: &Matrix<T>, z: &T) -> Matrix<T> {
    let mut n = m.clone();
    for i in 0..m.rows() {
        n[(i, i)] = n[(i, i)].clone() - z.clone();
    }
    n
}

/// Basis of `ker (M − ζ)^dim`.
pub fn generalized_eigenspace<T: Field>(m: &Matrix<T>, z: &T) -> Vec<Vec<T>> {
    let n = shifted(m, z);
    n.pow(m.rows() as u32).kernel()
}

/// Jordan block sizes at ζ recovered from ranks of powers of `M − ζ`,
/// largest first.
pub fn jordan_partition<T: Field>(m: &Matrix<T>, z: &T) -> Vec<usize> {
    let n = shifted(m, z);
    let dim = m.rows();
    let mut ranks = vec![dim];
    let mut p = Matrix::identity(dim);
    loop {
        p = &p * &n;
        let r = p.rank();
        let last = *ranks.last().unwrap();
        ranks.push(r);
        if r == last {
            break;
        }
    }
    let mut sizes = Vec::new();
    for k in 1..ranks.len() - 1 {
        let exact = ranks[k - 1] + ranks[k + 1] - 2 * ranks[k];
        sizes.extend(std::iter::repeat(k).take(exact));
    }
    sizes.sort_unstable_by(|a, b| b.cmp(a));
    sizes
}

/// Jordan chains `v, (M−ζ)v, …, (M−ζ)^{k−1}v` spanning the generalized
/// eigenspace of ζ, longest chains first.
pub fn generalized_eigenchains<T: Field>(m: &Matrix<T>, z: &T) -> Result<Vec<Vec<Vec<T>>>> {
    assert!(m.is_square());
    let n = shifted(m, z);
    let dim = m.rows();
    let mut kernels: Vec<Vec<Vec<T>>> = vec![Vec::new()];
    let mut p = Matrix::identity(dim);
    loop {
        p = &p * &n;
        let k = p.kernel();
        let prev = kernels.last().unwrap().len();
        if k.len() == prev {
            break;
        }
        kernels.push(k);
    }
    if kernels.len() == 1 {
        return Err(Error::NotAnEigenvalue(format!("{z}")));
    }
    let top = kernels.len() - 1;
    let mut generators: Vec<(Vec<T>, usize)> = Vec::new();
    for level in (1..=top).rev() {
        let mut basis = kernels[level - 1].clone();
        for (g, len) in &generators {
            let mut v = g.clone();
            for _ in 0..(len - level) {
                v = n.mul_vec(&v);
            }
            basis.push(v);
        }
        basis = span_basis(&basis);
        for x in &kernels[level] {
            if !in_span(&basis, x) {
                basis.push(x.clone());
                generators.push((x.clone(), level));
            }
        }
    }
    Ok(generators
        .into_iter()
        .map(|(g, len)| {
            let mut chain = vec![g];
            for _ in 1..len {
                let next = n.mul_vec(chain.last().unwrap());
                chain.push(next);
            }
            chain
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{q, qi};

    fn gz(re: i64, im: i64) -> GaussScalar {
        GaussScalar::ints(re, im)
    }

    #[test]
    fn char_poly_of_rotation() {
        let m = Matrix::from_ints(&[&[0, 3], &[-3, 0]]);
        assert_eq!(char_poly(&m), Poly(vec![qi(9), qi(0), qi(1)]));
    }

    #[test]
    fn spectrum_examples() {
        let d = Matrix::diagonal(&[qi(1), qi(1), qi(-2)]);
        assert_eq!(gaussian_spectrum(&d).unwrap(), vec![(gz(-2, 0), 1), (gz(1, 0), 2)]);
        let r = Matrix::from_ints(&[&[0, 3], &[-3, 0]]);
        assert_eq!(gaussian_spectrum(&r).unwrap(), vec![(gz(0, -3), 1), (gz(0, 3), 1)]);
        let s = Matrix::from_ints(&[&[0, 1], &[2, 0]]);
        assert_eq!(gaussian_spectrum(&s), Err(Error::NonGaussianSpectrum));
        let t = Matrix::from_ints(&[&[0, 1], &[-2, 0]]);
        assert_eq!(gaussian_spectrum(&t), Err(Error::NonGaussianSpectrum));
    }

    #[test]
    fn spectrum_with_rational_gauss_pairs_and_repeats() {
        // (1/2 ± 2i) twice and 0 once
        let blk = Matrix::from_rows(vec![vec![q(1, 2), qi(2)], vec![qi(-2), q(1, 2)]]);
        let mut m = Matrix::block_diag(&[blk.clone(), blk, Matrix::zeros(1, 1)]);
        m[(0, 2)] = qi(1);
        let sp = gaussian_spectrum(&m).unwrap();
        assert_eq!(
            sp,
            vec![
                (GaussScalar::zero(), 1),
                (GaussScalar::new(q(1, 2), qi(-2)), 2),
                (GaussScalar::new(q(1, 2), qi(2)), 2)
            ]
        );
    }

    #[test]
    fn complex_spectrum() {
        let m = CMatrix::from_rows(vec![vec![gz(0, 2), gz(1, 0)], vec![gz(0, 0), gz(1, 1)]]);
        assert_eq!(gaussian_spectrum_complex(&m).unwrap(), vec![(gz(0, 2), 1), (gz(1, 1), 1)]);
    }

    #[test]
    fn chains_examples() {
        let j3 = Matrix::from_ints(&[&[0, 1, 0], &[0, 0, 1], &[0, 0, 0]]);
        let ch = generalized_eigenchains(&j3, &qi(0)).unwrap();
        assert_eq!(ch.iter().map(Vec::len).collect::<Vec<_>>(), vec![3]);

        let d = Matrix::diagonal(&[qi(5), qi(5)]);
        let ch = generalized_eigenchains(&d, &qi(5)).unwrap();
        assert_eq!(ch.iter().map(Vec::len).collect::<Vec<_>>(), vec![1, 1]);

        let m = Matrix::from_ints(&[&[0, 1, 0], &[0, 0, 0], &[0, 0, 0]]);
        let ch = generalized_eigenchains(&m, &qi(0)).unwrap();
        assert_eq!(ch.iter().map(Vec::len).collect::<Vec<_>>(), vec![2, 1]);
        assert_eq!(jordan_partition(&m, &qi(0)), vec![2, 1]);

        assert!(matches!(generalized_eigenchains(&m, &qi(1)), Err(Error::NotAnEigenvalue(_))));
    }
}
