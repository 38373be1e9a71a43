//! Homogeneous polynomials in `n + 1` variables stored by their plain
//! coefficients in the degree-`d` monomial basis.
//!
//! Monomials are ordered graded-colex: exponent vectors are compared starting
//! from the last variable, smaller exponent first. For two variables and
//! degree two this gives `x0^2, x0 x1, x1^2`. Every module shares this order.

use crate::error::Error;
use crate::field::Field;
use crate::linalg::Matrix;

/// Exponent vector of a monomial.
pub type MultiIndex = Vec<u32>;

pub fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc as usize
}

/// `binom(n + d, d)`: the dimension of degree-`d` forms in `n + 1` variables.
pub fn num_monomials(n: usize, d: usize) -> usize {
    binomial(n + d, d)
}

/// Position of `alpha` in the graded-colex order of degree-`d` monomials in `n + 1` variables.
pub fn monomial_rank(alpha: &[u32], n: usize, d: usize) -> Result<usize, Error> {
    if alpha.len() != n + 1 {
        return Err(Error::InvalidMultiIndex(format!(
            "expected {} exponents, got {}",
            n + 1,
            alpha.len()
        )));
    }
    let total: usize = alpha.iter().map(|&a| a as usize).sum();
    if total != d {
        return Err(Error::InvalidMultiIndex(format!("total degree {total} != {d}")));
    }
    Ok(rank_unchecked(alpha))
}

#[inline]
fn rank_unchecked(alpha: &[u32]) -> usize {
    // Monomials preceding alpha that agree with it on x_{k+1}..x_n and have a
    // smaller exponent at x_k: binom(s_k + k, k) - binom(s_{k-1} + k, k), where
    // s_k is the degree carried by x_0..x_k.
    let mut s = alpha[0] as usize;
    let mut idx = 0;
    for (k, &a) in alpha.iter().enumerate().skip(1) {
        let prev = s;
        s += a as usize;
        idx += binomial(s + k, k) - binomial(prev + k, k);
    }
    idx
}

/// Inverse of [`monomial_rank`].
pub fn monomial_unrank(index: usize, n: usize, d: usize) -> Result<MultiIndex, Error> {
    let len = num_monomials(n, d);
    if index >= len {
        return Err(Error::IndexOutOfRange { index, len });
    }
    let mut alpha = vec![0u32; n + 1];
    let mut rest = index;
    let mut s = d;
    for k in (1..=n).rev() {
        // largest a with binom(s+k,k) - binom(s-a+k,k) <= rest
        let top = binomial(s + k, k);
        let mut a = 0;
        while a < s && top - binomial(s - (a + 1) + k, k) <= rest {
            a += 1;
        }
        rest -= top - binomial(s - a + k, k);
        alpha[k] = a as u32;
        s -= a;
    }
    alpha[0] = s as u32;
    debug_assert_eq!(rest, 0);
    Ok(alpha)
}

/// All degree-`d` monomials in `n + 1` variables, in basis order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MonomialBasis {
    n: usize,
    d: usize,
    exponents: Vec<MultiIndex>,
}

impl MonomialBasis {
    pub fn new(n: usize, d: usize) -> Self {
        let exponents = (0..num_monomials(n, d))
            .map(|i| monomial_unrank(i, n, d).expect("in range"))
            .collect();
        Self { n, d, exponents }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn degree(&self) -> usize {
        self.d
    }

    pub fn len(&self) -> usize {
        self.exponents.len()
    }

    pub fn is_empty(&self) -> bool {
        self.exponents.is_empty()
    }

    pub fn get(&self, i: usize) -> &[u32] {
        &self.exponents[i]
    }

    pub fn iter(&self) -> impl Iterator<Item = &[u32]> {
        self.exponents.iter().map(|v| v.as_slice())
    }

    pub fn index_of(&self, alpha: &[u32]) -> usize {
        rank_unchecked(alpha)
    }
}

/// `n!` as a field element, for small `n`.
pub fn factorial<F: Field>(field: &F, n: usize) -> F::Elem {
    (1..=n).fold(field.one(), |acc, k| field.mul(&acc, &field.from_u64(k as u64)))
}

/// `d! / prod(alpha_i!)` for `d = |alpha|`.
pub fn multinomial<F: Field>(field: &F, alpha: &[u32]) -> F::Elem {
    let mut acc: u128 = 1;
    let mut total: u128 = 0;
    for &a in alpha {
        for i in 1..=a as u128 {
            total += 1;
            acc = acc * total / i;
        }
    }
    field.from_u64(u64::try_from(acc).expect("multinomial overflow"))
}

/// `prod(alpha_i!)` as a field element.
pub fn factorial_product<F: Field>(field: &F, alpha: &[u32]) -> F::Elem {
    alpha
        .iter()
        .fold(field.one(), |acc, &a| field.mul(&acc, &factorial(field, a as usize)))
}

fn monomial_value<F: Field>(field: &F, alpha: &[u32], x: &[F::Elem]) -> F::Elem {
    alpha
        .iter()
        .zip(x)
        .filter(|(a, _)| **a > 0)
        .fold(field.one(), |acc, (&a, xi)| field.mul(&acc, &field.pow(xi, a)))
}

/// A nonzero linear form `a_0 x_0 + ... + a_n x_n`.
#[derive(Clone, Debug, PartialEq)]
pub struct LinearForm<F: Field> {
    field: F,
    coeffs: Vec<F::Elem>,
}

impl<F: Field> LinearForm<F> {
    pub fn new(field: F, coeffs: Vec<F::Elem>) -> Result<Self, Error> {
        if coeffs.is_empty() || coeffs.iter().all(|c| field.is_zero(c)) {
            return Err(Error::ZeroForm);
        }
        Ok(Self { field, coeffs })
    }

    pub fn from_i64(field: F, coeffs: &[i64]) -> Result<Self, Error> {
        Self::new(field, coeffs.iter().map(|&c| field.from_i64(c)).collect())
    }

    pub fn field(&self) -> F {
        self.field
    }

    /// Number of variables minus one.
    pub fn n(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[F::Elem] {
        &self.coeffs
    }

    pub fn scaled(&self, c: &F::Elem) -> Result<Self, Error> {
        Self::new(self.field, self.coeffs.iter().map(|a| self.field.mul(a, c)).collect())
    }
}

/// A degree-`d` form in `n + 1` variables (equivalently, a symmetric tensor).
#[derive(Clone, Debug, PartialEq)]
pub struct SymTensor<F: Field> {
    field: F,
    n: usize,
    d: usize,
    coeffs: Vec<F::Elem>,
}

impl<F: Field> SymTensor<F> {
    pub fn zero(field: F, n: usize, d: usize) -> Self {
        Self {
            field,
            n,
            d,
            coeffs: vec![field.zero(); num_monomials(n, d)],
        }
    }

    pub fn from_coeffs(field: F, n: usize, d: usize, coeffs: Vec<F::Elem>) -> Result<Self, Error> {
        let len = num_monomials(n, d);
        if coeffs.len() != len {
            return Err(Error::DimensionMismatch(format!(
                "{} coefficients for a basis of size {len}",
                coeffs.len()
            )));
        }
        Ok(Self { field, n, d, coeffs })
    }

    /// The monomial `x^alpha`.
    pub fn monomial(field: F, alpha: &[u32]) -> Self {
        let n = alpha.len() - 1;
        let d = alpha.iter().map(|&a| a as usize).sum();
        let mut t = Self::zero(field, n, d);
        t.coeffs[rank_unchecked(alpha)] = field.one();
        t
    }

    /// The `i`-th basis monomial, as a tensor.
    pub fn basis_element(field: F, n: usize, d: usize, i: usize) -> Self {
        let mut t = Self::zero(field, n, d);
        t.coeffs[i] = field.one();
        t
    }

    pub fn field(&self) -> F {
        self.field
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn degree(&self) -> usize {
        self.d
    }

    pub fn coeffs(&self) -> &[F::Elem] {
        &self.coeffs
    }

    pub fn coeff(&self, alpha: &[u32]) -> &F::Elem {
        &self.coeffs[rank_unchecked(alpha)]
    }

    pub fn into_coeffs(self) -> Vec<F::Elem> {
        self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| self.field.is_zero(c))
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!((self.n, self.d), (other.n, other.d));
        let f = self.field;
        Self {
            coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| f.add(a, b)).collect(),
            ..self.clone()
        }
    }

    pub fn scale(&self, c: &F::Elem) -> Self {
        let f = self.field;
        Self {
            coeffs: self.coeffs.iter().map(|a| f.mul(a, c)).collect(),
            ..self.clone()
        }
    }

    /// Formal partial derivative with respect to `x_j`.
    pub fn partial_derivative(&self, j: usize) -> Result<Self, Error> {
        if self.d == 0 {
            return Err(Error::UnsupportedDegree {
                got: 0,
                reason: "cannot differentiate a constant form",
            });
        }
        if j > self.n {
            return Err(Error::DimensionMismatch(format!("variable x{j} with n = {}", self.n)));
        }
        let f = self.field;
        let basis = MonomialBasis::new(self.n, self.d - 1);
        let mut alpha = vec![0u32; self.n + 1];
        let coeffs = basis
            .iter()
            .map(|beta| {
                alpha.copy_from_slice(beta);
                alpha[j] += 1;
                f.mul(&f.from_u64(alpha[j] as u64), self.coeff(&alpha))
            })
            .collect();
        Ok(Self {
            field: f,
            n: self.n,
            d: self.d - 1,
            coeffs,
        })
    }

    pub fn evaluate(&self, x: &[F::Elem]) -> Result<F::Elem, Error> {
        if x.len() != self.n + 1 {
            return Err(Error::DimensionMismatch(format!(
                "point has {} coordinates, expected {}",
                x.len(),
                self.n + 1
            )));
        }
        let f = self.field;
        let basis = MonomialBasis::new(self.n, self.d);
        Ok(basis.iter().zip(&self.coeffs).fold(f.zero(), |acc, (alpha, c)| {
            if f.is_zero(c) {
                acc
            } else {
                f.add(&acc, &f.mul(c, &monomial_value(&f, alpha, x)))
            }
        }))
    }

    /// Product of two forms in the same variables.
    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.n, other.n);
        let f = self.field;
        let mut out = Self::zero(f, self.n, self.d + other.d);
        let lb = MonomialBasis::new(self.n, self.d);
        let rb = MonomialBasis::new(self.n, other.d);
        let mut gamma = vec![0u32; self.n + 1];
        for (alpha, a) in lb.iter().zip(&self.coeffs) {
            if f.is_zero(a) {
                continue;
            }
            for (beta, b) in rb.iter().zip(&other.coeffs) {
                if f.is_zero(b) {
                    continue;
                }
                for ((g, x), y) in gamma.iter_mut().zip(alpha).zip(beta) {
                    *g = x + y;
                }
                let i = rank_unchecked(&gamma);
                out.coeffs[i] = f.add(&out.coeffs[i], &f.mul(a, b));
            }
        }
        out
    }

    /// `x_j · self`.
    pub fn mul_variable(&self, j: usize) -> Self {
        let f = self.field;
        let mut out = Self::zero(f, self.n, self.d + 1);
        let basis = MonomialBasis::new(self.n, self.d);
        let mut gamma = vec![0u32; self.n + 1];
        for (alpha, c) in basis.iter().zip(&self.coeffs) {
            gamma.copy_from_slice(alpha);
            gamma[j] += 1;
            out.coeffs[rank_unchecked(&gamma)] = c.clone();
        }
        out
    }

    pub fn gradient_at(&self, x: &[F::Elem]) -> Result<Vec<F::Elem>, Error> {
        (0..=self.n).map(|j| self.partial_derivative(j)?.evaluate(x)).collect()
    }

    /// Hessian `[∂²/∂x_i∂x_j]` evaluated at `x`, computed monomial by monomial.
    pub fn hessian_at(&self, x: &[F::Elem]) -> Result<Matrix<F>, Error> {
        let f = self.field;
        let m = self.n + 1;
        if x.len() != m {
            return Err(Error::DimensionMismatch(format!(
                "point has {} coordinates, expected {m}",
                x.len()
            )));
        }
        let mut h = Matrix::zeros(f, m, m);
        if self.d < 2 {
            return Ok(h);
        }
        let basis = MonomialBasis::new(self.n, self.d);
        let mut beta = vec![0u32; m];
        for (alpha, c) in basis.iter().zip(&self.coeffs) {
            if f.is_zero(c) {
                continue;
            }
            for i in 0..m {
                if alpha[i] == 0 {
                    continue;
                }
                for j in i..m {
                    let factor = if i == j {
                        if alpha[i] < 2 {
                            continue;
                        }
                        (alpha[i] * (alpha[i] - 1)) as u64
                    } else {
                        if alpha[j] == 0 {
                            continue;
                        }
                        (alpha[i] * alpha[j]) as u64
                    };
                    beta.copy_from_slice(alpha);
                    beta[i] -= 1;
                    beta[j] -= 1;
                    let v = f.mul(&f.mul(c, &f.from_u64(factor)), &monomial_value(&f, &beta, x));
                    h[(i, j)] = f.add(&h[(i, j)], &v);
                }
            }
        }
        for i in 0..m {
            for j in 0..i {
                h[(i, j)] = h[(j, i)].clone();
            }
        }
        Ok(h)
    }
}

/// `l^d`: the coefficient of `x^alpha` is `multinomial(d; alpha) · a^alpha`.
pub fn expand_power<F: Field>(l: &LinearForm<F>, d: usize) -> SymTensor<F> {
    let f = l.field;
    let n = l.n();
    let basis = MonomialBasis::new(n, d);
    let coeffs = basis
        .iter()
        .map(|alpha| f.mul(&multinomial(&f, alpha), &monomial_value(&f, alpha, &l.coeffs)))
        .collect();
    SymTensor { field: f, n, d, coeffs }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{PrimeField, RationalField};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn order_for_two_variables_degree_two() {
        let b = MonomialBasis::new(1, 2);
        let got: Vec<_> = b.iter().map(|a| a.to_vec()).collect();
        assert_eq!(got, vec![vec![2, 0], vec![1, 1], vec![0, 2]]);
        assert_eq!(monomial_rank(&[1, 1], 1, 2).unwrap(), 1);
    }

    #[test]
    fn first_monomial_is_pure_power_of_x0() {
        for n in 0..5 {
            for d in 0..5 {
                let mut e = vec![0; n + 1];
                e[0] = d as u32;
                assert_eq!(monomial_unrank(0, n, d).unwrap(), e);
            }
        }
        assert_eq!(MonomialBasis::new(2, 3).len(), 10);
    }

    #[test]
    fn rank_unrank_errors() {
        assert!(matches!(monomial_unrank(10, 2, 3), Err(Error::IndexOutOfRange { .. })));
        assert!(monomial_rank(&[1, 1], 1, 3).is_err());
        assert!(monomial_rank(&[1, 1, 1], 1, 3).is_err());
    }

    /// Brute-force oracle: all exponent vectors sorted by comparing from the last variable.
    fn colex_enumeration(n: usize, d: usize) -> Vec<Vec<u32>> {
        fn rec(n: usize, left: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
            if cur.len() == n {
                cur.push(left);
                out.push(cur.clone());
                cur.pop();
                return;
            }
            for a in 0..=left {
                cur.push(a);
                rec(n, left - a, cur, out);
                cur.pop();
            }
        }
        let mut out = Vec::new();
        rec(n, d as u32, &mut Vec::new(), &mut out);
        out.sort_by(|a, b| a.iter().rev().cmp(b.iter().rev()));
        out
    }

    #[test]
    fn rank_matches_sorted_enumeration() {
        for n in 0..5 {
            for d in 0..6 {
                let all = colex_enumeration(n, d);
                assert_eq!(all.len(), num_monomials(n, d));
                for (i, alpha) in all.iter().enumerate() {
                    assert_eq!(monomial_rank(alpha, n, d).unwrap(), i);
                    assert_eq!(&monomial_unrank(i, n, d).unwrap(), alpha);
                }
            }
        }
    }

    #[test]
    fn power_of_first_variable() {
        let f = RationalField;
        let l = LinearForm::from_i64(f, &[1, 0]).unwrap();
        let p = expand_power(&l, 3);
        assert_eq!(p.coeffs()[0], f.one());
        assert!(p.coeffs()[1..].iter().all(|c| f.is_zero(c)));
    }

    #[test]
    fn binomial_theorem() {
        let f = RationalField;
        let p = expand_power(&LinearForm::from_i64(f, &[1, 1]).unwrap(), 2);
        assert_eq!(p.coeffs(), &[f.from_i64(1), f.from_i64(2), f.from_i64(1)]);
    }

    #[test]
    fn zero_form_rejected() {
        assert!(matches!(LinearForm::from_i64(RationalField, &[0, 0, 0]), Err(Error::ZeroForm)));
    }

    /// Oracle: multiply the linear polynomial by itself `d` times, collecting
    /// terms in a map keyed by exponent vector.
    fn power_by_repeated_product(a: &[i64], d: usize) -> std::collections::HashMap<Vec<u32>, i64> {
        let mut acc = std::collections::HashMap::new();
        acc.insert(vec![0u32; a.len()], 1i64);
        for _ in 0..d {
            let mut next = std::collections::HashMap::new();
            for (e, c) in &acc {
                for (i, ai) in a.iter().enumerate() {
                    let mut e2 = e.clone();
                    e2[i] += 1;
                    *next.entry(e2).or_insert(0) += c * ai;
                }
            }
            acc = next;
        }
        acc
    }

    #[test]
    fn last_example_term_coefficient() {
        let a = [1, 2, 3, 4, 5, 6, 7];
        let oracle = power_by_repeated_product(&a, 3);
        assert_eq!(oracle[&vec![1, 1, 1, 0, 0, 0, 0]], 36);
        let f = RationalField;
        let p = expand_power(&LinearForm::from_i64(f, &a).unwrap(), 3);
        assert_eq!(p.coeff(&[1, 1, 1, 0, 0, 0, 0]), &f.from_i64(36));
        for (alpha, c) in oracle {
            assert_eq!(p.coeff(&alpha), &f.from_i64(c));
        }
    }

    #[test]
    fn derivatives_of_cube() {
        let f = RationalField;
        let p = SymTensor::monomial(f, &[3, 0]);
        let d0 = p.partial_derivative(0).unwrap();
        assert_eq!(d0, SymTensor::monomial(f, &[2, 0]).scale(&f.from_i64(3)));
        assert!(p.partial_derivative(1).unwrap().is_zero());
    }

    #[test]
    fn evaluate_cube() {
        let f = RationalField;
        let p = SymTensor::monomial(f, &[3, 0, 0]);
        let x = [f.from_i64(2), f.from_i64(5), f.from_i64(-1)];
        assert_eq!(p.evaluate(&x).unwrap(), f.from_i64(8));
    }

    #[test]
    fn power_evaluates_to_power_of_value() {
        let f = PrimeField::default();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..20 {
            let n = rng.gen_range(1..5);
            let d = rng.gen_range(1..6);
            let a: Vec<u64> = (0..=n).map(|_| f.random_nonzero(&mut rng)).collect();
            let x: Vec<u64> = (0..=n).map(|_| f.random(&mut rng)).collect();
            let l = LinearForm::new(f, a.clone()).unwrap();
            let lx = a.iter().zip(&x).fold(0, |s, (ai, xi)| f.add(&s, &f.mul(ai, xi)));
            assert_eq!(expand_power(&l, d).evaluate(&x).unwrap(), f.pow(&lx, d as u32));
        }
    }

    #[test]
    fn hessian_matches_double_derivative() {
        let f = PrimeField::default();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let (n, d) = (3, 4);
        let p = SymTensor::from_coeffs(
            f,
            n,
            d,
            (0..num_monomials(n, d)).map(|_| f.random(&mut rng)).collect(),
        )
        .unwrap();
        let x: Vec<u64> = (0..=n).map(|_| f.random(&mut rng)).collect();
        let h = p.hessian_at(&x).unwrap();
        for i in 0..=n {
            for j in 0..=n {
                let v = p
                    .partial_derivative(i)
                    .unwrap()
                    .partial_derivative(j)
                    .unwrap()
                    .evaluate(&x)
                    .unwrap();
                assert_eq!(h[(i, j)], v);
            }
        }
    }

    #[test]
    fn product_of_linear_forms() {
        let f = RationalField;
        let l = expand_power(&LinearForm::from_i64(f, &[1, 1]).unwrap(), 1);
        let sq = l.mul(&l);
        assert_eq!(sq, expand_power(&LinearForm::from_i64(f, &[1, 1]).unwrap(), 2));
        assert_eq!(l.mul_variable(1).coeffs(), &[f.zero(), f.one(), f.one()]);
    }
}
