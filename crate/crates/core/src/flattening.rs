//! Catalecticant and Koszul flattenings, and the two smoothness tests built on them.
//!
//! Both tests look at the determinantal locus `{q : rank M(q) ≤ rank M(p)}` near
//! `p`. Its tangent space at `p` is `{q : L·M(q)·K = 0}` where `K` spans the kernel
//! and `L` the cokernel of `M(p)`. When that space has dimension `r(n+1)` the
//! secant variety, which sits inside the locus with that dimension, is smooth at `p`.

use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::field::Field;
use crate::linalg::Matrix;
use crate::par;
use crate::poly::{binomial, factorial_product, num_monomials, MonomialBasis, SymTensor};

/// Matrix of `φ_k : S^k(V)* → S^{d-k}V`, rows indexed by degree-`k` monomials β and
/// columns by degree-`(d-k)` monomials γ, with entry `c_{β+γ} · (β+γ)! / (β! γ!)`.
pub fn catalecticant<F: Field>(p: &SymTensor<F>, k: usize) -> Result<Matrix<F>, Error> {
    let d = p.degree();
    if k == 0 || k >= d {
        return Err(Error::FlatteningOrder {
            k,
            max: d.saturating_sub(1),
        });
    }
    let f = p.field();
    let n = p.n();
    let rows = MonomialBasis::new(n, k);
    let cols = MonomialBasis::new(n, d - k);
    let row_fact: Vec<F::Elem> = rows.iter().map(|b| factorial_product(&f, b)).collect();
    let col_fact: Vec<F::Elem> = cols.iter().map(|g| factorial_product(&f, g)).collect();
    let mut m = Matrix::zeros(f, rows.len(), cols.len());
    let mut alpha = vec![0u32; n + 1];
    for (i, beta) in rows.iter().enumerate() {
        for (j, gamma) in cols.iter().enumerate() {
            for ((a, b), g) in alpha.iter_mut().zip(beta).zip(gamma) {
                *a = b + g;
            }
            let c = p.coeff(&alpha);
            if f.is_zero(c) {
                continue;
            }
            let num = f.mul(c, &factorial_product(&f, &alpha));
            let den = f.mul(&row_fact[i], &col_fact[j]);
            m[(i, j)] = f.div(&num, &den)?;
        }
    }
    Ok(m)
}

/// Sorted `a`-subsets of `0..=n`, the basis of `Λ^a V` in lexicographic order.
pub fn wedge_basis(n: usize, a: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, a: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == a {
            out.push(cur.clone());
            return;
        }
        for i in start..=n {
            cur.push(i);
            rec(i + 1, n, a, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, a, &mut Vec::new(), &mut out);
    out
}

/// Fully symmetric entries `P[i][j][k]` of a cubic, so that `p = Σ P_ijk x_i x_j x_k`.
fn cubic_entries<F: Field>(p: &SymTensor<F>) -> Result<Vec<F::Elem>, Error> {
    let f = p.field();
    let m = p.n() + 1;
    let mut out = vec![f.zero(); m * m * m];
    let mut alpha = vec![0u32; m];
    for i in 0..m {
        for j in 0..m {
            for k in 0..m {
                alpha.iter_mut().for_each(|a| *a = 0);
                alpha[i] += 1;
                alpha[j] += 1;
                alpha[k] += 1;
                let c = p.coeff(&alpha);
                if !f.is_zero(c) {
                    out[(i * m + j) * m + k] = f.div(c, &crate::poly::multinomial(&f, &alpha))?;
                }
            }
        }
    }
    Ok(out)
}

/// Koszul flattening of a cubic: the composite
/// `Λ^a V ⊗ V* → Λ^a V ⊗ V ⊗ V → Λ^{a+1} V ⊗ V`, contracting the dual factor
/// into the first slot of `p` and wedging the second slot onto the form.
///
/// Columns are indexed by `(S, i)` as `S_index · (n+1) + i`, rows by `(T, k)` alike.
pub fn koszul_flattening<F: Field>(p: &SymTensor<F>, a: usize) -> Result<Matrix<F>, Error> {
    if p.degree() != 3 {
        return Err(Error::UnsupportedDegree {
            got: p.degree(),
            reason: "Koszul flattenings are defined here for cubics only",
        });
    }
    let n = p.n();
    if a == 0 || a > n {
        return Err(Error::WedgeDegree { a, n });
    }
    let f = p.field();
    let m = n + 1;
    let entries = cubic_entries(p)?;
    let src = wedge_basis(n, a);
    let dst = wedge_basis(n, a + 1);
    let mut out = Matrix::zeros(f, dst.len() * m, src.len() * m);
    let mut merged = Vec::with_capacity(a + 1);
    for (si, s) in src.iter().enumerate() {
        for j in 0..m {
            if s.contains(&j) {
                continue;
            }
            // ω_S ∧ e_j = (-1)^{#{s > j}} ω_{S ∪ {j}}
            let flips = s.iter().filter(|&&x| x > j).count();
            merged.clear();
            merged.extend(s.iter().copied());
            merged.push(j);
            merged.sort_unstable();
            let ti = dst.binary_search(&merged).expect("subset present");
            for i in 0..m {
                let col = si * m + i;
                for k in 0..m {
                    let v = &entries[(i * m + j) * m + k];
                    if f.is_zero(v) {
                        continue;
                    }
                    let row = ti * m + k;
                    let v = if flips % 2 == 1 { f.neg(v) } else { v.clone() };
                    out[(row, col)] = f.add(&out[(row, col)], &v);
                }
            }
        }
    }
    Ok(out)
}

/// Which flattening feeds a smoothness test.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum FlatteningKind {
    Catalecticant { k: usize },
    Koszul { a: usize },
}

impl FlatteningKind {
    /// Catalecticant at `⌊d/2⌋` for `d ≥ 4`; Koszul with wedge degree `a`
    /// (default `max(1, ⌊n/2⌋)`) for cubics.
    pub fn default_for(n: usize, d: usize, koszul_a: Option<usize>) -> Self {
        if d == 3 {
            FlatteningKind::Koszul {
                a: koszul_a.unwrap_or((n / 2).max(1)),
            }
        } else {
            FlatteningKind::Catalecticant { k: d / 2 }
        }
    }

    pub fn matrix<F: Field>(&self, p: &SymTensor<F>) -> Result<Matrix<F>, Error> {
        match *self {
            FlatteningKind::Catalecticant { k } => catalecticant(p, k),
            FlatteningKind::Koszul { a } => koszul_flattening(p, a),
        }
    }

    /// Rank of the flattening of a single power `l^d`.
    pub fn rank_one_rank(&self, n: usize) -> usize {
        match *self {
            FlatteningKind::Catalecticant { .. } => 1,
            FlatteningKind::Koszul { a } => binomial(n, a),
        }
    }

    pub fn shape(&self, n: usize, d: usize) -> (usize, usize) {
        match *self {
            FlatteningKind::Catalecticant { k } => (num_monomials(n, k), num_monomials(n, d - k)),
            FlatteningKind::Koszul { a } => (binomial(n + 1, a + 1) * (n + 1), binomial(n + 1, a) * (n + 1)),
        }
    }

    /// Dimension of the kernel every cubic shares: the image of
    /// `Λ^{a-1}V → Λ^aV ⊗ V*, η ↦ Σ_i (e_i ∧ η) ⊗ e^i`, killed by symmetry of `p`.
    pub fn structural_kernel(&self, n: usize) -> usize {
        match *self {
            FlatteningKind::Catalecticant { .. } => 0,
            FlatteningKind::Koszul { a } => binomial(n + 1, a - 1),
        }
    }

    /// Upper bound on the rank of the flattening of any tensor.
    pub fn rank_ceiling(&self, n: usize, d: usize) -> usize {
        let (rows, cols) = self.shape(n, d);
        rows.min(cols - self.structural_kernel(n))
    }

    /// `r · rank_one_rank`, the flattening rank of a general `r`-term decomposition
    /// when it does not exceed the ceiling.
    pub fn expected_rank(&self, n: usize, r: usize) -> usize {
        r * self.rank_one_rank(n)
    }

    /// Whether rank-`r` tensors can be told apart from general ones by this
    /// flattening at all (`r · rank_one_rank ≤ ceiling`).
    pub fn in_range(&self, n: usize, d: usize, r: usize) -> bool {
        self.expected_rank(n, r) <= self.rank_ceiling(n, d)
    }

    pub fn label(&self) -> String {
        match *self {
            FlatteningKind::Catalecticant { k } => format!("catalecticant(k={k})"),
            FlatteningKind::Koszul { a } => format!("koszul(a={a})"),
        }
    }
}

/// Outcome of the product-space smoothness test.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NormalSpace {
    pub flattening_rank: usize,
    pub kernel_dim: usize,
    pub annihilator_dim: usize,
    pub dim: usize,
    pub expected: usize,
    pub pass: bool,
}

/// Spans the products `u · v` of kernel elements of `φ_δ` (degree δ) with
/// annihilators of its image (degree `d-δ`), as differential operators, and
/// compares the dimension of that span with `binom(n+d,d) - r(n+1)`.
pub fn normal_space_dimension<F: Field>(p: &SymTensor<F>, r: usize) -> Result<NormalSpace, Error> {
    let d = p.degree();
    if d < 2 {
        return Err(Error::UnsupportedDegree {
            got: d,
            reason: "catalecticant needs d >= 2",
        });
    }
    let f = p.field();
    let n = p.n();
    let delta = d / 2;
    let m = catalecticant(p, delta)?;
    let rank = m.rank();
    if rank != r {
        return Err(Error::FlatteningRankDeficient { rank, expected: r });
    }
    // Row-side kernel lives in degree δ, column-side kernel in degree d-δ.
    // Dividing by β! (resp. γ!) turns a kernel vector into the operator Σ u_β ∂^β.
    let as_operator = |vecs: Vec<Vec<F::Elem>>, deg: usize| -> Result<Vec<SymTensor<F>>, Error> {
        let basis = MonomialBasis::new(n, deg);
        vecs.into_iter()
            .map(|v| {
                let coeffs = v
                    .iter()
                    .zip(basis.iter())
                    .map(|(c, e)| f.div(c, &factorial_product(&f, e)))
                    .collect::<Result<Vec<_>, _>>()?;
                SymTensor::from_coeffs(f, n, deg, coeffs)
            })
            .collect()
    };
    let kernel = as_operator(m.complement_of_column_space(), delta)?;
    let annihilator = as_operator(m.kernel_basis(), d - delta)?;
    let total = num_monomials(n, d);
    let pairs: Vec<(usize, usize)> = (0..kernel.len())
        .flat_map(|i| (0..annihilator.len()).map(move |j| (i, j)))
        .collect();
    let products = par::map_slice(&pairs, |&(i, j)| kernel[i].mul(&annihilator[j]).into_coeffs());
    let dim = Matrix::from_rows(f, products, total).rank();
    let needed = r * (n + 1);
    let expected = total.saturating_sub(needed);
    Ok(NormalSpace {
        flattening_rank: rank,
        kernel_dim: kernel.len(),
        annihilator_dim: annihilator.len(),
        dim,
        expected,
        pass: needed <= total && dim == expected,
    })
}

/// Outcome of the determinantal tangent-space test.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DeterminantalTangent {
    pub kind: FlatteningKind,
    pub flattening_rank: usize,
    pub expected_flattening_rank: usize,
    pub tangent_dim: usize,
    pub expected: usize,
    pub pass: bool,
}

impl DeterminantalTangent {
    /// Annihilator dimension of the tangent space; equals the normal-space
    /// dimension for catalecticants.
    pub fn normal_dim(&self, n: usize, d: usize) -> usize {
        num_monomials(n, d) - self.tangent_dim
    }
}

/// Dimension of `{q ∈ S^d : L·M(q)·K = 0}` where `K` spans `ker M(p)` and `L`
/// spans the annihilator of its image. Passes when it equals `r(n+1)`.
pub fn determinantal_tangent_dimension<F: Field>(
    kind: FlatteningKind,
    p: &SymTensor<F>,
    r: usize,
) -> Result<DeterminantalTangent, Error> {
    let f = p.field();
    let (n, d) = (p.n(), p.degree());
    let m = kind.matrix(p)?;
    let flattening_rank = m.rank();
    let right = m.kernel_basis();
    let left = m.complement_of_column_space();
    let total = num_monomials(n, d);
    let tangent_dim = if right.is_empty() || left.is_empty() {
        total
    } else {
        let (rows, cols) = m.shape();
        let conditions: Vec<Vec<F::Elem>> = par::map_range(total, |idx| {
            let mq = kind
                .matrix(&SymTensor::basis_element(f, n, d, idx))
                .expect("same kind as p");
            // MK[i][b] = Σ_j M[i][j] K_b[j]
            let mut mk = vec![f.zero(); rows * right.len()];
            for i in 0..rows {
                for j in 0..cols {
                    let v = &mq[(i, j)];
                    if f.is_zero(v) {
                        continue;
                    }
                    for (b, kv) in right.iter().enumerate() {
                        if !f.is_zero(&kv[j]) {
                            let slot = &mut mk[i * right.len() + b];
                            *slot = f.add(slot, &f.mul(v, &kv[j]));
                        }
                    }
                }
            }
            let mut out = Vec::with_capacity(left.len() * right.len());
            for l in &left {
                for b in 0..right.len() {
                    let mut acc = f.zero();
                    for (i, li) in l.iter().enumerate() {
                        if !f.is_zero(li) {
                            acc = f.add(&acc, &f.mul(li, &mk[i * right.len() + b]));
                        }
                    }
                    out.push(acc);
                }
            }
            out
        });
        let rank = Matrix::from_columns(f, &conditions, left.len() * right.len()).rank();
        total - rank
    };
    let expected = r * (n + 1);
    Ok(DeterminantalTangent {
        kind,
        flattening_rank,
        expected_flattening_rank: kind.expected_rank(n, r),
        tangent_dim,
        expected,
        pass: tangent_dim == expected,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{PrimeField, RationalField};
    use crate::poly::{expand_power, LinearForm};
    use crate::veronese::WaringInput;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn random_tensor(f: PrimeField, n: usize, d: usize, r: usize, seed: u64) -> SymTensor<PrimeField> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let forms = (0..r)
            .map(|_| LinearForm::new(f, (0..=n).map(|_| f.random_nonzero(&mut rng)).collect()).unwrap())
            .collect();
        WaringInput::from_forms(f, d.max(3), forms).unwrap().tensor()
    }

    #[test]
    fn catalecticant_of_a_pure_power_has_rank_one() {
        let f = RationalField;
        for d in 2..7 {
            let p = SymTensor::monomial(f, &[d as u32, 0, 0]);
            for k in 1..d {
                assert_eq!(catalecticant(&p, k).unwrap().rank(), 1);
            }
        }
        let p = SymTensor::monomial(f, &[3, 0]);
        assert!(catalecticant(&p, 0).is_err());
        assert!(catalecticant(&p, 3).is_err());
    }

    #[test]
    fn binary_quartic_sum_of_two_powers() {
        // p = x0^4 + x1^4: by hand the middle catalecticant is diag(1, 0, 1)
        let f = RationalField;
        let p = SymTensor::monomial(f, &[4, 0]).add(&SymTensor::monomial(f, &[0, 4]));
        let m = catalecticant(&p, 2).unwrap();
        assert_eq!(m.shape(), (3, 3));
        assert_eq!(m.rank(), 2);
        assert_eq!(m, m.transpose());
    }

    #[test]
    fn generic_catalecticant_rank_equals_number_of_terms() {
        let f = PrimeField::default();
        for r in 1..=6 {
            let p = random_tensor(f, 2, 4, r, r as u64);
            assert_eq!(catalecticant(&p, 2).unwrap().rank(), r.min(6));
        }
    }

    #[test]
    fn complement_of_generic_ternary_quartic_catalecticant() {
        let f = PrimeField::default();
        let p = random_tensor(f, 2, 4, 3, 77);
        let m = catalecticant(&p, 2).unwrap();
        assert_eq!(m.rank(), 3);
        assert_eq!(m.complement_of_column_space().len(), 3);
    }

    #[test]
    fn koszul_rank_of_a_cube() {
        let f = RationalField;
        for n in 1..=5 {
            for a in 1..=n {
                let l = LinearForm::from_i64(f, &(1..=n as i64 + 1).collect::<Vec<_>>()).unwrap();
                let m = koszul_flattening(&expand_power(&l, 3), a).unwrap();
                assert_eq!(m.rank(), binomial(n, a), "n={n} a={a}");
            }
        }
        assert_eq!(koszul_flattening(&SymTensor::zero(f, 3, 3), 1).unwrap().rank(), 0);
        assert!(koszul_flattening(&SymTensor::zero(f, 3, 4), 1).is_err());
        assert!(koszul_flattening(&SymTensor::zero(f, 3, 3), 4).is_err());
    }

    #[test]
    fn koszul_structural_kernel_is_annihilated() {
        let f = PrimeField::default();
        for (n, a) in [(2, 1), (4, 2), (5, 2), (6, 3)] {
            let p = random_tensor(f, n, 3, 30, n as u64);
            let m = koszul_flattening(&p, a).unwrap();
            let src = wedge_basis(n, a);
            for eta in wedge_basis(n, a - 1) {
                let mut v = vec![0u64; src.len() * (n + 1)];
                for i in 0..=n {
                    if eta.contains(&i) {
                        continue;
                    }
                    let flips = eta.iter().filter(|&&x| x < i).count();
                    let mut s = eta.clone();
                    s.push(i);
                    s.sort_unstable();
                    let si = src.binary_search(&s).unwrap();
                    v[si * (n + 1) + i] = if flips % 2 == 1 { f.neg(&1) } else { 1 };
                }
                assert!(m.mul_vec(&v).iter().all(|x| *x == 0), "n={n} a={a}");
            }
            let kind = FlatteningKind::Koszul { a };
            assert!(m.rank() <= kind.rank_ceiling(n, 3));
        }
    }

    #[test]
    fn ternary_cubic_koszul_ceiling_is_eight() {
        let f = PrimeField::default();
        let p = random_tensor(f, 2, 3, 10, 4);
        let kind = FlatteningKind::Koszul { a: 1 };
        assert_eq!(kind.rank_ceiling(2, 3), 8);
        assert_eq!(kind.matrix(&p).unwrap().rank(), 8);
    }

    #[test]
    fn normal_space_for_pure_power() {
        // kernel: quadrics killing x0^2 (5), annihilator likewise (5); the
        // products span everything except the tangent space at x0^4.
        let f = PrimeField::default();
        let p = SymTensor::monomial(f, &[4, 0, 0]);
        let ns = normal_space_dimension(&p, 1).unwrap();
        assert_eq!(ns.dim, 15 - 3);
        assert!(ns.pass);
    }

    #[test]
    fn normal_space_on_ternary_quartics() {
        let f = PrimeField::default();
        let ns = normal_space_dimension(&random_tensor(f, 2, 4, 4, 1), 4).unwrap();
        assert_eq!((ns.dim, ns.expected), (3, 3));
        assert!(ns.pass);
        let ns = normal_space_dimension(&random_tensor(f, 2, 4, 5, 2), 5).unwrap();
        assert!(!ns.pass);
        let err = normal_space_dimension(&random_tensor(f, 2, 4, 2, 3), 3).unwrap_err();
        assert!(matches!(err, Error::FlatteningRankDeficient { rank: 2, expected: 3 }));
    }

    #[test]
    fn determinantal_tangent_for_one_term() {
        let f = PrimeField::default();
        let p = random_tensor(f, 2, 4, 1, 8);
        let t = determinantal_tangent_dimension(FlatteningKind::Catalecticant { k: 2 }, &p, 1).unwrap();
        assert_eq!(t.tangent_dim, 3);
        assert!(t.pass);
        let p = random_tensor(f, 3, 3, 1, 9);
        let t = determinantal_tangent_dimension(FlatteningKind::Koszul { a: 1 }, &p, 1).unwrap();
        assert_eq!(t.tangent_dim, 4);
    }

    #[test]
    fn determinantal_tangent_is_dual_to_normal_space() {
        let f = PrimeField::default();
        for (n, d, r) in [(2, 4, 3), (2, 5, 4), (3, 4, 5), (2, 6, 6)] {
            let p = random_tensor(f, n, d, r, (n + d + r) as u64);
            let ns = normal_space_dimension(&p, r).unwrap();
            let t = determinantal_tangent_dimension(FlatteningKind::Catalecticant { k: d / 2 }, &p, r).unwrap();
            assert_eq!(t.normal_dim(n, d), ns.dim, "(n,d,r)=({n},{d},{r})");
            assert_eq!(t.pass, ns.pass);
        }
    }
}
