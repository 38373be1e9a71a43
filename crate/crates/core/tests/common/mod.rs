//! Property checks shared by the standalone property suite and the acceptance runner.

#![allow(dead_code)]

use proptest::prelude::*;
use proptest::test_runner::TestCaseError;

use waring_core::criteria::{certify, CertConfig};
use waring_core::field::{Field, PrimeField, RationalField, DEFAULT_PRIME};
use waring_core::flattening::{self, FlatteningKind};
use waring_core::linalg::bareiss_rank;
use waring_core::poly::{binomial, expand_power, num_monomials, LinearForm, SymTensor};
use waring_core::reference;
use waring_core::veronese::{Term, WaringInput};
use waring_core::Matrix;

/// Second modulus for rank agreement. Both primes exceed the Hadamard bound
/// `(9·√6)^6 ≈ 1.2e8` of every minor of the sampled matrices, so the ranks
/// over `F_p` and `Q` must agree exactly.
pub const SECOND_PRIME: u64 = 1_000_000_007;

pub fn fp() -> PrimeField {
    PrimeField::new(DEFAULT_PRIME).unwrap()
}

fn elems(p: u64, len: usize) -> impl Strategy<Value = Vec<u64>> {
    prop::collection::vec(0..p, len)
}

/// `(n, d, coefficients)` for a random form over the default prime.
pub fn tensor_strategy() -> impl Strategy<Value = (usize, usize, Vec<u64>)> {
    (1usize..=4, 1usize..=5).prop_flat_map(|(n, d)| (Just(n), Just(d), elems(DEFAULT_PRIME, num_monomials(n, d))))
}

pub fn check_euler((n, d, coeffs): (usize, usize, Vec<u64>)) -> Result<(), TestCaseError> {
    let f = fp();
    let p = SymTensor::from_coeffs(f, n, d, coeffs).unwrap();
    let mut sum = SymTensor::zero(f, n, d);
    for j in 0..=n {
        sum = sum.add(&p.partial_derivative(j).unwrap().mul_variable(j));
    }
    prop_assert_eq!(sum, p.scale(&f.from_i64(d as i64)));
    Ok(())
}

fn nonzero_form(n: usize) -> impl Strategy<Value = Vec<u64>> {
    elems(DEFAULT_PRIME, n + 1).prop_filter("nonzero", |v| v.iter().any(|c| *c != 0))
}

/// Two random forms and a linear form for the rank-one check.
pub fn flattening_strategy() -> impl Strategy<Value = (usize, usize, Vec<u64>, Vec<u64>, Vec<u64>)> {
    (1usize..=4, 3usize..=6).prop_flat_map(|(n, d)| {
        let m = num_monomials(n, d);
        (Just(n), Just(d), elems(DEFAULT_PRIME, m), elems(DEFAULT_PRIME, m), nonzero_form(n))
    })
}

pub fn check_flattenings(
    (n, d, a, b, l): (usize, usize, Vec<u64>, Vec<u64>, Vec<u64>),
) -> Result<(), TestCaseError> {
    let f = fp();
    let p = SymTensor::from_coeffs(f, n, d, a).unwrap();
    let q = SymTensor::from_coeffs(f, n, d, b).unwrap();
    let l = LinearForm::new(f, l).unwrap();
    let power = expand_power(&l, d);
    let mut kinds: Vec<FlatteningKind> = (1..d).map(|k| FlatteningKind::Catalecticant { k }).collect();
    if d == 3 {
        kinds.extend((1..=n).map(|a| FlatteningKind::Koszul { a }));
    }
    for kind in kinds {
        let rp = kind.matrix(&p).unwrap().rank();
        let rq = kind.matrix(&q).unwrap().rank();
        let rs = kind.matrix(&p.add(&q)).unwrap().rank();
        prop_assert!(rs <= rp + rq, "{}: {} > {} + {}", kind.label(), rs, rp, rq);
        let expected = match kind {
            FlatteningKind::Catalecticant { .. } => 1,
            FlatteningKind::Koszul { a } => binomial(n, a),
        };
        prop_assert_eq!(kind.matrix(&power).unwrap().rank(), expected, "{}", kind.label());
    }
    Ok(())
}

/// A small subgeneric shape `(n, d, r)`, its forms, a permutation seed and scalars.
pub fn certify_strategy() -> impl Strategy<Value = (usize, usize, Vec<Vec<u64>>, Vec<u64>, Vec<u64>, u64)> {
    prop_oneof![Just((2usize, 4usize, 4usize)), Just((2, 3, 3)), Just((3, 4, 5)), Just((2, 6, 9)), Just((2, 5, 4))]
        .prop_flat_map(|(n, d, r)| {
            (
                Just(n),
                Just(d),
                prop::collection::vec(nonzero_form(n), r),
                prop::collection::vec(1..DEFAULT_PRIME, r),
                prop::collection::vec(1..DEFAULT_PRIME, r),
                any::<u64>(),
            )
        })
}

fn sorted(mut v: Vec<usize>) -> Vec<usize> {
    v.sort_unstable();
    v
}

pub fn check_certify_invariance(
    (n, d, forms, scales, weights, shuffle): (usize, usize, Vec<Vec<u64>>, Vec<u64>, Vec<u64>, u64),
) -> Result<(), TestCaseError> {
    let f = fp();
    let r = forms.len();
    let terms: Vec<Term<PrimeField>> = forms
        .iter()
        .zip(&weights)
        .map(|(c, w)| Term {
            weight: *w,
            form: LinearForm::new(f, c.clone()).unwrap(),
        })
        .collect();
    let base = WaringInput::new(f, n, d, terms.clone()).unwrap();

    // rescale each form by s and its weight by s^-d: same tensor, same points
    let mut moved: Vec<Term<PrimeField>> = terms
        .iter()
        .zip(&scales)
        .map(|(t, s)| Term {
            weight: f.mul(&t.weight, &f.inv(&f.pow(s, d as u32)).unwrap()),
            form: t.form.scaled(s).unwrap(),
        })
        .collect();
    for i in (1..r).rev() {
        let j = (shuffle.wrapping_mul(i as u64 + 7) % (i as u64 + 1)) as usize;
        moved.swap(i, j);
    }
    let other = WaringInput::new(f, n, d, moved).unwrap();
    prop_assert_eq!(base.tensor(), other.tensor());

    let cfg = CertConfig::default();
    let a = certify(&base, &cfg).unwrap();
    let b = certify(&other, &cfg).unwrap();
    prop_assert_eq!(a.status, b.status);
    prop_assert_eq!(a.stage, b.stage);
    prop_assert_eq!(a.diagnostics.rank_span, b.diagnostics.rank_span);
    prop_assert_eq!(a.diagnostics.ell, b.diagnostics.ell);
    prop_assert_eq!(sorted(a.diagnostics.hessian_ranks), sorted(b.diagnostics.hessian_ranks));
    Ok(())
}

/// `(n, d, r, forms)` with `r` at most the catalecticant bound, so the middle
/// catalecticant has rank `r`.
pub fn normal_space_strategy() -> impl Strategy<Value = (usize, usize, Vec<Vec<u64>>)> {
    (1usize..=3, 4usize..=6)
        .prop_flat_map(|(n, d)| {
            let r_max = reference::spade_formula(n, d).min((num_monomials(n, d) - 1) / (n + 1));
            (Just(n), Just(d), 1..=r_max)
        })
        .prop_flat_map(|(n, d, r)| (Just(n), Just(d), prop::collection::vec(nonzero_form(n), r)))
}

pub fn check_normal_space((n, d, forms): (usize, usize, Vec<Vec<u64>>)) -> Result<(), TestCaseError> {
    let f = fp();
    let r = forms.len();
    let forms: Vec<LinearForm<PrimeField>> = forms.into_iter().map(|c| LinearForm::new(f, c).unwrap()).collect();
    let w = WaringInput::from_forms(f, d, forms).unwrap();
    let p = w.tensor();
    let kind = FlatteningKind::Catalecticant { k: d / 2 };
    match flattening::normal_space_dimension(&p, r) {
        Ok(ns) => {
            let dt = flattening::determinantal_tangent_dimension(kind, &p, r).unwrap();
            prop_assert_eq!(ns.dim, dt.normal_dim(n, d));
        }
        // a chance coincidence among the sampled forms; nothing to compare
        Err(waring_core::Error::FlatteningRankDeficient { .. }) => {}
        Err(e) => return Err(TestCaseError::fail(e.to_string())),
    }
    Ok(())
}

pub fn matrix_strategy() -> impl Strategy<Value = (usize, usize, Vec<i64>)> {
    (1usize..=6, 1usize..=6).prop_flat_map(|(r, c)| {
        // low-rank products show up often enough to exercise rank deficiency
        (Just(r), Just(c), prop::collection::vec(prop_oneof![3 => -9i64..=9, 1 => Just(0)], r * c))
    })
}

pub fn check_rank_agreement((rows, cols, values): (usize, usize, Vec<i64>)) -> Result<(), TestCaseError> {
    let q = Matrix::from_i64(RationalField, rows, cols, &values);
    let exact = q.rank();
    prop_assert_eq!(bareiss_rank(&q), exact);
    for p in [DEFAULT_PRIME, SECOND_PRIME] {
        let m = Matrix::from_i64(PrimeField::new(p).unwrap(), rows, cols, &values);
        prop_assert_eq!(m.rank(), exact, "prime {}", p);
    }
    // a matrix of rank at most two by construction
    if rows >= 3 && cols >= 3 {
        let u = &values[..rows];
        let v = &values[rows..rows + cols];
        let mut low = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                low.push(u[i] * v[j] + u[(i + 1) % rows] * v[(j + 1) % cols]);
            }
        }
        let lq = Matrix::from_i64(RationalField, rows, cols, &low).rank();
        prop_assert!(lq <= 2);
        for p in [DEFAULT_PRIME, SECOND_PRIME] {
            prop_assert_eq!(Matrix::from_i64(PrimeField::new(p).unwrap(), rows, cols, &low).rank(), lq);
        }
    }
    Ok(())
}
