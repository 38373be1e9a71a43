//! Tangent spaces to the Veronese variety at the points of a decomposition, the
//! linear equations of their span, and the stacked-Hessian contact test.

use crate::error::Error;
use crate::field::Field;
use crate::linalg::Matrix;
use crate::par;
use crate::poly::{expand_power, multinomial, num_monomials, LinearForm, MonomialBasis, SymTensor};

/// One summand `weight · form^d`.
#[derive(Clone, Debug, PartialEq)]
pub struct Term<F: Field> {
    pub weight: F::Elem,
    pub form: LinearForm<F>,
}

/// A claimed decomposition `Σ wᵢ · lᵢ^d` with `r ≥ 1` terms.
#[derive(Clone, Debug, PartialEq)]
pub struct WaringInput<F: Field> {
    field: F,
    n: usize,
    d: usize,
    terms: Vec<Term<F>>,
}

impl<F: Field> WaringInput<F> {
    pub fn new(field: F, n: usize, d: usize, terms: Vec<Term<F>>) -> Result<Self, Error> {
        if d < 3 {
            return Err(Error::UnsupportedDegree {
                got: d,
                reason: "decompositions are certified for d >= 3",
            });
        }
        if terms.is_empty() {
            return Err(Error::InvalidConfig("a decomposition needs at least one term".into()));
        }
        for t in &terms {
            if t.form.field() != field {
                return Err(Error::DimensionMismatch("terms over different fields".into()));
            }
            if t.form.n() != n {
                return Err(Error::DimensionMismatch(format!(
                    "linear form with {} coefficients, expected {}",
                    t.form.n() + 1,
                    n + 1
                )));
            }
            if field.is_zero(&t.weight) {
                return Err(Error::ZeroWeight);
            }
        }
        Ok(Self { field, n, d, terms })
    }

    /// Unit weights.
    pub fn from_forms(field: F, d: usize, forms: Vec<LinearForm<F>>) -> Result<Self, Error> {
        let n = forms.first().map(|l| l.n()).unwrap_or(0);
        let terms = forms
            .into_iter()
            .map(|form| Term {
                weight: field.one(),
                form,
            })
            .collect();
        Self::new(field, n, d, terms)
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

    pub fn r(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> &[Term<F>] {
        &self.terms
    }

    pub fn forms(&self) -> impl Iterator<Item = &LinearForm<F>> {
        self.terms.iter().map(|t| &t.form)
    }

    /// The represented tensor `Σ wᵢ · lᵢ^d`.
    pub fn tensor(&self) -> SymTensor<F> {
        self.terms.iter().fold(SymTensor::zero(self.field, self.n, self.d), |acc, t| {
            acc.add(&expand_power(&t.form, self.d).scale(&t.weight))
        })
    }
}

/// `binom(n+d,d) × (n+1)` matrix whose column `j` holds the coefficients of `x_j · l^{d-1}`.
pub fn tangent_matrix<F: Field>(l: &LinearForm<F>, d: usize) -> Result<Matrix<F>, Error> {
    if d == 0 {
        return Err(Error::UnsupportedDegree {
            got: d,
            reason: "tangent spaces need d >= 1",
        });
    }
    let base = expand_power(l, d - 1);
    let columns: Vec<Vec<F::Elem>> = (0..=l.n()).map(|j| base.mul_variable(j).into_coeffs()).collect();
    Ok(Matrix::from_columns(l.field(), &columns, num_monomials(l.n(), d)))
}

/// The span of the tangent spaces, one row per tangent vector: `r(n+1) × binom(n+d,d)`.
#[derive(Clone, Debug)]
pub struct TangentSpan<F: Field> {
    pub n: usize,
    pub d: usize,
    pub matrix: Matrix<F>,
    pub rank: usize,
}

impl<F: Field> TangentSpan<F> {
    pub fn expected_rank(&self) -> usize {
        self.matrix.rows()
    }

    pub fn is_full(&self) -> bool {
        self.rank == self.matrix.rows()
    }
}

pub fn build_span<F: Field>(w: &WaringInput<F>) -> Result<TangentSpan<F>, Error> {
    let (n, d) = (w.n(), w.degree());
    let needed = w.r() * (n + 1);
    let available = num_monomials(n, d);
    if needed > available {
        return Err(Error::RankBudgetExceeded { needed, available });
    }
    let blocks: Vec<Matrix<F>> = par::map_slice(w.terms(), |t| {
        tangent_matrix(&t.form, d).map(|m| m.transpose())
    })
    .into_iter()
    .collect::<Result<_, _>>()?;
    let mut matrix = Matrix::zeros(w.field(), 0, available);
    for b in &blocks {
        matrix = matrix.vstack(b);
    }
    let rank = matrix.rank();
    Ok(TangentSpan { n, d, matrix, rank })
}

/// Linear equations cutting out the tangent span. Each kernel vector `k` is a
/// functional on coefficient vectors; [`ContactEquations::polynomials`] turns it
/// into the form `q(a) = Σ k_α · multinomial(α) · a^α`, which vanishes at `a`
/// exactly when `(a·x)^d` lies in the span.
#[derive(Clone, Debug)]
pub struct ContactEquations<F: Field> {
    pub n: usize,
    pub d: usize,
    pub kernel: Vec<Vec<F::Elem>>,
    pub polynomials: Vec<SymTensor<F>>,
}

impl<F: Field> ContactEquations<F> {
    pub fn ell(&self) -> usize {
        self.kernel.len()
    }
}

pub fn contact_equations<F: Field>(span: &TangentSpan<F>) -> ContactEquations<F> {
    let f = span.matrix.field();
    let kernel = span.matrix.kernel_basis();
    let basis = MonomialBasis::new(span.n, span.d);
    let weights: Vec<F::Elem> = basis.iter().map(|a| multinomial(&f, a)).collect();
    let polynomials = kernel
        .iter()
        .map(|k| {
            let coeffs = k.iter().zip(&weights).map(|(c, w)| f.mul(c, w)).collect();
            SymTensor::from_coeffs(f, span.n, span.d, coeffs).expect("basis length")
        })
        .collect();
    ContactEquations {
        n: span.n,
        d: span.d,
        kernel,
        polynomials,
    }
}

/// `(n+1) × ℓ(n+1)` horizontal stack of Hessians evaluated at one point.
#[derive(Clone, Debug)]
pub struct StackedHessian<F: Field> {
    pub matrix: Matrix<F>,
    pub rank: usize,
}

impl<F: Field> StackedHessian<F> {
    /// Left kernel `{v : vᵀ H = 0}`.
    pub fn left_kernel(&self) -> Vec<Vec<F::Elem>> {
        self.matrix.complement_of_column_space()
    }
}

/// Stacks the Hessians of `polys` at `point`. Shared with the cubic-systems module.
pub fn stacked_hessian_of<F: Field>(
    field: F,
    polys: &[SymTensor<F>],
    point: &[F::Elem],
) -> Result<StackedHessian<F>, Error> {
    let mut matrix = Matrix::zeros(field, point.len(), 0);
    for q in polys {
        matrix = matrix.hstack(&q.hessian_at(point)?);
    }
    let rank = matrix.rank();
    Ok(StackedHessian { matrix, rank })
}

pub fn stacked_hessian<F: Field>(
    eqs: &ContactEquations<F>,
    l: &LinearForm<F>,
) -> Result<StackedHessian<F>, Error> {
    if eqs.ell() == 0 {
        return Err(Error::NoContactEquations);
    }
    stacked_hessian_of(l.field(), &eqs.polynomials, l.coeffs())
}

/// True when the contact locus is zero-dimensional at the point: `rank H = n`.
pub fn contact_zero_dimensional<F: Field>(h: &StackedHessian<F>, n: usize) -> bool {
    h.rank == n
}
