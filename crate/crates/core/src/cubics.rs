//! Linear systems of quadrics and cubics that contain given linear subspaces and
//! are singular at given points, with a registry of the base-case
//! configurations used in the induction for cubics.
//!
//! Subspaces and points are realized at random over `F_p` from a seed, so
//! dimensions are those "at sampled points": by semicontinuity they can only
//! exceed the value at general points with small probability.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::field::{Field, PrimeField, DEFAULT_PRIME};
use crate::linalg::Matrix;
use crate::poly::{num_monomials, MonomialBasis, SymTensor};
use crate::veronese::stacked_hessian_of;

/// How a linear subspace of `P^n` is chosen.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SubspaceShape {
    /// `V(x_i : i ∈ indices)`.
    Coordinate(Vec<usize>),
    /// Zero set of `codim` random linear forms.
    General { codim: usize },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SubspaceSpec {
    pub name: String,
    pub shape: SubspaceShape,
    /// Impose that every form of the system vanishes on the subspace.
    pub contain: bool,
}

impl SubspaceSpec {
    pub fn contained(name: &str, shape: SubspaceShape) -> Self {
        Self {
            name: name.into(),
            shape,
            contain: true,
        }
    }

    /// A subspace that only carries points.
    pub fn support(name: &str, shape: SubspaceShape) -> Self {
        Self {
            name: name.into(),
            shape,
            contain: false,
        }
    }

    fn codim(&self) -> usize {
        match &self.shape {
            SubspaceShape::Coordinate(idx) => idx.len(),
            SubspaceShape::General { codim } => *codim,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PointPlacement {
    /// Random point on the subspace with this index.
    OnSubspace(usize),
    Ambient,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CubicSystemSpec {
    pub n: usize,
    pub degree: usize,
    pub subspaces: Vec<SubspaceSpec>,
    pub double_points: Vec<PointPlacement>,
    pub seed: u64,
    pub prime: u64,
}

impl CubicSystemSpec {
    pub fn new(n: usize, degree: usize) -> Self {
        Self {
            n,
            degree,
            subspaces: Vec::new(),
            double_points: Vec::new(),
            seed: 0,
            prime: DEFAULT_PRIME,
        }
    }

    fn validate(&self) -> Result<PrimeField, Error> {
        if !(2..=3).contains(&self.degree) {
            return Err(Error::UnsupportedDegree {
                got: self.degree,
                reason: "linear systems are built for quadrics and cubics",
            });
        }
        for s in &self.subspaces {
            match &s.shape {
                SubspaceShape::Coordinate(idx) => {
                    if let Some(&i) = idx.iter().find(|&&i| i > self.n) {
                        return Err(Error::InvalidConfig(format!(
                            "subspace {} uses variable x{i} but n = {}",
                            s.name, self.n
                        )));
                    }
                    let mut sorted = idx.clone();
                    sorted.sort_unstable();
                    sorted.dedup();
                    if sorted.len() != idx.len() || idx.is_empty() {
                        return Err(Error::InvalidConfig(format!("subspace {} has a bad index set", s.name)));
                    }
                }
                SubspaceShape::General { codim } => {
                    if *codim == 0 || *codim > self.n {
                        return Err(Error::InvalidConfig(format!(
                            "subspace {} of codimension {codim} in P^{}",
                            s.name, self.n
                        )));
                    }
                }
            }
        }
        for p in &self.double_points {
            if let PointPlacement::OnSubspace(i) = p {
                if *i >= self.subspaces.len() {
                    return Err(Error::InvalidConfig(format!("point placed on missing subspace {i}")));
                }
            }
        }
        PrimeField::new(self.prime)
    }
}

/// A subspace given both by its defining forms and by a spanning set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RealizedSubspace {
    pub equations: Vec<Vec<u64>>,
    pub basis: Vec<Vec<u64>>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Realization {
    pub subspaces: Vec<RealizedSubspace>,
    pub points: Vec<Vec<u64>>,
}

/// Draws the subspaces and points. Depends on `n`, the layout and the seed, but
/// not on the degree, so quadrics and cubics of one case share the same points.
pub fn realize(spec: &CubicSystemSpec) -> Result<Realization, Error> {
    let f = spec.validate()?;
    let n = spec.n;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let subspaces = spec
        .subspaces
        .iter()
        .map(|s| {
            let equations: Vec<Vec<u64>> = match &s.shape {
                SubspaceShape::Coordinate(idx) => idx
                    .iter()
                    .map(|&i| (0..=n).map(|j| u64::from(i == j)).collect())
                    .collect(),
                SubspaceShape::General { codim } => (0..*codim)
                    .map(|_| (0..=n).map(|_| f.random(&mut rng)).collect())
                    .collect(),
            };
            let basis = Matrix::from_rows(f, equations.clone(), n + 1).kernel_basis();
            if basis.len() != n + 1 - s.codim() {
                return Err(Error::InvalidConfig(format!("subspace {} degenerated at this seed", s.name)));
            }
            Ok(RealizedSubspace { equations, basis })
        })
        .collect::<Result<Vec<_>, Error>>()?;
    let points = spec
        .double_points
        .iter()
        .map(|p| loop {
            let v: Vec<u64> = match p {
                PointPlacement::Ambient => (0..=n).map(|_| f.random(&mut rng)).collect(),
                PointPlacement::OnSubspace(i) => {
                    let mut v = vec![0; n + 1];
                    for b in &subspaces[*i].basis {
                        let c = f.random(&mut rng);
                        for (x, y) in v.iter_mut().zip(b) {
                            *x = f.add(x, &f.mul(&c, y));
                        }
                    }
                    v
                }
            };
            if v.iter().any(|x| *x != 0) {
                break v;
            }
        })
        .collect();
    Ok(Realization { subspaces, points })
}

/// Condition rows on the coefficients of a degree-`deg` form: for each
/// contained subspace with spanning matrix `B`, the coefficients of `f(B·y)`;
/// for each double point `p`, the `n+1` partials `∂_j f(p)`.
pub fn assemble_conditions(spec: &CubicSystemSpec, real: &Realization) -> Result<Matrix<PrimeField>, Error> {
    let f = spec.validate()?;
    let (n, deg) = (spec.n, spec.degree);
    let basis = MonomialBasis::new(n, deg);
    let mut rows: Vec<Vec<u64>> = Vec::new();
    for (s, r) in spec.subspaces.iter().zip(&real.subspaces) {
        if !s.contain {
            continue;
        }
        let m = r.basis.len() - 1;
        // x_i restricted to the subspace, as a linear form in y
        let restricted: Vec<SymTensor<PrimeField>> = (0..=n)
            .map(|i| {
                let coeffs = r.basis.iter().map(|b| b[i]).collect();
                SymTensor::from_coeffs(f, m, 1, coeffs)
            })
            .collect::<Result<_, _>>()?;
        let columns: Vec<Vec<u64>> = basis
            .iter()
            .map(|alpha| {
                let mut acc = SymTensor::from_coeffs(f, m, 0, vec![1]).expect("constant");
                for (i, &e) in alpha.iter().enumerate() {
                    for _ in 0..e {
                        acc = acc.mul(&restricted[i]);
                    }
                }
                acc.into_coeffs()
            })
            .collect();
        let block = Matrix::from_columns(f, &columns, num_monomials(m, deg));
        rows.extend((0..block.rows()).map(|i| block.row(i).to_vec()));
    }
    for p in &real.points {
        for j in 0..=n {
            rows.push(
                basis
                    .iter()
                    .map(|alpha| {
                        if alpha[j] == 0 {
                            return 0;
                        }
                        let mut v = f.from_u64(u64::from(alpha[j]));
                        for (i, &e) in alpha.iter().enumerate() {
                            let e = if i == j { e - 1 } else { e };
                            v = f.mul(&v, &f.pow(&p[i], e));
                        }
                        v
                    })
                    .collect(),
            );
        }
    }
    Ok(Matrix::from_rows(f, rows, basis.len()))
}

/// The solution space of a system, with the points it was built from.
#[derive(Clone, Debug)]
pub struct SystemBasis {
    pub field: PrimeField,
    pub n: usize,
    pub degree: usize,
    pub forms: Vec<SymTensor<PrimeField>>,
    pub points: Vec<Vec<u64>>,
}

impl SystemBasis {
    pub fn dim(&self) -> usize {
        self.forms.len()
    }
}

pub fn system_dimension(spec: &CubicSystemSpec) -> Result<SystemBasis, Error> {
    let real = realize(spec)?;
    system_basis_for(spec, real)
}

fn system_basis_for(spec: &CubicSystemSpec, real: Realization) -> Result<SystemBasis, Error> {
    let f = spec.validate()?;
    let conditions = assemble_conditions(spec, &real)?;
    let kernel = if conditions.rows() == 0 {
        (0..conditions.cols())
            .map(|i| (0..conditions.cols()).map(|j| u64::from(i == j)).collect())
            .collect()
    } else {
        conditions.kernel_basis()
    };
    let forms = kernel
        .into_iter()
        .map(|k| SymTensor::from_coeffs(f, spec.n, spec.degree, k))
        .collect::<Result<_, _>>()?;
    Ok(SystemBasis {
        field: f,
        n: spec.n,
        degree: spec.degree,
        forms,
        points: real.points,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ZeroDimCheck {
    pub rank: usize,
    pub zero_dim: bool,
}

/// Stacks the Hessians of every form of the system at `point`: the common
/// singular locus is zero-dimensional there when the rank is `n`.
pub fn singular_locus_zero_dim_at(basis: &SystemBasis, point: &[u64]) -> Result<ZeroDimCheck, Error> {
    if point.len() != basis.n + 1 {
        return Err(Error::DimensionMismatch(format!(
            "point has {} coordinates, expected {}",
            point.len(),
            basis.n + 1
        )));
    }
    let h = stacked_hessian_of(basis.field, &basis.forms, point)?;
    Ok(ZeroDimCheck {
        rank: h.rank,
        zero_dim: h.rank == basis.n,
    })
}

/// `⌈(n+3)(n+2)/6⌉`, the number of general double points no cubic survives (n ≠ 4).
pub fn k_n(n: usize) -> usize {
    ((n + 3) * (n + 2)).div_ceil(6)
}

/// Cubics singular at `k_n - 1` general points: `n+1`, or `(n+1)/3` when `n ≡ 2 (mod 3)`.
pub fn ah_dimension(n: usize) -> usize {
    if n % 3 == 2 {
        (n + 1) / 3
    } else {
        n + 1
    }
}

/// Which points of a case are tested for a zero-dimensional singular locus.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CheckedPoints {
    Ambient,
    All,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Expected {
    pub dim2: Option<usize>,
    pub dim3: usize,
    pub zero_dim: Option<(CheckedPoints, bool)>,
}

struct Layout {
    subspaces: Vec<SubspaceSpec>,
    points: Vec<PointPlacement>,
}

fn general(codim: usize) -> SubspaceShape {
    SubspaceShape::General { codim }
}

fn repeat(p: PointPlacement, k: usize) -> impl Iterator<Item = PointPlacement> {
    std::iter::repeat(p).take(k)
}

fn on(i: usize, k: usize) -> impl Iterator<Item = PointPlacement> {
    repeat(PointPlacement::OnSubspace(i), k)
}

fn ambient(k: usize) -> impl Iterator<Item = PointPlacement> {
    repeat(PointPlacement::Ambient, k)
}

/// A named base case: a layout of subspaces and double points for each valid `n`,
/// and the dimensions the induction needs.
pub struct CaseDef {
    pub name: &'static str,
    pub summary: &'static str,
    pub requirement: &'static str,
    /// Values of `n` the induction takes as base cases.
    pub base_cases: &'static [usize],
    valid: fn(usize) -> bool,
    layout: fn(usize) -> Layout,
    expected: fn(usize) -> Expected,
}

impl CaseDef {
    pub fn is_valid(&self, n: usize) -> bool {
        (self.valid)(n)
    }

    pub fn expected(&self, n: usize) -> Expected {
        (self.expected)(n)
    }

    pub fn spec(&self, n: usize, degree: usize, seed: u64, prime: u64) -> Result<CubicSystemSpec, Error> {
        if !self.is_valid(n) {
            return Err(Error::InvalidConfig(format!(
                "case {} requires {}, got n = {n}",
                self.name, self.requirement
            )));
        }
        let layout = (self.layout)(n);
        Ok(CubicSystemSpec {
            n,
            degree,
            subspaces: layout.subspaces,
            double_points: layout.points,
            seed,
            prime,
        })
    }
}

pub static REGISTRY: &[CaseDef] = &[
    CaseDef {
        name: "proprep",
        summary: "L, M, N of codim 3 contained; 3, 3, 2 double points on them",
        requirement: "n >= 6",
        base_cases: &[6, 7, 8],
        valid: |n| n >= 6,
        layout: |_| Layout {
            subspaces: vec![
                SubspaceSpec::contained("L", general(3)),
                SubspaceSpec::contained("M", general(3)),
                SubspaceSpec::contained("N", general(3)),
            ],
            points: on(0, 3).chain(on(1, 3)).chain(on(2, 2)).collect(),
        },
        expected: |_| Expected {
            dim2: Some(0),
            dim3: 3,
            zero_dim: None,
        },
    },
    CaseDef {
        name: "proprep2",
        summary: "L, M of codim 3 contained; n-2 double points on each, 2 general",
        requirement: "n >= 5",
        base_cases: &[5, 6, 7],
        valid: |n| n >= 5,
        layout: |n| Layout {
            subspaces: vec![
                SubspaceSpec::contained("L", general(3)),
                SubspaceSpec::contained("M", general(3)),
            ],
            points: on(0, n - 2).chain(on(1, n - 2)).chain(ambient(2)).collect(),
        },
        expected: |n| Expected {
            dim2: Some(0),
            dim3: n + 1,
            zero_dim: Some((CheckedPoints::Ambient, true)),
        },
    },
    CaseDef {
        name: "proprep3",
        summary: "L of codim 3 contained; n(n-1)/6 double points on L, n general",
        requirement: "n >= 6 and n != 2 mod 3",
        base_cases: &[6, 7],
        valid: |n| n >= 6 && n % 3 != 2,
        layout: |n| Layout {
            subspaces: vec![SubspaceSpec::contained("L", general(3))],
            points: on(0, n * (n - 1) / 6).chain(ambient(n)).collect(),
        },
        expected: |n| Expected {
            dim2: None,
            dim3: n + 1,
            zero_dim: Some((CheckedPoints::Ambient, true)),
        },
    },
    CaseDef {
        name: "codim433",
        summary: "L codim 4, M, N codim 3 contained; 3, 4, 4 double points on them",
        requirement: "n >= 6",
        base_cases: &[6, 7, 8, 9],
        valid: |n| n >= 6,
        layout: |_| Layout {
            subspaces: vec![
                SubspaceSpec::contained("L", general(4)),
                SubspaceSpec::contained("M", general(3)),
                SubspaceSpec::contained("N", general(3)),
            ],
            points: on(0, 3).chain(on(1, 4)).chain(on(2, 4)).collect(),
        },
        expected: |_| Expected {
            dim2: None,
            dim3: 0,
            zero_dim: None,
        },
    },
    CaseDef {
        name: "codim433-2",
        summary: "L codim 4, M codim 3 contained; n-3 and (4n-10)/3 double points on them, 4 general",
        requirement: "n >= 7 and n = 1 mod 3",
        base_cases: &[7],
        valid: |n| n >= 7 && n % 3 == 1,
        layout: |n| Layout {
            subspaces: vec![
                SubspaceSpec::contained("L", general(4)),
                SubspaceSpec::contained("M", general(3)),
            ],
            points: on(0, n - 3).chain(on(1, (4 * n - 10) / 3)).chain(ambient(4)).collect(),
        },
        expected: |_| Expected {
            dim2: None,
            dim3: 0,
            zero_dim: None,
        },
    },
    CaseDef {
        name: "codim433-3",
        summary: "(n-1)(n-2)/6 double points on a codim-4 L, (4n+2)/3 general",
        requirement: "n >= 7 and n = 1 mod 3",
        base_cases: &[7],
        valid: |n| n >= 7 && n % 3 == 1,
        layout: |n| Layout {
            subspaces: vec![SubspaceSpec::support("L", general(4))],
            points: on(0, (n - 1) * (n - 2) / 6).chain(ambient((4 * n + 2) / 3)).collect(),
        },
        expected: |_| Expected {
            dim2: None,
            dim3: 0,
            zero_dim: None,
        },
    },
    CaseDef {
        name: "codim4",
        summary: "L, M codim 4 and N codim 3 contained; 4, 4, 5 double points on them",
        requirement: "n >= 8",
        base_cases: &[8, 9, 10],
        valid: |n| n >= 8,
        layout: |_| Layout {
            subspaces: vec![
                SubspaceSpec::contained("L", general(4)),
                SubspaceSpec::contained("M", general(4)),
                SubspaceSpec::contained("N", general(3)),
            ],
            points: on(0, 4).chain(on(1, 4)).chain(on(2, 5)).collect(),
        },
        expected: |_| Expected {
            dim2: None,
            dim3: 1,
            zero_dim: None,
        },
    },
    CaseDef {
        name: "codim4-pencil",
        summary: "L, M codim 4 contained; (4n-14)/3 double points on each, 5 general",
        requirement: "n >= 8 and n = 2 mod 3",
        base_cases: &[8],
        valid: |n| n >= 8 && n % 3 == 2,
        layout: |n| Layout {
            subspaces: vec![
                SubspaceSpec::contained("L", general(4)),
                SubspaceSpec::contained("M", general(4)),
            ],
            points: on(0, (4 * n - 14) / 3)
                .chain(on(1, (4 * n - 14) / 3))
                .chain(ambient(5))
                .collect(),
        },
        expected: |n| Expected {
            dim2: None,
            dim3: (n + 1) / 3,
            zero_dim: Some((CheckedPoints::Ambient, true)),
        },
    },
    CaseDef {
        name: "codim4-3",
        summary: "L codim 4 contained; (n-1)(n-2)/6 double points on L, (4n+1)/3 general",
        requirement: "n >= 8 and n = 2 mod 3",
        base_cases: &[8],
        valid: |n| n >= 8 && n % 3 == 2,
        layout: |n| Layout {
            subspaces: vec![SubspaceSpec::contained("L", general(4))],
            points: on(0, (n - 1) * (n - 2) / 6).chain(ambient((4 * n + 1) / 3)).collect(),
        },
        expected: |n| Expected {
            dim2: None,
            dim3: (n + 1) / 3,
            zero_dim: Some((CheckedPoints::Ambient, true)),
        },
    },
    CaseDef {
        name: "ah",
        summary: "k_n - 1 general double points",
        requirement: "n >= 1",
        base_cases: &[3, 5, 6, 7],
        valid: |n| n >= 1,
        layout: |n| Layout {
            subspaces: Vec::new(),
            points: ambient(k_n(n) - 1).collect(),
        },
        expected: |n| Expected {
            dim2: None,
            dim3: ah_dimension(n),
            zero_dim: None,
        },
    },
    CaseDef {
        name: "cubiche",
        summary: "k_n - 1 general double points; singular locus checked at each",
        requirement: "n >= 1",
        base_cases: &[5, 6, 7],
        valid: |n| n >= 1,
        layout: |n| Layout {
            subspaces: Vec::new(),
            points: ambient(k_n(n) - 1).collect(),
        },
        expected: |n| Expected {
            dim2: None,
            dim3: ah_dimension(n),
            zero_dim: Some((CheckedPoints::All, n != 5)),
        },
    },
];

pub fn case_names() -> Vec<&'static str> {
    REGISTRY.iter().map(|c| c.name).collect()
}

pub fn find_case(name: &str) -> Result<&'static CaseDef, Error> {
    REGISTRY.iter().find(|c| c.name == name).ok_or_else(|| Error::UnknownCase {
        name: name.to_string(),
        valid: case_names().join(", "),
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PointResult {
    pub index: usize,
    pub placement: PointPlacement,
    pub rank: usize,
    pub zero_dim: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CaseOutcome {
    pub case: String,
    pub n: usize,
    pub seed: u64,
    pub dim2: Option<usize>,
    pub dim3: usize,
    pub expected: Expected,
    pub checked: Vec<PointResult>,
    pub matches: bool,
}

impl CaseOutcome {
    /// One-line summary, e.g. `dim(2)=0 dim(3)=3 expected(0,3) MATCH`.
    pub fn line(&self) -> String {
        let mut s = String::new();
        let mut exp = Vec::new();
        if let Some(d2) = self.dim2 {
            s.push_str(&format!("dim(2)={d2} "));
        }
        if let Some(e2) = self.expected.dim2 {
            exp.push(e2.to_string());
        }
        exp.push(self.expected.dim3.to_string());
        s.push_str(&format!("dim(3)={} expected({})", self.dim3, exp.join(",")));
        if let Some((_, want)) = self.expected.zero_dim {
            let ok = self.checked.iter().filter(|p| p.zero_dim).count();
            let ranks: Vec<String> = self.checked.iter().map(|p| p.rank.to_string()).collect();
            s.push_str(&format!(
                " zero-dim {ok}/{} (hessian ranks {}) expected {}",
                self.checked.len(),
                ranks.join(","),
                if want { "all" } else { "none" }
            ));
        }
        s.push_str(if self.matches { " MATCH" } else { " MISMATCH" });
        s
    }
}

/// Builds the case at `n`, computes the cubic (and, where tabulated, quadric)
/// dimensions, and runs the singular-locus test where the case asks for it.
pub fn run_case(name: &str, n: usize, seed: u64, prime: u64) -> Result<CaseOutcome, Error> {
    let case = find_case(name)?;
    let expected = case.expected(n);
    let spec3 = case.spec(n, 3, seed, prime)?;
    let real = realize(&spec3)?;
    let basis3 = system_basis_for(&spec3, real.clone())?;
    let dim2 = match expected.dim2 {
        Some(_) => {
            let spec2 = case.spec(n, 2, seed, prime)?;
            Some(system_basis_for(&spec2, real)?.dim())
        }
        None => None,
    };
    let mut checked = Vec::new();
    if let Some((which, _)) = expected.zero_dim {
        for (index, (point, placement)) in basis3.points.iter().zip(&spec3.double_points).enumerate() {
            if which == CheckedPoints::Ambient && *placement != PointPlacement::Ambient {
                continue;
            }
            let c = singular_locus_zero_dim_at(&basis3, point)?;
            checked.push(PointResult {
                index,
                placement: *placement,
                rank: c.rank,
                zero_dim: c.zero_dim,
            });
        }
    }
    let zero_ok = match expected.zero_dim {
        Some((_, want)) => checked.iter().all(|p| p.zero_dim == want),
        None => true,
    };
    let matches = basis3.dim() == expected.dim3 && dim2 == expected.dim2 && zero_ok;
    Ok(CaseOutcome {
        case: case.name.to_string(),
        n,
        seed,
        dim2,
        dim3: basis3.dim(),
        expected,
        checked,
        matches,
    })
}
