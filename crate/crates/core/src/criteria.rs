//! The certification pipeline, Kruskal's condition, and closed-form rank bounds.
//!
//! [`certify`] runs, in order:
//!
//! * S1: the tangent spaces at the `r` points span a space of dimension `r(n+1)`;
//! * S2/S3: `p` is a smooth point of the secant variety, checked through a
//!   catalecticant flattening (`d ≥ 4`) or a Koszul flattening (`d = 3`);
//! * S4: linear equations of the tangent span are computed;
//! * S5: at every point, the Hessians of those equations stack to rank `n`.
//!
//! If all pass, no other point of the Veronese variety is tangent to the span near
//! the given points, and the decomposition is the only one of length `r`.

use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::field::Field;
use crate::flattening::{self, FlatteningKind};
use crate::linalg::Matrix;
use crate::par;
use crate::poly::{binomial, num_monomials, LinearForm};
use crate::reference;
use crate::veronese::{self, WaringInput};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Status {
    Identifiable,
    Inconclusive,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Stage {
    S1,
    S2,
    S3,
    S5,
    #[serde(rename = "OK")]
    Ok,
}

impl Stage {
    pub fn as_str(&self) -> &'static str {
        match self {
            Stage::S1 => "S1",
            Stage::S2 => "S2",
            Stage::S3 => "S3",
            Stage::S5 => "S5",
            Stage::Ok => "OK",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Reason {
    /// Tangent spaces at the points are not independent.
    SpanDeficient,
    /// The flattening rank is not `r` (catalecticant only; Koszul deficiencies
    /// fall through to the tangent test).
    FlatteningRankDeficient,
    /// The determinantal locus has tangent dimension larger than `r(n+1)` at `p`.
    NormalDimExcess,
    /// Some stacked Hessian has rank below `n`.
    ContactPositiveDim,
    /// The flattening cannot separate rank `r` from general tensors, so the
    /// smoothness of `p` was not established.
    FlatteningOutOfRange,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct CertConfig {
    /// Wedge degree for cubics; `max(1, ⌊n/2⌋)` when unset.
    pub koszul_a: Option<usize>,
    /// For `d ≥ 4`, also run the determinantal tangent test next to the
    /// product-space test and record its dimension.
    pub cross_check: bool,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Diagnostics {
    pub field: String,
    /// `exact` for rationals, otherwise the modular qualification.
    pub arithmetic: String,
    pub n: usize,
    pub d: usize,
    pub r: usize,
    pub rank_span: Option<usize>,
    pub expected_rank_span: usize,
    pub ell: Option<usize>,
    pub flattening: Option<String>,
    pub flattening_rank: Option<usize>,
    pub expected_flattening_rank: Option<usize>,
    pub flattening_ceiling: Option<usize>,
    pub normal_dim: Option<usize>,
    pub expected_normal_dim: Option<usize>,
    pub tangent_dim: Option<usize>,
    pub hessian_shape: Option<(usize, usize)>,
    pub hessian_ranks: Vec<usize>,
    pub notes: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertReport {
    pub status: Status,
    pub stage: Stage,
    pub reason: Option<Reason>,
    pub diagnostics: Diagnostics,
}

impl CertReport {
    pub fn is_identifiable(&self) -> bool {
        self.status == Status::Identifiable
    }
}

/// Wall-clock time spent in each stage that ran.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Timings {
    pub stages: Vec<(String, f64)>,
    pub total_ms: f64,
}

impl Timings {
    fn record(&mut self, name: &str, since: Instant) {
        self.stages.push((name.to_string(), ms(since.elapsed())));
    }
}

fn ms(d: Duration) -> f64 {
    d.as_secs_f64() * 1e3
}

pub const MODULAR_LABEL: &str = "identifiable modulo the sampled prime";
pub const EXACT_LABEL: &str = "exact";

pub fn certify<F: Field>(w: &WaringInput<F>, cfg: &CertConfig) -> Result<CertReport, Error> {
    certify_timed(w, cfg).map(|(report, _)| report)
}

pub fn certify_timed<F: Field>(w: &WaringInput<F>, cfg: &CertConfig) -> Result<(CertReport, Timings), Error> {
    let start = Instant::now();
    let f = w.field();
    let (n, d, r) = (w.n(), w.degree(), w.r());
    let monomials = num_monomials(n, d);
    if r * (n + 1) >= monomials {
        return Err(Error::SupergenericRank {
            r,
            monomials,
            parts: n + 1,
        });
    }
    let mut timings = Timings::default();
    let mut diag = Diagnostics {
        field: f.describe(),
        arithmetic: if f.is_prime_field() { MODULAR_LABEL } else { EXACT_LABEL }.to_string(),
        n,
        d,
        r,
        expected_rank_span: r * (n + 1),
        ..Default::default()
    };
    if f.is_prime_field() {
        diag.notes.push(
            "ranks computed modulo p never exceed the rational ranks; stages passing at their maximal rank hold over Q"
                .into(),
        );
    }
    let finish = |status, stage, reason, diagnostics, mut timings: Timings| {
        timings.total_ms = ms(start.elapsed());
        Ok((
            CertReport {
                status,
                stage,
                reason,
                diagnostics,
            },
            timings,
        ))
    };

    // S1
    let t = Instant::now();
    let span = veronese::build_span(w)?;
    diag.rank_span = Some(span.rank);
    timings.record("S1", t);
    if !span.is_full() {
        return finish(Status::Inconclusive, Stage::S1, Some(Reason::SpanDeficient), diag, timings);
    }

    // S2, S3
    let t = Instant::now();
    let kind = FlatteningKind::default_for(n, d, cfg.koszul_a);
    let p = w.tensor();
    let ceiling = kind.rank_ceiling(n, d);
    diag.flattening = Some(kind.label());
    diag.expected_flattening_rank = Some(kind.expected_rank(n, r));
    diag.flattening_ceiling = Some(ceiling);
    let in_range = kind.in_range(n, d, r);
    if in_range {
        match kind {
            FlatteningKind::Catalecticant { .. } => {
                let rank = kind.matrix(&p)?.rank();
                diag.flattening_rank = Some(rank);
                if rank != r {
                    timings.record("S2", t);
                    return finish(
                        Status::Inconclusive,
                        Stage::S2,
                        Some(Reason::FlatteningRankDeficient),
                        diag,
                        timings,
                    );
                }
                timings.record("S2", t);
                let t = Instant::now();
                let ns = flattening::normal_space_dimension(&p, r)?;
                diag.normal_dim = Some(ns.dim);
                diag.expected_normal_dim = Some(ns.expected);
                if cfg.cross_check {
                    let dt = flattening::determinantal_tangent_dimension(kind, &p, r)?;
                    diag.tangent_dim = Some(dt.tangent_dim);
                    if dt.pass != ns.pass {
                        diag.notes.push("product-space and determinantal tangent tests disagree".into());
                    }
                }
                timings.record("S3", t);
                if !ns.pass {
                    return finish(Status::Inconclusive, Stage::S3, Some(Reason::NormalDimExcess), diag, timings);
                }
            }
            FlatteningKind::Koszul { .. } => {
                let dt = flattening::determinantal_tangent_dimension(kind, &p, r)?;
                diag.flattening_rank = Some(dt.flattening_rank);
                diag.tangent_dim = Some(dt.tangent_dim);
                diag.normal_dim = Some(dt.normal_dim(n, d));
                diag.expected_normal_dim = Some(monomials - r * (n + 1));
                if dt.flattening_rank < dt.expected_flattening_rank {
                    diag.notes.push(format!(
                        "Koszul rank {} is {} below the expected {}; smoothness decided by the tangent test",
                        dt.flattening_rank,
                        dt.expected_flattening_rank - dt.flattening_rank,
                        dt.expected_flattening_rank
                    ));
                }
                timings.record("S3", t);
                if !dt.pass {
                    return finish(Status::Inconclusive, Stage::S3, Some(Reason::NormalDimExcess), diag, timings);
                }
            }
        }
    } else {
        diag.notes.push(format!(
            "{} has rank at most {ceiling} but r terms need {}; smoothness of p is not established",
            kind.label(),
            kind.expected_rank(n, r)
        ));
        timings.record("S2", t);
    }

    // S4
    let t = Instant::now();
    let eqs = veronese::contact_equations(&span);
    diag.ell = Some(eqs.ell());
    timings.record("S4", t);

    // S5
    let t = Instant::now();
    let hessians = par::map_slice(w.terms(), |term| veronese::stacked_hessian(&eqs, &term.form))
        .into_iter()
        .collect::<Result<Vec<_>, _>>()?;
    diag.hessian_shape = hessians.first().map(|h| h.matrix.shape());
    diag.hessian_ranks = hessians.iter().map(|h| h.rank).collect();
    timings.record("S5", t);
    if hessians.iter().any(|h| !veronese::contact_zero_dimensional(h, n)) {
        return finish(Status::Inconclusive, Stage::S5, Some(Reason::ContactPositiveDim), diag, timings);
    }
    if !in_range {
        return finish(
            Status::Inconclusive,
            Stage::S2,
            Some(Reason::FlatteningOutOfRange),
            diag,
            timings,
        );
    }
    debug_assert!(diag.rank_span == Some(r * (n + 1)));
    debug_assert!(diag.hessian_ranks.iter().all(|&h| h == n));
    finish(Status::Identifiable, Stage::Ok, None, diag, timings)
}

/// Largest `k` such that every `k` of the forms are linearly independent.
pub fn kruskal_krank<F: Field>(forms: &[LinearForm<F>]) -> usize {
    let Some(first) = forms.first() else {
        return 0;
    };
    let f = first.field();
    let max_k = forms.len().min(first.n() + 1);
    let mut idx: Vec<usize> = Vec::new();
    for k in 1..=max_k {
        idx.clear();
        idx.extend(0..k);
        loop {
            let rows = idx.iter().map(|&i| forms[i].coeffs().to_vec()).collect();
            if Matrix::from_rows(f, rows, first.n() + 1).rank() < k {
                return k - 1;
            }
            if !next_subset(&mut idx, forms.len()) {
                break;
            }
        }
    }
    max_k
}

/// Advances a sorted index subset of `0..len` in lexicographic order.
fn next_subset(idx: &mut [usize], len: usize) -> bool {
    let k = idx.len();
    for i in (0..k).rev() {
        if idx[i] < len - k + i {
            idx[i] += 1;
            for j in i + 1..k {
                idx[j] = idx[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct KruskalResult {
    pub krank: usize,
    /// `⌊(d·k - d + 1)/2⌋`, the largest `r` the condition can certify.
    pub bound: usize,
    pub r: usize,
    pub pass: bool,
}

/// Kruskal's criterion `2r ≤ d·k - d + 1`.
pub fn kruskal_check<F: Field>(w: &WaringInput<F>) -> KruskalResult {
    let forms: Vec<LinearForm<F>> = w.forms().cloned().collect();
    let krank = kruskal_krank(&forms);
    let d = w.degree();
    let r = w.r();
    let top = (d * krank + 1).saturating_sub(d);
    KruskalResult {
        krank,
        bound: top / 2,
        r,
        pass: 2 * r <= top,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RankBounds {
    pub n: usize,
    pub d: usize,
    /// `⌈binom(n+d,d)/(n+1)⌉`.
    pub generic_rank: usize,
    /// Largest `r` with `r(n+1) < binom(n+d,d)`.
    pub max_subgeneric: usize,
    /// `binom(n+δ-1, δ-1)` with `δ = ⌊d/2⌋`.
    pub ik_bound: usize,
    /// `⌊(d(n+1) - d + 1)/2⌋`.
    pub kruskal_generic_bound: usize,
}

pub fn bounds(n: usize, d: usize) -> Result<RankBounds, Error> {
    if d < 3 {
        return Err(Error::UnsupportedDegree {
            got: d,
            reason: "rank bounds are tabulated for d >= 3",
        });
    }
    let monomials = binomial(n + d, d);
    Ok(RankBounds {
        n,
        d,
        generic_rank: reference::generic_rank(n, d),
        max_subgeneric: (monomials - 1) / (n + 1),
        ik_bound: reference::spade_formula(n, d),
        kruskal_generic_bound: reference::kruskal_formula(n, d),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{PrimeField, RationalField};
    use crate::veronese::Term;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn random_input(n: usize, d: usize, r: usize, seed: u64) -> WaringInput<PrimeField> {
        let f = PrimeField::default();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let forms = (0..r)
            .map(|_| LinearForm::new(f, (0..=n).map(|_| f.random_nonzero(&mut rng)).collect()).unwrap())
            .collect();
        WaringInput::from_forms(f, d, forms).unwrap()
    }

    #[test]
    fn single_power_is_identifiable() {
        for (n, d) in [(1, 3), (2, 3), (2, 4), (3, 5), (1, 6)] {
            let report = certify(&random_input(n, d, 1, 5), &CertConfig::default()).unwrap();
            assert!(report.is_identifiable(), "n={n} d={d}: {report:?}");
            assert_eq!(report.stage, Stage::Ok);
            assert_eq!(report.diagnostics.hessian_ranks, vec![n]);
        }
    }

    #[test]
    fn proportional_forms_fail_at_s1() {
        let f = RationalField;
        let forms = vec![
            LinearForm::from_i64(f, &[1, 2, 3]).unwrap(),
            LinearForm::from_i64(f, &[2, 4, 6]).unwrap(),
        ];
        let report = certify(&WaringInput::from_forms(f, 4, forms).unwrap(), &CertConfig::default()).unwrap();
        assert_eq!(report.status, Status::Inconclusive);
        assert_eq!(report.stage, Stage::S1);
        assert_eq!(report.reason, Some(Reason::SpanDeficient));
        assert_eq!(report.diagnostics.rank_span, Some(3));
        assert_eq!(report.diagnostics.ell, None);
    }

    #[test]
    fn supergeneric_input_is_rejected() {
        let err = certify(&random_input(2, 3, 4, 1), &CertConfig::default()).unwrap_err();
        assert!(matches!(err, Error::SupergenericRank { r: 4, monomials: 10, parts: 3 }));
        // r(n+1) = binom(n+d,d) exactly is not strictly subgeneric
        let err = certify(&random_input(2, 4, 5, 1), &CertConfig::default()).unwrap_err();
        assert!(matches!(err, Error::SupergenericRank { .. }));
    }

    #[test]
    fn quartic_surfaces_with_eight_terms_are_not_certified() {
        let report = certify(&random_input(3, 4, 8, 3), &CertConfig::default()).unwrap();
        assert_eq!(report.stage, Stage::S5);
        assert_eq!(report.reason, Some(Reason::ContactPositiveDim));
        assert_eq!(report.diagnostics.hessian_ranks, vec![2; 8]);
    }

    #[test]
    fn plane_quartics_with_four_terms_pass_both_smoothness_tests() {
        let report = certify(&random_input(2, 4, 4, 9), &CertConfig { cross_check: true, ..Default::default() }).unwrap();
        assert!(report.is_identifiable(), "{report:?}");
        assert_eq!(report.diagnostics.tangent_dim, Some(12));
        assert_eq!(report.diagnostics.normal_dim, Some(3));
    }

    #[test]
    fn cubic_pipeline_uses_koszul() {
        let report = certify(&random_input(3, 3, 4, 2), &CertConfig::default()).unwrap();
        assert!(report.is_identifiable(), "{report:?}");
        assert_eq!(report.diagnostics.flattening.as_deref(), Some("koszul(a=1)"));
        assert_eq!(report.diagnostics.tangent_dim, Some(16));
    }

    #[test]
    fn unit_weights_and_scaled_weights_agree() {
        let w = random_input(2, 5, 4, 11);
        let f = w.field();
        let terms = w
            .terms()
            .iter()
            .enumerate()
            .map(|(i, t)| Term {
                weight: f.from_i64(i as i64 + 2),
                form: t.form.scaled(&f.from_i64(7 - i as i64)).unwrap(),
            })
            .collect();
        let scaled = WaringInput::new(f, w.n(), w.degree(), terms).unwrap();
        let cfg = CertConfig::default();
        assert_eq!(certify(&w, &cfg).unwrap(), certify(&scaled, &cfg).unwrap());
    }

    #[test]
    fn krank_small_cases() {
        let f = RationalField;
        let basis: Vec<_> = (0..4)
            .map(|i| {
                let mut v = vec![0; 4];
                v[i] = 1;
                LinearForm::from_i64(f, &v).unwrap()
            })
            .collect();
        assert_eq!(kruskal_krank(&basis), 4);
        let mut with_dup = basis.clone();
        with_dup.push(LinearForm::from_i64(f, &[0, 3, 0, 0]).unwrap());
        assert_eq!(kruskal_krank(&with_dup), 1);
        let mut plus_sum = basis.clone();
        plus_sum.push(LinearForm::from_i64(f, &[1, 1, 1, 0]).unwrap());
        assert_eq!(kruskal_krank(&plus_sum), 3);
        assert_eq!(kruskal_krank::<RationalField>(&[]), 0);
    }

    #[test]
    fn kruskal_on_two_binary_points() {
        let w = random_input(1, 3, 2, 4);
        let k = kruskal_check(&w);
        assert_eq!((k.krank, k.bound, k.pass), (2, 2, true));
    }

    #[test]
    fn kruskal_generic_maxima_for_plane_curves() {
        for (d, expected) in [(4, 4), (5, 5)] {
            // a single term never satisfies 2r <= d·1 - d + 1
            assert!(!kruskal_check(&random_input(2, d, 1, 1)).pass);
            let max = (2..=8)
                .take_while(|&r| kruskal_check(&random_input(2, d, r, r as u64)).pass)
                .last()
                .unwrap();
            assert_eq!(max, expected, "d={d}");
        }
    }

    #[test]
    fn bounds_closed_forms() {
        let b = bounds(3, 4).unwrap();
        assert_eq!((b.ik_bound, b.kruskal_generic_bound), (4, 6));
        assert_eq!(bounds(2, 6).unwrap().ik_bound, 6);
        let b = bounds(5, 3).unwrap();
        assert_eq!((b.generic_rank, b.max_subgeneric), (10, 9));
        assert!(bounds(2, 2).is_err());
    }

    #[test]
    fn subset_enumeration_counts() {
        let mut idx = vec![0, 1, 2];
        let mut count = 1;
        while next_subset(&mut idx, 6) {
            count += 1;
        }
        assert_eq!(count, 20);
    }
}
