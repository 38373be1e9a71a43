//! Randomized scans: certify many random decompositions of the same shape, and
//! probe the range of the smoothness tests one `r` at a time.
//!
//! Every random draw comes from a ChaCha stream keyed by `(seed, index)`, so a
//! result depends only on its configuration, never on thread scheduling.

use std::collections::BTreeMap;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::criteria::{certify, CertConfig, Reason, Stage, Status};
use crate::error::Error;
use crate::field::PrimeField;
use crate::flattening::{self, FlatteningKind};
use crate::par;
use crate::poly::{num_monomials, LinearForm};
use crate::reference;
use crate::veronese::WaringInput;

/// Printed with every scan: a random sample certifies nothing about all points.
pub const GENERIC_NOTE: &str = "generic only as a high-probability statement, never a proof";

pub const DEFAULT_TRIALS: usize = 10;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScanConfig {
    pub n: usize,
    pub d: usize,
    pub r: usize,
    pub trials: usize,
    pub prime: u64,
    pub seed: u64,
    pub koszul_a: Option<usize>,
}

impl ScanConfig {
    pub fn new(n: usize, d: usize, r: usize) -> Self {
        Self {
            n,
            d,
            r,
            trials: DEFAULT_TRIALS,
            prime: crate::field::DEFAULT_PRIME,
            seed: 0,
            koszul_a: None,
        }
    }
}

/// `r` random forms with coordinates uniform in `F_p`, redrawn if all zero.
pub fn random_decomposition(
    field: PrimeField,
    n: usize,
    d: usize,
    r: usize,
    seed: u64,
    stream: u64,
) -> Result<WaringInput<PrimeField>, Error> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    let forms = (0..r)
        .map(|_| loop {
            let coeffs: Vec<u64> = (0..=n).map(|_| field.random(&mut rng)).collect();
            if coeffs.iter().any(|c| *c != 0) {
                break LinearForm::new(field, coeffs);
            }
        })
        .collect::<Result<Vec<_>, _>>()?;
    WaringInput::from_forms(field, d, forms)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TrialSummary {
    pub trial: usize,
    pub status: Status,
    pub stage: Stage,
    pub reason: Option<Reason>,
    pub rank_span: Option<usize>,
    pub flattening_rank: Option<usize>,
    pub normal_dim: Option<usize>,
    pub tangent_dim: Option<usize>,
    pub hessian_ranks: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScanResult {
    pub config: ScanConfig,
    pub trials: Vec<TrialSummary>,
    pub certified: usize,
    pub certified_fraction: f64,
    pub stage_counts: BTreeMap<String, usize>,
    pub modal_failure_stage: Option<Stage>,
    pub modal_hessian_profile: Option<Vec<usize>>,
    pub note: String,
}

fn mode<T: Ord + Clone>(items: impl Iterator<Item = T>) -> Option<T> {
    let mut counts: BTreeMap<T, usize> = BTreeMap::new();
    for it in items {
        *counts.entry(it).or_default() += 1;
    }
    // ties go to the smallest key
    let best = counts.values().copied().max()?;
    counts.into_iter().find(|(_, c)| *c == best).map(|(k, _)| k)
}

pub fn generic_scan(cfg: &ScanConfig) -> Result<ScanResult, Error> {
    if cfg.trials == 0 {
        return Err(Error::InvalidConfig("trials must be at least 1".into()));
    }
    if cfg.r == 0 {
        return Err(Error::InvalidConfig("r must be at least 1".into()));
    }
    let field = PrimeField::new(cfg.prime)?;
    let cert = CertConfig {
        koszul_a: cfg.koszul_a,
        cross_check: false,
    };
    let trials = par::map_range(cfg.trials, |t| {
        let w = random_decomposition(field, cfg.n, cfg.d, cfg.r, cfg.seed, t as u64)?;
        let report = certify(&w, &cert)?;
        let dg = report.diagnostics;
        Ok(TrialSummary {
            trial: t,
            status: report.status,
            stage: report.stage,
            reason: report.reason,
            rank_span: dg.rank_span,
            flattening_rank: dg.flattening_rank,
            normal_dim: dg.normal_dim,
            tangent_dim: dg.tangent_dim,
            hessian_ranks: dg.hessian_ranks,
        })
    })
    .into_iter()
    .collect::<Result<Vec<_>, Error>>()?;

    let certified = trials.iter().filter(|t| t.status == Status::Identifiable).count();
    if certified > 0 {
        assert!(
            cfg.r * (cfg.n + 1) < num_monomials(cfg.n, cfg.d),
            "certified a decomposition outside the subgeneric range"
        );
    }
    let mut stage_counts = BTreeMap::new();
    for t in &trials {
        *stage_counts.entry(t.stage.as_str().to_string()).or_default() += 1;
    }
    let modal_failure_stage = mode(trials.iter().filter(|t| t.stage != Stage::Ok).map(|t| t.stage));
    let modal_hessian_profile = mode(
        trials
            .iter()
            .filter(|t| !t.hessian_ranks.is_empty())
            .map(|t| t.hessian_ranks.clone()),
    );
    Ok(ScanResult {
        config: *cfg,
        certified,
        certified_fraction: certified as f64 / cfg.trials as f64,
        trials,
        stage_counts,
        modal_failure_stage,
        modal_hessian_profile,
        note: GENERIC_NOTE.to_string(),
    })
}

/// Outcome of one smoothness probe at a random point of the `r`-th secant variety.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Probe {
    pub r: usize,
    pub pass: bool,
    pub flattening_rank: Option<usize>,
    /// Product-space dimension (catalecticant) or tangent dimension (Koszul).
    pub dimension: Option<usize>,
    pub expected_dimension: usize,
    pub note: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TableRow {
    pub n: usize,
    pub d: usize,
    pub probes: Vec<Probe>,
    /// Largest `r` such that every `r' ≤ r` passed.
    pub max_pass: usize,
    pub reference: Option<usize>,
}

impl TableRow {
    fn from_probes(n: usize, d: usize, probes: Vec<Probe>, reference: Option<usize>) -> Self {
        let max_pass = probes.iter().take_while(|p| p.pass).count();
        Self {
            n,
            d,
            probes,
            max_pass,
            reference,
        }
    }

    pub fn probe(&self, r: usize) -> Option<&Probe> {
        self.probes.iter().find(|p| p.r == r)
    }
}

/// Runs the catalecticant product-space test at one random point for each
/// `r = 1..=r_max`. Ranks that are not strictly subgeneric fail outright.
pub fn table1_row(d: usize, n: usize, r_max: usize, prime: u64, seed: u64) -> Result<TableRow, Error> {
    if d < 4 {
        return Err(Error::UnsupportedDegree {
            got: d,
            reason: "the catalecticant table starts at d = 4",
        });
    }
    if n == 0 {
        return Err(Error::Unsupported("n = 0 has a single point and no decompositions to probe".into()));
    }
    let field = PrimeField::new(prime)?;
    let total = num_monomials(n, d);
    let probes = par::map_range(r_max, |i| {
        let r = i + 1;
        let w = random_decomposition(field, n, d, r, seed, r as u64)?;
        let expected_dimension = total.saturating_sub(r * (n + 1));
        if r * (n + 1) >= total {
            return Ok(Probe {
                r,
                pass: false,
                flattening_rank: None,
                dimension: None,
                expected_dimension,
                note: Some("not subgeneric: the normal space is empty".into()),
            });
        }
        Ok(match flattening::normal_space_dimension(&w.tensor(), r) {
            Ok(ns) => Probe {
                r,
                pass: ns.pass,
                flattening_rank: Some(ns.flattening_rank),
                dimension: Some(ns.dim),
                expected_dimension,
                note: None,
            },
            Err(Error::FlatteningRankDeficient { rank, .. }) => Probe {
                r,
                pass: false,
                flattening_rank: Some(rank),
                dimension: None,
                expected_dimension,
                note: Some("FLATTENING_RANK_DEFICIENT".into()),
            },
            Err(e) => return Err(e),
        })
    })
    .into_iter()
    .collect::<Result<Vec<_>, Error>>()?;
    let reference = reference::table1(n, d).and_then(|t| t.club);
    Ok(TableRow::from_probes(n, d, probes, reference))
}

/// Runs the Koszul determinantal tangent test on random cubics for each
/// `r = 1..=r_max`. A probe passes when `r · binom(n,a)` fits under the rank
/// ceiling and the tangent dimension equals `r(n+1)`.
pub fn table2_row(n: usize, r_max: usize, prime: u64, seed: u64, a: Option<usize>) -> Result<TableRow, Error> {
    if n == 0 {
        return Err(Error::Unsupported("n = 0 has a single point and no decompositions to probe".into()));
    }
    let field = PrimeField::new(prime)?;
    let kind = FlatteningKind::default_for(n, 3, a);
    let probes = par::map_range(r_max, |i| {
        let r = i + 1;
        let expected_dimension = r * (n + 1);
        if !kind.in_range(n, 3, r) {
            return Ok(Probe {
                r,
                pass: false,
                flattening_rank: None,
                dimension: None,
                expected_dimension,
                note: Some("FLATTENING_OUT_OF_RANGE".into()),
            });
        }
        let w = random_decomposition(field, n, 3, r, seed, r as u64)?;
        let dt = flattening::determinantal_tangent_dimension(kind, &w.tensor(), r)?;
        let note = (dt.flattening_rank < dt.expected_flattening_rank).then(|| {
            format!(
                "rank {} = {} - {}",
                dt.flattening_rank,
                dt.expected_flattening_rank,
                dt.expected_flattening_rank - dt.flattening_rank
            )
        });
        Ok(Probe {
            r,
            pass: dt.pass,
            flattening_rank: Some(dt.flattening_rank),
            dimension: Some(dt.tangent_dim),
            expected_dimension,
            note,
        })
    })
    .into_iter()
    .collect::<Result<Vec<_>, Error>>()?;
    Ok(TableRow::from_probes(n, 3, probes, reference::table2(n)))
}
