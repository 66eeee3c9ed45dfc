//! Seeded verification campaigns and the equality-gap search.
//!
//! Every trial draws its randomness from `rng_for_stream(seed, trial)`, trials
//! run on the rayon pool, and records are collected in trial order, so a
//! report depends only on its configuration.

use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use rand::{Rng, RngCore};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::error::{invalid, Error, Result};
use crate::matrix::random::{derive_seed, ginibre, rng_for_stream, unit_vector, SeededRng};
use crate::matrix::svd::singular_values;
use crate::matrix::{diag_pinch_norm, eigh, ui_norm, ComplexMatrix, NormSpec};
use crate::norm_opt::{
    hermitian_induced_norm, hermitian_reduction, induced_norm, NormEstimate, OptConfig,
};
use crate::proof_lab::{
    build_m_sigma, build_m_uv, gram_block, lemma_bound_check, lemma_chain, m_sigma_reconstruction,
    random_psd_block, BlockMatrix2x2,
};
use crate::superop::{Superoperator, Verdict};

/// Floor on relative-gap denominators.
pub const GAP_EPS: f64 = 1e-12;

/// Schatten exponents used by default for both grids.
pub const SCHATTEN_GRID: [f64; 5] = [1.0, 1.5, 2.0, 3.0, f64::INFINITY];

pub fn schatten_grid() -> Vec<NormSpec> {
    SCHATTEN_GRID
        .iter()
        .map(|&p| NormSpec::Schatten(p))
        .collect()
}

/// `|norm − herm| / max(herm, ε)`.
pub fn relative_gap(norm: f64, herm: f64) -> f64 {
    (norm - herm).abs() / herm.max(GAP_EPS)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum VerifyKind {
    /// `‖Φ‖_{p→q} = ‖Φ‖^H_{p→q}` for random CP maps.
    Proposition,
    /// `‖B‖² ≤ ‖A‖‖C‖` on random PSD block matrices.
    Lemma,
    /// Every link of the chain on the same instances as `Lemma`.
    Chain,
    /// Norm of the diagonal part never exceeds the norm.
    Pinching,
    /// `M_σ` is PSD and equals its rank-one reconstruction.
    Msigma,
    /// `(Φ ⊗ Id_2)(M_{u,v})` and `(Φ ⊗ Id_2)(M_σ)` are PSD for CP `Φ`.
    Image,
    /// `‖Φ(σ)‖_q² ≤ ‖Φ(|σ*|)‖_q·‖Φ(|σ|)‖_q` for CP `Φ`.
    Reduction,
}

impl VerifyKind {
    pub const ALL: [VerifyKind; 7] = [
        VerifyKind::Proposition,
        VerifyKind::Lemma,
        VerifyKind::Chain,
        VerifyKind::Pinching,
        VerifyKind::Msigma,
        VerifyKind::Image,
        VerifyKind::Reduction,
    ];

    pub fn name(self) -> &'static str {
        match self {
            VerifyKind::Proposition => "proposition",
            VerifyKind::Lemma => "lemma",
            VerifyKind::Chain => "chain",
            VerifyKind::Pinching => "pinching",
            VerifyKind::Msigma => "msigma",
            VerifyKind::Image => "image",
            VerifyKind::Reduction => "reduction",
        }
    }
}

impl fmt::Display for VerifyKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for VerifyKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| Error::InvalidInput(format!("unknown verification kind {s:?}")))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CampaignConfig {
    pub kind: VerifyKind,
    /// Trials per dimension pair for `proposition`, `image` and
    /// `reduction`; total instances otherwise.
    pub trials: usize,
    /// `(m, n)` pairs for campaigns that draw maps.
    pub dims: Vec<(usize, usize)>,
    /// Domain norms, and the norm list for block-matrix campaigns.
    pub p_grid: Vec<NormSpec>,
    /// Range norms.
    pub q_grid: Vec<NormSpec>,
    /// Add Ky Fan `k ∈ {1, ⌈r/2⌉, r}` to block-matrix campaigns.
    pub ky_fan: bool,
    pub seed: u64,
    /// Pass threshold: relative gap for `proposition`, absolute or relative
    /// slack elsewhere (see each check).
    pub tolerance: f64,
    /// `(u, v, σ)` draws per map in `image`.
    pub pairs: usize,
    pub multistarts: usize,
    /// Cap on `m` and `n` for campaigns that optimize.
    pub max_dim: usize,
    /// Record wall time per trial. Off by default since timings break
    /// byte-identical reruns.
    pub timings: bool,
}

impl CampaignConfig {
    /// Defaults sized like the acceptance runs.
    pub fn new(kind: VerifyKind, seed: u64) -> Self {
        let (trials, tolerance) = match kind {
            VerifyKind::Proposition => (50, 1e-4),
            VerifyKind::Lemma | VerifyKind::Chain | VerifyKind::Pinching => (1000, 1e-9),
            VerifyKind::Msigma => (500, 1e-8),
            VerifyKind::Image => (100, 1e-8),
            VerifyKind::Reduction => (1000, 1e-8),
        };
        let dims = match kind {
            VerifyKind::Reduction => vec![(2, 2), (2, 3), (3, 3), (3, 2), (4, 4)],
            _ => vec![(2, 2), (2, 3), (3, 3)],
        };
        Self {
            kind,
            trials,
            dims,
            p_grid: schatten_grid(),
            q_grid: schatten_grid(),
            ky_fan: true,
            seed,
            tolerance,
            pairs: 100,
            multistarts: 64,
            max_dim: 4,
            timings: false,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.trials == 0 || self.pairs == 0 || self.multistarts == 0 {
            return invalid("trials, pairs and multistarts must be >= 1");
        }
        if self.p_grid.is_empty() || self.q_grid.is_empty() || self.dims.is_empty() {
            return invalid("grids and dimension list must be non-empty");
        }
        if self.tolerance.is_nan() || self.tolerance < 0.0 {
            return invalid("tolerance must be >= 0");
        }
        for spec in self.p_grid.iter().chain(&self.q_grid) {
            spec.validate()?;
        }
        for &(m, n) in &self.dims {
            if m == 0 || n == 0 {
                return invalid("dimensions must be >= 1");
            }
            let capped = matches!(self.kind, VerifyKind::Proposition);
            if capped && m.max(n) > self.max_dim {
                return Err(Error::TooLarge {
                    dim: m.max(n),
                    cap: self.max_dim,
                });
            }
        }
        Ok(())
    }

    fn opt(&self, seed: u64) -> OptConfig {
        OptConfig {
            multistarts: self.multistarts,
            max_dim: self.max_dim,
            ..OptConfig::with_seed(seed)
        }
    }
}

/// One JSON line of a campaign report.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TrialRecord {
    pub trial: usize,
    /// Enough to rebuild the instance.
    pub descriptor: Value,
    /// The measured quantities.
    pub values: Value,
    /// Relative gap, for `proposition`.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub gap: Option<f64>,
    /// Smallest normalized slack of any check in the trial; negative beyond
    /// tolerance means a violation.
    pub worst_slack: f64,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub wall_time_ms: Option<f64>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Failure {
    pub trial: usize,
    pub message: String,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CampaignSummary {
    pub kind: VerifyKind,
    pub records: usize,
    /// Largest relative gap, for `proposition`.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub max_gap: Option<f64>,
    pub worst_slack: f64,
    pub failures: Vec<Failure>,
    pub config: CampaignConfig,
}

#[derive(Clone, Debug)]
pub struct CampaignReport {
    pub records: Vec<TrialRecord>,
    pub summary: CampaignSummary,
}

impl CampaignReport {
    pub fn passed(&self) -> bool {
        self.summary.failures.is_empty()
    }

    /// One line per record, then `{"summary": ...}`.
    pub fn to_json_lines(&self) -> String {
        let mut out = String::new();
        for r in &self.records {
            out.push_str(&serde_json::to_string(r).expect("record serializes"));
            out.push('\n');
        }
        out.push_str(
            &serde_json::to_string(&json!({ "summary": &self.summary }))
                .expect("summary serializes"),
        );
        out.push('\n');
        out
    }
}

struct Outcome {
    descriptor: Value,
    values: Value,
    gap: Option<f64>,
    worst_slack: f64,
    failure: Option<String>,
}

type Timed = (Outcome, Option<f64>);

pub fn run_campaign(cfg: &CampaignConfig) -> Result<CampaignReport> {
    cfg.validate()?;
    let jobs = job_count(cfg);
    let results: Vec<Result<Vec<Timed>>> = (0..jobs)
        .into_par_iter()
        .map(|job| {
            let start = Instant::now();
            let outs = run_job(cfg, job)?;
            let ms = start.elapsed().as_secs_f64() * 1e3 / outs.len().max(1) as f64;
            Ok(outs
                .into_iter()
                .map(|o| (o, cfg.timings.then_some(ms)))
                .collect())
        })
        .collect();
    let mut records = Vec::new();
    let mut failures = Vec::new();
    for batch in results {
        for (outcome, wall_time_ms) in batch? {
            let trial = records.len();
            if let Some(message) = &outcome.failure {
                failures.push(Failure {
                    trial,
                    message: message.clone(),
                });
            }
            records.push(TrialRecord {
                trial,
                descriptor: outcome.descriptor,
                values: outcome.values,
                gap: outcome.gap,
                worst_slack: outcome.worst_slack,
                passed: outcome.failure.is_none(),
                wall_time_ms,
            });
        }
    }
    let max_gap = records.iter().filter_map(|r| r.gap).reduce(f64::max);
    let worst_slack = records
        .iter()
        .map(|r| r.worst_slack)
        .fold(f64::INFINITY, f64::min);
    Ok(CampaignReport {
        summary: CampaignSummary {
            kind: cfg.kind,
            records: records.len(),
            max_gap,
            worst_slack,
            failures,
            config: cfg.clone(),
        },
        records,
    })
}

fn job_count(cfg: &CampaignConfig) -> usize {
    match cfg.kind {
        VerifyKind::Proposition | VerifyKind::Image | VerifyKind::Reduction => {
            cfg.trials * cfg.dims.len()
        }
        _ => cfg.trials,
    }
}

fn run_job(cfg: &CampaignConfig, job: usize) -> Result<Vec<Outcome>> {
    let mut rng = rng_for_stream(cfg.seed, job as u64);
    match cfg.kind {
        VerifyKind::Proposition => proposition_job(cfg, job, &mut rng),
        VerifyKind::Lemma => Ok(vec![lemma_job(cfg, job, false)?]),
        VerifyKind::Chain => Ok(vec![lemma_job(cfg, job, true)?]),
        VerifyKind::Pinching => Ok(vec![pinching_job(cfg, job, &mut rng)?]),
        VerifyKind::Msigma => Ok(vec![msigma_job(cfg, job, &mut rng)?]),
        VerifyKind::Image => Ok(vec![image_job(cfg, job, &mut rng)?]),
        VerifyKind::Reduction => Ok(vec![reduction_job(cfg, job, &mut rng)?]),
    }
}

/// A random CP map for `job`, cycling through `cfg.dims`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct MapDescriptor {
    pub m: usize,
    pub n: usize,
    pub kraus_rank: usize,
    pub seed: u64,
}

impl MapDescriptor {
    fn draw(cfg: &CampaignConfig, job: usize, rng: &mut SeededRng) -> Self {
        let (m, n) = cfg.dims[job % cfg.dims.len()];
        Self {
            m,
            n,
            kraus_rank: rng.random_range(1..=m * n),
            seed: rng.next_u64(),
        }
    }

    pub fn build(&self) -> Result<Superoperator> {
        Superoperator::random_cp_map(self.m, self.n, self.kraus_rank, self.seed)
    }
}

fn descriptor_value<T: Serialize>(d: &T) -> Value {
    serde_json::to_value(d).expect("descriptor serializes")
}

fn proposition_job(cfg: &CampaignConfig, job: usize, rng: &mut SeededRng) -> Result<Vec<Outcome>> {
    let desc = MapDescriptor::draw(cfg, job, rng);
    let map = desc.build()?;
    let mut outs = Vec::new();
    for (i, &p) in cfg.p_grid.iter().enumerate() {
        for (j, &q) in cfg.q_grid.iter().enumerate() {
            let opt_seed = derive_seed(desc.seed, (i * cfg.q_grid.len() + j) as u64);
            let opt = cfg.opt(opt_seed);
            let full = induced_norm(&map, p, q, &opt)?;
            let herm = hermitian_induced_norm(&map, p, q, &opt)?;
            let gap = relative_gap(full.value, herm.value);
            // Hermitian inputs are a subset, so the full norm may not lose.
            let dominance = full.value - herm.value + 1e-8;
            let failure = if gap > cfg.tolerance {
                Some(format!(
                    "p={p} q={q}: gap {gap:e} exceeds {:e}",
                    cfg.tolerance
                ))
            } else if dominance < 0.0 {
                Some(format!(
                    "p={p} q={q}: hermitian value {} above full {}",
                    herm.value, full.value
                ))
            } else {
                None
            };
            outs.push(Outcome {
                descriptor: json!({ "map": descriptor_value(&desc), "p": p, "q": q, "opt_seed": opt_seed }),
                values: json!({ "norm": full.value, "herm_norm": herm.value }),
                gap: Some(gap),
                worst_slack: (cfg.tolerance - gap).min(dominance),
                failure,
            });
        }
    }
    Ok(outs)
}

/// Block instance `job` of the lemma and chain campaigns: mostly Gram
/// matrices with `2r + 2` rows, plus rank-deficient Gram matrices, `M_σ` and
/// `M_{u,v}`. `r` cycles through `1..=6`.
pub fn lemma_instance(seed: u64, job: usize) -> Result<(BlockMatrix2x2, Value)> {
    let mut rng = rng_for_stream(seed, job as u64);
    let r = 1 + job % 6;
    let (m, kind) = match job % 8 {
        3 => {
            let rank = rng.random_range(1..2 * r);
            (
                random_psd_block(&mut rng, r, rank)?,
                format!("gram_rank_{rank}"),
            )
        }
        5 => (
            build_m_sigma(&ginibre(&mut rng, r, r))?,
            "m_sigma".to_string(),
        ),
        7 => {
            let u = unit_vector(&mut rng, r);
            let v = unit_vector(&mut rng, r);
            (build_m_uv(&u, &v)?, "m_uv".to_string())
        }
        _ => (gram_block(&mut rng, r)?, "gram".to_string()),
    };
    Ok((m, json!({ "r": r, "kind": kind })))
}

/// Norms tested on `r x r` blocks: the grid plus Ky Fan `1, ⌈r/2⌉, r`.
pub fn block_norms(cfg: &CampaignConfig, r: usize) -> Vec<NormSpec> {
    let mut specs: Vec<NormSpec> = cfg
        .p_grid
        .iter()
        .copied()
        .filter(|s| s.validate_for(r).is_ok())
        .collect();
    if cfg.ky_fan {
        for k in [1, r.div_ceil(2), r] {
            let s = NormSpec::KyFan(k);
            if !specs.contains(&s) {
                specs.push(s);
            }
        }
    }
    specs
}

fn lemma_job(cfg: &CampaignConfig, job: usize, chain: bool) -> Result<Outcome> {
    let (m, descriptor) = lemma_instance(cfg.seed, job)?;
    let mut worst = f64::INFINITY;
    let mut failure = None;
    let mut values = Vec::new();
    for spec in block_norms(cfg, m.r()) {
        if chain {
            let rep = lemma_chain(&m, spec)?;
            for link in &rep.links {
                let s = link.slack / link.rhs.abs().max(1.0);
                let s = if link.relation == crate::proof_lab::Relation::Equal {
                    -s.abs()
                } else {
                    s
                };
                worst = worst.min(s);
            }
            if !rep.holds && failure.is_none() {
                let names: Vec<&str> = rep.failed_links().map(|l| l.name).collect();
                failure = Some(format!("{spec}: failed links {names:?}"));
            }
            values.push(json!({ "spec": spec, "norm_b": rep.norm_b, "final_bound": rep.final_bound, "links": rep.links.len() }));
        } else {
            let b = lemma_bound_check(&m, spec)?;
            let s = b.slack / b.rhs.max(1.0);
            worst = worst.min(s);
            if s < -cfg.tolerance && failure.is_none() {
                failure = Some(format!("{spec}: lhs {} > rhs {}", b.lhs, b.rhs));
            }
            values.push(json!({ "spec": spec, "lhs": b.lhs, "rhs": b.rhs }));
        }
    }
    Ok(Outcome {
        descriptor,
        values: Value::Array(values),
        gap: None,
        worst_slack: worst,
        failure,
    })
}

/// Average of `D_ε S D_ε` over all sign vectors `ε`.
pub fn sign_average(s: &ComplexMatrix) -> ComplexMatrix {
    let r = s.rows();
    let count = 1usize << r;
    let mut acc = ComplexMatrix::zeros(r, r);
    for mask in 0..count {
        let sign = |i: usize| if mask >> i & 1 == 1 { -1.0 } else { 1.0 };
        let t = ComplexMatrix::from_fn(r, r, |i, j| s[(i, j)] * (sign(i) * sign(j)));
        acc = &acc + &t;
    }
    acc.scale_real(1.0 / count as f64)
}

fn pinching_job(cfg: &CampaignConfig, job: usize, rng: &mut SeededRng) -> Result<Outcome> {
    let r = 1 + job % 6;
    let s = ginibre(rng, r, r);
    let avg = sign_average(&s);
    let diag = ComplexMatrix::from_diag(&s.diagonal());
    let avg_err = avg.max_abs_diff(&diag);
    let mut worst = f64::INFINITY;
    let mut failure = (avg_err > 1e-12)
        .then(|| format!("sign average differs from diagonal part by {avg_err:e}"));
    let mut values = Vec::new();
    for spec in block_norms(cfg, r) {
        let pinched = diag_pinch_norm(&s, spec)?;
        let full = ui_norm(&s, spec)?;
        let slack = (full - pinched) / full.max(1.0);
        worst = worst.min(slack);
        if slack < -cfg.tolerance && failure.is_none() {
            failure = Some(format!("{spec}: diagonal {pinched} exceeds {full}"));
        }
        values.push(json!({ "spec": spec, "diagonal": pinched, "full": full }));
    }
    Ok(Outcome {
        descriptor: json!({ "r": r }),
        values: json!({ "norms": values, "sign_average_error": avg_err }),
        gap: None,
        worst_slack: worst,
        failure,
    })
}

fn msigma_job(cfg: &CampaignConfig, job: usize, rng: &mut SeededRng) -> Result<Outcome> {
    let m = 1 + job % 8;
    let deficient = job % 5 == 4 && m > 1;
    let sigma = if deficient {
        let k = rng.random_range(1..m);
        &ginibre(rng, m, k) * &ginibre(rng, k, m)
    } else {
        ginibre(rng, m, m)
    };
    let full = build_m_sigma(&sigma)?.assemble();
    let eig = eigh(&full)?;
    let scale = eig.spectral_radius();
    let min_eig = eig.min_value();
    let rec = m_sigma_reconstruction(&sigma)?;
    let eig_slack = min_eig / scale.max(f64::MIN_POSITIVE);
    let mut failure = None;
    if min_eig < -cfg.tolerance * scale {
        failure = Some(format!(
            "min eigenvalue {min_eig:e} below -{:e}·{scale}",
            cfg.tolerance
        ));
    } else if rec.residual > 1e-9 {
        failure = Some(format!("reconstruction residual {:e}", rec.residual));
    }
    let s = singular_values(&sigma)?;
    Ok(Outcome {
        descriptor: json!({ "m": m, "rank_deficient": deficient }),
        values: json!({ "min_eigenvalue": min_eig, "norm": scale, "reconstruction_residual": rec.residual, "singular_values": s }),
        gap: None,
        worst_slack: (eig_slack + cfg.tolerance).min(1e-9 - rec.residual),
        failure,
    })
}

fn image_job(cfg: &CampaignConfig, job: usize, rng: &mut SeededRng) -> Result<Outcome> {
    let desc = MapDescriptor::draw(cfg, job, rng);
    let map = desc.build()?;
    let cp = map.is_completely_positive(1e-9)?;
    let lifted = map.tensor_with_identity(2)?;
    let mut min_uv = f64::INFINITY;
    let mut min_sigma = f64::INFINITY;
    for _ in 0..cfg.pairs {
        let u = unit_vector(rng, desc.m);
        let v = unit_vector(rng, desc.m);
        let g = ginibre(rng, desc.m, desc.m);
        let sigma = g.scale_real(1.0 / ui_norm(&g, NormSpec::TRACE)?);
        let a = lifted.apply(&build_m_uv(&u, &v)?.assemble())?;
        let b = lifted.apply(&build_m_sigma(&sigma)?.assemble())?;
        min_uv = min_uv.min(eigh(&a)?.min_value());
        min_sigma = min_sigma.min(eigh(&b)?.min_value());
    }
    let worst = min_uv.min(min_sigma);
    let failure = if cp.verdict != Verdict::Certified {
        Some("map not certified completely positive".to_string())
    } else if worst < -cfg.tolerance {
        Some(format!("image min eigenvalue {worst:e}"))
    } else {
        None
    };
    Ok(Outcome {
        descriptor: json!({ "map": descriptor_value(&desc), "pairs": cfg.pairs }),
        values: json!({ "certified_cp": cp.verdict == Verdict::Certified, "min_eig_m_uv": min_uv, "min_eig_m_sigma": min_sigma }),
        gap: None,
        worst_slack: worst + cfg.tolerance,
        failure,
    })
}

fn reduction_job(cfg: &CampaignConfig, job: usize, rng: &mut SeededRng) -> Result<Outcome> {
    let desc = MapDescriptor::draw(cfg, job, rng);
    let map = desc.build()?;
    let sigma = ginibre(rng, desc.m, desc.m);
    let mut worst = f64::INFINITY;
    let mut failure = None;
    let mut values = Vec::new();
    for &q in &cfg.q_grid {
        if q.validate_for(desc.n).is_err() {
            continue;
        }
        let c = hermitian_reduction(&map, &sigma, q)?;
        let s = c.slack / c.bound_product.max(1.0);
        worst = worst.min(c.slack + cfg.tolerance);
        if c.lhs > c.bound_product + cfg.tolerance && failure.is_none() {
            failure = Some(format!("q={q}: {} > {}", c.lhs, c.bound_product));
        }
        values.push(
            json!({ "q": q, "lhs": c.lhs, "bound_product": c.bound_product, "relative_slack": s }),
        );
    }
    Ok(Outcome {
        descriptor: json!({ "map": descriptor_value(&desc), "sigma": sigma }),
        values: Value::Array(values),
        gap: None,
        worst_slack: worst,
        failure,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GapSearchConfig {
    pub budget: usize,
    pub m: usize,
    pub n: usize,
    pub p_grid: Vec<NormSpec>,
    pub q_grid: Vec<NormSpec>,
    pub seed: u64,
    /// Keep `t = 0`, i.e. search certified-CP maps only.
    pub cp_only: bool,
    /// Relative gap allowed on the CP-only leg.
    pub tolerance: f64,
    pub multistarts: usize,
    pub max_dim: usize,
}

impl GapSearchConfig {
    pub fn new(budget: usize, m: usize, n: usize, seed: u64) -> Self {
        Self {
            budget,
            m,
            n,
            p_grid: vec![NormSpec::TRACE, NormSpec::FROBENIUS, NormSpec::OPERATOR],
            q_grid: vec![NormSpec::TRACE, NormSpec::FROBENIUS, NormSpec::OPERATOR],
            seed,
            cp_only: false,
            tolerance: 1e-4,
            multistarts: 64,
            max_dim: 4,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.budget == 0 || self.multistarts == 0 {
            return invalid("budget and multistarts must be >= 1");
        }
        if self.m == 0 || self.n == 0 {
            return invalid("dimensions must be >= 1");
        }
        if self.m.max(self.n) > self.max_dim {
            return Err(Error::TooLarge {
                dim: self.m.max(self.n),
                cap: self.max_dim,
            });
        }
        if self.p_grid.is_empty() || self.q_grid.is_empty() {
            return invalid("norm grids must be non-empty");
        }
        for spec in self.p_grid.iter().chain(&self.q_grid) {
            spec.validate()?;
        }
        Ok(())
    }
}

/// A map together with both optimizer runs, enough to replay the gap.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GapWitness {
    pub trial: usize,
    pub t: f64,
    pub base: MapDescriptor,
    /// `Φ_t = (1 − t)·Ψ + t·(T ∘ Ψ)` in Choi form.
    pub map: Value,
    pub p: NormSpec,
    pub q: NormSpec,
    pub full: NormEstimate,
    pub hermitian: NormEstimate,
    pub gap: f64,
    /// Outcome of the 2-positivity test on `Φ_t`.
    pub two_positive: Verdict,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GapSearchReport {
    pub config: GapSearchConfig,
    pub evaluated: usize,
    pub max_gap: f64,
    /// Witness of `max_gap`; always present since the budget is positive.
    pub witness: GapWitness,
    pub failures: Vec<Failure>,
}

impl GapSearchReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("report serializes")
    }
}

/// The interpolation `(1 − t)·Ψ + t·(T ∘ Ψ)`.
pub fn interpolated_map(base: &Superoperator, t: f64) -> Result<Superoperator> {
    Superoperator::linear_combination(1.0 - t, base, t, &base.then_transpose())
}

pub fn gap_search(cfg: &GapSearchConfig) -> Result<GapSearchReport> {
    cfg.validate()?;
    let dims_cfg = CampaignConfig {
        dims: vec![(cfg.m, cfg.n)],
        ..CampaignConfig::new(VerifyKind::Proposition, cfg.seed)
    };
    let per_trial: Vec<Result<GapWitness>> = (0..cfg.budget)
        .into_par_iter()
        .map(|trial| {
            let mut rng = rng_for_stream(cfg.seed, trial as u64);
            let base = MapDescriptor::draw(&dims_cfg, 0, &mut rng);
            let t = if cfg.cp_only {
                0.0
            } else {
                rng.random::<f64>()
            };
            let p = cfg.p_grid[rng.random_range(0..cfg.p_grid.len())];
            let q = cfg.q_grid[rng.random_range(0..cfg.q_grid.len())];
            let opt = OptConfig {
                multistarts: cfg.multistarts,
                max_dim: cfg.max_dim,
                ..OptConfig::with_seed(rng.next_u64())
            };
            let map = interpolated_map(&base.build()?, t)?;
            let full = induced_norm(&map, p, q, &opt)?;
            let hermitian = hermitian_induced_norm(&map, p, q, &opt)?;
            let two_positive = map.is_k_positive(2, 1000, opt.seed)?.verdict;
            Ok(GapWitness {
                trial,
                t,
                base,
                map: serde_json::to_value(&map).expect("map serializes"),
                p,
                q,
                gap: relative_gap(full.value, hermitian.value),
                full,
                hermitian,
                two_positive,
            })
        })
        .collect();
    let mut best: Option<GapWitness> = None;
    let mut failures = Vec::new();
    for w in per_trial {
        let w = w?;
        if cfg.cp_only && w.gap > cfg.tolerance {
            failures.push(Failure {
                trial: w.trial,
                message: format!("CP map with gap {:e}", w.gap),
            });
        }
        if best.as_ref().is_none_or(|b| w.gap > b.gap) {
            best = Some(w);
        }
    }
    let witness = best.expect("budget is positive");
    Ok(GapSearchReport {
        config: cfg.clone(),
        evaluated: cfg.budget,
        max_gap: witness.gap,
        witness,
        failures,
    })
}

/// Both norms of a witness recomputed from scratch.
#[derive(Clone, Debug, Serialize)]
pub struct ReplayCheck {
    pub norm: f64,
    pub herm_norm: f64,
    pub gap: f64,
    /// `|gap − recorded gap|`.
    pub gap_error: f64,
    /// `‖Φ(σ)‖_q` at the recorded full maximizer.
    pub maximizer_value: f64,
    /// Same at the recorded Hermitian maximizer.
    pub herm_maximizer_value: f64,
}

/// Rebuilds the map from the witness, reruns both optimizers with the
/// recorded configurations, and re-evaluates the recorded maximizers.
pub fn replay_witness(w: &GapWitness) -> Result<ReplayCheck> {
    let map = Superoperator::from_json(&w.map.to_string())?;
    let rerun = |est: &NormEstimate, herm: bool| -> Result<NormEstimate> {
        let cfg = est.config.clone().ok_or_else(|| {
            Error::InvalidInput("witness lacks an optimizer configuration".into())
        })?;
        if herm {
            hermitian_induced_norm(&map, w.p, w.q, &cfg)
        } else {
            induced_norm(&map, w.p, w.q, &cfg)
        }
    };
    let full = rerun(&w.full, false)?;
    let herm = rerun(&w.hermitian, true)?;
    let gap = relative_gap(full.value, herm.value);
    Ok(ReplayCheck {
        norm: full.value,
        herm_norm: herm.value,
        gap,
        gap_error: (gap - w.gap).abs(),
        maximizer_value: ui_norm(&map.apply(&w.full.maximizer)?, w.q)?,
        herm_maximizer_value: ui_norm(&map.apply(&w.hermitian.maximizer)?, w.q)?,
    })
}
