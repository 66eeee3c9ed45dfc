//! Induced norms `‖Φ‖_{p→q} = max ‖Φ(σ)‖_q` over `‖σ‖_p ≤ 1`, and the
//! Hermitian-restricted variant where σ ranges over Hermitian matrices only.
//!
//! Both are maximized by multistart local ascent. Every start is seeded from
//! `(cfg.seed, start_index)`, and the best start wins, lowest index on ties.
//! Reported values are attained at the returned maximizer, so they are lower
//! bounds on the true norm.

mod ascent;
mod feasible;
mod gradient;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::norm::sorted_gauge;
use crate::matrix::random::{ginibre, rng_for_stream, rng_from_seed};
use crate::matrix::svd::singular_values;
use crate::matrix::{polar_abs, ui_norm, ComplexMatrix, NormSpec};
use crate::superop::{Superoperator, DEFAULT_DIM_CAP};

pub use feasible::Domain;

/// Local ascent used from each start.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AscentMethod {
    /// Alternates the supporting functional of the q-norm at `Φ(σ)` with the
    /// maximizer of the pulled-back functional over the p-ball. Monotone.
    DualPower,
    /// Gradient ascent with central-difference gradients on the factored
    /// parameterization `U·Diag(d)·V†` (or its extreme-point forms), with
    /// unitary factors updated through exponentials of Hermitian generators.
    RetractionGradient,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OptConfig {
    pub multistarts: usize,
    pub max_iters: usize,
    /// Initial step length for [`AscentMethod::RetractionGradient`].
    pub step_init: f64,
    /// Stop a start once the objective improves by less than
    /// `conv_tol · max(1, value)` in one iteration.
    pub conv_tol: f64,
    pub seed: u64,
    pub max_dim: usize,
    pub method: AscentMethod,
}

impl Default for OptConfig {
    fn default() -> Self {
        Self {
            multistarts: 64,
            max_iters: 500,
            step_init: 0.1,
            conv_tol: 1e-10,
            seed: 0,
            max_dim: DEFAULT_DIM_CAP,
            method: AscentMethod::DualPower,
        }
    }
}

impl OptConfig {
    pub fn with_seed(seed: u64) -> Self {
        Self {
            seed,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.multistarts == 0 || self.max_iters == 0 {
            return Err(Error::InvalidInput(
                "multistarts and max_iters must be >= 1".into(),
            ));
        }
        if !(self.step_init > 0.0 && self.conv_tol > 0.0) {
            return Err(Error::InvalidInput(
                "step_init and conv_tol must be > 0".into(),
            ));
        }
        Ok(())
    }
}

/// Best value found, where it was found, and enough context to replay it.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct NormEstimate {
    pub value: f64,
    pub maximizer: ComplexMatrix,
    pub per_start_values: Vec<f64>,
    pub best_start: usize,
    pub seed: u64,
    pub restricted_hermitian: bool,
    pub p: NormSpec,
    pub q: NormSpec,
    /// `None` for the sampling oracle.
    pub config: Option<OptConfig>,
}

impl NormEstimate {
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("estimate serializes")
    }
}

/// Objective data shared by all starts.
pub(crate) struct Problem<'a> {
    pub map: &'a Superoperator,
    pub p: NormSpec,
    pub q: NormSpec,
    pub domain: Domain,
}

impl Problem<'_> {
    pub fn dim(&self) -> usize {
        self.map.dim_in()
    }

    /// `‖Φ(σ)‖_q`.
    pub fn value(&self, sigma: &ComplexMatrix) -> f64 {
        let image = self.map.apply(sigma).expect("shape checked up front");
        let s = singular_values(&image).expect("finite image");
        sorted_gauge(&s, self.q)
    }
}

/// Outcome of one start.
#[derive(Clone, Debug)]
pub struct StartResult {
    pub value: f64,
    pub sigma: ComplexMatrix,
    pub iterations: usize,
}

/// `‖Φ‖_{p→q}` over all complex `σ` (lower bound attained at the maximizer).
pub fn induced_norm(
    map: &Superoperator,
    p: NormSpec,
    q: NormSpec,
    cfg: &OptConfig,
) -> Result<NormEstimate> {
    maximize(map, p, q, cfg, Domain::Full)
}

/// `‖Φ‖^H_{p→q}`: the same maximization restricted to Hermitian `σ`.
pub fn hermitian_induced_norm(
    map: &Superoperator,
    p: NormSpec,
    q: NormSpec,
    cfg: &OptConfig,
) -> Result<NormEstimate> {
    maximize(map, p, q, cfg, Domain::Hermitian)
}

/// Re-runs a single start of [`induced_norm`] or [`hermitian_induced_norm`].
pub fn replay_start(
    map: &Superoperator,
    p: NormSpec,
    q: NormSpec,
    cfg: &OptConfig,
    domain: Domain,
    start: usize,
) -> Result<StartResult> {
    check_problem(map, p, q, cfg)?;
    let problem = Problem { map, p, q, domain };
    Ok(run_start(&problem, cfg, start))
}

fn check_problem(map: &Superoperator, p: NormSpec, q: NormSpec, cfg: &OptConfig) -> Result<()> {
    cfg.validate()?;
    for dim in [map.dim_in(), map.dim_out()] {
        if dim > cfg.max_dim {
            return Err(Error::TooLarge {
                dim,
                cap: cfg.max_dim,
            });
        }
    }
    p.validate_for(map.dim_in())?;
    q.validate_for(map.dim_out())
}

fn run_start(problem: &Problem<'_>, cfg: &OptConfig, start: usize) -> StartResult {
    let mut rng = rng_for_stream(cfg.seed, start as u64);
    let sigma0 = feasible::initial_point(&mut rng, problem.dim(), problem.p, problem.domain);
    match cfg.method {
        AscentMethod::DualPower => ascent::dual_power(problem, sigma0, cfg),
        AscentMethod::RetractionGradient => gradient::retraction_gradient(problem, sigma0, cfg),
    }
}

fn maximize(
    map: &Superoperator,
    p: NormSpec,
    q: NormSpec,
    cfg: &OptConfig,
    domain: Domain,
) -> Result<NormEstimate> {
    check_problem(map, p, q, cfg)?;
    let problem = Problem { map, p, q, domain };
    let results: Vec<StartResult> = (0..cfg.multistarts)
        .into_par_iter()
        .map(|start| run_start(&problem, cfg, start))
        .collect();
    let best_start = best_index(results.iter().map(|r| r.value));
    let best = &results[best_start];
    Ok(NormEstimate {
        value: best.value,
        maximizer: best.sigma.clone(),
        per_start_values: results.iter().map(|r| r.value).collect(),
        best_start,
        seed: cfg.seed,
        restricted_hermitian: domain == Domain::Hermitian,
        p,
        q,
        config: Some(cfg.clone()),
    })
}

/// Index of the largest value; the earliest wins ties.
fn best_index(values: impl Iterator<Item = f64>) -> usize {
    let mut best = 0;
    let mut best_val = f64::NEG_INFINITY;
    for (i, v) in values.enumerate() {
        if v > best_val {
            best = i;
            best_val = v;
        }
    }
    best
}

/// Brute-force lower bound: the best of `samples` Gaussian matrices scaled
/// onto the p-sphere (symmetrized first when `hermitian`).
pub fn sampling_oracle(
    map: &Superoperator,
    p: NormSpec,
    q: NormSpec,
    samples: usize,
    seed: u64,
    hermitian: bool,
) -> Result<NormEstimate> {
    if samples == 0 {
        return Err(Error::InvalidInput("samples must be >= 1".into()));
    }
    let m = map.dim_in();
    p.validate_for(m)?;
    q.validate_for(map.dim_out())?;
    let domain = if hermitian {
        Domain::Hermitian
    } else {
        Domain::Full
    };
    let problem = Problem { map, p, q, domain };
    let mut rng = rng_from_seed(seed);
    let mut values = Vec::with_capacity(samples);
    let mut best: Option<(f64, ComplexMatrix)> = None;
    for _ in 0..samples {
        let mut g = ginibre(&mut rng, m, m);
        if hermitian {
            g = g.hermitian_part();
        }
        let nrm = ui_norm(&g, p)?;
        if nrm == 0.0 {
            values.push(0.0);
            continue;
        }
        let sigma = g.scale_real(1.0 / nrm);
        let v = problem.value(&sigma);
        values.push(v);
        if best.as_ref().is_none_or(|(b, _)| v > *b) {
            best = Some((v, sigma));
        }
    }
    let best_start = best_index(values.iter().copied());
    let (value, maximizer) = best.unwrap_or_else(|| (0.0, ComplexMatrix::zeros(m, m)));
    Ok(NormEstimate {
        value,
        maximizer,
        per_start_values: values,
        best_start,
        seed,
        restricted_hermitian: hermitian,
        p,
        q,
        config: None,
    })
}

/// The two sides of `‖Φ(σ)‖_q² ≤ ‖Φ((σσ†)^{1/2})‖_q · ‖Φ((σ†σ)^{1/2})‖_q`,
/// which holds for every 2-positive `Φ`.
#[derive(Clone, Debug, Serialize)]
pub struct ReductionCheck {
    pub lhs: f64,
    pub bound_product: f64,
    pub left_image_norm: f64,
    pub right_image_norm: f64,
    pub slack: f64,
    /// `lhs ≤ bound_product + 1e-8`.
    pub holds: bool,
}

pub fn hermitian_reduction(
    map: &Superoperator,
    sigma: &ComplexMatrix,
    q: NormSpec,
) -> Result<ReductionCheck> {
    let (left, right) = polar_abs(sigma)?;
    let image = ui_norm(&map.apply(sigma)?, q)?;
    let left_image_norm = ui_norm(&map.apply(&left)?, q)?;
    let right_image_norm = ui_norm(&map.apply(&right)?, q)?;
    let lhs = image * image;
    let bound_product = left_image_norm * right_image_norm;
    Ok(ReductionCheck {
        lhs,
        bound_product,
        left_image_norm,
        right_image_norm,
        slack: bound_product - lhs,
        holds: lhs <= bound_product + 1e-8,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::random::ginibre;

    fn quick(seed: u64) -> OptConfig {
        OptConfig {
            multistarts: 16,
            ..OptConfig::with_seed(seed)
        }
    }

    #[test]
    fn identity_channel_small_to_large_is_one() {
        let id = Superoperator::identity(3).unwrap();
        for (p, q) in [(1.0, 2.0), (2.0, 2.0), (1.5, f64::INFINITY), (1.0, 1.0)] {
            let est =
                induced_norm(&id, NormSpec::Schatten(p), NormSpec::Schatten(q), &quick(1)).unwrap();
            assert!((est.value - 1.0).abs() < 1e-9, "p={p} q={q}: {}", est.value);
            let h = hermitian_induced_norm(
                &id,
                NormSpec::Schatten(p),
                NormSpec::Schatten(q),
                &quick(1),
            )
            .unwrap();
            assert!((h.value - 1.0).abs() < 1e-9);
            assert!(h.maximizer.is_hermitian(1e-9));
        }
    }

    #[test]
    fn identity_channel_large_to_small_closed_form() {
        let id = Superoperator::identity(2).unwrap();
        let (p, q) = (f64::INFINITY, 1.0);
        let est =
            induced_norm(&id, NormSpec::Schatten(p), NormSpec::Schatten(q), &quick(2)).unwrap();
        assert!((est.value - 2.0).abs() < 1e-9);
        let est = induced_norm(
            &id,
            NormSpec::Schatten(3.0),
            NormSpec::Schatten(1.5),
            &quick(2),
        )
        .unwrap();
        let want = 2f64.powf(1.0 / 1.5 - 1.0 / 3.0);
        assert!((est.value - want).abs() < 1e-8);
    }

    #[test]
    fn rank_one_map_trace_domain_is_one() {
        let mut rng = rng_from_seed(4);
        let u = crate::matrix::random::unit_vector(&mut rng, 2);
        let w = crate::matrix::random::unit_vector(&mut rng, 2);
        let phi = Superoperator::from_kraus(vec![ComplexMatrix::outer(&w, &u)]).unwrap();
        for q in [
            NormSpec::TRACE,
            NormSpec::FROBENIUS,
            NormSpec::OPERATOR,
            NormSpec::Schatten(1.5),
        ] {
            let est = induced_norm(&phi, NormSpec::TRACE, q, &quick(3)).unwrap();
            assert!((est.value - 1.0).abs() < 1e-9, "{q}");
        }
    }

    #[test]
    fn estimate_invariants() {
        let phi = Superoperator::random_cp_map(2, 3, 2, 6).unwrap();
        for hermitian in [false, true] {
            for p in [
                NormSpec::TRACE,
                NormSpec::Schatten(1.5),
                NormSpec::OPERATOR,
                NormSpec::KyFan(1),
            ] {
                let est = if hermitian {
                    hermitian_induced_norm(&phi, p, NormSpec::Schatten(3.0), &quick(5)).unwrap()
                } else {
                    induced_norm(&phi, p, NormSpec::Schatten(3.0), &quick(5)).unwrap()
                };
                let sphere = ui_norm(&est.maximizer, p).unwrap();
                assert!((sphere - 1.0).abs() < 1e-9, "{p}: {sphere}");
                let v =
                    ui_norm(&phi.apply(&est.maximizer).unwrap(), NormSpec::Schatten(3.0)).unwrap();
                assert!((v - est.value).abs() < 1e-9);
                if hermitian {
                    assert!(est.maximizer.is_hermitian(1e-9));
                }
            }
        }
    }

    #[test]
    fn errors_are_reported() {
        let phi = Superoperator::random_cp_map(2, 2, 1, 1).unwrap();
        let cfg = OptConfig {
            max_dim: 1,
            ..OptConfig::default()
        };
        assert!(matches!(
            induced_norm(&phi, NormSpec::TRACE, NormSpec::TRACE, &cfg),
            Err(Error::TooLarge { dim: 2, cap: 1 })
        ));
        assert!(matches!(
            induced_norm(
                &phi,
                NormSpec::Schatten(0.5),
                NormSpec::TRACE,
                &OptConfig::default()
            ),
            Err(Error::InvalidNorm(_))
        ));
        let bad = OptConfig {
            multistarts: 0,
            ..OptConfig::default()
        };
        assert!(induced_norm(&phi, NormSpec::TRACE, NormSpec::TRACE, &bad).is_err());
        assert!(sampling_oracle(&phi, NormSpec::TRACE, NormSpec::TRACE, 0, 1, false).is_err());
    }

    #[test]
    fn replay_reproduces_best_start() {
        let phi = Superoperator::random_cp_map(2, 2, 2, 7).unwrap();
        let cfg = quick(9);
        let est =
            induced_norm(&phi, NormSpec::Schatten(1.5), NormSpec::Schatten(2.0), &cfg).unwrap();
        let again = replay_start(
            &phi,
            NormSpec::Schatten(1.5),
            NormSpec::Schatten(2.0),
            &cfg,
            Domain::Full,
            est.best_start,
        )
        .unwrap();
        assert_eq!(again.value.to_bits(), est.value.to_bits());
        assert_eq!(again.sigma, est.maximizer);
    }

    #[test]
    fn oracle_is_dominated_and_deterministic() {
        let id = Superoperator::identity(2).unwrap();
        let o = sampling_oracle(
            &id,
            NormSpec::FROBENIUS,
            NormSpec::FROBENIUS,
            10_000,
            3,
            false,
        )
        .unwrap();
        assert!(o.value >= 0.99 && o.value <= 1.0 + 1e-12);
        let again = sampling_oracle(
            &id,
            NormSpec::FROBENIUS,
            NormSpec::FROBENIUS,
            10_000,
            3,
            false,
        )
        .unwrap();
        assert_eq!(o.value.to_bits(), again.value.to_bits());
        assert_eq!(o.maximizer, again.maximizer);

        let phi = Superoperator::random_cp_map(2, 2, 3, 8).unwrap();
        let o =
            sampling_oracle(&phi, NormSpec::TRACE, NormSpec::OPERATOR, 2_000, 4, false).unwrap();
        let est = induced_norm(&phi, NormSpec::TRACE, NormSpec::OPERATOR, &quick(4)).unwrap();
        assert!(o.value <= est.value + 1e-8);
        let oh =
            sampling_oracle(&phi, NormSpec::TRACE, NormSpec::OPERATOR, 2_000, 4, true).unwrap();
        assert!(oh.maximizer.is_hermitian(1e-12));
    }

    #[test]
    fn reduction_examples() {
        let phi = Superoperator::random_cp_map(3, 2, 2, 10).unwrap();
        let mut rng = rng_from_seed(11);
        let g = ginibre(&mut rng, 3, 3);
        let psd = &g * &g.adjoint();
        let r = hermitian_reduction(&phi, &psd, NormSpec::Schatten(1.5)).unwrap();
        assert!((r.lhs - r.bound_product).abs() <= 1e-10 * r.lhs);

        let id = Superoperator::identity(3).unwrap();
        let u = crate::matrix::random::unit_vector(&mut rng, 3);
        let v = crate::matrix::random::unit_vector(&mut rng, 3);
        let r = hermitian_reduction(&id, &ComplexMatrix::outer(&v, &u), NormSpec::Schatten(2.0))
            .unwrap();
        assert!((r.lhs - 1.0).abs() < 1e-12 && (r.bound_product - 1.0).abs() < 1e-12);

        for _ in 0..50 {
            let s = ginibre(&mut rng, 3, 3);
            assert!(
                hermitian_reduction(&phi, &s, NormSpec::OPERATOR)
                    .unwrap()
                    .holds
            );
        }
    }

    #[test]
    fn gradient_method_agrees_on_small_cases() {
        let cfg = OptConfig {
            multistarts: 6,
            max_iters: 300,
            method: AscentMethod::RetractionGradient,
            ..OptConfig::with_seed(12)
        };
        let id = Superoperator::identity(2).unwrap();
        let est = induced_norm(&id, NormSpec::OPERATOR, NormSpec::TRACE, &cfg).unwrap();
        assert!((est.value - 2.0).abs() < 1e-6, "{}", est.value);
        let est =
            induced_norm(&id, NormSpec::Schatten(3.0), NormSpec::Schatten(1.5), &cfg).unwrap();
        assert!(
            (est.value - 2f64.powf(1.0 / 1.5 - 1.0 / 3.0)).abs() < 1e-5,
            "{}",
            est.value
        );

        let phi = Superoperator::random_cp_map(2, 2, 2, 13).unwrap();
        for (p, q) in [
            (NormSpec::TRACE, NormSpec::OPERATOR),
            (NormSpec::Schatten(1.5), NormSpec::FROBENIUS),
        ] {
            let dual = induced_norm(&phi, p, q, &quick(14)).unwrap();
            let grad = induced_norm(&phi, p, q, &cfg).unwrap();
            assert!(grad.value <= dual.value + 1e-8);
            assert!(
                (grad.value - dual.value).abs() < 1e-4 * dual.value,
                "{p}->{q}"
            );
            let hgrad = hermitian_induced_norm(&phi, p, q, &cfg).unwrap();
            assert!(hgrad.maximizer.is_hermitian(1e-9));
            assert!(
                (hgrad.value - dual.value).abs() < 1e-4 * dual.value,
                "herm {p}->{q}"
            );
        }
    }
}
