//! Monotone dual ascent for `max ‖Φ(σ)‖_q` over a norm ball.
//!
//! At the current σ, take the supporting functional `τ` of the q-norm at
//! `Φ(σ)` (`‖τ‖_{q*} ≤ 1`, `Re tr(τ† Φ(σ)) = ‖Φ(σ)‖_q`) and move to the
//! maximizer of `Re tr(Φ*(τ)† σ')` over the ball. Since
//! `‖Φ(σ')‖_q ≥ Re tr(τ† Φ(σ')) ≥ Re tr(τ† Φ(σ))`, the value never drops.
//!
//! Convergence is often linear with a rate close to one, so a single small
//! step says little about the distance to the limit. The stopping test uses
//! the remaining gain `g·ρ/(1 − ρ)` extrapolated from the ratio `ρ` of
//! consecutive gains.
//!
//! On nearly flat landscapes (maps close to a multiple of a unitary
//! conjugation) plain iteration can need thousands of steps. After each step
//! `σ → σ′` the ascent therefore tries `σ + β(σ′ − σ)` rescaled onto the
//! sphere for `β = 2, 4, 8, …`, keeping the best point while the value
//! improves.

use super::feasible::ball_maximizer;
use super::{OptConfig, Problem, StartResult};
use crate::matrix::norm::{dual_weights, sorted_gauge};
use crate::matrix::svd::{svd, SvdResult};
use crate::matrix::{ui_norm, ComplexMatrix};

/// Cap on the estimated contraction rate, bounding the extrapolation factor.
const MAX_RATE: f64 = 0.9999;

fn evaluate(problem: &Problem<'_>, sigma: &ComplexMatrix) -> (f64, SvdResult) {
    let image = problem.map.apply(sigma).expect("shape checked up front");
    let d = svd(&image).expect("finite image");
    (sorted_gauge(&d.s, problem.q), d)
}

const MAX_DOUBLINGS: usize = 12;

fn extrapolate(
    problem: &Problem<'_>,
    from: &ComplexMatrix,
    mut best: ComplexMatrix,
    mut best_value: f64,
    mut best_image: SvdResult,
) -> (ComplexMatrix, f64, SvdResult) {
    let step = &best - from;
    let mut beta = 2.0;
    for _ in 0..MAX_DOUBLINGS {
        let y = from + &step.scale_real(beta);
        let Ok(norm) = ui_norm(&y, problem.p) else {
            break;
        };
        if norm.is_nan() || norm <= 0.0 {
            break;
        }
        let y = y.scale_real(1.0 / norm);
        let (v, img) = evaluate(problem, &y);
        if v <= best_value {
            break;
        }
        best = y;
        best_value = v;
        best_image = img;
        beta *= 2.0;
    }
    (best, best_value, best_image)
}

pub(crate) fn dual_power(
    problem: &Problem<'_>,
    sigma0: ComplexMatrix,
    cfg: &OptConfig,
) -> StartResult {
    let mut sigma = sigma0;
    let (mut value, mut image) = evaluate(problem, &sigma);
    let mut iterations = 0;
    let mut prev_gain = f64::INFINITY;
    for _ in 0..cfg.max_iters {
        iterations += 1;
        let tau = image.compose(&dual_weights(&image.s, problem.q));
        let pulled = problem
            .map
            .apply_adjoint(&tau)
            .expect("shape checked up front");
        let next = ball_maximizer(&pulled, problem.p, problem.domain);
        let (next_value, next_image) = evaluate(problem, &next);
        // Equal or lower (rounding) means we are at a fixed point.
        if next_value <= value {
            break;
        }
        let (next, next_value, next_image) =
            extrapolate(problem, &sigma, next, next_value, next_image);
        let gain = next_value - value;
        sigma = next;
        value = next_value;
        image = next_image;
        let rate = (gain / prev_gain).min(MAX_RATE);
        prev_gain = gain;
        let remaining = gain * rate / (1.0 - rate);
        if gain.max(remaining) <= cfg.conv_tol * value.max(1.0) {
            break;
        }
    }
    StartResult {
        value,
        sigma,
        iterations,
    }
}
