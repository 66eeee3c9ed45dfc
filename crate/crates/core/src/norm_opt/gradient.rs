//! Gradient ascent on a factored parameterization of the unit sphere.
//!
//! Unitary factors move by right-multiplication with `exp(iH)` for a
//! Hermitian generator `H`; weights are rescaled back onto the sphere after
//! each step. Gradients are central differences with step `1e-6` taken at the
//! current point (all generators zero), and accepted steps are folded into the
//! factors before the next gradient.

use super::feasible::{gauge_of, Domain};
use super::{OptConfig, Problem, StartResult};
use crate::matrix::eigen::eigh;
use crate::matrix::svd::{svd, weighted_outer_sum};
use crate::matrix::{normalized, ComplexMatrix, NormSpec, C64};

const FD_STEP: f64 = 1e-6;
const MIN_STEP: f64 = 1e-12;

#[derive(Clone, Debug)]
enum Param {
    /// `σ = |a⟩⟨b|`.
    RankOne { a: Vec<C64>, b: Vec<C64> },
    /// `σ = U`.
    Unitary { u: ComplexMatrix },
    /// `σ = U·Diag(d)·V†`, `d ≥ 0` on the sphere.
    Factored {
        u: ComplexMatrix,
        d: Vec<f64>,
        v: ComplexMatrix,
    },
    /// `σ = sign·|w⟩⟨w|`.
    HermRankOne { w: Vec<C64>, sign: f64 },
    /// `σ = W·Diag(±1)·W†`.
    HermSigns { w: ComplexMatrix, signs: Vec<f64> },
    /// `σ = W·Diag(d)·W†`, `d` real on the sphere.
    HermFactored { w: ComplexMatrix, d: Vec<f64> },
}

impl Param {
    fn from_sigma(sigma: &ComplexMatrix, p: NormSpec, domain: Domain) -> Self {
        match domain {
            Domain::Full => {
                let f = svd(sigma).expect("finite start");
                if p.is_trace() {
                    Param::RankOne {
                        a: f.left(0),
                        b: f.right(0),
                    }
                } else if p.is_operator() {
                    Param::Unitary { u: sigma.clone() }
                } else {
                    Param::Factored {
                        u: f.u,
                        d: f.s,
                        v: f.v,
                    }
                }
            }
            Domain::Hermitian => {
                let e = eigh(sigma).expect("finite start");
                if p.is_trace() {
                    let idx = if e.min_value().abs() > e.max_value().abs() {
                        0
                    } else {
                        e.values.len() - 1
                    };
                    Param::HermRankOne {
                        w: e.vector(idx),
                        sign: e.values[idx].signum(),
                    }
                } else if p.is_operator() {
                    let signs = e
                        .values
                        .iter()
                        .map(|x| if *x < 0.0 { -1.0 } else { 1.0 })
                        .collect();
                    Param::HermSigns {
                        w: e.vectors,
                        signs,
                    }
                } else {
                    Param::HermFactored {
                        w: e.vectors,
                        d: e.values,
                    }
                }
            }
        }
    }

    fn dimension(&self) -> usize {
        match self {
            Param::RankOne { a, .. } => 4 * a.len(),
            Param::Unitary { u } => u.rows() * u.rows(),
            Param::Factored { d, .. } => d.len() + 2 * d.len() * d.len(),
            Param::HermRankOne { w, .. } => 2 * w.len(),
            Param::HermSigns { signs, .. } => signs.len() * signs.len(),
            Param::HermFactored { d, .. } => d.len() + d.len() * d.len(),
        }
    }

    /// The parameter moved by `x`, and its matrix.
    fn realize(&self, x: &[f64], p: NormSpec) -> (Param, ComplexMatrix) {
        match self {
            Param::RankOne { a, b } => {
                let m = a.len();
                let a2 = shifted_unit(a, &x[..2 * m]);
                let b2 = shifted_unit(b, &x[2 * m..]);
                let sigma = ComplexMatrix::outer(&a2, &b2);
                (Param::RankOne { a: a2, b: b2 }, sigma)
            }
            Param::Unitary { u } => {
                let u2 = u * &unitary_exp(x, u.rows());
                (Param::Unitary { u: u2.clone() }, u2)
            }
            Param::Factored { u, d, v } => {
                let r = d.len();
                let d2 = on_sphere(
                    d.iter().zip(&x[..r]).map(|(a, b)| (a + b).abs()).collect(),
                    p,
                );
                let u2 = u * &unitary_exp(&x[r..r + r * r], r);
                let v2 = v * &unitary_exp(&x[r + r * r..], r);
                let sigma = weighted_outer_sum(&u2, &d2, &v2);
                (
                    Param::Factored {
                        u: u2,
                        d: d2,
                        v: v2,
                    },
                    sigma,
                )
            }
            Param::HermRankOne { w, sign } => {
                let w2 = shifted_unit(w, x);
                let sigma = ComplexMatrix::outer(&w2, &w2).scale_real(*sign);
                (Param::HermRankOne { w: w2, sign: *sign }, sigma)
            }
            Param::HermSigns { w, signs } => {
                let w2 = w * &unitary_exp(x, w.rows());
                let sigma = weighted_outer_sum(&w2, signs, &w2);
                (
                    Param::HermSigns {
                        w: w2,
                        signs: signs.clone(),
                    },
                    sigma,
                )
            }
            Param::HermFactored { w, d } => {
                let r = d.len();
                let d2 = on_sphere(d.iter().zip(&x[..r]).map(|(a, b)| a + b).collect(), p);
                let w2 = w * &unitary_exp(&x[r..], r);
                let sigma = weighted_outer_sum(&w2, &d2, &w2);
                (Param::HermFactored { w: w2, d: d2 }, sigma)
            }
        }
    }
}

fn shifted_unit(v: &[C64], x: &[f64]) -> Vec<C64> {
    let moved: Vec<C64> = v
        .iter()
        .enumerate()
        .map(|(i, z)| z + C64::new(x[2 * i], x[2 * i + 1]))
        .collect();
    normalized(&moved).unwrap_or_else(|| v.to_vec())
}

fn on_sphere(d: Vec<f64>, p: NormSpec) -> Vec<f64> {
    let g = gauge_of(&d, p);
    if g == 0.0 {
        let mut e = vec![0.0; d.len()];
        e[0] = 1.0;
        return e;
    }
    d.into_iter().map(|x| x / g).collect()
}

/// `exp(iH)` for the Hermitian `H` packed in `x` (diagonal first, then the
/// real and imaginary parts of the strict upper triangle).
fn unitary_exp(x: &[f64], n: usize) -> ComplexMatrix {
    if x.iter().all(|&v| v == 0.0) {
        return ComplexMatrix::identity(n);
    }
    let mut h = ComplexMatrix::zeros(n, n);
    for i in 0..n {
        h[(i, i)] = C64::new(x[i], 0.0);
    }
    let mut k = n;
    for i in 0..n {
        for j in i + 1..n {
            let z = C64::new(x[k], x[k + 1]);
            h[(i, j)] = z;
            h[(j, i)] = z.conj();
            k += 2;
        }
    }
    let e = eigh(&h).expect("finite generator");
    let phases: Vec<C64> = e.values.iter().map(|&l| C64::new(0.0, l).exp()).collect();
    ComplexMatrix::from_fn(n, n, |i, j| {
        (0..n)
            .map(|k| e.vectors[(i, k)] * phases[k] * e.vectors[(j, k)].conj())
            .sum()
    })
}

pub(crate) fn retraction_gradient(
    problem: &Problem<'_>,
    sigma0: ComplexMatrix,
    cfg: &OptConfig,
) -> StartResult {
    let p = problem.p;
    let mut param = Param::from_sigma(&sigma0, p, problem.domain);
    let dim = param.dimension();
    let zero = vec![0.0; dim];
    let (_, mut sigma) = param.realize(&zero, p);
    let mut value = problem.value(&sigma);
    let mut step = cfg.step_init;
    let mut iterations = 0;
    let mut x = zero.clone();
    let mut grad = vec![0.0; dim];

    while iterations < cfg.max_iters {
        iterations += 1;
        for i in 0..dim {
            x[i] = FD_STEP;
            let up = problem.value(&param.realize(&x, p).1);
            x[i] = -FD_STEP;
            let down = problem.value(&param.realize(&x, p).1);
            x[i] = 0.0;
            grad[i] = (up - down) / (2.0 * FD_STEP);
        }
        let gnorm = grad.iter().map(|g| g * g).sum::<f64>().sqrt();
        if gnorm < 1e-12 {
            break;
        }
        let mut accepted = None;
        while step >= MIN_STEP {
            let trial: Vec<f64> = grad.iter().map(|g| step * g / gnorm).collect();
            let (next_param, next_sigma) = param.realize(&trial, p);
            let next_value = problem.value(&next_sigma);
            if next_value > value {
                accepted = Some((next_param, next_sigma, next_value));
                step *= 1.5;
                break;
            }
            step *= 0.5;
        }
        let Some((next_param, next_sigma, next_value)) = accepted else {
            break;
        };
        let gain = next_value - value;
        param = next_param;
        sigma = next_sigma;
        value = next_value;
        if gain <= cfg.conv_tol * value.max(1.0) {
            break;
        }
    }
    StartResult {
        value,
        sigma,
        iterations,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exponential_of_generator_is_unitary() {
        let x = [0.3, -0.2, 0.1, 0.5, -0.4, 0.2, 0.7, 0.0, -0.1];
        let u = unitary_exp(&x, 3);
        assert!((&u.adjoint() * &u).approx_eq(&ComplexMatrix::identity(3), 1e-13));
        assert_eq!(unitary_exp(&[0.0; 4], 2), ComplexMatrix::identity(2));
    }
}
