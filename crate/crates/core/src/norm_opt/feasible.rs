//! Unit balls of unitarily invariant norms: random starting points and
//! linear maximization over the ball (full or Hermitian).

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::matrix::eigen::eigh;
use crate::matrix::norm::{ball_maximizer_weights, sorted_gauge};
use crate::matrix::random::{haar_unitary, unit_vector};
use crate::matrix::svd::{svd, weighted_outer_sum};
use crate::matrix::{ComplexMatrix, NormSpec};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Domain {
    /// All complex `m x m` matrices.
    Full,
    /// Hermitian matrices only.
    Hermitian,
}

/// Random point on the unit sphere of `p` in the chosen domain.
///
/// Trace-norm starts are extreme points (`|v⟩⟨u|`, or `±|w⟩⟨w|` when
/// Hermitian) and operator-norm starts are unitaries (or `W·Diag(±1)·W†`).
/// Otherwise `U·Diag(d)·V†` (Hermitian: `W·Diag(d)·W†`, `d` signed) with `d`
/// rescaled onto the sphere.
pub(crate) fn initial_point<R: Rng + ?Sized>(
    rng: &mut R,
    m: usize,
    p: NormSpec,
    domain: Domain,
) -> ComplexMatrix {
    match (domain, p) {
        (Domain::Full, p) if p.is_trace() => {
            let v = unit_vector(rng, m);
            let u = unit_vector(rng, m);
            ComplexMatrix::outer(&v, &u)
        }
        (Domain::Full, p) if p.is_operator() => haar_unitary(rng, m),
        (Domain::Full, p) => {
            let u = haar_unitary(rng, m);
            let v = haar_unitary(rng, m);
            let d = sphere_weights(rng, m, p, false);
            weighted_outer_sum(&u, &d, &v)
        }
        (Domain::Hermitian, p) if p.is_trace() => {
            let w = unit_vector(rng, m);
            let sign = if rng.random::<bool>() { 1.0 } else { -1.0 };
            ComplexMatrix::outer(&w, &w).scale_real(sign)
        }
        (Domain::Hermitian, p) if p.is_operator() => {
            let w = haar_unitary(rng, m);
            let d: Vec<f64> = (0..m)
                .map(|_| if rng.random::<bool>() { 1.0 } else { -1.0 })
                .collect();
            weighted_outer_sum(&w, &d, &w)
        }
        (Domain::Hermitian, p) => {
            let w = haar_unitary(rng, m);
            let d = sphere_weights(rng, m, p, true);
            weighted_outer_sum(&w, &d, &w)
        }
    }
}

/// Random weights with unit gauge; signed when `signed`.
fn sphere_weights<R: Rng + ?Sized>(rng: &mut R, m: usize, p: NormSpec, signed: bool) -> Vec<f64> {
    loop {
        let raw: Vec<f64> = (0..m)
            .map(|_| {
                let x: f64 = rng.random::<f64>();
                if signed && rng.random::<bool>() {
                    -x
                } else {
                    x
                }
            })
            .collect();
        let g = gauge_of(&raw, p);
        if g > 1e-8 {
            return raw.into_iter().map(|x| x / g).collect();
        }
    }
}

/// Gauge of arbitrary real weights (absolute values, any order).
pub(crate) fn gauge_of(w: &[f64], p: NormSpec) -> f64 {
    let mut abs: Vec<f64> = w.iter().map(|x| x.abs()).collect();
    abs.sort_by(|a, b| b.total_cmp(a));
    sorted_gauge(&abs, p)
}

/// `argmax Re tr(X† σ)` over the unit ball of `p` in `domain`.
///
/// Full domain: with `X = U·S·V†`, the maximizer is `U·Diag(d)·V†` where `d`
/// maximizes `Σ d_i s_i` on the gauge ball. Hermitian domain: only the
/// Hermitian part `Y` of `X` pairs with Hermitian σ; with `Y = W·Diag(y)·W†`
/// the maximizer is `W·Diag(sign(y)·d)·W†`, `d` chosen against `|y|`.
pub(crate) fn ball_maximizer(x: &ComplexMatrix, p: NormSpec, domain: Domain) -> ComplexMatrix {
    match domain {
        Domain::Full => {
            let d = svd(x).expect("finite matrix");
            let w = ball_maximizer_weights(&d.s, p);
            d.compose(&w)
        }
        Domain::Hermitian => {
            let e = eigh(&x.hermitian_part()).expect("finite matrix");
            let mut order: Vec<usize> = (0..e.values.len()).collect();
            order.sort_by(|&i, &j| {
                e.values[j]
                    .abs()
                    .total_cmp(&e.values[i].abs())
                    .then(i.cmp(&j))
            });
            let mags: Vec<f64> = order.iter().map(|&i| e.values[i].abs()).collect();
            let d = ball_maximizer_weights(&mags, p);
            let mut weights = vec![0.0; e.values.len()];
            for (rank, &i) in order.iter().enumerate() {
                let sign = if e.values[i] < 0.0 { -1.0 } else { 1.0 };
                weights[i] = sign * d[rank];
            }
            weighted_outer_sum(&e.vectors, &weights, &e.vectors)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::random::{ginibre, rng_from_seed};
    use crate::matrix::ui_norm;

    const SPECS: [NormSpec; 5] = [
        NormSpec::TRACE,
        NormSpec::Schatten(1.5),
        NormSpec::Schatten(3.0),
        NormSpec::OPERATOR,
        NormSpec::KyFan(2),
    ];

    #[test]
    fn starts_lie_on_the_sphere() {
        let mut rng = rng_from_seed(1);
        for p in SPECS {
            for domain in [Domain::Full, Domain::Hermitian] {
                let s = initial_point(&mut rng, 3, p, domain);
                assert!(
                    (ui_norm(&s, p).unwrap() - 1.0).abs() < 1e-12,
                    "{p} {domain:?}"
                );
                if domain == Domain::Hermitian {
                    assert!(s.is_hermitian(1e-14));
                }
            }
        }
    }

    #[test]
    fn ball_maximizer_beats_random_feasible_points() {
        let mut rng = rng_from_seed(2);
        for p in SPECS {
            for domain in [Domain::Full, Domain::Hermitian] {
                let x = ginibre(&mut rng, 3, 3);
                let best = ball_maximizer(&x, p, domain);
                assert!((ui_norm(&best, p).unwrap() - 1.0).abs() < 1e-12);
                let top = x.real_inner(&best);
                for _ in 0..300 {
                    let s = initial_point(&mut rng, 3, p, domain);
                    assert!(x.real_inner(&s) <= top + 1e-12, "{p} {domain:?}");
                }
            }
        }
    }
}
