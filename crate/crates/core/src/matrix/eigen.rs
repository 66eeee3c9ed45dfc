//! Hermitian eigendecomposition by cyclic complex Jacobi rotations.

use super::{ComplexMatrix, C64, ONE, ZERO};
use crate::error::{invalid, Result};

const MAX_SWEEPS: usize = 100;

/// Eigenvalues in ascending order with matching unit eigenvectors as columns.
#[derive(Clone, Debug)]
pub struct HermitianEigen {
    pub values: Vec<f64>,
    pub vectors: ComplexMatrix,
}

impl HermitianEigen {
    pub fn min_value(&self) -> f64 {
        self.values.first().copied().unwrap_or(0.0)
    }

    pub fn max_value(&self) -> f64 {
        self.values.last().copied().unwrap_or(0.0)
    }

    /// Largest eigenvalue magnitude, i.e. the operator norm.
    pub fn spectral_radius(&self) -> f64 {
        self.min_value().abs().max(self.max_value().abs())
    }

    pub fn vector(&self, i: usize) -> Vec<C64> {
        self.vectors.column(i)
    }

    /// `V · diag(f(λ)) · V†`.
    pub fn reconstruct_with(&self, f: impl Fn(f64) -> f64) -> ComplexMatrix {
        let n = self.values.len();
        let mut out = ComplexMatrix::zeros(n, n);
        for (k, &lam) in self.values.iter().enumerate() {
            let w = f(lam);
            if w == 0.0 {
                continue;
            }
            for i in 0..n {
                let vi = self.vectors[(i, k)] * w;
                for j in 0..n {
                    out[(i, j)] += vi * self.vectors[(j, k)].conj();
                }
            }
        }
        out
    }
}

/// Unitary 2x2 rotation `[[g00, g01], [g10, g11]]` that diagonalizes the
/// Hermitian pair `[[a, g], [conj(g), b]]` by congruence `G† H G`.
#[derive(Clone, Copy, Debug)]
pub(crate) struct Rotation {
    pub g00: C64,
    pub g01: C64,
    pub g10: C64,
    pub g11: C64,
}

impl Rotation {
    pub(crate) fn diagonalizing(a: f64, b: f64, g: C64) -> Self {
        let mag = g.norm();
        let phase = g / mag;
        let theta = (b - a) / (2.0 * mag);
        let t = if theta >= 0.0 {
            1.0 / (theta + (theta * theta + 1.0).sqrt())
        } else {
            -1.0 / (-theta + (theta * theta + 1.0).sqrt())
        };
        let c = 1.0 / (t * t + 1.0).sqrt();
        let s = t * c;
        let conj_phase = phase.conj();
        Self {
            g00: C64::new(c, 0.0),
            g01: C64::new(s, 0.0),
            g10: conj_phase * (-s),
            g11: conj_phase * c,
        }
    }

    /// `M ← M · G` restricted to columns `p`, `q`.
    pub(crate) fn apply_right(&self, m: &mut ComplexMatrix, p: usize, q: usize) {
        for k in 0..m.rows() {
            let mp = m[(k, p)];
            let mq = m[(k, q)];
            m[(k, p)] = mp * self.g00 + mq * self.g10;
            m[(k, q)] = mp * self.g01 + mq * self.g11;
        }
    }

    /// `M ← G† · M` restricted to rows `p`, `q`.
    fn apply_left_adjoint(&self, m: &mut ComplexMatrix, p: usize, q: usize) {
        for k in 0..m.cols() {
            let mp = m[(p, k)];
            let mq = m[(q, k)];
            m[(p, k)] = self.g00.conj() * mp + self.g10.conj() * mq;
            m[(q, k)] = self.g01.conj() * mp + self.g11.conj() * mq;
        }
    }
}

/// Eigendecomposition of the Hermitian part of `a`.
///
/// Eigenvalues come back ascending; each eigenvector has its largest-magnitude
/// entry rotated to the nonnegative real axis so the output is deterministic.
pub fn eigh(a: &ComplexMatrix) -> Result<HermitianEigen> {
    if !a.is_square() {
        return invalid(format!(
            "eigh needs a square matrix, got {}x{}",
            a.rows(),
            a.cols()
        ));
    }
    if !a.is_finite() {
        return invalid("eigh input has non-finite entries");
    }
    let n = a.rows();
    let mut h = a.hermitian_part();
    let mut v = ComplexMatrix::identity(n);
    let fro = h.frobenius_norm();
    let floor = f64::EPSILON * f64::EPSILON * fro;

    for _ in 0..MAX_SWEEPS {
        let mut rotated = false;
        for p in 0..n {
            for q in p + 1..n {
                let g = h[(p, q)];
                let mag = g.norm();
                let app = h[(p, p)].re;
                let aqq = h[(q, q)].re;
                if mag <= floor || mag <= f64::EPSILON * (app * aqq).abs().sqrt() {
                    continue;
                }
                rotated = true;
                let rot = Rotation::diagonalizing(app, aqq, g);
                rot.apply_right(&mut h, p, q);
                rot.apply_left_adjoint(&mut h, p, q);
                h[(p, q)] = ZERO;
                h[(q, p)] = ZERO;
                h[(p, p)] = C64::new(h[(p, p)].re, 0.0);
                h[(q, q)] = C64::new(h[(q, q)].re, 0.0);
                rot.apply_right(&mut v, p, q);
            }
        }
        if !rotated {
            break;
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| h[(i, i)].re.total_cmp(&h[(j, j)].re).then(i.cmp(&j)));
    let values: Vec<f64> = order.iter().map(|&i| h[(i, i)].re).collect();
    let mut vectors = ComplexMatrix::zeros(n, n);
    for (dst, &src) in order.iter().enumerate() {
        let mut col = v.column(src);
        fix_phase(&mut col);
        for (i, z) in col.into_iter().enumerate() {
            vectors[(i, dst)] = z;
        }
    }
    Ok(HermitianEigen { values, vectors })
}

/// Rotates `v` so that its first largest-magnitude entry is real and
/// nonnegative. Returns the unit phase that was divided out.
pub(crate) fn fix_phase(v: &mut [C64]) -> C64 {
    let mut best = 0;
    let mut best_mag = -1.0;
    for (i, z) in v.iter().enumerate() {
        let m = z.norm();
        if m > best_mag {
            best = i;
            best_mag = m;
        }
    }
    if best_mag <= 0.0 {
        return ONE;
    }
    let phase = v[best] / best_mag;
    let inv = phase.conj();
    for z in v.iter_mut() {
        *z *= inv;
    }
    v[best] = C64::new(v[best].re, 0.0);
    phase
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::random::{ginibre, rng_from_seed};

    fn residual(a: &ComplexMatrix, e: &HermitianEigen) -> f64 {
        let rebuilt = e.reconstruct_with(|x| x);
        rebuilt.max_abs_diff(a)
    }

    #[test]
    fn diagonal_input() {
        let a = ComplexMatrix::from_real_diag(&[3.0, -1.0, 2.0]);
        let e = eigh(&a).unwrap();
        assert_eq!(e.values, vec![-1.0, 2.0, 3.0]);
        assert_eq!(e.vector(0)[1], ONE);
    }

    #[test]
    fn random_hermitian_reconstructs() {
        let mut rng = rng_from_seed(3);
        for n in 1..9 {
            let g = ginibre(&mut rng, n, n);
            let h = g.hermitian_part();
            let e = eigh(&h).unwrap();
            assert!(residual(&h, &e) < 1e-12 * (1.0 + h.max_abs()), "n={n}");
            let gram = &e.vectors.adjoint() * &e.vectors;
            assert!(gram.approx_eq(&ComplexMatrix::identity(n), 1e-13));
            assert!(e.values.windows(2).all(|w| w[0] <= w[1]));
        }
    }

    #[test]
    fn swap_operator_spectrum() {
        let mut swap = ComplexMatrix::zeros(4, 4);
        for i in 0..2 {
            for j in 0..2 {
                swap[(i * 2 + j, j * 2 + i)] = ONE;
            }
        }
        let e = eigh(&swap).unwrap();
        let expected = [-1.0, 1.0, 1.0, 1.0];
        for (got, want) in e.values.iter().zip(expected) {
            assert!((got - want).abs() < 1e-14);
        }
    }

    #[test]
    fn rejects_non_square() {
        assert!(eigh(&ComplexMatrix::zeros(2, 3)).is_err());
    }
}
