//! Singular value decomposition by one-sided (Hestenes) Jacobi rotations.
//!
//! Columns of the working matrix are orthogonalized pairwise; the rotation
//! for each pair is the Hermitian Jacobi rotation of their 2x2 Gram matrix.

use std::cmp::Ordering;

use super::eigen::{fix_phase, Rotation};
use super::{inner, vec_norm, ComplexMatrix, C64, ONE, ZERO};
use crate::error::{invalid, Result};

const MAX_SWEEPS: usize = 100;

/// `A = Σ_j s_j |u_j⟩⟨v_j|` with `r = min(rows, cols)` terms.
#[derive(Clone, Debug, PartialEq)]
pub struct SvdResult {
    /// Left singular vectors as the columns of a `rows x r` isometry.
    pub u: ComplexMatrix,
    /// Singular values, descending and nonnegative.
    pub s: Vec<f64>,
    /// Right singular vectors as the columns of a `cols x r` isometry.
    pub v: ComplexMatrix,
}

impl SvdResult {
    pub fn left(&self, j: usize) -> Vec<C64> {
        self.u.column(j)
    }

    pub fn right(&self, j: usize) -> Vec<C64> {
        self.v.column(j)
    }

    pub fn largest(&self) -> f64 {
        self.s.first().copied().unwrap_or(0.0)
    }

    /// `U · diag(w) · V†` for an arbitrary weight vector of length `r`.
    pub fn compose(&self, w: &[f64]) -> ComplexMatrix {
        weighted_outer_sum(&self.u, w, &self.v)
    }

    pub fn reconstruct(&self) -> ComplexMatrix {
        self.compose(&self.s)
    }

    /// Number of singular values above `tol · s_max`.
    pub fn rank(&self, tol: f64) -> usize {
        let cut = tol * self.largest();
        self.s.iter().filter(|&&x| x > cut).count()
    }
}

/// `Σ_j w_j |left_j⟩⟨right_j|` over matching columns.
pub(crate) fn weighted_outer_sum(
    left: &ComplexMatrix,
    w: &[f64],
    right: &ComplexMatrix,
) -> ComplexMatrix {
    let (m, n) = (left.rows(), right.rows());
    let mut out = ComplexMatrix::zeros(m, n);
    for (k, &wk) in w.iter().enumerate() {
        if wk == 0.0 {
            continue;
        }
        for i in 0..m {
            let a = left[(i, k)] * wk;
            if a == ZERO {
                continue;
            }
            for j in 0..n {
                out[(i, j)] += a * right[(j, k)].conj();
            }
        }
    }
    out
}

/// Computes the thin SVD of `a`.
///
/// Output is deterministic: singular values are sorted descending (ties broken
/// by comparing left vectors entrywise) and each left vector has its first
/// largest-magnitude entry made real and nonnegative, with the right vector
/// rotated by the same phase.
pub fn svd(a: &ComplexMatrix) -> Result<SvdResult> {
    if !a.is_finite() {
        return invalid("svd input has non-finite entries");
    }
    let (m, n) = a.shape();
    if m < n {
        let t = tall_svd(&a.adjoint());
        return Ok(canonicalize(t.v, t.s, t.u, m, n));
    }
    let t = tall_svd(a);
    Ok(canonicalize(t.u, t.s, t.v, m, n))
}

/// Singular values only, descending.
pub fn singular_values(a: &ComplexMatrix) -> Result<Vec<f64>> {
    svd(a).map(|r| r.s)
}

/// Column lists; an empty vector marks a null direction still to be filled.
struct RawSvd {
    u: Vec<Vec<C64>>,
    s: Vec<f64>,
    v: Vec<Vec<C64>>,
}

/// One-sided Jacobi on a matrix with `rows >= cols`.
fn tall_svd(a: &ComplexMatrix) -> RawSvd {
    let n = a.cols();
    let mut w = a.clone();
    let mut v = ComplexMatrix::identity(n);
    for _ in 0..MAX_SWEEPS {
        let mut rotated = false;
        for p in 0..n {
            for q in p + 1..n {
                let (alpha, beta, gamma) = column_gram(&w, p, q);
                let mag = gamma.norm();
                if mag == 0.0 || mag <= f64::EPSILON * (alpha * beta).sqrt() {
                    continue;
                }
                rotated = true;
                let rot = Rotation::diagonalizing(alpha, beta, gamma);
                rot.apply_right(&mut w, p, q);
                rot.apply_right(&mut v, p, q);
            }
        }
        if !rotated {
            break;
        }
    }
    let s: Vec<f64> = (0..n).map(|j| vec_norm(&w.column(j))).collect();
    let smax = s.iter().copied().fold(0.0, f64::max);
    let negligible = smax * f64::EPSILON * (a.rows() as f64);
    let u = (0..n)
        .map(|j| {
            if s[j] > negligible && s[j] > 0.0 {
                w.column(j).iter().map(|z| z / s[j]).collect()
            } else {
                Vec::new()
            }
        })
        .collect();
    let v = (0..n).map(|j| v.column(j)).collect();
    RawSvd { u, s, v }
}

fn column_gram(w: &ComplexMatrix, p: usize, q: usize) -> (f64, f64, C64) {
    let mut alpha = 0.0;
    let mut beta = 0.0;
    let mut gamma = ZERO;
    for k in 0..w.rows() {
        let x = w[(k, p)];
        let y = w[(k, q)];
        alpha += x.norm_sqr();
        beta += y.norm_sqr();
        gamma += x.conj() * y;
    }
    (alpha, beta, gamma)
}

/// Sorts the triples, re-orthonormalizes, completes null directions from the
/// standard basis, and fixes phases.
fn canonicalize(
    left: Vec<Vec<C64>>,
    s: Vec<f64>,
    right: Vec<Vec<C64>>,
    m: usize,
    n: usize,
) -> SvdResult {
    let r = s.len();
    let mut order: Vec<usize> = (0..r).collect();
    order.sort_by(|&i, &j| s[j].total_cmp(&s[i]).then(i.cmp(&j)));

    let mut lefts: Vec<Vec<C64>> = order.iter().map(|&k| left[k].clone()).collect();
    let mut rights: Vec<Vec<C64>> = order.iter().map(|&k| right[k].clone()).collect();
    let values: Vec<f64> = order.iter().map(|&k| s[k]).collect();
    orthonormal_fill(&mut lefts, m);
    orthonormal_fill(&mut rights, n);

    for (u, vcol) in lefts.iter_mut().zip(rights.iter_mut()) {
        let phase = fix_phase(u);
        let inv = phase.conj();
        vcol.iter_mut().for_each(|z| *z *= inv);
    }

    // Exact ties: order by the left vectors so the output does not depend on
    // the sweep order that produced them.
    let mut idx: Vec<usize> = (0..r).collect();
    idx.sort_by(|&i, &j| {
        values[j]
            .total_cmp(&values[i])
            .then_with(|| lexicographic(&lefts[i], &lefts[j]))
    });

    SvdResult {
        u: ComplexMatrix::from_fn(m, r, |i, j| lefts[idx[j]][i]),
        s: idx.iter().map(|&i| values[i]).collect(),
        v: ComplexMatrix::from_fn(n, r, |i, j| rights[idx[j]][i]),
    }
}

/// Re-orthonormalizes the present columns in order (modified Gram-Schmidt)
/// and replaces empty ones with standard basis vectors projected off the rest.
fn orthonormal_fill(cols: &mut [Vec<C64>], dim: usize) {
    let mut done: Vec<Vec<C64>> = Vec::with_capacity(cols.len());
    let mut missing = Vec::new();
    for (k, col) in cols.iter_mut().enumerate() {
        if col.is_empty() {
            missing.push(k);
            continue;
        }
        orthogonalize_against(col, &done);
        let nrm = vec_norm(col);
        col.iter_mut().for_each(|z| *z /= nrm);
        done.push(col.clone());
    }
    let mut basis_idx = 0;
    for k in missing {
        while basis_idx < dim {
            let mut e = vec![ZERO; dim];
            e[basis_idx] = ONE;
            basis_idx += 1;
            orthogonalize_against(&mut e, &done);
            orthogonalize_against(&mut e, &done);
            let nrm = vec_norm(&e);
            if nrm > 1e-6 {
                e.iter_mut().for_each(|z| *z /= nrm);
                done.push(e.clone());
                cols[k] = e;
                break;
            }
        }
    }
}

fn orthogonalize_against(x: &mut [C64], basis: &[Vec<C64>]) {
    for b in basis {
        let c = inner(b, x);
        for (xi, bi) in x.iter_mut().zip(b) {
            *xi -= c * bi;
        }
    }
}

fn lexicographic(a: &[C64], b: &[C64]) -> Ordering {
    for (x, y) in a.iter().zip(b) {
        let o = y.re.total_cmp(&x.re).then(y.im.total_cmp(&x.im));
        if o != Ordering::Equal {
            return o;
        }
    }
    Ordering::Equal
}
