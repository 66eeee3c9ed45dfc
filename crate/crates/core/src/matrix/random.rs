//! Seeded random ensembles: Ginibre matrices, unit vectors, Haar unitaries.
//!
//! All generators take a caller-owned RNG. Streams for independent jobs are
//! derived from `(seed, index)` so parallel work stays reproducible.

use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use super::{inner, vec_norm, ComplexMatrix, C64};

/// The generator used throughout the crate.
pub type SeededRng = ChaCha8Rng;

pub fn rng_from_seed(seed: u64) -> SeededRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Independent generator for job `index` under a master `seed`.
pub fn rng_for_stream(seed: u64, index: u64) -> SeededRng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// A child seed for job `index`, stable across runs.
pub fn derive_seed(seed: u64, index: u64) -> u64 {
    rng_for_stream(seed, index).next_u64()
}

/// Standard complex normal, `(x + iy)/√2` with `x, y ~ N(0, 1)`.
pub fn complex_gaussian<R: Rng + ?Sized>(rng: &mut R) -> C64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    C64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
}

pub fn gaussian_vector<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Vec<C64> {
    (0..n).map(|_| complex_gaussian(rng)).collect()
}

/// Uniformly distributed unit vector in `C^n`.
pub fn unit_vector<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Vec<C64> {
    loop {
        let v = gaussian_vector(rng, n);
        let nrm = vec_norm(&v);
        if nrm > 1e-12 {
            return v.into_iter().map(|z| z / nrm).collect();
        }
    }
}

/// `rows x cols` matrix of i.i.d. standard complex normals.
pub fn ginibre<R: Rng + ?Sized>(rng: &mut R, rows: usize, cols: usize) -> ComplexMatrix {
    let data = (0..rows * cols).map(|_| complex_gaussian(rng)).collect();
    ComplexMatrix::from_vec(rows, cols, data).expect("gaussian entries are finite")
}

/// Random Hermitian matrix `(G + G†)/2` from a Ginibre `G`.
pub fn random_hermitian<R: Rng + ?Sized>(rng: &mut R, n: usize) -> ComplexMatrix {
    ginibre(rng, n, n).hermitian_part()
}

/// Haar-distributed unitary from Gram-Schmidt on Ginibre columns.
pub fn haar_unitary<R: Rng + ?Sized>(rng: &mut R, n: usize) -> ComplexMatrix {
    let g = ginibre(rng, n, n);
    let mut cols: Vec<Vec<C64>> = Vec::with_capacity(n);
    for j in 0..n {
        let mut c = g.column(j);
        for _ in 0..2 {
            for prev in &cols {
                let proj = inner(prev, &c);
                c.iter_mut().zip(prev).for_each(|(x, p)| *x -= proj * p);
            }
        }
        let nrm = vec_norm(&c);
        cols.push(c.into_iter().map(|z| z / nrm).collect());
    }
    ComplexMatrix::from_fn(n, n, |i, j| cols[j][i])
}
