//! Linear maps `Φ: M_m → M_n` held by their Choi matrix, with an optional
//! Kraus list when the map is known to be completely positive.
//!
//! Choi convention: `C = Σ_{jk} |j⟩⟨k| ⊗ Φ(|j⟩⟨k|)`, input index outermost,
//! so `C[j·n + a, k·n + b] = Φ(E_jk)[a, b]`.

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::matrix::psd::DEFAULT_TOL;
use crate::matrix::random::{gaussian_vector, ginibre, rng_from_seed};
use crate::matrix::{eigh, is_psd, kron_vec, normalized, ComplexMatrix, C64, ONE, ZERO};

/// Default bound on `dim_in` and `dim_out` for dense work (Choi is `(mn)²`).
pub const DEFAULT_DIM_CAP: usize = 8;

#[derive(Clone, Debug, PartialEq)]
pub struct Superoperator {
    dim_in: usize,
    dim_out: usize,
    choi: ComplexMatrix,
    kraus: Option<Vec<ComplexMatrix>>,
}

impl Superoperator {
    /// `Φ(σ) = Σ_a K_a σ K_a†`; completely positive by construction.
    pub fn from_kraus(kraus: Vec<ComplexMatrix>) -> Result<Self> {
        let Some(first) = kraus.first() else {
            return invalid("Kraus list is empty");
        };
        let (n, m) = first.shape();
        if m == 0 || n == 0 {
            return invalid("Kraus operators must be non-empty");
        }
        if let Some(bad) = kraus.iter().find(|k| k.shape() != (n, m)) {
            return invalid(format!(
                "Kraus operators must all be {n}x{m}, found {}x{}",
                bad.rows(),
                bad.cols()
            ));
        }
        let choi = choi_from_kraus(&kraus, m, n);
        Ok(Self {
            dim_in: m,
            dim_out: n,
            choi,
            kraus: Some(kraus),
        })
    }

    /// Wraps a Choi matrix of shape `(mn)x(mn)`.
    pub fn from_choi(dim_in: usize, dim_out: usize, choi: ComplexMatrix) -> Result<Self> {
        let d = dim_in * dim_out;
        if d == 0 {
            return invalid("dimensions must be positive");
        }
        if choi.shape() != (d, d) {
            return invalid(format!(
                "Choi matrix for {dim_in}->{dim_out} must be {d}x{d}, got {}x{}",
                choi.rows(),
                choi.cols()
            ));
        }
        Ok(Self {
            dim_in,
            dim_out,
            choi,
            kraus: None,
        })
    }

    /// Builds the Choi matrix by evaluating `f` on the matrix units `E_jk`.
    pub fn from_map_fn(
        dim_in: usize,
        dim_out: usize,
        f: impl Fn(&ComplexMatrix) -> ComplexMatrix,
    ) -> Result<Self> {
        let mut choi = ComplexMatrix::zeros(dim_in * dim_out, dim_in * dim_out);
        for j in 0..dim_in {
            for k in 0..dim_in {
                let mut unit = ComplexMatrix::zeros(dim_in, dim_in);
                unit[(j, k)] = ONE;
                let img = f(&unit);
                if img.shape() != (dim_out, dim_out) {
                    return invalid(format!(
                        "map produced a {}x{} image, expected {dim_out}x{dim_out}",
                        img.rows(),
                        img.cols()
                    ));
                }
                choi.set_block(j * dim_out, k * dim_out, &img);
            }
        }
        Self::from_choi(dim_in, dim_out, choi)
    }

    /// The identity channel on `M_m`.
    pub fn identity(m: usize) -> Result<Self> {
        Self::from_kraus(vec![ComplexMatrix::identity(m)])
    }

    /// `σ ↦ σ^T` on `M_m`: positive, not 2-positive. Its Choi matrix is the swap.
    pub fn transpose_map(m: usize) -> Result<Self> {
        if m < 2 {
            return invalid("transpose map needs m >= 2");
        }
        Self::from_map_fn(m, m, ComplexMatrix::transpose)
    }

    /// Completely positive map with `kraus_rank` i.i.d. complex Gaussian
    /// Kraus operators of shape `n x m`.
    pub fn random_cp_map(m: usize, n: usize, kraus_rank: usize, seed: u64) -> Result<Self> {
        if kraus_rank == 0 {
            return invalid("Kraus rank must be at least 1");
        }
        if m == 0 || n == 0 {
            return invalid("dimensions must be positive");
        }
        let mut rng = rng_from_seed(seed);
        let kraus = (0..kraus_rank).map(|_| ginibre(&mut rng, n, m)).collect();
        Self::from_kraus(kraus)
    }

    pub fn dim_in(&self) -> usize {
        self.dim_in
    }

    pub fn dim_out(&self) -> usize {
        self.dim_out
    }

    pub fn choi(&self) -> &ComplexMatrix {
        &self.choi
    }

    pub fn kraus(&self) -> Option<&[ComplexMatrix]> {
        self.kraus.as_deref()
    }

    /// `Φ(σ)`, through the Kraus list when present, else the Choi matrix.
    pub fn apply(&self, sigma: &ComplexMatrix) -> Result<ComplexMatrix> {
        self.check_input(sigma)?;
        Ok(match &self.kraus {
            Some(ks) => kraus_sum(ks, sigma),
            None => self.choi_contract(sigma),
        })
    }

    /// `Φ(σ)` through the Choi matrix, regardless of any Kraus list.
    pub fn apply_via_choi(&self, sigma: &ComplexMatrix) -> Result<ComplexMatrix> {
        self.check_input(sigma)?;
        Ok(self.choi_contract(sigma))
    }

    /// `Φ(σ)` through the Kraus list, if there is one.
    pub fn apply_via_kraus(&self, sigma: &ComplexMatrix) -> Result<Option<ComplexMatrix>> {
        self.check_input(sigma)?;
        Ok(self.kraus.as_ref().map(|ks| kraus_sum(ks, sigma)))
    }

    /// The Hilbert-Schmidt adjoint `Φ*(τ)`, defined by `tr(τ† Φ(σ)) = tr(Φ*(τ)† σ)`.
    pub fn apply_adjoint(&self, tau: &ComplexMatrix) -> Result<ComplexMatrix> {
        if tau.shape() != (self.dim_out, self.dim_out) {
            return invalid(format!(
                "adjoint input must be {0}x{0}, got {1}x{2}",
                self.dim_out,
                tau.rows(),
                tau.cols()
            ));
        }
        Ok(match &self.kraus {
            Some(ks) => ks
                .iter()
                .fold(ComplexMatrix::zeros(self.dim_in, self.dim_in), |acc, k| {
                    &acc + &(&(&k.adjoint() * tau) * k)
                }),
            None => {
                let (m, n) = (self.dim_in, self.dim_out);
                ComplexMatrix::from_fn(m, m, |j, k| {
                    let mut acc = ZERO;
                    for a in 0..n {
                        for b in 0..n {
                            acc += tau[(a, b)] * self.choi[(j * n + a, k * n + b)].conj();
                        }
                    }
                    acc
                })
            }
        })
    }

    /// `Φ ⊗ Id_k`: an `(mk)x(mk)` input is read as a `k x k` grid of `m x m`
    /// blocks and `Φ` is applied to every block.
    pub fn tensor_with_identity(&self, k: usize) -> Result<Self> {
        if k == 0 {
            return invalid("tensor factor k must be >= 1");
        }
        if k == 1 {
            return Ok(self.clone());
        }
        if let Some(ks) = &self.kraus {
            let id = ComplexMatrix::identity(k);
            return Self::from_kraus(ks.iter().map(|op| id.kron(op)).collect());
        }
        let (m, n) = (self.dim_in, self.dim_out);
        Self::from_map_fn(m * k, n * k, |x| {
            let mut out = ComplexMatrix::zeros(n * k, n * k);
            for bi in 0..k {
                for bj in 0..k {
                    let block = x.block(bi * m, bj * m, m, m);
                    out.set_block(bi * n, bj * n, &self.choi_contract(&block));
                }
            }
            out
        })
    }

    /// `c·Φ`. Kraus operators are kept (rescaled by `√c`) when `c ≥ 0`.
    pub fn scaled(&self, c: f64) -> Self {
        let choi = self.choi.scale_real(c);
        let kraus = if c >= 0.0 {
            self.kraus
                .as_ref()
                .map(|ks| ks.iter().map(|k| k.scale_real(c.sqrt())).collect())
        } else {
            None
        };
        Self {
            dim_in: self.dim_in,
            dim_out: self.dim_out,
            choi,
            kraus,
        }
    }

    /// `a·Φ + b·Ψ`. Kraus lists are merged when both exist and `a, b ≥ 0`.
    pub fn linear_combination(a: f64, phi: &Self, b: f64, psi: &Self) -> Result<Self> {
        if (phi.dim_in, phi.dim_out) != (psi.dim_in, psi.dim_out) {
            return invalid("maps have different dimensions");
        }
        if a >= 0.0 && b >= 0.0 {
            if let (Some(x), Some(y)) = (&phi.kraus, &psi.kraus) {
                let merged = x
                    .iter()
                    .map(|k| k.scale_real(a.sqrt()))
                    .chain(y.iter().map(|k| k.scale_real(b.sqrt())))
                    .collect();
                return Self::from_kraus(merged);
            }
        }
        let choi = &phi.choi.scale_real(a) + &psi.choi.scale_real(b);
        Self::from_choi(phi.dim_in, phi.dim_out, choi)
    }

    /// `σ ↦ Φ(σ)^T`. Hermiticity preserving whenever `Φ` is; generally not CP.
    pub fn then_transpose(&self) -> Self {
        let (m, n) = (self.dim_in, self.dim_out);
        let choi = ComplexMatrix::from_fn(m * n, m * n, |r, c| {
            let (j, a) = (r / n, r % n);
            let (k, b) = (c / n, c % n);
            self.choi[(j * n + b, k * n + a)]
        });
        Self {
            dim_in: m,
            dim_out: n,
            choi,
            kraus: None,
        }
    }

    /// True iff the Choi matrix is Hermitian to within `tol·max(1, max|C|)`.
    pub fn is_hermiticity_preserving(&self, tol: f64) -> bool {
        self.choi.is_hermitian(tol * self.choi.max_abs().max(1.0))
    }

    /// Choi criterion: certified iff the Choi matrix is PSD within `tol`.
    pub fn is_completely_positive(&self, tol: f64) -> Result<PositivityReport> {
        let k = self.dim_in.min(self.dim_out);
        self.exact_positivity(k, tol)
    }

    /// k-positivity with the default tolerance.
    pub fn is_k_positive(&self, k: usize, trials: usize, seed: u64) -> Result<PositivityReport> {
        self.is_k_positive_with_tol(k, trials, seed, DEFAULT_TOL)
    }

    /// Tests whether `Φ ⊗ Id_k` is positive.
    ///
    /// For `k ≥ min(m, n)` this is exact (Choi PSD test). Otherwise the Choi
    /// quadratic form is sampled on `trials` random vectors of Schmidt rank at
    /// most `k`; a pass is evidence, not a certificate.
    pub fn is_k_positive_with_tol(
        &self,
        k: usize,
        trials: usize,
        seed: u64,
        tol: f64,
    ) -> Result<PositivityReport> {
        if k == 0 {
            return invalid("positivity order k must be >= 1");
        }
        if k >= self.dim_in.min(self.dim_out) {
            let mut report = self.exact_positivity(k, tol)?;
            report.seed = seed;
            return Ok(report);
        }
        if let Some(report) = self.hermiticity_refutation(k, seed, tol)? {
            return Ok(report);
        }
        let (m, n) = (self.dim_in, self.dim_out);
        let slack = tol * self.choi.frobenius_norm().max(1.0);
        let mut rng = rng_from_seed(seed);
        let mut min_value = f64::INFINITY;
        for t in 0..trials {
            let mut v = vec![ZERO; m * n];
            for _ in 0..k {
                let a = gaussian_vector(&mut rng, m);
                let b = gaussian_vector(&mut rng, n);
                for (x, y) in v.iter_mut().zip(kron_vec(&a, &b)) {
                    *x += y;
                }
            }
            let Some(v) = normalized(&v) else { continue };
            let value = self.choi.quadratic_form(&v).re;
            min_value = min_value.min(value);
            if value < -slack {
                return Ok(PositivityReport {
                    k,
                    verdict: Verdict::Refuted,
                    witness: Some(v),
                    witness_value: Some(value),
                    min_value,
                    trials: t + 1,
                    seed,
                    exact: false,
                });
            }
        }
        Ok(PositivityReport {
            k,
            verdict: Verdict::SampledPass,
            witness: None,
            witness_value: None,
            min_value,
            trials,
            seed,
            exact: false,
        })
    }

    fn exact_positivity(&self, k: usize, tol: f64) -> Result<PositivityReport> {
        if let Some(report) = self.hermiticity_refutation(k, 0, tol)? {
            return Ok(report);
        }
        let psd = is_psd(&self.choi, tol)?;
        let refuted = !psd.is_psd;
        Ok(PositivityReport {
            k,
            verdict: if refuted {
                Verdict::Refuted
            } else {
                Verdict::Certified
            },
            witness: refuted.then(|| psd.witness.clone()),
            witness_value: refuted.then_some(psd.min_eigenvalue),
            min_value: psd.min_eigenvalue,
            trials: 0,
            seed: 0,
            exact: true,
        })
    }

    /// A positive map must preserve Hermiticity. If the Choi matrix is not
    /// Hermitian, the top eigenvector of its anti-Hermitian part gives a
    /// vector whose quadratic form is not real.
    fn hermiticity_refutation(
        &self,
        k: usize,
        seed: u64,
        tol: f64,
    ) -> Result<Option<PositivityReport>> {
        if self.is_hermiticity_preserving(tol) {
            return Ok(None);
        }
        let i = C64::new(0.0, 1.0);
        let skew = &self.choi.scale(i) - &self.choi.adjoint().scale(i);
        let e = eigh(&skew)?;
        let idx = if e.min_value().abs() > e.max_value().abs() {
            0
        } else {
            e.values.len() - 1
        };
        let v = e.vector(idx);
        let value = self.choi.quadratic_form(&v);
        Ok(Some(PositivityReport {
            k,
            verdict: Verdict::Refuted,
            witness: Some(v),
            witness_value: Some(value.re),
            min_value: value.re,
            trials: 0,
            seed,
            exact: true,
        }))
    }

    fn check_input(&self, sigma: &ComplexMatrix) -> Result<()> {
        if sigma.shape() != (self.dim_in, self.dim_in) {
            return invalid(format!(
                "map input must be {0}x{0}, got {1}x{2}",
                self.dim_in,
                sigma.rows(),
                sigma.cols()
            ));
        }
        Ok(())
    }

    fn choi_contract(&self, sigma: &ComplexMatrix) -> ComplexMatrix {
        let (m, n) = (self.dim_in, self.dim_out);
        let mut out = ComplexMatrix::zeros(n, n);
        for j in 0..m {
            for k in 0..m {
                let s = sigma[(j, k)];
                if s == ZERO {
                    continue;
                }
                for a in 0..n {
                    for b in 0..n {
                        out[(a, b)] += s * self.choi[(j * n + a, k * n + b)];
                    }
                }
            }
        }
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&SuperopJson::from(self)).expect("finite map always serializes")
    }

    pub fn to_json_pretty(&self) -> String {
        serde_json::to_string_pretty(&SuperopJson::from(self))
            .expect("finite map always serializes")
    }

    /// Parses either the Kraus or the Choi form. When both are given they must
    /// agree to `1e-10`.
    pub fn from_json(text: &str) -> Result<Self> {
        let raw: SuperopJson = serde_json::from_str(text)?;
        let (m, n) = (raw.dim_in, raw.dim_out);
        let map = match (raw.kraus, raw.choi) {
            (None, None) => return invalid("map needs a \"kraus\" or \"choi\" field"),
            (None, Some(choi)) => Self::from_choi(m, n, choi)?,
            (Some(kraus), choi) => {
                let map = Self::from_kraus(kraus)?;
                if (map.dim_in, map.dim_out) != (m, n) {
                    return invalid(format!(
                        "Kraus operators describe {}->{} but header says {m}->{n}",
                        map.dim_in, map.dim_out
                    ));
                }
                if let Some(choi) = choi {
                    if choi.shape() != map.choi.shape() || choi.max_abs_diff(&map.choi) > 1e-10 {
                        return invalid("Choi matrix disagrees with Kraus operators");
                    }
                }
                map
            }
        };
        Ok(map)
    }
}

fn kraus_sum(kraus: &[ComplexMatrix], sigma: &ComplexMatrix) -> ComplexMatrix {
    let n = kraus[0].rows();
    kraus.iter().fold(ComplexMatrix::zeros(n, n), |acc, k| {
        &acc + &(&(k * sigma) * &k.adjoint())
    })
}

/// `C = Σ_a w_a w_a†` with `w_a[j·n + i] = K_a[i, j]`.
fn choi_from_kraus(kraus: &[ComplexMatrix], m: usize, n: usize) -> ComplexMatrix {
    let d = m * n;
    let mut choi = ComplexMatrix::zeros(d, d);
    for k in kraus {
        let w: Vec<C64> = (0..d).map(|r| k[(r % n, r / n)]).collect();
        for r in 0..d {
            if w[r] == ZERO {
                continue;
            }
            for c in 0..d {
                choi[(r, c)] += w[r] * w[c].conj();
            }
        }
    }
    choi
}

#[derive(Serialize, Deserialize)]
struct SuperopJson {
    dim_in: usize,
    dim_out: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    kraus: Option<Vec<ComplexMatrix>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    choi: Option<ComplexMatrix>,
}

impl From<&Superoperator> for SuperopJson {
    fn from(map: &Superoperator) -> Self {
        match &map.kraus {
            Some(ks) => Self {
                dim_in: map.dim_in,
                dim_out: map.dim_out,
                kraus: Some(ks.clone()),
                choi: None,
            },
            None => Self {
                dim_in: map.dim_in,
                dim_out: map.dim_out,
                kraus: None,
                choi: Some(map.choi.clone()),
            },
        }
    }
}

impl Serialize for Superoperator {
    fn serialize<S: serde::Serializer>(
        &self,
        serializer: S,
    ) -> std::result::Result<S::Ok, S::Error> {
        SuperopJson::from(self).serialize(serializer)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Certified,
    Refuted,
    /// No violation among the sampled vectors. Not a certificate.
    SampledPass,
}

#[derive(Clone, Debug, Serialize)]
pub struct PositivityReport {
    pub k: usize,
    pub verdict: Verdict,
    /// Vector in `C^{mn}` with `⟨v|C|v⟩ < 0` (or non-real) when refuted.
    pub witness: Option<Vec<C64>>,
    pub witness_value: Option<f64>,
    /// Smallest Choi eigenvalue (exact path) or smallest sampled value.
    pub min_value: f64,
    pub trials: usize,
    pub seed: u64,
    /// Whether the verdict came from the exact Choi test.
    pub exact: bool,
}

impl PositivityReport {
    pub fn refuted(&self) -> bool {
        self.verdict == Verdict::Refuted
    }
}
