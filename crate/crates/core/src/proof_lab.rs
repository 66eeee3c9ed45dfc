//! Block-matrix constructions behind the 2-positivity argument, each exposed
//! as a checkable artifact.
//!
//! The chain verified here runs from a PSD block matrix `M = [[A, B], [B†, C]]`
//! through the Schmidt basis of `B`, the 2x2 principal minors of the rotated
//! matrix, diagonal pinching, and finally the AM-GM sharpened bound
//! `‖B‖² ≤ ‖A‖·‖C‖`.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::matrix::random::ginibre;
use crate::matrix::svd::{svd, SvdResult};
use crate::matrix::{
    diag_pinch_norm, gauge_norm, is_psd, polar_abs, ui_norm, vec_norm, ComplexMatrix, NormSpec, C64,
};
use crate::superop::Superoperator;

/// Tolerance for PSD preconditions, relative to `max(1, ‖M‖_∞)`.
pub const PSD_TOL: f64 = 1e-8;
/// Tolerance for each inequality link, relative to `max(1, |rhs|)`.
pub const LINK_TOL: f64 = 1e-9;
/// Tolerance on the 2x2 minor determinants, relative to `max(1, a·c)`.
pub const MINOR_TOL: f64 = 1e-10;

/// A `2r x 2r` matrix `[[A, B], [B†, C]]` held by its three distinct blocks.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BlockMatrix2x2 {
    r: usize,
    a: ComplexMatrix,
    b: ComplexMatrix,
    c: ComplexMatrix,
}

impl BlockMatrix2x2 {
    pub fn new(a: ComplexMatrix, b: ComplexMatrix, c: ComplexMatrix) -> Result<Self> {
        let r = a.rows();
        for (name, blk) in [("A", &a), ("B", &b), ("C", &c)] {
            if blk.shape() != (r, r) {
                return invalid(format!(
                    "block {name} is {}x{}, expected {r}x{r}",
                    blk.rows(),
                    blk.cols()
                ));
            }
        }
        Ok(Self { r, a, b, c })
    }

    /// Splits a `2r x 2r` matrix; the lower-left block is ignored.
    pub fn split(m: &ComplexMatrix) -> Result<Self> {
        if !m.is_square() || !m.rows().is_multiple_of(2) {
            return invalid(format!(
                "cannot split a {}x{} matrix into 2x2 blocks",
                m.rows(),
                m.cols()
            ));
        }
        let r = m.rows() / 2;
        Self::new(
            m.block(0, 0, r, r),
            m.block(0, r, r, r),
            m.block(r, r, r, r),
        )
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn a(&self) -> &ComplexMatrix {
        &self.a
    }

    pub fn b(&self) -> &ComplexMatrix {
        &self.b
    }

    pub fn c(&self) -> &ComplexMatrix {
        &self.c
    }

    pub fn assemble(&self) -> ComplexMatrix {
        ComplexMatrix::from_blocks(&self.a, &self.b, &self.b.adjoint(), &self.c)
    }

    /// Smallest eigenvalue of the assembled matrix.
    pub fn min_eigenvalue(&self) -> Result<f64> {
        Ok(is_psd(&self.assemble(), PSD_TOL)?.min_eigenvalue)
    }

    fn require_psd(&self) -> Result<()> {
        let report = is_psd(&self.assemble(), PSD_TOL)?;
        if report.is_psd {
            Ok(())
        } else {
            Err(Error::NotPsd {
                min_eigenvalue: report.min_eigenvalue,
            })
        }
    }
}

fn require_unit(name: &str, v: &[C64]) -> Result<()> {
    let n = vec_norm(v);
    if (n - 1.0).abs() > 1e-12 {
        return invalid(format!("{name} must be a unit vector, has norm {n}"));
    }
    Ok(())
}

/// `M_{u,v} = [[|u⟩⟨u|, |u⟩⟨v|], [|v⟩⟨u|, |v⟩⟨v|]]`, which equals `|ξ⟩⟨ξ|` for
/// `ξ = (u, v)`.
pub fn build_m_uv(u: &[C64], v: &[C64]) -> Result<BlockMatrix2x2> {
    if u.len() != v.len() || u.is_empty() {
        return invalid(format!(
            "u and v must share a positive length, got {} and {}",
            u.len(),
            v.len()
        ));
    }
    require_unit("u", u)?;
    require_unit("v", v)?;
    BlockMatrix2x2::new(
        ComplexMatrix::outer(u, u),
        ComplexMatrix::outer(u, v),
        ComplexMatrix::outer(v, v),
    )
}

/// The stacked vector `ξ = (u, v)`.
pub fn xi(u: &[C64], v: &[C64]) -> Vec<C64> {
    u.iter().chain(v).copied().collect()
}

/// `M_σ = [[(σσ†)^{1/2}, σ], [σ†, (σ†σ)^{1/2}]]`.
pub fn build_m_sigma(sigma: &ComplexMatrix) -> Result<BlockMatrix2x2> {
    let (left, right) = polar_abs(sigma)?;
    BlockMatrix2x2::new(left, sigma.clone(), right)
}

/// `M_σ` rebuilt as `Σ_j λ_j·M_{φ_j,ψ_j}` from the SVD `σ = Σ λ_j |φ_j⟩⟨ψ_j|`.
#[derive(Clone, Debug, Serialize)]
pub struct MSigmaReconstruction {
    pub coefficients: Vec<f64>,
    pub reconstruction: ComplexMatrix,
    /// Largest entrywise difference from the assembled `build_m_sigma(σ)`.
    pub residual: f64,
}

pub fn m_sigma_reconstruction(sigma: &ComplexMatrix) -> Result<MSigmaReconstruction> {
    let reference = build_m_sigma(sigma)?.assemble();
    let d = svd(sigma)?;
    let m = sigma.rows();
    let mut reconstruction = ComplexMatrix::zeros(2 * m, 2 * m);
    for (j, &lambda) in d.s.iter().enumerate() {
        if lambda == 0.0 {
            continue;
        }
        let term = build_m_uv(&d.left(j), &d.right(j))?
            .assemble()
            .scale_real(lambda);
        reconstruction = &reconstruction + &term;
    }
    let residual = reconstruction.max_abs_diff(&reference);
    Ok(MSigmaReconstruction {
        coefficients: d.s,
        reconstruction,
        residual,
    })
}

/// `M′ = W†·M·W` with `W = blockdiag(Φ, Ψ)` from the SVD `B = Φ·Diag(λ)·Ψ†`,
/// so that the off-diagonal block of `M′` is `Diag(λ)`.
pub fn schmidt_basis_change(m: &BlockMatrix2x2) -> Result<(BlockMatrix2x2, SvdResult)> {
    let d = svd(&m.b)?;
    let phi = &d.u;
    let psi = &d.v;
    let a = &(&phi.adjoint() * &m.a) * phi;
    let b = &(&phi.adjoint() * &m.b) * psi;
    let c = &(&psi.adjoint() * &m.c) * psi;
    Ok((BlockMatrix2x2::new(a, b, c)?, d))
}

/// The principal 2x2 minor on rows and columns `{j, r+j}` of `M′`.
#[derive(Clone, Debug, Serialize)]
pub struct MinorBound {
    pub j: usize,
    pub lambda: f64,
    /// `⟨φ_j|A|φ_j⟩`.
    pub a: f64,
    /// `⟨ψ_j|C|ψ_j⟩`.
    pub c: f64,
    pub det: f64,
    /// `√(a·c)`.
    pub geometric: f64,
    /// `(a + c)/2`.
    pub arithmetic: f64,
    /// Minor PSD and `λ ≤ √(ac) ≤ (a+c)/2`, each within tolerance.
    pub ok: bool,
}

pub fn minor_bounds(m_prime: &BlockMatrix2x2) -> Vec<MinorBound> {
    let r = m_prime.r;
    let full = m_prime.assemble();
    (0..r)
        .map(|j| {
            let a = full[(j, j)].re;
            let c = full[(r + j, r + j)].re;
            let off = full[(j, r + j)];
            let lambda = off.norm();
            let det = a * c - off.norm_sqr();
            let geometric = (a.max(0.0) * c.max(0.0)).sqrt();
            let arithmetic = 0.5 * (a + c);
            let ok = det >= -MINOR_TOL * (a * c).abs().max(1.0)
                && a >= -MINOR_TOL
                && c >= -MINOR_TOL
                && lambda <= geometric + LINK_TOL * geometric.max(1.0)
                && geometric <= arithmetic + LINK_TOL * arithmetic.abs().max(1.0);
            MinorBound {
                j,
                lambda,
                a,
                c,
                det,
                geometric,
                arithmetic,
                ok,
            }
        })
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Relation {
    Equal,
    AtMost,
}

/// One step `lhs = rhs` or `lhs ≤ rhs` of the chain.
#[derive(Clone, Debug, Serialize)]
pub struct ChainLink {
    pub name: &'static str,
    pub lhs: f64,
    pub rhs: f64,
    pub relation: Relation,
    /// `rhs − lhs`.
    pub slack: f64,
    pub holds: bool,
}

impl ChainLink {
    fn new(name: &'static str, lhs: f64, rhs: f64, relation: Relation) -> Self {
        let tol = LINK_TOL * rhs.abs().max(1.0);
        let holds = match relation {
            Relation::Equal => (lhs - rhs).abs() <= tol,
            Relation::AtMost => lhs <= rhs + tol,
        };
        Self {
            name,
            lhs,
            rhs,
            relation,
            slack: rhs - lhs,
            holds,
        }
    }
}

/// Every intermediate quantity of the bound `‖B‖² ≤ ‖A‖·‖C‖`.
#[derive(Clone, Debug, Serialize)]
pub struct LemmaChainReport {
    pub spec: NormSpec,
    pub lambdas: Vec<f64>,
    pub a_diag: Vec<f64>,
    pub c_diag: Vec<f64>,
    /// `√(a_j·c_j)` per `j`.
    pub bound_minor: Vec<f64>,
    pub minors: Vec<MinorBound>,
    pub norm_b: f64,
    pub norm_a: f64,
    pub norm_c: f64,
    /// `(‖A‖ + ‖C‖)/2`.
    pub avg_bound: f64,
    /// `(‖C‖/‖A‖)^{1/2}`; absent when either norm vanishes.
    pub t_star: Option<f64>,
    /// `(t‖A‖ + ‖C‖/t)/2` at `t_star`, or 0 when `t_star` is absent.
    pub sharpened_bound: f64,
    /// `√(‖A‖·‖C‖)`.
    pub final_bound: f64,
    pub links: Vec<ChainLink>,
    pub holds: bool,
}

impl LemmaChainReport {
    pub fn failed_links(&self) -> impl Iterator<Item = &ChainLink> {
        self.links.iter().filter(|l| !l.holds)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("report serializes")
    }
}

pub fn lemma_chain(m: &BlockMatrix2x2, spec: NormSpec) -> Result<LemmaChainReport> {
    spec.validate_for(m.r)?;
    m.require_psd()?;
    let (mp, d) = schmidt_basis_change(m)?;
    let minors = minor_bounds(&mp);
    let lambdas = d.s.clone();
    let a_diag: Vec<f64> = minors.iter().map(|x| x.a.max(0.0)).collect();
    let c_diag: Vec<f64> = minors.iter().map(|x| x.c.max(0.0)).collect();
    let bound_minor: Vec<f64> = minors.iter().map(|x| x.geometric).collect();

    let norm_b = ui_norm(&m.b, spec)?;
    let norm_a = ui_norm(&m.a, spec)?;
    let norm_c = ui_norm(&m.c, spec)?;
    let norm_a_prime = ui_norm(&mp.a, spec)?;
    let norm_c_prime = ui_norm(&mp.c, spec)?;
    let diag_lambda = gauge_norm(&lambdas, spec)?;
    let diag_minor = gauge_norm(&bound_minor, spec)?;
    let diag_a = diag_pinch_norm(&mp.a, spec)?;
    let diag_c = diag_pinch_norm(&mp.c, spec)?;
    let avg_bound = 0.5 * (norm_a + norm_c);
    let final_bound = (norm_a * norm_c).sqrt();

    let mut links = vec![
        ChainLink::new(
            "norm_b_equals_diag_lambda",
            norm_b,
            diag_lambda,
            Relation::Equal,
        ),
        ChainLink::new(
            "diag_lambda_le_diag_minor",
            diag_lambda,
            diag_minor,
            Relation::AtMost,
        ),
        ChainLink::new(
            "diag_minor_le_diag_average",
            diag_minor,
            0.5 * (diag_a + diag_c),
            Relation::AtMost,
        ),
        ChainLink::new("pinching_a", diag_a, norm_a_prime, Relation::AtMost),
        ChainLink::new("pinching_c", diag_c, norm_c_prime, Relation::AtMost),
        ChainLink::new("basis_change_a", norm_a_prime, norm_a, Relation::Equal),
        ChainLink::new("basis_change_c", norm_c_prime, norm_c, Relation::Equal),
        ChainLink::new(
            "diag_average_le_avg_bound",
            0.5 * (diag_a + diag_c),
            avg_bound,
            Relation::AtMost,
        ),
        ChainLink::new("norm_b_le_avg_bound", norm_b, avg_bound, Relation::AtMost),
    ];

    let t_star = if norm_a > 0.0 && norm_c > 0.0 {
        Some((norm_c / norm_a).sqrt())
    } else {
        None
    };
    let sharpened_bound = match t_star {
        Some(t) => {
            // The rescaled matrix [[tA, B], [B†, C/t]] is PSD too; rerun the
            // minor and pinching steps on it.
            let scaled_avg = 0.5 * (t * diag_a + diag_c / t);
            let bound = 0.5 * (t * norm_a + norm_c / t);
            links.push(ChainLink::new(
                "diag_minor_le_scaled_diag_average",
                diag_minor,
                scaled_avg,
                Relation::AtMost,
            ));
            links.push(ChainLink::new(
                "scaled_diag_average_le_scaled_bound",
                scaled_avg,
                bound,
                Relation::AtMost,
            ));
            links.push(ChainLink::new(
                "scaled_bound_equals_geometric_mean",
                bound,
                final_bound,
                Relation::Equal,
            ));
            bound
        }
        None => {
            links.push(ChainLink::new(
                "degenerate_block_forces_b_zero",
                norm_b,
                0.0,
                Relation::Equal,
            ));
            0.0
        }
    };
    links.push(ChainLink::new(
        "geometric_mean_le_avg_bound",
        final_bound,
        avg_bound,
        Relation::AtMost,
    ));
    links.push(ChainLink::new(
        "norm_b_le_geometric_mean",
        norm_b,
        final_bound,
        Relation::AtMost,
    ));
    links.push(ChainLink::new(
        "squared_bound",
        norm_b * norm_b,
        norm_a * norm_c,
        Relation::AtMost,
    ));

    let holds = links.iter().all(|l| l.holds) && minors.iter().all(|x| x.ok);
    Ok(LemmaChainReport {
        spec,
        lambdas,
        a_diag,
        c_diag,
        bound_minor,
        minors,
        norm_b,
        norm_a,
        norm_c,
        avg_bound,
        t_star,
        sharpened_bound,
        final_bound,
        links,
        holds,
    })
}

/// `‖B‖² ≤ ‖A‖·‖C‖` for a PSD block matrix.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct LemmaBound {
    pub lhs: f64,
    pub rhs: f64,
    /// `rhs − lhs`.
    pub slack: f64,
    /// `slack ≥ −1e-9·max(1, rhs)`.
    pub holds: bool,
}

pub fn lemma_bound_check(m: &BlockMatrix2x2, spec: NormSpec) -> Result<LemmaBound> {
    spec.validate_for(m.r)?;
    m.require_psd()?;
    let nb = ui_norm(&m.b, spec)?;
    let lhs = nb * nb;
    let rhs = ui_norm(&m.a, spec)? * ui_norm(&m.c, spec)?;
    let slack = rhs - lhs;
    Ok(LemmaBound {
        lhs,
        rhs,
        slack,
        holds: slack >= -LINK_TOL * rhs.max(1.0),
    })
}

/// `(Φ ⊗ Id_2)(M)` with `M` read as a 2x2 grid of `m x m` blocks.
pub fn tensored_image(map: &Superoperator, m: &BlockMatrix2x2) -> Result<ComplexMatrix> {
    if m.r != map.dim_in() {
        return invalid(format!(
            "blocks are {0}x{0}, map expects {1}x{1}",
            m.r,
            map.dim_in()
        ));
    }
    map.tensor_with_identity(2)?.apply(&m.assemble())
}

/// `G†G` for a Gaussian `G` with `rank` rows, split into `r x r` blocks.
/// Ranks below `2r` give singular matrices.
pub fn random_psd_block<R: Rng + ?Sized>(
    rng: &mut R,
    r: usize,
    rank: usize,
) -> Result<BlockMatrix2x2> {
    if r == 0 || rank == 0 {
        return invalid("block size and rank must be positive");
    }
    let g = ginibre(rng, rank, 2 * r);
    BlockMatrix2x2::split(&(&g.adjoint() * &g))
}

/// Generic full-rank instance: `G` has `2r + 2` rows.
pub fn gram_block<R: Rng + ?Sized>(rng: &mut R, r: usize) -> Result<BlockMatrix2x2> {
    random_psd_block(rng, r, 2 * r + 2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::random::{haar_unitary, rng_from_seed, unit_vector};
    use crate::matrix::svd::singular_values;
    use crate::matrix::{basis_vector, eigh};

    const SPECS: [NormSpec; 7] = [
        NormSpec::TRACE,
        NormSpec::Schatten(1.5),
        NormSpec::FROBENIUS,
        NormSpec::Schatten(3.0),
        NormSpec::OPERATOR,
        NormSpec::KyFan(1),
        NormSpec::KyFan(2),
    ];

    fn real_diag(v: &[f64]) -> ComplexMatrix {
        ComplexMatrix::from_real_diag(v)
    }

    #[test]
    fn m_uv_with_equal_basis_vectors() {
        let e1 = basis_vector(3, 0);
        let m = build_m_uv(&e1, &e1).unwrap();
        let p = ComplexMatrix::outer(&e1, &e1);
        assert_eq!(m.a(), &p);
        assert_eq!(m.b(), &p);
        assert_eq!(m.c(), &p);
        let ev = eigh(&m.assemble()).unwrap().values;
        assert!((ev[5] - 2.0).abs() < 1e-14);
        assert!(ev[..5].iter().all(|x| x.abs() < 1e-14));
    }

    #[test]
    fn m_uv_is_rank_one_outer_product() {
        let mut rng = rng_from_seed(3);
        let e1 = basis_vector(2, 0);
        let e2 = basis_vector(2, 1);
        let m = build_m_uv(&e1, &e2).unwrap().assemble();
        assert!((m.trace().re - 2.0).abs() < 1e-14);
        for _ in 0..20 {
            let u = unit_vector(&mut rng, 4);
            let v = unit_vector(&mut rng, 4);
            let m = build_m_uv(&u, &v).unwrap().assemble();
            let x = xi(&u, &v);
            assert!(m.max_abs_diff(&ComplexMatrix::outer(&x, &x)) <= 1e-12);
            assert!(is_psd(&m, 1e-9).unwrap().is_psd);
            let s = singular_values(&m).unwrap();
            assert!((s[0] - 2.0).abs() < 1e-12 && s[1] <= 1e-10);
        }
    }

    #[test]
    fn m_uv_rejects_non_unit_vectors() {
        let u = vec![C64::new(1.0, 0.0), C64::new(1.0, 0.0)];
        let v = basis_vector(2, 0);
        assert!(matches!(build_m_uv(&u, &v), Err(Error::InvalidInput(_))));
        assert!(matches!(
            build_m_uv(&v, &basis_vector(3, 0)),
            Err(Error::InvalidInput(_))
        ));
    }

    #[test]
    fn m_sigma_of_rank_one_is_m_uv_with_roles_swapped() {
        let mut rng = rng_from_seed(4);
        let u = unit_vector(&mut rng, 3);
        let v = unit_vector(&mut rng, 3);
        let ms = build_m_sigma(&ComplexMatrix::outer(&v, &u))
            .unwrap()
            .assemble();
        let muv = build_m_uv(&v, &u).unwrap().assemble();
        assert!(ms.max_abs_diff(&muv) < 1e-12);
    }

    #[test]
    fn m_sigma_of_identity() {
        let m = build_m_sigma(&ComplexMatrix::identity(3)).unwrap();
        assert!(m.a().approx_eq(&ComplexMatrix::identity(3), 1e-14));
        assert!(m.c().approx_eq(&ComplexMatrix::identity(3), 1e-14));
        let ev = eigh(&m.assemble()).unwrap().values;
        for (i, x) in ev.iter().enumerate() {
            let want = if i < 3 { 0.0 } else { 2.0 };
            assert!((x - want).abs() < 1e-12);
        }
    }

    #[test]
    fn m_sigma_is_psd_and_reconstructs() {
        let mut rng = rng_from_seed(5);
        for m in 1..=5 {
            let sigma = ginibre(&mut rng, m, m);
            let ms = build_m_sigma(&sigma).unwrap();
            let full = ms.assemble();
            let scale = eigh(&full).unwrap().spectral_radius();
            assert!(ms.min_eigenvalue().unwrap() >= -1e-8 * scale);
            for spec in [
                NormSpec::TRACE,
                NormSpec::Schatten(2.5),
                NormSpec::OPERATOR,
                NormSpec::KyFan(1),
            ] {
                let ns = ui_norm(&sigma, spec).unwrap();
                assert!((ui_norm(ms.a(), spec).unwrap() - ns).abs() < 1e-9 * ns.max(1.0));
                assert!((ui_norm(ms.c(), spec).unwrap() - ns).abs() < 1e-9 * ns.max(1.0));
            }
            assert!(m_sigma_reconstruction(&sigma).unwrap().residual <= 1e-9);
        }
        assert!(matches!(
            build_m_sigma(&ginibre(&mut rng, 2, 3)),
            Err(Error::InvalidInput(_))
        ));
    }

    #[test]
    fn basis_change_is_identity_for_diagonal_b() {
        let id = ComplexMatrix::identity(3);
        let m = BlockMatrix2x2::new(id.clone(), real_diag(&[0.9, 0.5, 0.2]), id).unwrap();
        let (mp, _) = schmidt_basis_change(&m).unwrap();
        assert!(mp.assemble().approx_eq(&m.assemble(), 1e-14));
    }

    #[test]
    fn basis_change_of_m_uv_has_single_unit_lambda() {
        let mut rng = rng_from_seed(6);
        let u = unit_vector(&mut rng, 3);
        let v = unit_vector(&mut rng, 3);
        let (mp, d) = schmidt_basis_change(&build_m_uv(&u, &v).unwrap()).unwrap();
        assert!(mp.b().approx_eq(&real_diag(&[1.0, 0.0, 0.0]), 1e-12));
        assert!((d.s[0] - 1.0).abs() < 1e-12);
        let minors = minor_bounds(&mp);
        assert!((minors[0].lambda - 1.0).abs() < 1e-12);
        assert!((minors[0].a - 1.0).abs() < 1e-12 && (minors[0].c - 1.0).abs() < 1e-12);
        assert!(minors[1..]
            .iter()
            .all(|x| x.lambda < 1e-12 && x.a.abs() < 1e-12));
        assert!(minors.iter().all(|x| x.ok));
    }

    #[test]
    fn basis_change_preserves_spectrum_and_block_norms() {
        let mut rng = rng_from_seed(7);
        for r in 1..=4 {
            let m = gram_block(&mut rng, r).unwrap();
            let (mp, _) = schmidt_basis_change(&m).unwrap();
            let e1 = eigh(&m.assemble()).unwrap().values;
            let e2 = eigh(&mp.assemble()).unwrap().values;
            let scale = e1[e1.len() - 1].max(1.0);
            for (x, y) in e1.iter().zip(&e2) {
                assert!((x - y).abs() <= 1e-10 * scale);
            }
            let off = mp.b();
            for i in 0..r {
                for j in 0..r {
                    if i != j {
                        assert!(off[(i, j)].norm() <= 1e-10 * scale);
                    }
                }
            }
            for spec in SPECS.iter().filter(|s| s.validate_for(r).is_ok()) {
                let x = ui_norm(m.a(), *spec).unwrap();
                assert!((ui_norm(mp.a(), *spec).unwrap() - x).abs() <= 1e-9 * x.max(1.0));
            }
        }
    }

    #[test]
    fn scalar_minor_equality_case() {
        let one = ComplexMatrix::identity(1);
        let m = BlockMatrix2x2::new(one.clone(), one.clone(), one).unwrap();
        let minors = minor_bounds(&schmidt_basis_change(&m).unwrap().0);
        assert_eq!(minors.len(), 1);
        assert!((minors[0].lambda - 1.0).abs() < 1e-15);
        assert!(minors[0].det.abs() < 1e-15);
        assert!(minors[0].ok);
    }

    #[test]
    fn chain_saturates_on_identity_blocks() {
        let id = ComplexMatrix::identity(3);
        let m = BlockMatrix2x2::new(id.clone(), id.clone(), id).unwrap();
        for spec in SPECS {
            let rep = lemma_chain(&m, spec).unwrap();
            assert!(rep.holds, "{spec}");
            for link in &rep.links {
                assert!(link.slack.abs() < 1e-12, "{spec} {}", link.name);
            }
            assert_eq!(rep.t_star, Some(1.0));
        }
    }

    #[test]
    fn sharpening_beats_the_plain_average() {
        let id = ComplexMatrix::identity(2);
        let m = BlockMatrix2x2::new(id.clone(), id.scale_real(2.0), id.scale_real(4.0)).unwrap();
        for spec in SPECS {
            let rep = lemma_chain(&m, spec).unwrap();
            assert!(rep.holds);
            let t = rep.t_star.unwrap();
            assert!((t - 2.0).abs() < 1e-12);
            assert!((rep.norm_b * rep.norm_b - rep.norm_a * rep.norm_c).abs() < 1e-12);
            assert!(rep.avg_bound > rep.final_bound + 0.1);
            assert!((rep.sharpened_bound - rep.norm_b).abs() < 1e-12);
        }
    }

    #[test]
    fn degenerate_a_block() {
        let z = ComplexMatrix::zeros(2, 2);
        let m = BlockMatrix2x2::new(z.clone(), z.clone(), ComplexMatrix::identity(2)).unwrap();
        let rep = lemma_chain(&m, NormSpec::FROBENIUS).unwrap();
        assert!(rep.holds);
        assert_eq!(rep.t_star, None);
        assert_eq!(rep.final_bound, 0.0);
        let zero = BlockMatrix2x2::new(z.clone(), z.clone(), z).unwrap();
        let b = lemma_bound_check(&zero, NormSpec::OPERATOR).unwrap();
        assert_eq!((b.lhs, b.rhs), (0.0, 0.0));
        assert!(b.holds);
    }

    #[test]
    fn non_psd_input_is_rejected() {
        let id = ComplexMatrix::identity(2);
        let m = BlockMatrix2x2::new(id.clone(), id.scale_real(2.0), id).unwrap();
        assert!(matches!(
            lemma_chain(&m, NormSpec::TRACE),
            Err(Error::NotPsd { .. })
        ));
        assert!(matches!(
            lemma_bound_check(&m, NormSpec::TRACE),
            Err(Error::NotPsd { .. })
        ));
    }

    #[test]
    fn bound_is_tight_on_m_uv_and_m_sigma() {
        let mut rng = rng_from_seed(8);
        let u = unit_vector(&mut rng, 3);
        let v = unit_vector(&mut rng, 3);
        let muv = build_m_uv(&u, &v).unwrap();
        let sigma = ginibre(&mut rng, 3, 3);
        let ms = build_m_sigma(&sigma).unwrap();
        for spec in SPECS {
            let b = lemma_bound_check(&muv, spec).unwrap();
            assert!((b.lhs - 1.0).abs() < 1e-12 && (b.rhs - 1.0).abs() < 1e-12);
            let b = lemma_bound_check(&ms, spec).unwrap();
            let ns = ui_norm(&sigma, spec).unwrap();
            assert!((b.lhs - ns * ns).abs() < 1e-9 * ns * ns);
            assert!((b.rhs - ns * ns).abs() < 1e-9 * ns * ns);
        }
    }

    #[test]
    fn random_chains_hold() {
        let mut rng = rng_from_seed(9);
        for trial in 0..60 {
            let r = 1 + trial % 5;
            let rank = if trial % 3 == 0 {
                1 + trial % (2 * r)
            } else {
                2 * r + 2
            };
            let m = random_psd_block(&mut rng, r, rank).unwrap();
            for spec in SPECS.iter().filter(|s| s.validate_for(r).is_ok()) {
                let rep = lemma_chain(&m, *spec).unwrap();
                assert!(
                    rep.holds,
                    "{spec}: {:?}",
                    rep.failed_links().collect::<Vec<_>>()
                );
            }
        }
    }

    #[test]
    fn tensored_image_of_cp_map_is_psd() {
        let mut rng = rng_from_seed(10);
        let map = Superoperator::random_cp_map(3, 2, 2, 11).unwrap();
        let u = unit_vector(&mut rng, 3);
        let v = unit_vector(&mut rng, 3);
        for blocks in [
            build_m_uv(&u, &v).unwrap(),
            build_m_sigma(&haar_unitary(&mut rng, 3)).unwrap(),
        ] {
            let img = tensored_image(&map, &blocks).unwrap();
            assert_eq!(img.shape(), (4, 4));
            assert!(eigh(&img).unwrap().min_value() >= -1e-8);
            let top_right = map.apply(blocks.b()).unwrap();
            assert!(img.block(0, 2, 2, 2).approx_eq(&top_right, 1e-12));
        }
    }

    #[test]
    fn report_serializes_every_link() {
        let mut rng = rng_from_seed(12);
        let rep = lemma_chain(&gram_block(&mut rng, 2).unwrap(), NormSpec::Schatten(1.5)).unwrap();
        let v: serde_json::Value = serde_json::from_str(&rep.to_json()).unwrap();
        assert_eq!(v["spec"], "schatten:1.5");
        assert_eq!(v["links"].as_array().unwrap().len(), rep.links.len());
    }
}
