//! Induced Schatten `p → q` norms of linear maps on matrices, their
//! restriction to Hermitian inputs, k-positivity tests, and executable
//! versions of the block-matrix inequalities behind the equality of the two
//! norms for 2-positive maps.
//!
//! The crate is organized bottom-up:
//!
//! * [`matrix`] – dense complex matrices, Jacobi eigen/SVD solvers,
//!   unitarily invariant norms (Schatten and Ky Fan), PSD utilities.
//! * [`superop`] – maps `M_m → M_n` stored by Choi matrix and optional
//!   Kraus list, application, `Φ ⊗ Id_k`, positivity tests.
//! * [`norm_opt`] – multistart maximization of `‖Φ(σ)‖_q` over the
//!   Schatten-p ball, full or Hermitian, plus a sampling oracle.
//! * [`proof_lab`] – the block matrices `M_{u,v}`, `M_σ`, the Schmidt basis
//!   change and the chain of inequalities bounding `‖B‖² ≤ ‖A‖‖C‖`.
//! * [`campaign`] – seeded fuzz campaigns producing JSON-lines reports.
//! * [`cli`] – the `cpnorm` command line.

pub mod campaign;
pub mod cli;
pub mod error;
pub mod matrix;
pub mod norm_opt;
pub mod proof_lab;
pub mod superop;

pub use error::{Error, Result};
pub use matrix::{ComplexMatrix, NormSpec, C64};
pub use norm_opt::{
    hermitian_induced_norm, induced_norm, sampling_oracle, NormEstimate, OptConfig,
};
pub use superop::Superoperator;
