//! Numerical toolkit for Toeplitz determinant identities.
//!
//! Given a symbol on the unit circle (scalar or matrix-valued, carried as
//! a banded Laurent series), this crate constructs its Wiener-Hopf
//! factorization, the Hankel matrices and trace-class kernel built from
//! the ratio symbols, and verifies at machine precision the
//! Borodin-Okounkov identity `D_n(phi) = Z det(I - K_n)` along with its
//! companions:
//!
//! - the determinant quotient formula
//!   `D_{n-1}/D_n = 1 - ((I - U_n V_n)^{-1} U_n delta, V_n delta)`;
//! - Cramer consistency of the kernel determinants;
//! - the deformation sweep `phi -> phi^lambda = exp(lambda log phi)`;
//! - the block Toeplitz extension with a second factorization
//!   `phi = psi_- psi_+` and `Z = det T(phi) T(phi^{-1})`.
//!
//! The constant `Z` is the strong Szego limit of `D_n(phi)`; the toolkit
//! evaluates it by two independent routes (coefficient series and
//! operator sections) and uses their agreement as a cross-check.
//!
//! Sections of banded symbols are exact operators, so the only error
//! sources are band truncation (reported by every lossy operation) and
//! double-precision rounding.
//!
//! The `parallel` feature (on by default) runs sweeps over sections and
//! deformation parameters on rayon; results are merged deterministically
//! either way.

pub mod config;
pub mod determinants;
pub mod error;
pub mod factorization;
pub mod identities;
pub mod matrix;
pub mod operators;
mod par;
pub mod runner;
pub mod symbol;

pub use config::{parse_config, RunConfig, SymbolSpec};
pub use determinants::{
    det_complex, fredholm_det, szego_z_operator, szego_z_series, toeplitz_det, LogDet,
    SzegoOperatorParams,
};
pub use error::{Error, Result};
pub use factorization::{
    block_plus_factorization, exp_series, invert_triangular, make_ratios, wiener_hopf_scalar,
    FactorizationData, RatioPair,
};
pub use identities::{
    block_bo_check, bo_check, cramer_check, lambda_sweep, quotient_check, BlockPipeline,
    CheckKind, CheckParams, CheckReport, ScalarPipeline, SweepRecord,
};
pub use matrix::{lu_factor, ComplexMatrix, LuFactorization};
pub use operators::{
    delta_vectors, hankel_u, hankel_v, kernel_section, toeplitz_matrix, DeltaVectors,
};
pub use symbol::{
    coeffs_from_samples, convolve, invert_symbol, krein_diagnostics, log_symbol,
    winding_number, KreinDiagnostics, LaurentSeries,
};
