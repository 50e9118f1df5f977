//! Radii of starlikeness of the six normalized Jackson and Hahn-Exton
//! q-Bessel functions.
//!
//! The crate is organised bottom-up:
//!
//! - [`qseries`]: q-Pochhammer symbols and the normalization constant `c_ν(q)`.
//! - [`series`]: the q-Bessel series, the six normalized forms and the
//!   Maclaurin coefficient streams whose smallest zero is the radius.
//! - [`euler_rayleigh`]: power sums of reciprocal zeros, computed by Newton's
//!   identities and by the published closed forms, plus Euler-Rayleigh brackets.
//! - [`bounds`]: the explicit lower/upper bounds for each normalized form.
//! - [`radius`]: certified bisection for the radius itself.
//! - [`classical`]: the classical Bessel limit (q → 1) and its bounds.
//! - [`cli`]: grid driver producing CSV/JSON verification tables.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bounds;
pub mod classical;
pub mod cli;
mod error;
pub mod euler_rayleigh;
mod flags;
pub mod qseries;
pub mod radius;
pub mod series;

pub use bounds::{helper_poly, theorem_bounds, Helper, Quantity, TheoremBoundSet, TheoremBracket};
pub use classical::{
    classical_bracket, classical_first_zeros, classical_j_eval, comparison_check,
    limit_convergence_check, ClassicalBracket, ClassicalZeros, ComparisonRow, ConvergenceTable,
    TargetQuantity,
};
pub use error::{Error, Result};
pub use euler_rayleigh::{
    closed_form_sum, er_bracket, newton_power_sums, reconcile, BoundBracket, BracketSource,
    ClosedFormSum, PowerSums, Provenance, ReconcileReport, ReconcileRow,
};
pub use flags::Flag;
pub use qseries::{norm_constant, q_pochhammer, q_pochhammer_inf, QDomainParams};
pub use radius::{equation_residual, starlike_radius, RadiusResult};
pub use series::{
    coefficient_stream, hahn_exton_j3, jackson_j2, normalized_eval, stream_eval, CoefficientStream,
    Family, FunctionCase, Parity,
};
