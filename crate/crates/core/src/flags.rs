use std::fmt;

use serde::Serialize;

/// Short audit codes attached to output records.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Flag {
    /// A printed expression evaluated negative and was replaced by its magnitude.
    SignNorm,
    /// Printed Δ₂ of the f⁽²⁾ case disagrees with the Newton oracle.
    TypoD2,
    /// Printed Θ₂ of the h⁽²⁾ case disagrees with the Newton oracle.
    TypoT2,
    /// Printed σ₁ of the h⁽³⁾ case disagrees with the oracle; the value implied
    /// by the stated bound is used instead.
    TypoS1,
    /// Closed form disagrees with the oracle at an unlisted site.
    Mismatch,
    /// Family-3 classical limit compared against the half/quarter-scaled quantity.
    ScaleTag,
    /// Computed radius is not strictly inside the bracket.
    BracketMiss,
    /// The initial root bracket had to be widened.
    Expanded,
    /// Error in the limit sequence did not decrease strictly.
    NotDecreasing,
    /// A formula-level comparison inequality failed.
    Violated,
    DomainError,
    Convergence,
}

impl Flag {
    pub fn code(self) -> &'static str {
        match self {
            Flag::SignNorm => "SIGN_NORM",
            Flag::TypoD2 => "TYPO_D2",
            Flag::TypoT2 => "TYPO_T2",
            Flag::TypoS1 => "TYPO_S1",
            Flag::Mismatch => "MISMATCH",
            Flag::ScaleTag => "SCALE_TAG",
            Flag::BracketMiss => "BRACKET_MISS",
            Flag::Expanded => "EXPANDED",
            Flag::NotDecreasing => "NOT_DECREASING",
            Flag::Violated => "VIOLATED",
            Flag::DomainError => "DOMAIN_ERROR",
            Flag::Convergence => "CONVERGENCE",
        }
    }

    pub fn join(flags: &[Flag]) -> String {
        let mut sorted = flags.to_vec();
        sorted.sort();
        sorted.dedup();
        sorted
            .iter()
            .map(|f| f.code())
            .collect::<Vec<_>>()
            .join(",")
    }
}

impl fmt::Display for Flag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.code())
    }
}
