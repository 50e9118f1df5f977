//! The classical Bessel limit `q → 1`: the limiting bound displays, the
//! classical first zeros they bound, and the convergence of the scaled
//! q-bounds toward them.

use std::fmt;

use serde::{Serialize, Serializer};

use crate::bounds::theorem_bounds;
use crate::error::{Error, Result};
use crate::qseries::QDomainParams;
use crate::series::{Family, FunctionCase};

/// Step of the sign-change scan for classical zeros.
const SCAN_STEP: f64 = 0.05;

/// Scan limit for classical zeros.
const SCAN_LIMIT: f64 = 20.0;

/// Cap on ascending-series terms.
const MAX_SERIES_TERMS: usize = 300;

/// Relative error allowed at the last q of a convergence table.
pub const LIMIT_TOL: f64 = 0.02;

/// Classical quantity bounded by a limiting display.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TargetQuantity {
    /// `(j'_{ν,1})²`
    DerivZeroSquared,
    /// Radius of starlikeness of `z^{1-ν} J_ν(z)` (suitably normalized).
    RadiusG,
    /// Radius of starlikeness of `z^{1-ν/2} J_ν(√z)` (suitably normalized).
    RadiusH,
    /// `(j'_{ν,1} / 2)²`
    QuarterDerivZeroSquared,
    HalfRadiusG,
    QuarterRadiusH,
}

impl TargetQuantity {
    pub fn for_case(case: FunctionCase) -> TargetQuantity {
        match case {
            FunctionCase::F2 => TargetQuantity::DerivZeroSquared,
            FunctionCase::G2 => TargetQuantity::RadiusG,
            FunctionCase::H2 => TargetQuantity::RadiusH,
            FunctionCase::F3 => TargetQuantity::QuarterDerivZeroSquared,
            FunctionCase::G3 => TargetQuantity::HalfRadiusG,
            FunctionCase::H3 => TargetQuantity::QuarterRadiusH,
        }
    }

    pub fn tag(self) -> &'static str {
        match self {
            TargetQuantity::DerivZeroSquared => "jp2",
            TargetQuantity::RadiusG => "r_g",
            TargetQuantity::RadiusH => "r_h",
            TargetQuantity::QuarterDerivZeroSquared => "jp2/4",
            TargetQuantity::HalfRadiusG => "r_g/2",
            TargetQuantity::QuarterRadiusH => "r_h/4",
        }
    }

    /// The half- and quarter-scaled targets of the Hahn-Exton limit.
    pub fn is_scaled(self) -> bool {
        matches!(
            self,
            TargetQuantity::QuarterDerivZeroSquared
                | TargetQuantity::HalfRadiusG
                | TargetQuantity::QuarterRadiusH
        )
    }

    /// Value from classically computed zeros; `None` when `j'` is undefined.
    pub fn value(self, zeros: &ClassicalZeros) -> Option<f64> {
        match self {
            TargetQuantity::DerivZeroSquared => zeros.deriv_zero.map(|j| j * j),
            TargetQuantity::QuarterDerivZeroSquared => zeros.deriv_zero.map(|j| 0.25 * j * j),
            TargetQuantity::RadiusG => Some(zeros.radius_g),
            TargetQuantity::HalfRadiusG => Some(0.5 * zeros.radius_g),
            TargetQuantity::RadiusH => Some(zeros.radius_h),
            TargetQuantity::QuarterRadiusH => Some(0.25 * zeros.radius_h),
        }
    }
}

impl fmt::Display for TargetQuantity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

impl Serialize for TargetQuantity {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(self.tag())
    }
}

/// A limiting bound display, identified by the q-case it comes from and its chain.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ClassicalBracket {
    pub case: FunctionCase,
    pub chain: usize,
    pub nu: f64,
    pub lower: f64,
    pub upper: f64,
    pub target: TargetQuantity,
}

impl ClassicalBracket {
    pub fn contains(&self, x: f64) -> bool {
        self.lower < x && x < self.upper
    }
}

/// Number of bound chains each case displays.
pub fn chains(case: FunctionCase) -> usize {
    match case {
        FunctionCase::F2 | FunctionCase::F3 => 1,
        _ => 2,
    }
}

/// Limit display of `case`'s chain `chain` at order ν.
pub fn classical_bracket(case: FunctionCase, chain: usize, nu: f64) -> Result<ClassicalBracket> {
    if !(nu.is_finite() && nu > -1.0) {
        return Err(Error::domain(format!("nu = {nu} must exceed -1")));
    }
    if case.requires_positive_nu() && nu <= 0.0 {
        return Err(Error::domain(format!("{case} requires nu > 0, got {nu}")));
    }
    if chain == 0 || chain > chains(case) {
        return Err(Error::domain(format!("{case} has no bound chain {chain}")));
    }
    let (lower, upper) = match (case, chain) {
        (FunctionCase::F2, _) => (
            4.0 * nu * (nu + 1.0) / (nu + 2.0),
            4.0 * nu * (nu + 1.0) * (nu + 2.0).powi(2) / (nu * nu + 8.0 * nu + 8.0),
        ),
        (FunctionCase::G2, 1) => (
            2.0 * ((nu + 1.0) / 3.0).sqrt(),
            2.0 * (3.0 * (nu + 1.0) * (nu + 2.0) / (4.0 * nu + 13.0)).sqrt(),
        ),
        (FunctionCase::G2, _) => (
            2.0 * ((nu + 1.0).powi(2) * (nu + 2.0) / (4.0 * nu + 13.0)).powf(0.25),
            2.0 * ((nu + 1.0) * (nu + 3.0) * (4.0 * nu + 13.0)
                / (2.0 * (4.0 * nu * nu + 26.0 * nu + 49.0)))
                .sqrt(),
        ),
        (FunctionCase::H2, 1) => (2.0 * (nu + 1.0), 8.0 * (nu + 1.0) * (nu + 2.0) / (nu + 5.0)),
        (FunctionCase::H2, _) => (
            4.0 * (nu + 1.0) * (nu + 2.0).sqrt() / (nu + 5.0).sqrt(),
            4.0 * (nu + 1.0) * (nu + 3.0) * (nu + 5.0) / (nu * nu + 8.0 * nu + 23.0),
        ),
        (FunctionCase::F3, _) => (
            nu * (nu + 1.0) / (nu + 2.0),
            nu * (nu + 1.0) * (nu + 2.0).powi(2) / (nu * nu + 8.0 * nu + 8.0),
        ),
        (FunctionCase::G3, 1) => (
            ((nu + 1.0) / 3.0).sqrt(),
            (3.0 * (nu + 1.0) * (nu + 2.0) / (4.0 * nu + 13.0)).sqrt(),
        ),
        (FunctionCase::G3, _) => (
            ((nu + 1.0).powi(2) * (nu + 2.0) / (4.0 * nu + 13.0)).powf(0.25),
            ((nu + 1.0) * (nu + 3.0) * (4.0 * nu + 13.0)
                / (2.0 * (4.0 * nu * nu + 26.0 * nu + 49.0)))
                .sqrt(),
        ),
        (FunctionCase::H3, 1) => ((nu + 1.0) / 2.0, 2.0 * (nu + 1.0) * (nu + 2.0) / (nu + 5.0)),
        (FunctionCase::H3, _) => (
            (nu + 1.0) * ((nu + 2.0) / (nu + 5.0)).sqrt(),
            (nu + 1.0) * (nu + 3.0) * (nu + 5.0) / (nu * nu + 8.0 * nu + 23.0),
        ),
    };
    Ok(ClassicalBracket {
        case,
        chain,
        nu,
        lower,
        upper,
        target: TargetQuantity::for_case(case),
    })
}

/// Classical Bessel function `J_ν(x)` by its ascending series.
pub fn classical_j_eval(nu: f64, x: f64, tol: f64) -> Result<f64> {
    if !(nu.is_finite() && nu > -1.0) {
        return Err(Error::domain(format!("nu = {nu} must exceed -1")));
    }
    if x == 0.0 {
        return match nu {
            n if n > 0.0 => Ok(0.0),
            0.0 => Ok(1.0),
            _ => Err(Error::domain("J_nu(0) is unbounded for nu < 0")),
        };
    }
    let lead = if x > 0.0 {
        (0.5 * x).powf(nu)
    } else if nu.fract() == 0.0 {
        (0.5 * x).powi(nu as i32)
    } else {
        return Err(Error::domain(format!(
            "J_nu({x}) is not real for non-integer nu"
        )));
    };
    let terms = ascending_terms(nu, x, tol)?;
    Ok(lead / libm::tgamma(nu + 1.0) * terms.iter().sum::<f64>())
}

/// `t_k = (-x²/4)^k / (k! (ν+1)_k)`, summed until the next term is below `tol`
/// relative to the running absolute sum.
fn ascending_terms(nu: f64, x: f64, tol: f64) -> Result<Vec<f64>> {
    let y = -0.25 * x * x;
    let mut t = 1.0f64;
    let mut abs_sum = 1.0;
    let mut terms = vec![1.0];
    for k in 0..MAX_SERIES_TERMS {
        let kp1 = (k + 1) as f64;
        t *= y / (kp1 * (kp1 + nu));
        terms.push(t);
        abs_sum += t.abs();
        if kp1 > y.abs().sqrt() && t.abs() <= tol * abs_sum {
            return Ok(terms);
        }
    }
    Err(Error::NonConvergence {
        what: "classical Bessel series",
        iterations: MAX_SERIES_TERMS,
    })
}

/// `Σ (2k + ν - c) t_k(x)`, proportional to `x J'_ν(x) - c J_ν(x)` for `x > 0`.
fn shifted_sum(nu: f64, c: f64, x: f64, tol: f64) -> Result<f64> {
    Ok(ascending_terms(nu, x, tol)?
        .iter()
        .enumerate()
        .map(|(k, t)| (2.0 * k as f64 + nu - c) * t)
        .sum())
}

/// First positive zero of `x ↦ shifted_sum(ν, c, x)`.
fn first_zero(nu: f64, c: f64, tol: f64) -> Result<f64> {
    let f = |x: f64| shifted_sum(nu, c, x, 1e-17);
    let mut lo = SCAN_STEP;
    let mut flo = f(lo)?;
    loop {
        let hi = lo + SCAN_STEP;
        if hi > SCAN_LIMIT {
            return Err(Error::NonConvergence {
                what: "classical zero scan",
                iterations: (SCAN_LIMIT / SCAN_STEP) as usize,
            });
        }
        let fhi = f(hi)?;
        if flo.signum() != fhi.signum() {
            return bisect(f, lo, hi, flo, tol);
        }
        lo = hi;
        flo = fhi;
    }
}

fn bisect(
    f: impl Fn(f64) -> Result<f64>,
    mut lo: f64,
    mut hi: f64,
    flo: f64,
    tol: f64,
) -> Result<f64> {
    let sign = flo.signum();
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if hi - lo <= tol * hi || mid <= lo || mid >= hi {
            return Ok(mid);
        }
        if f(mid)?.signum() == sign {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Err(Error::NonConvergence {
        what: "classical zero bisection",
        iterations: 200,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ClassicalZeros {
    pub nu: f64,
    /// `j'_{ν,1}`, defined for ν > 0.
    pub deriv_zero: Option<f64>,
    /// First positive zero of `z J'_ν(z) + (1-ν) J_ν(z)`.
    pub radius_g: f64,
    /// First positive zero in `z` of the derivative of `z^{1-ν/2} J_ν(√z)`.
    pub radius_h: f64,
}

pub fn classical_first_zeros(nu: f64, tol: f64) -> Result<ClassicalZeros> {
    if !(nu.is_finite() && nu > -1.0) {
        return Err(Error::domain(format!("nu = {nu} must exceed -1")));
    }
    let deriv_zero = if nu > 0.0 {
        Some(first_zero(nu, 0.0, tol)?)
    } else {
        None
    };
    let radius_g = first_zero(nu, nu - 1.0, tol)?;
    let s = first_zero(nu, nu - 2.0, tol)?;
    Ok(ClassicalZeros {
        nu,
        deriv_zero,
        radius_g,
        radius_h: s * s,
    })
}

/// `(1-q)^p` with `p = 2` for the f- and h-cases, `p = 1` for the g-cases.
pub fn limit_scale(case: FunctionCase, q: f64) -> f64 {
    match case {
        FunctionCase::G2 | FunctionCase::G3 => 1.0 - q,
        _ => (1.0 - q).powi(2),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConvergenceRow {
    pub q: f64,
    pub chain: usize,
    pub scaled_lower: f64,
    pub scaled_upper: f64,
    pub classical_lower: f64,
    pub classical_upper: f64,
    /// Larger of the two relative end errors.
    pub rel_error: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConvergenceTable {
    pub case: FunctionCase,
    pub nu: f64,
    pub target: TargetQuantity,
    /// Rows ordered by chain, then q.
    pub rows: Vec<ConvergenceRow>,
    /// Chains whose error did not decrease strictly along q.
    pub not_decreasing: Vec<usize>,
    pub final_error: f64,
}

impl ConvergenceTable {
    pub fn passed(&self) -> bool {
        self.not_decreasing.is_empty() && self.final_error < LIMIT_TOL
    }
}

/// Scaled theorem bounds along `q_list` against the limiting displays.
pub fn limit_convergence_check(
    case: FunctionCase,
    nu: f64,
    q_list: &[f64],
) -> Result<ConvergenceTable> {
    if q_list.is_empty() {
        return Err(Error::domain("empty q list"));
    }
    if q_list.windows(2).any(|w| !(w[0] < w[1])) {
        return Err(Error::domain("q list must increase"));
    }
    let limits: Vec<ClassicalBracket> = (1..=chains(case))
        .map(|c| classical_bracket(case, c, nu))
        .collect::<Result<_>>()?;
    let sets = q_list
        .iter()
        .map(|&q| theorem_bounds(case, QDomainParams::new(nu, q)?))
        .collect::<Result<Vec<_>>>()?;

    let mut rows = Vec::new();
    let mut not_decreasing = Vec::new();
    let mut final_error: f64 = 0.0;
    for lim in &limits {
        let mut prev = f64::INFINITY;
        let mut decreasing = true;
        for (&q, set) in q_list.iter().zip(&sets) {
            let b = set
                .chain(lim.chain)
                .expect("theorem and limit displays share chains")
                .bracket;
            let scale = limit_scale(case, q);
            let (lo, hi) = (b.lower / scale, b.upper / scale);
            let err = ((lo - lim.lower) / lim.lower)
                .abs()
                .max(((hi - lim.upper) / lim.upper).abs());
            if !(err < prev) {
                decreasing = false;
            }
            prev = err;
            rows.push(ConvergenceRow {
                q,
                chain: lim.chain,
                scaled_lower: lo,
                scaled_upper: hi,
                classical_lower: lim.lower,
                classical_upper: lim.upper,
                rel_error: err,
            });
        }
        if !decreasing {
            not_decreasing.push(lim.chain);
        }
        final_error = final_error.max(prev);
    }
    Ok(ConvergenceTable {
        case,
        nu,
        target: TargetQuantity::for_case(case),
        rows,
        not_decreasing,
        final_error,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Side {
    Lower,
    Upper,
}

impl Side {
    pub fn tag(self) -> &'static str {
        match self {
            Side::Lower => "lower",
            Side::Upper => "upper",
        }
    }
}

/// One pointwise inequality `Hahn-Exton limit display ≤ Jackson limit display`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ComparisonRow {
    pub nu: f64,
    /// The Hahn-Exton case on the left of the inequality.
    pub case: FunctionCase,
    pub chain: usize,
    pub side: Side,
    pub hahn_exton: f64,
    pub jackson: f64,
    pub holds: bool,
}

fn jackson_partner(case: FunctionCase) -> FunctionCase {
    match case {
        FunctionCase::F3 => FunctionCase::F2,
        FunctionCase::G3 => FunctionCase::G2,
        FunctionCase::H3 => FunctionCase::H2,
        other => other,
    }
}

/// Every limit display of the Hahn-Exton cases against its Jackson partner.
/// The f-rows are skipped where ν ≤ 0.
pub fn comparison_check(nu_grid: &[f64]) -> Result<Vec<ComparisonRow>> {
    let mut rows = Vec::new();
    for &nu in nu_grid {
        for case in FunctionCase::ALL
            .into_iter()
            .filter(|c| c.family() == Family::HahnExton)
        {
            if case.requires_positive_nu() && nu <= 0.0 {
                continue;
            }
            for chain in 1..=chains(case) {
                let he = classical_bracket(case, chain, nu)?;
                let jk = classical_bracket(jackson_partner(case), chain, nu)?;
                for (side, a, b) in [
                    (Side::Lower, he.lower, jk.lower),
                    (Side::Upper, he.upper, jk.upper),
                ] {
                    rows.push(ComparisonRow {
                        nu,
                        case,
                        chain,
                        side,
                        hahn_exton: a,
                        jackson: b,
                        holds: a <= b,
                    });
                }
            }
        }
    }
    Ok(rows)
}
