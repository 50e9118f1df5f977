//! The radius of starlikeness as the first positive zero of a coefficient stream.

use serde::Serialize;

use crate::bounds::first_zero_upper_u;
use crate::error::{Error, Result};
use crate::euler_rayleigh::{er_bracket, newton_power_sums, BoundBracket};
use crate::qseries::{norm_constant, QDomainParams, DEFAULT_PRODUCT_TOL};
use crate::series::{
    q_bessel_terms, CoefficientStream, Family, FunctionCase, Parity, DEFAULT_EVAL_TOL,
    DEFAULT_MAX_TERMS,
};

/// Iteration cap for interval halving.
pub const MAX_BISECTIONS: usize = 200;

/// Growth factor applied to the upper end while no sign change is found.
const EXPANSION_FACTOR: f64 = 1.25;

/// Expansion stops at this multiple of the theorem upper bound.
const EXPANSION_CAP: f64 = 4.0;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RadiusResult {
    pub case: FunctionCase,
    pub params: QDomainParams,
    /// Radius in units of `z`.
    pub radius: f64,
    /// First zero in the reduced variable.
    pub u_first_zero: f64,
    /// `r J'(r) - c J(r)` at the radius.
    pub residual: f64,
    /// Sum of absolute terms of `r d/dr (r J' - c J)`, the local derivative scale.
    pub residual_scale: f64,
    /// Bracket on `u` the bisection started from.
    pub bracket: BoundBracket,
    pub expanded: bool,
    pub iterations: usize,
    pub truncation_order: usize,
}

impl RadiusResult {
    /// `|residual| / residual_scale`.
    pub fn relative_residual(&self) -> f64 {
        if self.residual_scale > 0.0 {
            self.residual.abs() / self.residual_scale
        } else {
            self.residual.abs()
        }
    }
}

/// Radius with the default series cap.
pub fn starlike_radius(
    case: FunctionCase,
    params: QDomainParams,
    tol: f64,
) -> Result<RadiusResult> {
    starlike_radius_with(case, params, tol, DEFAULT_MAX_TERMS)
}

/// Bisection on the stream, started from the second-order Euler-Rayleigh bracket.
pub fn starlike_radius_with(
    case: FunctionCase,
    params: QDomainParams,
    tol: f64,
    max_terms: usize,
) -> Result<RadiusResult> {
    case.check_domain(params)?;
    if !(tol > 0.0) {
        return Err(Error::domain(format!("tolerance {tol} must be positive")));
    }
    let stream = CoefficientStream::auto(case, params, max_terms)?;
    let sums = newton_power_sums(&stream, 4)?;
    let bracket = er_bracket(&sums, 2)?;
    let f = |u: f64| stream.eval_with_tol(u, DEFAULT_EVAL_TOL);

    let mut lo = bracket.lower;
    if f(lo)? <= 0.0 {
        lo = 0.0;
    }
    let mut hi = bracket.upper;
    let mut expanded = false;
    let cap = EXPANSION_CAP
        * first_zero_upper_u(case, params)
            .unwrap_or(bracket.upper)
            .max(bracket.upper);
    while f(hi)? > 0.0 {
        if hi >= cap {
            return Err(Error::BracketFailure { case, limit: cap });
        }
        expanded = true;
        lo = hi;
        hi = (hi * EXPANSION_FACTOR).min(cap);
    }

    let mut iterations = 0;
    while hi - lo > tol * hi {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        iterations += 1;
        if iterations > MAX_BISECTIONS {
            return Err(Error::NonConvergence {
                what: "radius bisection",
                iterations: MAX_BISECTIONS,
            });
        }
        if f(mid)? > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let u = 0.5 * (lo + hi);
    let radius = case.radius_from_u(u);
    let (residual, residual_scale) = residual_parts(case, params, radius, DEFAULT_EVAL_TOL * 1e-3)?;
    Ok(RadiusResult {
        case,
        params,
        radius,
        u_first_zero: u,
        residual,
        residual_scale,
        bracket,
        expanded,
        iterations,
        truncation_order: stream.order(),
    })
}

/// Value of `r J'(r) - c J(r)` for the case, from the raw q-Bessel series.
///
/// For the h-cases the equation is taken at `√r`, so its first zero in `r` is
/// the radius itself.
pub fn equation_residual(
    case: FunctionCase,
    params: QDomainParams,
    r: f64,
    tol: f64,
) -> Result<f64> {
    residual_parts(case, params, r, tol).map(|(v, _)| v)
}

/// Residual together with the absolute scale of `r d/dr` of it.
pub fn residual_with_scale(
    case: FunctionCase,
    params: QDomainParams,
    r: f64,
    tol: f64,
) -> Result<(f64, f64)> {
    residual_parts(case, params, r, tol)
}

fn residual_parts(
    case: FunctionCase,
    params: QDomainParams,
    r: f64,
    tol: f64,
) -> Result<(f64, f64)> {
    case.check_domain(params)?;
    if !(r > 0.0) {
        return Err(Error::domain(format!(
            "radius argument {r} must be positive"
        )));
    }
    let nu = params.nu();
    let s = match case.parity() {
        Parity::Even => r,
        Parity::Plain => r.sqrt(),
    };
    let family = case.family();
    let terms = q_bessel_terms(family, params, s, tol, DEFAULT_MAX_TERMS)?;
    let arg = match family {
        Family::Jackson => 0.5 * s,
        Family::HahnExton => s,
    };
    let pref = arg.powf(nu) / norm_constant(params, DEFAULT_PRODUCT_TOL)?;
    let c = case.shift(nu);
    let mut value = 0.0;
    let mut scale = 0.0;
    for (n, t) in terms.iter().enumerate() {
        let k = 2.0 * n as f64 + nu;
        value += (k - c) * t;
        scale += (k * (k - c) * t).abs();
    }
    Ok((pref * value, pref * scale))
}
