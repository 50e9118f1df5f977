//! q-Bessel series, the six normalized forms and their coefficient streams.
//!
//! Every radius in this crate is the smallest positive zero of an entire
//! function that, in a reduced variable `u`, has the product shape
//! `∏ (1 - u/u_n)` with positive `u_n`. For the f- and g-forms the reduced
//! variable is `u = z²`; for the h-forms it is `u = z`. A
//! [`CoefficientStream`] holds the Maclaurin coefficients of that function in
//! `u`, normalized to `a₀ = 1`.

use std::fmt;
use std::str::FromStr;

use serde::{Serialize, Serializer};

use crate::bounds;
use crate::error::{Error, Result};
use crate::qseries::{norm_constant, QDomainParams, DEFAULT_PRODUCT_TOL};

/// Default cap on the number of series terms.
pub const DEFAULT_MAX_TERMS: usize = 500;

/// Truncation target for `|a_N| R^N`.
const TRUNCATION_TARGET: f64 = 1e-16;

/// Smallest truncation order produced by [`CoefficientStream::auto`].
const MIN_AUTO_ORDER: usize = 8;

/// Coefficients kept past the truncation order to estimate the tail.
const TAIL_TERMS: usize = 8;

/// Relative tail tolerance used by [`stream_eval`].
pub const DEFAULT_EVAL_TOL: f64 = 1e-13;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Family {
    /// Jackson q-Bessel function, weights `q^{n(n+ν)}`.
    Jackson,
    /// Hahn-Exton q-Bessel function, weights `q^{n(n+1)/2}`.
    HahnExton,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Parity {
    /// Stream stored in `u = z²`.
    Even,
    /// Stream stored in `u = z`.
    Plain,
}

/// One of the six normalized q-Bessel forms.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum FunctionCase {
    /// `(2^ν c_ν J⁽²⁾(z))^{1/ν}`
    F2,
    /// `2^ν c_ν z^{1-ν} J⁽²⁾(z)`
    G2,
    /// `2^ν c_ν z^{1-ν/2} J⁽²⁾(√z)`
    H2,
    /// `(c_ν J⁽³⁾(z))^{1/ν}`
    F3,
    /// `c_ν z^{1-ν} J⁽³⁾(z)`
    G3,
    /// `c_ν z^{1-ν/2} J⁽³⁾(√z)`
    H3,
}

impl FunctionCase {
    pub const ALL: [FunctionCase; 6] = [
        FunctionCase::F2,
        FunctionCase::G2,
        FunctionCase::H2,
        FunctionCase::F3,
        FunctionCase::G3,
        FunctionCase::H3,
    ];

    pub fn name(self) -> &'static str {
        match self {
            FunctionCase::F2 => "F2",
            FunctionCase::G2 => "G2",
            FunctionCase::H2 => "H2",
            FunctionCase::F3 => "F3",
            FunctionCase::G3 => "G3",
            FunctionCase::H3 => "H3",
        }
    }

    pub fn family(self) -> Family {
        match self {
            FunctionCase::F2 | FunctionCase::G2 | FunctionCase::H2 => Family::Jackson,
            _ => Family::HahnExton,
        }
    }

    pub fn parity(self) -> Parity {
        match self {
            FunctionCase::H2 | FunctionCase::H3 => Parity::Plain,
            _ => Parity::Even,
        }
    }

    /// Theorem number (1..=6) whose bounds apply to this case.
    pub fn theorem(self) -> u8 {
        match self {
            FunctionCase::F2 => 1,
            FunctionCase::G2 => 2,
            FunctionCase::H2 => 3,
            FunctionCase::F3 => 4,
            FunctionCase::G3 => 5,
            FunctionCase::H3 => 6,
        }
    }

    /// The constant `c` in the radius equation `r J'(r) - c J(r) = 0`.
    pub fn shift(self, nu: f64) -> f64 {
        match self {
            FunctionCase::F2 | FunctionCase::F3 => 0.0,
            FunctionCase::G2 | FunctionCase::G3 => nu - 1.0,
            FunctionCase::H2 | FunctionCase::H3 => nu - 2.0,
        }
    }

    pub fn requires_positive_nu(self) -> bool {
        matches!(self, FunctionCase::F2 | FunctionCase::F3)
    }

    pub fn check_domain(self, params: QDomainParams) -> Result<()> {
        if self.requires_positive_nu() && params.nu() <= 0.0 {
            return Err(Error::domain(format!(
                "{self} requires nu > 0, got {}",
                params.nu()
            )));
        }
        Ok(())
    }

    /// Radius in `z` from the first zero in the reduced variable.
    pub fn radius_from_u(self, u: f64) -> f64 {
        match self.parity() {
            Parity::Even => u.sqrt(),
            Parity::Plain => u,
        }
    }

    pub fn u_from_radius(self, r: f64) -> f64 {
        match self.parity() {
            Parity::Even => r * r,
            Parity::Plain => r,
        }
    }

    /// Multiplier `w(n)` of the n-th stream coefficient, normalized to `w(0) = 1`.
    fn weight(self, n: usize, nu: f64) -> f64 {
        let n = n as f64;
        match self {
            FunctionCase::F2 | FunctionCase::F3 => (2.0 * n + nu) / nu,
            FunctionCase::G2 | FunctionCase::G3 => 2.0 * n + 1.0,
            FunctionCase::H2 | FunctionCase::H3 => n + 1.0,
        }
    }
}

impl fmt::Display for FunctionCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl Serialize for FunctionCase {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(self.name())
    }
}

impl FromStr for FunctionCase {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        FunctionCase::ALL
            .into_iter()
            .find(|c| c.name().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| Error::domain(format!("unknown case '{s}'")))
    }
}

impl Family {
    /// Exponent of q in the n-th series term.
    fn exponent(self, n: usize, nu: f64) -> f64 {
        let n = n as f64;
        match self {
            Family::Jackson => n * (n + nu),
            Family::HahnExton => 0.5 * n * (n + 1.0),
        }
    }

    /// `ln` of the per-term divisor (4 for Jackson, from `(z/2)^{2n}`).
    fn log_divisor(self) -> f64 {
        match self {
            Family::Jackson => std::f64::consts::LN_2 * 2.0,
            Family::HahnExton => 0.0,
        }
    }
}

/// `ln |(a; q)_n|`, accumulated factor by factor.
fn ln_pochhammer(a: f64, q: f64, n: usize) -> f64 {
    let mut acc = 0.0;
    let mut aq = a;
    for _ in 0..n {
        acc += (1.0 - aq).abs().ln();
        aq *= q;
    }
    acc
}

/// The n-th normalized stream coefficient from its closed formula.
fn direct_coefficient(case: FunctionCase, params: QDomainParams, n: usize) -> f64 {
    let (nu, q) = (params.nu(), params.q());
    let fam = case.family();
    let ln_mag = case.weight(n, nu).abs().ln() + fam.exponent(n, nu) * q.ln()
        - n as f64 * fam.log_divisor()
        - ln_pochhammer(q, q, n)
        - ln_pochhammer(params.pow(nu + 1.0), q, n);
    let sign = if n.is_multiple_of(2) { 1.0 } else { -1.0 };
    sign * ln_mag.exp()
}

/// Normalized Maclaurin coefficients `a₀ = 1, a₁, …, a_N` in the reduced variable.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CoefficientStream {
    case: Option<FunctionCase>,
    params: Option<QDomainParams>,
    coeffs: Vec<f64>,
    /// Coefficients `a_{N+1}, …` used only for tail estimates.
    tail: Vec<f64>,
    reference_radius: f64,
    tail_bound: f64,
}

impl CoefficientStream {
    /// Stream truncated at order `order` (so `order + 1` coefficients).
    pub fn truncated(case: FunctionCase, params: QDomainParams, order: usize) -> Result<Self> {
        case.check_domain(params)?;
        if order < 2 {
            return Err(Error::domain(format!("truncation order {order} < 2")));
        }
        let coeffs: Vec<f64> = (0..=order)
            .map(|n| direct_coefficient(case, params, n))
            .collect();
        let tail: Vec<f64> = (order + 1..=order + TAIL_TERMS)
            .map(|n| direct_coefficient(case, params, n))
            .collect();
        let reference_radius = reference_radius(case, params, &coeffs);
        let tail_bound = tail_sum(&tail, order, reference_radius);
        Ok(CoefficientStream {
            case: Some(case),
            params: Some(params),
            coeffs,
            tail,
            reference_radius,
            tail_bound,
        })
    }

    /// Stream whose order is grown until `|a_N| R^N < 1e-16`, with `R` twice the
    /// theorem upper bound for the first zero. `max_terms` caps the order.
    pub fn auto(case: FunctionCase, params: QDomainParams, max_terms: usize) -> Result<Self> {
        case.check_domain(params)?;
        let head: Vec<f64> = (0..3)
            .map(|n| direct_coefficient(case, params, n))
            .collect();
        let r = reference_radius(case, params, &head);
        let mut order = None;
        let mut rn = 1.0;
        for n in 0..=max_terms {
            let a = direct_coefficient(case, params, n);
            if n >= MIN_AUTO_ORDER && a.abs() * rn < TRUNCATION_TARGET {
                order = Some(n);
                break;
            }
            rn *= r;
        }
        match order {
            Some(n) => Self::truncated(case, params, n),
            None => Err(Error::NonConvergence {
                what: "coefficient stream truncation",
                iterations: max_terms,
            }),
        }
    }

    /// Stream from explicit coefficients (a polynomial; no tail).
    pub fn from_coefficients(coeffs: Vec<f64>) -> Result<Self> {
        if coeffs.first() != Some(&1.0) {
            return Err(Error::domain("stream must start with a0 = 1"));
        }
        Ok(CoefficientStream {
            case: None,
            params: None,
            coeffs,
            tail: Vec::new(),
            reference_radius: f64::INFINITY,
            tail_bound: 0.0,
        })
    }

    pub fn case(&self) -> Option<FunctionCase> {
        self.case
    }

    pub fn params(&self) -> Option<QDomainParams> {
        self.params
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    /// Truncation order `N`.
    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// `|u|` at which [`Self::tail_bound`] was estimated.
    pub fn reference_radius(&self) -> f64 {
        self.reference_radius
    }

    /// Estimated `Σ_{n>N} |a_n| R^n` at the reference radius.
    pub fn tail_bound(&self) -> f64 {
        self.tail_bound
    }

    /// Estimated neglected tail at `|u|`.
    pub fn tail_at(&self, u: f64) -> f64 {
        tail_sum(&self.tail, self.order(), u.abs())
    }

    /// Partial sum and the sum of absolute terms at `u`.
    fn horner(&self, u: f64) -> (f64, f64) {
        let mut value = 0.0;
        let mut scale = 0.0;
        for &a in self.coeffs.iter().rev() {
            value = value * u + a;
            scale = scale * u.abs() + a.abs();
        }
        (value, scale)
    }

    /// Value at `u`, failing if the estimated tail exceeds `tol` relative to
    /// the absolute term sum.
    pub fn eval_with_tol(&self, u: f64, tol: f64) -> Result<f64> {
        let (value, scale) = self.horner(u);
        let tail = self.tail_at(u);
        if tail > tol * scale {
            return Err(Error::TailTooLarge {
                u: u.abs(),
                tail,
                tol,
            });
        }
        Ok(value)
    }
}

fn tail_sum(tail: &[f64], order: usize, r: f64) -> f64 {
    if tail.is_empty() || r == 0.0 {
        return 0.0;
    }
    let mut rn = r.powi(order as i32 + 1);
    let mut acc = 0.0;
    for &a in tail {
        acc += a.abs() * rn;
        rn *= r;
    }
    acc
}

/// Twice the first-chain theorem upper bound on the first zero, in `u`.
/// Falls back to `s₁/s₂` from the leading coefficients if the bound is unusable.
fn reference_radius(case: FunctionCase, params: QDomainParams, head: &[f64]) -> f64 {
    let upper = bounds::first_zero_upper_u(case, params)
        .filter(|u| u.is_finite() && *u > 0.0)
        .unwrap_or_else(|| {
            let s1 = -head[1];
            let s2 = head[1] * head[1] - 2.0 * head[2];
            s1 / s2
        });
    2.0 * upper
}

/// Coefficient stream truncated at order `order`.
pub fn coefficient_stream(
    case: FunctionCase,
    params: QDomainParams,
    order: usize,
) -> Result<CoefficientStream> {
    CoefficientStream::truncated(case, params, order)
}

/// Nested-multiplication value of the truncated stream at `u`.
pub fn stream_eval(stream: &CoefficientStream, u: f64) -> Result<f64> {
    stream.eval_with_tol(u, DEFAULT_EVAL_TOL)
}

/// Bracketed series terms `t_n` of a q-Bessel function at `z` (without the
/// `z^ν` and `1/c_ν` prefactors), summed until the tail is below `tol`
/// relative to the absolute term sum.
pub(crate) fn q_bessel_terms(
    family: Family,
    params: QDomainParams,
    z: f64,
    tol: f64,
    max_terms: usize,
) -> Result<Vec<f64>> {
    let (nu, q) = (params.nu(), params.q());
    let x = match family {
        Family::Jackson => 0.25 * z * z,
        Family::HahnExton => z * z,
    };
    let mut terms = vec![1.0];
    let mut t = 1.0f64;
    let mut abs_sum = 1.0;
    for n in 0..max_terms {
        let np1 = (n + 1) as f64;
        let step = match family {
            Family::Jackson => 2.0 * n as f64 + 1.0 + nu,
            Family::HahnExton => np1,
        };
        let ratio = -x * q.powf(step) / ((1.0 - q.powf(np1)) * (1.0 - q.powf(nu + np1)));
        t *= ratio;
        terms.push(t);
        abs_sum += t.abs();
        if ratio.abs() < 0.5 && 2.0 * (np1 + nu.abs() + 2.0) * t.abs() <= tol * abs_sum {
            return Ok(terms);
        }
        if t == 0.0 {
            return Ok(terms);
        }
    }
    Err(Error::NonConvergence {
        what: "q-Bessel series",
        iterations: max_terms,
    })
}

/// `z^ν` for real z, defined for `z < 0` only at integer ν.
fn real_power(z: f64, nu: f64) -> Result<f64> {
    if z >= 0.0 {
        return Ok(z.powf(nu));
    }
    if nu.fract() == 0.0 {
        return Ok(z.powi(nu as i32));
    }
    Err(Error::domain(format!(
        "z^nu undefined for z = {z} < 0 and non-integer nu = {nu}"
    )))
}

fn q_bessel(family: Family, z: f64, params: QDomainParams, tol: f64) -> Result<f64> {
    if z == 0.0 {
        return match params.nu() {
            nu if nu > 0.0 => Ok(0.0),
            0.0 => Ok(1.0),
            _ => Err(Error::domain("J_nu(0) is unbounded for nu < 0")),
        };
    }
    let arg = match family {
        Family::Jackson => 0.5 * z,
        Family::HahnExton => z,
    };
    let pre = real_power(arg, params.nu())? / norm_constant(params, DEFAULT_PRODUCT_TOL)?;
    let terms = q_bessel_terms(family, params, z, tol, DEFAULT_MAX_TERMS)?;
    Ok(pre * terms.iter().sum::<f64>())
}

/// Jackson q-Bessel function `J⁽²⁾_ν(z; q)`.
pub fn jackson_j2(z: f64, params: QDomainParams, tol: f64) -> Result<f64> {
    q_bessel(Family::Jackson, z, params, tol)
}

/// Hahn-Exton q-Bessel function `J⁽³⁾_ν(z; q)`.
pub fn hahn_exton_j3(z: f64, params: QDomainParams, tol: f64) -> Result<f64> {
    q_bessel(Family::HahnExton, z, params, tol)
}

/// Value of the normalized form `f`, `g` or `h` at real `z`.
///
/// All six are `z · R(·)` for the reduced series `R(u) = Σ t_n`, with the f-forms
/// taking the real ν-th root of `R(z²)`; that root exists only while `R > 0`.
pub fn normalized_eval(case: FunctionCase, params: QDomainParams, z: f64, tol: f64) -> Result<f64> {
    case.check_domain(params)?;
    let family = case.family();
    let arg = match case.parity() {
        Parity::Even => z,
        // q_bessel_terms squares its argument; the h-forms sit at √z.
        Parity::Plain => {
            if z < 0.0 {
                // continue the entire function z·R(z) past the origin
                return Ok(z * reduced_series_neg(family, params, z, tol)?);
            }
            z.sqrt()
        }
    };
    let reduced: f64 = q_bessel_terms(family, params, arg, tol, DEFAULT_MAX_TERMS)?
        .iter()
        .sum();
    match case {
        FunctionCase::F2 | FunctionCase::F3 => {
            if reduced <= 0.0 {
                return Err(Error::Branch {
                    z,
                    radicand: reduced,
                });
            }
            Ok(z * reduced.powf(1.0 / params.nu()))
        }
        _ => Ok(z * reduced),
    }
}

/// `R(u)` for `u < 0`, summed directly from the coefficient formula.
fn reduced_series_neg(family: Family, params: QDomainParams, u: f64, tol: f64) -> Result<f64> {
    let (nu, q) = (params.nu(), params.q());
    let div = match family {
        Family::Jackson => 0.25,
        Family::HahnExton => 1.0,
    };
    let mut t = 1.0f64;
    let mut sum = 1.0;
    for n in 0..DEFAULT_MAX_TERMS {
        let np1 = (n + 1) as f64;
        let step = match family {
            Family::Jackson => 2.0 * n as f64 + 1.0 + nu,
            Family::HahnExton => np1,
        };
        t *= -u * div * q.powf(step) / ((1.0 - q.powf(np1)) * (1.0 - q.powf(nu + np1)));
        sum += t;
        if t.abs() <= tol * sum.abs() && n > 2 {
            return Ok(sum);
        }
    }
    Err(Error::NonConvergence {
        what: "reduced q-series",
        iterations: DEFAULT_MAX_TERMS,
    })
}
