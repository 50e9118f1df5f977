//! Euler-Rayleigh power sums `s_k = Σ u_n^{-k}` of the zeros of a coefficient
//! stream, computed two ways, and the brackets they give for the first zero.
//!
//! The Newton-identity route works from the Maclaurin coefficients alone and
//! is the ground truth. The closed forms are the published expressions in ν
//! and q; they are evaluated literally and then sign-normalized, and
//! [`reconcile`] reports where they disagree with the oracle.

use serde::Serialize;

use crate::bounds::{helper_poly, Helper};
use crate::error::{Error, Result};
use crate::flags::Flag;
use crate::qseries::QDomainParams;
use crate::series::{CoefficientStream, FunctionCase, DEFAULT_MAX_TERMS};

/// Relative difference above which a closed form is flagged.
pub const RECONCILE_TOL: f64 = 1e-9;

/// Orders the oracle computes when none is requested.
pub const DEFAULT_ORDER: usize = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Provenance {
    Newton,
    ClosedForm,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PowerSums {
    pub case: Option<FunctionCase>,
    /// `values[k-1] = s_k`.
    pub values: Vec<f64>,
    pub provenance: Provenance,
}

impl PowerSums {
    pub fn max_order(&self) -> usize {
        self.values.len()
    }

    /// `s_k` for 1-based `k`.
    pub fn get(&self, k: usize) -> Option<f64> {
        k.checked_sub(1).and_then(|i| self.values.get(i)).copied()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum BracketSource {
    EulerRayleighOracle,
    TheoremClosedForm,
}

/// An open interval `(lower, upper)` claimed to contain a first zero or radius.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BoundBracket {
    pub lower: f64,
    pub upper: f64,
    pub order: usize,
    pub source: BracketSource,
    pub theorem: Option<u8>,
}

impl BoundBracket {
    pub fn contains(&self, x: f64) -> bool {
        self.lower < x && x < self.upper
    }

    /// Smallest relative distance from `x` to either end, negative if outside.
    pub fn relative_margin(&self, x: f64) -> f64 {
        ((x - self.lower) / x).min((self.upper - x) / x)
    }

    pub fn width(&self) -> f64 {
        self.upper - self.lower
    }

    /// Map both ends through a monotone increasing function.
    pub fn map(&self, f: impl Fn(f64) -> f64) -> BoundBracket {
        BoundBracket {
            lower: f(self.lower),
            upper: f(self.upper),
            ..*self
        }
    }
}

/// Power sums `s_1..s_K` from the stream coefficients by Newton's identities:
/// `s_1 = -a_1`, `s_k = -k a_k - Σ_{j=1}^{k-1} a_j s_{k-j}`.
pub fn newton_power_sums(stream: &CoefficientStream, max_order: usize) -> Result<PowerSums> {
    let a = stream.coeffs();
    if stream.order() < max_order {
        return Err(Error::InsufficientCoefficients {
            needed: max_order,
            available: stream.order(),
        });
    }
    let mut s: Vec<f64> = Vec::with_capacity(max_order);
    for k in 1..=max_order {
        let conv: f64 = (1..k).map(|j| a[j] * s[k - j - 1]).sum();
        s.push(-(k as f64) * a[k] - conv);
    }
    Ok(PowerSums {
        case: stream.case(),
        values: s,
        provenance: Provenance::Newton,
    })
}

/// Euler-Rayleigh bracket `s_k^{-1/k} < u₁ < s_k / s_{k+1}` for the first zero.
pub fn er_bracket(sums: &PowerSums, k: usize) -> Result<BoundBracket> {
    let (sk, sk1) = match (sums.get(k), sums.get(k + 1)) {
        (Some(a), Some(b)) => (a, b),
        _ => {
            return Err(Error::InsufficientCoefficients {
                needed: k + 1,
                available: sums.max_order(),
            })
        }
    };
    for (order, value) in [(k, sk), (k + 1, sk1)] {
        if !(value > 0.0) {
            return Err(Error::NonPositiveSum { order, value });
        }
    }
    let lower = sk.powf(-1.0 / k as f64);
    let upper = sk / sk1;
    if !(lower < upper) {
        return Err(Error::DegenerateBracket { lower, upper });
    }
    Ok(BoundBracket {
        lower,
        upper,
        order: k,
        source: BracketSource::EulerRayleighOracle,
        theorem: sums.case.map(FunctionCase::theorem),
    })
}

/// Oracle sums for a case, from an automatically truncated stream.
pub fn oracle_sums(
    case: FunctionCase,
    params: QDomainParams,
    max_order: usize,
) -> Result<PowerSums> {
    let stream = CoefficientStream::auto(case, params, DEFAULT_MAX_TERMS)?;
    newton_power_sums(&stream, max_order)
}

/// One printed closed-form power sum.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ClosedFormSum {
    pub case: FunctionCase,
    pub order: usize,
    /// Literal transcription, sign included.
    pub printed: f64,
    /// Sign-normalized value `|printed|`.
    pub value: f64,
    /// Value consistent with the rest of the derivation at sites where the
    /// printed display is known to be defective.
    pub corrected: Option<f64>,
    pub flags: Vec<Flag>,
}

/// Highest order printed for each case.
pub fn printed_orders(case: FunctionCase) -> usize {
    match case {
        FunctionCase::F2 | FunctionCase::H2 | FunctionCase::F3 => 2,
        FunctionCase::G2 | FunctionCase::G3 | FunctionCase::H3 => 3,
    }
}

/// Flag code of a documented defective display, if `(case, order)` is one.
pub fn known_typo(case: FunctionCase, order: usize) -> Option<Flag> {
    match (case, order) {
        (FunctionCase::F2, 2) => Some(Flag::TypoD2),
        (FunctionCase::H2, 2) => Some(Flag::TypoT2),
        (FunctionCase::H3, 1) => Some(Flag::TypoS1),
        _ => None,
    }
}

/// Printed closed form of `s_k` for `case`, sign-normalized.
pub fn closed_form_sum(
    case: FunctionCase,
    params: QDomainParams,
    k: usize,
) -> Result<ClosedFormSum> {
    case.check_domain(params)?;
    let nu = params.nu();
    let q = params.q();
    let qp = |x: f64| params.pow(x);
    // literal factors as printed: (q^a - 1)
    let a = qp(nu + 1.0) - 1.0;
    let b = qp(nu + 2.0) - 1.0;
    let c = q - 1.0;
    let d = qp(nu + 3.0) - 1.0;
    let h = |name| helper_poly(name, params);

    let (printed, corrected) = match (case, k) {
        (FunctionCase::F2, 1) => (
            (nu + 2.0) * qp(nu + 1.0) / (4.0 * nu * (1.0 - q) * (-a)),
            None,
        ),
        (FunctionCase::F2, 2) => {
            let e = (nu + 2.0).powi(2) * q
                - 2.0 * nu * (nu + 4.0) * q * q
                - (nu + 2.0).powi(2) * qp(nu + 2.0)
                + (nu * nu + 4.0 * nu - 4.0) * qp(nu + 3.0)
                + (nu + 2.0).powi(2);
            let num = qp(2.0 * nu + 2.0) * e;
            let printed = num / (16.0 * nu * nu * (-a) * b * (1.0 - q).powi(2) * (1.0 + q));
            let fixed = num / (16.0 * nu * nu * (1.0 - q).powi(2) * (1.0 + q) * a * a * (-b));
            (printed, Some(fixed))
        }
        (FunctionCase::G2, 1) => (3.0 * qp(nu + 1.0) / (4.0 * a * c), None),
        (FunctionCase::G2, 2) => (
            -qp(2.0 * nu + 2.0) * h(Helper::CoreG2) / (16.0 * a * a * b * c * c * (q + 1.0)),
            None,
        ),
        (FunctionCase::G2, 3) => (
            3.0 * qp(3.0 * nu + 3.0) * h(Helper::CoreG2)
                / (64.0 * a.powi(3) * b * d * c.powi(3) * h(Helper::Q1Star)),
            None,
        ),
        (FunctionCase::H2, 1) => (qp(nu + 1.0) / (2.0 * (1.0 - q) * (-a)), None),
        (FunctionCase::H2, 2) => {
            let num = qp(2.0 * nu + 2.0) * h(Helper::CoreH2);
            let printed = num / (8.0 * a * (-b) * c * c * (q + 1.0));
            let fixed = num / (8.0 * a * a * (-b) * c * c * (1.0 + q));
            (printed, Some(fixed))
        }
        (FunctionCase::F3, 1) => (q * (nu + 2.0) / (nu * (1.0 - q) * (-a)), None),
        (FunctionCase::F3, 2) => {
            let num = (1.0 + q) * (-b) * (nu + 2.0).powi(2) - 2.0 * nu * (nu + 4.0) * q * (-a);
            (
                q * q * num / (nu * nu * (1.0 - q).powi(2) * (1.0 + q) * a * a * (-b)),
                None,
            )
        }
        (FunctionCase::G3, 1) => (3.0 * q / ((1.0 - q) * (-a)), None),
        (FunctionCase::G3, 2) => (
            q * q * h(Helper::CoreG3) / (a * a * b * c * c * (q + 1.0)),
            None,
        ),
        (FunctionCase::G3, 3) => (
            3.0 * q.powi(3) * h(Helper::CoreG3)
                / (a.powi(3) * b * d * c.powi(3) * h(Helper::Q3Star)),
            None,
        ),
        (FunctionCase::H3, 1) => {
            let printed = 6.0 * q.powi(3) / (c * (1.0 - q * q) * (-a) * (-b));
            // reciprocal of the stated first lower bound
            let fixed = 2.0 * q / ((1.0 - q) * (-a));
            (printed, Some(fixed))
        }
        (FunctionCase::H3, 2) => (
            2.0 * q * q * h(Helper::CoreH3) / (a * a * b * c * c * (q + 1.0)),
            None,
        ),
        (FunctionCase::H3, 3) => (
            2.0 * q.powi(3) * h(Helper::CoreH3)
                / (a.powi(3) * b * (-d) * c.powi(3) * h(Helper::Q4Star)),
            None,
        ),
        _ => return Err(Error::UnsupportedOrder { case, order: k }),
    };
    let mut flags = Vec::new();
    if printed < 0.0 {
        flags.push(Flag::SignNorm);
    }
    Ok(ClosedFormSum {
        case,
        order: k,
        printed,
        value: printed.abs(),
        corrected,
        flags,
    })
}

/// Printed closed forms of orders `1..=printed_orders(case)` as power sums,
/// with corrected values substituted at known defective sites.
pub fn closed_form_power_sums(case: FunctionCase, params: QDomainParams) -> Result<PowerSums> {
    let values = (1..=printed_orders(case))
        .map(|k| closed_form_sum(case, params, k).map(|s| s.corrected.unwrap_or(s.value)))
        .collect::<Result<Vec<_>>>()?;
    Ok(PowerSums {
        case: Some(case),
        values,
        provenance: Provenance::ClosedForm,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReconcileRow {
    pub order: usize,
    pub newton: f64,
    pub printed: f64,
    /// Sign-normalized printed value.
    pub closed_form: f64,
    pub corrected: Option<f64>,
    /// `|closed_form - newton| / newton`.
    pub rel_diff: f64,
    pub corrected_rel_diff: Option<f64>,
    pub flagged: bool,
    pub flags: Vec<Flag>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReconcileReport {
    pub case: FunctionCase,
    pub params: QDomainParams,
    pub rows: Vec<ReconcileRow>,
}

impl ReconcileReport {
    pub fn flagged_orders(&self) -> Vec<usize> {
        self.rows
            .iter()
            .filter(|r| r.flagged)
            .map(|r| r.order)
            .collect()
    }
}

/// Compare every printed order up to `max_order` against the Newton oracle.
pub fn reconcile(
    case: FunctionCase,
    params: QDomainParams,
    max_order: usize,
) -> Result<ReconcileReport> {
    let top = max_order.min(printed_orders(case));
    let oracle = oracle_sums(case, params, top.max(1))?;
    let mut rows = Vec::with_capacity(top);
    for k in 1..=top {
        let cf = closed_form_sum(case, params, k)?;
        let newton = oracle.values[k - 1];
        let rel_diff = (cf.value - newton).abs() / newton.abs();
        let corrected_rel_diff = cf.corrected.map(|v| (v - newton).abs() / newton.abs());
        let flagged = !(rel_diff <= RECONCILE_TOL);
        let mut flags = cf.flags.clone();
        if flagged {
            flags.push(known_typo(case, k).unwrap_or(Flag::Mismatch));
        }
        rows.push(ReconcileRow {
            order: k,
            newton,
            printed: cf.printed,
            closed_form: cf.value,
            corrected: cf.corrected,
            rel_diff,
            corrected_rel_diff,
            flagged,
            flags,
        });
    }
    Ok(ReconcileReport { case, params, rows })
}
