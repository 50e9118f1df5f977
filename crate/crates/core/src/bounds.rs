//! Explicit lower and upper bounds on the radii, one theorem per case.
//!
//! Every display is evaluated literally first. A display (or a radicand under
//! a root) that comes out negative is replaced by its magnitude and the
//! bracket carries [`Flag::SignNorm`].
//!
//! Quantity convention: the f-cases bound the squared radius `(r*)²`, every
//! other case bounds `r*` itself. For the h-cases `r*` already lives in the
//! reduced variable, so all brackets compare directly with one root-finder
//! output.

use std::fmt;
use std::str::FromStr;

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::euler_rayleigh::{BoundBracket, BracketSource};
use crate::flags::Flag;
use crate::qseries::QDomainParams;
use crate::series::{FunctionCase, Parity};

/// The named polynomials in `q` and `q^ν` used by the bound displays.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Helper {
    /// `9q - 9q^{ν+2} + q^{ν+3} - 10q² + 9`
    CoreG2,
    /// `2q - 2q^{ν+2} + q^{ν+3} - 3q² + 2`
    CoreH2,
    /// `9q^{ν+3} - q^{ν+2} + q - 9`
    CoreG3,
    /// `q - q^{ν+2} + 2q^{ν+3} - 2`
    CoreH3,
    /// `q³ + 2q² + 2q + 1`
    Cubic,
    A,
    B,
    /// First member of the helper pair used by the h⁽²⁾ bounds.
    PairC,
    /// Second member of the helper pair used by the h⁽²⁾ bounds.
    PairD,
    S,
    R,
    Q4Denominator,
    Q1Star,
    Q2Star,
    Q3Star,
    Q4Star,
}

/// `(coefficient, multiple of ν, power of q)`: the term `c · q^{mν + p}`.
type Term = (i32, u8, u8);

const CORE_G2: &[Term] = &[(9, 0, 1), (-9, 1, 2), (1, 1, 3), (-10, 0, 2), (9, 0, 0)];
const CORE_H2: &[Term] = &[(2, 0, 1), (-2, 1, 2), (1, 1, 3), (-3, 0, 2), (2, 0, 0)];
const CORE_G3: &[Term] = &[(9, 1, 3), (-1, 1, 2), (1, 0, 1), (-9, 0, 0)];
const CORE_H3: &[Term] = &[(1, 0, 1), (-1, 1, 2), (2, 1, 3), (-2, 0, 0)];
const CUBIC: &[Term] = &[(1, 0, 3), (2, 0, 2), (2, 0, 1), (1, 0, 0)];
const POLY_A: &[Term] = &[
    (-9, 1, 2),
    (-12, 1, 3),
    (-21, 1, 4),
    (3, 1, 5),
    (6, 1, 6),
    (1, 1, 7),
    (9, 2, 5),
    (3, 2, 6),
];
const POLY_B: &[Term] = &[
    (3, 2, 7),
    (1, 2, 8),
    (18, 0, 1),
    (3, 0, 2),
    (-6, 0, 3),
    (-15, 0, 4),
    (7, 0, 6),
    (9, 0, 0),
];
const POLY_PAIR_C: &[Term] = &[
    (4, 1, 2),
    (3, 1, 3),
    (7, 1, 4),
    (-6, 1, 5),
    (-5, 1, 6),
    (3, 1, 7),
    (-4, 2, 5),
    (1, 2, 6),
];
const POLY_PAIR_D: &[Term] = &[
    (1, 2, 7),
    (-1, 2, 8),
    (-8, 0, 1),
    (1, 0, 2),
    (5, 0, 3),
    (9, 0, 4),
    (-6, 0, 6),
    (-4, 0, 0),
];
const POLY_S: &[Term] = &[
    (6, 1, 2),
    (-12, 1, 3),
    (-20, 1, 4),
    (-12, 1, 5),
    (6, 1, 6),
    (1, 2, 5),
];
const POLY_R: &[Term] = &[
    (3, 2, 6),
    (3, 2, 7),
    (9, 2, 8),
    (1, 0, 3),
    (3, 0, 2),
    (3, 0, 1),
    (9, 0, 0),
];
const Q4_DENOMINATOR: &[Term] = &[
    (1, 0, 1),
    (1, 0, 2),
    (-1, 0, 3),
    (-4, 0, 0),
    (-5, 1, 2),
    (3, 1, 3),
    (10, 1, 4),
    (3, 1, 5),
    (-5, 1, 6),
    (-1, 2, 5),
    (1, 2, 6),
    (1, 2, 7),
    (-4, 2, 8),
];

impl Helper {
    pub const ALL: [Helper; 16] = [
        Helper::CoreG2,
        Helper::CoreH2,
        Helper::CoreG3,
        Helper::CoreH3,
        Helper::Cubic,
        Helper::A,
        Helper::B,
        Helper::PairC,
        Helper::PairD,
        Helper::S,
        Helper::R,
        Helper::Q4Denominator,
        Helper::Q1Star,
        Helper::Q2Star,
        Helper::Q3Star,
        Helper::Q4Star,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Helper::CoreG2 => "core_g2",
            Helper::CoreH2 => "core_h2",
            Helper::CoreG3 => "core_g3",
            Helper::CoreH3 => "core_h3",
            Helper::Cubic => "cubic",
            Helper::A => "a",
            Helper::B => "b",
            Helper::PairC => "pair_c",
            Helper::PairD => "pair_d",
            Helper::S => "s",
            Helper::R => "r",
            Helper::Q4Denominator => "q4den",
            Helper::Q1Star => "q1s",
            Helper::Q2Star => "q2s",
            Helper::Q3Star => "q3s",
            Helper::Q4Star => "q4s",
        }
    }

    /// Term table for the plain polynomials; `None` for the quotients.
    pub fn terms(self) -> Option<&'static [Term]> {
        Some(match self {
            Helper::CoreG2 => CORE_G2,
            Helper::CoreH2 => CORE_H2,
            Helper::CoreG3 => CORE_G3,
            Helper::CoreH3 => CORE_H3,
            Helper::Cubic => CUBIC,
            Helper::A => POLY_A,
            Helper::B => POLY_B,
            Helper::PairC => POLY_PAIR_C,
            Helper::PairD => POLY_PAIR_D,
            Helper::S => POLY_S,
            Helper::R => POLY_R,
            Helper::Q4Denominator => Q4_DENOMINATOR,
            _ => return None,
        })
    }
}

impl fmt::Display for Helper {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl Serialize for Helper {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(self.name())
    }
}

impl FromStr for Helper {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Helper::ALL
            .into_iter()
            .find(|h| h.name().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| Error::domain(format!("unknown helper '{s}'")))
    }
}

/// Sum of `c q^{mν+p}` with every power taken directly.
pub fn eval_terms_direct(terms: &[Term], params: QDomainParams) -> f64 {
    terms
        .iter()
        .map(|&(c, m, p)| c as f64 * params.pow(m as f64 * params.nu() + p as f64))
        .sum()
}

/// Same sum grouped by the power of `q^ν`, each group by Horner's rule in q.
pub fn eval_terms_horner(terms: &[Term], params: QDomainParams) -> f64 {
    let q = params.q();
    let mut total = 0.0;
    for m in 0..=2u8 {
        let mut coeffs = [0i32; 9];
        let mut any = false;
        for &(c, tm, p) in terms {
            if tm == m {
                coeffs[p as usize] += c;
                any = true;
            }
        }
        if !any {
            continue;
        }
        let poly = coeffs.iter().rev().fold(0.0, |acc, &c| acc * q + c as f64);
        total += poly * params.pow(m as f64 * params.nu());
    }
    total
}

/// Value of a named helper at `(ν, q)`.
pub fn helper_poly(name: Helper, params: QDomainParams) -> f64 {
    if let Some(terms) = name.terms() {
        return eval_terms_direct(terms, params);
    }
    let h = |n| helper_poly(n, params);
    match name {
        Helper::Q1Star => h(Helper::Cubic) * h(Helper::CoreG2) / (h(Helper::A) + h(Helper::B)),
        Helper::Q2Star => h(Helper::CoreH2) / (h(Helper::PairC) + h(Helper::PairD)),
        Helper::Q3Star => h(Helper::CoreG3) * h(Helper::Cubic) / (h(Helper::S) + h(Helper::R)),
        Helper::Q4Star => h(Helper::CoreH3) * h(Helper::Cubic) / h(Helper::Q4Denominator),
        _ => unreachable!("plain polynomial handled above"),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Quantity {
    /// The bracket bounds `(r*)²`.
    RadiusSquared,
    /// The bracket bounds `r*`.
    Radius,
}

impl Quantity {
    pub fn for_case(case: FunctionCase) -> Quantity {
        match case {
            FunctionCase::F2 | FunctionCase::F3 => Quantity::RadiusSquared,
            _ => Quantity::Radius,
        }
    }

    pub fn of_radius(self, r: f64) -> f64 {
        match self {
            Quantity::RadiusSquared => r * r,
            Quantity::Radius => r,
        }
    }

    pub fn tag(self) -> &'static str {
        match self {
            Quantity::RadiusSquared => "r^2",
            Quantity::Radius => "r",
        }
    }
}

/// One evaluated display: `prefactor · root_k(radicand)`.
#[derive(Debug, Clone, Copy)]
struct Display {
    prefactor: f64,
    radicand: f64,
    root: u8,
}

impl Display {
    fn plain(v: f64) -> Self {
        Display {
            prefactor: 1.0,
            radicand: v,
            root: 1,
        }
    }

    fn sqrt(prefactor: f64, radicand: f64) -> Self {
        Display {
            prefactor,
            radicand,
            root: 2,
        }
    }

    fn root4(prefactor: f64, radicand: f64) -> Self {
        Display {
            prefactor,
            radicand,
            root: 4,
        }
    }

    fn negative(&self) -> bool {
        self.prefactor * self.radicand.signum() < 0.0
    }

    fn normalized(&self) -> f64 {
        let r = self.radicand.abs();
        let root = match self.root {
            1 => r,
            2 => r.sqrt(),
            _ => r.sqrt().sqrt(),
        };
        self.prefactor.abs() * root
    }

    /// Literal value with a negative radicand mapped to `-root(|radicand|)`.
    fn printed(&self) -> f64 {
        if self.negative() {
            -self.normalized()
        } else {
            self.normalized()
        }
    }
}

/// One theorem bracket after sign normalization.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TheoremBracket {
    /// 1 for the first Euler-Rayleigh chain, 2 for the second.
    pub chain: usize,
    pub bracket: BoundBracket,
    pub printed_lower: f64,
    pub printed_upper: f64,
    pub flags: Vec<Flag>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TheoremBoundSet {
    pub theorem: u8,
    pub case: FunctionCase,
    pub quantity: Quantity,
    pub brackets: Vec<TheoremBracket>,
    pub helpers: Vec<(Helper, f64)>,
}

impl TheoremBoundSet {
    pub fn chain(&self, chain: usize) -> Option<&TheoremBracket> {
        self.brackets.iter().find(|b| b.chain == chain)
    }
}

fn displays(case: FunctionCase, params: QDomainParams) -> Vec<(Display, Display)> {
    let nu = params.nu();
    let q = params.q();
    let qp = |x: f64| params.pow(x);
    let a = qp(nu + 1.0) - 1.0;
    let b = qp(nu + 2.0) - 1.0;
    let c = q - 1.0;
    let d = qp(nu + 3.0) - 1.0;
    let h = |name| helper_poly(name, params);
    let q1 = qp(nu + 1.0);

    match case {
        FunctionCase::F2 => {
            let lower = 4.0 * nu * a * c / (q1 * (nu + 2.0));
            let den = (nu + 2.0).powi(2) * (1.0 + q - qp(nu + 2.0)) - 2.0 * nu * (nu + 4.0) * q * q
                + (nu * nu + 4.0 * nu - 4.0) * qp(nu + 3.0);
            let upper = 4.0 * nu * (nu + 2.0) * a * b * (q * q - 1.0) / (q1 * den);
            vec![(Display::plain(lower), Display::plain(upper))]
        }
        FunctionCase::G2 => {
            let core = h(Helper::CoreG2);
            vec![
                (
                    Display::sqrt(2.0, a * c / (3.0 * q1)),
                    Display::sqrt(2.0, 3.0 * a * b * (1.0 - q * q) / (q1 * core)),
                ),
                (
                    Display::root4(
                        2.0,
                        a * a * (-b) * c * c * (q + 1.0) / (qp(2.0 * nu + 2.0) * core),
                    ),
                    Display::sqrt(
                        2.0 / 3.0,
                        3.0 * (-a) * d * c / ((q + 1.0) * q1) * h(Helper::Q1Star),
                    ),
                ),
            ]
        }
        FunctionCase::H2 => {
            let core = h(Helper::CoreH2);
            vec![
                (
                    Display::plain(2.0 * (1.0 - q) * (-a) / q1),
                    Display::plain(4.0 * a * b * (1.0 - q * q) / (q1 * core)),
                ),
                (
                    Display::sqrt(
                        1.0,
                        8.0 * a * a * (-b) * c * c * (q + 1.0) / (qp(2.0 * nu + 2.0) * core),
                    ),
                    Display::plain(4.0 * a * d * (q.powi(3) - 1.0) / q1 * h(Helper::Q2Star)),
                ),
            ]
        }
        FunctionCase::F3 => {
            let lower = nu * (1.0 - q) * (-a) / (q * (nu + 2.0));
            let den = (1.0 + q) * (-b) * (nu + 2.0).powi(2) - 2.0 * nu * (nu + 4.0) * q * (-a);
            let upper = nu * (nu + 2.0) * (1.0 - q * q) * (-a) * (-b) / (q * den);
            vec![(Display::plain(lower), Display::plain(upper))]
        }
        FunctionCase::G3 => {
            let core = h(Helper::CoreG3);
            vec![
                (
                    Display::sqrt(1.0, (1.0 - q) * (-a) / (3.0 * q)),
                    Display::sqrt(1.0, 3.0 * a * b * (q * q - 1.0) / (q * core)),
                ),
                (
                    Display::root4(1.0, a * a * c * c * b * (q + 1.0) / (q * q * core)),
                    Display::sqrt(1.0, c * a * d / (3.0 * q * (q + 1.0)) * h(Helper::Q3Star)),
                ),
            ]
        }
        FunctionCase::H3 => {
            let core = h(Helper::CoreH3);
            vec![
                (
                    Display::plain((1.0 - q) * (-a) / (2.0 * q)),
                    Display::plain((q * q - 1.0) * a * b / (q * core)),
                ),
                (
                    Display::sqrt(c * a / (2.0 * q), 2.0 * b * (q + 1.0) / core),
                    Display::plain(a * d * (1.0 - q) / (q * (q + 1.0)) * h(Helper::Q4Star)),
                ),
            ]
        }
    }
}

fn helpers_for(case: FunctionCase) -> &'static [Helper] {
    match case {
        FunctionCase::F2 | FunctionCase::F3 => &[],
        FunctionCase::G2 => &[Helper::CoreG2, Helper::A, Helper::B, Helper::Q1Star],
        FunctionCase::H2 => &[Helper::CoreH2, Helper::PairC, Helper::PairD, Helper::Q2Star],
        FunctionCase::G3 => &[Helper::CoreG3, Helper::S, Helper::R, Helper::Q3Star],
        FunctionCase::H3 => &[Helper::CoreH3, Helper::Q4Denominator, Helper::Q4Star],
    }
}

/// All bound displays of the theorem matching `case`.
pub fn theorem_bounds(case: FunctionCase, params: QDomainParams) -> Result<TheoremBoundSet> {
    case.check_domain(params)?;
    let theorem = case.theorem();
    let brackets = displays(case, params)
        .into_iter()
        .enumerate()
        .map(|(i, (lo, hi))| {
            let mut flags = Vec::new();
            if lo.negative() || hi.negative() {
                flags.push(Flag::SignNorm);
            }
            TheoremBracket {
                chain: i + 1,
                bracket: BoundBracket {
                    lower: lo.normalized(),
                    upper: hi.normalized(),
                    order: i + 1,
                    source: BracketSource::TheoremClosedForm,
                    theorem: Some(theorem),
                },
                printed_lower: lo.printed(),
                printed_upper: hi.printed(),
                flags,
            }
        })
        .collect();
    let helpers = helpers_for(case)
        .iter()
        .map(|&h| (h, helper_poly(h, params)))
        .collect();
    Ok(TheoremBoundSet {
        theorem,
        case,
        quantity: Quantity::for_case(case),
        brackets,
        helpers,
    })
}

/// First-chain theorem upper bound mapped to the reduced variable `u`.
pub(crate) fn first_zero_upper_u(case: FunctionCase, params: QDomainParams) -> Option<f64> {
    let d = displays(case, params);
    let upper = d.first()?.1.normalized();
    Some(match (Quantity::for_case(case), case.parity()) {
        (Quantity::RadiusSquared, _) | (Quantity::Radius, Parity::Plain) => upper,
        (Quantity::Radius, Parity::Even) => upper * upper,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    fn p(nu: f64, q: f64) -> QDomainParams {
        QDomainParams::new(nu, q).unwrap()
    }

    #[test]
    fn th1_spot_values() {
        let t = theorem_bounds(FunctionCase::F2, p(1.0, 0.5)).unwrap();
        assert_eq!(t.quantity, Quantity::RadiusSquared);
        let b = &t.brackets[0];
        assert_relative_eq!(b.bracket.lower, 2.0, max_relative = 1e-15);
        assert_relative_eq!(b.bracket.upper, 126.0 / 53.0, max_relative = 1e-14);
        assert!(b.printed_upper < 0.0);
        assert_eq!(b.flags, vec![Flag::SignNorm]);
    }

    #[test]
    fn h2_first_lower_is_reciprocal_first_sum() {
        let t = theorem_bounds(FunctionCase::H2, p(0.0, 0.5)).unwrap();
        assert_relative_eq!(t.brackets[0].bracket.lower, 1.0, max_relative = 1e-15);
        assert_eq!(t.brackets.len(), 2);
        assert!(t.brackets.iter().all(|b| b.flags.is_empty()));
    }

    #[test]
    fn domain_errors() {
        assert!(theorem_bounds(FunctionCase::F3, p(-0.5, 0.5)).is_err());
        assert!(theorem_bounds(FunctionCase::F2, p(0.0, 0.5)).is_err());
    }

    #[test]
    fn b_at_nu_zero_half_is_dyadic() {
        // 3q⁷ + q⁸ + 18q + 3q² - 6q³ - 15q⁴ + 7q⁶ + 9 at q = 1/2
        let expected = 3.0 / 128.0 + 1.0 / 256.0 + 9.0 + 0.75 - 0.75 - 0.9375 + 7.0 / 64.0 + 9.0;
        assert_eq!(expected, 17.19921875);
        assert_eq!(helper_poly(Helper::B, p(0.0, 0.5)), expected);
    }

    #[test]
    fn a_at_nu_zero_half() {
        let q: f64 = 0.5;
        let expected = -9.0 * q.powi(2) - 12.0 * q.powi(3) - 21.0 * q.powi(4)
            + 3.0 * q.powi(5)
            + 6.0 * q.powi(6)
            + q.powi(7)
            + 9.0 * q.powi(5)
            + 3.0 * q.powi(6);
        let v = helper_poly(Helper::A, p(0.0, q));
        assert!((v - expected).abs() < 1e-15);
        let horner = eval_terms_horner(POLY_A, p(0.0, q));
        assert!((horner - expected).abs() < 1e-15);
    }

    #[test]
    fn q4_denominator_two_ways() {
        let params = p(0.0, 0.5);
        let direct = eval_terms_direct(Q4_DENOMINATOR, params);
        let horner = eval_terms_horner(Q4_DENOMINATOR, params);
        assert!((direct - horner).abs() < 1e-15);
    }

    #[test]
    fn helper_names_round_trip() {
        for h in Helper::ALL {
            assert_eq!(h.name().parse::<Helper>().unwrap(), h);
        }
    }

    proptest! {
        #[test]
        fn helper_paths_agree(nu in -0.99f64..6.0, q in 0.01f64..0.99) {
            let params = p(nu, q);
            for h in Helper::ALL {
                if let Some(terms) = h.terms() {
                    let scale: f64 = terms.iter()
                        .map(|&(c, m, pw)| (c as f64 * params.pow(m as f64 * nu + pw as f64)).abs())
                        .sum();
                    let d = eval_terms_direct(terms, params);
                    let r = eval_terms_horner(terms, params);
                    prop_assert!((d - r).abs() <= 1e-14 * scale, "{h}: {d} vs {r}");
                }
            }
        }
    }
}
