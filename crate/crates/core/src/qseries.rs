//! q-Pochhammer symbols and the normalization constant `c_ν(q)`.

use serde::Serialize;

use crate::error::{Error, Result};

/// Default multiplicative-update tolerance for infinite products.
pub const DEFAULT_PRODUCT_TOL: f64 = 1e-16;

/// Hard cap on the number of factors in an infinite product.
pub const MAX_PRODUCT_FACTORS: usize = 1_000_000;

/// The pair (ν, q) shared by every q-Bessel quantity in the crate.
///
/// Construction checks `0 < q < 1` and `ν > -1`. The stronger `ν > 0` needed by
/// the f-normalizations is checked where it is used.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct QDomainParams {
    nu: f64,
    q: f64,
}

impl QDomainParams {
    pub fn new(nu: f64, q: f64) -> Result<Self> {
        if !(q.is_finite() && q > 0.0 && q < 1.0) {
            return Err(Error::domain(format!("q = {q} is outside (0, 1)")));
        }
        if !(nu.is_finite() && nu > -1.0) {
            return Err(Error::domain(format!("nu = {nu} must exceed -1")));
        }
        Ok(QDomainParams { nu, q })
    }

    #[inline]
    pub fn nu(&self) -> f64 {
        self.nu
    }

    #[inline]
    pub fn q(&self) -> f64 {
        self.q
    }

    /// `q^x` for real exponent x.
    #[inline]
    pub(crate) fn pow(&self, x: f64) -> f64 {
        self.q.powf(x)
    }
}

/// Finite q-Pochhammer symbol `(a; q)_n = ∏_{k=1..n} (1 - a q^{k-1})`.
pub fn q_pochhammer(a: f64, q: f64, n: usize) -> f64 {
    let mut prod = 1.0;
    let mut aq = a;
    for _ in 0..n {
        prod *= 1.0 - aq;
        aq *= q;
    }
    prod
}

/// Infinite q-Pochhammer symbol `(a; q)_∞`.
///
/// Factors are multiplied until `|a q^{k-1}| < tol`, i.e. until the next
/// update differs from 1 by less than `tol`.
pub fn q_pochhammer_inf(a: f64, q: f64, tol: f64) -> Result<f64> {
    if !(q > 0.0 && q < 1.0) {
        return Err(Error::domain(format!("q = {q} is outside (0, 1)")));
    }
    if !(tol > 0.0) {
        return Err(Error::domain(format!("tolerance {tol} must be positive")));
    }
    let mut prod = 1.0;
    let mut aq = a;
    for _ in 0..MAX_PRODUCT_FACTORS {
        if aq.abs() < tol {
            return Ok(prod);
        }
        prod *= 1.0 - aq;
        aq *= q;
    }
    Err(Error::NonConvergence {
        what: "infinite q-product",
        iterations: MAX_PRODUCT_FACTORS,
    })
}

/// `c_ν(q) = (q; q)_∞ / (q^{ν+1}; q)_∞`.
pub fn norm_constant(params: QDomainParams, tol: f64) -> Result<f64> {
    let q = params.q();
    let num = q_pochhammer_inf(q, q, tol)?;
    let den = q_pochhammer_inf(params.pow(params.nu() + 1.0), q, tol)?;
    Ok(num / den)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    #[test]
    fn params_reject_out_of_domain() {
        assert!(QDomainParams::new(0.0, 1.0).is_err());
        assert!(QDomainParams::new(0.0, 0.0).is_err());
        assert!(QDomainParams::new(-1.0, 0.5).is_err());
        assert!(QDomainParams::new(f64::NAN, 0.5).is_err());
        assert!(QDomainParams::new(-0.5, 0.5).is_ok());
    }

    #[test]
    fn finite_products() {
        assert_eq!(q_pochhammer(0.7, 0.3, 0), 1.0);
        assert_eq!(q_pochhammer(0.5, 0.5, 2), 0.375);
        assert_eq!(q_pochhammer(0.5, 0.5, 3), 0.328125);
    }

    #[test]
    fn infinite_products() {
        assert_eq!(q_pochhammer_inf(0.0, 0.37, 1e-16).unwrap(), 1.0);
        // (q;q)_∞ at q = 1/2 by plain partial products over 200 factors.
        let mut oracle = 1.0;
        for k in 1..=200 {
            oracle *= 1.0 - 0.5f64.powi(k);
        }
        let v = q_pochhammer_inf(0.5, 0.5, 1e-15).unwrap();
        assert_relative_eq!(v, oracle, max_relative = 1e-14);
        assert_relative_eq!(v, 0.2887880951, epsilon = 1e-10);
        let shifted = q_pochhammer_inf(0.25, 0.5, 1e-15).unwrap();
        assert_relative_eq!(shifted, oracle / 0.5, max_relative = 1e-14);
        assert_relative_eq!(shifted, 0.5775761902, epsilon = 1e-10);
    }

    #[test]
    fn infinite_product_hits_cap_near_one() {
        let err = q_pochhammer_inf(0.5, 1.0 - 1e-9, 1e-16).unwrap_err();
        assert!(matches!(err, Error::NonConvergence { .. }));
    }

    #[test]
    fn norm_constant_telescopes() {
        let c0 = norm_constant(QDomainParams::new(0.0, 0.5).unwrap(), 1e-16).unwrap();
        let c1 = norm_constant(QDomainParams::new(1.0, 0.5).unwrap(), 1e-16).unwrap();
        let c2 = norm_constant(QDomainParams::new(2.0, 0.5).unwrap(), 1e-16).unwrap();
        assert_eq!(c0, 1.0);
        assert_relative_eq!(c1, 0.5, max_relative = 1e-14);
        assert_relative_eq!(c2, 0.375, max_relative = 1e-14);
    }

    proptest! {
        #[test]
        fn finite_product_recurrence(a in -0.99f64..0.99, q in 0.01f64..0.99, n in 0usize..40) {
            let lhs = q_pochhammer(a, q, n + 1);
            let rhs = q_pochhammer(a, q, n) * (1.0 - a * q.powi(n as i32));
            prop_assert!((lhs - rhs).abs() <= 1e-15 * rhs.abs().max(1e-300));
        }

        #[test]
        fn infinite_product_splits(a in -0.99f64..0.99, q in 0.01f64..0.95,
                                   n in prop::sample::select(vec![1usize, 2, 5]),
                                   tol_exp in 8i32..13) {
            let tol = 10f64.powi(-tol_exp);
            let whole = q_pochhammer_inf(a, q, tol).unwrap();
            let split = q_pochhammer(a, q, n) * q_pochhammer_inf(a * q.powi(n as i32), q, tol).unwrap();
            prop_assert!((whole - split).abs() <= 10.0 * tol);
        }

        #[test]
        fn norm_constant_positive(nu in -0.99f64..10.0, q in 0.01f64..0.99) {
            let c = norm_constant(QDomainParams::new(nu, q).unwrap(), DEFAULT_PRODUCT_TOL).unwrap();
            prop_assert!(c > 0.0 && c.is_finite());
        }
    }
}
