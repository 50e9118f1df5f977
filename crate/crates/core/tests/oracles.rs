//! Independent-path checks: Newton sums against closed forms and theorem
//! displays, stream zeros against the raw equation, constructed-zero streams.

use proptest::prelude::*;
use qstarlike::bounds::Quantity;
use qstarlike::euler_rayleigh::{oracle_sums, printed_orders};
use qstarlike::radius::residual_with_scale;
use qstarlike::series::Parity;
use qstarlike::{
    closed_form_sum, equation_residual, er_bracket, newton_power_sums, starlike_radius,
    theorem_bounds, CoefficientStream, FunctionCase, QDomainParams,
};

fn grid() -> Vec<(FunctionCase, QDomainParams)> {
    let mut out = Vec::new();
    for case in FunctionCase::ALL {
        for nu in [-0.5, 0.5, 1.0, 2.0, 5.0] {
            if case.requires_positive_nu() && nu <= 0.0 {
                continue;
            }
            for q in [0.1, 0.25, 0.5, 0.75, 0.9] {
                out.push((case, QDomainParams::new(nu, q).unwrap()));
            }
        }
    }
    out
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

#[test]
fn corrected_closed_forms_match_newton() {
    for (case, params) in grid() {
        let oracle = oracle_sums(case, params, printed_orders(case)).unwrap();
        for k in 1..=printed_orders(case) {
            let cf = closed_form_sum(case, params, k).unwrap();
            let v = cf.corrected.unwrap_or(cf.value);
            let d = rel(v, oracle.values[k - 1]);
            assert!(d < 1e-10, "{case} k={k} {params:?}: {d:e}");
        }
    }
}

#[test]
fn defective_sites_disagree_before_correction() {
    let p = QDomainParams::new(1.0, 0.5).unwrap();
    for (case, k) in [
        (FunctionCase::F2, 2),
        (FunctionCase::H2, 2),
        (FunctionCase::H3, 1),
    ] {
        let cf = closed_form_sum(case, p, k).unwrap();
        let oracle = oracle_sums(case, p, k).unwrap().values[k - 1];
        assert!(rel(cf.value, oracle) > 1e-3, "{case} k={k}");
        assert!(rel(cf.corrected.unwrap(), oracle) < 1e-12, "{case} k={k}");
    }
}

/// Theorem displays are Euler-Rayleigh brackets of orders 1 (and 2) in disguise.
#[test]
fn theorem_displays_are_er_brackets() {
    for (case, params) in grid() {
        let sums = oracle_sums(case, params, 3).unwrap();
        let set = theorem_bounds(case, params).unwrap();
        for tb in &set.brackets {
            let er = er_bracket(&sums, tb.chain).unwrap();
            let mapped = match (set.quantity, case.parity()) {
                (Quantity::Radius, Parity::Even) => er.map(f64::sqrt),
                _ => er,
            };
            let dl = rel(tb.bracket.lower, mapped.lower);
            let du = rel(tb.bracket.upper, mapped.upper);
            assert!(
                dl < 1e-9 && du < 1e-9,
                "{case} chain {} {params:?}: {dl:e} {du:e}",
                tb.chain
            );
        }
    }
}

/// Bisection on the raw equation reproduces the stream zero.
#[test]
fn two_path_radius_agreement() {
    for (case, params) in grid() {
        let res = starlike_radius(case, params, 1e-15).unwrap();
        let (r0, _) = residual_with_scale(case, params, res.radius, 1e-17).unwrap();
        assert!(res.relative_residual() < 1e-12, "{case} {params:?}");
        let f = |r: f64| equation_residual(case, params, r, 1e-17).unwrap();
        let (mut lo, mut hi) = (res.radius * 0.99, res.radius * 1.01);
        assert!(f(lo) > 0.0 && f(hi) < 0.0, "{case} {params:?} r0={r0:e}");
        for _ in 0..80 {
            let mid = 0.5 * (lo + hi);
            if f(mid) > 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        assert!(
            rel(0.5 * (lo + hi), res.radius) < 1e-10,
            "{case} {params:?}"
        );
    }
}

#[test]
fn oracle_brackets_contain_first_zero_and_shrink() {
    for (case, params) in grid() {
        let res = starlike_radius(case, params, 1e-15).unwrap();
        let sums = oracle_sums(case, params, 4).unwrap();
        let mut width = f64::INFINITY;
        for k in 1..=3 {
            let b = er_bracket(&sums, k).unwrap();
            assert!(b.contains(res.u_first_zero), "{case} k={k} {params:?}");
            assert!(b.width() < width);
            width = b.width();
        }
        assert!(res.iterations <= 60);
        assert_eq!(case.radius_from_u(res.u_first_zero), res.radius);
    }
}

fn poly_from_roots(roots: &[f64]) -> Vec<f64> {
    let mut c = vec![1.0];
    for &r in roots {
        let mut next = c.clone();
        next.push(0.0);
        for i in 1..next.len() {
            next[i] -= c[i - 1] / r;
        }
        c = next;
    }
    c
}

proptest! {
    #[test]
    fn newton_recovers_power_sums(mut roots in prop::collection::vec(0.5f64..20.0, 3..7)) {
        roots.sort_by(f64::total_cmp);
        let stream = CoefficientStream::from_coefficients(poly_from_roots(&roots)).unwrap();
        let k = 3;
        let sums = newton_power_sums(&stream, k).unwrap();
        for j in 1..=k {
            let want: f64 = roots.iter().map(|r| r.powi(-(j as i32))).sum();
            prop_assert!(rel(sums.values[j - 1], want) < 1e-10);
        }
        if roots[0] < roots[1] {
            let b = er_bracket(&sums, 1).unwrap();
            prop_assert!(b.lower < roots[0] && roots[0] < b.upper);
        }
    }

    #[test]
    fn er_brackets_contain_radius(nu in -0.9f64..6.0, q in 0.05f64..0.95,
                                  idx in 0usize..6) {
        let case = FunctionCase::ALL[idx];
        prop_assume!(!case.requires_positive_nu() || nu > 0.05);
        let params = QDomainParams::new(nu, q).unwrap();
        let res = starlike_radius(case, params, 1e-14).unwrap();
        let sums = oracle_sums(case, params, 3).unwrap();
        for k in 1..=2 {
            prop_assert!(er_bracket(&sums, k).unwrap().contains(res.u_first_zero));
        }
    }
}
