"""Smoke test for the qstarlike extension module.

Build with `cargo build -p qstarlike-py --release` and put the resulting
shared library on the path as `qstarlike.so` (or install with maturin).
"""

import math
import sys

import qstarlike as qs


def close(a, b, tol=1e-12):
    return abs(a - b) <= tol * max(1.0, abs(b))


def main():
    assert set(qs.CASES) == {"F2", "G2", "H2", "F3", "G3", "H3"}

    assert close(qs.q_pochhammer(0.5, 0.5, 2), 0.375)
    assert close(qs.norm_constant(1.0, 0.5), 0.5)

    stream = qs.coefficient_stream("F2", 1.0, 0.5, 3)
    assert stream[0] == 1.0 and close(stream[1], -0.5)

    sums = qs.power_sums("F2", 1.0, 0.5, 2)
    assert close(sums[1], 53 / 252)
    assert close(qs.closed_form_sum("H2", 0.0, 0.5, 1), 1.0)

    r = qs.starlike_radius("F2", 1.0, 0.5, tol=1e-15)
    lo, hi = qs.er_bracket("F2", 1.0, 0.5, 1)
    assert lo < r.u_first_zero < hi
    assert close(r.radius, math.sqrt(r.u_first_zero))
    assert r.relative_residual < 1e-12

    bounds = qs.theorem_bounds("F2", 1.0, 0.5)
    assert bounds.quantity == "r^2"
    b = bounds.brackets[0]
    assert b.contains(r.radius ** 2)
    assert "SIGN_NORM" in b.flags

    for case in qs.CASES:
        res = qs.starlike_radius(case, 2.0, 0.75)
        tb = qs.theorem_bounds(case, 2.0, 0.75)
        x = res.radius ** 2 if tb.quantity == "r^2" else res.radius
        assert all(br.contains(x) for br in tb.brackets), case

    rows = qs.reconcile("H3", 0.0, 0.5, 1)
    assert rows[0].flagged and "TYPO_S1" in rows[0].flags

    z = qs.classical_first_zeros(1.0)
    assert abs(z.deriv_zero ** 2 - 3.38996) < 1e-4
    assert qs.classical_bracket("H2", 1, 0.0) == (2.0, 16 / 5)

    try:
        qs.starlike_radius("F2", -0.5, 0.5)
    except ValueError:
        pass
    else:
        raise AssertionError("F2 with nu < 0 should raise ValueError")

    print("smoke test passed")
    return 0


if __name__ == "__main__":
    sys.exit(main())
