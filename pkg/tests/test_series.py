"""Tests for the analytic expression and power series engine."""

import cmath
import math

import numpy as np
import pytest

from wcolab.errors import BranchError, InputError, PoleAtOriginError
from wcolab.mobius import MoebiusMap
from wcolab.series import (
    Exp,
    Poly,
    PowerSeries,
    PrecomposeMoebius,
    Power,
    Product,
    Rational,
    Scale,
    Sum,
    constant,
    eliminate_precompose,
    evaluate,
    expr_from_json,
    expr_to_json,
    moebius_powers,
    monomial,
    series_from_csv,
    series_norm,
    series_to_csv,
    tail_diagnostics,
    taylor,
)
from wcolab.space import bergman, hardy

HALF_SHIFT = MoebiusMap(1, 0, -1, 2)  # z/(2-z)


def dft_coeffs(fn, order, radius=0.8, samples=512):
    """Oracle: Taylor coefficients by discretizing the Cauchy integral."""
    ks = np.arange(samples)
    zs = radius * np.exp(2j * np.pi * ks / samples)
    vals = np.array([fn(z) for z in zs])
    out = np.fft.fft(vals) / samples
    return out[: order + 1] / radius ** np.arange(order + 1)


def assert_series_close(got, expected, tol=1e-10):
    got = np.asarray(got, dtype=complex)
    expected = np.asarray(expected, dtype=complex)
    assert got.shape == expected.shape
    scale = max(1.0, float(np.max(np.abs(expected))))
    assert float(np.max(np.abs(got - expected))) <= tol * scale


def test_taylor_poly_is_padded_copy():
    p = Poly((1, 2, 3))
    s = taylor(p, 6)
    assert_series_close(s.coeffs, [1, 2, 3, 0, 0, 0, 0], 0)


def test_taylor_rational_long_division():
    # 1/(2-z) has coefficients 2^-(n+1)
    r = Rational(Poly((1,)), Poly((2, -1)))
    s = taylor(r, 20)
    expected = [2.0 ** -(n + 1) for n in range(21)]
    assert_series_close(s.coeffs, expected, 1e-14)


def test_taylor_rational_matches_dft():
    r = Rational(Poly((1, 2j, 0.5)), Poly((1, -0.4, 0.3j)))
    s = taylor(r, 30)
    oracle = dft_coeffs(lambda z: evaluate(r, z), 30)
    assert_series_close(s.coeffs, oracle, 1e-10)


def test_exp_series_matches_dft():
    e = Exp(Poly((0, 1)))
    s = taylor(e, 24)
    oracle = [1.0 / math.factorial(n) for n in range(25)]
    assert_series_close(s.coeffs, oracle, 1e-12)
    nested = Exp(Rational(Poly((0, 1)), Poly((2, -1))))
    s2 = taylor(nested, 30)
    oracle2 = dft_coeffs(lambda z: cmath.exp(z / (2 - z)), 30)
    assert_series_close(s2.coeffs, oracle2, 1e-10)


def test_power_series_matches_dft():
    p = Power(Poly((1, -0.5)), -1.5)
    s = taylor(p, 30)
    oracle = dft_coeffs(lambda z: (1 - 0.5 * z) ** -1.5, 30)
    assert_series_close(s.coeffs, oracle, 1e-10)


def test_power_integer_exponent_matches_poly_product():
    p = Poly((1, 0.3, -0.2j))
    cube = taylor(Power(p, 3), 12).coeffs
    brute = np.array([1.0 + 0j])
    for _ in range(3):
        brute = np.convolve(brute, np.asarray(p.coeffs))
    brute = np.pad(brute, (0, 13 - len(brute)))
    assert_series_close(cube, brute, 1e-13)


def test_sum_product_scale_combination():
    e = Sum(
        (
            Product((Poly((1, 1)), Exp(Poly((0, 0.5))))),
            Scale(2j, Rational(Poly((1,)), Poly((1, -0.3)))),
        )
    )
    s = taylor(e, 25)
    oracle = dft_coeffs(
        lambda z: (1 + z) * cmath.exp(0.5 * z) + 2j / (1 - 0.3 * z), 25
    )
    assert_series_close(s.coeffs, oracle, 1e-10)


def test_evaluate_matches_direct_formulas():
    z = 0.3 - 0.2j
    e = Power(Poly((1, -0.5)), -1.5)
    assert abs(evaluate(e, z) - (1 - 0.5 * z) ** -1.5) < 1e-12
    m = Exp(Poly((1, 2)))
    assert abs(evaluate(m, z) - cmath.exp(1 + 2 * z)) < 1e-12


def test_precompose_evaluates_as_composition():
    e = PrecomposeMoebius(Exp(Poly((0, 1))), HALF_SHIFT)
    z = 0.4 + 0.1j
    assert abs(evaluate(e, z) - cmath.exp(z / (2 - z))) < 1e-12


def test_eliminate_precompose_poly():
    e = PrecomposeMoebius(Poly((1, 2, 3)), HALF_SHIFT)
    flat = eliminate_precompose(e)
    s = taylor(flat, 25)
    oracle = dft_coeffs(lambda z: 1 + 2 * (z / (2 - z)) + 3 * (z / (2 - z)) ** 2, 25)
    assert_series_close(s.coeffs, oracle, 1e-10)
    assert "Precompose" not in type(flat).__name__


def test_eliminate_precompose_nested():
    inner = Rational(Poly((1, 1)), Poly((2, 0, 0)))
    e = PrecomposeMoebius(Exp(inner), MoebiusMap(1, 1, 0, 3))
    flat = eliminate_precompose(e)

    def direct(z):
        w = (z + 1) / 3
        return cmath.exp((1 + w) / 2)

    s = taylor(flat, 25)
    assert_series_close(s.coeffs, dft_coeffs(direct, 25), 1e-10)


def test_taylor_handles_precompose_directly():
    e = PrecomposeMoebius(Power(Poly((1, -0.5)), -1.0), HALF_SHIFT)
    s = taylor(e, 25)
    oracle = dft_coeffs(lambda z: 1.0 / (1 - 0.5 * z / (2 - z)), 25)
    assert_series_close(s.coeffs, oracle, 1e-10)


def test_rational_pole_at_origin_rejected():
    with pytest.raises(InputError):
        Rational(Poly((1,)), Poly((0, 1)))


def test_precompose_pole_at_origin_rejected():
    with pytest.raises(PoleAtOriginError):
        PrecomposeMoebius(Poly((1,)), MoebiusMap(1, 1, 1, 0))


def test_power_branch_error_on_negative_axis():
    with pytest.raises(BranchError):
        Power(Poly((-1.0,)), 0.5)
    # integer exponents stay on the safe side of the branch cut
    p = Power(Poly((-1.0, 0.1)), 2.0)
    assert abs(evaluate(p, 0.0) - 1.0) < 1e-14


def test_power_zero_base_rejected():
    with pytest.raises(InputError):
        Power(Poly((0, 1)), -1.0)


def test_moebius_powers_match_pointwise():
    count, order = 6, 30
    powers = moebius_powers(HALF_SHIFT, count, order)
    assert len(powers) == count + 1
    for k in (0, 1, 3, 6):
        oracle = dft_coeffs(lambda z, k=k: (z / (2 - z)) ** k, order)
        assert_series_close(powers[k].coeffs, oracle, 1e-10)


def test_series_norm_hardy_and_bergman():
    s = PowerSeries(np.array([3.0, 4.0], dtype=complex))
    assert abs(series_norm(s, hardy()) - 5.0) < 1e-14
    # bergman alpha=0: ||1||=1, ||z||^2=1/2
    assert abs(series_norm(s, bergman(0.0)) - np.sqrt(9 + 16 / 2)) < 1e-14


def test_tail_diagnostics_geometric_decay():
    n = 64
    r = 0.5
    s = PowerSeries(r ** np.arange(n + 1, dtype=float) + 0j)
    d = tail_diagnostics(s)
    assert abs(d.ratio - r) < 0.05
    assert not d.slow_decay
    assert d.bound < 1e-8


def test_tail_diagnostics_flags_slow_decay():
    s = PowerSeries(0.99 ** np.arange(65, dtype=float) + 0j)
    d = tail_diagnostics(s)
    assert d.slow_decay


def test_tail_diagnostics_needs_enough_coefficients():
    with pytest.raises(InputError):
        tail_diagnostics(PowerSeries(np.ones(8, dtype=complex)))


def test_expr_json_roundtrip():
    exprs = [
        Poly((1, 2j, -0.5)),
        Rational(Poly((1,)), Poly((2, -1))),
        Power(Poly((1, -0.25)), -1.5),
        Exp(Scale(0.5, Poly((0, 1)))),
        Sum((Poly((1,)), Product((Poly((0, 1)), Poly((1, 1)))))),
        PrecomposeMoebius(Exp(Poly((0, 1))), HALF_SHIFT),
    ]
    for e in exprs:
        again = expr_from_json(expr_to_json(e))
        a = taylor(e, 12).coeffs
        b = taylor(again, 12).coeffs
        assert_series_close(a, b, 0)


def test_expr_from_json_rejects_unknown_type():
    with pytest.raises(InputError):
        expr_from_json({"type": "sine", "coeffs": []})


def test_series_csv_roundtrip():
    s = PowerSeries(np.array([1.0, -2.5j, 0.125 + 3j]))
    text = series_to_csv(s)
    assert text.splitlines()[0] == "index,re,im"
    again = series_from_csv(text)
    assert_series_close(again.coeffs, s.coeffs, 0)


def test_constant_and_monomial_helpers():
    assert_series_close(taylor(constant(2.5), 3).coeffs, [2.5, 0, 0, 0], 0)
    assert_series_close(taylor(monomial(2), 4).coeffs, [0, 0, 1, 0, 0], 0)
    with pytest.raises(InputError):
        monomial(-1)


def test_taylor_determinism():
    e = Exp(Rational(Poly((0, 1)), Poly((2, -1))))
    a = taylor(e, 40).coeffs
    b = taylor(e, 40).coeffs
    assert np.array_equal(a, b)
