import math

import numpy as np
import pytest

from soliton_lab.expsum import (ExpSum, ExpTerm, NearZeroTau, ZeroFrequencyTerm, add, conj, diff,
                                evaluate, integrate_x, log_partials, mul, scale)


def random_sum(rng, n=4):
    c = rng.normal(size=n) + 1j * rng.normal(size=n)
    fx = rng.normal(size=n) + 1j * rng.normal(size=n)
    ft = rng.normal(size=n) + 1j * rng.normal(size=n)
    return ExpSum(c, fx, ft)


def test_like_terms_merge():
    e = ExpSum.exp(1.0)
    s = e + e
    assert len(s) == 1
    assert s.terms[0] == ExpTerm(2 + 0j, 1 + 0j, 0j)


def test_add_zero_is_identity():
    e = ExpSum.exp(1.0)
    assert (e + ExpSum.zero()).allclose(e)
    assert ExpSum.zero().is_zero()


def test_conjugate_exponents_sum_to_two_at_origin():
    s = ExpSum.exp(1 + 1j) + ExpSum.exp(1 - 1j)
    assert evaluate(s, 0.0, 0.0) == pytest.approx(2.0)


def test_mul_adds_exponents():
    s = mul(ExpSum.exp(1.0), ExpSum.exp(2.0))
    assert s.allclose(ExpSum.exp(3.0))


def test_binomial_square():
    c = ExpSum.exp(1.0) + ExpSum.exp(-1.0)
    expected = ExpSum.exp(2.0) + ExpSum.const(2.0) + ExpSum.exp(-2.0)
    assert (c * c).allclose(expected)


def test_diff_single_term_and_constant():
    a = 1 + 1j
    assert diff(ExpSum.exp(a)).allclose(ExpSum.exp(a, coeff=a))
    assert diff(ExpSum.const(3.0)).is_zero()


def test_integrate_exponential_and_constant():
    assert integrate_x(ExpSum.exp(2.0)).allclose(ExpSum.exp(2.0, coeff=0.5))
    with pytest.raises(ZeroFrequencyTerm):
        integrate_x(ExpSum.const(1.0))


def test_evaluate_examples():
    assert evaluate(ExpSum.exp(1.0), 1.0, 0.0) == pytest.approx(math.e, rel=1e-15)
    assert evaluate(ExpSum.zero(), 3.7, -1.2) == 0
    cosh = ExpSum.exp(1.0) + ExpSum.exp(-1.0)
    assert evaluate(cosh, 0.5, 0.0).real == pytest.approx(2 * math.cosh(0.5), rel=1e-15)


def test_normalize_is_idempotent():
    rng = np.random.default_rng(0)
    s = random_sum(rng, 6) + random_sum(rng, 6)
    again = ExpSum(s.coeff, s.fx, s.ft)
    assert np.array_equal(again.coeff, s.coeff) and np.array_equal(again.fx, s.fx)


def test_ring_laws_at_random_points():
    rng = np.random.default_rng(1)
    for _ in range(20):
        a, b = random_sum(rng), random_sum(rng)
        x, t = rng.uniform(-1, 1, size=2)
        va, vb = evaluate(a, x, t), evaluate(b, x, t)
        assert evaluate(add(a, b), x, t) == pytest.approx(va + vb, rel=1e-12)
        assert evaluate(mul(a, b), x, t) == pytest.approx(va * vb, rel=1e-12)


def test_diff_inverts_integrate_exactly():
    rng = np.random.default_rng(2)
    a = random_sum(rng, 5)
    back = diff(integrate_x(a))
    assert np.allclose(back.coeff, a.coeff, rtol=1e-15, atol=0)


def test_conjugation():
    rng = np.random.default_rng(3)
    a = random_sum(rng)
    assert evaluate(conj(a), 0.3, -0.7) == pytest.approx(np.conj(evaluate(a, 0.3, -0.7)), rel=1e-14)


def test_log_partials_single_exponential():
    w = log_partials(ExpSum.exp(0.7, -1.3, coeff=2.0), 0.4, 0.2, 2, 1)
    assert w[1, 0] == pytest.approx(0.7)
    assert abs(w[2, 0]) < 1e-15
    assert w[0, 1] == pytest.approx(-1.3)


def test_log_partials_cosh():
    tau = ExpSum.exp(2.0, coeff=0.5) + ExpSum.exp(-2.0, coeff=0.5)
    w = log_partials(tau, 0.0, 0.0, 2)
    assert w[2, 0] == pytest.approx(4.0, rel=1e-14)
    xs = np.linspace(-3, 3, 13)
    w = log_partials(tau, xs, 0.0, 2)
    np.testing.assert_allclose(w[2, 0].real, 4 / np.cosh(2 * xs) ** 2, rtol=1e-12, atol=1e-14)


def quotient_rule_partials(tau, x, t):
    """Third-order log-derivatives written out explicitly from tau's derivatives."""
    d = {(a, b): evaluate(diff(tau, a, b), x, t) for a in range(4) for b in range(2)}
    f = d[0, 0]
    fx, fxx, fxxx, ft, fxt = d[1, 0], d[2, 0], d[3, 0], d[0, 1], d[1, 1]
    return {
        (1, 0): fx / f,
        (2, 0): fxx / f - (fx / f) ** 2,
        (3, 0): fxxx / f - 3 * fx * fxx / f**2 + 2 * (fx / f) ** 3,
        (0, 1): ft / f,
        (1, 1): fxt / f - fx * ft / f**2,
    }


def test_log_partials_match_quotient_rule():
    rng = np.random.default_rng(4)
    for _ in range(10):
        tau = random_sum(rng, 5)
        x, t = rng.uniform(-0.5, 0.5, size=2)
        w = log_partials(tau, x, t, 3, 1)
        for (a, b), ref in quotient_rule_partials(tau, x, t).items():
            assert w[a, b] == pytest.approx(ref, rel=1e-10, abs=1e-12)


def test_prefactor_invariance():
    rng = np.random.default_rng(5)
    tau = random_sum(rng, 5)
    xs = rng.uniform(-0.5, 0.5, size=7)
    w1 = log_partials(tau, xs, 0.1, 4, 2)
    w2 = log_partials(scale(tau, 3.5 - 2j), xs, 0.1, 4, 2)
    w1[0, 0] = w2[0, 0] = 1
    np.testing.assert_allclose(w2, w1, rtol=1e-12)


def test_near_zero_tau():
    tau = ExpSum.exp(1.0) - ExpSum.exp(-1.0)       # 2 sinh x vanishes at 0
    with pytest.raises(NearZeroTau):
        log_partials(tau, 0.0, 0.0, 2)
    w = log_partials(tau, np.array([0.0, 1.0]), 0.0, 2, strict=False)
    assert np.isnan(w[2, 0][0]) and np.isfinite(w[2, 0][1])
    with pytest.raises(NearZeroTau):
        log_partials(ExpSum.zero(), 0.0, 0.0, 1)


def test_large_exponents_do_not_overflow_log_partials():
    tau = ExpSum.exp(1.0) + ExpSum.exp(-1.0)
    w = log_partials(tau, 650.0, 0.0, 2)
    assert w[1, 0] == pytest.approx(1.0)
