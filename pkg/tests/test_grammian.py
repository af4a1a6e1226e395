import cmath
import math
from fractions import Fraction

import numpy as np
import pytest

from soliton_lab.analysis import Grid, fields, residual
from soliton_lab.expsum import ExpSum, NearZeroTau, diff, integrate_x, log_partials
from soliton_lab.genfun import SpectralParam, build_phi
from soliton_lab.grammian import (GramMatrix, Scheme, collision_adjoint, gram_matrix, gram_tau,
                                  mixed_tau_2plus1, oracle_tau, spec_phis, wronskian_tau)
from soliton_lab.spectral import Convention, Phase, RootPair
from soliton_lab.tauforms import SolutionSpec, tau_closed

SAFE = Grid.safe()


def phi(k, eps, B=1.0, A=1.0, conv=Convention.MIRROR_NEG):
    return build_phi(SpectralParam(RootPair(k, Phase(Fraction(eps)), conv), A, B, 3))


def spec(eq, mode, *params):
    return SolutionSpec.from_dict({"equation": eq, "mode": mode, "params": list(params)})


def proportional(a: ExpSum, b: ExpSum, rtol=1e-12) -> bool:
    """a = c * b for one nonzero constant c, term by term."""
    if len(a) != len(b):
        return False
    i = int(np.argmax(np.abs(b.coeff)))
    j = int(np.argmin(np.abs(a.fx - b.fx[i]) + np.abs(a.ft - b.ft[i])))
    return a.allclose(b * (a.coeff[j] / b.coeff[i]), rtol=rtol)


def max_rel_diff(ta, tb, grid, a=2, b=0):
    X, T = grid.mesh()
    wa = log_partials(ta, X, T, max(a, 1), b, strict=False)
    wb = log_partials(tb, X, T, max(a, 1), b, strict=False)
    return np.nanmax(np.abs(wa[a, b] - wb[a, b])) / np.nanmax(np.abs(wb[a, b]))


def test_bkp_single_entry_is_half_square():
    f = phi(1.2, Fraction(1, 10))
    assert gram_tau(Scheme.BKP, [f]).allclose(0.5 * f.sum * f.sum, rtol=1e-15)
    # and that closed form agrees with integrating phi * phi_x
    assert integrate_x(diff(f.sum) * f.sum).allclose(0.5 * f.sum * f.sum, rtol=1e-14)


def test_ckp_single_entry_matches_bkk_soliton():
    ratio = 1j * cmath.exp(-1j * math.pi / 10)
    tau = gram_tau(Scheme.CKP_LIKE, [phi(1.0, Fraction(1, 10), B=ratio)])
    closed = tau_closed(spec("bKK", "soliton1", {"k": 1, "eps": "1/10"})).raw
    assert max_rel_diff(closed, tau, SAFE) < 1e-9


def test_ckp_two_channels_match_closed_form():
    s = spec("bKK", "soliton2", {"k": 1.8, "eps": "3/10"}, {"k": 1.3, "eps": "1/10"})
    assert max_rel_diff(tau_closed(s).raw, oracle_tau(s), SAFE) < 1e-8


def test_wronskian_single_function():
    f = phi(0.9, Fraction(0), B=0.7)
    assert wronskian_tau([f]).allclose(f.sum)


def test_wronskian_two_left_solitons_match_closed_form_coefficientwise():
    s = spec("bSH", "left2", {"k": 1.5, "ratio": 1}, {"k": 2, "ratio": -0.5, "A": 2})
    assert proportional(oracle_tau(s), tau_closed(s).raw)


def test_wronskian_degenerate_is_zero():
    f = phi(1.1, Fraction(0), B=0.5)
    tau = wronskian_tau([f, f])
    assert tau.is_zero()
    with pytest.raises(NearZeroTau):
        log_partials(tau, 0.0, 0.0, 2)


def test_mixed_determinant_of_equal_functions_vanishes():
    f = phi(1.1, Fraction(1, 4))
    assert mixed_tau_2plus1(f, f).is_zero()


def test_collision_u_is_real():
    s = spec("bSH", "collision", {"k": 0.8}, {"k": 0.9, "eps": "1/4"})
    # z carries the imaginary slope of the e^{2i eta} prefactor; u does not
    X, T = SAFE.mesh()
    u = log_partials(oracle_tau(s), X, T, 2, strict=False)[2, 0]
    assert np.nanmax(np.abs(u.imag)) < 1e-9 * np.nanmax(np.abs(u))


def test_collision_adjoint_function():
    f1, f2 = spec_phis(spec("bSH", "collision", {"k": 0.8}, {"k": 0.9, "eps": "1/4"}))
    psi = collision_adjoint(f1, f2)
    # phi1'' = k1^2 phi1 for the real pair, so psi is orthogonal to phi1 in the derivative sense
    assert diff(f1.sum, 2).allclose(0.64 * f1.sum)
    assert (diff(psi, 0) - (diff(f2.sum, 2) - 0.64 * f2.sum)).is_zero()


def test_unintegrated_entry_is_not_a_solution():
    # the first row of the mixed determinant is integrated entry by entry; leaving
    # the (1,2) entry un-integrated gives a tau that does not solve the equation
    s = spec("bSH", "collision", {"k": 0.8}, {"k": 0.9, "eps": "1/4"})
    f1, f2 = spec_phis(s)
    psi = collision_adjoint(f1, f2)
    grid = Grid.safe(41, 21)
    good = mixed_tau_2plus1(f1, f2, psi=psi)
    rows = ((integrate_x(psi * f1.sum), psi * f2.sum), (f1.sum, f2.sum))
    bad = GramMatrix(rows, Scheme.MIXED_2_1).det()
    assert residual(good, "bSH", grid).max_rel_residual < 1e-6
    assert residual(bad, "bSH", grid).max_rel_residual > 1e-4


def test_column_scaling_leaves_log_partials():
    f1, f2 = phi(1.8, Fraction(3, 10)), phi(1.3, Fraction(1, 10))
    g2 = build_phi(SpectralParam(f2.source.pair, 2.5 - 1j, (2.5 - 1j) * f2.source.B, 3))
    t1 = gram_tau(Scheme.CKP_LIKE, [f1, f2])
    t2 = gram_tau(Scheme.CKP_LIKE, [f1, g2])
    assert proportional(t2, t1)
    assert max_rel_diff(t1, t2, Grid.safe(41, 21), 3, 0) < 1e-12


def test_order_is_capped():
    fs = [phi(0.5 + 0.3 * i, Fraction(1, 10)) for i in range(4)]
    with pytest.raises(ValueError):
        gram_tau(Scheme.CKP_LIKE, fs)
    with pytest.raises(ValueError):
        gram_matrix(Scheme.MIXED_2_1, fs[:2])


def test_three_channel_grammian_is_symmetric_function_of_inputs():
    fs = [phi(0.6, Fraction(1, 10)), phi(1.1, Fraction(3, 10)), phi(1.7, Fraction(1, 10))]
    a = gram_tau(Scheme.CKP_LIKE, fs)
    b = gram_tau(Scheme.CKP_LIKE, [fs[2], fs[0], fs[1]])
    assert a.allclose(b, rtol=1e-12)
