import cmath
import math
from fractions import Fraction

import numpy as np
import pytest

from soliton_lab.genfun import SpectralParam, build_phi, verify_linear_ode
from soliton_lab.spectral import Convention, Family, Kind, Phase, ReductionSpec, RootPair, admissible_phases


def phi(k, eps, conv, m=3, A=1.0, B=1.0):
    return build_phi(SpectralParam(RootPair(k, Phase(Fraction(eps)), conv), A, B, m))


def test_build_phi_mirror_neg_frequencies():
    f = phi(1.0, Fraction(1, 10), Convention.MIRROR_NEG)
    w = cmath.exp(1j * math.pi / 10)
    expected = {w, -w.conjugate()}
    got = set(f.sum.fx)
    for e in expected:
        assert min(abs(e - g) for g in got) < 1e-15
    np.testing.assert_allclose(f.sum.ft, f.sum.fx ** 3, atol=1e-15)


def test_build_phi_mirror_pos_frequencies():
    f = phi(1.0, Fraction(1, 4), Convention.MIRROR_POS)
    w = cmath.exp(1j * math.pi / 4)
    assert sorted(f.sum.fx, key=lambda z: z.imag) == pytest.approx([w.conjugate(), w], abs=1e-15)


def test_eigen_check_soliton_pair():
    chk = verify_linear_ode(phi(1.0, Fraction(1, 10), Convention.MIRROR_NEG), 5)
    assert chk.ok
    assert chk.lam == pytest.approx(1j, abs=1e-15)


def test_eigen_check_rejects_inadmissible_phase():
    chk = verify_linear_ode(phi(1.0, Fraction(1, 5), Convention.MIRROR_NEG), 5)
    assert not chk.ok and chk.lam is None


def test_eigen_check_periodic_pair():
    assert verify_linear_ode(phi(1.0, Fraction(1, 5), Convention.MIRROR_POS), 5).ok


def test_eigen_check_scales_with_k():
    chk = verify_linear_ode(phi(1.7, Fraction(3, 10), Convention.MIRROR_NEG, A=2.0, B=-0.3), 5)
    assert chk.ok
    assert abs(chk.lam) == pytest.approx(1.7 ** 5)


@pytest.mark.parametrize("n", [3, 5, 7, 9, 11])
@pytest.mark.parametrize("family", [Family.BKP, Family.CKP])
def test_admissible_phases_pass_the_eigen_check(n, family):
    spec = ReductionSpec(n, family)
    for kind, conv in ((Kind.SOLITON, Convention.MIRROR_NEG), (Kind.PERIODIC, Convention.MIRROR_POS)):
        for eps in admissible_phases(spec, kind):
            assert verify_linear_ode(phi(1.3, eps.pi_frac, conv, m=spec.m), n).ok


def test_flow_equation_holds_for_m5():
    f = phi(0.9, Fraction(1, 6), Convention.MIRROR_NEG, m=5)
    assert verify_linear_ode(f, 3).ok


def test_spectral_param_validation():
    with pytest.raises(ValueError):
        SpectralParam(RootPair(1.0, Phase(Fraction(1, 10))), A=0)
    with pytest.raises(ValueError):
        RootPair(1.0, Phase(Fraction(0)), Convention.MIRROR_POS)
