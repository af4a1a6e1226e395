import json
import math
from fractions import Fraction

import pytest

from soliton_lab.spectral import (Direction, Family, Kind, Phase, ReductionSpec, admissible_phases,
                                  classification_json, cospi, divergent_phases, enumerate_distributions,
                                  predict_peaks, predict_velocity, sinpi)


def fracs(phases):
    return {ph.pi_frac for ph in phases}


def test_exact_trig_at_quarter_turns():
    assert cospi(Fraction(1, 2)) == 0.0
    assert sinpi(Fraction(1)) == 0.0
    assert cospi(Fraction(1, 3)) == pytest.approx(0.5)


def test_phase_parsing():
    assert Phase.parse("3/10").pi_frac == Fraction(3, 10)
    assert str(Phase.parse("1/4")) == "1/4"
    assert Phase.parse("1/6").radians == pytest.approx(math.pi / 6)


def test_admissible_phases_examples():
    assert fracs(admissible_phases(ReductionSpec(5, Family.BKP), Kind.SOLITON)) == {Fraction(1, 10), Fraction(3, 10)}
    assert fracs(admissible_phases(ReductionSpec(5, Family.CKP), Kind.PERIODIC)) == {Fraction(1, 5), Fraction(2, 5)}
    assert fracs(admissible_phases(ReductionSpec(3, Family.BKP), Kind.SOLITON)) == {Fraction(1, 6)}


def test_admissible_phases_even_reductions():
    spec = ReductionSpec(8, Family.KP_EVEN)
    assert fracs(admissible_phases(spec, Kind.SOLITON)) == {Fraction(1, 8), Fraction(1, 4), Fraction(3, 8)}
    assert Fraction(0) not in fracs(divergent_phases(spec, Kind.SOLITON))


def test_reduction_spec_validation():
    with pytest.raises(ValueError):
        ReductionSpec(4, Family.BKP)
    with pytest.raises(ValueError):
        ReductionSpec(5, Family.KP_EVEN)
    with pytest.raises(ValueError):
        ReductionSpec(5, Family.CKP, m=5)
    assert ReductionSpec(3, Family.BKP).m == 5


def test_predict_velocity_examples():
    assert predict_velocity(1.0, Phase(Fraction(1, 10)), 3, Kind.SOLITON) == pytest.approx(-0.6180339887, abs=1e-10)
    assert abs(predict_velocity(1.0, Phase(Fraction(1, 6)), 3, Kind.SOLITON)) < 1e-15
    assert predict_velocity(1.0, Phase(Fraction(1, 6)), 5, Kind.SOLITON) == pytest.approx(1.0)
    assert predict_velocity(2.0, Phase(Fraction(1, 6)), 5, Kind.SOLITON) == pytest.approx(16.0)
    assert predict_velocity(1.0, Phase(Fraction(1, 4)), 3, Kind.PERIODIC) == pytest.approx(-1.0)


def test_predict_peaks_examples():
    assert predict_peaks(Phase(Fraction(1, 10)), Family.CKP) == 2
    assert predict_peaks(Phase(Fraction(3, 10)), Family.CKP) == 1
    assert predict_peaks(Phase(Fraction(1, 8)), Family.KP_EVEN) == 2
    assert predict_peaks(Phase(Fraction(1, 10)), Family.BKP) == 1
    # sin(pi/6) = 1/2 exactly is the one-peak boundary
    assert predict_peaks(Phase(Fraction(1, 6)), Family.CKP) == 1


def test_classification_ckp5_rows():
    rows = enumerate_distributions(ReductionSpec(5, Family.CKP))
    summary = [(str(r.eps), r.wave.kind, r.wave.direction, r.wave.peaks) for r in rows]
    assert summary == [
        ("1/10", Kind.SOLITON, Direction.LEFT, 2),
        ("3/10", Kind.SOLITON, Direction.RIGHT, 1),
        ("1/5", Kind.PERIODIC, Direction.LEFT, 1),
        ("2/5", Kind.PERIODIC, Direction.RIGHT, 1),
    ]


def test_classification_bkp3_single_row_with_mirror():
    rows = json.loads(classification_json(ReductionSpec(3, Family.BKP)))
    assert len(rows) == 1
    assert rows[0]["eps"] == "1/6" and rows[0]["mirror_eps"] == "11/6"
    assert rows[0]["kind"] == "soliton" and rows[0]["direction"] == "right"


def test_classification_kp4_includes_wronskian_route():
    rows = enumerate_distributions(ReductionSpec(4, Family.KP_EVEN))
    first = rows[0]
    assert first.eps.pi_frac == 0 and first.route == "wronskian"
    assert first.wave.direction is Direction.LEFT
    rest = {(str(r.eps), r.wave.kind, r.wave.direction) for r in rows[1:]}
    assert rest == {("1/4", Kind.SOLITON, Direction.RIGHT), ("1/4", Kind.PERIODIC, Direction.LEFT)}


def test_nine_reduction_has_stationary_soliton():
    rows = enumerate_distributions(ReductionSpec(9, Family.CKP))
    stationary = {(str(r.eps), r.wave.kind) for r in rows if r.wave.direction is Direction.STATIONARY}
    # the soliton at pi/6 (cos 3eps = 0) and the periodic wave at pi/3 (sin 3eps = 0)
    assert stationary == {("1/6", Kind.SOLITON), ("1/3", Kind.PERIODIC)}
