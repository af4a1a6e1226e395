"""The seven acceptance criteria, each at its stated tolerance.

Each test records a one-line verdict that conftest.py prints at the end of
the run (and prints it directly, visible with ``pytest -s``).
"""

import json
import time
from pathlib import Path

import pytest

from conftest import ACCEPTANCE
from soliton_lab.analysis import THREADS_ENV
from soliton_lab.cli import main
from soliton_lab.suites import (DEFAULT_SEED, eigen_admissibility, peak_checks, peak_sweep,
                                suite_identities, suite_oracle, suite_residuals, velocity_checks)
from soliton_lab.tauforms import MISPRINTS
from test_tauforms import correction_error

SCENARIOS = Path(__file__).resolve().parent.parent / "docs" / "scenarios"


def record(num, results, extra=""):
    ok = all(r.ok for r in results)
    failed = [r.name for r in results if not r.ok]
    worst = max(results, key=lambda r: r.value / r.threshold if r.threshold else r.value)
    text = f"{len(results) - len(failed)}/{len(results)} checks pass; worst {worst.name}: {worst.value:.3g} vs {worst.threshold:.3g}"
    if extra:
        text += f"; {extra}"
    if failed:
        text += f"; failing: {', '.join(failed)}"
    ACCEPTANCE[num] = (ok, text)
    print(f"criterion {num}: {'PASS' if ok else 'FAIL'}  {text}")
    for r in results:
        print("   ", r.line())
    return ok


def test_criterion_1_pde_residuals(monkeypatch):
    monkeypatch.setenv(THREADS_ENV, "1")
    start = time.perf_counter()
    results = suite_residuals(DEFAULT_SEED, draws=20, tol=1e-6)
    elapsed = time.perf_counter() - start
    assert len(results) == 15
    ok = record(1, results, f"{elapsed:.1f} s single-threaded (target < 60 s)")
    assert ok
    assert elapsed < 60


def test_criterion_2_oracle_equivalence_and_corrections():
    results = suite_oracle(DEFAULT_SEED, draws=20, tol=1e-8)
    flips = []
    for key in sorted(MISPRINTS):
        bad, tol = correction_error(key, printed=True)
        good, _ = correction_error(key, printed=False)
        flips.append((key, bad > tol and good < tol, bad, good))
    broken = [k for k, ok, _, _ in flips if not ok]
    ok = record(2, results, f"{len(flips) - len(broken)}/{len(flips)} published forms fail and their corrections pass")
    for key, fine, bad, good in flips:
        print(f"    {'PASS' if fine else 'FAIL'}  correction {key}: published {bad:.3g}, corrected {good:.3g}")
    assert ok
    assert not broken, broken


def test_criterion_3_appendix_identities():
    results = suite_identities(DEFAULT_SEED, draws=100, tol=1e-10)
    assert len(results) == 4
    assert record(3, results)


def test_criterion_4_peak_classification():
    results = peak_checks() + [peak_sweep(DEFAULT_SEED, draws=200)]
    assert record(4, results)


def test_criterion_5_velocities():
    results = velocity_checks(rtol=0.01, drift=1e-6)
    assert record(5, results)


def test_criterion_6_eigen_admissibility():
    assert record(6, [eigen_admissibility((3, 4, 5, 7, 9, 11))])


def test_criterion_7_figure_scenarios(tmp_path, capsys):
    files = sorted(SCENARIOS.glob("fig*.json"))
    assert [f.stem for f in files] == [f"fig{i}" for i in range(1, 8)]
    lines, ok, velocities = [], True, {}
    for path in files:
        code = main(["solve", str(path), "--out", str(tmp_path)])
        doc = json.loads(capsys.readouterr().out)
        for sc in doc["scenarios"]:
            good = sc["ok"] and sc["tau_hat_positive"] and code == 0
            ok &= good
            if "velocity" in sc:
                velocities[sc["name"]] = sc["velocity"]["measured"]
            failed = [k for k, v in sc["checks"].items() if not v]
            lines.append(f"    {'PASS' if good else 'FAIL'}  {path.stem} {sc['name']}"
                         + (f" (failed: {', '.join(failed)})" if failed else ""))
    # the pi/22 eleven-reduction soliton is the faster of the two
    faster = abs(velocities["fig6-fast"]) > abs(velocities["fig6-slow"])
    ok &= faster
    text = f"{sum(l.startswith('    PASS') for l in lines)}/{len(lines)} scenarios match; pi/22 faster than 3pi/22: {faster}"
    ACCEPTANCE[7] = (ok, text)
    print(f"criterion 7: {'PASS' if ok else 'FAIL'}  {text}")
    print("\n".join(lines))
    assert ok
