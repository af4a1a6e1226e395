"""Random admissible parameter draws and the named verification suites.

The CLI ``verify`` command and the acceptance tests both run these, so the
numbers a user sees and the numbers the tests assert are the same numbers.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .analysis import Grid, count_peaks, fields, measure_velocity, residual
from .expsum import log_partials
from .genfun import SpectralParam, build_phi, verify_linear_ode
from .grammian import oracle_tau
from .spectral import (Convention, Family, Kind, Phase, ReductionSpec, RootPair,
                       admissible_phases, enumerate_distributions)
from .tauforms import (Appendix, ChannelParam, Equation, Mode, SolutionSpec, appendix_coeffs,
                       appendix_identities, expected_peaks, ratios_BA, tau_closed, velocity_formula)

DEFAULT_SEED = 42
K_RANGE = (0.5, 2.0)

# every closed-form solution family with a governing equation
FAMILY_CASES = [
    (Equation.BSK, Mode.SOLITON1), (Equation.BSK, Mode.SOLITON2),
    (Equation.BKK, Mode.SOLITON1), (Equation.BKK, Mode.PERIODIC1),
    (Equation.BKK, Mode.SOLITON2), (Equation.BKK, Mode.PERIODIC2),
    (Equation.BSH, Mode.SOLITON1), (Equation.BSH, Mode.LEFT1), (Equation.BSH, Mode.PERIODIC1),
    (Equation.BSH, Mode.SOLITON2), (Equation.BSH, Mode.PERIODIC2), (Equation.BSH, Mode.LEFT2),
    (Equation.BSH, Mode.COLLISION),
    (Equation.SK, Mode.SOLITON1), (Equation.KK, Mode.SOLITON1),
]

ORACLE_ORDERS = ((1, 0), (2, 0), (1, 1), (3, 0))


@dataclass(frozen=True)
class CheckResult:
    name: str
    ok: bool
    value: float
    threshold: float
    detail: str = ""

    def line(self) -> str:
        status = "PASS" if self.ok else "FAIL"
        extra = f" ({self.detail})" if self.detail else ""
        return f"{status}  {self.name}: {self.value:.3g} vs {self.threshold:.3g}{extra}"


def _k(rng) -> float:
    return float(rng.uniform(*K_RANGE))


def random_spec(equation, mode, rng: np.random.Generator, n: int | None = None) -> SolutionSpec:
    """A random admissible spec: k uniform in [0.5, 2], phases from the admissible list."""
    equation, mode = Equation(equation), Mode(mode)
    red = _reduction_for(equation, n)
    kind = Kind.PERIODIC if mode in (Mode.PERIODIC1, Mode.PERIODIC2) else Kind.SOLITON
    phases = admissible_phases(red, kind)

    def pick():
        return phases[int(rng.integers(len(phases)))]

    zero = Phase(Fraction(0))
    if mode in (Mode.SOLITON1, Mode.PERIODIC1):
        ratio = float(rng.uniform(0.5, 2.0)) if equation in (Equation.BSK, Equation.SK,
                                                             Equation.NBKP) else None
        params = [ChannelParam(_k(rng), pick(), ratio)]
    elif mode is Mode.LEFT1:
        params = [ChannelParam(_k(rng), zero, float(rng.uniform(0.5, 2.0)))]
    elif mode is Mode.LEFT2:
        k1, k2 = sorted((_k(rng), _k(rng)))
        params = [ChannelParam(k1, zero, float(rng.uniform(0.5, 2.0))),
                  ChannelParam(k2, zero, -float(rng.uniform(0.5, 2.0)))]
    elif mode is Mode.COLLISION:
        params = [ChannelParam(_k(rng), zero), ChannelParam(_k(rng), pick())]
    else:
        params = [ChannelParam(_k(rng), pick()), ChannelParam(_k(rng), pick())]
    return SolutionSpec(equation, mode, params, n)


def _reduction_for(equation: Equation, n: int | None) -> ReductionSpec:
    defaults = {Equation.BSK: (5, Family.BKP, 3), Equation.BKK: (5, Family.CKP, 3),
                Equation.BSH: (4, Family.KP_EVEN, 3), Equation.SK: (3, Family.BKP, 5),
                Equation.KK: (3, Family.CKP, 5), Equation.NBKP: (None, Family.BKP, 3),
                Equation.NCKP: (None, Family.CKP, 3), Equation.NKP: (None, Family.KP_EVEN, 3)}
    n0, fam, m = defaults[equation]
    return ReductionSpec(n if n is not None else n0, fam, m)


def family_name(spec: SolutionSpec) -> str:
    return f"{spec.equation.value}/{spec.mode.value}"


# --- identities ------------------------------------------------------------

def suite_identities(seed: int = DEFAULT_SEED, draws: int = 100, tol: float = 1e-10) -> list[CheckResult]:
    """Algebraic identities of coefficient sets A-D over random k and admissible phases."""
    rng = np.random.default_rng(seed)
    sol5 = admissible_phases(ReductionSpec(5, Family.CKP), Kind.SOLITON)
    per5 = admissible_phases(ReductionSpec(5, Family.CKP), Kind.PERIODIC)
    sol4 = admissible_phases(ReductionSpec(4, Family.KP_EVEN), Kind.SOLITON)
    setups = {Appendix.A_BSK: sol5, Appendix.B_BKK_SOLITON: sol5,
              Appendix.C_BKK_PERIODIC: per5, Appendix.D_BSH_COLLISION: sol4}
    out = []
    for which, phases in setups.items():
        worst, gmin = 0.0, math.inf
        for _ in range(draws):
            e1 = phases[int(rng.integers(len(phases)))]
            e2 = phases[int(rng.integers(len(phases)))]
            co = appendix_coeffs(which, _k(rng), _k(rng), e1, e2)
            worst = max(worst, *appendix_identities(co).values())
            g = ratios_BA(which, co).g.g
            gmin = min(gmin, *g.values())
        out.append(CheckResult(f"coefficient set {which.value} identities", worst < tol, worst, tol,
                               f"{draws} draws, min g = {gmin:.3g}"))
    return out


# --- oracle ----------------------------------------------------------------

def oracle_error(spec: SolutionSpec, grid: Grid, orders=ORACLE_ORDERS, *, printed=False) -> float:
    """Max relative difference of log-partials between closed-form raw tau and the determinant."""
    X, T = grid.mesh()
    mx = max(a for a, _ in orders)
    mt = max(b for _, b in orders)
    wa = log_partials(tau_closed(spec, printed=printed).raw, X, T, mx, mt, strict=False)
    wb = log_partials(oracle_tau(spec), X, T, mx, mt, strict=False)
    worst = 0.0
    for a, b in orders:
        # relative to the grid-wide size of that partial, so zeros of W do not blow up
        scale = np.nanmax(np.abs(wb[a, b]))
        if scale == 0:
            continue
        worst = max(worst, float(np.nanmax(np.abs(wa[a, b] - wb[a, b]))) / scale)
    return worst


def suite_oracle(seed: int = DEFAULT_SEED, draws: int = 20, tol: float = 1e-8,
                 grid: Grid | None = None) -> list[CheckResult]:
    rng = np.random.default_rng(seed)
    grid = grid or Grid.safe()
    out = []
    for eq, mode in FAMILY_CASES:
        worst = max(oracle_error(random_spec(eq, mode, rng), grid) for _ in range(draws))
        out.append(CheckResult(f"oracle {eq.value}/{mode.value}", worst < tol, worst, tol,
                               f"{draws} draws"))
    return out


# --- residuals -------------------------------------------------------------

def suite_residuals(seed: int = DEFAULT_SEED, draws: int = 20, tol: float = 1e-6,
                    grid: Grid | None = None) -> list[CheckResult]:
    rng = np.random.default_rng(seed)
    grid = grid or Grid.safe()
    out = []
    for eq, mode in FAMILY_CASES:
        worst = 0.0
        for _ in range(draws):
            spec = random_spec(eq, mode, rng)
            rep = residual(tau_closed(spec).physical, spec.governing_equation, grid)
            worst = max(worst, rep.max_rel_residual)
        out.append(CheckResult(f"residual {eq.value}/{mode.value}", worst < tol, worst, tol,
                               f"{draws} draws"))
    return out


# --- classification: eigen-admissibility, peaks, velocities ----------------

def _off_list(spec: ReductionSpec, kind: Kind) -> list[Phase]:
    """Phases in (0, pi/2) on a fine rational lattice that are not admissible."""
    good = {ph.pi_frac for ph in admissible_phases(spec, kind)}
    lattice = {Fraction(p, 4 * spec.n * 3) for p in range(1, 6 * spec.n)}
    return [Phase(f) for f in sorted(lattice) if 0 < f < Fraction(1, 2) and f not in good]


def eigen_admissibility(ns=(3, 4, 5, 7, 9, 11)) -> CheckResult:
    bad = []
    checked = 0
    for n in ns:
        fams = [Family.KP_EVEN] if n % 2 == 0 else [Family.BKP, Family.CKP]
        for fam in fams:
            red = ReductionSpec(n, fam, 5 if n == 3 else 3)
            for kind in Kind:
                conv = Convention.MIRROR_POS if kind is Kind.PERIODIC else Convention.MIRROR_NEG
                for ph in admissible_phases(red, kind):
                    checked += 1
                    phi = build_phi(SpectralParam(RootPair(1.3, ph, conv), 1.0, 0.7, red.m))
                    if not verify_linear_ode(phi, n).ok:
                        bad.append(f"n={n} {kind.value} {ph} rejected")
                for ph in _off_list(red, kind):
                    checked += 1
                    phi = build_phi(SpectralParam(RootPair(1.3, ph, conv), 1.0, 0.7, red.m))
                    if verify_linear_ode(phi, n).ok:
                        bad.append(f"n={n} {kind.value} {ph} accepted")
    return CheckResult("eigen-admissibility n in {3,4,5,7,9,11}", not bad, len(bad), 0,
                       "; ".join(bad[:5]) or f"{checked} phases checked")


def _peaks_of(spec: SolutionSpec, half_width: float = 30.0) -> int:
    k = spec.params[0].k
    nx = int(2 * half_width / (0.005 / k)) + 1
    grid = Grid(-half_width, half_width, nx, -0.5, 0.5, 3)
    return count_peaks(fields(tau_closed(spec).physical, grid), 0.0)


PEAK_CASES = [
    ("bKK eps=pi/10", SolutionSpec("bKK", "soliton1", [ChannelParam(1.0, Phase.parse("1/10"))]), 2),
    ("bKK eps=3pi/10", SolutionSpec("bKK", "soliton1", [ChannelParam(1.0, Phase.parse("3/10"))]), 1),
    ("bSH eps=pi/4", SolutionSpec("bSH", "soliton1", [ChannelParam(1.0, Phase.parse("1/4"))]), 1),
    ("8-reduction eps=pi/8", SolutionSpec("nKP", "soliton1", [ChannelParam(1.0, Phase.parse("1/8"))], 8), 2),
    ("11CKP eps=pi/22", SolutionSpec("nCKP", "soliton1", [ChannelParam(0.8, Phase.parse("1/22"))], 11), 2),
    ("11CKP eps=3pi/22", SolutionSpec("nCKP", "soliton1", [ChannelParam(0.8, Phase.parse("3/22"))], 11), 2),
    ("bSK eps=pi/10", SolutionSpec("bSK", "soliton1", [ChannelParam(1.0, Phase.parse("1/10"))]), 1),
    ("bSK eps=3pi/10", SolutionSpec("bSK", "soliton1", [ChannelParam(1.0, Phase.parse("3/10"))]), 1),
]


def peak_checks() -> list[CheckResult]:
    out = []
    for name, spec, want in PEAK_CASES:
        got = _peaks_of(spec)
        out.append(CheckResult(f"peaks {name}", got == want and expected_peaks(spec) == want,
                               got, want))
    return out


def peak_sweep(seed: int = DEFAULT_SEED, draws: int = 200) -> CheckResult:
    """Random CKP-family single solitons (bKK, KK, nCKP, bSH, nKP) never show more than two peaks."""
    rng = np.random.default_rng(seed)
    pool = [(Equation.BKK, None), (Equation.KK, None), (Equation.BSH, None),
            (Equation.NCKP, 7), (Equation.NCKP, 9), (Equation.NCKP, 11),
            (Equation.NKP, 6), (Equation.NKP, 8)]
    worst, mismatch = 0, 0
    for _ in range(draws):
        eq, n = pool[int(rng.integers(len(pool)))]
        spec = random_spec(eq, Mode.SOLITON1, rng, n)
        got = _peaks_of(spec)
        worst = max(worst, got)
        mismatch += got != expected_peaks(spec)
    return CheckResult(f"peak bound over {draws} CKP-family draws", worst <= 2 and mismatch == 0,
                       worst, 2, f"{mismatch} draws disagree with the sin(eps) < 1/2 rule")


VELOCITY_CASES = [
    ("bSK eps=pi/10", SolutionSpec("bSK", "soliton1", [ChannelParam(1.0, Phase.parse("1/10"))])),
    ("bSK eps=3pi/10", SolutionSpec("bSK", "soliton1", [ChannelParam(1.0, Phase.parse("3/10"))])),
    ("bSK eps=pi/10 k=1.4", SolutionSpec("bSK", "soliton1", [ChannelParam(1.4, Phase.parse("1/10"))])),
    ("bSH left k=1", SolutionSpec("bSH", "left1", [ChannelParam(1.0, Phase.parse("0"))])),
    ("bSH left k=1.5", SolutionSpec("bSH", "left1", [ChannelParam(1.5, Phase.parse("0"))])),
    ("bSH periodic k=1", SolutionSpec("bSH", "periodic1", [ChannelParam(1.0, Phase.parse("1/4"))])),
    ("bSH periodic k=1.2", SolutionSpec("bSH", "periodic1", [ChannelParam(1.2, Phase.parse("1/4"))])),
    ("SK eps=pi/6", SolutionSpec("SK", "soliton1", [ChannelParam(1.0, Phase.parse("1/6"))])),
    ("SK eps=pi/6 k=1.2", SolutionSpec("SK", "soliton1", [ChannelParam(1.2, Phase.parse("1/6"))])),
]

STATIONARY_CASES = [
    ("9CKP eps=pi/6", SolutionSpec("nCKP", "soliton1", [ChannelParam(1.0, Phase.parse("1/6"))], 9)),
    ("9BKP eps=pi/6", SolutionSpec("nBKP", "soliton1", [ChannelParam(1.0, Phase.parse("1/6"))], 9)),
]


def velocity_checks(rtol: float = 0.01, drift: float = 1e-6) -> list[CheckResult]:
    out = []
    for name, spec in VELOCITY_CASES:
        want = velocity_formula(spec)
        got = measure_velocity(spec, -1.0, 1.0)
        err = abs(got - want) / abs(want)
        out.append(CheckResult(f"velocity {name}", err < rtol, err, rtol,
                               f"measured {got:.6f}, formula {want:.6f}"))
    for name, spec in STATIONARY_CASES:
        got = abs(measure_velocity(spec, -2.0, 2.0))
        out.append(CheckResult(f"stationary {name}", got < drift, got, drift))
    return out


CLASSIFICATION_COUNTS = [((5, Family.CKP), 4), ((5, Family.BKP), 2), ((3, Family.BKP), 1),
                         ((3, Family.CKP), 2), ((4, Family.KP_EVEN), 3)]


def suite_classification(seed: int = DEFAULT_SEED) -> list[CheckResult]:
    out = []
    for (n, fam), want in CLASSIFICATION_COUNTS:
        got = len(enumerate_distributions(ReductionSpec(n, fam)))
        out.append(CheckResult(f"classify n={n} {fam.value} rows", got == want, got, want))
    out.append(eigen_admissibility())
    out += peak_checks()
    out.append(peak_sweep(seed))
    out += velocity_checks()
    return out


SUITES = {
    "identities": suite_identities,
    "oracle": suite_oracle,
    "residuals": suite_residuals,
    "classification": suite_classification,
}
