"""Root distributions, admissible phases and wave classification.

A reduction of order ``n`` asks for generating functions with
``d^n phi / dx^n = lambda * phi``.  With the two-exponential ansatz
``p = k e^{i eps}`` and ``q = -k e^{-i eps}`` (mirror image through the
imaginary axis) or ``q = k e^{-i eps}`` (mirror image through the real axis)
this holds exactly when ``p^n == q^n``, which pins ``eps`` to a finite set of
rational multiples of pi.  Phases are therefore kept as exact fractions of pi
(:class:`Phase`) and only turned into floats inside trigonometric calls.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction

STATIONARY_TOL = 1e-12


class Family(str, Enum):
    BKP = "bkp"
    CKP = "ckp"
    KP_EVEN = "kp-even"


class Kind(str, Enum):
    SOLITON = "soliton"
    PERIODIC = "periodic"


class Direction(str, Enum):
    LEFT = "left"
    RIGHT = "right"
    STATIONARY = "stationary"


class Convention(str, Enum):
    MIRROR_NEG = "mirror-neg"   # q = -k e^{-i eps}
    MIRROR_POS = "mirror-pos"   # q = +k e^{-i eps}


# exact values of cos(pi * r) for r in {0, 1/2, 1, 3/2}
_COS_HALF = {Fraction(0): 1.0, Fraction(1, 2): 0.0, Fraction(1): -1.0, Fraction(3, 2): 0.0}
_SIN_HALF = {Fraction(0): 0.0, Fraction(1, 2): 1.0, Fraction(1): 0.0, Fraction(3, 2): -1.0}


def cospi(r) -> float:
    """cos(pi * r); exact when ``r`` is a Fraction with denominator 1 or 2."""
    if isinstance(r, Fraction):
        r = r % 2
        if r in _COS_HALF:
            return _COS_HALF[r]
        return math.cos(math.pi * float(r))
    return math.cos(math.pi * r)


def sinpi(r) -> float:
    """sin(pi * r); exact when ``r`` is a Fraction with denominator 1 or 2."""
    if isinstance(r, Fraction):
        r = r % 2
        if r in _SIN_HALF:
            return _SIN_HALF[r]
        return math.sin(math.pi * float(r))
    return math.sin(math.pi * r)


@dataclass(frozen=True)
class Phase:
    """An angle stored as a multiple of pi, exact when ``pi_frac`` is a Fraction."""

    pi_frac: Fraction | float

    @classmethod
    def parse(cls, text: str) -> Phase:
        """Parse ``"p/q"`` (or an integer) as the angle p*pi/q."""
        try:
            return cls(Fraction(str(text).strip()))
        except (ValueError, ZeroDivisionError) as exc:
            raise ValueError(f"phase must be a rational multiple of pi like '1/10', got {text!r}") from exc

    @classmethod
    def from_radians(cls, value: float) -> Phase:
        return cls(float(value) / math.pi)

    @property
    def exact(self) -> bool:
        return isinstance(self.pi_frac, Fraction)

    @property
    def radians(self) -> float:
        return math.pi * float(self.pi_frac)

    def cos(self, mult: int = 1) -> float:
        return cospi(self.pi_frac * mult)

    def sin(self, mult: int = 1) -> float:
        return sinpi(self.pi_frac * mult)

    def close_to(self, other: Phase, tol: float = 1e-12) -> bool:
        if self.exact and other.exact:
            return self.pi_frac == other.pi_frac
        return abs(float(self.pi_frac) - float(other.pi_frac)) <= tol

    def __str__(self):
        return str(self.pi_frac) if self.exact else repr(float(self.pi_frac))


def as_phase(eps) -> Phase:
    """Accept a Phase, a ``"p/q"`` string, a Fraction (of pi) or radians."""
    if isinstance(eps, Phase):
        return eps
    if isinstance(eps, str):
        return Phase.parse(eps)
    if isinstance(eps, Fraction):
        return Phase(eps)
    return Phase.from_radians(eps)


@dataclass(frozen=True)
class ReductionSpec:
    n: int
    family: Family
    m: int | None = None   # defaults to 3, or 5 when n == 3

    def __post_init__(self):
        object.__setattr__(self, "family", Family(self.family))
        if self.m is None:
            object.__setattr__(self, "m", 5 if self.n == 3 else 3)
        if self.m not in (3, 5):
            raise ValueError("dispersion power m must be 3 or 5")
        if self.n == self.m:
            raise ValueError("n and m must differ (the t-flow would be trivial)")
        if self.family is Family.KP_EVEN:
            if self.n < 2 or self.n % 2:
                raise ValueError("KP_EVEN reductions need an even n >= 2")
        elif self.n < 3 or self.n % 2 == 0:
            raise ValueError(f"{self.family.name} reductions need an odd n >= 3")


@dataclass(frozen=True)
class RootPair:
    """The pair (p, q) = (k e^{i eps}, -+k e^{-i eps}).

    ``eps = 0`` is accepted only for MIRROR_NEG, where it gives the real
    pair (k, -k) used by the Wronskian (KdV-type) construction.
    """

    k: float
    eps: Phase
    convention: Convention = Convention.MIRROR_NEG

    def __post_init__(self):
        object.__setattr__(self, "eps", as_phase(self.eps))
        object.__setattr__(self, "convention", Convention(self.convention))
        if not self.k > 0:
            raise ValueError("k must be positive")
        e = float(self.eps.pi_frac)
        zero_ok = self.convention is Convention.MIRROR_NEG
        if not (0 < e < 0.5 or (zero_ok and e == 0)):
            raise ValueError("eps must lie in (0, pi/2)")

    @property
    def p(self) -> complex:
        return self.k * complex(self.eps.cos(), self.eps.sin())

    @property
    def q(self) -> complex:
        sign = -1.0 if self.convention is Convention.MIRROR_NEG else 1.0
        return sign * self.k * complex(self.eps.cos(), -self.eps.sin())


@dataclass(frozen=True)
class WaveClass:
    kind: Kind
    direction: Direction
    peaks: int
    velocity: float

    def __post_init__(self):
        if self.peaks not in (1, 2):
            raise ValueError("peaks must be 1 or 2")
        if (self.direction is Direction.STATIONARY) != (abs(self.velocity) < STATIONARY_TOL):
            raise ValueError("STATIONARY iff |velocity| < 1e-12")


def direction_of(v: float) -> Direction:
    if abs(v) < STATIONARY_TOL:
        return Direction.STATIONARY
    return Direction.RIGHT if v > 0 else Direction.LEFT


def admissible_phases(spec: ReductionSpec, kind: Kind) -> list[Phase]:
    """Phases in (0, pi/2) for which the two-exponential ansatz is an eigenfunction.

    Odd n: solitons (q = -k e^{-i eps}) need e^{2 i n eps} = -1, giving
    (2p-1)pi/(2n); periodic waves (q = k e^{-i eps}) need e^{2 i n eps} = 1,
    giving p*pi/n.  Even n: both conventions need e^{2 i n eps} = 1.
    """
    kind = Kind(kind)
    n = spec.n
    if spec.family is Family.KP_EVEN or kind is Kind.PERIODIC:
        cands = [Fraction(p, n) for p in range(1, n)]
    else:
        cands = [Fraction(2 * p - 1, 2 * n) for p in range(1, n + 1)]
    return [Phase(c) for c in cands if 0 < c < Fraction(1, 2)]


def divergent_phases(spec: ReductionSpec, kind: Kind) -> list[Phase]:
    """Eigen-admissible phases in [0, 2pi) that the classification discards.

    Excludes the admissible phases, their mirrors 2pi - eps (which describe
    the same solution) and, for even n solitons, eps = 0 (Wronskian route).
    """
    kind = Kind(kind)
    n = spec.n
    if spec.family is Family.KP_EVEN or kind is Kind.PERIODIC:
        allp = [Fraction(p, n) for p in range(0, 2 * n)]
    else:
        allp = [Fraction(2 * p - 1, 2 * n) for p in range(1, 2 * n + 1)]
    keep = {ph.pi_frac for ph in admissible_phases(spec, kind)}
    keep |= {2 - t for t in keep}
    if spec.family is Family.KP_EVEN and kind is Kind.SOLITON:
        keep.add(Fraction(0))
    return [Phase(t) for t in allp if t not in keep]


def predict_velocity(k: float, eps, m: int, kind: Kind) -> float:
    """Velocity of the single wave built on the root pair (k, eps).

    Soliton: -k^{m-1} cos(m eps)/cos(eps).  Periodic: -k^{m-1} sin(m eps)/sin(eps).
    """
    eps = as_phase(eps)
    kind = Kind(kind)
    if kind is Kind.SOLITON:
        den = eps.cos()
        if den == 0:
            raise ValueError("cos(eps) = 0")
        return -(k ** (m - 1)) * eps.cos(m) / den
    den = eps.sin()
    if den == 0:
        raise ValueError("sin(eps) = 0")
    return -(k ** (m - 1)) * eps.sin(m) / den


def predict_peaks(eps, family: Family) -> int:
    """Peak count of a single soliton: two iff sin(eps) < 1/2 for Grammian CKP-like families."""
    eps = as_phase(eps)
    family = Family(family)
    if not 0 < float(eps.pi_frac) < 0.5:
        raise ValueError("eps must lie in (0, pi/2)")
    if family is Family.BKP:
        return 1
    # sin(eps) < 1/2  <=>  eps < pi/6 on (0, pi/2); compare exactly when possible
    if eps.exact:
        return 2 if eps.pi_frac < Fraction(1, 6) else 1
    return 2 if eps.sin() < 0.5 else 1


@dataclass(frozen=True)
class DistributionRow:
    n: int
    family: Family
    m: int
    eps: Phase
    convention: Convention
    route: str          # "grammian" or "wronskian"
    wave: WaveClass

    def as_dict(self) -> dict:
        return {
            "n": self.n,
            "family": self.family.value,
            "eps": str(self.eps),
            "eps_radians": self.eps.radians,
            "mirror_eps": str(Phase(2 - self.eps.pi_frac)) if self.eps.exact and self.eps.pi_frac else None,
            "convention": self.convention.value,
            "route": self.route,
            "kind": self.wave.kind.value,
            "direction": self.wave.direction.value,
            "peaks": self.wave.peaks,
            "velocity_per_unit": self.wave.velocity,
        }


def enumerate_distributions(spec: ReductionSpec) -> list[DistributionRow]:
    """Classification table: one row per admissible root distribution.

    Velocities are quoted per unit k^{m-1}.  Even reductions additionally get
    the eps = 0 row, a left-going KdV-type soliton built by the Wronskian.
    """
    rows = []
    if spec.family is Family.KP_EVEN:
        v = predict_velocity(1.0, Phase(Fraction(0)), spec.m, Kind.SOLITON)
        rows.append(DistributionRow(spec.n, spec.family, spec.m, Phase(Fraction(0)),
                                    Convention.MIRROR_NEG, "wronskian",
                                    WaveClass(Kind.SOLITON, direction_of(v), 1, v)))
    for eps in admissible_phases(spec, Kind.SOLITON):
        v = predict_velocity(1.0, eps, spec.m, Kind.SOLITON)
        rows.append(DistributionRow(spec.n, spec.family, spec.m, eps, Convention.MIRROR_NEG,
                                    "grammian",
                                    WaveClass(Kind.SOLITON, direction_of(v),
                                              predict_peaks(eps, spec.family), v)))
    if spec.family is not Family.BKP:
        # the BKP Grammian of a real-axis mirror pair does not give a bounded wave
        for eps in admissible_phases(spec, Kind.PERIODIC):
            v = predict_velocity(1.0, eps, spec.m, Kind.PERIODIC)
            rows.append(DistributionRow(spec.n, spec.family, spec.m, eps, Convention.MIRROR_POS,
                                        "grammian", WaveClass(Kind.PERIODIC, direction_of(v), 1, v)))
    return rows


def classification_json(spec: ReductionSpec, indent: int | None = 2) -> str:
    return json.dumps([r.as_dict() for r in enumerate_distributions(spec)], indent=indent)
