"""Fields, PDE residuals, peak counts, velocities and CSV export.

Everything is computed from exact log-derivatives ``W[a, b] = d_x^a d_t^b log tau``
(z = W[1, 0], u = W[2, 0]); no finite differences are involved except in the
quadratic refinement of an argmax.
"""

from __future__ import annotations

import csv
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .expsum import ExpSum, log_partials
from .tauforms import Mode, SolutionSpec, tau_closed

EXCLUDED_LIMIT = 0.5
PEAK_FLOOR = 1e-6
# residuals are divided by max(local summand scale, RESIDUAL_FLOOR * grid-wide scale);
# roundoff in the residual sits near 1e-12 of the grid-wide scale, so this keeps
# tail noise two orders below a 1e-6 threshold while cores are judged locally
RESIDUAL_FLOOR = 1e-4
THREADS_ENV = "SOLITON_LAB_THREADS"


class EmptyField(ValueError):
    """More than half of the grid points fall below the cancellation floor."""


class AmbiguousTrack(ValueError):
    """Several well-separated wave groups; a single velocity is not defined."""


@dataclass(frozen=True)
class Grid:
    x_min: float
    x_max: float
    nx: int
    t_min: float
    t_max: float
    nt: int

    def __post_init__(self):
        if self.nx < 2 or self.nt < 2:
            raise ValueError("nx and nt must be at least 2")
        vals = (self.x_min, self.x_max, self.t_min, self.t_max)
        if not all(math.isfinite(v) for v in vals):
            raise ValueError("grid bounds must be finite")
        if not (self.x_min < self.x_max and self.t_min < self.t_max):
            raise ValueError("grid bounds must be increasing")

    @classmethod
    def parse(cls, text: str) -> Grid:
        """Parse ``"xmin:xmax:nx,tmin:tmax:nt"``."""
        try:
            xs, ts = text.split(",")
            x0, x1, nx = xs.split(":")
            t0, t1, nt = ts.split(":")
            return cls(float(x0), float(x1), int(nx), float(t0), float(t1), int(nt))
        except ValueError as exc:
            raise ValueError(f"grid must look like 'xmin:xmax:nx,tmin:tmax:nt', got {text!r}") from exc

    @classmethod
    def safe(cls, nx: int = 201, nt: int = 101) -> Grid:
        """x in [-10, 10], t in [-5, 5]."""
        return cls(-10.0, 10.0, nx, -5.0, 5.0, nt)

    def __str__(self):
        return f"{self.x_min:g}:{self.x_max:g}:{self.nx},{self.t_min:g}:{self.t_max:g}:{self.nt}"

    @property
    def x(self) -> np.ndarray:
        return np.linspace(self.x_min, self.x_max, self.nx)

    @property
    def t(self) -> np.ndarray:
        return np.linspace(self.t_min, self.t_max, self.nt)

    def mesh(self) -> tuple[np.ndarray, np.ndarray]:
        """(X, T), each nx x nt."""
        return np.meshgrid(self.x, self.t, indexing="ij")


def _threads() -> int:
    try:
        return max(1, int(os.environ.get(THREADS_ENV, "1")))
    except ValueError:
        return 1


def grid_partials(tau: ExpSum, grid: Grid, max_x: int, max_t: int = 0) -> np.ndarray:
    """log_partials over the whole grid, NaN at cancellation-floor points.

    Columns (fixed t) are independent; with SOLITON_LAB_THREADS > 1 they are
    split into chunks evaluated concurrently.  Results do not depend on the
    thread count.
    """
    X, T = grid.mesh()
    nthreads = min(_threads(), grid.nt)
    if nthreads == 1:
        return log_partials(tau, X, T, max_x, max_t, strict=False)
    chunks = np.array_split(np.arange(grid.nt), nthreads)
    with ThreadPoolExecutor(nthreads) as pool:
        parts = list(pool.map(
            lambda idx: log_partials(tau, X[:, idx], T[:, idx], max_x, max_t, strict=False), chunks))
    return np.concatenate(parts, axis=-1)


@dataclass(frozen=True)
class SolutionField:
    grid: Grid
    u: np.ndarray
    z: np.ndarray
    excluded: np.ndarray          # boolean mask, True where tau hit the cancellation floor
    imag_ratio: float = 0.0       # max |imag| / max |value| over u and z

    @property
    def excluded_indices(self) -> set[tuple[int, int]]:
        return {tuple(int(v) for v in ij) for ij in np.argwhere(self.excluded)}


def _check_excluded(mask: np.ndarray) -> None:
    if mask.mean() > EXCLUDED_LIMIT:
        raise EmptyField(f"{mask.mean():.0%} of grid points below the cancellation floor")


def fields(tau: ExpSum, grid: Grid) -> SolutionField:
    """z = d_x log tau and u = d_x^2 log tau on the grid."""
    W = grid_partials(tau, grid, 2, 0)
    mask = np.isnan(W[2, 0])
    _check_excluded(mask)
    z, u = W[1, 0], W[2, 0]
    ratio = 0.0
    for a in (u, z):
        ok = a[~mask]
        big = float(np.abs(ok).max()) if ok.size else 0.0
        if big > 0:
            ratio = max(ratio, float(np.abs(ok.imag).max()) / big)
    return SolutionField(grid, u.real.copy(), z.real.copy(), mask, ratio)


# --- PDE residuals ---------------------------------------------------------
# Each equation is a list of monomials (coefficient, [W indices]).  The outer
# d_x of the bSK/bKK forms is expanded by the product rule.

def _sk_family(w3w4: float):
    return [(9, [(2, 1)]), (45, [(2, 0), (2, 0), (3, 0)]), (1, [(7, 0)]),
            (15, [(2, 0), (5, 0)]), (w3w4, [(3, 0), (4, 0)])]


def _bsk_family(w3w4: float):
    return [(1, [(7, 0)]), (w3w4, [(3, 0), (4, 0)]), (15, [(2, 0), (5, 0)]),
            (45, [(2, 0), (2, 0), (3, 0)]), (-15, [(3, 0), (1, 1)]), (-15, [(2, 0), (2, 1)]),
            (-5, [(4, 1)]), (-5, [(1, 2)])]


EQUATIONS = {
    # (z5x + 15 z_x z_3x + 15 z_x^3 - 15 z_x z_t - 5 z_xxt)_x - 5 z_tt
    "bSK": _bsk_family(15),
    # as bSK plus 45/4 z_xx^2 inside the bracket
    "bKK": _bsk_family(15 + 22.5),
    # -8 z_tt + z_6x - 2 z_xxxt + 18 z_x z_4x + 36 z_xx z_xxx + 72 z_x^2 z_xx
    "bSH": [(-8, [(1, 2)]), (1, [(7, 0)]), (-2, [(4, 1)]), (18, [(2, 0), (5, 0)]),
            (36, [(3, 0), (4, 0)]), (72, [(2, 0), (2, 0), (3, 0)])],
    # 9 u_t + 45 u^2 u_x + u_5x + 15 u u_xxx + 15 u_x u_xx
    "SK": _sk_family(15),
    # same with 75/2 u_x u_xx
    "KK": _sk_family(37.5),
}


def residual_summands(W: np.ndarray, equation: str) -> np.ndarray:
    """Stack of the residual's monomials evaluated from ``W`` (indexed [a, b, ...])."""
    if equation not in EQUATIONS:
        raise ValueError(f"unknown equation {equation!r}; choose from {sorted(EQUATIONS)}")
    out = []
    for coef, factors in EQUATIONS[equation]:
        term = coef * np.ones_like(W[0, 0])
        for a, b in factors:
            term = term * W[a, b]
        out.append(term)
    return np.stack(out)


@dataclass(frozen=True)
class ResidualReport:
    equation: str
    max_rel_residual: float
    scale: float
    per_point: np.ndarray | None = None

    def __post_init__(self):
        if not self.max_rel_residual >= 0:
            raise ValueError("max_rel_residual must be nonnegative")


def residual(tau: ExpSum, equation: str, grid: Grid, *, per_point=False,
             floor: float = RESIDUAL_FLOOR) -> ResidualReport:
    """Relative residual of ``equation`` for u = d_x^2 log tau.

    At each point the summed residual is divided by the largest summand
    there, but never by less than ``floor`` times the largest summand on the
    whole grid: in the far tails every summand is roundoff-sized and a purely
    local ratio would compare noise with noise.
    """
    if equation not in EQUATIONS:
        raise ValueError(f"unknown equation {equation!r}; choose from {sorted(EQUATIONS)}")
    W = grid_partials(tau, grid, 7, 2)
    mask = np.isnan(W[2, 0])
    _check_excluded(mask)
    terms = residual_summands(W, equation)
    res = np.abs(terms.sum(axis=0))
    local = np.abs(terms).max(axis=0)
    scale = float(np.nanmax(local)) if np.any(~mask) else 0.0
    if scale == 0.0:
        rel = np.zeros(mask.shape)
    else:
        with np.errstate(invalid="ignore", divide="ignore"):
            rel = res / np.maximum(local, floor * scale)
    rel = np.where(mask, np.nan, rel)
    worst = float(np.nanmax(rel)) if np.any(~mask) else 0.0
    return ResidualReport(equation, worst, scale, rel if per_point else None)


# --- peaks and velocities --------------------------------------------------

def _column(field: SolutionField, t: float) -> np.ndarray:
    ts = field.grid.t
    if not ts[0] - 1e-12 <= t <= ts[-1] + 1e-12:
        raise ValueError(f"t = {t} outside the grid")
    return field.u[:, int(np.argmin(np.abs(ts - t)))]


def _peak_indices(u: np.ndarray, rel_floor: float = PEAK_FLOOR) -> list[int]:
    """Strict interior local maxima above the floor; a plateau run counts once (its middle)."""
    u = np.where(np.isnan(u), -np.inf, u)
    top = float(np.abs(u[np.isfinite(u)]).max()) if np.isfinite(u).any() else 0.0
    # collapse runs of equal values
    starts = np.flatnonzero(np.r_[True, u[1:] != u[:-1]])
    ends = np.r_[starts[1:], len(u)] - 1
    vals = u[starts]
    peaks = []
    for j in range(1, len(vals) - 1):
        if vals[j] > vals[j - 1] and vals[j] > vals[j + 1] and vals[j] > rel_floor * top:
            peaks.append(int((starts[j] + ends[j]) // 2))
    return peaks


def count_peaks(field: SolutionField, t: float) -> int:
    """Number of local maxima of u(., t) above 1e-6 max|u|."""
    return len(_peak_indices(_column(field, t)))


def _refine(x: np.ndarray, u: np.ndarray, i: int) -> float:
    """Vertex of the parabola through the three samples around index i."""
    if i <= 0 or i >= len(u) - 1:
        return float(x[i])
    y0, y1, y2 = u[i - 1], u[i], u[i + 1]
    den = y0 - 2 * y1 + y2
    if den == 0:
        return float(x[i])
    return float(x[i] + 0.5 * (y0 - y2) / den * (x[1] - x[0]))


def _u_line(tau: ExpSum, x: np.ndarray, t: float) -> np.ndarray:
    W = log_partials(tau, x, np.full_like(x, t), 2, 0, strict=False)
    return W[2, 0].real


def _position(tau: ExpSum, x: np.ndarray, t: float, near: float | None = None) -> float:
    u = _u_line(tau, x, t)
    peaks = _peak_indices(u)
    if not peaks:
        raise AmbiguousTrack(f"no peak in the window at t = {t}")
    locs = [_refine(x, u, i) for i in peaks]
    if near is not None:
        return min(locs, key=lambda v: abs(v - near))
    if len(locs) > 2:
        raise AmbiguousTrack(f"{len(locs)} peaks at t = {t}; not a single soliton")
    return 0.5 * (locs[0] + locs[-1])


def measure_velocity(spec: SolutionSpec, t0: float, t1: float, *, half_width: float = 40.0) -> float:
    """Velocity of a single-channel wave, tracked through u's maxima.

    Solitons: the argmax (midpoint of the two maxima for two-peak profiles) is
    located at t0 and t1.  Periodic waves: one crest is followed in small time
    steps so it is never confused with its neighbours.
    """
    if len(spec.params) != 1:
        raise AmbiguousTrack("velocity tracking needs a single-channel solution")
    if t0 == t1:
        raise ValueError("t0 and t1 must differ")
    p = spec.params[0]
    tau = tau_closed(spec).physical
    dx = 0.005 / p.k
    if spec.mode is Mode.PERIODIC1:
        wavelength = math.pi / (p.k * p.eps.sin())
        x = np.arange(-2 * wavelength, 2 * wavelength + dx / 2, dx)
        pos = start = _position(tau, x, t0, near=0.0)
        t, remaining = t0, t1 - t0
        step = math.copysign(min(abs(remaining), 0.01), remaining)
        while abs(t1 - t) > 1e-15:
            dt = step if abs(t1 - t) > abs(step) else t1 - t
            new = _position(tau, x + pos, t + dt, near=pos)
            if abs(new - pos) > wavelength / 4:
                step /= 2
                if abs(step) < 1e-9:
                    raise AmbiguousTrack("crest moved too fast to track")
                continue
            pos, t = new, t + dt
        return (pos - start) / (t1 - t0)
    x = np.arange(-half_width, half_width + dx / 2, dx)
    return (_position(tau, x, t1) - _position(tau, x, t0)) / (t1 - t0)


# --- export ----------------------------------------------------------------

def _fmt(v: float) -> str:
    return format(float(v), ".17g")


def export_csv(field: SolutionField, path) -> None:
    """Write x,t,u,z rows, t in the outer loop; excluded points get empty u and z."""
    xs, ts = field.grid.x, field.grid.t
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["x", "t", "u", "z"])
        for j, t in enumerate(ts):
            for i, x in enumerate(xs):
                if field.excluded[i, j]:
                    w.writerow([_fmt(x), _fmt(t), "", ""])
                else:
                    w.writerow([_fmt(x), _fmt(t), _fmt(field.u[i, j]), _fmt(field.z[i, j])])
