"""Exact algebra of finite exponential sums.

An :class:`ExpSum` is a finite sum ``sum_j c_j * exp(fx_j * x + ft_j * t)``
with complex ``c_j``, ``fx_j`` and ``ft_j``.  Products, derivatives and
x-antiderivatives stay inside the class, so every tau function and every
derivative used downstream is computed without discretisation error.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import comb
from typing import Iterable

import numpy as np

MERGE_TOL = 1e-12
CANCEL_TOL = 1e-13
CANCELLATION_FLOOR = 1e-10
OVERFLOW_EXPONENT = 700.0
MAX_DIFF_ORDER = 8


class ZeroFrequencyTerm(ValueError):
    """A term constant in x cannot be integrated with zero constant."""


class ExpOverflow(OverflowError):
    """An exponent's real part exceeds the safe range."""


class NearZeroTau(ArithmeticError):
    """tau is below the cancellation floor at some evaluation point.

    ``mask`` marks the offending points when raised from a vectorised call.
    """

    def __init__(self, msg, mask=None):
        super().__init__(msg)
        self.mask = mask


@dataclass(frozen=True)
class ExpTerm:
    coeff: complex
    fx: complex
    ft: complex = 0j


def _as_c(a) -> np.ndarray:
    return np.atleast_1d(np.asarray(a, dtype=complex))


def _normalize(c, fx, ft, absmag=None):
    """Merge like frequencies and drop terms that cancelled."""
    if absmag is None:
        absmag = np.abs(c)
    n = len(c)
    if n == 0:
        return c, fx, ft
    order = np.lexsort((ft.imag, ft.real, fx.imag, fx.real))
    c, fx, ft, absmag = c[order], fx[order], ft[order], absmag[order]
    taken = np.zeros(n, dtype=bool)
    out_c, out_fx, out_ft = [], [], []
    for i in range(n):
        if taken[i]:
            continue
        d_fx = fx - fx[i]
        d_ft = ft - ft[i]
        group = (
            ~taken
            & (np.abs(d_fx.real) <= MERGE_TOL)
            & (np.abs(d_fx.imag) <= MERGE_TOL)
            & (np.abs(d_ft.real) <= MERGE_TOL)
            & (np.abs(d_ft.imag) <= MERGE_TOL)
        )
        taken |= group
        total = c[group].sum()
        scale = absmag[group].sum()
        if total == 0 or abs(total) <= CANCEL_TOL * scale:
            continue
        out_c.append(total)
        out_fx.append(fx[i])
        out_ft.append(ft[i])
    return (
        np.array(out_c, dtype=complex),
        np.array(out_fx, dtype=complex),
        np.array(out_ft, dtype=complex),
    )


class ExpSum:
    """Immutable finite sum of complex exponentials in (x, t).

    Like-frequency terms (within ``MERGE_TOL`` per component) are merged on
    construction and terms whose coefficients cancelled are dropped, so the
    empty sum is the zero function.
    """

    __slots__ = ("coeff", "fx", "ft")

    def __init__(self, coeff=(), fx=(), ft=None, *, _absmag=None, _normalized=False):
        c = _as_c(coeff) if len(np.atleast_1d(coeff)) else np.zeros(0, complex)
        fxa = _as_c(fx) if len(c) else np.zeros(0, complex)
        fta = np.zeros_like(fxa) if ft is None else (_as_c(ft) if len(c) else np.zeros(0, complex))
        if not (len(c) == len(fxa) == len(fta)):
            raise ValueError("coeff, fx and ft must have equal length")
        if not (np.all(np.isfinite(c)) and np.all(np.isfinite(fxa)) and np.all(np.isfinite(fta))):
            raise ValueError("ExpSum values must be finite")
        if not _normalized:
            c, fxa, fta = _normalize(c, fxa, fta, _absmag)
        for arr in (c, fxa, fta):
            arr.setflags(write=False)
        object.__setattr__(self, "coeff", c)
        object.__setattr__(self, "fx", fxa)
        object.__setattr__(self, "ft", fta)

    def __setattr__(self, name, value):
        raise AttributeError("ExpSum is immutable")

    # construction helpers
    @classmethod
    def zero(cls) -> ExpSum:
        return cls()

    @classmethod
    def const(cls, c) -> ExpSum:
        return cls([c], [0j], [0j])

    @classmethod
    def exp(cls, fx, ft=0j, coeff=1.0) -> ExpSum:
        return cls([coeff], [fx], [ft])

    @classmethod
    def from_terms(cls, terms: Iterable[ExpTerm]) -> ExpSum:
        terms = list(terms)
        return cls(
            [tm.coeff for tm in terms], [tm.fx for tm in terms], [tm.ft for tm in terms]
        )

    @property
    def terms(self) -> list[ExpTerm]:
        return [ExpTerm(complex(c), complex(a), complex(b))
                for c, a, b in zip(self.coeff, self.fx, self.ft)]

    def __len__(self):
        return len(self.coeff)

    def is_zero(self) -> bool:
        return len(self.coeff) == 0

    def __repr__(self):
        body = " + ".join(
            f"({c:.6g})e^[({a:.6g})x+({b:.6g})t]" for c, a, b in zip(self.coeff, self.fx, self.ft)
        )
        return f"ExpSum({body or '0'})"

    # ring operations
    def __add__(self, other) -> ExpSum:
        other = _lift(other)
        if other is NotImplemented:
            return other
        return add(self, other)

    __radd__ = __add__

    def __neg__(self) -> ExpSum:
        return ExpSum(-self.coeff, self.fx, self.ft, _normalized=True)

    def __sub__(self, other) -> ExpSum:
        other = _lift(other)
        if other is NotImplemented:
            return other
        return add(self, -other)

    def __rsub__(self, other) -> ExpSum:
        return _lift(other) - self

    def __mul__(self, other) -> ExpSum:
        if isinstance(other, (int, float, complex, np.number)):
            return scale(self, other)
        if isinstance(other, ExpSum):
            return mul(self, other)
        return NotImplemented

    __rmul__ = __mul__

    def __truediv__(self, other) -> ExpSum:
        if isinstance(other, (int, float, complex, np.number)):
            return scale(self, 1.0 / other)
        return NotImplemented

    def conj(self) -> ExpSum:
        return conj(self)

    def allclose(self, other: ExpSum, rtol=1e-12, atol=0.0) -> bool:
        """Coefficient-level comparison after aligning frequencies."""
        diff = add(self, -other)
        if diff.is_zero():
            return True
        ref = max(np.abs(self.coeff).max(initial=0.0), np.abs(other.coeff).max(initial=0.0))
        return bool(np.abs(diff.coeff).max() <= atol + rtol * ref)


def _lift(v):
    if isinstance(v, ExpSum):
        return v
    if isinstance(v, (int, float, complex, np.number)):
        return ExpSum.const(v) if v != 0 else ExpSum()
    return NotImplemented


def add(a: ExpSum, b: ExpSum) -> ExpSum:
    c = np.concatenate([a.coeff, b.coeff])
    return ExpSum(c, np.concatenate([a.fx, b.fx]), np.concatenate([a.ft, b.ft]))


def scale(a: ExpSum, c) -> ExpSum:
    if c == 0:
        return ExpSum()
    return ExpSum(a.coeff * c, a.fx, a.ft, _normalized=True)


def mul(a: ExpSum, b: ExpSum) -> ExpSum:
    if a.is_zero() or b.is_zero():
        return ExpSum()
    c = np.multiply.outer(a.coeff, b.coeff).ravel()
    fx = np.add.outer(a.fx, b.fx).ravel()
    ft = np.add.outer(a.ft, b.ft).ravel()
    return ExpSum(c, fx, ft, _absmag=np.abs(c))


def conj(a: ExpSum) -> ExpSum:
    return ExpSum(a.coeff.conj(), a.fx.conj(), a.ft.conj())


def diff(a: ExpSum, order_x: int = 1, order_t: int = 0) -> ExpSum:
    if order_x < 0 or order_t < 0:
        raise ValueError("derivative orders must be non-negative")
    if order_x + order_t > MAX_DIFF_ORDER:
        raise ValueError(f"total derivative order above {MAX_DIFF_ORDER}")
    c = a.coeff * a.fx**order_x * a.ft**order_t
    return ExpSum(c, a.fx, a.ft, _absmag=np.abs(c))


def integrate_x(a: ExpSum) -> ExpSum:
    """x-antiderivative with integration constant zero."""
    if np.any(np.abs(a.fx) <= MERGE_TOL):
        raise ZeroFrequencyTerm("term constant in x has no exponential antiderivative")
    return ExpSum(a.coeff / a.fx, a.fx, a.ft, _normalized=True)


def _exponents(a: ExpSum, x, t):
    x = np.asarray(x, dtype=float)
    t = np.asarray(t, dtype=float)
    x, t = np.broadcast_arrays(x, t)
    e = np.multiply.outer(x, a.fx) + np.multiply.outer(t, a.ft)
    return x.shape, e


def evaluate(a: ExpSum, x, t=0.0):
    """Evaluate at real (x, t); scalars in, complex scalar out; arrays broadcast."""
    shape, e = _exponents(a, x, t)
    if np.any(np.abs(e.real) > OVERFLOW_EXPONENT):
        raise ExpOverflow("exponent real part beyond +-700; grid outside safe range")
    val = (np.exp(e) * a.coeff).sum(axis=-1)
    return complex(val) if shape == () else val


def term_magnitude(a: ExpSum, x, t=0.0):
    """Sum of |term| at (x, t): the scale against which cancellation is judged."""
    shape, e = _exponents(a, x, t)
    mag = (np.exp(e.real) * np.abs(a.coeff)).sum(axis=-1)
    return float(mag) if shape == () else mag


def _scaled_derivatives(a: ExpSum, x, t, max_x, max_t):
    """tau derivatives at points, all divided by the largest term magnitude.

    The common positive factor cancels from every log-derivative, which keeps
    the evaluation free of overflow when exponents are large.
    """
    shape, e = _exponents(a, x, t)
    shift = e.real.max(axis=-1, keepdims=True)
    base = np.exp(e - shift) * a.coeff
    mag = np.abs(base).sum(axis=-1)
    # every derivative is the same weighted sum with weights fx^i ft^j: one matmul
    px = a.fx[None, :] ** np.arange(max_x + 1)[:, None]
    pt = a.ft[None, :] ** np.arange(max_t + 1)[:, None]
    weights = (px[:, None, :] * pt[None, :, :]).reshape(-1, len(a.fx))
    d = base @ weights.T
    d = np.moveaxis(d, -1, 0).reshape((max_x + 1, max_t + 1) + shape)
    return d, mag


def log_partials_from_derivatives(d: np.ndarray) -> np.ndarray:
    """w = log(tau) partials from tau partials ``d[a, b] = d^{a+b} tau / dx^a dt^b``.

    Uses the Leibniz identity applied to tau_x = tau * w_x (and tau_t = tau *
    w_t for the pure-t column), solved order by order.  Entry [0, 0] is left
    as 0; it is not a derivative.
    """
    max_x, max_t = d.shape[0] - 1, d.shape[1] - 1
    r = d / d[0, 0]
    w = np.zeros_like(r)
    extra = (None,) * (d.ndim - 2)
    for total in range(1, max_x + max_t + 1):
        for a in range(min(total, max_x), -1, -1):
            b = total - a
            if b > max_t:
                continue
            if a >= 1:
                # d^{a-1}_x d^b_t (tau w_x) = tau_{a,b}; the (a-1, b) term is w[a, b] itself
                c = np.array([[comb(a - 1, i) * comb(b, j) for j in range(b + 1)]
                              for i in range(a)], dtype=float)
                c[a - 1, b] = 0.0
                rr = r[a - 1::-1, b::-1] if a > 1 else r[:1, b::-1]
                w[a, b] = r[a, b] - (c[(...,) + extra] * w[1:a + 1, :b + 1] * rr).sum(axis=(0, 1))
            else:
                acc = r[0, b].copy()
                for j in range(b - 1):
                    acc -= comb(b - 1, j) * w[0, j + 1] * r[0, b - 1 - j]
                w[0, b] = acc
    w[0, 0] = 0
    return w


def log_partials(tau: ExpSum, x, t, max_x: int, max_t: int = 0, *, strict=True):
    """All partials of log(tau) up to ``(max_x, max_t)`` at (x, t).

    Returns an array indexed ``[a, b, *point_shape]``.  Raises
    :class:`NearZeroTau` where |tau| is below ``CANCELLATION_FLOOR`` times the
    sum of term magnitudes (``strict``); otherwise such points come back NaN.
    """
    if tau.is_zero():
        raise NearZeroTau("tau is identically zero")
    d, mag = _scaled_derivatives(tau, x, t, max_x, max_t)
    bad = np.abs(d[0, 0]) <= CANCELLATION_FLOOR * mag
    if np.any(bad):
        if strict:
            raise NearZeroTau("tau below the cancellation floor", mask=bad)
        d[0, 0] = np.where(bad, np.nan, d[0, 0])
    with np.errstate(invalid="ignore"):
        w = log_partials_from_derivatives(d)
    return w
