"""Generating functions phi = A e^{p x + p^m t} + B e^{q x + q^m t}.

These solve the zero-background linear problem d^n phi/dx^n = lambda phi,
d phi/dt = d^m phi/dx^m whenever the root pair is admissible for n.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .expsum import ExpSum, diff, evaluate
from .spectral import Convention, RootPair

EIGEN_TOL = 1e-12


@dataclass(frozen=True)
class SpectralParam:
    pair: RootPair
    A: complex = 1.0
    B: complex = 1.0
    m: int = 3

    def __post_init__(self):
        if self.A == 0:
            raise ValueError("A must be nonzero")
        if self.m not in (3, 5):
            raise ValueError("m must be 3 or 5")


def _root_power(pair: RootPair, which: str, power: int) -> complex:
    """p**power or q**power from exact trigonometric values of power*eps."""
    kp = pair.k ** power
    c, s = pair.eps.cos(power), pair.eps.sin(power)
    if which == "p":
        return kp * complex(c, s)
    sign = (-1) ** power if pair.convention is Convention.MIRROR_NEG else 1
    return sign * kp * complex(c, -s)


@dataclass(frozen=True)
class GeneratingFunction:
    sum: ExpSum
    source: SpectralParam

    @property
    def p(self) -> complex:
        return self.source.pair.p

    @property
    def q(self) -> complex:
        return self.source.pair.q

    def __call__(self, x, t=0.0):
        return evaluate(self.sum, x, t)


def build_phi(param: SpectralParam) -> GeneratingFunction:
    pair, m = param.pair, param.m
    coeff = [param.A, param.B]
    fx = [_root_power(pair, "p", 1), _root_power(pair, "q", 1)]
    ft = [_root_power(pair, "p", m), _root_power(pair, "q", m)]
    if param.B == 0:
        coeff, fx, ft = coeff[:1], fx[:1], ft[:1]
    return GeneratingFunction(ExpSum(coeff, fx, ft), param)


class EigenCheck(NamedTuple):
    lam: complex | None
    ok: bool


def _vanishes(s: ExpSum, scale_: float) -> bool:
    return s.is_zero() or float(np.abs(s.coeff).max()) <= EIGEN_TOL * scale_


def verify_linear_ode(phi: GeneratingFunction, n: int) -> EigenCheck:
    """Check d^n phi/dx^n = lambda phi and d phi/dt = d^m phi/dx^m coefficient-wise."""
    pair, m = phi.source.pair, phi.source.m
    amp = float(np.abs(phi.sum.coeff).max())
    flow_ok = _vanishes(diff(phi.sum, 0, 1) - diff(phi.sum, m, 0), amp * pair.k ** m)
    lam = _root_power(pair, "p", n)
    single = len(phi.sum) == 1
    roots_ok = single or abs(lam - _root_power(pair, "q", n)) <= EIGEN_TOL * pair.k ** n
    # d^n/dx^n acts on each term as multiplication by fx^n (n may exceed diff's cap)
    eig_res = phi.sum.coeff * (phi.sum.fx ** n - lam)
    eig_ok = roots_ok and float(np.abs(eig_res).max()) <= EIGEN_TOL * amp * pair.k ** n
    ok = bool(flow_ok and eig_ok)
    return EigenCheck(lam if ok else None, ok)
