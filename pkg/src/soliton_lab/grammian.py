"""Determinant constructions of tau straight from generating functions.

This is the independent check on every closed form: build the phi's, form the
Grammian (or Wronskian, or the mixed 2+1 determinant) over the ExpSum ring and
expand it by the Leibniz formula.  Nothing here uses the closed-form
coefficient formulas, only the B/A ratios that pick the solution out of the
family.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from itertools import permutations
from typing import Sequence

from .expsum import ExpSum, diff, integrate_x
from .genfun import GeneratingFunction, SpectralParam, build_phi
from .spectral import Convention, RootPair
from .tauforms import Equation, Mode, SolutionSpec, ZERO_PHASE, channel_ratios, printed_set

MAX_ORDER = 3


class Scheme(str, Enum):
    BKP = "bkp"
    CKP_LIKE = "ckp-like"
    WRONSKIAN = "wronskian"
    MIXED_2_1 = "mixed-2-1"


def _sum(phi) -> ExpSum:
    return phi.sum if isinstance(phi, GeneratingFunction) else phi


def _perm_sign(perm) -> int:
    sign, seen = 1, set()
    for start in range(len(perm)):
        if start in seen:
            continue
        j, length = start, 0
        while j not in seen:
            seen.add(j)
            j = perm[j]
            length += 1
        if length % 2 == 0:
            sign = -sign
    return sign


@dataclass(frozen=True)
class GramMatrix:
    entries: tuple
    scheme: Scheme

    @property
    def size(self) -> int:
        return len(self.entries)

    def det(self) -> ExpSum:
        """Leibniz expansion: sum over permutations of signed entry products."""
        n = self.size
        out = ExpSum.zero()
        for perm in permutations(range(n)):
            term = ExpSum.const(_perm_sign(perm))
            for i, j in enumerate(perm):
                term = term * self.entries[i][j]
            out = out + term
        return out


def _check_order(phis) -> list[ExpSum]:
    sums = [_sum(p) for p in phis]
    if not 1 <= len(sums) <= MAX_ORDER:
        raise ValueError(f"determinant order must be between 1 and {MAX_ORDER}")
    return sums


def gram_matrix(scheme, phis: Sequence) -> GramMatrix:
    scheme = Scheme(scheme)
    f = _check_order(phis)
    n = len(f)
    if scheme is Scheme.BKP:
        # diagonal written in closed form: int phi phi_x = phi^2 / 2
        rows = [[0.5 * f[i] * f[i] if i == j else integrate_x(diff(f[j]) * f[i])
                 for j in range(n)] for i in range(n)]
    elif scheme is Scheme.CKP_LIKE:
        rows = [[integrate_x(f[j] * f[i]) for j in range(n)] for i in range(n)]
    elif scheme is Scheme.WRONSKIAN:
        rows = [[diff(f[j], i) if i else f[j] for j in range(n)] for i in range(n)]
    else:
        raise ValueError("use mixed_tau_2plus1 for the mixed scheme")
    return GramMatrix(tuple(tuple(r) for r in rows), scheme)


def gram_tau(scheme, phis: Sequence) -> ExpSum:
    """Grammian determinant with entries int phi_{j,x} phi_i (BKP) or int phi_j phi_i."""
    return gram_matrix(scheme, phis).det()


def wronskian_tau(phis: Sequence) -> ExpSum:
    """det[d^i phi_j / dx^i], i = 0..n-1."""
    return gram_matrix(Scheme.WRONSKIAN, phis).det()


def mixed_tau_2plus1(phi1, phi2, psi=None) -> ExpSum:
    """det[[int psi phi1, int psi phi2], [phi1, phi2]]: one integrated row, one plain row.

    ``psi`` defaults to ``phi2``.
    """
    f1, f2 = _sum(phi1), _sum(phi2)
    g = f2 if psi is None else _sum(psi)
    rows = ((integrate_x(g * f1), integrate_x(g * f2)), (f1, f2))
    return GramMatrix(rows, Scheme.MIXED_2_1).det()


_BKP_EQUATIONS = (Equation.BSK, Equation.SK, Equation.NBKP)


def collision_adjoint(phi1: GeneratingFunction, phi2: GeneratingFunction) -> ExpSum:
    """psi = phi2'' - k1^2 phi2, the adjoint function for the mixed collision determinant.

    After the Wronskian step with phi1 (eps = 0, so phi1'' = k1^2 phi1) the
    transformed adjoint function equals the transformed phi2 exactly for this
    choice, which is what keeps the bSH operator self-adjoint.
    """
    k1 = phi1.source.pair.k
    return diff(phi2.sum, 2) - k1 * k1 * phi2.sum


def spec_phis(spec: SolutionSpec, *, printed=False) -> list[GeneratingFunction]:
    """Generating functions of every channel, with the B/A ratios the closed form uses."""
    ratios = channel_ratios(spec, printed=printed)
    periodic = spec.mode in (Mode.PERIODIC1, Mode.PERIODIC2)
    conv = Convention.MIRROR_POS if periodic else Convention.MIRROR_NEG
    out = []
    for i, (p, r) in enumerate(zip(spec.params, ratios)):
        eps = p.eps
        if spec.mode in (Mode.LEFT1, Mode.LEFT2) or (spec.mode is Mode.COLLISION and i == 0):
            eps = ZERO_PHASE
        pair = RootPair(p.k, eps, conv)
        out.append(build_phi(SpectralParam(pair, p.A, p.A * r, spec.m)))
    return out


def oracle_tau(spec: SolutionSpec, *, printed=False) -> ExpSum:
    """tau from the determinant construction appropriate to the family.

    ``printed`` only matters for the collision: with the "collision-adjoint"
    key the published choice psi = phi2 (and its B/A ratios) is used.
    """
    printed = printed_set(printed)
    phis = spec_phis(spec, printed=printed)
    if spec.mode in (Mode.LEFT1, Mode.LEFT2):
        return wronskian_tau(phis)
    if spec.mode is Mode.COLLISION:
        if "collision-adjoint" in printed:
            return mixed_tau_2plus1(*phis)
        return mixed_tau_2plus1(*phis, psi=collision_adjoint(*phis))
    scheme = Scheme.BKP if spec.equation in _BKP_EQUATIONS else Scheme.CKP_LIKE
    return gram_tau(scheme, phis)
