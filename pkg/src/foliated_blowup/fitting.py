"""Fitting ideals, invariance, tangency chains and differential closure.

All Fitting ideals use the generator convention: the k x k minors of the
matrix ``[X_i(f_j)]`` built from the chosen generators of the distribution
(rows) and of the ideal (columns).  Comparisons are always made after
adding the ideal itself, where the convention agrees with the definition
over all elements.
"""

from __future__ import annotations

from itertools import combinations
from typing import List, Optional, Sequence

from .algebra import AlgebraError, Polynomial
from .derivations import DistributionGens, _as_gens, apply_derivation
from .groebner import Ideal, contains, contains_ideal, ideal_equal, ideal_quotient, is_unit_ideal

DEFAULT_MAX_STEPS = 32


class ChainNotStabilized(AlgebraError):
    pass


def determinant(m):
    """Laplace expansion; works for any commutative ring elements."""
    n = len(m)
    if n == 0:
        raise ValueError("empty matrix")
    if n == 1:
        return m[0][0]
    if n == 2:
        return m[0][0] * m[1][1] - m[0][1] * m[1][0]
    total = None
    for j in range(n):
        if _is_zero(m[0][j]):
            continue
        minor = [row[:j] + row[j + 1:] for row in m[1:]]
        term = m[0][j] * determinant(minor)
        if j % 2:
            term = -term
        total = term if total is None else total + term
    return total if total is not None else m[0][0] * 0


def _is_zero(v) -> bool:
    return v.is_zero()


def all_minors(matrix, k: int) -> List:
    rows = len(matrix)
    cols = len(matrix[0]) if rows else 0
    if k < 1 or k > rows or k > cols:
        return []
    out = []
    for rs in combinations(range(rows), k):
        for cs in combinations(range(cols), k):
            out.append(determinant([[matrix[r][c] for c in cs] for r in rs]))
    return out


def jacobian(theta, generators: Sequence[Polynomial]):
    theta = _as_gens(theta)
    return [[apply_derivation(X, f) for f in generators] for X in theta.gens]


def fitting_ideal(theta, I: Ideal, k: int) -> Ideal:
    """Ideal of all k x k minors of [X_i(f_j)]; the zero ideal when k is too large."""
    if k < 1:
        raise ValueError("k must be positive")
    minors = all_minors(jacobian(theta, I.generators), k)
    return Ideal(I.ring, [m for m in minors if not m.is_zero()])


def gamma_plus(theta, I: Ideal, k: int) -> Ideal:
    """fitting_ideal(theta, I, k) + I, the form used in every comparison."""
    return fitting_ideal(theta, I, k) + I


def is_invariant(theta, I: Ideal) -> bool:
    theta = _as_gens(theta)
    return all(contains(I, apply_derivation(X, f)) for X in theta.gens for f in I.generators)


def is_totally_transverse(theta, I: Ideal) -> bool:
    theta = _as_gens(theta)
    return is_unit_ideal(fitting_ideal(theta, I, theta.d) + I)


def satisfies_regularity_criterion(theta, point) -> bool:
    """Unit test of Fitting_d(theta, m_p) + m_p at a rational point."""
    theta = _as_gens(theta)
    m = Ideal.maximal(theta.ring, point)
    return is_unit_ideal(fitting_ideal(theta, m, theta.d) + m)


def theta_image(theta, I: Ideal) -> List[Polynomial]:
    theta = _as_gens(theta)
    return [apply_derivation(X, f) for X in theta.gens for f in I.generators]


class TangencyChain:
    """H_0 = I, H_{i+1} = H_i + theta[H_i] until two consecutive ideals agree."""

    def __init__(self, theta: DistributionGens, ideals: List[Ideal], index: int, stabilized: bool):
        self.theta = theta
        self.ideals = ideals
        self.index = index
        self.stabilized = stabilized

    def __len__(self):
        return len(self.ideals)

    def H(self, i: int) -> Ideal:
        if i < len(self.ideals):
            return self.ideals[i]
        if not self.stabilized:
            raise ChainNotStabilized(f"chain not computed up to step {i}")
        return self.ideals[-1]

    @property
    def closure(self) -> Ideal:
        if not self.stabilized:
            raise ChainNotStabilized("tangency chain did not stabilize")
        return self.ideals[self.index]

    def check_monotone(self) -> bool:
        return all(contains_ideal(b, a) for a, b in zip(self.ideals, self.ideals[1:]))

    def __repr__(self):
        return f"TangencyChain({[str(I) for I in self.ideals]}, index={self.index}, stabilized={self.stabilized})"


def tangency_chain(theta, I: Ideal, max_steps: int = DEFAULT_MAX_STEPS) -> TangencyChain:
    if max_steps < 1:
        raise ValueError("max_steps must be at least 1")
    theta = _as_gens(theta)
    ideals = [Ideal(I.ring, I.basis())]
    for step in range(max_steps):
        cur = ideals[-1]
        if is_unit_ideal(cur):
            nxt = Ideal.unit(I.ring)
        else:
            nxt = Ideal(I.ring, (cur + Ideal(I.ring, theta_image(theta, cur))).basis())
        ideals.append(nxt)
        if ideal_equal(cur, nxt):
            return TangencyChain(theta, ideals, step, True)
    return TangencyChain(theta, ideals, len(ideals) - 1, False)


class TgInvariant:
    __slots__ = ("nu", "type")

    def __init__(self, nu: int, type_: int):
        if type_ not in (1, 2):
            raise ValueError("type must be 1 or 2")
        self.nu = nu
        self.type = type_

    def as_tuple(self):
        return (self.nu, self.type)

    def __eq__(self, other):
        if isinstance(other, tuple):
            return self.as_tuple() == other
        return isinstance(other, TgInvariant) and self.as_tuple() == other.as_tuple()

    def __lt__(self, other):
        return self.as_tuple() < other.as_tuple()

    def __hash__(self):
        return hash(self.as_tuple())

    def __repr__(self):
        return f"TgInvariant(nu={self.nu}, type={self.type})"


def locally_equal_steps(chain: TangencyChain, point) -> List[bool]:
    """For each step j < index: does H_j equal H_{j+1} near the point?"""
    out = []
    for j in range(chain.index):
        q = ideal_quotient(chain.ideals[j], chain.ideals[j + 1])
        out.append(not q.vanishes_at(point))
    return out


def tg_invariant_at_point(chain: TangencyChain, point) -> TgInvariant:
    if not chain.stabilized:
        raise ChainNotStabilized("tg-invariant needs a stabilized chain")
    steps = locally_equal_steps(chain, point)
    nu = chain.index
    while nu > 0 and steps[nu - 1]:
        nu -= 1
    type_ = 2 if chain.ideals[nu].vanishes_at(point) else 1
    return TgInvariant(nu, type_)


def tg_invariant(theta, I: Ideal, point, max_steps: int = DEFAULT_MAX_STEPS) -> TgInvariant:
    return tg_invariant_at_point(tangency_chain(theta, I, max_steps), point)


def differential_closure(theta, I: Ideal, max_steps: int = DEFAULT_MAX_STEPS) -> Ideal:
    chain = tangency_chain(theta, I, max_steps)
    if not chain.stabilized:
        raise ChainNotStabilized(f"tangency chain did not stabilize within {max_steps} steps")
    return chain.closure


def maximal_tangency_ideal(chain: TangencyChain, point) -> Optional[Ideal]:
    """H_{nu-1} at the point for type-1 chains with nu >= 1, else None."""
    inv = tg_invariant_at_point(chain, point)
    if inv.type != 1 or inv.nu == 0:
        return None
    return chain.ideals[inv.nu - 1]
