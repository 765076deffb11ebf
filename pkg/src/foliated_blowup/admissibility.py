"""Admissibility of blowup centers, transverse/invariant splits and eigen-generators."""

from __future__ import annotations

from fractions import Fraction
from itertools import combinations
from typing import Dict, List, Optional, Tuple

from . import linalg
from .algebra import AlgebraError, PolyRing, Polynomial
from .derivations import (
    CoordinateChange,
    Derivation,
    DistributionGens,
    _as_gens,
    apply_derivation,
    check_monomial_basis,
    classify_generator,
)
from .fitting import determinant, fitting_ideal, is_invariant, jacobian
from .groebner import Ideal, contains, contains_ideal, ideal_quotient, is_unit_ideal

UNIT = "unit"
CONTAINED = "contained"
NEITHER = "neither"


class SplitNotConstructible(AlgebraError):
    """Admissible center whose split needs a change outside the linear class."""


class PreconditionError(AlgebraError):
    pass


class FittingRecord:
    __slots__ = ("k", "minors", "relation")

    def __init__(self, k: int, minors: Ideal, relation: str):
        self.k = k
        self.minors = minors
        self.relation = relation

    def as_dict(self):
        return {"k": self.k, "minors": [str(g) for g in self.minors.generators], "relation": self.relation}


class AdmissibilityReport:
    def __init__(self, d: int, records: List[FittingRecord], d0: int, admissible: bool,
                 witness: Optional[Tuple[int, Polynomial]] = None):
        self.d = d
        self.records = records
        self.d0 = d0
        self.admissible = admissible
        self.witness = witness

    @property
    def verdict(self) -> str:
        return "admissible" if self.admissible else "not-admissible"

    @property
    def invariant(self) -> bool:
        return self.admissible and self.d0 == 0

    @property
    def totally_transverse(self) -> bool:
        return self.admissible and self.d0 == self.d

    def record(self, k: int) -> FittingRecord:
        return self.records[k - 1]

    def as_dict(self):
        out = {
            "verdict": self.verdict,
            "d": self.d,
            "d0": self.d0,
            "records": [r.as_dict() for r in self.records],
            "semantics": "chart-global, localized by adding the center ideal",
        }
        if self.witness is not None:
            out["witness"] = {"k": self.witness[0], "minor": str(self.witness[1])}
        return out

    def __repr__(self):
        return f"AdmissibilityReport({self.verdict}, d0={self.d0})"


def classify_minors(minors: Ideal, I_C: Ideal) -> str:
    if is_unit_ideal(minors + I_C):
        return UNIT
    if contains_ideal(I_C, minors):
        return CONTAINED
    return NEITHER


def admissibility_report(theta, I_C: Ideal) -> AdmissibilityReport:
    theta = _as_gens(theta)
    records = []
    for k in range(1, theta.d + 1):
        M = fitting_ideal(theta, I_C, k)
        records.append(FittingRecord(k, M, classify_minors(M, I_C)))
    d0 = 0
    for r in records:
        if r.relation == UNIT:
            d0 = r.k
        else:
            break
    admissible = True
    witness = None
    for r in records[d0:]:
        if r.relation != CONTAINED:
            admissible = False
            bad = next(g for g in r.minors.generators if not contains(I_C, g))
            witness = (r.k, bad)
            break
    return AdmissibilityReport(theta.d, records, d0, admissible, witness)


class TransverseSplit:
    """Y: generators transverse to the center, Z: generators leaving it invariant."""

    def __init__(self, Y: List[Derivation], Z: List[Derivation], change: CoordinateChange,
                 functions: List[Polynomial]):
        self.Y = Y
        self.Z = Z
        self.change = change
        self.functions = functions

    def as_dict(self):
        return {
            "Y": [str(g) for g in self.Y],
            "Z": [str(g) for g in self.Z],
            "functions": [str(f) for f in self.functions],
            "change": self.change.describe(),
        }

    def __repr__(self):
        return f"TransverseSplit(Y={[str(g) for g in self.Y]}, Z={[str(g) for g in self.Z]})"


def _adjugate_inverse(A) -> Optional[List[List[Polynomial]]]:
    """Inverse of a square polynomial matrix with constant nonzero determinant."""
    n = len(A)
    det = determinant(A)
    if not det.is_constant() or det.is_zero():
        return None
    inv_det = 1 / det.constant_term()
    if n == 1:
        return [[A[0][0].ring.const(inv_det)]]
    inv = [[None] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            minor = [row[:j] + row[j + 1:] for k, row in enumerate(A) if k != i]
            cof = determinant(minor)
            if (i + j) % 2:
                cof = -cof
            inv[j][i] = cof * inv_det
    return inv


def _coordinate_change_for(ring: PolyRing, functions: List[Polynomial]) -> CoordinateChange:
    """Linear change sending the chosen functions to coordinates (identity if they already are)."""
    n = ring.ngens
    positions = []
    for f in functions:
        if f.is_monomial() and f.degree() == 1 and next(iter(f.terms.values())) == 1:
            positions.append(next(iter(f.support())))
        else:
            positions = None
            break
    if positions is not None and len(set(positions)) == len(positions):
        return CoordinateChange.identity(ring)
    forms: List[Optional[Polynomial]] = [None] * n
    rows = [f.linear_coefficients()[1] for f in functions]
    allowed = [[r[j] != 0 for j in range(n)] for r in rows]
    slots = linalg.perfect_matching(allowed)
    if slots is None:
        raise SplitNotConstructible("chosen functions are not independent linear forms")
    for f, s in zip(functions, slots):
        forms[s] = f
    for j in range(n):
        if forms[j] is None:
            forms[j] = ring.var(j)
    try:
        return CoordinateChange.from_forms(ring, ring, forms)
    except AlgebraError as exc:
        raise SplitNotConstructible(str(exc)) from None


def transverse_split(theta, I_C: Ideal, report: Optional[AdmissibilityReport] = None) -> TransverseSplit:
    theta = _as_gens(theta)
    ring = theta.ring
    report = report or admissibility_report(theta, I_C)
    if not report.admissible:
        raise PreconditionError("transverse split requested for a non-admissible center")
    d0 = report.d0
    gens = list(theta.gens)
    if d0 == 0:
        split = TransverseSplit([], gens, CoordinateChange.identity(ring), [])
        _verify_split(split, I_C)
        return split
    linear = [f for f in I_C.generators if f.degree() == 1]
    if len(linear) < d0:
        raise SplitNotConstructible("split not constructible under linear restriction: "
                                    "center generators are not linear")
    M = jacobian(theta, linear)
    fallback = None
    choice = None
    for rows in combinations(range(len(gens)), d0):
        for cols in combinations(range(len(linear)), d0):
            A = [[M[r][c] for c in cols] for r in rows]
            det = determinant(A)
            if det.is_constant() and not det.is_zero():
                choice = (rows, cols, A)
                break
            if fallback is None and is_unit_ideal(Ideal(ring, [det]) + I_C):
                fallback = (rows, cols, A)
        if choice:
            break
    rest_exists = len(gens) > d0
    if choice is None:
        if fallback is None:
            raise SplitNotConstructible("no unit minor among linear center generators")
        if rest_exists:
            raise SplitNotConstructible("split not constructible under linear restriction: "
                                        "transverse minor is not a constant")
        choice = fallback
    rows, cols, A = choice
    functions = [linear[c] for c in cols]
    Y = [gens[r] for r in rows]
    Z = []
    if rest_exists:
        Ainv = _adjugate_inverse(A)
        for j, X in enumerate(gens):
            if j in rows:
                continue
            v = [apply_derivation(X, f) for f in functions]
            g = [sum((v[b] * Ainv[b][a] for b in range(d0)), ring.zero) for a in range(d0)]
            Zj = X
            for a in range(d0):
                Zj = Zj - Y[a].scale(g[a])
            Z.append(Zj)
    split = TransverseSplit(Y, Z, _coordinate_change_for(ring, functions), functions)
    _verify_split(split, I_C)
    return split


def _verify_split(split: TransverseSplit, I_C: Ideal) -> None:
    for Zj in split.Z:
        for f in split.functions:
            if not apply_derivation(Zj, f).is_zero():
                raise SplitNotConstructible(f"{Zj} does not annihilate {f}")
    if split.Z and not is_invariant(DistributionGens(split.Z, 0 if all(z.is_zero() for z in split.Z) else None), I_C):
        raise SplitNotConstructible("center is not invariant under the invariant part")


# ---------------------------------------------------------------------------
# eigen-generators


def locally_contains(I: Ideal, f: Polynomial, point) -> bool:
    """f lies in I near the point: (I : f) does not vanish there."""
    if contains(I, f):
        return True
    return not ideal_quotient(I, Ideal(I.ring, [f])).vanishes_at(point)


def is_invariant_at(theta, I: Ideal, point) -> bool:
    theta = _as_gens(theta)
    return all(locally_contains(I, apply_derivation(X, f), point) for X in theta.gens for f in I.generators)


class EigenGenerators:
    """Output of invariant_generators with the weight of each generator per diagonal field."""

    def __init__(self, generators: List[Polynomial], weights: List[List[Fraction]], semantics: str):
        self.generators = generators
        self.weights = weights
        self.semantics = semantics

    def __iter__(self):
        return iter(self.generators)

    def __len__(self):
        return len(self.generators)


def invariant_generators(theta, I: Ideal, ring_tag: str = "Q") -> EigenGenerators:
    """Generators h with X(h) = 0 (coordinate partials) or X(h) = K h (diagonal fields)."""
    theta = _as_gens(theta)
    ring = I.ring
    check = check_monomial_basis(theta, ring_tag)
    if not check:
        raise PreconditionError(f"not an R-monomial basis: {check.message}")
    origin = [0] * ring.ngens
    if is_invariant(theta, I):
        semantics = "chart-global"
    elif is_invariant_at(theta, I, origin):
        semantics = "local at origin"
    else:
        raise PreconditionError("ideal is not invariant")
    partial_vars = []
    diagonal = []
    for g in theta.gens:
        kind, info = classify_generator(g, ring_tag)
        if kind == "partial":
            partial_vars.append(info)
        else:
            diagonal.append(info)

    def weight(e) -> Tuple[Fraction, ...]:
        return tuple(sum((a * k for a, k in zip(alphas, e)), Fraction(0)) for alphas in diagonal)

    out: List[Polynomial] = []
    seen = set()
    for f in I.generators:
        pieces: Dict[Tuple, Dict] = {}
        order: List[Tuple] = []
        for e, c in f.sorted_terms():
            beta = tuple(e[i] for i in partial_vars)
            rest = tuple(0 if i in partial_vars else k for i, k in enumerate(e))
            key = (beta, weight(rest))
            if key not in pieces:
                pieces[key] = {}
                order.append(key)
            pieces[key][rest] = c
        for key in order:
            h = Polynomial(ring, pieces[key]).monic()
            if h not in seen:
                seen.add(h)
                out.append(h)
    weights = [list(weight(next(iter(h.terms)))) for h in out]
    # verification of the contract
    for h in out:
        for X in theta.gens:
            kind, info = classify_generator(X, ring_tag)
            img = apply_derivation(X, h)
            if kind == "partial":
                if not img.is_zero():
                    raise AlgebraError(f"{X} does not annihilate {h}")
            else:
                k = weight(next(iter(h.terms)))[diagonal.index(info)]
                if img != h * k:
                    raise AlgebraError(f"{h} is not an eigenfunction of {X}")
    J = Ideal(ring, out)
    if semantics == "chart-global":
        ok = contains_ideal(J, I) and contains_ideal(I, J)
    else:
        ok = all(locally_contains(J, f, origin) for f in I.generators) and all(
            locally_contains(I, h, origin) for h in out)
    if not ok:
        raise AlgebraError("eigen-generators do not generate the input ideal")
    return EigenGenerators(out, weights, semantics)
