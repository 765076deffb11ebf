"""Gröbner bases for polynomial ideals and submodules of free modules.

The kernel works on plain dicts whose keys are *terms* ``(pos, exps)``:
``pos`` is the free-module position (always 0 for ring elements).  Module
terms are ordered position-over-term with lower positions larger, which
is what the syzygy and lifting routines rely on.

Buchberger's algorithm uses the sugar selection strategy, the coprime
leading-term criterion (ring case only) and the chain criterion.
"""

from __future__ import annotations

import threading
from fractions import Fraction
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from .algebra import AlgebraError, DimensionMismatch, NotDivisible, PolyRing, Polynomial, grevlex_key

Term = Tuple[int, Tuple[int, ...]]
KPoly = Dict[Term, Fraction]

# When true every freshly computed basis is re-checked by reducing all
# S-polynomials (the Buchberger certificate).  Tests switch it on.
CERTIFY = False
# number of bases that passed the certificate while CERTIFY was on
certified_count = 0


class MonomialOrder:
    """grevlex, lex, or a block order eliminating the first ``k`` variables."""

    __slots__ = ("kind", "k")

    def __init__(self, kind: str = "grevlex", k: int = 0):
        if kind not in ("grevlex", "lex", "elim"):
            raise ValueError(f"unknown monomial order {kind!r}")
        if kind == "elim" and k < 1:
            raise ValueError("elimination order needs k >= 1")
        self.kind = kind
        self.k = k if kind == "elim" else 0

    def key(self, exps):
        if self.kind == "grevlex":
            return grevlex_key(exps)
        if self.kind == "lex":
            return exps
        k = self.k
        return (grevlex_key(exps[:k]), grevlex_key(exps[k:]))

    def term_key(self, term: Term):
        return (-term[0], self.key(term[1]))

    def __eq__(self, other):
        return isinstance(other, MonomialOrder) and (self.kind, self.k) == (other.kind, other.k)

    def __hash__(self):
        return hash((self.kind, self.k))

    def __repr__(self):
        return f"MonomialOrder({self.kind!r}, {self.k})" if self.kind == "elim" else f"MonomialOrder({self.kind!r})"


GREVLEX = MonomialOrder("grevlex")
LEX = MonomialOrder("lex")


def elimination(k: int) -> MonomialOrder:
    return MonomialOrder("elim", k)


# ---------------------------------------------------------------------------
# kernel on term dicts


def _divides(a: Term, b: Term) -> bool:
    return a[0] == b[0] and all(x <= y for x, y in zip(a[1], b[1]))


def _lcm(a: Term, b: Term) -> Term:
    return (a[0], tuple(max(x, y) for x, y in zip(a[1], b[1])))


def _coprime(a: Term, b: Term) -> bool:
    return all(not (x and y) for x, y in zip(a[1], b[1]))


def _quo(a: Term, b: Term) -> Tuple[int, ...]:
    return tuple(x - y for x, y in zip(a[1], b[1]))


def _shift(p: KPoly, exps, coeff: Fraction) -> KPoly:
    return {(t[0], tuple(x + y for x, y in zip(t[1], exps))): c * coeff for t, c in p.items()}


def _lead(p: KPoly, key) -> Term:
    return max(p, key=key)


def _axpy(f: KPoly, g: KPoly, exps, coeff: Fraction) -> None:
    """f -= coeff * x^exps * g, in place."""
    for t, c in g.items():
        nt = (t[0], tuple(x + y for x, y in zip(t[1], exps)))
        v = f.get(nt, 0) - coeff * c
        if v:
            f[nt] = v
        else:
            f.pop(nt, None)


class _Reducer:
    """Reduction of term dicts modulo a list of basis elements."""

    def __init__(self, key):
        self.key = key
        self.items: List[Tuple[Term, Fraction, KPoly]] = []

    def add(self, p: KPoly):
        lt = _lead(p, self.key)
        self.items.append((lt, p[lt], p))

    def reduce(self, f: KPoly, full: bool = True, record=None) -> KPoly:
        """Normal form of ``f``.  With ``record`` (a dict index -> KPoly of
        exps->coeff quotients) the quotients are accumulated."""
        f = dict(f)
        rem: KPoly = {}
        key = self.key
        while f:
            t = max(f, key=key)
            c = f[t]
            for idx, (lt, lc, g) in enumerate(self.items):
                if _divides(lt, t):
                    q = c / lc
                    e = _quo(t, lt)
                    _axpy(f, g, e, q)
                    if record is not None:
                        bucket = record.setdefault(idx, {})
                        bucket[e] = bucket.get(e, 0) + q
                    break
            else:
                if not full:
                    rem.update(f)
                    return rem
                rem[t] = c
                del f[t]
        return rem


def _monic(p: KPoly, key) -> KPoly:
    lt = _lead(p, key)
    lc = p[lt]
    if lc == 1:
        return p
    inv = 1 / lc
    return {t: c * inv for t, c in p.items()}


def _sugar_of(p: KPoly) -> int:
    return max(sum(t[1]) for t in p)


def buchberger(polys: Iterable[KPoly], order: MonomialOrder, module: bool = False) -> List[KPoly]:
    """Reduced Gröbner basis of the given term dicts (monic, sorted descending)."""
    key = order.term_key
    basis: List[KPoly] = []
    leads: List[Term] = []
    sugars: List[int] = []
    pairs: Dict[Tuple[int, int], Tuple[int, Term]] = {}
    reducer = _Reducer(key)

    def insert(h: KPoly, sugar: int):
        # every element is kept until the end so the chain criterion stays sound
        h = _monic(h, key)
        lt = _lead(h, key)
        n = len(basis)
        for i in range(n):
            if leads[i][0] != lt[0]:
                continue
            lcm = _lcm(leads[i], lt)
            s = max(sugars[i] + sum(lcm[1]) - sum(leads[i][1]), sugar + sum(lcm[1]) - sum(lt[1]))
            pairs[(i, n)] = (s, lcm)
        basis.append(h)
        leads.append(lt)
        sugars.append(sugar)
        reducer.add(h)

    work = [dict(p) for p in polys if p]
    work.sort(key=lambda p: (_sugar_of(p), key(_lead(p, key))))
    for p in work:
        h = reducer.reduce(p)
        if h:
            insert(h, _sugar_of(p))

    while pairs:
        (i, j), (s, lcm) = min(pairs.items(), key=lambda kv: (kv[1][0], key(kv[1][1]), kv[0]))
        del pairs[(i, j)]
        if not module and _coprime(leads[i], leads[j]):
            continue
        # chain criterion
        skip = False
        for k in range(len(basis)):
            if k in (i, j) or leads[k][0] != lcm[0]:
                continue
            if _divides(leads[k], lcm):
                a, b = (min(i, k), max(i, k)), (min(j, k), max(j, k))
                if a not in pairs and b not in pairs:
                    skip = True
                    break
        if skip:
            continue
        spoly = _shift(basis[i], _quo(lcm, leads[i]), Fraction(1))
        _axpy(spoly, basis[j], _quo(lcm, leads[j]), Fraction(1))
        if not spoly:
            continue
        h = reducer.reduce(spoly)
        if h:
            insert(h, s)

    minimal = []
    for i, p in enumerate(basis):
        redundant = any(
            _divides(leads[k], leads[i]) and (leads[k] != leads[i] or k < i)
            for k in range(len(basis)) if k != i
        )
        if not redundant:
            minimal.append(p)
    return _interreduce(minimal, key)


def _interreduce(polys: List[KPoly], key) -> List[KPoly]:
    polys = sorted(polys, key=lambda p: key(_lead(p, key)))
    out = []
    for idx, p in enumerate(polys):
        r = _Reducer(key)
        for j, q in enumerate(polys):
            if j != idx:
                r.add(q)
        p = r.reduce(p)
        out.append(_monic(p, key))
    out.sort(key=lambda p: key(_lead(p, key)), reverse=True)
    return out


def spoly_certificate(basis: List[KPoly], order: MonomialOrder) -> bool:
    """True iff every S-polynomial of ``basis`` reduces to zero."""
    key = order.term_key
    red = _Reducer(key)
    for g in basis:
        red.add(g)
    leads = [it[0] for it in red.items]
    for i in range(len(basis)):
        for j in range(i + 1, len(basis)):
            if leads[i][0] != leads[j][0]:
                continue
            lcm = _lcm(leads[i], leads[j])
            s = _shift(basis[i], _quo(lcm, leads[i]), 1 / basis[i][leads[i]])
            _axpy(s, basis[j], _quo(lcm, leads[j]), 1 / basis[j][leads[j]])
            if s and red.reduce(s):
                return False
    return True


# ---------------------------------------------------------------------------
# conversion helpers


def _certify(basis: List[KPoly], order: MonomialOrder, message: str) -> None:
    global certified_count
    if not spoly_certificate(basis, order):
        raise AlgebraError(message)
    certified_count += 1


def _to_k(p: Polynomial, pos: int = 0) -> KPoly:
    return {(pos, e): c for e, c in p.terms.items()}


def _from_k(ring: PolyRing, p: KPoly, pos: int = 0) -> Polynomial:
    return Polynomial._raw(ring, {t[1]: c for t, c in p.items() if t[0] == pos})


def _vec_to_k(vec: Sequence[Polynomial], offset: int = 0) -> KPoly:
    out: KPoly = {}
    for i, p in enumerate(vec):
        for e, c in p.terms.items():
            out[(i + offset, e)] = c
    return out


def _vec_from_k(ring: PolyRing, p: KPoly, size: int, offset: int = 0) -> List[Polynomial]:
    parts: List[Dict] = [dict() for _ in range(size)]
    for t, c in p.items():
        i = t[0] - offset
        if 0 <= i < size:
            parts[i][t[1]] = c
    return [Polynomial._raw(ring, d) for d in parts]


# ---------------------------------------------------------------------------
# ideals


class GroebnerBasis:
    """Reduced Gröbner basis of an ideal with respect to ``order``."""

    def __init__(self, ring: PolyRing, elements: List[Polynomial], order: MonomialOrder):
        self.ring = ring
        self.elements = elements
        self.order = order
        self._reducer = _Reducer(order.term_key)
        for g in elements:
            self._reducer.add(_to_k(g))

    def __iter__(self):
        return iter(self.elements)

    def __len__(self):
        return len(self.elements)

    def reduce(self, f: Polynomial) -> Polynomial:
        if f.ring != self.ring:
            raise DimensionMismatch(f"ring mismatch: {f.ring} vs {self.ring}")
        return _from_k(self.ring, self._reducer.reduce(_to_k(f)))

    def is_unit(self) -> bool:
        return any(g.is_constant() and not g.is_zero() for g in self.elements)

    def leading_monomials(self):
        return [g.leading_term(self.order.key)[0] for g in self.elements]

    def certify(self) -> bool:
        return spoly_certificate([_to_k(g) for g in self.elements], self.order)

    def __repr__(self):
        return f"GroebnerBasis([{', '.join(map(str, self.elements))}], {self.order!r})"


class Ideal:
    """Finitely generated ideal; Gröbner bases are cached per monomial order."""

    def __init__(self, ring: PolyRing, generators: Iterable[Polynomial] = ()):
        gens = []
        for g in generators:
            if isinstance(g, (int, Fraction)):
                g = ring.const(g)
            if g.ring != ring:
                raise DimensionMismatch(f"generator {g} not in ring {ring}")
            if not g.is_zero():
                gens.append(g)
        self.ring = ring
        self.generators: Tuple[Polynomial, ...] = tuple(gens)
        self._cache: Dict[MonomialOrder, GroebnerBasis] = {}
        self._lock = threading.Lock()

    @classmethod
    def unit(cls, ring: PolyRing) -> "Ideal":
        return cls(ring, [ring.one])

    @classmethod
    def maximal(cls, ring: PolyRing, point) -> "Ideal":
        """Maximal ideal of a rational point."""
        if len(point) != ring.ngens:
            raise DimensionMismatch("point dimension does not match ring")
        return cls(ring, [ring.var(i) - Fraction(c) for i, c in enumerate(point)])

    def groebner(self, order: MonomialOrder = GREVLEX) -> GroebnerBasis:
        gb = self._cache.get(order)
        if gb is not None:
            return gb
        gb = groebner(self, order)
        with self._lock:
            # write-once: keep whichever basis landed first (they are identical)
            return self._cache.setdefault(order, gb)

    def basis(self) -> List[Polynomial]:
        return list(self.groebner().elements)

    def __add__(self, other: "Ideal") -> "Ideal":
        if isinstance(other, Polynomial):
            other = Ideal(self.ring, [other])
        _same(self, other)
        return Ideal(self.ring, self.generators + other.generators)

    def __mul__(self, other: "Ideal") -> "Ideal":
        if isinstance(other, Polynomial):
            return Ideal(self.ring, [g * other for g in self.generators])
        _same(self, other)
        return Ideal(self.ring, [a * b for a in self.generators for b in other.generators])

    def contains(self, f: Polynomial) -> bool:
        return contains(self, f)

    def __contains__(self, f):
        return contains(self, f)

    def is_unit(self) -> bool:
        return is_unit_ideal(self)

    def is_zero(self) -> bool:
        return not self.generators

    def vanishes_at(self, point) -> bool:
        return all(g.evaluate(point) == 0 for g in self.generators)

    def reduced_generators(self) -> List[Polynomial]:
        return self.basis()

    def __eq__(self, other):
        if not isinstance(other, Ideal):
            return NotImplemented
        return ideal_equal(self, other)

    __hash__ = object.__hash__

    def __str__(self):
        return "(" + ", ".join(str(g) for g in self.generators) + ")" if self.generators else "(0)"

    def __repr__(self):
        return f"Ideal{self}"


def _same(I: Ideal, J: Ideal):
    if I.ring != J.ring:
        raise DimensionMismatch(f"ring mismatch: {I.ring} vs {J.ring}")


def groebner(I: Ideal, order: MonomialOrder = GREVLEX) -> GroebnerBasis:
    polys = [_to_k(g) for g in I.generators]
    basis = buchberger(polys, order)
    if CERTIFY:
        _certify(basis, order, "Buchberger certificate failed")
    return GroebnerBasis(I.ring, [_from_k(I.ring, b) for b in basis], order)


def normal_form(f: Polynomial, G: GroebnerBasis) -> Polynomial:
    return G.reduce(f)


def contains(I: Ideal, f: Polynomial) -> bool:
    if f.ring != I.ring:
        raise DimensionMismatch(f"ring mismatch: {f.ring} vs {I.ring}")
    if f.is_zero():
        return True
    if not I.generators:
        return False
    return I.groebner().reduce(f).is_zero()


def contains_ideal(I: Ideal, J: Ideal) -> bool:
    """J ⊆ I."""
    _same(I, J)
    return all(contains(I, g) for g in J.generators)


def ideal_equal(I: Ideal, J: Ideal) -> bool:
    _same(I, J)
    return contains_ideal(I, J) and contains_ideal(J, I)


def is_unit_ideal(I: Ideal) -> bool:
    if not I.generators:
        return False
    if any(g.is_constant() for g in I.generators):
        return True
    return I.groebner().is_unit()


def _lift_ring(p: Polynomial, ring: PolyRing) -> Polynomial:
    """Embed p into ``ring`` = (t,) + p.ring."""
    return Polynomial._raw(ring, {(0,) + e: c for e, c in p.terms.items()})


def eliminate(I: Ideal, k: int) -> List[Polynomial]:
    """Generators (in I's ring) of I ∩ Q[x_{k+1}..x_n], dropping the first k variables."""
    gb = I.groebner(elimination(k))
    ring = PolyRing(I.ring.names[k:])
    out = []
    for g in gb.elements:
        if all(not any(e[:k]) for e in g.terms):
            out.append(Polynomial._raw(ring, {e[k:]: c for e, c in g.terms.items()}))
    return out


def intersect(I: Ideal, J: Ideal) -> Ideal:
    """I ∩ J via t·I + (1−t)·J and elimination of t."""
    _same(I, J)
    if not I.generators or not J.generators:
        return Ideal(I.ring, [])
    tname = "_t"
    while tname in I.ring:
        tname += "_"
    big = PolyRing((tname,) + I.ring.names)
    t = big.var(0)
    gens = [t * _lift_ring(f, big) for f in I.generators]
    gens += [(1 - t) * _lift_ring(g, big) for g in J.generators]
    elim = eliminate(Ideal(big, gens), 1)
    return Ideal(I.ring, [p.change_ring(I.ring) for p in elim])


def divide_exact(f: Polynomial, g: Polynomial) -> Polynomial:
    """f / g when g divides f, else NotDivisible."""
    if g.is_zero():
        raise NotDivisible("division by zero polynomial")
    key = grevlex_key
    lt_g, lc_g = g.leading_term(key)
    rem = dict(f.terms)
    quot: Dict = {}
    gk = {(0, e): c for e, c in g.terms.items()}
    rk = {(0, e): c for e, c in rem.items()}
    while rk:
        t = max(rk, key=lambda tt: key(tt[1]))
        if not all(a >= b for a, b in zip(t[1], lt_g)):
            raise NotDivisible(f"{g} does not divide {f}")
        q = rk[t] / lc_g
        e = tuple(a - b for a, b in zip(t[1], lt_g))
        quot[e] = quot.get(e, 0) + q
        _axpy(rk, gk, e, q)
    return Polynomial(f.ring, quot)


def ideal_quotient(I: Ideal, J: Ideal) -> Ideal:
    """(I : J) = ∩_g (I ∩ (g)) / g over the generators g of J."""
    _same(I, J)
    if not J.generators:
        return Ideal.unit(I.ring)
    result: Optional[Ideal] = None
    for g in J.generators:
        inter = intersect(I, Ideal(I.ring, [g]))
        q = Ideal(I.ring, [divide_exact(h, g) for h in inter.generators])
        result = q if result is None else intersect(result, q)
    return Ideal(I.ring, result.basis())


# ---------------------------------------------------------------------------
# modules


class ModuleBasis:
    """Gröbner basis of a submodule of R^m (position-over-term order)."""

    def __init__(self, ring: PolyRing, rank: int, elements: List[KPoly], order: MonomialOrder):
        self.ring = ring
        self.rank = rank
        self.order = order
        self.raw = elements
        self._reducer = _Reducer(order.term_key)
        for g in elements:
            self._reducer.add(g)

    @property
    def elements(self) -> List[List[Polynomial]]:
        return [_vec_from_k(self.ring, g, self.rank) for g in self.raw]

    def reduce(self, vec: Sequence[Polynomial]) -> List[Polynomial]:
        return _vec_from_k(self.ring, self._reducer.reduce(_vec_to_k(vec)), self.rank)

    def contains(self, vec: Sequence[Polynomial]) -> bool:
        return all(p.is_zero() for p in self.reduce(vec))

    def certify(self) -> bool:
        return spoly_certificate(self.raw, self.order)


def module_groebner(ring: PolyRing, vectors: Sequence[Sequence[Polynomial]],
                    order: MonomialOrder = GREVLEX) -> ModuleBasis:
    rank = len(vectors[0]) if vectors else 0
    for v in vectors:
        if len(v) != rank:
            raise DimensionMismatch("module generators of different lengths")
    raw = buchberger([_vec_to_k(v) for v in vectors], order, module=True)
    if CERTIFY:
        _certify(raw, order, "module Buchberger certificate failed")
    return ModuleBasis(ring, rank, raw, order)


class _Tagged:
    """Basis of rows (v_i | e_i) used for syzygies and lifts."""

    def __init__(self, ring: PolyRing, vectors: Sequence[Sequence[Polynomial]], order: MonomialOrder):
        self.ring = ring
        self.m = len(vectors[0]) if vectors else 0
        self.s = len(vectors)
        rows = []
        for i, v in enumerate(vectors):
            row = _vec_to_k(v)
            row[(self.m + i, ring.zero_exps())] = Fraction(1)
            rows.append(row)
        self.raw = buchberger(rows, order, module=True)
        if CERTIFY:
            _certify(self.raw, order, "tagged module certificate failed")
        self.reducer = _Reducer(order.term_key)
        for g in self.raw:
            self.reducer.add(g)


def syzygies(ring: PolyRing, vectors: Sequence[Sequence[Polynomial]],
             order: MonomialOrder = GREVLEX) -> List[List[Polynomial]]:
    """Generators of {(a_i) : Σ a_i v_i = 0}."""
    if not vectors:
        return []
    tagged = _Tagged(ring, vectors, order)
    out = []
    for g in tagged.raw:
        if all(t[0] >= tagged.m for t in g):
            out.append(_vec_from_k(ring, g, tagged.s, tagged.m))
    return out


def lift(ring: PolyRing, vectors: Sequence[Sequence[Polynomial]], target: Sequence[Polynomial],
         order: MonomialOrder = GREVLEX) -> Optional[List[Polynomial]]:
    """Coefficients a with Σ a_i v_i = target, or None when target is not in the module."""
    if not vectors:
        return None if any(not p.is_zero() for p in target) else []
    tagged = _Tagged(ring, vectors, order)
    rem = tagged.reducer.reduce(_vec_to_k(target))
    if any(t[0] < tagged.m for t in rem):
        return None
    coeffs = _vec_from_k(ring, rem, tagged.s, tagged.m)
    return [-c for c in coeffs]


def ideal_lift(I: Ideal, f: Polynomial) -> Optional[List[Polynomial]]:
    """Coefficients expressing f in I's generators."""
    return lift(I.ring, [[g] for g in I.generators], [f])
