"""Exact multivariate polynomials over the rationals.

Polynomials live in a :class:`PolyRing`, an ordered tuple of variable
names.  Terms are stored as a dict mapping exponent tuples to
:class:`fractions.Fraction` coefficients; zero coefficients are never
stored, so two equal polynomials always have identical term maps.
"""

from __future__ import annotations

import re
from fractions import Fraction
from typing import Dict, Iterable, Mapping, Sequence, Tuple, Union

Exponents = Tuple[int, ...]
Scalar = Union[int, Fraction]


class AlgebraError(Exception):
    pass


class DimensionMismatch(AlgebraError):
    pass


class NotDivisible(AlgebraError):
    pass


class UnmappedVariable(AlgebraError):
    pass


def grevlex_key(exps: Exponents):
    """Sort key: larger key means larger monomial in grevlex."""
    return (sum(exps), tuple(-e for e in reversed(exps)))


class PolyRing:
    """Polynomial ring Q[x_1..x_n] identified by its variable names."""

    __slots__ = ("names", "_index")

    def __init__(self, names: Iterable[str]):
        self.names = tuple(names)
        if len(set(self.names)) != len(self.names):
            raise AlgebraError(f"repeated variable names in {self.names}")
        self._index = {v: i for i, v in enumerate(self.names)}

    @property
    def ngens(self) -> int:
        return len(self.names)

    def index(self, name: str) -> int:
        try:
            return self._index[name]
        except KeyError:
            raise AlgebraError(f"unknown variable {name!r} in ring {self.names}") from None

    def __contains__(self, name) -> bool:
        return name in self._index

    def __eq__(self, other):
        return isinstance(other, PolyRing) and self.names == other.names

    def __hash__(self):
        return hash(self.names)

    def __repr__(self):
        return f"PolyRing({', '.join(self.names)})"

    def zero_exps(self) -> Exponents:
        return (0,) * len(self.names)

    @property
    def zero(self) -> "Polynomial":
        return Polynomial(self, {})

    @property
    def one(self) -> "Polynomial":
        return Polynomial(self, {self.zero_exps(): Fraction(1)})

    def const(self, c: Scalar) -> "Polynomial":
        c = Fraction(c)
        return Polynomial(self, {self.zero_exps(): c} if c else {})

    def var(self, i: Union[int, str]) -> "Polynomial":
        if isinstance(i, str):
            i = self.index(i)
        if not 0 <= i < len(self.names):
            raise DimensionMismatch(f"variable index {i} out of range")
        e = [0] * len(self.names)
        e[i] = 1
        return Polynomial(self, {tuple(e): Fraction(1)})

    def gens(self):
        return [self.var(i) for i in range(len(self.names))]

    def monomial(self, exps: Sequence[int], coeff: Scalar = 1) -> "Polynomial":
        exps = tuple(exps)
        if len(exps) != len(self.names):
            raise DimensionMismatch("exponent vector length does not match ring")
        c = Fraction(coeff)
        return Polynomial(self, {exps: c} if c else {})

    def parse(self, text: str) -> "Polynomial":
        from .syntax import parse_polynomial

        return parse_polynomial(text, self)

    def extend(self, names: Sequence[str], front: bool = True) -> "PolyRing":
        return PolyRing(tuple(names) + self.names if front else self.names + tuple(names))


def _add_exps(a: Exponents, b: Exponents) -> Exponents:
    return tuple(x + y for x, y in zip(a, b))


class Polynomial:
    """Immutable sparse polynomial with exact rational coefficients."""

    __slots__ = ("ring", "terms", "_hash")

    def __init__(self, ring: PolyRing, terms: Mapping[Exponents, Scalar]):
        self.ring = ring
        self.terms: Dict[Exponents, Fraction] = {
            e: Fraction(c) for e, c in terms.items() if c
        }
        self._hash = None

    @classmethod
    def _raw(cls, ring, terms):
        # trusted constructor: terms already nonzero Fractions
        p = object.__new__(cls)
        p.ring = ring
        p.terms = terms
        p._hash = None
        return p

    # basic predicates ------------------------------------------------
    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def is_constant(self) -> bool:
        return not self.terms or (len(self.terms) == 1 and not any(next(iter(self.terms))))

    def constant_term(self) -> Fraction:
        return self.terms.get(self.ring.zero_exps(), Fraction(0))

    def is_monomial(self) -> bool:
        return len(self.terms) == 1

    def degree(self) -> int:
        return max((sum(e) for e in self.terms), default=-1)

    def degree_in(self, i: int) -> int:
        return max((e[i] for e in self.terms), default=-1)

    def support(self) -> set:
        return {i for e in self.terms for i, k in enumerate(e) if k}

    def _check(self, other):
        if isinstance(other, Polynomial):
            if other.ring != self.ring:
                raise DimensionMismatch(f"ring mismatch: {self.ring} vs {other.ring}")
            return other
        if isinstance(other, (int, Fraction)):
            return self.ring.const(other)
        return NotImplemented

    # arithmetic -------------------------------------------------------
    def __add__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return other
        terms = dict(self.terms)
        for e, c in other.terms.items():
            s = terms.get(e, 0) + c
            if s:
                terms[e] = s
            else:
                terms.pop(e, None)
        return Polynomial._raw(self.ring, terms)

    __radd__ = __add__

    def __neg__(self):
        return Polynomial._raw(self.ring, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return other
        return other - self

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            if not other:
                return self.ring.zero
            return Polynomial._raw(self.ring, {e: c * other for e, c in self.terms.items()})
        other = self._check(other)
        if other is NotImplemented:
            return other
        terms: Dict[Exponents, Fraction] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = _add_exps(e1, e2)
                s = terms.get(e, 0) + c1 * c2
                if s:
                    terms[e] = s
                else:
                    terms.pop(e, None)
        return Polynomial._raw(self.ring, terms)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return self * (Fraction(1) / Fraction(other))
        return NotImplemented

    def __pow__(self, k: int):
        if k < 0:
            raise AlgebraError("negative power of a polynomial")
        result = self.ring.one
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.terms == self.ring.const(other).terms
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self.ring == other.ring and self.terms == other.terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.ring, frozenset(self.terms.items())))
        return self._hash

    def mul_term(self, exps: Exponents, coeff: Fraction) -> "Polynomial":
        return Polynomial._raw(
            self.ring, {_add_exps(e, exps): c * coeff for e, c in self.terms.items()}
        )

    # ordering helpers --------------------------------------------------
    def sorted_terms(self, key=grevlex_key):
        return sorted(self.terms.items(), key=lambda t: key(t[0]), reverse=True)

    def leading_term(self, key=grevlex_key):
        e = max(self.terms, key=key)
        return e, self.terms[e]

    def monic(self, key=grevlex_key) -> "Polynomial":
        if not self.terms:
            return self
        _, c = self.leading_term(key)
        return self * (1 / c) if c != 1 else self

    # calculus and substitution -------------------------------------------
    def evaluate(self, point: Sequence[Scalar]) -> Fraction:
        if len(point) != self.ring.ngens:
            raise DimensionMismatch(
                f"point of dimension {len(point)} for ring of dimension {self.ring.ngens}"
            )
        pt = [Fraction(v) for v in point]
        total = Fraction(0)
        for e, c in self.terms.items():
            term = c
            for v, k in zip(pt, e):
                if k:
                    term *= v**k
            total += term
        return total

    def derive(self, i: int) -> "Polynomial":
        if not 0 <= i < self.ring.ngens:
            raise DimensionMismatch(f"derivative index {i} out of range")
        terms: Dict[Exponents, Fraction] = {}
        for e, c in self.terms.items():
            k = e[i]
            if k:
                ne = e[:i] + (k - 1,) + e[i + 1 :]
                terms[ne] = c * k
        return Polynomial._raw(self.ring, terms)

    def substitute(self, mapping: Mapping[int, "Polynomial"], target: PolyRing = None) -> "Polynomial":
        """Replace variable i by mapping[i]; every variable that occurs must be mapped.

        ``target`` is the ring of the images (defaults to this ring).
        """
        if target is None:
            images = list(mapping.values())
            target = images[0].ring if images else self.ring
        result = target.zero
        power_cache: Dict[Tuple[int, int], Polynomial] = {}
        for e, c in self.terms.items():
            term = target.const(c)
            for i, k in enumerate(e):
                if not k:
                    continue
                if i not in mapping:
                    raise UnmappedVariable(f"variable {self.ring.names[i]!r} not mapped")
                key = (i, k)
                if key not in power_cache:
                    img = mapping[i]
                    if img.ring != target:
                        raise DimensionMismatch("substitution images live in different rings")
                    power_cache[key] = img**k
                term = term * power_cache[key]
            result = result + term
        return result

    def compose(self, images: Sequence["Polynomial"]) -> "Polynomial":
        """Substitute variable i by images[i] (total substitution)."""
        if len(images) != self.ring.ngens:
            raise DimensionMismatch("composition needs one image per variable")
        target = images[0].ring if images else self.ring
        return self.substitute(dict(enumerate(images)), target)

    def exact_divide_by_variable(self, i: int, k: int = 1) -> "Polynomial":
        if k < 0:
            raise AlgebraError("negative multiplicity")
        terms = {}
        for e, c in self.terms.items():
            if e[i] < k:
                raise NotDivisible(
                    f"{self} is not divisible by {self.ring.names[i]}^{k}"
                )
            terms[e[:i] + (e[i] - k,) + e[i + 1 :]] = c
        return Polynomial._raw(self.ring, terms)

    def divisibility_order(self, i: int) -> int:
        """Largest k with x_i^k dividing self (0 for the zero polynomial)."""
        return min((e[i] for e in self.terms), default=0)

    def coefficients_in(self, i: int) -> Dict[int, "Polynomial"]:
        """Expansion f = sum_k h_k x_i^k with h_k free of x_i."""
        parts: Dict[int, Dict[Exponents, Fraction]] = {}
        for e, c in self.terms.items():
            k = e[i]
            parts.setdefault(k, {})[e[:i] + (0,) + e[i + 1 :]] = c
        return {k: Polynomial._raw(self.ring, t) for k, t in parts.items()}

    def homogeneous_part(self, d: int) -> "Polynomial":
        return Polynomial._raw(self.ring, {e: c for e, c in self.terms.items() if sum(e) == d})

    def truncate(self, d: int) -> "Polynomial":
        return Polynomial._raw(self.ring, {e: c for e, c in self.terms.items() if sum(e) <= d})

    def linear_coefficients(self) -> Tuple[Fraction, list]:
        """Constant term and the coefficients of x_1..x_n."""
        n = self.ring.ngens
        lin = [Fraction(0)] * n
        for i in range(n):
            e = tuple(1 if j == i else 0 for j in range(n))
            lin[i] = self.terms.get(e, Fraction(0))
        return self.constant_term(), lin

    def change_ring(self, ring: PolyRing) -> "Polynomial":
        """Reinterpret in a ring with the same number of variables (renaming)."""
        if ring.ngens != self.ring.ngens:
            raise DimensionMismatch("renaming needs rings of equal dimension")
        return Polynomial._raw(ring, dict(self.terms))

    def embed(self, ring: PolyRing) -> "Polynomial":
        """Map into a ring containing all of this ring's variable names."""
        idx = [ring.index(v) for v in self.ring.names]
        terms = {}
        for e, c in self.terms.items():
            ne = [0] * ring.ngens
            for j, k in zip(idx, e):
                ne[j] = k
            terms[tuple(ne)] = c
        return Polynomial._raw(ring, terms)

    # printing -----------------------------------------------------------
    def __str__(self):
        return format_polynomial(self)

    def __repr__(self):
        return f"Polynomial({format_polynomial(self)!r})"


def _format_coeff(c: Fraction) -> str:
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def format_monomial(names: Sequence[str], exps: Exponents) -> str:
    parts = []
    for v, k in zip(names, exps):
        if k == 1:
            parts.append(v)
        elif k > 1:
            parts.append(f"{v}^{k}")
    return "*".join(parts)


def format_polynomial(p: Polynomial) -> str:
    """Canonical text form, terms in decreasing grevlex order."""
    if not p.terms:
        return "0"
    out = []
    for idx, (e, c) in enumerate(p.sorted_terms()):
        mono = format_monomial(p.ring.names, e)
        neg = c < 0
        a = -c if neg else c
        if not mono:
            body = _format_coeff(a)
        elif a == 1:
            body = mono
        else:
            body = f"{_format_coeff(a)}*{mono}"
        if idx == 0:
            out.append(f"-{body}" if neg else body)
        else:
            out.append(f" - {body}" if neg else f" + {body}")
    return "".join(out)


class LaurentPolynomial:
    """numerator / prod(x_i^poles[i]) with poles only on exceptional variables.

    Canonical form: the numerator is not divisible by any pole variable.
    """

    __slots__ = ("num", "poles")

    def __init__(self, num: Polynomial, poles: Mapping[int, int] = None, exceptional=None):
        poles = {i: k for i, k in (poles or {}).items() if k}
        if exceptional is not None:
            bad = set(poles) - set(exceptional)
            if bad:
                names = [num.ring.names[i] for i in sorted(bad)]
                raise AlgebraError(f"poles on non-exceptional variables {names}")
        if any(k < 0 for k in poles.values()):
            raise AlgebraError("pole exponents must be non-negative")
        # canonicalize: cancel common powers of the pole variables
        for i in list(poles):
            if num.is_zero():
                poles = {}
                break
            m = min(num.divisibility_order(i), poles[i])
            if m:
                num = num.exact_divide_by_variable(i, m)
                poles[i] -= m
                if not poles[i]:
                    del poles[i]
        self.num = num
        self.poles = dict(sorted(poles.items()))

    @classmethod
    def from_polynomial(cls, p: Polynomial) -> "LaurentPolynomial":
        return cls(p, {})

    @property
    def ring(self):
        return self.num.ring

    def is_polynomial(self) -> bool:
        return not self.poles

    def to_polynomial(self) -> Polynomial:
        if self.poles:
            raise NotDivisible(f"{self} has poles")
        return self.num

    def pole_order(self, i: int) -> int:
        return self.poles.get(i, 0)

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def _common(self, other: "LaurentPolynomial"):
        keys = set(self.poles) | set(other.poles)
        poles = {i: max(self.poles.get(i, 0), other.poles.get(i, 0)) for i in keys}
        a, b = self.num, other.num
        for i, k in poles.items():
            a = a.mul_term(_unit_exps(a.ring, i, k - self.poles.get(i, 0)), Fraction(1))
            b = b.mul_term(_unit_exps(b.ring, i, k - other.poles.get(i, 0)), Fraction(1))
        return a, b, poles

    def __add__(self, other):
        other = _as_laurent(other, self.ring)
        a, b, poles = self._common(other)
        return LaurentPolynomial(a + b, poles)

    __radd__ = __add__

    def __neg__(self):
        return LaurentPolynomial(-self.num, self.poles)

    def __sub__(self, other):
        return self + (-_as_laurent(other, self.ring))

    def __rsub__(self, other):
        return _as_laurent(other, self.ring) - self

    def __mul__(self, other):
        other = _as_laurent(other, self.ring)
        poles = dict(self.poles)
        for i, k in other.poles.items():
            poles[i] = poles.get(i, 0) + k
        return LaurentPolynomial(self.num * other.num, poles)

    __rmul__ = __mul__

    def times_variable(self, i: int, k: int = 1) -> "LaurentPolynomial":
        """Multiply by x_i^k; for a pole variable this lowers the pole order."""
        p = self.poles.get(i, 0)
        poles = dict(self.poles)
        if p >= k:
            poles[i] = p - k
            return LaurentPolynomial(self.num, poles)
        poles.pop(i, None)
        num = self.num.mul_term(_unit_exps(self.ring, i, k - p), Fraction(1))
        return LaurentPolynomial(num, poles)

    def derive(self, i: int) -> "LaurentPolynomial":
        # d(N x_i^-k)/dx_i = N' x_i^-k - k N x_i^(-k-1)
        k = self.poles.get(i, 0)
        d = LaurentPolynomial(self.num.derive(i), self.poles)
        if k:
            poles = dict(self.poles)
            poles[i] = k + 1
            d = d + LaurentPolynomial(self.num * (-k), poles)
        return d

    def __eq__(self, other):
        if isinstance(other, Polynomial):
            other = LaurentPolynomial(other)
        if not isinstance(other, LaurentPolynomial):
            return NotImplemented
        return self.num == other.num and self.poles == other.poles

    def __hash__(self):
        return hash((self.num, tuple(self.poles.items())))

    def __str__(self):
        if not self.poles:
            return str(self.num)
        den = format_monomial(self.ring.names, tuple(self.poles.get(i, 0) for i in range(self.ring.ngens)))
        return f"({self.num})/({den})"

    def __repr__(self):
        return f"LaurentPolynomial({str(self)!r})"


def _unit_exps(ring: PolyRing, i: int, k: int) -> Exponents:
    return tuple(k if j == i else 0 for j in range(ring.ngens))


def _as_laurent(x, ring) -> LaurentPolynomial:
    if isinstance(x, LaurentPolynomial):
        return x
    if isinstance(x, Polynomial):
        return LaurentPolynomial(x)
    if isinstance(x, (int, Fraction)):
        return LaurentPolynomial(ring.const(x))
    raise TypeError(f"cannot use {type(x).__name__} as a Laurent polynomial")


class Point(tuple):
    """Rational point of a chart, one coordinate per variable."""

    def __new__(cls, coords: Iterable[Scalar]):
        return super().__new__(cls, (Fraction(c) for c in coords))

    @classmethod
    def origin(cls, n: int) -> "Point":
        return cls([0] * n)

    @classmethod
    def parse(cls, text: str) -> "Point":
        parts = [p for p in re.split(r"[,\s]+", text.strip()) if p]
        return cls(Fraction(p) for p in parts)

    def __str__(self):
        return "(" + ", ".join(_format_coeff(c) for c in self) + ")"


def evaluate(f: Polynomial, p: Sequence[Scalar]) -> Fraction:
    return f.evaluate(p)


def derive(f: Polynomial, i: int) -> Polynomial:
    return f.derive(i)


def substitute(f: Polynomial, mapping: Mapping[int, Polynomial], target: PolyRing = None) -> Polynomial:
    return f.substitute(mapping, target)


def exact_divide_by_variable(f: Polynomial, i: int, k: int = 1) -> Polynomial:
    return f.exact_divide_by_variable(i, k)
