"""Polynomial vector fields and R-monomiality checks.

A :class:`Derivation` is ``X = sum A_i d/dx_i`` with polynomial
coefficients.  :class:`LaurentDerivation` allows poles along flagged
exceptional variables; it is what a blowup pullback produces before the
exceptional factor is cleared.
"""

from __future__ import annotations

import random
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from . import linalg
from .algebra import (
    AlgebraError,
    DimensionMismatch,
    LaurentPolynomial,
    PolyRing,
    Polynomial,
    format_polynomial,
)
from .groebner import lift


def _coeff_text(c, partial: str, first: bool) -> str:
    text = str(c)
    neg = False
    single = isinstance(c, Polynomial) and len(c.terms) == 1
    if single and text.startswith("-"):
        neg, text = True, text[1:]
    if text == "1":
        body = partial
    elif single:
        body = f"{text}*{partial}"
    else:
        body = f"({text})*{partial}"
    if first:
        return ("-" if neg else "") + body
    return (" - " if neg else " + ") + body


class Derivation:
    """Polynomial vector field on a chart."""

    __slots__ = ("ring", "coeffs")

    def __init__(self, ring: PolyRing, coeffs: Sequence[Polynomial]):
        if len(coeffs) != ring.ngens:
            raise DimensionMismatch(
                f"derivation needs {ring.ngens} coefficients, got {len(coeffs)}"
            )
        for c in coeffs:
            if c.ring != ring:
                raise DimensionMismatch("derivation coefficient in a different ring")
        self.ring = ring
        self.coeffs = tuple(coeffs)

    @classmethod
    def partial(cls, ring: PolyRing, i) -> "Derivation":
        if isinstance(i, str):
            i = ring.index(i)
        return cls(ring, [ring.one if j == i else ring.zero for j in range(ring.ngens)])

    @classmethod
    def parse(cls, text: str, ring: PolyRing) -> "Derivation":
        from .syntax import parse_derivation_coefficients

        return cls(ring, parse_derivation_coefficients(text, ring))

    @classmethod
    def zero(cls, ring: PolyRing) -> "Derivation":
        return cls(ring, [ring.zero] * ring.ngens)

    def __call__(self, f: Polynomial) -> Polynomial:
        return apply_derivation(self, f)

    def __add__(self, other: "Derivation") -> "Derivation":
        _same_ring(self, other)
        return Derivation(self.ring, [a + b for a, b in zip(self.coeffs, other.coeffs)])

    def __sub__(self, other: "Derivation") -> "Derivation":
        _same_ring(self, other)
        return Derivation(self.ring, [a - b for a, b in zip(self.coeffs, other.coeffs)])

    def __neg__(self):
        return Derivation(self.ring, [-a for a in self.coeffs])

    def scale(self, f) -> "Derivation":
        return Derivation(self.ring, [f * a for a in self.coeffs])

    __rmul__ = scale

    def is_zero(self) -> bool:
        return all(c.is_zero() for c in self.coeffs)

    def value_at(self, point) -> List[Fraction]:
        return [c.evaluate(point) for c in self.coeffs]

    def is_singular_at(self, point) -> bool:
        return all(v == 0 for v in self.value_at(point))

    def linear_part(self) -> "LinearPart":
        return LinearPart.of(self)

    def __eq__(self, other):
        if isinstance(other, LaurentDerivation):
            return other == self
        return isinstance(other, Derivation) and self.ring == other.ring and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.ring, self.coeffs))

    def __str__(self):
        parts = []
        for name, c in zip(self.ring.names, self.coeffs):
            if c.is_zero():
                continue
            parts.append(_coeff_text(c, f"d/d{name}", not parts))
        return "".join(parts) if parts else "0"

    def __repr__(self):
        return f"Derivation({str(self)!r})"


def _same_ring(a, b):
    if a.ring != b.ring:
        raise DimensionMismatch(f"context mismatch: {a.ring} vs {b.ring}")


class LaurentDerivation:
    """Vector field whose coefficients may have poles on exceptional variables."""

    __slots__ = ("ring", "coeffs", "exceptional")

    def __init__(self, ring: PolyRing, coeffs: Sequence[LaurentPolynomial], exceptional=()):
        if len(coeffs) != ring.ngens:
            raise DimensionMismatch("Laurent derivation needs one coefficient per variable")
        exceptional = frozenset(exceptional)
        coeffs = [c if isinstance(c, LaurentPolynomial) else LaurentPolynomial(c) for c in coeffs]
        for c in coeffs:
            if set(c.poles) - exceptional:
                raise AlgebraError("pole on a variable that is not flagged exceptional")
        self.ring = ring
        self.coeffs = tuple(coeffs)
        self.exceptional = exceptional

    @classmethod
    def from_derivation(cls, X: Derivation, exceptional=()) -> "LaurentDerivation":
        return cls(X.ring, [LaurentPolynomial(c) for c in X.coeffs], exceptional)

    def apply(self, f: Polynomial) -> LaurentPolynomial:
        total = LaurentPolynomial(self.ring.zero)
        for i, c in enumerate(self.coeffs):
            d = f.derive(i)
            if not d.is_zero() and not c.is_zero():
                total = total + c * d
        return total

    __call__ = apply

    def apply_laurent(self, f: LaurentPolynomial) -> LaurentPolynomial:
        total = LaurentPolynomial(self.ring.zero)
        for i, c in enumerate(self.coeffs):
            if not c.is_zero():
                total = total + c * f.derive(i)
        return total

    def pole_order(self, i: int) -> int:
        return max((c.pole_order(i) for c in self.coeffs), default=0)

    def is_analytic(self) -> bool:
        return all(c.is_polynomial() for c in self.coeffs)

    def to_derivation(self) -> Derivation:
        if not self.is_analytic():
            raise AlgebraError(f"{self} has a pole")
        return Derivation(self.ring, [c.num for c in self.coeffs])

    def times_variable(self, i: int, k: int = 1) -> "LaurentDerivation":
        return LaurentDerivation(self.ring, [c.times_variable(i, k) for c in self.coeffs], self.exceptional)

    def clear_poles(self, i: int) -> Tuple[Derivation, int]:
        """Multiply by x_i^e with e the pole order; returns (field, e)."""
        e = self.pole_order(i)
        return self.times_variable(i, e).to_derivation(), e

    def __add__(self, other):
        if isinstance(other, Derivation):
            other = LaurentDerivation.from_derivation(other, self.exceptional)
        return LaurentDerivation(self.ring, [a + b for a, b in zip(self.coeffs, other.coeffs)],
                                 self.exceptional | other.exceptional)

    def scale(self, f) -> "LaurentDerivation":
        return LaurentDerivation(self.ring, [c * f for c in self.coeffs], self.exceptional)

    def __eq__(self, other):
        if isinstance(other, Derivation):
            return self.is_analytic() and self.to_derivation() == other
        if not isinstance(other, LaurentDerivation):
            return NotImplemented
        return self.ring == other.ring and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.ring, self.coeffs))

    def __str__(self):
        # common pole factored out for readability: (1/x^k)(...)
        poles: Dict[int, int] = {}
        for c in self.coeffs:
            for i, k in c.poles.items():
                poles[i] = max(poles.get(i, 0), k)
        if not poles:
            return str(self.to_derivation())
        cleared = self
        for i, k in poles.items():
            cleared = cleared.times_variable(i, k)
        den = "*".join(
            self.ring.names[i] + (f"^{k}" if k > 1 else "") for i, k in sorted(poles.items())
        )
        return f"(1/{den})*({cleared.to_derivation()})"

    def __repr__(self):
        return f"LaurentDerivation({str(self)!r})"


# ---------------------------------------------------------------------------
# basic operations


def apply_derivation(X: Derivation, f: Polynomial) -> Polynomial:
    if f.ring != X.ring:
        raise DimensionMismatch(f"context mismatch: {f.ring} vs {X.ring}")
    total = X.ring.zero
    for i, a in enumerate(X.coeffs):
        if a.is_zero():
            continue
        d = f.derive(i)
        if not d.is_zero():
            total = total + a * d
    return total


def lie_bracket(X: Derivation, Y: Derivation) -> Derivation:
    _same_ring(X, Y)
    return Derivation(X.ring, [apply_derivation(X, b) - apply_derivation(Y, a)
                               for a, b in zip(X.coeffs, Y.coeffs)])


def is_tangent_to_divisor(X: Derivation, i: int) -> bool:
    """X(x_i) ∈ (x_i)."""
    if not 0 <= i < X.ring.ngens:
        raise DimensionMismatch(f"variable index {i} out of range")
    return all(e[i] >= 1 for e in X.coeffs[i].terms)


def _sample_points(n: int, count: int = 6):
    rng = random.Random(20240611 + n)
    return [[Fraction(rng.randint(-9, 9), rng.randint(1, 4)) for _ in range(n)] for _ in range(count)]


def generic_rank(gens: Sequence[Derivation]) -> int:
    """Rank of the coefficient matrix over the fraction field.

    Estimated as the maximum rank at a fixed set of sample points, which is
    exact unless every sample lies on the degeneracy locus.
    """
    if not gens:
        return 0
    n = gens[0].ring.ngens
    best = 0
    for pt in _sample_points(n):
        best = max(best, linalg.rank([g.value_at(pt) for g in gens]))
        if best == min(len(gens), n):
            break
    return best


class DistributionGens:
    """Generators of a singular distribution plus its leaf dimension d."""

    def __init__(self, gens: Sequence[Derivation], d: Optional[int] = None):
        gens = list(gens)
        if not gens:
            raise AlgebraError("a distribution needs at least one generator")
        ring = gens[0].ring
        for g in gens:
            _same_ring(gens[0], g)
        if d is None:
            d = generic_rank(gens)
        if d < 1 and not all(g.is_zero() for g in gens):
            raise AlgebraError("leaf dimension must be positive")
        if d > ring.ngens:
            raise DimensionMismatch(f"leaf dimension {d} exceeds chart dimension {ring.ngens}")
        self.ring = ring
        self.gens = tuple(gens)
        self.d = d

    @classmethod
    def parse(cls, texts: Sequence[str], ring: PolyRing, d: Optional[int] = None):
        return cls([Derivation.parse(t, ring) for t in texts], d)

    def __iter__(self):
        return iter(self.gens)

    def __len__(self):
        return len(self.gens)

    def __getitem__(self, i):
        return self.gens[i]

    def rank_at(self, point) -> int:
        return linalg.rank([g.value_at(point) for g in self.gens])

    def is_regular_at(self, point) -> bool:
        """Rank of the generator values at the point equals d."""
        return self.rank_at(point) == self.d

    def __eq__(self, other):
        return isinstance(other, DistributionGens) and self.gens == other.gens and self.d == other.d

    def __hash__(self):
        return hash((self.gens, self.d))

    def __str__(self):
        return "<" + ", ".join(str(g) for g in self.gens) + ">"

    def __repr__(self):
        return f"DistributionGens({self}, d={self.d})"


def _as_gens(theta) -> DistributionGens:
    if isinstance(theta, DistributionGens):
        return theta
    if isinstance(theta, Derivation):
        return DistributionGens([theta])
    return DistributionGens(list(theta))


def module_membership(gens: Sequence[Derivation], X: Derivation) -> Optional[List[Polynomial]]:
    """Coefficients a with X = sum a_i gens_i, or None."""
    ring = X.ring
    return lift(ring, [list(g.coeffs) for g in gens], list(X.coeffs))


class InvolutivityResult:
    def __init__(self, ok: bool, certificates, offending=None):
        self.ok = ok
        self.certificates = certificates
        self.offending = offending

    def __bool__(self):
        return self.ok


def check_involutive(theta) -> InvolutivityResult:
    theta = _as_gens(theta)
    certs = {}
    gens = theta.gens
    for i in range(len(gens)):
        for j in range(i + 1, len(gens)):
            br = lie_bracket(gens[i], gens[j])
            coeffs = module_membership(gens, br)
            if coeffs is None:
                return InvolutivityResult(False, certs, (i, j, br))
            certs[(i, j)] = coeffs
    return InvolutivityResult(True, certs)


# ---------------------------------------------------------------------------
# R-monomial bases


def _in_ring(a: Fraction, ring_tag: str) -> bool:
    return ring_tag == "Q" or a.denominator == 1


class MonomialCheck:
    """Result of check_monomial_basis; ``kinds`` lists 'partial' or 'diagonal' per generator."""

    def __init__(self, ok: bool, kinds, message: str, weights=None):
        self.ok = ok
        self.kinds = kinds
        self.message = message
        self.weights = weights or []

    def __bool__(self):
        return self.ok

    def __repr__(self):
        return f"MonomialCheck({self.ok}, {self.message!r})"


def classify_generator(X: Derivation, ring_tag: str = "Z"):
    """('partial', i) or ('diagonal', [alpha_j]) or (None, reason)."""
    ring = X.ring
    n = ring.ngens
    nonzero = [i for i, c in enumerate(X.coeffs) if not c.is_zero()]
    if len(nonzero) == 1 and X.coeffs[nonzero[0]] == ring.one:
        return "partial", nonzero[0]
    alphas = []
    for j, c in enumerate(X.coeffs):
        if c.is_zero():
            alphas.append(Fraction(0))
            continue
        unit = tuple(1 if k == j else 0 for k in range(n))
        bad = [e for e in c.terms if e != unit]
        if bad:
            term = ring.monomial(bad[0], c.terms[bad[0]])
            return None, f"off-diagonal term {term} in d/d{ring.names[j]} coefficient"
        a = c.terms[unit]
        if not _in_ring(a, ring_tag):
            return None, f"coefficient {a} of {ring.names[j]}*d/d{ring.names[j]} not in {ring_tag}"
        alphas.append(a)
    return "diagonal", alphas


def check_monomial_basis(theta, ring_tag: str = "Z") -> MonomialCheck:
    """Each generator is a coordinate partial or sum alpha_j x_j d/dx_j with alpha in R."""
    theta = _as_gens(theta)
    kinds = []
    weights = []
    for idx, g in enumerate(theta.gens):
        kind, info = classify_generator(g, ring_tag)
        if kind is None:
            return MonomialCheck(False, kinds, f"generator {idx + 1} ({g}): {info}")
        kinds.append(kind)
        weights.append(info)
    return MonomialCheck(True, kinds, "R-monomial basis", weights)


class LinearPart:
    """Degree <= 1 truncation of a derivation: X ~ b + L x, L[i][j] = coeff of x_j in A_i."""

    def __init__(self, constant: List[Fraction], matrix: List[List[Fraction]]):
        self.constant = constant
        self.matrix = matrix

    @classmethod
    def of(cls, X: Derivation) -> "LinearPart":
        const, rows = [], []
        for c in X.coeffs:
            b, lin = c.linear_coefficients()
            const.append(b)
            rows.append(lin)
        return cls(const, rows)

    def is_nilpotent(self) -> bool:
        return linalg.is_nilpotent(self.matrix)


class CoordinateChange:
    """Affine change y = M (x - p) from ``source`` to ``target`` coordinates."""

    def __init__(self, source: PolyRing, target: PolyRing, matrix, translation=None):
        n = source.ngens
        if target.ngens != n:
            raise DimensionMismatch("coordinate change between rings of different dimension")
        self.source = source
        self.target = target
        self.matrix = linalg.to_matrix(matrix)
        if len(self.matrix) != n or any(len(r) != n for r in self.matrix):
            raise DimensionMismatch("coordinate change matrix has the wrong shape")
        self.translation = [Fraction(v) for v in (translation or [0] * n)]
        inv = linalg.inverse(self.matrix)
        if inv is None:
            raise AlgebraError("coordinate change matrix is not invertible")
        self.inverse_matrix = inv

    @classmethod
    def identity(cls, ring: PolyRing, target: PolyRing = None):
        return cls(ring, target or ring, linalg.identity(ring.ngens))

    @classmethod
    def translation_to(cls, ring: PolyRing, point):
        return cls(ring, ring, linalg.identity(ring.ngens), point)

    @classmethod
    def from_forms(cls, source: PolyRing, target: PolyRing, forms: Sequence[Polynomial]):
        """Build from the new coordinates written as affine forms in the old ones."""
        n = source.ngens
        if len(forms) != n:
            raise DimensionMismatch(f"need {n} coordinate forms, got {len(forms)}")
        rows, consts = [], []
        for f in forms:
            if f.degree() > 1:
                raise AlgebraError(f"coordinate form {f} is not affine-linear")
            b, lin = f.linear_coefficients()
            rows.append(lin)
            consts.append(b)
        inv = linalg.inverse(linalg.to_matrix(rows))
        if inv is None:
            raise AlgebraError("coordinate forms are not independent")
        # y = M x + b = M (x - p)  with p = -M^{-1} b
        p = [-sum((inv[i][j] * consts[j] for j in range(n)), Fraction(0)) for i in range(n)]
        return cls(source, target, rows, p)

    def is_identity(self) -> bool:
        return self.matrix == linalg.identity(len(self.matrix)) and not any(self.translation)

    def forward_images(self) -> List[Polynomial]:
        """New coordinates as polynomials in the old ones."""
        src = self.source
        out = []
        for row in self.matrix:
            f = src.zero
            for j, m in enumerate(row):
                if m:
                    f = f + (src.var(j) - self.translation[j]) * m
            out.append(f)
        return out

    def inverse_images(self) -> List[Polynomial]:
        """Old coordinates as polynomials in the new ones: x = M^{-1} y + p."""
        tgt = self.target
        out = []
        for i, row in enumerate(self.inverse_matrix):
            f = tgt.const(self.translation[i])
            for j, m in enumerate(row):
                if m:
                    f = f + tgt.var(j) * m
            out.append(f)
        return out

    def apply_polynomial(self, f: Polynomial) -> Polynomial:
        """f written in the new coordinates."""
        return f.substitute(dict(enumerate(self.inverse_images())), self.target)

    def pull_polynomial(self, g: Polynomial) -> Polynomial:
        """g (in new coordinates) written in the old coordinates."""
        return g.substitute(dict(enumerate(self.forward_images())), self.source)

    def apply_derivation(self, X: Derivation) -> Derivation:
        inv = dict(enumerate(self.inverse_images()))
        coeffs = []
        for y in self.forward_images():
            coeffs.append(apply_derivation(X, y).substitute(inv, self.target))
        return Derivation(self.target, coeffs)

    def apply_distribution(self, theta: DistributionGens) -> DistributionGens:
        return DistributionGens([self.apply_derivation(g) for g in theta.gens], theta.d)

    def describe(self) -> List[str]:
        return [format_polynomial(f) for f in self.forward_images()]

    def __repr__(self):
        return f"CoordinateChange({', '.join(self.describe())})"


def translate_to_point(theta, p) -> DistributionGens:
    theta = _as_gens(theta)
    ring = theta.ring
    if len(p) != ring.ngens:
        raise DimensionMismatch("point dimension does not match chart")
    images = {i: ring.var(i) + Fraction(c) for i, c in enumerate(p)}
    gens = [Derivation(ring, [c.substitute(images, ring) for c in g.coeffs]) for g in theta.gens]
    return DistributionGens(gens, theta.d)


class MonomializeResult:
    def __init__(self, change: Optional[CoordinateChange], diagnosis: str, transformed=None):
        self.change = change
        self.diagnosis = diagnosis
        self.transformed = transformed

    @property
    def found(self) -> bool:
        return self.change is not None

    def __bool__(self):
        return self.found

    def __repr__(self):
        return f"MonomializeResult({self.change!r}, {self.diagnosis!r})"


def _tilde_ring(ring: PolyRing) -> PolyRing:
    return PolyRing(name + "~" for name in ring.names)


def left_eigenbasis(L, eigenvalues) -> Optional[List[Tuple[Fraction, List[Fraction]]]]:
    """Normalized left eigenvectors (primitive integer rows, positive pivot) per eigenvalue."""
    n = len(L)
    out = []
    for lam in eigenvalues:
        shifted = [[L[i][j] - (lam if i == j else 0) for j in range(n)] for i in range(n)]
        # left eigenvectors: v (L - lam) = 0  <=>  (L - lam)^T v = 0
        space = linalg.row_space_basis(linalg.nullspace(linalg.transpose(shifted)))
        for v in space:
            out.append((lam, linalg.primitive_integer(v)))
    return out if len(out) == n else None


def monomialize_linear(theta, ring_tag: str = "Z", target: PolyRing = None) -> MonomializeResult:
    """Search for an affine-linear change making the generators an R-monomial basis."""
    theta = _as_gens(theta)
    ring = theta.ring
    n = ring.ngens
    target = target or _tilde_ring(ring)
    origin = [0] * n
    if check_monomial_basis(theta, ring_tag):
        ident = CoordinateChange(ring, target, linalg.identity(n))
        return MonomializeResult(ident, "already R-monomial", ident.apply_distribution(theta))
    singular = [g for g in theta.gens if g.is_singular_at(origin)]
    if not singular:
        return MonomializeResult(None, "no singular generator to diagonalize")
    L = singular[0].linear_part().matrix
    if linalg.is_nilpotent(L):
        return MonomializeResult(None, "nilpotent linear part")
    roots, rest = linalg.rational_roots(linalg.charpoly(L))
    if len(rest) > 1:
        return MonomializeResult(None, "non-rational eigenvalues")
    eigen = sorted(set(roots))
    for lam in eigen:
        if not _in_ring(lam, ring_tag):
            return MonomializeResult(None, f"eigenvalue {lam} not in {ring_tag}")
    basis = left_eigenbasis(L, eigen)
    if basis is None:
        return MonomializeResult(None, "non-diagonalizable linear part")
    # put each eigenvector in the slot of a variable it involves, preferring its pivot
    allowed = [[v[j] != 0 for j in range(n)] for _, v in basis]
    pivots = [next(j for j in range(n) if v[j] != 0) for _, v in basis]
    if len(set(pivots)) == n:
        slots = pivots
    else:
        slots = linalg.perfect_matching(allowed)
    rows = [None] * n
    for (lam, v), s in zip(basis, slots):
        rows[s] = v
    change = CoordinateChange(ring, target, rows)
    transformed = change.apply_distribution(theta)
    check = check_monomial_basis(transformed, ring_tag)
    if not check:
        return MonomializeResult(None, f"nonvanishing remainder: {check.message}", transformed)
    return MonomializeResult(change, "diagonalized linear part", transformed)


class MonomialityVerdict:
    """Outcome of the monomiality test at a chart origin.

    status is one of 'basis' (generators already R-monomial), 'regular'
    (regular at the origin, hence monomial by a flow-box change),
    'linear-change' (a linear change was found) or 'inconclusive'.
    """

    def __init__(self, status: str, detail: str, change: Optional[CoordinateChange] = None,
                 transformed: Optional[DistributionGens] = None):
        self.status = status
        self.detail = detail
        self.change = change
        self.transformed = transformed

    @property
    def monomial(self) -> bool:
        return self.status != "inconclusive"

    def __bool__(self):
        return self.monomial

    def __repr__(self):
        return f"MonomialityVerdict({self.status!r}, {self.detail!r})"


def monomiality_at_origin(theta, ring_tag: str = "Z", target: PolyRing = None) -> MonomialityVerdict:
    theta = _as_gens(theta)
    check = check_monomial_basis(theta, ring_tag)
    if check:
        return MonomialityVerdict("basis", check.message)
    origin = [0] * theta.ring.ngens
    if theta.is_regular_at(origin):
        return MonomialityVerdict("regular", "regular at origin: rank of generator values equals d")
    res = monomialize_linear(theta, ring_tag, target)
    if res.found:
        return MonomialityVerdict("linear-change", res.diagnosis, res.change, res.transformed)
    return MonomialityVerdict("inconclusive", res.diagnosis)
