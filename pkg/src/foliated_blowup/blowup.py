"""Blowup charts, transforms of ideals and distributions, and the divisor ledger.

Centers are coordinate subspaces ``V(x_i : i in S)`` of the current chart.
The chart with chart variable ``c`` substitutes ``x_j -> x_c * x_j`` for
``j in S - {c}``; the exceptional divisor is ``x_c = 0`` in the new chart.
"""

from __future__ import annotations

from typing import Dict, List, Optional, Sequence, Tuple

from .algebra import AlgebraError, LaurentPolynomial, NotDivisible, PolyRing, Polynomial
from .derivations import (
    Derivation,
    DistributionGens,
    LaurentDerivation,
    _as_gens,
    is_tangent_to_divisor,
    module_membership,
)
from .groebner import Ideal, syzygies


class OrderOneViolation(AlgebraError):
    """The center is not inside V(I), so the controlled transform is undefined."""


class TransformError(AlgebraError):
    """A strict transform produced a pole or a field not tangent to the exceptional divisor."""


class BlowupCenter:
    """Center V(x_i : i in variables), optionally after a preparatory change."""

    def __init__(self, ring: PolyRing, variables: Sequence, change=None):
        idx = []
        for v in variables:
            idx.append(ring.index(v) if isinstance(v, str) else int(v))
        if not idx:
            raise AlgebraError("a blowup center needs at least one variable")
        if len(set(idx)) != len(idx):
            raise AlgebraError("repeated center variable")
        for i in idx:
            if not 0 <= i < ring.ngens:
                raise AlgebraError(f"center variable index {i} out of range")
        self.ring = ring
        self.variables = tuple(sorted(idx))
        self.change = change

    def ideal(self) -> Ideal:
        return Ideal(self.ring, [self.ring.var(i) for i in self.variables])

    def names(self) -> List[str]:
        return [self.ring.names[i] for i in self.variables]

    def contains_polynomial(self, f: Polynomial) -> bool:
        """f lies in the center ideal (every term divisible by some center variable)."""
        return all(any(e[i] for i in self.variables) for e in f.terms)

    def __repr__(self):
        return f"BlowupCenter(V({', '.join(self.names())}))"


def primed(ring: PolyRing) -> PolyRing:
    return PolyRing(name + "'" for name in ring.names)


class ChartMap:
    """Standard blowup chart: x_j -> x_c x_j' for j in center - {c}, x_j -> x_j' otherwise."""

    def __init__(self, center: BlowupCenter, c, target: Optional[PolyRing] = None):
        source = center.ring
        if isinstance(c, str):
            if c not in source:
                raise AlgebraError(f"chart variable {c!r} is not a variable of the chart")
            c = source.index(c)
        if c not in center.variables:
            raise AlgebraError(
                f"chart variable {source.names[c]!r} is not in the center {center.names()}"
            )
        target = target or primed(source)
        if target.ngens != source.ngens:
            raise AlgebraError("target chart must have the same dimension")
        self.center = center
        self.source = source
        self.target = target
        self.c = c
        xc = target.var(c)
        images = []
        for j in range(source.ngens):
            if j in center.variables and j != c:
                images.append(xc * target.var(j))
            else:
                images.append(target.var(j))
        self.images = images
        self._mapping = dict(enumerate(images))

    @property
    def exceptional(self) -> int:
        return self.c

    def pull(self, f: Polynomial) -> Polynomial:
        return f.substitute(self._mapping, self.target)

    def describe(self) -> Dict[str, str]:
        return {self.source.names[j]: str(img) for j, img in enumerate(self.images)}

    def __repr__(self):
        subs = ", ".join(f"{k} -> {v}" for k, v in self.describe().items())
        return f"ChartMap({subs})"


def blowup_chart(center: BlowupCenter, c, target: Optional[PolyRing] = None) -> ChartMap:
    return ChartMap(center, c, target)


def total_transform_ideal(I: Ideal, m: ChartMap) -> Ideal:
    return Ideal(m.target, [m.pull(f) for f in I.generators])


def check_order_one(I: Ideal, m: ChartMap) -> Optional[Polynomial]:
    """First generator of I outside the center ideal, or None."""
    for f in I.generators:
        if not m.center.contains_polynomial(f):
            return f
    return None


def controlled_transform_ideal(I: Ideal, m: ChartMap) -> Ideal:
    bad = check_order_one(I, m)
    if bad is not None:
        raise OrderOneViolation(f"generator {bad} does not vanish on the center {m.center.names()}")
    gens = []
    for f in I.generators:
        try:
            gens.append(m.pull(f).exact_divide_by_variable(m.c, 1))
        except NotDivisible as exc:
            raise OrderOneViolation(str(exc)) from None
    return Ideal(m.target, gens)


def pullback_derivation(X: Derivation, m: ChartMap) -> LaurentDerivation:
    """The Laurent field X* with X*(sigma^* f) = sigma^*(X f)."""
    if X.ring != m.source:
        raise AlgebraError("derivation does not live on the source chart")
    c = m.c
    pulled = [m.pull(a) for a in X.coeffs]  # sigma^*(X(x_j))
    xc_image = LaurentPolynomial(pulled[c])
    coeffs = []
    for j in range(m.source.ngens):
        if j in m.center.variables and j != c:
            num = LaurentPolynomial(pulled[j]) - xc_image * m.target.var(j)
            coeffs.append(num * LaurentPolynomial(m.target.one, {c: 1}))
        else:
            coeffs.append(LaurentPolynomial(pulled[j]))
    return LaurentDerivation(m.target, coeffs, {c})


def pullback_distribution(theta, m: ChartMap) -> List[LaurentDerivation]:
    theta = _as_gens(theta)
    return [pullback_derivation(X, m) for X in theta.gens]


def adapted_strict_transform(theta, split, m: ChartMap) -> DistributionGens:
    """Strict transform for certified centers.

    ``split`` is either the string ``"invariant"`` (all pullbacks must be
    analytic) or an object with ``Y`` and ``Z`` generator lists: each Y
    pullback is multiplied by the exceptional variable, each Z pullback
    must be analytic.
    """
    theta = _as_gens(theta)
    c = m.c
    if split == "invariant":
        Y, Z = [], list(theta.gens)
    else:
        Y, Z = list(split.Y), list(split.Z)
    out = []
    for X in Y:
        out.append(pullback_derivation(X, m).times_variable(c).to_derivation())
    for X in Z:
        p = pullback_derivation(X, m)
        if not p.is_analytic():
            raise TransformError(f"pullback of invariant generator {X} has a pole: {p}")
        out.append(p.to_derivation())
    for g in out:
        if not is_tangent_to_divisor(g, c):
            raise TransformError(f"strict transform {g} is not tangent to {m.target.names[c]} = 0")
    return DistributionGens(out, theta.d)


def _restrict(X: Derivation, c: int) -> List[Polynomial]:
    ring = X.ring
    images = {j: (ring.zero if j == c else ring.var(j)) for j in range(ring.ngens)}
    return [a.substitute(images, ring) for a in X.coeffs]


def strict_closure_syzygies(gens: Sequence[LaurentDerivation], m: ChartMap,
                            analytic: Sequence[Derivation] = ()) -> List[Derivation]:
    """W-generators (1/x_c) sum f_i Y_i from syzygies of the Y_i restricted to x_c = 0."""
    c = m.c
    ring = m.target
    Ys = []
    for g in gens:
        if g.pole_order(c) > 1:
            raise TransformError(f"input {g} has pole order above one")
        Ys.append(g.times_variable(c).to_derivation())
    if not Ys:
        return []
    restricted = [_restrict(Y, c) for Y in Ys]
    module = list(Ys) + list(analytic)
    out: List[Derivation] = []
    for syz in syzygies(ring, restricted):
        combo = Derivation.zero(ring)
        for f, Y in zip(syz, Ys):
            combo = combo + Y.scale(f)
        if combo.is_zero():
            continue
        try:
            W = Derivation(ring, [a.exact_divide_by_variable(c, 1) for a in combo.coeffs])
        except NotDivisible:
            raise TransformError(f"syzygy combination {combo} is not divisible by the exceptional variable") from None
        if module_membership(module + out, W) is None:
            out.append(W)
    return out


def drop_redundant(gens: List[Derivation]) -> List[Derivation]:
    """Remove zero generators and those in the module of the remaining ones."""
    kept = [g for g in gens if not g.is_zero()]
    i = len(kept) - 1
    while i >= 0 and len(kept) > 1:
        others = kept[:i] + kept[i + 1:]
        if module_membership(others, kept[i]) is not None:
            kept = others
        i -= 1
    return kept


def candidate_module(theta, m: ChartMap) -> Tuple[List[Derivation], List[Derivation]]:
    """Generators of a candidate strict transform for an arbitrary center.

    Returns (generators, W-generators found by the syzygy closure).
    """
    theta = _as_gens(theta)
    c = m.c
    analytic, poles = [], []
    for p in pullback_distribution(theta, m):
        if p.is_analytic():
            analytic.append(p.to_derivation())
        else:
            poles.append(p)
    W = strict_closure_syzygies(poles, m, analytic)
    gens = [p.times_variable(c).to_derivation() for p in poles] + analytic + W
    gens = [g if is_tangent_to_divisor(g, c) else g.scale(m.target.var(c)) for g in gens]
    return drop_redundant(gens), W


# ---------------------------------------------------------------------------
# divisor ledger


class DivisorRecord:
    """One divisor of the ledger as seen in the current chart.

    ``equation`` is the local equation of its strict transform (None when
    the divisor does not meet this chart); ``total`` is its total transform.
    """

    __slots__ = ("origin", "step", "equation", "total")

    def __init__(self, origin: str, step: Optional[int], equation: Optional[Polynomial], total: Polynomial):
        self.origin = origin
        self.step = step
        self.equation = equation
        self.total = total

    @property
    def exceptional(self) -> bool:
        return self.origin == "exceptional"

    def label(self) -> str:
        return f"F{self.step}" if self.exceptional else f"E:{self.total if self.step is None else self.step}"

    def push(self, m: ChartMap) -> "DivisorRecord":
        total = m.pull(self.total)
        eq = None
        if self.equation is not None:
            pulled = m.pull(self.equation)
            # the x_c-adic order of the pullback is the order of f along the center
            k = pulled.divisibility_order(m.c)
            strict = pulled.exact_divide_by_variable(m.c, k) if k else pulled
            eq = None if strict.is_constant() else strict
        return DivisorRecord(self.origin, self.step, eq, total)

    def as_dict(self):
        return {
            "origin": self.origin if self.step is None else f"{self.origin}-{self.step}",
            "equation": None if self.equation is None else str(self.equation),
            "total": str(self.total),
        }

    def __repr__(self):
        return f"DivisorRecord({self.as_dict()})"


class DivisorLedger:
    def __init__(self, records: Sequence[DivisorRecord] = ()):
        self.records = tuple(records)

    @classmethod
    def initial(cls, equations: Sequence[Polynomial]) -> "DivisorLedger":
        return cls([DivisorRecord("initial", None, f, f) for f in equations])

    def push(self, m: ChartMap, step: int) -> "DivisorLedger":
        pushed = [r.push(m) for r in self.records]
        xc = m.target.var(m.c)
        pushed.append(DivisorRecord("exceptional", step, xc, xc))
        return DivisorLedger(pushed)

    def exceptional_records(self) -> List[DivisorRecord]:
        return [r for r in self.records if r.exceptional]

    def __iter__(self):
        return iter(self.records)

    def __len__(self):
        return len(self.records)

    def as_list(self):
        return [r.as_dict() for r in self.records]


class KSheaf:
    """K(alpha): product of alpha-th powers of the exceptional total transforms.

    For alpha >= 0 ``generator`` is the polynomial; ``exponents`` is the
    exponent vector when that product is a monomial.  For negative alpha
    only the formal record is kept.
    """

    def __init__(self, ring: PolyRing, alpha: int, bases: List[Polynomial]):
        self.ring = ring
        self.alpha = alpha
        self.bases = bases
        self.generator: Optional[Polynomial] = None
        self.exponents: Optional[Tuple[int, ...]] = None
        if all(b.is_monomial() and next(iter(b.terms.values())) == 1 for b in bases):
            exps = [0] * ring.ngens
            for b in bases:
                for i, k in enumerate(next(iter(b.terms))):
                    exps[i] += alpha * k
            self.exponents = tuple(exps)
        if alpha >= 0:
            g = ring.one
            for b in bases:
                g = g * b ** alpha
            self.generator = g

    def ideal(self) -> Ideal:
        if self.generator is None:
            raise AlgebraError("K with negative exponent is a formal record only")
        return Ideal(self.ring, [self.generator])

    def describe(self) -> str:
        if self.exponents is not None:
            parts = []
            for name, k in zip(self.ring.names, self.exponents):
                if k == 1:
                    parts.append(name)
                elif k:
                    parts.append(f"{name}^{k}")
            return "(" + ("*".join(parts) if parts else "1") + ")"
        if self.generator is not None:
            return f"({self.generator})"
        return "formal(" + ", ".join(f"({b})^{self.alpha}" for b in self.bases) + ")"

    def __repr__(self):
        return f"KSheaf({self.describe()})"


# ---------------------------------------------------------------------------
# charts and towers


class FoliatedChart:
    """(M, theta, I, E) on one affine chart."""

    def __init__(self, ring: PolyRing, theta: DistributionGens, ideal: Ideal,
                 ledger: DivisorLedger = None, exceptional: Sequence[int] = ()):
        self.ring = ring
        self.theta = theta
        self.ideal = ideal
        self.ledger = ledger or DivisorLedger()
        self.exceptional = tuple(exceptional)

    def with_change(self, change) -> "FoliatedChart":
        """Rewrite the chart data through an affine coordinate change."""
        ledger = DivisorLedger([
            DivisorRecord(r.origin, r.step,
                          None if r.equation is None else change.apply_polynomial(r.equation),
                          change.apply_polynomial(r.total))
            for r in self.ledger
        ])
        return FoliatedChart(
            change.target,
            change.apply_distribution(self.theta),
            Ideal(change.target, [change.apply_polynomial(f) for f in self.ideal.generators]),
            ledger,
            self.exceptional,
        )


class BlowupStep:
    """Record of one blowup: the chart map, transforms and certificates."""

    def __init__(self, chart_map: ChartMap, admissibility, mode: str, pullbacks, total, controlled,
                 theta, W=(), split=None, flags=()):
        self.chart_map = chart_map
        self.admissibility = admissibility
        self.mode = mode
        self.pullbacks = pullbacks
        self.total = total
        self.controlled = controlled
        self.theta = theta
        self.W = list(W)
        self.split = split
        self.flags = list(flags)


class Tower:
    """Append-only sequence of charts; ``blowup`` and ``change`` return new towers."""

    def __init__(self, charts: Sequence[FoliatedChart], steps: Sequence = ()):
        self.charts = tuple(charts)
        self.steps = tuple(steps)

    @classmethod
    def start(cls, theta, ideal: Ideal, divisors: Sequence[Polynomial] = ()) -> "Tower":
        theta = _as_gens(theta)
        return cls([FoliatedChart(theta.ring, theta, ideal, DivisorLedger.initial(divisors))])

    @property
    def current(self) -> FoliatedChart:
        return self.charts[-1]

    @property
    def blowups(self) -> List[BlowupStep]:
        return [s for s in self.steps if isinstance(s, BlowupStep)]

    def chart_maps(self) -> List[ChartMap]:
        return [s.chart_map for s in self.blowups]

    def change(self, change) -> "Tower":
        return Tower(self.charts + (self.current.with_change(change),), self.steps + (change,))

    def blowup(self, center_vars: Sequence, chart_var, names: Optional[Sequence[str]] = None,
               strict: bool = False) -> "Tower":
        """Blow up V(center_vars) and move to the chart of ``chart_var``.

        Admissible centers use the adapted strict transform (invariant or
        split case).  Other centers get the candidate module, unless
        ``strict`` is set, in which case they raise.
        """
        from .admissibility import SplitNotConstructible, admissibility_report, transverse_split

        chart = self.current
        center = BlowupCenter(chart.ring, center_vars)
        target = PolyRing(names) if names else primed(chart.ring)
        m = ChartMap(center, chart_var, target)
        report = admissibility_report(chart.theta, center.ideal())
        total = total_transform_ideal(chart.ideal, m)
        controlled = controlled_transform_ideal(chart.ideal, m)
        pulls = pullback_distribution(chart.theta, m)
        flags = []
        W: List[Derivation] = []
        split = None
        if report.admissible and report.d0 == 0:
            theta = adapted_strict_transform(chart.theta, "invariant", m)
            mode = "invariant"
        elif report.admissible:
            try:
                split = transverse_split(chart.theta, center.ideal(), report)
                theta = adapted_strict_transform(chart.theta, split, m)
                mode = "split"
            except SplitNotConstructible:
                if strict:
                    raise
                gens, W = candidate_module(chart.theta, m)
                theta = DistributionGens(gens, chart.theta.d)
                mode = "candidate"
                flags.append("split not constructible under linear restriction")
        else:
            if strict:
                raise TransformError("center is not admissible")
            gens, W = candidate_module(chart.theta, m)
            theta = DistributionGens(gens, chart.theta.d)
            mode = "candidate"
            flags.append("candidate module: center not admissible")
        step_no = len(self.blowups) + 1
        ledger = chart.ledger.push(m, step_no)
        new_chart = FoliatedChart(target, theta, controlled, ledger, chart.exceptional + (m.c,))
        step = BlowupStep(m, report, mode, pulls, total, controlled, theta, W, split, flags)
        return Tower(self.charts + (new_chart,), self.steps + (step,))

    def pull_total(self, f: Polynomial, start: int = 0) -> Polynomial:
        """Total transform of f from chart ``start`` to the current chart (σ̄*)."""
        for step in self.steps[start:]:
            if isinstance(step, BlowupStep):
                f = step.chart_map.pull(f)
            else:
                f = step.apply_polynomial(f)
        return f


def k_sheaf(tower: Tower, alpha: int) -> KSheaf:
    chart = tower.current
    bases = [r.total for r in chart.ledger.exceptional_records()]
    return KSheaf(chart.ring, alpha, bases)
