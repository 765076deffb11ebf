"""Regression towers and property checks shared by the test and acceptance suites.

Every check returns plain dicts and lists of strings, booleans and
integers, so ``suite_report`` can be serialized and compared byte for byte
across runs.
"""

from __future__ import annotations

import json
import random
from fractions import Fraction
from typing import Dict, List, Optional, Sequence

from .algebra import PolyRing, Polynomial
from .blowup import BlowupCenter, ChartMap, Tower, k_sheaf, pullback_distribution
from .derivations import Derivation, DistributionGens, monomiality_at_origin
from .fitting import (
    all_minors,
    fitting_ideal,
    is_invariant,
    satisfies_regularity_criterion,
    tangency_chain,
    tg_invariant,
    tg_invariant_at_point,
)
from .groebner import Ideal, ideal_equal
from .syntax import parse_polynomial_list


class TowerSpec:
    """A scripted tower: start data plus (center variables, chart variable) per blowup.

    ``stages`` lists the step counts after which a resolution stage is
    complete; the tg-invariant must drop strictly between consecutive stage
    ends.
    """

    def __init__(self, name: str, variables: Sequence[str], theta: Sequence[str], ideal: str,
                 steps: Sequence, stages: Sequence[int] = (), ring_tag: str = "Z"):
        self.name = name
        self.variables = list(variables)
        self.theta = list(theta)
        self.ideal = ideal
        self.steps = [(list(c), v) for c, v in steps]
        self.stages = list(stages)
        self.ring_tag = ring_tag

    def start(self) -> Tower:
        ring = PolyRing(self.variables)
        theta = DistributionGens.parse(self.theta, ring)
        return Tower.start(theta, Ideal(ring, parse_polynomial_list(self.ideal, ring)))

    def build(self) -> Tower:
        tower = self.start()
        for center, chart in self.steps:
            tower = tower.blowup(center, chart, strict=True)
        return tower

    def __repr__(self):
        return f"TowerSpec({self.name!r})"


def _primes(names, k):
    return [n + "'" * k for n in names]


XYZ = ["x", "y", "z"]
XY = ["x", "y"]

# Towers for the preservation suite: every center is certified admissible.
PRESERVATION_TOWERS = [
    TowerSpec("golden-good", XYZ, ["d/dz + z*d/dx"], "x, y",
              [(XYZ, "z"), (_primes(XYZ, 1), "z'"), (_primes(XY, 2), "y''")]),
    TowerSpec("euler-weights", XYZ, ["x*d/dx + 2*y*d/dy + z*d/dz"], "x^2, y",
              [(XY, "x"), (_primes(XY, 1), "x'")]),
    TowerSpec("euler-weights-y", XYZ, ["x*d/dx + 2*y*d/dy + z*d/dz"], "x^2, y",
              [(XY, "y")]),
    TowerSpec("partial-z-cusp", XYZ, ["d/dz"], "x^2 + y^3",
              [(XY, "x"), (_primes(XY, 1), "y'")]),
    TowerSpec("partial-z-cusp-y", XYZ, ["d/dz"], "x^2 + y^3",
              [(XY, "y"), (_primes(XY, 1), "y'"), (_primes(XY, 2), "x''")]),
    TowerSpec("two-fields", XYZ, ["d/dz", "x*d/dx + y*d/dy"], "x*y",
              [(XY, "x"), (_primes(XY, 1), "y'")]),
    TowerSpec("partial-x-curve", XYZ, ["d/dx"], "y^2 - z^3",
              [(["y", "z"], "y"), (["y'", "z'"], "z'")]),
    TowerSpec("hyperbolic", XY, ["x*d/dx - y*d/dy"], "x*y",
              [(XY, "x"), (_primes(XY, 1), "y'")]),
    TowerSpec("partial-transverse", XY, ["d/dx"], "x^2, y",
              [(XY, "x")]),
    TowerSpec("partial-transverse-y", XY, ["d/dx"], "x^2, y",
              [(XY, "y")]),
    TowerSpec("split-mixed", XYZ, ["d/dx", "y*d/dy"], "x, y",
              [(XY, "x")]),
    TowerSpec("cusp-curve", XYZ, ["d/dx"], "x^2 + y^3",
              [(XY, "y"), (_primes(XY, 1), "y'")]),
]

# Towers of totally transverse blowups with a one-dimensional distribution.
CHAIN_TOWERS = [
    TowerSpec("golden-step-1", XYZ, ["d/dz + z*d/dx"], "x, y", [(XYZ, "z")], stages=[1]),
    TowerSpec("cusp-point-y", XYZ, ["d/dx"], "x^2 + y^3, z",
              [(XYZ, "y"), (_primes(XYZ, 1), "y'"), (_primes(XYZ, 2), "y''")], stages=[3]),
    TowerSpec("square-x", XY, ["d/dx"], "x^2, y", [(XY, "x")], stages=[1]),
    TowerSpec("square-y", XY, ["d/dx"], "x^2, y", [(XY, "y")], stages=[1]),
    TowerSpec("cusp-curve", XYZ, ["d/dx"], "x^2 + y^3",
              [(XY, "y"), (_primes(XY, 1), "y'")], stages=[2]),
    TowerSpec("cubic-x", XY, ["d/dx"], "y - x^3", [(XY, "x")], stages=[1]),
]

# The golden three-blowup tower, one resolution stage per blowup.
DESCENT_TOWERS = [
    TowerSpec("golden-good", XYZ, ["d/dz + z*d/dx"], "x, y",
              [(XYZ, "z"), (_primes(XYZ, 1), "z'"), (_primes(XY, 2), "y''")], stages=[1, 2, 3]),
] + CHAIN_TOWERS


# ---------------------------------------------------------------------------
# preservation (invariance, regularity, monomiality)


def preservation_records(spec: TowerSpec) -> List[Dict]:
    """One record per blowup; a check is None when its hypothesis does not hold."""
    tower = spec.start()
    out = []
    for center, chart in spec.steps:
        prev = tower.current
        origin = [0] * prev.ring.ngens
        invariant_before = is_invariant(prev.theta, prev.ideal)
        regular_before = prev.theta.is_regular_at(origin)
        monomial_before = monomiality_at_origin(prev.theta, spec.ring_tag).monomial
        tower = tower.blowup(center, chart, strict=True)
        step = tower.blowups[-1]
        cur = tower.current
        invariant_center = step.admissibility.admissible and step.admissibility.d0 == 0
        rec = {
            "center": center,
            "chart": chart,
            "admissible": step.admissibility.admissible,
            "d0": step.admissibility.d0,
            "mode": step.mode,
            "theta": [str(g) for g in cur.theta.gens],
            "ideal": [str(g) for g in cur.ideal.generators],
            "invariance": None,
            "regularity": None,
            "monomial": None,
        }
        if invariant_before and invariant_center:
            rec["invariance"] = is_invariant(cur.theta, cur.ideal)
        if regular_before and invariant_center:
            rec["regularity"] = satisfies_regularity_criterion(cur.theta, [0] * cur.ring.ngens)
        if monomial_before and step.admissibility.admissible:
            rec["monomial"] = monomiality_at_origin(cur.theta, spec.ring_tag).status
        out.append(rec)
    return out


def preservation_failures(records: List[Dict]) -> List[str]:
    bad = []
    for i, r in enumerate(records):
        if not r["admissible"]:
            bad.append(f"step {i + 1}: center not certified")
        if r["invariance"] is False:
            bad.append(f"step {i + 1}: invariance lost")
        if r["regularity"] is False:
            bad.append(f"step {i + 1}: regularity lost")
        if r["monomial"] == "inconclusive":
            bad.append(f"step {i + 1}: monomiality not certified")
    return bad


# ---------------------------------------------------------------------------
# chain identity and descent


def chain_identity_records(spec: TowerSpec) -> List[Dict]:
    """H(theta_k, I_k, j) * K(1) against sum_{i<=j} K(i) * pullback of H(theta_0, I_0, i)."""
    tower = spec.start()
    chain0 = tangency_chain(tower.current.theta, tower.current.ideal)
    nu = chain0.index
    out = []
    for k, (center, chart) in enumerate(spec.steps, 1):
        tower = tower.blowup(center, chart, strict=True)
        step = tower.blowups[-1]
        cur = tower.current
        transverse = step.admissibility.admissible and step.admissibility.d0 == cur.theta.d
        rec = {"step": k, "totally_transverse": transverse, "nu": nu, "identity": []}
        if transverse:
            chain = tangency_chain(cur.theta, cur.ideal)
            K1 = k_sheaf(tower, 1).ideal()
            for j in range(nu + 1):
                lhs = chain.H(j) * K1
                rhs = None
                for i in range(j + 1):
                    pulled = Ideal(cur.ring, [tower.pull_total(f) for f in chain0.H(i).generators])
                    term = k_sheaf(tower, i).ideal() * pulled
                    rhs = term if rhs is None else rhs + term
                rec["identity"].append(ideal_equal(lhs, rhs))
        out.append(rec)
        if not transverse:
            break
    return out


def descent_records(spec: TowerSpec) -> Dict:
    """tg-invariants at every chart origin and the strict-drop verdict across stages."""
    tower = spec.start()
    invs = []
    chart = tower.current
    invs.append(tg_invariant(chart.theta, chart.ideal, [0] * chart.ring.ngens).as_tuple())
    for center, var in spec.steps:
        tower = tower.blowup(center, var, strict=True)
        chart = tower.current
        invs.append(tg_invariant(chart.theta, chart.ideal, [0] * chart.ring.ngens).as_tuple())
    ends = [0] + list(spec.stages)
    drops = [invs[b] < invs[a] for a, b in zip(ends, ends[1:])]
    return {"invariants": [list(t) for t in invs], "stages": list(spec.stages), "drops": drops}


# ---------------------------------------------------------------------------
# flow oracle for the tg-order


FLOW_INSTANCES = [
    (XYZ, "d/dz + z*d/dx", "x, y"),
    (XY, "(1 + x)*d/dx + y*d/dy", "y - x^2"),
    (XY, "d/dx", "x"),
    (XY, "d/dx", "x^2 + y"),
    (XY, "d/dx", "x^3 + y"),
    (XY, "d/dx + x*d/dy", "y"),
    (XY, "d/dx + x^2*d/dy", "y, x^5"),
    (XYZ, "d/dx + y*d/dz", "z, x^2 + y"),
    (XYZ, "d/dx + x*d/dy + y*d/dz", "z"),
    (XYZ, "d/dx + x*d/dy + y*d/dz", "y, z"),
    (XYZ, "d/dy + z*d/dx + y*d/dz", "x - z^3, y^4"),
    (XY, "d/dx + y*d/dy", "y + x^4"),
]


def _integrate(p: Polynomial) -> Polynomial:
    return Polynomial(p.ring, {(e[0] + 1,): c / (e[0] + 1) for e, c in p.terms.items()})


def formal_flow(X: Derivation, degree: int) -> List[Polynomial]:
    """Orbit of the origin, phi' = X(phi), phi(0) = 0, truncated at t^degree (Picard iteration)."""
    T = PolyRing(["t"])
    phi = [T.zero] * X.ring.ngens
    for _ in range(degree + 1):
        phi = [_integrate(a.compose(phi)).truncate(degree) for a in X.coeffs]
    return phi


def t_order(p: Polynomial) -> Optional[int]:
    return min((e[0] for e in p.terms), default=None)


def flow_oracle_record(variables, field: str, ideal: str) -> Dict:
    ring = PolyRing(variables)
    theta = DistributionGens.parse([field], ring)
    I = Ideal(ring, parse_polynomial_list(ideal, ring))
    origin = [0] * ring.ngens
    inv = tg_invariant_at_point(tangency_chain(theta, I), origin)
    N = inv.nu + 2
    phi = formal_flow(theta.gens[0], N)
    orders = [t_order(f.compose(phi).truncate(N)) for f in I.generators]
    finite = [o for o in orders if o is not None]
    flow_nu = min(finite) if finite else None
    return {
        "field": field,
        "ideal": ideal,
        "regular": theta.is_regular_at(origin),
        "nu": inv.nu,
        "type": inv.type,
        "flow_order": flow_nu,
        "agree": flow_nu == inv.nu,
    }


# ---------------------------------------------------------------------------
# Fitting ideals under blowup, randomized


def _random_poly(rng: random.Random, ring: PolyRing, max_deg: int, terms: int) -> Polynomial:
    out = {}
    n = ring.ngens
    for _ in range(terms):
        d = rng.randint(0, max_deg)
        e = [0] * n
        for _ in range(d):
            e[rng.randrange(n)] += 1
        out[tuple(e)] = Fraction(rng.choice([-2, -1, 1, 1, 2, 3]))
    return Polynomial(ring, out)


def random_fitting_configuration(rng: random.Random) -> Dict:
    n = rng.choice([2, 3])
    ring = PolyRing(["x", "y", "z"][:n])
    s = rng.choice([1, 2])
    nfields = rng.randint(s, n)
    fields = [Derivation(ring, [_random_poly(rng, ring, 2, rng.randint(0, 2)) for _ in range(n)])
              for _ in range(nfields)]
    gens = [_random_poly(rng, ring, 2, rng.randint(1, 3)) for _ in range(rng.randint(max(1, s), 2))]
    size = rng.randint(2, n)
    center = sorted(rng.sample(range(n), size))
    chart = rng.choice(center)
    return {"ring": ring, "s": s, "fields": fields, "gens": [g for g in gens if not g.is_zero()] or [ring.var(0)],
            "center": center, "chart": chart}


def fitting_transform_record(cfg: Dict) -> Dict:
    """[Fitting_s(I) + I]^* against Fitting_s(theta^*, I^*) + I^* after clearing x_c^e."""
    ring, s, fields, gens = cfg["ring"], cfg["s"], cfg["fields"], cfg["gens"]
    theta = DistributionGens(fields, len(fields))
    m = ChartMap(BlowupCenter(ring, cfg["center"]), cfg["chart"])
    I = Ideal(ring, gens)
    lhs = Ideal(m.target, [m.pull(f) for f in (fitting_ideal(theta, I, s) + I).generators])
    pulled_gens = [m.pull(f) for f in gens]
    pulls = pullback_distribution(theta, m)
    matrix = [[X.apply(f) for f in pulled_gens] for X in pulls]
    minors = all_minors(matrix, s)
    e = max([q.pole_order(m.c) for q in minors] + [0])
    cleared = [q.times_variable(m.c, e).to_polynomial() for q in minors]
    rhs = Ideal(m.target, cleared + pulled_gens)
    return {
        "variables": list(ring.names),
        "s": s,
        "theta": [str(X) for X in fields],
        "ideal": [str(f) for f in gens],
        "center": [ring.names[i] for i in cfg["center"]],
        "chart": ring.names[cfg["chart"]],
        "cleared_power": e,
        "equal": ideal_equal(lhs, rhs),
    }


def fitting_transform_suite(count: int = 24, seed: int = 20240611) -> List[Dict]:
    rng = random.Random(seed)
    return [fitting_transform_record(random_fitting_configuration(rng)) for _ in range(count)]


# ---------------------------------------------------------------------------
# aggregate report


def suite_report() -> Dict:
    """Golden sessions plus every regression check, as one JSON-ready document."""
    from .session.parser import parse_session
    from .session.runner import run_session
    from .session.cli import GOLDEN_SESSIONS, bundled_session

    return {
        "golden": {name: run_session(parse_session(bundled_session(name))) for name in GOLDEN_SESSIONS},
        "preservation": {t.name: preservation_records(t) for t in PRESERVATION_TOWERS},
        "chain_identity": {t.name: chain_identity_records(t) for t in CHAIN_TOWERS},
        "descent": {t.name: descent_records(t) for t in DESCENT_TOWERS},
        "flow_oracle": [flow_oracle_record(*inst) for inst in FLOW_INSTANCES],
        "fitting_transform": fitting_transform_suite(),
    }


def suite_json() -> str:
    return json.dumps(suite_report(), indent=2, ensure_ascii=False) + "\n"
