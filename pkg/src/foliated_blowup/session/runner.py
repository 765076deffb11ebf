"""Execute parsed session scripts against a blowup tower."""

from __future__ import annotations

from fractions import Fraction
from typing import Dict, List, Optional

from ..algebra import AlgebraError, PolyRing
from ..admissibility import SplitNotConstructible, admissibility_report, transverse_split
from ..blowup import BlowupCenter, BlowupStep, Tower, k_sheaf
from ..derivations import (
    CoordinateChange,
    Derivation,
    DistributionGens,
    check_involutive,
    is_tangent_to_divisor,
    monomiality_at_origin,
)
from ..fitting import (
    ChainNotStabilized,
    DEFAULT_MAX_STEPS,
    is_invariant,
    maximal_tangency_ideal,
    tangency_chain,
    tg_invariant_at_point,
)
from ..groebner import Ideal, is_unit_ideal
from ..syntax import parse_derivation_list, parse_polynomial_list, split_list
from .parser import SessionScript, Statement, parse_session
from .suggest import suggest_center

CHART_GLOBAL = "chart-global"


class SessionError(Exception):
    """Operation failure wrapped with the statement location."""

    def __init__(self, stmt: Statement, cause: Exception):
        self.stmt = stmt
        self.cause = cause
        super().__init__(f"line {stmt.line}: {stmt.keyword}: {cause}")


def _polys(ideal: Ideal) -> List[str]:
    return [str(g) for g in ideal.generators]


def _basis(ideal: Ideal) -> List[str]:
    return [str(g) for g in ideal.basis()]


def _fields(theta) -> List[str]:
    return [str(g) for g in theta]


def _point(text: Optional[str], n: int):
    if text is None:
        return [Fraction(0)] * n
    return [Fraction(p.strip()) for p, _ in split_list(text)]


class _State:
    def __init__(self):
        self.ring: Optional[PolyRing] = None
        self.ring_tag = "Z"
        self.theta_name = None
        self.ideal_name = None
        self.theta: Optional[DistributionGens] = None
        self.ideal: Optional[Ideal] = None
        self.divisors = []
        self.history: List[Tower] = []

    @property
    def tower(self) -> Tower:
        if not self.history:
            self.history.append(Tower.start(self.theta, self.ideal, self.divisors))
        return self.history[-1]


def _chart_summary(chart) -> Dict:
    return {
        "variables": list(chart.ring.names),
        "distribution": _fields(chart.theta),
        "ideal": _basis(chart.ideal),
        "divisors": chart.ledger.as_list(),
    }


def _tg(chart, point=None, max_steps=DEFAULT_MAX_STEPS):
    chain = tangency_chain(chart.theta, chart.ideal, max_steps)
    point = point if point is not None else [0] * chart.ring.ngens
    if not chain.stabilized:
        return chain, None
    return chain, tg_invariant_at_point(chain, point)


class Runner:
    def __init__(self, script: SessionScript):
        self.script = script
        self.state = _State()
        self.reports: List[Dict] = []

    def run(self) -> List[Dict]:
        for idx, stmt in enumerate(self.script.statements):
            record = {"index": idx, "statement": stmt.text(), "inputs": {}, "outputs": {},
                      "verdict": "ok", "flags": []}
            try:
                getattr(self, "_do_" + stmt.keyword.replace("-", "_"))(stmt, record)
            except (AlgebraError, ChainNotStabilized, ValueError, ZeroDivisionError) as exc:
                record["verdict"] = "error"
                record["outputs"] = {"error": str(SessionError(stmt, exc))}
                self.reports.append(record)
                break
            self.reports.append(record)
        return self.reports

    # declarations ---------------------------------------------------------
    def _do_space(self, stmt, rec):
        pos = [t.value for t in stmt.positional]
        names = pos[2:]
        if "ring" in names:
            i = names.index("ring")
            self.state.ring_tag = names[i + 1]
            names = names[:i]
        self.state.ring = PolyRing(names)
        rec["outputs"] = {"variables": names, "ring": self.state.ring_tag}

    def _do_distribution(self, stmt, rec):
        pos = stmt.positional
        ring = self.state.ring
        gens = [Derivation(ring, c) for c in parse_derivation_list(pos[2].value, ring)]
        d = int(pos[4].value) if len(pos) == 5 else None
        theta = DistributionGens(gens, d)
        self.state.theta = theta
        self.state.history = []
        self.state.theta_name = pos[0].value
        inv = check_involutive(theta)
        rec["inputs"] = {"name": pos[0].value, "generators": pos[2].value}
        rec["outputs"] = {"generators": _fields(theta), "d": theta.d, "involutive": inv.ok}
        if not inv.ok:
            i, j, br = inv.offending
            rec["outputs"]["offending_bracket"] = {"pair": [i + 1, j + 1], "bracket": str(br)}
            rec["flags"].append("not involutive")

    def _do_ideal(self, stmt, rec):
        pos = stmt.positional
        ring = self.state.ring
        ideal = Ideal(ring, parse_polynomial_list(pos[2].value, ring))
        self.state.ideal = ideal
        self.state.history = []
        self.state.ideal_name = pos[0].value
        rec["inputs"] = {"name": pos[0].value, "generators": pos[2].value}
        rec["outputs"] = {"generators": _polys(ideal), "groebner_basis": _basis(ideal)}

    def _do_divisors(self, stmt, rec):
        ring = self.state.ring
        self.state.divisors = parse_polynomial_list(stmt.positional[0].value, ring)
        self.state.history = []
        rec["outputs"] = {"divisors": [str(f) for f in self.state.divisors]}

    # chart operations -------------------------------------------------------
    def _center(self, stmt):
        chart = self.state.tower.current
        names = [p.strip() for p, _ in split_list(stmt.options["center"])]
        return chart, BlowupCenter(chart.ring, names)

    def _do_check_admissible(self, stmt, rec):
        chart, center = self._center(stmt)
        rep = admissibility_report(chart.theta, center.ideal())
        rec["inputs"] = {"center": center.names(), "distribution": _fields(chart.theta)}
        rec["outputs"] = rep.as_dict()
        if rep.admissible:
            try:
                rec["outputs"]["split"] = transverse_split(chart.theta, center.ideal(), rep).as_dict()
            except SplitNotConstructible as exc:
                rec["outputs"]["split"] = None
                rec["flags"].append(f"split not constructible under linear restriction: {exc}")
        rec["verdict"] = rep.verdict
        rec["flags"].append(CHART_GLOBAL)
        rec["flags"].append("center assumed reduced and regular (not verified)")

    def _do_blowup(self, stmt, rec):
        tower = self.state.tower
        chart = tower.current
        opts = stmt.options
        center = [p.strip() for p, _ in split_list(opts["center"])]
        names = [p.strip() for p, _ in split_list(opts["names"])] if "names" in opts else None
        new = tower.blowup(center, opts["chart"], names)
        step: BlowupStep = new.steps[-1]
        m = step.chart_map
        self.state.history.append(new)
        c_name = m.target.names[m.c]
        rec["inputs"] = {"center": center, "chart": opts["chart"], "distribution": _fields(chart.theta),
                         "ideal": _basis(chart.ideal)}
        rec["outputs"] = {
            "chart_map": m.describe(),
            "exceptional": c_name,
            "admissibility": step.admissibility.as_dict(),
            "strict_transform_mode": step.mode,
            "total_transform": _polys(step.total),
            "controlled_transform": _basis(step.controlled),
            "pullbacks": [str(p) for p in step.pullbacks],
            "strict_transform": _fields(step.theta),
            "syzygy_fields": [str(w) for w in step.W],
            "tangent_to_exceptional": all(is_tangent_to_divisor(g, m.c) for g in step.theta),
            "divisors": new.current.ledger.as_list(),
            "K(1)": k_sheaf(new, 1).describe(),
        }
        if step.split is not None:
            rec["outputs"]["split"] = step.split.as_dict()
        rec["flags"] += step.flags + [CHART_GLOBAL]

    def _do_linear_change(self, stmt, rec):
        tower = self.state.tower
        chart = tower.current
        ring = chart.ring
        forms_text = stmt.positional[0].value
        forms = parse_polynomial_list(forms_text, ring)
        mode = stmt.options.get("mode", "apply")
        if "names" in stmt.options:
            names = [p.strip() for p, _ in split_list(stmt.options["names"])]
        elif mode == "apply":
            names = [n + "~" for n in ring.names]
        else:
            names = list(ring.names)
        change = CoordinateChange.from_forms(ring, PolyRing(names), forms)
        new_chart = chart.with_change(change)
        verdict = monomiality_at_origin(new_chart.theta, self.state.ring_tag)
        rec["inputs"] = {"forms": [str(f) for f in forms], "mode": mode}
        rec["outputs"] = {
            "new_coordinates": {n: str(f) for n, f in zip(names, forms)},
            "inverse": {o: str(f) for o, f in zip(ring.names, change.inverse_images())},
            "distribution": _fields(new_chart.theta),
            "ideal": _basis(new_chart.ideal),
            "monomial_basis": verdict.status == "basis",
        }
        if mode == "apply":
            self.state.history.append(tower.change(change))
        else:
            rec["flags"].append("probe: tower unchanged")

    def _do_undo(self, stmt, rec):
        if len(self.state.history) <= 1:
            raise AlgebraError("nothing to undo")
        self.state.history.pop()
        rec["outputs"] = {"variables": list(self.state.tower.current.ring.names)}

    # assertions ---------------------------------------------------------------
    def _expect(self, stmt, default=True) -> bool:
        return stmt.options.get("expect", "true" if default else "false") == "true"

    def _do_assert_monomial(self, stmt, rec):
        chart = self.state.tower.current
        tag = self.state.ring_tag
        verdict = monomiality_at_origin(chart.theta, tag)
        expect = self._expect(stmt)
        out = {"distribution": _fields(chart.theta), "ring": tag, "status": verdict.status,
               "detail": verdict.detail, "monomial": verdict.monomial}
        if verdict.change is not None:
            out["change"] = verdict.change.describe()
            out["transformed"] = _fields(verdict.transformed)
        ok = verdict.monomial == expect
        if not verdict.monomial:
            out["diagnosis"] = verdict.detail
            rec["flags"].append("linear-monomializable: inconclusive")
            want = stmt.options.get("diagnosis")
            if want is not None and want != verdict.detail:
                ok = False
        if verdict.status == "regular":
            rec["flags"].append("regular at origin")
        rec["outputs"] = out
        rec["inputs"] = {"expect": expect}
        rec["verdict"] = "pass" if ok else "fail"

    def _do_assert_invariant(self, stmt, rec):
        chart = self.state.tower.current
        value = is_invariant(chart.theta, chart.ideal)
        rec["outputs"] = {"invariant": value}
        rec["verdict"] = "pass" if value == self._expect(stmt) else "fail"
        rec["flags"].append(CHART_GLOBAL)

    def _do_assert_resolved(self, stmt, rec):
        chart = self.state.tower.current
        value = is_unit_ideal(chart.ideal)
        rec["outputs"] = {"ideal": _basis(chart.ideal), "resolved": value}
        rec["verdict"] = "pass" if value == self._expect(stmt) else "fail"

    def _do_chain(self, stmt, rec):
        chart = self.state.tower.current
        max_steps = int(stmt.options.get("max", DEFAULT_MAX_STEPS))
        point = _point(stmt.options.get("at"), chart.ring.ngens)
        chain, inv = _tg(chart, point, max_steps)
        out = {"chain": [_basis(I) for I in chain.ideals], "stabilized": chain.stabilized,
               "index": chain.index, "at": [str(c) for c in point]}
        if not chain.stabilized:
            raise ChainNotStabilized(f"tangency chain did not stabilize within {max_steps} steps")
        out["nu"] = inv.nu
        out["type"] = inv.type
        out["closure"] = _basis(chain.closure)
        mtg = maximal_tangency_ideal(chain, point)
        out["mtg"] = None if mtg is None else _basis(mtg)
        rec["outputs"] = out
        rec["flags"].append(CHART_GLOBAL)

    def _do_report(self, stmt, rec):
        tower = self.state.tower
        charts = []
        for chart in tower.charts:
            s = _chart_summary(chart)
            chain, inv = _tg(chart)
            s["tg_invariant_at_origin"] = None if inv is None else [inv.nu, inv.type]
            v = monomiality_at_origin(chart.theta, self.state.ring_tag)
            s["monomial_at_origin"] = v.monomial
            s["monomial_status"] = v.status
            charts.append(s)
        rec["outputs"] = {
            "charts": charts,
            "steps": [_step_summary(s) for s in tower.steps],
            "resolved": is_unit_ideal(tower.current.ideal),
            "K(1)": k_sheaf(tower, 1).describe() if tower.blowups else "(1)",
        }
        rec["flags"].append(CHART_GLOBAL)

    def _do_suggest_center(self, stmt, rec):
        chart = self.state.tower.current
        center = suggest_center(chart.ideal, chart.theta)
        rec["outputs"] = {"center": None if center is None else center.names()}
        if center is None:
            rec["outputs"]["reason"] = "no suggestion"


def _step_summary(step) -> Dict:
    if isinstance(step, BlowupStep):
        return {"kind": "blowup", "center": step.chart_map.center.names(),
                "chart": step.chart_map.source.names[step.chart_map.c],
                "mode": step.mode, "admissible": step.admissibility.admissible,
                "d0": step.admissibility.d0}
    return {"kind": "linear-change", "forms": step.describe()}


def run_session(script) -> List[Dict]:
    if isinstance(script, str):
        script = parse_session(script)
    return Runner(script).run()


def exit_status(reports: List[Dict]) -> int:
    """0 iff no step errored and every assert passed."""
    for r in reports:
        if r["verdict"] in ("fail", "error"):
            return 1
    return 0
