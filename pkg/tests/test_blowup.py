import pytest
from hypothesis import given
from hypothesis import strategies as st

from foliated_blowup import Derivation, DistributionGens, Ideal, PolyRing
from foliated_blowup.admissibility import transverse_split
from foliated_blowup.algebra import AlgebraError
from foliated_blowup.blowup import (
    BlowupCenter,
    OrderOneViolation,
    TransformError,
    Tower,
    adapted_strict_transform,
    blowup_chart,
    candidate_module,
    controlled_transform_ideal,
    k_sheaf,
    pullback_derivation,
    strict_closure_syzygies,
    total_transform_ideal,
)
from foliated_blowup.groebner import is_unit_ideal

from strategies import R3, derivations, polynomials

R = PolyRing(["x", "y", "z"])
x, y, z = R.gens()
S = PolyRing(["x", "y"])


def point_chart(ring, c):
    return blowup_chart(BlowupCenter(ring, list(ring.names)), c)


def test_chart_maps():
    m = point_chart(R, "z")
    assert m.describe() == {"x": "x'*z'", "y": "y'*z'", "z": "z'"}
    m = blowup_chart(BlowupCenter(R, ["x", "y"]), "x")
    assert m.describe() == {"x": "x'", "y": "x'*y'", "z": "z'"}
    with pytest.raises(AlgebraError):
        blowup_chart(BlowupCenter(R, ["x", "y"]), "z")
    with pytest.raises(AlgebraError):
        blowup_chart(BlowupCenter(R, ["x", "y"]), "w")


def test_total_transform_examples():
    m = point_chart(R, "z")
    assert [str(g) for g in total_transform_ideal(Ideal(R, [x, y]), m).generators] == ["x'*z'", "y'*z'"]
    assert is_unit_ideal(total_transform_ideal(Ideal.unit(R), m))
    assert [str(g) for g in total_transform_ideal(Ideal(R, [z]), m).generators] == ["z'"]


def test_controlled_transform_examples():
    m = point_chart(R, "z")
    assert [str(g) for g in controlled_transform_ideal(Ideal(R, [x, y]), m).generators] == ["x'", "y'"]
    with pytest.raises(OrderOneViolation):
        controlled_transform_ideal(Ideal(R, [x + 1]), m)
    m2 = blowup_chart(BlowupCenter(R, ["x", "y"]), "x")
    assert is_unit_ideal(controlled_transform_ideal(Ideal(R, [x]), m2))


def test_pullback_examples():
    X = Derivation.parse("d/dz + z*d/dx", R)
    p = pullback_derivation(X, point_chart(R, "z"))
    assert str(p) == "(1/z')*((-x' + z')*d/dx' - y'*d/dy' + z'*d/dz')"
    E = Derivation.parse("x*d/dx + y*d/dy", S)
    assert str(pullback_derivation(E, point_chart(S, "x"))) == "x'*d/dx'"
    dx = Derivation.parse("d/dx", S)
    assert str(pullback_derivation(dx, point_chart(S, "x"))) == "(1/x')*(x'*d/dx' - y'*d/dy')"


def test_adapted_strict_transform_examples():
    X = Derivation.parse("d/dz + z*d/dx", R)
    th = DistributionGens([X])
    split = transverse_split(th, Ideal(R, [x, y, z]))
    out = adapted_strict_transform(th, split, point_chart(R, "z"))
    assert str(out.gens[0]) == "(-x' + z')*d/dx' - y'*d/dy' + z'*d/dz'"
    E = DistributionGens([Derivation.parse("x*d/dx + y*d/dy", R)])
    m = blowup_chart(BlowupCenter(R, ["x", "y"]), "x")
    assert str(adapted_strict_transform(E, "invariant", m).gens[0]) == "x'*d/dx'"
    dx = DistributionGens([Derivation.parse("d/dx", S)])
    split = transverse_split(dx, Ideal(S, S.gens()))
    assert str(adapted_strict_transform(dx, split, point_chart(S, "x")).gens[0]) == "x'*d/dx' - y'*d/dy'"


def test_invariant_marker_rejects_poles():
    dx = DistributionGens([Derivation.parse("d/dx", S)])
    with pytest.raises(TransformError):
        adapted_strict_transform(dx, "invariant", point_chart(S, "x"))


def test_syzygy_closure_example():
    # theta = {d/dx, d/dv} in variables x, v, w, center V(x, v), x-chart
    T = PolyRing(["x", "v", "w"])
    m = blowup_chart(BlowupCenter(T, ["x", "v"]), "x")
    pulls = [pullback_derivation(Derivation.parse(t, T), m) for t in ("d/dx", "d/dv")]
    W = strict_closure_syzygies(pulls, m)
    assert [str(w) for w in W] == ["d/dx'"]
    assert strict_closure_syzygies(pulls[:1], m) == []


def test_syzygy_closure_more_center_than_fields():
    # one transverse field, codimension-three center: no relation to exploit
    m = point_chart(R, "x")
    pulls = [pullback_derivation(Derivation.parse("d/dx", R), m)]
    assert strict_closure_syzygies(pulls, m) == []


def test_candidate_module_is_tangent():
    th = DistributionGens([Derivation.parse("d/dz + z*d/dx", R)])
    m = blowup_chart(BlowupCenter(R, ["x", "y"]), "x")
    gens, W = candidate_module(th, m)
    assert [str(g) for g in gens] == ["x'*z'*d/dx' - y'*z'*d/dy' + x'*d/dz'"]


def test_k_sheaf_examples():
    th = DistributionGens([Derivation.parse("d/dz + z*d/dx", R)])
    t = Tower.start(th, Ideal(R, [x, y])).blowup(["x", "y", "z"], "z")
    assert k_sheaf(t, 1).describe() == "(z')"
    assert k_sheaf(t, 0).describe() == "(1)"
    t = t.blowup(["x'", "y'", "z'"], "z'")
    K = k_sheaf(t, 1)
    assert K.exponents == (0, 0, 2)
    assert K.describe() == "(z''^2)"
    assert k_sheaf(t, -1).describe() == "(z''^-2)"


def test_ledger_tracks_initial_divisor():
    th = DistributionGens([Derivation.parse("d/dz", R)])
    t = Tower.start(th, Ideal(R, [x, y]), divisors=[x + y]).blowup(["x", "y"], "x")
    recs = t.current.ledger.as_list()
    assert recs[0] == {"origin": "initial", "equation": "y' + 1", "total": "x'*y' + x'"}
    assert recs[1] == {"origin": "exceptional-1", "equation": "x'", "total": "x'"}


@given(derivations(R3, 2, 2), polynomials(R3, 3, 3), st.sampled_from(["x", "y", "z"]),
       st.sampled_from([["x", "y"], ["x", "y", "z"], ["x", "z"], ["y", "z"]]))
def test_pullback_identity_and_pole_bound(X, f, c, center):
    if c not in center:
        c = center[0]
    m = blowup_chart(BlowupCenter(R3, center), c)
    p = pullback_derivation(X, m)
    assert p.pole_order(m.c) <= 1
    lhs = p.apply(m.pull(f))
    assert lhs.is_polynomial()
    assert lhs.to_polynomial() == m.pull(X(f))
