import pytest
from hypothesis import given
from hypothesis import strategies as st

from foliated_blowup import Derivation, DistributionGens, Ideal, PolyRing
from foliated_blowup.admissibility import (
    CONTAINED,
    NEITHER,
    UNIT,
    PreconditionError,
    SplitNotConstructible,
    admissibility_report,
    invariant_generators,
    transverse_split,
)
from foliated_blowup.derivations import apply_derivation
from foliated_blowup.fitting import is_invariant, is_totally_transverse
from foliated_blowup.groebner import ideal_equal

R = PolyRing(["x", "y", "z"])
x, y, z = R.gens()


def theta(*texts):
    return DistributionGens.parse(list(texts), R)


def I(*gens):
    return Ideal(R, gens)


def test_partial_pair_against_hyperplane():
    rep = admissibility_report(theta("d/dx", "d/dy"), I(x))
    assert rep.admissible and rep.d0 == 1
    assert [r.relation for r in rep.records] == [UNIT, CONTAINED]
    assert not rep.invariant and not rep.totally_transverse


def test_partial_pair_against_parabola():
    rep = admissibility_report(theta("d/dx", "d/dy"), I(x**2 - z))
    assert not rep.admissible
    assert rep.records[0].relation == NEITHER
    k, minor = rep.witness
    assert k == 1 and minor == 2 * x
    assert ideal_equal(rep.records[0].minors + I(x**2 - z), I(x, z))


def test_worked_example_bad_center():
    rep = admissibility_report(theta("d/dz + z*d/dx"), I(x, y))
    assert not rep.admissible
    assert rep.witness == (1, z)


def test_invariant_and_transverse_centers():
    rep = admissibility_report(theta("x*d/dx - y*d/dy"), I(x, y))
    assert rep.admissible and rep.d0 == 0 and rep.invariant
    rep = admissibility_report(theta("d/dz + z*d/dx"), I(x, y, z))
    assert rep.admissible and rep.d0 == 1 and rep.totally_transverse


def test_split_examples():
    sp = transverse_split(theta("d/dx", "d/dy"), I(x))
    assert [str(g) for g in sp.Y] == ["d/dx"] and [str(g) for g in sp.Z] == ["d/dy"]
    assert sp.change.is_identity()
    sp = transverse_split(theta("d/dz + z*d/dx"), I(x, y, z))
    assert [str(g) for g in sp.Y] == ["z*d/dx + d/dz"] and sp.Z == []
    assert [str(f) for f in sp.functions] == ["z"]
    sp = transverse_split(theta("d/dx", "y*d/dy"), I(x, y))
    assert [str(g) for g in sp.Y] == ["d/dx"] and [str(g) for g in sp.Z] == ["y*d/dy"]
    assert sp.change.is_identity()


def test_split_corrects_invariant_part():
    # Z = d/dy - y*d/dx is made to annihilate x
    sp = transverse_split(theta("d/dx", "d/dy + y*d/dx"), I(x))
    assert [str(g) for g in sp.Z] == ["d/dy"]


def test_split_requires_admissible():
    with pytest.raises(PreconditionError):
        transverse_split(theta("d/dx", "d/dy"), I(x**2 - z))


def test_split_not_constructible_for_nonlinear_center():
    # admissible (d0 = 1) but the center has no linear generator
    with pytest.raises(SplitNotConstructible):
        transverse_split(theta("d/dx", "d/dy"), I(x + y**2))


def test_eigen_generators_examples():
    th = theta("x*d/dx - y*d/dy")
    out = invariant_generators(th, I(x**2 + x * y, x**2 - x * y))
    assert sorted(map(str, out)) == ["x*y", "x^2"]
    weights = dict(zip(map(str, out.generators), out.weights))
    assert weights == {"x^2": [2], "x*y": [0]}
    again = invariant_generators(th, I(x**2, x * y))
    assert sorted(map(str, again)) == ["x*y", "x^2"]


def test_eigen_generators_local_semantics():
    out = invariant_generators(theta("d/dx"), I(y + x * y))
    assert [str(h) for h in out] == ["y"]
    assert out.semantics == "local at origin"


def test_eigen_generators_preconditions():
    with pytest.raises(PreconditionError):
        invariant_generators(theta("d/dz + z*d/dx"), I(x))
    with pytest.raises(PreconditionError):
        invariant_generators(theta("d/dx"), I(x))


weights = st.integers(-3, 3)


@given(weights, weights, st.lists(st.tuples(st.integers(0, 2), st.integers(0, 2), st.integers(-2, 2)),
                                  min_size=1, max_size=4))
def test_eigen_generators_generate_same_ideal(a, b, terms):
    th = DistributionGens([Derivation(R, [a * x, b * y, R.zero])])
    f = sum((c * x**i * y**j for i, j, c in terms), R.zero)
    if f.is_zero():
        return
    # the eigen-pieces of f generate an invariant ideal
    J = I(*[R.monomial((i, j, 0)) for i, j, c in terms if c])
    out = invariant_generators(th, J)
    assert ideal_equal(Ideal(R, out.generators), J)
    for h in out:
        k = sum(w * e for w, e in zip([a, b, 0], next(iter(h.terms))))
        assert apply_derivation(th.gens[0], h) == h * k


centers = st.sampled_from([[x], [x, y], [x, y, z], [y, z]])


@given(centers)
def test_invariant_and_transverse_are_admissible(center):
    for th in (theta("x*d/dx + 2*y*d/dy - z*d/dz"), theta("d/dx", "d/dy", "d/dz")):
        rep = admissibility_report(th, I(*center))
        if is_invariant(th, I(*center)):
            assert rep.admissible and rep.d0 == 0
        if is_totally_transverse(th, I(*center)):
            assert rep.admissible and rep.d0 == th.d


@given(st.sampled_from([
    (("d/dx", "d/dy"), (x,)),
    (("d/dx", "y*d/dy"), (x, y)),
    (("d/dz + z*d/dx",), (x, y, z)),
    (("d/dx", "d/dy + y*d/dx"), (x,)),
    (("d/dx", "d/dy", "z*d/dz"), (x, y, z)),
]))
def test_split_consistency(case):
    texts, center = case
    th = theta(*texts)
    sp = transverse_split(th, I(*center))
    assert len(sp.Y) == admissibility_report(th, I(*center)).d0
    assert is_totally_transverse(DistributionGens(sp.Y, len(sp.Y)), Ideal(R, sp.functions))
    if sp.Z:
        assert is_invariant(DistributionGens(sp.Z), I(*center))
