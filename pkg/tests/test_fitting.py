import pytest
from hypothesis import given
from hypothesis import strategies as st

from foliated_blowup import Derivation, DistributionGens, Ideal, PolyRing
from foliated_blowup.fitting import (
    ChainNotStabilized,
    differential_closure,
    fitting_ideal,
    is_invariant,
    is_totally_transverse,
    maximal_tangency_ideal,
    satisfies_regularity_criterion,
    tangency_chain,
    tg_invariant,
    tg_invariant_at_point,
)
from foliated_blowup.groebner import contains_ideal, ideal_equal, is_unit_ideal

from strategies import R2, polynomials

R = PolyRing(["x", "y", "z"])
x, y, z = R.gens()
ORIGIN = [0, 0, 0]


def theta(*texts):
    return DistributionGens.parse(list(texts), R)


def I(*gens):
    return Ideal(R, gens)


def test_fitting_examples():
    th = theta("d/dx", "d/dy")
    assert is_unit_ideal(fitting_ideal(th, I(x), 1))
    gamma2 = fitting_ideal(th, I(x), 2)
    assert gamma2.is_zero() and contains_ideal(I(x), gamma2)
    g1 = fitting_ideal(th, I(x**2 - z), 1)
    assert ideal_equal(g1, I(2 * x))
    assert ideal_equal(g1 + I(x**2 - z), I(x, z))


def test_invariance_examples():
    assert is_invariant(theta("d/dx"), I(y))
    assert not is_invariant(theta("d/dz + z*d/dx"), I(x, y))
    assert is_invariant(theta("x*d/dx - y*d/dy"), I(x, y))


def test_total_transversality_examples():
    assert is_totally_transverse(theta("d/dx", "d/dy"), I(x, y))
    assert is_totally_transverse(theta("d/dx"), I(x, y))
    assert not is_totally_transverse(theta("d/dx"), I(y))


def test_chain_examples():
    ch = tangency_chain(theta("d/dz + z*d/dx"), I(x, y))
    assert ch.stabilized and ch.index == 2
    assert ideal_equal(ch.H(1), I(x, y, z))
    assert is_unit_ideal(ch.H(2))
    ch = tangency_chain(theta("d/dx"), I(y))
    assert ch.index == 0
    ch = tangency_chain(theta("d/dx"), I(x))
    assert ch.index == 1 and is_unit_ideal(ch.H(1))


def test_chain_max_steps():
    with pytest.raises(ValueError):
        tangency_chain(theta("d/dx"), I(x), max_steps=0)
    ch = tangency_chain(theta("d/dx"), I(x**5), max_steps=2)
    assert not ch.stabilized
    with pytest.raises(ChainNotStabilized):
        ch.closure


def test_tg_invariant_examples():
    assert tg_invariant(theta("d/dz + z*d/dx"), I(x, y), ORIGIN) == (2, 1)
    assert tg_invariant(theta("d/dx"), I(y), ORIGIN) == (0, 2)
    S = PolyRing(["x", "y"])
    a, b = S.gens()
    chain = tangency_chain(DistributionGens.parse(["d/dx"], S), Ideal(S, [a * b]))
    assert tg_invariant_at_point(chain, [0, 1]) == (1, 1)


def test_maximal_tangency_ideal():
    chain = tangency_chain(theta("d/dz + z*d/dx"), I(x, y))
    assert ideal_equal(maximal_tangency_ideal(chain, ORIGIN), I(x, y, z))
    assert maximal_tangency_ideal(tangency_chain(theta("d/dx"), I(y)), ORIGIN) is None


def test_closure_examples():
    assert is_unit_ideal(differential_closure(theta("d/dz + z*d/dx"), I(x, y)))
    assert ideal_equal(differential_closure(theta("d/dx"), I(y)), I(y))
    assert ideal_equal(differential_closure(theta("x*d/dx - y*d/dy"), I(x + y)), I(x, y))


def test_regularity_criterion():
    assert satisfies_regularity_criterion(theta("d/dz + z*d/dx"), ORIGIN)
    assert not satisfies_regularity_criterion(theta("x*d/dx"), ORIGIN)
    assert satisfies_regularity_criterion(theta("x*d/dx"), [1, 0, 0])


fields2 = st.lists(polynomials(R2, 1, 2), min_size=2, max_size=2).map(lambda cs: Derivation(R2, cs))


@given(fields2, st.lists(polynomials(R2, 2, 2), min_size=1, max_size=2))
def test_chain_monotone_and_closure_invariant(X, gens):
    th = DistributionGens([X], 1)
    J = Ideal(R2, gens)
    ch = tangency_chain(th, J, max_steps=12)
    assert ch.check_monotone()
    if ch.stabilized:
        assert is_invariant(th, ch.closure)


@given(st.lists(polynomials(R2, 2, 2), min_size=1, max_size=2), polynomials(R2, 2, 2))
def test_fitting_plus_ideal_independent_of_generators(gens, extra):
    # adding a redundant generator does not change Fitting + I
    th = DistributionGens.parse(["d/dx", "x*d/dy"], R2)
    J = Ideal(R2, gens)
    combo = sum((extra * g for g in gens), R2.zero)
    K = Ideal(R2, list(gens) + [combo])
    for k in (1, 2):
        assert ideal_equal(fitting_ideal(th, J, k) + J, fitting_ideal(th, K, k) + K)


@given(st.integers(-2, 2), st.integers(-2, 2))
def test_regularity_matches_rank(a, b):
    th = DistributionGens.parse(["x*d/dx + d/dy", "y*d/dy"], R2)
    p = [a, b]
    assert satisfies_regularity_criterion(th, p) == th.is_regular_at(p)
