from hypothesis import given
from hypothesis import strategies as st

from foliated_blowup import Ideal, PolyRing
from foliated_blowup import groebner as gb
from foliated_blowup.groebner import (
    GREVLEX,
    LEX,
    contains,
    contains_ideal,
    eliminate,
    ideal_equal,
    ideal_lift,
    ideal_quotient,
    intersect,
    is_unit_ideal,
    lift,
    module_groebner,
    normal_form,
    syzygies,
)

from strategies import R2, R3, monomials, polynomials

R = PolyRing(["x", "y", "z"])
x, y, z = R.gens()


def I(*gens):
    return Ideal(R, gens)


def test_groebner_examples():
    assert list(gb.groebner(I(x), LEX)) == [x]
    S = PolyRing(["x", "y"])
    a, b = S.gens()
    G = gb.groebner(Ideal(S, [a * b - 1, b**2 - 1]), LEX)
    assert sorted(map(str, G)) == sorted(["x - y", "y^2 - 1"])
    assert list(gb.groebner(Ideal(R, [R.zero]))) == []


def test_normal_form_examples():
    assert normal_form(x**2, gb.groebner(I(x))).is_zero()
    assert normal_form(R.one, gb.groebner(I(x))) == R.one
    assert normal_form(x + y, gb.groebner(I(x - y), LEX)) == 2 * y


def test_contains_examples():
    assert contains(I(x, y), x + y)
    assert not contains(I(x**2 - z, y), x)
    assert contains(I(y), R.zero)


def test_ideal_equal_examples():
    assert ideal_equal(I(2 * x, x**2 - z), I(x, z))
    assert not ideal_equal(I(x), I(x**2))
    assert ideal_equal(I(x + y, x - y), I(x, y))


def test_quotient_examples():
    assert ideal_equal(ideal_quotient(I(x * y), I(x)), I(y))
    assert ideal_equal(ideal_quotient(I(x), Ideal.unit(R)), I(x))
    assert ideal_equal(ideal_quotient(I(x**2, x * y), I(x)), I(x, y))


def test_unit_examples():
    assert is_unit_ideal(I(x, 1 + x))
    assert not is_unit_ideal(I(x, y))
    assert is_unit_ideal(I(R.const(3)))


def test_elimination():
    # x = t^2, y = t^3 gives the cusp
    S = PolyRing(["t", "x", "y"])
    t, a, b = S.gens()
    out = eliminate(Ideal(S, [a - t**2, b - t**3]), 1)
    assert len(out) == 1
    assert out[0].ring.names == ("x", "y")
    assert str(out[0].monic()) == "x^3 - y^2"


def test_intersection():
    assert ideal_equal(intersect(I(x), I(y)), I(x * y))
    assert ideal_equal(intersect(I(x**2, y), I(x)), I(x**2, x * y))


def test_ideal_lift_certificate():
    J = I(x * y - 1, y**2 - 1)
    coeffs = ideal_lift(J, x - y)
    assert coeffs is not None
    assert sum((c * g for c, g in zip(coeffs, J.generators)), R.zero) == x - y
    assert ideal_lift(I(x), y) is None


def test_syzygies_of_coordinates():
    syz = syzygies(R, [[x], [y]])
    assert len(syz) == 1
    a, b = syz[0]
    assert (a * x + b * y).is_zero()
    assert not a.is_zero()


def test_module_membership_and_lift():
    vecs = [[x, R.zero], [R.zero, y]]
    M = module_groebner(R, vecs)
    assert M.contains([x * z, y**2])
    assert not M.contains([y, R.zero])
    c = lift(R, vecs, [x * z, y**2])
    assert c == [z, y]


def test_certified_bases_counter():
    before = gb.certified_count
    gb.CERTIFY = True
    try:
        gb.groebner(I(x**2 - y, x * y - z))
    finally:
        gb.CERTIFY = False
    assert gb.certified_count == before + 1


def brute_member(gens, f):
    """f lies in a monomial ideal iff every term is divisible by a generator."""
    return all(any(all(a >= b for a, b in zip(e, next(iter(g.terms)))) for g in gens) for e in f.terms)


@given(st.lists(monomials(R3, 3).filter(lambda m: not m.is_constant()), min_size=1, max_size=3),
       polynomials(R3, 4, 3))
def test_monomial_membership_oracle(gens, f):
    assert contains(Ideal(R3, gens), f) == brute_member(gens, f)


@given(polynomials(R2, 3, 3), st.lists(polynomials(R2, 2, 3), min_size=1, max_size=3))
def test_normal_form_agrees_with_contains(f, gens):
    J = Ideal(R2, gens)
    G = gb.groebner(J)
    assert contains(J, f) == normal_form(f, G).is_zero()
    for g in gens:
        assert normal_form(g, G).is_zero()


@given(st.lists(polynomials(R2, 2, 2), min_size=1, max_size=2), polynomials(R2, 2, 2))
def test_quotient_property(gens, g):
    J = Ideal(R2, gens)
    if g.is_zero():
        return
    Q = ideal_quotient(J, Ideal(R2, [g]))
    for q in Q.generators:
        assert contains(J, q * g)
    assert contains_ideal(Q, J)


@given(st.lists(polynomials(R2, 2, 3), min_size=1, max_size=3))
def test_basis_is_certified(gens):
    G = gb.groebner(Ideal(R2, gens), GREVLEX)
    assert G.certify()
    H = gb.groebner(Ideal(R2, gens), LEX)
    assert H.certify()
