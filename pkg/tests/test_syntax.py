import pytest

from foliated_blowup import PolyRing
from foliated_blowup.syntax import (
    ExprSyntaxError,
    UndeclaredIdentifier,
    identifiers_in,
    parse_derivation_coefficients,
    parse_polynomial,
    parse_polynomial_list,
    split_list,
)

R = PolyRing(["x", "y", "z"])
P = PolyRing(["x'", "y'", "z'"])


def test_parse_polynomial_precedence():
    x, y, z = R.gens()
    assert parse_polynomial("x + 2*y^2 - (x - z)/2", R) == x / 2 + 2 * y**2 + z / 2
    assert parse_polynomial("-x^2", R) == -(x**2)


def test_parse_primed_names():
    xp, _, zp = P.gens()
    assert parse_polynomial("2*x' - z'", P) == 2 * xp - zp


def test_parse_derivation():
    coeffs = parse_derivation_coefficients("d/dz + z*d/dx", R)
    assert coeffs == [R.var("z"), R.zero, R.one]
    coeffs = parse_derivation_coefficients("(x - y)*d/dx - 2*d/dy", R)
    assert coeffs == [R.var("x") - R.var("y"), R.const(-2), R.zero]


def test_function_where_field_expected():
    with pytest.raises(ExprSyntaxError):
        parse_derivation_coefficients("x + 1", R)


def test_field_where_function_expected():
    with pytest.raises(ExprSyntaxError):
        parse_polynomial("d/dx", R)


def test_undeclared_identifier_offset():
    with pytest.raises(UndeclaredIdentifier) as err:
        parse_polynomial_list("x, y + w", R)
    assert err.value.pos == 7


def test_unbalanced_parenthesis():
    with pytest.raises(ExprSyntaxError) as err:
        parse_polynomial("(x + y", R)
    assert "')'" in err.value.expected


def test_division_by_polynomial_rejected():
    with pytest.raises(ExprSyntaxError):
        parse_polynomial("1/x", R)


def test_split_list_respects_parentheses():
    parts = split_list("x, (y, z), z")
    assert [p.strip() for p, _ in parts] == ["x", "(y, z)", "z"]
    assert parts[1][1] == 2


def test_identifiers_in():
    assert identifiers_in("z*d/dx' + y~") == [("z", 0), ("x'", 2), ("y~", 10)]
