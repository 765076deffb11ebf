import pytest

from foliated_blowup.session import parse_session, print_session
from foliated_blowup.session.cli import bundled_session
from foliated_blowup.session.parser import (
    DimensionMismatchError,
    SessionSyntaxError,
    UndeclaredIdentifierError,
)

MINIMAL = 'space 2 vars x y ring Z; distribution theta gens "d/dx"; ideal I gens "y"; report'


def test_minimal_script():
    s = parse_session(MINIMAL)
    assert len(s) == 4
    assert [st.keyword for st in s.statements] == ["space", "distribution", "ideal", "report"]
    assert s.variables == ("x", "y")


@pytest.mark.parametrize("name", ["worked_example_good", "worked_example_bad"])
def test_bundled_scripts_have_twelve_statements(name):
    s = parse_session(bundled_session(name))
    assert len(s) == 12


def test_worked_example_keywords():
    s = parse_session(bundled_session("worked_example_good"))
    assert [st.keyword for st in s.statements] == [
        "space", "distribution", "ideal", "assert-monomial", "blowup", "linear-change",
        "blowup", "assert-monomial", "blowup", "assert-monomial", "assert-resolved", "report",
    ]


def test_undeclared_center_variable_is_positioned():
    text = MINIMAL.replace("; report", "") + '\nblowup center="x,w" chart=x\n'
    with pytest.raises(UndeclaredIdentifierError) as err:
        parse_session(text)
    assert (err.value.line, err.value.col) == (2, 18)
    assert "w" in str(err.value)
    assert list(err.value.expected) == ["x", "y"]


def test_primed_names_after_blowup():
    text = MINIMAL.replace("; report", '; blowup center="x,y" chart=x; check-admissible center="x\',y\'"')
    assert len(parse_session(text)) == 5
    with pytest.raises(UndeclaredIdentifierError):
        parse_session(MINIMAL.replace("; report", '; check-admissible center="x\',y\'"'))


def test_undo_restores_names():
    text = MINIMAL.replace("; report", '; blowup center="x,y" chart=x; undo; check-admissible center="x,y"')
    assert len(parse_session(text)) == 6


def test_dimension_mismatch():
    with pytest.raises(DimensionMismatchError):
        parse_session("space 3 vars x y ring Z")


def test_unknown_keyword_and_option():
    with pytest.raises(SessionSyntaxError) as err:
        parse_session("space 1 vars x ring Z\nexplode")
    assert err.value.line == 2
    with pytest.raises(SessionSyntaxError):
        parse_session(MINIMAL.replace("report", "blowup center=\"x\" chart=x color=red"))


def test_statement_before_space():
    with pytest.raises(SessionSyntaxError):
        parse_session('ideal I gens "x"')


def test_bad_expression_in_quotes():
    with pytest.raises(SessionSyntaxError) as err:
        parse_session(MINIMAL.replace('gens "y"', 'gens "y +"'))
    assert err.value.line == 1


@pytest.mark.parametrize("name", ["worked_example_good", "worked_example_bad"])
def test_print_round_trip(name):
    s = parse_session(bundled_session(name))
    text = print_session(s)
    again = parse_session(text)
    assert print_session(again) == text
    assert [st.text() for st in again.statements] == [st.text() for st in s.statements]


def test_comments_and_blank_lines():
    s = parse_session("# header\n\nspace 1 vars x ring Q  # trailing\n")
    assert len(s) == 1 and s.ring_tag == "Q"


def test_empty_script():
    assert len(parse_session("")) == 0
