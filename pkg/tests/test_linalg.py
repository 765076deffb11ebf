from fractions import Fraction as F

from foliated_blowup import linalg


def test_rank_det_inverse():
    m = linalg.to_matrix([[2, -1, 0], [0, 1, 0], [0, 0, 1]])
    assert linalg.rank(m) == 3
    assert linalg.det(m) == 2
    inv = linalg.inverse(m)
    assert linalg.matmul(m, inv) == linalg.identity(3)
    assert linalg.inverse(linalg.to_matrix([[1, 2], [2, 4]])) is None


def test_nullspace():
    m = linalg.to_matrix([[1, 2], [2, 4]])
    (v,) = linalg.nullspace(m)
    assert linalg.matmul(m, [[c] for c in v]) == [[0], [0]]


def test_charpoly_and_roots():
    # [[-1, 0, 1], [0, -1, 0], [0, 0, 1]] has eigenvalues -1, -1, 1
    m = linalg.to_matrix([[-1, 0, 1], [0, -1, 0], [0, 0, 1]])
    cp = linalg.charpoly(m)
    assert cp == [1, 1, -1, -1]
    roots, rest = linalg.rational_roots(cp)
    assert sorted(roots) == [-1, -1, 1]
    assert len(rest) == 1


def test_irrational_roots_are_left_over():
    roots, rest = linalg.rational_roots([F(1), F(0), F(-2)])
    assert roots == []
    assert len(rest) == 3


def test_nilpotent():
    assert linalg.is_nilpotent(linalg.to_matrix([[0, 1], [0, 0]]))
    assert not linalg.is_nilpotent(linalg.identity(2))


def test_primitive_integer():
    assert linalg.primitive_integer([F(1), F(-1, 2), F(0)]) == [2, -1, 0]


def test_perfect_matching():
    assert linalg.perfect_matching([[True, True], [True, False]]) == [1, 0]
    assert linalg.perfect_matching([[True, False], [True, False]]) is None
