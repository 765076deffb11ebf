"""Small exact linear algebra over the rationals (lists of Fraction rows)."""

from __future__ import annotations

from fractions import Fraction
from math import gcd
from typing import List, Optional, Sequence, Tuple

Matrix = List[List[Fraction]]


def to_matrix(rows: Sequence[Sequence]) -> Matrix:
    return [[Fraction(v) for v in row] for row in rows]


def identity(n: int) -> Matrix:
    return [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]


def transpose(m: Matrix) -> Matrix:
    return [list(col) for col in zip(*m)] if m else []


def matmul(a: Matrix, b: Matrix) -> Matrix:
    bt = transpose(b)
    return [[sum((x * y for x, y in zip(row, col)), Fraction(0)) for col in bt] for row in a]


def rref(m: Matrix) -> Tuple[Matrix, List[int]]:
    """Reduced row echelon form and pivot columns."""
    m = [list(r) for r in m]
    rows = len(m)
    cols = len(m[0]) if m else 0
    pivots = []
    r = 0
    for c in range(cols):
        pr = next((i for i in range(r, rows) if m[i][c] != 0), None)
        if pr is None:
            continue
        m[r], m[pr] = m[pr], m[r]
        inv = 1 / m[r][c]
        m[r] = [v * inv for v in m[r]]
        for i in range(rows):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == rows:
            break
    return m, pivots


def rank(m: Matrix) -> int:
    if not m or not m[0]:
        return 0
    return len(rref(m)[1])


def det(m: Matrix) -> Fraction:
    n = len(m)
    m = [list(r) for r in m]
    result = Fraction(1)
    for c in range(n):
        pr = next((i for i in range(c, n) if m[i][c] != 0), None)
        if pr is None:
            return Fraction(0)
        if pr != c:
            m[c], m[pr] = m[pr], m[c]
            result = -result
        result *= m[c][c]
        for i in range(c + 1, n):
            f = m[i][c] / m[c][c]
            if f:
                m[i] = [a - f * b for a, b in zip(m[i], m[c])]
    return result


def inverse(m: Matrix) -> Optional[Matrix]:
    n = len(m)
    aug = [list(row) + ident for row, ident in zip(m, identity(n))]
    red, piv = rref(aug)
    if piv[:n] != list(range(n)):
        return None
    return [row[n:] for row in red]


def nullspace(m: Matrix) -> Matrix:
    """Basis of {v : m v = 0}, one vector per free column."""
    cols = len(m[0]) if m else 0
    red, piv = rref(m)
    basis = []
    for free in range(cols):
        if free in piv:
            continue
        v = [Fraction(0)] * cols
        v[free] = Fraction(1)
        for row, p in zip(red, piv):
            v[p] = -row[free]
        basis.append(v)
    return basis


def row_space_basis(vectors: Matrix) -> Matrix:
    """RREF rows spanning the same space as ``vectors``."""
    if not vectors:
        return []
    red, piv = rref(vectors)
    return red[: len(piv)]


def primitive_integer(v: Sequence[Fraction]) -> List[Fraction]:
    """Scale to coprime integers with the first nonzero entry positive."""
    den = 1
    for x in v:
        den = den * x.denominator // gcd(den, x.denominator)
    ints = [int(x * den) for x in v]
    g = 0
    for x in ints:
        g = gcd(g, x)
    if g == 0:
        return [Fraction(0)] * len(v)
    ints = [x // g for x in ints]
    lead = next(x for x in ints if x)
    if lead < 0:
        ints = [-x for x in ints]
    return [Fraction(x) for x in ints]


def charpoly(m: Matrix) -> List[Fraction]:
    """Characteristic polynomial det(tI - m) by Faddeev–LeVerrier.

    Returns coefficients [c_n, ..., c_0] with c_n = 1 (highest degree first).
    """
    n = len(m)
    coeffs = [Fraction(1)]
    mk = [[Fraction(0)] * n for _ in range(n)]
    ident = identity(n)
    c = Fraction(1)
    for k in range(1, n + 1):
        # M_k = A M_{k-1} + c_{n-k+1} I
        mk = [[a + c * b for a, b in zip(r1, r2)] for r1, r2 in zip(matmul(m, mk), ident)]
        am = matmul(m, mk)
        c = -sum(am[i][i] for i in range(n)) / k
        coeffs.append(c)
    return coeffs


def _divisors(k: int) -> List[int]:
    k = abs(k)
    out = []
    i = 1
    while i * i <= k:
        if k % i == 0:
            out.append(i)
            if i * i != k:
                out.append(k // i)
        i += 1
    return sorted(out)


def poly_eval(coeffs: Sequence[Fraction], x: Fraction) -> Fraction:
    v = Fraction(0)
    for c in coeffs:
        v = v * x + c
    return v


def deflate(coeffs: Sequence[Fraction], root: Fraction) -> List[Fraction]:
    out = []
    acc = Fraction(0)
    for c in coeffs[:-1]:
        acc = acc * root + c
        out.append(acc)
    return out


def rational_roots(coeffs: Sequence[Fraction]) -> Tuple[List[Fraction], List[Fraction]]:
    """Rational roots with multiplicity, plus the leftover factor (highest degree first)."""
    coeffs = list(coeffs)
    roots: List[Fraction] = []
    while len(coeffs) > 1 and coeffs[-1] == 0:
        roots.append(Fraction(0))
        coeffs = coeffs[:-1]
    changed = True
    while changed and len(coeffs) > 1:
        changed = False
        den = 1
        for c in coeffs:
            den = den * c.denominator // gcd(den, c.denominator)
        ints = [int(c * den) for c in coeffs]
        lead, const = ints[0], ints[-1]
        for p in _divisors(const):
            for q in _divisors(lead):
                for cand in (Fraction(p, q), Fraction(-p, q)):
                    if poly_eval(coeffs, cand) == 0:
                        roots.append(cand)
                        coeffs = deflate(coeffs, cand)
                        changed = True
                        break
                if changed:
                    break
            if changed:
                break
    return sorted(roots), coeffs


def is_nilpotent(m: Matrix) -> bool:
    n = len(m)
    p = identity(n)
    for _ in range(n):
        p = matmul(p, m)
    return all(v == 0 for row in p for v in row)


def perfect_matching(allowed: List[List[bool]]) -> Optional[List[int]]:
    """Assign each row a distinct column with allowed[row][col]; rows in order."""
    n = len(allowed)
    match_col = [-1] * (len(allowed[0]) if allowed else 0)

    def try_row(r, seen):
        for c, ok in enumerate(allowed[r]):
            if ok and not seen[c]:
                seen[c] = True
                if match_col[c] < 0 or try_row(match_col[c], seen):
                    match_col[c] = r
                    return True
        return False

    for r in range(n):
        if not try_row(r, [False] * len(match_col)):
            return None
    assignment = [0] * n
    for c, r in enumerate(match_col):
        if r >= 0:
            assignment[r] = c
    return assignment
