"""Center suggestion heuristic for monomial ideals."""

from __future__ import annotations

from itertools import combinations
from typing import Optional

from ..admissibility import admissibility_report
from ..blowup import BlowupCenter
from ..groebner import Ideal


def order_along(ideal: Ideal, subset) -> int:
    """Order of a monomial ideal along V(x_i : i in subset)."""
    return min(sum(e[i] for i in subset) for g in ideal.generators for e in g.terms)


def suggest_center(ideal: Ideal, theta) -> Optional[BlowupCenter]:
    """Largest coordinate subspace where a monomial ideal has maximal order.

    Only monomial ideals are handled.  Among the subsets S of variables with
    order along V(x_S) equal to the order at the origin, the smallest one
    (ties broken by variable order) is returned if it is an admissible
    center; otherwise there is no suggestion.
    """
    gens = ideal.basis()
    if not gens or any(not g.is_monomial() for g in gens):
        return None
    mono = Ideal(ideal.ring, gens)
    n = ideal.ring.ngens
    top = order_along(mono, range(n))
    if top == 0:
        return None
    for size in range(1, n + 1):
        for subset in combinations(range(n), size):
            if order_along(mono, subset) == top:
                center = BlowupCenter(ideal.ring, subset)
                if admissibility_report(theta, center.ideal()).admissible:
                    return center
                return None
    return None
