"""Deterministic enumeration of points satisfying open conditions."""
from __future__ import annotations

from itertools import count

from ..algebra import FieldSpec
from ..curves import RationalCurve, on_curve
from ..errors import SearchExhausted
from ..projgeom import ProjLine, ProjPoint, collinear, incident

SEARCH_BOUND = 10_000


def enumerate_points(field: FieldSpec):
    """Affine points (i:j:1), i and j running over the scalar enumeration along anti-diagonals."""
    seen = []
    gen = iter(field.elements())
    exhausted = False
    for n in count():
        while not exhausted and len(seen) <= n:
            try:
                seen.append(next(gen))
            except StopIteration:
                exhausted = True
        m = len(seen)
        if exhausted and n > 2 * (m - 1):
            return
        for i in range(max(0, n - m + 1), min(n, m - 1) + 1):
            yield ProjPoint((seen[i], seen[n - i], field.one), field)


def choose_general_point(constraints, field: FieldSpec, bound: int = SEARCH_BOUND) -> ProjPoint:
    """First enumerated point satisfying every predicate in ``constraints``."""
    for k, P in enumerate(enumerate_points(field)):
        if k >= bound:
            break
        if all(c(P) for c in constraints):
            return P
    raise SearchExhausted(f"no point satisfies the constraints within {bound} attempts")


# predicate builders


def off_line(L: ProjLine):
    return lambda P: not incident(P, L)


def off_curve(X: RationalCurve):
    return lambda P: not on_curve(P, X)


def not_equal(*points):
    pts = set(points)
    return lambda P: P not in pts


def no_three_collinear_with(*points):
    pts = list(points)

    def pred(P):
        if P in pts:
            return False
        return not any(collinear(pts[i], pts[j], P) for i in range(len(pts)) for j in range(i + 1, len(pts)))
    return pred
