"""The curves X_d = V(x^d - y^(d-1) z), their maps tau_a, and small automorphism groups."""
from __future__ import annotations

from dataclasses import dataclass

from ..algebra import FieldSpec, TernaryForm
from ..birmap import BirMap, as_map, is_elementary_quadratic, sigma_standard
from ..curves import NODAL, RationalCurve, canonical_model, in_dec, xd_model
from ..errors import InvalidParameters, NotASquare
from ..projgeom import ProjTransform, coordinate_points


def xd_curve(d: int, field: FieldSpec) -> RationalCurve:
    if d < 4:
        raise InvalidParameters("the X_d family starts at d = 4")
    return xd_model(d, field)


def xd_tau(d: int, a, field: FieldSpec) -> BirMap:
    """tau_a = (x y^(d-1) : y^d : (1-a) x^d + a y^(d-1) z), an element of Ine(X_d)."""
    a = field(a)
    if not a:
        raise InvalidParameters("tau_a needs a != 0")
    x, y, z = TernaryForm.gens(field)
    return BirMap([x * y**(d - 1), y**d, x**d * (1 - a) + y**(d - 1) * z * a], field)


def xd_aut(d: int, a, field: FieldSpec) -> ProjTransform:
    """(a x : y : a^d z), which preserves X_d."""
    a = field(a)
    if not a:
        raise InvalidParameters("the automorphism needs a != 0")
    return ProjTransform.diagonal(field, a, field.one, a**d)


def xd_sigma(field: FieldSpec):
    return sigma_standard(field)


@dataclass
class IsStandardUpToAut:
    """tau = witness o sigma with witness in Aut(P^2, X_d)."""
    witness: ProjTransform

    def __bool__(self):
        return True


@dataclass
class NotInDec:
    reason: str

    def __bool__(self):
        return False


def _diagonal_param(T: ProjTransform, d: int):
    """a with T = (a x : y : a^d z), or None."""
    m = T.matrix
    if any(m[i][j] for i in range(3) for j in range(3) if i != j):
        return None
    if not m[1][1]:
        return None
    a, c = m[0][0] / m[1][1], m[2][2] / m[1][1]
    return a if a**d == c else None


def xd_quadratic_checker(tau, d: int) -> IsStandardUpToAut | NotInDec:
    """Decide whether an elementary quadratic map preserves X_d; if so return lambda with tau = lambda o sigma.

    Only sigma composed with automorphisms of X_d qualifies, so a positive
    answer always comes with the coordinate triangle as base triple.
    """
    tau = as_map(tau)
    F = tau.field
    X = xd_model(d, F)
    q = is_elementary_quadratic(tau)
    if not q:
        return NotInDec(f"not an elementary quadratic map ({q.reason})")
    if not in_dec(q, X):
        return NotInDec("the map does not preserve X_d")
    if set(q.base_points) != set(coordinate_points(F)):
        # a quadratic in Dec(X_d) with another base triangle would contradict the uniqueness statement
        raise AssertionError(f"base points {q.base_points} preserve X_d but are not the coordinate triangle")
    lam = q.compose(sigma_standard(F)).is_linear()
    if lam is None or _diagonal_param(lam, d) is None:
        raise AssertionError("tau o sigma is not an automorphism of X_d")
    return IsStandardUpToAut(lam)


# ---------------------------------------------------------------------------
# automorphism groups of the singular cubics


def cube_root_of_unity(field: FieldSpec):
    """A primitive cube root of unity, from the roots of w^2 + w + 1."""
    disc = field(-3)
    if not field.is_square(disc):
        raise NotASquare(f"-3 is not a square in {field.name}; no primitive cube root of unity")
    return (field.sqrt(disc) - 1) / 2


def nodal_aut_generators(field: FieldSpec):
    """Generators diag(w, w^2, 1) and the swap of x and y for Aut(P^2, V(x^3 + y^3 - xyz))."""
    w = cube_root_of_unity(field)
    z = field.zero
    return (ProjTransform.diagonal(field, w, w * w, field.one),
            ProjTransform([[z, 1, z], [1, z, z], [z, z, 1]], field))


def cuspidal_aut(a, field: FieldSpec) -> ProjTransform:
    return xd_aut(3, a, field)


def group_closure(generators, limit: int = 1000):
    """All products of the generators, by breadth-first closure."""
    gens = list(generators)
    identity = ProjTransform.identity(gens[0].field)
    seen = {identity}
    frontier = [identity]
    while frontier:
        nxt = []
        for g in frontier:
            for h in gens:
                k = h.compose(g)
                if k not in seen:
                    seen.add(k)
                    nxt.append(k)
                    if len(seen) > limit:
                        raise ValueError(f"group closure exceeds {limit} elements")
        frontier = nxt
    return seen


def nodal_curve(field: FieldSpec) -> RationalCurve:
    return canonical_model(NODAL, field)
