"""Dec(C) for the conic C = V(xz - y^2): sigma_{a,b}, its conjugation relation, orbits."""
from __future__ import annotations

from dataclasses import dataclass

from ..algebra import FieldSpec, TernaryForm, mat_inverse
from ..birmap import BirMap, ElementaryQuadratic, MobiusMap, invert, require_quadratic
from ..curves import CONIC, RationalCurve, canonical_model, in_dec, on_curve, param_recover, restrict
from ..errors import (ExcludedPoint, InvalidParameters, NotInAutConic, SearchExhausted,
                      WrongBasePointPattern)
from ..projgeom import ProjPoint, ProjTransform
from .words import Factorization, compose_word, inverse_word, make_factorization, merge_linear

B_D = "B_d"
B_10 = "B_10"
B_01 = "B_01"
B_00 = "B_00"


def conic(field: FieldSpec) -> RationalCurve:
    return canonical_model(CONIC, field)


# ---------------------------------------------------------------------------
# PGL2 and Aut(P^2, C)


def aut_conic_from_pgl2(m: MobiusMap) -> ProjTransform:
    """The unique linear map T with T(s^2 : st : t^2) = param(m(s, t))."""
    (a, b), (c, d) = m.matrix
    return ProjTransform([[a * a, 2 * a * b, b * b],
                          [a * c, a * d + b * c, b * d],
                          [c * c, 2 * c * d, d * d]], m.field)


def pgl2_from_aut_conic(T) -> MobiusMap:
    if isinstance(T, BirMap):
        T = T.is_linear()
        if T is None:
            raise NotInAutConic("not a linear map")
    C = conic(T.field)
    if not in_dec(T.to_birmap(), C):
        raise NotInAutConic("the transform does not preserve the conic")
    return restrict(T.to_birmap(), C, C)


def lambda_ab(a, b, field: FieldSpec) -> ProjTransform:
    a, b = field(a), field(b)
    if a * b == 1:
        raise InvalidParameters("lambda_{a,b} needs ab != 1")
    return aut_conic_from_pgl2(MobiusMap(((1, a), (b, 1)), field))


def mu_c(c, field: FieldSpec) -> ProjTransform:
    c = field(c)
    if not c:
        raise InvalidParameters("mu_c needs c != 0")
    return aut_conic_from_pgl2(MobiusMap(((c, 0), (0, 1)), field))


def sigma_ab(a, b, field: FieldSpec) -> ElementaryQuadratic:
    a, b = field(a), field(b)
    if a * b == 1:
        raise InvalidParameters("sigma_{a,b} needs ab != 1")
    x, y, z = TernaryForm.gens(field)
    q = x * z - y * y
    k = field.one - a * b
    comps = [x * y * k + q * a, x * z - y * y * (a * b), y * z * k + q * b]
    pts = (ProjPoint((1, 0, 0), field), ProjPoint((0, 0, 1), field), ProjPoint((a, 1, b), field))
    return ElementaryQuadratic(BirMap(comps, field), pts)


def conjugation_relation(a, b, c, field: FieldSpec):
    """(a', b', lhs) where lhs = lambda^-1 mu^-1 sigma mu sigma^-1 lambda, which equals sigma_{a',b'}."""
    a, b, c = field(a), field(b), field(c)
    k = a * b
    if not k or k == 1 or not c or c == 1:
        raise InvalidParameters("need ab != 0, 1 and c != 0, 1")
    a2 = (1 - k * c) / (b * (c - 1))
    b2 = (k - c) / (a * (c - 1))
    lam = lambda_ab(a, b, field).to_birmap()
    mu = mu_c(c, field).to_birmap()
    sig = sigma_ab(a, b, field)
    word = [lam, invert(sig), mu, sig, invert(mu), invert(lam)]
    return a2, b2, compose_word(word, field)


def solve_c_for_a(a, b, target, field: FieldSpec):
    """The c with a'(a, b, c) = target."""
    a, b, t = field(a), field(b), field(target)
    den = b * (a + t)
    if not den:
        raise ExcludedPoint("no c reaches this a'")
    return (1 + t * b) / den


def solve_c_for_b(a, b, target, field: FieldSpec):
    a, b, t = field(a), field(b), field(target)
    den = 1 + t * a
    if not den:
        raise ExcludedPoint("no c reaches this b'")
    return a * (b + t) / den


# ---------------------------------------------------------------------------
# orbits


@dataclass
class OrbitLabel:
    kind: str
    d: object = None
    normalizer: ProjTransform | None = None
    points: tuple = ()      # (P, Q, R) with N(P) = (1:0:0), N(Q) = (0:0:1)

    def __str__(self):
        if self.kind == B_D:
            return f"B_d d={self.d}"
        return {B_10: "B_{1,0}", B_01: "B_{0,1}", B_00: "B_{0,0}"}[self.kind]

    @property
    def contracts_tangent(self) -> bool:
        return self.kind != B_D


def split_base_points(tau, C: RationalCurve):
    """(P, Q, R) with P, Q on C and R off C, in the stored base point order."""
    q = require_quadratic(tau)
    on = [p for p in q.base_points if on_curve(p, C)]
    off = [p for p in q.base_points if not on_curve(p, C)]
    if len(on) != 2 or len(off) != 1:
        raise WrongBasePointPattern(f"{len(on)} base points on the curve, {len(off)} off it")
    return on[0], on[1], off[0]


def normalizer(P, Q, C: RationalCurve) -> ProjTransform:
    """N in Aut(P^2, C) with N(P) = (1:0:0), N(Q) = (0:0:1)."""
    F = C.field
    up, uq = param_recover(C, P), param_recover(C, Q)
    M = [[up[0], uq[0]], [up[1], uq[1]]]
    inv = mat_inverse(M, F)
    return aut_conic_from_pgl2(MobiusMap(inv, F))


def _label_for(P, Q, R, C):
    N = normalizer(P, Q, C)
    x, y, z = N.apply(R).coords
    if y:
        x, z = x / y, z / y
        d = x * z
        if d:
            return OrbitLabel(B_D, d, N, (P, Q, R))
        if x:
            return OrbitLabel(B_10, None, N, (P, Q, R))
        if z:
            return OrbitLabel(B_01, None, N, (P, Q, R))
        return OrbitLabel(B_00, None, N, (P, Q, R))
    raise WrongBasePointPattern("third base point lies on the conic")  # pragma: no cover


def orbit_classify(tau, C: RationalCurve | None = None, ordered: bool = False) -> OrbitLabel:
    """Aut(P^2, C)-orbit of the base triple of an elementary quadratic in Dec(C).

    Unordered labels merge B_{1,0} and B_{0,1}; the tie-break reports B_{1,0}.
    """
    tau = require_quadratic(tau)
    C = C or conic(tau.field)
    if not in_dec(tau, C):
        raise WrongBasePointPattern("map does not preserve the conic")
    P, Q, R = split_base_points(tau, C)
    lab = _label_for(P, Q, R, C)
    if not ordered and lab.kind == B_01:
        lab = _label_for(Q, P, R, C)
    return lab


def contracts_tangent(tau, C: RationalCurve) -> bool:
    """True when some side of the base triangle is tangent to C."""
    from ..curves import is_tangent
    from ..projgeom import line_through
    q = require_quadratic(tau)
    p = q.base_points
    return any(is_tangent(line_through(p[i], p[j]), C) for i, j in ((0, 1), (1, 2), (0, 2)))


# ---------------------------------------------------------------------------
# expressing a quadratic in terms of one sigma


def _relation_word(a, b, c, word, field):
    """Word for sigma_{a',b'} given a word evaluating to sigma_{a,b}."""
    lam = lambda_ab(a, b, field).to_birmap()
    mu = mu_c(c, field).to_birmap()
    out = [lam] + inverse_word(word) + [mu] + list(word) + [invert(mu), invert(lam)]
    return merge_linear(out, field)


def _step(a, b, c, field):
    k = a * b
    return (1 - k * c) / (b * (c - 1)), (k - c) / (a * (c - 1))


def _one_step_cs(a, b, kind, d, field):
    """Values of c carrying sigma_{a,b} directly into the requested orbit."""
    k = a * b
    out = []
    if kind == B_D:
        A = k * (1 - d)
        B = -(1 + k * k - 2 * d * k)
        disc = B * B - 4 * A * A
        if not field.is_square(disc):
            return out
        r = field.sqrt(disc)
        for c in ((-B + r) / (2 * A), (-B - r) / (2 * A)) if A else ():
            if c and c != 1 and c not in out:
                out.append(c)
    elif kind == B_10 and k != 1 and k != -1:
        out.append(k)
    elif kind == B_01 and k != 1 and k != -1:
        out.append(1 / k)
    elif kind == B_00 and k == -1:
        out.append(-field.one)
    return out


def _state_kind(a, b):
    k = a * b
    if k:
        return B_D, k
    if a:
        return B_10, None
    if b:
        return B_01, None
    return B_00, None


def _candidates(field, n):
    count = 0
    for c in field.elements(fractions=True):
        if c and c != 1:
            yield c
            count += 1
            if count >= n:
                return


def _path(a, b, kind, d, field, depth):
    """Sequence of c values driving sigma_{a,b} into the requested orbit, or None."""
    if _state_kind(a, b) == (kind, d if kind == B_D else None):
        return []
    for c in _one_step_cs(a, b, kind, d, field):
        return [c]
    if kind == B_00:
        # only ab = -1 reaches (0:1:0); get there first
        p = _path(a, b, B_D, -field.one, field, depth)
        return None if p is None else p + [-field.one]
    if depth <= 1 or not a * b:
        return None
    for c1 in _candidates(field, 400 if depth == 2 else 30):
        a1, b1 = _step(a, b, c1, field)
        if not a1 or not b1 or a1 * b1 == 1:
            continue
        p = _path(a1, b1, kind, d, field, depth - 1)
        if p is not None:
            return [c1] + p
    return None


def reach_orbit(a, b, kind, d, field: FieldSpec, max_depth: int = 3):
    """(a', b', word) with word evaluating to sigma_{a',b'} in the requested orbit (ordered labels).

    Each application of the conjugation relation moves sigma_{a,b} to another
    orbit; reaching a prescribed B_d may need a square root, so short chains
    through intermediate orbits are searched in a fixed order.
    """
    a, b = field(a), field(b)
    for depth in range(1, max_depth + 1):
        path = _path(a, b, kind, d, field, depth)
        if path is not None:
            break
    else:
        raise SearchExhausted(f"no relation chain reaches the orbit {kind} from sigma_{{{a},{b}}}")
    word = [sigma_ab(a, b, field)]
    for c in path:
        word = _relation_word(a, b, c, word, field)
        a, b = _step(a, b, c, field)
    return a, b, word


def express_quadratic_in_sigma(tau, seed=(2, 1), C: RationalCurve | None = None) -> Factorization:
    """A word in Aut(P^2, C) and sigma_seed evaluating exactly to tau."""
    tau = require_quadratic(tau)
    F = tau.field
    C = C or conic(F)
    a, b = F(seed[0]), F(seed[1])
    if not a * b or a * b == 1:
        raise InvalidParameters("seed needs ab != 0, 1")
    lab = orbit_classify(tau, C, ordered=True)
    a2, b2, word = reach_orbit(a, b, lab.kind, lab.d, F)
    # align sigma_{a2,b2} with tau's base triple by an element of Aut(P^2, C)
    x, one, z = _normalized_R(lab)
    if a2:
        lam = x / a2
    elif b2:
        lam = b2 / z
    else:
        lam = F.one
    g = lab.normalizer.inverse().compose(mu_c(lam, F)).to_birmap()
    g_inv = invert(g)
    rho_inv = invert(sigma_ab(a2, b2, F))
    gamma = tau.compose(g).compose(rho_inv).compose(g_inv)
    if gamma.degree != 1:  # pragma: no cover
        raise ArithmeticError("alignment left a nonlinear residue")
    maps = [g_inv] + list(word) + [g, gamma]
    return make_factorization(tau, C, maps)


def _normalized_R(lab: OrbitLabel):
    R = lab.normalizer.apply(lab.points[2])
    x, y, z = R.coords
    return x / y, y / y, z / y
