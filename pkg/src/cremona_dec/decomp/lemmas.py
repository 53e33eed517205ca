"""Elementary quadratic maps between curves, the factorization lemmas, and the lifting step."""
from __future__ import annotations

import random
from dataclasses import dataclass
from functools import lru_cache
from itertools import chain, combinations, permutations

from ..algebra import FieldSpec, det, mat_inverse, mat_mul
from ..birmap import BirMap, ElementaryQuadratic, as_map, invert, is_elementary_quadratic, quad_from_points, \
    require_quadratic
from ..curves import (CUSPIDAL, LINE, NODAL, RationalCurve, canonical_model, conic_transport,
                      cubic_transport, image_curve, in_dec, is_tangent, line_intersections, on_curve, param_point,
                      tangent_at, tangent_params_through, tangents_through)
from ..errors import (CremonaError, FieldExtensionRequired, IrrationalMarkers, NotOnto, PreconditionError,
                      SearchExhausted, VerificationFailed, WrongBasePointPattern, WrongTangency)
from ..projgeom import ProjLine, ProjPoint, ProjTransform, collinear, general_position, incident, line_through, meet
from .conic import conic, contracts_tangent, express_quadratic_in_sigma, normalizer, split_base_points
from .search import choose_general_point, enumerate_points, no_three_collinear_with, off_line
from .words import Factorization, absorb_linear, make_factorization


@dataclass
class PhiElement:
    """An elementary quadratic map carrying Y birationally onto Z."""
    map: ElementaryQuadratic
    source: RationalCurve
    target: RationalCurve

    @property
    def base_points(self):
        return self.map.base_points


def validate_phi(phi, Y: RationalCurve, Z: RationalCurve) -> PhiElement:
    q = require_quadratic(phi)
    img = image_curve(q, Y)
    if img.form != Z.form:
        raise NotOnto(f"image of the source curve is {img.form}, not {Z.form}")
    return PhiElement(q, Y, Z)


def line_model(field: FieldSpec) -> RationalCurve:
    return canonical_model(LINE, field)


def _line_of(L: RationalCurve) -> ProjLine:
    return ProjLine.from_form(L.form)


# ---------------------------------------------------------------------------
# constructing elements of Phi


def phi_line_conic(P, Q, R, L: RationalCurve | None = None, C: RationalCurve | None = None) -> PhiElement:
    F = P.field
    L = L or line_model(F)
    C = C or conic(F)
    ell = _line_of(L)
    if any(incident(X, ell) for X in (P, Q, R)):
        raise PreconditionError("base points must lie off the line")
    q = quad_from_points(P, Q, R)
    beta = conic_transport(image_curve(q, L), C)
    return PhiElement(ElementaryQuadratic(beta.to_birmap().compose(q), (P, Q, R)), L, C)


def phi_conic_cubic(P, Q, R, curve_class: str, C: RationalCurve | None = None,
                    X: RationalCurve | None = None) -> PhiElement:
    """Base point P on the conic, Q and R off it; the class decides whether QR is tangent."""
    F = P.field
    C = C or conic(F)
    X = X or canonical_model(curve_class, F)
    if not on_curve(P, C):
        raise PreconditionError(f"{P} must lie on the conic")
    if on_curve(Q, C) or on_curve(R, C):
        raise PreconditionError("the second and third base points must lie off the conic")
    q = quad_from_points(P, Q, R)
    QR = line_through(Q, R)
    tangent = is_tangent(QR, C)
    if tangent != (curve_class == CUSPIDAL):
        raise WrongTangency(f"line QR is {'' if tangent else 'not '}tangent, but a {curve_class} was requested")
    if curve_class == NODAL:
        _, complete = line_intersections(QR, C)
        if not complete:
            raise IrrationalMarkers("line QR meets the conic in conjugate points")
    beta = cubic_transport(image_curve(q, C), X)
    return PhiElement(ElementaryQuadratic(beta.to_birmap().compose(q), (P, Q, R)), C, X)


def default_phi_line_conic(field: FieldSpec) -> PhiElement:
    pts = [ProjPoint(c, field) for c in ((0, 0, 1), (1, 0, 1), (0, 1, 1))]
    return phi_line_conic(*pts)


def phi_conic_cubic_candidates(curve_class: str, field: FieldSpec, avoid=(), limit: int = 200, seed: int = 0):
    """Deterministic stream of elements of Phi_{C,X}, built to satisfy the rationality conditions.

    Parameters are drawn from a seeded generator over small field elements so
    that consecutive candidates are in general position with each other.
    """
    C = conic(field)
    X = canonical_model(curve_class, field)
    avoid = set(avoid)
    els = [e for _, e in zip(range(40), field.elements(fractions=True))]
    nonzero = [e for e in els if e]
    rng = random.Random(seed)
    produced = 0
    for _ in range(50 * limit):
        if curve_class == CUSPIDAL:
            v, u = rng.sample(els, 2)
            T, P = param_point(C, v), param_point(C, u)
            A, B = tangent_at(C, T).points()
            w1, w2 = rng.sample(els, 2)
            Q, R = (ProjPoint([A.coords[i] + w * B.coords[i] for i in range(3)], field) for w in (w1, w2))
        else:
            a, b, u = rng.sample(els, 3)
            A, B, P = param_point(C, a), param_point(C, b), param_point(C, u)
            N = normalizer(B, A, C)
            up = _conic_u(N.apply(P))
            q, w = rng.choice(nonzero), rng.choice(nonzero)
            r = w ** 3 * up / q
            Ninv = N.inverse()
            Q = Ninv.apply(ProjPoint((q, 0, 1), field))
            R = Ninv.apply(ProjPoint((r, 0, 1), field))
        if len({P, Q, R}) < 3 or {P, Q, R} & avoid or on_curve(Q, C) or on_curve(R, C) or collinear(P, Q, R):
            continue
        try:
            yield phi_conic_cubic(P, Q, R, curve_class, C, X)
        except CremonaError:
            continue
        produced += 1
        if produced >= limit:
            return


def _conic_u(P):
    """Parameter u with P = (u^2 : u : 1) on xz = y^2 (P not (1:0:0))."""
    x, y, z = P.coords
    return y / z


def default_phi_conic_cubic(curve_class: str, field: FieldSpec) -> PhiElement:
    for phi in phi_conic_cubic_candidates(curve_class, field):
        return phi
    raise SearchExhausted("no element of Phi_{C,X} found")


def dec_line_quadratic(P, Q, R, L: RationalCurve | None = None) -> ElementaryQuadratic:
    """An elementary quadratic in Dec(L) with base points P, Q off L and R on L."""
    F = P.field
    L = L or line_model(F)
    ell = _line_of(L)
    if incident(P, ell) or incident(Q, ell) or not incident(R, ell):
        raise WrongBasePointPattern("need P, Q off the line and R on it")
    q = quad_from_points(P, Q, R)
    img = ProjLine.from_form(image_curve(q, L).form)
    # M = B^-1 A with first rows ell and img gives ell^T M = img^T, so M carries img onto ell
    A, B = _complete_basis(img.coords, F), _complete_basis(ell.coords, F)
    alpha = ProjTransform(mat_mul(mat_inverse(B, F), A), F)
    return ElementaryQuadratic(alpha.to_birmap().compose(q), (P, Q, R))


def _complete_basis(v, F):
    for e1, e2 in (((0, 1, 0), (0, 0, 1)), ((1, 0, 0), (0, 0, 1)), ((1, 0, 0), (0, 1, 0))):
        rows = [list(v), [F(c) for c in e1], [F(c) for c in e2]]
        if det(rows, F):
            return rows
    raise ValueError("zero vector")  # pragma: no cover


# ---------------------------------------------------------------------------
# Lemma B: factor phi2 o phi1^-1 by chains sharing two base points


# chains for different orderings share most of their maps
_cached_inverse = lru_cache(maxsize=512)(invert)


def _chain_letters(maps):
    """Letters m_{j+1} o m_j^-1 for consecutive maps, or None if one is not elementary."""
    letters = []
    for prev, m in zip(maps, maps[1:]):
        letter = m.compose(_cached_inverse(prev))
        if letter.degree == 2:
            q = is_elementary_quadratic(letter)
            if not q:
                return None
            letter = q
        elif letter.degree != 1:
            return None
        letters.append(letter)
    return letters


def _accept(letters, letter_ok):
    if letters is None:
        return False
    if letter_ok is None:
        return True
    return all(l.degree == 1 or letter_ok(l) for l in letters)


def _finish(target, Z, letters):
    return make_factorization(target, Z, absorb_linear(letters, Z.field))


def _conic_chain(phi1: PhiElement, phi2: PhiElement, pts2, letter_ok):
    P1, Q1, R1 = phi1.base_points
    P2, Q2, R2 = pts2
    triples = [(P1, Q1, R2), (P1, Q2, R2)]
    maps = [phi1.map]
    for tr in triples:
        if len(set(tr)) < 3 or collinear(*tr):
            return None
        if set(tr) == set(_pts(maps[-1])):
            continue
        try:
            maps.append(phi_line_conic(*tr, phi1.source, phi1.target).map)
        except CremonaError:
            return None
    maps.append(phi2.map)
    letters = _chain_letters(maps)
    return letters if _accept(letters, letter_ok) else None


def _pts(m):
    return m.base_points if isinstance(m, ElementaryQuadratic) else ()


def lemma_b_conic(phi1: PhiElement, phi2: PhiElement, letter_ok=None, intertwine_tries: int = 40) -> Factorization:
    """Factor phi2 o phi1^-1 in Dec(C) for phi1, phi2 in Phi_{L,C}.

    ``letter_ok`` optionally restricts the quadratic letters (for instance to
    letters contracting no tangent line of C); chains violating it are
    discarded and a third map is intertwined instead.
    """
    C = phi1.target
    target = phi2.map.compose(invert(phi1.map))
    if target.degree == 1:
        return _finish(target, C, [target])
    direct = _lemma_b_conic_direct(phi1, phi2, letter_ok)
    if direct is not None:
        return _finish(target, C, direct)
    F = C.field
    L = phi1.source
    ell = _line_of(L)
    base = list(dict.fromkeys(list(phi1.base_points) + list(phi2.base_points)))
    rejected = set()
    for _ in range(intertwine_tries):
        pts = []
        for _ in range(3):
            S = choose_general_point([off_line(ell), no_three_collinear_with(*(base + pts)),
                                      lambda P: P not in rejected], F)
            pts.append(S)
        rejected.update(pts)
        try:
            phi3 = phi_line_conic(*pts, L, C)
        except CremonaError:
            continue
        w1 = _lemma_b_conic_direct(phi1, phi3, letter_ok)
        if w1 is None:
            continue
        w2 = _lemma_b_conic_direct(phi3, phi2, letter_ok)
        if w2 is None:
            continue
        return _finish(target, C, w1 + w2)
    raise SearchExhausted("no intertwining map found for the conic chain")


def _lemma_b_conic_direct(phi1, phi2, letter_ok):
    for perm in permutations(phi2.base_points):
        letters = _conic_chain(phi1, phi2, perm, letter_ok)
        if letters is not None:
            return letters
    return None


# cubic level


def _split_phi(phi: PhiElement):
    """(P, Q, R): P on the conic, Q and R off it."""
    C = phi.source
    on = [p for p in phi.base_points if on_curve(p, C)]
    off = [p for p in phi.base_points if not on_curve(p, C)]
    if len(on) != 1 or len(off) != 2:
        raise WrongBasePointPattern("expected one base point on the conic and two off it")
    return on[0], off[0], off[1]


def _cubic_chain(phi1, phi2, triples, cls):
    C, X = phi1.source, phi1.target
    maps = [phi1.map]
    for tr in triples:
        if len(set(tr)) < 3 or collinear(*tr):
            return None
        if set(tr) == set(_pts(maps[-1])):
            continue
        try:
            maps.append(phi_conic_cubic(*tr, cls, C, X).map)
        except CremonaError:
            return None
    maps.append(phi2.map)
    return _chain_letters(maps)


def _nodal_chains(phi1, phi2):
    P1, Q1, R1 = _split_phi(phi1)
    P2, Q2, R2 = _split_phi(phi2)
    for match in ((Q2, R2), (R2, Q2)):
        start = {"P": P1, "Q": Q1, "R": R1}
        goal = {"P": P2, "Q": match[0], "R": match[1]}
        for order in permutations("PQR"):
            cur = dict(start)
            triples = []
            for slot in order[:2]:
                cur[slot] = goal[slot]
                triples.append((cur["P"], cur["Q"], cur["R"]))
            yield triples


def _cuspidal_chains(phi1, phi2):
    C = phi1.source
    P1, A1, B1 = _split_phi(phi1)
    P2, A2, B2 = _split_phi(phi2)
    for Q1, R1 in ((A1, B1), (B1, A1)):
        for Q2, R2 in ((A2, B2), (B2, A2)):
            try:
                L1 = _other_tangent(C, Q1, R1)
                L2 = _other_tangent(C, Q2, R2)
                S = meet(L1, L2)
            except CremonaError:
                continue
            if on_curve(S, C):
                continue
            yield [(P1, Q1, S), (P1, Q2, S), (P2, Q2, S)]


def _other_tangent(C, Q, R):
    lines = [L for L in tangents_through(C, Q) if not incident(R, L)]
    if len(lines) != 1:
        raise FieldExtensionRequired("no second tangent line")
    return lines[0]


def _lemma_b_cubic_direct(phi1, phi2, cls):
    chains = _nodal_chains(phi1, phi2) if cls == NODAL else _cuspidal_chains(phi1, phi2)
    for triples in chains:
        letters = _cubic_chain(phi1, phi2, triples, cls)
        if letters is not None:
            return letters
    return None


def _generic_against(new, old) -> bool:
    """New points distinct from the old ones, with no collinear triple involving a new point."""
    if set(new) & set(old) or not general_position(new):
        return False
    pts = list(old) + list(new)
    return not any(collinear(*t) for t in combinations(pts, 3) if any(p in new for p in t))


def _nodal_intertwiners(phi1: PhiElement, phi2: PhiElement, limit: int = 30, seed: int = 0):
    """Candidates phi3 whose chains to phi1 and phi2 only use secants meeting C in rational points.

    With R3 on a line through Q1 and a rational point of C, Q3 on a line
    through R2 and a rational point of C, and Q3R3 itself a rational secant,
    every intermediate nodal cubic of the chains has a split node. A rational
    flex is still needed for each of them; it comes for free when every
    scalar is a cube (p = 2 mod 3) but is a real restriction over Q.
    """
    C, X = phi1.source, phi1.target
    F = C.field
    _, Q1, _ = _split_phi(phi1)
    _, _, R2 = _split_phi(phi2)
    els = [e for _, e in zip(range(40), F.elements(fractions=True))]
    rng = random.Random(seed)
    produced = 0
    for _ in range(20 * limit):
        a, b, d, e, u = (param_point(C, v) for v in rng.sample(els, 5))
        try:
            M = line_through(d, e)
            R3 = meet(line_through(Q1, a), M)
            Q3 = meet(line_through(R2, b), M)
            phi3 = phi_conic_cubic(u, Q3, R3, NODAL, C, X)
        except CremonaError:
            continue
        yield phi3
        produced += 1
        if produced >= limit:
            return


def lemma_b_cubic(phi1: PhiElement, phi2: PhiElement, intertwine_tries: int = 60) -> Factorization:
    """Factor phi2 o phi1^-1 in Dec(X) for phi1, phi2 in Phi_{C,X}."""
    X = phi1.target
    cls = X.curve_class
    target = phi2.map.compose(invert(phi1.map))
    if target.degree == 1:
        return _finish(target, X, [target])
    direct = _lemma_b_cubic_direct(phi1, phi2, cls)
    if direct is not None:
        return _finish(target, X, direct)
    avoid = list(dict.fromkeys(list(phi1.base_points) + list(phi2.base_points)))
    pool = phi_conic_cubic_candidates(cls, X.field, avoid)
    if cls == NODAL:
        pool = chain(_nodal_intertwiners(phi1, phi2), pool)
    for k, phi3 in enumerate(pool):
        if k >= intertwine_tries:
            break
        if not _generic_against(list(phi3.base_points), avoid):
            continue
        w1 = _lemma_b_cubic_direct(phi1, phi3, cls)
        if w1 is None:
            continue
        w2 = _lemma_b_cubic_direct(phi3, phi2, cls)
        if w2 is None:
            continue
        return _finish(target, X, w1 + w2)
    raise SearchExhausted("no intertwining map found for the cubic chain")


def lemma_b(phi1: PhiElement, phi2: PhiElement, letter_ok=None) -> Factorization:
    if phi1.source.degree == 1:
        return lemma_b_conic(phi1, phi2, letter_ok)
    return lemma_b_cubic(phi1, phi2)


# ---------------------------------------------------------------------------
# Lemma C: conjugate one quadratic letter to the identity


def lemma_c_conic(tau, L: RationalCurve | None = None, C: RationalCurve | None = None):
    """(phi, psi) in Phi_{L,C} with phi o tau o psi^-1 = id, for an elementary quadratic tau in Dec(L)."""
    tau = as_map(tau)
    if tau.degree != 2:
        raise PreconditionError("lemma C needs an elementary quadratic map")
    tau = require_quadratic(tau)
    F = tau.field
    L = L or line_model(F)
    C = C or conic(F)
    if not in_dec(tau, L):
        raise WrongBasePointPattern("map does not preserve the line")
    ell = _line_of(L)
    on = [p for p in tau.base_points if incident(p, ell)]
    off = [p for p in tau.base_points if not incident(p, ell)]
    if len(on) != 1:
        raise WrongBasePointPattern(f"{len(on)} base points on the line, expected 1")
    P, Q = off
    R = on[0]
    S = choose_general_point([off_line(ell), no_three_collinear_with(P, Q, R)], F)
    psi = phi_line_conic(P, Q, S, L, C)
    phi = validate_phi(psi.map.compose(invert(tau)), L, C)
    if not phi.map.compose(tau).compose(invert(psi.map)).is_identity():  # pragma: no cover
        raise VerificationFailed("phi tau psi^-1 is not the identity")
    return phi, psi


def tangent_avoiding(C: RationalCurve, cuspidal: bool = False):
    """Predicate on quadratic letters in Dec(C) usable by the cubic Lemma C construction."""
    def ok(letter):
        try:
            if contracts_tangent(letter, C):
                return False
            if cuspidal:
                return _rational_tangents(letter, C) or _rational_tangents(invert(letter), C)
            return True
        except CremonaError:
            return False
    return ok


def _rational_tangents(letter, C):
    _, _, R = split_base_points(letter, C)
    params, complete = tangent_params_through(C, R)
    return complete and len(params) == 2


def _nodal_S_candidates(P, Q, R, C):
    """Points S making (P, R, S) the base triple of an element of Phi_{C,X}, X nodal."""
    F = C.field
    for u in F.elements(fractions=True):
        A = param_point(C, u)
        if A in (P, Q):
            continue
        RA = line_through(R, A)
        if is_tangent(RA, C) or incident(P, RA) or incident(Q, RA):
            continue
        pts, complete = line_intersections(RA, C)
        others = [X for X, _ in pts if X != A]
        if not others:
            continue
        B = others[0]
        N = normalizer(B, A, C)
        r = N.apply(R).coords[0] / N.apply(R).coords[2]
        up = _conic_u(N.apply(P))
        Ninv = N.inverse()
        for w in F.elements(fractions=True):
            if not w:
                continue
            s = w ** 3 * up / r
            if s == r:
                continue
            yield Ninv.apply(ProjPoint((s, 0, 1), F))


def _cuspidal_S_candidates(P, Q, R, C):
    for L in tangents_through(C, R):
        if incident(P, L) or incident(Q, L):
            continue
        A, B = L.points()
        for w in C.field.elements(fractions=True):
            yield ProjPoint([A.coords[i] + w * B.coords[i] for i in range(3)], C.field)


def _lemma_c_cubic_avoiding(tau, C, X):
    """(phi, psi) with phi tau psi^-1 = id; falls back to tau^-1, whose off-conic base point differs."""
    try:
        return _lemma_c_cubic_side(tau, C, X)
    except (FieldExtensionRequired, SearchExhausted) as exc:
        first = exc
    try:
        phi, psi = _lemma_c_cubic_side(require_quadratic(invert(tau)), C, X)
    except (FieldExtensionRequired, SearchExhausted):
        raise first
    return psi, phi


def _lemma_c_cubic_side(tau, C, X, tries: int = 60):
    cls = X.curve_class
    P0, Q0, R = split_base_points(tau, C)
    tau_inv = invert(tau)
    last_error = None
    for P, Q in ((P0, Q0), (Q0, P0)):
        tangents = [tangent_at(C, P), tangent_at(C, Q)]
        gen = _nodal_S_candidates(P, Q, R, C) if cls == NODAL else _cuspidal_S_candidates(P, Q, R, C)
        for k, S in enumerate(gen):
            if k >= tries:
                break
            if on_curve(S, C) or S == R or not general_position([P, Q, R, S]):
                continue
            if any(incident(S, T) for T in tangents):
                continue
            try:
                psi = phi_conic_cubic(P, R, S, cls, C, X)
                phi = validate_phi(psi.map.compose(tau_inv), C, X)
            except CremonaError as exc:
                last_error = exc
                continue
            if _tangent_degenerate(phi) or _tangent_degenerate(psi):
                continue
            return phi, psi
    if isinstance(last_error, FieldExtensionRequired):
        raise last_error
    raise SearchExhausted("no admissible auxiliary point S found")


def _tangent_degenerate(phi: PhiElement) -> bool:
    """True when an off-conic base point lies on the tangent at the on-conic one.

    Such elements are valid but leave the later chains between them degenerate.
    """
    try:
        P, Q, R = _split_phi(phi)
    except CremonaError:
        return True
    T = tangent_at(phi.source, P)
    return incident(Q, T) or incident(R, T)


def _pick_seed(C, cuspidal):
    from .conic import sigma_ab
    F = C.field
    ok = tangent_avoiding(C, cuspidal)
    for a, b in ((2, 1), (-3, 1), (3, -1), (-8, 1), (5, 3)):
        if F(a) * F(b) not in (F.zero, F.one, -F.one) and ok(sigma_ab(a, b, F)):
            return a, b
    raise SearchExhausted("no usable sigma seed")


def lemma_c_cubic(tau, X: RationalCurve, C: RationalCurve | None = None, seed=None):
    """(phi, psi, f): phi, psi in Phi_{C,X} and a Dec(X) factorization f of phi o tau o psi^-1."""
    tau = as_map(tau)
    if tau.degree != 2:
        raise PreconditionError("lemma C needs an elementary quadratic map")
    tau = require_quadratic(tau)
    F = tau.field
    C = C or conic(F)
    if not contracts_tangent(tau, C):
        try:
            phi, psi = _lemma_c_cubic_avoiding(tau, C, X)
            return phi, psi, make_factorization(BirMap.identity(F), X, [])
        except (FieldExtensionRequired, SearchExhausted):
            # no rational auxiliary point for tau itself; its sigma-word may still have one
            pass
    # rewrite tau in tangent-avoiding letters first
    seed = seed or _pick_seed(C, X.curve_class == CUSPIDAL)
    word = express_quadratic_in_sigma(tau, seed, C)
    letters = absorb_linear(word.maps, F)
    pairs = [_lemma_c_cubic_avoiding(l, C, X) for l in letters]
    pieces = []
    for (phi_i, _), (_, psi_next) in zip(pairs, pairs[1:]):
        pieces += lemma_b_cubic(phi_i, psi_next).maps
    phi, psi = pairs[-1][0], pairs[0][1]
    target = phi.map.compose(tau).compose(invert(psi.map))
    return phi, psi, make_factorization(target, X, pieces)


def lemma_c(tau, phi: PhiElement, seed=None):
    """Dispatch on the level of phi: returns (phi_i, psi_i, f_i)."""
    if phi.source.degree == 1:
        a, b = lemma_c_conic(tau, phi.source, phi.target)
        return a, b, make_factorization(BirMap.identity(tau.field), phi.target, [])
    return lemma_c_cubic(tau, phi.target, phi.source, seed)


# ---------------------------------------------------------------------------
# lifting a factorization from Dec(Y) to Dec(Z)


def lift_factorization(tau, Y: RationalCurve, source: Factorization, phi: PhiElement, psi: PhiElement,
                       letter_ok=None) -> Factorization:
    """Factor tau = psi o tau' o phi^-1 in Dec(Z) from a factorization of tau' in Dec(Y)."""
    tau = as_map(tau)
    Z = phi.target
    F = tau.field
    letters = absorb_linear(source.maps, F)
    if letters and letters[0].degree == 1:
        # tau' is linear: fold it into phi
        alpha = letters[0]
        phi = validate_phi(phi.map.compose(invert(alpha)), Y, Z)
        letters = []
    pieces = []
    prev = phi
    for t in letters:
        phi_i, psi_i, f_i = lemma_c(t, phi)
        pieces += lemma_b(prev, psi_i, letter_ok).maps
        pieces += f_i.maps
        prev = phi_i
    pieces += lemma_b(prev, psi, letter_ok).maps
    return make_factorization(tau, Z, pieces)


# ---------------------------------------------------------------------------
# oracles and pipelines


class ProductOracle:
    """Dec(L) oracle answering for maps registered together with an explicit factorization."""

    def __init__(self, factorizations=()):
        self._known = {}
        for f in factorizations:
            self.register(f)

    def register(self, f: Factorization):
        self._known[f.target] = f

    def __call__(self, tau) -> Factorization:
        from ..errors import OracleUnavailable
        f = self._known.get(as_map(tau))
        if f is None:
            raise OracleUnavailable("the oracle has no factorization for this map")
        return f


def unavailable_oracle(tau):
    from ..errors import OracleUnavailable
    raise OracleUnavailable("no Dec(L) factorization oracle configured")


def factor_dec_conic(tau, line_oracle, phi: PhiElement | None = None, psi: PhiElement | None = None,
                     letter_ok=None) -> Factorization:
    tau = as_map(tau)
    F = tau.field
    C = conic(F)
    if not in_dec(tau, C):
        raise PreconditionError("map does not preserve the conic")
    if tau.degree == 1:
        return make_factorization(tau, C, [tau])
    phi = phi or default_phi_line_conic(F)
    psi = psi or phi
    tau_prime = invert(psi.map).compose(tau).compose(phi.map)
    source = line_oracle(tau_prime)
    if source.target != tau_prime:
        raise VerificationFailed("oracle answered for a different map")
    return lift_factorization(tau, phi.source, source, phi, psi, letter_ok)


def factor_dec_cubic(tau, line_oracle=None, X: RationalCurve | None = None, phi: PhiElement | None = None,
                     psi: PhiElement | None = None, conic_oracle=None) -> Factorization:
    """Factor tau in Dec(X), X a canonical nodal or cuspidal cubic.

    The conic-level factorization of psi^-1 tau phi comes from ``conic_oracle``
    when supplied, otherwise from :func:`factor_dec_conic` with ``line_oracle``.
    """
    tau = as_map(tau)
    F = tau.field
    if X is None:
        X = phi.target if phi is not None else canonical_model(CUSPIDAL, F)
    if X.curve_class not in (NODAL, CUSPIDAL):
        raise PreconditionError("cubic pipeline needs a nodal or cuspidal cubic")
    if not in_dec(tau, X):
        raise PreconditionError("map does not preserve the cubic")
    if tau.degree == 1:
        return make_factorization(tau, X, [tau])
    phi = phi or default_phi_conic_cubic(X.curve_class, F)
    psi = psi or phi
    C = phi.source
    tau_prime = invert(psi.map).compose(tau).compose(phi.map)
    ok = tangent_avoiding(C, X.curve_class == CUSPIDAL)
    if conic_oracle is not None:
        source = conic_oracle(tau_prime)
    else:
        source = factor_dec_conic(tau_prime, line_oracle or unavailable_oracle, letter_ok=ok)
    if source.target != tau_prime:
        raise VerificationFailed("conic-level factorization is for a different map")
    return lift_factorization(tau, C, source, phi, psi)


# ---------------------------------------------------------------------------
# small-degree witness search in Dec(C)


def _conic_quadratic(B1, B2, R, C):
    """The element of Dec(C) with base points B1, B2 on C and R off C that fixes the parameterization."""
    q = quad_from_points(B1, B2, R)
    beta = conic_transport(image_curve(q, C), C)
    return ElementaryQuadratic(beta.to_birmap().compose(q), (B1, B2, R))


class WordSearchOracle:
    """Dec(C) oracle by bounded depth-first search over quadratic letters.

    A letter has two of the current proper base points on C and a third point
    off C (a proper base point when one exists, else a few fixed general
    points). A branch succeeds when the remaining map is linear or a single
    admissible quadratic. Intended for maps of small degree.
    """

    def __init__(self, letter_ok=None, depth: int = 4, max_degree: int = 3, extra_points: int = 6,
                 rational_tangents: bool = False):
        self.letter_ok = letter_ok
        self.depth = depth
        self.max_degree = max_degree
        self.extra_points = extra_points
        # draw the free third base points from points with two rational tangents to C
        self.rational_tangents = rational_tangents

    def __call__(self, tau) -> Factorization:
        from ..birmap import common_zeros
        tau = as_map(tau)
        F = tau.field
        C = conic(F)
        if not in_dec(tau, C):
            raise PreconditionError("map does not preserve the conic")
        ok = self.letter_ok or (lambda l: True)
        generic = []
        for P in enumerate_points(F):
            if len(generic) >= self.extra_points:
                break
            if on_curve(P, C) or not (P.coords[0] and P.coords[1]):
                continue
            if self.rational_tangents:
                params, complete = tangent_params_through(C, P)
                if not complete or len(params) != 2:
                    continue
            generic.append(P)

        def admissible(q):
            return q and q.degree == 2 and ok(q)

        def search(g, depth):
            if g.degree == 1:
                return [g]
            if g.degree == 2:
                q = is_elementary_quadratic(g)
                if admissible(q):
                    return [q]
            if depth == 0:
                return None
            pts, _ = common_zeros(g.components)
            on = [p for p in pts if on_curve(p, C)]
            off = [p for p in pts if not on_curve(p, C)]
            for i in range(len(on)):
                for j in range(i + 1, len(on)):
                    for R in off + generic:
                        try:
                            h = _conic_quadratic(on[i], on[j], R, C)
                        except CremonaError:
                            continue
                        if not ok(h):
                            continue
                        rest = g.compose(invert(h))
                        if rest.degree > self.max_degree:
                            continue
                        found = search(rest, depth - 1)
                        if found is not None:
                            return [h] + found
            return None

        word = search(tau, self.depth - 1)
        if word is None:
            raise SearchExhausted(f"no word of at most {self.depth} letters found")
        return make_factorization(tau, C, word)
