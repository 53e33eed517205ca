"""Rational plane curves with an explicit parameterization."""
from __future__ import annotations

import re
from dataclasses import dataclass, field as dc_field
from itertools import combinations

from .algebra import BinaryForm, FieldSpec, TernaryForm, det, mat_inverse, mat_mul, normalize_pair, nullspace, \
    parse_form
from .birmap import BirMap, MobiusMap, _split_top_level, as_map, mobius_from_points
from .errors import (CurveContracted, DegenerateConic, FieldExtensionRequired, IrrationalMarkers, NotBirational,
                     NoTransport, NotOnCurve, NotOnto, NotRationalCubic, ParseError, PointOnCurve, SingularPoint)
from .projgeom import ProjLine, ProjPoint, ProjTransform

LINE = "Line"
CONIC = "Conic"
NODAL = "NodalCubic"
CUSPIDAL = "CuspidalCubic"
HIGHER = "HigherCuspidal"

_CLASS_ALIASES = {
    "line": LINE, "conic": CONIC, "nodal": NODAL, "nodalcubic": NODAL,
    "cuspidal": CUSPIDAL, "cuspidalcubic": CUSPIDAL,
}


@dataclass
class CurveMarkers:
    singular_point: ProjPoint | None = None
    singular_type: str | None = None           # "node" or "cusp"
    singular_params: list = dc_field(default_factory=list)
    singular_params_rational: bool = True
    flexes: list = dc_field(default_factory=list)   # (param, point)
    special_tangents: list = dc_field(default_factory=list)


class RationalCurve:
    """An irreducible plane curve together with a birational parameterization."""

    __slots__ = ("field", "form", "param", "curve_class", "label", "_markers")

    def __init__(self, form: TernaryForm, param, curve_class: str | None = None, label: str | None = None,
                 check: bool = True):
        self.field = form.field
        self.form = form.canonical()
        self.param = _reduce_triple(tuple(param))
        if check:
            if not self.form.substitute(*self.param).is_zero():
                raise NotOnCurve("parameterization does not satisfy the defining form")
            if self.param[0].degree != self.form.degree:
                raise NotBirational("parameterization degree differs from curve degree")
        self.curve_class = curve_class or _class_from_param(self)
        self.label = label
        self._markers = None

    @property
    def degree(self) -> int:
        return self.form.degree

    def __eq__(self, other):
        # same point set; the parameterization is bookkeeping
        return isinstance(other, RationalCurve) and other.form == self.form

    def __hash__(self):
        return hash(self.form)

    def literal(self) -> str:
        if self.label:
            return f"curve {self.label} canonical"
        return f'curve form "{self.form}" param "[{" : ".join(str(b) for b in self.param)}]"'

    def __repr__(self):
        return f"RationalCurve({self.curve_class}: {self.form})"

    def markers(self) -> CurveMarkers:
        if self._markers is None:
            self._markers = compute_markers(self)
        return self._markers

    def point(self, pair) -> ProjPoint:
        return param_point(self, pair)


def _reduce_triple(forms):
    g = forms[0]
    for f in forms[1:]:
        g = g.gcd(f)
    if g.degree > 0:
        forms = tuple(f.divexact(g) if not f.is_zero() else f for f in forms)
    return forms


def _class_from_param(X: RationalCurve) -> str:
    d = X.degree
    if d == 1:
        return LINE
    if d == 2:
        return CONIC
    if d == 3:
        g = singular_param_form(X)
        _, facs = g.factor()
        if len(facs) == 1 and facs[0][0].degree == 1:
            return CUSPIDAL
        return NODAL
    return f"Rational({d})"


# ---------------------------------------------------------------------------
# canonical models


def canonical_model(curve_class: str, field: FieldSpec, d: int | None = None) -> RationalCurve:
    key = curve_class.lower().replace("_", "")
    if key.startswith("xd") or key.startswith("higher"):
        return xd_model(d, field)
    curve_class = _CLASS_ALIASES.get(key, curve_class)
    x, y, z = TernaryForm.gens(field)
    s, t = BinaryForm.gens(field)
    zero = BinaryForm.zero(field)
    if curve_class == LINE:
        return RationalCurve(z, (s, t, zero), LINE, "line")
    if curve_class == CONIC:
        return RationalCurve(x * z - y**2, (s**2, s * t, t**2), CONIC, "conic")
    if curve_class == NODAL:
        return RationalCurve(x**3 + y**3 - x * y * z, (s**2 * t, s * t**2, s**3 + t**3), NODAL, "nodal")
    if curve_class == CUSPIDAL:
        return RationalCurve(x**3 - y**2 * z, (s * t**2, t**3, s**3), CUSPIDAL, "cuspidal")
    raise ValueError(f"unknown curve class {curve_class!r}")


def xd_model(d: int, field: FieldSpec) -> RationalCurve:
    """X_d = V(x^d - y^(d-1) z) with parameterization (s t^(d-1) : t^d : s^d)."""
    if d is None or d < 2:
        raise ValueError("X_d needs d >= 2")
    x, y, z = TernaryForm.gens(field)
    s, t = BinaryForm.gens(field)
    cls = CUSPIDAL if d == 3 else (CONIC if d == 2 else HIGHER)
    return RationalCurve(x**d - y**(d - 1) * z, (s * t**(d - 1), t**d, s**d), cls, f"xd:{d}")


def parse_curve(text: str, field: FieldSpec) -> RationalCurve:
    """``curve <class> canonical``, ``curve form "<poly>" param "[b0:b1:b2]"`` or a bare class name."""
    t = text.strip()
    m = re.fullmatch(r"(?:curve\s+)?([A-Za-z_]+)(?::(\d+))?(?:\s+(\d+))?(?:\s+canonical)?", t)
    if m and not t.startswith("curve form") and m.group(1).lower() != "form":
        name = m.group(1)
        d = m.group(2) or m.group(3)
        try:
            return canonical_model(name, field, int(d) if d else None)
        except ValueError as exc:
            raise ParseError(str(exc), text, 0)
    m = re.fullmatch(r'curve\s+form\s+"([^"]*)"\s+param\s+"\[([^"]*)\]"', t)
    if not m:
        raise ParseError("expected 'curve <class> canonical' or 'curve form \"...\" param \"[...]\"'", text, 0)
    form = parse_form(m.group(1), "xyz", field)
    parts = _split_top_level(m.group(2))
    if len(parts) != 3:
        raise ParseError("parameterization needs three binary forms", text, m.start(2))
    param = [parse_form(p, "st", field) for p in parts]
    return RationalCurve(form, param)


# ---------------------------------------------------------------------------
# points and parameters


def _pair(field, u):
    if isinstance(u, tuple):
        return normalize_pair(field, u)
    return (field(u), field.one)


def on_curve(P: ProjPoint, X: RationalCurve) -> bool:
    return not X.form.evaluate(P.coords)


def param_point(X: RationalCurve, u) -> ProjPoint:
    s, t = _pair(X.field, u)
    vals = [b.evaluate((s, t)) for b in X.param]
    return ProjPoint(vals, X.field)


def param_preimages(X: RationalCurve, P: ProjPoint):
    """Form vanishing exactly at the parameters mapping to P."""
    F = X.field
    b = X.param
    p = P.coords
    crosses = [b[0] * p[1] - b[1] * p[0], b[0] * p[2] - b[2] * p[0], b[1] * p[2] - b[2] * p[1]]
    g = BinaryForm.zero(F)
    for c in crosses:
        g = c if g.is_zero() else (g.gcd(c) if not c.is_zero() else g)
    return g


def param_recover(X: RationalCurve, P: ProjPoint):
    if not on_curve(P, X):
        raise NotOnCurve(f"{P} is not on {X}")
    g = param_preimages(X, P)
    if g.degree == 1:
        return g.roots()[0][0]
    roots = [r for r, _ in g.roots()] if not g.is_zero() else []
    raise SingularPoint(f"{P} has {g.degree} parameter preimages", roots)


def tangent_at(X: RationalCurve, P: ProjPoint) -> ProjLine:
    grad = [g.evaluate(P.coords) for g in X.form.gradient()]
    if not any(grad):
        raise SingularPoint(f"{P} is a singular point of {X}")
    return ProjLine(grad, X.field)


def restrict_to_line(f: TernaryForm, L: ProjLine):
    A, B = L.points()
    s, t = BinaryForm.gens(f.field)
    sub = [s * A.coords[i] + t * B.coords[i] for i in range(3)]
    return f.substitute(*sub), (A, B)


def is_tangent(L: ProjLine, X: RationalCurve) -> bool:
    """True when L meets X with contact of order at least two somewhere."""
    r, _ = restrict_to_line(X.form, L)
    if r.is_zero() or r.degree == 0:
        return False
    g = r.gcd(r.derivative("s")).gcd(r.derivative("t"))
    return g.degree > 0


def line_intersections(L: ProjLine, X: RationalCurve):
    """Rational intersection points of L and X with multiplicities, and whether all were rational."""
    r, (A, B) = restrict_to_line(X.form, L)
    if r.is_zero():
        raise ValueError("line is a component of the curve")
    lines, rem = r.factor_linear()
    out = []
    for bf, m in lines:
        u, v = bf.coefficient((1, 0)), bf.coefficient((0, 1))
        s0, t0 = -v, u
        out.append((ProjPoint([s0 * A.coords[i] + t0 * B.coords[i] for i in range(3)], X.field), m))
    return out, rem.degree == 0


# ---------------------------------------------------------------------------
# markers: singular point, flexes


def singular_param_form(X: RationalCurve) -> BinaryForm:
    """gcd of the pulled-back partial derivatives: vanishes at parameters of singular points."""
    g = BinaryForm.zero(X.field)
    for d in X.form.gradient():
        h = d.substitute(*X.param)
        if h.is_zero():
            continue
        g = h if g.is_zero() else g.gcd(h)
    return g


def hessian(F: TernaryForm) -> TernaryForm:
    from .birmap import jacobian_det
    return jacobian_det(F.gradient())


def compute_markers(X: RationalCurve) -> CurveMarkers:
    m = CurveMarkers()
    if X.degree <= 2:
        return m
    g = singular_param_form(X)
    sing_roots = []
    if g.degree > 0:
        _, facs = g.factor()
        lin = [(f, k) for f, k in facs if f.degree == 1]
        m.singular_params_rational = len(lin) == len(facs)
        for f, k in lin:
            sing_roots.append(f.roots()[0][0])
        if X.degree == 3:
            m.singular_type = "cusp" if (len(facs) == 1 and facs[0][0].degree == 1) else "node"
        else:
            m.singular_type = "cusp"
        m.singular_params = sing_roots
        m.singular_point = _singular_point(X, g)
        if m.singular_point is not None:
            m.special_tangents = _tangent_cone(X, m.singular_point)
    # flexes: Hessian pulled back, singular preimages removed
    h = hessian(X.form).substitute(*X.param)
    if not h.is_zero():
        if g.degree > 0:
            _, gfacs = g.factor()
            for f, _ in gfacs:
                while f.divides(h) and h.degree > 0:
                    h = h.divexact(f)
        seen = []
        if h.degree > 0:
            for r, _ in h.roots():
                if r not in seen:
                    seen.append(r)
        m.flexes = [(r, param_point(X, r)) for r in seen]
    return m


def _singular_point(X, g):
    # every root of g maps to the singular point; use a rational one when available
    roots = g.roots() if g.degree > 0 else []
    if roots:
        return param_point(X, roots[0][0])
    # irrational branch parameters: solve the gradient instead
    from .birmap import common_zeros
    pts, _ = common_zeros(list(X.form.gradient()))
    return pts[0] if pts else None


def _tangent_cone(X, P):
    """Lines of the tangent cone at a double point (rational ones only)."""
    F = X.field
    H = [[d2.evaluate(P.coords) for d2 in d.gradient()] for d in X.form.gradient()]
    gens = TernaryForm.gens(F)
    q = TernaryForm.zero(F)
    for i in range(3):
        for j in range(3):
            if H[i][j]:
                q = q + gens[i] * gens[j] * H[i][j]
    if q.is_zero():
        return []
    lines, _ = q.factor_linear()
    return [ProjLine.from_form(f) for f, _ in lines]


def classify(F: TernaryForm, param=None):
    """Curve class and markers of an irreducible form (parameterization needed for cubics)."""
    d = F.degree
    if d == 1:
        return LINE, CurveMarkers()
    if d == 2:
        M = [[F.coefficient(_sym_exp(i, j)) * (1 if i == j else F.field.one / 2) for j in range(3)]
             for i in range(3)]
        if not det(M, F.field):
            raise NotRationalCubic("degenerate conic (reducible)")
        return CONIC, CurveMarkers()
    if param is None:
        param = _parameterize_from_singular_point(F)
    X = RationalCurve(F, param)
    if d == 3 and X.markers().singular_point is None:
        raise NotRationalCubic("no singular point: smooth cubic")
    return X.curve_class, X.markers()


def _sym_exp(i, j):
    e = [0, 0, 0]
    e[i] += 1
    e[j] += 1
    return tuple(e)


def _parameterize_from_singular_point(F: TernaryForm):
    """Project a cubic from its double point to obtain a parameterization."""
    from .birmap import common_zeros
    field = F.field
    if F.degree != 3:
        raise NotRationalCubic("automatic parameterization only for cubics")
    pts, _ = common_zeros(list(F.gradient()))
    if not pts:
        raise NotRationalCubic("smooth cubic (no singular point)")
    P = pts[0]
    # lines through P: P + (s*A + t*B); the residual intersection is rational
    from .projgeom import coordinate_points
    others = [Q for Q in coordinate_points(field) + (ProjPoint((1, 1, 1), field),) if Q != P]
    A = others[0]
    B = next(Q for Q in others[1:] if det([P.coords, A.coords, Q.coords], field))
    s, t = BinaryForm.gens(field)
    D = [s * A.coords[i] + t * B.coords[i] for i in range(3)]
    # F(P*u + D*v) = u*v^2*F2(D) + v^3*F3(D) since P is a double point
    u_part = BinaryForm.zero(field)
    grad = F.gradient()
    hess = [[d2 for d2 in d.gradient()] for d in grad]
    # second-order term: 1/2 * D^T H(P) D
    for i in range(3):
        for j in range(3):
            hij = hess[i][j].evaluate(P.coords)
            if hij:
                u_part = u_part + D[i] * D[j] * (hij / 2)
    f3 = F.substitute(*D)
    # point on line with u : v = -F3(D) : F2(D)
    param = [P.coords[i] * (-f3) + D[i] * u_part for i in range(3)]
    return tuple(param)


# ---------------------------------------------------------------------------
# images and restrictions


def composite_param(phi, X: RationalCurve):
    """phi after the parameterization of X, divided by the gcd of its components."""
    phi = as_map(phi)
    comps = phi.on_binary(X.param)
    if all(c.is_zero() for c in comps):
        raise CurveContracted("curve lies in the base locus")
    return _reduce_triple(comps)


def implicitize(param, field: FieldSpec) -> TernaryForm:
    """The form of degree deg(param) vanishing on the image, by linear algebra."""
    e = param[0].degree if not param[0].is_zero() else max(p.degree for p in param)
    monos = [(i, j, e - i - j) for i in range(e, -1, -1) for j in range(e - i, -1, -1)]
    images = []
    for m in monos:
        f = BinaryForm.constant(field, 1)
        for k, p in zip(m, param):
            if k:
                f = f * p ** k
        images.append(f)
    rows = {}
    for col, img in enumerate(images):
        for exps, c in img.terms():
            rows.setdefault(exps, {})[col] = c
    mat = []
    for r in rows.values():
        row = [field.zero] * len(monos)
        for col, c in r.items():
            row[col] = c
        mat.append(row)
    basis = nullspace(mat, len(monos), field)
    if len(basis) != 1:
        raise NotBirational(f"image is not birational onto a degree-{e} curve ({len(basis)} relations)")
    return TernaryForm.from_dict(field, dict(zip(monos, basis[0]))).canonical()


def image_curve(phi, X: RationalCurve) -> RationalCurve:
    c = composite_param(phi, X)
    if c[0].degree == 0 or all(ci.proportional(c[0]) or ci.is_zero() for ci in c):
        # all components proportional: the image is a point
        if _rank_of_triple(c) <= 1:
            raise CurveContracted(f"{X} is contracted to a point")
    G = implicitize(c, X.field)
    return RationalCurve(G, c)


def _rank_of_triple(c):
    nz = [f for f in c if not f.is_zero()]
    if not nz:
        return 0
    return 1 if all(f.proportional(nz[0]) for f in nz) else 2


def _proportional_triples(a, b) -> bool:
    for i, j in combinations(range(3), 2):
        if not (a[i] * b[j] - a[j] * b[i]).is_zero():
            return False
    return any(not f.is_zero() for f in a) and any(not f.is_zero() for f in b)


def _sample_params(field: FieldSpec):
    yield (field.one, field.zero)
    for v in field.elements():
        yield (v, field.one)


def restrict(phi, X: RationalCurve, X2: RationalCurve) -> MobiusMap:
    """The Moebius map m with param(X2) after m proportional to phi after param(X)."""
    phi = as_map(phi)
    c = composite_param(phi, X)
    if not X2.form.substitute(*c).is_zero():
        raise NotOnto(f"image of {X} is not contained in {X2}")
    if c[0].degree != X2.degree:
        raise NotBirational(f"induced parameter map has degree {c[0].degree // max(X2.degree, 1)}")
    src, dst = [], []
    for pair in _sample_params(X.field):
        vals = [f.evaluate(pair) for f in c]
        if not any(vals):
            continue
        P = ProjPoint(vals, X.field)
        g = param_preimages(X2, P)
        if g.degree != 1:
            continue
        u = g.roots()[0][0]
        if pair in src or u in dst:
            continue
        src.append(pair)
        dst.append(u)
        if len(src) == 3:
            break
    if len(src) < 3:
        from .errors import SearchExhausted
        raise SearchExhausted("not enough sample parameters for interpolation")
    m = mobius_from_points(src, dst, X.field)
    moved = tuple(m.act(b) for b in X2.param)
    if not _proportional_triples(moved, c):  # pragma: no cover
        raise NotBirational("interpolated Moebius map failed verification")
    return m


def in_dec(phi, X: RationalCurve) -> bool:
    try:
        c = composite_param(as_map(phi), X)
    except CurveContracted:
        return False
    return c[0].degree == X.degree and X.form.substitute(*c).is_zero()


def in_ine(phi, X: RationalCurve) -> bool:
    if not in_dec(phi, X):
        return False
    return restrict(phi, X, X).is_identity()


# ---------------------------------------------------------------------------
# transports


def _coeff_matrix(param, degree):
    return [b.coefficients(degree) for b in param]


def conic_transport(C1: RationalCurve, C2: RationalCurve) -> ProjTransform:
    """beta with beta after param(C1) = param(C2) exactly."""
    if C1.degree != 2 or C2.degree != 2:
        raise DegenerateConic("conic_transport needs two conics")
    F = C1.field
    M1 = _coeff_matrix(C1.param, 2)
    M2 = _coeff_matrix(C2.param, 2)
    if not det(M1, F) or not det(M2, F):
        raise DegenerateConic("parameterization is not a Veronese embedding")
    beta = ProjTransform(mat_mul(M2, mat_inverse(M1, F)), F)
    _check_transport(beta, C1, C2)
    return beta


def _check_transport(beta: ProjTransform, X1, X2):
    pulled = X2.form.substitute(*BirMap.from_transform(beta).components)
    if not pulled.proportional(X1.form):  # pragma: no cover
        raise NoTransport("transport failed the defining-form check")


def _transport_for_mobius(X1, X2, m):
    F = X1.field
    d = X1.degree
    M1 = _coeff_matrix(X1.param, d)
    M2 = _coeff_matrix(tuple(m.act(b) for b in X2.param), d)
    n = d + 1
    rows = []
    for i in range(3):
        for j in range(n):
            row = [F.zero] * 10
            for k in range(3):
                row[3 * i + k] = M1[k][j]
            row[9] = -M2[i][j]
            rows.append(row)
    basis = nullspace(rows, 10, F)
    for v in basis:
        if not v[9]:
            continue
        try:
            beta = ProjTransform([v[0:3], v[3:6], v[6:9]], F)
        except Exception:
            continue
        pulled = X2.form.substitute(*BirMap.from_transform(beta).components)
        if pulled.proportional(X1.form):
            return beta
    return None


def _three_point_mobius(F, src, dst):
    return mobius_from_points(src, dst, F)


def cubic_transport(X1: RationalCurve, X2: RationalCurve) -> ProjTransform:
    """A linear map carrying the cubic X1 onto the cubic X2 of the same class."""
    if X1.curve_class != X2.curve_class or X1.degree != 3:
        raise NoTransport(f"cannot transport {X1.curve_class} to {X2.curve_class}")
    F = X1.field
    m1, m2 = X1.markers(), X2.markers()
    if not m1.flexes or not m2.flexes:
        raise IrrationalMarkers("no rational flex")
    f1 = m1.flexes[0][0]
    candidates = []
    if X1.curve_class == CUSPIDAL:
        c1, c2 = m1.singular_params[0], m2.singular_params[0]
        g1 = next(p for p in _sample_params(F) if p not in (c1, f1))
        g2 = next(p for p in _sample_params(F) if p not in (c2, m2.flexes[0][0]))
        candidates.append(_three_point_mobius(F, [c1, f1, g1], [c2, m2.flexes[0][0], g2]))
    else:
        if not (m1.singular_params_rational and m2.singular_params_rational) or \
                len(m1.singular_params) != 2 or len(m2.singular_params) != 2:
            raise IrrationalMarkers("node branches are not individually rational")
        n1 = m1.singular_params
        for order in (m2.singular_params, m2.singular_params[::-1]):
            for f2, _ in m2.flexes:
                candidates.append(_three_point_mobius(F, [n1[0], n1[1], f1], [order[0], order[1], f2]))
    for m in candidates:
        beta = _transport_for_mobius(X1, X2, m)
        if beta is not None:
            return beta
    raise NoTransport("no discrete choice produced a transport")


def transport_curve(X: RationalCurve, beta: ProjTransform) -> RationalCurve:
    """The image of X under a linear map (parameterization pushed forward)."""
    Bm = BirMap.from_transform(beta)
    param = Bm.on_binary(X.param)
    form = X.form.substitute(*BirMap.from_transform(beta.inverse()).components)
    return RationalCurve(form, param, X.curve_class)


def tangent_params_through(X: RationalCurve, R: ProjPoint):
    """Rational parameters of smooth points whose tangent passes through R.

    Returns (params, complete) with ``complete`` False if some contact points
    are irrational.
    """
    grads = [g.substitute(*X.param) for g in X.form.gradient()]
    h = BinaryForm.zero(X.field)
    for g, r in zip(grads, R.coords):
        if r and not g.is_zero():
            h = h + g * r
    if h.is_zero():
        raise PointOnCurve(f"every tangent passes through {R}")
    sing = singular_param_form(X) if X.degree > 2 else None
    if sing is not None and sing.degree > 0:
        _, facs = sing.factor()
        for f, _ in facs:
            while f.divides(h) and h.degree > 0:
                h = h.divexact(f)
    if h.degree == 0:
        return [], True
    lines, rem = h.factor_linear()
    params = []
    for f, _ in lines:
        r = BinaryForm(f.field, f.poly).roots()[0][0]
        if r not in params:
            params.append(r)
    return params, rem.degree == 0


def tangents_through(C: RationalCurve, R: ProjPoint):
    """The two tangent lines to a conic through a point off it."""
    if on_curve(R, C):
        raise PointOnCurve(f"{R} lies on the conic")
    params, complete = tangent_params_through(C, R)
    if not complete or len(params) < 2:
        raise FieldExtensionRequired(f"tangents to the conic through {R} are not rational")
    return [tangent_at(C, param_point(C, p)) for p in params]
