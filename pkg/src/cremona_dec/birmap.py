"""Plane birational maps given by coprime triples of ternary forms."""
from __future__ import annotations

from dataclasses import dataclass

from .algebra import BinaryForm, FieldSpec, TernaryForm, normalize_pair, nullspace, parse_form
from .errors import (CollinearPoints, DegreeMismatch, FieldExtensionRequired, InvalidParameters, NotDominant,
                     ParseError, PreconditionError, Unsupported)
from .projgeom import ProjLine, ProjPoint, ProjTransform, collinear, cross


def _split_top_level(text, sep=":"):
    parts, depth, cur = [], 0, []
    for ch in text:
        if ch in "([{":
            depth += 1
        elif ch in ")]}":
            depth -= 1
        if ch == sep and depth == 0:
            parts.append("".join(cur))
            cur = []
        else:
            cur.append(ch)
    parts.append("".join(cur))
    return parts


class BirMap:
    """A dominant rational map of P^2 given by three forms of equal degree.

    On construction the components are divided by their gcd and scaled so that
    the first coefficient of the first nonzero component is 1; equality is
    therefore projective equality of maps.
    """

    __slots__ = ("field", "components", "_jac")

    def __init__(self, components, field: FieldSpec | None = None, check: bool = True):
        comps = list(components)
        if len(comps) != 3:
            raise ValueError("a plane map needs three components")
        field = field or comps[0].field
        comps = [c if isinstance(c, TernaryForm) else parse_form(c, "xyz", field) for c in comps]
        degs = {c.degree for c in comps if not c.is_zero()}
        if not degs:
            raise NotDominant("all components vanish")
        if len(degs) > 1:
            raise DegreeMismatch(f"components have degrees {sorted(degs)}")
        g = comps[0]
        for c in comps[1:]:
            g = g.gcd(c)
        if g.degree > 0:
            comps = [c.divexact(g) if not c.is_zero() else c for c in comps]
        lead = next(c for c in comps if not c.is_zero()).lead_coefficient()
        self.field = field
        self.components = tuple(c / lead for c in comps)
        self._jac = None
        if check and self.jacobian().is_zero():
            raise NotDominant(f"{self} has vanishing Jacobian")

    # construction helpers

    @classmethod
    def identity(cls, field: FieldSpec):
        return cls(TernaryForm.gens(field), field)

    @classmethod
    def from_transform(cls, T: ProjTransform):
        return cls([TernaryForm.linear(T.field, row) for row in T.matrix], T.field)

    @classmethod
    def parse(cls, text: str, field: FieldSpec):
        t = text.strip()
        if not (t.startswith("[") and t.endswith("]")):
            raise ParseError("map literal must look like [f0 : f1 : f2]", text, 0)
        parts = _split_top_level(t[1:-1])
        if len(parts) != 3:
            raise ParseError(f"map literal needs 3 components, found {len(parts)}", text, 1)
        return cls([parse_form(p, "xyz", field) for p in parts], field)

    # inspection

    @property
    def degree(self) -> int:
        return next(c.degree for c in self.components if not c.is_zero())

    def jacobian(self) -> TernaryForm:
        if self._jac is None:
            self._jac = jacobian_det(self.components)
        return self._jac

    def is_linear(self):
        if self.degree != 1:
            return None
        rows = [[c.coefficient(e) for e in ((1, 0, 0), (0, 1, 0), (0, 0, 1))] for c in self.components]
        return ProjTransform(rows, self.field)

    def is_identity(self) -> bool:
        return self == BirMap.identity(self.field)

    def __call__(self, P: ProjPoint) -> ProjPoint:
        vals = [c.evaluate(P.coords) for c in self.components]
        if not any(vals):
            raise ValueError(f"{P} is a base point of the map")
        return ProjPoint(vals, self.field)

    def evaluate_vector(self, coords):
        return tuple(c.evaluate(coords) for c in self.components)

    def compose(self, other: "BirMap") -> "BirMap":
        """self after other."""
        other = as_map(other)
        if other.field != self.field:
            raise ValueError("maps over different fields")
        # a composite of dominant maps is dominant, so skip the Jacobian check
        return BirMap([c.substitute(*other.components) for c in self.components], self.field, check=False)

    def __matmul__(self, other):
        return self.compose(other)

    def __eq__(self, other):
        if isinstance(other, ProjTransform):
            other = BirMap.from_transform(other)
        return isinstance(other, BirMap) and other.field == self.field and \
            other.components == self.components

    def __hash__(self):
        return hash(self.components)

    def __str__(self):
        return "[" + " : ".join(str(c) for c in self.components) + "]"

    def __repr__(self):
        return f"BirMap({self})"

    def pullback(self, f: TernaryForm) -> TernaryForm:
        return f.substitute(*self.components)

    def on_binary(self, param):
        """Compose with a triple of binary forms; the result is not reduced."""
        return tuple(c.substitute(*param) for c in self.components)


def jacobian_det(forms) -> TernaryForm:
    m = [f.gradient() for f in forms]
    return (m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
            - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
            + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]))


class ElementaryQuadratic(BirMap):
    """A quadratic map with three proper, non-collinear base points."""

    __slots__ = ("base_points",)

    def __init__(self, phi: BirMap, base_points):
        BirMap.__init__(self, phi.components, phi.field, check=False)
        self._jac = phi._jac
        self.base_points = tuple(base_points)

    def __repr__(self):
        return f"ElementaryQuadratic({self}, base={[str(p) for p in self.base_points]})"


@dataclass(frozen=True)
class Rejection:
    """Structured failure of :func:`is_elementary_quadratic`."""
    reason: str
    detail: str = ""

    def __bool__(self):
        return False


def as_map(obj) -> BirMap:
    if isinstance(obj, BirMap):
        return obj
    if isinstance(obj, ProjTransform):
        return BirMap.from_transform(obj)
    if hasattr(obj, "map"):
        return as_map(obj.map)
    raise TypeError(f"cannot interpret {obj!r} as a plane map")


def compose(*maps) -> BirMap:
    """compose(f, g, h) = f after g after h."""
    maps = [as_map(m) for m in maps]
    out = maps[-1]
    for m in reversed(maps[:-1]):
        out = m.compose(out)
    return out


def degree(phi) -> int:
    return as_map(phi).degree


def is_linear(phi):
    return as_map(phi).is_linear()


def map_eq(phi, psi) -> bool:
    return as_map(phi) == as_map(psi)


def contracted_lines(phi, require_split: bool = False):
    phi = as_map(phi)
    if phi.degree < 2:
        raise PreconditionError("a linear map contracts no line")
    lines, rem = phi.jacobian().factor_linear(require_split=require_split)
    return [(ProjLine.from_form(f), m) for f, m in lines]


# ---------------------------------------------------------------------------
# common zeros


def _restrict_to_line_through_origin(forms, x0, y0, field):
    s, t = BinaryForm.gens(field)
    sub = (s * x0, s * y0, t)
    return [f.substitute(*sub) for f in forms]


def common_zeros(forms):
    """Rational common zeros of ternary forms of one degree.

    Returns (points, complete) where ``complete`` is False when some common
    zeros might be defined only over an extension of the field.
    """
    forms = [f for f in forms if not f.is_zero()]
    if not forms:
        raise ValueError("every point is a common zero")
    field = forms[0].field
    if len({f.degree for f in forms}) > 1:
        raise DegreeMismatch("common_zeros expects forms of one degree")
    if forms[0].degree == 0:
        return [], True
    g = forms[0]
    for f in forms[1:]:
        g = g.gcd(f)
    if g.degree > 0:
        raise ValueError("forms share a common factor; zero set is a curve")
    origin = ProjPoint((0, 0, 1), field)
    points = []
    if all(not f.evaluate(origin.coords) for f in forms):
        points.append(origin)
    if len(forms) == 1:
        raise ValueError("a single form vanishes on a curve")
    res = _projection_resultant(forms, field)
    complete = True
    lines, rem = res.factor_linear()
    if rem.degree > 0:
        complete = False
    for lf, _ in lines:
        a, b = lf.coefficient((1, 0, 0)), lf.coefficient((0, 1, 0))
        # the line a*x + b*y = 0 passes through the origin (0:0:1) and (-b : a : 0)
        restricted = _restrict_to_line_through_origin(forms, -b, a, field)
        h = restricted[0]
        for r in restricted[1:]:
            h = h.gcd(r)
        if h.is_zero():
            raise ValueError("forms vanish on a line")
        if h.degree == 0:
            continue
        lin, hrem = h.factor_linear()
        if hrem.degree > 0:
            complete = False
        for bf, _ in lin:
            u = bf.coefficient((1, 0))
            v = bf.coefficient((0, 1))
            ss, tt = -v, u
            P = ProjPoint((ss * -b, ss * a, tt), field)
            if P not in points:
                points.append(P)
    points.sort(key=lambda P: str(P))
    return points, complete


def _combinations(forms, field):
    if len(forms) == 2:
        yield forms[0], forms[1]
        return
    coeffs = [(1, 0, 0), (0, 1, 0), (0, 0, 1), (1, 2, 3), (1, -1, 5), (2, 7, -3), (3, -5, 11), (5, 3, 2)]
    for i, ca in enumerate(coeffs):
        for cb in coeffs[i + 1:]:
            a = sum((f * field(c) for f, c in zip(forms, ca)), TernaryForm.zero(field))
            b = sum((f * field(c) for f, c in zip(forms, cb)), TernaryForm.zero(field))
            yield a, b


def _projection_resultant(forms, field):
    """Resultant in z of two combinations (gcd of two when available)."""
    found = []
    for a, b in _combinations(forms, field):
        if a.is_zero() or b.is_zero():
            continue
        r = a.resultant(b, "z")
        if not r.is_zero():
            found.append(r)
            if len(found) == 2 or len(forms) == 2:
                break
    if not found:
        raise ValueError("could not eliminate z; forms too degenerate")
    out = found[0]
    for r in found[1:]:
        out = out.gcd(r)
    return out


def proper_base_points(phi):
    phi = as_map(phi)
    if phi.degree == 1:
        return []
    pts, complete = common_zeros(phi.components)
    if not complete:
        if phi.degree <= 2:
            raise FieldExtensionRequired(f"base points of {phi} are not all rational")
        raise Unsupported(f"base points of {phi} could not be fully split")
    return pts


def is_elementary_quadratic(phi):
    """Returns an ElementaryQuadratic, or a falsy Rejection naming the obstruction."""
    phi = as_map(phi)
    if isinstance(phi, ElementaryQuadratic):
        return phi
    if phi.degree != 2:
        return Rejection("WrongDegree", f"degree {phi.degree}")
    pts, complete = common_zeros(phi.components)
    if not complete:
        return Rejection("IrrationalBasePoints")
    if len(pts) < 3:
        return Rejection("InfinitelyNearBasePoints", f"{len(pts)} proper base point(s)")
    if collinear(*pts):  # pragma: no cover - impossible for a dominant quadratic
        return Rejection("InfinitelyNearBasePoints", "collinear base points")
    return ElementaryQuadratic(phi, pts)


def require_quadratic(phi) -> ElementaryQuadratic:
    q = is_elementary_quadratic(phi)
    if not q:
        raise PreconditionError(f"not an elementary quadratic map: {q.reason} {q.detail}")
    return q


def quad_from_points(P: ProjPoint, Q: ProjPoint, R: ProjPoint) -> ElementaryQuadratic:
    """The involution A sigma A^-1 with base points P, Q, R (A sends the coordinate triangle to them)."""
    if P == Q or Q == R or P == R or collinear(P, Q, R):
        raise CollinearPoints(f"{P}, {Q}, {R} are collinear or coincide")
    F = P.field
    l_qr = TernaryForm.linear(F, cross(Q.coords, R.coords))
    l_rp = TernaryForm.linear(F, cross(R.coords, P.coords))
    l_pq = TernaryForm.linear(F, cross(P.coords, Q.coords))
    a, b, c = l_rp * l_pq, l_pq * l_qr, l_qr * l_rp
    comps = [a * P.coords[i] + b * Q.coords[i] + c * R.coords[i] for i in range(3)]
    return ElementaryQuadratic(BirMap(comps, F), (P, Q, R))


def sigma_standard(field: FieldSpec) -> ElementaryQuadratic:
    x, y, z = TernaryForm.gens(field)
    pts = (ProjPoint((1, 0, 0), field), ProjPoint((0, 1, 0), field), ProjPoint((0, 0, 1), field))
    return ElementaryQuadratic(BirMap([y * z, z * x, x * y], field), pts)


def invert(phi, steps=None) -> BirMap:
    """Inverse map.

    Linear and elementary quadratic maps are inverted constructively; when a
    step list is supplied the inverse is assembled from the inverted steps;
    anything else is inverted by solving a linear system for the inverse of
    the same degree.
    """
    if isinstance(phi, ProjTransform):
        return BirMap.from_transform(phi.inverse())
    phi = as_map(phi)
    if steps is not None:
        out = BirMap.identity(phi.field)
        for s in steps:
            out = out.compose(invert(s))
        return out
    T = phi.is_linear()
    if T is not None:
        return BirMap.from_transform(T.inverse())
    if phi.degree == 2:
        q = is_elementary_quadratic(phi)
        if q:
            base = quad_from_points(*q.base_points)
            gamma = phi.compose(base).is_linear()
            if gamma is None:  # pragma: no cover
                raise ArithmeticError("same-triangle quadratics must differ by a linear map")
            inv = base.compose(BirMap.from_transform(gamma.inverse()))
            return _inverse_with_base(inv)
    return invert_general(phi)


def _inverse_with_base(phi):
    q = is_elementary_quadratic(phi)
    return q if q else phi


def invert_general(phi: BirMap) -> BirMap:
    """Solve G(phi) = h*(x, y, z) for G of degree deg(phi)."""
    F = phi.field
    d = phi.degree
    monos = _monomials(d)
    images = []
    cache = {}
    for e in monos:
        f = TernaryForm.constant(F, 1)
        for i, k in enumerate(e):
            if k:
                key = (i, k)
                if key not in cache:
                    cache[key] = phi.components[i] ** k
                f = f * cache[key]
        images.append(f)
    gens = TernaryForm.gens(F)
    n = len(monos)
    rows_by_mono = {}
    for (i, j) in ((0, 1), (0, 2), (1, 2)):
        for k, img in enumerate(images):
            for col, sign, var in ((i * n + k, 1, gens[j]), (j * n + k, -1, gens[i])):
                for exps, c in (img * var).terms():
                    row = rows_by_mono.setdefault((i, j, exps), {})
                    row[col] = row.get(col, F.zero) + c * sign
    rows = []
    for row in rows_by_mono.values():
        r = [F.zero] * (3 * n)
        for col, c in row.items():
            r[col] = c
        rows.append(r)
    basis = nullspace(rows, 3 * n, F)
    if len(basis) != 1:
        raise Unsupported(f"inverse not determined by a degree-{d} system ({len(basis)} solutions)")
    v = basis[0]
    comps = [TernaryForm.from_dict(F, {monos[k]: v[i * n + k] for k in range(n)}) for i in range(3)]
    inv = BirMap(comps, F)
    if not inv.compose(phi).is_identity():  # pragma: no cover
        raise ArithmeticError("computed inverse failed verification")
    return inv


def _monomials(d):
    out = []
    for i in range(d, -1, -1):
        for j in range(d - i, -1, -1):
            out.append((i, j, d - i - j))
    return out


# ---------------------------------------------------------------------------
# Moebius maps


class MobiusMap:
    """((a, b), (c, d)) acting on parameters by (s, t) -> (a s + b t, c s + d t)."""

    __slots__ = ("field", "matrix")

    def __init__(self, matrix, field: FieldSpec | None = None):
        (a, b), (c, d) = matrix
        if field is None:
            from .projgeom import _guess_field
            field = _guess_field([a, b, c, d])
        vals = [field(v) for v in (a, b, c, d)]
        if not vals[0] * vals[3] - vals[1] * vals[2]:
            raise InvalidParameters("singular Moebius matrix")
        lead = next(v for v in vals if v)
        vals = [v / lead for v in vals]
        self.field = field
        self.matrix = ((vals[0], vals[1]), (vals[2], vals[3]))

    @classmethod
    def identity(cls, field):
        return cls(((1, 0), (0, 1)), field)

    def __call__(self, pair):
        (a, b), (c, d) = self.matrix
        s, t = pair
        return normalize_pair(self.field, (a * s + b * t, c * s + d * t))

    def compose(self, other: "MobiusMap") -> "MobiusMap":
        (a, b), (c, d) = self.matrix
        (e, f), (g, h) = other.matrix
        return MobiusMap(((a * e + b * g, a * f + b * h), (c * e + d * g, c * f + d * h)), self.field)

    def __matmul__(self, other):
        return self.compose(other)

    def inverse(self) -> "MobiusMap":
        (a, b), (c, d) = self.matrix
        return MobiusMap(((d, -b), (-c, a)), self.field)

    def act(self, form: BinaryForm) -> BinaryForm:
        """form(a s + b t, c s + d t)."""
        (a, b), (c, d) = self.matrix
        s, t = BinaryForm.gens(self.field)
        return form.substitute(s * a + t * b, s * c + t * d)

    def is_identity(self) -> bool:
        return self == MobiusMap.identity(self.field)

    def __eq__(self, other):
        return isinstance(other, MobiusMap) and other.field == self.field and other.matrix == self.matrix

    def __hash__(self):
        return hash(self.matrix)

    def __repr__(self):
        (a, b), (c, d) = self.matrix
        f = self.field.format
        return f"MobiusMap(({f(a)}, {f(b)}), ({f(c)}, {f(d)}))"


def mobius_from_points(src, dst, field: FieldSpec) -> MobiusMap:
    """The Moebius map sending three distinct parameters to three distinct parameters."""
    rows = []
    for (s, t), (u, v) in zip(src, dst):
        # v*(a s + b t) - u*(c s + d t) = 0
        rows.append([v * s, v * t, -u * s, -u * t])
    basis = nullspace(rows, 4, field)
    if len(basis) != 1:
        raise InvalidParameters("parameters do not determine a Moebius map")
    a, b, c, d = basis[0]
    return MobiusMap(((a, b), (c, d)), field)
