"""Points, lines and linear transformations of the projective plane."""
from __future__ import annotations

import re
from itertools import combinations

from .algebra import FieldSpec, det, mat_inverse, mat_mul
from .errors import DegenerateFrame, EqualLines, EqualPoints, ParseError


def _canonical_triple(field, coords):
    coords = tuple(field(c) for c in coords)
    for c in coords:
        if c:
            inv = field.one / c
            return tuple(x * inv for x in coords)
    raise ValueError("all coordinates are zero")


def cross(u, v):
    return (u[1] * v[2] - u[2] * v[1], u[2] * v[0] - u[0] * v[2], u[0] * v[1] - u[1] * v[0])


def dot(u, v):
    return u[0] * v[0] + u[1] * v[1] + u[2] * v[2]


class _Triple:
    __slots__ = ("field", "coords")
    _open, _close = "(", ")"

    def __init__(self, coords, field: FieldSpec | None = None):
        if field is None:
            field = _guess_field(coords)
        self.field = field
        self.coords = _canonical_triple(field, coords)

    def __iter__(self):
        return iter(self.coords)

    def __getitem__(self, i):
        return self.coords[i]

    def __eq__(self, other):
        return type(other) is type(self) and other.field == self.field and other.coords == self.coords

    def __hash__(self):
        return hash((type(self).__name__, self.coords))

    def __str__(self):
        inner = " : ".join(self.field.format(c) for c in self.coords)
        return f"{self._open}{inner}{self._close}"

    def __repr__(self):
        return f"{type(self).__name__}{str(self)}"

    @classmethod
    def parse(cls, text: str, field: FieldSpec):
        t = text.strip()
        if not (t.startswith(cls._open) and t.endswith(cls._close)):
            raise ParseError(f"expected {cls._open}a : b : c{cls._close}", text, 0)
        parts = t[1:-1].split(":")
        if len(parts) != 3:
            raise ParseError("expected three colon-separated coordinates", text, 1)
        vals = [field.parse_scalar(p) for p in parts]
        if not any(vals):
            raise ParseError("all coordinates are zero", text, 1)
        return cls(vals, field)


def _guess_field(coords):
    from .algebra import Residue
    for c in coords:
        if isinstance(c, Residue):
            return FieldSpec(c.modulus)
    return FieldSpec()


class ProjPoint(_Triple):
    """A point of P^2, normalized so the first nonzero coordinate is 1."""
    __slots__ = ()


class ProjLine(_Triple):
    """The line a*x + b*y + c*z = 0, stored by its normalized coefficients."""
    __slots__ = ()
    _open, _close = "{", "}"

    def contains(self, P: ProjPoint) -> bool:
        return not dot(self.coords, P.coords)

    def form(self):
        from .algebra import TernaryForm
        return TernaryForm.linear(self.field, self.coords)

    @classmethod
    def from_form(cls, f):
        if f.degree != 1:
            raise ValueError("not a linear form")
        return cls([f.coefficient(e) for e in ((1, 0, 0), (0, 1, 0), (0, 0, 1))], f.field)

    def points(self):
        """Two distinct points spanning the line (deterministic)."""
        a, b, c = self.coords
        F = self.field
        cand = [(F.zero, -c, b), (c, F.zero, -a), (-b, a, F.zero)]
        pts = []
        for v in cand:
            if any(v):
                P = ProjPoint(v, F)
                if P not in pts:
                    pts.append(P)
        return pts[0], pts[1]


def line_through(P: ProjPoint, Q: ProjPoint) -> ProjLine:
    if P == Q:
        raise EqualPoints(f"{P} and {Q} coincide")
    return ProjLine(cross(P.coords, Q.coords), P.field)


def meet(L1: ProjLine, L2: ProjLine) -> ProjPoint:
    if L1 == L2:
        raise EqualLines(f"{L1} and {L2} coincide")
    return ProjPoint(cross(L1.coords, L2.coords), L1.field)


def incident(P: ProjPoint, L: ProjLine) -> bool:
    return not dot(P.coords, L.coords)


def collinear(P: ProjPoint, Q: ProjPoint, R: ProjPoint) -> bool:
    return not det([P.coords, Q.coords, R.coords], P.field)


def general_position(points) -> bool:
    """Pairwise distinct with no three collinear."""
    pts = list(points)
    if len(set(pts)) != len(pts):
        return False
    return not any(collinear(*t) for t in combinations(pts, 3))


class ProjTransform:
    """An invertible 3x3 matrix up to scale, acting on column vectors."""

    __slots__ = ("field", "matrix")

    def __init__(self, matrix, field: FieldSpec | None = None):
        if field is None:
            field = _guess_field([c for row in matrix for c in row])
        flat = _canonical_triple_n(field, [c for row in matrix for c in row])
        self.field = field
        self.matrix = tuple(tuple(flat[3 * i:3 * i + 3]) for i in range(3))
        if not det(self.matrix, field):
            raise DegenerateFrame("singular matrix")

    @classmethod
    def identity(cls, field: FieldSpec):
        return cls([[1, 0, 0], [0, 1, 0], [0, 0, 1]], field)

    @classmethod
    def diagonal(cls, field: FieldSpec, a, b, c):
        z = field.zero
        return cls([[a, z, z], [z, b, z], [z, z, c]], field)

    def __call__(self, P):
        if isinstance(P, ProjLine):
            return self.apply_line(P)
        return self.apply(P)

    def apply(self, P: ProjPoint) -> ProjPoint:
        return ProjPoint([dot(row, P.coords) for row in self.matrix], self.field)

    def apply_line(self, L: ProjLine) -> ProjLine:
        # lines transform by the inverse transpose
        inv = self.inverse().matrix
        return ProjLine([sum(inv[j][i] * L.coords[j] for j in range(3)) for i in range(3)], self.field)

    def compose(self, other: "ProjTransform") -> "ProjTransform":
        """self after other."""
        return ProjTransform(mat_mul(self.matrix, other.matrix), self.field)

    def __matmul__(self, other):
        return self.compose(other)

    def inverse(self) -> "ProjTransform":
        return ProjTransform(mat_inverse(self.matrix, self.field), self.field)

    def is_identity(self) -> bool:
        return self == ProjTransform.identity(self.field)

    def __eq__(self, other):
        return isinstance(other, ProjTransform) and other.field == self.field and other.matrix == self.matrix

    def __hash__(self):
        return hash(self.matrix)

    def __repr__(self):
        rows = "; ".join(" ".join(self.field.format(c) for c in r) for r in self.matrix)
        return f"ProjTransform[{rows}]"

    def to_birmap(self):
        from .birmap import BirMap
        return BirMap.from_transform(self)


def _canonical_triple_n(field, flat):
    flat = [field(c) for c in flat]
    for c in flat:
        if c:
            inv = field.one / c
            return [x * inv for x in flat]
    raise DegenerateFrame("zero matrix")


def apply(T: ProjTransform, P: ProjPoint) -> ProjPoint:
    return T.apply(P)


def apply_line(T: ProjTransform, L: ProjLine) -> ProjLine:
    return T.apply_line(L)


def compose(T1: ProjTransform, T2: ProjTransform) -> ProjTransform:
    return T1.compose(T2)


def invert(T: ProjTransform) -> ProjTransform:
    return T.inverse()


def _frame_matrix(points):
    """Columns are the first three points scaled so their sum is the fourth."""
    F = points[0].field
    cols = [p.coords for p in points[:3]]
    M = [[cols[j][i] for j in range(3)] for i in range(3)]
    if not det(M, F):
        raise DegenerateFrame("first three frame points are collinear")
    lam = mat_mul(mat_inverse(M, F), [[c] for c in points[3].coords])
    lam = [r[0] for r in lam]
    if not all(lam):
        raise DegenerateFrame("frame has three collinear points")
    return [[M[i][j] * lam[j] for j in range(3)] for i in range(3)]


def transform_from_frames(source, target) -> ProjTransform:
    """The unique transform sending four points in general position to four others."""
    source, target = list(source), list(target)
    if len(source) != 4 or len(target) != 4:
        raise DegenerateFrame("frames need exactly four points")
    F = source[0].field
    A = _frame_matrix(source)
    B = _frame_matrix(target)
    return ProjTransform(mat_mul(B, mat_inverse(A, F)), F)


def transform_from_triangle(points, field: FieldSpec) -> ProjTransform:
    """A transform sending the coordinate points to the given three (representatives as stored)."""
    cols = [p.coords for p in points]
    return ProjTransform([[cols[j][i] for j in range(3)] for i in range(3)], field)


def coordinate_points(field: FieldSpec):
    o, z = field.one, field.zero
    return ProjPoint((o, z, z), field), ProjPoint((z, o, z), field), ProjPoint((z, z, o), field)


_POINT_RE = re.compile(r"\(([^()]*)\)")


def parse_points(text: str, field: FieldSpec):
    """All ``(a : b : c)`` literals occurring in text."""
    return [ProjPoint.parse(f"({m.group(1)})", field) for m in _POINT_RE.finditer(text)]
