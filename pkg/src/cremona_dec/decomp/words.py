"""Words of quadratic and linear letters, and their verification certificates."""
from __future__ import annotations

import json
from dataclasses import dataclass, field as dc_field

from ..algebra import FieldSpec
from ..birmap import BirMap, ElementaryQuadratic, as_map, invert, is_elementary_quadratic
from ..curves import RationalCurve, in_dec, parse_curve
from ..errors import PreconditionError, VerificationFailed
from ..projgeom import ProjPoint

QUADRATIC = "quadratic"
LINEAR = "linear"


@dataclass
class FactorStep:
    map: BirMap
    kind: str
    base_points: tuple = ()

    @classmethod
    def of(cls, phi, curve: RationalCurve | None = None, check: bool = True):
        """Wrap a linear or elementary quadratic map, checking Dec membership if a curve is given."""
        phi = as_map(phi)
        if phi.degree == 1:
            step = cls(phi, LINEAR, ())
        elif phi.degree == 2:
            q = phi if isinstance(phi, ElementaryQuadratic) else is_elementary_quadratic(phi)
            if not q:
                raise PreconditionError(f"step is not an elementary quadratic map ({q.reason})")
            step = cls(q, QUADRATIC, tuple(q.base_points))
        else:
            raise PreconditionError(f"a step must have degree 1 or 2, got {phi.degree}")
        if check and curve is not None and not in_dec(step.map, curve):
            raise VerificationFailed(f"step {phi} does not preserve the curve")
        return step

    def to_json(self):
        return {"kind": self.kind, "map": str(self.map), "base_points": [str(p) for p in self.base_points]}


@dataclass
class Factorization:
    """A word whose letters compose to ``target``.

    ``steps[0]`` is applied first, so ``target = steps[-1] o ... o steps[0]``.
    """
    target: BirMap
    curve: RationalCurve
    steps: list = dc_field(default_factory=list)
    verified: bool = False

    @property
    def quadratic_count(self) -> int:
        return sum(1 for s in self.steps if s.kind == QUADRATIC)

    @property
    def linear_count(self) -> int:
        return sum(1 for s in self.steps if s.kind == LINEAR)

    @property
    def stats(self):
        return {"quadratic_count": self.quadratic_count, "linear_count": self.linear_count,
                "length": len(self.steps)}

    @property
    def maps(self):
        return [s.map for s in self.steps]

    def composed(self) -> BirMap:
        return compose_word(self.maps, self.target.field)

    def to_json(self) -> dict:
        return {
            "field": self.curve.field.name,
            "target": str(self.target),
            "curve": self.curve.literal(),
            "steps": [s.to_json() for s in self.steps],
            "stats": self.stats,
            "verified": self.verified,
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=2)


def compose_word(maps, field: FieldSpec) -> BirMap:
    out = BirMap.identity(field)
    for m in maps:
        out = as_map(m).compose(out)
    return out


def inverse_word(maps):
    return [invert(m) for m in reversed(maps)]


def merge_linear(maps, field: FieldSpec):
    """Fuse runs of linear letters into one letter and drop identities."""
    out = []
    for m in maps:
        m = as_map(m)
        if m.degree == 1 and out and out[-1].degree == 1:
            out[-1] = m.compose(out[-1])
        else:
            out.append(m)
    return [m for m in out if not (m.degree == 1 and m.is_identity())]


def absorb_linear(maps, field: FieldSpec):
    """Fold every linear letter into a neighbouring quadratic letter.

    Returns elementary quadratics only, unless the word has no quadratic
    letter, in which case a single linear letter (or nothing) is returned.
    """
    maps = merge_linear(maps, field)
    quads = [m for m in maps if m.degree != 1]
    if not quads:
        return maps
    out = []
    pending = None
    for m in maps:
        if m.degree == 1:
            if out:
                out[-1] = _left_linear(m, out[-1])
            else:
                pending = m if pending is None else m.compose(pending)
        else:
            q = m if pending is None else _right_linear(m, pending)
            pending = None
            out.append(q)
    return out


def _left_linear(alpha, q):
    base = q.base_points if isinstance(q, ElementaryQuadratic) else None
    out = alpha.compose(q)
    return ElementaryQuadratic(out, base) if base else _as_quad(out)


def _right_linear(q, alpha):
    base = q.base_points if isinstance(q, ElementaryQuadratic) else None
    out = q.compose(alpha)
    if base:
        inv = alpha.is_linear().inverse()
        return ElementaryQuadratic(out, tuple(inv.apply(p) for p in base))
    return _as_quad(out)


def _as_quad(m):
    q = is_elementary_quadratic(m)
    return q if q else m


def make_factorization(target, curve: RationalCurve, maps, verify: bool = True) -> Factorization:
    field = curve.field
    maps = merge_linear(maps, field)
    steps = [FactorStep.of(m, curve, check=False) for m in maps]
    f = Factorization(as_map(target), curve, steps)
    if verify:
        report = verify_factorization(f)
        if not report["verified"]:
            raise VerificationFailed(f"factorization failed verification: {report['failures']}")
        f.verified = True
    return f


def verify_factorization(f: Factorization) -> dict:
    """Recompose the word, compare with the target and check each letter."""
    failures = []
    degrees = []
    for i, s in enumerate(f.steps):
        m = s.map
        degrees.append(m.degree)
        if s.kind == LINEAR and m.degree != 1:
            failures.append(f"step {i}: linear letter has degree {m.degree}")
        if s.kind == QUADRATIC:
            if m.degree != 2:
                failures.append(f"step {i}: quadratic letter has degree {m.degree}")
            else:
                q = is_elementary_quadratic(BirMap(m.components, m.field))
                if not q:
                    failures.append(f"step {i}: not elementary ({q.reason})")
                elif s.base_points and set(q.base_points) != set(s.base_points):
                    failures.append(f"step {i}: recorded base points differ")
        if not in_dec(m, f.curve):
            failures.append(f"step {i}: does not preserve the curve")
    composition_ok = compose_word(f.maps, f.curve.field) == f.target
    if not composition_ok:
        failures.append("composition differs from target")
    return {
        "verified": not failures,
        "composition_ok": composition_ok,
        "failures": failures,
        "degrees": degrees,
        "quadratic_count": f.quadratic_count,
        "linear_count": f.linear_count,
    }


def load_certificate(data, field: FieldSpec | None = None) -> Factorization:
    """Rebuild a Factorization from certificate JSON (dict or string); no library state needed."""
    if isinstance(data, str):
        data = json.loads(data)
    field = field or FieldSpec.parse(data.get("field", "q"))
    curve = parse_curve(data["curve"], field)
    target = BirMap.parse(data["target"], field)
    steps = []
    for s in data["steps"]:
        m = BirMap.parse(s["map"], field)
        pts = tuple(ProjPoint.parse(p, field) for p in s.get("base_points", []))
        if s["kind"] == QUADRATIC and pts:
            m = ElementaryQuadratic(m, pts)
        steps.append(FactorStep(m, s["kind"], pts))
    return Factorization(target, curve, steps, bool(data.get("verified", False)))
