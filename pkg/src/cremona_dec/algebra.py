"""Exact scalars and homogeneous polynomials.

Two kinds of field are supported: the rationals (scalars are
``fractions.Fraction``) and prime fields F_p with p > 3 (scalars are
:class:`Residue`).  Homogeneous forms wrap python-flint multivariate
polynomials, which supply multiplication, composition, gcd, factoring and
resultants.
"""
from __future__ import annotations

import math
import re
from fractions import Fraction
from functools import lru_cache
from itertools import count

import flint

from .errors import BadField, DegreeMismatch, FieldExtensionRequired, NonHomogeneous, NotASquare, ParseError

TERNARY = ("x", "y", "z")
BINARY = ("s", "t")

# flint's nmod contexts take word-sized moduli; bigger primes use fmpz_mod
_NMOD_LIMIT = 2**62


class Residue:
    """An element of F_p stored as its canonical residue in [0, p)."""

    __slots__ = ("value", "modulus")

    def __init__(self, value: int, modulus: int):
        self.value = int(value) % modulus
        self.modulus = modulus

    def _coerce(self, other):
        if isinstance(other, Residue):
            if other.modulus != self.modulus:
                raise BadField("mixing residues of different moduli")
            return other.value
        if isinstance(other, int):
            return other
        if isinstance(other, Fraction):
            if other.denominator % self.modulus == 0:
                raise BadField(f"{other} is not defined mod {self.modulus}")
            return other.numerator * pow(other.denominator, -1, self.modulus)
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is NotImplemented else Residue(self.value + o, self.modulus)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is NotImplemented else Residue(self.value - o, self.modulus)

    def __rsub__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is NotImplemented else Residue(o - self.value, self.modulus)

    def __mul__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is NotImplemented else Residue(self.value * o, self.modulus)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        if o % self.modulus == 0:
            raise ZeroDivisionError("division by zero in F_p")
        return Residue(self.value * pow(o, -1, self.modulus), self.modulus)

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return Residue(o, self.modulus) / self

    def __neg__(self):
        return Residue(-self.value, self.modulus)

    def __pos__(self):
        return self

    def __pow__(self, e: int):
        if e < 0:
            if self.value == 0:
                raise ZeroDivisionError("division by zero in F_p")
            return Residue(pow(pow(self.value, -1, self.modulus), -e, self.modulus), self.modulus)
        return Residue(pow(self.value, e, self.modulus), self.modulus)

    def __eq__(self, other):
        if isinstance(other, Residue):
            return self.value == other.value and self.modulus == other.modulus
        if isinstance(other, (int, Fraction)):
            try:
                return self.value == self._coerce(other) % self.modulus
            except BadField:
                return False
        return NotImplemented

    def __hash__(self):
        return hash((self.value, self.modulus))

    def __bool__(self):
        return self.value != 0

    def __int__(self):
        return self.value

    def __repr__(self):
        return f"Residue({self.value}, {self.modulus})"

    def __str__(self):
        return str(self.value)


def _is_prime(n: int) -> bool:
    return n > 1 and bool(flint.fmpz(n).is_prime())


class FieldSpec:
    """Either the rationals (``modulus is None``) or a prime field F_p, p > 3."""

    __slots__ = ("modulus",)

    def __init__(self, modulus: int | None = None):
        if modulus is not None:
            modulus = int(modulus)
            if modulus <= 3 or not _is_prime(modulus):
                raise BadField(f"prime field modulus must be a prime > 3, got {modulus}")
        self.modulus = modulus

    @classmethod
    def rationals(cls):
        return cls(None)

    @classmethod
    def prime(cls, p: int):
        return cls(p)

    @classmethod
    def parse(cls, text: str):
        """Accepts ``q`` or ``fp:<p>``."""
        text = text.strip().lower()
        if text in ("q", "qq", "rationals"):
            return cls(None)
        m = re.fullmatch(r"(?:fp|gf|f)[:_]?(\d+)", text)
        if not m:
            raise BadField(f"unknown field {text!r}; use q or fp:<p>")
        return cls(int(m.group(1)))

    @property
    def is_rational(self) -> bool:
        return self.modulus is None

    @property
    def name(self) -> str:
        return "q" if self.modulus is None else f"fp:{self.modulus}"

    def __eq__(self, other):
        return isinstance(other, FieldSpec) and other.modulus == self.modulus

    def __hash__(self):
        return hash(("FieldSpec", self.modulus))

    def __repr__(self):
        return f"FieldSpec({self.name})"

    # -- scalars -----------------------------------------------------------

    def __call__(self, value):
        """Coerce ints, Fractions, residues or literal strings into this field."""
        if isinstance(value, str):
            return self.parse_scalar(value)
        if self.modulus is None:
            if isinstance(value, Residue):
                raise BadField("residue given where a rational was expected")
            if isinstance(value, (flint.fmpq, flint.fmpz)):
                return _fraction_from_flint(value)
            return Fraction(value)
        p = self.modulus
        if isinstance(value, Residue):
            if value.modulus != p:
                raise BadField(f"residue mod {value.modulus} used in F_{p}")
            return value
        if isinstance(value, Fraction):
            if value.denominator % p == 0:
                raise BadField(f"{value} is not representable in F_{p}")
            return Residue(value.numerator * pow(value.denominator, -1, p), p)
        if isinstance(value, flint.fmpq):
            return self(_fraction_from_flint(value))
        return Residue(int(value), p)

    @property
    def zero(self):
        return self(0)

    @property
    def one(self):
        return self(1)

    def ratio(self, num: int, den: int):
        if self.modulus is not None and den % self.modulus == 0:
            raise BadField(f"{num}/{den} is not representable in F_{self.modulus}")
        if den == 0:
            raise BadField("zero denominator")
        return self(Fraction(num, den))

    def parse_scalar(self, text: str):
        m = re.fullmatch(r"\s*([+-]?)\s*(\d+)\s*(?:/\s*(\d+))?\s*", text)
        if not m:
            raise ParseError("not a scalar literal", text, 0)
        num = int(m.group(2)) * (-1 if m.group(1) == "-" else 1)
        den = int(m.group(3)) if m.group(3) else 1
        return self.ratio(num, den)

    def format(self, value) -> str:
        value = self(value)
        if self.modulus is None:
            return str(value)
        return str(value.value)

    def is_zero(self, value) -> bool:
        return not value

    def sqrt(self, a):
        """Deterministic square root: the smaller residue, or the positive rational."""
        a = self(a)
        if self.modulus is None:
            if a < 0:
                raise NotASquare(f"{a} is not a square in Q")
            n, d = a.numerator, a.denominator
            rn, rd = math.isqrt(n), math.isqrt(d)
            if rn * rn != n or rd * rd != d:
                raise NotASquare(f"{a} is not a square in Q")
            return Fraction(rn, rd)
        r = _sqrt_mod(a.value, self.modulus)
        if r is None:
            raise NotASquare(f"{a.value} is not a square mod {self.modulus}")
        return Residue(min(r, self.modulus - r), self.modulus)

    def is_square(self, a) -> bool:
        try:
            self.sqrt(a)
            return True
        except NotASquare:
            return False

    def is_cube(self, a) -> bool:
        a = self(a)
        if not a:
            return True
        if self.modulus is None:
            return _icbrt(a.numerator) is not None and _icbrt(a.denominator) is not None
        p = self.modulus
        if p % 3 == 2:
            return True
        return pow(a.value, (p - 1) // 3, p) == 1

    def cube_root(self, a):
        a = self(a)
        if self.modulus is None:
            n, d = _icbrt(a.numerator), _icbrt(a.denominator)
            if n is None or d is None:
                raise FieldExtensionRequired(f"{a} is not a cube in Q")
            return Fraction(n, d)
        p = self.modulus
        if p % 3 == 2:
            return Residue(pow(a.value, (2 * p - 1) // 3, p), p)
        for r in range(p) if p < 10**5 else ():
            if pow(r, 3, p) == a.value:
                return Residue(r, p)
        raise FieldExtensionRequired(f"{a.value} has no cube root found mod {p}")

    def elements(self, fractions: bool = False):
        """Deterministic enumeration 0, 1, -1, 2, -2, ... (optionally with small fractions).

        For a prime field the enumeration stops once every residue was produced.
        """
        seen = set()
        for v in _small_rationals(fractions):
            try:
                s = self(v)
            except BadField:
                continue
            if s in seen:
                continue
            seen.add(s)
            yield s
            if self.modulus is not None and len(seen) == self.modulus:
                return

    # -- flint plumbing ----------------------------------------------------

    def ctx(self, names=TERNARY):
        return _ctx(self.modulus, tuple(names))

    def to_flint(self, value):
        value = self(value)
        if self.modulus is None:
            return flint.fmpq(value.numerator, value.denominator)
        return value.value

    def from_flint(self, c):
        if self.modulus is None:
            return _fraction_from_flint(c)
        return Residue(int(c), self.modulus)


@lru_cache(maxsize=None)
def _ctx(modulus, names):
    if modulus is None:
        return flint.fmpq_mpoly_ctx.get(names)
    if modulus < _NMOD_LIMIT:
        return flint.nmod_mpoly_ctx.get(names, modulus=modulus)
    return flint.fmpz_mod_mpoly_ctx.get(names, modulus=modulus)


def _fraction_from_flint(c):
    if isinstance(c, flint.fmpq):
        return Fraction(int(c.p), int(c.q))
    return Fraction(int(c))


def _small_rationals(fractions: bool):
    yield 0
    if not fractions:
        for n in count(1):
            yield n
            yield -n
        return
    for h in count(1):
        for num in range(1, h + 1):
            for den in (h,) if num < h else range(1, h + 1):
                if math.gcd(num, den) == 1:
                    yield Fraction(num, den)
                    yield Fraction(-num, den)


def _icbrt(n: int):
    sign = -1 if n < 0 else 1
    n = abs(n)
    r = round(n ** (1 / 3)) if n < 2**52 else int(flint.fmpz(n).root(3))
    for c in (r - 1, r, r + 1):
        if c >= 0 and c**3 == n:
            return sign * c
    return None


def _sqrt_mod(a: int, p: int):
    a %= p
    if a == 0:
        return 0
    if p < 10**4:
        for r in range(1, p // 2 + 1):
            if r * r % p == a:
                return r
        return None
    if pow(a, (p - 1) // 2, p) != 1:
        return None
    # Tonelli-Shanks
    q, s = p - 1, 0
    while q % 2 == 0:
        q //= 2
        s += 1
    z = 2
    while pow(z, (p - 1) // 2, p) != p - 1:
        z += 1
    m, c, t, r = s, pow(z, q, p), pow(a, q, p), pow(a, (q + 1) // 2, p)
    while t != 1:
        i, t2 = 0, t
        while t2 != 1:
            t2 = t2 * t2 % p
            i += 1
        b = pow(c, 1 << (m - i - 1), p)
        m, c, t, r = i, b * b % p, t * b * b % p, r * b % p
    return r


def sqrt_scalar(a, field: FieldSpec):
    return field.sqrt(a)


# ---------------------------------------------------------------------------
# forms


class Form:
    """Homogeneous polynomial over a FieldSpec; immutable.

    Use the subclasses :class:`TernaryForm` (variables x, y, z) and
    :class:`BinaryForm` (variables s, t).
    """

    names: tuple = ()
    __slots__ = ("field", "poly")

    def __init__(self, field: FieldSpec, poly):
        self.field = field
        self.poly = poly

    # construction

    @classmethod
    def from_dict(cls, field: FieldSpec, terms: dict):
        ctx = field.ctx(cls.names)
        data = {}
        for exps, c in terms.items():
            c = field(c)
            if c:
                data[tuple(exps)] = field.to_flint(c)
        degs = {sum(e) for e in data}
        if len(degs) > 1:
            raise NonHomogeneous(f"mixed total degrees {sorted(degs)}")
        return cls(field, ctx.from_dict(data))

    @classmethod
    def zero(cls, field: FieldSpec):
        return cls(field, field.ctx(cls.names).from_dict({}))

    @classmethod
    def constant(cls, field: FieldSpec, c=1):
        return cls.from_dict(field, {(0,) * len(cls.names): c})

    @classmethod
    def var(cls, field: FieldSpec, name: str):
        i = cls.names.index(name)
        e = [0] * len(cls.names)
        e[i] = 1
        return cls.from_dict(field, {tuple(e): 1})

    @classmethod
    def gens(cls, field: FieldSpec):
        return tuple(cls.var(field, n) for n in cls.names)

    @classmethod
    def linear(cls, field: FieldSpec, coeffs):
        n = len(cls.names)
        terms = {}
        for i, c in enumerate(coeffs):
            e = [0] * n
            e[i] = 1
            terms[tuple(e)] = c
        return cls.from_dict(field, terms)

    @classmethod
    def parse(cls, text: str, field: FieldSpec):
        return parse_form(text, "xyz" if cls is TernaryForm else "st", field)

    def _new(self, poly):
        return type(self)(self.field, poly)

    # inspection

    @property
    def degree(self) -> int:
        return 0 if self.poly.is_zero() else int(self.poly.total_degree())

    def is_zero(self) -> bool:
        return self.poly.is_zero()

    def is_constant(self) -> bool:
        return self.is_zero() or self.degree == 0

    def terms(self):
        """List of (exponents, coefficient), lexicographically first monomial first."""
        items = [(tuple(int(e) for e in m), self.field.from_flint(c))
                 for m, c in zip(self.poly.monoms(), self.poly.coeffs())]
        items.sort(key=lambda mc: mc[0], reverse=True)
        return items

    def coefficient(self, exps):
        for m, c in self.terms():
            if m == tuple(exps):
                return c
        return self.field.zero

    def lead_coefficient(self):
        t = self.terms()
        return t[0][1] if t else self.field.zero

    # arithmetic

    def _check(self, other):
        if not isinstance(other, Form) or other.names != self.names:
            raise TypeError("form operands must share variables")
        if other.field != self.field:
            raise BadField("form operands over different fields")

    def __add__(self, other):
        if not isinstance(other, Form):
            if other == 0:
                return self
            return NotImplemented
        self._check(other)
        if not self.is_zero() and not other.is_zero() and self.degree != other.degree:
            raise DegreeMismatch(f"cannot add forms of degree {self.degree} and {other.degree}")
        return self._new(self.poly + other.poly)

    def __radd__(self, other):
        return self.__add__(other)

    def __neg__(self):
        return self._new(-self.poly)

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, Form):
            self._check(other)
            return self._new(self.poly * other.poly)
        try:
            c = self.field.to_flint(other)
        except (TypeError, ValueError, BadField):
            return NotImplemented
        return self._new(self.poly * c)

    def __rmul__(self, other):
        return self.__mul__(other)

    def __pow__(self, e: int):
        if e < 0:
            raise ValueError("negative powers of forms are not forms")
        return self._new(self.poly ** e)

    def scale(self, c):
        return self * c

    def __truediv__(self, c):
        if isinstance(c, Form):
            return self.divexact(c)
        return self * (self.field.one / self.field(c))

    def __eq__(self, other):
        return isinstance(other, Form) and other.names == self.names and \
            other.field == self.field and self.poly == other.poly

    def __hash__(self):
        return hash((self.names, self.field, tuple(self.terms())))

    def __repr__(self):
        return f"{type(self).__name__}({str(self)!r}, {self.field.name})"

    def __str__(self):
        return print_form(self)

    # algebra

    def canonical(self):
        """Scaled so the lexicographically first coefficient is 1."""
        if self.is_zero():
            return self
        return self / self.lead_coefficient()

    def proportional(self, other) -> bool:
        """Equality up to a nonzero scalar (the zero form is only proportional to itself)."""
        if self.is_zero() or other.is_zero():
            return self.is_zero() and other.is_zero()
        return self.canonical() == other.canonical()

    def substitute(self, *images):
        """``f(g0, g1, ...)`` for forms ``g_i`` of a common degree and variable set."""
        if len(images) != len(self.names):
            raise ValueError(f"expected {len(self.names)} substitutions")
        first = images[0]
        for g in images:
            first._check(g)
        nonzero = {g.degree for g in images if not g.is_zero()}
        if len(nonzero) > 1:
            raise DegreeMismatch("substituted forms must share a degree")
        ctx = first.field.ctx(first.names)
        poly = self.poly.compose(*(g.poly for g in images), ctx=ctx)
        return type(first)(first.field, poly)

    def derivative(self, var):
        if isinstance(var, int):
            var = self.names[var]
        return self._new(self.poly.derivative(var))

    def gradient(self):
        return tuple(self.derivative(n) for n in self.names)

    def __call__(self, *values):
        return self.evaluate(values)

    def evaluate(self, values):
        vals = [self.field.to_flint(v) for v in values]
        if self.poly.is_zero():
            return self.field.zero
        return self.field(self.field.from_flint(self.poly(*vals)))

    def gcd(self, other):
        self._check(other)
        return self._new(self.poly.gcd(other.poly)).canonical()

    def divexact(self, other):
        self._check(other)
        try:
            q, r = divmod(self.poly, other.poly)
        except flint.utils.flint_exceptions.FlintError as exc:  # pragma: no cover
            raise ArithmeticError(str(exc))
        if not r.is_zero():
            raise ArithmeticError("division is not exact")
        return self._new(q)

    def divides(self, other) -> bool:
        """True when self divides other."""
        if self.is_zero():
            return other.is_zero()
        _, r = divmod(other.poly, self.poly)
        return r.is_zero()

    def factor(self):
        """(scalar, [(irreducible factor, multiplicity)]) with canonical factors."""
        c, facs = self.poly.factor()
        scalar = self.field.from_flint(c)
        out = []
        for f, m in facs:
            f = self._new(f)
            lc = f.lead_coefficient()
            scalar = scalar * lc ** int(m)
            out.append((f / lc, int(m)))
        out.sort(key=lambda fm: (fm[0].degree, str(fm[0])))
        return scalar, out

    def factor_linear(self, require_split: bool = False):
        """Split off linear factors: returns ([(line, multiplicity)], remainder)."""
        if self.is_zero():
            raise ValueError("cannot factor the zero form")
        scalar, facs = self.factor()
        lines = [(f, m) for f, m in facs if f.degree == 1]
        rest = [(f, m) for f, m in facs if f.degree != 1]
        if rest and require_split:
            raise FieldExtensionRequired(f"{self} does not split into rational linear factors")
        rem = type(self).constant(self.field, scalar)
        for f, m in rest:
            rem = rem * f ** m
        return lines, rem

    def resultant(self, other, var):
        self._check(other)
        if isinstance(var, int):
            var = self.names[var]
        return self._new(self.poly.resultant(other.poly, var))


class TernaryForm(Form):
    names = TERNARY
    __slots__ = ()


class BinaryForm(Form):
    names = BINARY
    __slots__ = ()

    @classmethod
    def from_coefficients(cls, field: FieldSpec, coeffs):
        """Coefficients of s^d, s^(d-1) t, ..., t^d."""
        d = len(coeffs) - 1
        return cls.from_dict(field, {(d - i, i): c for i, c in enumerate(coeffs)})

    def coefficients(self, degree: int | None = None):
        d = self.degree if degree is None else degree
        out = [self.field.zero] * (d + 1)
        for (i, j), c in self.terms():
            out[j] = c
        return out

    def roots(self):
        """Rational roots as ((s, t) normalized, multiplicity), from linear factors."""
        if self.is_zero():
            raise ValueError("the zero form vanishes everywhere")
        lines, _ = self.factor_linear()
        out = []
        for f, m in lines:
            a = f.coefficient((1, 0))
            b = f.coefficient((0, 1))
            out.append((normalize_pair(self.field, (-b, a)), m))
        out.sort(key=lambda rm: _pair_key(rm[0]))
        return out

    def splits(self) -> bool:
        lines, rem = self.factor_linear()
        return rem.degree == 0


def normalize_pair(field: FieldSpec, pair):
    """Canonical representative of a point of P^1: (u, 1) or (1, 0)."""
    s, t = field(pair[0]), field(pair[1])
    if t:
        return (s / t, field.one)
    if not s:
        raise ValueError("(0 : 0) is not a point of P^1")
    return (field.one, field.zero)


def _pair_key(pair):
    s, t = pair
    return (int(not t), str(s))


def binary_linear_factor(field: FieldSpec, root):
    """The linear binary form t0*s - s0*t vanishing at (s0 : t0)."""
    s0, t0 = root
    return BinaryForm.from_coefficients(field, [t0, -s0]).canonical()


# ---------------------------------------------------------------------------
# parsing and printing

_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_]\w*)|(\S))")


def _tokenize(text):
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:  # only whitespace left
            break
        start = m.start(m.lastindex) if m.lastindex else pos
        if m.group(1) is not None:
            tokens.append(("num", int(m.group(1)), start))
        elif m.group(2) is not None:
            tokens.append(("name", m.group(2), start))
        elif m.group(3) is not None:
            tokens.append(("op", m.group(3), start))
        pos = m.end()
    tokens.append(("end", None, len(text)))
    return tokens


class _Parser:
    def __init__(self, text, names, field):
        self.text = text
        self.names = names
        self.field = field
        self.ctx = field.ctx(names)
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.tokens[self.i]

    def take(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def fail(self, msg, tok=None):
        tok = tok or self.peek()
        raise ParseError(msg, self.text, tok[2])

    def expect(self, op):
        tok = self.take()
        if tok[0] != "op" or tok[1] != op:
            self.fail(f"expected {op!r}", tok)

    def parse(self):
        if self.peek()[0] == "end":
            self.fail("empty expression")
        value = self.expr()
        tok = self.peek()
        if tok[0] != "end":
            if tok[0] in ("num", "name") or tok[1] == "(":
                self.fail("missing '*' (implicit multiplication is not allowed)")
            self.fail(f"unexpected {tok[1]!r}")
        return value

    def expr(self):
        value = self.term()
        while self.peek()[0] == "op" and self.peek()[1] in "+-":
            op = self.take()[1]
            rhs = self.term()
            value = value + rhs if op == "+" else value - rhs
        return value

    def term(self):
        value = self.unary()
        while self.peek()[0] == "op" and self.peek()[1] == "*":
            self.take()
            value = value * self.unary()
        return value

    def unary(self):
        tok = self.peek()
        if tok[0] == "op" and tok[1] in "+-":
            self.take()
            v = self.unary()
            return -v if tok[1] == "-" else v
        return self.power()

    def power(self):
        base = self.atom()
        if self.peek()[0] == "op" and self.peek()[1] == "^":
            self.take()
            tok = self.take()
            if tok[0] != "num":
                self.fail("exponent must be a non-negative integer literal", tok)
            base = base ** tok[1]
        return base

    def atom(self):
        tok = self.take()
        kind, val, pos = tok
        if kind == "num":
            num, den = val, 1
            if self.peek()[0] == "op" and self.peek()[1] == "/":
                self.take()
                t2 = self.take()
                if t2[0] != "num":
                    self.fail("denominator must be an integer literal", t2)
                den = t2[1]
                if den == 0:
                    self.fail("zero denominator", t2)
            try:
                c = self.field.ratio(num, den)
            except BadField as exc:
                raise BadField(f"{exc} at position {pos}")
            return self.ctx.constant(self.field.to_flint(c))
        if kind == "name":
            if val not in self.names:
                self.fail(f"unknown variable {val!r} (expected one of {', '.join(self.names)})", tok)
            return self.ctx.gen(self.names.index(val))
        if kind == "op" and val == "(":
            v = self.expr()
            self.expect(")")
            return v
        if kind == "end":
            self.fail("unexpected end of input", tok)
        self.fail(f"unexpected {val!r}", tok)


def parse_form(text: str, variables: str = "xyz", field: FieldSpec | None = None):
    """Parse a homogeneous polynomial in ``x y z`` or ``s t``."""
    field = field or FieldSpec()
    names = TERNARY if variables in ("xyz", TERNARY) else BINARY
    poly = _Parser(text, names, field).parse()
    degs = {sum(int(e) for e in m) for m in poly.monoms()}
    if len(degs) > 1:
        raise NonHomogeneous(f"{text!r} mixes total degrees {sorted(degs)}")
    cls = TernaryForm if names == TERNARY else BinaryForm
    return cls(field, poly)


def _monomial(names, exps):
    parts = []
    for n, e in zip(names, exps):
        if e == 1:
            parts.append(n)
        elif e > 1:
            parts.append(f"{n}^{e}")
    return "*".join(parts)


def print_form(f: Form) -> str:
    if f.is_zero():
        return "0"
    out = []
    for exps, c in f.terms():
        mono = _monomial(f.names, exps)
        if f.field.is_rational:
            neg = c < 0
            mag = -c if neg else c
            cs = str(mag)
        else:
            neg = False
            cs = str(c.value)
        if mono:
            body = mono if cs == "1" else f"{cs}*{mono}"
        else:
            body = cs
        if not out:
            out.append(f"-{body}" if neg else body)
        else:
            out.append(f" - {body}" if neg else f" + {body}")
    return "".join(out)


# ---------------------------------------------------------------------------
# linear algebra


def nullspace(rows, ncols: int, field: FieldSpec):
    """Basis of the right kernel of the matrix given by ``rows`` (lists of scalars)."""
    rows = [list(r) for r in rows]
    if not rows:
        return [[field.one if i == j else field.zero for i in range(ncols)] for j in range(ncols)]
    reduced, pivots = _rref(rows, ncols, field)
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for fcol in free:
        v = [field.zero] * ncols
        v[fcol] = field.one
        for r, pc in enumerate(pivots):
            v[pc] = -reduced[r][fcol]
        basis.append(v)
    return basis


def _rref(rows, ncols, field):
    m = len(rows)
    if field.modulus is None:
        mat = flint.fmpq_mat(m, ncols, [field.to_flint(c) for r in rows for c in r])
        red, rank = mat.rref()
        reduced = [[field.from_flint(red[i, j]) for j in range(ncols)] for i in range(rank)]
    elif field.modulus < _NMOD_LIMIT:
        mat = flint.nmod_mat(m, ncols, [field(c).value for r in rows for c in r], field.modulus)
        red, rank = mat.rref()
        reduced = [[field(int(red[i, j])) for j in range(ncols)] for i in range(rank)]
    else:
        reduced = _rref_python([[field(c) for c in r] for r in rows], ncols, field)
    pivots = []
    for r in reduced:
        for j, c in enumerate(r):
            if c:
                pivots.append(j)
                break
    return reduced, pivots


def _rref_python(rows, ncols, field):
    rows = [r[:] for r in rows]
    rank = 0
    for col in range(ncols):
        piv = next((i for i in range(rank, len(rows)) if rows[i][col]), None)
        if piv is None:
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        inv = field.one / rows[rank][col]
        rows[rank] = [c * inv for c in rows[rank]]
        for i in range(len(rows)):
            if i != rank and rows[i][col]:
                f = rows[i][col]
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[rank])]
        rank += 1
    return rows[:rank]


def det(matrix, field: FieldSpec):
    """Determinant by Gaussian elimination (meant for small matrices)."""
    m = [[field(c) for c in row] for row in matrix]
    n = len(m)
    result = field.one
    for col in range(n):
        piv = next((i for i in range(col, n) if m[i][col]), None)
        if piv is None:
            return field.zero
        if piv != col:
            m[col], m[piv] = m[piv], m[col]
            result = -result
        result = result * m[col][col]
        inv = field.one / m[col][col]
        for i in range(col + 1, n):
            if m[i][col]:
                f = m[i][col] * inv
                m[i] = [a - f * b for a, b in zip(m[i], m[col])]
    return result


def mat_inverse(matrix, field: FieldSpec):
    n = len(matrix)
    aug = [[field(c) for c in row] + [field.one if i == j else field.zero for j in range(n)]
           for i, row in enumerate(matrix)]
    red = _rref_python(aug, 2 * n, field)
    if len(red) < n or any(not red[i][i] for i in range(n)):
        raise ZeroDivisionError("singular matrix")
    return [row[n:] for row in red]


def mat_mul(a, b):
    return [[sum((a[i][k] * b[k][j] for k in range(len(b))), start=0 * a[0][0]) for j in range(len(b[0]))]
            for i in range(len(a))]
