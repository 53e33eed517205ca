from fractions import Fraction

import pytest
import sympy
from hypothesis import given, settings, strategies as st

from cremona_dec.algebra import (BinaryForm, FieldSpec, Residue, TernaryForm, det, mat_inverse, mat_mul,
                                 nullspace, parse_form, print_form, sqrt_scalar)
from cremona_dec.errors import BadField, NonHomogeneous, NotASquare, ParseError

sx, sy, sz = sympy.symbols("x y z")


def to_sympy(f):
    return sympy.sympify(str(f).replace("^", "**"), locals={"x": sx, "y": sy, "z": sz})


def test_field_parsing():
    assert FieldSpec.parse("q").is_rational
    assert FieldSpec.parse("fp:101").modulus == 101
    for bad in ("fp:3", "fp:2", "fp:100", "reals"):
        with pytest.raises(BadField):
            FieldSpec.parse(bad)


def test_parse_known_forms(Q):
    c = parse_form("x*z - y^2", "xyz", Q)
    assert c.degree == 2 and str(c) == "x*z - y^2"
    n = parse_form("x^3 + y^3 - x*y*z", "xyz", Q)
    assert n.degree == 3
    assert parse_form("x + x", "xyz", Q) == TernaryForm.gens(Q)[0] * 2


def test_parse_errors(Q):
    for text in ("x +", "x*w", "(x"):
        with pytest.raises(ParseError):
            parse_form(text, "xyz", Q)
    with pytest.raises(NonHomogeneous):
        parse_form("x^2 + y", "xyz", Q)


def test_arith(Q):
    x, y, z = TernaryForm.gens(Q)
    assert (x * z - y**2) + y**2 == x * z
    assert (x * y).degree == 2
    assert (x + y) ** 2 == x**2 + x * y * 2 + y**2


def test_substitute_against_sympy(Q):
    x, y, z = TernaryForm.gens(Q)
    f = x * z - y**2
    got = f.substitute(y * z, z * x, x * y)
    ref = sympy.expand((sx * sz - sy**2).subs({sx: sy * sz, sy: sz * sx, sz: sx * sy}, simultaneous=True))
    assert sympy.expand(to_sympy(got) - ref) == 0
    assert got == (x * z * (x * z - y**2)) * -1
    assert f.substitute(x, y, z) == f
    assert x.substitute(y * z, z * x, x * y) == y * z


def test_gcd(Q):
    x, y, z = TernaryForm.gens(Q)
    c = x * z - y**2
    assert (x * c).gcd(y * c) == c
    assert x.gcd(y).degree == 0
    assert (x**2 * y).gcd(x * y**2) == x * y


def test_factor_linear(Q):
    x, y, z = TernaryForm.gens(Q)
    lines, rem = (x * y * z).factor_linear()
    assert sorted(str(f) for f, _ in lines) == ["x", "y", "z"] and rem.degree == 0
    lines, rem = (x**2 * (x + y)).factor_linear()
    assert {(str(f), m) for f, m in lines} == {("x", 2), ("x + y", 1)}
    lines, rem = (x**2 + y**2).factor_linear()
    assert lines == [] and rem == x**2 + y**2


def test_resultant(Q):
    x, y, z = TernaryForm.gens(Q)
    r = (x - y).resultant(x - z, "x")
    assert r.proportional(y - z)
    assert (x**2).resultant(x, "x").is_zero()
    s, t = BinaryForm.gens(Q)
    r = (s - t).resultant(s + t, "t")
    ref = sympy.resultant(sympy.Symbol("s") - sympy.Symbol("t"), sympy.Symbol("s") + sympy.Symbol("t"),
                          sympy.Symbol("t"))
    assert r.proportional(s * 2) and ref in (2 * sympy.Symbol("s"), -2 * sympy.Symbol("s"))


def test_sqrt(Q):
    assert sqrt_scalar(Fraction(9, 4), Q) == Fraction(3, 2)
    with pytest.raises(NotASquare):
        sqrt_scalar(2, Q)
    F7 = FieldSpec(7)
    # oracle: exhaustive search
    roots = sorted(r for r in range(7) if r * r % 7 == 2)
    assert roots == [3, 4]
    assert int(sqrt_scalar(2, F7)) == 3


@given(st.integers(1, 10_006))
@settings(max_examples=60, deadline=None)
def test_sqrt_mod_roundtrip(a):
    F = FieldSpec(10007)
    v = F(a)
    if F.is_square(v):
        r = F.sqrt(v)
        assert r * r == v
    else:
        assert pow(a, 5003, 10007) == 10006


@given(st.integers(0, 100), st.integers(1, 100), st.integers(1, 100))
@settings(max_examples=80, deadline=None)
def test_residue_field_axioms(a, b, c):
    p = 101
    A, B, C = Residue(a, p), Residue(b, p), Residue(c, p)
    assert (A + B) * C == A * C + B * C
    assert B * (1 / B) == 1
    assert (A - A) == 0


def test_print_parse_roundtrip(Q):
    f = parse_form("3/2*x^2*y - 7*y*z^2 + z^3", "xyz", Q)
    assert parse_form(print_form(f), "xyz", Q) == f


def test_matrices(Q):
    M = [[2, 1, 0], [0, 1, 3], [1, 0, 1]]
    assert det(M, Q) == sympy.Matrix(M).det()
    inv = mat_inverse(M, Q)
    assert mat_mul(M, inv) == [[1, 0, 0], [0, 1, 0], [0, 0, 1]] or \
        [list(r) for r in mat_mul(M, inv)] == [[1, 0, 0], [0, 1, 0], [0, 0, 1]]
    ns = nullspace([[1, 1, 1]], 3, Q)
    assert len(ns) == 2
