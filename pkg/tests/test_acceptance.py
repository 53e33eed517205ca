"""Acceptance suite: one PASS/FAIL line per criterion, printed in the terminal summary.

Each criterion times only the library work; independent sympy checks run
outside the timed block.
"""
import random
import time
from contextlib import contextmanager
from fractions import Fraction

import sympy

from cremona_dec.algebra import FieldSpec
from cremona_dec.birmap import BirMap, MobiusMap, invert, map_eq, quad_from_points, sigma_standard
from cremona_dec.curves import CUSPIDAL, NODAL, canonical_model, in_dec, in_ine, line_intersections
from cremona_dec.decomp import (aut_conic_from_pgl2, compose_word, conic, conjugation_relation, cuspidal_aut,
                                dec_line_quadratic, demo_cuspidal, group_closure, lambda_ab, lemma_b_conic,
                                lemma_b_cubic, lemma_c_conic, lemma_c_cubic, lift_factorization, line_model, load_certificate,
                                make_factorization, mu_c, nodal_aut_generators, orbit_classify,
                                pgl2_from_aut_conic, phi_conic_cubic, phi_conic_cubic_candidates, phi_line_conic,
                                sigma_ab, tangent_avoiding, verify_factorization, xd_aut, xd_curve,
                                xd_quadratic_checker, xd_tau)
from cremona_dec.decomp.lemmas import _split_phi
from cremona_dec.projgeom import ProjPoint, ProjTransform, collinear, general_position, line_through

Q = FieldSpec()
F101 = FieldSpec(101)
FP = FieldSpec(10007)
x, y, z, t, sa, sb, sc = sympy.symbols("x y z t a b c")


@contextmanager
def criterion(log, n, title, limit=None):
    """Time the block and record a PASS/FAIL line; details go in the yielded dict."""
    info = {"detail": ""}
    t0 = time.perf_counter()
    try:
        yield info
    except BaseException as exc:
        _emit(log, n, False, title, f"{type(exc).__name__}: {exc}", time.perf_counter() - t0, limit)
        raise
    elapsed = info.get("seconds", time.perf_counter() - t0)
    ok = limit is None or elapsed < limit
    _emit(log, n, ok, title, info["detail"], elapsed, limit)
    assert ok, f"criterion {n} took {elapsed:.2f} s, limit {limit} s"


def _emit(log, n, ok, title, detail, elapsed, limit):
    budget = f" < {limit} s" if limit else ""
    line = f"{'PASS' if ok else 'FAIL'}  [{n:2d}] {title}: {detail} ({elapsed:.2f} s{budget})"
    print(line)
    log.append((n, line))


def rand_q(rng, nonzero=False):
    while True:
        v = Fraction(rng.randint(-30, 30), rng.randint(1, 12))
        if v or not nonzero:
            return v


def rand_fp(rng, F, nonzero=False):
    while True:
        v = F(rng.randrange(F.modulus))
        if v or not nonzero:
            return v


def rand_scalar(rng, F, nonzero=False):
    return rand_q(rng, nonzero) if F == Q else rand_fp(rng, F, nonzero)


def rand_mobius(rng, F):
    while True:
        a, b, c, d = (rand_scalar(rng, F) for _ in range(4))
        if a * d - b * c:
            return MobiusMap(((a, b), (c, d)), F)


def rand_aut_conic(rng, F):
    return aut_conic_from_pgl2(rand_mobius(rng, F)).to_birmap()


def to_sympy(form):
    return sympy.sympify(str(form).replace("^", "**"), locals={"x": x, "y": y, "z": z})


def proportional_triples(u, v):
    return all(sympy.expand(u[i] * v[j] - u[j] * v[i]) == 0 for i in range(3) for j in range(i + 1, 3))


# ---------------------------------------------------------------------------


def sigma_sympy(a, b):
    return [(1 - a * b) * x * y + a * (x * z - y**2), x * z - a * b * y**2, (1 - a * b) * y * z + b * (x * z - y**2)]


def test_c01_sigma_family_in_ine(acceptance_log):
    rng = random.Random(101)
    cases = []
    for F in (Q, F101):
        while len([c for c in cases if c[0] == F]) < 25:
            a, b = rand_scalar(rng, F), rand_scalar(rng, F)
            if a * b != 1:
                cases.append((F, a, b))
    # oracle: the displayed formula fixes (t^2 : t : 1) for symbolic a, b
    img = [e.subs({x: t**2, y: t, z: 1}) for e in sigma_sympy(sa, sb)]
    assert proportional_triples(img, [t**2, t, 1])
    for F, a, b in cases[:25]:
        lib = [to_sympy(c) for c in sigma_ab(a, b, F).components]
        ref = sigma_sympy(sympy.Rational(a.numerator, a.denominator), sympy.Rational(b.numerator, b.denominator))
        assert proportional_triples(lib, ref)
    with criterion(acceptance_log, 1, "sigma_{a,b} in Ine(C)", 1.0) as info:
        t0 = time.perf_counter()
        results = [in_ine(sigma_ab(a, b, F), conic(F)) for F, a, b in cases]
        info["seconds"] = time.perf_counter() - t0
        assert all(results)
        info["detail"] = f"{sum(results)}/{len(cases)} true over q and fp:101"


def test_c02_conjugation_relation(acceptance_log):
    rng = random.Random(202)
    cases = []
    while len(cases) < 25:
        a, b, c = rand_q(rng), rand_q(rng), rand_q(rng)
        if a * b not in (0, 1) and c not in (0, 1):
            cases.append((a, b, c))
    ap = (1 - sa * sb * sc) / (sb * (sc - 1))
    bp = (sa * sb - sc) / (sa * (sc - 1))
    assert (ap.subs({sa: 2, sb: 1, sc: 3}), bp.subs({sa: 2, sb: 1, sc: 3})) == \
        (sympy.Rational(-5, 2), sympy.Rational(-1, 4))
    with criterion(acceptance_log, 2, "conjugation relation", 2.0) as info:
        t0 = time.perf_counter()
        out = [conjugation_relation(a, b, c, Q) for a, b, c in cases + [(2, 1, 3)]]
        eq = [map_eq(lhs, sigma_ab(a2, b2, Q)) for a2, b2, lhs in out]
        info["seconds"] = time.perf_counter() - t0
        for (a, b, c), (a2, b2, _) in zip(cases, out):
            sub = {sa: sympy.Rational(a.numerator, a.denominator), sb: sympy.Rational(b.numerator, b.denominator),
                   sc: sympy.Rational(c.numerator, c.denominator)}
            assert Fraction(str(ap.subs(sub))) == a2 and Fraction(str(bp.subs(sub))) == b2
        assert all(eq)
        assert out[-1][:2] == (Fraction(-5, 2), Fraction(-1, 4))
        info["detail"] = f"{sum(eq)}/26 exact identities, (2,1,3) -> ({out[-1][0]}, {out[-1][1]})"


def test_c03_pgl2_embedding(acceptance_log):
    rng = random.Random(303)
    pairs = [(rand_mobius(rng, Q), rand_mobius(rng, Q)) for _ in range(25)]
    C = conic(Q)
    with criterion(acceptance_log, 3, "PGL2 -> Aut(P^2, C) homomorphism") as info:
        for m1, m2 in pairs:
            (a, b), (c, d) = m1.matrix
            (e, f), (g, h) = m2.matrix
            prod = MobiusMap(((a * e + b * g, a * f + b * h), (c * e + d * g, c * f + d * h)), Q)
            T1, T2, T12 = (aut_conic_from_pgl2(m) for m in (m1, m2, prod))
            assert T12.to_birmap() == T1.to_birmap().compose(T2.to_birmap())
            assert in_dec(T12.to_birmap(), C)
            assert pgl2_from_aut_conic(T12) == prod
        for a, b in ((2, 1), (Fraction(-1, 3), 5), (7, Fraction(2, 9))):
            lam = BirMap.parse(f"[x + 2*({a})*y + ({a})^2*z : ({b})*x + (1 + ({a})*({b}))*y + ({a})*z :"
                               f" ({b})^2*x + 2*({b})*y + z]", Q)
            assert aut_conic_from_pgl2(MobiusMap(((1, a), (b, 1)), Q)).to_birmap() == lam
            assert lambda_ab(a, b, Q).to_birmap() == lam
        for c in (2, Fraction(-3, 4), 11):
            mu = BirMap.parse(f"[({c})^2*x : ({c})*y : z]", Q)
            assert aut_conic_from_pgl2(MobiusMap(((c, 0), (0, 1)), Q)).to_birmap() == mu == mu_c(c, Q).to_birmap()
        info["detail"] = "25 pairs multiplicative and conic-preserving; lambda, mu match their formulas"


# ---------------------------------------------------------------------------


def rand_line_conic_phi(rng, avoid=()):
    while True:
        ps = [ProjPoint((rng.randint(-12, 12), rng.randint(-12, 12), 1), Q) for _ in range(3)]
        if len(set(ps)) == 3 and not set(ps) & set(avoid) and general_position(list(avoid) + ps):
            return phi_line_conic(*ps)


def rational_secant(A, B, C):
    pts, complete = line_intersections(line_through(A, B), C)
    return complete and len(pts) == 2


def nodal_chain_defined(phi1, phi2):
    """Some labelling makes the intermediate nodal cubics have a split node over the field."""
    C = phi1.source
    _, Q1, R1 = _split_phi(phi1)
    _, Q2, R2 = _split_phi(phi2)
    return any(rational_secant(A, B, C) for A in (Q1, R1) for B in (Q2, R2))


def cubic_instances(cls, generic, count):
    out = []
    seed = 1000
    while len(out) < count:
        p1 = next(phi_conic_cubic_candidates(cls, FP, seed=seed))
        p2 = next(phi_conic_cubic_candidates(cls, FP, seed=seed + 1))
        seed += 2
        pts = list(p1.base_points) + list(p2.base_points)
        if generic:
            if len(set(pts)) < 6 or not general_position(pts):
                continue
            if cls == NODAL and not nodal_chain_defined(p1, p2):
                continue
            out.append((p1, p2))
        else:
            # share the on-conic base point
            P1, _, _ = _split_phi(p1)
            _, Q2, R2 = _split_phi(p2)
            if collinear(P1, Q2, R2) or P1 in (Q2, R2):
                continue
            out.append((p1, phi_conic_cubic(P1, Q2, R2, cls, p1.source, p1.target)))
    return out


def test_c04_chain_lengths(acceptance_log):
    rng = random.Random(404)
    conic_generic = []
    while len(conic_generic) < 20:
        p1 = rand_line_conic_phi(rng)
        p2 = rand_line_conic_phi(rng, p1.base_points)
        conic_generic.append((p1, p2))
    conic_degenerate = []
    for _ in range(5):
        p1 = rand_line_conic_phi(rng)
        P = p1.base_points[0]
        while True:
            extra = [ProjPoint((rng.randint(-12, 12), rng.randint(-12, 12), 1), Q) for _ in range(2)]
            if len({P, *extra}) == 3 and not collinear(P, *extra):
                break
        conic_degenerate.append((p1, phi_line_conic(P, *extra)))
    cubic = {cls: (cubic_instances(cls, True, 20), cubic_instances(cls, False, 5)) for cls in (NODAL, CUSPIDAL)}
    with criterion(acceptance_log, 4, "chain lengths 3/3/4", 30.0) as info:
        counts = {}
        for name, lemma, generic, degenerate, exact in (
                ("conic", lemma_b_conic, conic_generic, conic_degenerate, 3),
                ("nodal", lemma_b_cubic, *cubic[NODAL], 3),
                ("cuspidal", lemma_b_cubic, *cubic[CUSPIDAL], 4)):
            g = [lemma(p1, p2) for p1, p2 in generic]
            d = [lemma(p1, p2) for p1, p2 in degenerate]
            assert all(f.verified and verify_factorization(f)["verified"] for f in g + d)
            assert all(f.composed() == p2.map.compose(invert(p1.map)) for f, (p1, p2) in zip(g, generic))
            assert [f.quadratic_count for f in g] == [exact] * len(g), (name, [f.quadratic_count for f in g])
            assert all(0 < f.quadratic_count <= 2 * exact for f in d), (name, [f.quadratic_count for f in d])
            counts[name] = f"{len(g)}x{exact}, degenerate max {max(f.quadratic_count for f in d)}"
        info["detail"] = "; ".join(f"{k} {v}" for k, v in counts.items()) + " (cubics over fp:10007)"


def sigma_with_rational_tangents(rng, F):
    """sigma_{a,b} whose free base point (a:1:b) has rational tangents to C: 1 - ab a nonzero square."""
    while True:
        s, a = rand_scalar(rng, F, True), rand_scalar(rng, F, True)
        b = (1 - s * s) / a
        if a * b not in (0, 1, -1):
            return sigma_ab(a, b, F)


def test_c05_lemma_c(acceptance_log):
    rng = random.Random(505)
    L = line_model(Q)
    line_taus = []
    while len(line_taus) < 20:
        P = ProjPoint((rng.randint(-9, 9), rng.randint(-9, 9), 1), Q)
        Qp = ProjPoint((rng.randint(-9, 9), rng.randint(-9, 9), 1), Q)
        R = ProjPoint((rng.randint(-9, 9), 1, 0), Q)
        if P != Qp and not collinear(P, Qp, R):
            line_taus.append(dec_line_quadratic(P, Qp, R, L))
    avoiding = {}
    for cls in (NODAL, CUSPIDAL):
        taus = []
        while len(taus) < 20:
            if cls == CUSPIDAL:
                s = sigma_with_rational_tangents(rng, Q)
            else:
                a, b = rand_q(rng, True), rand_q(rng, True)
                if a * b in (0, 1):
                    continue
                s = sigma_ab(a, b, Q)
            g = rand_aut_conic(rng, Q)
            taus.append(g.compose(s).compose(invert(g)))
        avoiding[cls] = taus
    contracting = []
    for a, b in ((3, 0), (0, 5), (0, 0), (Fraction(1, 2), 0), (0, -2)):
        g = rand_aut_conic(rng, FP)
        contracting.append(g.compose(sigma_ab(a, b, FP)).compose(invert(g)))
    C = conic(Q)
    with criterion(acceptance_log, 5, "lemma C conjugations") as info:
        for tau in line_taus:
            phi, psi = lemma_c_conic(tau)
            assert phi.map.compose(tau).compose(invert(psi.map)).is_identity()
        for cls, taus in avoiding.items():
            X = canonical_model(cls, Q)
            for tau in taus:
                assert tangent_avoiding(C, cls == CUSPIDAL)(tau)
                phi, psi, f = lemma_c_cubic(tau, X)
                assert f.steps == [] and phi.map.compose(tau).compose(invert(psi.map)).is_identity()
        routed = []
        for cls in (NODAL, CUSPIDAL):
            X = canonical_model(cls, FP)
            for tau in contracting:
                phi, psi, f = lemma_c_cubic(tau, X)
                assert verify_factorization(f)["verified"]
                assert f.target == phi.map.compose(tau).compose(invert(psi.map))
                routed.append(f.quadratic_count)
        info["detail"] = (f"20 Dec(L) and 2x20 tangent-avoiding Dec(C) maps conjugate to the identity over q; "
                          f"5 tangent-contracting routed per cubic class over fp:10007 (quadratic counts {routed})")


def line_word(rng, F, n):
    letters = []
    while len(letters) < n:
        P = ProjPoint((rand_scalar(rng, F), rand_scalar(rng, F), 1), F)
        Qp = ProjPoint((rand_scalar(rng, F), rand_scalar(rng, F), 1), F)
        R = ProjPoint((rand_scalar(rng, F), 1, 0), F)
        if P != Qp and not collinear(P, Qp, R):
            letters.append(dec_line_quadratic(P, Qp, R))
    return letters


def conic_lift(rng, F, n, letter_ok=None):
    L = line_model(F)
    letters = line_word(rng, F, n)
    tp = compose_word(letters, F)
    src = make_factorization(tp, L, letters)
    phi = phi_line_conic(*(ProjPoint(c, F) for c in ((0, 0, 1), (1, 0, 1), (0, 1, 1))))
    psi = phi_line_conic(*(ProjPoint(c, F) for c in ((2, 3, 1), (-1, 2, 1), (3, -2, 1))))
    tau = psi.map.compose(tp).compose(invert(phi.map))
    return tau, lift_factorization(tau, L, src, phi, psi, letter_ok)


def test_c06_lift(acceptance_log):
    rng = random.Random(606)
    with criterion(acceptance_log, 6, "lifting Dec(L) -> Dec(C) -> Dec(X)", 60.0) as info:
        t0 = time.perf_counter()
        certs, parts, cubic_parts = [], [], []
        for n in (1, 2, 3, 4):
            tau, f = conic_lift(rng, Q, n)
            assert f.verified and f.target == tau
            assert f.quadratic_count <= 6 * (n + 1)
            certs.append(f)
            parts.append(f"n={n}: {f.quadratic_count}")
        for n in (1, 2):
            for cls, k in ((NODAL, 6), (CUSPIDAL, 8)):
                C = conic(FP)
                _, fc = conic_lift(rng, FP, n, tangent_avoiding(C, cls == CUSPIDAL))
                gen = phi_conic_cubic_candidates(cls, FP, seed=n)
                phi, psi = next(gen), next(gen)
                tau = psi.map.compose(fc.target).compose(invert(phi.map))
                fx = lift_factorization(tau, C, fc, phi, psi)
                assert fx.verified and fx.target == tau
                assert fx.quadratic_count <= k * (fc.quadratic_count + 1)
                certs.append(fx)
                cubic_parts.append(f"{'nodal' if cls == NODAL else 'cuspidal'} n={n}: {fx.quadratic_count} <= {k}*({fc.quadratic_count}+1)")
        info["seconds"] = time.perf_counter() - t0
        # recheck every certificate from its serialized form
        assert all(verify_factorization(load_certificate(f.dumps()))["verified"] for f in certs)
        info["detail"] = "conic over q " + ", ".join(parts) + "; cubic over fp:10007 " + ", ".join(cubic_parts)


def test_c07_cuspidal_demo(acceptance_log):
    # oracle: tau o tau is the identity, by sympy composition
    tau = [x * y**2, y**3, 2 * x**3 - y**2 * z]
    tt = [e.subs({x: tau[0], y: tau[1], z: tau[2]}, simultaneous=True) for e in tau]
    assert proportional_triples(tt, [x, y, z])
    # over q the conic-level letters lack rational tangents; reported alongside, not judged
    rq = demo_cuspidal(Q)
    assert rq["verified"] and rq["tau_prime_degree"] == 3 and len(rq["tau_prime_base_points"]) == 2
    with criterion(acceptance_log, 7, "cuspidal example within 40 quadratics", 30.0) as info:
        r = demo_cuspidal(FP)
        assert r["tau_in_ine"] and r["tau_involution"]
        assert set(r["phi_base_points"]) == {"(0 : 1 : 0)", "(0 : 1 : 10006)", "(1 : 10006 : 1)"}
        assert r["tau_prime_degree"] == 3
        assert len(r["tau_prime_base_points"]) == 2 and r["tau_prime_base_points_on_conic"]
        f = r["certificate"]
        assert r["verified"] and verify_factorization(f)["verified"]
        assert f.quadratic_count <= 40
        info["seconds"] = r["seconds"]
        info["detail"] = (f"fp:10007 deg tau' = 3 with 2 base points, verified with {f.quadratic_count} "
                          f"quadratics from {r['conic_letters']} conic letters; over q verified with "
                          f"{rq['quadratic_count']} ({rq['route']})")


def test_c08_automorphism_groups(acceptance_log):
    w = (sympy.sqrt(-3) - 1) / 2
    cubic = x**3 + y**3 - x * y * z
    assert sympy.expand(cubic.subs({x: w * x, y: w**2 * y}, simultaneous=True) - cubic) == 0
    rng = random.Random(808)
    avals = [rand_q(rng, True) for _ in range(10)]
    with criterion(acceptance_log, 8, "automorphism groups of the singular cubics") as info:
        orders = {}
        for p in (7, 13):
            F = FieldSpec(p)
            gens = nodal_aut_generators(F)
            X = canonical_model(NODAL, F)
            assert all(in_dec(g.to_birmap(), X) for g in gens)
            orders[p] = len(group_closure(gens))
        assert set(orders.values()) == {6}
        X = canonical_model(CUSPIDAL, Q)
        assert all(in_dec(cuspidal_aut(a, Q).to_birmap(), X) for a in avals)
        info["detail"] = f"nodal group order {orders[7]} over fp:7 and fp:13; 10/10 (ax:y:a^3z) preserve x^3 - y^2z"


def test_c09_xd_suite(acceptance_log):
    for d in (4, 5, 6):
        ta = [x * y**(d - 1), y**d, (1 - sa) * x**d + sa * y**(d - 1) * z]
        tb = [e.subs(sa, sb) for e in ta]
        comp = [e.subs({x: ta[0], y: ta[1], z: ta[2]}, simultaneous=True) for e in tb]
        tab = [e.subs(sa, sa * sb) for e in ta]
        assert proportional_triples(comp, tab)
    rng = random.Random(909)
    with criterion(acceptance_log, 9, "X_d family", 30.0) as info:
        s = sigma_standard(Q)
        words = 0
        for d in (4, 5, 6):
            X = xd_curve(d, Q)
            for _ in range(3):
                a, b = rand_q(rng, True), rand_q(rng, True)
                ta, tb = xd_tau(d, a, Q), xd_tau(d, b, Q)
                assert ta.degree == d and in_ine(ta, X)
                assert tb.compose(ta) == xd_tau(d, a * b, Q)
                lam = xd_aut(d, a, Q).to_birmap()
                assert s.compose(lam) == invert(lam).compose(s)
            assert in_dec(s, X)
            for _ in range(67 if d < 6 else 66):
                w = BirMap.identity(Q)
                for _ in range(rng.randint(1, 8)):
                    w = (s if rng.random() < 0.5 else xd_aut(d, rand_q(rng, True), Q).to_birmap()).compose(w)
                assert w.degree <= 2
                words += 1
        pool = []
        d = 5
        for _ in range(7):
            pool.append((xd_aut(d, rand_q(rng, True), Q).to_birmap().compose(s), True))
        for _ in range(3):
            pool.append((s.compose(xd_aut(d, rand_q(rng, True), Q).to_birmap()), True))
        pool.append((ProjTransform.diagonal(Q, 1, 1, 2).to_birmap().compose(s), False))
        pool.append((ProjTransform.diagonal(Q, 2, 1, 4).to_birmap().compose(s), False))
        pool.append((BirMap.parse("[z : y : x]", Q).compose(s), False))
        for a, b in ((2, 1), (0, 0), (3, 0)):
            pool.append((sigma_ab(a, b, Q), False))
        for pts in (((1, 1, 1), (1, 0, 1), (0, 1, 1)), ((1, 2, 3), (0, 1, 5), (2, 0, 1)),
                    ((1, 0, 0), (0, 1, 0), (1, 1, 1)), ((0, 0, 1), (1, 1, 0), (1, 0, 0))):
            pool.append((quad_from_points(*(ProjPoint(p, Q) for p in pts)), False))
        verdicts = [bool(xd_quadratic_checker(m, d)) for m, _ in pool]
        assert len(pool) == 20 and verdicts == [want for _, want in pool]
        info["detail"] = (f"d=4,5,6 relations hold; {words} random words of degree <= 2; "
                          f"checker {sum(verdicts)}/10 accepted, 10/10 rejected")


def test_c10_orbit_invariance(acceptance_log):
    rng = random.Random(1010)
    C = conic(Q)
    cases = [(2, 1), (-3, 5), (Fraction(1, 2), 7), (4, -1), (3, 0), (0, 5), (0, 0)]
    with criterion(acceptance_log, 10, "orbit labels under conjugation") as info:
        labels = []
        for a, b in cases:
            tau = sigma_ab(a, b, Q)
            lab = orbit_classify(tau, C)
            if a * b:
                assert lab.kind == "B_d" and lab.d == Fraction(a) * Fraction(b)
            for _ in range(10):
                g = rand_aut_conic(rng, Q)
                conj = g.compose(tau).compose(invert(g))
                other = orbit_classify(conj, C)
                assert (other.kind, other.d) == (lab.kind, lab.d)
            labels.append(str(lab))
        info["detail"] = f"{len(cases)} maps x 10 conjugations stable: " + ", ".join(labels)
