import random
from fractions import Fraction
from math import comb

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from kfilt import GradedRing, Poly, parse_poly, projective_space
from kfilt.errors import AmbientMismatch, MixedDegree, ParseError, ValidationError
from kfilt.fitting import fit, fit_quasi
from kfilt.errors import FitNotCertified, NotYetPolynomial
from kfilt.linalg import Subspace, intersect, rref, subspace_sum
from kfilt.ring import groebner_basis

XY = ("x", "y")
XYZ = ("x", "y", "z")


# -- polynomials and the parser ----------------------------------------------------


def test_parse_and_print_round_trip():
    p = parse_poly("x^2 - 1/2 y z", XYZ)
    assert p.to_string(XYZ) == "x^2 - 1/2*y*z"
    assert parse_poly(p.to_string(XYZ), XYZ) == p


def test_parse_juxtaposition_and_signs():
    assert parse_poly("xy", XY) == parse_poly("x*y", XY)
    assert parse_poly("-x+y", XY) == parse_poly("y - x", XY)
    assert parse_poly("3", XY) == Poly.one(2).scale(3)


@pytest.mark.parametrize("text", ["x +", "x^", "2*w", "x**2", "", "x / y"])
def test_parse_errors_report_column(text):
    with pytest.raises(ParseError) as info:
        parse_poly(text, XY, line=7)
    assert info.value.line == 7
    assert "line 7" in str(info.value)


def test_poly_arithmetic_matches_sympy():
    rng = random.Random(3)
    x, y, z = sympy.symbols("x y z")
    for _ in range(50):
        terms_a = {tuple(rng.randint(0, 3) for _ in range(3)): Fraction(rng.randint(-5, 5), rng.randint(1, 4)) for _ in range(4)}
        terms_b = {tuple(rng.randint(0, 3) for _ in range(3)): Fraction(rng.randint(-5, 5), rng.randint(1, 4)) for _ in range(3)}
        a, b = Poly(3, terms_a), Poly(3, terms_b)
        sa = sum(sympy.Rational(c.numerator, c.denominator) * x ** m[0] * y ** m[1] * z ** m[2] for m, c in terms_a.items())
        sb = sum(sympy.Rational(c.numerator, c.denominator) * x ** m[0] * y ** m[1] * z ** m[2] for m, c in terms_b.items())
        ours = a * b
        as_sympy = sum(sympy.Rational(c.numerator, c.denominator) * x ** m[0] * y ** m[1] * z ** m[2]
                       for m, c in ours.terms.items())
        assert sympy.expand(as_sympy - sa * sb) == 0
        assert (a - a).is_zero()
        assert (a + b) - b == a


def test_power_and_homogeneity():
    p = parse_poly("x+y", XY)
    q = p ** 3
    assert q == parse_poly("x^3 + 3x^2y + 3xy^2 + y^3", XY)
    assert q.is_homogeneous() and q.degree() == 3
    assert not parse_poly("x + y^2", XY).is_homogeneous()


# -- rings and Groebner bases --------------------------------------------------------


def _sympy_gb(polys, names):
    syms = sympy.symbols(" ".join(names))
    exprs = [sympy.sympify(p.to_string(names).replace("^", "**"), locals=dict(zip(names, syms))) for p in polys]
    G = sympy.groebner(exprs, *syms, order="grevlex")
    out = set()
    for g in G.exprs:
        P = sympy.Poly(g, *syms)
        out.add(sympy.expand(P.as_expr() / P.LC(order="grevlex")))
    return out


@pytest.mark.parametrize("rels", [
    ["x*z - y^2"],
    ["x^2 - y*z", "x*y - z^2"],
    ["x*y", "y*z", "x*z"],
    ["x^3 + y^3 + z^3"],
    ["x^2 - y^2", "y^2 - z^2"],
])
def test_groebner_basis_matches_sympy(rels):
    polys = [parse_poly(r, XYZ) for r in rels]
    ours = groebner_basis(polys)
    syms = sympy.symbols("x y z")
    mine = {sympy.expand(sympy.sympify(g.to_string(XYZ).replace("^", "**"), locals=dict(zip(XYZ, syms)))) for g in ours}
    assert mine == _sympy_gb(polys, XYZ)


def test_normal_form_is_idempotent_and_respects_ideal():
    R = GradedRing(XYZ, ["x*z - y^2"])
    rng = random.Random(11)
    for _ in range(40):
        terms = {tuple(rng.randint(0, 3) for _ in range(3)): rng.randint(-3, 3) for _ in range(5)}
        p = Poly(3, terms)
        nf = R.normal_form(p)
        assert R.normal_form(nf) == nf
        assert all(R.is_standard(m) for m in nf.terms)
        # adding a multiple of the relation does not change the class
        assert R.normal_form(p + parse_poly("x*z - y^2", XYZ) * parse_poly("x + 2z", XYZ)) == nf


@pytest.mark.parametrize("m", [1, 2, 3])
def test_hilbert_function_of_projective_space(m):
    R = projective_space(m)
    assert [R.hilbert(k) for k in range(9)] == [comb(k + m, m) for k in range(9)]
    assert R.dimension == m


def test_hilbert_function_of_conic_and_dimension_inference():
    R = GradedRing(XYZ, ["x*z - y^2"])
    assert [R.hilbert(k) for k in range(8)] == [2 * k + 1 for k in range(8)]
    assert R.dimension == 1
    pts = GradedRing(XY, ["x*y"])
    assert pts.dimension == 0


def test_ring_rejects_bad_input():
    with pytest.raises(ValidationError):
        GradedRing(("x", "x"))
    with pytest.raises(ValidationError):
        GradedRing(XY, ["x + y^2"])
    R = projective_space(1)
    with pytest.raises(MixedDegree):
        R.span([parse_poly("x", XY)], 2)


# -- exact linear algebra -------------------------------------------------------------


def _random_vectors(rng, count, n, density=0.5):
    out = []
    for _ in range(count):
        v = {j: Fraction(rng.randint(-4, 4), rng.randint(1, 3)) for j in range(n) if rng.random() < density}
        out.append({j: c for j, c in v.items() if c})
    return out


def test_rref_matches_sympy():
    rng = random.Random(5)
    for _ in range(150):
        n = rng.randint(1, 7)
        vecs = _random_vectors(rng, rng.randint(0, 6), n)
        ours = rref(vecs, n)
        if not vecs:
            assert ours == ()
            continue
        M = sympy.Matrix([[v.get(j, 0) for j in range(n)] for v in vecs])
        R, _ = M.rref()
        expected = tuple(tuple(Fraction(int(x.p), int(x.q)) for x in R.row(i)) for i in range(M.rank()))
        assert ours == expected


def test_grassmann_identity_on_random_subspaces():
    rng = random.Random(2024)
    for case in range(1000):
        n = rng.randint(1, 8)
        U = Subspace.from_vectors(0, n, _random_vectors(rng, rng.randint(0, n), n, 0.6))
        V = Subspace.from_vectors(0, n, _random_vectors(rng, rng.randint(0, n), n, 0.6))
        S, I = subspace_sum(U, V), intersect(U, V)
        assert S.dim + I.dim == U.dim + V.dim, case
        assert U.contains_subspace(I) and V.contains_subspace(I)
        assert S.contains_subspace(U) and S.contains_subspace(V)


@settings(max_examples=60, deadline=None)
@given(st.lists(st.lists(st.integers(-3, 3), min_size=4, max_size=4), max_size=5))
def test_subspace_equality_is_basis_independent(rows):
    vecs = [{j: Fraction(c) for j, c in enumerate(r) if c} for r in rows]
    a = Subspace.from_vectors(0, 4, vecs)
    b = Subspace.from_vectors(0, 4, list(reversed(vecs)) + [{}])
    assert a == b and hash(a) == hash(b)


def test_ambient_mismatch():
    with pytest.raises(AmbientMismatch):
        intersect(Subspace.full(1, 2), Subspace.full(2, 3))


# -- exact fits ----------------------------------------------------------------------


def test_fit_examples():
    f = fit([k + 1 for k in range(10)], 1, 0, 9)
    assert f.coeffs == (1, 1) and f.certified
    g = fit([Fraction(-k * (k + 1), 2) for k in range(12)], 2, 0, 11)
    assert g.coefficient(0) == Fraction(-1, 2)
    seq = [k * k for k in range(12)]
    seq[8] += 1
    with pytest.raises(NotYetPolynomial) as info:
        fit(seq, 2, 0, 11)
    assert info.value.first_bad_k == 8
    with pytest.raises(ValidationError):
        fit(seq, 2, 0, 3)


def test_quasi_fit_finds_period_and_threshold():
    # k^2 + (k mod 3): leading coefficients shared, constant term depends on the residue
    seq = [k * k + (k % 3) for k in range(30)]
    with pytest.raises(FitNotCertified):
        fit_quasi(seq, 2, 29, 0, 1)
    q = fit_quasi(seq, 2, 29, 0, 6)
    assert q.period == 3
    assert q.coefficient(0) == 1 and q.coefficient(1) == 0 and q.coefficient(2) is None
    assert all(q(k) == seq[k] for k in range(30))
    # garbage before k = 5 moves the threshold
    seq2 = [7, -1, 4, 0, 9] + [k + 2 for k in range(5, 20)]
    assert fit_quasi(seq2, 1, 19).k0 == 5
