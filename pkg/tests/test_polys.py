import pytest
from hypothesis import given, settings, strategies as st

from a4crepant.fields import (GF2, QQ, FieldElement, FieldError, GF2k, is_primitive_modulus,
                              parse_field, sqrt_char2)
from a4crepant.poly import (Polynomial, PolynomialError, PolynomialSyntaxError,
                            UnknownVariableError, compose_maps, parse_poly, parse_poly_list,
                            partial_derivative, poly_arith, substitute)

ABCDE = ("A", "B", "C", "D", "E")
F_TEXT = ("E^2+(A^2*D+A*B*C+C^2)*E+A^4*D^2+A^3*C^3+A^2*B^3*D+B^3*C^2+C^4")


def P(text, vars=ABCDE, field=GF2):
    return parse_poly(text, field, vars)


# ---------------------------------------------------------------- fields

@pytest.mark.parametrize("k", range(1, 17))
def test_moduli_are_primitive(k):
    assert is_primitive_modulus(k)


def test_gf4_tables():
    F = GF2k(2)
    w = 2
    assert F.mul(w, w) == 3
    assert F.mul(w, 3) == 1
    assert F.inv(w) == 3
    assert F.sqrt(w) == 3


def test_sqrt_small_cases():
    F = GF2k(8)
    assert sqrt_char2(FieldElement(F, 0)).value == 0
    assert sqrt_char2(FieldElement(F, 1)).value == 1
    w = FieldElement(GF2k(2), 2)
    assert sqrt_char2(w) == w * w


@given(st.integers(0, 255))
def test_sqrt_gf256(a):
    F = GF2k(8)
    r = F.sqrt(a)
    assert F.mul(r, r) == a


@given(st.integers(1, 15), st.integers(1, 15), st.integers(0, 15))
def test_field_axioms_gf16(a, b, c):
    F = GF2k(4)
    assert F.mul(a, F.add(b, c)) == F.add(F.mul(a, b), F.mul(a, c))
    assert F.mul(F.mul(a, b), c) == F.mul(a, F.mul(b, c))
    assert F.mul(a, F.inv(a)) == 1
    assert F.div(F.mul(a, b), b) == a


@given(st.integers(0, 255), st.integers(0, 255))
def test_sqrt_multiplicative(a, b):
    F = GF2k(8)
    x, y = FieldElement(F, a), FieldElement(F, b)
    assert sqrt_char2(x * y) == sqrt_char2(x) * sqrt_char2(y)


def test_squaring_is_bijective():
    F = GF2k(5)
    assert sorted(F.mul(a, a) for a in F.elements()) == list(range(F.q))


def test_parse_field():
    assert parse_field("gf2") == GF2
    assert parse_field("gf2^3") == GF2k(3)
    assert parse_field("gf4") == GF2k(2)
    assert parse_field("qq") is QQ
    with pytest.raises(FieldError):
        parse_field("gf3")


def test_inverse_of_zero():
    with pytest.raises(ZeroDivisionError):
        GF2k(3).inv(0)


# ---------------------------------------------------------------- parsing

def test_parse_simple():
    p = parse_poly("x1+x2", GF2, ["x1", "x2"])
    assert len(p.terms) == 2


def test_even_coefficients_vanish():
    assert parse_poly("2*x1 + x2", GF2, ["x1", "x2"]) == parse_poly("x2", GF2, ["x1", "x2"])


def test_minus_is_plus_in_char_2():
    assert P("A - B") == P("A + B")
    assert P("-A") == P("A")


def test_defining_equation_weighted_degree():
    f = parse_poly(F_TEXT, GF2, ABCDE, (1, 2, 3, 4, 6))
    assert f.weighted_degree_set() == {12}
    assert f.is_weighted_homogeneous()


def test_parse_over_rationals():
    p = parse_poly("3*x^2 - 2*x + 1", QQ, ["x"])
    assert p.evaluate([2]) == 9


def test_syntax_error_position():
    with pytest.raises(PolynomialSyntaxError) as exc:
        P("A + * B")
    assert exc.value.position == 4


def test_unknown_identifier():
    with pytest.raises(UnknownVariableError):
        P("A + Z")


def test_unbalanced_paren():
    with pytest.raises(PolynomialSyntaxError):
        P("(A + B")


def test_parse_list_top_level_commas():
    gens = parse_poly_list("A, (B + C)*D, E^2", GF2, ABCDE)
    assert [str(g) for g in gens] == ["A", "B*D + C*D", "E^2"]


def test_primed_identifiers():
    p = parse_poly("w1' + v1^3", GF2, ["w1'", "v1"])
    assert p.variables_used() == ("w1'", "v1")


# ---------------------------------------------------------------- arithmetic

def test_freshman_dream():
    x = P("A + B")
    assert x * x == P("A^2 + B^2")


def test_self_sum_is_zero():
    p = P(F_TEXT)
    assert (p + p).is_zero()


def test_poly_arith_rejects_mismatch():
    with pytest.raises(PolynomialError):
        poly_arith(P("A"), parse_poly("x", GF2, ["x"]), "add")
    with pytest.raises(PolynomialError):
        poly_arith(P("A"), P("B"), "div")


def test_no_zero_terms_stored():
    p = P("A*B + B*A + C")
    assert all(c != 0 for c in p.terms.values())
    assert all(len(e) == 5 for e in p.terms)


def test_identity_substitution():
    f = P(F_TEXT)
    assert substitute(f, {}) == f
    assert substitute(f, {v: Polynomial.variable(v, ABCDE) for v in ABCDE}) == f


def test_chart_substitution_u0():
    f = P(F_TEXT)
    V = ("A", "B", "u1", "D", "u2")
    A = Polynomial.variable("A", V)
    m = {"C": A * Polynomial.variable("u1", V), "E": A * Polynomial.variable("u2", V)}
    g = substitute(f, m, V)
    u0 = parse_poly("u2^2+(D+B*u1+u1^2)*A*u2+A^2*D^2+A^4*u1^3+B^3*D+B^3*u1^2+A^2*u1^4",
                    GF2, V)
    assert g == A * A * u0


def test_partials_of_defining_equation():
    f = P(F_TEXT)
    assert partial_derivative(f, "E") == P("A^2*D + A*B*C + C^2")
    assert partial_derivative(P("E^2"), "E").is_zero()
    xy = parse_poly("x*y", GF2, ["x", "y"])
    assert partial_derivative(xy, "x") == parse_poly("y", GF2, ["x", "y"])


def test_print_is_parseable():
    f = P(F_TEXT)
    assert P(str(f)) == f


def test_evaluate_and_specialize():
    p = P("A*B + C")
    assert p.evaluate({"A": 1, "B": 1, "C": 1, "D": 0, "E": 0}) == 0
    assert p.specialize({"A": 0}) == P("C")


# ----------------------------------------------------------- properties

exps = st.tuples(*[st.integers(0, 3)] * 3)
gf2_polys = st.sets(exps, max_size=6).map(
    lambda s: Polynomial(("x", "y", "z"), GF2, {e: 1 for e in s}))


@st.composite
def gf4_polys(draw):
    terms = draw(st.dictionaries(exps, st.integers(1, 3), max_size=5))
    return Polynomial(("x", "y", "z"), GF2k(2), terms)


@settings(max_examples=100)
@given(gf4_polys(), gf4_polys())
def test_frobenius_gf4(p, q):
    assert (p + q) ** 2 == p ** 2 + q ** 2


@settings(max_examples=100)
@given(gf2_polys)
def test_parse_print_round_trip(p):
    assert parse_poly(str(p), GF2, p.vars) == p


@settings(max_examples=100)
@given(gf2_polys, gf2_polys, st.sampled_from("xyz"))
def test_leibniz(p, q, v):
    d = partial_derivative
    assert d(p * q, v) == d(p, v) * q + p * d(q, v)


def test_compose_maps_example():
    V = ("x", "y")
    m1 = {"x": parse_poly("x + y^2", GF2, V)}
    m2 = {"y": parse_poly("x*y", GF2, V)}
    p = parse_poly("x^2*y + y", GF2, V)
    assert substitute(substitute(p, m1), m2) == substitute(p, compose_maps(m1, m2, V))
