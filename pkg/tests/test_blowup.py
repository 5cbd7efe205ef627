import pytest

from a4crepant.blowup import (BlowupError, Center, Chart, CoordinateChange, blow_up,
                              change_coordinates, crepancy_certificate, inverse_change,
                              locus_containment, multiplicity_along, radical_equal,
                              restrict_exceptional, singular_locus, smooth, union_equal)
from a4crepant.conics import ConicClass
from a4crepant.fields import GF2, GF2k
from a4crepant.ideal import IdealBasis
from a4crepant.poly import Polynomial, parse_poly, substitute

ABCDE = ("A", "B", "C", "D", "E")
F_TEXT = "E^2+(A^2*D+A*B*C+C^2)*E+A^4*D^2+A^3*C^3+A^2*B^3*D+B^3*C^2+C^4"

EXPECTED_U0 = "u2^2+(D+B*u1+u1^2)*A*u2+A^2*D^2+A^4*u1^3+B^3*D+B^3*u1^2+A^2*u1^4"
EXPECTED_U1 = "u2^2+(D*u0^2+B*u0+1)*C*u2+C^2*D^2*u0^4+C^4*u0^3+B^3*D*u0^2+B^3+C^2"
EXPECTED_U0_TILDE = ("v2^2+(D+B*u1+u1^2)*v0*v2+D^2*v0^2+A^2*u1^3*v0^2+B*D*v1^2"
                     "+B*u1^2*v1^2+u1^4*v0^2")
EXPECTED_U1_TILDE = ("v2^2+(D*u0^2+B*u0+1)*v0*v2+D^2*u0^4*v0^2+C^2*u0^3*v0^2"
                     "+B*D*u0^2*v1^2+B*v1^2+v0^2")
EXPECTED_V0 = "v2^2+(D+A*u1*v1+u1^2)*v2+D^2+A^2*u1^3+A*D*v1^3+A*u1^2*v1^3+u1^4"
EXPECTED_V1 = "v2^2+(D+B*u1+u1^2)*v0*v2+D^2*v0^2+B^2*u1^3*v0^4+B*D+B*u1^2+u1^4*v0^2"
EXPECTED_V0_TILDE = "w1^2+(w2+u1*v1*w0)*w1+w2^2+v1^3*w0*w2+u1^3*w0^2"
EXPECTED_V1_TILDE = "w1^2+(w2+u1*w0)*v0*w1+v0^2*w2^2+u1^3*v0^4*w0^2+w0*w2"
EXPECTED_W0 = "w1^2+w1*w2+u1*v1*w1+w2^2+v1^3*w2+u1^3"
EXPECTED_W2 = "w1^2+(1+u1*v1*w0)*w1+1+v1^3*w0+u1^3*w0^2"
EXPECTED_W0_TILDE = "r0^2+r1^2+r0*r1+u1'*r2^2+v1*r0*r2+v1^2*r2^2"
EXPECTED_R0 = "1+r1^2+r1+w1'*r2^3+v1*r2+v1^2*r2^2"
EXPECTED_R2 = "r0^2+r1^2+r0*r1+u1'+v1*r0+v1^2"
EXPECTED_E1 = "u2^2+B^3*D*u0^2+B^3*u1^2"
EXPECTED_E4 = "r0^2+r0*(r1+v1*r2)+(r1+v1*r2)^2"


def center(ch, text, changes=()):
    return Center(tuple(ch.poly(t) for t in text.split(",")), tuple(changes))


def shift(ch, old, new, text):
    return CoordinateChange(old, new, ch.poly(text))


def same(ch: Chart, text: str) -> bool:
    return ch.equation == ch.poly(text)


def dehomogenize(text, vars, mapping_text, target_vars):
    """Parse a projective form, then substitute chart coordinates."""
    p = parse_poly(text, GF2, vars)
    m = {k: parse_poly(v, GF2, target_vars) for k, v in mapping_text.items()}
    return substitute(p, m, target_vars)


@pytest.fixture(scope="module")
def tower():
    M = Chart("M", parse_poly(F_TEXT, GF2, ABCDE))
    t = {"M": M}
    t["b1"] = blow_up(M, center(M, "A,C,E"), ("u0", "u1", "u2"), ["U0", "U1", "U2"])
    U0, U1 = t["b1"].chart(0), t["b1"].chart(1)
    t["b2"] = blow_up(U0, center(U0, "A,B,u2"), ("v0", "v1", "v2"), ["V0", "V1", "V2"])
    t["b2x"] = blow_up(U1, center(U1, "C,B,u2"), ("v0", "v1", "v2"), ["X0", "X1", "X2"])
    V0, V1 = t["b2"].chart(0), t["b2"].chart(1)
    t["b3"] = blow_up(V0, center(V0, "A,v2,D+u1^2", [shift(V0, "D", "D'", "u1^2")]),
                      ("w0", "w1", "w2"), ["W0", "W1", "W2"])
    t["b3y"] = blow_up(V1, center(V1, "B,v2,D+u1^2", [shift(V1, "D", "D'", "u1^2")]),
                       ("w0", "w1", "w2"), ["Y0", "Y1", "Y2"])
    W0 = t["b3"].chart(0)
    ch = [shift(W0, "w1", "w1'", "v1^3"), shift(W0, "w2", "w2'", "v1^3"),
          shift(W0, "u1", "u1'", "v1^2")]
    t["b4"] = blow_up(W0, center(W0, "w1+v1^3,w2+v1^3,u1+v1^2", ch),
                      ("r0", "r1", "r2"), ["R0", "R1", "R2"])
    return t


# ------------------------------------------------------- chart equations

def test_step1_charts(tower):
    b = tower["b1"]
    assert same(b.chart(0), EXPECTED_U0)
    assert same(b.chart(1), EXPECTED_U1)
    assert all(r.exponent == 2 and r.identity_holds() for r in b.charts)


def test_step2_charts(tower):
    b = tower["b2"]
    assert same(b.chart(0), EXPECTED_V0)
    assert same(b.chart(1), EXPECTED_V1)
    V0 = b.chart(0)
    # projective form on v0 != 0 with B = A*v1
    vars = ("A", "B", "u1", "D", "v0", "v1", "v2")
    got = dehomogenize(EXPECTED_U0_TILDE, vars, {"v0": "1", "B": "A*v1"}, V0.coords)
    assert got == V0.equation


def test_step2_u1_projective_form(tower):
    X0 = tower["b2x"].chart(0)
    vars = ("u0", "B", "C", "D", "v0", "v1", "v2")
    got = dehomogenize(EXPECTED_U1_TILDE, vars, {"v0": "1", "B": "C*v1"}, X0.coords)
    assert got == X0.equation


def test_step3_charts(tower):
    b = tower["b3"]
    assert same(b.chart(0), EXPECTED_W0)
    assert same(b.chart(2), EXPECTED_W2)
    W0 = b.chart(0)
    vars = ("A", "v1", "u1", "w0", "w1", "w2")
    got = dehomogenize(EXPECTED_V0_TILDE, vars, {"w0": "1"}, W0.coords)
    assert got == W0.equation


def test_step3_v1_projective_form(tower):
    Y0 = tower["b3y"].chart(0)
    vars = ("v0", "u1", "w0", "w1", "w2")
    got = dehomogenize(EXPECTED_V1_TILDE, vars, {"w0": "1"}, Y0.coords)
    assert got == Y0.equation


def test_step4_charts(tower):
    b = tower["b4"]
    R0, R2 = b.chart(0), b.chart(2)
    assert same(R0, EXPECTED_R0)
    assert same(R2, EXPECTED_R2)
    vars = ("v1", "u1'", "w1'", "r0", "r1", "r2")
    assert dehomogenize(EXPECTED_W0_TILDE, vars, {"r0": "1", "u1'": "w1'*r2"},
                        R0.coords) == R0.equation
    assert dehomogenize(EXPECTED_W0_TILDE, vars, {"r2": "1"}, R2.coords) == R2.equation


def test_exceptional_restrictions(tower):
    for key in ("b1", "b2", "b3", "b4"):
        assert all(r.exceptional_consistent() for r in tower[key].charts)


def test_overlaps_agree(tower):
    for key in ("b1", "b2", "b3", "b4"):
        b = tower[key]
        for j in range(3):
            for k in range(3):
                if j != k:
                    assert b.overlap_consistent(j, k), (key, j, k)


def test_third_charts_are_covered(tower):
    assert tower["b1"].covered(2)
    assert tower["b2"].covered(2)
    assert tower["b3"].covered(1)
    assert tower["b4"].covered(1)
    assert not tower["b1"].covered(0)


# ---------------------------------------------------------- certificates

def test_crepancy_certificates(tower):
    for key in ("b1", "b2", "b2x", "b3", "b3y", "b4"):
        b = tower[key]
        # the prepared chart is already aligned with the center
        cert = crepancy_certificate(b.prepared, center(b.prepared, ",".join(b.center)))
        assert cert.passed, key
        assert cert.as_dict()["verdict"] == "pass"


def test_certificate_through_coordinate_change(tower):
    W0 = tower["b3"].chart(0)
    ch = [shift(W0, "w1", "w1'", "v1^3"), shift(W0, "w2", "w2'", "v1^3"),
          shift(W0, "u1", "u1'", "v1^2")]
    cert = crepancy_certificate(W0, center(W0, "w1+v1^3,w2+v1^3,u1+v1^2", ch))
    assert cert.aligned and cert.codimension == 3
    assert cert.in_square and not cert.in_cube
    assert cert.witness_square == "0"


def test_certificate_rejects_unaligned_center(tower):
    W0 = tower["b3"].chart(0)
    cert = crepancy_certificate(W0, center(W0, "w1+v1^3,w2+v1^3,u1+v1^2"))
    assert not cert.aligned
    assert not cert.passed


def test_wrong_center_multiplicity(tower):
    U0 = tower["b1"].chart(0)
    cert = crepancy_certificate(U0, center(U0, "A,B,D"))
    assert not cert.in_square
    assert not cert.passed
    with pytest.raises(BlowupError):
        blow_up(U0, center(U0, "A,B,D"), ("v0", "v1", "v2"))


def test_smooth_final_charts(tower):
    b = tower["b4"]
    assert smooth(b.chart(0))
    assert smooth(b.chart(2))
    assert smooth(b.chart(1))
    assert not smooth(tower["b3"].chart(0))
    assert not smooth(tower["M"])


def test_singular_locus_of_M(tower):
    M = tower["M"]
    P1 = IdealBasis([M.poly(x) for x in ("A", "C", "E")])
    P2 = IdealBasis([M.poly(x) for x in ("B^2+A*C", "A*B*C+A^2*D+C^2", "E+A^2*D+C^2")])
    assert union_equal(singular_locus(M), [P1, P2]).holds
    assert not union_equal(singular_locus(M), [P1]).holds


def test_singular_loci_on_exceptional(tower):
    U0 = tower["b1"].chart(0)
    L = IdealBasis([U0.poly(x) for x in ("A", "B", "u2")])
    assert radical_equal(restrict_exceptional(U0), L).holds
    V0 = tower["b2"].chart(0)
    L = IdealBasis([V0.poly(x) for x in ("A", "v2", "D+u1^2")])
    assert radical_equal(restrict_exceptional(V0), L).holds
    W0 = tower["b3"].chart(0)
    L = IdealBasis([W0.poly(x) for x in ("w1+v1^3", "w2+v1^3", "u1+v1^2")])
    assert radical_equal(singular_locus(W0), L).holds


def test_redundant_charts_avoid_exceptional(tower):
    for j in range(3):
        X = tower["b2x"].chart(j)
        assert locus_containment(restrict_exceptional(X), X.poly("u0"))
        Y = tower["b3y"].chart(j)
        assert locus_containment(restrict_exceptional(Y), Y.poly("v0"))
    W2 = tower["b3"].chart(2)
    assert locus_containment(singular_locus(W2), W2.poly("w0"))


# ----------------------------------------------------------------- conics

def test_first_conic(tower):
    b = tower["b1"]
    conic = b.conic
    assert conic == parse_poly(EXPECTED_E1, GF2, conic.vars)
    fam = b.conic_family(GF2k(2))
    assert not fam.mismatches
    assert [str(p) for p in fam.double_line] == ["0", "0", "0"]


def test_second_conic_double_locus(tower):
    fam = tower["b2"].conic_family(GF2k(2))
    dl = IdealBasis(fam.double_line, fam.base)
    target = IdealBasis([parse_poly("D + u1^2", GF2, fam.base)])
    assert radical_equal(dl, target).holds


def test_third_conic_delta(tower):
    fam = tower["b3"].conic_family(GF2k(2))
    cube = parse_poly("(u1 + v1^2)^3", GF2, fam.base)
    assert fam.delta == cube


def test_fourth_conic_two_lines(tower):
    b = tower["b4"]
    assert b.conic == parse_poly(EXPECTED_E4, GF2, b.conic.vars)
    fam = b.conic_family(GF2k(2))
    assert fam.delta.is_zero()
    assert not fam.mismatches
    assert fam.at([1] * len(fam.base), GF2k(2)) == ConicClass.TWO_LINES


# ---------------------------------------------------------------- helpers

def test_change_coordinates_round_trip():
    V = ("x", "y", "z")
    ch = Chart("T", parse_poly("x*y + z^3 + y^2", GF2, V))
    changes = [CoordinateChange("x", "x'", ch.poly("y^2 + z"))]
    new, mapping = change_coordinates(ch, changes)
    assert new.coords == ("x'", "y", "z")
    back = inverse_change(mapping, changes, ch.coords)
    assert substitute(new.equation, back, ch.coords) == ch.equation


def test_change_coordinates_must_be_triangular():
    V = ("x", "y")
    ch = Chart("T", parse_poly("x*y + 1", GF2, V))
    with pytest.raises(BlowupError):
        change_coordinates(ch, [CoordinateChange("x", "x'", ch.poly("x^2"))])
    with pytest.raises(BlowupError):
        change_coordinates(ch, [CoordinateChange("x", "y", ch.poly("1"))])
    with pytest.raises(BlowupError):
        change_coordinates(ch, [CoordinateChange("q", "q'", ch.poly("1"))])


def test_zero_chart_rejected():
    with pytest.raises(BlowupError):
        Chart("Z", Polynomial.zero(("x",), GF2))


def test_multiplicity_of_cone():
    V = ("x", "y", "z", "t")
    ch = Chart("K", parse_poly("x^2 + y*z + t*x^3", GF2, V))
    gens = [ch.poly(v) for v in ("x", "y", "z")]
    assert multiplicity_along(ch, gens) == 2
    assert multiplicity_along(ch, [ch.poly(v) for v in ("t", "y", "z")]) == 0
