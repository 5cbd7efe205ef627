"""Compare the compiled and pure-Python GF(2) reduction kernels.

    python3 benchmarks/bench_kernel.py [--repeat N]

Each workload builds fresh ideals so no cached Gröbner basis is reused.
"""
import argparse
import statistics
import time

from a4crepant import kernel
from a4crepant.blowup import Chart, singular_locus, union_equal
from a4crepant.fields import GF2
from a4crepant.ideal import IdealBasis, LEX
from a4crepant.pipeline import load_pipeline, run_pipeline
from a4crepant.poly import parse_poly, parse_poly_list

ABCDE = ("A", "B", "C", "D", "E")
F_TEXT = "E^2+(A^2*D+A*B*C+C^2)*E+A^4*D^2+A^3*C^3+A^2*B^3*D+B^3*C^2+C^4"


def jacobian_grevlex():
    singular_locus(Chart("M", parse_poly(F_TEXT, GF2, ABCDE))).groebner()


def jacobian_lex():
    singular_locus(Chart("M", parse_poly(F_TEXT, GF2, ABCDE))).groebner(LEX)


def singular_union():
    M = Chart("M", parse_poly(F_TEXT, GF2, ABCDE))
    P1 = IdealBasis(parse_poly_list("A, C, E", GF2, ABCDE))
    P2 = IdealBasis(parse_poly_list("B^2 + A*C, A*B*C + A^2*D + C^2, E + A^2*D + C^2",
                                    GF2, ABCDE))
    assert union_equal(singular_locus(M), [P1, P2]).holds


def cyclic5():
    vars = ("a", "b", "c", "d", "e")
    gens = parse_poly_list(
        "a + b + c + d + e, a*b + b*c + c*d + d*e + e*a, a*b*c + b*c*d + c*d*e + d*e*a + e*a*b,"
        " a*b*c*d + b*c*d*e + c*d*e*a + d*e*a*b + e*a*b*c, a*b*c*d*e + 1", GF2, vars)
    IdealBasis(gens, vars).groebner()


def cyclic6():
    vars = ("a", "b", "c", "d", "e", "f")
    gens = []
    for k in range(1, 6):
        gens.append(" + ".join("*".join(vars[(i + j) % 6] for j in range(k)) for i in range(6)))
    gens.append("*".join(vars) + " + 1")
    IdealBasis(parse_poly_list(", ".join(gens), GF2, vars), vars).groebner()


def pipeline():
    assert run_pipeline(load_pipeline("a4-char2.pipeline"), verify_field=None)["verdict"] == "pass"


WORKLOADS = [jacobian_grevlex, jacobian_lex, singular_union, cyclic5, cyclic6, pipeline]


def measure(fn, repeat):
    times = []
    for _ in range(repeat):
        t = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t)
    return statistics.median(times)


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()
    names = kernel.available()
    if "compiled" not in names:
        print("compiled kernel not built; only the Python kernel is timed")
    print(f"{'workload':<18}" + "".join(f"{n:>12}" for n in names) + "     speedup")
    try:
        for fn in WORKLOADS:
            row = {}
            for n in names:
                kernel.use(n)
                row[n] = measure(fn, args.repeat)
            speed = (f"{row['python'] / row['compiled']:>10.1f}x"
                     if "compiled" in row else "")
            print(f"{fn.__name__:<18}" + "".join(f"{row[n] * 1e3:>10.1f}ms" for n in names)
                  + speed)
    finally:
        kernel.use(None)


if __name__ == "__main__":
    main()
