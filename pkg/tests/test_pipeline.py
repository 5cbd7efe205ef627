import json
from importlib import resources

import pytest

from a4crepant.fields import GF2k
from a4crepant.pipeline import PipelineError, load_pipeline, parse_pipeline, run_pipeline

BUNDLED = resources.files("a4crepant").joinpath("data", "a4-char2.pipeline").read_text()

SMOOTH = """
[root]
name = H
field = gf2
variables = x, y
equation = x + y^2

[final]
smooth H
"""


@pytest.fixture(scope="module")
def report():
    return run_pipeline(load_pipeline("a4-char2.pipeline"), verify_field=GF2k(2),
                        timestamp="2000-01-01T00:00:00+00:00")


def test_bundled_pipeline_passes(report):
    assert report["verdict"] == "pass"
    assert report["euler"] == 10
    assert report["motivic_class"] == "L^4 + 6*L^3 + 3*L^2"
    assert report["final"]["frontier"] == ["R0", "R2"]
    assert all(s["status"] == "pass" for s in report["steps"])


def test_report_contents(report):
    assert report["root"]["weighted_degrees"] == [12]
    sing = report["root"]["singular"][0]
    assert sing["point_counts"]["gf2^2"]["components"] == [16, 16]
    certs = [b["certificate"] for s in report["steps"] for b in s["blowups"]]
    assert len(certs) == 6
    assert all(c["in_I2"] and not c["in_I3"] and c["codimension"] == 3 for c in certs)
    notes = [n["chart"] for s in report["steps"] for n in s["notes"]]
    assert "R2" in notes
    b = report["batyrev"]
    assert b["conjugacy_classes"] == 4 and b["counterexample"]


def test_report_is_deterministic(report):
    again = run_pipeline(load_pipeline("a4-char2.pipeline"), verify_field=GF2k(2),
                         timestamp="2000-01-01T00:00:00+00:00")
    assert json.dumps(again, sort_keys=True) == json.dumps(report, sort_keys=True)


def test_wrong_center_fails_and_skips():
    text = BUNDLED.replace("blowup U0 along A, B, u2", "blowup U0 along A, B, D")
    rep = run_pipeline(parse_pipeline(text), verify_field=None)
    assert rep["verdict"] == "fail"
    step2 = rep["steps"][1]
    cert = step2["blowups"][0]["certificate"]
    assert not cert["in_I2"]
    assert [s["status"] for s in rep["steps"][2:]] == ["skipped", "skipped"]
    assert rep["final"]["verdict"] == "fail"


def test_wrong_singular_claim_fails():
    text = BUNDLED.replace("singular U0 on exceptional = A, B, u2",
                           "singular U0 on exceptional = A, B")
    rep = run_pipeline(parse_pipeline(text), verify_field=None)
    assert rep["verdict"] == "fail"
    assert rep["steps"][0]["status"] == "fail"


def test_wrong_ledger_fails():
    text = BUNDLED.replace("expect euler = 10", "expect euler = 4")
    rep = run_pipeline(parse_pipeline(text), verify_field=None)
    assert rep["ledger"]["verdict"] == "fail"
    assert rep["verdict"] == "fail"


def test_smooth_root_without_steps():
    rep = run_pipeline(parse_pipeline(SMOOTH), timestamp="t")
    assert rep["verdict"] == "pass"
    assert rep["final"]["smooth"] == {"H": True}
    assert rep["euler"] == 0
    assert "batyrev" not in rep


@pytest.mark.parametrize("text, needle", [
    ("name = M\n", "content before"),
    ("[root]\nname = M\n", "variables and equation"),
    (SMOOTH + "\n[step 2]\n", "numbered"),
    (SMOOTH.replace("smooth H", "prune H = covered"), "not allowed"),
    (SMOOTH + "[ledger]\nbogus\n", "unrecognised ledger"),
    (SMOOTH.replace("[final]", "[step 1]\nfrobnicate H\n[final]"), "unrecognised directive"),
])
def test_structural_errors(text, needle):
    with pytest.raises(PipelineError) as exc:
        parse_pipeline(text)
    assert needle in str(exc.value)


def test_unknown_chart_reference():
    text = SMOOTH.replace("[final]", "[step 1]\nprune Z = covered\n[final]")
    with pytest.raises(PipelineError) as exc:
        run_pipeline(parse_pipeline(text))
    assert "unknown chart" in str(exc.value)
    assert exc.value.line == 9


def test_prune_twice_is_an_error():
    text = BUNDLED.replace("prune V2 = covered", "prune V2 = covered\nprune U2 = covered")
    with pytest.raises(PipelineError) as exc:
        run_pipeline(parse_pipeline(text), verify_field=None)
    assert "not on the frontier" in str(exc.value)


def test_bad_polynomial_in_claim():
    text = BUNDLED.replace("singular U0 on exceptional = A, B, u2",
                           "singular U0 on exceptional = A, B, q9")
    with pytest.raises(PipelineError):
        run_pipeline(parse_pipeline(text), verify_field=None)
