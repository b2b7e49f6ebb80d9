import json
import math
from fractions import Fraction as Q
from io import StringIO

import pytest

from darbouxkit.cli import check_certificate, jsonable, run

CHI = "step 0 1 bp=1/2 vals=1,0"


def call(*argv):
    out = StringIO()
    code = run(list(argv), out=out)
    return code, out.getvalue()


def report(*argv):
    code, text = call(*argv)
    return code, json.loads(text)


def test_integrate_example():
    code, r = report("integrate", "--fn", CHI, "--eps", "0")
    assert code == 0 and r["status"] == "Certified"
    assert r["result"]["lower"] == r["result"]["upper"] == ["1/2", "1/2"]
    assert r["timing_ms"] is None


def test_cantor_nonconstancy_example():
    code, r = report("cantor", "--depth", "8", "--report", "nonconstancy")
    assert code == 0
    assert r["result"]["F1"] == ["1/2", "257/512"]
    assert r["result"]["zero_derivative_witnesses"] == 255


def test_mvt_exact_example():
    code, r = report("mvt", "--fn", "poly 0 1 coeffs=0,0,1", "--exact", "--tol", "1e-12")
    assert code == 0
    c = Q(r["result"]["c"])
    assert abs(c * c - Q(1, 3)) <= Q(1, 10 ** 12)
    assert math.isclose(float(c), 3 ** -0.5, abs_tol=1e-12)


def test_not_certified_exit_code():
    code, r = report("integrate", "--fn", "patho", "--eps", "1/10")
    assert code == 2 and r["status"] == "NotCertified"
    assert r["result"]["proves_nonintegrable"]


def test_usage_errors_exit_1(capsys):
    assert call("bogus")[0] == 1
    assert call("integrate", "--fn", "step 0 1 vals=1", "--eps", "abc")[0] == 1
    assert call("integrate")[0] == 1
    assert "darbouxkit" in capsys.readouterr().err


def test_bad_function_spec_is_error():
    code, r = report("integrate", "--fn", "step 1 0 vals=1")
    assert code == 1 and r["status"] == "Error"


def test_decimal_parameters_are_exact():
    _, r = report("integrate", "--fn", "step 0 1 vals=1", "--eps", "0.1")
    assert r["certificates"][0]["eps"] == "1/10"


def test_timing_opt_in():
    _, r = report("integrate", "--fn", CHI, "--timing")
    assert isinstance(r["timing_ms"], (int, float))


@pytest.mark.parametrize("argv", [
    ("integrate", "--fn", "poly 0 1 coeffs=0,0,1", "--eps", "1/1000"),
    ("mvt", "--fn", CHI),
    ("cantor", "--depth", "6", "--report", "stage"),
    ("thomson", "--fn", "poly 0 1 coeffs=0,0,1", "--n", "16"),
])
def test_deterministic_output(argv):
    assert call(*argv)[1] == call(*argv)[1]


ROUND_TRIP = [
    ("integrate", "--fn", CHI, "--eps", "0"),
    ("integrate", "--fn", "patho"),
    ("osc", "--fn", CHI, "--interval", "1/4,3/4"),
    ("osc", "--fn", CHI, "--point", "1/2", "--radii", "1/4,1/8"),
    ("find-continuity", "--fn", CHI, "--n", "6"),
    ("mvt", "--fn", CHI),
    ("mvt", "--fn", "poly 0 1 coeffs=0,1", "--eps", "1/10"),
    ("mvt", "--fn", "poly 0 1 coeffs=0,0,1", "--exact", "--tol", "1/1000000"),
    ("mvt", "--fn", "glue ( patho 0 1/2 ) ( step 1/2 1 vals=1/2 )", "--bounded"),
    ("mvt", "--fn", "step 0 1 bp=1/4,3/4 vals=0,1,2", "--step-measures"),
    ("mvt", "--fn", "abs -1 1 center=0", "--no-equality"),
    ("cantor", "--depth", "6", "--report", "nonconstancy"),
    ("thomson", "--fn", "poly 0 1 coeffs=0,0,1", "--n", "4"),
    ("thomson", "--integrand", CHI, "--n", "4", "--tags", "adversarial"),
]


@pytest.mark.parametrize("argv", ROUND_TRIP)
def test_certificates_round_trip(argv, tmp_path):
    code, r = report(*argv)
    assert code in (0, 2) and r["certificates"]
    for cert in r["certificates"]:
        assert check_certificate(cert)
    path = tmp_path / "report.json"
    path.write_text(json.dumps(r))
    code2, r2 = report("verify-certificate", str(path))
    assert code2 == 0 and r2["status"] == "Certified"


def test_tampered_certificate_fails(tmp_path):
    _, r = report("integrate", "--fn", CHI, "--eps", "0")
    r["certificates"][0]["lower_integral"] = ["1/3", "1/3"]
    path = tmp_path / "report.json"
    path.write_text(json.dumps(r))
    assert call("verify-certificate", str(path))[0] == 2


def test_thomson_table(tmp_path):
    path = tmp_path / "t.txt"
    path.write_text("0 0\n1/8 1/64\n1/4 1/16\n3/8 9/64\n1/2 1/4\n5/8 25/64\n3/4 9/16\n7/8 49/64\n1 1\n")
    code, r = report("thomson", "--table", str(path), "--n", "4")
    assert code == 0 and r["result"]["sum"] == "1/4"


def test_text_output():
    code, text = call("integrate", "--fn", CHI, "--output", "text")
    assert code == 0 and "Certified" in text


def test_jsonable_rationals():
    assert jsonable(Q(-3, 4)) == "-3/4"
    assert jsonable([Q(2), {"a": Q(1, 2)}]) == ["2", {"a": "1/2"}]


def test_verify_suite_verb():
    code, r = report("verify", "counterexamples")
    assert code == 0 and r["status"] == "Certified"
    assert all(i["passed"] for i in r["result"]["items"])
