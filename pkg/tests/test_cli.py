import json
import subprocess
import sys

import pytest

from f1an.cli import run
from f1an.suites import SUITES

SET_ELEMENT = {
    "base": {"kind": "set", "elements": {"a": "1/2", "b": "3"}},
    "ring": {"kind": "padic", "p": 2},
    "terms": [{"elem": "a", "coeff": 2}, {"elem": "b", "coeff": 1}],
}


def ok(argv, stdin=""):
    code, out, err = run(argv, stdin)
    assert code == 0, err
    return json.loads(out)


def test_witt_add_example():
    code, out, _ = run(["witt", "add", "--p", "2", "--len", "2", "--x", "[1,0]", "--y", "[1,0]"])
    assert code == 0 and out.strip() == "[0,1]"


def test_witt_subcommands():
    assert ok(["witt", "polys", "--p", "2", "--len", "2"])["S"][1] == "X1 + Y1 - X0*Y0"
    assert ok(["witt", "ghost", "--p", "3", "--len", "2", "--x", "[1,2]", "--kind", "Z"]) == [1, 7]
    assert ok(["witt", "from-int", "--p", "2", "--len", "3", "--m", "6"]) == [0, 1, 1]
    neg = ok(["witt", "neg", "--p", "3", "--len", "3", "--x", "[1,0,0]", "--kind", "Z"])
    s = ok(["witt", "add", "--p", "3", "--len", "3", "--x", "[1,0,0]", "--y", json.dumps(neg), "--kind", "Z"])
    assert s == [0, 0, 0]
    a = ok(["witt", "mul", "--p", "5", "--len", "2", "--x", "[3,1]", "--y", "[2,4]", "--route", "table"])
    b = ok(["witt", "mul", "--p", "5", "--len", "2", "--x", "[3,1]", "--y", "[2,4]", "--route", "series"])
    assert a == b


def test_norm_from_stdin_and_flag():
    doc = json.dumps(SET_ELEMENT)
    assert ok(["norm"], doc)["norm"]["value"] == "13/4"
    assert ok(["norm", "--input", doc, "--mode", "Sup"])["norm"]["value"] == "3"


def test_norm_of_witt_and_ff_documents():
    w = {"p": 2, "kind": "Fp", "digits": [0, 1, 0]}
    assert ok(["norm", "--input", json.dumps(w), "--alpha", "1/2"])["norm"]["value"] == "1/2"
    ff = {"p": 2, "terms": [{"n": -1, "coeff": {"p": 2, "terms": [{"exp": "0", "coeff": 1}]}}]}
    code, out, err = run(["norm", "--input", json.dumps(ff), "--rho", "2", "--two-sided"])
    assert code == 0, err
    assert json.loads(out)["norm"]["value"] == "4"


def test_basechange_subcommands():
    N = {"kind": "monoid", "carrier": "N", "radius": "1/2"}
    f = {"base": N, "ring": {"kind": "fp", "p": 2}, "terms": [{"exp": 0, "coeff": 1}, {"exp": 1, "coeff": 1}]}
    out = ok(["basechange", "convolve", "--f", json.dumps(f), "--g", json.dumps(f)])
    assert [t["exp"]["num"] for t in out["product"]["terms"]] == [0, 2]
    assert out["norm"]["value"] == "5/4"
    # JSON round trip: the product is itself a valid input
    again = ok(["basechange", "norm", "--f", json.dumps(out["product"])])
    assert again["norm"]["value"] == "5/4"
    cof = ok(["basechange", "cofinality", "--coeffs", '{"0":1,"1":1}', "--rho", "1/2", "--rho-prime", "1/4"])
    assert cof["l1_at_rho_prime"]["value"] == "5/4" and cof["bound"]["value"] == "2"


def test_quotient_subcommands():
    assert ok(["quotient", "cokernel", "--r-prime", "1/4", "--radius", "1/2", "--n", "2"])["norm"]["value"] == "1/16"
    cert = ok(["quotient", "frobenius-family", "--family", "1/2", "3/4", "--p", "2"])
    assert set(cert) == {"times_p", "divide_p"}


def test_family_sources_failure_exits_1():
    code, out, _ = run(["quotient", "frobenius-family", "--family", "1/2", "--p", "2", "--sources", "family"])
    assert code == 1
    doc = json.loads(out)
    assert doc["status"] == "fail" and doc["witness"]["direction"] == "q -> -inf"


def test_spectrum_subcommands():
    assert ok(["spectrum", "eval", "--point", "prime:2:1", "--n", "12"])["value"]["value"] == "1/4"
    assert ok(["spectrum", "validate", "--point", "arch:1/2", "--range", "5"])["status"] == "pass"
    code, out, _ = run(["spectrum", "export", "--format", "svg", "--max-prime", "3", "--samples", "3"])
    assert code == 0 and out.startswith("<svg")
    doc = ok(["spectrum", "export", "--overlay", "padic:3:1/2:2"])
    assert [b["label"] for b in doc["branches"]] == ["2", "3", "5", "inf"]


@pytest.mark.parametrize(
    "argv",
    [
        ["norm", "--bogus"],
        ["witt", "add", "--p", "4", "--len", "2", "--x", "[1,0]", "--y", "[1,0]"],
        ["witt", "add", "--p", "2", "--len", "2", "--x", "[1,0", "--y", "[1,0]"],
        ["witt", "add", "--p", "2", "--len", "3", "--x", "[1,0]", "--y", "[1,0]"],
        ["quotient", "cokernel", "--r-prime", "1/2", "--radius", "1/4", "--n", "2"],
        ["spectrum", "eval", "--point", "prime:4:1", "--n", "3"],
        ["verify", "nope"],
        [],
    ],
)
def test_malformed_input_exits_2(argv):
    code, _, err = run(argv)
    assert code == 2
    assert err


def test_verify_reproducible():
    a = ok(["verify", "key-lemma", "--seed", "7"])
    b = ok(["verify", "key-lemma", "--seed", "7"])
    assert a == b and a["status"] == "pass"
    assert a["unswapped_failures"] > 0


def test_verify_all_subprocess():
    proc = subprocess.run([sys.executable, "-m", "f1an", "verify", "all", "--seed", "7"], capture_output=True, text=True, timeout=300)
    assert proc.returncode == 0, proc.stderr
    lines = [json.loads(line) for line in proc.stdout.splitlines()]
    assert {d["suite"] for d in lines} == set(SUITES)
    assert all(d["status"] == "pass" for d in lines)


def test_console_script_usage_error():
    proc = subprocess.run([sys.executable, "-m", "f1an", "norm", "--bogus"], capture_output=True, text=True)
    assert proc.returncode == 2
