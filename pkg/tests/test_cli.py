import io
import json
import subprocess
import sys

import pytest

from vvforms.cli import main


def run(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = main(list(argv), stdout=out, stderr=err)
    return code, out.getvalue(), err.getvalue()


class TestWorkedExamples:
    def test_bracket(self):
        assert run("bracket", "--op", "fn", "x2*dx1 @ e1", "dx1 @ e2", "--chart", "poly:2") == (
            0,
            "dx1^dx2 @ e2\n",
            "",
        )

    def test_delta(self):
        assert run("delta", "x2*dx1 @ e1", "--chart", "poly:2") == (0, "-1 dx1^dx2 @ e1\n", "")

    def test_decompose(self):
        code, out, _ = run("decompose", "x1*dx1 @ e1 + dx1 @ e2", "--chart", "poly:2")
        assert code == 0
        assert out == "trace: 1/2*x1\ntraceless: 1/2*x1 dx1 @ e1 + dx1 @ e2 - 1/2*x1 dx2 @ e2\n"


class TestVerbs:
    def test_eval_canonicalises(self):
        assert run("eval", "dx2 @ e2 + dx1 @ e1")[1] == "dx1 @ e1 + dx2 @ e2\n"

    def test_bracket_ops(self):
        assert run("bracket", "--op", "nr", "dx1 @ e2", "dx2 @ e1")[1] == "dx1 @ e1 - dx2 @ e2\n"
        code, out, _ = run("bracket", "--op", "c", "x2 dx1 @ e2", "dx2 @ e1", "--chart", "poly:3")
        assert out == "1/2 dx1^dx2 @ e1 + 1/2 dx2^dx3 @ e3\n"

    def test_trace(self):
        assert run("trace", "x2 dx1 @ e1")[1] == "x2\n"
        assert run("trace", "--bar", "x2 dx1 @ e1")[1] == "1/2*x2\n"

    def test_sconc(self):
        assert run("sconc", "x2 dx1 @ e2", "dx2 @ e1")[1] == "x2\n"

    def test_class(self):
        code, out, _ = run("class", "dx1 @ e1 + dx2 @ e2", "--chart", "fourier:2")
        assert out == "derham: 1\ntraceless: 0\n"

    def test_pullback(self):
        code, out, _ = run("pullback", "--diffeo", "map:(x1, x2+x1^2); inv:(x1, x2-x1^2)", "dx2")
        assert out == "2*x1 dx1 + dx2\n"
        code, out, _ = run("pullback", "--diffeo", "matrix:[[1,1],[0,1]]", "E[1,0] dx1", "--chart", "fourier:2")
        assert out == "E[1,1] dx1 + E[1,1] dx2\n"

    def test_json_output(self):
        code, out, _ = run("delta", "x2*dx1 @ e1", "--format", "json")
        record = json.loads(out)
        assert record["type"] == "vector" and record["degree"] == 2
        assert record["terms"] == [{"coeff": "-1", "dx": [1, 2], "key": [0, 0], "slot": 1}]


class TestExitCodes:
    def test_syntax_error(self):
        code, out, err = run("eval", "dx1 + ")
        assert code == 1 and out == "" and "FormSyntaxError" in err and "column" in err

    def test_domain_error(self):
        code, _, err = run("bracket", "--op", "c", "x2 dx1 @ e1", "dx1 @ e2")
        assert code == 1 and "NotTraceless" in err

    def test_scalar_where_vector_expected(self):
        assert run("delta", "dx1")[0] == 1

    def test_unknown_suite(self):
        code, _, err = run("check", "--suite", "nope")
        assert code == 1 and "UnknownSuite" in err

    def test_bad_chart_is_a_usage_error(self):
        with pytest.raises(SystemExit) as info:
            run("eval", "1", "--chart", "sphere:2")
        assert info.value.code == 2


class TestCheck:
    def test_center(self):
        code, out, _ = run("check", "--suite", "center", "--trials", "50", "--seed", "7", "--chart", "poly:3")
        assert code == 0
        assert out.startswith("[center] chart=poly:3 seed=7 trials=50")
        assert "PASS" in out

    def test_fn_jacobi(self):
        code, out, _ = run("check", "--suite", "fn-jacobi", "--trials", "100", "--seed", "1", "--chart", "fourier:2")
        assert code == 0 and "failures=0" in out

    def test_derham_dims(self):
        code, out, _ = run("check", "--suite", "derham", "--chart", "fourier:2")
        assert code == 0 and "dims: (1, 2, 1)" in out

    def test_deterministic_report(self):
        argv = ("check", "--suite", "cbracket", "--trials", "10", "--seed", "3", "--chart", "poly:3")
        assert run(*argv) == run(*argv)

    def test_json_report(self):
        code, out, _ = run("check", "--suite", "lemma23", "--trials", "5", "--format", "json")
        [report] = json.loads(out)
        assert report["suite"] == "lemma23" and report["failures"] == 0 and report["checks"] == 5


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "vvforms", "delta", "x2*dx1 @ e1", "--chart", "poly:2"],
        capture_output=True,
        text=True,
        check=False,
    )
    assert proc.returncode == 0 and proc.stdout == "-1 dx1^dx2 @ e1\n"
