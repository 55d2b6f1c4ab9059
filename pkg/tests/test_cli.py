import io
import json
import subprocess
import sys
import time
from pathlib import Path

import pytest

from mrint.cli import InputError, _attach_values, main, parse_point, read_input_document

GOLDEN = Path(__file__).parent / "data" / "paper_table_a.txt"


def run(*args, stdin=None):
    proc = subprocess.run(
        [sys.executable, "-m", "mrint", *args], input=stdin, capture_output=True, text=True, timeout=300
    )
    return proc.returncode, proc.stdout, proc.stderr


def call(*args):
    out = io.StringIO()
    code = main(list(args), out)
    return code, out.getvalue()


class TestAnalyze:
    def test_pass(self):
        code, out, _ = run("analyze", "-1/q1", "--darboux", "-1")
        assert code == 0
        assert "galois group: C\n" in out

    def test_fail(self):
        code, out, _ = run("analyze", "-i", "-1/q1 + q2^3/q1^4", "--darboux", "-1,0")
        assert code == 2
        assert "A[1,1,1] = 0" in out

    def test_structured(self):
        code, out = call("analyze", "-1/q1 + q2^2/(2*q1^3) + q2^3/q1^4", "--darboux", "(-1, 0)", "--format", "structured")
        doc = json.loads(out)
        assert code == 0
        assert doc["verdict"] == "pass"
        assert doc["galois"]["class"] == "C2"
        assert doc["darboux"]["mode"] == "exact"

    def test_several_points_give_array(self):
        code, out = call("analyze", "-1/q1 + q2^3/q1^4", "--darboux", "-1,0", "--darboux", "-2.0,0", "--format", "structured")
        docs = json.loads(out)
        assert code == 2 and len(docs) == 2
        assert docs[1]["darboux"]["mode"] == "floating"

    def test_input_document(self, tmp_path):
        doc = tmp_path / "v.txt"
        doc.write_text("# cubic perturbation\npotential: -1/q1 + 0*q2^3/q1^4\ndarboux: -1, 0\ntolerance: 1e-10\n")
        code, out = call("analyze", "--input", str(doc))
        assert code == 0

    def test_stdin(self):
        code, out, _ = run("analyze", "-i", "-", "--darboux", "-1", stdin="-1/q1\n")
        assert code == 0

    @pytest.mark.parametrize(
        "args",
        [
            ("analyze", "1/q1^2", "--darboux", "1"),
            ("analyze", "-1/q1 + q1", "--darboux", "-1"),
            ("analyze", "-1/q1", "--darboux", "0"),
            ("analyze", "-1/q1 + q2/q1^2", "--darboux", "-1,0"),
            ("analyze", "-1/q1", "--darboux", "-1,0"),
            ("analyze", "2q1", "--darboux", "1"),
            ("analyze", "-1/q1"),
            ("analyze", "-1/q1", "--darboux", "abc"),
            ("analyze", "-1/q1", "--darboux", "-1", "--tolerance", "-1"),
            ("bogus",),
            ("table", "--range", "-1"),
            ("residue", "1", "2"),
            ("residue", "-1", "2", "3"),
            ("selfcheck", "--jobs", "0"),
        ],
    )
    def test_input_errors_exit_one(self, args):
        code, _, err = run(*args)
        assert code == 1, err
        assert "error" in err


class TestTable:
    def test_golden_blocks(self):
        code, out, _ = run("table", "--range", "7", "--blocks")
        assert code == 0
        assert out == GOLDEN.read_text()

    def test_range_zero(self):
        assert call("table", "--range", "0") == (0, "0 0 0 1\n")

    def test_range_two(self):
        code, out = call("table", "--range", "2")
        assert code == 0 and len(out.splitlines()) == 10

    def test_serial_and_parallel_identical(self):
        _, serial, _ = run("table", "--range", "9")
        _, parallel, _ = run("table", "--range", "9", "--jobs", "3")
        assert serial == parallel

    def test_structured(self):
        code, out = call("table", "--range", "1", "--format", "structured")
        rows = json.loads(out)
        assert rows[0] == {"i": 0, "j": 0, "k": 0, "value": 1}
        assert len(rows) == 4


class TestResidue:
    def test_text(self):
        code, out = call("residue", "1", "1", "4")
        assert code == 0
        assert "c1 = -64/15" in out
        assert "(matches)" in out
        assert "A = 0" in out

    def test_structured_zero_index(self):
        code, out = call("residue", "0", "1", "3", "--format", "structured")
        doc = json.loads(out)
        assert doc["A"] == 1
        assert [v["weight"] for v in doc["variants"]] == ["(t^2-1)", "t(t^2-1)"]
        assert "closed_form" not in doc

    def test_structured_closed_form(self):
        doc = json.loads(call("residue", "1", "1", "1", "--format", "structured")[1])
        assert doc["closed_form"] == {"alpha_power": 2, "value": "8/5", "matches": True}


class TestSelfcheck:
    def test_small_range_is_fast(self):
        t0 = time.perf_counter()
        code, out, _ = run("selfcheck", "--range", "4")
        assert code == 0
        assert time.perf_counter() - t0 < 5
        assert out.count(" ok ") == 7

    def test_perturbation_detected(self):
        code, out = call("selfcheck", "--range", "4", "--perturb-family")
        assert code == 2
        assert out.startswith("ode            FAIL")

    def test_structured(self):
        code, out = call("selfcheck", "--range", "3", "--format", "structured")
        assert code == 0
        assert all(s["passed"] for s in json.loads(out))


class TestHelpers:
    def test_parse_point(self):
        from fractions import Fraction

        from mrint.potential.gaussian import Gaussian

        assert parse_point("(-1, 1/2)") == [Fraction(-1), Fraction(1, 2)]
        assert parse_point("1+i,0") == [Gaussian(1, 1), Fraction(0)]
        assert parse_point("-1.0,0") == [-1 + 0j, 0j]
        with pytest.raises(InputError):
            parse_point("()")

    def test_read_document(self):
        assert read_input_document("-1/q1\n") == ("-1/q1", [], {})
        expr, pts, tols = read_input_document("potential: -1/q1\ndarboux: -1\nint-tolerance: 1e-4")
        assert (expr, pts, tols) == ("-1/q1", ["-1"], {"int-tolerance": 1e-4})
        with pytest.raises(InputError):
            read_input_document("darboux: -1")
        with pytest.raises(InputError):
            read_input_document("potential: -1/q1\ncolour: red")

    def test_attach_values(self):
        assert _attach_values(["analyze", "-1/q1", "--darboux", "-1,0"]) == ["analyze", "--input=-1/q1", "--darboux=-1,0"]
        assert _attach_values(["table", "--range", "3"]) == ["table", "--range", "3"]
