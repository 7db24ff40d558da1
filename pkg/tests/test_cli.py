import json
import subprocess
import sys

import pytest

from freepit.cli import main

RUNNING = "x1*x2^-1 + x2*x1^-1"


def run(capsys, *argv):
    try:
        code = main(list(argv))
    except SystemExit as exc:  # argparse rejects the command line itself
        code = exc.code
    out, err = capsys.readouterr()
    return code, out, err


class TestCheck:
    def test_zero_example(self, capsys):
        code, out, _ = run(capsys, "check", "--expr", "x1*x1^-1 - 1", "--n", "1", "--degree", "2")
        assert code == 0 and out.splitlines()[0] == "Zero"

    def test_running_example(self, capsys):
        code, out, _ = run(
            capsys, "check", "--expr", RUNNING, "--n", "2", "--degree", "2",
            "--field", "2305843009213693951", "--seed", "7",
        )
        assert code == 1 and out.splitlines()[0] == "NonZero"
        assert "seed: 7" in out and "dim=4" in out

    def test_json_report_replay_data(self, capsys):
        code, out, _ = run(capsys, "check", "--expr", RUNNING, "--seed", "7", "--json")
        report = json.loads(out)
        assert code == 1 and report["verdict"] == "NonZero"
        w = report["witness"]
        assert {"seed", "mode", "dim", "trial", "level", "entry", "assignment"} <= set(w)
        assert w["seed"] == 7 and w["mode"] == "degree" and w["dim"] == 4

    def test_degree_inferred_and_n_inferred(self, capsys):
        code, out, _ = run(capsys, "check", "--expr", "(x1+x2)*x2^-1 - x1*x2^-1 - 1")
        assert code == 0 and out.startswith("Zero")

    def test_large_degree_needs_sparse_mode(self, capsys):
        code, _, err = run(capsys, "check", "--expr", "x1^100")
        assert code == 2 and "check-sparse" in err

    def test_byte_identical(self, capsys):
        argv = ["check", "--expr", RUNNING, "--seed", "3", "--json"]
        first = run(capsys, *argv)
        second = run(capsys, *argv)
        assert first == second

    def test_sparse(self, capsys):
        code, out, _ = run(
            capsys, "check-sparse", "--expr", "x1^65536*x2 - x2*x1^65536", "--sparsity", "2", "--json"
        )
        assert code == 1 and json.loads(out)["witness"]["dim"] == 8

    def test_sparse_requires_sparsity(self, capsys):
        code, _, _ = run(capsys, "check-sparse", "--expr", "x1")
        assert code == 2


class TestReconstructAndExpand:
    def test_reconstruct_example(self, capsys):
        code, out, _ = run(capsys, "reconstruct", "--expr", RUNNING, "--n", "2", "--degree", "2", "--sparsity", "2")
        code2, expected, _ = run(capsys, "expand", "--expr", RUNNING, "--n", "2")
        assert code == code2 == 0
        assert json.loads(out) == json.loads(expected)
        assert len(json.loads(out)) == 2

    def test_reconstruct_over_rationals(self, capsys):
        code, out, _ = run(
            capsys, "reconstruct", "--expr", "3 + x1 - 2*x2^-1", "--sparsity", "3", "--field", "Q", "--json"
        )
        body = json.loads(out)
        assert code == 0 and body["field"] == "Q" and len(body["terms"]) == 3

    def test_reconstruct_bad_bounds(self, capsys):
        code, _, err = run(capsys, "reconstruct", "--expr", "x1 + x2 + x1^-1", "--degree", "1", "--sparsity", "1")
        assert code == 3 and err.startswith("infeasible")

    def test_expand_guard(self, capsys):
        code, _, err = run(capsys, "expand", "--expr", "(x1+x2)^20", "--sparsity-guard", "100")
        assert code == 3 and "guard" in err

    def test_expand_zero(self, capsys):
        code, out, _ = run(capsys, "expand", "--expr", "x1*x1^-1 - 1")
        assert code == 0 and json.loads(out) == []


class TestInputs:
    def test_file_with_comments(self, capsys, tmp_path):
        path = tmp_path / "e.txt"
        path.write_text("# running example\nx1*x2^-1\n+ x2*x1^-1\n", encoding="utf-8")
        code, out, _ = run(capsys, "check", "--file", str(path))
        assert code == 1 and out.startswith("NonZero")

    def test_missing_file(self, capsys, tmp_path):
        code, _, err = run(capsys, "check", "--file", str(tmp_path / "nope"))
        assert code == 2 and "cannot read" in err

    @pytest.mark.parametrize(
        "argv",
        [
            ["check", "--expr", "x1 +"],
            ["check", "--expr", "(x1+x2)^-1"],
            ["check", "--expr", "x3", "--n", "2"],
            ["check", "--expr", "x1", "--field", "6"],
            ["check", "--expr", "x1", "--trials", "0"],
        ],
    )
    def test_usage_errors(self, capsys, argv):
        code, out, err = run(capsys, *argv)
        assert code == 2 and out == "" and "Traceback" not in err

    def test_small_field_without_room(self, capsys):
        code, _, err = run(capsys, "check", "--expr", "x1", "--field", "2")
        assert code == 3 and err.startswith("infeasible")

    def test_small_field_is_extended(self, capsys):
        code, out, _ = run(capsys, "check", "--expr", RUNNING, "--field", "3", "--json")
        assert code == 1 and json.loads(out)["field"] == "3^3"


class TestEncodeDump:
    def test_degree(self, capsys):
        code, out, _ = run(capsys, "encode-dump", "--n", "2", "--degree", "2", "--mode", "degree")
        obj = json.loads(out)
        assert code == 0 and obj["dim"] == 4 and obj["mode"] == "degree"

    def test_sparse(self, capsys):
        code, out, _ = run(capsys, "encode-dump", "--n", "1", "--sparsity", "8", "--mode", "sparse")
        assert code == 0 and json.loads(out)["dim"] == 16

    def test_deterministic(self, capsys):
        argv = ["encode-dump", "--n", "2", "--degree", "3", "--mode", "degree", "--seed", "5"]
        assert run(capsys, *argv) == run(capsys, *argv)


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "freepit", "check", "--expr", "x1*x1^-1 - 1"],
        capture_output=True, text=True, check=False,
    )
    assert proc.returncode == 0 and proc.stdout.startswith("Zero")
