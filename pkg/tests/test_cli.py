"""
Tests for the command line front end.
"""

import json

import pytest

from hyperoperad.cli import build_parser, main
from hyperoperad.core import HyperoperadEngine
from hyperoperad.models import CheckResult
from hyperoperad.operad import com_corolla, delta_edge
from hyperoperad.serialization import serialize


@pytest.fixture
def cache_args(tmp_path):
    return ["--cache", str(tmp_path / "cache"), "--workers", "1"]


class TestParser:
    """Test cases for argument parsing."""

    def test_requires_a_command(self):
        assert main([]) == 2

    def test_unknown_flavor(self, cache_args):
        assert main(cache_args + ["enumerate", "--flavor", "nope", "--arity", "2", "--weight", "-1"]) == 2

    def test_help_exits_cleanly(self):
        assert main(["--help"]) == 0

    def test_suite_choices(self):
        args = build_parser().parse_args(["verify", "--suite", "axioms"])
        assert args.suite == "axioms"
        assert args.weight_min == -2

    def test_suite_alias_is_accepted(self):
        assert build_parser().parse_args(["verify", "--suite", "paper-examples"]).suite == "paper-examples"


class TestCommands:
    """Test cases for the subcommands."""

    def test_enumerate_json(self, cache_args, capsys):
        code = main(cache_args + ["--format", "json", "enumerate", "--flavor", "fbvh", "--arity", "2", "--weight", "-1"])
        assert code == 0
        report = json.loads(capsys.readouterr().out)
        assert [p["size"] for p in report["pieces"]] == [1, 0]

    def test_differential_of_closed_graph(self, cache_args, tmp_path, capsys):
        source = tmp_path / "corolla.jsonl"
        source.write_text(serialize(com_corolla(3)) + "\n", encoding="utf-8")
        assert main(cache_args + ["differential", "--in", str(source)]) == 0
        assert capsys.readouterr().out.strip() == "0"

    def test_differential_bad_input(self, cache_args, tmp_path):
        source = tmp_path / "broken.jsonl"
        source.write_text("{not json\n", encoding="utf-8")
        assert main(cache_args + ["differential", "--in", str(source)]) == 2

    def test_missing_input_file(self, cache_args, tmp_path):
        assert main(cache_args + ["differential", "--in", str(tmp_path / "absent.jsonl")]) == 2

    def test_compose(self, cache_args, tmp_path, capsys):
        left = tmp_path / "left.jsonl"
        right = tmp_path / "right.jsonl"
        left.write_text(serialize(com_corolla(3)) + "\n", encoding="utf-8")
        right.write_text(serialize(delta_edge()) + "\n", encoding="utf-8")
        assert main(cache_args + ["compose", "--left", str(left), "--i", "1", "--right", str(right), "--j", "0"]) == 0
        assert len(capsys.readouterr().out.strip().splitlines()) == 2

    def test_cohomology_flags_conflict(self, cache_args):
        args = ["cohomology", "--flavor", "forest", "--arity", "2", "--weight", "-1", "--weight-min", "-2"]
        assert main(cache_args + args) == 2

    def test_cohomology(self, cache_args, capsys):
        assert main(cache_args + ["--format", "json", "cohomology", "--flavor", "forest", "--arity", "2", "--weight", "-1"]) == 0
        (dims,) = json.loads(capsys.readouterr().out)
        assert dims["dims"] == {"-1": 1, "0": 0}

    def test_verify(self, cache_args, capsys):
        assert main(cache_args + ["verify", "--suite", "arnold"]) == 0
        assert "checks passed" in capsys.readouterr().out

    def test_verify_failure_shows_both_sides(self, cache_args, capsys, monkeypatch):
        failing = CheckResult(name="sample identity", passed=False, expected="{0: 1}", computed="{}")
        monkeypatch.setattr(HyperoperadEngine, "verify", lambda self, suite, weight_min: [failing])
        assert main(cache_args + ["verify", "--suite", "paper-examples"]) == 1
        out = capsys.readouterr().out
        assert "FAIL  sample identity" in out
        assert "expected: {0: 1}" in out
        assert "computed: {}" in out

    def test_oracle_bv(self, cache_args, capsys):
        assert main(cache_args + ["--format", "json", "oracle", "bv", "--arity", "3"]) == 0
        report = json.loads(capsys.readouterr().out)
        assert report["dims"] == report["poincare"]

    def test_oracle_range_error(self, cache_args):
        assert main(cache_args + ["oracle", "bv", "--arity", "6"]) == 1

    def test_oracle_witt(self, cache_args, capsys):
        assert main(cache_args + ["oracle", "witt", "--gens", "2", "--len", "3"]) == 0
        out = capsys.readouterr().out.splitlines()
        assert out[0] == "dim 2"

    def test_stats_go_to_stderr(self, cache_args, capsys):
        assert main(cache_args + ["--stats", "oracle", "gr-t", "--n", "2", "--len", "2"]) == 0
        assert "\"counters\"" in capsys.readouterr().err
