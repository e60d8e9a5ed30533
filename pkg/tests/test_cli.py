"""Tests for the command-line driver."""

import io
import json

import numpy as np
import pyarrow.csv as csv
import pytest

from tusv.cli.commands import (
    RunResult,
    render,
    run,
    stream_witness_json,
    stream_witness_text,
)
from tusv.cli.main import main
from tusv.schemas.catalog import WitnessClaim
from tusv.schemas.reports import WitnessReportOut
from tusv.schemas.run import RunConfig
from tusv.services import classifier
from tusv.services.catalog import load_catalog


@pytest.fixture
def tusv(capsys, cache_dir):
    """Run the CLI; returns (exit code, stdout)."""

    def invoke(*argv: str) -> tuple[int, str]:
        command, *rest = argv
        code = main([command, "--cache-dir", str(cache_dir), *rest])
        return code, capsys.readouterr().out

    return invoke


class TestWitnessCommand:
    """Tests for witness listing and single-value checks."""

    def test_cited_witness(self, tusv):
        code, out = tusv("witness", "--form", "1*sq+7*sq+gp(1,2)", "--bound", "100")
        assert code == 0
        report = json.loads(out)
        assert 19 in report["witnesses"]
        assert report["display"] == "x^2+7y^2+z(z+3)/2"

    def test_check_single_value(self, tusv):
        code, out = tusv("witness", "--form", "1*sq+7*sq+gp(1,2)", "--check", "19")
        assert code == 0
        report = json.loads(out)
        assert report["nonrepresentable"] is True
        assert report["representation"] is None

    def test_csv(self, tusv):
        code, out = tusv("witness", "-f", "1*sq+1*sq+1*sq", "-N", "30", "-o", "csv")
        assert code == 0
        table = csv.read_csv(io.BytesIO(out.encode("utf-8")))
        assert table.column("n").to_pylist() == [7, 15, 23, 28]

    def test_text(self, tusv):
        code, out = tusv("witness", "-f", "1*sq+1*sq+1*sq", "-N", "30", "-o", "text")
        assert code == 0
        assert "7, 15, 23, 28" in out

    def test_streamed_csv(self, cache_dir):
        """Above the threshold witnesses are produced chunk by chunk."""
        config = RunConfig(
            command="witness",
            form="1*sq+1*sq",
            bound=1000,
            cache_dir=cache_dir,
            output="csv",
            witness_stream_threshold=1,
        )
        result = run(config)
        assert not isinstance(result.chunks, list)
        table = csv.read_csv(io.BytesIO(result.text().encode("utf-8")))
        assert 3 in table.column("n").to_pylist()

    @pytest.mark.parametrize("output", ["json", "text"])
    def test_streamed_report_matches_in_memory(self, cache_dir, output):
        """A streamed JSON or text report equals the one rendered in memory."""

        def witness(threshold: int) -> RunResult:
            return run(
                RunConfig(
                    command="witness",
                    form="1*sq+1*sq",
                    bound=1000,
                    cache_dir=cache_dir,
                    output=output,
                    witness_stream_threshold=threshold,
                )
            )

        in_memory = witness(1_000_000)
        streamed = witness(1)
        assert isinstance(in_memory.chunks, list)
        assert not isinstance(streamed.chunks, list)
        assert streamed.text() == in_memory.text()

    def test_json_stream_across_chunks(self):
        """Witnesses split over several chunks still form one JSON array."""
        full = WitnessReportOut(form="f", display="d", bound=10, missed=3, witnesses=[3, 6, 7])
        empty = full.model_copy(update={"witnesses": []})
        chunks = [np.array([3, 6], dtype=np.int64), np.array([7], dtype=np.int64)]
        text = "".join(stream_witness_json(empty, chunks))
        assert text == render(full, "witness", "json")
        assert json.loads(text)["witnesses"] == [3, 6, 7]

    def test_stream_without_witnesses(self):
        """No chunks renders an empty witness list."""
        report = WitnessReportOut(form="f", display="d", bound=2, missed=0, witnesses=[])
        assert "".join(stream_witness_json(report, [])) == render(report, "witness", "json")
        assert "".join(stream_witness_text(report, [])) == render(report, "witness", "text")

    def test_text_stream_across_chunks(self):
        """Chunked witness lines join into the single in-memory line."""
        full = WitnessReportOut(
            form="f", display="d", bound=30, missed=4, witnesses=[7, 15, 23, 28]
        )
        empty = full.model_copy(update={"witnesses": []})
        chunks = [np.array([7, 15]), np.array([23]), np.array([28])]
        assert "".join(stream_witness_text(empty, chunks)) == render(full, "witness", "text")

    def test_strict_rejects_divisible_gp(self, tusv):
        code, _ = tusv("witness", "-f", "1*sq+1*sq+gp(4,2)", "--strict")
        assert code == 2


class TestOtherCommands:
    """Tests for eval, sieve, verify, conjectures and cache."""

    def test_eval(self, tusv):
        code, out = tusv("eval", "3*gp(7,2)", "3")
        assert code == 0
        assert json.loads(out)["value"] == 81

    def test_sieve(self, tusv):
        code, out = tusv("sieve", "-f", "1*tri+1*tri+1*tri", "-N", "500")
        assert code == 0
        report = json.loads(out)
        assert report["universal_up_to_bound"] is True
        assert report["attained"] == 501

    def test_sieve_cache_hit_same_report(self, tusv):
        """A warm run reports the same mask as a cold one."""
        _, cold = tusv("sieve", "-f", "1*sq+1*sq+1*sq", "-N", "500")
        _, warm = tusv("sieve", "-f", "1*sq+1*sq+1*sq", "-N", "500")
        cold, warm = json.loads(cold), json.loads(warm)
        assert warm.pop("cache_hit") is True
        assert cold.pop("cache_hit") is False
        assert cold == warm

    def test_verify_tables(self, tusv):
        code, out = tusv("verify", "--suite", "tables")
        assert code == 0
        report = json.loads(out)
        assert report["passed"] is True
        assert report["suites"][0]["findings"]

    def test_verify_text(self, tusv):
        code, out = tusv("verify", "--suite", "anchors", "-o", "text")
        assert code == 0
        assert "[PASS] anchors" in out

    def test_verify_witnesses(self, tusv):
        code, out = tusv("verify", "--suite", "witnesses")
        assert code == 0
        assert [s["suite"] for s in json.loads(out)["suites"]] == ["witnesses", "two-term"]

    def test_strict_contradiction_exits_1(self, tusv, monkeypatch):
        catalog = load_catalog().model_copy(
            update={
                "witnesses": [WitnessClaim(source="t", form="1*sq+1*sq+1*sq", value=6)],
                "supplementary_witnesses": [],
            }
        )
        monkeypatch.setattr(classifier, "load_catalog", lambda: catalog)
        code, _ = tusv("verify", "--suite", "witnesses", "--strict")
        assert code == 1
        code, out = tusv("verify", "--suite", "witnesses")
        assert code == 1
        assert json.loads(out)["passed"] is False

    def test_conjectures(self, tusv):
        code, out = tusv("conjectures", "--which", "1.2", "--bound", "2000")
        assert code == 0
        report = json.loads(out)
        assert len(report["scans"][0]["entries"]) == 58

    def test_cache_actions(self, tusv):
        code, out = tusv("cache", "build", "-f", "1*sq+1*sq+1*tri", "-N", "100")
        assert code == 0
        assert json.loads(out)["entries"] == 1
        code, out = tusv("cache", "info")
        assert json.loads(out)["entries"] == 1
        code, out = tusv("cache", "clear")
        assert json.loads(out)["removed"] == 1

    def test_out_file(self, tusv, tmp_path):
        target = tmp_path / "report.json"
        code, out = tusv("eval", "1*sq", "12", "--out", str(target))
        assert code == 0
        assert out == ""
        assert json.loads(target.read_text())["value"] == 144


class TestClassifyCommand:
    """Tests for family surveys from the command line."""

    def test_expected_list_matches(self, tusv):
        code, out = tusv("classify", "--family", "II", "--expect", "1.2")
        assert code == 0
        report = json.loads(out)
        assert report["expected_match"] is True
        assert report["diff"]["missing"] == []
        assert len(report["survivors"]) >= 37

    def test_mismatch_exits_1(self, tusv):
        """Far too small a W lets unlisted tuples through."""
        code, out = tusv("classify", "--expect", "1.1", "--witness-bound", "10")
        assert code == 1
        assert json.loads(out)["expected_match"] is False

    def test_explicit_caps(self, tusv):
        code, out = tusv(
            "classify", "--family", "I", "--cap-a", "1", "--cap-b", "1", "--cap-c", "3",
            "--cap-d", "2", "-W", "1000",
        )
        assert code == 0
        report = json.loads(out)
        assert [s["display"] for s in report["survivors"]] == ["x^2+y^2+z(z+3)/2"]
        assert report["expected_match"] is None

    def test_csv(self, tusv):
        code, out = tusv("classify", "--expect", "1.1", "-o", "csv")
        assert code == 0
        table = csv.read_csv(io.BytesIO(out.encode("utf-8")))
        assert table.num_rows >= 7
        assert set(table.column("expected").to_pylist()) <= {True, False}

    def test_text(self, tusv):
        code, out = tusv("classify", "--expect", "liouville", "-o", "text")
        assert code == 0
        assert "expected match: yes" in out


class TestUsageErrors:
    """Every usage, parse or validation error exits 2."""

    @pytest.mark.parametrize(
        "argv",
        [
            ("sieve", "-f", "1*sq+1*sq+1*sq", "-o", "csv"),
            ("sieve", "-f", "1*sq+1*foo+1*sq"),
            ("sieve", "-f", "1*sq+1*sq+1*sq", "-N", "-5"),
            ("sieve", "-f", "1*sq+1*sq+1*sq", "-j", "0"),
            ("classify", "--family", "I", "--expect", "1.2"),
            ("classify", "--family", "I"),
            ("classify", "--family", "I", "--cap-a", "0", "--cap-b", "1", "--cap-c", "1",
             "--cap-d", "1"),
            ("classify",),
            ("cache", "build"),
            ("witness", "-f", "1*sq+1*sq+1*sq", "--check", "7", "-o", "csv"),
        ],
    )
    def test_exit_2(self, tusv, argv):
        code, _ = tusv(*argv)
        assert code == 2

    def test_argparse_errors(self, capsys):
        assert main(["bogus"]) == 2
        assert main(["sieve"]) == 2

    def test_bound_above_limit(self, tusv):
        code, _ = tusv("sieve", "-f", "1*sq+1*sq+1*sq", "-N", str(2**33))
        assert code == 2

    def test_version(self, capsys):
        assert main(["--version"]) == 0


class TestRunResult:
    def test_text_joins_chunks(self):
        assert RunResult(0, ["a", "b"]).text() == "ab"


class TestSettings:
    """Tests for environment-driven defaults."""

    def test_environment_overrides(self):
        from tusv.config import get_settings

        settings = get_settings()
        assert settings.scan_bound == 20000
        assert settings.jobs == 1
        assert settings.max_bound == 2**32

    def test_invalid_jobs_rejected(self, monkeypatch):
        from pydantic import ValidationError

        from tusv.config import Settings

        monkeypatch.setenv("TUSV_JOBS", "0")
        with pytest.raises(ValidationError):
            Settings()
