import json
import shutil
from pathlib import Path

import pytest

from opakit.cli import (
    EXIT_FIXTURE_FAILURES,
    EXIT_INTEGRITY,
    EXIT_MODE,
    EXIT_OK,
    EXIT_USAGE,
    build_parser,
    main,
    make_config,
    resolve_output,
)
from opakit.fixtures.loader import DATA_DIR, FixtureStore
from opakit.fixtures.runner import Check, CheckFailure, FixtureRunner


class TestCommands:
    """End-to-end runs of the command-line driver."""

    def test_opa(self, capsys):
        assert main(["opa", "--space", "hardy2", "--f", "2-z1-z2", "--n", "2"]) == EXIT_OK
        document = json.loads(capsys.readouterr().out)
        assert document["schema"] == "opakit/1"
        assert document["config"]["orders"] == [2]
        assert document["result"]["approximant"] == "7/17+2/17*z1+2/17*z2"
        assert document["result"]["nu2_exact"] == "3/17"
        assert document["result"]["residual_ok"] is True
        assert document["result"]["coeffs"][0]["monomial"] == [0, 0]

    def test_opa_sequence(self, capsys):
        assert main(["opa", "--f", "2-z1-z2", "--n", "1", "--sequence"]) == EXIT_OK
        sequence = json.loads(capsys.readouterr().out)["result"]["sequence"]
        assert [r["approximant"] for r in sequence] == ["1/3", "3/8+1/8*z1"]

    def test_ortho_conventions(self, capsys):
        assert main(["ortho", "--f", "2-z1-z2", "--n", "2"]) == EXIT_OK
        result = json.loads(capsys.readouterr().out)["result"]
        assert result["convention"] == {"members": "monic", "differences": "opa_difference"}
        assert result["members"][0] == "1"
        assert result["differences"][0] == "1/3"
        assert result["recovered"] is True

    def test_parse_error(self, capsys):
        assert main(["opa", "--f", "2-z1+*z2", "--n", "1"]) == EXIT_USAGE
        err = capsys.readouterr().err
        assert "parse error" in err
        assert "     ^" in err

    def test_mode_error(self, capsys):
        code = main(["opa", "--space", "dirichlet:-0.85,-0.85", "--f", "2-z1-z2", "--n", "1", "--mode", "exact"])
        assert code == EXIT_MODE
        assert "mode error" in capsys.readouterr().err

    def test_bad_arguments(self, capsys):
        assert main(["opa", "--f", "2-z1-z2"]) == EXIT_USAGE
        assert main(["closed-form", "diag"]) == EXIT_USAGE
        assert main(["filter", "run", "--B", "1-z1/2"]) == EXIT_USAGE

    def test_unknown_fixture_filter(self, capsys):
        assert main(["fixtures", "--filter", "no_such_check"]) == EXIT_USAGE

    def test_tampered_fixtures(self, tmp_path, monkeypatch, capsys):
        data = tmp_path / "data"
        shutil.copytree(DATA_DIR, data)
        table = data / "shanks.txt"
        table.write_text(table.read_text() + "\n# edited\n")
        monkeypatch.setattr("opakit.cli.FixtureStore", lambda: FixtureStore(data))
        assert main(["fixtures"]) == EXIT_INTEGRITY
        assert "shanks.txt" in capsys.readouterr().err

    def test_failing_fixture_check(self, monkeypatch, capsys):
        def failing(store):
            raise CheckFailure("value differs")

        checks = [Check("always_fails", ("demo",), failing)]
        monkeypatch.setattr("opakit.cli.FixtureRunner", lambda store: FixtureRunner(store, checks))
        assert main(["fixtures"]) == EXIT_FIXTURE_FAILURES
        out = capsys.readouterr().out
        assert "FAIL always_fails" in out
        assert "0 passed, 1 failed" in out

    def test_profile_csv(self, tmp_path):
        out = tmp_path / "profile.csv"
        code = main(["profile", "--f", "2-z1-z2", "--face", "z1", "--grid", "16", "--out", str(out)])
        assert code == EXIT_OK
        lines = out.read_text().splitlines()
        assert lines[0] == "t,min_modulus"
        assert len(lines) > 1

    def test_filter_run(self, tmp_path, capsys):
        data = tmp_path / "data.csv"
        data.write_text("1,2\n3,4\n")
        code = main(["filter", "run", "--A", "1+z1", "--B", "1", "--data", str(data), "--rows", "3"])
        assert code == EXIT_OK
        assert capsys.readouterr().out.splitlines() == ["1,2", "4,6", "3,4"]

    def test_stability(self, capsys):
        assert main(["filter", "stability", "--B", "2-z1-z2"]) == EXIT_OK
        document = json.loads(capsys.readouterr().out)
        assert document["result"]["verdict"]["status"] == "unstable"


class TestConfig:
    def test_config_records_options(self):
        args = build_parser().parse_args(["shapiro", "--points", "(1/2,1/3)", "--trunc", "40"])
        cfg = make_config(args)
        assert cfg.orders == (40,)
        assert cfg.space == "hardy2"
        assert cfg.to_dict()["options"]["points"] == "(1/2,1/3)"

    def test_resolve_output(self, monkeypatch, tmp_path):
        monkeypatch.delenv("OPAKIT_OUTPUT_DIR", raising=False)
        assert resolve_output(None) is None
        assert resolve_output("report.json") == Path("report.json")

        monkeypatch.setenv("OPAKIT_OUTPUT_DIR", str(tmp_path))
        assert resolve_output("report.json") == tmp_path / "report.json"
        assert resolve_output("sub/report.json") == Path("sub/report.json")
