"""CLI surface: exit codes, round trips, and the deterministic contract."""

import json
from pathlib import Path

import numpy as np
import pytest

from wiretap3.cli import main
from wiretap3.specfmt import parse_spec, write_spec

SPEC = """
alphabet X 2
alphabet Y 2
alphabet Z 2
alphabet Q 1
alphabet V 2

pmf unif : X
1/2 1/2
pmf pq : Q
1

channel y1 : X -> Y
9/10 1/10
1/10 9/10
channel y2 : X -> Y
9/10 1/10
1/10 9/10
channel z : X -> Z
4/5 1/5
1/5 4/5
channel pvq : Q -> V
1/2 1/2
channel pxv : V -> X
1 0
0 1

factored d ck
factor Q | = pq
factor V | Q = pvq
factor X | V = pxv
end
"""


@pytest.fixture
def spec_file(tmp_path: Path) -> Path:
    p = tmp_path / "chan.chan"
    p.write_text(SPEC)
    return p


class TestExitCodes:
    def test_ok(self, spec_file, capsys):
        assert main(["info", "--spec", str(spec_file)]) == 0

    def test_validation_error_on_malformed_file(self, tmp_path, capsys):
        bad = tmp_path / "bad.chan"
        bad.write_text("alphabet X 2\nchannel W : X -> X\n0.5 0.6\n0.5 0.5\n")
        assert main(["info", "--spec", str(bad)]) == 1
        assert "line 2" in capsys.readouterr().err

    def test_missing_file(self, capsys):
        assert main(["info", "--spec", "/nonexistent.chan"]) == 1

    def test_missing_seed_is_error(self, spec_file, capsys):
        rc = main([
            "bound", "--spec", str(spec_file), "--id", "wiretap",
            "--y1", "y1", "--y2", "y2", "--z", "z",
        ])
        assert rc == 1
        assert "--seed" in capsys.readouterr().err

    def test_malformed_inequality_file(self, tmp_path, capsys):
        bad = tmp_path / "bad.ineq"
        bad.write_text("vars x\nx ?? 2\n")
        assert main(["fme", "--system", str(bad)]) == 1
        assert "line 2" in capsys.readouterr().err

    def test_malformed_json_config(self, tmp_path, capsys):
        bad = tmp_path / "bad.json"
        bad.write_text("{not json")
        assert main(["simulate", "--config", str(bad), "--seed", "1"]) == 1

    def test_unknown_eliminate_variable(self, tmp_path, capsys):
        f = tmp_path / "s.ineq"
        f.write_text("vars x\nx <= 1\n")
        assert main(["fme", "--system", str(f), "--eliminate", "zz"]) == 1

    def test_cap_exceeded_exit_2(self, spec_file, tmp_path, capsys):
        cfg = {
            "scheme": "wiretap-equivocation",
            "spec": str(spec_file),
            "dist": {"pattern": "wiretap", "sizes": {"V": 2, "X": 2},
                     "tables": [[[0.5, 0.5]], [[1, 0], [0, 1]]]},
            "channel": "z",
            "rates": {"message": 0.25, "total": 0.5},
            "n": [16],
            "epsilon": 0.5,
            "trials": 0,
        }
        cfile = tmp_path / "cfg.json"
        cfile.write_text(json.dumps(cfg))
        assert main(["simulate", "--config", str(cfile), "--seed", "1"]) == 2


class TestRoundTrip:
    def test_spec_write_read_identical_values(self, spec_file):
        doc = parse_spec(spec_file.read_text())
        again = parse_spec(write_spec(doc))
        for name in doc.channels:
            assert np.array_equal(again.channel(name).matrix, doc.channel(name).matrix)
        for name in doc.factored:
            assert np.allclose(
                again.factored[name].realization.tensor,
                doc.factored[name].realization.tensor,
                atol=0,
            )


class TestBoundCommand:
    def test_evaluate_at_dist(self, spec_file, capsys):
        rc = main([
            "bound", "--spec", str(spec_file), "--id", "wiretap",
            "--y1", "y1", "--y2", "y2", "--z", "z", "--dist", "d",
            "--format", "json",
        ])
        assert rc == 0
        out = json.loads(capsys.readouterr().out)
        assert out["value"] == pytest.approx(0.252932, abs=1e-6)

    def test_maximize_meets_grid_oracle(self, spec_file, capsys):
        rc = main([
            "bound", "--spec", str(spec_file), "--id", "wiretap",
            "--y1", "y1", "--y2", "y2", "--z", "z",
            "--seed", "3", "--restarts", "6", "--card", "V=2",
            "--format", "json",
        ])
        assert rc == 0
        out = json.loads(capsys.readouterr().out)
        assert out["value"] >= 0.2519

    def test_deterministic_given_seed(self, spec_file, capsys):
        argv = [
            "bound", "--spec", str(spec_file), "--id", "ck_extension",
            "--y1", "y1", "--y2", "y2", "--z", "z",
            "--seed", "5", "--restarts", "4", "--format", "json",
        ]
        assert main(argv) == 0
        first = capsys.readouterr().out
        assert main(argv) == 0
        second = capsys.readouterr().out
        assert first == second


class TestRegionCommand:
    def test_theorem2_membership(self, spec_file, capsys):
        # V0=V1=V2 collapse pattern via inline spec is heavy; use prop1
        rc = main([
            "region", "--spec", str(spec_file), "--id", "prop1",
            "--dist", "d", "--y1", "y1", "--y2", "y2", "--z", "z",
            "--point", "R0=0.0,R1=0.01,Re=0.0", "--format", "json",
        ])
        # dist 'd' is a ck-pattern; prop1 needs (U,X) — expect exit 1
        assert rc == 1

    def test_prop1_with_matching_dist(self, tmp_path, capsys):
        text = SPEC + """
factored p1 prop1
factor U | = pq2
factor X | U = pxu
end
"""
        text = text.replace("pmf pq : Q\n1\n", "pmf pq : Q\n1\npmf pq2 : U\n1/2 1/2\n")
        text = text.replace(
            "alphabet V 2\n",
            "alphabet V 2\nalphabet U 2\n",
        )
        text += "\nchannel pxu : U -> X\n9/10 1/10\n1/5 4/5\n"
        # channel must be declared before the factored block that uses it
        text = text.replace(
            "factored p1 prop1",
            "channel pxu2 : U -> X\n9/10 1/10\n1/5 4/5\nfactored p1 prop1",
        ).replace("factor X | U = pxu\n", "factor X | U = pxu2\n")
        f = tmp_path / "ml.chan"
        f.write_text(text)
        rc = main([
            "region", "--spec", str(f), "--id", "prop1",
            "--dist", "p1", "--y1", "y1", "--y2", "y2", "--z", "z",
            "--point", "R0=0.0,R1=0.01,Re=0.0", "--format", "json",
        ])
        assert rc == 0
        out = json.loads(capsys.readouterr().out)
        assert out["contains_point"] is True


class TestFmeCommand:
    def test_fixture_pass(self, capsys):
        assert main(["fme", "--fixture", "theorem1", "--format", "json"]) == 0
        out = json.loads(capsys.readouterr().out)
        assert out["ok"] is True

    def test_system_eliminate_and_compare(self, tmp_path, capsys):
        f = tmp_path / "s.ineq"
        f.write_text("vars x y\nx + y <= 2\n-x <= 0\ny >= 0\n")
        g = tmp_path / "expected.ineq"
        g.write_text("vars y\ny <= 2\n-y <= 0\n")
        rc = main([
            "fme", "--system", str(f), "--eliminate", "x",
            "--compare", str(g), "--format", "json",
        ])
        assert rc == 0
        out = json.loads(capsys.readouterr().out)
        assert out["region_equal"] is True


class TestSimulateCommand:
    def test_csv_rows(self, spec_file, tmp_path, capsys):
        cfg = {
            "scheme": "wiretap-equivocation",
            "spec": str(spec_file),
            "dist": {"factored": "d"},
            "channel": "z",
            "rates": {"message": 0.25, "total": 0.75},
            "n": [2, 4],
            "epsilon": 0.5,
            "trials": 0,
        }
        cfile = tmp_path / "cfg.json"
        cfile.write_text(json.dumps(cfg))
        rc = main(["simulate", "--config", str(cfile), "--seed", "9", "--format", "csv"])
        assert rc == 0
        lines = capsys.readouterr().out.strip().splitlines()
        assert lines[0].startswith("n,")
        assert len(lines) == 3


class TestReproExample:
    def test_small_budget_smoke(self, capsys):
        rc = main(["repro-example", "--seed", "2", "--restarts", "2", "--format", "json"])
        assert rc == 0
        out = json.loads(capsys.readouterr().out)
        assert abs(out["achievable"] - 5 / 6) < 1e-10
        assert out["rck_best"] < 5 / 6 - 1e-3

    def test_channel_export_round_trips(self, tmp_path, capsys):
        target = tmp_path / "fig1.chan"
        rc = main([
            "repro-example", "--seed", "2", "--restarts", "1",
            "--export-channel", str(target), "--format", "json",
        ])
        assert rc == 0
        doc = parse_spec(target.read_text())
        assert doc.channel("z1").exact is not None
        assert doc.alphabets["Z"] == 9


REPO_EXAMPLES = Path(__file__).resolve().parent.parent / "docs" / "examples"


class TestShippedExamples:
    def test_leakage_trend_config(self, capsys):
        rc = main([
            "simulate", "--config", str(REPO_EXAMPLES / "leakage_trend.json"),
            "--seed", "0", "--format", "json",
        ])
        assert rc == 0
        rows = json.loads(capsys.readouterr().out)["rows"]
        leaks = [r["leakage_rate"] for r in rows]
        assert all(leaks[i] > leaks[i + 1] for i in range(len(leaks) - 1))

    def test_concentration_config(self, capsys):
        rc = main([
            "simulate", "--config", str(REPO_EXAMPLES / "concentration.json"),
            "--seed", "9", "--format", "json",
        ])
        assert rc == 0
        rows = json.loads(capsys.readouterr().out)["rows"]
        assert rows[-1]["exceedance_frequency"] < 0.05

    def test_indirect_decode_config(self, capsys):
        rc = main([
            "simulate", "--config", str(REPO_EXAMPLES / "indirect_decode.json"),
            "--seed", "11", "--format", "json",
        ])
        assert rc == 0
        rows = json.loads(capsys.readouterr().out)["rows"]
        assert rows[0]["p_error"] > rows[-1]["p_error"]
