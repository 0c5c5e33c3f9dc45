import json
from fractions import Fraction as F

import pytest

import ncglab as L
from ncglab import serialize as S
from ncglab.cli import main


@pytest.fixture
def workdir(tmp_path):
    fx = L.gen_general_bse(4, F(2))
    paths = {
        "fixture": tmp_path / "fixture.json",
        "instance": tmp_path / "instance.json",
        "stable": tmp_path / "stable.json",
        "reference": tmp_path / "reference.json",
        "broken": tmp_path / "broken.json",
    }
    paths["fixture"].write_text(S.fixture_to_json(fx))
    paths["instance"].write_text(S.instance_to_json(fx.instance))
    paths["stable"].write_text(S.network_to_json(fx.stable_net))
    paths["reference"].write_text(S.network_to_json(fx.reference_net))
    overbuilt = L.Network.from_pairs(4, list(fx.stable_net.edges) + [(1, 3)])
    paths["broken"].write_text(S.network_to_json(overbuilt))
    paths["dir"] = tmp_path
    return paths


class TestCheck:
    def test_stable_exits_zero(self, workdir, capsys):
        rc = main(["check", str(workdir["instance"]), str(workdir["stable"]), "--concept", "bse"])
        assert rc == 0
        assert "stable" in capsys.readouterr().out

    def test_unstable_exits_one_with_witness(self, workdir, capsys, tmp_path):
        out = tmp_path / "witness.json"
        rc = main(
            [
                "check",
                str(workdir["instance"]),
                str(workdir["broken"]),
                "--concept",
                "bse",
                "--witness-out",
                str(out),
            ]
        )
        assert rc == 1
        witness = json.loads(out.read_text())
        assert witness["concept"] == "BSE"
        move = S.witness_from_json(out.read_text())
        inst = S.instance_from_json(workdir["instance"].read_text())
        net = S.network_from_json(workdir["broken"].read_text(), inst.n)
        assert L.is_improving(inst, net, move)

    def test_budget_exhaustion_exits_two(self, workdir):
        rc = main(
            [
                "check",
                str(workdir["instance"]),
                str(workdir["stable"]),
                "--concept",
                "bse",
                "--max-moves",
                "1",
            ]
        )
        assert rc == 2

    def test_missing_file_exits_three(self, workdir):
        rc = main(["check", "/nonexistent.json", str(workdir["stable"]), "--concept", "ps"])
        assert rc == 3

    def test_bad_flag_exits_three(self, workdir):
        rc = main(["check", str(workdir["instance"]), str(workdir["stable"]), "--concept", "nope"])
        assert rc == 3

    def test_inexact_mode_runs(self, workdir):
        rc = main(
            [
                "check",
                str(workdir["instance"]),
                str(workdir["stable"]),
                "--concept",
                "ps",
                "--inexact",
            ]
        )
        assert rc == 0


class TestOpt:
    def test_writes_proven_optimum(self, workdir, tmp_path):
        out = tmp_path / "opt.json"
        rc = main(["opt", str(workdir["instance"]), "--out", str(out)])
        assert rc == 0
        data = json.loads(out.read_text())
        assert data["proven"] is True
        assert L.parse_rational(data["cost"]) == F(10)

    def test_exact_flag_respects_node_limit(self, workdir):
        rc = main(["opt", str(workdir["instance"]), "--exact", "--node-limit", "3"])
        assert rc == 3  # too large for an exact run is an input error


class TestGenAndVerify:
    def test_gen_then_verify_roundtrip(self, tmp_path, capsys):
        bundle = tmp_path / "two_tier.json"
        rc = main(
            ["gen", "two_tier_star", "--n", "5", "--alpha", "16", "--variant", "bne", "--out", str(bundle)]
        )
        assert rc == 0
        rc = main(["verify-fixture", str(bundle)])
        assert rc == 0
        out = capsys.readouterr().out
        assert "PASS" in out and "FAIL" not in out

    def test_gen_rejects_bad_alpha(self, tmp_path):
        rc = main(["gen", "cluster_path", "--n", "6", "--alpha", "35"])
        assert rc == 3

    def test_verify_flags_corrupted_bundle(self, workdir, capsys):
        data = json.loads(workdir["fixture"].read_text())
        data["stable_net"]["edges"] = data["stable_net"]["edges"][1:]
        bad = workdir["dir"] / "bad.json"
        bad.write_text(json.dumps(data))
        rc = main(["verify-fixture", str(bad)])
        assert rc == 1  # stability check failed, witness available
        assert "FAIL" in capsys.readouterr().out


class TestDynamics:
    def test_trace_written(self, workdir, tmp_path, capsys):
        out = tmp_path / "trace.json"
        rc = main(
            [
                "dynamics",
                str(workdir["instance"]),
                "--from",
                str(workdir["broken"]),
                "--concept",
                "ps",
                "--max-steps",
                "50",
                "--out",
                str(out),
            ]
        )
        assert rc == 0
        data = json.loads(out.read_text())
        assert data["outcome"] in ("equilibrium", "cycle", "budget-exhausted")
        assert "outcome:" in capsys.readouterr().out


class TestPoa:
    def test_reports_ratio(self, workdir, capsys):
        rc = main(["poa", str(workdir["instance"]), "--concept", "bse"])
        assert rc == 0
        out = capsys.readouterr().out
        assert "ratio=3" in out
        assert "complete=True" in out


class TestSweep:
    def test_sweep_runs_and_writes_jsonl(self, tmp_path, capsys):
        cfg = {
            "family": "zero_cluster",
            "concept": "bse",
            "n_values": [4],
            "alphas": ["1", "2"],
        }
        cfg_path = tmp_path / "cfg.json"
        cfg_path.write_text(json.dumps(cfg))
        out = tmp_path / "rows.jsonl"
        rc = main(["sweep", str(cfg_path), "--out", str(out)])
        assert rc == 0
        lines = out.read_text().strip().splitlines()
        assert len(lines) == 2
        row = json.loads(lines[0])
        assert row["ratio"] == "2"
        assert "zero_cluster" in capsys.readouterr().out

    def test_malformed_config_exits_three(self, tmp_path):
        cfg_path = tmp_path / "cfg.json"
        cfg_path.write_text("{}")
        assert main(["sweep", str(cfg_path)]) == 3


class TestProps:
    def test_small_props_run_passes(self, capsys):
        rc = main(
            [
                "props",
                "--seed",
                "3",
                "--removal-trials",
                "60",
                "--tree-trials",
                "20",
                "--ratio-trials",
                "8",
                "--edge-ratio-trials",
                "8",
                "--stable-trials",
                "5",
                "--identity-trials",
                "10",
            ]
        )
        assert rc == 0
        out = capsys.readouterr().out
        assert out.count("PASS") == 6
