"""Tests for configuration, orchestration, manifests, and the CLI."""
import json
from pathlib import Path

import pytest

from randpoly.cli import main as cli_main
from randpoly.config import ConfigError, ExperimentConfig
from randpoly.experiment import PRESETS, preset_config, run, verify


def tiny_raw(**overrides):
    raw = {
        "name": "tiny",
        "body": {"kind": "ball", "dim": 2, "radius": 1.0},
        "t_grid": [40.0, 80.0, 160.0],
        "n_reps": 40,
        "functionals": [{"type": "multivariate"}, {"type": "oracle"}],
        "seed": 3,
    }
    raw.update(overrides)
    return raw


class TestConfigValidation:
    def test_minimal_ok(self):
        cfg = ExperimentConfig.from_dict(tiny_raw())
        assert cfg.t_grid == (40.0, 80.0, 160.0)
        assert cfg.n_reps == (40, 40, 40)

    def test_missing_key(self):
        raw = tiny_raw()
        del raw["body"]
        with pytest.raises(ConfigError, match="body"):
            ExperimentConfig.from_dict(raw)

    def test_t_grid_must_increase(self):
        with pytest.raises(ConfigError, match="t_grid"):
            ExperimentConfig.from_dict(tiny_raw(t_grid=[100.0, 50.0]))

    def test_n_reps_minimum(self):
        with pytest.raises(ConfigError, match="n_reps"):
            ExperimentConfig.from_dict(tiny_raw(n_reps=1))

    def test_n_reps_per_t(self):
        cfg = ExperimentConfig.from_dict(tiny_raw(n_reps=[10, 20, 30]))
        assert cfg.n_reps == (10, 20, 30)
        with pytest.raises(ConfigError, match="n_reps"):
            ExperimentConfig.from_dict(tiny_raw(n_reps=[10, 20]))

    def test_nonsmooth_body_needs_flag(self):
        raw = tiny_raw(body={"kind": "cube", "dim": 2, "side": 1.0})
        with pytest.raises(ConfigError, match="smooth"):
            ExperimentConfig.from_dict(raw)
        raw["allow_nonsmooth"] = True
        assert ExperimentConfig.from_dict(raw).allow_nonsmooth

    def test_valuation_gate_enforced(self):
        raw = tiny_raw(functionals=[
            {"type": "valuation", "label": "mixed", "coeffs": [0, 1, -1]}
        ])
        with pytest.raises(ConfigError, match="gate"):
            ExperimentConfig.from_dict(raw)
        raw["allow_non_clt"] = True
        with pytest.warns(UserWarning, match="coefficient gate"):
            ExperimentConfig.from_dict(raw)  # allowed, but flagged

    def test_exact_mode_needs_low_dimension(self):
        raw = tiny_raw(body={"kind": "ball", "dim": 4, "radius": 1.0})
        with pytest.raises(ConfigError, match="mode"):
            ExperimentConfig.from_dict(raw)
        raw["mode"] = "mc"
        ExperimentConfig.from_dict(raw)

    def test_malliavin_t_must_be_on_grid(self):
        raw = tiny_raw(malliavin={"t": 99.0, "functional": "V_2"})
        with pytest.raises(ConfigError, match="t_grid"):
            ExperimentConfig.from_dict(raw)

    def test_file_errors_carry_path(self, tmp_path):
        p = tmp_path / "bad.json"
        p.write_text("{not json")
        with pytest.raises(ConfigError, match="bad.json"):
            ExperimentConfig.from_file(p)
        p2 = tmp_path / "invalid.json"
        p2.write_text(json.dumps(tiny_raw(t_grid=[2.0, 1.0])))
        with pytest.raises(ConfigError, match="invalid.json:t_grid"):
            ExperimentConfig.from_file(p2)


class TestRunAndManifest:
    def test_run_writes_everything(self, tmp_path):
        manifest = run(tiny_raw(), outdir=tmp_path)
        assert manifest.status == "completed"
        out = tmp_path / "tiny"
        assert (out / "manifest.json").exists()
        assert (out / "report.json").exists()
        assert (out / "plots" / "variance_vs_t.csv").exists()
        assert (out / "plots" / "w1_vs_t.csv").exists()
        assert len(manifest.tables) == 3
        for entry in manifest.tables:
            assert Path(entry["csv"]).exists()
            assert Path(entry["meta"]).exists()

    def test_rate_fits_emitted(self, tmp_path):
        run(tiny_raw(), outdir=tmp_path)
        report = json.loads((tmp_path / "tiny" / "report.json").read_text())
        assert "rate_fits" in report
        assert "slope" in report["rate_fits"]["V_2"]

    def test_rerun_identical_tables(self, tmp_path):
        m1 = run(tiny_raw(), outdir=tmp_path / "a")
        m2 = run(tiny_raw(), outdir=tmp_path / "b", workers=4)
        for e1, e2 in zip(m1.tables, m2.tables):
            assert Path(e1["csv"]).read_bytes() == Path(e2["csv"]).read_bytes()
            assert e1["sha256"] == e2["sha256"]

    def test_verify_clean_run(self, tmp_path):
        run(tiny_raw(), outdir=tmp_path)
        result = verify(tmp_path / "tiny" / "manifest.json", quiet=True)
        assert result["ok"]

    def test_verify_detects_tampering(self, tmp_path):
        run(tiny_raw(), outdir=tmp_path)
        csv = tmp_path / "tiny" / "table_t0.csv"
        lines = csv.read_text().splitlines()
        fields = lines[1].split(",")
        fields[1] = "9.9"
        lines[1] = ",".join(fields)
        csv.write_text("\n".join(lines) + "\n")
        result = verify(tmp_path / "tiny" / "manifest.json", quiet=True)
        assert not result["ok"]
        assert any("checksum" in c["name"] and not c["passed"]
                   for c in result["checks"])

    def test_failed_run_preserves_manifest(self, tmp_path, monkeypatch):
        import randpoly.experiment as exp

        def boom(*args, **kwargs):
            raise RuntimeError("injected failure")

        monkeypatch.setattr(exp, "_write_plot_data", boom)
        with pytest.raises(RuntimeError, match="injected"):
            run(tiny_raw(), outdir=tmp_path)
        manifest = json.loads(
            (tmp_path / "tiny" / "manifest.json").read_text()
        )
        assert manifest["status"] == "failed"
        assert "injected" in manifest["error"]

    def test_malliavin_block_report(self, tmp_path):
        raw = tiny_raw(
            t_grid=[60.0], n_reps=300,
            malliavin={"t": 60.0, "functional": "V_2", "n_outer": 60,
                       "n_inner": 4, "sampling": "boundary_shell", "c": 2.0},
        )
        run(raw, outdir=tmp_path)
        report = json.loads((tmp_path / "tiny" / "report.json").read_text())
        ms = report["malliavin_stein"]
        assert ms["bound"] >= 0 and "tau3" in ms and "se" in ms


class TestPresets:
    def test_catalogue_nonempty(self):
        assert "smoke" in PRESETS and "theorem1" in PRESETS

    def test_all_preset_configs_valid(self):
        for name in PRESETS:
            cfg = preset_config(name)
            assert cfg.name == name

    def test_unknown_preset(self):
        with pytest.raises(ConfigError):
            preset_config("nope")

    def test_smoke_preset_assertions_pass(self, tmp_path):
        run("smoke", outdir=tmp_path)
        result = verify(tmp_path / "smoke" / "manifest.json", quiet=True)
        assert result["ok"], result["checks"]


class TestCLI:
    def test_presets_list(self, capsys):
        assert cli_main(["presets", "list"]) == 0
        out = capsys.readouterr().out
        assert "smoke" in out and "theorem1" in out

    def test_run_and_verify_round_trip(self, tmp_path, capsys):
        cfg_path = tmp_path / "cfg.json"
        cfg_path.write_text(json.dumps(tiny_raw(t_grid=[30.0], n_reps=20)))
        assert cli_main(["run", str(cfg_path), "--out", str(tmp_path)]) == 0
        manifest = tmp_path / "tiny" / "manifest.json"
        assert cli_main(["verify", str(manifest)]) == 0
        out = capsys.readouterr().out
        assert "[PASS]" in out

    def test_verify_exit_code_on_failure(self, tmp_path, capsys):
        cfg_path = tmp_path / "cfg.json"
        cfg_path.write_text(json.dumps(tiny_raw(t_grid=[30.0], n_reps=20)))
        cli_main(["run", str(cfg_path), "--out", str(tmp_path)])
        csv = tmp_path / "tiny" / "table_t0.csv"
        body = csv.read_text().replace(",", ",", 1)
        csv.write_text(body + "0,0,0,0,0,0,0\n")  # appended garbage row
        assert cli_main(["verify", str(tmp_path / "tiny" / "manifest.json")]) == 2

    def test_bad_config_exit_code(self, tmp_path, capsys):
        cfg_path = tmp_path / "cfg.json"
        cfg_path.write_text(json.dumps(tiny_raw(t_grid=[5.0, 1.0])))
        assert cli_main(["run", str(cfg_path)]) == 1
        assert "configuration error" in capsys.readouterr().err

    def test_taus_command(self, tmp_path, capsys):
        cfg_path = tmp_path / "cfg.json"
        cfg_path.write_text(json.dumps(tiny_raw(
            t_grid=[60.0], n_reps=200,
            malliavin={"t": 60.0, "functional": "V_2", "n_outer": 40,
                       "n_inner": 4, "sampling": "plain"},
        )))
        out_path = tmp_path / "taus.json"
        assert cli_main(["taus", str(cfg_path), "--out", str(out_path)]) == 0
        blob = json.loads(out_path.read_text())
        assert "malliavin_stein" in blob
        assert blob["malliavin_stein"]["tau3"] >= 0.0


class TestEnvOutdir:
    def test_env_var_respected(self, tmp_path, monkeypatch):
        monkeypatch.setenv("RANDPOLY_OUTDIR", str(tmp_path / "envout"))
        raw = tiny_raw(t_grid=[30.0], n_reps=10)
        run(raw)
        assert (tmp_path / "envout" / "tiny" / "manifest.json").exists()
