import json

import pytest

from sandwich_sde.cli.app import EXIT_FAILURE, EXIT_OK, EXIT_USAGE, main

FCIR = """
[model]
family = "preset"
name = "simulation_one"

[noise]
kind = "fbm"
hurst = 0.7
scale = 0.5

[scheme]
level = 20
steps = 64
initial = 1.0
"""

LINEAR_STUDY = """
paths = 2

[model]
family = "linear"
slope = -1.0

[noise]
kind = "zero"

[scheme]
initial = 1.0

[study]
kind = "convergence"
levels = [1, 2, 3]
steps = [16, 32, 64]
reference_steps = 1024
min_order = {min_order}
"""


@pytest.fixture
def write_config(tmp_path):
    def write(text, name="run.toml"):
        path = tmp_path / name
        path.write_text(text)
        return str(path)

    return write


class TestUsage:
    def test_no_command(self):
        assert main([]) == EXIT_USAGE

    def test_version(self, capsys):
        assert main(["--version"]) == EXIT_OK
        assert "0.1.0" in capsys.readouterr().out

    def test_unknown_subcommand(self):
        assert main(["explode"]) == EXIT_USAGE

    def test_negative_seed(self, write_config):
        """Seeds are unsigned 64-bit integers; argparse rejects the flag."""
        assert main(["simulate", "--config", write_config(FCIR), "--seed", "-1"]) == EXIT_USAGE

    def test_missing_config(self, tmp_path):
        assert main(["simulate", "--config", str(tmp_path / "absent.toml")]) == EXIT_USAGE

    def test_unknown_key(self, write_config, capsys):
        """Unknown keys are usage errors naming the key path."""
        assert main(["simulate", "--config", write_config(FCIR + "stepz = 4\n")]) == EXIT_USAGE
        assert "scheme.stepz" in capsys.readouterr().err

    def test_unknown_study_kind(self, write_config):
        config = write_config(FCIR + '\n[study]\nkind = "bootstrap"\n')
        assert main(["study", "--config", config]) == EXIT_USAGE

    def test_study_section_required(self, write_config):
        assert main(["study", "--config", write_config(FCIR)]) == EXIT_USAGE

    def test_level_below_minimum(self, write_config, tmp_path):
        """The shrinking band needs strict_level = false at n=20."""
        config = write_config(FCIR.replace("simulation_one", "simulation_three").replace("initial = 1.0", "initial = 0.0"))
        assert main(["simulate", "--config", config, "--out", str(tmp_path / "out")]) == EXIT_USAGE


class TestSimulate:
    def test_writes_paths_and_manifest(self, write_config, tmp_path):
        """One CSV per path plus a manifest, indices in order."""
        out = tmp_path / "sim"
        assert main(["simulate", "--config", write_config(FCIR), "--paths", "3", "--seed", "7", "--out", str(out)]) == 0
        assert sorted(p.name for p in out.iterdir()) == ["manifest.json", "path_00000.csv", "path_00001.csv", "path_00002.csv"]
        assert (out / "path_00000.csv").read_text().startswith("t,value\n0,1\n")
        manifest = json.loads((out / "manifest.json").read_text())
        assert manifest["paths"] == 3
        assert manifest["seed"] == 7
        assert manifest["minimum_level"] == 1
        assert [run["index"] for run in manifest["runs"]] == [0, 1, 2]
        assert manifest["runs"][0]["generator"] == "circulant"

    def test_default_output_from_settings(self, write_config, tmp_path):
        assert main(["simulate", "--config", write_config(FCIR)]) == 0
        assert (tmp_path / "runs" / "path_00000.csv").exists()

    def test_noise_files(self, write_config, tmp_path):
        out = tmp_path / "sim"
        assert main(["simulate", "--config", write_config("write_noise = true\n" + FCIR), "--out", str(out)]) == 0
        assert (out / "noise_00000.csv").read_text().startswith("t,value\n0,0\n")

    def test_identical_for_any_worker_count(self, write_config, tmp_path):
        """Path CSVs are byte-identical for one worker and for two."""
        config = write_config(FCIR)
        for workers in ("1", "2"):
            args = ["simulate", "--config", config, "--paths", "4", "--workers", workers, "--out", str(tmp_path / workers)]
            assert main(args) == 0
        for index in range(4):
            name = f"path_{index:05d}.csv"
            assert (tmp_path / "1" / name).read_bytes() == (tmp_path / "2" / name).read_bytes()


class TestStudy:
    def test_passing_study(self, write_config, tmp_path):
        out = tmp_path / "study"
        assert main(["study", "--config", write_config(LINEAR_STUDY.format(min_order=0.5)), "--out", str(out)]) == 0
        report = json.loads((out / "study.json").read_text())
        assert report["kind"] == "convergence"
        assert report["passed"] is True
        assert report["metrics"]["order"] == pytest.approx(1.0, abs=0.1)
        assert "wall_time" in report["parameters"]

    def test_failing_study(self, write_config, tmp_path):
        """A study that misses its expected order exits 1 but still writes its report."""
        out = tmp_path / "study"
        assert main(["study", "--config", write_config(LINEAR_STUDY.format(min_order=5.0)), "--out", str(out)]) == EXIT_FAILURE
        assert json.loads((out / "study.json").read_text())["passed"] is False


class TestValidate:
    def test_passes(self, write_config, tmp_path):
        out = tmp_path / "validate"
        assert main(["validate", "--config", write_config(FCIR), "--out", str(out)]) == 0
        assert json.loads((out / "validation.json").read_text())["passed"] is True

    def test_exponent_too_small(self, write_config, tmp_path):
        """A model its constructor rejects is reported as one failed check."""
        config = write_config(FCIR.replace('name = "simulation_one"', 'name = "simulation_one"\norder = 0.3'))
        out = tmp_path / "validate"
        assert main(["validate", "--config", config, "--out", str(out)]) == EXIT_FAILURE
        assert json.loads((out / "validation.json").read_text())["failures"] == ["A4"]

    def test_crossing_bounds(self, write_config, tmp_path):
        config = write_config(
            """
[model]
family = "two_sided_power"
a1 = 1.0
a2 = 1.0
gamma = 2.0
lower = { kind = "cosine", offset = 0.0, amplitude = 1.0, frequency = 5.0 }
upper = { kind = "constant", value = 0.5 }
"""
        )
        out = tmp_path / "validate"
        assert main(["validate", "--config", config, "--out", str(out)]) == EXIT_FAILURE
        assert json.loads((out / "validation.json").read_text())["failures"] == ["B-domain"]


class TestEstimateHolder:
    def test_from_simulated_noise(self, write_config, tmp_path):
        config = write_config("write_noise = true\n" + FCIR)
        assert main(["simulate", "--config", config, "--out", str(tmp_path / "sim")]) == 0
        noise = str(tmp_path / "sim" / "noise_00000.csv")
        out = tmp_path / "holder"
        assert main(["estimate-holder", "--input", noise, "--order", "0.6", "--p", "5", "--out", str(out)]) == 0
        summary = json.loads((out / "holder.json").read_text())
        assert summary["steps"] == 64
        assert summary["grr_consistent"] is True
        assert summary["adjusted"] is None

    def test_adjusted_with_model(self, write_config, tmp_path):
        """With a model in the config the adjusted constant is reported."""
        config = write_config("write_noise = true\n" + FCIR)
        assert main(["simulate", "--config", config, "--out", str(tmp_path / "sim")]) == 0
        noise = str(tmp_path / "sim" / "noise_00000.csv")
        out = tmp_path / "holder"
        args = ["estimate-holder", "--config", config, "--input", noise, "--order", "0.65", "--out", str(out)]
        assert main(args) == 0
        summary = json.loads((out / "holder.json").read_text())
        assert summary["adjusted"] >= summary["max_ratio"]

    def test_needs_order(self, tmp_path):
        assert main(["estimate-holder", "--input", str(tmp_path / "x.csv")]) == EXIT_USAGE

    def test_invalid_order(self, write_config, tmp_path):
        path = tmp_path / "line.csv"
        path.write_text("t,value\n0,0\n0.5,1\n1,2\n")
        assert main(["estimate-holder", "--input", str(path), "--order", "0.9", "--p", "4"]) == EXIT_USAGE

    def test_unreadable_path_file(self, tmp_path):
        path = tmp_path / "bad.csv"
        path.write_text("t,value\n0,0\n1,x\n")
        assert main(["estimate-holder", "--input", str(path), "--order", "0.5"]) == EXIT_FAILURE
