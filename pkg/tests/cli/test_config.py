from pathlib import Path

import pytest

from sandwich_sde.cli.commands import resolve_options
from sandwich_sde.cli.config import (
    ConvergenceStudyConfig,
    RunConfig,
    load_run_config,
    parse_run_config,
)
from sandwich_sde.common.errors import ConfigError
from sandwich_sde.drift import Sidedness
from sandwich_sde.noise import NoiseKind

CONFIG_DIR = Path(__file__).resolve().parents[2] / "configs"


class TestParseRunConfig:
    def test_defaults(self):
        config = parse_run_config({})
        assert config.paths == 1
        assert config.scheme.level == 20
        assert config.noise.kind == NoiseKind.FBM
        assert config.study is None

    def test_unknown_key_names_path(self):
        with pytest.raises(ConfigError, match=r"scheme\.stepz"):
            parse_run_config({"scheme": {"stepz": 128}}, "run.toml")

    def test_source_in_message(self):
        with pytest.raises(ConfigError, match="^run.toml: "):
            parse_run_config({"paths": 0}, "run.toml")

    def test_unknown_study_kind(self):
        with pytest.raises(ConfigError, match="study"):
            parse_run_config({"study": {"kind": "bootstrap"}})

    def test_unknown_preset(self):
        with pytest.raises(ConfigError, match=r"model\.preset\.name"):
            parse_run_config({"model": {"family": "preset", "name": "simulation_four"}})

    def test_holder_exponents(self):
        with pytest.raises(ConfigError, match="order"):
            parse_run_config({"holder": {"order": 0.8, "p": 4.0}})

    def test_moment_orders_positive(self):
        with pytest.raises(ConfigError, match="orders"):
            parse_run_config({"study": {"kind": "moments", "orders": [1.0, -2.0]}})

    def test_study_variant(self):
        config = parse_run_config({"study": {"kind": "convergence", "levels": [5, 10, 20], "steps": [16, 32, 64]}})
        assert isinstance(config.study, ConvergenceStudyConfig)
        assert config.study.min_order == 0.5


class TestBuild:
    def test_default_order_below_noise_limit(self):
        config = parse_run_config({"model": {"family": "preset", "name": "simulation_one"}, "noise": {"hurst": 0.7}})
        assert config.holder_order() == pytest.approx(0.65)
        assert config.build_model().order == pytest.approx(0.65)

    def test_declared_order_wins(self):
        config = parse_run_config({"model": {"family": "cir_cev", "kappa": 1.5, "theta": 0.5, "alpha": 0.5, "order": 0.69}})
        model = config.build_model()
        assert model.order == 0.69
        assert model.c == pytest.approx(1.0)

    def test_two_sided_bounds(self):
        config = parse_run_config(
            {
                "model": {
                    "family": "two_sided_power",
                    "a1": 1.0,
                    "a2": 1.0,
                    "gamma": 4.0,
                    "lower": {"kind": "cosine", "offset": 0.0, "amplitude": 1.0, "frequency": 5.0},
                    "upper": {"kind": "cosine", "offset": 3.0, "amplitude": 1.0, "frequency": 5.0},
                }
            }
        )
        model = config.build_model()
        assert model.sidedness == Sidedness.TWO_SIDED
        assert model.y_star == pytest.approx(1.35)

    def test_custom_model(self):
        config = parse_run_config({"model": {"family": "custom", "a1": 1.0, "gamma": 3.0, "c": 1.0, "y_star": 1.0}})
        model = config.build_model()
        assert (model.c, model.gamma, model.y_star) == (1.0, 3.0, 1.0)

    def test_model_required(self):
        with pytest.raises(ConfigError, match="model"):
            RunConfig().build_model()

    def test_grid(self):
        grid = parse_run_config({"scheme": {"steps": 8, "horizon": 2.0}}).build_grid()
        assert (grid.steps, grid.horizon) == (8, 2.0)


class TestLoadRunConfig:
    @pytest.mark.parametrize("path", sorted(CONFIG_DIR.glob("*.toml")), ids=lambda p: p.stem)
    def test_shipped_configs_parse(self, path):
        config = load_run_config(path)
        assert config.model is not None

    def test_missing_file(self, tmp_path):
        with pytest.raises(ConfigError, match="cannot read"):
            load_run_config(tmp_path / "absent.toml")

    def test_invalid_toml(self, tmp_path):
        path = tmp_path / "broken.toml"
        path.write_text("[scheme\nsteps = 3\n")
        with pytest.raises(ConfigError, match="broken.toml"):
            load_run_config(path)


class TestResolveOptions:
    def test_flags_override_config(self):
        config = parse_run_config({"seed": 5, "paths": 3, "output": "cfg-out", "workers": 4})
        options = resolve_options(config, seed=9, paths=7, out="flag-out", workers=2)
        assert (options.seed, options.paths, options.out, options.workers) == (9, 7, "flag-out", 2)

    def test_config_then_settings(self, tmp_path):
        options = resolve_options(parse_run_config({"paths": 3}))
        assert options.paths == 3
        assert options.out == str(tmp_path / "runs")
        assert options.workers == 1
        assert options.seed == 0

    @pytest.mark.parametrize("kwargs", [{"paths": 0}, {"workers": 0}, {"seed": -1}])
    def test_invalid_overrides(self, kwargs):
        with pytest.raises(ConfigError):
            resolve_options(RunConfig(), **kwargs)
