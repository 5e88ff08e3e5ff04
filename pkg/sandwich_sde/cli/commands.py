"""
Subcommand implementations. Each one takes a validated ``RunConfig`` plus the resolved
command-line overrides, writes its artifacts through a ``PathStore`` and returns what
it wrote.
"""

import logging
import time
from dataclasses import dataclass
from typing import Optional

from sandwich_sde.analysis.certificates import certificate_study
from sandwich_sde.analysis.holder import HolderEstimate, estimate_holder
from sandwich_sde.analysis.report import StudyReport
from sandwich_sde.analysis.studies import convergence_study, moment_study, tail_exponent_study
from sandwich_sde.cli.config import (
    CertificateStudyConfig,
    ConvergenceStudyConfig,
    MomentsStudyConfig,
    RunConfig,
    TailStudyConfig,
)
import sandwich_sde.common.config as common_config
from sandwich_sde.common.errors import AssumptionViolationError, ConfigError
from sandwich_sde.common.fs import PathStore
from sandwich_sde.core.io import format_path_csv, read_path_csv
from sandwich_sde.drift.validation import AssumptionCheck, ValidationReport, validate_assumptions
from sandwich_sde.scheme.montecarlo import simulate_paths
from sandwich_sde.scheme.truncation import minimum_level

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class RunOptions:
    """Effective run options: command-line flag, then config file, then environment settings."""

    seed: int
    paths: int
    out: str
    workers: int


def resolve_options(
    config: RunConfig,
    seed: Optional[int] = None,
    paths: Optional[int] = None,
    out: Optional[str] = None,
    workers: Optional[int] = None,
) -> RunOptions:
    def pick(flag, configured, default):
        if flag is not None:
            return flag
        return configured if configured is not None else default

    options = RunOptions(
        seed=pick(seed, config.seed, common_config.settings.default_seed),
        paths=pick(paths, config.paths, 1),
        out=pick(out, config.output, common_config.settings.output_url),
        workers=pick(workers, config.workers, common_config.settings.workers),
    )
    if not (0 <= options.seed < 2**64):
        raise ConfigError(f"--seed: must be an unsigned 64-bit integer, got {options.seed}")
    if options.paths < 1:
        raise ConfigError(f"--paths: must be positive, got {options.paths}")
    if options.workers < 1:
        raise ConfigError(f"--workers: must be positive, got {options.workers}")
    return options


def cmd_simulate(config: RunConfig, options: RunOptions) -> dict:
    """
    Simulate ``options.paths`` scheme paths and write path_00000.csv, ... plus manifest.json
    (and noise_00000.csv, ... when ``write_noise`` is set).

    Returns:
        The manifest written.
    """
    model = config.build_model()
    spec = config.build_noise()
    grid = config.build_grid()
    scheme = config.scheme
    store = PathStore(options.out)

    start = time.perf_counter()
    runs = simulate_paths(
        model,
        spec,
        grid,
        scheme.level,
        scheme.initial,
        options.seed,
        options.paths,
        workers=options.workers,
        strict=scheme.strict_level,
        keep_noise=True,
    )
    elapsed = time.perf_counter() - start

    for run in runs:
        store.write_text(f"path_{run.index:05d}.csv", format_path_csv(run.result.path))
        if config.write_noise:
            store.write_text(f"noise_{run.index:05d}.csv", format_path_csv(run.noise))

    manifest = {
        "command": "simulate",
        "config": config.model_dump(mode="json"),
        "model": model.name,
        "seed": options.seed,
        "paths": options.paths,
        "level": scheme.level,
        "minimum_level": minimum_level(model, common_config.settings.delta_resolution),
        "steps": grid.steps,
        "horizon": grid.horizon,
        "initial": scheme.initial,
        "wall_time": elapsed,
        "crossings": sum(run.result.crossings for run in runs),
        "exited_paths": sum(run.result.exited for run in runs),
        "runs": [
            {
                "index": run.index,
                "file": f"path_{run.index:05d}.csv",
                "generator": run.noise.metadata.get("generator"),
                "fallback": run.noise.metadata.get("fallback", False),
                **run.result.summary(),
            }
            for run in runs
        ],
    }
    store.write_json("manifest.json", manifest)
    logger.info(
        f"Wrote {len(runs)} paths to {store.base_path} in {elapsed:.2f}s; {manifest['crossings']} bound crossings"
    )
    return manifest


def run_study(config: RunConfig, options: RunOptions) -> StudyReport:
    study = config.study
    if study is None:
        raise ConfigError("study: section is required for the study command")
    model = config.build_model()
    spec = config.build_noise()
    grid = config.build_grid()
    scheme = config.scheme
    common = dict(workers=options.workers, strict=scheme.strict_level)

    if isinstance(study, ConvergenceStudyConfig):
        return convergence_study(
            model,
            spec,
            study.levels,
            study.steps,
            options.paths,
            options.seed,
            scheme.initial,
            study.reference_steps,
            study.min_order,
            **common,
        )
    if isinstance(study, TailStudyConfig):
        return tail_exponent_study(
            model,
            spec,
            scheme.level,
            grid,
            study.eps,
            options.paths,
            options.seed,
            scheme.initial,
            study.order,
            study.p,
            **common,
        )
    if isinstance(study, MomentsStudyConfig):
        return moment_study(
            model, spec, grid, scheme.level, scheme.initial, options.paths, options.seed, study.orders, **common
        )
    if isinstance(study, CertificateStudyConfig):
        return certificate_study(
            model,
            spec,
            grid,
            scheme.level,
            scheme.initial,
            options.paths,
            options.seed,
            study.order,
            study.p,
            max_fraction=study.max_fraction,
            max_margin=study.max_margin,
            **common,
        )
    raise ConfigError(f"study.kind: unsupported study '{study.kind}'")


def cmd_study(config: RunConfig, options: RunOptions) -> StudyReport:
    """Run the configured study and write study.json."""
    start = time.perf_counter()
    report = run_study(config, options)
    report.parameters["wall_time"] = time.perf_counter() - start
    store = PathStore(options.out)
    written = store.write_json("study.json", report.to_dict())
    verdict = "inconclusive" if report.inconclusive else ("passed" if report.passed else "FAILED")
    logger.info(f"{report.kind} study {verdict}; report at {written}")
    return report


def cmd_validate(config: RunConfig, options: RunOptions) -> ValidationReport:
    """
    Check the model's structural assumptions and write validation.json.

    A model that its constructor already rejects is reported as a single failed check
    named after the violated assumption.
    """
    try:
        model = config.build_model()
    except AssumptionViolationError as e:
        logger.warning(f"Model rejected at construction: {e}")
        report = ValidationReport(config.model.family, "unknown", config.holder_order())
        report.checks.append(AssumptionCheck(e.assumption, False, float("inf"), None, str(e)))
    else:
        report = validate_assumptions(model, config.build_grid(), common_config.settings.validation_samples)
    PathStore(options.out).write_json("validation.json", report.to_dict())
    logger.info(f"Validation {'passed' if report.passed else 'failed: ' + ', '.join(report.failures)}")
    return report


def holder_summary(estimate: HolderEstimate, source: str) -> dict:
    return {
        "input": source,
        "order": estimate.order,
        "p": estimate.p,
        "grr": estimate.grr,
        "max_ratio": estimate.max_ratio,
        "argmax": estimate.argmax,
        "grr_consistent": estimate.grr_consistent,
        "adjusted": estimate.adjusted,
        "steps": estimate.grid.steps,
        "horizon": estimate.grid.horizon,
    }


def cmd_estimate_holder(
    source: str, order: float, p: float, options: RunOptions, config: Optional[RunConfig] = None
) -> dict:
    """
    Estimate the Hölder constants of the path in ``source`` and write holder.json.

    With a config that declares a model, the adjusted constant Λ̃ for that model and the
    configured initial value is included.
    """
    path = read_path_csv(source)
    model = None
    y0 = None
    if config is not None and config.model is not None:
        model = config.build_model()
        y0 = config.scheme.initial
        if not model.singular:
            model, y0 = None, None
    estimate = estimate_holder(path, order, p, model, y0)
    summary = holder_summary(estimate, source)
    PathStore(options.out).write_json("holder.json", summary)
    logger.info(f"Hölder constants at λ={order:g}: max ratio {estimate.max_ratio:.6g}, GRR {estimate.grr:.6g}")
    return summary
