#!/usr/bin/env python3
"""
Desk-scale checks for the sandwiched SDE simulator

Runs the Monte Carlo acceptance checks with subcommands for each claim. Every command
prints a short summary and exits 0 when the check passes, 1 otherwise.

Usage:
    python scripts/desk_checks.py confinement --paths 200
    python scripts/desk_checks.py convergence --workers 8
    python scripts/desk_checks.py tail
    python scripts/desk_checks.py certificate
    python scripts/desk_checks.py monotone
    python scripts/desk_checks.py generator
    python scripts/desk_checks.py transform
    python scripts/desk_checks.py determinism --workers 4
"""

import argparse
import sys
import time

import numpy as np
from scipy import stats

from sandwich_sde.analysis import certificate_study, convergence_study, tail_exponent_study, young_residual
from sandwich_sde.common.log_config import configure_logging
from sandwich_sde.core import RngStream, TimeGrid, format_path_csv
from sandwich_sde.drift import simulation_one_model, simulation_three_model, simulation_two_model
from sandwich_sde.noise import NoiseSpec, sample_noise, sample_noise_paths
from sandwich_sde.noise.fbm import fbm_covariance_matrix
from sandwich_sde.scheme import approximating_sequence, euler_semiheuristic, simulate_paths, truncate_drift

FCIR_NOISE = NoiseSpec("fbm", hurst=0.7, scale=0.5)
ORDER = 0.65


def _verdict(passed: bool) -> int:
    print("\n✅ Check passed" if passed else "\n❌ Check failed")
    return 0 if passed else 1


def cmd_confinement(args):
    """Share of paths that never leave their band, for the three published models."""
    print("🔒 Confinement")
    grid = TimeGrid(1.0, args.steps)
    cases = [
        ("fCIR", simulation_one_model(ORDER), FCIR_NOISE, 1.0, True),
        ("cosine band", simulation_two_model(ORDER), NoiseSpec("fbm", hurst=0.7, scale=3.0), 2.5, True),
        ("shrinking band", simulation_three_model(ORDER), NoiseSpec("fbm", hurst=0.7), 0.0, False),
    ]
    passed = True
    for label, model, spec, y0, strict in cases:
        start = time.perf_counter()
        runs = simulate_paths(model, spec, grid, 20, y0, args.seed, args.paths, args.workers, strict=strict)
        inside = sum(not run.result.exited for run in runs) / len(runs)
        ok = inside >= 0.995
        passed &= ok
        print(f"  {'✓' if ok else '✗'} {label}: {inside:.1%} inside ({time.perf_counter() - start:.1f}s)")
    return _verdict(passed)


def cmd_convergence(args):
    """Mean sup error against a fine reference run on the same noise."""
    print("📉 Convergence order")
    report = convergence_study(
        simulation_one_model(ORDER),
        FCIR_NOISE,
        [5, 10, 20],
        [2**9, 2**10, 2**11, 2**12],
        args.paths,
        args.seed,
        1.0,
        reference_steps=2**14,
        workers=args.workers,
    )
    for steps, error in zip(report.parameters["steps"], report.metrics["error_by_steps"]):
        print(f"    N={steps:6d}  error={error:.4e}")
    print(f"  Order: {report.metrics['order']}")
    return _verdict(report.passed)


def cmd_tail(args):
    """Decay of P(min distance to the bound ≤ ε)."""
    print("📐 Tail exponent")
    report = tail_exponent_study(
        simulation_one_model(ORDER),
        FCIR_NOISE,
        20,
        TimeGrid(1.0, args.steps),
        [0.02, 0.04, 0.08, 0.16],
        args.paths,
        args.seed,
        1.0,
        order=ORDER,
        p=40.0,
        workers=args.workers,
    )
    print(f"  Probabilities: {report.metrics['probabilities']}")
    print(f"  Expected exponent ≥ {report.expected:.3f}; fit: {report.fit}")
    if report.inconclusive:
        print("  ⚠️  Inconclusive: " + "; ".join(report.notes))
    return _verdict(report.passed)


def cmd_certificate(args):
    """Lower-bound certificate on fine scheme paths."""
    print("📜 Certificate soundness")
    report = certificate_study(
        simulation_one_model(ORDER),
        FCIR_NOISE,
        TimeGrid(1.0, args.steps),
        160,
        1.0,
        args.paths,
        args.seed,
        order=ORDER,
        workers=args.workers,
    )
    print(f"  Violation fraction: {report.metrics['violation_fraction']:.4%}")
    print(f"  Worst margin: {report.metrics['worst_margin']:.3e}")
    return _verdict(report.passed)


def cmd_monotone(args):
    """Y⁽ⁿ⁾ ≤ Y⁽²ⁿ⁾ up to 10·T/N on fixed noise paths."""
    print("📈 Monotone approximation")
    model = simulation_one_model(ORDER)
    grid = TimeGrid(1.0, args.steps)
    tolerance = 10.0 * grid.mesh
    hard = 0
    for i in range(args.paths):
        noise = sample_noise(FCIR_NOISE, grid, RngStream(args.seed, i))
        sequence = approximating_sequence(model, [20, 40, 80], noise, 1.0)
        for low, high in zip(sequence, sequence[1:]):
            hard += int(np.count_nonzero(low.values > high.values + tolerance))
    print(f"  Nodes beyond tolerance: {hard}")
    return _verdict(hard == 0)


def cmd_generator(args):
    """Empirical fBm covariance against the exact one, and Var(Z_t) = t^{2H} per node, on a 16-step grid."""
    print("🎲 fBm generator exactness")
    grid = TimeGrid(1.0, 16)
    passed = True
    for hurst in (0.3, 0.5, 0.7):
        paths = sample_noise_paths(NoiseSpec("fbm", hurst=hurst), grid, args.seed, range(args.samples))
        empirical = np.cov(paths[:, 1:], rowvar=False, bias=True)
        worst = float(np.max(np.abs(empirical - fbm_covariance_matrix(grid, hurst))))
        ok = worst <= 0.02
        passed &= ok
        print(f"  {'✓' if ok else '✗'} H={hurst}: max entry error {worst:.4f}")
        # χ² at 1% overall, split across the nodes
        statistic = np.sum(paths[:, 1:] ** 2, axis=0) / grid.nodes[1:] ** (2 * hurst)
        alpha = 0.01 / grid.steps
        low, high = stats.chi2.ppf([alpha / 2, 1 - alpha / 2], paths.shape[0])
        ok = bool(np.all((statistic > low) & (statistic < high)))
        passed &= ok
        print(f"  {'✓' if ok else '✗'} H={hurst}: variance χ² in [{statistic.min():.0f}, {statistic.max():.0f}]")
    return _verdict(passed)


def cmd_transform(args):
    """Residual of the transformed CEV equation under grid doubling."""
    print("🔁 Transform consistency")
    # On an Euler path the residual is Σ(ΔY)², whose noise part shrinks like 2^{2H−1} per
    # doubling: about 1.32 at H=0.7, under the 1.5 threshold; the default H=0.9 gives about 1.74.
    model = simulation_one_model(ORDER)
    spec = NoiseSpec("fbm", hurst=args.hurst, scale=0.5)
    means = []
    for steps in (2**10, 2**11, 2**12):
        grid = TimeGrid(1.0, steps)
        trunc = truncate_drift(model, 20)
        residuals = []
        for i in range(args.paths):
            noise = sample_noise(spec, grid, RngStream(args.seed, i))
            result = euler_semiheuristic(trunc, noise, 1.0)
            residuals.append(young_residual(result.path, noise, 1.5, 0.5, 0.5))
        means.append(float(np.mean(residuals)))
        print(f"    N={steps:5d}  mean residual={means[-1]:.4e}")
    factors = [a / b for a, b in zip(means, means[1:])]
    print(f"  Reduction factors: {[f'{f:.2f}' for f in factors]}")
    return _verdict(all(f >= 1.5 for f in factors))


def cmd_determinism(args):
    """Identical CSVs for one worker and for several."""
    print("🧮 Determinism across worker counts")
    model = simulation_one_model(ORDER)
    grid = TimeGrid(1.0, args.steps)
    outputs = []
    for workers in (1, args.workers):
        runs = simulate_paths(model, FCIR_NOISE, grid, 20, 1.0, args.seed, args.paths, workers)
        outputs.append([format_path_csv(run.result.path) for run in runs])
    identical = outputs[0] == outputs[1]
    print(f"  {'✓' if identical else '✗'} 1 vs {args.workers} workers: {'identical' if identical else 'different'}")
    return _verdict(identical)


def main():
    parser = argparse.ArgumentParser(description="Desk-scale checks for sandwich-sde")
    parser.add_argument("--version", action="version", version="0.1.0")
    parser.add_argument("--seed", type=int, default=2024, help="Master seed")
    parser.add_argument("--workers", type=int, default=1, help="Worker processes")

    subparsers = parser.add_subparsers(dest="command", help="Available commands")

    confinement = subparsers.add_parser("confinement", help="Paths stay inside their bounds")
    confinement.add_argument("--paths", type=int, default=200)
    confinement.add_argument("--steps", type=int, default=2**14)

    convergence = subparsers.add_parser("convergence", help="Convergence order in N")
    convergence.add_argument("--paths", type=int, default=50)

    tail = subparsers.add_parser("tail", help="Tail exponent near the bound")
    tail.add_argument("--paths", type=int, default=2000)
    tail.add_argument("--steps", type=int, default=2**12)

    certificate = subparsers.add_parser("certificate", help="Lower-bound certificate soundness")
    certificate.add_argument("--paths", type=int, default=100)
    certificate.add_argument("--steps", type=int, default=2**14)

    monotone = subparsers.add_parser("monotone", help="Monotone approximating sequence")
    monotone.add_argument("--paths", type=int, default=20)
    monotone.add_argument("--steps", type=int, default=2**12)

    generator = subparsers.add_parser("generator", help="fBm covariance and self-similarity")
    generator.add_argument("--samples", type=int, default=100_000)

    transform = subparsers.add_parser("transform", help="CEV transform residual")
    transform.add_argument("--paths", type=int, default=20)
    transform.add_argument("--hurst", type=float, default=0.9)

    determinism = subparsers.add_parser("determinism", help="Worker-count independence")
    determinism.add_argument("--paths", type=int, default=200)
    determinism.add_argument("--steps", type=int, default=2**14)

    args = parser.parse_args()

    if not args.command:
        parser.print_help()
        return 1

    configure_logging("WARNING")
    commands = {
        "confinement": cmd_confinement,
        "convergence": cmd_convergence,
        "tail": cmd_tail,
        "certificate": cmd_certificate,
        "monotone": cmd_monotone,
        "generator": cmd_generator,
        "transform": cmd_transform,
        "determinism": cmd_determinism,
    }
    return commands[args.command](args)


if __name__ == "__main__":
    sys.exit(main())
