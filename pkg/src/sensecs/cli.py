"""Command-line front end: run sweeps, single trials, and the validation suite.

Exit codes: 0 success, 1 config/usage error, 2 runtime or numerical error,
3 validation failure.
"""

import argparse
import os
import sys

import numpy as np

from .config import ConfigError, load_config, parse_values_spec
from .evaluation import SCHEMES, run_sweep, run_trial
from .validation import run_validation

EXIT_OK = 0
EXIT_CONFIG = 1
EXIT_RUNTIME = 2
EXIT_VALIDATION = 3


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # argparse's default exits with code 2
        raise _UsageError(message)


def _default_workers() -> int:
    env = os.environ.get("SENSECS_WORKERS", "")
    try:
        return max(1, int(env)) if env else 1
    except ValueError:
        return 1


def build_parser() -> _Parser:
    parser = _Parser(prog="sensecs", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", default=None, help="YAML config file (omit for defaults)")
    common.add_argument(
        "-O", "--override", action="append", default=[], metavar="KEY=VALUE",
        help="dotted-path config override, e.g. scene.m_total=8",
    )
    common.add_argument("--seed", type=int, default=None, help="base seed override")

    p_sweep = sub.add_parser("sweep", parents=[common], help="run a Monte Carlo sweep, write CSV")
    p_sweep.add_argument("--var", default=None, help="sweep variable (snr_db, feedback_bits, pilot_len, block_len)")
    p_sweep.add_argument("--values", default=None, help="start:stop:step (stop inclusive) or comma list")
    p_sweep.add_argument("--trials", type=int, default=None, help="trials per sweep point")
    p_sweep.add_argument("--out", default=None, help="output CSV path")
    p_sweep.add_argument("--workers", type=int, default=None, help="parallel worker processes")

    p_trial = sub.add_parser("trial", parents=[common], help="run one coherence block, print the rates")
    p_trial.add_argument("--dump-scene", default=None, metavar="PATH", help="write the drawn scene as text")
    p_trial.add_argument("--dump-spectrum", default=None, metavar="PATH",
                         help="write the MUSIC spectrum as CSV (music mode only)")

    sub.add_parser("validate", parents=[common], help="run the fast invariant suite")
    return parser


def _load(args):
    trial_cfg, sweep_spec = load_config(args.config, args.override)
    if args.seed is not None:
        from dataclasses import replace

        trial_cfg = replace(trial_cfg, seed=args.seed)
    return trial_cfg, sweep_spec


def cmd_sweep(args) -> int:
    trial_cfg, spec = _load(args)
    variable = args.var or spec.variable
    values = parse_values_spec(args.values) if args.values else list(spec.values)
    trials = args.trials if args.trials is not None else spec.trials
    out = args.out or spec.out
    workers = args.workers if args.workers is not None else _default_workers()
    if trials < 1:
        raise ConfigError("trials must be >= 1")

    result = run_sweep(trial_cfg, variable, values, trials, workers=workers, keep_samples=False)
    result.write_csv(out)

    print(f"sweep {variable} over {len(values)} points x {trials} trials -> {out}")
    header = f"{variable:>14s} " + " ".join(f"{s:>18s}" for s in SCHEMES)
    print(header)
    for i, value in enumerate(result.values):
        cells = " ".join(f"{result.means[i, j]:>18.4f}" for j in range(len(SCHEMES)))
        print(f"{value:>14.6g} {cells}")
    if result.n_errors:
        print(f"warning: {result.n_errors} trial(s) failed", file=sys.stderr)
        for msg in result.error_messages:
            print(f"  {msg}", file=sys.stderr)
    return EXIT_OK


def cmd_trial(args) -> int:
    trial_cfg, _ = _load(args)
    result = run_trial(trial_cfg)
    for scheme, rate in result.rates().items():
        print(f"{scheme:>18s}: {rate:.6f} bits/s/Hz")
    d = result.diagnostics
    print(f"rank J={d.rank_j}  angle RMSE={d.angle_rmse_deg:.4f} deg  padded_peaks={d.padded_peaks}")
    print(f"support sizes: {d.sparsity}")

    if args.dump_scene:
        rng = np.random.default_rng(trial_cfg.seed)
        from .scene import draw_scene

        scene = draw_scene(trial_cfg.scene, trial_cfg.array, rng)
        with open(args.dump_scene, "w") as f:
            f.write(scene.to_record_text())
        print(f"scene written to {args.dump_scene}")
    if args.dump_spectrum:
        if trial_cfg.sensing_mode != "music":
            raise ConfigError("--dump-spectrum requires sensing_mode=music")
        from .evaluation import auto_sensing_noise, calibrate_power
        from .feedback import draw_pilots
        from .scene import draw_scene
        from .sensing import music_spectrum_2d, sample_covariance, simulate_echo

        rng = np.random.default_rng(trial_cfg.seed)
        scene = draw_scene(trial_cfg.scene, trial_cfg.array, rng)
        power = calibrate_power(trial_cfg.snr_db, scene.channel, trial_cfg.noise_power)
        pilots = draw_pilots(trial_cfg.pilot_len, trial_cfg.array.n_elements, power, rng)
        sigma_s2 = (trial_cfg.sensing_sigma2 if trial_cfg.sensing_sigma2 is not None
                    else auto_sensing_noise(power, trial_cfg))
        echo = simulate_echo(scene, pilots, sigma_s2, rng, trial_cfg.array)
        spectrum = music_spectrum_2d(sample_covariance(echo), scene.m_total, trial_cfg.grid, trial_cfg.array)
        spectrum.write_csv(args.dump_spectrum)
        print(f"spectrum written to {args.dump_spectrum}")
    return EXIT_OK


def cmd_validate(args) -> int:
    trial_cfg, _ = _load(args)  # also validates the config itself
    results = run_validation(seed=trial_cfg.seed)
    failed = 0
    for check in results:
        status = "PASS" if check.passed else "FAIL"
        print(f"[{status}] {check.name}: {check.detail}")
        failed += not check.passed
    if failed:
        print(f"{failed}/{len(results)} checks failed", file=sys.stderr)
        return EXIT_VALIDATION
    print(f"all {len(results)} checks passed")
    return EXIT_OK


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if args.command == "sweep":
            return cmd_sweep(args)
        if args.command == "trial":
            return cmd_trial(args)
        return cmd_validate(args)
    except (_UsageError, ConfigError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME
    except Exception as exc:  # numerical / runtime failures
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_RUNTIME


def main_entry():
    sys.exit(main())


if __name__ == "__main__":
    main_entry()
