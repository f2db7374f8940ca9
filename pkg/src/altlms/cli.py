"""
Command-line front end.

    altlms simulate --preset fig2 --out curves.csv [--seed N] [--trials N]
    altlms sweep --preset fig3 --grid 0.005:0.025:10 --out sweep.csv
    altlms analyze --config scenario.cfg --out pred.csv
    altlms cost SA-ALT-LMS l1 16

Every CSV gets a sibling ``<out>.meta`` file holding the toolkit version,
the command, the analytical readings and the full scenario in the
configuration format, so ``parse_config`` can read it back.
"""
import argparse
import csv
import sys

import numpy as np

from . import __version__
from .analysis import ANALYSIS_READINGS, AnalysisInput, steady_state, transient_k
from .config import format_config, load_scenario
from .exceptions import ConfigError, InvalidArgument, UnstableConfiguration
from .filters import (LMS_KIND, SA_ALT_LMS_KIND, SA_LMS_KIND, algorithm_cost)
from .harness import PRESETS, run_experiment, sweep_step_size, trial_systems
from .shrinkage import ShrinkageSpec

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_CONFIG = 3
EXIT_UNSTABLE = 4
EXIT_IO = 5

DB_FLOOR = -120.0


def to_db(mse):
    """``10 log10(mse)`` floored at -120 dB; ``inf`` and missing values pass through."""
    if mse is None:
        return None
    if np.isinf(mse):
        return float(mse)
    with np.errstate(divide="ignore"):
        return max(10.0 * np.log10(mse), DB_FLOOR)


def _fmt(value):
    if value is None:
        return ""
    if np.isinf(value):
        return "inf"
    return f"{value:.6f}"


def write_metadata(path, scenario, command, notes=()):
    lines = [
        "# altlms run metadata",
        f"# toolkit_version: {__version__}",
        f"# command: {command}",
        f"# base_seed: {scenario.base_seed}",
    ]
    lines += [f"# analysis.{k}: {v}" for k, v in ANALYSIS_READINGS.items()]
    lines += [f"# {note}" for note in notes]
    lines.append("# scenario (configuration format)")
    with open(path, "w") as fh:
        fh.write("\n".join(lines) + "\n" + format_config(scenario))


def emit_csv(curves, path):
    """
    Write learning curves: an ``iteration`` column and one dB column per curve.
    """
    if not curves:
        raise InvalidArgument("nothing to write")
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["iteration"] + [c.label for c in curves])
        columns = [[_fmt(to_db(v)) for v in c.mse] for c in curves]
        for i, row in enumerate(zip(*columns)):
            writer.writerow([i, *row])


def emit_sweep_csv(points, labels, path):
    """
    Write a step-size sweep: ``step_size``, simulated and analytical dB per
    algorithm, and a ``stability_flag`` of ``stable``, ``diverged``,
    ``unstable`` or ``diverged;unstable``.
    """
    if not points:
        raise InvalidArgument("nothing to write")
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["step_size"]
                        + [f"{lab}_simulated_mse_db" for lab in labels]
                        + [f"{lab}_analytical_mse_db" for lab in labels]
                        + ["stability_flag"])
        for pt in points:
            flags = []
            if any(pt.diverged.values()):
                flags.append("diverged")
            if any(pt.unstable.values()):
                flags.append("unstable")
            writer.writerow([repr(pt.step)]
                            + [_fmt(to_db(pt.simulated.get(lab))) for lab in labels]
                            + [_fmt(to_db(pt.analytical.get(lab))) for lab in labels]
                            + [";".join(flags) or "stable"])


def parse_grid(text):
    """``start:stop:count`` (inclusive, evenly spaced) or a comma-separated list."""
    try:
        if ":" in text:
            start, stop, count = text.split(":")
            return np.linspace(float(start), float(stop), int(count))
        return np.array([float(v) for v in text.split(",")])
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad grid {text!r}; use start:stop:count") from None


class _PredictionCurve:
    def __init__(self, label, mse):
        self.label = label
        self.mse = mse


def predicted_curves(scenario):
    """Transient MSE predicted for each SA-ALT-LMS entry, averaged over trial systems."""
    curves = []
    for entry in scenario.roster:
        if entry.kind != SA_ALT_LMS_KIND:
            continue
        total = np.zeros(scenario.iterations)
        for t in range(scenario.trials):
            system = trial_systems(scenario, t)[0][1]
            inp = AnalysisInput.from_weights(system, scenario.sigma_x2, scenario.sigma_n2,
                                             entry.mu, entry.eta, entry.tau, entry.lam,
                                             entry.penalty)
            steady_state(inp)
            total += transient_k(inp, scenario.iterations).mse[:-1]
        curves.append(_PredictionCurve(entry.label, total / scenario.trials))
    if not curves:
        raise InvalidArgument("the roster has no sa-alt-lms entry to analyze")
    return curves


def _scenario_from_args(args):
    scenario = load_scenario(args.preset or args.config)
    changes = {}
    if args.seed is not None:
        changes["base_seed"] = args.seed
    if args.trials is not None:
        changes["trials"] = args.trials
    if args.iterations is not None:
        changes["iterations"] = args.iterations
    return scenario.replace(**changes) if changes else scenario


def cmd_simulate(args):
    scenario = _scenario_from_args(args)
    curves = run_experiment(scenario, workers=args.workers)
    emit_csv(curves, args.out)
    notes = [f"diverged_trials.{c.label}: {c.diverged_trial_count}" for c in curves]
    write_metadata(args.out + ".meta", scenario, "simulate", notes)


def cmd_sweep(args):
    scenario = _scenario_from_args(args)
    points = sweep_step_size(scenario, args.grid, mu_equals_eta=not args.mu_only,
                             workers=args.workers)
    labels = [e.label for e in scenario.roster]
    emit_sweep_csv(points, labels, args.out)
    notes = [f"grid: {','.join(repr(p.step) for p in points)}",
             f"mu_equals_eta: {not args.mu_only}"]
    write_metadata(args.out + ".meta", scenario, "sweep", notes)


def cmd_analyze(args):
    scenario = _scenario_from_args(args)
    emit_csv(predicted_curves(scenario), args.out)
    write_metadata(args.out + ".meta", scenario, "analyze")


_ALGORITHM_NAMES = {"lms": LMS_KIND, "sa-lms": SA_LMS_KIND, "salms": SA_LMS_KIND,
                    "sa-alt-lms": SA_ALT_LMS_KIND, "saaltlms": SA_ALT_LMS_KIND}


def cmd_cost(args, out=None):
    kind = _ALGORITHM_NAMES.get(args.algorithm.lower())
    if kind is None:
        raise SystemExit(_usage(f"unknown algorithm {args.algorithm!r}"))
    rest = args.rest
    if len(rest) not in (1, 2):
        raise SystemExit(_usage("expected: cost <alg> [penalty] <m>"))
    try:
        m = int(rest[-1])
    except ValueError:
        raise SystemExit(_usage(f"filter length must be an integer, got {rest[-1]!r}")) from None
    spec = None
    if len(rest) == 2:
        try:
            spec = ShrinkageSpec.parse(rest[0])
        except InvalidArgument as exc:
            raise SystemExit(_usage(str(exc))) from None
    if kind != LMS_KIND and spec is None:
        raise SystemExit(_usage(f"{args.algorithm} needs a penalty (l1, logsum, l0)"))
    try:
        cost = algorithm_cost(kind, spec, m)
    except InvalidArgument as exc:
        raise SystemExit(_usage(str(exc))) from None
    print(cost, file=out or sys.stdout)


def _usage(message):
    print(f"altlms cost: error: {message}", file=sys.stderr)
    return EXIT_USAGE


def build_parser():
    parser = argparse.ArgumentParser(prog="altlms", description=__doc__.split("\n\n")[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    def scenario_args(p, grid=False):
        src = p.add_mutually_exclusive_group(required=True)
        src.add_argument("--preset", choices=sorted(PRESETS))
        src.add_argument("--config", help="scenario configuration file")
        p.add_argument("--out", required=True, help="output CSV path")
        p.add_argument("--seed", type=int, help="override base_seed")
        p.add_argument("--trials", type=int)
        p.add_argument("--iterations", type=int)
        p.add_argument("--workers", type=int, default=1, help="parallel trial batches")
        if grid:
            p.add_argument("--grid", type=parse_grid, required=True,
                           help="step sizes, start:stop:count or a,b,c")
            p.add_argument("--mu-only", action="store_true",
                           help="sweep mu only and keep each entry's eta")

    p = sub.add_parser("simulate", help="Monte-Carlo learning curves")
    scenario_args(p)
    p.set_defaults(func=cmd_simulate)
    p = sub.add_parser("sweep", help="steady-state MSE against step size")
    scenario_args(p, grid=True)
    p.set_defaults(func=cmd_sweep)
    p = sub.add_parser("analyze", help="predicted learning curves")
    scenario_args(p)
    p.set_defaults(func=cmd_analyze)
    p = sub.add_parser("cost", help="arithmetic cost per iteration")
    p.add_argument("algorithm", help="LMS, SA-LMS or SA-ALT-LMS")
    p.add_argument("rest", nargs="+", metavar="[penalty] m")
    p.set_defaults(func=cmd_cost)
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        args.func(args)
    except (ConfigError, InvalidArgument) as exc:
        print(f"altlms: configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except UnstableConfiguration as exc:
        print(f"altlms: unstable configuration: {exc}", file=sys.stderr)
        return EXIT_UNSTABLE
    except OSError as exc:
        print(f"altlms: I/O error: {exc}", file=sys.stderr)
        return EXIT_IO
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
