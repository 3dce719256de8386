# src/cli.py
import argparse
import logging
import sys
from typing import Any, Dict, List, Optional, Sequence

import pandas as pd
from pydantic import ValidationError

from config.observability import ObservabilityConfig, configure_logging
from config.settings import Settings
from src import conic_bounds
from src.errors import ConfigError, XregoError
from src.harness import load_experiment_config, load_records, run_experiment
from src.models.rng import RngState
from src.problems import build_problem, manifest, suite
from src.profiles import performance_profile, plot_profiles, profile_frame, write_profile_csv
from src.verify_mc import grid_table, run_grid
from src.xrego import ALGORITHM_NAMES, algorithm_preset, run_algorithm
from utils.helpers import canonical_json, load_yaml, parse_assignments
from utils.tracking import PerformanceTracker

logger = logging.getLogger(__name__)

EXIT_OK, EXIT_CONFIG, EXIT_RUNTIME = 0, 1, 2


class _Parser(argparse.ArgumentParser):
    """Usage errors exit with the config-error code"""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_CONFIG, f"{self.prog}: error: {message}\n")


def _common_flags() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--config", help="YAML file")
    common.add_argument("--out", help="output path")
    common.add_argument("--format", choices=["text", "json", "csv"], default="text")
    common.add_argument("--jobs", type=int, default=None)
    common.add_argument("--quiet", action="store_true")
    return common


def build_parser() -> argparse.ArgumentParser:
    common = _common_flags()
    parser = _Parser(prog="xrego", description="Random-embedding global optimization")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    run = sub.add_parser("run", parents=[common], help="solve one problem")
    run.add_argument("--problem", required=True)
    run.add_argument("--dim", type=int, default=100)
    run.add_argument("--algorithm", choices=ALGORITHM_NAMES, default="A-REGO")
    run.add_argument("--solver", choices=["local", "cheap-multistart", "expensive-multistart"])
    run.add_argument("--known-de", action="store_true", help="fix d at the problem's effective dimension")
    run.add_argument("--max-evals", type=int)

    sub.add_parser("experiment", parents=[common], help="run the cells of a config file")

    profile = sub.add_parser("profile", parents=[common], help="performance profiles from records")
    profile.add_argument("--records", required=True)
    profile.add_argument("--alpha-max", type=float)
    profile.add_argument("--points", type=int, default=200)
    profile.add_argument("--svg")

    bounds = sub.add_parser("bounds", parents=[common], help="success-probability bounds")
    bounds.add_argument("--tau", nargs="+", metavar="KEY=VALUE", help="r= d= D=")
    bounds.add_argument("--tau-us", nargs="+", metavar="KEY=VALUE", help="epsilon= L= D=")
    bounds.add_argument("--crossover", nargs="+", metavar="KEY=VALUE", help="epsilon= L= distance= d= D=")
    bounds.add_argument("--kxi", nargs="+", metavar="KEY=VALUE", help="xi= tau= rho=")
    bounds.add_argument("--table", action="store_true", help="tau over the default (D, d, r) grid")

    verify = sub.add_parser("verify", parents=[common], help="Monte-Carlo checks of the bounds")
    verify.add_argument("--grid", default="default")
    verify.add_argument("--trials", type=int, default=20000)

    suite_parser = sub.add_parser("suite", parents=[common], help="manifest of the generated problems")
    suite_parser.add_argument("--dim", type=int, default=100)
    suite_parser.add_argument("--lipschitz-points", type=int, default=0,
                              help="sample points for a Lipschitz estimate per problem (0 skips it)")
    return parser


def _emit(args, rows: List[Dict[str, Any]], text: Optional[str] = None) -> None:
    if args.format == "json":
        out = "\n".join(canonical_json(row) for row in rows)
    elif args.format == "csv":
        out = pd.DataFrame(rows).to_csv(index=False).rstrip("\n")
    else:
        out = text if text is not None else pd.DataFrame(rows).to_string(index=False)
    if args.out and args.command not in ("experiment", "profile"):
        with open(args.out, "w") as f:
            f.write(out + "\n")
    else:
        print(out)


def _require(values: Dict[str, Any], keys: Sequence[str], option: str) -> List[Any]:
    missing = [k for k in keys if k not in values]
    if missing:
        raise ConfigError(f"{option} needs {', '.join(k + '=' for k in missing)}")
    return [values[k] for k in keys]


def cmd_bounds(args) -> int:
    rows, lines = [], []
    try:
        if args.tau:
            r, d, D = _require(parse_assignments(args.tau), ["r", "d", "D"], "--tau")
            report = conic_bounds.tau(r, int(d), int(D))
            rows.append({"bound": "tau", "r": r, "d": d, "D": D, "value": report.tau, "log10": report.log10_tau})
            lines.append(f"{report.tau:.10g}")
        if args.tau_us:
            eps, L, D = _require(parse_assignments(args.tau_us), ["epsilon", "L", "D"], "--tau-us")
            report = conic_bounds.tau_us(eps, L, int(D))
            rows.append({"bound": "tau_us", "epsilon": eps, "L": L, "D": D, "value": report.tau,
                         "log10": report.log10_tau})
            lines.append(f"{report.tau:.10g} (log10 {report.log10_tau:.6f})")
        if args.crossover:
            keys = ["epsilon", "L", "distance", "d", "D"]
            eps, L, dist, d, D = _require(parse_assignments(args.crossover), keys, "--crossover")
            report = conic_bounds.crossover(eps, L, dist, int(d), int(D))
            rows.append({"bound": "crossover", "distance": dist, "delta0": report.delta0,
                         "log10_ratio": report.log10_ratio, "regime": report.regime})
            lines.append(f"{report.regime}: log10(tau/tau_us) = {report.log10_ratio:.6f}, Delta0 = {report.delta0:.6f}")
        if args.kxi:
            xi, tau_lb, rho_lb = _require(parse_assignments(args.kxi), ["xi", "tau", "rho"], "--kxi")
            params = conic_bounds.k_xi(xi, tau_lb, rho_lb)
            rows.append({"bound": "k_xi", "xi": xi, "tau": tau_lb, "rho": rho_lb, "value": params.k_xi})
            lines.append(str(params.k_xi))
        if args.table:
            table = conic_bounds.bound_table([3, 5, 10, 20, 100, 1000], [1, 2, 3], [0.2, 0.5, 0.8])
            rows.extend(table.to_dict(orient="records"))
            lines.append(table.to_string(index=False))
    except (ValueError, TypeError) as e:
        raise ConfigError(str(e)) from e
    if not rows:
        raise ConfigError("bounds needs at least one of --tau, --tau-us, --crossover, --kxi, --table")
    _emit(args, rows, "\n".join(lines))
    return EXIT_OK


def cmd_verify(args, tracker: PerformanceTracker) -> int:
    grid = args.grid
    if grid != "default":
        grid = load_yaml(grid).get("points")
        if not grid:
            raise ConfigError(f"{args.grid} must list grid points as [D, d, r] under 'points'")
    rows = tracker.track_execution("verify")(run_grid)(grid, args.trials, args.seed, args.jobs)
    table = grid_table(rows)
    _emit(args, table.to_dict(orient="records"), table.to_string(index=False))
    violations = int((table["verdict"] == "violation").sum())
    if violations:
        logger.error("%d lower-bound violations", violations)
        return EXIT_RUNTIME
    return EXIT_OK


def cmd_run(args, tracker: PerformanceTracker) -> int:
    rng = RngState(seed=args.seed)
    obj = build_problem(args.problem, args.dim, rng.spawn(0))
    algorithm = algorithm_preset(
        args.algorithm,
        solver=args.solver,
        d_e=obj.effective_dim if args.known_de else None,
        max_evals=args.max_evals,
    )
    result = tracker.track_execution("run")(run_algorithm)(obj, algorithm, rng.spawn(1))
    summary = {
        "problem": obj.name,
        "D": obj.D,
        "algorithm": algorithm.name,
        "f_opt": result.f_opt,
        "f_star": obj.f_star,
        "success": result.success,
        "d_e": obj.effective_dim,
        "d_e_est": result.d_e_est,
        "k_f": result.k_f,
        "embeddings": result.embeddings,
        "total_evals": result.total_evals,
        "stop_reason": result.stop_reason,
    }
    text = "\n".join(f"{key:>12}: {value}" for key, value in summary.items())
    _emit(args, [summary], text)
    return EXIT_OK


def cmd_experiment(args, tracker: PerformanceTracker) -> int:
    if not args.config:
        raise ConfigError("experiment needs --config PATH")
    cfg = load_experiment_config(args.config)
    if args.out:
        cfg = cfg.model_copy(update={"output": args.out})
    records = tracker.track_execution("experiment")(run_experiment)(cfg, args.jobs, args.quiet, tracker)
    solved = sum(record.solved for record in records)
    failed = sum(record.status == "failed" for record in records)
    print(f"{len(records)} records in {cfg.output}: {solved} solved, {failed} failed")
    return EXIT_RUNTIME if failed else EXIT_OK


def cmd_profile(args) -> int:
    records = load_records(args.records)
    if not records:
        raise ConfigError(f"No records in {args.records}")
    curves = performance_profile(records, alpha_max=args.alpha_max, points=args.points)
    frame = profile_frame(curves)
    if args.out:
        write_profile_csv(curves, args.out)
    if args.svg:
        plot_profiles(curves, args.svg)
    if args.format == "json":
        print("\n".join(canonical_json(curve.model_dump()) for curve in curves))
    elif args.format == "csv":
        print(frame.to_csv(index=False).rstrip("\n"))
    else:
        for curve in curves:
            print(f"{curve.algorithm}: solved {curve.solved_fraction:.3f}, pi(1) = {curve.values[0]:.3f}")
    return EXIT_OK


def cmd_suite(args) -> int:
    objectives = suite(args.dim, RngState(seed=args.seed))
    rows = [m.model_dump() for m in manifest(objectives, args.seed, args.lipschitz_points)]
    columns = ["name", "D", "d_e", "f_star"] + (["lipschitz"] if args.lipschitz_points else [])
    text = pd.DataFrame(rows)[columns].to_string(index=False)
    _emit(args, rows, text)
    return EXIT_OK


def main(argv: Optional[Sequence[str]] = None) -> int:
    settings = Settings()
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    configure_logging("WARNING" if args.quiet else settings.log_level)
    if args.jobs is None:
        args.jobs = settings.jobs

    tracker = PerformanceTracker(ObservabilityConfig(settings))
    try:
        if args.command == "bounds":
            return cmd_bounds(args)
        if args.command == "verify":
            return cmd_verify(args, tracker)
        if args.command == "run":
            return cmd_run(args, tracker)
        if args.command == "experiment":
            return cmd_experiment(args, tracker)
        if args.command == "profile":
            return cmd_profile(args)
        return cmd_suite(args)
    except (ConfigError, ValidationError) as e:
        print(f"configuration error: {e}", file=sys.stderr)
        return EXIT_CONFIG
    except XregoError as e:
        logger.error("%s", e)
        return EXIT_RUNTIME
    except Exception:
        logger.exception("Unexpected failure")
        return EXIT_RUNTIME
