"""Command-line front end: runs each experiment and writes its result table."""

import argparse
import json
import logging
import math
import sys
from collections.abc import Sequence
from pathlib import Path
from typing import Any, NoReturn

from pydantic import ValidationError

from arnold_gap_modes import __version__
from arnold_gap_modes.config.settings import Config
from arnold_gap_modes.dynamics.models import KickKind, KickSpec, MathieuParams
from arnold_gap_modes.errors import GapModeError
from arnold_gap_modes.experiments.commands import (
    FIGURES,
    AsymParams,
    BvpParams,
    ChartParams,
    CommandParams,
    EdgesParams,
    FiguresParams,
    FlowParams,
    LambdaParams,
    ProfileParams,
    RunConfig,
    SolveParams,
    WidthSweepParams,
)
from arnold_gap_modes.experiments.figures import emit_figure_data
from arnold_gap_modes.floquet.analysis import classify, gap_interval, stability_chart
from arnold_gap_modes.modes.asymptotics import compare_asymptotic
from arnold_gap_modes.modes.delta_kick import (
    build_profile,
    lambda_required,
    lambda_required_forms,
    lambda_required_shooting,
    solve_delta,
    spectral_flow,
    wronskian_check,
)
from arnold_gap_modes.modes.finite_kick import (
    boundary_defect,
    extrapolation_meta,
    shooting_problem,
    solve_bvp,
    width_sweep,
)
from arnold_gap_modes.utils.logging import log_duration, setup_logging
from arnold_gap_modes.utils.tables import OutputFormat, ResultTable

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_USAGE = 2


class ExperimentRunner:
    """Dispatches validated run configurations to the library."""

    def __init__(self, config: Config):
        """Initialize the runner.

        Args:
            config: Configuration instance
        """
        self.config = config
        self.logger = logging.getLogger(__name__)

    def output_path(self, run: RunConfig) -> Path:
        """Where a run writes its table: --output, else <output_dir>/<command>.<format>."""
        if run.output_path is not None:
            return run.output_path
        return self.config.output_dir / f"{run.command}.{run.format}"

    def run(self, run: RunConfig) -> list[Path]:
        """Run one experiment and write its output.

        Returns:
            Paths of the files written

        Raises:
            GapModeError: the computation failed
        """
        self.logger.info(f"Running {run.params.canonical()}")
        with log_duration(self.logger, run.command):
            if isinstance(run.params, FiguresParams):
                directory = run.output_path or self.config.output_dir
                return emit_figure_data(run.params, self.config, directory, run.format)
            table = self.build_table(run.params)

        path = table.write(self.output_path(run), run.format)
        self.logger.info(f"Wrote {len(table)} rows to {path}")
        return [path]

    def build_table(self, params: CommandParams) -> ResultTable:
        """Compute the result table for one command."""
        meta = {"command": params.canonical(), "version": __version__} | params.echo()
        match params:
            case ChartParams():
                return self._chart(params, meta)
            case EdgesParams():
                return self._edges(params, meta)
            case LambdaParams():
                return self._lambda(params, meta)
            case SolveParams():
                return self._solve(params, meta)
            case ProfileParams():
                return self._profile(params, meta)
            case FlowParams():
                return self._flow(params, meta)
            case AsymParams():
                return self._asym(params, meta)
            case BvpParams():
                return self._bvp(params, meta)
            case WidthSweepParams():
                return self._width_sweep(params, meta)
            case _:
                raise TypeError(f"no table for {type(params).__name__}")

    def _chart(self, params: ChartParams, meta: dict[str, str]) -> ResultTable:
        points = stability_chart(
            (params.delta_min, params.delta_max),
            (params.epsilon_min, params.epsilon_max),
            (params.delta_points, params.epsilon_points),
            edge_tol=self.config.edge_tol,
            tol=self.config.solver_tol,
        )
        table = ResultTable(columns=("delta", "epsilon", "stability", "gap_index"), meta=meta)
        table.extend(
            (
                p.delta,
                p.epsilon,
                str(p.stability.kind),
                "" if p.stability.gap_index is None else p.stability.gap_index,
            )
            for p in points
        )
        return table

    def _edges(self, params: EdgesParams, meta: dict[str, str]) -> ResultTable:
        epsilon = params.effective_epsilon
        if epsilon != params.epsilon:
            meta["note"] = f"epsilon = 0 reported through the small-epsilon limit {epsilon:g}"
        gap = gap_interval(
            epsilon,
            params.gap,
            self.config.root_tol,
            self.config.edge_scan_points,
            self.config.solver_tol,
        )
        table = ResultTable(
            columns=("gap", "epsilon", "lower", "upper", "width", "even_edge", "admissible_sign"),
            meta=meta,
        )
        table.append(
            (
                gap.n,
                params.epsilon,
                gap.lower,
                gap.upper,
                gap.width,
                str(gap.even_edge),
                gap.admissible_sign,
            )
        )
        return table

    def _lambda(self, params: LambdaParams, meta: dict[str, str]) -> ResultTable:
        mathieu = MathieuParams(delta=params.delta, epsilon=params.epsilon)
        tol = self.config.solver_tol
        stability = classify(mathieu, self.config.edge_tol, tol)
        forms = lambda_required_forms(mathieu, tol)
        shooting = lambda_required_shooting(mathieu, tol=tol) if params.shooting else math.nan
        table = ResultTable(
            columns=(
                "delta",
                "epsilon",
                "gap_index",
                "lambda_reduced",
                "lambda_general",
                "lambda_shooting",
                "wronskian",
            ),
            meta=meta,
        )
        table.append(
            (
                params.delta,
                params.epsilon,
                stability.gap_index if stability.gap_index is not None else "",
                forms.reduced,
                math.nan if forms.general is None else forms.general,
                shooting,
                wronskian_check(mathieu, tol),
            )
        )
        return table

    def _solve(self, params: SolveParams, meta: dict[str, str]) -> ResultTable:
        delta = solve_delta(
            params.strength, params.epsilon, params.gap, self.config.root_tol, self.config.solver_tol
        )
        check = lambda_required(MathieuParams(delta=delta, epsilon=params.epsilon))
        n = params.gap
        table = ResultTable(
            columns=("lambda", "epsilon", "gap", "delta", "delta1", "lambda_check"), meta=meta
        )
        table.append(
            (params.strength, params.epsilon, n, delta, (delta - n * n / 4) / params.epsilon, check)
        )
        return table

    def _profile(self, params: ProfileParams, meta: dict[str, str]) -> ResultTable:
        delta = solve_delta(params.strength, params.epsilon, params.gap, self.config.root_tol)
        mode = build_profile(
            delta,
            params.epsilon,
            params.strength,
            params.half_window,
            params.samples,
            self.config.solver_tol,
        )
        meta |= {
            "delta": f"{delta:.12g}",
            "gap_index": str(mode.gap_index),
            "measured_decay": f"{mode.measured_decay:.12g}",
            "jump_defect": f"{mode.jump_defect:.3g}",
            "parity_defect": f"{mode.profile.parity_defect():.3g}",
        }
        table = ResultTable(columns=("t", "x"), meta=meta)
        table.extend(zip(mode.profile.t.tolist(), mode.profile.x.tolist()))
        return table

    def _flow(self, params: FlowParams, meta: dict[str, str]) -> ResultTable:
        gap = gap_interval(params.epsilon, params.gap)
        meta |= {"gap_lower": f"{gap.lower:.12g}", "gap_upper": f"{gap.upper:.12g}"}
        points = spectral_flow(params.epsilon, params.gap, params.strengths, self.config.root_tol)
        table = ResultTable(columns=("lambda", "delta", "delta1"), meta=meta)
        table.extend((p.strength, p.delta, p.delta1) for p in points)
        return table

    def _asym(self, params: AsymParams, meta: dict[str, str]) -> ResultTable:
        rows = compare_asymptotic(params.epsilons, params.strengths, self.config.root_tol)
        table = ResultTable(
            columns=(
                "epsilon",
                "lambda",
                "delta1_numeric",
                "delta1_formula",
                "delta1_displayed",
                "error",
                "error_displayed",
            ),
            meta=meta,
        )
        table.extend(
            (
                r.epsilon,
                r.strength,
                r.delta1_numeric,
                r.delta1_formula,
                r.delta1_displayed,
                r.error,
                r.error_displayed,
            )
            for r in rows
        )
        return table

    def _bvp(self, params: BvpParams, meta: dict[str, str]) -> ResultTable:
        match KickKind(params.kick):
            case KickKind.TAE_SHEAR:
                assert params.shear is not None
                kick = KickSpec.tae_shear(params.shear)
            case KickKind.LORENTZIAN:
                assert params.width is not None
                kick = KickSpec.lorentzian(params.strength, params.width)
            case _:
                assert params.width is not None
                kick = KickSpec.gaussian(params.strength, params.width)

        gap = gap_interval(params.epsilon, params.gap)
        base = MathieuParams(delta=gap.midpoint, epsilon=params.epsilon)
        problem = shooting_problem(
            base, kick, self.config.max_match_periods, self.config.solver_tol
        )
        mode = solve_bvp(problem, params.gap, samples=params.samples, tol=self.config.root_tol)
        meta |= {
            "kick_description": kick.describe(),
            "delta": f"{mode.delta:.12g}",
            "effective_strength": f"{mode.strength:.12g}",
            "match_periods": str(problem.periods),
            "boundary_defect": f"{boundary_defect(problem, mode.delta):.3g}",
            "parity_defect": f"{mode.profile.parity_defect():.3g}",
            "measured_decay": f"{mode.measured_decay:.12g}",
        }
        table = ResultTable(columns=("t", "x"), meta=meta)
        table.extend(zip(mode.profile.t.tolist(), mode.profile.x.tolist()))
        return table

    def _width_sweep(self, params: WidthSweepParams, meta: dict[str, str]) -> ResultTable:
        rows = width_sweep(
            params.epsilon,
            params.strength,
            params.gap,
            params.widths,
            KickKind(params.kick),
            self.config.max_match_periods,
            self.config.solver_tol,
        )
        meta |= extrapolation_meta(rows)
        table = ResultTable(columns=("width", "delta", "delta_dirac", "deviation"), meta=meta)
        table.extend((r.width, r.delta, r.delta_dirac, r.deviation) for r in rows)
        return table


def _float_list(text: str) -> list[float]:
    try:
        return [float(item) for item in text.split(",") if item.strip()]
    except ValueError as e:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from e


class _UsageParser(argparse.ArgumentParser):
    """Argument parser that reports usage errors as JSON records."""

    def error(self, message: str) -> NoReturn:
        self.print_usage(sys.stderr)
        _emit_error({"error": "UsageError", "message": message})
        sys.exit(EXIT_USAGE)


def _emit_error(record: dict[str, Any]) -> None:
    print(json.dumps(record, sort_keys=True), file=sys.stderr)


def build_parser() -> argparse.ArgumentParser:
    """Argument parser with one sub-command per experiment."""
    parser = _UsageParser(
        prog="arnold-gap-modes",
        description="Gap modes of the kicked Mathieu equation",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("--config", type=str, help="Path to configuration file")
    parser.add_argument(
        "--log-level",
        type=str,
        default="INFO",
        choices=["DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"],
        help="Set logging level",
    )
    parser.add_argument("--log-file", type=str, help="Log to file in addition to console")

    commands = parser.add_subparsers(dest="command", required=True, parser_class=_UsageParser)

    def command(name: str, help_text: str) -> argparse.ArgumentParser:
        sub = commands.add_parser(name, help=help_text)
        sub.add_argument("--output", type=Path, help="Output file (figures: output directory)")
        sub.add_argument("--format", choices=["csv", "json"], help="Output format")
        return sub

    chart = command("chart", "Stability classification on a (delta, epsilon) grid")
    chart.add_argument("--delta-min", type=float, default=0.0)
    chart.add_argument("--delta-max", type=float, default=2.5)
    chart.add_argument("--epsilon-min", type=float, default=0.0)
    chart.add_argument("--epsilon-max", type=float, default=0.5)
    chart.add_argument("--delta-points", type=int, default=50)
    chart.add_argument("--epsilon-points", type=int, default=20)

    edges = command("edges", "Edges of one instability tongue")
    edges.add_argument("--epsilon", type=float, required=True)
    edges.add_argument("--gap", type=int, default=1)

    lam = command("lambda", "Kick strength that binds a mode at (delta, epsilon)")
    lam.add_argument("--delta", type=float, required=True)
    lam.add_argument("--epsilon", type=float, required=True)
    lam.add_argument("--shooting", action="store_true", help="Add the long-window oracle")

    for name, help_text in (
        ("solve", "Gap-mode delta for a Dirac kick"),
        ("profile", "Gap-mode profile for a Dirac kick"),
    ):
        sub = command(name, help_text)
        sub.add_argument("--lambda", dest="strength", type=float, required=True)
        sub.add_argument("--epsilon", type=float, required=True)
        sub.add_argument("--gap", type=int, default=1)
        if name == "profile":
            sub.add_argument("--half-window", type=float, default=40 * math.pi)
            sub.add_argument("--samples", type=int)

    flow = command("flow", "Gap-mode delta along a list of kick strengths")
    flow.add_argument("--epsilon", type=float, required=True)
    flow.add_argument("--gap", type=int, default=1)
    flow.add_argument("--lambdas", dest="strengths", type=_float_list, required=True)

    asym = command("asym", "Numerical delta1 against the small-epsilon formulas")
    asym.add_argument("--epsilons", type=_float_list, required=True)
    asym.add_argument("--lambdas", dest="strengths", type=_float_list, required=True)

    bvp = command("bvp", "Gap mode for a finite-width kick")
    bvp.add_argument("--kick", choices=["gaussian", "lorentzian", "tae-shear"], required=True)
    bvp.add_argument("--lambda", dest="strength", type=float, default=1.0)
    bvp.add_argument("--width", type=float)
    bvp.add_argument("--shear", type=float)
    bvp.add_argument("--epsilon", type=float, required=True)
    bvp.add_argument("--gap", type=int, default=1)
    bvp.add_argument("--samples", type=int)

    sweep = command("width-sweep", "Finite-kick delta against width, next to the Dirac value")
    sweep.add_argument("--kick", choices=["gaussian", "lorentzian"], default="gaussian")
    sweep.add_argument("--lambda", dest="strength", type=float, default=1.0)
    sweep.add_argument("--epsilon", type=float, required=True)
    sweep.add_argument("--gap", type=int, default=1)
    sweep.add_argument("--widths", type=_float_list, required=True)

    figures = command("figures", "Data behind each reproduced figure")
    figures.add_argument("figure", nargs="?", choices=[*FIGURES, "all"], default="all")
    figures.add_argument("--epsilon", type=float)
    figures.add_argument("--gnuplot", action="store_true", help="Also write gnuplot scripts")
    return parser


_GLOBAL_ARGS = {"config", "log_level", "log_file", "output", "format"}


def run_config_from_args(args: argparse.Namespace, config: Config) -> RunConfig:
    """Validated run configuration from parsed arguments.

    Options left unset fall back to the configuration file.

    Raises:
        ValidationError: parameters violate an experiment's preconditions
    """
    params: dict[str, Any] = {
        key: value
        for key, value in vars(args).items()
        if key not in _GLOBAL_ARGS and value is not None
    }
    if args.command in ("profile", "bvp") and "samples" not in params:
        params["samples"] = config.profile_samples
    if args.command == "figures" and "epsilon" not in params:
        params["epsilon"] = config.default_epsilon
    fmt: OutputFormat = args.format or config.output_format
    return RunConfig.model_validate(
        {"params": params, "output_path": args.output, "format": fmt}
    )


def main(argv: Sequence[str] | None = None) -> int:
    """Main entry point.

    Returns:
        Exit status: 0 on success, 1 on a computation error, 2 on a usage error
    """
    args = build_parser().parse_args(argv)

    setup_logging(level=args.log_level, log_file=args.log_file)
    logger = logging.getLogger(__name__)

    config = Config(args.config)
    _, errors = config.validate()
    if args.config is None:
        # Without --config the built-in defaults stand in for a missing file
        errors = [error for error in errors if not error.startswith("Configuration file not found")]
    if errors:
        for error in errors:
            logger.error(f"  - {error}")
        _emit_error({"error": "ConfigError", "message": "; ".join(errors)})
        return EXIT_USAGE

    try:
        run = run_config_from_args(args, config)
    except ValidationError as e:
        _emit_error(
            {
                "error": "UsageError",
                "message": f"invalid parameters for {args.command}",
                "details": json.loads(e.json(include_url=False, include_input=False)),
            }
        )
        return EXIT_USAGE

    try:
        paths = ExperimentRunner(config).run(run)
    except GapModeError as e:
        logger.error(f"{run.command} failed: {e}")
        _emit_error(e.to_record())
        return EXIT_FAILURE
    except KeyboardInterrupt:
        logger.info("Interrupted by user")
        return EXIT_FAILURE

    for path in paths:
        logger.info(f"Output: {path}")
    return EXIT_OK


def sync_main() -> None:
    """Console-script entry point."""
    sys.exit(main())


if __name__ == "__main__":
    sync_main()
