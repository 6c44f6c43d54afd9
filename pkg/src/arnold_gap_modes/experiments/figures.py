"""Data behind each reproduced figure, plus optional gnuplot sidecars.

Figures whose modulation strength is not fixed by the experiment use the
configured default epsilon; every data file records the value it used.
"""

import logging
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Final

import numpy as np
from jinja2 import Environment, FileSystemLoader, StrictUndefined, TemplateNotFound

from arnold_gap_modes import __version__
from arnold_gap_modes.config.settings import Config
from arnold_gap_modes.dynamics.models import KickSpec, MathieuParams
from arnold_gap_modes.experiments.commands import FigureName, FiguresParams
from arnold_gap_modes.floquet.analysis import gap_interval
from arnold_gap_modes.modes.asymptotics import delta1_of_lambda, delta1_of_lambda_displayed
from arnold_gap_modes.modes.delta_kick import build_profile, edge_profile, solve_delta, spectral_flow
from arnold_gap_modes.modes.finite_kick import (
    extrapolation_meta,
    shooting_problem,
    solve_bvp,
    width_sweep,
)
from arnold_gap_modes.utils.tables import OutputFormat, ResultTable
from arnold_gap_modes.utils.toml_handler import TOMLHandler

PROFILE_HALF_WINDOW: Final = 40.0 * math.pi
FIG1_STRENGTH: Final = 0.7
UNIT_STRENGTH: Final = 1.0
EDGE_OFFSET_FRACTION: Final = 0.05
FIG4_WIDTH: Final = 0.25
FIG5_WIDTHS: Final = (0.4, 0.2, 0.1, 0.05, 0.025)
D1_EPSILON: Final = 0.05
D1_STRENGTHS: Final = tuple(float(s) for s in np.geomspace(0.1, 10.0, 25))

logger = logging.getLogger(__name__)


@dataclass
class FigureData:
    """One figure's table and what the gnuplot sidecar should draw."""

    name: FigureName
    description: str
    table: ResultTable
    template: str
    plot_columns: list[str] = field(default_factory=list)


def _meta(name: FigureName, description: str, epsilon: float) -> dict[str, str]:
    return {
        "figure": name,
        "description": description,
        "epsilon": f"{epsilon:.12g}",
        "version": __version__,
    }


def _fig1(epsilon: float, samples: int) -> FigureData:
    description = "gap mode in the first tongue, lambda = 0.7"
    delta = solve_delta(FIG1_STRENGTH, epsilon, 1)
    mode = build_profile(delta, epsilon, FIG1_STRENGTH, PROFILE_HALF_WINDOW, samples)
    meta = _meta("fig1", description, epsilon) | {
        "lambda": f"{FIG1_STRENGTH:.12g}",
        "delta": f"{delta:.12g}",
        "measured_decay": f"{mode.measured_decay:.12g}",
    }
    table = ResultTable(columns=("t", "x"), meta=meta)
    table.extend(zip(mode.profile.t.tolist(), mode.profile.x.tolist()))
    return FigureData("fig1", description, table, "profile.gp.jinja", ["x"])


def _fig2(epsilon: float, samples: int) -> FigureData:
    description = "decaying gap mode against a quasiperiodic mode just below the gap"
    gap = gap_interval(epsilon, 1)
    delta = solve_delta(UNIT_STRENGTH, epsilon, 1)
    mode = build_profile(delta, epsilon, UNIT_STRENGTH, PROFILE_HALF_WINDOW, samples)
    offset = EDGE_OFFSET_FRACTION * gap.width
    edge = edge_profile(epsilon, 1, offset, PROFILE_HALF_WINDOW, samples)
    meta = _meta("fig2", description, epsilon) | {
        "lambda": f"{UNIT_STRENGTH:.12g}",
        "delta_gap_mode": f"{delta:.12g}",
        "delta_edge_mode": f"{gap.lower - offset:.12g}",
    }
    table = ResultTable(columns=("t", "x_gap", "x_edge"), meta=meta)
    table.extend(zip(mode.profile.t.tolist(), mode.profile.x.tolist(), edge.x.tolist()))
    return FigureData("fig2", description, table, "profile.gp.jinja", ["x_gap", "x_edge"])


def _fig3(epsilon: float, samples: int) -> FigureData:
    description = "gap modes in the first three tongues, |lambda| = 1"
    meta = _meta("fig3", description, epsilon)
    columns: list[list[float]] = []
    t: list[float] = []
    for n in (1, 2, 3):
        strength = gap_interval(epsilon, n).admissible_sign * UNIT_STRENGTH
        delta = solve_delta(strength, epsilon, n)
        mode = build_profile(delta, epsilon, strength, PROFILE_HALF_WINDOW, samples)
        meta[f"gap{n}"] = f"lambda={strength:.12g} delta={delta:.12g}"
        t = mode.profile.t.tolist()
        columns.append(mode.profile.x.tolist())
    table = ResultTable(columns=("t", "x_gap1", "x_gap2", "x_gap3"), meta=meta)
    table.extend(zip(t, *columns))
    return FigureData(
        "fig3", description, table, "profile.gp.jinja", ["x_gap1", "x_gap2", "x_gap3"]
    )


def _fig4(epsilon: float, max_periods: int) -> FigureData:
    description = "Gaussian and Lorentzian kicks of width 0.25, lambda = 1"
    dirac = solve_delta(UNIT_STRENGTH, epsilon, 1)
    gap = gap_interval(epsilon, 1)
    meta = _meta("fig4", description, epsilon) | {
        "gap_lower": f"{gap.lower:.12g}",
        "gap_upper": f"{gap.upper:.12g}",
    }
    table = ResultTable(columns=("kick", "width", "delta", "delta_dirac", "deviation"), meta=meta)
    params = MathieuParams(delta=dirac, epsilon=epsilon)
    for kick in (
        KickSpec.gaussian(UNIT_STRENGTH, FIG4_WIDTH),
        KickSpec.lorentzian(UNIT_STRENGTH, FIG4_WIDTH),
    ):
        mode = solve_bvp(shooting_problem(params, kick, max_periods), 1)
        table.append((str(kick.kind), FIG4_WIDTH, mode.delta, dirac, abs(mode.delta - dirac)))
    return FigureData("fig4", description, table, "bars.gp.jinja", ["delta"])


def _fig5(epsilon: float, max_periods: int) -> FigureData:
    description = "Gaussian kicks of decreasing width, lambda = 1"
    rows = width_sweep(epsilon, UNIT_STRENGTH, 1, FIG5_WIDTHS, max_periods=max_periods)
    meta = _meta("fig5", description, epsilon) | extrapolation_meta(rows)
    table = ResultTable(columns=("width", "delta", "delta_dirac", "deviation"), meta=meta)
    table.extend((row.width, row.delta, row.delta_dirac, row.deviation) for row in rows)
    return FigureData("fig5", description, table, "table.gp.jinja", ["delta", "delta_dirac"])


def _d1curve() -> FigureData:
    description = "numerical delta1 against both closed forms across the first gap"
    flow = spectral_flow(D1_EPSILON, 1, D1_STRENGTHS)
    table = ResultTable(
        columns=("lambda", "delta1_numeric", "delta1_formula", "delta1_displayed"),
        meta=_meta("d1curve", description, D1_EPSILON),
    )
    table.extend(
        (p.strength, p.delta1, delta1_of_lambda(p.strength), delta1_of_lambda_displayed(p.strength))
        for p in flow
    )
    return FigureData(
        "d1curve",
        description,
        table,
        "table.gp.jinja",
        ["delta1_numeric", "delta1_formula", "delta1_displayed"],
    )


def build_figure(name: FigureName, epsilon: float, config: Config) -> FigureData:
    """Compute the data behind one figure."""
    logger.info(f"Computing {name} at epsilon={epsilon:g}")
    match name:
        case "fig1":
            return _fig1(epsilon, config.profile_samples)
        case "fig2":
            return _fig2(epsilon, config.profile_samples)
        case "fig3":
            return _fig3(epsilon, config.profile_samples)
        case "fig4":
            return _fig4(epsilon, config.max_match_periods)
        case "fig5":
            return _fig5(epsilon, config.max_match_periods)
        case "d1curve":
            return _d1curve()
        case "all":
            raise ValueError("'all' is expanded by the caller")


def _template_env(templates_dir: Path) -> Environment:
    return Environment(
        loader=FileSystemLoader(templates_dir),
        undefined=StrictUndefined,
        trim_blocks=True,
        lstrip_blocks=True,
        autoescape=False,  # gnuplot scripts, not HTML  # nosec B701
    )


def render_gnuplot(figure: FigureData, data_file: Path, templates_dir: Path) -> str:
    """Render the gnuplot script that draws ``data_file``.

    Raises:
        ValueError: the template is missing
    """
    try:
        template = _template_env(templates_dir).get_template(figure.template)
    except TemplateNotFound as e:
        raise ValueError(
            f"Plot template not found: {e.name}. Expected templates in {templates_dir}"
        ) from e
    columns = list(figure.table.columns)
    return template.render(
        title=figure.description,
        data_file=data_file.name,
        image_file=data_file.with_suffix(".png").name,
        x_column=1,
        x_label=columns[0],
        series=[(columns.index(name) + 1, name) for name in figure.plot_columns],
    )


def emit_figure_data(
    params: FiguresParams,
    config: Config,
    output_dir: Path,
    fmt: OutputFormat = "csv",
) -> list[Path]:
    """Write one data file per selected figure and a manifest.toml.

    Returns:
        Paths of every file written, manifest last
    """
    written: list[Path] = []
    manifest: dict[str, object] = {
        "package": "arnold-gap-modes",
        "version": __version__,
        "command": params.canonical(),
        "figures": {},
    }
    entries: dict[str, dict[str, str]] = {}
    for name in params.selected:
        figure = build_figure(name, params.epsilon, config)
        data_path = figure.table.write(output_dir / f"{name}.{fmt}", fmt)
        written.append(data_path)
        entry = {"file": data_path.name, "description": figure.description}
        entry |= {k: v for k, v in figure.table.meta.items() if k not in ("figure", "description")}

        if params.gnuplot:
            if fmt != "csv":
                logger.warning(f"Skipping gnuplot script for {name}: it reads CSV data only")
            else:
                script = output_dir / f"{name}.gp"
                script.write_text(
                    render_gnuplot(figure, data_path, config.templates_dir), encoding="utf-8"
                )
                written.append(script)
                entry["gnuplot"] = script.name
        entries[name] = entry
        logger.info(f"Wrote {data_path}")

    manifest["figures"] = entries
    written.append(TOMLHandler.write_manifest(manifest, output_dir / "manifest.toml"))
    return written
