"""Validated parameter sets for every experiment the CLI can run."""

import math
from pathlib import Path
from typing import Annotated, Any, ClassVar, Literal, Self

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

SMALL_EPSILON = 1e-4

FigureName = Literal["fig1", "fig2", "fig3", "fig4", "fig5", "d1curve", "all"]
FIGURES: tuple[FigureName, ...] = ("fig1", "fig2", "fig3", "fig4", "fig5", "d1curve")


class CommandParams(BaseModel):
    """Base for per-command parameters; renders its own canonical command line."""

    model_config = ConfigDict(extra="forbid", frozen=True)

    flag_names: ClassVar[dict[str, str]] = {"strength": "lambda", "strengths": "lambdas"}
    positional: ClassVar[tuple[str, ...]] = ()

    def canonical(self) -> str:
        """Command line that reproduces this parameter set."""
        data = self.model_dump(mode="json")
        parts = [str(data.pop("command"))]
        for name, value in data.items():
            if name in self.positional:
                parts.append(_token(value))
                continue
            flag = "--" + self.flag_names.get(name, name).replace("_", "-")
            if isinstance(value, bool):
                if value:
                    parts.append(flag)
            elif isinstance(value, list):
                parts.append(f"{flag} {','.join(_token(v) for v in value)}")
            elif value is not None:
                parts.append(f"{flag} {_token(value)}")
        return " ".join(parts)

    def echo(self) -> dict[str, str]:
        """Parameter values as metadata strings."""
        return {
            name: ",".join(_token(v) for v in value) if isinstance(value, list) else _token(value)
            for name, value in self.model_dump(mode="json", exclude={"command"}).items()
        }


def _token(value: Any) -> str:
    if isinstance(value, float):
        return f"{value:.12g}"
    return str(value)


def _strictly_increasing(values: list[float], what: str) -> list[float]:
    if any(b <= a for a, b in zip(values, values[1:])):
        raise ValueError(f"{what} must be strictly increasing")
    return values


class ChartParams(CommandParams):
    command: Literal["chart"] = "chart"
    delta_min: float = 0.0
    delta_max: float = 2.5
    epsilon_min: float = Field(default=0.0, ge=0)
    epsilon_max: float = Field(default=0.5, ge=0)
    delta_points: int = Field(default=50, ge=1)
    epsilon_points: int = Field(default=20, ge=1)


class EdgesParams(CommandParams):
    """Gap edges; epsilon = 0 is reported through the small-epsilon limit."""

    command: Literal["edges"] = "edges"
    epsilon: float = Field(ge=0)
    gap: int = Field(default=1, ge=1)

    @property
    def effective_epsilon(self) -> float:
        return self.epsilon if self.epsilon > 0 else SMALL_EPSILON


class LambdaParams(CommandParams):
    command: Literal["lambda"] = "lambda"
    delta: float
    epsilon: float = Field(gt=0)
    shooting: bool = False


class _KickedParams(CommandParams):
    strength: float
    epsilon: float = Field(gt=0)
    gap: int = Field(default=1, ge=1)

    @field_validator("strength")
    @classmethod
    def _nonzero(cls, value: float) -> float:
        if value == 0:
            raise ValueError("lambda = 0 binds no gap mode")
        return value


class SolveParams(_KickedParams):
    command: Literal["solve"] = "solve"


class ProfileParams(_KickedParams):
    command: Literal["profile"] = "profile"
    half_window: float = Field(default=40 * math.pi, gt=0)
    samples: int = Field(default=4000, ge=3)


class FlowParams(CommandParams):
    command: Literal["flow"] = "flow"
    epsilon: float = Field(gt=0)
    gap: int = Field(default=1, ge=1)
    strengths: list[float] = Field(min_length=1)

    @field_validator("strengths")
    @classmethod
    def _sorted(cls, values: list[float]) -> list[float]:
        if 0.0 in values:
            raise ValueError("lambda = 0 binds no gap mode")
        return _strictly_increasing(values, "lambdas")


class AsymParams(CommandParams):
    command: Literal["asym"] = "asym"
    epsilons: list[float] = Field(min_length=1)
    strengths: list[float] = Field(min_length=1)

    @field_validator("epsilons")
    @classmethod
    def _small(cls, values: list[float]) -> list[float]:
        if any(not 0 < v <= 0.1 for v in values):
            raise ValueError("epsilons must lie in (0, 0.1]")
        return values

    @field_validator("strengths")
    @classmethod
    def _positive(cls, values: list[float]) -> list[float]:
        if any(v <= 0 for v in values):
            raise ValueError("lambdas must be positive")
        return values


class BvpParams(CommandParams):
    command: Literal["bvp"] = "bvp"
    kick: Literal["gaussian", "lorentzian", "tae-shear"]
    strength: float = 1.0
    width: float | None = Field(default=None, gt=0)
    shear: float | None = Field(default=None, gt=0)
    epsilon: float = Field(gt=0)
    gap: int = Field(default=1, ge=1)
    samples: int = Field(default=4000, ge=3)

    @model_validator(mode="after")
    def _shape(self) -> Self:
        if self.kick == "tae-shear" and self.shear is None:
            raise ValueError("the tae-shear kick needs --shear")
        if self.kick != "tae-shear" and self.width is None:
            raise ValueError(f"the {self.kick} kick needs --width")
        return self


class WidthSweepParams(CommandParams):
    command: Literal["width-sweep"] = "width-sweep"
    kick: Literal["gaussian", "lorentzian"] = "gaussian"
    strength: float = 1.0
    epsilon: float = Field(gt=0)
    gap: int = Field(default=1, ge=1)
    widths: list[float] = Field(min_length=2)

    @field_validator("widths")
    @classmethod
    def _descending(cls, values: list[float]) -> list[float]:
        if any(v <= 0 for v in values):
            raise ValueError("widths must be positive")
        if any(b >= a for a, b in zip(values, values[1:])):
            raise ValueError("widths must be strictly decreasing")
        return values


class FiguresParams(CommandParams):
    command: Literal["figures"] = "figures"
    positional: ClassVar[tuple[str, ...]] = ("figure",)
    figure: FigureName = "all"
    epsilon: float = Field(default=0.5, gt=0, le=1)
    gnuplot: bool = False

    @property
    def selected(self) -> tuple[FigureName, ...]:
        return FIGURES if self.figure == "all" else (self.figure,)


AnyParams = Annotated[
    ChartParams
    | EdgesParams
    | LambdaParams
    | SolveParams
    | ProfileParams
    | FlowParams
    | AsymParams
    | BvpParams
    | WidthSweepParams
    | FiguresParams,
    Field(discriminator="command"),
]


class RunConfig(BaseModel):
    """One validated experiment run."""

    model_config = ConfigDict(extra="forbid", frozen=True)

    params: AnyParams
    output_path: Path | None = None
    format: Literal["csv", "json"] = "csv"

    @property
    def command(self) -> str:
        return self.params.command
