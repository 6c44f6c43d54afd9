"""Configuration management for the gap-mode toolkit."""

import copy
import os
import sys
from functools import cached_property
from pathlib import Path
from typing import Any, Final, TypedDict, cast

from arnold_gap_modes.utils.toml_handler import TOMLHandler

OUTPUT_FORMATS: Final = ("csv", "json")


class SolverConfig(TypedDict):
    """Integrator and root-finder tolerances."""

    tol: float
    edge_tol: float
    root_tol: float


class ScanConfig(TypedDict):
    """Coarse scans used to bracket gap edges and shooting roots."""

    edge_scan_points: int
    max_match_periods: int


class ExperimentConfig(TypedDict):
    """Defaults for experiments whose modulation strength is not given."""

    default_epsilon: float
    profile_samples: int


class OutputConfig(TypedDict):
    """Where and how result tables are written."""

    directory: str
    format: str


class ConfigDict(TypedDict):
    """Complete configuration structure."""

    solver: SolverConfig
    scan: ScanConfig
    experiments: ExperimentConfig
    output: OutputConfig


DEFAULT_CONFIG: Final[ConfigDict] = {
    "solver": {"tol": 1e-10, "edge_tol": 1e-9, "root_tol": 1e-12},
    "scan": {"edge_scan_points": 400, "max_match_periods": 64},
    "experiments": {"default_epsilon": 0.5, "profile_samples": 4000},
    "output": {"directory": "results", "format": "csv"},
}


class Config:
    """Configuration management using TOML files and environment variables."""

    _config_path: Final[Path]
    _data: Final[ConfigDict]
    _syntax_valid: Final[bool]

    def __init__(
        self,
        config_path: str | Path | None = None,
    ) -> None:
        """Initialize configuration.

        Args:
            config_path: Path to configuration file. Defaults to config/config.toml
        """
        if config_path is None:
            project_root = Path(__file__).parent.parent.parent.parent
            config_path = project_root / "config" / "config.toml"

        self._config_path = Path(config_path)
        self._syntax_valid = self._check_syntax(self._config_path)
        self._data = (
            self._get_config_data(self._config_path)
            if self._syntax_valid
            else cast(ConfigDict, copy.deepcopy(DEFAULT_CONFIG))
        )

    @staticmethod
    def _check_syntax(config_path: Path) -> bool:
        if not config_path.exists():
            return True
        return TOMLHandler.validate_toml_syntax(config_path.read_text(encoding="utf-8"))

    def _get_config_data(self, config_path: Path) -> ConfigDict:
        """Load configuration data from the specified TOML file."""
        data = TOMLHandler.load_config(config_path)
        merged_data = deep_merge_dicts(cast(dict[str, Any], DEFAULT_CONFIG), data)
        return cast(ConfigDict, merged_data)

    @property
    def path(self) -> Path:
        return self._config_path

    @cached_property
    def solver_tol(self) -> float:
        """Local error tolerance of the adaptive integrator."""
        return float(self._data.get("solver", {}).get("tol", 1e-10))

    @cached_property
    def edge_tol(self) -> float:
        """Band on ||trace| - 2| classified as a gap edge."""
        return float(self._data.get("solver", {}).get("edge_tol", 1e-9))

    @cached_property
    def root_tol(self) -> float:
        return float(self._data.get("solver", {}).get("root_tol", 1e-12))

    @cached_property
    def edge_scan_points(self) -> int:
        return int(self._data.get("scan", {}).get("edge_scan_points", 400))

    @cached_property
    def max_match_periods(self) -> int:
        """Cap on the shooting radius for slowly decaying kick tails."""
        return int(self._data.get("scan", {}).get("max_match_periods", 64))

    @cached_property
    def default_epsilon(self) -> float:
        return float(self._data.get("experiments", {}).get("default_epsilon", 0.5))

    @cached_property
    def profile_samples(self) -> int:
        return int(self._data.get("experiments", {}).get("profile_samples", 4000))

    @cached_property
    def output_format(self) -> str:
        return str(self._data.get("output", {}).get("format", "csv"))

    @cached_property
    def output_dir(self) -> Path:
        """Directory for result files."""
        # Environment variable wins (useful for batch jobs)
        env_dir = os.getenv("GAP_MODES_OUTPUT_DIR")
        if env_dir:
            return Path(env_dir)
        return Path(self._data.get("output", {}).get("directory", "results"))

    @cached_property
    def templates_dir(self) -> Path:
        """Directory holding the gnuplot script templates."""
        env_dir = os.getenv("GAP_MODES_TEMPLATES_DIR")
        if env_dir:
            return Path(env_dir)
        return Path(__file__).parent.parent / "templates"

    def validate(self) -> tuple[bool, list[str]]:
        """Validate configuration values.

        Returns:
            Tuple of (is_valid, list_of_errors)
        """
        errors: list[str] = []

        if not self._config_path.exists():
            errors.append(f"Configuration file not found: {self._config_path}")
        elif not self._syntax_valid:
            errors.append(f"Invalid TOML syntax in {self._config_path}")

        for name in ("solver_tol", "edge_tol", "root_tol"):
            if not getattr(self, name) > 0:
                errors.append(f"{name} must be greater than 0")

        if self.edge_scan_points < 10:
            errors.append("edge_scan_points must be at least 10")

        if self.max_match_periods < 1:
            errors.append("max_match_periods must be at least 1")

        if self.profile_samples < 3:
            errors.append("profile_samples must be at least 3")

        if not 0 < self.default_epsilon <= 1:
            errors.append("default_epsilon must lie in (0, 1]")

        if self.output_format not in OUTPUT_FORMATS:
            errors.append(
                f"output format must be one of {', '.join(OUTPUT_FORMATS)}, got {self.output_format}"
            )

        return len(errors) == 0, errors


def deep_merge_dicts(dict1: dict[str, Any], dict2: dict[str, Any]) -> dict[str, Any]:
    """Recursively combine two dictionaries, dict2 winning on common keys.

    Nested dictionaries are merged rather than replaced.

    Args:
        dict1: The base dictionary
        dict2: The dictionary with overriding values

    Returns:
        A new dictionary with the deeply combined key-value pairs
    """
    result = copy.deepcopy(dict1)

    for key, value in dict2.items():
        if key in result and isinstance(result[key], dict) and isinstance(value, dict):
            result[key] = deep_merge_dicts(result[key], cast(dict[str, Any], value))
        else:
            result[key] = copy.deepcopy(value)
    return result


def main() -> None:
    """CLI entry point for configuration validation."""
    import argparse

    parser = argparse.ArgumentParser(description="Configuration management")
    parser.add_argument(
        "--validate", action="store_true", help="Validate configuration"
    )
    parser.add_argument("--config", type=str, help="Path to configuration file")

    args = parser.parse_args()

    if args.validate:
        config = Config(args.config)
        is_valid, errors = config.validate()

        if is_valid:
            print("Configuration is valid")
            sys.exit(0)
        else:
            print("Configuration validation failed:")
            for error in errors:
                print(f"  - {error}")
            sys.exit(1)
    else:
        parser.print_help()


if __name__ == "__main__":
    main()
