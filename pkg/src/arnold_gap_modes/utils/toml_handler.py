"""TOML handling utilities."""

import tomllib
from collections.abc import Mapping
from pathlib import Path
from typing import Any

import tomli_w


class TOMLHandler:
    """Handles TOML parsing and writing operations."""

    @staticmethod
    def load_config(config_path: str | Path) -> dict[str, Any]:
        """Load configuration from TOML file; a missing file is empty."""
        config_path = Path(config_path)
        if not config_path.exists():
            return {}

        with open(config_path, "rb") as f:
            return tomllib.load(f)

    @staticmethod
    def write_manifest(manifest: Mapping[str, Any], output_path: str | Path) -> Path:
        """Write a figure-run manifest as TOML."""
        output_path = Path(output_path)
        output_path.parent.mkdir(parents=True, exist_ok=True)

        with open(output_path, "wb") as f:
            tomli_w.dump(dict(manifest), f)
        return output_path

    @staticmethod
    def validate_toml_syntax(toml_content: str) -> bool:
        """True when ``toml_content`` parses; Config falls back to defaults otherwise."""
        try:
            tomllib.loads(toml_content)
            return True
        except tomllib.TOMLDecodeError:
            return False
