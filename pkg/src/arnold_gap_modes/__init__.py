"""Arnold-tongue stability charts and kicked Mathieu gap modes."""

from importlib.metadata import PackageNotFoundError, version

try:
    __version__ = version("arnold-gap-modes")
except PackageNotFoundError:
    __version__ = "0.0.0+unknown"
