"""Link analysis toolkit for the FR1 / FR3 (7-24 GHz) / FR2 bands."""

from .errors import Fr3kitError

__version__ = "0.1.0"

__all__ = ["Fr3kitError", "__version__"]
