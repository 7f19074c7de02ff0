"""Offline figure generation from the socnls CLI's emitted files."""
from .errors import EmptyInputError, SchemaError, SocplotsError
from .render import KINDS, render

__version__ = "0.1.0"

__all__ = ["render", "KINDS", "SocplotsError", "SchemaError", "EmptyInputError"]
