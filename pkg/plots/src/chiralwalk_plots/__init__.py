"""Figure rendering for chiralwalk CSV/JSON outputs."""

from .render import KINDS, FigureSpec, SchemaError, render

__version__ = "0.1.0"
