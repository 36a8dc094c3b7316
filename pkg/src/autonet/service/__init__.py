"""HTTP service wrapping the agent runtime."""

from .app import create_app
from .serve import ServeRuntime

__all__ = ["ServeRuntime", "create_app"]
