"""HTTP service exposing graph metrics, bounds, figure data, and simulation."""
from .app import app, create_app

__all__ = ["app", "create_app"]
