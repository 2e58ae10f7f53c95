from . import handlers, models
from .app import app

__all__ = ["app", "handlers", "models"]
