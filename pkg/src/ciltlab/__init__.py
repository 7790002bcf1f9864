from .app import App
from .cli import main

__all__ = ["App", "main"]
