"""Rich console setup."""
from rich.console import Console

CONSOLE = Console(stderr=True)
