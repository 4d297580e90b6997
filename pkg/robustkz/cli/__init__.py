# Command-line surface: generators, solvers, coreset builder, checks and bench
from robustkz.cli.commands import app, main

__all__ = ["app", "main"]
