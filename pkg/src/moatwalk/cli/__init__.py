"""Command-line front end for moatwalk."""

from moatwalk.cli.app import cli, setup_app
from moatwalk.cli.plot import emit_plot, load_plot_input, project

__all__ = ["cli", "emit_plot", "load_plot_input", "project", "setup_app"]
