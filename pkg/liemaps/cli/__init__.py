"""CLI."""
from .maps import CliMaps
from .bench import CliBench
