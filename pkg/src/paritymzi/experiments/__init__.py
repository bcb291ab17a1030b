"""Scenario files, grid sweeps, figure presets, verification and the command line."""
from .engine import run
from .scenario import Scenario, SweepAxis, load_scenario, parse_scenario
from .table import SweepTable, emit, read_table
