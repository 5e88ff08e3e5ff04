from sandwich_sde.core.grid import TimeGrid, make_grid, tau_minus, tau_plus
from sandwich_sde.core.path import SamplePath
from sandwich_sde.core.rng import RngStream
from sandwich_sde.core.io import read_path_csv, write_path_csv, format_path_csv

__all__ = [
    "TimeGrid",
    "make_grid",
    "tau_minus",
    "tau_plus",
    "SamplePath",
    "RngStream",
    "read_path_csv",
    "write_path_csv",
    "format_path_csv",
]
