"""Wrapper/TAM co-optimization and power-constrained test scheduling for SOCs."""

from soctam.benchmark_io import CoreSpec, SocDesign, bundled_d695, load_design, parse_itc02, parse_native, parse_power_file
from soctam.wrapper import WrapperChain, WrapperConfig, TamTimePoint, design_wrapper, tam_time_table, test_time
from soctam.rectangles import RectangleSet, DiagonalKey, build_rectangles, compute_tmin, diagonal_key, sort_initial
from soctam.scheduler import Limits, Schedule, schedule

__version__ = "0.1.0"

__all__ = [
    "CoreSpec",
    "SocDesign",
    "bundled_d695",
    "load_design",
    "parse_itc02",
    "parse_native",
    "parse_power_file",
    "WrapperChain",
    "WrapperConfig",
    "TamTimePoint",
    "design_wrapper",
    "tam_time_table",
    "test_time",
    "RectangleSet",
    "DiagonalKey",
    "build_rectangles",
    "compute_tmin",
    "diagonal_key",
    "sort_initial",
    "Limits",
    "Schedule",
    "schedule",
]
