"""Bit-accurate workbench for approximate multipliers.

Models radix-4 Booth multipliers with truncated partial products (two
truncation flavors), a broken-array baseline, and a 2x2-block baseline;
characterizes their error statistics exactly; and measures their impact on
a fixed-point FIR filter.
"""

__version__ = "0.1.0"

from .arrays import multiply_bam, multiply_block2x2, multiply_blockapprox
from .booth import (
    DotDiagram,
    PartialProductRow,
    booth_recode,
    build_dot_diagram,
    dot_count,
    multiply_accurate,
    multiply_broken_t0,
    multiply_broken_t1,
    to_signed,
)
from .errors import BudgetExceededError, ConfigurationError, FixedPointOverflowError
from .fir import (
    FilterCoefficients,
    FixedPointFormat,
    SnrReport,
    TestbedConfig,
    compute_snr,
    fir_filter_fixed,
    fir_filter_real,
    fractional_delay,
    generate_signals,
    load_coefficients,
    quap,
    run_testbed,
    snr_sweep_vbl,
    snr_sweep_wl,
)
from .specs import MultiplierKind, MultiplierSpec, multiply, vector_multiply
from .stats import (
    DEFAULT_PAIR_BUDGET,
    ErrorAccumulator,
    ErrorReport,
    Histogram,
    error_histogram,
    merge,
    mse_vs_parameter,
    partial_sweep,
    sweep_exhaustive,
    sweep_sampled,
    to_report,
)

__all__ = [
    "BudgetExceededError",
    "ConfigurationError",
    "DEFAULT_PAIR_BUDGET",
    "DotDiagram",
    "ErrorAccumulator",
    "ErrorReport",
    "FilterCoefficients",
    "FixedPointFormat",
    "FixedPointOverflowError",
    "Histogram",
    "MultiplierKind",
    "MultiplierSpec",
    "PartialProductRow",
    "SnrReport",
    "TestbedConfig",
    "booth_recode",
    "build_dot_diagram",
    "compute_snr",
    "dot_count",
    "error_histogram",
    "fir_filter_fixed",
    "fir_filter_real",
    "fractional_delay",
    "generate_signals",
    "load_coefficients",
    "merge",
    "mse_vs_parameter",
    "multiply",
    "multiply_accurate",
    "multiply_bam",
    "multiply_block2x2",
    "multiply_blockapprox",
    "multiply_broken_t0",
    "multiply_broken_t1",
    "partial_sweep",
    "quap",
    "run_testbed",
    "snr_sweep_vbl",
    "snr_sweep_wl",
    "sweep_exhaustive",
    "sweep_sampled",
    "to_report",
    "to_signed",
    "vector_multiply",
    "__version__",
]
