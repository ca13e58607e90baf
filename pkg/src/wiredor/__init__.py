"""Wired-OR in-SRAM approximate multiplier toolkit.

Bit-exact multiplier models (fla / pc2 / pc3, optionally truncated), a
floating-point layer for bfloat16 and float32, SRAM bank layout and
cycle-approximate accelerator simulation, config-driven energy/area
accounting, and a desk-scale DNN error harness.
"""

from .errors import (
    ConfigFileError,
    DomainError,
    MappingError,
    ModelFormatError,
    UnsupportedConfigError,
)
from .mulconfig import MAX_WIDTH, MulConfig, Variant
from .pp import LineSet, approx_mul, decode_lines, exact_mul, generate_pps

__version__ = "0.1.0"

__all__ = [
    "MAX_WIDTH",
    "MulConfig",
    "Variant",
    "LineSet",
    "approx_mul",
    "decode_lines",
    "exact_mul",
    "generate_pps",
    "DomainError",
    "UnsupportedConfigError",
    "MappingError",
    "ModelFormatError",
    "ConfigFileError",
    "__version__",
]
