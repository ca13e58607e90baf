"""Floating-point multiply (bfloat16, float32) on the approximate mantissa path.

Only the significand product is approximated: signs XOR, exponents add
exactly (saturating to inf, flushing to signed zero), zero operands bypass
the array, inf/nan follow the usual conventions. Results are truncated, not
rounded, matching a datapath that simply drops low columns.
"""

import math
import struct
from dataclasses import dataclass
from enum import Enum

import numpy as np

from . import kernels
from .errors import UnsupportedConfigError
from .mulconfig import MulConfig
from .pp import approx_mul

__all__ = [
    "FpFormat",
    "FpClass",
    "FpValue",
    "ErrorStats",
    "BFLOAT16",
    "FLOAT32",
    "FORMATS",
    "decode",
    "encode",
    "fp_mul",
    "to_float",
    "from_float",
    "mantissa_error_table",
]


@dataclass(frozen=True)
class FpFormat:
    """Field widths of an IEEE-style format; ``mantissa_bits`` excludes the hidden 1."""

    name: str
    exponent_bits: int
    mantissa_bits: int
    bias: int

    @property
    def width(self) -> int:
        return 1 + self.exponent_bits + self.mantissa_bits

    @property
    def sig_bits(self) -> int:
        """Significand width n including the hidden 1."""
        return self.mantissa_bits + 1

    @property
    def exponent_field_max(self) -> int:
        return (1 << self.exponent_bits) - 1


BFLOAT16 = FpFormat("bfloat16", 8, 7, 127)
FLOAT32 = FpFormat("float32", 8, 23, 127)
FORMATS = {f.name: f for f in (BFLOAT16, FLOAT32)}


class FpClass(Enum):
    ZERO = "zero"
    NORMAL = "normal"
    INF = "inf"
    NAN = "nan"


@dataclass(frozen=True)
class FpValue:
    """Decoded value: unbiased exponent, hidden-1 significand when normal."""

    sign: int
    klass: FpClass
    exponent: int = 0
    significand: int = 0


def decode(bits: int, fmt: FpFormat) -> FpValue:
    """Split a raw word into fields; subnormal inputs are flushed to zero."""
    if not 0 <= bits < (1 << fmt.width):
        raise ValueError(f"word {bits:#x} wider than {fmt.name}")
    mb = fmt.mantissa_bits
    sign = (bits >> (fmt.width - 1)) & 1
    e_field = (bits >> mb) & fmt.exponent_field_max
    m_field = bits & ((1 << mb) - 1)
    if e_field == 0:
        return FpValue(sign, FpClass.ZERO)
    if e_field == fmt.exponent_field_max:
        return FpValue(sign, FpClass.NAN if m_field else FpClass.INF)
    return FpValue(sign, FpClass.NORMAL, e_field - fmt.bias, m_field | (1 << mb))


def encode(v: FpValue, fmt: FpFormat) -> int:
    """Pack a value; exponent overflow saturates to inf, underflow flushes to zero.

    The significand is stored by truncation: low bits beyond the field are
    simply masked off.
    """
    mb = fmt.mantissa_bits
    sign_bit = (v.sign & 1) << (fmt.width - 1)
    if v.klass is FpClass.ZERO:
        return sign_bit
    if v.klass is FpClass.INF:
        return sign_bit | (fmt.exponent_field_max << mb)
    if v.klass is FpClass.NAN:
        return sign_bit | (fmt.exponent_field_max << mb) | (1 << (mb - 1))
    n = fmt.sig_bits
    if not (1 << (n - 1)) <= v.significand < (1 << n):
        raise ValueError(f"significand {v.significand:#x} not a normalized {n}-bit value")
    biased = v.exponent + fmt.bias
    if biased >= fmt.exponent_field_max:
        return sign_bit | (fmt.exponent_field_max << mb)
    if biased < 1:
        return sign_bit
    return sign_bit | (biased << mb) | (v.significand & ((1 << mb) - 1))


def _check_pair(fmt: FpFormat, config: MulConfig) -> None:
    if not config.fp_mode or config.width_n != fmt.sig_bits:
        raise UnsupportedConfigError(
            f"config ({config.label()}, n={config.width_n}, fp_mode={config.fp_mode}) "
            f"does not match {fmt.name} (needs fp_mode, n={fmt.sig_bits})"
        )


def fp_mul(x: int, y: int, fmt: FpFormat, config: MulConfig) -> int:
    """Multiply two raw words; mantissas go through :func:`wiredor.pp.approx_mul`."""
    _check_pair(fmt, config)
    vx = decode(x, fmt)
    vy = decode(y, fmt)
    sign = vx.sign ^ vy.sign
    kx, ky = vx.klass, vy.klass
    if (
        kx is FpClass.NAN
        or ky is FpClass.NAN
        or (kx is FpClass.INF and ky is FpClass.ZERO)
        or (ky is FpClass.INF and kx is FpClass.ZERO)
    ):
        return encode(FpValue(sign, FpClass.NAN), fmt)
    if kx is FpClass.INF or ky is FpClass.INF:
        return encode(FpValue(sign, FpClass.INF), fmt)
    if kx is FpClass.ZERO or ky is FpClass.ZERO:
        # Zero bypass: the approximate array is never consulted.
        return encode(FpValue(sign, FpClass.ZERO), fmt)

    n = fmt.sig_bits
    p = approx_mul(vx.significand, vy.significand, config)
    if (p >> (2 * n - 1)) & 1:
        exponent = vx.exponent + vy.exponent + 1
        significand = p >> n
    else:
        exponent = vx.exponent + vy.exponent
        significand = p >> (n - 1)
    return encode(FpValue(sign, FpClass.NORMAL, exponent, significand), fmt)


def to_float(bits: int, fmt: FpFormat) -> float:
    """Exact Python float for a raw word (both formats fit a double)."""
    v = decode(bits, fmt)
    if v.klass is FpClass.ZERO:
        return -0.0 if v.sign else 0.0
    if v.klass is FpClass.INF:
        return -math.inf if v.sign else math.inf
    if v.klass is FpClass.NAN:
        return math.nan
    magnitude = math.ldexp(v.significand, v.exponent - (fmt.sig_bits - 1))
    return -magnitude if v.sign else magnitude


def from_float(value: float, fmt: FpFormat) -> int:
    """Raw word for a Python float: nearest float32, then mantissa truncation."""
    try:
        bits32 = struct.unpack("<I", struct.pack("<f", value))[0]
    except OverflowError:
        bits32 = 0x7F800000 | (0x80000000 if value < 0 else 0)
    v = decode(bits32, FLOAT32)
    if v.klass is FpClass.NORMAL and fmt.sig_bits < FLOAT32.sig_bits:
        v = FpValue(v.sign, v.klass, v.exponent, v.significand >> (FLOAT32.sig_bits - fmt.sig_bits))
    return encode(v, fmt)


@dataclass(frozen=True)
class ErrorStats:
    """Relative-error statistics of (exact - approx) / exact over significand pairs."""

    mean_rel_error: float
    max_rel_error: float
    exact_fraction: float
    pairs: int


def mantissa_error_table(
    fmt: FpFormat,
    config: MulConfig,
    sampling: str = "exhaustive",
    samples: int = 65536,
    seed: int = 0,
) -> ErrorStats:
    """Error statistics over hidden-1 significand pairs.

    ``sampling`` is ``"exhaustive"`` (all pairs; allowed only for n <= 12)
    or ``"random"`` (``samples`` seeded uniform pairs, deterministic per seed).
    """
    _check_pair(fmt, config)
    n = fmt.sig_bits
    lo, hi = 1 << (n - 1), 1 << n
    if sampling == "exhaustive":
        if n > 12:
            raise ValueError(f"exhaustive sweep needs n <= 12, got n={n}; use random sampling")
        sigs = np.arange(lo, hi, dtype=np.uint64)
        a, b = np.meshgrid(sigs, sigs, indexing="ij")
    elif sampling == "random":
        if samples < 1:
            raise ValueError("samples must be positive")
        rng = np.random.default_rng(seed)
        a = rng.integers(lo, hi, size=samples, dtype=np.uint64)
        b = rng.integers(lo, hi, size=samples, dtype=np.uint64)
    else:
        raise ValueError(f"unknown sampling mode {sampling!r}")

    approx = kernels.or_mul_words(a, b, config, validate=False).astype(np.float64)
    exact = a.astype(np.float64) * b.astype(np.float64)
    rel = (exact - approx) / exact
    return ErrorStats(
        mean_rel_error=float(rel.mean()),
        max_rel_error=float(rel.max()),
        exact_fraction=float((rel == 0.0).mean()),
        pairs=int(rel.size),
    )
