"""Wordline budgets per multiplier variant and kernel packing into square SRAM banks."""

import math
from dataclasses import asdict, dataclass

from .errors import UnsupportedConfigError
from .fp import FpFormat
from .mulconfig import MulConfig, Variant
from .pp import decode_lines

__all__ = [
    "BankGeometry",
    "KernelLayout",
    "lines_required",
    "pack_bank",
    "activation_count",
]


@dataclass(frozen=True)
class BankGeometry:
    """A square SRAM bank; rows = cols = sqrt(8 * size_bytes)."""

    size_bytes: int
    rows: int
    cols: int

    def __post_init__(self):
        if self.size_bytes <= 0 or self.size_bytes & (self.size_bytes - 1):
            raise ValueError(f"bank size must be a power of two, got {self.size_bytes}")
        bits = self.size_bytes * 8
        side = math.isqrt(bits)
        if side * side != bits:
            raise ValueError(f"{self.size_bytes} bytes does not form a square bit array")
        if self.rows != side or self.cols != side:
            raise ValueError(f"bank must be square {side}x{side}, got {self.rows}x{self.cols}")

    @classmethod
    def from_bytes(cls, size_bytes: int) -> "BankGeometry":
        side = math.isqrt(size_bytes * 8)
        return cls(size_bytes, side, side)

    @classmethod
    def parse(cls, text: str) -> "BankGeometry":
        """Accepts byte counts or suffixed sizes like ``8kB`` / ``512KiB`` / ``1MB``."""
        t = text.strip().lower().replace(" ", "")
        for suffix, mult in (("kib", 1024), ("kb", 1024), ("k", 1024), ("mib", 1 << 20), ("mb", 1 << 20), ("m", 1 << 20), ("b", 1)):
            if t.endswith(suffix):
                return cls.from_bytes(int(t[: -len(suffix)]) * mult)
        return cls.from_bytes(int(t))


@dataclass(frozen=True)
class KernelLayout:
    """How kernel elements tile one bank: row-groups of padded wordlines x PE columns."""

    product_width_bits: int
    lines_per_element: int
    rows_per_group: int
    elements_per_row_group: int
    row_groups: int
    capacity_elements: int
    unused_bits: int

    def to_dict(self) -> dict:
        return asdict(self)


def lines_required(config: MulConfig) -> int:
    """Wordlines stored per kernel element under ``config``."""
    n = config.width_n
    if config.variant is Variant.FLA:
        return n
    if config.variant is Variant.PC2:
        # fp: top line + precomputed pair + n-2 low singles (second line elided).
        # int: slot 0 repurposed for the pair, singles for shifts n-1..1.
        return n
    if config.variant is Variant.PC3 and config.fp_mode:
        # Top line, three precomputed combos, and n-3 low singles.
        return n + 1
    raise UnsupportedConfigError(f"no line allocation defined for {config}")


def _next_pow2(x: int) -> int:
    return 1 << (x - 1).bit_length()


def pack_bank(geom: BankGeometry, config: MulConfig, fmt: FpFormat | None = None) -> KernelLayout:
    """Tile kernel elements into ``geom`` for ``config``.

    Row-groups are padded to a power of two so group addressing stays a pure
    bit-slice of the row address. ``fmt`` (when given) is cross-checked
    against the configured operand width.
    """
    if fmt is not None and config.width_n != fmt.sig_bits:
        raise UnsupportedConfigError(
            f"operand width n={config.width_n} does not match {fmt.name} significand ({fmt.sig_bits})"
        )
    n = config.width_n
    product_width = n if config.truncate else 2 * n
    lines = lines_required(config)
    rows_per_group = _next_pow2(lines)
    if geom.cols < product_width or geom.rows < rows_per_group:
        raise ValueError(
            f"bank {geom.rows}x{geom.cols} too small for one element "
            f"({rows_per_group} rows x {product_width} bits)"
        )
    elements_per_row_group = geom.cols // product_width
    row_groups = geom.rows // rows_per_group
    capacity = elements_per_row_group * row_groups
    used = capacity * lines * product_width
    return KernelLayout(
        product_width_bits=product_width,
        lines_per_element=lines,
        rows_per_group=rows_per_group,
        elements_per_row_group=elements_per_row_group,
        row_groups=row_groups,
        capacity_elements=capacity,
        unused_bits=geom.rows * geom.cols - used,
    )


def activation_count(b: int, config: MulConfig) -> int:
    """Simultaneously active wordlines when multiplying by ``b``."""
    return decode_lines(b, config).count
