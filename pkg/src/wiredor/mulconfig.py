"""Multiplier configuration shared by the bit-level model, the oracle, and the kernels."""

from dataclasses import dataclass
from enum import Enum

from .errors import DomainError, UnsupportedConfigError

# 2n-bit products must fit a single 64-bit accumulator word.
MAX_WIDTH = 32


class Variant(Enum):
    FLA = "fla"  # every active partial product on its own wordline
    PC2 = "pc2"  # top two partial products replaced by one precomputed sum
    PC3 = "pc3"  # precomputed sums over the top three partial products

    @classmethod
    def parse(cls, text: str) -> "Variant":
        try:
            return cls(text.strip().lower())
        except ValueError:
            names = ", ".join(v.value for v in cls)
            raise UnsupportedConfigError(f"unknown variant {text!r} (expected one of: {names})") from None


@dataclass(frozen=True)
class MulConfig:
    """Describes one approximate multiplier.

    ``width_n`` is the operand bit width; in ``fp_mode`` operands are
    hidden-1 significands, i.e. bit ``width_n - 1`` is guaranteed set.
    """

    variant: Variant
    width_n: int
    fp_mode: bool = False
    truncate: bool = False

    def __post_init__(self):
        if not isinstance(self.width_n, int) or not 2 <= self.width_n <= MAX_WIDTH:
            raise UnsupportedConfigError(f"width_n must be an integer in [2, {MAX_WIDTH}], got {self.width_n!r}")
        if self.variant is Variant.PC3 and not self.fp_mode:
            # Integer-mode pc3 line storage is undefined; only hidden-1 operands are supported.
            raise UnsupportedConfigError("pc3 is only defined for fp_mode (hidden-1) operands")
        if self.variant is Variant.PC3 and self.width_n < 3:
            raise UnsupportedConfigError("pc3 needs width_n >= 3 (no third partial product below that)")

    @property
    def product_bits(self) -> int:
        return 2 * self.width_n

    @property
    def truncation_mask(self) -> int:
        """Mask keeping the top n of the 2n product columns."""
        n = self.width_n
        return ((1 << n) - 1) << n

    def check_operand(self, value: int, role: str) -> None:
        if not isinstance(value, int) or value < 0 or value >= (1 << self.width_n):
            raise DomainError(f"{role} {value!r} outside [0, 2^{self.width_n})")
        if self.fp_mode and not (value >> (self.width_n - 1)) & 1:
            raise DomainError(f"{role} {value:#b} lacks the leading 1 required in fp_mode")

    def check_operands(self, a: int, b: int) -> None:
        self.check_operand(a, "multiplicand")
        self.check_operand(b, "multiplier")

    def label(self) -> str:
        """Short name like ``pc3_tr`` used in reports and CSV rows."""
        return self.variant.value + ("_tr" if self.truncate else "")
