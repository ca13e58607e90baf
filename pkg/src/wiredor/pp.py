"""Bit-exact model of unsigned multiplication by wired-OR of partial-product wordlines.

A multiplicand ``a`` is held in SRAM as shifted copies (one wordline per
shift); reading several wordlines at once yields the bitwise OR of their
contents, which under-approximates the sum of the active partial products.
The pc2/pc3 variants replace groups of top wordlines with their exact
precomputed sums, recovering accuracy where collisions hurt most.
"""

from dataclasses import dataclass
from functools import reduce
from operator import or_

from .errors import DomainError, UnsupportedConfigError
from .mulconfig import MulConfig, Variant

__all__ = [
    "Line",
    "LineSet",
    "single",
    "combo",
    "generate_pps",
    "decode_lines",
    "approx_mul",
    "exact_mul",
]


@dataclass(frozen=True)
class Line:
    """One wordline; it stores the exact sum of ``a << s`` over ``shifts``.

    A single partial product has one shift; precomputed-sum lines have two
    or more, held in strictly descending order.
    """

    shifts: tuple[int, ...]

    def __post_init__(self):
        if not self.shifts:
            raise ValueError("a line must cover at least one shift")
        if any(s < 0 for s in self.shifts):
            raise ValueError("negative shift")
        if list(self.shifts) != sorted(set(self.shifts), reverse=True):
            raise ValueError("shifts must be distinct and descending")

    @property
    def is_combo(self) -> bool:
        return len(self.shifts) > 1

    @property
    def shift(self) -> int:
        if self.is_combo:
            raise ValueError("combo line has no single shift")
        return self.shifts[0]

    def stored_value(self, a: int) -> int:
        return sum(a << s for s in self.shifts)

    def label(self, width_n: int) -> str:
        """Conventional letter name: the top shift is 'A', next 'B', ..."""
        return "".join(_shift_letter(s, width_n) for s in self.shifts)


def _shift_letter(s: int, width_n: int) -> str:
    idx = width_n - 1 - s
    return chr(ord("A") + idx) if 0 <= idx < 26 else f"pp{s}"


def single(shift: int) -> Line:
    return Line((shift,))


def combo(*shifts: int) -> Line:
    if len(shifts) < 2:
        raise ValueError("combo lines hold at least two partial products")
    return Line(tuple(sorted(shifts, reverse=True)))


@dataclass(frozen=True)
class LineSet:
    """Wordlines activated for one multiplication.

    ``dropped_bits`` lists multiplier bit positions whose partial product
    cannot be read because its wordline is repurposed for a precomputed sum
    (integer-mode pc2 only).
    """

    lines: frozenset[Line]
    dropped_bits: frozenset[int] = frozenset()

    def __post_init__(self):
        if sum(1 for ln in self.lines if ln.is_combo) > 1:
            raise ValueError("at most one precomputed-sum line may be active")

    @property
    def count(self) -> int:
        return len(self.lines)

    def or_value(self, a: int) -> int:
        return reduce(or_, (ln.stored_value(a) for ln in self.lines), 0)

    def labels(self, width_n: int) -> list[str]:
        return sorted((ln.label(width_n) for ln in self.lines), key=lambda t: (len(t), t))


def generate_pps(a: int, b: int, config: MulConfig) -> list[tuple[int, int]]:
    """Partial products of ``a * b``: ``(shift, a << shift)`` per set bit of ``b``.

    Returned in descending shift order; empty when ``b`` is zero.
    """
    config.check_operands(a, b)
    return [(s, a << s) for s in range(config.width_n - 1, -1, -1) if (b >> s) & 1]


def decode_lines(b: int, config: MulConfig) -> LineSet:
    """Wordlines the address decoder activates for multiplier word ``b``."""
    config.check_operand(b, "multiplier")
    n = config.width_n
    top, second, third = n - 1, n - 2, n - 3

    if config.variant is Variant.FLA:
        lines = {single(s) for s in range(n) if (b >> s) & 1}
        return LineSet(frozenset(lines))

    if config.variant is Variant.PC2 and config.fp_mode:
        # Hidden 1 keeps the top line always active; its standalone wordline
        # pairs with the precomputed top-two sum, so the second line is elided.
        lines = {combo(top, second) if (b >> second) & 1 else single(top)}
        lines.update(single(s) for s in range(second) if (b >> s) & 1)
        return LineSet(frozenset(lines))

    if config.variant is Variant.PC2:
        # Storage-faithful integer mode: the shift-0 wordline holds the
        # precomputed top-two sum, so the LSB partial product is unreadable.
        lines: set[Line] = set()
        dropped: set[int] = set()
        has_top = (b >> top) & 1
        has_second = (b >> second) & 1
        if has_top and has_second:
            lines.add(combo(top, second))
        elif has_top:
            lines.add(single(top))
        elif has_second:
            if second >= 1:
                lines.add(single(second))
            else:
                dropped.add(second)
        lines.update(single(s) for s in range(1, second) if (b >> s) & 1)
        if n > 2 and b & 1:
            dropped.add(0)
        return LineSet(frozenset(lines), frozenset(dropped))

    if config.variant is Variant.PC3 and config.fp_mode:
        has_second = (b >> second) & 1
        has_third = (b >> third) & 1
        if has_second and has_third:
            head = combo(top, second, third)
        elif has_second:
            head = combo(top, second)
        elif has_third:
            head = combo(top, third)
        else:
            head = single(top)
        lines = {head}
        lines.update(single(s) for s in range(third) if (b >> s) & 1)
        return LineSet(frozenset(lines))

    raise UnsupportedConfigError(f"no line decode defined for {config}")


def approx_mul(a: int, b: int, config: MulConfig) -> int:
    """Wired-OR product of ``a`` and ``b``; at most ``2 * width_n`` bits.

    Precomputed-sum lines contribute their exact stored value; everything
    else is ORed columnwise. With ``truncate`` the low n columns read zero.
    """
    config.check_operand(a, "multiplicand")
    result = decode_lines(b, config).or_value(a)
    if config.truncate:
        result &= config.truncation_mask
    return result


def exact_mul(a: int, b: int, config: MulConfig | None = None) -> int:
    """Reference product for error metrics."""
    if config is not None:
        limit = 1 << config.width_n
        if not (0 <= a < limit and 0 <= b < limit):
            raise DomainError(f"operands ({a}, {b}) outside [0, 2^{config.width_n})")
    return a * b
