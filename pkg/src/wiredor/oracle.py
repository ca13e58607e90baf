"""Independent brute-force reference for the wired-OR multipliers.

Deliberately shares no code with :mod:`wiredor.pp`: each variant is
re-derived here from the physical picture (what each wordline stores, which
wordlines the decoder raises, and a per-column OR across the raised rows).
Used by tests and by the ``verify`` subcommand.
"""

from dataclasses import dataclass, field

from .mulconfig import MulConfig, Variant
from . import pp

__all__ = ["OracleReport", "oracle_or_mul", "exhaustive_compare"]


@dataclass
class OracleReport:
    config: MulConfig
    pairs_checked: int = 0
    mismatches: list[tuple[int, int, int, int]] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.mismatches


def _raised_rows(a: int, b: int, config: MulConfig) -> list[int]:
    """Stored integer value of every wordline the decoder raises for ``b``."""
    n = config.width_n
    wanted = [i for i in range(n) if (b >> i) & 1]

    if config.variant is Variant.FLA:
        return [a << s for s in wanted]

    if config.variant is Variant.PC2 and config.fp_mode:
        # Rows: the plain top copy, the stored top-two sum, and singles below.
        sum_top_two = (a << (n - 1)) + (a << (n - 2))
        rows = []
        if (n - 2) in wanted:
            rows.append(sum_top_two)
        else:
            rows.append(a << (n - 1))
        for s in wanted:
            if s < n - 2:
                rows.append(a << s)
        return rows

    if config.variant is Variant.PC2:
        # Physical array: shifts n-1..1 stored plainly; slot 0 repurposed
        # for the top-two sum, so a lone LSB request reads nothing.
        slot0 = (a << (n - 1)) + (a << (n - 2))
        rows = []
        top_wanted = (n - 1) in wanted
        second_wanted = (n - 2) in wanted
        if top_wanted and second_wanted:
            rows.append(slot0)
        else:
            if top_wanted:
                rows.append(a << (n - 1))
            if second_wanted and (n - 2) >= 1:
                rows.append(a << (n - 2))
        for s in wanted:
            if 1 <= s <= n - 3:
                rows.append(a << s)
        return rows

    if config.variant is Variant.PC3 and config.fp_mode:
        top = a << (n - 1)
        table = {
            (False, False): top,
            (True, False): top + (a << (n - 2)),
            (False, True): top + (a << (n - 3)),
            (True, True): top + (a << (n - 2)) + (a << (n - 3)),
        }
        rows = [table[((n - 2) in wanted, (n - 3) in wanted)]]
        for s in wanted:
            if s < n - 3:
                rows.append(a << s)
        return rows

    raise AssertionError(f"unreachable: {config}")


def oracle_or_mul(a: int, b: int, config: MulConfig) -> int:
    """Recompute the variant semantics from first principles."""
    config.check_operands(a, b)
    rows = _raised_rows(a, b, config)
    n = config.width_n
    low = n if config.truncate else 0
    result = 0
    for col in range(low, 2 * n):
        bit = 0
        for row in rows:
            bit |= (row >> col) & 1
        result |= bit << col
    return result


def supported_configs(n: int) -> list[MulConfig]:
    """Every multiplier configuration defined at width ``n``."""
    configs = []
    for truncate in (False, True):
        configs.append(MulConfig(Variant.FLA, n, fp_mode=False, truncate=truncate))
        configs.append(MulConfig(Variant.FLA, n, fp_mode=True, truncate=truncate))
        configs.append(MulConfig(Variant.PC2, n, fp_mode=False, truncate=truncate))
        configs.append(MulConfig(Variant.PC2, n, fp_mode=True, truncate=truncate))
        if n >= 3:
            configs.append(MulConfig(Variant.PC3, n, fp_mode=True, truncate=truncate))
    return configs


def exhaustive_compare(config: MulConfig, max_mismatches: int = 32) -> OracleReport:
    """Check :func:`wiredor.pp.approx_mul` against this oracle on all pairs.

    Exhaustive, so capped at n <= 8 (65,536 integer pairs; 16,384 hidden-1
    pairs at n = 8).
    """
    n = config.width_n
    if n > 8:
        raise ValueError("exhaustive comparison is limited to width_n <= 8")
    start = (1 << (n - 1)) if config.fp_mode else 0
    report = OracleReport(config)
    for a in range(start, 1 << n):
        for b in range(start, 1 << n):
            got = pp.approx_mul(a, b, config)
            expected = oracle_or_mul(a, b, config)
            report.pairs_checked += 1
            if got != expected and len(report.mismatches) < max_mismatches:
                report.mismatches.append((a, b, got, expected))
    return report
