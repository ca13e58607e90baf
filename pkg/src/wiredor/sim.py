"""Cycle-approximate model of the banked in-SRAM datapath.

Kernels stay resident (weight-stationary); inputs stream from a scratchpad
through one register file per bank; each cycle a bank drives one row-group
with one input word and every occupied PE column accumulates one product.
Steady-state only: fill/drain and writeback overlap compute.
"""

import math
from collections import Counter
from dataclasses import dataclass

from .errors import MappingError
from .fp import FpFormat, fp_mul, from_float, to_float
from .layout import BankGeometry, KernelLayout, pack_bank
from .mulconfig import MulConfig

__all__ = [
    "ArchConfig",
    "Gemm",
    "Conv",
    "RowGroup",
    "Mapping",
    "SimReport",
    "build_mapping",
    "simulate",
    "run_gemm",
    "peak_gops",
]

ACCESS_KEYS = (
    "sram_compute_read",
    "regfile_read",
    "scratchpad_read",
    "scratchpad_write",
    "decoder_op",
    "accumulator_add",
)


@dataclass(frozen=True)
class ArchConfig:
    banks: int
    bank: BankGeometry
    mul: MulConfig
    fmt: FpFormat
    clock_hz: float
    regfile_entries_per_bank: int = 1
    scratchpad_inputs_per_cycle: int | None = None  # None: one per bank, no starvation

    def __post_init__(self):
        if self.banks < 1:
            raise ValueError("banks must be >= 1")
        if self.regfile_entries_per_bank < 1:
            raise ValueError("each bank needs at least one register file entry")
        if self.clock_hz <= 0:
            raise ValueError("clock_hz must be positive")
        if self.scratchpad_inputs_per_cycle is not None and self.scratchpad_inputs_per_cycle < 1:
            raise ValueError("scratchpad_inputs_per_cycle must be >= 1")

    @property
    def fetch_bandwidth(self) -> int:
        return self.scratchpad_inputs_per_cycle or self.banks

    def layout(self) -> KernelLayout:
        return pack_bank(self.bank, self.mul, self.fmt)


@dataclass(frozen=True)
class Gemm:
    m: int
    k: int
    n: int

    def __post_init__(self):
        if min(self.m, self.k, self.n) < 1:
            raise ValueError("GEMM dims must be >= 1")

    def as_gemm(self) -> "Gemm":
        return self

    def describe(self) -> str:
        return f"gemm[{self.m}x{self.k}x{self.n}]"


@dataclass(frozen=True)
class Conv:
    """im2col-lowered convolution: K = kh*kw*cin, N = cout, M = output positions."""

    height: int
    width: int
    cin: int
    cout: int
    kh: int
    kw: int
    stride: int = 1
    pad: int = 0

    def __post_init__(self):
        if min(self.height, self.width, self.cin, self.cout, self.kh, self.kw, self.stride) < 1:
            raise ValueError("conv dims must be >= 1")
        if self.pad < 0:
            raise ValueError("pad must be >= 0")
        if self.out_height < 1 or self.out_width < 1:
            raise ValueError("kernel does not fit the padded input")

    @property
    def out_height(self) -> int:
        return (self.height + 2 * self.pad - self.kh) // self.stride + 1

    @property
    def out_width(self) -> int:
        return (self.width + 2 * self.pad - self.kw) // self.stride + 1

    def as_gemm(self) -> Gemm:
        return Gemm(self.out_height * self.out_width, self.kh * self.kw * self.cin, self.cout)

    def describe(self) -> str:
        return (
            f"conv[{self.height}x{self.width}x{self.cin}->{self.cout}"
            f" k{self.kh}x{self.kw} s{self.stride} p{self.pad}]"
        )


@dataclass(frozen=True)
class RowGroup:
    """One row-group: reduction index ``k`` bound to a tile of output columns."""

    bank: int
    k: int
    n_start: int
    cols: int


@dataclass(frozen=True)
class Mapping:
    assignments: tuple[RowGroup, ...]
    layout: KernelLayout
    banks: int

    def per_bank(self) -> list[list[RowGroup]]:
        buckets: list[list[RowGroup]] = [[] for _ in range(self.banks)]
        for rg in self.assignments:
            buckets[rg.bank].append(rg)
        return buckets

    @property
    def max_groups_per_bank(self) -> int:
        counts = Counter(rg.bank for rg in self.assignments)
        return max(counts.values())

    @property
    def fetches_per_position(self) -> int:
        """Distinct (bank, k) input values needed per output position."""
        return len({(rg.bank, rg.k) for rg in self.assignments})


@dataclass(frozen=True)
class SimReport:
    cycles: int
    useful_macs: int
    pe_count: int
    utilization: float
    access_counts: dict[str, int]
    sustained_gops: float
    workload: str = ""

    def to_dict(self) -> dict:
        return {
            "schema_version": 1,
            "workload": self.workload,
            "cycles": self.cycles,
            "useful_macs": self.useful_macs,
            "pe_count": self.pe_count,
            "utilization": self.utilization,
            "sustained_gops": self.sustained_gops,
            "access_counts": dict(self.access_counts),
        }

    def csv_header(self) -> str:
        return ",".join(
            ["schema_version", "workload", "cycles", "useful_macs", "pe_count", "utilization", "sustained_gops"]
            + list(ACCESS_KEYS)
        )

    def csv_row(self) -> str:
        cells = [
            "1",
            self.workload,
            str(self.cycles),
            str(self.useful_macs),
            str(self.pe_count),
            repr(self.utilization),
            repr(self.sustained_gops),
        ] + [str(self.access_counts[k]) for k in ACCESS_KEYS]
        return ",".join(cells)


def build_mapping(arch: ArchConfig, workload) -> Mapping:
    """Greedy k-major assignment, round-robined across banks.

    Output channels are tiled by the per-row-group column count; every
    (k, tile) pair becomes one row-group whose columns all share that k.
    """
    g = workload.as_gemm()
    layout = arch.layout()
    epg = layout.elements_per_row_group
    total_elements = g.k * g.n
    capacity = arch.banks * layout.capacity_elements
    if total_elements > capacity:
        raise MappingError(
            f"{total_elements} kernel elements exceed capacity {capacity} "
            f"({arch.banks} banks x {layout.capacity_elements}); short by {total_elements - capacity}"
        )
    tiles = math.ceil(g.n / epg)
    total_groups = g.k * tiles
    max_per_bank = math.ceil(total_groups / arch.banks)
    if max_per_bank > layout.row_groups:
        raise MappingError(
            f"{total_groups} row-groups over {arch.banks} banks need {max_per_bank} per bank, "
            f"but each bank has {layout.row_groups}; short by {max_per_bank - layout.row_groups} groups"
        )
    assignments = []
    idx = 0
    for k in range(g.k):
        for t in range(tiles):
            n_start = t * epg
            assignments.append(
                RowGroup(bank=idx % arch.banks, k=k, n_start=n_start, cols=min(epg, g.n - n_start))
            )
            idx += 1
    return Mapping(tuple(assignments), layout, arch.banks)


def simulate(arch: ArchConfig, workload, mapping: Mapping | None = None) -> SimReport:
    """Steady-state cycle and access accounting for one workload run."""
    g = workload.as_gemm()
    if mapping is None:
        mapping = build_mapping(arch, workload)
    total_groups = len(mapping.assignments)
    compute_cycles = mapping.max_groups_per_bank
    fetches = mapping.fetches_per_position
    fetch_cycles = math.ceil(fetches / arch.fetch_bandwidth)
    cycles_per_position = max(compute_cycles, fetch_cycles)
    cycles = g.m * cycles_per_position

    useful_macs = g.m * g.k * g.n
    counts = {
        "sram_compute_read": g.m * total_groups,
        "regfile_read": g.m * total_groups,
        "scratchpad_read": g.m * fetches,
        "scratchpad_write": g.m * g.n,
        "decoder_op": g.m * total_groups,
        "accumulator_add": useful_macs,
    }
    pe_count = arch.banks * mapping.layout.elements_per_row_group
    return SimReport(
        cycles=cycles,
        useful_macs=useful_macs,
        pe_count=pe_count,
        utilization=useful_macs / (pe_count * cycles),
        access_counts=counts,
        sustained_gops=2 * useful_macs * arch.clock_hz / cycles / 1e9,
        workload=workload.describe(),
    )


def peak_gops(arch: ArchConfig) -> float:
    """Every PE busy every cycle, two ops per MAC."""
    return 2 * arch.banks * arch.layout().elements_per_row_group * arch.clock_hz / 1e9


def run_gemm(arch: ArchConfig, workload, inputs, weights, mapping: Mapping | None = None):
    """Functional (test-scale) execution in simulator schedule order.

    ``inputs`` is M x K, ``weights`` K x N, both float-like. Every product
    goes through :func:`wiredor.fp.fp_mul`; accumulation per output is the
    exactly rounded ``math.fsum``, so scheduling can never change values.
    """
    g = workload.as_gemm()
    if mapping is None:
        mapping = build_mapping(arch, workload)
    fmt: FpFormat = arch.fmt
    in_words = [[from_float(float(inputs[m][k]), fmt) for k in range(g.k)] for m in range(g.m)]
    w_words = [[from_float(float(weights[k][j]), fmt) for j in range(g.n)] for k in range(g.k)]

    addends: list[list[list[float]]] = [[[] for _ in range(g.n)] for _ in range(g.m)]
    schedule = mapping.per_bank()
    depth = mapping.max_groups_per_bank
    for m in range(g.m):
        for cycle in range(depth):
            for bank_groups in schedule:
                if cycle >= len(bank_groups):
                    continue
                rg = bank_groups[cycle]
                x = in_words[m][rg.k]
                for c in range(rg.cols):
                    j = rg.n_start + c
                    word = fp_mul(w_words[rg.k][j], x, fmt, arch.mul)
                    addends[m][j].append(to_float(word, fmt))
    return [[math.fsum(addends[m][j]) for j in range(g.n)] for m in range(g.m)]
