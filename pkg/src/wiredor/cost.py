"""Config-driven energy and area accounting over simulator access counts.

No technology numbers are built in: every joule and mm² comes from a
:class:`CostConfig` whose ``provenance`` must say where the values came
from. The repo ships one clearly-labeled illustrative config for structure
and ratio tests only.
"""

from dataclasses import dataclass

from .layout import KernelLayout
from .sim import ArchConfig, SimReport

__all__ = [
    "CostConfig",
    "CostReport",
    "ENERGY_KEYS",
    "AREA_KEYS",
    "energy_report",
    "area_report",
    "scale_baseline",
    "computations_per_read",
]

ENERGY_KEYS = ("sram_read", "regfile", "scratchpad", "decoder", "accumulator", "exponent")
AREA_KEYS = ("sram", "pe_logic", "decoder", "accumulator")


@dataclass(frozen=True)
class CostConfig:
    """Per-event energies (J) and per-component areas (mm²)."""

    provenance: str
    sram_read_per_row_access: float = 0.0
    regfile_read: float = 0.0
    scratchpad_access: float = 0.0
    decoder_op: float = 0.0
    accumulator_add: float = 0.0
    exponent_op: float = 0.0
    sram_per_bit: float = 0.0
    pe_logic_per_column: float = 0.0
    decoder_per_bank: float = 0.0
    accumulator_per_column: float = 0.0

    def __post_init__(self):
        if not self.provenance.strip():
            raise ValueError("CostConfig.provenance must name the source of the numbers")
        for name in self.__dataclass_fields__:
            if name == "provenance":
                continue
            if getattr(self, name) < 0:
                raise ValueError(f"{name} must be >= 0")

    def scaled(self, factor: float) -> "CostConfig":
        values = {
            name: getattr(self, name) * factor
            for name in self.__dataclass_fields__
            if name != "provenance"
        }
        return CostConfig(provenance=self.provenance, **values)


@dataclass(frozen=True)
class CostReport:
    provenance: str
    energy: dict[str, float]
    total_energy: float
    energy_per_mac: float
    decoder_share: float
    area: dict[str, float] | None = None
    total_area: float | None = None

    def to_dict(self) -> dict:
        out = {
            "schema_version": 1,
            "provenance": self.provenance,
            "energy_joules": dict(self.energy),
            "total_energy_joules": self.total_energy,
            "energy_per_mac_joules": self.energy_per_mac,
            "decoder_share": self.decoder_share,
        }
        if self.area is not None:
            out["area_mm2"] = dict(self.area)
            out["total_area_mm2"] = self.total_area
        return out

    def csv_rows(self) -> list[str]:
        """Tidy long format: one measurement per row."""
        rows = ["schema_version,section,component,value"]
        for key in ENERGY_KEYS:
            rows.append(f"1,energy_joules,{key},{self.energy[key]!r}")
        rows.append(f"1,energy_joules,total,{self.total_energy!r}")
        rows.append(f"1,summary,energy_per_mac_joules,{self.energy_per_mac!r}")
        rows.append(f"1,summary,decoder_share,{self.decoder_share!r}")
        if self.area is not None:
            for key in AREA_KEYS:
                rows.append(f"1,area_mm2,{key},{self.area[key]!r}")
            rows.append(f"1,area_mm2,total,{self.total_area!r}")
        return rows


def energy_report(
    sim: SimReport,
    cc: CostConfig,
    arch: ArchConfig | None = None,
    include_exponent: bool = False,
) -> CostReport:
    """Linear accounting: each access count times its per-event energy.

    Exponent add/realign energy is an opt-in add-on (one op per MAC); the
    default report covers exactly the simulator's access counts. Passing
    ``arch`` appends the area breakdown.
    """
    counts = sim.access_counts
    energy = {
        "sram_read": counts["sram_compute_read"] * cc.sram_read_per_row_access,
        "regfile": counts["regfile_read"] * cc.regfile_read,
        "scratchpad": (counts["scratchpad_read"] + counts["scratchpad_write"]) * cc.scratchpad_access,
        "decoder": counts["decoder_op"] * cc.decoder_op,
        "accumulator": counts["accumulator_add"] * cc.accumulator_add,
        "exponent": (sim.useful_macs if include_exponent else 0) * cc.exponent_op,
    }
    total = sum(energy[k] for k in ENERGY_KEYS)
    area = None
    total_area = None
    if arch is not None:
        area = area_report(arch, cc)
        total_area = sum(area[k] for k in AREA_KEYS)
    return CostReport(
        provenance=cc.provenance,
        energy=energy,
        total_energy=total,
        energy_per_mac=total / sim.useful_macs if sim.useful_macs else 0.0,
        decoder_share=energy["decoder"] / total if total > 0 else 0.0,
        area=area,
        total_area=total_area,
    )


def area_report(arch: ArchConfig, cc: CostConfig) -> dict[str, float]:
    """SRAM area scales with rows x cols (quadratic in bank width); PE,
    accumulator and decoder logic scale with column/bank counts (linear)."""
    columns = arch.banks * arch.layout().elements_per_row_group
    return {
        "sram": arch.banks * arch.bank.rows * arch.bank.cols * cc.sram_per_bit,
        "pe_logic": columns * cc.pe_logic_per_column,
        "decoder": arch.banks * cc.decoder_per_bank,
        "accumulator": columns * cc.accumulator_per_column,
    }


def scale_baseline(e32: float, e_sim16: float, e_sim32: float, t: float) -> float:
    """Scale a measured 32-bit multiplier energy down to a 16-bit baseline.

    ``t`` is an explicit scaling factor with no default: the source
    derivation leaves it undefined, so callers must choose and report it.
    """
    if e_sim32 <= 0:
        raise ValueError("e_sim32 must be positive")
    if t <= 0:
        raise ValueError("t must be positive")
    return e32 * (e_sim16 / e_sim32) * t


def computations_per_read(layout: KernelLayout) -> int:
    """Multiplications served by one row-group read."""
    return layout.elements_per_row_group
