"""Documented key-value config files (``key = value``, ``#`` comments).

One flat namespace per file. Arch + workload may share a file; cost configs
live in their own. All diagnostics carry path, line and field names so the
CLI can exit 2 with something actionable.
"""

from .cost import CostConfig
from .errors import ConfigFileError
from .fp import FORMATS, FpFormat
from .layout import BankGeometry
from .mulconfig import MulConfig, Variant
from .sim import ArchConfig, Conv, Gemm

__all__ = [
    "KeyValueFile",
    "parse_kv_text",
    "load_kv_file",
    "mul_config_from",
    "load_arch_workload",
    "load_cost_config",
]

_TRUE = {"true", "yes", "on", "1"}
_FALSE = {"false", "no", "off", "0"}


class KeyValueFile:
    """Parsed key-value file with typed, diagnostic-friendly accessors."""

    def __init__(self, entries: dict[str, tuple[str, int]], path: str):
        self._entries = entries
        self.path = path
        self._used: set[str] = set()

    def __contains__(self, key: str) -> bool:
        return key in self._entries

    def _fail(self, key: str, message: str):
        line = self._entries[key][1] if key in self._entries else None
        raise ConfigFileError(f"field {key!r}: {message}", self.path, line)

    def raw(self, key: str, default=None):
        if key not in self._entries:
            if default is not None:
                return default
            raise ConfigFileError(f"missing required field {key!r}", self.path)
        self._used.add(key)
        return self._entries[key][0]

    def get_str(self, key: str, default: str | None = None) -> str:
        return str(self.raw(key, default))

    def get_int(self, key: str, default: int | None = None) -> int:
        value = self.raw(key, default)
        if isinstance(value, int):
            return value
        try:
            return int(str(value), 0)
        except ValueError:
            self._fail(key, f"expected an integer, got {value!r}")

    def get_float(self, key: str, default: float | None = None) -> float:
        value = self.raw(key, default)
        try:
            return float(value)
        except ValueError:
            self._fail(key, f"expected a number, got {value!r}")

    def get_bool(self, key: str, default: bool | None = None) -> bool:
        value = self.raw(key, default)
        if isinstance(value, bool):
            return value
        if str(value).lower() in _TRUE:
            return True
        if str(value).lower() in _FALSE:
            return False
        self._fail(key, f"expected true/false, got {value!r}")

    def unused_keys(self) -> list[str]:
        return sorted(set(self._entries) - self._used)


def parse_kv_text(text: str, path: str = "<config>") -> KeyValueFile:
    entries: dict[str, tuple[str, int]] = {}
    for lineno, raw_line in enumerate(text.splitlines(), start=1):
        line = raw_line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigFileError(f"expected 'key = value', got {raw_line.strip()!r}", path, lineno)
        key, _, value = line.partition("=")
        key = key.strip().lower()
        value = value.strip().strip("\"'")
        if not key:
            raise ConfigFileError("empty key", path, lineno)
        if key in entries:
            raise ConfigFileError(f"duplicate key {key!r} (first on line {entries[key][1]})", path, lineno)
        entries[key] = (value, lineno)
    return KeyValueFile(entries, path)


def load_kv_file(path: str) -> KeyValueFile:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise ConfigFileError(f"cannot read config: {exc}", path) from None
    return parse_kv_text(text, path)


def _format_from(kv: KeyValueFile, key: str = "datatype") -> FpFormat:
    name = kv.get_str(key, "bfloat16").lower()
    if name not in FORMATS:
        kv._fail(key, f"unknown datatype {name!r} (choose from {sorted(FORMATS)})")
    return FORMATS[name]


def mul_config_from(kv: KeyValueFile, fmt: FpFormat | None = None) -> MulConfig:
    variant = Variant.parse(kv.get_str("variant", "pc3"))
    truncate = kv.get_bool("truncate", False)
    if fmt is None:
        fmt = _format_from(kv)
    return MulConfig(variant, fmt.sig_bits, fp_mode=True, truncate=truncate)


def load_arch_workload(path: str) -> tuple[ArchConfig, Gemm | Conv]:
    kv = load_kv_file(path)
    fmt = _format_from(kv)
    mul = mul_config_from(kv, fmt)
    try:
        bank = BankGeometry.parse(kv.get_str("bank", "8kB"))
    except ValueError as exc:
        raise ConfigFileError(f"field 'bank': {exc}", path) from None
    spc = kv.get_int("scratchpad_inputs_per_cycle", 0) or None
    try:
        arch = ArchConfig(
            banks=kv.get_int("banks", 1),
            bank=bank,
            mul=mul,
            fmt=fmt,
            clock_hz=kv.get_float("clock_hz", 1e9),
            regfile_entries_per_bank=kv.get_int("regfile_entries_per_bank", 1),
            scratchpad_inputs_per_cycle=spc,
        )
    except ValueError as exc:
        raise ConfigFileError(str(exc), path) from None

    kind = kv.get_str("workload").lower()
    try:
        if kind == "gemm":
            workload = Gemm(kv.get_int("m"), kv.get_int("k"), kv.get_int("n"))
        elif kind == "conv":
            workload = Conv(
                height=kv.get_int("height"),
                width=kv.get_int("width"),
                cin=kv.get_int("in_channels"),
                cout=kv.get_int("out_channels"),
                kh=kv.get_int("kernel_h"),
                kw=kv.get_int("kernel_w"),
                stride=kv.get_int("stride", 1),
                pad=kv.get_int("pad", 0),
            )
        else:
            raise ConfigFileError(f"field 'workload': expected gemm or conv, got {kind!r}", path)
    except ValueError as exc:
        raise ConfigFileError(f"workload: {exc}", path) from None
    return arch, workload


def load_cost_config(path: str) -> CostConfig:
    kv = load_kv_file(path)
    try:
        return CostConfig(
            provenance=kv.get_str("provenance"),
            sram_read_per_row_access=kv.get_float("sram_read_per_row_access", 0.0),
            regfile_read=kv.get_float("regfile_read", 0.0),
            scratchpad_access=kv.get_float("scratchpad_access", 0.0),
            decoder_op=kv.get_float("decoder_op", 0.0),
            accumulator_add=kv.get_float("accumulator_add", 0.0),
            exponent_op=kv.get_float("exponent_op", 0.0),
            sram_per_bit=kv.get_float("sram_per_bit", 0.0),
            pe_logic_per_column=kv.get_float("pe_logic_per_column", 0.0),
            decoder_per_bank=kv.get_float("decoder_per_bank", 0.0),
            accumulator_per_column=kv.get_float("accumulator_per_column", 0.0),
        )
    except ValueError as exc:
        raise ConfigFileError(str(exc), path) from None
