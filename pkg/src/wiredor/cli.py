"""Command-line entry point: mul, stats, layout, simulate, cost, eval, verify.

Every subcommand is deterministic under a fixed --seed and writes
byte-identical artifacts on reruns. Exit codes: 0 success, 1 verification
failure, 2 usage/config errors.
"""

import argparse
import json
import math
import sys

from . import kernels
from .configfile import load_arch_workload, load_cost_config
from .cost import energy_report
from .dnn import evaluate, load_model, make_toy_cnn, synthetic_batch
from .errors import ConfigFileError, DomainError, MappingError, ModelFormatError, UnsupportedConfigError
from .fp import FORMATS, FpClass, FpFormat, decode, from_float, fp_mul, mantissa_error_table, to_float
from .layout import BankGeometry, pack_bank
from .mulconfig import MulConfig, Variant
from .oracle import exhaustive_compare, supported_configs
from .pp import approx_mul, decode_lines, exact_mul
from .sim import peak_gops, simulate

USAGE_ERROR = 2
VERIFY_ERROR = 1


def _write(text: str, out: str | None) -> None:
    if out:
        with open(out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _json_dump(payload) -> str:
    return json.dumps(payload, sort_keys=True, indent=2) + "\n"


def _parse_operand_int(text: str) -> int:
    try:
        return int(text, 0)
    except ValueError:
        raise DomainError(f"cannot parse operand {text!r} (use decimal, 0b.. or 0x..)") from None


def _variant_list(text: str) -> list[Variant]:
    if text.lower() == "all":
        return [Variant.FLA, Variant.PC2, Variant.PC3]
    return [Variant.parse(part) for part in text.split(",")]


def _truncate_list(text: str) -> list[bool]:
    choice = text.lower()
    if choice == "both":
        return [False, True]
    if choice in {"on", "true", "yes"}:
        return [True]
    if choice in {"off", "false", "no"}:
        return [False]
    raise ConfigFileError(f"--truncate expects on/off/both, got {text!r}")


def _fmt_arg(name: str) -> FpFormat:
    if name.lower() not in FORMATS:
        raise ConfigFileError(f"unknown datatype {name!r} (choose from {sorted(FORMATS)})")
    return FORMATS[name.lower()]


# --- subcommands -------------------------------------------------------------


def _cmd_mul(args) -> int:
    truncate = bool(args.truncate)
    if args.datatype:
        fmt = _fmt_arg(args.datatype)
        config = MulConfig(Variant.parse(args.variant), fmt.sig_bits, fp_mode=True, truncate=truncate)
        try:
            xa, yb = float(args.a), float(args.b)
        except ValueError:
            raise DomainError(f"cannot parse {args.a!r}/{args.b!r} as floats for --datatype mode") from None
        wa, wb = from_float(xa, fmt), from_float(yb, fmt)
        va, vb = to_float(wa, fmt), to_float(wb, fmt)
        word = fp_mul(wa, wb, fmt, config)
        approx = to_float(word, fmt)
        exact = va * vb
        da, db = decode(wa, fmt), decode(wb, fmt)
        lines = None
        if da.klass is FpClass.NORMAL and db.klass is FpClass.NORMAL:
            lines = decode_lines(db.significand, config)
        finite = math.isfinite(exact)
        payload = {
            "schema_version": 1,
            "mode": fmt.name,
            "config": config.label(),
            "a": va,
            "b": vb,
            "a_word": f"0x{wa:0{(fmt.width + 3) // 4}x}",
            "b_word": f"0x{wb:0{(fmt.width + 3) // 4}x}",
            "approx": approx,
            "approx_word": f"0x{word:0{(fmt.width + 3) // 4}x}",
            "exact": exact,
            "abs_error": abs(exact - approx) if finite else 0.0,
            "rel_error": abs(exact - approx) / abs(exact) if finite and exact else 0.0,
            "active_lines": lines.labels(config.width_n) if lines else [],
        }
        text_lines = [
            f"{fmt.name} {config.label()}: {va!r} * {vb!r}",
            f"  approx = {approx!r}  (word {payload['approx_word']})",
            f"  exact  = {exact!r}",
            f"  abs error = {payload['abs_error']!r}   rel error = {payload['rel_error']!r}",
            f"  active lines: {', '.join(payload['active_lines']) or '(zero bypass)'}",
        ]
    else:
        config = MulConfig(Variant.parse(args.variant), args.width, fp_mode=args.fp, truncate=truncate)
        a = _parse_operand_int(args.a)
        b = _parse_operand_int(args.b)
        approx = approx_mul(a, b, config)
        exact = exact_mul(a, b, config)
        lineset = decode_lines(b, config)
        width = 2 * config.width_n
        payload = {
            "schema_version": 1,
            "mode": "integer" if not config.fp_mode else "fp-significand",
            "config": config.label(),
            "width_n": config.width_n,
            "a": a,
            "b": b,
            "approx": approx,
            "approx_binary": format(approx, f"0{width}b"),
            "exact": exact,
            "exact_binary": format(exact, f"0{width}b"),
            "abs_error": exact - approx,
            "rel_error": (exact - approx) / exact if exact else 0.0,
            "active_lines": lineset.labels(config.width_n),
            "dropped_bits": sorted(lineset.dropped_bits),
        }
        text_lines = [
            f"{payload['mode']} {config.label()} n={config.width_n}: {a:#b} * {b:#b}",
            f"  approx = 0b{payload['approx_binary']} ({approx})",
            f"  exact  = 0b{payload['exact_binary']} ({exact})",
            f"  abs error = {payload['abs_error']}   rel error = {payload['rel_error']!r}",
            f"  active lines: {', '.join(payload['active_lines']) or '(none)'}",
        ]
        if payload["dropped_bits"]:
            text_lines.append(f"  dropped multiplier bits: {payload['dropped_bits']}")
    if args.format == "json":
        _write(_json_dump(payload), args.out)
    else:
        _write("\n".join(text_lines) + "\n", args.out)
    return 0


def _cmd_stats(args) -> int:
    fmt = _fmt_arg(args.datatype)
    sampling = "exhaustive" if args.exhaustive else "random"
    rows = []
    for variant in _variant_list(args.variant):
        for truncate in _truncate_list(args.truncate):
            config = MulConfig(variant, fmt.sig_bits, fp_mode=True, truncate=truncate)
            stats = mantissa_error_table(fmt, config, sampling=sampling, samples=args.samples, seed=args.seed)
            rows.append(
                {
                    "datatype": fmt.name,
                    "variant": config.label(),
                    "sampling": sampling,
                    "pairs": stats.pairs,
                    "mean_rel_error": stats.mean_rel_error,
                    "max_rel_error": stats.max_rel_error,
                    "exact_fraction": stats.exact_fraction,
                }
            )
    if args.format == "json":
        _write(_json_dump({"schema_version": 1, "results": rows}), args.out)
    else:
        lines = ["schema_version,datatype,variant,sampling,pairs,metric,value"]
        for r in rows:
            for metric in ("mean_rel_error", "max_rel_error", "exact_fraction"):
                lines.append(
                    f"1,{r['datatype']},{r['variant']},{r['sampling']},{r['pairs']},{metric},{r[metric]!r}"
                )
        _write("\n".join(lines) + "\n", args.out)
    return 0


def _cmd_layout(args) -> int:
    fmt = _fmt_arg(args.datatype)
    config = MulConfig(Variant.parse(args.variant), fmt.sig_bits, fp_mode=True, truncate=bool(args.truncate))
    geom = BankGeometry.parse(args.bank)
    layout = pack_bank(geom, config, fmt)
    payload = {
        "schema_version": 1,
        "bank": {"size_bytes": geom.size_bytes, "rows": geom.rows, "cols": geom.cols},
        "config": config.label(),
        "datatype": fmt.name,
        **layout.to_dict(),
    }
    if args.format == "csv":
        lines = ["schema_version,field,value"] + [f"1,{k},{v}" for k, v in sorted(layout.to_dict().items())]
        _write("\n".join(lines) + "\n", args.out)
    else:
        _write(_json_dump(payload), args.out)
    return 0


def _cmd_simulate(args) -> int:
    arch, workload = load_arch_workload(args.config)
    report = simulate(arch, workload)
    if args.format == "csv":
        _write(report.csv_header() + "\n" + report.csv_row() + "\n", args.out)
    else:
        payload = report.to_dict()
        payload["peak_gops"] = peak_gops(arch)
        _write(_json_dump(payload), args.out)
    return 0


def _cmd_cost(args) -> int:
    arch, workload = load_arch_workload(args.config)
    cc = load_cost_config(args.cost)
    report = simulate(arch, workload)
    cost = energy_report(report, cc, arch=arch, include_exponent=args.include_exponent)
    if args.format == "csv":
        _write("\n".join(cost.csv_rows()) + "\n", args.out)
    else:
        _write(_json_dump(cost.to_dict()), args.out)
    return 0


def _cmd_eval(args) -> int:
    fmt = _fmt_arg(args.datatype)
    model = load_model(args.model) if args.model else make_toy_cnn(seed=args.seed)
    data = synthetic_batch(model, args.samples, seed=args.seed + 1)
    configs: list[MulConfig | None] = [None]
    for variant in _variant_list(args.variant):
        for truncate in _truncate_list(args.truncate):
            configs.append(MulConfig(variant, fmt.sig_bits, fp_mode=True, truncate=truncate))
    results = evaluate(model, data, configs, fmt)
    if args.format == "csv":
        lines = ["schema_version,config,datatype,metric,layer,value"]
        for r in results:
            for i, err in enumerate(r.per_layer_mean_rel_error):
                lines.append(f"1,{r.config_label},{r.datatype},mean_rel_error,{i},{err!r}")
            lines.append(f"1,{r.config_label},{r.datatype},final_logit_max_abs_error,,{r.final_logit_max_abs_error!r}")
            lines.append(f"1,{r.config_label},{r.datatype},top1_agreement,,{r.top1_agreement!r}")
        _write("\n".join(lines) + "\n", args.out)
    else:
        payload = {
            "schema_version": 1,
            "samples": args.samples,
            "seed": args.seed,
            "results": [r.to_dict() for r in results],
        }
        _write(_json_dump(payload), args.out)
    return 0


def _cmd_verify(args) -> int:
    results = []
    ok = True
    for n in range(2, args.max_width + 1):
        for config in supported_configs(n):
            report = exhaustive_compare(config)
            entry = {
                "variant": config.label(),
                "width_n": n,
                "fp_mode": config.fp_mode,
                "pairs": report.pairs_checked,
                "mismatches": len(report.mismatches),
            }
            results.append(entry)
            ok = ok and report.ok
    payload = {"schema_version": 1, "ok": ok, "results": results}
    if args.format == "json":
        _write(_json_dump(payload), args.out)
    else:
        lines = []
        for e in results:
            mode = "fp" if e["fp_mode"] else "int"
            status = "ok" if e["mismatches"] == 0 else f"{e['mismatches']} MISMATCHES"
            lines.append(f"{e['variant']:<8} n={e['width_n']} {mode:<3} {e['pairs']:>6} pairs  {status}")
        lines.append("verification " + ("PASSED" if ok else "FAILED"))
        _write("\n".join(lines) + "\n", args.out)
    return 0 if ok else VERIFY_ERROR


# --- parser ------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="wiredor",
        description="Wired-OR in-SRAM approximate multiplier toolkit "
        f"(kernel backend: {kernels.backend_name()})",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("json", "csv", "text"), default=None, help="output format")
    common.add_argument("--out", default=None, help="write output to this path instead of stdout")
    common.add_argument("--seed", type=int, default=0, help="seed for randomized paths")

    p = sub.add_parser("mul", parents=[common], help="multiply two operands and show lines/error")
    p.add_argument("--a", required=True, help="multiplicand (int literal, or float with --datatype)")
    p.add_argument("--b", required=True, help="multiplier (int literal, or float with --datatype)")
    p.add_argument("--variant", default="fla", help="fla | pc2 | pc3")
    p.add_argument("--width", type=int, default=8, help="operand bit width (integer mode)")
    p.add_argument("--fp", action="store_true", help="operands are hidden-1 significands")
    p.add_argument("--truncate", action="store_true", help="compute only the top n product columns")
    p.add_argument("--datatype", default=None, help="bfloat16 | float32: treat operands as floats")
    p.set_defaults(func=_cmd_mul, default_format="text")

    p = sub.add_parser("stats", parents=[common], help="mantissa error statistics per variant")
    p.add_argument("--datatype", default="bfloat16")
    p.add_argument("--variant", default="all", help="fla | pc2 | pc3 | all or comma list")
    p.add_argument("--truncate", default="both", help="on | off | both")
    p.add_argument("--exhaustive", action="store_true", help="sweep all significand pairs (n <= 12)")
    p.add_argument("--samples", type=int, default=65536, help="random pair count when not exhaustive")
    p.set_defaults(func=_cmd_stats, default_format="csv")

    p = sub.add_parser("layout", parents=[common], help="pack kernel elements into a square bank")
    p.add_argument("--bank", required=True, help="bank size, e.g. 512kB or 8192")
    p.add_argument("--variant", default="pc3")
    p.add_argument("--truncate", action="store_true")
    p.add_argument("--datatype", default="bfloat16")
    p.set_defaults(func=_cmd_layout, default_format="json")

    p = sub.add_parser("simulate", parents=[common], help="cycle-approximate workload simulation")
    p.add_argument("--config", required=True, help="arch + workload key-value file")
    p.set_defaults(func=_cmd_simulate, default_format="json")

    p = sub.add_parser("cost", parents=[common], help="energy/area accounting for a workload run")
    p.add_argument("--config", required=True, help="arch + workload key-value file")
    p.add_argument("--cost", required=True, help="cost-config key-value file")
    p.add_argument("--include-exponent", action="store_true", help="add per-MAC exponent handling energy")
    p.set_defaults(func=_cmd_cost, default_format="json")

    p = sub.add_parser("eval", parents=[common], help="toy-DNN error evaluation vs float32 baseline")
    p.add_argument("--model", default=None, help="serialized model file (default: seeded toy CNN)")
    p.add_argument("--samples", type=int, default=256)
    p.add_argument("--datatype", default="bfloat16")
    p.add_argument("--variant", default="all")
    p.add_argument("--truncate", default="off", help="on | off | both")
    p.set_defaults(func=_cmd_eval, default_format="json")

    p = sub.add_parser("verify", parents=[common], help="exhaustive oracle comparison for all configs")
    p.add_argument("--max-width", type=int, default=8, choices=range(2, 9), metavar="N")
    p.set_defaults(func=_cmd_verify, default_format="text")

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.format is None:
        args.format = args.default_format
    try:
        return args.func(args)
    except (ConfigFileError, DomainError, UnsupportedConfigError, MappingError, ModelFormatError, ValueError) as exc:
        print(f"wiredor {args.command}: error: {exc}", file=sys.stderr)
        return USAGE_ERROR
    except OSError as exc:
        print(f"wiredor {args.command}: {exc}", file=sys.stderr)
        return USAGE_ERROR


if __name__ == "__main__":
    sys.exit(main())
