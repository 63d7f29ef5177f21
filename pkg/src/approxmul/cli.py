"""Command-line front end.

Subcommands run characterizations, parameter sweeps, and filter simulations
and write CSV/JSON artifacts plus a manifest sidecar.  Artifact bytes are
deterministic for a given invocation (the timestamp lives only in the
manifest); numbers are printed with 6 significant digits so golden files
stay stable.

Exit codes: 0 success, 2 usage/configuration error, 3 pair budget exceeded.
"""

from __future__ import annotations

import argparse
import datetime
import json
import os
import pathlib
import sys

from . import __version__, fir, stats
from .booth import dot_count
from .errors import BudgetExceededError, ConfigurationError
from .specs import MultiplierKind, MultiplierSpec

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_BUDGET = 3

_OUT_DIR_ENV = "APPROXMUL_OUT_DIR"


def _out_dir(args: argparse.Namespace) -> pathlib.Path:
    raw = args.out or os.environ.get(_OUT_DIR_ENV) or "."
    path = pathlib.Path(raw)
    path.mkdir(parents=True, exist_ok=True)
    return path


def _spec_from_args(args: argparse.Namespace) -> MultiplierSpec:
    return MultiplierSpec(
        kind=MultiplierKind(args.kind),
        wl=args.wl,
        vbl=getattr(args, "vbl", 0),
        hbl=getattr(args, "hbl", 0),
        k=getattr(args, "k", 0),
    )


def _write_artifact(
    directory: pathlib.Path,
    basename: str,
    csv_text: str,
    json_payload,
    manifest_params: dict,
    command: str,
    seed: int | None,
) -> list[pathlib.Path]:
    """Write basename.{csv,json,manifest.json}; only the manifest varies."""
    csv_path = directory / f"{basename}.csv"
    json_path = directory / f"{basename}.json"
    manifest_path = directory / f"{basename}.manifest.json"
    csv_path.write_text(csv_text)
    json_path.write_text(json.dumps(json_payload, indent=2, sort_keys=True) + "\n")
    manifest = {
        "command": command,
        "parameters": manifest_params,
        "tool_version": __version__,
        "seed": seed,
        "timestamp": datetime.datetime.now(datetime.timezone.utc).isoformat(),
    }
    manifest_path.write_text(json.dumps(manifest, indent=2, sort_keys=True) + "\n")
    return [csv_path, json_path, manifest_path]


def _add_spec_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument(
        "--kind",
        required=True,
        choices=[k.value for k in MultiplierKind],
        help="multiplier model",
    )
    parser.add_argument("--wl", type=int, required=True, help="operand word length in bits")
    parser.add_argument("--vbl", type=int, default=0, help="truncated low columns (Booth/BAM)")
    parser.add_argument("--hbl", type=int, default=0, help="dropped high rows (BAM only)")
    parser.add_argument("--k", type=int, default=0, help="approximation depth (block only)")


def _add_run_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument(
        "--mode",
        choices=["exhaustive", "sampled"],
        default="exhaustive",
        help="sweep the full operand space or sample it",
    )
    parser.add_argument("--samples", type=int, default=1_000_000, help="sampled-mode draws")
    parser.add_argument("--seed", type=int, default=0, help="sampled-mode RNG seed")
    parser.add_argument(
        "--budget",
        type=int,
        default=stats.DEFAULT_PAIR_BUDGET,
        help="max operand pairs an exhaustive run may enumerate",
    )
    parser.add_argument(
        "--threads",
        type=int,
        default=1,
        help="worker threads for exhaustive runs; never changes the numbers",
    )
    parser.add_argument("--out", default=None, help=f"output directory (or ${_OUT_DIR_ENV})")


def _manifest_params(args: argparse.Namespace, skip=("func",)) -> dict:
    return {k: v for k, v in sorted(vars(args).items()) if k not in skip}


def cmd_characterize(args: argparse.Namespace) -> int:
    spec = _spec_from_args(args)
    if args.mode == "exhaustive":
        report = stats.sweep_exhaustive(spec, budget=args.budget, workers=args.threads)
    else:
        report = stats.sweep_sampled(spec, n_samples=args.samples, seed=args.seed)
    csv_text = stats.report_csv_header() + "\n" + stats.report_csv_row(spec, report) + "\n"
    basename = f"characterize_{spec.kind.value}_wl{spec.wl}_vbl{spec.vbl}_hbl{spec.hbl}_k{spec.k}"
    if args.mode == "sampled":
        basename += f"_sampled_seed{args.seed}_n{args.samples}"
    paths = _write_artifact(
        _out_dir(args),
        basename,
        csv_text,
        stats.report_record(spec, report),
        _manifest_params(args),
        "characterize",
        args.seed if args.mode == "sampled" else None,
    )
    sys.stdout.write(csv_text)
    sys.stdout.write(f"wrote {paths[0]} {paths[1]}\n")
    return EXIT_OK


def _parse_values(text: str) -> list[int]:
    text = text.strip()
    if not text:
        return []
    try:
        return [int(part) for part in text.split(",") if part.strip() != ""]
    except ValueError as exc:
        raise ConfigurationError(f"bad --values list {text!r}: {exc}") from exc


def cmd_sweep(args: argparse.Namespace) -> int:
    spec = _spec_from_args(args)
    values = _parse_values(args.values)
    rows = stats.mse_vs_parameter(
        spec,
        values,
        mode=args.mode,
        n_samples=args.samples,
        seed=args.seed,
        budget=args.budget,
        workers=args.threads,
    )
    param, _ = spec.breaking_parameter()
    lines = [stats.report_csv_header()]
    records = []
    for value, report in rows:
        var = spec.replace_parameter(value)
        lines.append(stats.report_csv_row(var, report))
        records.append(stats.report_record(var, report))
    csv_text = "\n".join(lines) + "\n"
    basename = f"sweep_{spec.kind.value}_wl{spec.wl}_{param}"
    if args.mode == "sampled":
        basename += f"_sampled_seed{args.seed}_n{args.samples}"
    paths = _write_artifact(
        _out_dir(args),
        basename,
        csv_text,
        records,
        _manifest_params(args),
        "sweep",
        args.seed if args.mode == "sampled" else None,
    )
    sys.stdout.write(csv_text)
    sys.stdout.write(f"wrote {paths[0]} {paths[1]}\n")
    return EXIT_OK


def cmd_fir(args: argparse.Namespace) -> int:
    if args.config is not None:
        config = fir.TestbedConfig.from_json(pathlib.Path(args.config).read_text())
    else:
        config = fir.TestbedConfig()
    if args.double:
        kind_label, wl, vbl = "double", 0, 0
        report = fir.run_testbed(config, None)
    else:
        spec = MultiplierSpec(kind=MultiplierKind(args.kind), wl=args.wl, vbl=args.vbl)
        kind_label, wl, vbl = spec.kind.value, spec.wl, spec.vbl
        report = fir.run_testbed(config, spec)
    csv_text = (
        fir.snr_csv_header() + "\n" + fir.snr_csv_row(kind_label, wl, vbl, report) + "\n"
    )
    record = fir.snr_record(kind_label, wl, vbl, report)
    record["config"] = json.loads(config.to_json())
    basename = f"fir_{kind_label}_wl{wl}_vbl{vbl}"
    paths = _write_artifact(
        _out_dir(args),
        basename,
        csv_text,
        record,
        {**_manifest_params(args), "config": json.loads(config.to_json())},
        "fir",
        config.seed,
    )
    sys.stdout.write(csv_text)
    sys.stdout.write(f"wrote {paths[0]} {paths[1]}\n")
    return EXIT_OK


def cmd_dotcount(args: argparse.Namespace) -> int:
    total, nullified = dot_count(args.wl, args.vbl)
    sys.stdout.write(f"{nullified}/{total}\n")
    return EXIT_OK


def cmd_quap(args: argparse.Namespace) -> int:
    value = fir.quap(args.snr, args.area, args.power)
    sys.stdout.write(f"quap {format(value, '.6g')}\n")
    sys.stdout.write(f"quap/1e4 {format(value / 1e4, '.6g')}\n")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="approxmul",
        description="Characterize approximate multipliers and their DSP impact.",
    )
    parser.add_argument("--version", action="version", version=f"approxmul {__version__}")
    sub = parser.add_subparsers(dest="subcommand", required=True)

    p = sub.add_parser("characterize", help="error statistics for one multiplier setting")
    _add_spec_flags(p)
    _add_run_flags(p)
    p.set_defaults(func=cmd_characterize)

    p = sub.add_parser("sweep", help="error statistics across a parameter range")
    _add_spec_flags(p)
    p.add_argument(
        "--values",
        required=True,
        help="comma-separated breaking-parameter values (empty for an empty table)",
    )
    _add_run_flags(p)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("fir", help="fixed-point FIR filter SNR measurement")
    p.add_argument("--config", default=None, help="TestbedConfig JSON path (default: built-in)")
    p.add_argument(
        "--kind",
        choices=[k.value for k in MultiplierKind],
        default=MultiplierKind.ACCURATE_BOOTH.value,
    )
    p.add_argument("--wl", type=int, default=16)
    p.add_argument("--vbl", type=int, default=0)
    p.add_argument("--double", action="store_true", help="double-precision filter, no multiplier")
    p.add_argument("--out", default=None, help=f"output directory (or ${_OUT_DIR_ENV})")
    p.set_defaults(func=cmd_fir)

    p = sub.add_parser("dotcount", help="partial-product dots nullified by truncation")
    p.add_argument("--wl", type=int, required=True)
    p.add_argument("--vbl", type=int, required=True)
    p.set_defaults(func=cmd_dotcount)

    p = sub.add_parser("quap", help="quality-area-power figure of merit")
    p.add_argument("--snr", type=float, required=True, help="output SNR in dB")
    p.add_argument("--area", type=float, required=True, help="area saving in percent")
    p.add_argument("--power", type=float, required=True, help="power saving in percent")
    p.set_defaults(func=cmd_quap)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except BudgetExceededError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_BUDGET
    except (ConfigurationError, FileNotFoundError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
