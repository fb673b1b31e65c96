"""Command-line entry point: config parsing, scenario dispatch and result files.

Exit codes: 0 success, 2 config error, 3 cap violation, 4 numerical-invariant
failure, 5 I/O failure.
"""

from __future__ import annotations

import argparse
import csv
import hashlib
import io
import json
import math
import sys
import time
from pathlib import Path
from typing import Any, Sequence

from . import __version__
from .errors import (
    ConfigError,
    ConfigFileError,
    ConfigSyntaxError,
    OutputError,
    QThermoError,
    UnknownKeyError,
)
from .scenarios import SCHEMAS, RunRecord, ScenarioConfig, run, validate_parameters

RESULTS_SCHEMA = "qthermo.results/1"
MANIFEST_SCHEMA = "qthermo.manifest/1"
CSV_HEADER = (
    "scenario", "sample_index", "time", "entropy_nats", "entropy_bits",
    "trace_distance", "mean_energy", "extra",
)
RESERVED_KEYS = ("scenario", "output_path")


def parse_override(text: str) -> tuple[str, Any]:
    key, sep, raw = text.partition("=")
    if not sep or not key.strip():
        raise ConfigError(f"override {text!r} is not of the form key=value")
    try:
        value = json.loads(raw)
    except json.JSONDecodeError:
        value = raw
    return key.strip(), value


def config_from_mapping(doc: Any, overrides: Sequence[str] = (), seed: int | None = None) -> ScenarioConfig:
    if not isinstance(doc, dict):
        raise ConfigSyntaxError("config must be a JSON object")
    if "scenario" not in doc:
        raise ConfigError("config is missing the 'scenario' key")
    scenario = doc["scenario"]
    if scenario not in SCHEMAS:
        raise ConfigError(f"unknown scenario {scenario!r}; choose from {sorted(SCHEMAS)}")
    values = {k: v for k, v in doc.items() if k not in RESERVED_KEYS}
    output_path = doc.get("output_path", "results")
    allowed = {p.name for p in SCHEMAS[scenario]}
    for text in overrides:
        key, value = parse_override(text)
        if key == "output_path":
            output_path = value
        elif key in allowed:
            values[key] = value
        else:
            raise UnknownKeyError(f"override key {key!r} is not a parameter of scenario {scenario!r}")
    if seed is not None:
        values["seed"] = seed
    if not isinstance(output_path, str):
        raise ConfigError("output_path must be a string")
    return ScenarioConfig(scenario, validate_parameters(scenario, values), output_path)


def parse_config(path, overrides: Sequence[str] = (), seed: int | None = None) -> ScenarioConfig:
    """Read a JSON config; apply ``--set`` overrides, then ``--seed``."""
    path = Path(path)
    try:
        text = path.read_text()
    except FileNotFoundError:
        raise ConfigFileError(f"config file not found: {path}") from None
    except OSError as exc:
        raise ConfigFileError(f"cannot read config file {path}: {exc}") from None
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigSyntaxError(f"{path}: line {exc.lineno} column {exc.colno}: {exc.msg}") from None
    return config_from_mapping(doc, overrides, seed)


def effective_config(config: ScenarioConfig) -> dict[str, Any]:
    """Flat JSON form of a config; re-parses to an equal ScenarioConfig."""
    return {"scenario": config.scenario, "output_path": config.output_path, **config.parameters}


def config_hash(config: ScenarioConfig) -> str:
    canonical = json.dumps(effective_config(config), sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(canonical.encode()).hexdigest()


def _num(value) -> str:
    if value is None:
        return ""
    if isinstance(value, (int,)) and not isinstance(value, bool):
        return str(value)
    return format(float(value), ".17g")


def csv_text(records: Sequence[RunRecord]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_HEADER)
    for rec in records:
        obs = rec.observables
        nats = obs.get("entropy_nats")
        writer.writerow([
            rec.scenario,
            _num(obs["sample_index"]),
            _num(obs.get("time")),
            _num(nats),
            _num(None if nats is None else nats / math.log(2)),
            _num(obs.get("trace_distance")),
            _num(obs.get("mean_energy")),
            json.dumps(rec.extra, sort_keys=True, separators=(",", ":")),
        ])
    return buf.getvalue()


def json_records(records: Sequence[RunRecord]) -> list[dict[str, Any]]:
    # wall-clock lives in the manifest so this file stays reproducible
    return [
        {"scenario": rec.scenario, **rec.observables, "extra": rec.extra, "parameters": rec.parameters}
        for rec in records
    ]


def write_results(
    records: Sequence[RunRecord],
    out_dir,
    fmt: str = "both",
    config: ScenarioConfig | None = None,
    wall_clock_seconds: float | None = None,
    workers: int = 1,
) -> dict[str, Any]:
    """Write results.csv and/or results.json plus manifest.json; return the manifest."""
    if fmt not in ("csv", "json", "both"):
        raise ConfigError(f"unknown format {fmt!r}")
    out = Path(out_dir)
    files = {}
    try:
        out.mkdir(parents=True, exist_ok=True)
        if fmt in ("csv", "both"):
            (out / "results.csv").write_text(csv_text(records))
            files["csv"] = "results.csv"
        if fmt in ("json", "both"):
            (out / "results.json").write_text(json.dumps(json_records(records), indent=1) + "\n")
            files["json"] = "results.json"
        manifest = {
            "schema": MANIFEST_SCHEMA,
            "results_schema": RESULTS_SCHEMA,
            "artifact_version": __version__,
            "scenario": config.scenario if config else None,
            "seed": config.parameters.get("seed") if config else None,
            "config_hash": config_hash(config) if config else None,
            "effective_config": effective_config(config) if config else None,
            "record_count": len(records),
            "files": files,
            "workers": workers,
            "wall_clock_seconds": wall_clock_seconds,
            "record_wall_clock_seconds": [rec.wall_clock_seconds for rec in records],
        }
        (out / "manifest.json").write_text(json.dumps(manifest, indent=1) + "\n")
    except OSError as exc:
        raise OutputError(f"cannot write results to {out}: {exc}") from None
    return manifest


def _schema_help() -> str:
    lines = ["scenarios and parameters:"]
    for name, params in SCHEMAS.items():
        lines.append(f"  {name}")
        for p in params:
            lines.append(f"    {p.name:<16} {p.kind:<10} default {json.dumps(p.default)}  {p.help}")
    lines.append("")
    lines.append("exit codes: 0 ok, 2 config error, 3 cap violation, 4 numerical invariant failure, 5 I/O failure")
    return "\n".join(lines)


def _u64(text: str) -> int:
    value = int(text, 0)
    if not 0 <= value < 2**64:
        raise argparse.ArgumentTypeError(f"seed {text} is not an unsigned 64-bit integer")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qthermo",
        description="Entropy production through energy-conserving entanglement: finite-dimensional experiments.",
        epilog=_schema_help(),
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", required=True, help="scenario config (JSON)")
    common.add_argument("--seed", type=_u64, help="master seed; overrides the config")
    common.add_argument("--set", dest="overrides", action="append", default=[], metavar="KEY=VALUE",
                        help="override a parameter (repeatable; value parsed as JSON when possible)")
    sub = parser.add_subparsers(dest="command", required=True)
    run_p = sub.add_parser("run", parents=[common], help="run a scenario and write results")
    run_p.add_argument("--out", help="output directory (default: config output_path)")
    run_p.add_argument("--format", choices=("csv", "json", "both"), default="both")
    run_p.add_argument("--workers", type=int, default=1, help="worker threads; does not change results")
    sub.add_parser("validate-config", parents=[common], help="check a config and print its effective form")
    sub.add_parser("list-scenarios", help="print scenario names")
    sub.add_parser("version", help="print the package version")
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse exits 0 for --help, 2 for usage errors
        return 0 if not exc.code else 2
    try:
        if args.command == "list-scenarios":
            print("\n".join(SCHEMAS))
            return 0
        if args.command == "version":
            print(__version__)
            return 0
        config = parse_config(args.config, args.overrides, args.seed)
        if args.command == "validate-config":
            print(json.dumps(effective_config(config), indent=1))
            return 0
        t0 = time.perf_counter()
        records = run(config, workers=args.workers)
        elapsed = time.perf_counter() - t0
        out = args.out or config.output_path
        write_results(records, out, args.format, config, elapsed, args.workers)
        print(f"{len(records)} records written to {out}", file=sys.stderr)
        return 0
    except QThermoError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.exit_code
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return OutputError.exit_code


if __name__ == "__main__":
    sys.exit(main())
