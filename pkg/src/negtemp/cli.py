"""Command-line front end: scenario execution, CSV persistence, checks.

All rates in configuration files are in units of the first qubit's decay
rate. CSV floats use shortest round-trip decimals; infinite temperatures
are written as the literals `inf` / `-inf`.
"""

from __future__ import annotations

import argparse
import configparser
import csv
import json
import os
import sys
import time
from dataclasses import asdict
from pathlib import Path

import numpy as np

from . import __version__
from .errors import ConfigError, NegtempError
from .sweeps import (
    CANONICAL_IDS,
    FixedParams,
    ScenarioConfig,
    SweepRow,
    TruncationPolicy,
    canonical_config,
    run_scenario,
)

CSV_HEADER = (
    "scenario,k,n_bath,axis,axis_value,atom,sigma_z,entropy_nats,"
    "kT_over_omega0,coherence_abs,n_max_used,residual"
)

_CONFIG_KEYS = {
    "id", "k_list", "n_list", "sweep_axis", "axis_grid",
    "axis_start", "axis_stop", "axis_points", "axis_scale",
    "c", "g", "lambda", "kappa", "gamma_b",
    "n_start", "n_cap", "tol_sigma_z", "tail_eps",
}


def _fmt(value) -> str:
    if isinstance(value, float):
        return repr(value)
    return str(value)


def write_csv(rows: list[SweepRow], path: str | Path) -> None:
    """Write rows under the fixed header; lossless float round-trip."""
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(CSV_HEADER.split(","))
        for r in rows:
            writer.writerow([
                r.scenario_id, r.k, _fmt(r.n_bath), r.axis, _fmt(r.axis_value),
                r.atom, _fmt(r.sigma_z), _fmt(r.entropy_nats),
                _fmt(r.kT_over_omega0), _fmt(r.coherence_abs),
                r.n_max_used, _fmt(r.residual),
            ])


def read_csv(path: str | Path) -> list[SweepRow]:
    """Inverse of write_csv."""
    rows = []
    with open(path, encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        if header != CSV_HEADER.split(","):
            raise ConfigError(f"unexpected CSV header in {path}")
        for rec in reader:
            rows.append(SweepRow(
                scenario_id=rec[0], k=int(rec[1]), n_bath=float(rec[2]),
                axis=rec[3], axis_value=float(rec[4]), atom=rec[5],
                sigma_z=float(rec[6]), entropy_nats=float(rec[7]),
                kT_over_omega0=float(rec[8]), coherence_abs=float(rec[9]),
                n_max_used=int(rec[10]), residual=float(rec[11]),
            ))
    return rows


# ---------------------------------------------------------------------------
# configuration files


def _floats(text: str) -> tuple[float, ...]:
    return tuple(float(tok) for tok in text.replace(",", " ").split())


def _ints(text: str) -> tuple[int, ...]:
    return tuple(int(tok) for tok in text.replace(",", " ").split())


def _grid(section: configparser.SectionProxy, base: ScenarioConfig | None):
    if "axis_grid" in section:
        for key in ("axis_start", "axis_stop", "axis_points", "axis_scale"):
            if key in section:
                raise ConfigError(f"give either axis_grid or {key}, not both")
        return _floats(section["axis_grid"])
    range_keys = [k for k in ("axis_start", "axis_stop", "axis_points") if k in section]
    if not range_keys:
        return base.axis_grid if base is not None else None
    if len(range_keys) != 3:
        raise ConfigError("axis_start, axis_stop and axis_points are required together")
    scale = section.get("axis_scale", "linear")
    start = float(section["axis_start"])
    stop = float(section["axis_stop"])
    points = int(section["axis_points"])
    if scale == "log":
        return tuple(np.geomspace(start, stop, points))
    if scale == "linear":
        return tuple(np.linspace(start, stop, points))
    raise ConfigError(f"axis_scale must be linear or log, got {scale!r}")


def parse_config(path: str | Path) -> list[ScenarioConfig]:
    """Read an INI-style run configuration, one section per scenario.

    Every key is validated; unknown keys fail the parse. A section may
    start from a canonical figure template (`id = fig3`) and override
    individual fields, or declare `id = custom` and spell everything out.
    """
    parser = configparser.ConfigParser(inline_comment_prefixes=(";", "#"))
    found = parser.read(path)
    if not found:
        raise ConfigError(f"cannot read config file {path}")
    if not parser.sections():
        raise ConfigError(f"no scenario sections in {path}")

    configs = []
    for name in parser.sections():
        section = parser[name]
        unknown = {k for k in section} - _CONFIG_KEYS
        if unknown:
            raise ConfigError(f"unknown keys in [{name}]: {sorted(unknown)}")

        template = section.get("id", name if name in CANONICAL_IDS else "custom")
        if template in CANONICAL_IDS:
            base = canonical_config(int(template[3:]))
        elif template == "custom":
            base = None
        else:
            raise ConfigError(f"[{name}] id must be fig1..fig7 or custom, got {template!r}")

        def pick(key, conv, default):
            return conv(section[key]) if key in section else default

        try:
            axis_grid = _grid(section, base)
            sweep_axis = pick("sweep_axis", str, base.sweep_axis if base else None)
            if sweep_axis is None or axis_grid is None:
                raise ConfigError(f"[{name}] needs sweep_axis and an axis grid")
            k_list = pick("k_list", _ints, base.k_list if base else None)
            if k_list is None:
                raise ConfigError(f"[{name}] needs k_list")
            default_n = base.n_list if base else ()
            n_list = pick("n_list", _floats, default_n)
            base_fixed = base.fixed if base else FixedParams()
            fixed = FixedParams(
                C=pick("c", float, base_fixed.C),
                g=pick("g", float, base_fixed.g),
                lam=pick("lambda", float, base_fixed.lam),
                kappa=pick("kappa", float, base_fixed.kappa),
                gamma_B=pick("gamma_b", float, base_fixed.gamma_B),
            )
            base_trunc = base.truncation if base else TruncationPolicy()
            trunc = TruncationPolicy(
                n_start=pick("n_start", int, base_trunc.n_start),
                n_cap=pick("n_cap", int, base_trunc.n_cap),
                tol_sigma_z=pick("tol_sigma_z", float, base_trunc.tol_sigma_z),
                tail_eps=pick("tail_eps", float, base_trunc.tail_eps),
            )
            configs.append(ScenarioConfig(
                scenario_id=name, k_list=k_list, n_list=n_list,
                sweep_axis=sweep_axis, axis_grid=axis_grid,
                fixed=fixed, truncation=trunc,
            ))
        except (ValueError, KeyError) as exc:
            raise ConfigError(f"[{name}]: {exc}") from exc
    return configs


# ---------------------------------------------------------------------------
# subcommands


def _resolve_jobs(value: int | None) -> int:
    if value is not None:
        return max(1, value)
    env = os.environ.get("NEGTEMP_JOBS")
    if env:
        try:
            return max(1, int(env))
        except ValueError as exc:
            raise ConfigError(f"NEGTEMP_JOBS must be an integer, got {env!r}") from exc
    return os.cpu_count() or 1


def _write_manifest(out_dir: Path, entries, config_path, jobs, elapsed) -> None:
    manifest = {
        "tool": f"negtemp {__version__}",
        "config_path": str(config_path) if config_path else None,
        "output_dir": str(out_dir),
        "jobs": jobs,
        "wall_time_s": round(elapsed, 3),
        "scenarios": entries,
    }
    with open(out_dir / "manifest.json", "w", encoding="utf-8") as fh:
        json.dump(manifest, fh, indent=2)
        fh.write("\n")


def _run_configs(configs, out_dir: Path, jobs: int, keep_partial: bool, config_path=None) -> int:
    out_dir.mkdir(parents=True, exist_ok=True)
    entries = []
    started = time.monotonic()
    failed = False
    for config in configs:
        csv_path = out_dir / f"{config.scenario_id}.csv"
        try:
            rows = run_scenario(config, jobs=jobs)
        except NegtempError as exc:
            print(f"error: {exc}", file=sys.stderr)
            failed = True
            break
        write_csv(rows, csv_path)
        entries.append({
            "name": config.scenario_id,
            "csv": csv_path.name,
            "rows": len(rows),
            "sweep_axis": config.sweep_axis,
            "solver": "direct",
            "truncation": asdict(config.truncation),
        })
        print(f"{config.scenario_id}: {len(rows)} rows -> {csv_path}")
    if not failed or keep_partial:
        _write_manifest(out_dir, entries, config_path, jobs, time.monotonic() - started)
    return 1 if failed else 0


def _cmd_run(args) -> int:
    configs = parse_config(args.config)
    return _run_configs(
        configs, Path(args.out), _resolve_jobs(args.jobs), args.keep_partial,
        config_path=args.config,
    )


def _cmd_fig(args) -> int:
    config = canonical_config(args.id)
    return _run_configs(
        [config], Path(args.out), _resolve_jobs(args.jobs), keep_partial=False
    )


def _cmd_check(args) -> int:
    from .oracles import run_all_checks

    failures = 0
    for result in run_all_checks():
        status = "pass" if result.passed else "FAIL"
        print(f"[{status}] {result.name}: {result.detail}")
        failures += 0 if result.passed else 1
    return 1 if failures else 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="negtemp",
        description=(
            "Steady states and effective temperatures of driven qubit-boson "
            "models. All rates are in units of the qubit decay rate."
        ),
    )
    parser.add_argument("--version", action="version", version=f"negtemp {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="execute scenarios from a config file")
    p_run.add_argument("--config", required=True, help="INI file, one section per scenario")
    p_run.add_argument("--out", required=True, help="output directory for CSVs")
    p_run.add_argument("--jobs", type=int, default=None,
                       help="parallel solves (default: NEGTEMP_JOBS or all cores)")
    p_run.add_argument("--keep-partial", action="store_true",
                       help="write the manifest even if a scenario fails")
    p_run.set_defaults(func=_cmd_run)

    p_fig = sub.add_parser("fig", help="run one canonical figure scenario")
    p_fig.add_argument("--id", type=int, required=True, choices=range(1, 8))
    p_fig.add_argument("--out", required=True)
    p_fig.add_argument("--jobs", type=int, default=None)
    p_fig.set_defaults(func=_cmd_fig)

    p_check = sub.add_parser("check", help="run the built-in analytic oracle suite")
    p_check.set_defaults(func=_cmd_check)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except NegtempError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
