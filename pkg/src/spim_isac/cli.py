"""Command-line entry point: config parsing, pipeline dispatch, CSV + manifest output.

Config files are JSON with keys matching ScenarioConfig fields; every key is
also available as a flag, and flags override the file. The seed resolution
order is flag, then config file, then the ISAC_SEED environment variable,
then the built-in default. Each run writes UTF-8 CSV files plus one manifest
JSON sufficient to reproduce it.

Exit codes: 0 success, 1 numeric failure (non-finite results or failed
selftest), 2 configuration errors.
"""

from __future__ import annotations

import argparse
import csv
import dataclasses
import json
import os
import sys
from datetime import datetime, timezone
from pathlib import Path
from typing import Mapping, Sequence

import numpy as np

from . import __version__
from .arrays import ArrayGeometry
from .experiments import (
    DEFAULT_ETA_GRID,
    RANDOM_ANGLES,
    AggregateResult,
    ScenarioConfig,
    beampattern_sweep,
    mi_vs_gain,
    mi_vs_snr,
)
from .radar import beampattern_db, default_grid, estimate_doa, music_spectrum, sample_covariance, simulate_probing
from .selftest import run_selftest

MI_CSV_HEADER = (
    "axis_value",
    "mi_spim",
    "mi_mmwave_num",
    "mi_mmwave_cf",
    "stderr_spim",
    "stderr_mmwave_num",
    "trials",
)


class ConfigError(Exception):
    """Invalid configuration file, flag value, or combination."""


_CONFIG_KEYS = {f.name for f in dataclasses.fields(ScenarioConfig)}


def parse_config(
    path: str | None = None,
    overrides: Mapping[str, object] | None = None,
    env: Mapping[str, str] | None = None,
) -> ScenarioConfig:
    """Resolve a ScenarioConfig from file, flag overrides, and environment."""
    env = os.environ if env is None else env
    values: dict[str, object] = {}
    if path is not None:
        try:
            with open(path, encoding="utf-8") as fh:
                loaded = json.load(fh)
        except FileNotFoundError as exc:
            raise ConfigError(f"config file not found: {path}") from exc
        except json.JSONDecodeError as exc:
            raise ConfigError(f"config file is not valid JSON: {exc}") from exc
        if not isinstance(loaded, dict):
            raise ConfigError("config file must hold a JSON object")
        unknown = set(loaded) - _CONFIG_KEYS
        if unknown:
            raise ConfigError(f"unknown config keys: {', '.join(sorted(unknown))}")
        values.update(loaded)
    for key, value in (overrides or {}).items():
        if value is None:
            continue
        if key not in _CONFIG_KEYS:
            raise ConfigError(f"unknown config key: {key}")
        values[key] = value
    if "seed" not in values and env.get("ISAC_SEED"):
        try:
            values["seed"] = int(env["ISAC_SEED"])
        except ValueError as exc:
            raise ConfigError(f"ISAC_SEED must be an integer, got {env['ISAC_SEED']!r}") from exc
    for key in ("gains", "snr_grid_db"):
        if key in values:
            values[key] = tuple(values[key])  # type: ignore[arg-type]
    if isinstance(values.get("path_angles"), list):
        values["path_angles"] = tuple(tuple(pair) for pair in values["path_angles"])
    try:
        return ScenarioConfig(**values)  # type: ignore[arg-type]
    except (TypeError, ValueError) as exc:
        raise ConfigError(str(exc)) from exc


def _fmt(value: float) -> str:
    """Full-precision, locale-free decimal text for one CSV cell."""
    return repr(float(value))


def write_mi_csv(path: Path, result: AggregateResult) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(MI_CSV_HEADER)
        for i, axis_value in enumerate(result.axis):
            writer.writerow(
                [
                    _fmt(axis_value),
                    _fmt(result.mi_spim[i]),
                    _fmt(result.mi_mmwave_num[i]),
                    _fmt(result.mi_mmwave_cf[i]),
                    _fmt(result.stderr_spim[i]),
                    _fmt(result.stderr_mmwave_num[i]),
                    str(result.trials),
                ]
            )


def write_manifest(
    out_dir: Path,
    subcommand: str,
    cfg: ScenarioConfig,
    outputs: Sequence[str],
    extras: Mapping[str, object] | None = None,
) -> Path:
    cfg_dict = dataclasses.asdict(cfg)
    manifest = {
        "tool": "spim-isac",
        "version": __version__,
        "subcommand": subcommand,
        "timestamp_utc": datetime.now(timezone.utc).isoformat(),
        "seed": cfg.seed,
        "config": cfg_dict,
        "outputs": list(outputs),
    }
    manifest.update(extras or {})
    path = out_dir / f"{subcommand.replace('-', '_')}_manifest.json"
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(manifest, fh, indent=2, sort_keys=True, default=list)
        fh.write("\n")
    return path


def _check_finite(subcommand: str, *arrays: np.ndarray) -> None:
    for arr in arrays:
        if not np.all(np.isfinite(arr)):
            raise FloatingPointError(f"{subcommand} produced non-finite values")


def _overrides_from_args(args: argparse.Namespace) -> dict[str, object]:
    out: dict[str, object] = {"seed": args.seed, "trials": args.trials, "eta": args.eta}
    if getattr(args, "snr_min", None) is not None or getattr(args, "snr_max", None) is not None:
        lo = args.snr_min if args.snr_min is not None else 0.0
        hi = args.snr_max if args.snr_max is not None else 20.0
        step = args.snr_step if args.snr_step is not None else 2.0
        if step <= 0 or hi < lo:
            raise ConfigError("need snr_max >= snr_min and snr_step > 0")
        out["snr_grid_db"] = tuple(np.round(np.arange(lo, hi + step / 2, step), 10))
    elif getattr(args, "snr_step", None) is not None:
        out["snr_grid_db"] = tuple(np.round(np.arange(0.0, 20.0 + args.snr_step / 2, args.snr_step), 10))
    return out


def _parse_float_list(text: str, flag: str) -> tuple[float, ...]:
    try:
        return tuple(float(x) for x in text.split(","))
    except ValueError as exc:
        raise ConfigError(f"{flag} expects comma-separated numbers, got {text!r}") from exc


def cmd_mi_vs_snr(args: argparse.Namespace) -> int:
    cfg = parse_config(args.config, _overrides_from_args(args))
    result = mi_vs_snr(cfg, workers=args.workers)
    _check_finite("mi-vs-snr", result.mi_spim, result.mi_mmwave_num, result.mi_mmwave_cf)
    out_dir = _ensure_out_dir(args.out_dir)
    csv_path = out_dir / "mi_vs_snr.csv"
    write_mi_csv(csv_path, result)
    write_manifest(out_dir, "mi-vs-snr", cfg, [csv_path.name])
    if not args.quiet:
        print(f"wrote {csv_path}")
    return 0


def cmd_mi_vs_gain(args: argparse.Namespace) -> int:
    cfg = parse_config(args.config, _overrides_from_args(args))
    grid = _parse_float_list(args.gamma1_grid, "--gamma1-grid") if args.gamma1_grid else None
    result = mi_vs_gain(cfg, gamma1_grid=grid, snr_db=args.snr_db, workers=args.workers)
    _check_finite("mi-vs-gain", result.mi_spim, result.mi_mmwave_num, result.mi_mmwave_cf)
    out_dir = _ensure_out_dir(args.out_dir)
    csv_path = out_dir / "mi_vs_gain.csv"
    write_mi_csv(csv_path, result)
    write_manifest(
        out_dir,
        "mi-vs-gain",
        cfg,
        [csv_path.name],
        {"snr_db": args.snr_db, "gamma1_grid": [float(g) for g in result.axis]},
    )
    if not args.quiet:
        print(f"wrote {csv_path}")
    return 0


def cmd_beampattern(args: argparse.Namespace) -> int:
    cfg = parse_config(args.config, {"seed": args.seed, "eta": None, "trials": None})
    if cfg.path_angles == RANDOM_ANGLES:
        cfg = dataclasses.replace(cfg, path_angles=((50.0, 50.0), (60.0, 60.0)))
    etas = _parse_float_list(args.etas, "--etas") if args.etas else DEFAULT_ETA_GRID
    panels = beampattern_sweep(cfg, etas=etas)
    out_dir = _ensure_out_dir(args.out_dir)
    outputs = []
    for index, panel in enumerate(panels, start=1):
        path = out_dir / f"beampattern_pattern{index}.csv"
        with open(path, "w", encoding="utf-8", newline="") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(["angle_deg"] + [f"eta_{eta:g}" for eta in panel.etas])
            curves_db = np.vstack([beampattern_db(c) for c in panel.curves])
            _check_finite("beampattern", curves_db)
            for j, angle in enumerate(panel.angles_deg):
                writer.writerow([_fmt(angle)] + [_fmt(v) for v in curves_db[:, j]])
        outputs.append(path.name)
    write_manifest(out_dir, "beampattern", cfg, outputs, {"etas": list(etas)})
    if not args.quiet:
        print(f"wrote {', '.join(str(out_dir / name) for name in outputs)}")
    return 0


def cmd_doa(args: argparse.Namespace) -> int:
    cfg = parse_config(args.config, {"seed": args.seed})
    noise_var = 10.0 ** (-args.probing_snr_db / 10.0)
    snaps = simulate_probing(
        ArrayGeometry(cfg.n_t), cfg.target_deg, args.t_r, noise_var, seed=cfg.seed
    )
    cov = sample_covariance(snaps)
    grid = default_grid()
    spectrum = music_spectrum(cov, ArrayGeometry(cfg.n_t), 1, grid)
    estimate = estimate_doa(cov, ArrayGeometry(cfg.n_t), 1, grid)
    _check_finite("doa", spectrum)
    spectrum_db = 10.0 * np.log10(spectrum / np.max(spectrum))
    out_dir = _ensure_out_dir(args.out_dir)
    csv_path = out_dir / "doa_spectrum.csv"
    with open(csv_path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["angle_deg", "spectrum_db"])
        for angle, value in zip(grid, spectrum_db):
            writer.writerow([_fmt(angle), _fmt(value)])
    write_manifest(
        out_dir,
        "doa",
        cfg,
        [csv_path.name],
        {"t_r": args.t_r, "probing_snr_db": args.probing_snr_db, "estimate_deg": estimate},
    )
    if not args.quiet:
        print(f"target {cfg.target_deg} deg, estimated {estimate} deg; wrote {csv_path}")
    return 0


def cmd_selftest(args: argparse.Namespace) -> int:
    return 0 if run_selftest(quiet=args.quiet) else 1


def _ensure_out_dir(out_dir: str) -> Path:
    path = Path(out_dir)
    path.mkdir(parents=True, exist_ok=True)
    return path


def _add_common(parser: argparse.ArgumentParser, trials: bool = True) -> None:
    parser.add_argument("--config", help="JSON config file; flags override its keys")
    parser.add_argument("--seed", type=int, default=None, help="master RNG seed")
    parser.add_argument("--out-dir", default="results", help="output directory")
    parser.add_argument("--quiet", action="store_true", help="suppress progress output")
    if trials:
        parser.add_argument("--trials", type=int, default=None, help="Monte-Carlo trials per point")
        parser.add_argument("--eta", type=float, default=None, help="radar/comm trade-off in [0, 1]")
        parser.add_argument("--workers", type=int, default=1, help="parallel trial threads")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="spim-isac",
        description="Hybrid beamforming simulator for pattern-modulated joint radar-communications",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="subcommand", required=True)

    p = sub.add_parser("mi-vs-snr", help="mean mutual information over an SNR grid")
    _add_common(p)
    p.add_argument("--snr-min", type=float, default=None)
    p.add_argument("--snr-max", type=float, default=None)
    p.add_argument("--snr-step", type=float, default=None)
    p.set_defaults(fn=cmd_mi_vs_snr)

    p = sub.add_parser("mi-vs-gain", help="mean mutual information versus strongest path gain")
    _add_common(p)
    p.add_argument("--gamma1-grid", help="comma-separated gamma1 values, e.g. 0.5,0.6,0.7")
    p.add_argument("--snr-db", type=float, default=20.0, help="fixed SNR for the gain sweep")
    p.set_defaults(fn=cmd_mi_vs_gain)

    p = sub.add_parser("beampattern", help="beampattern per spatial pattern across eta values")
    _add_common(p, trials=False)
    p.add_argument("--etas", help="comma-separated trade-off values, default 0,0.3,0.5,0.8,1")
    p.set_defaults(fn=cmd_beampattern)

    p = sub.add_parser("doa", help="probing plus MUSIC direction estimation demo")
    _add_common(p, trials=False)
    p.add_argument("--t-r", type=int, default=100, help="number of probing snapshots")
    p.add_argument("--probing-snr-db", type=float, default=10.0)
    p.set_defaults(fn=cmd_doa)

    p = sub.add_parser("selftest", help="run the property suite, no figures")
    p.add_argument("--quiet", action="store_true")
    p.set_defaults(fn=cmd_selftest)

    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except FloatingPointError as exc:
        print(f"numeric failure: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
