"""Command-line front end.

Subcommands: ``gen``, ``localize``, ``dump``, ``sweep``, ``rss``. Every file
or table written starts with ``#`` manifest lines holding the version, the
subcommand and the fully defaulted parameters, so outputs can be re-run.
"""
from __future__ import annotations

import argparse
import csv
import io
import math
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence, TextIO

import numpy as np

from bpsloc import __version__
from bpsloc.geometry import Deployment, Domain, Signature, make_deployment
from bpsloc.montecarlo import (
    SEED_MAX,
    Metric,
    SweepResult,
    TrialConfig,
    random_deployment,
    sweep_beacons,
    sweep_radius,
)
from bpsloc.rss import PathLossParams, radius_from_threshold, rss_at, sample_shadow
from bpsloc.sigmap import GridSpec, build_signature_map, localize

DEPLOYMENT_HEADER = ["id", "x", "y", "r"]
DUMP_HEADER = ["cell_ix", "cell_iy", "signature"]
LOCALIZE_HEADER = ["uncertainty_pct", "area", "centroid_x", "centroid_y", "cells"]
SWEEP_HEADER = ["beacons", "radius", "trials", "mean_uncertainty_pct", "std_uncertainty_pct", "cov"]


class CliError(Exception):
    pass


@dataclass
class RunManifest:
    command: str
    params: dict[str, object]
    seed: int | None = None
    version: str = __version__
    extra: list[str] = field(default_factory=list)

    def lines(self) -> list[str]:
        out = [f"# bpsloc {self.version}", f"# command: {self.command}"]
        if self.seed is not None:
            out.append(f"# seed: {self.seed}")
        for key in sorted(self.params):
            out.append(f"# {key}: {self.params[key]}")
        out.extend(f"# {line}" for line in self.extra)
        return out

    def write(self, fh: TextIO) -> None:
        for line in self.lines():
            fh.write(line + "\n")


def fmt6(value: float | None) -> str:
    if value is None or (isinstance(value, float) and math.isnan(value)):
        return "nan"
    return f"{value:.6g}"


def _data_lines(text: str) -> list[str]:
    return [ln for ln in text.splitlines() if ln.strip() and not ln.lstrip().startswith("#")]


def read_deployment(path: str | Path, domain: Domain) -> Deployment:
    """Parse an ``id,x,y,r`` CSV; row order is beacon order. ``#`` lines are skipped."""
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise CliError(f"cannot read deployment file {path}: {exc}") from exc
    lines = _data_lines(text)
    if not lines:
        raise CliError(f"{path}: missing header {','.join(DEPLOYMENT_HEADER)}")
    reader = csv.reader(lines)
    header = [h.strip() for h in next(reader)]
    if header != DEPLOYMENT_HEADER:
        raise CliError(f"{path}: expected header {','.join(DEPLOYMENT_HEADER)}, got {','.join(header)}")
    rows = []
    for lineno, row in enumerate(reader, start=2):
        if len(row) != 4:
            raise CliError(f"{path}: data row {lineno} has {len(row)} fields, expected 4")
        try:
            rows.append((float(row[1]), float(row[2]), float(row[3])))
        except ValueError as exc:
            raise CliError(f"{path}: data row {lineno}: {exc}") from exc
    try:
        return make_deployment(domain, rows)
    except ValueError as exc:
        raise CliError(f"{path}: {exc}") from exc


def write_deployment(dep: Deployment, fh: TextIO) -> None:
    w = csv.writer(fh, lineterminator="\n")
    w.writerow(DEPLOYMENT_HEADER)
    for i, b in enumerate(dep.beacons):
        w.writerow([i, repr(b.position.x), repr(b.position.y), repr(b.radius)])


def parse_range(text: str) -> list[float]:
    """Inclusive ``start:stop:step`` range; a bare number is a one-point range."""
    parts = text.split(":")
    try:
        nums = [float(p) for p in parts]
    except ValueError as exc:
        raise CliError(f"bad range {text!r}: {exc}") from exc
    if len(nums) == 1:
        return nums
    if len(nums) != 3:
        raise CliError(f"range must be start:stop:step, got {text!r}")
    start, stop, step = nums
    if not step > 0:
        raise CliError(f"range step must be > 0, got {text!r}")
    if start > stop:
        raise CliError(f"range start exceeds stop in {text!r}")
    n = int(math.floor((stop - start) / step + 1e-9)) + 1
    return [start + i * step for i in range(n)]


def parse_counts(text: str) -> list[int]:
    try:
        return [int(c) for c in text.split(",") if c.strip()]
    except ValueError as exc:
        raise CliError(f"bad count list {text!r}: {exc}") from exc


def _seed(text: str) -> int:
    value = int(text)
    if not 0 <= value <= SEED_MAX:
        raise argparse.ArgumentTypeError(f"seed must be in [0, 2**64-1], got {text}")
    return value


def _domain(args: argparse.Namespace) -> Domain:
    try:
        return Domain(args.width, args.height)
    except ValueError as exc:
        raise CliError(str(exc)) from exc


def _grid(args: argparse.Namespace, domain: Domain) -> GridSpec:
    try:
        grid = GridSpec(args.cell_size)
        grid.cell_counts(domain)
    except ValueError as exc:
        raise CliError(str(exc)) from exc
    return grid


def _open_output(path: str | None, stdout: TextIO):
    if path is None or path == "-":
        return _NoClose(stdout)
    try:
        return open(path, "w", newline="")
    except OSError as exc:
        raise CliError(f"cannot write {path}: {exc}") from exc


class _NoClose:
    def __init__(self, fh: TextIO) -> None:
        self.fh = fh

    def __enter__(self) -> TextIO:
        return self.fh

    def __exit__(self, *exc) -> None:
        self.fh.flush()


def cmd_gen(args, stdout, stderr) -> int:
    domain = _domain(args)
    if args.count < 0:
        raise CliError("--count must be >= 0")
    if not args.radius >= 0:
        raise CliError("--radius must be >= 0")
    rng = np.random.default_rng(args.seed)
    dep = random_deployment(domain, args.count, args.radius, rng)
    manifest = RunManifest(
        "gen",
        {"count": args.count, "radius": args.radius, "width": args.width, "height": args.height},
        seed=args.seed,
    )
    with _open_output(args.output, stdout) as fh:
        manifest.write(fh)
        write_deployment(dep, fh)
    return 0


def cmd_localize(args, stdout, stderr) -> int:
    domain = _domain(args)
    grid = _grid(args, domain)
    dep = read_deployment(args.deployment, domain)
    try:
        reading = Signature.from_string(args.reading)
    except ValueError as exc:
        raise CliError(str(exc)) from exc
    if len(reading) != len(dep):
        raise CliError(f"reading has {len(reading)} bits but the deployment has {len(dep)} beacons")
    result = localize(build_signature_map(dep, grid), reading)
    manifest = RunManifest(
        "localize",
        {"deployment": args.deployment, "reading": str(reading), "cell_size": args.cell_size,
         "width": args.width, "height": args.height},
    )
    manifest.write(stdout)
    w = csv.writer(stdout, lineterminator="\n")
    w.writerow(LOCALIZE_HEADER)
    if result.empty:
        stderr.write(f"warning: no grid cell carries reading {reading}; region is empty\n")
        w.writerow([fmt6(0.0), fmt6(0.0), "nan", "nan", 0])
    else:
        w.writerow([
            fmt6(result.uncertainty_pct),
            fmt6(result.area),
            fmt6(result.centroid.x),
            fmt6(result.centroid.y),
            result.cells.size,
        ])
    return 0


def cmd_dump(args, stdout, stderr) -> int:
    domain = _domain(args)
    grid = _grid(args, domain)
    dep = read_deployment(args.deployment, domain)
    smap = build_signature_map(dep, grid)
    nx, ny = smap.shape
    sig_strings = [str(s) for s in smap.signatures]
    manifest = RunManifest(
        "dump",
        {"deployment": args.deployment, "cell_size": args.cell_size, "width": args.width, "height": args.height},
    )
    buf = io.StringIO()
    manifest.write(buf)
    buf.write(",".join(DUMP_HEADER) + "\n")
    labels = smap.labels
    for k in range(smap.ncells):
        buf.write(f"{k % nx},{k // nx},{sig_strings[labels[k]]}\n")
    with _open_output(args.output, stdout) as fh:
        fh.write(buf.getvalue())
    return 0


def write_sweep_csv(result: SweepResult, manifest: RunManifest, fh: TextIO) -> None:
    manifest.write(fh)
    fh.write(",".join(SWEEP_HEADER) + "\n")
    for r in result.records:
        fh.write(",".join([
            str(r.beacon_count),
            fmt6(r.radius),
            str(r.trials),
            fmt6(r.mean_uncertainty_pct),
            fmt6(r.std_uncertainty_pct),
            fmt6(r.cov),
        ]) + "\n")
    fh.write(f"# optimum: beacons={result.optimum.beacon_count},radius={fmt6(result.optimum.radius)}\n")


def cmd_sweep(args, stdout, stderr) -> int:
    domain = _domain(args)
    grid = _grid(args, domain)
    params: dict[str, object] = {
        "mode": args.mode, "trials": args.trials, "metric": args.metric,
        "cell_size": args.cell_size, "width": args.width, "height": args.height,
    }
    try:
        if args.mode == "radius":
            radii = parse_range(args.radii)
            base = TrialConfig(args.beacons, radii[0], domain, grid, args.trials, args.seed, Metric(args.metric))
            result = sweep_radius(base, radii)
            params.update(beacons=args.beacons, radii=args.radii)
        else:
            counts = parse_counts(args.counts)
            if not counts:
                raise CliError("--counts is empty")
            base = TrialConfig(counts[0], args.radius, domain, grid, args.trials, args.seed, Metric(args.metric))
            result = sweep_beacons(base, counts)
            params.update(radius=args.radius, counts=args.counts)
    except ValueError as exc:
        raise CliError(str(exc)) from exc
    manifest = RunManifest("sweep", params, seed=args.seed)
    buf = io.StringIO()
    write_sweep_csv(result, manifest, buf)
    with _open_output(args.output, stdout) as fh:
        fh.write(buf.getvalue())
    opt = result.optimum
    if args.output not in (None, "-"):
        stdout.write(
            f"optimum: beacons={opt.beacon_count} radius={fmt6(opt.radius)} "
            f"mean_uncertainty_pct={fmt6(opt.mean_uncertainty_pct)}\n"
        )
    return 0


def cmd_rss(args, stdout, stderr) -> int:
    try:
        p = PathLossParams(args.p_d0_dbm, args.d0, args.gamma, args.sigma)
    except ValueError as exc:
        raise CliError(str(exc)) from exc
    if (args.threshold_dbm is None) == (args.distance is None):
        raise CliError("give exactly one of --threshold-dbm (prints radius) or --distance (prints RSS in dBm)")
    try:
        if args.distance is not None:
            shadow = sample_shadow(p, np.random.default_rng(args.seed))
            value = rss_at(p, args.distance, shadow)
        else:
            value = radius_from_threshold(p, args.threshold_dbm)
    except ValueError as exc:
        raise CliError(str(exc)) from exc
    stdout.write(f"{value!r}\n")
    return 0


def _add_domain_flags(p: argparse.ArgumentParser, grid: bool = True) -> None:
    p.add_argument("--width", type=float, default=100.0, help="domain width (default 100)")
    p.add_argument("--height", type=float, default=100.0, help="domain height (default 100)")
    if grid:
        p.add_argument("--cell-size", type=float, default=1.0, help="grid cell side (default 1)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="bpsloc", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"bpsloc {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", help="write a random deployment CSV")
    p.add_argument("--count", type=int, required=True)
    p.add_argument("--radius", type=float, required=True)
    p.add_argument("--seed", type=_seed, default=0)
    p.add_argument("--output", "-o", default=None)
    _add_domain_flags(p, grid=False)
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("localize", help="localization region for one reading")
    p.add_argument("deployment")
    p.add_argument("reading", help="'0'/'1' string, one char per beacon row")
    _add_domain_flags(p)
    p.set_defaults(func=cmd_localize)

    p = sub.add_parser("dump", help="write the per-cell signature map")
    p.add_argument("deployment")
    p.add_argument("--output", "-o", default=None)
    _add_domain_flags(p)
    p.set_defaults(func=cmd_dump)

    p = sub.add_parser("sweep", help="Monte Carlo radius or beacon-count sweep")
    p.add_argument("--mode", choices=("radius", "beacons"), required=True)
    p.add_argument("--beacons", type=int, default=8, help="beacon count for radius sweeps")
    p.add_argument("--radii", default="25:45:1", help="start:stop:step, inclusive")
    p.add_argument("--radius", type=float, default=20.0, help="radius for beacon sweeps")
    p.add_argument("--counts", default="4,8,16,32,64", help="comma-separated beacon counts")
    p.add_argument("--trials", type=int, default=500)
    p.add_argument("--seed", type=_seed, default=0)
    p.add_argument("--metric", choices=[m.value for m in Metric], default=Metric.EXPECTED_AREA_WEIGHTED.value)
    p.add_argument("--output", "-o", default=None)
    _add_domain_flags(p)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("rss", help="log-distance RSS at a distance, or radius for a threshold")
    p.add_argument("--p-d0-dbm", type=float, default=-40.0)
    p.add_argument("--d0", type=float, default=1.0)
    p.add_argument("--gamma", type=float, default=2.0)
    p.add_argument("--sigma", type=float, default=0.0)
    p.add_argument("--threshold-dbm", type=float, default=None)
    p.add_argument("--distance", type=float, default=None)
    p.add_argument("--seed", type=_seed, default=0, help="shadowing draw seed when sigma > 0")
    p.set_defaults(func=cmd_rss)
    return parser


def main(argv: Sequence[str] | None = None, stdout: TextIO | None = None, stderr: TextIO | None = None) -> int:
    stdout = sys.stdout if stdout is None else stdout
    stderr = sys.stderr if stderr is None else stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args, stdout, stderr)
    except CliError as exc:
        stderr.write(f"bpsloc {args.command}: error: {exc}\n")
        return 2


if __name__ == "__main__":
    sys.exit(main())
