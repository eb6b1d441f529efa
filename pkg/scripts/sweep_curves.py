#!/usr/bin/env python
"""Full uncertainty curves: %U against radius per beacon count, and against
beacon count per radius. Writes sweep CSVs for external plotting."""
from __future__ import annotations

import argparse
from pathlib import Path

from bpsloc.cli import RunManifest, write_sweep_csv
from bpsloc.montecarlo import Metric, TrialConfig, sweep_beacons, sweep_radius

COUNTS = [4, 8, 16, 32, 64]
RADII = [float(r) for r in range(5, 96, 5)]
COUNT_SWEEP_RADII = [5.0, 10.0, 20.0, 40.0]


def _manifest(args, **params) -> RunManifest:
    params.update(trials=args.trials, metric=args.metric, cell_size=1.0, width=100.0, height=100.0)
    return RunManifest("sweep", params, seed=args.seed)


def main() -> None:
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--trials", type=int, default=500)
    p.add_argument("--seed", type=int, default=1)
    p.add_argument("--metric", choices=[m.value for m in Metric], default=Metric.EXPECTED_AREA_WEIGHTED.value)
    p.add_argument("--out", type=Path, default=Path("results"))
    args = p.parse_args()
    args.out.mkdir(parents=True, exist_ok=True)
    metric = Metric(args.metric)

    for b in COUNTS:
        res = sweep_radius(TrialConfig(b, RADII[0], trials=args.trials, seed=args.seed, metric=metric), RADII)
        with open(args.out / f"radius_b{b}.csv", "w") as fh:
            write_sweep_csv(res, _manifest(args, mode="radius", beacons=b, radii="5:95:5"), fh)
        print(f"b={b:<3} optimum r={res.optimum.radius:g} mean %U={res.optimum.mean_uncertainty_pct:.4f}")

    for r in COUNT_SWEEP_RADII:
        res = sweep_beacons(TrialConfig(COUNTS[0], r, trials=args.trials, seed=args.seed, metric=metric), COUNTS)
        with open(args.out / f"beacons_r{r:g}.csv", "w") as fh:
            write_sweep_csv(res, _manifest(args, mode="beacons", radius=r, counts="4,8,16,32,64"), fh)
        means = ", ".join(f"{x.mean_uncertainty_pct:.3f}" for x in res.records)
        covs = ", ".join(f"{x.cov:.3f}" if x.cov is not None else "nan" for x in res.records)
        print(f"r={r:<4g} means [{means}]  cov [{covs}]")


if __name__ == "__main__":
    main()
