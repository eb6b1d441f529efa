"""Random deployments, repeated trials and radius / beacon-count sweeps.

Every trial owns its own random stream, keyed by the master seed, the
configuration point (beacon count, radius) and the trial index. A
configuration therefore gives the same numbers whether it is run alone or
inside any sweep, and sweep points never share randomness.
"""
from __future__ import annotations

import enum
import math
import struct
from dataclasses import dataclass, field, replace
from typing import Sequence

import numpy as np

from bpsloc.geometry import Beacon, Deployment, Domain, Point
from bpsloc.sigmap import (
    GridSpec,
    detection_matrix,
    expected_uncertainty_from_counts,
    group_rows,
)

SEED_MAX = 2**64 - 1


class Metric(str, enum.Enum):
    EXPECTED_AREA_WEIGHTED = "expected_area_weighted"
    SAMPLED_TARGET = "sampled_target"


@dataclass(frozen=True)
class TrialConfig:
    beacon_count: int
    radius: float
    domain: Domain = field(default_factory=Domain)
    grid: GridSpec = field(default_factory=GridSpec)
    trials: int = 500
    seed: int = 0
    metric: Metric = Metric.EXPECTED_AREA_WEIGHTED

    def __post_init__(self) -> None:
        if self.trials < 1:
            raise ValueError(f"trials must be >= 1, got {self.trials}")
        if self.beacon_count < 1:
            raise ValueError(f"beacon_count must be >= 1, got {self.beacon_count}")
        if not (math.isfinite(self.radius) and self.radius >= 0):
            raise ValueError(f"radius must be finite and >= 0, got {self.radius}")
        if not 0 <= self.seed <= SEED_MAX:
            raise ValueError(f"seed must be a 64-bit unsigned integer, got {self.seed}")
        object.__setattr__(self, "metric", Metric(self.metric))


@dataclass(frozen=True)
class TrialStats:
    mean: float
    std: float
    cov: float | None
    single_sample: bool = False


@dataclass(frozen=True)
class SweepRecord:
    beacon_count: int
    radius: float
    trials: int
    mean_uncertainty_pct: float
    std_uncertainty_pct: float
    cov: float | None

    @property
    def cov_defined(self) -> bool:
        return self.cov is not None


@dataclass(frozen=True)
class SweepResult:
    records: tuple[SweepRecord, ...]
    optimum: SweepRecord


def _radius_key(radius: float) -> int:
    return int.from_bytes(struct.pack("<d", float(radius)), "little")


def trial_rng(seed: int, beacon_count: int, radius: float, trial: int) -> np.random.Generator:
    """Independent stream for one trial of one configuration point.

    The key is ``(beacon_count, IEEE-754 bits of radius, trial)`` spawned
    from the master seed through numpy's SeedSequence hashing.
    """
    ss = np.random.SeedSequence(seed, spawn_key=(beacon_count, _radius_key(radius), trial))
    return np.random.default_rng(ss)


def _uniform_positions(domain: Domain, count: int, rng: np.random.Generator) -> np.ndarray:
    u = rng.random((count, 2))
    return u * np.array([domain.width, domain.height])


def random_deployment(domain: Domain, count: int, radius: float, rng: np.random.Generator) -> Deployment:
    """``count`` beacons placed i.i.d. uniformly over the domain, all with ``radius``."""
    if count < 0:
        raise ValueError(f"count must be >= 0, got {count}")
    pos = _uniform_positions(domain, count, rng)
    return Deployment(domain, tuple(Beacon(Point(float(x), float(y)), radius) for x, y in pos))


def summarize(values: Sequence[float]) -> TrialStats:
    """Sample mean, N-1 standard deviation and coefficient of variation.

    A single sample reports std 0 and cov 0 with ``single_sample`` set; a zero
    mean leaves cov undefined (None).
    """
    arr = np.asarray(values, dtype=float)
    if arr.size == 0:
        raise ValueError("no samples to summarize")
    mean = float(arr.mean())
    if arr.size == 1:
        return TrialStats(mean, 0.0, 0.0 if mean > 0 else None, single_sample=True)
    std = float(arr.std(ddof=1))
    cov = std / mean if mean > 0 else None
    return TrialStats(mean, std, cov)


class _TrialKernel:
    """Per-configuration cached grid centers, reused across trials."""

    def __init__(self, cfg: TrialConfig) -> None:
        self.cfg = cfg
        self.cx, self.cy = cfg.grid.cell_centers(cfg.domain)
        self.nx, self.ny = cfg.grid.cell_counts(cfg.domain)
        self.radii = np.full(cfg.beacon_count, float(cfg.radius))

    def value(self, trial: int) -> float:
        cfg = self.cfg
        rng = trial_rng(cfg.seed, cfg.beacon_count, cfg.radius, trial)
        pos = _uniform_positions(cfg.domain, cfg.beacon_count, rng)
        bits = detection_matrix(pos, self.radii, self.cx, self.cy)
        labels, packed, counts = group_rows(bits)
        if cfg.metric is Metric.EXPECTED_AREA_WEIGHTED:
            return expected_uncertainty_from_counts(counts)
        target = _uniform_positions(cfg.domain, 1, rng)
        reading = detection_matrix(pos, self.radii, target[:, 0], target[:, 1])
        key = np.packbits(reading, axis=1, bitorder="little")[0]
        match = np.flatnonzero(np.all(packed == key, axis=1))
        if match.size == 0:
            return 0.0
        return 100.0 * int(counts[match[0]]) / labels.size


def trial_values(cfg: TrialConfig) -> np.ndarray:
    """Per-trial uncertainty percentages, in trial-index order."""
    kernel = _TrialKernel(cfg)
    return np.array([kernel.value(t) for t in range(cfg.trials)])


def run_trials(cfg: TrialConfig) -> tuple[float, float, float | None]:
    stats = summarize(trial_values(cfg))
    return stats.mean, stats.std, stats.cov


def _record(cfg: TrialConfig) -> SweepRecord:
    stats = summarize(trial_values(cfg))
    return SweepRecord(cfg.beacon_count, float(cfg.radius), cfg.trials, stats.mean, stats.std, stats.cov)


def pick_optimum(records: Sequence[SweepRecord]) -> SweepRecord:
    """Minimum mean; ties go to the smaller radius, then the fewer beacons."""
    if not records:
        raise ValueError("no records")
    return min(records, key=lambda r: (r.mean_uncertainty_pct, r.radius, r.beacon_count))


def _check_increasing(values: Sequence[float], what: str) -> None:
    if len(values) == 0:
        raise ValueError(f"{what} list is empty")
    if any(b <= a for a, b in zip(values, values[1:])):
        raise ValueError(f"{what} must be strictly increasing, got {list(values)}")


def sweep_radius(base: TrialConfig, radii: Sequence[float]) -> SweepResult:
    _check_increasing(radii, "radii")
    records = tuple(_record(replace(base, radius=float(r))) for r in radii)
    return SweepResult(records, pick_optimum(records))


def sweep_beacons(base: TrialConfig, counts: Sequence[int]) -> SweepResult:
    _check_increasing(counts, "counts")
    if counts[0] < 1:
        raise ValueError(f"beacon counts must be >= 1, got {list(counts)}")
    records = tuple(_record(replace(base, beacon_count=int(c))) for c in counts)
    return SweepResult(records, pick_optimum(records))
