"""Received-signal-strength propagation models.

Free-space (Friis) power works in watts; the log-distance model with
log-normal shadowing works in dBm. ``radius_from_threshold`` turns a
receiver sensitivity into the disk radius used by the detection model.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class FriisParams:
    tx_power: float = 1.0
    tx_gain: float = 1.0
    rx_gain: float = 1.0
    wavelength: float = 0.125

    def __post_init__(self) -> None:
        if not self.wavelength > 0:
            raise ValueError(f"wavelength must be > 0, got {self.wavelength}")
        if self.tx_gain < 0 or self.rx_gain < 0:
            raise ValueError("antenna gains must be >= 0")
        if self.tx_power < 0:
            raise ValueError(f"tx_power must be >= 0, got {self.tx_power}")


@dataclass(frozen=True)
class PathLossParams:
    p_d0_dbm: float = -40.0
    d0: float = 1.0
    gamma: float = 2.0
    sigma: float = 0.0

    def __post_init__(self) -> None:
        if not self.d0 > 0:
            raise ValueError(f"d0 must be > 0, got {self.d0}")
        if not self.gamma > 0:
            raise ValueError(f"gamma must be > 0, got {self.gamma}")
        if not self.sigma >= 0:
            raise ValueError(f"sigma must be >= 0, got {self.sigma}")


def _check_distance(d: float) -> None:
    if not d > 0:
        raise ValueError(f"distance must be > 0, got {d}")


def friis_received_power(p: FriisParams, d: float) -> float:
    """Received power in watts at distance ``d`` metres."""
    _check_distance(d)
    ratio = p.wavelength / (4.0 * math.pi * d)
    return p.tx_power * p.tx_gain * p.rx_gain * ratio * ratio


def rss_at(p: PathLossParams, d: float, shadow_sample: float = 0.0) -> float:
    """Received power level in dBm. Pass ``shadow_sample=0`` for the mean model."""
    _check_distance(d)
    return p.p_d0_dbm - 10.0 * p.gamma * math.log10(d / p.d0) + shadow_sample


def sample_shadow(p: PathLossParams, rng: np.random.Generator) -> float:
    """One zero-mean Gaussian shadowing draw in dB with std ``p.sigma``."""
    if p.sigma == 0:
        return 0.0
    return float(rng.normal(0.0, p.sigma))


def radius_from_threshold(p: PathLossParams, threshold_dbm: float) -> float:
    """Distance at which the unshadowed RSS falls to ``threshold_dbm``."""
    if threshold_dbm > p.p_d0_dbm:
        raise ValueError(
            f"threshold {threshold_dbm} dBm exceeds the reference power {p.p_d0_dbm} dBm"
        )
    return p.d0 * 10.0 ** ((p.p_d0_dbm - threshold_dbm) / (10.0 * p.gamma))


def shadowed_detects(
    p: PathLossParams, d: float, threshold_dbm: float, rng: np.random.Generator
) -> int:
    """Detection with a fresh shadowing draw on the link: 1 iff RSS exceeds the threshold."""
    return 1 if rss_at(p, d, sample_shadow(p, rng)) > threshold_dbm else 0


def dbm_to_watts(dbm: float) -> float:
    return 10.0 ** ((dbm - 30.0) / 10.0)


def watts_to_dbm(watts: float) -> float:
    if not watts > 0:
        raise ValueError(f"power must be > 0 W to express in dBm, got {watts}")
    return 10.0 * math.log10(watts) + 30.0
