"""Spatial primitives and the binary disk-detection predicate.

Beacons detect a target strictly inside their sensing disk. Distances are
compared squared, so the predicate never takes a square root.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence


@dataclass(frozen=True)
class Point:
    x: float
    y: float

    def __post_init__(self) -> None:
        if not (math.isfinite(self.x) and math.isfinite(self.y)):
            raise ValueError(f"point coordinates must be finite, got ({self.x}, {self.y})")


@dataclass(frozen=True)
class Beacon:
    position: Point
    radius: float

    def __post_init__(self) -> None:
        if not math.isfinite(self.radius) or self.radius < 0:
            raise ValueError(f"beacon radius must be finite and >= 0, got {self.radius}")


@dataclass(frozen=True)
class Domain:
    """Axis-aligned rectangle with its lower-left corner at the origin."""

    width: float = 100.0
    height: float = 100.0

    def __post_init__(self) -> None:
        if not (self.width > 0 and self.height > 0):
            raise ValueError(f"domain sides must be positive, got {self.width}x{self.height}")
        if not (math.isfinite(self.width) and math.isfinite(self.height)):
            raise ValueError("domain sides must be finite")

    @property
    def area(self) -> float:
        return self.width * self.height

    def contains(self, p: Point) -> bool:
        return 0.0 <= p.x <= self.width and 0.0 <= p.y <= self.height


@dataclass(frozen=True)
class Deployment:
    """Beacons placed inside a domain. Beacon order fixes the signature bit order."""

    domain: Domain
    beacons: tuple[Beacon, ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "beacons", tuple(self.beacons))
        for i, b in enumerate(self.beacons):
            if not self.domain.contains(b.position):
                raise ValueError(f"beacon {i} at ({b.position.x}, {b.position.y}) lies outside the domain")

    def __len__(self) -> int:
        return len(self.beacons)

    def permuted(self, order: Sequence[int]) -> "Deployment":
        return Deployment(self.domain, tuple(self.beacons[i] for i in order))


@dataclass(frozen=True)
class Signature:
    """Ordered 0/1 reading vector; bit i belongs to beacon i."""

    bits: tuple[int, ...] = field(default=())

    def __post_init__(self) -> None:
        bits = tuple(int(b) for b in self.bits)
        if any(b not in (0, 1) for b in bits):
            raise ValueError(f"signature bits must be 0 or 1, got {self.bits!r}")
        object.__setattr__(self, "bits", bits)

    @classmethod
    def from_string(cls, text: str) -> "Signature":
        if any(c not in "01" for c in text):
            raise ValueError(f"signature string must contain only '0' and '1', got {text!r}")
        return cls(tuple(int(c) for c in text))

    def __str__(self) -> str:
        return "".join("1" if b else "0" for b in self.bits)

    def __len__(self) -> int:
        return len(self.bits)

    def __iter__(self):
        return iter(self.bits)


def detects(beacon: Beacon, x: Point) -> int:
    dx = x.x - beacon.position.x
    dy = x.y - beacon.position.y
    return 1 if dx * dx + dy * dy < beacon.radius * beacon.radius else 0


def signature_at(dep: Deployment, x: Point) -> Signature:
    return Signature(tuple(detects(b, x) for b in dep.beacons))


def make_deployment(domain: Domain, rows: Iterable[tuple[float, float, float]]) -> Deployment:
    """Build a deployment from ``(x, y, r)`` triples."""
    return Deployment(domain, tuple(Beacon(Point(x, y), r) for x, y, r in rows))
