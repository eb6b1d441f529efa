"""Grid mapping of a deployment into signature regions.

The domain is cut into square cells; every cell is labelled with the
signature observed at its center. Cells sharing a signature form the
localization region for that reading, and the region's share of the domain
is the percentage uncertainty.

Cells are indexed row-major: ``k = iy * nx + ix``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from bpsloc.geometry import Deployment, Domain, Point, Signature


@dataclass(frozen=True)
class GridSpec:
    cell_size: float = 1.0

    def __post_init__(self) -> None:
        if not (math.isfinite(self.cell_size) and self.cell_size > 0):
            raise ValueError(f"cell_size must be positive and finite, got {self.cell_size}")

    def cell_counts(self, domain: Domain) -> tuple[int, int]:
        """Return ``(nx, ny)``; raise if the cell size does not tile the domain."""
        counts = []
        for side in (domain.width, domain.height):
            n = round(side / self.cell_size)
            if n < 1 or not math.isclose(n * self.cell_size, side, rel_tol=1e-12, abs_tol=0.0):
                raise ValueError(
                    f"cell_size {self.cell_size} does not evenly divide domain side {side}"
                )
            counts.append(int(n))
        return counts[0], counts[1]

    def cell_centers(self, domain: Domain) -> tuple[np.ndarray, np.ndarray]:
        """Center coordinates of every cell, flattened in row-major order."""
        nx, ny = self.cell_counts(domain)
        xs = (np.arange(nx) + 0.5) * self.cell_size
        ys = (np.arange(ny) + 0.5) * self.cell_size
        return np.tile(xs, ny), np.repeat(ys, nx)


def detection_matrix(
    positions: np.ndarray, radii: np.ndarray, cx: np.ndarray, cy: np.ndarray
) -> np.ndarray:
    """Boolean ``(ncells, nbeacons)`` matrix of strict in-disk tests."""
    dx = cx[:, None] - positions[None, :, 0]
    dy = cy[:, None] - positions[None, :, 1]
    return dx * dx + dy * dy < radii * radii


def group_rows(bits: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Group identical rows of a boolean matrix.

    Returns ``(labels, packed, counts)`` where groups are numbered by first
    appearance in row order, ``packed`` holds each group's bits packed
    little-endian into bytes, and ``counts`` the group sizes.
    """
    ncells, nbits = bits.shape
    packed = np.packbits(bits, axis=1, bitorder="little")
    if nbits == 0:
        return np.zeros(ncells, dtype=np.intp), packed[:1], np.array([ncells], dtype=np.int64)
    nbytes = packed.shape[1]
    if nbytes <= 8:
        wide = np.zeros((ncells, 8), dtype=np.uint8)
        wide[:, :nbytes] = packed
        keys = wide.view("<u8").ravel()
    else:
        keys = np.ascontiguousarray(packed).view(np.dtype((np.void, nbytes))).ravel()
    _, first, inverse, counts = np.unique(keys, return_index=True, return_inverse=True, return_counts=True)
    order = np.argsort(first, kind="stable")
    rank = np.empty_like(order)
    rank[order] = np.arange(order.size)
    return rank[inverse.ravel()], packed[first[order]], counts[order].astype(np.int64)


def _pack_reading(reading: Signature) -> bytes:
    return np.packbits(np.asarray(reading.bits, dtype=bool), bitorder="little").tobytes()


@dataclass(frozen=True, eq=False)
class SignatureMap:
    """Cells of a gridded domain partitioned by shared signature.

    ``labels[k]`` is the group of cell ``k``; group ``g`` has ``counts[g]``
    cells and packed signature ``packed[g]``. Groups are numbered by first
    appearance in row-major cell order.
    """

    deployment: Deployment
    grid: GridSpec
    labels: np.ndarray = field(repr=False)
    packed: np.ndarray = field(repr=False)
    counts: np.ndarray = field(repr=False)

    @property
    def domain(self) -> Domain:
        return self.deployment.domain

    @property
    def shape(self) -> tuple[int, int]:
        return self.grid.cell_counts(self.domain)

    @property
    def ncells(self) -> int:
        return int(self.labels.size)

    @property
    def nbeacons(self) -> int:
        return len(self.deployment)

    @property
    def cell_area(self) -> float:
        return self.grid.cell_size * self.grid.cell_size

    @cached_property
    def _index(self) -> dict[bytes, int]:
        return {row.tobytes(): g for g, row in enumerate(self.packed)}

    @cached_property
    def _members(self) -> list[np.ndarray]:
        order = np.argsort(self.labels, kind="stable")
        bounds = np.cumsum(self.counts)[:-1]
        return np.split(order, bounds)

    def signature_of_group(self, g: int) -> Signature:
        bits = np.unpackbits(self.packed[g], count=self.nbeacons, bitorder="little")
        return Signature(tuple(int(b) for b in bits))

    @property
    def signatures(self) -> list[Signature]:
        return [self.signature_of_group(g) for g in range(self.counts.size)]

    def group_of(self, reading: Signature) -> int | None:
        self._check_length(reading)
        return self._index.get(_pack_reading(reading))

    def cells_of_group(self, g: int) -> np.ndarray:
        return self._members[g]

    def signature_of_cell(self, ix: int, iy: int) -> Signature:
        nx, _ = self.shape
        return self.signature_of_group(int(self.labels[iy * nx + ix]))

    def table(self) -> dict[Signature, tuple[np.ndarray, float]]:
        """Map every distinct signature to its cell indices and area."""
        return {
            self.signature_of_group(g): (self.cells_of_group(g), float(n) * self.cell_area)
            for g, n in enumerate(self.counts)
        }

    def _check_length(self, reading: Signature) -> None:
        if len(reading) != self.nbeacons:
            raise ValueError(
                f"reading has {len(reading)} bits but the deployment has {self.nbeacons} beacons"
            )


@dataclass(frozen=True)
class LocalizationResult:
    reading: Signature
    cells: np.ndarray = field(repr=False)
    area: float
    uncertainty_pct: float
    centroid: Point | None

    @property
    def empty(self) -> bool:
        return self.cells.size == 0


def build_signature_map(dep: Deployment, grid: GridSpec = GridSpec()) -> SignatureMap:
    cx, cy = grid.cell_centers(dep.domain)
    positions = np.array([(b.position.x, b.position.y) for b in dep.beacons], dtype=float).reshape(-1, 2)
    radii = np.array([b.radius for b in dep.beacons], dtype=float)
    bits = detection_matrix(positions, radii, cx, cy)
    labels, packed, counts = group_rows(bits)
    return SignatureMap(dep, grid, labels, packed, counts)


def uncertainty_for_reading(smap: SignatureMap, reading: Signature) -> float:
    g = smap.group_of(reading)
    if g is None:
        return 0.0
    return 100.0 * int(smap.counts[g]) / smap.ncells


def localize(smap: SignatureMap, reading: Signature) -> LocalizationResult:
    """Region of cells consistent with ``reading``.

    An unmatched reading gives an empty result (``empty`` is true and the
    centroid is None) rather than an error.
    """
    g = smap.group_of(reading)
    if g is None:
        return LocalizationResult(reading, np.empty(0, dtype=np.intp), 0.0, 0.0, None)
    cells = smap.cells_of_group(g)
    nx, _ = smap.shape
    cs = smap.grid.cell_size
    ix = cells % nx
    iy = cells // nx
    centroid = Point(float(np.mean((ix + 0.5) * cs)), float(np.mean((iy + 0.5) * cs)))
    return LocalizationResult(
        reading,
        cells,
        float(cells.size) * smap.cell_area,
        100.0 * cells.size / smap.ncells,
        centroid,
    )


def expected_uncertainty_from_counts(counts: np.ndarray) -> float:
    """Area-weighted mean uncertainty ``100 * sum((n_k / N)^2)`` for group sizes ``n_k``."""
    counts = np.asarray(counts, dtype=np.int64)
    total = int(counts.sum())
    return 100.0 * int(np.dot(counts, counts)) / (total * total)


def expected_uncertainty(smap: SignatureMap) -> float:
    """Mean uncertainty seen by a target dropped uniformly at random on the grid."""
    return expected_uncertainty_from_counts(smap.counts)
