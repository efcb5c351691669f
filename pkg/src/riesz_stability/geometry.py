"""Point configurations, the cubic partition, and energy decompositions.

Cells are the half-open cubes of rib `rib` centered at rib * r for integer
lattice vectors r: coordinate i of a point belongs to cell index r_i when
rib*(r_i - 1/2) <= x_i < rib*(r_i + 1/2).  Every point lies in exactly one
cell, boundaries included on the left.

Energy sums use math.fsum, which returns the exactly rounded sum of the
pair terms.  That makes totals independent of pair order, permutation of
points, and of whether pairs are grouped by cell, so the intra/inter
decomposition reproduces the total to floating precision by construction.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass

import numpy as np

__all__ = [
    "CubicPartition",
    "as_configuration",
    "cell_index",
    "cell_indices",
    "occupancy",
    "total_energy",
    "total_energy_finite_range",
    "energy_decomposition",
    "max_pair_distance",
    "random_configuration",
    "configuration_to_csv",
    "configuration_from_csv",
    "configuration_to_json_dict",
    "configuration_from_json_dict",
]


@dataclass(frozen=True)
class CubicPartition:
    """The grid of half-open cubes of rib `rib` centered on rib * Z^d."""

    dimension: int
    rib: float

    def __post_init__(self):
        if self.dimension < 1:
            raise ValueError(f"dimension must be >= 1, got {self.dimension}")
        if not (self.rib > 0 and math.isfinite(self.rib)):
            raise ValueError(f"rib must be positive and finite, got {self.rib}")


def as_configuration(points, dimension: int | None = None) -> np.ndarray:
    """Normalize to a float (N, d) array of finite coordinates."""
    pts = np.asarray(points, dtype=float)
    if pts.ndim == 1:
        pts = pts[:, None] if dimension in (None, 1) else pts[None, :]
    if pts.ndim != 2:
        raise ValueError(f"points must form an (N, d) array, got shape {pts.shape}")
    if dimension is not None and pts.shape[1] != dimension and pts.size:
        raise ValueError(
            f"points have dimension {pts.shape[1]}, expected {dimension}"
        )
    if not np.all(np.isfinite(pts)):
        raise ValueError("points must have finite coordinates")
    return pts


def cell_indices(points, part: CubicPartition) -> np.ndarray:
    """Integer lattice index of every point's cell, shape (N, d).

    Starts from floor(x/rib + 1/2) and then repairs against the defining
    half-open inequalities, so the convention is exact even when the
    division rounds across a boundary.
    """
    pts = as_configuration(points, part.dimension)
    rib = part.rib
    idx = np.floor(pts / rib + 0.5).astype(np.int64)
    for _ in range(3):
        low_bad = pts < rib * (idx - 0.5)
        high_bad = pts >= rib * (idx + 0.5)
        if not (low_bad.any() or high_bad.any()):
            break
        idx = idx - low_bad.astype(np.int64) + high_bad.astype(np.int64)
    return idx


def cell_index(x, part: CubicPartition) -> tuple:
    """Cell index of one point as a tuple of ints."""
    return tuple(int(v) for v in cell_indices(np.atleast_2d(x), part)[0])


def occupancy(points, part: CubicPartition) -> dict:
    """Group points by cell: {lattice tuple: (n_cell, d) array}.

    Within-cell input order is preserved; only nonempty cells appear.
    """
    pts = as_configuration(points, part.dimension)
    idx = cell_indices(pts, part)
    cells: dict = {}
    for row, key in enumerate(map(tuple, idx.tolist())):
        cells.setdefault(key, []).append(row)
    return {key: pts[rows] for key, rows in cells.items()}


def _pair_distances(pts: np.ndarray):
    """(i, j, distance) arrays over pairs i < j; raises on coincidence."""
    n = pts.shape[0]
    iu, ju = np.triu_indices(n, k=1)
    diff = pts[iu] - pts[ju]
    dist2 = np.einsum("ij,ij->i", diff, diff)
    zero = np.nonzero(dist2 == 0.0)[0]
    if zero.size:
        k = int(zero[0])
        raise ValueError(
            f"coincident points {int(iu[k])} and {int(ju[k])}"
        )
    return iu, ju, np.sqrt(dist2)


def total_energy(points, potential) -> float:
    """Sum of Phi over unordered pairs; 0 for fewer than two points."""
    pts = as_configuration(points, potential.dimension)
    if pts.shape[0] < 2:
        return 0.0
    _, _, dist = _pair_distances(pts)
    return math.fsum(np.asarray(potential.evaluate(dist), dtype=float))


def total_energy_finite_range(points, potential, cutoff: float) -> float:
    """Total energy for a potential known to vanish beyond `cutoff`.

    Enumerates only pairs from neighboring cells of a cutoff-sized
    partition.  Because dropped pairs contribute exact zeros and fsum is
    exactly rounded, the result is bit-identical to total_energy.
    """
    if cutoff <= 0:
        raise ValueError(f"cutoff must be positive, got {cutoff}")
    pts = as_configuration(points, potential.dimension)
    n = pts.shape[0]
    if n < 2:
        return 0.0
    part = CubicPartition(pts.shape[1], cutoff)
    idx = cell_indices(pts, part)
    cells: dict = {}
    for row, key in enumerate(map(tuple, idx.tolist())):
        cells.setdefault(key, []).append(row)
    d = pts.shape[1]
    offsets = np.stack(
        np.meshgrid(*([np.arange(-1, 2)] * d), indexing="ij"), axis=-1
    ).reshape(-1, d)
    terms = []
    for key, rows in cells.items():
        base = np.asarray(key)
        for off in offsets:
            other = tuple((base + off).tolist())
            if other not in cells:
                continue
            if other < key:
                continue
            rows_b = cells[other]
            if other == key:
                a = pts[rows]
                if len(rows) < 2:
                    continue
                iu, ju = np.triu_indices(len(rows), k=1)
                diff = a[iu] - a[ju]
            else:
                a, b = pts[rows], pts[rows_b]
                diff = a[:, None, :] - b[None, :, :]
                diff = diff.reshape(-1, d)
            dist2 = np.einsum("ij,ij->i", diff, diff)
            if np.any(dist2 == 0.0):
                raise ValueError("coincident points")
            dist = np.sqrt(dist2)
            close = dist <= cutoff
            if np.any(close):
                terms.append(np.asarray(potential.evaluate(dist[close]), float))
    if not terms:
        return 0.0
    return math.fsum(np.concatenate(terms))


def energy_decomposition(points, potential, part: CubicPartition):
    """Split the energy into per-cell and cross-cell parts.

    Returns (intra, inter): intra maps each cell with at least two points
    to the energy of its own pairs, inter is the sum over pairs straddling
    two cells.  sum(intra.values()) + inter reproduces total_energy within
    a few units in the last place (each part is an exactly rounded sum).
    """
    pts = as_configuration(points, part.dimension)
    if pts.shape[0] < 2:
        return {}, 0.0
    iu, ju, dist = _pair_distances(pts)
    vals = np.asarray(potential.evaluate(dist), dtype=float)
    idx = cell_indices(pts, part)
    keys = [tuple(row) for row in idx.tolist()]
    intra_terms: dict = {}
    inter_terms = []
    for k in range(vals.size):
        a, b = keys[iu[k]], keys[ju[k]]
        if a == b:
            intra_terms.setdefault(a, []).append(vals[k])
        else:
            inter_terms.append(vals[k])
    intra = {cell: math.fsum(terms) for cell, terms in intra_terms.items()}
    return intra, math.fsum(inter_terms)


def max_pair_distance(points) -> float:
    """Largest pairwise distance; needs at least two points."""
    pts = as_configuration(points)
    if pts.shape[0] < 2:
        raise ValueError(f"need at least 2 points, got {pts.shape[0]}")
    iu, ju = np.triu_indices(pts.shape[0], k=1)
    diff = pts[iu] - pts[ju]
    return float(np.sqrt(np.max(np.einsum("ij,ij->i", diff, diff))))


def random_configuration(n: int, dimension: int, rib: float, seed: int) -> np.ndarray:
    """n points uniform in the origin-centered cube of the given rib.

    Uses numpy's default PCG64 generator seeded with `seed`, so identical
    arguments give identical configurations.  Points closer than
    1e-12 * rib to an earlier point are resampled (Riesz energies blow up
    on near-coincidence).
    """
    if n < 0:
        raise ValueError(f"n must be >= 0, got {n}")
    if rib <= 0:
        raise ValueError(f"rib must be positive, got {rib}")
    rng = np.random.default_rng(seed)
    pts = rng.uniform(-rib / 2, rib / 2, size=(n, dimension))
    if n < 2:
        return pts
    min_gap = 1e-12 * rib
    for _ in range(100):
        iu, ju = np.triu_indices(n, k=1)
        d2 = np.einsum("ij,ij->i", pts[iu] - pts[ju], pts[iu] - pts[ju])
        bad = np.unique(ju[d2 < min_gap * min_gap])
        if bad.size == 0:
            break
        pts[bad] = rng.uniform(-rib / 2, rib / 2, size=(bad.size, dimension))
    return pts


def configuration_to_csv(points, path_or_file) -> None:
    """Write points as CSV with header x1,...,xd and 17 significant digits."""
    pts = as_configuration(points)
    d = pts.shape[1]

    def write(f):
        w = csv.writer(f, lineterminator="\n")
        w.writerow([f"x{i + 1}" for i in range(d)])
        for row in pts:
            w.writerow([format(v, ".17g") for v in row])

    if isinstance(path_or_file, (str, bytes)) or hasattr(path_or_file, "__fspath__"):
        with open(path_or_file, "w", newline="") as f:
            write(f)
    else:
        write(path_or_file)


def configuration_from_csv(path_or_file) -> np.ndarray:
    """Read a configuration written by configuration_to_csv."""
    if isinstance(path_or_file, (str, bytes)) or hasattr(path_or_file, "__fspath__"):
        with open(path_or_file, "r", newline="") as f:
            text = f.read()
    else:
        text = path_or_file.read()
    rows = list(csv.reader(io.StringIO(text)))
    if not rows:
        raise ValueError("empty configuration file")
    header = rows[0]
    d = len(header)
    if header != [f"x{i + 1}" for i in range(d)]:
        raise ValueError(f"expected header x1,...,x{d}, got {header}")
    data = [[float(v) for v in row] for row in rows[1:] if row]
    pts = np.asarray(data, dtype=float).reshape(len(data), d)
    return as_configuration(pts, d)


def configuration_to_json_dict(points) -> dict:
    """JSON-ready mirror of the CSV format: {dimension, points}."""
    pts = as_configuration(points)
    return {"dimension": int(pts.shape[1]), "points": pts.tolist()}


def configuration_from_json_dict(obj) -> np.ndarray:
    d = int(obj["dimension"])
    pts = np.asarray(obj["points"], dtype=float)
    if pts.size == 0:
        pts = pts.reshape(0, d)
    return as_configuration(pts, d)
