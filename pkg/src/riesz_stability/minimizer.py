"""Minimal Riesz s-energy configurations in cubes and balls.

Multistart projected gradient descent with backtracking line search.  The
energy landscape has many local minima, so every result is an upper bound
on the true minimum and is labeled "best found"; the brute-force grid
oracle exists to keep the descent honest at tiny N.

Projection is exact for both domains (coordinate clamping for the cube,
radial rescaling for the ball).  Independent starts draw their own seeded
random streams and may run concurrently; the winner is selected by a
deterministic fold (energy, then lexicographic configuration), so results
do not depend on scheduling.  RIESZ_STAB_THREADS caps the pool.
"""

from __future__ import annotations

import itertools
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .riesz import riesz_energy

__all__ = [
    "Domain",
    "cube_domain",
    "ball_domain",
    "MinimizationResult",
    "riesz_gradient",
    "minimize_configuration",
    "brute_force_min",
    "e_sequence",
    "ESequenceReport",
    "spatial_histogram",
]

ARMIJO_C = 1e-4
SHRINK = 0.5


@dataclass(frozen=True)
class Domain:
    """A compact search region: origin-centered cube or ball."""

    kind: str  # "cube" | "ball"
    dimension: int
    size: float  # rib of the cube, radius of the ball

    def __post_init__(self):
        if self.kind not in ("cube", "ball"):
            raise ValueError(f"kind must be 'cube' or 'ball', got {self.kind!r}")
        if self.dimension < 1:
            raise ValueError(f"dimension must be >= 1, got {self.dimension}")
        if not (self.size > 0 and math.isfinite(self.size)):
            raise ValueError(f"size must be positive and finite, got {self.size}")

    @property
    def diameter(self) -> float:
        if self.kind == "cube":
            return self.size * math.sqrt(self.dimension)
        return 2.0 * self.size

    def project(self, pts: np.ndarray) -> np.ndarray:
        """Exact Euclidean projection onto the domain."""
        if self.kind == "cube":
            h = self.size / 2.0
            return np.clip(pts, -h, h)
        norms = np.sqrt(np.einsum("ij,ij->i", pts, pts))
        factor = np.where(norms > self.size, self.size / np.maximum(norms, 1e-300), 1.0)
        return pts * factor[:, None]

    def contains(self, pts: np.ndarray, tol: float = 1e-12) -> bool:
        pts = np.asarray(pts, dtype=float)
        if pts.size == 0:
            return True
        if self.kind == "cube":
            return bool(np.all(np.abs(pts) <= self.size / 2.0 + tol))
        return bool(
            np.all(np.sqrt(np.einsum("ij,ij->i", pts, pts)) <= self.size + tol)
        )

    def sample(self, n: int, rng: np.random.Generator) -> np.ndarray:
        """n points uniform over the domain."""
        if self.kind == "cube":
            h = self.size / 2.0
            return rng.uniform(-h, h, size=(n, self.dimension))
        vec = rng.normal(size=(n, self.dimension))
        vec /= np.maximum(np.linalg.norm(vec, axis=1), 1e-300)[:, None]
        radii = self.size * rng.uniform(0.0, 1.0, size=n) ** (1.0 / self.dimension)
        return vec * radii[:, None]


def cube_domain(dimension: int, rib: float = 1.0) -> Domain:
    return Domain("cube", dimension, rib)


def ball_domain(dimension: int, radius: float = 1.0) -> Domain:
    return Domain("ball", dimension, radius)


@dataclass(frozen=True)
class MinimizationResult:
    """Best-found configuration and its diagnostics.

    `energy` is recomputed from the configuration with the exactly rounded
    pair sum, and `note` records that the value is an upper bound for the
    true minimum, not a certificate of global optimality.
    """

    points: np.ndarray
    energy: float
    normalized: float
    iterations: int
    grad_norm: float
    starts: int
    best_start: int
    note: str = "best found"

    def as_json_dict(self) -> dict:
        return {
            "kind": "minimization",
            "energy": self.energy,
            "normalized_energy": self.normalized,
            "iterations": self.iterations,
            "grad_norm": self.grad_norm,
            "starts": self.starts,
            "best_start": self.best_start,
            "note": self.note,
            "configuration": {
                "dimension": int(self.points.shape[1]) if self.points.size else 0,
                "points": self.points.tolist(),
            },
        }


def _pairwise(pts: np.ndarray, s: float):
    """Energy and squared-distance matrix; raises on coincidence."""
    n = pts.shape[0]
    diff = pts[:, None, :] - pts[None, :, :]
    d2 = np.einsum("ijk,ijk->ij", diff, diff)
    off = ~np.eye(n, dtype=bool)
    if np.any(d2[off] == 0.0):
        iu, ju = np.nonzero(off & (d2 == 0.0))
        raise ValueError(f"coincident points {int(iu[0])} and {int(ju[0])}")
    return diff, d2


def riesz_gradient(points, s: float) -> np.ndarray:
    """Gradient of the pair energy: row i is -s * sum_j (x_i-x_j)/|x_i-x_j|^(s+2)."""
    pts = np.asarray(points, dtype=float)
    if pts.ndim == 1:
        pts = pts[:, None]
    if s <= 0:
        raise ValueError(f"gradient needs s > 0, got s={s}")
    n = pts.shape[0]
    if n < 2:
        return np.zeros_like(pts)
    diff, d2 = _pairwise(pts, s)
    np.fill_diagonal(d2, np.inf)
    w = d2 ** (-(s + 2.0) / 2.0)
    return -s * np.einsum("ij,ijk->ik", w, diff)


def _fast_energy(pts: np.ndarray, s: float, iu, ju) -> float:
    """Quick pair-sum energy for the inner loop (inf on coincidence)."""
    diff = pts[iu] - pts[ju]
    d2 = np.einsum("ij,ij->i", diff, diff)
    if np.any(d2 == 0.0):
        return math.inf
    return float(np.sum(d2 ** (-s / 2.0)))


def _min_pair_distance(pts: np.ndarray, iu, ju) -> float:
    diff = pts[iu] - pts[ju]
    return math.sqrt(float(np.min(np.einsum("ij,ij->i", diff, diff))))


def _descend(x0, dom: Domain, s: float, max_iters: int, grad_tol: float):
    """One spectral projected-gradient run; returns (points, iterations, pg_norm).

    Barzilai-Borwein steps along the projected direction, accepted by a
    nonmonotone Armijo test against the worst of the last 10 energies
    (the usual companion of spectral steps; a monotone test starves
    them).  A step is rejected if it would push any pair distance below
    1e-8 of the domain diameter while shrinking it further, and the run
    stops early once the energy has been flat to 1e-14 for 600 accepted
    steps.  The best iterate seen is returned.
    """
    n = x0.shape[0]
    iu, ju = np.triu_indices(n, k=1)
    x = dom.project(np.array(x0, dtype=float))
    energy = _fast_energy(x, s, iu, ju)
    floor = 1e-8 * dom.diameter
    history = [energy]
    best_x, best_energy = x, energy
    alpha = None
    prev_x = prev_g = None
    iters = 0
    stall = 0
    for iters in range(1, max_iters + 1):
        g = riesz_gradient(x, s)
        # stationarity measure: displacement of a unit projected step
        pg_norm = float(np.linalg.norm(x - dom.project(x - g)))
        if pg_norm <= grad_tol:
            best_x, best_energy = x, energy
            break
        if prev_x is None:
            gmax = float(np.max(np.linalg.norm(g, axis=1)))
            if gmax == 0.0:
                break
            alpha = 0.1 * dom.diameter / gmax
        else:
            dx = (x - prev_x).ravel()
            dg = (g - prev_g).ravel()
            sy = float(dx @ dg)
            alpha = float(dx @ dx) / sy if sy > 0 else alpha * 2.0
        if not math.isfinite(alpha) or alpha <= 0:
            alpha = 0.1 * dom.diameter / max(float(np.max(np.abs(g))), 1e-300)
        direction = dom.project(x - alpha * g) - x
        slope = float(np.einsum("ij,ij->", g, direction))
        if slope >= 0.0:  # projection left no descent direction
            break
        e_ref = max(history[-10:])
        dmin = _min_pair_distance(x, iu, ju)
        lam = 1.0
        accepted = False
        for _ in range(60):
            trial = x + lam * direction
            e_trial = _fast_energy(trial, s, iu, ju)
            if e_trial <= e_ref + ARMIJO_C * lam * slope:
                d_trial = _min_pair_distance(trial, iu, ju)
                # the floor only blocks steps that push pairs tighter
                if d_trial >= floor or d_trial >= dmin:
                    accepted = True
                    break
            lam *= SHRINK
        if not accepted:
            break
        prev_x, prev_g = x, g
        x, energy = trial, e_trial
        history.append(energy)
        if energy < best_energy - 1e-14 * (1.0 + abs(best_energy)):
            best_x, best_energy, stall = x, energy, 0
        else:
            stall += 1
            if stall >= 600:
                break
    g = riesz_gradient(best_x, s) if n >= 2 else np.zeros_like(best_x)
    pg_norm = float(np.linalg.norm(best_x - dom.project(best_x - g)))
    return best_x, iters, pg_norm


def _canonical_key(pts: np.ndarray):
    """Sort rows lexicographically and flatten, for deterministic ties."""
    if pts.size == 0:
        return ()
    order = np.lexsort(pts.T[::-1])
    return tuple(pts[order].ravel().tolist())


def _thread_count() -> int:
    raw = os.environ.get("RIESZ_STAB_THREADS", "1")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


def minimize_configuration(
    n: int,
    dom: Domain,
    s: float,
    starts: int | None = None,
    max_iters: int = 50_000,
    grad_tol: float | None = None,
    seed: int = 1,
) -> MinimizationResult:
    """Best-found minimal s-energy configuration of n points in `dom`.

    Runs `starts` independent seeded descents (default 8 + 2n) and keeps
    the lowest energy; ties below 1e-12 go to the lexicographically
    smallest sorted configuration.  For s = 0 the energy does not depend
    on positions, so a seeded random configuration is returned with the
    exact pair count.
    """
    if n < 0:
        raise ValueError(f"n must be >= 0, got {n}")
    if s < 0:
        raise ValueError(f"Riesz exponent must be >= 0, got s={s}")
    if starts is None:
        starts = 8 + 2 * n
    if starts < 1 or max_iters < 1:
        raise ValueError("starts and max_iters must be >= 1")
    if grad_tol is None:
        grad_tol = 1e-9 * max(n, 1)
    if grad_tol <= 0:
        raise ValueError(f"grad_tol must be positive, got {grad_tol}")

    if n == 0:
        return MinimizationResult(
            np.zeros((0, dom.dimension)), 0.0, 0.0, 0, 0.0, 0, -1
        )
    if n == 1:
        pt = dom.project(dom.sample(1, np.random.default_rng([seed, 0])))
        return MinimizationResult(pt, 0.0, 0.0, 0, 0.0, 1, 0)
    if s == 0:
        pts = _distinct_sample(dom, n, np.random.default_rng([seed, 0]))
        energy = n * (n - 1) / 2.0
        return MinimizationResult(
            pts, energy, energy / (n * n), 0, 0.0, 1, 0,
            note="best found; s=0 energy is position-independent",
        )

    def one_start(k: int):
        rng = np.random.default_rng([seed, k])
        x0 = _distinct_sample(dom, n, rng)
        pts, iters, pg = _descend(x0, dom, s, max_iters, grad_tol)
        return riesz_energy(pts, s), pts, iters, pg, k

    workers = min(_thread_count(), starts)
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            runs = list(pool.map(one_start, range(starts)))
    else:
        runs = [one_start(k) for k in range(starts)]

    best = None
    for energy, pts, iters, pg, k in runs:
        if best is None or energy < best[0] - 1e-12:
            best = (energy, pts, iters, pg, k)
        elif abs(energy - best[0]) <= 1e-12:
            if _canonical_key(pts) < _canonical_key(best[1]):
                best = (energy, pts, iters, pg, k)
    energy, pts, iters, pg, k = best
    return MinimizationResult(
        pts, energy, energy / (n * n), iters, pg, starts, k
    )


def _distinct_sample(dom: Domain, n: int, rng: np.random.Generator) -> np.ndarray:
    """Uniform sample with near-coincident points resampled."""
    pts = dom.sample(n, rng)
    gap = 1e-12 * dom.diameter
    for _ in range(100):
        iu, ju = np.triu_indices(n, k=1)
        d2 = np.einsum("ij,ij->i", pts[iu] - pts[ju], pts[iu] - pts[ju])
        bad = np.unique(ju[d2 < gap * gap])
        if bad.size == 0:
            break
        pts[bad] = dom.sample(bad.size, rng)
    return pts


def brute_force_min(
    n: int, dom: Domain, s: float, grid_per_axis: int = 8
) -> MinimizationResult:
    """Independent oracle: exhaustive point-subset search plus one polish.

    Enumerates all n-subsets of a tensor grid over the domain, evaluates
    each exactly, then polishes the best subset with a single projected
    gradient descent.  Sizes are capped (n <= 4, n*d <= 8) because the
    subset count explodes combinatorially.
    """
    if n > 4:
        raise ValueError(f"brute force is limited to n <= 4, got {n}")
    if grid_per_axis < 8:
        raise ValueError(f"grid_per_axis must be >= 8, got {grid_per_axis}")
    if n * dom.dimension > 8:
        raise ValueError(
            f"grid dimensions n*d = {n * dom.dimension} exceed the cap of 8"
        )
    if n == 0:
        return MinimizationResult(
            np.zeros((0, dom.dimension)), 0.0, 0.0, 0, 0.0, 0, -1
        )

    h = dom.size / 2.0 if dom.kind == "cube" else dom.size
    axes = [np.linspace(-h, h, grid_per_axis)] * dom.dimension
    sites = np.stack(np.meshgrid(*axes, indexing="ij"), axis=-1).reshape(
        -1, dom.dimension
    )
    if dom.kind == "ball":
        keep = np.einsum("ij,ij->i", sites, sites) <= dom.size**2 + 1e-15
        sites = sites[keep]
    if n == 1:
        pts = sites[:1]
        return MinimizationResult(pts, 0.0, 0.0, 0, 0.0, 1, 0)

    best_energy, best_pts = math.inf, None
    pair_list = list(itertools.combinations(range(n), 2))
    chunk = 200_000
    combos = itertools.combinations(range(sites.shape[0]), n)
    while True:
        block = np.fromiter(
            itertools.chain.from_iterable(itertools.islice(combos, chunk)),
            dtype=np.int64,
        ).reshape(-1, n)
        if block.size == 0:
            break
        coords = sites[block]  # (k, n, d)
        energy = np.zeros(block.shape[0])
        degenerate = np.zeros(block.shape[0], dtype=bool)
        for a, b in pair_list:
            diff = coords[:, a, :] - coords[:, b, :]
            d2 = np.einsum("ij,ij->i", diff, diff)
            degenerate |= d2 == 0.0
            with np.errstate(divide="ignore"):
                energy += np.where(degenerate, np.inf, d2 ** (-s / 2.0))
        energy[degenerate] = np.inf
        k = int(np.argmin(energy))
        if energy[k] < best_energy:
            best_energy = float(energy[k])
            best_pts = coords[k].copy()
        if block.shape[0] < chunk:
            break

    pts, iters, pg = _descend(best_pts, dom, s, 20_000, 1e-10 * n)
    energy = riesz_energy(pts, s)
    if energy > best_energy:  # polish must never lose to its own start
        pts, energy = best_pts, riesz_energy(best_pts, s)
    return MinimizationResult(pts, energy, energy / (n * n), iters, pg, 1, 0)


@dataclass(frozen=True)
class ESequenceReport:
    """Normalized energies over a ladder of N, with monotonicity audit.

    The true normalized minimal energies increase with N, so any measured
    decrease beyond the tolerance means some run missed its minimum; the
    offending steps are listed in `violations`.
    """

    entries: tuple  # of (n, normalized energy)
    violations: tuple  # of (n_prev, n_next, drop)
    tolerance: float = 1e-6

    @property
    def monotone(self) -> bool:
        return not self.violations


def e_sequence(dom: Domain, s: float, n_list, tolerance: float = 1e-6, **opts):
    """Minimize for each N in n_list and report the normalized energies."""
    entries = []
    for n in n_list:
        if n < 2:
            raise ValueError(f"e-sequence needs N >= 2, got {n}")
        res = minimize_configuration(n, dom, s, **opts)
        entries.append((int(n), res.normalized))
    violations = []
    for (n0, e0), (n1, e1) in zip(entries, entries[1:]):
        if e1 < e0 - tolerance:
            violations.append((n0, n1, e0 - e1))
    return ESequenceReport(tuple(entries), tuple(violations), tolerance)


def spatial_histogram(points, dom: Domain, bins: int = 4) -> np.ndarray:
    """Empirical fractions of points per spatial bin.

    Balls are split into `bins` shells of equal volume (outer radius
    size * (k/bins)^(1/d)); cubes into bins^d congruent sub-cells, returned
    flattened in C order.  Fractions sum to 1 for nonempty input.
    """
    if bins < 2:
        raise ValueError(f"bins must be >= 2, got {bins}")
    pts = np.asarray(points, dtype=float)
    if pts.ndim == 1:
        pts = pts[:, None]
    n = pts.shape[0]
    if n == 0:
        width = bins if dom.kind == "ball" else bins**dom.dimension
        return np.zeros(width)
    if dom.kind == "ball":
        radii = np.sqrt(np.einsum("ij,ij->i", pts, pts))
        edges = dom.size * (np.arange(1, bins + 1) / bins) ** (1.0 / dom.dimension)
        shell = np.searchsorted(edges, radii, side="left")
        shell = np.clip(shell, 0, bins - 1)
        counts = np.bincount(shell, minlength=bins)
        return counts / n
    h = dom.size / 2.0
    scaled = (pts + h) / dom.size  # [0, 1] per axis
    cell = np.clip((scaled * bins).astype(int), 0, bins - 1)
    flat = np.ravel_multi_index(cell.T, (bins,) * dom.dimension)
    counts = np.bincount(flat, minlength=bins**dom.dimension)
    return counts / n
