"""Radial pair potentials with repulsive-core / integrable-tail metadata.

A potential here is a radial function Phi(r) together with the structural
constants the certification theorems consume: a repulsive core bound
Phi(r) >= core_strength / r^core_exponent inside core_radius, and an
integrable attraction bound Phi(r) >= -tail_strength / r^(d+tail_exponent)
beyond tail_radius.  Between the two radii only finiteness is assumed.

The bounds are user claims about an arbitrary function, so they can be
checked by sampling but not proved; the validation report says which.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional, Tuple

import numpy as np
import scipy.integrate

from .riesz import sphere_surface_area

__all__ = [
    "PairPotential",
    "ValidationReport",
    "NecessaryConditionsReport",
    "QuadratureError",
    "split_pos_neg",
    "validate_assumption_a",
    "necessary_conditions",
    "riesz_potential",
    "square_well_potential",
    "lj_like_potential",
    "table_potential",
]


@dataclass(frozen=True)
class PairPotential:
    """A radial 2-body interaction with core/tail metadata.

    evaluate maps r > 0 to Phi(r) and must accept numpy arrays elementwise
    (wrap scalar-only callables with numpy.vectorize).  Values are energies;
    all lengths share the unit of the partition rib.  Instances are
    immutable and the evaluate callable must be side-effect free.
    """

    evaluate: Callable[[np.ndarray], np.ndarray]
    dimension: int
    core_exponent: float  # s: Phi(r) >= core_strength / r^s for r <= core_radius
    core_strength: float
    core_radius: float
    tail_radius: float  # Phi(r) >= -tail_strength / r^(d+tail_exponent) beyond
    tail_strength: float
    tail_exponent: float
    label: str = "custom"

    def __post_init__(self):
        if self.dimension < 1:
            raise ValueError(f"dimension must be >= 1, got {self.dimension}")
        if self.core_exponent < 0:
            raise ValueError(f"core exponent must be >= 0, got {self.core_exponent}")
        for name in ("core_strength", "core_radius", "tail_exponent"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be positive, got {getattr(self, name)}")
        # zero is a valid tail strength: it asserts there is no negative
        # part at all beyond tail_radius
        if self.tail_strength < 0:
            raise ValueError(
                f"tail_strength must be >= 0, got {self.tail_strength}"
            )
        if self.tail_radius <= self.core_radius:
            raise ValueError(
                f"tail_radius must exceed core_radius, got "
                f"{self.tail_radius} <= {self.core_radius}"
            )

    def __call__(self, r):
        return self.evaluate(r)


def _eval_checked(p: PairPotential, r):
    """Evaluate Phi at r (scalar or array), rejecting non-finite values."""
    r = np.asarray(r, dtype=float)
    vals = np.asarray(p.evaluate(r), dtype=float)
    bad = ~np.isfinite(vals)
    if np.any(bad):
        where = np.atleast_1d(r)[np.atleast_1d(bad)][0]
        raise ValueError(f"potential evaluated to a non-finite value at r={where}")
    return vals


def split_pos_neg(p: PairPotential, r: float) -> Tuple[float, float]:
    """Split Phi(r) into (max(0, Phi), min(0, Phi)); the parts sum to Phi."""
    if r <= 0:
        raise ValueError(f"radius must be positive, got {r}")
    v = float(_eval_checked(p, r))
    return max(0.0, v), min(0.0, v)


@dataclass(frozen=True)
class ValidationReport:
    """Outcome of the sampled structural check.

    This is a sampling check on a finite grid, not a proof; `passed` means
    no violation was found among `samples` radii.
    """

    passed: bool
    samples: int
    first_violation: Optional[Tuple[str, float, float, float]] = None
    # (region, radius, Phi(radius), violated bound)
    note: str = "sampled check, not a proof"

    def __bool__(self):
        return self.passed


def validate_assumption_a(p: PairPotential, sample_count: int = 4096) -> ValidationReport:
    """Check the core and tail bounds on a deterministic log-spaced grid.

    Core region (r <= core_radius): Phi(r) >= core_strength / r^s and
    Phi(r) >= 0.  Tail region (tail_radius <= r <= 100*tail_radius):
    Phi(r) >= -tail_strength / r^(d + tail_exponent).  The gap between the
    radii is only required to be finite, which _eval_checked enforces.
    """
    if sample_count < 2:
        raise ValueError(f"sample_count must be >= 2, got {sample_count}")
    n_core = max(2, sample_count // 2)
    n_tail = max(2, sample_count - n_core)

    core_grid = np.geomspace(p.core_radius * 1e-4, p.core_radius, n_core)
    core_vals = _eval_checked(p, core_grid)
    core_bound = p.core_strength / core_grid**p.core_exponent
    bad = np.nonzero((core_vals < core_bound) | (core_vals < 0.0))[0]
    if bad.size:
        k = int(bad[0])
        return ValidationReport(
            False,
            sample_count,
            ("core", float(core_grid[k]), float(core_vals[k]), float(core_bound[k])),
        )

    tail_grid = np.geomspace(p.tail_radius, 100.0 * p.tail_radius, n_tail)
    tail_vals = _eval_checked(p, tail_grid)
    tail_bound = -p.tail_strength / tail_grid ** (p.dimension + p.tail_exponent)
    bad = np.nonzero(tail_vals < tail_bound)[0]
    if bad.size:
        k = int(bad[0])
        return ValidationReport(
            False,
            sample_count,
            ("tail", float(tail_grid[k]), float(tail_vals[k]), float(tail_bound[k])),
        )

    # the middle region carries no bound, but evaluation must stay finite
    mid = np.geomspace(p.core_radius, p.tail_radius, max(2, sample_count // 8))
    _eval_checked(p, mid)
    return ValidationReport(True, sample_count)


class QuadratureError(RuntimeError):
    """Raised when the space integral fails to converge; carries partials."""

    def __init__(self, message, partial_value, partial_error):
        super().__init__(f"{message} (partial integral {partial_value}, "
                         f"error estimate {partial_error})")
        self.partial_value = partial_value
        self.partial_error = partial_error


@dataclass(frozen=True)
class NecessaryConditionsReport:
    """Sampled lower bound of Phi and the sign of its space integral.

    A stable potential must be bounded below and have nonnegative space
    integral; a certified negative integral therefore proves instability.
    `integral` is surface(S^{d-1}) * int Phi(r) r^(d-1) dr, +inf when the
    claimed core makes it divergent (core_exponent >= d).
    """

    lower_bound_estimate: float
    lower_bound_radius: float
    bounded_below: bool
    integral: float
    integral_error: float
    integral_nonneg: bool
    core_divergent: bool
    note: str = "grid/quadrature estimates, not proofs"


def necessary_conditions(
    p: PairPotential, quadrature_points: int = 200
) -> NecessaryConditionsReport:
    """Estimate inf Phi and the space integral, flagging Dobrushin failure.

    The integral splits at the core and tail radii.  When the metadata
    claims a core with exponent >= d the r^(d-1)-weighted integral diverges
    to +inf and the nonnegativity flag is trivially true.  A negative
    integral beyond the quadrature error estimate means the potential
    cannot be stable.
    """
    if quadrature_points < 16:
        raise ValueError(f"quadrature_points must be >= 16, got {quadrature_points}")

    grid = np.geomspace(p.core_radius * 1e-6, 100.0 * p.tail_radius, 4096)
    vals = _eval_checked(p, grid)
    k = int(np.argmin(vals))
    inf_est, inf_rad = float(vals[k]), float(grid[k])
    # heuristic divergence screen: the infimum sits at the grid edge and is
    # still falling there
    diverging = k == 0 and vals[0] < min(-1e8, float(vals[1]))
    bounded = bool(np.isfinite(inf_est)) and not diverging

    d = p.dimension
    surface = sphere_surface_area(d, 1.0)
    core_divergent = p.core_exponent >= d
    if core_divergent:
        return NecessaryConditionsReport(
            inf_est, inf_rad, bounded, math.inf, 0.0, True, True
        )

    def weighted(r):
        return float(_eval_checked(p, r)) * r ** (d - 1)

    def pos_weighted(r):
        return max(0.0, float(_eval_checked(p, r))) * r ** (d - 1)

    def neg_weighted(r):
        return min(0.0, float(_eval_checked(p, r))) * r ** (d - 1)

    total, err_total = 0.0, 0.0
    for a, b in [(0.0, p.core_radius), (p.core_radius, p.tail_radius)]:
        val, err = scipy.integrate.quad(weighted, a, b, limit=quadrature_points)
        if not math.isfinite(val) or err > max(1e-6, 1e-3 * abs(val)):
            raise QuadratureError(
                f"space integral did not converge on ({a}, {b})", total + val, err
            )
        total += val
        err_total += err

    # Infinite piece.  The negative part is integrable whenever the tail
    # claim holds, but the positive part may diverge, and quad reports
    # divergence over an infinite range unreliably.  Integrate the positive
    # part over growing finite windows: stalling partial sums mean a
    # convergent integral, growing ones mean +inf.
    R = p.tail_radius
    windows = [(R, 1e3 * R), (1e3 * R, 1e6 * R), (1e6 * R, 1e9 * R)]
    pos_parts = []
    for a, b in windows:
        val, _ = scipy.integrate.quad(pos_weighted, a, b, limit=quadrature_points)
        pos_parts.append(val)
    scale = max(pos_parts[0], 1e-12)
    if pos_parts[1] > 0.5 * scale or pos_parts[2] > 0.5 * max(pos_parts[1], 1e-12):
        integral, err_total, nonneg = math.inf, 0.0, True
        return NecessaryConditionsReport(
            inf_est, inf_rad, bounded, integral, err_total, nonneg, False,
            note="positive part of the tail integral diverges",
        )
    far, far_err = scipy.integrate.quad(
        pos_weighted, 1e9 * R, np.inf, limit=quadrature_points
    )
    neg_val, neg_err = scipy.integrate.quad(
        neg_weighted, R, np.inf, limit=quadrature_points
    )
    if not math.isfinite(neg_val):
        raise QuadratureError(
            "attractive tail integral did not converge", total, neg_err
        )
    total += sum(pos_parts) + far + neg_val
    err_total += neg_err + far_err

    integral = surface * total
    err_total *= surface
    nonneg = integral >= -err_total
    return NecessaryConditionsReport(
        inf_est, inf_rad, bounded, integral, err_total, nonneg, False
    )


def riesz_potential(
    d: int,
    s: float,
    core_strength: float = 1.0,
    tail_strength: float = 1.0,
    tail_exponent: float = 1.0,
    core_radius: float = 1.0,
    tail_radius: float = 2.0,
) -> PairPotential:
    """Pure power core with an attached integrable power tail.

    Phi(r) = core_strength / r^s - tail_strength * 1[r > tail_radius] /
    r^(d + tail_exponent).  The core bound holds with equality below the
    tail radius, where the potential is exactly its own bound.
    """

    def phi(r, _s=s, _c=core_strength, _t=tail_strength,
            _R=tail_radius, _q=d + tail_exponent):
        r = np.asarray(r, dtype=float)
        return _c / r**_s - np.where(r > _R, _t / r**_q, 0.0)

    return PairPotential(
        phi, d, s, core_strength, core_radius, tail_radius,
        tail_strength, tail_exponent, label="riesz",
    )


def square_well_potential(
    d: int, height: float = 1.0, well_range: float = 1.0
) -> PairPotential:
    """Phi(r) = height * 1[r <= well_range]: a flat repulsive plateau.

    The core exponent is 0, so the core bound is the constant `height`
    itself; there is no negative part anywhere.
    """
    if height <= 0 or well_range <= 0:
        raise ValueError("height and well_range must be positive")

    def phi(r, _h=height, _w=well_range):
        r = np.asarray(r, dtype=float)
        return np.where(r <= _w, _h, 0.0)

    return PairPotential(
        phi, d, 0.0, height, well_range, 2.0 * well_range,
        tail_strength=0.0, tail_exponent=1.0, label="square_well",
    )


def lj_like_potential(d: int, s: float, core_radius: float = 0.8) -> PairPotential:
    """Phi(r) = r^(-2s) - r^(-s): a Lennard-Jones-shaped core and well.

    Needs s > d so the attractive well decays integrably; then the tail
    bound holds with tail_strength 1 and tail_exponent s - d for every
    r >= 1, and the core bound holds below core_radius < 1 with
    core_strength 1 - core_radius^s (since Phi = r^(-2s)(1 - r^s)).
    """
    if s <= d:
        raise ValueError(
            f"the attractive well of r^-2s - r^-s is integrable only for "
            f"s > d, got s={s}, d={d}"
        )
    if not 0 < core_radius < 1:
        raise ValueError(f"core_radius must be in (0, 1), got {core_radius}")

    def phi(r, _s=s):
        r = np.asarray(r, dtype=float)
        with np.errstate(divide="ignore", invalid="ignore"):
            out = r ** (-2 * _s) - r**-_s
        # the difference form is inf - inf at the origin; the limit is +inf
        return np.where(r == 0.0, np.inf, out)

    # the core bound holds with exact-arithmetic equality at core_radius;
    # shave the claimed constant so rounding ties cannot flip the sampled
    # comparison
    strength = (1.0 - core_radius**s) * (1.0 - 1e-12)
    return PairPotential(
        phi, d, 2 * s, strength, core_radius, 1.0,
        tail_strength=1.0, tail_exponent=s - d, label="lj_like",
    )


def table_potential(
    radii,
    values,
    dimension: int,
    core_exponent: float,
    core_strength: float,
    core_radius: float,
    tail_radius: float,
    tail_strength: float,
    tail_exponent: float,
) -> PairPotential:
    """Linear interpolation through sampled (r, Phi(r)) pairs.

    Below the first radius the claimed core bound core_strength / r^s is
    used (the table cannot resolve the singularity); above the last radius
    the potential is zero.  Radii must be positive and strictly increasing.
    """
    r = np.asarray(radii, dtype=float)
    v = np.asarray(values, dtype=float)
    if r.ndim != 1 or r.shape != v.shape or r.size < 2:
        raise ValueError("need two equal-length 1-d arrays with >= 2 samples")
    if r[0] <= 0 or np.any(np.diff(r) <= 0):
        raise ValueError("radii must be positive and strictly increasing")
    if not np.all(np.isfinite(v)):
        raise ValueError("table values must be finite")

    def phi(x, _r=r, _v=v, _s=core_exponent, _c=core_strength):
        x = np.asarray(x, dtype=float)
        inner = _c / x**_s if _s > 0 else np.full_like(x, _c)
        return np.where(
            x < _r[0], inner, np.interp(x, _r, _v, left=_v[0], right=0.0)
        )

    return PairPotential(
        phi, dimension, core_exponent, core_strength, core_radius,
        tail_radius, tail_strength, tail_exponent, label="table",
    )
