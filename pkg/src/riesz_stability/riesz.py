"""Riesz energies and the closed-form constants of their continuum limits.

Discrete side: the Riesz s-energy of a finite point set, with the s = 0
degeneration to plain pair counting.  Continuum side: minimal energy values
of balls, the minimizing measure, and the growth constants that control the
minimal N-point energy in a cube for s < d, s = d and s > d.

All closed forms are implemented exactly as displayed in their source
derivation.  One of them disagrees with classical potential-theory
references; see the note on ``energy_integral_ball``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

__all__ = [
    "RegimeTag",
    "regime_tag",
    "riesz_energy",
    "normalized_energy",
    "energy_integral_ball",
    "cube_energy_integral_lower_bound",
    "minimizing_density_ball",
    "SurfaceUniformMeasure",
    "InteriorDensity",
    "critical_growth_constant",
    "hypersingular_growth_constant",
    "hypersingular_lower_bound",
    "zeta_limit_1d",
    "riemann_zeta",
    "unit_ball_volume",
    "sphere_surface_area",
]


class RegimeTag(str, Enum):
    """Which continuum regime a pair (d, s) falls in.

    FLAT takes precedence at s = 0; the others partition s > 0 by the
    position of s relative to d - 2 and d.
    """

    FLAT = "Flat"
    BOUNDARY = "Boundary"
    INTERIOR = "Interior"
    CRITICAL = "Critical"
    HYPERSINGULAR = "Hypersingular"


def regime_tag(d: int, s: float) -> RegimeTag:
    """Classify (d, s) into exactly one regime."""
    _check_dimension(d)
    if s < 0:
        raise ValueError(f"Riesz exponent must be >= 0, got s={s}")
    if s == 0:
        return RegimeTag.FLAT
    if s <= d - 2:
        return RegimeTag.BOUNDARY
    if s < d:
        return RegimeTag.INTERIOR
    if s == d:
        return RegimeTag.CRITICAL
    return RegimeTag.HYPERSINGULAR


def _check_dimension(d: int) -> None:
    if not isinstance(d, (int, np.integer)) or d < 1:
        raise ValueError(f"dimension must be an integer >= 1, got {d!r}")


def riesz_energy(points: np.ndarray, s: float) -> float:
    """Riesz s-energy: sum of |x_i - x_j|^-s over unordered pairs i < j.

    For s = 0 every pair contributes 1, so the energy is N(N-1)/2 no matter
    where the points sit.  Coincident points make the energy infinite for
    s > 0 and are rejected with the offending pair named.
    """
    pts = np.asarray(points, dtype=float)
    if pts.ndim == 1:
        pts = pts[:, None]
    n = pts.shape[0]
    if s < 0:
        raise ValueError(f"Riesz exponent must be >= 0, got s={s}")
    if n < 2:
        return 0.0
    if s == 0:
        return n * (n - 1) / 2.0
    iu, ju = np.triu_indices(n, k=1)
    dist2 = np.sum((pts[iu] - pts[ju]) ** 2, axis=1)
    zero = np.nonzero(dist2 == 0.0)[0]
    if zero.size:
        k = int(zero[0])
        raise ValueError(
            f"coincident points {int(iu[k])} and {int(ju[k])}: "
            "Riesz energy is infinite"
        )
    # Powers of the squared distance skip the sqrt rounding (integer-lattice
    # distances stay exact); fsum gives an exactly rounded, order-free sum.
    return math.fsum(dist2 ** (-s / 2.0))


def normalized_energy(energy: float, n: int) -> float:
    """Energy per ordered pair, E / N^2.  Requires N >= 2.

    The normalized values of minimal configurations increase monotonically
    in N and converge, for s < d, to the minimal continuum energy of the
    domain, which is what makes them usable as certified lower-bound
    surrogates.
    """
    if n < 2:
        raise ValueError(f"normalized energy needs N >= 2, got N={n}")
    return energy / (n * n)


def unit_ball_volume(d: int) -> float:
    """Volume of the unit ball in R^d.

    Computed by the two-step recurrence V_d = 2*pi/d * V_{d-2} so that small
    integer dimensions come out exact (V_1 = 2, V_2 = pi, V_3 = 4*pi/3).
    """
    _check_dimension(d)
    if d % 2 == 0:
        v = 1.0  # V_0
        k = 0
    else:
        v = 2.0  # V_1
        k = 1
    while k < d:
        k += 2
        v *= 2.0 * math.pi / k
    return v


def sphere_surface_area(d: int, r: float = 1.0) -> float:
    """Surface measure of the sphere of radius r bounding a ball in R^d.

    Equals 2 pi^{d/2} r^{d-1} / Gamma(d/2); evaluated as d * V_d * r^{d-1}
    to share the exact small-d values of ``unit_ball_volume``.
    """
    if r <= 0:
        raise ValueError(f"radius must be positive, got {r}")
    return d * unit_ball_volume(d) * r ** (d - 1)


def energy_integral_ball(d: int, s: float, r: float) -> float:
    """Minimal continuum Riesz s-energy of the ball of radius r, 0 <= s < d.

    Three closed forms:

    * s = 0: the kernel is identically 1 and every probability measure has
      energy 1/2, independent of r.
    * 0 < s <= d - 2: the minimizing measure is uniform on the bounding
      sphere and the energy is
      r^-s * 2^(d-s-3) * G((d-s-1)/2) * G(d/2) / (sqrt(pi) * G(d-1-s/2)).
    * d - 2 < s < d: the minimizing measure charges the interior and the
      energy is  r^-s * G(1+s/2) * G((d-s)/2) / (2 * G(1+d/2)).

    Known discrepancy, kept deliberately: the interior-regime denominator is
    implemented as displayed, 2*Gamma(1+d/2).  Classical references, and a
    direct numerical double integral of ``minimizing_density_ball`` against
    the kernel, give 2*Gamma(d/2) instead, i.e. a value d/2 times larger.
    The displayed form is the library's contract value and the two regimes
    therefore do not join continuously at s = d - 2 (except at s = 0 where
    both give 1/2).
    """
    _check_dimension(d)
    if r <= 0:
        raise ValueError(f"radius must be positive, got {r}")
    if s >= d:
        raise ValueError(f"energy integral infinite for s >= d (s={s}, d={d})")
    if s < 0:
        raise ValueError(f"Riesz exponent must be >= 0, got s={s}")
    if s == 0:
        return 0.5
    g = math.gamma
    if s <= d - 2:
        num = 2.0 ** (d - s - 3) * g((d - s - 1) / 2.0) * g(d / 2.0)
        den = math.sqrt(math.pi) * g(d - 1 - s / 2.0)
    else:
        num = g(1 + s / 2.0) * g((d - s) / 2.0)
        den = 2.0 * g(1 + d / 2.0)
    # one rounding for the unit value, one for the prefactor, so the
    # homogeneity identity I(r) = r^-s * I(1) holds bit-exactly
    return r**-s * (num / den)


def cube_energy_integral_lower_bound(d: int, s: float, rib: float) -> float:
    """Lower bound for the minimal continuum energy of a cube of rib `rib`.

    The cube sits inside the ball of radius sqrt(d)*rib/2 circumscribing it,
    and enlarging the set can only lower the minimal energy, so the ball
    value bounds the cube value from below.
    """
    if rib <= 0:
        raise ValueError(f"rib must be positive, got {rib}")
    return energy_integral_ball(d, s, math.sqrt(d) * rib / 2.0)


@dataclass(frozen=True)
class SurfaceUniformMeasure:
    """Minimizing measure for s <= d - 2: uniform on the bounding sphere."""

    dimension: int
    radius: float
    surface_measure: float

    kind = "surface-uniform"


@dataclass(frozen=True)
class InteriorDensity:
    """Minimizing density for d - 2 < s < d, supported on the whole ball.

    density(x) = amplitude / (radius^2 - |x|^2)^exponent, blowing up at the
    boundary but integrating to 1 over the ball.
    """

    dimension: int
    radius: float
    amplitude: float
    exponent: float

    kind = "interior-density"

    def density(self, x) -> float:
        """Density value at a point x (scalar radius also accepted)."""
        x = np.asarray(x, dtype=float)
        rho2 = float(np.sum(x * x)) if x.ndim else float(x) ** 2
        gap = self.radius**2 - rho2
        if gap < 0:
            raise ValueError("point lies outside the ball")
        if gap == 0.0:
            return math.inf
        return self.amplitude / gap**self.exponent


def minimizing_density_ball(d: int, s: float, r: float, x=None):
    """Describe the energy-minimizing measure of the ball of radius r.

    Returns a ``SurfaceUniformMeasure`` for s <= d - 2 and an
    ``InteriorDensity`` for d - 2 < s < d.  The interior amplitude is
    Gamma(1+s/2) / (pi^{d/2} Gamma(1-(d-s)/2)), scaled to radius r so that
    the density integrates to 1.

    When a point x is supplied it must lie in the closed ball; in the
    interior regime the density value at x is returned instead of the
    descriptor (the surface regime has no density against volume, so the
    descriptor is returned either way).
    """
    _check_dimension(d)
    if r <= 0:
        raise ValueError(f"radius must be positive, got {r}")
    if s >= d:
        raise ValueError(f"energy integral infinite for s >= d (s={s}, d={d})")
    if s < 0:
        raise ValueError(f"Riesz exponent must be >= 0, got s={s}")
    if x is not None:
        xa = np.asarray(x, dtype=float)
        if math.sqrt(float(np.sum(xa * xa))) > r:
            raise ValueError("point lies outside the ball")
    if s <= d - 2:
        return SurfaceUniformMeasure(d, r, sphere_surface_area(d, r))
    exponent = (d - s) / 2.0
    amplitude = math.gamma(1 + s / 2.0) / (
        math.pi ** (d / 2.0) * math.gamma(1 - exponent)
    )
    # Unit-radius amplitude rescaled: density must integrate to 1 on the
    # radius-r ball, which multiplies the amplitude by r^{2*exponent - d}
    # = r^{-s}.
    measure = InteriorDensity(d, r, amplitude * r**-s, exponent)
    if x is not None:
        return measure.density(x)
    return measure


def critical_growth_constant(d: int, rib: float = 1.0, core_strength: float = 1.0) -> float:
    """Coefficient of N^2 log N in the minimal cube energy at s = d.

    Equals core_strength / rib^d * pi^{d/2} / (d * Gamma(d/2)), i.e. half
    the unit ball volume scaled by core_strength / rib^d.  Pure geometry is
    recovered with core_strength = rib = 1.
    """
    _check_dimension(d)
    if rib <= 0 or core_strength <= 0:
        raise ValueError("rib and core_strength must be positive")
    return core_strength / rib**d * unit_ball_volume(d) / 2.0


def hypersingular_growth_constant(
    d: int, s: float, rib: float = 1.0, core_strength: float = 1.0
) -> float:
    """Coefficient of the N^{1+s/d} lower bound for cube energies, s > d.

    Equals core_strength / rib^s * 2^-(2s+1) * V_d^{s/d} with V_d the unit
    ball volume.  This is a provable lower-bound constant, not the sharp
    limit coefficient (no closed form of the sharp one is known for d >= 2).
    """
    _check_dimension(d)
    if s <= d:
        raise ValueError(f"need s > d, got s={s}, d={d}")
    if rib <= 0 or core_strength <= 0:
        raise ValueError("rib and core_strength must be positive")
    return (
        core_strength
        / rib**s
        * 0.5 ** (2 * s + 1)
        * unit_ball_volume(d) ** (s / d)
    )


def hypersingular_lower_bound(
    d: int, s: float, n: int, rib: float = 1.0, core_strength: float = 1.0
) -> float:
    """Lower bound on the N-point energy of any configuration in a cube.

    Valid for s > d and N >= 2: every N-point set in the cube of the given
    rib has Riesz s-energy (with kernel coefficient core_strength) at least
    hypersingular_growth_constant * N^(1+s/d).
    """
    if n < 2:
        raise ValueError(f"the bound requires N >= 2, got N={n}")
    return hypersingular_growth_constant(d, s, rib, core_strength) * float(n) ** (
        1 + s / d
    )


def riemann_zeta(s: float, terms: int = 32) -> float:
    """Riemann zeta for s > 1 by direct series plus Euler-Maclaurin tail.

    The first `terms` summands are added directly; the tail is corrected by
    the trapezoidal term and Bernoulli-number corrections through B_12,
    which is far beyond 12 significant digits for s > 1 and terms >= 16.
    """
    if s <= 1:
        raise ValueError(f"zeta series diverges for s <= 1, got s={s}")
    m = float(terms)
    head = math.fsum(k**-s for k in range(1, terms))
    tail = m ** (1 - s) / (s - 1) + 0.5 * m**-s
    # Euler-Maclaurin corrections: B_2k/(2k)! * (s)_{2k-1} * m^{-s-2k+1}
    bern = (1 / 6, -1 / 30, 1 / 42, -1 / 30, 5 / 66, -691 / 2730)
    rising = s
    power = m ** (-s - 1)
    corr = 0.0
    for i, b2k in enumerate(bern):
        k2 = 2 * (i + 1)
        corr += b2k / math.factorial(k2) * rising * power
        rising *= (s + k2 - 1) * (s + k2)
        power /= m * m
    return head + tail + corr


def zeta_limit_1d(s: float) -> float:
    """Limit of E / N^{1+s} for minimal configurations on the unit interval.

    For d = 1 and s > 1 the minimal Riesz energy grows like zeta(s) * N^{1+s}
    (unit rib, unit core strength), so the limit value is just zeta(s).
    """
    if s <= 1:
        raise ValueError(f"the 1-d limit constant needs s > 1, got s={s}")
    return riemann_zeta(s)
