"""Riesz energy minimization and stability certification of pair potentials.

The package has three layers:

* ``riesz`` and ``geometry``: closed-form potential-theory constants, point
  configurations, the cubic partition of space, and energy decompositions.
* ``minimizer``: multistart projected gradient descent for minimal Riesz
  s-energy configurations in cubes and balls, with a brute-force oracle.
* ``potentials`` and ``certifier``: radial pair potentials with structural
  metadata, and certification of stability / superstability / strong
  superstability with explicit constants plus an empirical falsification
  harness.

``cli`` wires everything to the ``riesz-stab`` command.
"""

from .certifier import (
    AttractionBudget,
    FalsificationReport,
    StabilityCertificate,
    attraction_budget,
    certify,
    check_ss_condition,
    empirical_bound_test,
    linear_term_critical,
    linear_term_from_e_values,
    volume_form_constant,
)
from .minimizer import (
    Domain,
    MinimizationResult,
    ball_domain,
    brute_force_min,
    cube_domain,
    e_sequence,
    minimize_configuration,
    riesz_gradient,
)
from .potentials import (
    PairPotential,
    lj_like_potential,
    riesz_potential,
    square_well_potential,
    table_potential,
    validate_assumption_a,
)
from .riesz import (
    energy_integral_ball,
    normalized_energy,
    regime_tag,
    riesz_energy,
)

__version__ = "0.1.0"

__all__ = [
    "AttractionBudget",
    "Domain",
    "FalsificationReport",
    "MinimizationResult",
    "PairPotential",
    "StabilityCertificate",
    "attraction_budget",
    "ball_domain",
    "brute_force_min",
    "certify",
    "check_ss_condition",
    "cube_domain",
    "e_sequence",
    "empirical_bound_test",
    "energy_integral_ball",
    "linear_term_critical",
    "linear_term_from_e_values",
    "lj_like_potential",
    "minimize_configuration",
    "normalized_energy",
    "regime_tag",
    "riesz_energy",
    "riesz_gradient",
    "riesz_potential",
    "square_well_potential",
    "table_potential",
    "validate_assumption_a",
    "volume_form_constant",
]
