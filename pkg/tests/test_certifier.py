"""Tests for attraction budgets, certification routes, and the harness."""

import math

import numpy as np
import pytest
from scipy.special import zeta as hurwitz_zeta

from riesz_stability.certifier import (
    AttractionBudget,
    StabilityCertificate,
    attraction_budget,
    certify,
    check_ss_condition,
    default_rib_grid,
    empirical_bound_test,
    linear_term_critical,
    linear_term_from_e_values,
    volume_form_constant,
    _cell_sum,
)
from riesz_stability.potentials import (
    PairPotential,
    lj_like_potential,
    riesz_potential,
    square_well_potential,
)
from riesz_stability.riesz import (
    cube_energy_integral_lower_bound,
    hypersingular_growth_constant,
)


def attractive_plateau_1d() -> PairPotential:
    """Phi(r) = -1 for r < 1.5 and 0 beyond: the budget enumeration oracle."""

    def phi(r):
        r = np.asarray(r, dtype=float)
        return np.where(r < 1.5, -1.0, 0.0)

    return PairPotential(
        phi, 1, 0.0, 1.0, 1.0, tail_radius=2.0,
        tail_strength=1.0, tail_exponent=1.0, label="plateau",
    )


def exponential_attraction() -> PairPotential:
    def phi(r):
        return -np.exp(-np.asarray(r, dtype=float))

    return PairPotential(
        phi, 3, 0.0, 1.0, 1.0, tail_radius=2.0,
        tail_strength=1.0, tail_exponent=1.0, label="exp_attraction",
    )


class TestAttractionBudget:
    def test_nonnegative_potential_has_zero_budget(self):
        bud = attraction_budget(square_well_potential(2, 3.0, 1.0), rib=1.0)
        assert bud.value == 0.0
        assert bud.remainder == 0.0

    def test_unit_plateau_reaches_four_cells_from_the_edge(self):
        # at x on a cell edge the open interval (x-1.5, x+1.5) meets 4 cells
        bud = attraction_budget(attractive_plateau_1d(), rib=1.0)
        assert bud.value == 4.0

    def test_cell_center_sum_is_three(self):
        # the sup over x is strict: the cell-center sum misses one cell
        p = attractive_plateau_1d()
        rib = 1.0
        axis = np.arange(-3, 4)
        centers = (rib * axis).astype(float)[:, None]
        sub = np.linspace(-0.5, 0.5, 5)[:, None]
        assert _cell_sum(p, rib, np.zeros(1), centers, sub) == 3.0

    def test_remainder_closed_form_1d(self):
        # shells hold 2 cells each at distance >= rib*(m-1): the tail is
        # 2 * sum_{n>=M} n^-(1+eps) = 2 * hurwitz_zeta(2, 3) here
        bud = attraction_budget(attractive_plateau_1d(), rib=1.0)
        assert bud.truncation_cells == 3
        assert bud.remainder == pytest.approx(2.0 * hurwitz_zeta(2.0, 3.0), rel=1e-12)

    def test_truncation_monotonicity(self):
        p = riesz_potential(2, 1.0, tail_strength=1.0, tail_exponent=0.5,
                            core_radius=1.0, tail_radius=2.0)
        buds = [attraction_budget(p, 1.0, m) for m in (3, 5, 9)]
        values = [b.value for b in buds]
        remainders = [b.remainder for b in buds]
        assert values == sorted(values)
        assert remainders == sorted(remainders, reverse=True)

    def test_upper_is_value_plus_remainder(self):
        bud = attraction_budget(attractive_plateau_1d(), rib=1.0)
        assert bud.upper == bud.value + bud.remainder

    def test_rejects_small_truncation(self):
        with pytest.raises(ValueError, match="ceil"):
            attraction_budget(attractive_plateau_1d(), rib=1.0,
                              truncation_cells=2)

    def test_rejects_bad_rib(self):
        with pytest.raises(ValueError, match="rib"):
            attraction_budget(attractive_plateau_1d(), rib=0.0)


class TestSSCondition:
    def test_square_well_margin(self):
        chk = check_ss_condition(square_well_potential(2, 3.0, 1.0), rib=1.0)
        assert chk.lhs == 1.5
        assert chk.rhs == 0.0
        assert chk.holds

    def test_attraction_can_defeat_the_margin(self):
        # budget far above twice the cell bound: not established
        p = riesz_potential(3, 1.0, core_strength=1e-3, tail_strength=50.0,
                            tail_exponent=1.0, core_radius=1.0, tail_radius=2.0)
        chk = check_ss_condition(p, rib=0.5)
        assert not chk.holds

    def test_rejects_s_at_or_above_d(self):
        p = riesz_potential(2, 2.0, core_radius=1.0, tail_radius=2.0)
        with pytest.raises(ValueError, match="s < d"):
            check_ss_condition(p, rib=0.5)


class TestLinearTermLadder:
    def test_synthetic_ladder_threshold(self):
        # e(N) = I*(1 - 1/N): the gap I/N reaches 0.1*I at N = 10.  Exact
        # arithmetic has equality there (the strict test would push N0 to
        # 11), but the rounded gap 0.5 - 0.45 lands one ulp below 0.05.
        p = square_well_potential(1, 3.0, 1.0)
        target = cube_energy_integral_lower_bound(1, 0.0, 1.0)
        e_vals = [(n, target * (1 - 1 / n)) for n in range(2, 30)]
        n0, b = linear_term_from_e_values(p, 1.0, 0.1 * target, e_vals, v0=0.0)
        assert n0 == 10
        expected = 3.0 * (e_vals[8][1] - e_vals[0][1]) * 10
        assert b == pytest.approx(expected, rel=1e-12)

    def test_budget_floor_applies(self):
        p = square_well_potential(1, 3.0, 1.0)
        e_vals = [(2, 0.49)]  # within any epsilon of 0.5
        n0, b = linear_term_from_e_values(p, 1.0, 0.5, e_vals, v0=7.0)
        assert n0 == 2
        assert b == 3.5

    def test_unreached_threshold_raises(self):
        p = square_well_potential(1, 3.0, 1.0)
        e_vals = [(n, 0.1) for n in range(2, 10)]
        with pytest.raises(ValueError, match="increase N_max or eps"):
            linear_term_from_e_values(p, 1.0, 1e-6, e_vals)

    def test_requires_n_two(self):
        p = square_well_potential(1, 3.0, 1.0)
        with pytest.raises(ValueError, match="start at N=2"):
            linear_term_from_e_values(p, 1.0, 0.1, [(3, 0.4)])


class TestLinearTermCritical:
    def test_worked_example_d2(self):
        # C_d = pi/2; (C_d - 0.1) ln N > 2 first at N = 4;
        # B = 2 + (C_d - 0.1)(2 ln 2 + 3 ln 3)
        n0, b = linear_term_critical(2, 1.0, 1.0, 0.1, 4.0)
        assert n0 == 4
        assert b == pytest.approx(8.886461, abs=1e-3)

    def test_zero_budget_gives_empty_sum(self):
        n0, b = linear_term_critical(2, 1.0, 1.0, 0.1, 0.0)
        assert n0 == 2
        assert b == 0.0

    def test_least_threshold_property(self):
        c_d = math.pi / 2.0
        for v0 in (0.5, 2.0, 4.0, 7.0):
            n0, _ = linear_term_critical(2, 1.0, 1.0, 0.1, v0)
            assert (c_d - 0.1) * math.log(n0) > v0 / 2.0
            if n0 > 2:
                assert (c_d - 0.1) * math.log(n0 - 1) <= v0 / 2.0

    def test_eps_out_of_range_raises(self):
        with pytest.raises(ValueError, match="eps"):
            linear_term_critical(2, 1.0, 1.0, math.pi / 2.0, 1.0)


class TestCertifySSS:
    def make_potential(self):
        # 1/r^4 core with an integrable attractive tail beyond r=2, d=2.
        # The claimed constants are shaved off the exact ones so the sampled
        # structural check cannot lose an equality to rounding.
        def phi(r):
            r = np.asarray(r, dtype=float)
            with np.errstate(divide="ignore"):
                core = r**-4.0
            return np.where(r > 2.0, -(r**-3.5), core)

        return PairPotential(
            phi, 2, 4.0, 1.0 - 1e-9, 1.0, tail_radius=2.0,
            tail_strength=1.0 + 1e-9, tail_exponent=1.5,
            label="core_plus_tail",
        )

    def test_core_with_integrable_tail_is_sss(self):
        cert = certify(self.make_potential())
        assert cert.classification == "SSS"
        assert cert.p == 3.0
        assert cert.a > 0
        assert cert.rib is not None
        assert math.sqrt(2) * cert.rib <= 1.0

    def test_constant_dominates_pointwise(self):
        # A N^p <= C N^p - (v0/2) N^2 restated over a large range of N
        p = self.make_potential()
        cert = certify(p)
        growth = hypersingular_growth_constant(2, 4.0, cert.rib, p.core_strength)
        v0 = cert.v0.upper
        n = np.arange(2, 1001, dtype=float)
        assert np.all(cert.a * n**3 <= growth * n**3 - (v0 / 2.0) * n**2 + 1e-12)

    def test_linear_term_covers_single_occupancy(self):
        cert = certify(self.make_potential())
        assert cert.b >= cert.a + cert.v0.upper / 2.0 - 1e-12

    def test_pure_core_certifies_at_the_largest_admissible_rib(self):
        p = riesz_potential(1, 2.0, tail_strength=0.0, core_radius=1.0,
                            tail_radius=2.0)
        cert = certify(p)
        assert cert.classification == "SSS"
        assert cert.v0.value == 0.0
        assert cert.rib == pytest.approx(1.0, rel=1e-9)
        assert cert.b == pytest.approx(cert.a, rel=1e-12)

    def test_lj_like_is_sss(self):
        # the growth exponent follows the r^-2s core, not the well decay
        cert = certify(lj_like_potential(2, 3.0))
        assert cert.classification == "SSS"
        assert cert.p == pytest.approx(1.0 + 6.0 / 2.0)


class TestCertifySS:
    def test_square_well_certificate(self):
        cert = certify(square_well_potential(2, 3.0, 1.0))
        assert cert.classification == "SS"
        assert cert.p == 2.0
        assert cert.a == 1.5
        assert cert.b == 1.5
        assert math.sqrt(2) * cert.rib <= 1.0
        # eps defaults to 0.1 * 0.5 = 0.05; the rounded gap at N = 10
        # lands one ulp below it (see the linear-term ladder test)
        assert cert.n0 == 10
        assert cert.epsilon == pytest.approx(0.05)

    def test_riesz_core_below_dimension_is_ss(self):
        # the per-cell gap decays like n^(-1/2) here, so a small eps would
        # push the ladder past any reasonable budget; 0.8 lands near n = 8
        p = riesz_potential(2, 1.0, tail_strength=0.01, tail_exponent=1.0,
                            core_radius=1.0, tail_radius=2.0)
        cert = certify(p, eps=0.8)
        assert cert.classification == "SS"
        assert cert.a > 0
        assert cert.b >= cert.a + cert.v0.upper / 2.0 - 1e-12
        assert cert.n0 >= 2
        # A gave up eps of the continuum margin
        target = cube_energy_integral_lower_bound(2, 1.0, cert.rib)
        expected_a = 1.0 * (target - 0.8) - cert.v0.upper / 2.0
        assert cert.a == pytest.approx(expected_a, rel=1e-12)

    def test_budget_exhaustion_returns_unknown(self):
        p = riesz_potential(2, 1.0, tail_strength=0.01, tail_exponent=1.0,
                            core_radius=1.0, tail_radius=2.0)
        cert = certify(p, eps=1e-9, budget=2)
        assert cert.classification == "Unknown"
        assert any("budget" in note for note in cert.notes)
        assert len(cert.evidence) > 0

    def test_critical_exponent_route(self):
        p = riesz_potential(1, 1.0, tail_strength=0.1, tail_exponent=1.0,
                            core_radius=1.0, tail_radius=2.0)
        cert = certify(p)
        assert cert.classification == "SS"
        assert cert.p == 2.0
        assert cert.a > 0
        assert cert.n0 >= 2
        assert any("asymptotic" in n or "premise" in n for n in cert.notes)


class TestCertifyNegative:
    def test_pure_attraction_is_unstable(self):
        cert = certify(exponential_attraction())
        assert cert.classification == "Unstable"
        names = [e.name for e in cert.evidence]
        assert "interaction-integral" in names
        integral = next(
            e for e in cert.evidence if e.name == "interaction-integral"
        )
        assert integral.value == pytest.approx(-8.0 * math.pi, rel=1e-6)
        assert not integral.holds

    def test_nonnegative_potentials_never_unstable(self):
        for p in (
            square_well_potential(1, 1.0, 1.0),
            square_well_potential(3, 2.0, 0.5),
            riesz_potential(2, 1.0, tail_strength=0.0, core_radius=1.0,
                            tail_radius=2.0),
        ):
            assert certify(p).classification != "Unstable"

    def test_unknown_when_validation_fails_but_integral_is_positive(self):
        # dips below zero in the core region (fails the structural check)
        # yet integrates positive and is bounded below
        def phi(r):
            r = np.asarray(r, dtype=float)
            return np.where(r < 0.5, 10.0, np.where(r < 1.0, -0.05, 0.0))

        p = PairPotential(phi, 1, 1.0, 1.0, 1.0, tail_radius=2.0,
                          tail_strength=1.0, tail_exponent=1.0)
        cert = certify(p)
        assert cert.classification == "Unknown"
        assert cert.a == 0.0 and cert.b == 0.0


class TestCertificateObject:
    def test_json_round_trip(self):
        cert = certify(square_well_potential(2, 3.0, 1.0))
        wire = cert.as_json_dict()
        assert set(wire) == {
            "classification", "A", "B", "p", "lambda", "v0", "regime",
            "epsilon", "N0", "evidence", "notes",
        }
        back = StabilityCertificate.from_json_dict(wire)
        assert back.classification == cert.classification
        assert back.a == cert.a and back.b == cert.b
        assert back.rib == cert.rib
        assert back.v0.value == cert.v0.value
        assert [e.name for e in back.evidence] == [e.name for e in cert.evidence]

    def test_invariants_enforced(self):
        with pytest.raises(ValueError, match="SSS"):
            StabilityCertificate("SSS", 0.0, 1.0, 3.0, 1.0, None, "x", None,
                                 None, ())
        with pytest.raises(ValueError, match="SS"):
            StabilityCertificate("SS", 1.0, 1.0, 3.0, 1.0, None, "x", None,
                                 None, ())
        with pytest.raises(ValueError, match="classification"):
            StabilityCertificate("Maybe", 0.0, 0.0, 2.0, None, None, "x",
                                 None, None, ())

    def test_default_grid_is_admissible_and_descending(self):
        p = riesz_potential(3, 4.0, core_radius=0.9, tail_radius=2.0)
        grid = default_rib_grid(p)
        assert len(grid) == 8
        assert all(math.sqrt(3) * rib <= 0.9 for rib in grid)
        assert grid == sorted(grid, reverse=True)


class TestVolumeFormConstant:
    def test_values(self):
        assert volume_form_constant(1.0, 1.0, 3) == 1.0
        assert volume_form_constant(0.5, 2.0, 2) == 2.0
        assert volume_form_constant(0.0, 1.0, 2) == 0.0

    def test_rejects_negative(self):
        with pytest.raises(ValueError):
            volume_form_constant(-1.0, 1.0, 2)


class TestEmpiricalBoundTest:
    def test_square_well_has_zero_violations_and_tight_slack(self):
        p = square_well_potential(2, 3.0, 1.0)
        cert = certify(p)
        rep = empirical_bound_test(p, cert, trials=2000, n_max=12, seed=7)
        assert rep.passed
        assert rep.violations == 0
        assert rep.min_slack >= 0.0
        assert rep.counterexample is None

    def test_pure_core_sss_has_zero_violations(self):
        p = riesz_potential(2, 4.0, tail_strength=0.0, core_radius=1.0,
                            tail_radius=2.0)
        cert = certify(p)
        rep = empirical_bound_test(p, cert, trials=2000, n_max=10, seed=3)
        assert rep.passed
        assert rep.min_slack >= 0.0

    def test_ss_with_positive_exponent_has_zero_violations(self):
        p = riesz_potential(2, 1.0, tail_strength=0.01, tail_exponent=1.0,
                            core_radius=1.0, tail_radius=2.0)
        cert = certify(p, eps=0.8)
        rep = empirical_bound_test(p, cert, trials=2000, n_max=12, seed=9)
        assert rep.passed
        assert rep.min_slack >= 0.0

    def test_corrupted_certificate_is_caught(self):
        # inflate A far past B so spread-out configurations must violate
        p = TestCertifySSS().make_potential()
        cert = certify(p)
        corrupt = StabilityCertificate(
            cert.classification, cert.a + 1000.0, cert.b, cert.p, cert.rib,
            cert.v0, cert.regime, cert.epsilon, cert.n0, cert.evidence,
            cert.notes,
        )
        rep = empirical_bound_test(p, corrupt, trials=2000, n_max=12, seed=5)
        assert rep.violations > 0
        assert rep.min_slack < 0.0
        assert rep.counterexample is not None
        assert rep.counterexample_slack < 0.0

    def test_zero_trials_is_an_empty_report(self):
        p = square_well_potential(2, 3.0, 1.0)
        cert = certify(p)
        rep = empirical_bound_test(p, cert, trials=0)
        assert rep.trials == 0
        assert rep.min_slack is None
        assert not rep.passed

    def test_deterministic(self):
        p = square_well_potential(2, 3.0, 1.0)
        cert = certify(p)
        a = empirical_bound_test(p, cert, trials=500, seed=11)
        b = empirical_bound_test(p, cert, trials=500, seed=11)
        assert a.min_slack == b.min_slack
        assert a.violations == b.violations

    def test_rejects_uncertified(self):
        cert = certify(exponential_attraction())
        with pytest.raises(ValueError, match="Unstable"):
            empirical_bound_test(exponential_attraction(), cert, trials=10)
