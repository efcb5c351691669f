"""Partition correctness, energy decomposition, and the file formats."""

import io
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from riesz_stability.geometry import (
    CubicPartition,
    as_configuration,
    cell_index,
    cell_indices,
    configuration_from_csv,
    configuration_from_json_dict,
    configuration_to_csv,
    configuration_to_json_dict,
    energy_decomposition,
    max_pair_distance,
    occupancy,
    random_configuration,
    total_energy,
    total_energy_finite_range,
)
from riesz_stability.potentials import (
    lj_like_potential,
    riesz_potential,
    square_well_potential,
)


class TestCellIndex:
    def test_origin(self):
        assert cell_index([0.0, 0.0], CubicPartition(2, 1.0)) == (0, 0)

    def test_right_boundary_excluded(self):
        assert cell_index([0.5], CubicPartition(1, 1.0)) == (1,)

    def test_left_boundary_included(self):
        assert cell_index([-0.5], CubicPartition(1, 1.0)) == (0,)

    def test_fractional_rib_boundary(self):
        # 0.15 is not representable; the repair loop must land on the side
        # the inequalities dictate for the value actually stored
        part = CubicPartition(1, 0.1)
        x = 0.15
        (r,) = cell_index([x], part)
        assert 0.1 * (r - 0.5) <= x < 0.1 * (r + 0.5)

    @given(
        st.integers(min_value=1, max_value=3),
        st.sampled_from([0.5, 1.0, 2.0, 0.1, 0.3]),
        st.integers(min_value=0, max_value=2**31),
    )
    @settings(max_examples=80, deadline=None)
    def test_containment_inequalities(self, d, rib, seed):
        rng = np.random.default_rng(seed)
        pts = rng.uniform(-4, 4, size=(32, d))
        part = CubicPartition(d, rib)
        idx = cell_indices(pts, part)
        assert np.all(rib * (idx - 0.5) <= pts)
        assert np.all(pts < rib * (idx + 0.5))

    def test_partition_validation(self):
        with pytest.raises(ValueError):
            CubicPartition(0, 1.0)
        with pytest.raises(ValueError):
            CubicPartition(2, 0.0)


class TestOccupancy:
    def test_single_cell(self):
        cells = occupancy([[0.1], [0.2]], CubicPartition(1, 1.0))
        assert list(cells) == [(0,)]
        assert cells[(0,)].shape == (2, 1)

    def test_two_cells(self):
        cells = occupancy([[0.1], [1.1]], CubicPartition(1, 1.0))
        assert set(cells) == {(0,), (1,)}
        assert all(v.shape == (1, 1) for v in cells.values())

    def test_empty(self):
        assert occupancy(np.empty((0, 2)), CubicPartition(2, 1.0)) == {}

    def test_preserves_input_order(self):
        pts = [[0.3], [0.1], [0.2]]
        cells = occupancy(pts, CubicPartition(1, 1.0))
        assert np.array_equal(cells[(0,)], np.asarray(pts))

    @given(
        st.integers(min_value=0, max_value=40),
        st.integers(min_value=0, max_value=2**31),
    )
    @settings(max_examples=50, deadline=None)
    def test_counts_sum_to_n(self, n, seed):
        pts = random_configuration(n, 2, 6.0, seed)
        cells = occupancy(pts, CubicPartition(2, 1.0))
        assert sum(len(v) for v in cells.values()) == n


class TestTotalEnergy:
    def test_pair_at_unit_distance(self):
        p = riesz_potential(2, 2)
        assert total_energy([[0.0, 0.0], [1.0, 0.0]], p) == 1.0

    def test_single_point(self):
        assert total_energy([[1.0, 2.0]], riesz_potential(2, 2)) == 0.0
        assert total_energy(np.empty((0, 2)), riesz_potential(2, 2)) == 0.0

    def test_three_collinear(self):
        p = riesz_potential(1, 1)
        assert total_energy([[0.0], [1.0], [2.0]], p) == 2.5

    def test_coincident_pair_named(self):
        p = riesz_potential(2, 2)
        with pytest.raises(ValueError, match="1 and 3"):
            total_energy([[0.0, 0], [1, 1], [2, 2], [1, 1]], p)

    @given(
        st.integers(min_value=2, max_value=14),
        st.integers(min_value=0, max_value=2**31),
    )
    @settings(max_examples=50, deadline=None)
    def test_permutation_invariance_exact(self, n, seed):
        pts = random_configuration(n, 2, 3.0, seed)
        p = lj_like_potential(2, 3.0)
        rng = np.random.default_rng(seed + 1)
        assert total_energy(pts, p) == total_energy(pts[rng.permutation(n)], p)

    def test_translation_by_exact_rib_multiples(self):
        pts = random_configuration(12, 2, 2.0, 5)
        p = lj_like_potential(2, 3.0)
        part = CubicPartition(2, 0.5)
        shifted = pts + 0.5 * np.array([3.0, -2.0])
        assert total_energy(pts, p) == total_energy(shifted, p)
        before = cell_indices(pts, part)
        after = cell_indices(shifted, part)
        assert np.array_equal(after - before, np.broadcast_to([3, -2], before.shape))


class TestFiniteRangePath:
    @given(
        st.integers(min_value=0, max_value=30),
        st.integers(min_value=0, max_value=2**31),
    )
    @settings(max_examples=60, deadline=None)
    def test_bit_identical_to_direct(self, n, seed):
        p = square_well_potential(2, 3.0, 1.0)
        pts = random_configuration(n, 2, 8.0, seed)
        direct = total_energy(pts, p)
        fast = total_energy_finite_range(pts, p, cutoff=1.0)
        assert fast == direct

    def test_pairs_exactly_at_cutoff_kept(self):
        p = square_well_potential(1, 3.0, 1.0)
        pts = [[0.0], [1.0]]
        assert total_energy_finite_range(pts, p, cutoff=1.0) == 3.0


class TestEnergyDecomposition:
    def test_all_in_one_cell(self):
        p = riesz_potential(2, 1)
        pts = [[0.0, 0.0], [0.2, 0.0], [0.0, 0.2]]
        intra, inter = energy_decomposition(pts, p, CubicPartition(2, 1.0))
        assert inter == 0.0
        assert list(intra) == [(0, 0)]
        assert intra[(0, 0)] == total_energy(pts, p)

    def test_two_singletons(self):
        p = riesz_potential(2, 1)
        pts = [[0.0, 0.0], [1.0, 0.0]]
        intra, inter = energy_decomposition(pts, p, CubicPartition(2, 1.0))
        assert intra == {}
        assert inter == 1.0

    def test_two_pairs_in_adjacent_cells(self):
        p = riesz_potential(2, 1)
        pts = [[0.0, 0.0], [0.0, 0.2], [1.0, 0.0], [1.0, 0.2]]
        intra, inter = energy_decomposition(pts, p, CubicPartition(2, 1.0))
        assert intra == {(0, 0): 5.0, (1, 0): 5.0}
        assert inter == pytest.approx(2 + 2 / math.sqrt(1.04), rel=1e-15)

    @given(
        st.integers(min_value=1, max_value=3),
        st.sampled_from([0.5, 1.0, 2.0]),
        st.integers(min_value=2, max_value=24),
        st.integers(min_value=0, max_value=2**31),
    )
    @settings(max_examples=120, deadline=None)
    def test_identity_within_8_ulp(self, d, rib, n, seed):
        pts = random_configuration(n, d, 4.0, seed)
        p = lj_like_potential(d, d + 1.5)
        total = total_energy(pts, p)
        intra, inter = energy_decomposition(pts, p, CubicPartition(d, rib))
        recombined = math.fsum(list(intra.values()) + [inter])
        assert abs(recombined - total) <= 8 * math.ulp(max(abs(total), 1e-300))

    def test_intra_requires_two_points(self):
        # cells with one point carry no pair energy and are not reported
        p = riesz_potential(1, 1)
        pts = [[0.0], [0.1], [5.0]]
        intra, _ = energy_decomposition(pts, p, CubicPartition(1, 1.0))
        assert list(intra) == [(0,)]


class TestMaxPairDistance:
    def test_examples(self):
        assert max_pair_distance([[0.0], [3.0]]) == 3.0
        corners = [[0.0, 0.0], [1, 0], [0, 1], [1, 1]]
        assert max_pair_distance(corners) == math.sqrt(2)
        assert max_pair_distance([[0.0], [1.0], [5.0]]) == 5.0

    def test_needs_two(self):
        with pytest.raises(ValueError):
            max_pair_distance([[0.0]])


class TestRandomConfiguration:
    def test_deterministic(self):
        a = random_configuration(50, 2, 1.0, 42)
        b = random_configuration(50, 2, 1.0, 42)
        assert np.array_equal(a, b)

    def test_containment(self):
        pts = random_configuration(1000, 2, 1.0, 42)
        assert np.all(np.abs(pts) <= 0.5)

    def test_empty(self):
        assert random_configuration(0, 3, 1.0, 1).shape == (0, 3)

    def test_distinct(self):
        pts = random_configuration(500, 1, 1.0, 7)
        assert np.unique(pts).size == 500


class TestFileFormats:
    def test_csv_roundtrip_exact(self):
        pts = random_configuration(20, 3, 1.0, 3)
        buf = io.StringIO()
        configuration_to_csv(pts, buf)
        text = buf.getvalue()
        assert text.splitlines()[0] == "x1,x2,x3"
        back = configuration_from_csv(io.StringIO(text))
        assert np.array_equal(back, pts)

    def test_csv_file_roundtrip(self, tmp_path):
        pts = random_configuration(5, 2, 2.0, 9)
        path = tmp_path / "conf.csv"
        configuration_to_csv(pts, path)
        assert np.array_equal(configuration_from_csv(path), pts)

    def test_csv_header_checked(self):
        with pytest.raises(ValueError, match="header"):
            configuration_from_csv(io.StringIO("a,b\n1,2\n"))

    def test_json_roundtrip(self):
        pts = random_configuration(7, 2, 1.0, 11)
        obj = configuration_to_json_dict(pts)
        assert obj["dimension"] == 2
        assert np.array_equal(configuration_from_json_dict(obj), pts)

    def test_json_empty(self):
        obj = {"dimension": 3, "points": []}
        assert configuration_from_json_dict(obj).shape == (0, 3)

    def test_configuration_validation(self):
        with pytest.raises(ValueError, match="finite"):
            as_configuration([[np.inf, 0.0]])
        with pytest.raises(ValueError, match="dimension"):
            as_configuration([[0.0, 1.0]], dimension=3)
