"""Tests for ULA steering vectors, coherence, and geometric channel assembly."""

import cmath
import math

import numpy as np
import numpy.testing as npt
import pytest

from spim_isac.arrays import (
    ArrayGeometry,
    PathParams,
    build_channel,
    coherence,
    steering_vector,
)


def scalar_steering_entry(n_elements, index_1based, angle_deg):
    """Independent scalar evaluation of one steering-vector entry."""
    phase = -math.pi * (index_1based - 1) * math.sin(math.radians(angle_deg))
    return cmath.exp(1j * phase) / math.sqrt(n_elements)


class TestSteeringVector:
    def test_broadside_four_elements_all_half(self):
        a = steering_vector(ArrayGeometry(4), 0.0)
        npt.assert_allclose(a, np.full(4, 0.5 + 0j), atol=1e-15)

    def test_endfire_two_elements(self):
        a = steering_vector(ArrayGeometry(2), 90.0)
        npt.assert_allclose(a, np.array([1.0, -1.0]) / np.sqrt(2), atol=1e-12)

    def test_thirty_degrees_entry_and_norm(self):
        a = steering_vector(ArrayGeometry(8), 30.0)
        assert abs(np.linalg.norm(a) - 1.0) < 1e-12
        # sin(30 deg) = 0.5, so entry 3 carries phase -pi * 2 * 0.5 = -pi
        expected = scalar_steering_entry(8, 3, 30.0)
        npt.assert_allclose(a[2], expected, atol=1e-12)
        npt.assert_allclose(expected, -1.0 / math.sqrt(8), atol=1e-12)

    @pytest.mark.parametrize("angle", [-90.001, 90.001, 180.0])
    def test_out_of_range_angle_rejected(self, angle):
        with pytest.raises(ValueError):
            steering_vector(ArrayGeometry(4), angle)

    def test_unit_norm_across_random_draws(self):
        rng = np.random.default_rng(101)
        for _ in range(200):
            n = int(rng.integers(1, 300))
            a = steering_vector(ArrayGeometry(n), float(rng.uniform(-90, 90)))
            assert abs(np.linalg.norm(a) - 1.0) < 1e-12

    def test_bad_geometry_rejected(self):
        with pytest.raises(ValueError):
            ArrayGeometry(0)


class TestCoherence:
    def test_equal_angles_exactly_one(self):
        for n in (1, 7, 128):
            assert coherence(ArrayGeometry(n), 40.0, 40.0) == 1.0

    def test_separated_angles_small_at_large_array(self):
        value = coherence(ArrayGeometry(128), 40.0, 50.0)
        # independent direct evaluation of |a(40)^H a(50)|
        a1 = np.array([scalar_steering_entry(128, i, 40.0) for i in range(1, 129)])
        a2 = np.array([scalar_steering_entry(128, i, 50.0) for i in range(1, 129)])
        direct = abs(np.sum(np.conj(a1) * a2))
        npt.assert_allclose(value, direct, atol=1e-12)
        assert value < 0.05

    def test_two_element_null(self):
        # |(1 + exp(-j pi))| / 2 = 0
        assert coherence(ArrayGeometry(2), 0.0, 90.0) < 1e-12

    def test_symmetric_and_bounded(self):
        rng = np.random.default_rng(102)
        for _ in range(50):
            n = int(rng.integers(2, 65))
            a1, a2 = rng.uniform(-90, 90, 2)
            c12 = coherence(ArrayGeometry(n), a1, a2)
            c21 = coherence(ArrayGeometry(n), a2, a1)
            npt.assert_allclose(c12, c21, atol=1e-12)
            assert 0.0 <= c12 <= 1.0 + 1e-12

    def test_decay_with_array_size(self):
        rng = np.random.default_rng(103)
        checked = 0
        while checked < 100:
            a1, a2 = rng.uniform(-90, 90, 2)
            if abs(math.sin(math.radians(a1)) - math.sin(math.radians(a2))) <= 0.05:
                continue
            checked += 1
            assert coherence(ArrayGeometry(1024), a1, a2) < coherence(ArrayGeometry(16), a1, a2)


class TestBuildChannel:
    def test_empty_paths_rejected(self):
        with pytest.raises(ValueError):
            build_channel(ArrayGeometry(4), ArrayGeometry(2), [])

    def test_single_path_rank_one_unit_norm(self):
        ch = build_channel(
            ArrayGeometry(8), ArrayGeometry(4), [PathParams(gain=1.0, dod=0.0, doa=0.0)]
        )
        a_r = steering_vector(ArrayGeometry(4), 0.0)
        a_t = steering_vector(ArrayGeometry(8), 0.0)
        npt.assert_allclose(ch.H, np.outer(a_r, a_t.conj()), atol=1e-14)
        assert np.linalg.matrix_rank(ch.H) == 1
        npt.assert_allclose(np.linalg.norm(ch.H), 1.0, atol=1e-12)

    def test_single_path_frobenius_square_equals_gain(self):
        for gain in (0.25, 1.0, 3.5):
            ch = build_channel(
                ArrayGeometry(16), ArrayGeometry(4), [PathParams(gain=gain, dod=17.0, doa=-55.0)]
            )
            npt.assert_allclose(np.linalg.norm(ch.H) ** 2, gain, atol=1e-12)

    def test_equal_gain_ties_keep_input_order(self):
        p1 = PathParams(gain=0.5, dod=10.0, doa=20.0)
        p2 = PathParams(gain=0.5, dod=-30.0, doa=5.0)
        ch_a = build_channel(ArrayGeometry(8), ArrayGeometry(4), [p1, p2])
        ch_b = build_channel(ArrayGeometry(8), ArrayGeometry(4), [p2, p1])
        npt.assert_allclose(ch_a.H, ch_b.H, atol=1e-14)
        assert ch_a.paths[0] is p1 and ch_b.paths[0] is p2

    def test_paths_sorted_by_decreasing_gain(self):
        paths = [
            PathParams(gain=0.2, dod=10.0, doa=20.0),
            PathParams(gain=0.7, dod=-30.0, doa=5.0),
            PathParams(gain=0.1, dod=60.0, doa=-60.0),
        ]
        ch = build_channel(ArrayGeometry(8), ArrayGeometry(4), paths)
        assert [p.gain for p in ch.paths] == [0.7, 0.2, 0.1]
        npt.assert_allclose(np.diag(ch.Lambda), np.sqrt([0.7, 0.2, 0.1]), atol=1e-15)

    def test_factored_form_matches_path_sum(self):
        rng = np.random.default_rng(104)
        for _ in range(10):
            paths = [
                PathParams(
                    gain=float(g),
                    dod=float(rng.uniform(-90, 90)),
                    doa=float(rng.uniform(-90, 90)),
                )
                for g in sorted(rng.uniform(0.1, 1.0, 2), reverse=True)
            ]
            ch = build_channel(ArrayGeometry(32), ArrayGeometry(8), paths)
            # independent assembly straight from the per-path sum
            h_sum = np.zeros((8, 32), dtype=complex)
            for p in paths:
                h_sum += np.sqrt(p.gain) * np.outer(
                    steering_vector(ArrayGeometry(8), p.doa),
                    steering_vector(ArrayGeometry(32), p.dod).conj(),
                )
            assert np.max(np.abs(ch.H - h_sum)) < 1e-12

    def test_factorization_and_column_norms(self):
        rng = np.random.default_rng(105)
        paths = [
            PathParams(gain=float(g), dod=float(rng.uniform(-90, 90)), doa=float(rng.uniform(-90, 90)))
            for g in (0.9, 0.5, 0.2)
        ]
        ch = build_channel(ArrayGeometry(16), ArrayGeometry(6), paths)
        npt.assert_allclose(ch.H, ch.P @ ch.Lambda @ ch.Q.conj().T, atol=1e-14)
        npt.assert_allclose(np.linalg.norm(ch.P, axis=0), 1.0, atol=1e-12)
        npt.assert_allclose(np.linalg.norm(ch.Q, axis=0), 1.0, atol=1e-12)
        assert np.linalg.matrix_rank(ch.H) <= ch.num_paths

    def test_matrices_immutable(self):
        ch = build_channel(
            ArrayGeometry(4), ArrayGeometry(2), [PathParams(gain=1.0, dod=0.0, doa=0.0)]
        )
        with pytest.raises(ValueError):
            ch.H[0, 0] = 0.0

    def test_negative_gain_rejected(self):
        with pytest.raises(ValueError):
            PathParams(gain=-0.1, dod=0.0, doa=0.0)
