#!/usr/bin/env python3
"""Test the closed-form round-sphere data against the numerical functional"""

import math
import os
import sys

sys.path.insert(0, os.path.join(os.path.dirname(os.path.abspath(__file__)), '..'))

import numpy as np
import pytest
from numpy.testing import assert_allclose

from billiard_errors import BadInput
from cohomology import (CoefficientDomain, betti_numbers, betti_polynomial, closed_string_ring,
                        cyclic_poincare_polynomial, cyclic_ring)
from configuration import gradient, hessian, neg_total_length, reflection_law_residual
from sphere_oracle import (bundle_twists, closed_angle, closed_critical_value, closed_family_distance,
                           closed_k_from_level, closed_level_from_k, closed_tangent_frames,
                           closed_trajectory, full_hessian_closed, full_hessian_periodic,
                           morse_bott_poincare_closed, morse_bott_poincare_periodic,
                           negative_bundle_orientable, negative_bundle_rank, periodic_angle,
                           periodic_critical_value, periodic_family, periodic_family_distance,
                           periodic_spectrum, q_form_matrix, q_form_numeric_eigenvalues,
                           q_form_spectrum, sw_class_negative_bundle)

E1 = [1.0, 0.0, 0.0]
E2 = [0.0, 1.0, 0.0]


def _closed_cases():
    return [(k, n) for n in range(1, 8) for k in range(1, (n + 1) // 2 + 1)]


def test_critical_values_of_small_cases():
    assert closed_critical_value(1, 1) == pytest.approx(-4.0, abs=1e-15)
    assert closed_critical_value(2, 3) == pytest.approx(-8.0, abs=1e-14)


@pytest.mark.parametrize("k,n", _closed_cases())
def test_closed_trajectory_is_critical_with_predicted_value(k, n):
    c = closed_trajectory(E1, E2, k, n)
    assert neg_total_length(c) == pytest.approx(closed_critical_value(k, n), abs=1e-12)
    assert gradient(c).norm() <= 1e-12
    assert reflection_law_residual(c) <= 1e-12
    assert closed_family_distance(c, k) <= 1e-12


@pytest.mark.parametrize("k,n", _closed_cases())
def test_q_form_closed_form_matches_lapack(k, n):
    record = q_form_spectrum(k, n)
    numeric = q_form_numeric_eigenvalues(k, n)
    assert_allclose(np.sort(record.eigenvalues), numeric, atol=1e-12)
    cut = 1e-9
    assert record.index == int(np.sum(numeric < -cut))
    assert record.nullity == int(np.sum(np.abs(numeric) <= cut))


def test_q_form_eigenvectors():
    k, n = 2, 6
    record = q_form_spectrum(k, n)
    mat = q_form_matrix(k, n)
    for s in range(n):
        v = record.eigenvectors[:, s]
        assert_allclose(mat @ v, record.eigenvalues[s] * v, atol=1e-12)


def test_q_form_index_example():
    assert q_form_spectrum(1, 4).index == 2
    assert q_form_spectrum(1, 4).nullity == 1


def test_level_and_turning_number_agree():
    for n in range(1, 9):
        for k in range(1, (n + 1) // 2 + 1):
            assert closed_k_from_level(closed_level_from_k(k, n), n) == k


@pytest.mark.parametrize("k,n", [(k, n) for n in range(2, 7) for k in range(1, (n + 1) // 2 + 1) if 2 * k < n + 1])
def test_full_closed_hessian_spectrum_matches_numerical_hessian(k, n):
    record = full_hessian_closed(k, n, 2)
    assert_allclose(np.linalg.eigvalsh(record.matrix), record.eigenvalues(), atol=1e-12)
    c = closed_trajectory(E1, E2, k, n)
    assert_allclose(np.linalg.eigvalsh(hessian(c)), record.eigenvalues(), atol=1e-6)
    frames = closed_tangent_frames(E1, E2, k, n)
    assert_allclose(np.linalg.eigvalsh(hessian(c, bases=frames)), record.eigenvalues(), atol=1e-6)


@pytest.mark.parametrize("m", [3, 4])
@pytest.mark.parametrize("n", range(1, 11))
def test_closed_hessian_matches_oracle_in_higher_dimensions(m, n):
    A, a = np.eye(m + 1)[0], np.eye(m + 1)[1]
    # every turning number, the alternating string k = (n+1)/2 included
    for k in range(1, (n + 1) // 2 + 1):
        record = full_hessian_closed(k, n, m)
        c = closed_trajectory(A, a, k, n)
        assert gradient(c).norm() <= 1e-10
        assert_allclose(np.linalg.eigvalsh(hessian(c)), record.eigenvalues(), atol=1e-6)
        numeric = np.linalg.eigvalsh(hessian(c))
        scale = float(np.max(np.abs(numeric)))
        assert int(np.sum(numeric < -1e-6 * scale)) == record.index


def test_alternating_string_matches_oracle():
    for n in (1, 3, 5, 7, 9):
        k = (n + 1) // 2
        c = closed_trajectory(E1, E2, k, n)
        assert closed_critical_value(k, n) == pytest.approx(-2.0 * (n + 1), abs=1e-12)
        assert_allclose(np.linalg.eigvalsh(hessian(c)), full_hessian_closed(k, n, 2).eigenvalues(), atol=1e-6)


@pytest.mark.parametrize("n", [3, 5, 7])
def test_periodic_family_is_critical(n):
    for p in range((n - 3) // 2 + 1):
        c = periodic_family(n, p, (E1, E2))
        assert neg_total_length(c) == pytest.approx(periodic_critical_value(n, p), abs=1e-12)
        assert gradient(c).norm() <= 1e-12
        assert periodic_family_distance(c, p) <= 1e-7


def test_pentagram_is_the_deepest_level():
    # turning angle 4 pi / 5 at level 0
    assert periodic_angle(5, 0) == pytest.approx(4.0 * math.pi / 5.0)
    assert periodic_angle(5, 1) == pytest.approx(2.0 * math.pi / 5.0)
    assert periodic_critical_value(5, 0) < periodic_critical_value(5, 1)


@pytest.mark.parametrize("n,p", [(5, 0), (5, 1), (7, 1), (7, 2)])
def test_full_periodic_hessian_spectrum_matches_numerical_hessian(n, p):
    record = full_hessian_periodic(n, p, 2)
    assert_allclose(np.linalg.eigvalsh(record.matrix), record.eigenvalues(), atol=1e-12)
    c = periodic_family(n, p, (E1, E2))
    assert_allclose(np.linalg.eigvalsh(hessian(c)), record.eigenvalues(), atol=1e-6)


@pytest.mark.parametrize("n", [5, 7, 9])
@pytest.mark.parametrize("m", [2, 3, 4])
def test_periodic_index_and_nullity(n, m):
    for p in range((n - 3) // 2 + 1):
        record = full_hessian_periodic(n, p, m)
        assert record.index == 2 * p * (m - 1)
        assert record.nullity == 2 * m - 1
        assert periodic_spectrum(n, p).level == p


def test_negative_bundle_rank_is_the_hessian_index():
    for m in (2, 3, 4):
        for n in range(1, 9):
            for p in range((n - 1) // 2 + 1):
                k = closed_k_from_level(p, n)
                assert negative_bundle_rank(p, m, n) == full_hessian_closed(k, n, m).index


def test_stiefel_whitney_classes_of_negative_bundle():
    assert sw_class_negative_bundle(1, 4) == [1, 1, 1, 1]
    assert sw_class_negative_bundle(0, 4) == [1, 0, 0, 0]
    assert not negative_bundle_orientable(1, 4)
    assert negative_bundle_orientable(2, 3)


def test_bundle_twists_alternate():
    twists = bundle_twists(2, 6)
    assert [s for s, _ in twists] == [3, 4, 5, 6]
    assert [kind for _, kind in twists] == ['gamma_perp', 'tau', 'gamma_perp', 'tau']
    assert len(bundle_twists(1, 6)) == negative_bundle_rank(1, 2, 6)
    assert bundle_twists(0, 6) == []
    with pytest.raises(BadInput):
        bundle_twists(0, 5)


@pytest.mark.parametrize("m", [2, 3, 4])
@pytest.mark.parametrize("n", [2, 3, 4, 5, 6])
def test_closed_families_are_perfect_rationally(m, n):
    ring = closed_string_ring(m, n, CoefficientDomain.Q)
    assert morse_bott_poincare_closed(m, n) == betti_polynomial(betti_numbers(ring, CoefficientDomain.Q))


@pytest.mark.parametrize("m", [2, 3])
@pytest.mark.parametrize("n", [3, 5, 7])
def test_periodic_families_are_perfect_rationally(m, n):
    assert morse_bott_poincare_periodic(m, n) == cyclic_poincare_polynomial(cyclic_ring(m, n))


def test_family_distances_grow_off_the_family():
    c = closed_trajectory(E1, E2, 1, 4)
    assert closed_family_distance(c, 2) > 0.1
    pentagon = periodic_family(5, 1, (E1, E2))
    assert periodic_family_distance(pentagon, 0) > 0.1


def test_invalid_arguments():
    with pytest.raises(BadInput):
        closed_angle(0, 4)
    with pytest.raises(BadInput):
        closed_angle(3, 4)
    with pytest.raises(BadInput):
        periodic_angle(4, 0)
    with pytest.raises(BadInput):
        periodic_angle(5, 2)
    with pytest.raises(BadInput):
        closed_trajectory(E1, [1.0, 1.0, 0.0], 1, 3)
    with pytest.raises(BadInput):
        full_hessian_closed(1, 3, 1)
    with pytest.raises(BadInput):
        closed_k_from_level(3, 4)


if __name__ == "__main__":
    print("Testing the round-sphere oracle")
    print("=" * 60)
    sys.exit(pytest.main([__file__, "-v"]))
