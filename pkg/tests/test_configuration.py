#!/usr/bin/env python3
"""Test configurations: length, derivatives, admissibility and symmetry actions"""

import math
import os
import sys

sys.path.insert(0, os.path.join(os.path.dirname(os.path.abspath(__file__)), '..'))

import numpy as np
import pytest
from numpy.testing import assert_allclose

from billiard_errors import BadInput, Inadmissible, OffSurface, WrongKind
from body_presets import preset_body
from configuration import (Configuration, ConfigurationKind, DihedralElement, TangentVector,
                           closed_string, cyclic, default_epsilon, dihedral_act, gap_product,
                           gradient, group_images, hessian, in_G_epsilon, log_gap_gradient,
                           min_gap, neg_total_length, orbit_size, reflect_T,
                           reflection_law_residual, retract, riemannian_gradient_ambient)
from convex_body import sample_surface, sphere_body, surface_project


def _circle_point(theta):
    return [math.cos(theta), math.sin(theta)]


def _random_configurations(body, kind, n, count, seed, min_separation):
    """Seeded configurations whose consecutive gaps all exceed min_separation"""
    rng = np.random.default_rng(seed)
    found = []
    while len(found) < count:
        points = sample_surface(body, n + (1 if kind == ConfigurationKind.CLOSED_STRING else 0), rng)
        if kind == ConfigurationKind.CLOSED_STRING:
            c = closed_string(body, points[0], points[1:])
        else:
            c = cyclic(body, points)
        if min_gap(c) > min_separation:
            found.append(c)
    return found


def _length_along(c, direction, t):
    return neg_total_length(retract(c, TangentVector(direction.blocks * t)))


def test_length_of_square_on_circle():
    body = preset_body("circle")
    c = cyclic(body, [_circle_point(k * math.pi / 2) for k in range(4)])
    assert neg_total_length(c) == pytest.approx(-4.0 * math.sqrt(2.0), abs=1e-14)


def test_closed_string_includes_anchor_segments():
    body = preset_body("circle")
    c = closed_string(body, [1.0, 0.0], [[-1.0, 0.0]])
    assert neg_total_length(c) == pytest.approx(-4.0, abs=1e-15)
    assert len(c.gaps()) == 2


def test_points_must_lie_on_surface():
    body = sphere_body(2)
    with pytest.raises(OffSurface):
        cyclic(body, [[1.0, 0.0, 0.0], [0.0, 0.5, 0.0]])
    with pytest.raises(BadInput):
        Configuration(body, ConfigurationKind.CLOSED_STRING, np.array([[1.0, 0.0, 0.0]]))


def test_coincident_points_are_inadmissible():
    body = preset_body("circle")
    c = cyclic(body, [[1.0, 0.0], [1.0, 0.0], [-1.0, 0.0]])
    with pytest.raises(Inadmissible):
        neg_total_length(c)
    with pytest.raises(Inadmissible):
        gradient(c)


@pytest.mark.parametrize("preset", ["circle", "sphere-2", "ellipsoid-1.1-1-0.9", "quartic-ball"])
@pytest.mark.parametrize("kind", [ConfigurationKind.CLOSED_STRING, ConfigurationKind.CYCLIC])
def test_gradient_matches_finite_differences(preset, kind):
    body = preset_body(preset)
    h = 1e-5
    rng = np.random.default_rng(11)
    for c in _random_configurations(body, kind, 3, 25, seed=7, min_separation=0.3):
        direction = TangentVector(rng.standard_normal((c.n, c.m)))
        numeric = (_length_along(c, direction, h) - _length_along(c, direction, -h)) / (2 * h)
        analytic = gradient(c).dot(direction)
        assert analytic == pytest.approx(numeric, rel=1e-5, abs=1e-6)


@pytest.mark.parametrize("preset", ["circle", "sphere-2", "ellipsoid-1.1-1-0.9", "quartic-ball"])
@pytest.mark.parametrize("kind", [ConfigurationKind.CLOSED_STRING, ConfigurationKind.CYCLIC])
def test_hessian_matches_gradient_differences(preset, kind):
    """Projected central difference of the ambient gradient field along the retraction"""
    body = preset_body(preset)
    h = 1e-5
    rng = np.random.default_rng(13)
    for c in _random_configurations(body, kind, 3, 25, seed=9, min_separation=0.3):
        direction = TangentVector(rng.standard_normal((c.n, c.m)))
        forward = riemannian_gradient_ambient(retract(c, TangentVector(direction.blocks * h)))
        backward = riemannian_gradient_ambient(retract(c, TangentVector(direction.blocks * -h)))
        numeric = np.array([b @ d for b, d in zip(c.bases, (forward - backward) / (2 * h))])
        analytic = (hessian(c) @ direction.flat()).reshape(c.n, c.m)
        assert_allclose(analytic, numeric, rtol=1e-4, atol=1e-5)


def test_hessian_is_symmetric():
    body = preset_body("ellipsoid-1.1-1-0.9")
    for c in _random_configurations(body, ConfigurationKind.CYCLIC, 4, 5, seed=2, min_separation=0.2):
        h = hessian(c)
        assert_allclose(h, h.T, atol=1e-14)


def test_riemannian_gradient_is_tangent():
    body = preset_body("quartic-ball")
    for c in _random_configurations(body, ConfigurationKind.CYCLIC, 3, 5, seed=4, min_separation=0.2):
        ambient = riemannian_gradient_ambient(c)
        for p, g in zip(c.points, ambient):
            normal = body.defining_gradient(p)
            assert abs(float(normal @ g)) <= 1e-12 * np.linalg.norm(normal)
        assert np.linalg.norm(ambient) == pytest.approx(gradient(c).norm(), rel=1e-12)


def test_regular_polygon_is_critical_and_obeys_reflection_law():
    body = sphere_body(2)
    points = [[math.cos(2 * math.pi * j / 5), math.sin(2 * math.pi * j / 5), 0.0] for j in range(5)]
    c = cyclic(body, points)
    assert gradient(c).norm() <= 1e-12
    assert reflection_law_residual(c) <= 1e-12


def test_reflect_T_reverses_and_preserves_length():
    body = preset_body("ellipsoid-1.1-1-0.9")
    c = _random_configurations(body, ConfigurationKind.CLOSED_STRING, 4, 1, seed=3, min_separation=0.1)[0]
    t = reflect_T(c)
    assert_allclose(t.points, c.points[::-1])
    assert neg_total_length(t) == neg_total_length(c)
    assert_allclose(reflect_T(t).points, c.points)


def test_reflect_T_rejects_cyclic():
    body = preset_body("circle")
    c = cyclic(body, [_circle_point(0.0), _circle_point(2.0), _circle_point(4.0)])
    with pytest.raises(WrongKind):
        reflect_T(c)


def test_dihedral_composition_matches_successive_actions():
    body = sphere_body(2)
    rng = np.random.default_rng(8)
    c = cyclic(body, sample_surface(body, 5, rng))
    for g in DihedralElement.all_elements(5):
        for h in DihedralElement.all_elements(5):
            composed = dihedral_act(g.compose(h), c)
            successive = dihedral_act(g, dihedral_act(h, c))
            assert_allclose(composed.points, successive.points)


def test_dihedral_action_preserves_length_exactly():
    body = preset_body("ellipsoid-1.1-1-0.9")
    c = _random_configurations(body, ConfigurationKind.CYCLIC, 5, 1, seed=6, min_separation=0.1)[0]
    values = {neg_total_length(image) for image in group_images(c)}
    assert len(values) == 1
    assert len(group_images(c)) == 10


@pytest.mark.parametrize("preset", ["sphere-2", "ellipsoid-1.1-1-0.9", "quartic-ball"])
def test_gradient_commutes_with_reversal(preset):
    body = preset_body(preset)
    for c in _random_configurations(body, ConfigurationKind.CLOSED_STRING, 4, 3, seed=12, min_separation=0.1):
        reversed_gradient = riemannian_gradient_ambient(reflect_T(c))
        assert_allclose(reversed_gradient, riemannian_gradient_ambient(c)[::-1], atol=1e-12)


@pytest.mark.parametrize("preset", ["sphere-2", "ellipsoid-1.1-1-0.9", "quartic-ball"])
def test_gradient_commutes_with_dihedral_action(preset):
    body = preset_body(preset)
    c = _random_configurations(body, ConfigurationKind.CYCLIC, 5, 1, seed=13, min_separation=0.1)[0]
    base = riemannian_gradient_ambient(c)
    for g in DihedralElement.all_elements(5):
        moved = riemannian_gradient_ambient(dihedral_act(g, c))
        assert_allclose(moved, base[g.index_map()], atol=1e-12)


def test_dihedral_action_checks_kind_and_size():
    body = preset_body("circle")
    c = cyclic(body, [_circle_point(0.0), _circle_point(2.0), _circle_point(4.0)])
    with pytest.raises(BadInput):
        dihedral_act(DihedralElement(1, False, 4), c)
    closed = closed_string(body, _circle_point(0.0), [_circle_point(2.0)])
    with pytest.raises(WrongKind):
        dihedral_act(DihedralElement.identity(1), closed)


def test_orbit_size_of_symmetric_configurations():
    body = preset_body("circle")
    square = cyclic(body, [_circle_point(k * math.pi / 2) for k in range(4)])
    assert orbit_size(square, 1e-12) == 8
    closed = closed_string(body, [1.0, 0.0], [[-1.0, 0.0]])
    assert orbit_size(closed, 1e-12) == 1


def test_G_epsilon_membership_and_default_epsilon():
    body = preset_body("circle")
    c = cyclic(body, [_circle_point(0.0), _circle_point(0.01), _circle_point(math.pi)])
    product = gap_product(c)
    assert in_G_epsilon(c, product)
    assert not in_G_epsilon(c, 2.0 * product)
    assert default_epsilon(body, ConfigurationKind.CYCLIC, 3) == pytest.approx((2e-3) ** 3)
    assert default_epsilon(body, ConfigurationKind.CLOSED_STRING, 3) == pytest.approx((2e-3) ** 4)


def test_log_gap_gradient_separates_close_points():
    body = preset_body("circle")
    c = cyclic(body, [_circle_point(0.0), _circle_point(0.01), _circle_point(math.pi)])
    direction = log_gap_gradient(c)
    moved = retract(c, TangentVector(direction.blocks * 1e-4))
    assert gap_product(moved) > gap_product(c)


def test_retract_stays_on_surface():
    body = preset_body("quartic-ball")
    rng = np.random.default_rng(21)
    c = _random_configurations(body, ConfigurationKind.CYCLIC, 4, 1, seed=5, min_separation=0.2)[0]
    moved = retract(c, TangentVector(rng.standard_normal((4, 2)) * 0.1))
    for p in moved.points:
        assert body.residual(p) <= body.tolerance


def test_retract_by_zero_is_idempotent():
    for preset in ("ellipsoid-1.1-1-0.9", "quartic-ball"):
        body = preset_body(preset)
        rng = np.random.default_rng(22)
        c = _random_configurations(body, ConfigurationKind.CYCLIC, 4, 1, seed=7, min_separation=0.2)[0]
        moved = retract(c, TangentVector(rng.standard_normal((4, body.dim_m)) * 0.1))
        zero = TangentVector(np.zeros((4, body.dim_m)))
        again = retract(moved, zero)
        assert_allclose(again.points, moved.points, atol=1e-12)
        assert_allclose(retract(again, zero).points, again.points, atol=1e-12)


def test_configuration_json_round_trip():
    body = preset_body("ellipsoid-1.1-1-0.9")
    c = _random_configurations(body, ConfigurationKind.CLOSED_STRING, 3, 1, seed=1, min_separation=0.1)[0]
    data = c.to_dict()
    back = Configuration.from_dict(data)
    assert back.kind == c.kind
    assert_allclose(back.points, c.points, rtol=0, atol=0)
    assert_allclose(back.anchor, c.anchor, rtol=0, atol=0)
    with pytest.raises(BadInput):
        Configuration.from_dict(c.to_dict(body_ref="body"))
    assert Configuration.from_dict(c.to_dict(body_ref="body"), body=body).n == 3


def test_anchor_projection_helper():
    body = preset_body("ellipse-2-1")
    anchor = surface_project(body, [1.0, 0.0])
    c = closed_string(body, anchor, [surface_project(body, [-1.0, 0.1])])
    assert c.is_closed_string
    assert_allclose(c.chain()[0], c.chain()[-1])


if __name__ == "__main__":
    print("Testing configurations")
    print("=" * 60)
    sys.exit(pytest.main([__file__, "-v"]))
