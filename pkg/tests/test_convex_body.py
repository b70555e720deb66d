#!/usr/bin/env python3
"""Test body definitions, projection, normals and tangent frames"""

import json
import os
import sys

sys.path.insert(0, os.path.join(os.path.dirname(os.path.abspath(__file__)), '..'))

import numpy as np
import pytest
from numpy.testing import assert_allclose

from billiard_errors import BadInput, ConfigError, NonConvexBody, OffSurface
from body_presets import BODY_PRESETS, preset_body, resolve_body
from convex_body import (BodyKind, ConvexBody, ImplicitConvex, check_strict_convexity, diameter,
                         ellipsoid_body, load_body, outward_normal, sample_surface, shape_operator,
                         sphere_body, surface_project, tangent_basis)


def test_sphere_projection_is_radial():
    body = sphere_body(2)
    p = surface_project(body, [3.0, 4.0, 0.0])
    assert_allclose(p, [0.6, 0.8, 0.0], atol=1e-15)


def test_ellipse_axis_points_project_to_themselves():
    body = ellipsoid_body([2.0, 1.0])
    assert_allclose(surface_project(body, [2.0, 0.0]), [2.0, 0.0], atol=1e-12)
    assert_allclose(surface_project(body, [0.0, 3.0]), [0.0, 1.0], atol=1e-12)


def test_ellipsoid_projection_is_closest_point():
    """y - p must be parallel to the normal at p"""
    body = preset_body("ellipsoid-1.1-1-0.9")
    rng = np.random.default_rng(3)
    for _ in range(20):
        y = rng.standard_normal(3) * 1.5
        p = surface_project(body, y)
        assert body.residual(p) <= 1e-12
        normal = outward_normal(body, p)
        offset = y - p
        tangential = offset - float(offset @ normal) * normal
        assert np.linalg.norm(tangential) <= 1e-9


def test_implicit_projection_lands_on_surface():
    body = preset_body("quartic-ball")
    rng = np.random.default_rng(5)
    for _ in range(20):
        p = surface_project(body, rng.standard_normal(3))
        assert body.residual(p) <= body.tolerance


def test_projection_rejects_centre_and_wrong_shape():
    body = sphere_body(2)
    with pytest.raises(BadInput):
        surface_project(body, [0.0, 0.0, 0.0])
    with pytest.raises(BadInput):
        surface_project(body, [1.0, 0.0])


def test_tangent_basis_is_orthonormal_and_normal_to_surface():
    for name in ("sphere-2", "ellipsoid-1.1-1-0.9", "quartic-ball", "sphere-4"):
        body = preset_body(name)
        for p in sample_surface(body, 10, np.random.default_rng(1)):
            basis = tangent_basis(body, p)
            normal = outward_normal(body, p)
            assert basis.shape == (body.dim_m, body.ambient_dim)
            assert_allclose(basis @ basis.T, np.eye(body.dim_m), atol=1e-12)
            assert_allclose(basis @ normal, np.zeros(body.dim_m), atol=1e-12)


def test_outward_normal_points_out():
    body = preset_body("ellipsoid-1.1-1-0.9")
    for p in sample_surface(body, 10, np.random.default_rng(2)):
        assert float(outward_normal(body, p) @ p) > 0


@pytest.mark.parametrize("name", ["ellipse-2-1", "ellipsoid-1.1-1-0.9", "quartic-ball", "sphere-3"])
def test_outward_normal_matches_finite_differences(name):
    body = preset_body(name)
    h = 1e-6
    for p in sample_surface(body, 8, np.random.default_rng(3)):
        steps = np.eye(body.ambient_dim) * h
        fd = np.array([(body.defining(p + e) - body.defining(p - e)) / (2 * h) for e in steps])
        assert_allclose(outward_normal(body, p), fd / np.linalg.norm(fd), atol=1e-7)


def test_projection_is_idempotent():
    for name in ("ellipsoid-1.1-1-0.9", "quartic-ball"):
        body = preset_body(name)
        rng = np.random.default_rng(4)
        for _ in range(10):
            once = surface_project(body, rng.standard_normal(body.ambient_dim) * 2.0)
            assert_allclose(surface_project(body, once), once, atol=1e-12)


def test_off_surface_point_is_rejected():
    body = sphere_body(2)
    with pytest.raises(OffSurface):
        outward_normal(body, [1.1, 0.0, 0.0])


def test_shape_operator_of_unit_sphere_is_identity():
    body = sphere_body(3)
    assert_allclose(shape_operator(body, [0.0, 1.0, 0.0, 0.0]), np.eye(4), atol=1e-15)


def test_diameters():
    assert diameter(sphere_body(2, 3.0)) == 6.0
    assert diameter(ellipsoid_body([2.0, 1.0])) == 4.0
    # x^4 + x^2 = 2 on the axes gives x = 1; the body is widest along the diagonals
    quartic = preset_body("quartic-ball")
    assert 2.0 <= diameter(quartic) <= 2.0 * np.sqrt(3.0)


def test_invalid_definitions_raise_config_error():
    with pytest.raises(ConfigError):
        ConvexBody.from_dict({"kind": "cube", "dim_m": 2})
    with pytest.raises(ConfigError):
        ConvexBody.from_dict({"kind": "ellipsoid", "dim_m": 2, "semi_axes": [1.0, 1.0]})
    with pytest.raises(ConfigError):
        ConvexBody.from_dict({"kind": "ellipsoid", "dim_m": 1, "semi_axes": [1.0, -1.0]})
    with pytest.raises(ConfigError):
        ConvexBody.from_dict({"kind": "sphere", "dim_m": 0})


def test_non_convex_implicit_body_is_rejected():
    # hyperboloid x^2 + y^2 - z^2/2 = 1
    terms = [[1.0, [2, 0, 0]], [1.0, [0, 2, 0]], [-0.5, [0, 0, 2]], [-1.0, [0, 0, 0]]]
    with pytest.raises(NonConvexBody):
        ConvexBody(dim_m=2, shape=ImplicitConvex.from_polynomial(terms), convexity_samples=200)


def test_convexity_check_accepts_presets():
    check_strict_convexity(preset_body("quartic-ball"), samples=200, seed=4)
    check_strict_convexity(preset_body("ellipsoid-1.05-1-0.95"), samples=200, seed=4)


def test_body_json_round_trip(tmp_path):
    for name, data in BODY_PRESETS.items():
        body = preset_body(name)
        path = tmp_path / f"{name}.json"
        path.write_text(json.dumps(body.to_dict(), indent=2))
        loaded = load_body(str(path))
        assert loaded.kind == body.kind
        assert loaded.dim_m == data["dim_m"]
        assert loaded.to_dict() == body.to_dict()


def test_resolve_body_accepts_preset_and_path(tmp_path):
    assert resolve_body("circle").kind == BodyKind.SPHERE
    path = tmp_path / "body.json"
    path.write_text(json.dumps({"kind": "ellipsoid", "dim_m": 1, "semi_axes": [3.0, 1.0]}))
    assert resolve_body(str(path)).diameter == 6.0
    with pytest.raises(ConfigError):
        resolve_body("no-such-body")


if __name__ == "__main__":
    print("Testing convex bodies")
    print("=" * 60)
    sys.exit(pytest.main([__file__, "-v"]))
