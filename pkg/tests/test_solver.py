#!/usr/bin/env python3
"""Test the multi-start critical point search"""

import json
import math
import os
import sys

sys.path.insert(0, os.path.join(os.path.dirname(os.path.abspath(__file__)), '..'))

import numpy as np
import pytest
from numpy.testing import assert_allclose

from billiard_errors import BadInput, ConfigError, NotCritical, OffSurface
from billiard_solver import (Certificate, CriticalOrbit, FilterVerdict, OrbitKind, RunStatus,
                             SolverSettings, boundary_filter, canonical_key, classify, deduplicate,
                             group_families, make_start, newton_refine, solve_closed, solve_periodic)
from billiard_topology import Verdict, verdict_for
from body_presets import preset_body
from cohomology import bound_periodic, best_closed_bound
from configuration import (ConfigurationKind, closed_string, cyclic, default_epsilon, gap_product,
                           min_gap, reflect_T)
from convex_body import sphere_body, surface_project
from sphere_oracle import closed_family_distance, closed_trajectory, periodic_critical_value


def _circle_point(theta):
    return [math.cos(theta), math.sin(theta)]


def _orbit(c, length=1.0, index=0, nullity=0):
    return CriticalOrbit(
        representative=c, length=length, morse_index=index, nullity=nullity,
        orbit_kind=OrbitKind.Z2 if c.is_closed_string else OrbitKind.DN, orbit_size=2,
        certificate=Certificate(0.0, 1.0, [], 0.0),
    )


@pytest.mark.parametrize("n", [2, 4, 6])
def test_circle_closed_strings(n):
    """n/2 orbits of closed strings through a point, one per turning number"""
    report = solve_closed(preset_body("circle"), [1.0, 0.0], n, SolverSettings(starts=60, seed=5))
    assert len(report.orbits) == n // 2
    assert report.all_morse
    assert all(o.morse_index == 0 for o in report.orbits)
    expected = sorted(2.0 * (n + 1) * math.sin(math.pi * k / (n + 1)) for k in range(1, n // 2 + 1))
    assert sorted(o.length for o in report.orbits) == pytest.approx(expected, abs=1e-8)
    for o in report.orbits:
        assert o.certificate.gradient_norm <= 1e-8
        assert o.certificate.reflection_residual <= 1e-6


def test_circle_eight_bounces_with_many_starts():
    report = solve_closed(preset_body("circle"), [1.0, 0.0], 8, SolverSettings(starts=1000, seed=5))
    assert len(report.orbits) == 4
    assert report.all_morse
    assert report.diverged + report.rejected_boundary <= report.starts_attempted


def test_orbit_count_never_drops_as_starts_grow():
    counts = []
    for starts in (3, 12, 48):
        report = solve_closed(preset_body("circle"), [1.0, 0.0], 6, SolverSettings(starts=starts, seed=2))
        counts.append(len(report.orbits))
    assert counts == sorted(counts)
    assert counts[-1] == 3


def test_sphere_single_bounce_is_the_diameter():
    report = solve_closed(preset_body("sphere-2"), [0.0, 0.0, 1.0], 1, SolverSettings(starts=20, seed=3))
    orbit, = report.orbits
    assert orbit.length == pytest.approx(4.0, abs=1e-9)
    assert (orbit.morse_index, orbit.nullity) == (0, 0)
    assert_allclose(orbit.representative.points[0], [0.0, 0.0, -1.0], atol=1e-8)


def test_ellipse_two_periodic_orbits():
    report = solve_periodic(preset_body("ellipse-2-1"), 2, SolverSettings(starts=40, seed=1))
    assert len(report.orbits) == 2
    major, minor = report.orbits
    assert major.length == pytest.approx(8.0, abs=1e-8)
    assert minor.length == pytest.approx(4.0, abs=1e-8)
    assert (major.morse_index, major.nullity) == (0, 0)
    assert (minor.morse_index, minor.nullity) == (1, 0)
    assert report.rejected_duplicate > 0


def test_ellipse_triangles_fold_into_one_family():
    body = preset_body("ellipse-2-1")
    report = solve_periodic(body, 3, SolverSettings(starts=60, seed=0))
    assert report.isolated_orbits == []
    assert len(report.families) == 1
    family, = report.families
    assert (family.morse_index, family.nullity) == (0, 1)
    assert len(report.orbits) == 1
    assert report.orbits[0] is family.representative
    assert report.diverged + report.rejected_boundary <= report.starts_attempted
    # no collapsed polygon survives the G_eps truncation
    rep = family.representative.representative
    assert min_gap(rep) > 0.5
    assert gap_product(rep) > report.epsilon


def test_collapsed_ellipse_triangle_is_rejected_on_the_boundary():
    body = preset_body("ellipse-2-1")
    points = [surface_project(body, [2.0 * math.cos(t), math.sin(t)]) for t in (0.0, math.pi, math.pi + 0.01)]
    collapsed = cyclic(body, points)
    assert boundary_filter(collapsed, gap_product(collapsed)) == FilterVerdict.REJECT
    # no start is drawn outside G_eps, so an unreachable epsilon leaves none
    assert make_start(body, ConfigurationKind.CYCLIC, 3, None, SolverSettings(seed=0), 1e6, 0) is None


def test_sphere_pentagons_form_two_degenerate_families():
    body = preset_body("sphere-2")
    report = solve_periodic(body, 5, SolverSettings(starts=100, seed=0))
    assert report.isolated_orbits == []
    assert sorted((f.morse_index, f.nullity) for f in report.families) == [(0, 3), (2, 3)]
    assert len(report.orbits) == 2
    lengths = sorted(f.length for f in report.families)
    expected = sorted(-periodic_critical_value(5, p) for p in (0, 1))
    assert lengths == pytest.approx(expected, abs=1e-8)
    # two families against a category bound of 3: no conclusion
    assert verdict_for(bound_periodic(2, 5), report)[0] == Verdict.INFO


@pytest.mark.parametrize("n", [3, 5])
def test_ellipsoid_periodic_families_meet_category_bound(n):
    body = preset_body("ellipsoid-1.1-1-0.9")
    report = solve_periodic(body, n, SolverSettings(starts=300, seed=0))
    bound = bound_periodic(2, n)
    assert report.distinct_critical_orbits >= bound.category_bound
    assert verdict_for(bound, report)[0] == Verdict.PASS


def test_classify_square_on_circle():
    body = preset_body("circle")
    square = cyclic(body, [_circle_point(k * math.pi / 2) for k in range(4)])
    assert classify(square) == (0, 1, False)
    uneven = cyclic(body, [_circle_point(0.0), _circle_point(1.0), _circle_point(3.0)])
    with pytest.raises(NotCritical):
        classify(uneven)


def test_boundary_filter():
    body = preset_body("circle")
    c = cyclic(body, [_circle_point(0.0), _circle_point(0.01), _circle_point(math.pi)])
    assert boundary_filter(c, gap_product(c)) == FilterVerdict.REJECT
    assert boundary_filter(c, 1e-12) == FilterVerdict.KEEP
    triangle = cyclic(body, [_circle_point(2 * math.pi * j / 3) for j in range(3)])
    assert boundary_filter(triangle, gap_product(triangle)) == FilterVerdict.KEEP


def test_reversed_closed_strings_merge():
    body = preset_body("circle")
    c = closed_string(body, [1.0, 0.0], [_circle_point(1.0), _circle_point(2.5)])
    other = closed_string(body, [1.0, 0.0], [_circle_point(2.0), _circle_point(4.0)])
    assert canonical_key(c, 1e-7) == canonical_key(reflect_T(c), 1e-7)
    unique, dropped = deduplicate([_orbit(c), _orbit(reflect_T(c)), _orbit(other)], 1e-7, 1e-6)
    assert len(unique) == 2
    assert dropped == 1


def test_degenerate_orbits_group_into_families():
    orbits = [_orbit(closed_trajectory([1.0, 0.0, 0.0], a, 1, 3), length=-1.0, index=0, nullity=1)
              for a in ([0.0, 1.0, 0.0], [0.0, 0.0, 1.0])]
    orbits.append(_orbit(closed_trajectory([1.0, 0.0, 0.0], [0.0, 1.0, 0.0], 2, 3), length=-2.0))
    families = group_families(orbits, 1e-9)
    assert len(families) == 1
    assert families[0].members == 2


def test_newton_recovers_sphere_trajectory():
    """A perturbed closed-form trajectory refines back onto its critical manifold"""
    body = sphere_body(2)
    exact = closed_trajectory([1.0, 0.0, 0.0], [0.0, 1.0, 0.0], 1, 3, body=body)
    rng = np.random.default_rng(17)
    noisy = [surface_project(body, p + 1e-3 * rng.standard_normal(3)) for p in exact.points]
    start = closed_string(body, exact.anchor, noisy)
    assert closed_family_distance(start, 1) > 1e-5
    result = newton_refine(start, SolverSettings(grad_tol=1e-11))
    assert result.status == RunStatus.CONVERGED
    assert closed_family_distance(result.config, 1) <= 1e-8
    assert result.history[-1] <= 1e-11


def test_make_start_is_deterministic():
    body = preset_body("ellipsoid-1.1-1-0.9")
    settings = SolverSettings(seed=9)
    eps = default_epsilon(body, ConfigurationKind.CYCLIC, 4)
    first = make_start(body, ConfigurationKind.CYCLIC, 4, None, settings, eps, 3)
    second = make_start(body, ConfigurationKind.CYCLIC, 4, None, settings, eps, 3)
    assert_allclose(first.points, second.points, rtol=0, atol=0)


def test_settings_round_trip_and_unknown_keys():
    settings = SolverSettings(starts=12, seed=4, epsilon=1e-9, workers=2)
    assert SolverSettings.from_dict(settings.to_dict()) == settings
    assert SolverSettings.from_dict({"starts": 3}).grad_tol == SolverSettings().grad_tol
    assert SolverSettings().resolved_starts(3, 2) == 1200
    with pytest.raises(ConfigError):
        SolverSettings.from_dict({"start": 3})


def test_invalid_solve_requests():
    circle = preset_body("circle")
    with pytest.raises(BadInput):
        solve_closed(circle, [1.0, 0.0], 0)
    with pytest.raises(BadInput):
        solve_closed(circle, [1.0, 0.0, 0.0], 2)
    with pytest.raises(OffSurface):
        solve_closed(circle, [2.0, 0.0], 2)
    with pytest.raises(BadInput):
        solve_periodic(circle, 1)


def test_report_is_json_serialisable():
    report = solve_closed(preset_body("circle"), [1.0, 0.0], 2, SolverSettings(starts=10, seed=2))
    data = json.loads(json.dumps(report.to_dict()))
    assert data['kind'] == 'closed_string'
    assert data['starts_attempted'] == 10
    assert len(data['orbits']) == len(report.orbits)
    assert report.summary_rows()[0]['orbit_id'] == 0


@pytest.mark.slow
def test_ellipsoid_closed_strings_meet_bound():
    body = preset_body("ellipsoid-1.1-1-0.9")
    anchor = surface_project(body, [1.0, 0.3, 0.2])
    report = solve_closed(body, anchor, 2, SolverSettings(starts=600, seed=0))
    assert len(report.orbits) >= best_closed_bound(2, 2, generic=False).value


if __name__ == "__main__":
    print("Testing the billiard solver")
    print("=" * 60)
    sys.exit(pytest.main([__file__, "-v"]))
