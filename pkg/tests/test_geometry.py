import math

import numpy as np
import pytest

from smallpoly.geometry import (
    AngleVector,
    SkeletonError,
    area_dissection,
    area_shoelace,
    chain_coordinates,
    max_pairwise_distance,
    polygon_from_vertices,
    regular_area,
    shoelace,
    upper_bound,
    validate,
    vertices_from_angles,
)

PENTAGON_STAR = AngleVector(6, (math.pi / 10, math.pi / 5, math.pi / 5))
HEXAGON_BEST = AngleVector(6, (0.3509301888703616, 0.653341777949459, 0.566524359975076))


class TestBounds:
    def test_upper_bound_values(self):
        assert upper_bound(6) == pytest.approx(0.6877007594, abs=1e-9)
        assert upper_bound(12) == pytest.approx(0.7621336536, abs=1e-9)
        assert upper_bound(120) == pytest.approx(0.7851731162, abs=1e-9)

    def test_regular_area_values(self):
        assert regular_area(8) == pytest.approx(0.7071067812, abs=1e-9)
        assert regular_area(6) == pytest.approx(0.6495190528, abs=1e-9)
        assert regular_area(4) == 0.5

    @pytest.mark.parametrize("bad", [5, 7, 4, -2, 0])
    def test_upper_bound_domain(self, bad):
        with pytest.raises(ValueError):
            upper_bound(bad)

    def test_regular_area_domain(self):
        with pytest.raises(ValueError):
            regular_area(7)

    def test_gap_matches_cubic_scaling(self):
        # upper_bound - regular_area approaches pi^3 / 16 n^2
        for n in (120, 400):
            ratio = (upper_bound(n) - regular_area(n)) / (math.pi**3 / (16 * n * n))
            assert abs(ratio - 1.0) < 0.05


class TestAngleVector:
    def test_validation(self):
        with pytest.raises(ValueError):
            AngleVector(7, (0.1,) * 3)
        with pytest.raises(ValueError):
            AngleVector(6, (0.1, 0.2))
        with pytest.raises(ValueError):
            AngleVector(6, (1.0, 0.3, 0.27))  # theta_0 beyond pi/6
        with pytest.raises(ValueError):
            AngleVector(6, (0.1, 1.2, 0.27))  # theta_1 beyond pi/3

    def test_feasible_residuals(self):
        assert abs(PENTAGON_STAR.angle_sum_residual) < 1e-15
        assert abs(PENTAGON_STAR.closure_residual) < 1e-15


class TestVertices:
    def test_first_vertex(self):
        p = vertices_from_angles(PENTAGON_STAR)
        t0 = PENTAGON_STAR.theta[0]
        assert p.vertices[1] == pytest.approx((math.sin(t0), math.cos(t0)), abs=1e-15)

    def test_pentagon_star_midpoint(self):
        x, _ = chain_coordinates(PENTAGON_STAR.theta)
        assert x[2] == pytest.approx(-0.5, abs=1e-15)
        assert x[2] == pytest.approx(math.sin(math.pi / 10) - math.sin(3 * math.pi / 10), abs=1e-15)

    def test_hexagon_unit_skeleton_and_diameter(self):
        p = vertices_from_angles(HEXAGON_BEST)
        verts = np.asarray(p.vertices)
        for i, j in p.skeleton_edges:
            assert np.hypot(*(verts[i] - verts[j])) == pytest.approx(1.0, abs=1e-12)
        # brute force over all pairs as the independent diameter oracle
        dmax = max(
            math.dist(p.vertices[i], p.vertices[j])
            for i in range(p.n)
            for j in range(i + 1, p.n)
        )
        assert dmax == pytest.approx(1.0, abs=1e-12)

    def test_anchor_vertices(self):
        p = vertices_from_angles(HEXAGON_BEST)
        assert p.vertices[0] == (0.0, 0.0)
        assert p.vertices[p.n - 1] == (0.0, 1.0)

    def test_chain_midpoint_pair(self, feasible_sampler):
        # the two middle chain vertices sit at x = +-1/2 (order set by parity)
        from smallpoly.geometry import half_sign

        for _ in range(20):
            _, angles = feasible_sampler()
            m = angles.n // 2
            p = vertices_from_angles(angles)
            assert p.vertices[m - 1][0] == pytest.approx(half_sign(angles.n), abs=1e-9)
            assert p.vertices[m][0] == pytest.approx(-half_sign(angles.n), abs=1e-9)

    def test_closure_violation_raises(self):
        crooked = AngleVector(6, (0.30, 0.70, math.pi / 2 - 1.0))
        with pytest.raises(SkeletonError):
            vertices_from_angles(crooked)

    def test_angle_sum_violation_raises(self):
        with pytest.raises(ValueError):
            vertices_from_angles(AngleVector(6, (0.3, 0.3, 0.3)))


class TestAreas:
    def test_hexagon_areas(self):
        assert area_dissection(HEXAGON_BEST) == pytest.approx(0.6749814429, abs=1e-9)
        assert area_dissection(PENTAGON_STAR) == pytest.approx(0.6722882584, abs=1e-9)

    def test_shoelace_square(self):
        assert shoelace([(0, 0), (1, 0), (1, 1), (0, 1)]) == 1.0

    def test_shoelace_degenerate(self):
        assert shoelace([(0, 0), (1, 1), (2, 2)]) == 0.0

    def test_shoelace_hexagon(self):
        p = vertices_from_angles(HEXAGON_BEST)
        assert area_shoelace(p) == pytest.approx(0.6749814429, abs=1e-9)

    def test_dissection_matches_shoelace(self, feasible_sampler):
        for _ in range(200):
            _, angles = feasible_sampler()
            poly = vertices_from_angles(angles)
            assert abs(area_dissection(angles) - area_shoelace(poly)) <= 1e-12

    def test_triangle_terms_sine_difference_form(self, feasible_sampler):
        # each cross-product triangle term equals its telescoped sine sum;
        # the cross-product form is the canonical evaluation, this identity
        # is exercised as a property only
        for _ in range(30):
            _, angles = feasible_sampler()
            th = angles.theta
            m = angles.n // 2
            x, y = chain_coordinates(th)
            for k in range(2, m):
                cross = x[k + 1] * y[k - 1] - y[k + 1] * x[k - 1]
                sines = 0.0
                for i in range(0, k - 1):
                    s1 = sum(th[k - j] for j in range(0, i + 2))
                    s2 = sum(th[k - j] for j in range(1, i + 2))
                    sines += (-1) ** i * (math.sin(s1) - math.sin(s2))
                assert cross == pytest.approx(sines, abs=1e-13)


class TestValidate:
    def test_two_point_diameter(self):
        assert max_pairwise_distance([(0.0, 0.0), (0.0, 1.0)]) == 1.0

    def test_hexagon_report(self):
        report = validate(vertices_from_angles(HEXAGON_BEST))
        assert report.is_small and report.is_convex and report.is_symmetric
        assert report.diameter == pytest.approx(1.0, abs=1e-12)
        assert report.gap >= 0.0

    def test_perturbed_vertex_not_small(self):
        p = vertices_from_angles(HEXAGON_BEST)
        verts = [list(v) for v in p.vertices]
        verts[2][0] -= 0.1  # push one flank vertex outward
        report = validate(polygon_from_vertices(p.n, verts))
        assert not report.is_small

    def test_mirror_symmetry_by_construction(self, feasible_sampler):
        for _ in range(50):
            _, angles = feasible_sampler()
            report = validate(vertices_from_angles(angles))
            assert report.is_symmetric
            assert report.is_convex
            assert report.is_small
