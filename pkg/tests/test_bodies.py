"""Tests for convex bodies, samplers, and the Poisson point process."""
import math

import numpy as np
import pytest

from randpoly.bodies import (
    Ball,
    Cube,
    Ellipsoid,
    PointCloud,
    ball_cap_volume,
    ball_floating_body_radius,
    body_from_spec,
    sample_poisson_process,
    unit_ball_volume,
)
from randpoly.rng import stream


class TestMembership:
    def test_ball_center(self):
        assert Ball(2).contains(np.array([0.0, 0.0]))

    def test_ball_boundary_point_is_inside(self):
        assert Ball(2).contains(np.array([1.0, 0.0]))

    def test_ball_outside(self):
        assert not Ball(2).contains(np.array([1.1, 0.0]))

    def test_dimension_mismatch(self):
        with pytest.raises(ValueError):
            Ball(2).contains(np.array([1.0, 0.0, 0.0]))

    def test_ellipsoid(self):
        e = Ellipsoid(2, semi_axes=[2.0, 0.5])
        assert e.contains(np.array([1.9, 0.0]))
        assert not e.contains(np.array([0.0, 0.6]))

    def test_cube(self):
        c = Cube(3, side=2.0)
        assert c.contains(np.array([1.0, -1.0, 0.3]))
        assert not c.contains(np.array([1.01, 0.0, 0.0]))


class TestVolumesAndBoxes:
    def test_ball_volume(self):
        assert Ball(2).volume == pytest.approx(math.pi)
        assert Ball(3, radius=2.0).volume == pytest.approx(4 / 3 * math.pi * 8)

    def test_ellipsoid_volume(self):
        e = Ellipsoid(3, semi_axes=[1.0, 2.0, 3.0])
        assert e.volume == pytest.approx(4 / 3 * math.pi * 6)

    def test_cube_volume(self):
        assert Cube(4, side=0.5).volume == pytest.approx(0.5**4)

    def test_bbox_contains_body(self):
        for body in (Ball(3), Ellipsoid(2, semi_axes=[3.0, 0.2]), Cube(2)):
            lo, hi = body.bbox()
            pts = body.sample_uniform(stream(0), 500)
            assert np.all(pts >= lo - 1e-12) and np.all(pts <= hi + 1e-12)

    def test_kappa(self):
        assert unit_ball_volume(0) == pytest.approx(1.0)
        assert unit_ball_volume(1) == pytest.approx(2.0)
        assert unit_ball_volume(2) == pytest.approx(math.pi)
        assert unit_ball_volume(3) == pytest.approx(4 * math.pi / 3)


class TestUniformSampling:
    @pytest.mark.parametrize("body", [
        Ball(2), Ball(3, radius=2.0, center=[1.0, 0.0, -1.0]),
        Ellipsoid(2, semi_axes=[2.0, 0.5]), Cube(3),
    ])
    def test_support(self, body):
        pts = body.sample_uniform(stream(1), 2000)
        assert bool(body.contains_many(pts).all())

    def test_symmetry_of_mean(self):
        n = 100_000
        pts = Ball(2).sample_uniform(stream(2), n)
        # per-coordinate sd of a uniform disk point is 1/2
        se = 0.5 / math.sqrt(n)
        assert np.all(np.abs(pts.mean(axis=0)) < 3 * se)

    def test_radial_distribution(self):
        # P(|X| <= 2^(-1/2)) is the area ratio r^2 = 1/2
        n = 100_000
        pts = Ball(2).sample_uniform(stream(3), n)
        frac = float((np.linalg.norm(pts, axis=1) <= 2 ** -0.5).mean())
        se = math.sqrt(0.25 / n)
        assert abs(frac - 0.5) <= 3 * se

    def test_single_draw_shape(self):
        x = Ball(3).sample_uniform(stream(4))
        assert x.shape == (3,)

    def test_rejection_fallback(self):
        # a body that only implements membership exercises the generic path
        class Half(Ball):
            def sample_uniform(self, rng, n=None):
                return super(Ball, self).sample_uniform(rng, n)

            def _contains_many(self, pts):
                return super()._contains_many(pts) & (pts[:, 0] >= 0)

        h = Half(2)
        pts = h.sample_uniform(stream(5), 200)
        assert np.all(pts[:, 0] >= 0)
        assert np.all(np.linalg.norm(pts, axis=1) <= 1 + 1e-12)


class TestPoissonProcess:
    def test_mean_count(self):
        body = Ball(2)
        t = 100.0
        rng = stream(6)
        counts = [len(sample_poisson_process(body, t, rng))
                  for _ in range(10_000)]
        mean = np.mean(counts)
        target = t * body.volume
        se = math.sqrt(target / len(counts))
        assert abs(mean - target) <= 4 * se

    def test_void_probability(self):
        body = Ball(2)
        t = 0.01
        rng = stream(7)
        n = 10_000
        empty = sum(len(sample_poisson_process(body, t, rng)) == 0
                    for _ in range(n)) / n
        target = math.exp(-t * body.volume)
        se = math.sqrt(target * (1 - target) / n)
        assert abs(empty - target) <= 3 * se

    def test_determinism(self):
        body = Ellipsoid(3, semi_axes=[1.0, 2.0, 0.5])
        a = sample_poisson_process(body, 50.0, stream(8))
        b = sample_poisson_process(body, 50.0, stream(8))
        assert np.array_equal(a.points, b.points)

    def test_points_inside(self):
        body = Ball(3)
        cloud = sample_poisson_process(body, 200.0, stream(9))
        assert bool(body.contains_many(cloud.points).all())

    def test_nonpositive_intensity(self):
        with pytest.raises(ValueError):
            sample_poisson_process(Ball(2), 0.0, stream(0))

    def test_empty_cloud(self):
        cloud = PointCloud(2, np.empty((0, 2)))
        assert len(cloud) == 0


class TestFloatingBodyRadius:
    def test_halfspace_through_center(self):
        assert ball_floating_body_radius(2, 1.0, math.pi / 2) == pytest.approx(
            0.0, abs=1e-10
        )

    def test_monotone_decreasing_in_eps(self):
        eps_grid = np.linspace(1e-4, math.pi / 2, 10)
        rhos = [ball_floating_body_radius(2, 1.0, e) for e in eps_grid]
        assert all(a > b for a, b in zip(rhos, rhos[1:]))

    def test_small_eps_approaches_radius(self):
        assert ball_floating_body_radius(3, 2.0, 1e-9) > 2.0 - 1e-2

    def test_matches_2d_cap_area_root(self):
        # closed-form 2-d cap area A(rho) = arccos(rho) - rho sqrt(1-rho^2)
        eps = 0.1
        rho = ball_floating_body_radius(2, 1.0, eps)
        area = math.acos(rho) - rho * math.sqrt(1 - rho * rho)
        assert area == pytest.approx(eps, rel=1e-10)

    def test_out_of_range(self):
        with pytest.raises(ValueError):
            ball_floating_body_radius(2, 1.0, 0.0)
        with pytest.raises(ValueError):
            ball_floating_body_radius(2, 1.0, math.pi / 2 + 1e-6)

    def test_cap_volume_full_half(self):
        assert ball_cap_volume(3, 1.0, 0.0) == pytest.approx(
            unit_ball_volume(3) / 2
        )
        assert ball_cap_volume(3, 1.0, 1.0) == pytest.approx(0.0, abs=1e-12)


class TestBodySpecs:
    def test_round_trip(self):
        for body in (Ball(2), Ellipsoid(3, semi_axes=[1, 2, 3]), Cube(2)):
            again = body_from_spec(body.spec())
            assert again.kind == body.kind
            assert again.volume == pytest.approx(body.volume)

    def test_from_config_record(self):
        b = body_from_spec({"kind": "ball", "dim": 2, "radius": 1.0})
        assert isinstance(b, Ball) and b.dim == 2

    def test_bad_kind(self):
        with pytest.raises(ValueError):
            body_from_spec({"kind": "torus", "dim": 3})

    def test_smoothness_flags(self):
        assert Ball(2).is_smooth and Ellipsoid(2, semi_axes=[1, 2]).is_smooth
        assert not Cube(2).is_smooth
