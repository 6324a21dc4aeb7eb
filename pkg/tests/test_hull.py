"""Tests for hull construction, face lattices, and intrinsic volumes."""
import itertools
import math

import numpy as np
import pytest
from scipy import stats as spstats

from randpoly.bodies import Ball
from randpoly.hull import (
    Subspace,
    brute_force_facets,
    convex_hull,
    exact_intrinsic_volumes,
    f_vector,
    hull_facets_as_source_sets,
    intrinsic_volume_mc,
    polytope_to_json,
    project,
    sample_haar_subspace,
    surface_measure,
    volume,
)
from randpoly.rng import stream


def unit_cube_vertices(d):
    return np.array(list(itertools.product([0.0, 1.0], repeat=d)))


def simplex_vertices(d):
    return np.vstack([np.zeros(d), np.eye(d)])


def random_ball_points(n, d, seed):
    return Ball(d).sample_uniform(stream(seed), n)


class TestConstruction:
    def test_tetrahedron(self):
        p = convex_hull(simplex_vertices(3))
        assert f_vector(p).counts == (4, 6, 4)
        assert p.is_full_dimensional()

    def test_square_with_interior_point(self):
        pts = np.vstack([unit_cube_vertices(2), [[0.5, 0.5]]])
        p = convex_hull(pts)
        assert f_vector(p)[0] == 4
        assert 4 not in p.source_indices  # the center is not a vertex

    def test_empty(self):
        p = convex_hull(np.empty((0, 3)))
        assert p.is_empty()
        assert f_vector(p).counts == (0, 0, 0)

    def test_single_point(self):
        p = convex_hull(np.array([[1.0, 2.0]]))
        assert p.degeneracy == "point"
        assert f_vector(p).counts == (1, 0)

    def test_coincident_points(self):
        p = convex_hull(np.array([[1.0, 2.0], [1.0, 2.0]]))
        assert p.degeneracy == "point"

    def test_segment_in_3d(self):
        pts = np.array([[0.0, 0, 0], [2.0, 2, 2], [1.0, 1, 1]])
        p = convex_hull(pts)
        assert p.degeneracy == "lower_dimensional" and p.affine_dim == 1
        assert f_vector(p).counts == (2, 0, 0)
        assert volume(p) == 0.0

    def test_planar_polygon_in_3d(self):
        sq = unit_cube_vertices(2)
        pts = np.column_stack([sq, np.ones(4)])
        p = convex_hull(pts)
        assert p.affine_dim == 2
        assert f_vector(p).counts == (4, 4, 0)
        v = exact_intrinsic_volumes(p)
        assert v == pytest.approx([1.0, 2.0, 1.0, 0.0])

    def test_cube_lattice(self):
        p = convex_hull(unit_cube_vertices(3))
        assert f_vector(p).counts == (8, 12, 6)
        assert not p.is_simplicial
        assert volume(p) == pytest.approx(1.0, abs=1e-12)
        assert surface_measure(p) == pytest.approx(6.0, abs=1e-12)

    def test_vertices_satisfy_facets(self):
        p = convex_hull(random_ball_points(200, 3, seed=10))
        excess = p.local_vertices @ p.facet_normals.T - p.facet_offsets
        assert excess.max() <= 1e-9 * p.diameter

    def test_every_vertex_on_enough_facets(self):
        p = convex_hull(random_ball_points(60, 3, seed=11))
        counts = {v: 0 for v in range(p.n_vertices)}
        for fs in p.facet_vertex_sets:
            for v in fs:
                counts[v] += 1
        assert min(counts.values()) >= 3

    def test_ridges_in_exactly_two_facets(self):
        p = convex_hull(random_ball_points(60, 3, seed=12))
        for e in p.faces[1]:
            n = sum(1 for fs in p.facet_vertex_sets if set(e) <= set(fs))
            assert n == 2


class TestFVector:
    @pytest.mark.parametrize("d", [2, 3, 4])
    def test_simplex_counts(self, d):
        p = convex_hull(simplex_vertices(d))
        expected = tuple(math.comb(d + 1, i + 1) for i in range(d))
        assert f_vector(p).counts == expected

    def test_euler_poincare_random(self):
        for seed in range(20):
            d = 2 + seed % 3
            p = convex_hull(random_ball_points(30, d, seed=100 + seed))
            assert f_vector(p).euler_characteristic() == 1 - (-1) ** d

    def test_simplicial_3d_identities(self):
        for seed in range(10):
            p = convex_hull(random_ball_points(50, 3, seed=200 + seed))
            fv = f_vector(p)
            assert 2 * fv[1] == 3 * fv[2]
            assert fv[0] - fv[1] + fv[2] == 2


class TestVolume:
    def test_unit_cube(self):
        assert volume(convex_hull(unit_cube_vertices(3))) == pytest.approx(
            1.0, abs=1e-12
        )

    @pytest.mark.parametrize("d", [2, 3, 4])
    def test_simplex_volume(self, d):
        p = convex_hull(simplex_vertices(d))
        assert volume(p) == pytest.approx(1.0 / math.factorial(d))

    def test_monotone_under_inclusion(self):
        pts = random_ball_points(40, 3, seed=13)
        sub = pts[:20]
        assert volume(convex_hull(sub)) <= volume(convex_hull(pts)) + 1e-12

    def test_intrinsic_volumes_monotone_under_inclusion(self):
        pts = random_ball_points(40, 3, seed=14)
        small, big = convex_hull(pts[:20]), convex_hull(pts)
        for j in (1, 2):
            est_s, se_s = intrinsic_volume_mc(small, j, 3000, stream(15))
            est_b, se_b = intrinsic_volume_mc(big, j, 3000, stream(16))
            assert est_s <= est_b + 4 * math.hypot(se_s, se_b)


class TestSurface:
    def test_square_perimeter(self):
        p = convex_hull(unit_cube_vertices(2))
        assert surface_measure(p) == pytest.approx(4.0)
        assert exact_intrinsic_volumes(p)[1] == pytest.approx(2.0)

    def test_tetrahedron_by_hand(self):
        # origin + unit basis: three right triangles and one equilateral
        p = convex_hull(simplex_vertices(3))
        assert surface_measure(p) == pytest.approx(1.5 + math.sqrt(3) / 2)

    def test_degenerate_raises(self):
        p = convex_hull(np.array([[0.0, 0, 0], [1.0, 1, 1]]))
        with pytest.raises(ValueError):
            surface_measure(p)


class TestHullIdempotence:
    @pytest.mark.parametrize("seed", range(5))
    def test_lattice_identical(self, seed):
        p = convex_hull(random_ball_points(40, 3, seed=300 + seed))
        q = convex_hull(p.vertices)

        def canonical(poly):
            vs = poly.vertices
            return {
                i: {frozenset(map(tuple, vs[list(f)])) for f in fs}
                for i, fs in poly.faces.items()
            }

        assert canonical(p) == canonical(q)


class TestBruteForceOracle:
    @pytest.mark.parametrize("d", [2, 3, 4])
    def test_facet_sets_match(self, d):
        rng = stream(400 + d)
        for _ in range(25):
            n = int(rng.integers(d + 1, 13))
            pts = Ball(d).sample_uniform(rng, n)
            poly = convex_hull(pts)
            assert hull_facets_as_source_sets(poly) == brute_force_facets(pts)


class TestHaarSubspaces:
    def test_orthonormal(self):
        sub = sample_haar_subspace(5, 3, stream(20))
        gram = sub.basis.T @ sub.basis
        assert np.allclose(gram, np.eye(3), atol=1e-12)

    def test_bad_subspace_rejected(self):
        with pytest.raises(ValueError):
            Subspace(3, 2, np.ones((3, 2)))

    def test_angle_uniform_on_grassmannian_2_1(self):
        # lines in the plane have uniform angle in [0, pi)
        rng = stream(21)
        angles = np.empty(10_000)
        for i in range(len(angles)):
            b = sample_haar_subspace(2, 1, rng).basis[:, 0]
            angles[i] = math.atan2(b[1], b[0]) % math.pi
        stat = spstats.kstest(angles / math.pi, "uniform")
        assert stat.pvalue > 0.01

    def test_rotation_invariance_of_projection_lengths(self):
        # statistics of projected lengths of a segment match under rotation
        theta = 0.7
        rot = np.array([[math.cos(theta), -math.sin(theta)],
                        [math.sin(theta), math.cos(theta)]])
        seg = np.array([[0.0, 0.0], [1.0, 0.0]])
        seg_rot = seg @ rot.T
        rng = stream(22)

        def lengths(points, n):
            out = np.empty(n)
            poly = convex_hull(points)
            for i in range(n):
                sub = sample_haar_subspace(2, 1, rng)
                out[i] = volume(convex_hull(project(poly, sub)))
            return out

        a = lengths(seg, 10_000)
        b = lengths(seg_rot, 10_000)
        assert spstats.ks_2samp(a, b).pvalue > 0.01


class TestProjection:
    def test_cube_onto_coordinate_plane(self):
        p = convex_hull(unit_cube_vertices(3))
        sub = Subspace(3, 2, np.eye(3)[:, :2])
        shadow = convex_hull(project(p, sub))
        assert volume(shadow) == pytest.approx(1.0)

    def test_segment_at_angle(self):
        seg = convex_hull(np.array([[0.0, 0.0], [2.0, 0.0]]))
        theta = 0.3
        basis = np.array([[math.cos(theta)], [math.sin(theta)]])
        shadow = convex_hull(project(seg, Subspace(2, 1, basis)))
        assert volume(shadow) == pytest.approx(2.0 * math.cos(theta))

    def test_full_dimensional_projection_preserves_volume(self):
        p = convex_hull(random_ball_points(30, 3, seed=23))
        sub = sample_haar_subspace(3, 3, stream(24))
        assert volume(convex_hull(project(p, sub))) == pytest.approx(
            volume(p), rel=1e-10
        )

    def test_dimension_mismatch(self):
        p = convex_hull(random_ball_points(10, 2, seed=25))
        with pytest.raises(ValueError):
            project(p, sample_haar_subspace(3, 2, stream(26)))


class TestIntrinsicVolumeMC:
    def test_cube_all_orders(self):
        p = convex_hull(unit_cube_vertices(3))
        rng = stream(27)
        for j in (1, 2):
            est, se = intrinsic_volume_mc(p, j, 5000, rng)
            assert abs(est - 3.0) <= 4 * se
            assert se > 0

    def test_segment(self):
        seg = convex_hull(np.array([[0.0, 0.0], [0.0, 2.5]]))
        est, se = intrinsic_volume_mc(seg, 1, 3000, stream(28))
        assert abs(est - 2.5) <= 4 * se
        est2, se2 = intrinsic_volume_mc(seg, 2, 100, stream(29))
        assert est2 == 0.0 and se2 == 0.0

    def test_top_order_is_exact(self):
        p = convex_hull(random_ball_points(25, 3, seed=30))
        est, se = intrinsic_volume_mc(p, 3, 50, stream(31))
        assert est == pytest.approx(volume(p), rel=1e-9)
        assert se <= 1e-12 * max(1.0, est)

    def test_agreement_with_exact(self):
        rng = stream(32)
        for seed in range(10):
            p = convex_hull(random_ball_points(30, 3, seed=500 + seed))
            exact = exact_intrinsic_volumes(p)
            for j in (1, 2):
                est, se = intrinsic_volume_mc(p, j, 4000, rng)
                assert abs(est - exact[j]) <= 4 * max(se, 1e-12)

    def test_validation(self):
        p = convex_hull(random_ball_points(10, 2, seed=33))
        with pytest.raises(ValueError):
            intrinsic_volume_mc(p, 0, 100, stream(0))
        with pytest.raises(ValueError):
            intrinsic_volume_mc(p, 1, 1, stream(0))


class TestExactIntrinsicVolumes:
    def test_empty_has_zero_euler(self):
        assert exact_intrinsic_volumes(convex_hull(np.empty((0, 2)))) == [
            0.0, 0.0, 0.0
        ]

    def test_point(self):
        p = convex_hull(np.array([[0.3, 0.4, 0.5]]))
        assert exact_intrinsic_volumes(p) == [1.0, 0.0, 0.0, 0.0]

    def test_cube_binomials(self):
        p = convex_hull(unit_cube_vertices(3))
        assert exact_intrinsic_volumes(p) == pytest.approx([1.0, 3.0, 3.0, 1.0])

    def test_ball_hull_close_to_ball_values(self):
        # the unit disk has V_1 = pi (half perimeter) and V_2 = pi
        pts = random_ball_points(4000, 2, seed=34)
        v = exact_intrinsic_volumes(convex_hull(pts))
        assert v[1] < math.pi and v[1] == pytest.approx(math.pi, rel=2e-2)
        assert v[2] < math.pi and v[2] == pytest.approx(math.pi, rel=2e-2)

    def test_unsupported_dimension(self):
        with pytest.raises(ValueError):
            exact_intrinsic_volumes(convex_hull(simplex_vertices(4)))


class TestMotionInvariance:
    def test_rigid_motion_preserves_volumes_and_fvector(self):
        rng = stream(35)
        pts = random_ball_points(50, 3, seed=36)
        p = convex_hull(pts)
        q_mat, _ = np.linalg.qr(rng.standard_normal((3, 3)))
        moved = pts @ q_mat.T + np.array([3.0, -1.0, 2.0])
        pm = convex_hull(moved)
        assert f_vector(pm).counts == f_vector(p).counts
        assert exact_intrinsic_volumes(pm) == pytest.approx(
            exact_intrinsic_volumes(p), rel=1e-9
        )


class TestDebugDump:
    def test_json_round_trippable(self):
        import json

        p = convex_hull(random_ball_points(12, 3, seed=37))
        blob = json.dumps(polytope_to_json(p))
        back = json.loads(blob)
        assert back["degeneracy"] == "full_dimensional"
        assert len(back["vertices"]) == p.n_vertices
        assert len(back["normals"]) == len(p.facet_vertex_sets)
