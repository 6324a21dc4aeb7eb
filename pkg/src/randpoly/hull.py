"""Convex hulls with full face lattices, projections, and intrinsic volumes.

Hull construction handles every degeneracy totally: an empty input gives an
empty polytope, a single point a point polytope, and inputs whose affine
hull has dimension k < d are processed inside an orthonormal chart of that
affine hull, so one code path serves all cases.  Facet enumeration is
delegated to qhull; the face lattice is derived from the facets (downward
closure), with coplanar facet merging so non-simplicial test bodies such
as cubes get their true combinatorics.

Intrinsic volumes are available exactly in ambient dimension <= 3 and by
Monte Carlo averaging of projection volumes over Haar-random subspaces in
any dimension.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np
from scipy.spatial import ConvexHull as _QhullHull

from .bodies import PointCloud, unit_ball_volume

__all__ = [
    "Polytope",
    "FVector",
    "Subspace",
    "convex_hull",
    "f_vector",
    "volume",
    "surface_measure",
    "sample_haar_subspace",
    "project",
    "intrinsic_volume_mc",
    "exact_intrinsic_volumes",
    "brute_force_facets",
    "polytope_to_json",
]

# Facet-membership and affine-rank decisions are made at this tolerance,
# relative to the diameter of the input point set.
REL_TOL = 1e-9


@dataclass(frozen=True)
class FVector:
    """Face counts (f_0, ..., f_{d-1}) of a polytope in ambient dimension d."""

    counts: tuple[int, ...]

    def __getitem__(self, i: int) -> int:
        return self.counts[i]

    def __len__(self) -> int:
        return len(self.counts)

    def euler_characteristic(self) -> int:
        return sum((-1) ** i * c for i, c in enumerate(self.counts))


@dataclass(frozen=True)
class Subspace:
    """A j-dimensional linear subspace of R^d given by an orthonormal basis."""

    ambient_dim: int
    dim: int
    basis: np.ndarray  # (d, j), columns orthonormal

    def __post_init__(self):
        b = np.asarray(self.basis, dtype=float)
        if b.shape != (self.ambient_dim, self.dim):
            raise ValueError("basis must be (ambient_dim, dim)")
        gram = b.T @ b
        if not np.allclose(gram, np.eye(self.dim), atol=1e-12):
            raise ValueError("basis is not orthonormal to 1e-12")
        object.__setattr__(self, "basis", b)


class Polytope:
    """Vertex list plus full face lattice of a convex polytope.

    ``vertices`` holds the extreme points in ambient coordinates.  ``faces``
    maps each face dimension i to the set of faces, a face being the sorted
    tuple of its vertex indices.  For inputs of affine dimension k < d the
    lattice is that of the k-dimensional polytope inside its affine hull
    (``origin`` + ``basis`` give the chart), and ``degeneracy`` records the
    situation; facet hyperplane data then lives in chart coordinates.
    """

    __slots__ = (
        "dim_ambient",
        "affine_dim",
        "degeneracy",
        "vertices",
        "source_indices",
        "origin",
        "basis",
        "local_vertices",
        "faces",
        "facet_vertex_sets",
        "facet_normals",
        "facet_offsets",
        "facet_simplices",
        "edge_facets",
        "is_simplicial",
        "diameter",
    )

    def __init__(self, dim_ambient: int):
        self.dim_ambient = dim_ambient
        self.affine_dim = -1
        self.degeneracy = "empty"
        self.vertices = np.empty((0, dim_ambient))
        self.source_indices = np.empty(0, dtype=int)
        self.origin = np.zeros(dim_ambient)
        self.basis = np.empty((dim_ambient, 0))
        self.local_vertices = np.empty((0, 0))
        self.faces: dict[int, frozenset] = {}
        self.facet_vertex_sets: list[tuple[int, ...]] = []
        self.facet_normals = np.empty((0, 0))
        self.facet_offsets = np.empty(0)
        self.facet_simplices = np.empty((0, 0), dtype=int)
        self.edge_facets: dict[tuple[int, ...], tuple[int, int]] | None = None
        self.is_simplicial = True
        self.diameter = 0.0

    # -- basic queries -------------------------------------------------

    @property
    def n_vertices(self) -> int:
        return self.vertices.shape[0]

    def is_empty(self) -> bool:
        return self.degeneracy == "empty"

    def is_full_dimensional(self) -> bool:
        return self.degeneracy == "full_dimensional"

    def facet_planes(self) -> tuple[np.ndarray, np.ndarray]:
        """Outward unit normals and offsets (n . x <= b) in ambient coordinates.

        Only meaningful for full-dimensional polytopes, where the chart is
        the identity.
        """
        if not self.is_full_dimensional():
            raise ValueError("facet planes in ambient coordinates require a "
                             "full-dimensional polytope")
        return self.facet_normals, self.facet_offsets

    def max_facet_excess(self, x: np.ndarray) -> float:
        """max_F (n_F . x - b_F); <= 0 means x lies in the polytope."""
        if not self.is_full_dimensional():
            raise ValueError("membership test requires a full-dimensional "
                             "polytope")
        return float((self.facet_normals @ np.asarray(x, float)
                      - self.facet_offsets).max())


# ---------------------------------------------------------------------------
# construction


def convex_hull(cloud: PointCloud | np.ndarray, dim: int | None = None) -> Polytope:
    """Convex hull with full face lattice; degeneracies are encoded, never errors."""
    if isinstance(cloud, PointCloud):
        pts = cloud.points
        d = cloud.dim
    else:
        pts = np.asarray(cloud, dtype=float)
        if pts.ndim != 2:
            raise ValueError("points must be an (n, d) array")
        d = pts.shape[1] if dim is None else dim

    poly = Polytope(d)
    n = pts.shape[0]
    if n == 0:
        return poly

    lo, hi = pts.min(axis=0), pts.max(axis=0)
    diam = float(np.linalg.norm(hi - lo))
    if diam == 0.0:  # all points coincide
        _as_point(poly, pts[0], 0)
        return poly
    poly.diameter = diam

    center = pts.mean(axis=0)
    centered = pts - center
    # affine dimension via singular values, relative threshold
    _, svals, vt = np.linalg.svd(centered, full_matrices=False)
    k = int((svals > REL_TOL * svals[0]).sum())

    if k == d:
        _build_full(poly, pts, np.arange(n))
        poly.affine_dim = d
        poly.degeneracy = "full_dimensional"
    elif k == 1:
        _build_segment(poly, pts, center, vt[0])
        poly.affine_dim = 1
        poly.degeneracy = "lower_dimensional"
    else:
        basis = vt[:k].T  # (d, k)
        local = centered @ basis
        _build_full(poly, local, np.arange(n), ambient_pts=pts,
                    origin=center, basis=basis)
        poly.affine_dim = k
        poly.degeneracy = "lower_dimensional"
    return poly


def _as_point(poly: Polytope, p: np.ndarray, src: int) -> None:
    poly.affine_dim = 0
    poly.degeneracy = "point"
    poly.vertices = p[None, :].copy()
    poly.source_indices = np.array([src])
    poly.origin = p.copy()
    poly.local_vertices = np.zeros((1, 0))
    poly.faces = {0: frozenset({(0,)})}


def _build_segment(poly, pts, center, direction) -> None:
    coords = (pts - center) @ direction
    i_lo, i_hi = int(np.argmin(coords)), int(np.argmax(coords))
    poly.vertices = pts[[i_lo, i_hi]].copy()
    poly.source_indices = np.array([i_lo, i_hi])
    poly.origin = center.copy()
    poly.basis = direction[:, None]
    poly.local_vertices = coords[[i_lo, i_hi], None]
    poly.faces = {0: frozenset({(0,), (1,)})}
    poly.facet_vertex_sets = [(0,), (1,)]
    poly.facet_normals = np.array([[-1.0], [1.0]])
    poly.facet_offsets = np.array([-coords[i_lo], coords[i_hi]])
    poly.is_simplicial = True


def _build_full(poly, work_pts, src_idx, ambient_pts=None, origin=None,
                basis=None) -> None:
    """Run qhull on full-rank points and assemble the lattice.

    ``work_pts`` are the coordinates handed to qhull (chart coordinates for
    lower-dimensional inputs).  k = 1 inputs never reach here.
    """
    k = work_pts.shape[1]
    if k == 1:
        c = work_pts[:, 0]
        i_lo, i_hi = int(np.argmin(c)), int(np.argmax(c))
        order = [i_lo, i_hi]
        poly.vertices = (work_pts if ambient_pts is None else ambient_pts)[order].copy()
        poly.source_indices = src_idx[order]
        poly.local_vertices = work_pts[order].copy()
        poly.faces = {0: frozenset({(0,), (1,)})}
        poly.facet_vertex_sets = [(0,), (1,)]
        poly.facet_normals = np.array([[-1.0], [1.0]])
        poly.facet_offsets = np.array([-c[i_lo], c[i_hi]])
        if ambient_pts is not None:
            poly.origin = origin.copy()
            poly.basis = basis.copy()
        else:
            poly.origin = np.zeros(1)
            poly.basis = np.eye(1)
        poly.is_simplicial = True
        return

    hull = _QhullHull(work_pts)
    vert_idx = hull.vertices  # indices into work_pts
    remap = -np.ones(work_pts.shape[0], dtype=int)
    remap[vert_idx] = np.arange(len(vert_idx))

    poly.local_vertices = work_pts[vert_idx].copy()
    poly.source_indices = src_idx[vert_idx]
    if ambient_pts is None:
        poly.vertices = poly.local_vertices
        poly.origin = np.zeros(k)
        poly.basis = np.eye(k)
    else:
        poly.vertices = ambient_pts[vert_idx].copy()
        poly.origin = origin.copy()
        poly.basis = basis.copy()

    simplices = remap[hull.simplices]  # (F, k), new indexing
    normals = hull.equations[:, :-1]
    offsets = -hull.equations[:, -1]

    groups = _merge_coplanar(simplices, hull.neighbors, normals, offsets)
    if len(groups) < len(simplices):
        groups = _merge_overlapping(groups, simplices, k)

    facet_sets: list[tuple[int, ...]] = []
    facet_normals = []
    facet_offsets = []
    for members in groups:
        vs = set()
        for s in members:
            vs.update(int(v) for v in simplices[s])
        facet_sets.append(tuple(sorted(vs)))
        facet_normals.append(normals[members[0]])
        facet_offsets.append(offsets[members[0]])
    poly.facet_simplices = simplices
    poly.facet_normals = np.asarray(facet_normals)
    poly.facet_offsets = np.asarray(facet_offsets)
    poly.is_simplicial = all(len(fs) == k for fs in facet_sets)

    if poly.is_simplicial:
        faces, edge_facets = _lattice_simplicial(facet_sets, k)
    else:
        facet_sets, faces, edge_facets = _lattice_general(
            poly, facet_sets, k
        )
    poly.facet_vertex_sets = facet_sets
    poly.faces = faces
    if k == 3:
        poly.edge_facets = edge_facets

    _check_facet_inequalities(poly, REL_TOL * poly.diameter)


def _merge_coplanar(simplices, neighbors, normals, offsets):
    """Union-find over adjacent simplices carrying the same facet plane.

    qhull triangulates any facet it merged for convexity and stamps every
    triangle of that facet with one shared plane equation, so equality of
    equations recovers qhull's facet structure exactly (cubes get squares
    back).  Nearly coplanar but distinct facets, e.g. sliver pairs on large
    random hulls, carry distinct equations and stay separate, keeping
    sampled hulls simplicial.
    """
    nf = simplices.shape[0]
    parent = list(range(nf))

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    for f in range(nf):
        for g in neighbors[f]:
            if g <= f:
                continue
            if offsets[f] == offsets[g] and (normals[f] == normals[g]).all():
                ra, rb = find(f), find(int(g))
                if ra != rb:
                    parent[rb] = ra
    groups: dict[int, list[int]] = {}
    for f in range(nf):
        groups.setdefault(find(f), []).append(f)
    return list(groups.values())


def _merge_overlapping(groups, simplices, k):
    """Merge facet groups that share k or more vertices until stable.

    Distinct facets of a polytope intersect in a face of dimension at most
    k - 2, hence share at most k - 1 vertices; once tolerance merging has
    declared some simplices coplanar, any facet sharing k vertices with a
    merged facet is forced onto the same supporting plane and must join it
    (pairwise normal tests alone are not transitively consistent).
    """
    while True:
        vsets = []
        for members in groups:
            vs = set()
            for s in members:
                vs.update(int(v) for v in simplices[s])
            vsets.append(vs)
        to_merge = None
        incident: dict[int, list[int]] = {}
        for gi, vs in enumerate(vsets):
            for v in vs:
                incident.setdefault(v, []).append(gi)
        counts: dict[tuple[int, int], int] = {}
        for gis in incident.values():
            for a_i in range(len(gis)):
                for b_i in range(a_i + 1, len(gis)):
                    key = (gis[a_i], gis[b_i])
                    counts[key] = counts.get(key, 0) + 1
                    if counts[key] >= k:
                        to_merge = key
                        break
                if to_merge:
                    break
            if to_merge:
                break
        if to_merge is None:
            return groups
        a, b = to_merge
        groups[a] = groups[a] + groups[b]
        del groups[b]


def _lattice_simplicial(facet_sets, k):
    """All i-faces of a simplicial polytope are the (i+1)-subsets of facets."""
    faces: dict[int, set] = {i: set() for i in range(k)}
    edge_facets: dict[tuple[int, ...], list[int]] = {}
    for fi, fs in enumerate(facet_sets):
        faces[k - 1].add(fs)
        for i in range(k - 1):
            for sub in itertools.combinations(fs, i + 1):
                faces[i].add(sub)
                if k == 3 and i == 1:
                    edge_facets.setdefault(sub, []).append(fi)
    return ({i: frozenset(s) for i, s in faces.items()},
            edge_facets if k == 3 else None)


def _lattice_general(poly, facet_sets, k):
    """Lattice by downward closure: faces are intersections of facet vertex sets.

    Non-extreme hull points reported by qhull (possible on constructed bodies
    with boundary-collinear vertices) are pruned first: a point is a vertex
    precisely when the facets through it intersect in that point alone.
    """
    fsets = [frozenset(fs) for fs in facet_sets]
    m = poly.local_vertices.shape[0]

    keep = []
    for v in range(m):
        through = [fs for fs in fsets if v in fs]
        inter = frozenset.intersection(*through) if through else frozenset()
        if inter == {v}:
            keep.append(v)
    if len(keep) < m:
        remap = -np.ones(m, dtype=int)
        remap[keep] = np.arange(len(keep))
        poly.vertices = poly.vertices[keep]
        poly.local_vertices = poly.local_vertices[keep]
        poly.source_indices = poly.source_indices[keep]
        poly.facet_simplices = np.empty((0, k), dtype=int)  # invalidated
        fsets = [frozenset(int(remap[v]) for v in fs if remap[v] >= 0)
                 for fs in fsets]
        kept_simplices = []
        # retriangulate each facet for metric use (fan inside the facet plane)
        for fs in fsets:
            idx = sorted(fs)
            kept_simplices.extend(_fan_facet(idx, poly.local_vertices[idx], k))
        poly.facet_simplices = np.asarray(kept_simplices, dtype=int)

    faces_all: set[frozenset] = set(fsets)
    frontier = set(fsets)
    while frontier:
        new = set()
        for a in frontier:
            for b in fsets:
                c = a & b
                if c and c != a and c not in faces_all:
                    new.add(c)
        faces_all |= new
        frontier = new

    # Grade combinatorially: the face lattice of a polytope is graded, so
    # the dimension of a face is its height in the containment order.
    # (A geometric rank test would misclassify sliver faces whose shape is
    # degenerate at the decision tolerance.)
    by_size = sorted(faces_all, key=len)
    height: dict[frozenset, int] = {}
    for fc in by_size:
        h = 0
        for other in by_size:
            if len(other) >= len(fc):
                break
            if other in height and other < fc:
                h = max(h, height[other] + 1)
        height[fc] = h

    for fs in fsets:
        if height[fs] != k - 1:
            raise RuntimeError("face lattice grading inconsistent with the "
                               "facet level; hull construction bug")
    faces: dict[int, set] = {i: set() for i in range(k)}
    for fc, h in height.items():
        if h < k:
            faces[h].add(tuple(sorted(fc)))

    edge_facets = None
    if k == 3:
        edge_facets = {}
        for e in faces[1]:
            es = set(e)
            edge_facets[e] = [fi for fi, fs in enumerate(fsets)
                              if es <= fs]
    facet_tuples = [tuple(sorted(fs)) for fs in fsets]
    return facet_tuples, {i: frozenset(s) for i, s in faces.items()}, edge_facets


def _fan_facet(idx, local, k):
    """Triangulate one facet (vertex ids ``idx``, chart coords ``local``)."""
    if len(idx) < k:
        raise RuntimeError(f"facet with {len(idx)} vertices in a "
                           f"{k}-dimensional hull; lattice bug")
    if len(idx) == k:
        return [tuple(idx)]
    # order facet vertices by running a (k-1)-dim hull inside the facet plane
    c = local.mean(axis=0)
    _, _, vt = np.linalg.svd(local - c, full_matrices=False)
    plane = (local - c) @ vt[: k - 1].T
    if k - 1 == 1:
        order = np.argsort(plane[:, 0])
        return [(idx[order[i]], idx[order[i + 1]])
                for i in range(len(idx) - 1)]
    sub = _QhullHull(plane)
    ring = sub.vertices  # counterclockwise for 2-d
    tris = []
    for i in range(1, len(ring) - 1):
        tris.append((idx[ring[0]], idx[ring[i]], idx[ring[i + 1]]))
    return tris


def _check_facet_inequalities(poly, tol):
    excess = poly.local_vertices @ poly.facet_normals.T - poly.facet_offsets
    worst = float(excess.max(initial=0.0))
    if worst > tol:
        raise RuntimeError(
            f"hull inconsistency: vertex violates facet plane by {worst:.3e}"
        )


# ---------------------------------------------------------------------------
# combinatorics and measures


def f_vector(poly: Polytope) -> FVector:
    """Face counts per dimension, padded with zeros up to ambient d - 1."""
    d = poly.dim_ambient
    return FVector(tuple(len(poly.faces.get(i, ())) for i in range(d)))


def volume(poly: Polytope) -> float:
    """Ambient d-dimensional volume; 0 for any degenerate polytope."""
    if not poly.is_full_dimensional():
        return 0.0
    return _chart_volume(poly)


def _chart_volume(poly: Polytope) -> float:
    """Volume of the polytope inside its own chart (affine hull)."""
    k = poly.affine_dim
    if k <= 0:
        return 0.0
    if k == 1:
        c = poly.local_vertices[:, 0]
        return float(c.max() - c.min())
    centroid = poly.local_vertices.mean(axis=0)
    total = 0.0
    fact = math.factorial(k)
    for s in poly.facet_simplices:
        mat = poly.local_vertices[list(s)] - centroid
        total += abs(np.linalg.det(mat)) / fact
    return total


def surface_measure(poly: Polytope) -> float:
    """Sum of (d-1)-volumes of the facets; full-dimensional polytopes only."""
    if not poly.is_full_dimensional():
        raise ValueError("surface_measure requires a full-dimensional polytope")
    return _chart_surface(poly)


def _chart_surface(poly: Polytope) -> float:
    k = poly.affine_dim
    if k == 1:
        return 2.0  # two boundary points, counting measure
    fact = math.factorial(k - 1)
    total = 0.0
    for s in poly.facet_simplices:
        vs = poly.local_vertices[list(s)]
        e = vs[1:] - vs[0]
        gram = e @ e.T
        det = np.linalg.det(gram)
        if det > 0:
            total += math.sqrt(det) / fact
    return total


def exact_intrinsic_volumes(poly: Polytope) -> list[float]:
    """(V_0, ..., V_d) for ambient dimension <= 3, exact formulas.

    Lower-dimensional polytopes get the intrinsic volumes of the polytope
    inside its affine hull (a segment has V_1 = its length), padded with
    zeros; the empty polytope is all zeros.
    """
    d = poly.dim_ambient
    if d > 3:
        raise ValueError("exact intrinsic volumes implemented for d <= 3; "
                         "use intrinsic_volume_mc")
    out = [0.0] * (d + 1)
    if poly.is_empty():
        return out
    out[0] = 1.0
    k = poly.affine_dim
    if k == 0:
        return out
    if k == 1:
        out[1] = _chart_volume(poly)
        return out
    if k == 2:
        out[1] = _chart_surface(poly) / 2.0
        out[2] = _chart_volume(poly)
        return out
    # k == 3: mean width term from exterior angles along edges
    out[1] = _mean_width_term_3d(poly)
    out[2] = _chart_surface(poly) / 2.0
    out[3] = _chart_volume(poly)
    return out


def _mean_width_term_3d(poly: Polytope) -> float:
    edges = sorted(poly.faces[1])
    if poly.edge_facets is None:
        raise RuntimeError("edge-facet incidence missing on 3-polytope")
    total = 0.0
    for e in edges:
        fids = poly.edge_facets[e]
        if len(fids) != 2:
            raise RuntimeError(f"edge {e} lies in {len(fids)} facets")
        n1 = poly.facet_normals[fids[0]]
        n2 = poly.facet_normals[fids[1]]
        ext = math.acos(float(np.clip(n1 @ n2, -1.0, 1.0)))
        length = float(np.linalg.norm(
            poly.local_vertices[e[0]] - poly.local_vertices[e[1]]
        ))
        total += length * ext
    return total / (2.0 * math.pi)


# ---------------------------------------------------------------------------
# subspaces and projections


def sample_haar_subspace(d: int, j: int, rng: np.random.Generator) -> Subspace:
    """Haar-distributed j-dimensional linear subspace of R^d.

    Orthonormalizes a d x j standard Gaussian matrix; the column span of
    such a matrix is rotation invariant, which characterizes the Haar
    measure.  Redraws on (numerically) rank-deficient draws.
    """
    if not 1 <= j <= d:
        raise ValueError("need 1 <= j <= d")
    while True:
        g = rng.standard_normal((d, j))
        q, r = np.linalg.qr(g)
        if np.abs(np.diag(r)).min() > 1e-12 * max(1.0, np.abs(r).max()):
            return Subspace(d, j, q)


def project(poly: Polytope, sub: Subspace) -> PointCloud:
    """Vertex images in subspace coordinates (j-vectors)."""
    if sub.ambient_dim != poly.dim_ambient:
        raise ValueError("subspace ambient dimension does not match polytope")
    return PointCloud(sub.dim, poly.vertices @ sub.basis)


def projection_mean_coefficient(d: int, j: int) -> float:
    """Normalizing constant relating V_j to the mean projection volume."""
    kd = unit_ball_volume(d)
    kj = unit_ball_volume(j)
    kdj = unit_ball_volume(d - j)
    return math.comb(d, j) * kd / (kj * kdj)


def intrinsic_volume_mc(
    poly: Polytope, j: int, n_dirs: int, rng: np.random.Generator
) -> tuple[float, float]:
    """Monte Carlo j-th intrinsic volume: scaled mean of projection volumes
    over Haar subspaces.  Returns (estimate, standard error)."""
    d = poly.dim_ambient
    if not 1 <= j <= d:
        raise ValueError("need 1 <= j <= d")
    if n_dirs < 2:
        raise ValueError("need n_dirs >= 2")
    if poly.affine_dim < j:
        return 0.0, 0.0
    c = projection_mean_coefficient(d, j)
    vals = np.empty(n_dirs)
    for i in range(n_dirs):
        sub = sample_haar_subspace(d, j, rng)
        vals[i] = volume(convex_hull(project(poly, sub)))
    est = c * float(vals.mean())
    se = c * float(vals.std(ddof=1)) / math.sqrt(n_dirs)
    return est, se


# ---------------------------------------------------------------------------
# verification helpers


def brute_force_facets(points: np.ndarray, tol: float = REL_TOL) -> set:
    """Facets of the hull of a general-position point set by exhaustion.

    Tests every d-subset's hyperplane for one-sidedness (O(n^{d+1})).
    Returns facets as frozensets of indices into ``points``.  Intended as
    an independent oracle for small instances.
    """
    pts = np.asarray(points, dtype=float)
    n, d = pts.shape
    scale = float(np.linalg.norm(pts.max(0) - pts.min(0))) or 1.0
    facets = set()
    for subset in itertools.combinations(range(n), d):
        base = pts[subset[0]]
        a = pts[list(subset[1:])] - base
        _, s, vt = np.linalg.svd(a, full_matrices=True)
        if s[-1] <= tol * max(s[0], 1e-300):
            continue  # affinely dependent d-subset
        normal = vt[-1]
        side = (pts - base) @ normal
        if side.max() <= tol * scale or side.min() >= -tol * scale:
            facets.add(frozenset(subset))
    return facets


def hull_facets_as_source_sets(poly: Polytope) -> set:
    """Facet vertex sets mapped back to input-cloud indices."""
    src = poly.source_indices
    return {frozenset(int(src[v]) for v in fs)
            for fs in poly.facet_vertex_sets}


def polytope_to_json(poly: Polytope) -> dict:
    """Debug dump for external viewers."""
    return {
        "dim_ambient": poly.dim_ambient,
        "affine_dim": poly.affine_dim,
        "degeneracy": poly.degeneracy,
        "vertices": poly.vertices.tolist(),
        "faces_by_dim": {
            str(i): sorted(list(f) for f in fs)
            for i, fs in poly.faces.items()
        },
        "normals": poly.facet_normals.tolist(),
        "offsets": poly.facet_offsets.tolist(),
    }
