"""Add-one-cost difference operators and normal-approximation error terms.

The first-order difference of a functional F at a point x is the change in
F when x is added to the point configuration; iterating gives the second
order operator.  Monte Carlo moments of these differences yield the three
error terms whose combination 2*sqrt(tau1) + sqrt(tau2) + tau3 dominates
the Wasserstein distance between the standardized functional and a
standard Gaussian, with a matching multivariate version (gamma terms).

The triple integrals carry a t^3 prefactor, so plain uniform sampling of
the integration points is hopeless at large intensity: differences vanish
unless the point falls in the thin region between the floating body and
the boundary.  The ``boundary_shell`` sampler draws integration points in
that annulus (balls only) with exact Lebesgue reweighting; ``plain``
remains the ground truth at small t.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .bodies import (
    Ball,
    ConvexBody,
    PointCloud,
    ball_floating_body_radius,
    sample_poisson_process,
)
from .hull import Polytope, convex_hull
from .rng import substream

__all__ = [
    "DiffSample",
    "TauEstimate",
    "GammaEstimate",
    "VectorFunctional",
    "first_difference",
    "second_difference",
    "diff_sample",
    "estimate_taus",
    "estimate_gammas",
    "ms_bound_univariate",
    "ms_bound_multivariate",
    "make_disjoint_visibility_config",
]

_INSIDE_TOL = 1e-12


# ---------------------------------------------------------------------------
# difference operators


class _Rehuller:
    """Base hull of a configuration plus cheap re-hulls with added points.

    The hull of (cloud + extras) equals the hull of (hull vertices +
    extras), so after one full hull the add-one re-hulls touch only a
    handful of points.  Adding a point strictly inside the base hull is
    detected and short-circuits to the base polytope, which makes
    differences at interior points exactly zero.
    """

    def __init__(self, cloud: PointCloud | np.ndarray, dim: int | None = None):
        self.base = convex_hull(cloud, dim=dim)
        self._tol = _INSIDE_TOL * max(1.0, self.base.diameter)

    def _strictly_inside(self, x: np.ndarray) -> bool:
        return (self.base.is_full_dimensional()
                and self.base.max_facet_excess(x) < -self._tol)

    def with_points(self, *xs: np.ndarray) -> Polytope:
        outside = [x for x in xs if not self._strictly_inside(x)]
        if not outside:
            return self.base
        return convex_hull(
            np.vstack([self.base.vertices, np.asarray(outside)]),
            dim=self.base.dim_ambient,
        )


def _check_in_body(body: ConvexBody | None, *xs) -> None:
    if body is None:
        return
    for x in xs:
        if not body.contains(np.asarray(x, dtype=float)):
            raise ValueError(f"point {np.asarray(x)} lies outside the body")


def first_difference(cloud, x, functional, body: ConvexBody | None = None) -> float:
    """F(hull(cloud + x)) - F(hull(cloud)).

    Exactly zero whenever x lies inside the hull (the hull is unchanged).
    If ``body`` is given, x is validated to lie in it.
    """
    _check_in_body(body, x)
    re = _Rehuller(cloud)
    x = np.asarray(x, dtype=float)
    hx = re.with_points(x)
    if hx is re.base:
        return 0.0
    return float(functional(hx)) - float(functional(re.base))


def second_difference(cloud, x, y, functional,
                      body: ConvexBody | None = None) -> float:
    """Four-term alternating sum F(+x+y) - F(+x) - F(+y) + F()."""
    _check_in_body(body, x, y)
    re = _Rehuller(cloud)
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    hx = re.with_points(x)
    hy = re.with_points(y)
    if hx is re.base or hy is re.base:
        return 0.0  # an interior point changes nothing in any term
    hxy = re.with_points(x, y)
    f = functional
    return (float(f(hxy)) - float(f(hx)) - float(f(hy)) + float(f(re.base)))


@dataclass(frozen=True)
class DiffSample:
    """Record of one difference-operator evaluation."""

    x: np.ndarray
    base_value: float
    first_diff: float
    y: np.ndarray | None = None
    second_diff: float | None = None


def diff_sample(cloud, x, functional, y=None,
                body: ConvexBody | None = None) -> DiffSample:
    re = _Rehuller(cloud)
    base_value = float(functional(re.base))
    fd = first_difference(cloud, x, functional, body=body)
    sd = None
    if y is not None:
        sd = second_difference(cloud, x, y, functional, body=body)
    return DiffSample(x=np.asarray(x, float), base_value=base_value,
                      first_diff=fd, y=None if y is None else np.asarray(y, float),
                      second_diff=sd)


# ---------------------------------------------------------------------------
# estimates of the error terms


@dataclass(frozen=True)
class TauEstimate:
    tau1: float
    tau2: float
    tau3: float
    se1: float
    se2: float
    se3: float
    n_outer: int
    n_inner: int
    functional_label: str
    t: float
    sampling: str

    def __post_init__(self):
        for v in (self.tau1, self.tau2, self.tau3):
            if v < 0 or not math.isfinite(v):
                raise ValueError("tau estimates must be finite and nonnegative")

    def bound(self) -> float:
        return ms_bound_univariate(self)

    def bound_standard_error(self) -> float:
        # delta method on 2 sqrt(t1) + sqrt(t2) + t3
        acc = self.se3**2
        if self.tau1 > 0:
            acc += (self.se1 / math.sqrt(self.tau1)) ** 2
        if self.tau2 > 0:
            acc += (self.se2 / (2.0 * math.sqrt(self.tau2))) ** 2
        return math.sqrt(acc)


@dataclass(frozen=True)
class GammaEstimate:
    gamma1: float
    gamma2: float
    gamma3: float
    se1: float
    se2: float
    se3: float
    m: int
    labels: tuple[str, ...]
    n_outer: int
    n_inner: int
    t: float
    sampling: str

    def __post_init__(self):
        for v in (self.gamma1, self.gamma2, self.gamma3):
            if v < 0 or not math.isfinite(v):
                raise ValueError("gamma estimates must be finite and nonnegative")

    def bound(self) -> float:
        return ms_bound_multivariate(self)


def ms_bound_univariate(tau: TauEstimate) -> float:
    """2 sqrt(tau1) + sqrt(tau2) + tau3."""
    return 2.0 * math.sqrt(tau.tau1) + math.sqrt(tau.tau2) + tau.tau3


def ms_bound_multivariate(g: GammaEstimate) -> float:
    """m sqrt(gamma1) + (m/2) sqrt(gamma2) + (m^2/4) gamma3."""
    m = g.m
    return (m * math.sqrt(g.gamma1) + 0.5 * m * math.sqrt(g.gamma2)
            + 0.25 * m * m * g.gamma3)


@dataclass(frozen=True)
class VectorFunctional:
    """Vector functional with per-component standardization scales.

    ``fn`` maps a polytope to raw component values; differences are divided
    by ``scales`` (plug-in standard deviations), which is all that
    standardization contributes to difference operators since means cancel.
    """

    fn: object  # Callable[[Polytope], np.ndarray]
    labels: tuple[str, ...]
    scales: np.ndarray = field(default=None)

    def __post_init__(self):
        s = (np.ones(len(self.labels)) if self.scales is None
             else np.asarray(self.scales, dtype=float))
        if s.shape != (len(self.labels),) or np.any(s <= 0):
            raise ValueError("scales must be positive, one per component")
        object.__setattr__(self, "scales", s)
        object.__setattr__(self, "labels", tuple(self.labels))

    @property
    def m(self) -> int:
        return len(self.labels)


def _region_sampler(body: ConvexBody, t: float, sampling: str, shell_c: float):
    """Integration-point sampler and its region volume.

    ``plain``: uniform on the body.  ``boundary_shell``: uniform on the
    annulus between the floating body (cap-volume parameter c log t / t)
    and the boundary; balls only.  Differences vanish off the shell except
    on the rare event that the floating body is not contained in the hull,
    so the shell estimate is the restricted integral.
    """
    if sampling == "plain":
        return (lambda rng, n: body.sample_uniform(rng, n)), body.volume
    if sampling == "boundary_shell":
        if not isinstance(body, Ball):
            raise ValueError("boundary_shell sampling is implemented for "
                             "balls only; use plain")
        if t <= 1.0:
            raise ValueError("boundary_shell needs t > 1 (eps = c log t / t)")
        eps = shell_c * math.log(t) / t
        rho = ball_floating_body_radius(body.dim, body.radius, eps)
        d = body.dim
        frac = (rho / body.radius) ** d
        shell_volume = body.volume * (1.0 - frac)

        def draw(rng, n):
            g = rng.standard_normal((n, d))
            g /= np.linalg.norm(g, axis=1, keepdims=True)
            u = rng.random(n)
            r = body.radius * (frac + u * (1.0 - frac)) ** (1.0 / d)
            return body.center + g * r[:, None]

        return draw, shell_volume
    raise ValueError(f"unknown sampling {sampling!r}")


def _vector_diffs(body, t, vf, x1, x2, x3, rng, want_second, want_first):
    """One process draw: standardized difference-operator values.

    ``want_second``/``want_first`` select which of D2_{x1,x3} (index 0) /
    D2_{x2,x3} (index 1) resp. D1_{x1} / D1_{x2} to evaluate; unneeded
    re-hulls are skipped.  Returns a dict with keys "d2_0", "d2_1",
    "d1_0", "d1_1" (length-m arrays) for the requested entries.
    """
    cloud = sample_poisson_process(body, t, rng)
    re = _Rehuller(cloud, dim=body.dim)
    memo: dict[str, np.ndarray] = {}

    def v(key, pts):
        if key not in memo:
            memo[key] = np.asarray(vf.fn(re.with_points(*pts)), dtype=float)
        return memo[key]

    xs = (x1, x2)
    inside = [re._strictly_inside(x1), re._strictly_inside(x2),
              re._strictly_inside(x3)]
    zero = np.zeros(vf.m)
    out: dict[str, np.ndarray] = {}
    for i in (0, 1):
        if i in want_first:
            if inside[i]:
                out[f"d1_{i}"] = zero
            else:
                out[f"d1_{i}"] = (v(f"{i}", (xs[i],)) - v("", ())) / vf.scales
        if i in want_second:
            if inside[i] or inside[2]:
                out[f"d2_{i}"] = zero
            else:
                out[f"d2_{i}"] = (
                    v(f"{i}3", (xs[i], x3)) - v(f"{i}", (xs[i],))
                    - v("3", (x3,)) + v("", ())
                ) / vf.scales
    return out


def _estimate_core(body, t, vf, n_outer, n_inner, rng, sampling, shell_c):
    """Shared Monte Carlo engine for the tau and gamma terms.

    Per integration triple, the n_inner independent process draws are split
    round-robin into four disjoint groups so that every factor of a moment
    product is estimated from its own draws (a product of independent
    unbiased estimates is unbiased for the product of moments).
    """
    if n_inner < 4:
        raise ValueError("n_inner must be >= 4: the moment products combine "
                         "four expectations, each needing disjoint draws")
    if n_outer < 2:
        raise ValueError("n_outer must be >= 2 to report standard errors")
    draw_points, region_volume = _region_sampler(body, t, sampling, shell_c)

    m = vf.m
    term1 = np.empty(n_outer)
    term2 = np.empty(n_outer)
    term3 = np.empty(n_outer)
    groups = [range(g, n_inner, 4) for g in range(4)]

    # what each draw group evaluates: second diffs for the first moment
    # copies, second diffs plus first diffs for the independent copies
    needs = [((0,), ()), ((1,), ()), ((0,), (0,)), ((1,), (1,))]

    for k in range(n_outer):
        rk = substream(rng, k)
        x1, x2, x3 = draw_points(rk, 3)
        # group accumulators: fourth moments of the difference operators
        a = np.zeros(m)    # E (D2_{x1,x3})^4   from group 0
        b = np.zeros(m)    # E (D2_{x2,x3})^4   from group 1
        a2 = np.zeros(m)   # second copy of a   from group 2
        b2 = np.zeros(m)   # second copy of b   from group 3
        c4 = np.zeros(m)   # E (D1_{x1})^4      from group 2
        e4 = np.zeros(m)   # E (D1_{x2})^4      from group 3
        abs3_1 = np.zeros(m)  # E |D1_{x1}|^3   from group 2
        abs3_2 = np.zeros(m)  # E |D1_{x2}|^3   from group 3
        for gi, idxs in enumerate(groups):
            want_second, want_first = needs[gi]
            for _ in idxs:
                d = _vector_diffs(body, t, vf, x1, x2, x3, rk,
                                  want_second, want_first)
                if gi == 0:
                    a += d["d2_0"] ** 4
                elif gi == 1:
                    b += d["d2_1"] ** 4
                elif gi == 2:
                    a2 += d["d2_0"] ** 4
                    c4 += d["d1_0"] ** 4
                    abs3_1 += np.abs(d["d1_0"]) ** 3
                else:
                    b2 += d["d2_1"] ** 4
                    e4 += d["d1_1"] ** 4
                    abs3_2 += np.abs(d["d1_1"]) ** 3
        sizes = [len(g) for g in groups]
        a /= sizes[0]
        b /= sizes[1]
        a2 /= sizes[2]
        c4 /= sizes[2]
        abs3_1 /= sizes[2]
        b2 /= sizes[3]
        e4 /= sizes[3]
        abs3_2 /= sizes[3]

        s_ab = float(((a * b) ** 0.25).sum())
        s_ce = float(((c4 * e4) ** 0.25).sum())
        s_a2b2 = float(((a2 * b2) ** 0.25).sum())
        term1[k] = s_ab * s_ce
        term2[k] = s_ab * s_a2b2
        term3[k] = 0.5 * float(abs3_1.sum() + abs3_2.sum())

    w3 = t * region_volume
    w1 = w3**3
    root_n = math.sqrt(n_outer)

    def reduce(vals, w):
        mean = w * math.fsum(vals) / n_outer
        se = w * float(vals.std(ddof=1)) / root_n
        return max(mean, 0.0), se

    g1, se1 = reduce(term1, w1)
    g2, se2 = reduce(term2, w1)
    g3, se3 = reduce(term3, w3)
    return (g1, g2, g3, se1, se2, se3)


def estimate_taus(
    body: ConvexBody,
    t: float,
    functional,
    variance_estimate: float,
    n_outer: int,
    n_inner: int,
    rng: np.random.Generator,
    sampling: str = "plain",
    shell_c: float = 2.0,
    label: str = "F",
) -> TauEstimate:
    """Monte Carlo estimates of the three univariate error terms.

    ``functional`` maps a polytope to a raw scalar; ``variance_estimate``
    is the plug-in variance used to put the functional on unit-variance
    scale (means cancel inside differences, so only the scale matters).
    """
    if variance_estimate <= 0:
        raise ValueError("variance_estimate must be positive")
    vf = VectorFunctional(
        fn=lambda poly: np.array([float(functional(poly))]),
        labels=(label,),
        scales=np.array([math.sqrt(variance_estimate)]),
    )
    g1, g2, g3, se1, se2, se3 = _estimate_core(
        body, t, vf, n_outer, n_inner, rng, sampling, shell_c
    )
    return TauEstimate(
        tau1=g1, tau2=g2, tau3=g3, se1=se1, se2=se2, se3=se3,
        n_outer=n_outer, n_inner=n_inner, functional_label=label,
        t=t, sampling=sampling,
    )


def estimate_gammas(
    body: ConvexBody,
    t: float,
    vector_functional: VectorFunctional,
    covariance_estimate: np.ndarray,
    n_outer: int,
    n_inner: int,
    rng: np.random.Generator,
    sampling: str = "plain",
    shell_c: float = 2.0,
) -> GammaEstimate:
    """Monte Carlo estimates of the three multivariate error terms.

    With a single component and the same generator state this reduces
    exactly to :func:`estimate_taus`.
    """
    m = vector_functional.m
    cov = np.asarray(covariance_estimate, dtype=float)
    if cov.shape != (m, m):
        raise ValueError(f"covariance_estimate must be {m} x {m}")
    if not np.allclose(cov, cov.T, atol=1e-10):
        raise ValueError("covariance_estimate must be symmetric")
    if np.max(np.abs(np.diag(cov) - 1.0)) > 1e-6:
        raise ValueError("covariance_estimate must have unit diagonal "
                         "(standardized components)")
    if np.linalg.eigvalsh(cov).min() < -1e-8:
        raise ValueError("covariance_estimate must be positive semi-definite")
    g1, g2, g3, se1, se2, se3 = _estimate_core(
        body, t, vector_functional, n_outer, n_inner, rng, sampling, shell_c
    )
    return GammaEstimate(
        gamma1=g1, gamma2=g2, gamma3=g3, se1=se1, se2=se2, se3=se3,
        m=m, labels=vector_functional.labels,
        n_outer=n_outer, n_inner=n_inner, t=t, sampling=sampling,
    )


# ---------------------------------------------------------------------------
# constructions with provably disjoint visibility


def make_disjoint_visibility_config(
    d: int,
    rng: np.random.Generator,
    n_points: int | None = None,
    delta: float = 1e-4,
    max_tries: int = 50,
):
    """Cloud plus two exterior points whose visibility regions are disjoint.

    Points are placed just beyond two nearly antipodal facets of a fat hull
    inscribed in the unit ball.  Disjointness is certified geometrically:
    the hull contains the ball of radius r_in = min facet offset, so any
    point z seeing x must satisfy angle(z, x) <= arccos(r_in/|z|) +
    arccos(r_in/|x|); the certificate demands the two such visibility
    cones cannot meet.  Draws are retried until the certificate holds.
    """
    if n_points is None:
        n_points = 48 if d == 2 else 220
    for _ in range(max_tries):
        g = rng.standard_normal((n_points, d))
        g /= np.linalg.norm(g, axis=1, keepdims=True)
        radii = rng.uniform(0.92, 0.99, size=n_points)
        pts = g * radii[:, None]
        poly = convex_hull(pts)
        if not poly.is_full_dimensional():
            continue
        normals, offsets = poly.facet_planes()
        r_in = float(offsets.min())
        if r_in <= 0.5:
            continue
        fi = int(np.argmax(normals[:, 0]))
        fj = int(np.argmin(normals @ normals[fi]))
        x = _point_beyond_facet(poly, fi, delta)
        y = _point_beyond_facet(poly, fj, delta)
        if max(np.linalg.norm(x), np.linalg.norm(y)) >= 1.0:
            continue
        alpha_max = math.acos(min(r_in, 1.0))
        ax = math.acos(min(r_in / np.linalg.norm(x), 1.0))
        ay = math.acos(min(r_in / np.linalg.norm(y), 1.0))
        angle_xy = math.acos(float(np.clip(
            x @ y / (np.linalg.norm(x) * np.linalg.norm(y)), -1.0, 1.0
        )))
        if angle_xy > ax + ay + 2.0 * alpha_max + 1e-6:
            return pts, x, y
    raise RuntimeError("could not certify a disjoint-visibility construction")


def _point_beyond_facet(poly: Polytope, facet_index: int, delta: float):
    idx = list(poly.facet_vertex_sets[facet_index])
    centroid = poly.vertices[idx].mean(axis=0)
    return centroid + delta * poly.facet_normals[facet_index]
