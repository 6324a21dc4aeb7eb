"""Convex bodies, uniform sampling, and Poisson point processes.

A body supplies exact volume, membership, a bounding box, and a direct
uniform sampler.  Point processes with intensity ``t`` times Lebesgue
measure restricted to the body are sampled by drawing a Poisson number
of points and placing them i.i.d. uniformly.

The ball and the ellipsoid have smooth boundary with positive curvature
everywhere; the cube does not and is provided only as an exact-answer
test body (its intrinsic volumes are binomial coefficients).
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy import optimize, special

__all__ = [
    "ConvexBody",
    "Ball",
    "Ellipsoid",
    "Cube",
    "PointCloud",
    "body_from_spec",
    "sample_poisson_process",
    "unit_ball_volume",
    "ball_cap_volume",
    "ball_floating_body_radius",
]

# Consecutive rejections tolerated by the bounding-box fallback sampler
# before giving up; guards against degenerate bodies hanging forever.
MAX_REJECTIONS = 10**6


def unit_ball_volume(k: int) -> float:
    """Volume of the k-dimensional unit ball, pi^(k/2) / Gamma(1 + k/2)."""
    return math.pi ** (k / 2.0) / math.gamma(1.0 + k / 2.0)


@dataclass(frozen=True)
class PointCloud:
    """A finite set of points in R^d, stored as an (n, d) array."""

    dim: int
    points: np.ndarray

    def __post_init__(self):
        pts = np.asarray(self.points, dtype=float).reshape(-1, self.dim)
        object.__setattr__(self, "points", pts)

    def __len__(self) -> int:
        return self.points.shape[0]


class ConvexBody:
    """Base class: membership, volume, bbox, and a uniform sampler.

    Subclasses with a closed-form sampler override :meth:`sample_uniform`;
    the default is bounding-box rejection (bounded by ``MAX_REJECTIONS``).
    """

    dim: int
    kind: str
    volume: float
    is_smooth: bool

    def bbox(self) -> tuple[np.ndarray, np.ndarray]:
        raise NotImplementedError

    def contains(self, x: np.ndarray) -> bool:
        x = np.asarray(x, dtype=float)
        if x.shape != (self.dim,):
            raise ValueError(
                f"point has shape {x.shape}, expected ({self.dim},)"
            )
        return self._contains(x)

    def contains_many(self, pts: np.ndarray) -> np.ndarray:
        """Vectorized membership for an (n, d) array."""
        pts = np.asarray(pts, dtype=float).reshape(-1, self.dim)
        return self._contains_many(pts)

    def _contains(self, x: np.ndarray) -> bool:
        return bool(self._contains_many(x[None, :])[0])

    def _contains_many(self, pts: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def sample_uniform(self, rng: np.random.Generator, n: int | None = None):
        """Uniform point(s) on the body; (n, d) array if ``n`` is given."""
        m = 1 if n is None else int(n)
        lo, hi = self.bbox()
        out = np.empty((m, self.dim))
        filled = 0
        rejections = 0
        while filled < m:
            batch = max(m - filled, 64)
            cand = rng.uniform(lo, hi, size=(batch, self.dim))
            ok = self._contains_many(cand)
            k = int(ok.sum())
            if k == 0:
                rejections += batch
                if rejections > MAX_REJECTIONS:
                    raise RuntimeError(
                        f"rejection sampler exceeded {MAX_REJECTIONS} "
                        f"consecutive misses on body kind={self.kind!r}"
                    )
                continue
            rejections = 0
            take = min(k, m - filled)
            out[filled : filled + take] = cand[ok][:take]
            filled += take
        return out[0] if n is None else out

    def spec(self) -> dict:
        """JSON-serializable description, invertible by body_from_spec."""
        raise NotImplementedError


@dataclass(frozen=True)
class Ball(ConvexBody):
    dim: int
    radius: float = 1.0
    center: np.ndarray = None
    kind: str = field(default="ball", init=False)
    is_smooth: bool = field(default=True, init=False)

    def __post_init__(self):
        if self.dim < 1:
            raise ValueError("dim must be >= 1")
        if self.radius <= 0:
            raise ValueError("radius must be positive")
        c = np.zeros(self.dim) if self.center is None else np.asarray(
            self.center, dtype=float
        )
        if c.shape != (self.dim,):
            raise ValueError("center has wrong dimension")
        object.__setattr__(self, "center", c)

    @property
    def volume(self) -> float:
        return unit_ball_volume(self.dim) * self.radius**self.dim

    def bbox(self):
        return self.center - self.radius, self.center + self.radius

    def _contains_many(self, pts):
        d2 = ((pts - self.center) ** 2).sum(axis=1)
        return d2 <= self.radius**2 * (1.0 + 1e-15)

    def sample_uniform(self, rng, n=None):
        m = 1 if n is None else int(n)
        g = rng.standard_normal((m, self.dim))
        g /= np.linalg.norm(g, axis=1, keepdims=True)
        r = self.radius * rng.random(m) ** (1.0 / self.dim)
        out = self.center + g * r[:, None]
        return out[0] if n is None else out

    def spec(self):
        return {
            "kind": "ball",
            "dim": self.dim,
            "radius": self.radius,
            "center": self.center.tolist(),
        }


@dataclass(frozen=True)
class Ellipsoid(ConvexBody):
    dim: int
    semi_axes: np.ndarray = None
    center: np.ndarray = None
    kind: str = field(default="ellipsoid", init=False)
    is_smooth: bool = field(default=True, init=False)

    def __post_init__(self):
        a = np.asarray(self.semi_axes, dtype=float)
        if a.shape != (self.dim,) or np.any(a <= 0):
            raise ValueError("semi_axes must be dim positive reals")
        c = np.zeros(self.dim) if self.center is None else np.asarray(
            self.center, dtype=float
        )
        if c.shape != (self.dim,):
            raise ValueError("center has wrong dimension")
        object.__setattr__(self, "semi_axes", a)
        object.__setattr__(self, "center", c)

    @property
    def volume(self) -> float:
        return unit_ball_volume(self.dim) * float(np.prod(self.semi_axes))

    def bbox(self):
        return self.center - self.semi_axes, self.center + self.semi_axes

    def _contains_many(self, pts):
        u = (pts - self.center) / self.semi_axes
        return (u**2).sum(axis=1) <= 1.0 + 1e-15

    def sample_uniform(self, rng, n=None):
        # affine image of the unit ball
        m = 1 if n is None else int(n)
        g = rng.standard_normal((m, self.dim))
        g /= np.linalg.norm(g, axis=1, keepdims=True)
        r = rng.random(m) ** (1.0 / self.dim)
        out = self.center + g * r[:, None] * self.semi_axes
        return out[0] if n is None else out

    def spec(self):
        return {
            "kind": "ellipsoid",
            "dim": self.dim,
            "semi_axes": self.semi_axes.tolist(),
            "center": self.center.tolist(),
        }


@dataclass(frozen=True)
class Cube(ConvexBody):
    """Axis-aligned cube [-side/2, side/2]^d.  Non-smooth: test body only."""

    dim: int
    side: float = 1.0
    kind: str = field(default="cube", init=False)
    is_smooth: bool = field(default=False, init=False)

    def __post_init__(self):
        if self.dim < 1:
            raise ValueError("dim must be >= 1")
        if self.side <= 0:
            raise ValueError("side must be positive")

    @property
    def volume(self) -> float:
        return self.side**self.dim

    def bbox(self):
        h = self.side / 2.0
        return np.full(self.dim, -h), np.full(self.dim, h)

    def _contains_many(self, pts):
        h = self.side / 2.0 * (1.0 + 1e-15)
        return (np.abs(pts) <= h).all(axis=1)

    def sample_uniform(self, rng, n=None):
        m = 1 if n is None else int(n)
        h = self.side / 2.0
        out = rng.uniform(-h, h, size=(m, self.dim))
        return out[0] if n is None else out

    def spec(self):
        return {"kind": "cube", "dim": self.dim, "side": self.side}


def body_from_spec(spec: dict) -> ConvexBody:
    """Build a body from its config record, e.g. {"kind":"ball","dim":2,"radius":1.0}."""
    if "kind" not in spec or "dim" not in spec:
        raise ValueError("body spec needs 'kind' and 'dim'")
    kind = spec["kind"]
    dim = int(spec["dim"])
    if kind == "ball":
        return Ball(dim, radius=float(spec.get("radius", 1.0)),
                    center=spec.get("center"))
    if kind == "ellipsoid":
        if "semi_axes" not in spec:
            raise ValueError("ellipsoid spec needs 'semi_axes'")
        return Ellipsoid(dim, semi_axes=spec["semi_axes"],
                         center=spec.get("center"))
    if kind == "cube":
        return Cube(dim, side=float(spec.get("side", 1.0)))
    raise ValueError(f"unknown body kind {kind!r}")


def sample_poisson_process(
    body: ConvexBody, t: float, rng: np.random.Generator
) -> PointCloud:
    """Poisson process with intensity ``t`` per unit volume, restricted to the body.

    The point count is Poisson(t * volume); given the count, points are
    i.i.d. uniform.  A zero count yields an empty cloud.
    """
    if t <= 0:
        raise ValueError("intensity t must be positive")
    n = int(rng.poisson(t * body.volume))
    if n == 0:
        return PointCloud(body.dim, np.empty((0, body.dim)))
    return PointCloud(body.dim, body.sample_uniform(rng, n))


def ball_cap_volume(d: int, r: float, rho: float) -> float:
    """Volume of the cap cut from a d-ball of radius r by a hyperplane
    at distance rho from the center (the smaller piece)."""
    if not 0.0 <= rho <= r:
        raise ValueError("rho must lie in [0, r]")
    a = rho / r
    # integral of (1-u^2)^((d-1)/2) over [a, 1] via the regularized beta
    half = 0.5 * special.beta(0.5, (d + 1) / 2.0)
    tail = half * (1.0 - special.betainc(0.5, (d + 1) / 2.0, a * a))
    return unit_ball_volume(d - 1) * r**d * tail


def ball_floating_body_radius(d: int, r: float, eps: float) -> float:
    """Radius of the concentric ball whose complementary caps have volume eps.

    Every halfspace cutting volume eps off the ball of radius r touches
    the returned concentric sphere, so the set of points not cut off by
    any such cap is exactly the concentric ball of this radius.  Solved
    by root-finding on the monotone cap-volume function.
    """
    half_volume = unit_ball_volume(d) * r**d / 2.0
    if not 0.0 < eps <= half_volume:
        raise ValueError(
            f"eps must lie in (0, {half_volume:.6g}] (half the ball volume)"
        )
    f = lambda rho: ball_cap_volume(d, r, rho) - eps
    if f(0.0) <= 0.0:  # eps at (or within rounding of) the half volume
        return 0.0
    return float(optimize.brentq(f, 0.0, r, xtol=1e-15, rtol=1e-12))
