"""Scalar and vector functionals of a polytope.

Everything here is a continuous, motion-invariant quantity: intrinsic
volumes, their linear combinations (with the total intrinsic volume as
the all-ones case), face counts, and the vertex-count-corrected volume
estimator for a known-intensity Poisson sample.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .hull import (
    Polytope,
    exact_intrinsic_volumes,
    f_vector,
    intrinsic_volume_mc,
    volume,
)

__all__ = [
    "ValuationSpec",
    "FunctionalValue",
    "MultivariateValue",
    "euler_indicator",
    "intrinsic_volumes",
    "valuation",
    "wills",
    "wills_spec",
    "oracle_estimate",
    "multivariate_raw",
    "multivariate_labels",
    "build_evaluators",
]

DEFAULT_MC_DIRS = 4096


@dataclass(frozen=True)
class ValuationSpec:
    """Coefficients (c_0, ..., c_d) of a linear combination of intrinsic volumes."""

    coeffs: tuple[float, ...]
    label: str = "valuation"

    def __post_init__(self):
        object.__setattr__(self, "coeffs", tuple(float(c) for c in self.coeffs))

    @property
    def dim(self) -> int:
        return len(self.coeffs) - 1

    def clt_compatible(self) -> bool:
        """Coefficient gate for the normal-limit experiments: no mixed signs,
        and at least one nonzero coefficient with positive index."""
        c = self.coeffs
        no_mixed = all(x >= 0 for x in c) or all(x <= 0 for x in c)
        return no_mixed and any(x != 0.0 for x in c[1:])

    def warn_if_not_clt(self) -> None:
        if not self.clt_compatible():
            warnings.warn(
                f"valuation {self.label!r} fails the coefficient gate "
                "(mixed signs or no nonzero c_k, k >= 1); it can be "
                "evaluated but is not covered by the normal-limit checks",
                stacklevel=3,
            )


def wills_spec(d: int) -> ValuationSpec:
    """The all-ones combination: total intrinsic volume."""
    return ValuationSpec((1.0,) * (d + 1), label="wills")


@dataclass(frozen=True)
class FunctionalValue:
    name: str
    value: float

    def __post_init__(self):
        if not math.isfinite(self.value):
            raise ValueError(f"functional {self.name!r} is not finite")


@dataclass(frozen=True)
class MultivariateValue:
    """Raw components (V_1, ..., V_d, f_0, ..., f_{d-1})."""

    components: np.ndarray
    dim: int

    def __post_init__(self):
        c = np.asarray(self.components, dtype=float)
        if c.shape != (2 * self.dim,):
            raise ValueError("components must have length 2 * dim")
        object.__setattr__(self, "components", c)


def euler_indicator(poly: Polytope) -> float:
    """1 if the polytope is nonempty, else 0."""
    return 0.0 if poly.is_empty() else 1.0


def intrinsic_volumes(
    poly: Polytope,
    mode: str = "exact",
    n_dirs: int = DEFAULT_MC_DIRS,
    rng: np.random.Generator | None = None,
) -> list[float]:
    """(V_0, ..., V_d), exact for ambient dimension <= 3 or by projection
    Monte Carlo for any dimension."""
    d = poly.dim_ambient
    if mode == "exact":
        return exact_intrinsic_volumes(poly)
    if mode == "mc":
        if n_dirs < 2:
            raise ValueError("mc mode needs n_dirs >= 2")
        if rng is None:
            raise ValueError("mc mode needs an rng")
        out = [euler_indicator(poly)]
        for j in range(1, d + 1):
            est, _ = intrinsic_volume_mc(poly, j, n_dirs, rng)
            out.append(est)
        return out
    raise ValueError(f"unknown mode {mode!r}")


def valuation(
    poly: Polytope,
    spec: ValuationSpec,
    mode: str = "exact",
    n_dirs: int = DEFAULT_MC_DIRS,
    rng: np.random.Generator | None = None,
) -> float:
    """Evaluate sum_i c_i V_i(poly)."""
    if spec.dim != poly.dim_ambient:
        raise ValueError(
            f"spec has {spec.dim + 1} coefficients, polytope needs "
            f"{poly.dim_ambient + 1}"
        )
    spec.warn_if_not_clt()
    if all(c == 0.0 for c in spec.coeffs):
        return 0.0
    vols = intrinsic_volumes(poly, mode=mode, n_dirs=n_dirs, rng=rng)
    return float(sum(c * v for c, v in zip(spec.coeffs, vols)))


def wills(poly: Polytope, mode: str = "exact", n_dirs: int = DEFAULT_MC_DIRS,
          rng: np.random.Generator | None = None) -> float:
    """Total intrinsic volume sum_j V_j(poly)."""
    return valuation(poly, wills_spec(poly.dim_ambient), mode=mode,
                     n_dirs=n_dirs, rng=rng)


def oracle_estimate(poly: Polytope, t: float) -> float:
    """Volume estimator for a known-intensity sample: V_d + f_0 / t.

    Unbiased for the volume of the generating body when ``poly`` is the
    hull of a Poisson sample with intensity ``t``; the empty hull maps
    to 0.
    """
    if t <= 0:
        raise ValueError("intensity t must be positive")
    if poly.is_empty():
        return 0.0
    return volume(poly) + poly.n_vertices / t


def multivariate_labels(d: int) -> list[str]:
    return [f"V_{j}" for j in range(1, d + 1)] + [f"f_{j}" for j in range(d)]


def multivariate_raw(
    poly: Polytope,
    mode: str = "exact",
    n_dirs: int = DEFAULT_MC_DIRS,
    rng: np.random.Generator | None = None,
) -> MultivariateValue:
    """Raw vector (V_1, ..., V_d, f_0, ..., f_{d-1}); degeneracies give the
    lower-dimensional values (zeros where undefined)."""
    d = poly.dim_ambient
    vols = intrinsic_volumes(poly, mode=mode, n_dirs=n_dirs, rng=rng)
    fv = f_vector(poly)
    comp = np.array(vols[1:] + [float(c) for c in fv.counts])
    return MultivariateValue(comp, d)


# ---------------------------------------------------------------------------
# column evaluators for the replication engine

# Evaluators receive (poly, ctx) where ctx carries the intensity "t", a
# per-replication "rng", and a per-polytope value cache so the intrinsic
# volumes are computed once no matter how many columns need them.


def _cached_volumes(poly, ctx):
    key = "ivols"
    if key not in ctx["cache"]:
        ctx["cache"][key] = intrinsic_volumes(
            poly, mode=ctx["mode"], n_dirs=ctx["n_dirs"], rng=ctx["rng"]
        )
    return ctx["cache"][key]


def _cached_fvector(poly, ctx):
    if "fvec" not in ctx["cache"]:
        ctx["cache"]["fvec"] = f_vector(poly)
    return ctx["cache"]["fvec"]


def build_evaluators(functional_specs: list[dict], d: int) -> list[tuple]:
    """Turn config functional records into named column evaluators.

    Records: {"type": "intrinsic", "j": int} | {"type": "f", "j": int}
    | {"type": "wills"} | {"type": "oracle"}
    | {"type": "valuation", "label": str, "coeffs": [...]}
    | {"type": "multivariate"}.  Duplicate column names collapse to the
    first occurrence.
    """
    cols: list[tuple] = []
    seen: set[str] = set()

    def add(name, fn):
        if name not in seen:
            seen.add(name)
            cols.append((name, fn))

    for i, spec in enumerate(functional_specs):
        kind = spec.get("type")
        if kind == "intrinsic":
            j = int(spec["j"])
            if not 0 <= j <= d:
                raise ValueError(f"functionals[{i}]: j must be in 0..{d}")
            if j == 0:
                add("V_0", lambda p, ctx: euler_indicator(p))
            else:
                add(f"V_{j}",
                    lambda p, ctx, j=j: float(_cached_volumes(p, ctx)[j]))
        elif kind == "f":
            j = int(spec["j"])
            if not 0 <= j <= d - 1:
                raise ValueError(f"functionals[{i}]: j must be in 0..{d - 1}")
            add(f"f_{j}",
                lambda p, ctx, j=j: float(_cached_fvector(p, ctx)[j]))
        elif kind == "wills":
            add("wills", lambda p, ctx: float(sum(_cached_volumes(p, ctx))))
        elif kind == "oracle":
            add("oracle", lambda p, ctx: oracle_estimate(p, ctx["t"]))
        elif kind == "valuation":
            if "coeffs" not in spec or "label" not in spec:
                raise ValueError(
                    f"functionals[{i}]: valuation needs 'label' and 'coeffs'"
                )
            vspec = ValuationSpec(tuple(spec["coeffs"]), spec["label"])
            if vspec.dim != d:
                raise ValueError(
                    f"functionals[{i}]: coeffs must have length {d + 1}"
                )
            vspec.warn_if_not_clt()
            add(vspec.label,
                lambda p, ctx, v=vspec: float(
                    sum(c * x for c, x in zip(v.coeffs, _cached_volumes(p, ctx)))
                ))
        elif kind == "multivariate":
            for j in range(1, d + 1):
                add(f"V_{j}",
                    lambda p, ctx, j=j: float(_cached_volumes(p, ctx)[j]))
            for j in range(d):
                add(f"f_{j}",
                    lambda p, ctx, j=j: float(_cached_fvector(p, ctx)[j]))
        else:
            raise ValueError(f"functionals[{i}]: unknown type {kind!r}")
    return cols
