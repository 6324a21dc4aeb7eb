"""Declarative experiment configuration: parsing and validation.

Configs are single JSON documents.  Validation failures raise
:class:`ConfigError` carrying the key path of the offending entry so the
message pinpoints the problem inside the file.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

from .bodies import body_from_spec
from .functionals import ValuationSpec, build_evaluators

__all__ = ["ConfigError", "ExperimentConfig", "MalliavinSettings"]


class ConfigError(ValueError):
    def __init__(self, path: str, message: str):
        self.path = path
        super().__init__(f"{path}: {message}")


@dataclass(frozen=True)
class MalliavinSettings:
    t: float
    functional: str = "V_d"
    n_outer: int = 2000
    n_inner: int = 8
    sampling: str = "boundary_shell"
    c: float = 2.0
    multivariate: bool = False

    @staticmethod
    def from_dict(d: dict, t_grid: list[float]) -> "MalliavinSettings":
        where = "malliavin"
        if "t" not in d:
            raise ConfigError(where + ".t", "required (an entry of t_grid)")
        t = float(d["t"])
        if t not in t_grid:
            raise ConfigError(where + ".t", f"{t} is not in t_grid")
        n_outer = int(d.get("n_outer", 2000))
        n_inner = int(d.get("n_inner", 8))
        if n_outer < 2:
            raise ConfigError(where + ".n_outer", "must be >= 2")
        if n_inner < 4:
            raise ConfigError(where + ".n_inner",
                              "must be >= 4 (disjoint draw groups)")
        sampling = d.get("sampling", "boundary_shell")
        if sampling not in ("plain", "boundary_shell"):
            raise ConfigError(where + ".sampling",
                              "must be 'plain' or 'boundary_shell'")
        c = float(d.get("c", 2.0))
        if c <= 0:
            raise ConfigError(where + ".c", "must be positive")
        return MalliavinSettings(
            t=t, functional=str(d.get("functional", "V_d")),
            n_outer=n_outer, n_inner=n_inner, sampling=sampling, c=c,
            multivariate=bool(d.get("multivariate", False)),
        )

    def to_dict(self) -> dict:
        return {
            "t": self.t, "functional": self.functional,
            "n_outer": self.n_outer, "n_inner": self.n_inner,
            "sampling": self.sampling, "c": self.c,
            "multivariate": self.multivariate,
        }


@dataclass(frozen=True)
class ExperimentConfig:
    name: str
    body: dict
    t_grid: tuple[float, ...]
    n_reps: tuple[int, ...]  # one entry per t
    functionals: tuple[dict, ...]
    mode: str = "exact"
    n_dirs: int = 4096
    seed: int = 0
    workers: int = 1
    malliavin: MalliavinSettings | None = None
    outputs: str | None = None
    allow_nonsmooth: bool = False
    allow_non_clt: bool = False

    @staticmethod
    def from_dict(raw: dict) -> "ExperimentConfig":
        def need(key):
            if key not in raw:
                raise ConfigError(key, "required key is missing")
            return raw[key]

        body_spec = need("body")
        try:
            body = body_from_spec(body_spec)
        except ValueError as exc:
            raise ConfigError("body", str(exc)) from exc

        t_grid = [float(t) for t in need("t_grid")]
        if not t_grid:
            raise ConfigError("t_grid", "must be non-empty")
        if any(t <= 0 for t in t_grid):
            raise ConfigError("t_grid", "intensities must be positive")
        if any(b <= a for a, b in zip(t_grid, t_grid[1:])):
            raise ConfigError("t_grid", "must be strictly increasing")

        n_reps_raw = need("n_reps")
        if isinstance(n_reps_raw, (int, float)):
            n_reps = [int(n_reps_raw)] * len(t_grid)
        else:
            n_reps = [int(n) for n in n_reps_raw]
            if len(n_reps) != len(t_grid):
                raise ConfigError("n_reps",
                                  "list must have one entry per t_grid value")
        for i, n in enumerate(n_reps):
            if n < 2:
                raise ConfigError(f"n_reps[{i}]", "must be >= 2")

        functionals = need("functionals")
        if not functionals:
            raise ConfigError("functionals", "must be non-empty")

        allow_non_clt = bool(raw.get("allow_non_clt", False))
        for i, f in enumerate(functionals):
            if (f.get("type") == "valuation" and not allow_non_clt
                    and "coeffs" in f):
                vs = ValuationSpec(tuple(f["coeffs"]),
                                   f.get("label", "valuation"))
                if not vs.clt_compatible():
                    raise ConfigError(
                        f"functionals[{i}]",
                        "valuation fails the coefficient gate (mixed signs "
                        "or no nonzero c_k for k >= 1); set allow_non_clt "
                        "to evaluate it anyway",
                    )
        try:
            build_evaluators(list(functionals), body.dim)
        except ValueError as exc:
            raise ConfigError("functionals", str(exc)) from exc

        mode = raw.get("mode", "exact")
        if mode not in ("exact", "mc"):
            raise ConfigError("mode", "must be 'exact' or 'mc'")
        if mode == "exact" and body.dim > 3:
            raise ConfigError("mode", "exact intrinsic volumes need dim <= 3; "
                                      "use mode='mc'")
        n_dirs = int(raw.get("n_dirs", 4096))
        if mode == "mc" and n_dirs < 2:
            raise ConfigError("n_dirs", "must be >= 2 in mc mode")

        allow_nonsmooth = bool(raw.get("allow_nonsmooth", False))
        if not body.is_smooth and not allow_nonsmooth:
            raise ConfigError(
                "body",
                f"kind {body.kind!r} has non-smooth boundary; the limit "
                "theorems assume smoothness -- set allow_nonsmooth to "
                "run anyway",
            )

        workers = int(raw.get("workers", 1))
        if workers < 1:
            raise ConfigError("workers", "must be >= 1")

        malliavin = None
        if raw.get("malliavin") is not None:
            malliavin = MalliavinSettings.from_dict(raw["malliavin"], t_grid)

        return ExperimentConfig(
            name=str(raw.get("name", "experiment")),
            body=dict(body_spec),
            t_grid=tuple(t_grid),
            n_reps=tuple(n_reps),
            functionals=tuple(dict(f) for f in functionals),
            mode=mode,
            n_dirs=n_dirs,
            seed=int(raw.get("seed", 0)),
            workers=workers,
            malliavin=malliavin,
            outputs=raw.get("outputs"),
            allow_nonsmooth=allow_nonsmooth,
            allow_non_clt=allow_non_clt,
        )

    @staticmethod
    def from_file(path: str | Path) -> "ExperimentConfig":
        path = Path(path)
        try:
            raw = json.loads(path.read_text())
        except json.JSONDecodeError as exc:
            raise ConfigError(str(path), f"invalid JSON: {exc}") from exc
        try:
            return ExperimentConfig.from_dict(raw)
        except ConfigError as exc:
            raise ConfigError(f"{path}:{exc.path}",
                              str(exc).split(": ", 1)[1]) from exc

    def to_dict(self) -> dict:
        d = {
            "name": self.name,
            "body": self.body,
            "t_grid": list(self.t_grid),
            "n_reps": list(self.n_reps),
            "functionals": [dict(f) for f in self.functionals],
            "mode": self.mode,
            "n_dirs": self.n_dirs,
            "seed": self.seed,
            "workers": self.workers,
            "allow_nonsmooth": self.allow_nonsmooth,
            "allow_non_clt": self.allow_non_clt,
        }
        if self.malliavin is not None:
            d["malliavin"] = self.malliavin.to_dict()
        if self.outputs is not None:
            d["outputs"] = self.outputs
        return d
