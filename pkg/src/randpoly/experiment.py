"""Experiment orchestration: seeded runs, manifests, verification, presets.

``run`` turns a declarative config into replication tables (CSV plus JSON
sidecar), per-intensity summaries, variance rate fits, plot-data files,
and an optional difference-operator bound report, all tied together by a
manifest.  ``verify`` re-derives every summary from the persisted tables,
compares against the stored reports (catching post-hoc edits via
checksums), and evaluates the acceptance assertions bundled with presets.
"""
from __future__ import annotations

import hashlib
import json
import math
import os
import time
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import __version__
from .bodies import body_from_spec
from .config import ConfigError, ExperimentConfig
from .functionals import multivariate_labels
from .malliavin import (
    VectorFunctional,
    estimate_gammas,
    estimate_taus,
    ms_bound_multivariate,
)
from .rng import stream
from .stats import (
    ReplicationTable,
    covariance_matrix,
    rate_fit,
    run_replications,
    variance_identity_check,
    w1_bootstrap_se,
)

__all__ = ["RunManifest", "run", "verify", "PRESETS", "preset_config"]

OUTDIR_ENV = "RANDPOLY_OUTDIR"

# stage key separating the bound-estimation stream from replication streams
MALLIAVIN_STAGE = 1_000_003
BOOTSTRAP_STAGE = 1_000_019


def _sha256(path: Path) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(65536), b""):
            h.update(chunk)
    return h.hexdigest()


def _config_hash(config: ExperimentConfig) -> str:
    blob = json.dumps(config.to_dict(), sort_keys=True).encode()
    return hashlib.sha256(blob).hexdigest()


@dataclass
class RunManifest:
    config: dict
    config_hash: str
    version: str
    status: str
    wall_seconds: float
    seeds: dict
    tables: list[dict]
    reports: dict
    preset: str | None = None
    error: str | None = None

    def to_dict(self) -> dict:
        return {
            "config": self.config,
            "config_hash": self.config_hash,
            "version": self.version,
            "status": self.status,
            "wall_seconds": self.wall_seconds,
            "seeds": self.seeds,
            "tables": self.tables,
            "reports": self.reports,
            "preset": self.preset,
            "error": self.error,
        }

    @staticmethod
    def from_file(path: str | Path) -> "RunManifest":
        d = json.loads(Path(path).read_text())
        return RunManifest(**d)

    def write(self, path: str | Path) -> None:
        Path(path).write_text(
            json.dumps(self.to_dict(), indent=2, sort_keys=True) + "\n"
        )


def _resolve_outdir(config: ExperimentConfig, outdir) -> Path:
    if outdir is not None:
        base = Path(outdir)
    elif config.outputs:
        base = Path(config.outputs)
    else:
        base = Path(os.environ.get(OUTDIR_ENV, "runs"))
    out = base / config.name
    out.mkdir(parents=True, exist_ok=True)
    (out / "plots").mkdir(exist_ok=True)
    return out


def _variance_se(col: np.ndarray) -> float:
    # standard error of the sample variance from the fourth central moment
    n = len(col)
    c = col - col.mean()
    m2 = float((c**2).mean())
    m4 = float((c**4).mean())
    inner = m4 - m2 * m2 * (n - 3.0) / (n - 1.0)
    return math.sqrt(max(inner, 0.0) / n)


def _summarize_table(table: ReplicationTable, seed: int) -> dict:
    """Per-intensity report: moments, W1 distances, correlation structure."""
    names = [n for n in table.names if n != "n_points"]
    varying = [n for n in names if table.column(n).var(ddof=1) > 0.0]
    constant = [n for n in names if n not in varying]
    out = {
        "t": table.t,
        "n_reps": table.n_reps,
        "means": {n: float(table.column(n).mean()) for n in names},
        "variances": {n: float(table.column(n).var(ddof=1)) for n in names},
        "variance_se": {n: _variance_se(table.column(n)) for n in varying},
        "constant_columns": constant,
    }
    if varying:
        ss = covariance_matrix(table, varying)
        rng = stream(seed, BOOTSTRAP_STAGE, table.t_index)
        out["w1_to_normal"] = {n: ss.w1_to_normal[n] for n in varying}
        out["w1_se"] = {
            n: w1_bootstrap_se(ss.standardized[n], rng=rng) for n in varying
        }
        out["correlation_columns"] = list(ss.columns)
        out["correlation"] = [[float(v) for v in row] for row in ss.covariance]
        out["correlation_ci"] = _correlation_bootstrap_ci(
            table.matrix(list(ss.columns)), ss.columns, rng
        )
        out["rank_estimate"] = ss.rank_estimate
        out["eigenvalues"] = [float(v) for v in ss.eigenvalues]
    return out


def _correlation_bootstrap_ci(mat: np.ndarray, names, rng,
                              n_boot: int = 200) -> dict:
    """Central 95% bootstrap intervals for each correlation entry.

    The limiting correlations are unknown, so reports carry trajectories
    with uncertainty bands instead of asserting limits.
    """
    n, m = mat.shape
    pairs = [(i, j) for i in range(m) for j in range(i + 1, m)]
    samples = np.empty((n_boot, len(pairs)))
    for b in range(n_boot):
        sub = mat[rng.integers(0, n, size=n)]
        with np.errstate(invalid="ignore"):
            corr = np.corrcoef(sub, rowvar=False)
        for p, (i, j) in enumerate(pairs):
            samples[b, p] = corr[i, j]
    out = {}
    for p, (i, j) in enumerate(pairs):
        col = samples[:, p]
        col = col[np.isfinite(col)]
        lo, hi = np.percentile(col, [2.5, 97.5]) if len(col) else (math.nan,
                                                                   math.nan)
        out[f"{names[i]}.{names[j]}"] = [float(lo), float(hi)]
    return out


def _write_plot_data(outdir: Path, summaries: list[dict]) -> list[str]:
    """Plot-ready CSVs (x, y, yerr columns); no rendering dependency."""
    written = []

    def emit(name: str, header: list[str], rows: list[list]) -> None:
        p = outdir / "plots" / name
        with open(p, "w") as fh:
            fh.write(",".join(header) + "\n")
            for row in rows:
                fh.write(",".join("%.17g" % v for v in row) + "\n")
        written.append(str(p))

    cols = sorted({c for s in summaries for c in s["variances"]})
    var_header = ["t"]
    w1_header = ["t"]
    for c in cols:
        var_header += [f"{c}.var", f"{c}.se"]
        w1_header += [f"{c}.w1", f"{c}.se"]
    var_rows, w1_rows = [], []
    for s in summaries:
        vrow, wrow = [s["t"]], [s["t"]]
        for c in cols:
            vrow += [s["variances"].get(c, math.nan),
                     s.get("variance_se", {}).get(c, math.nan)]
            wrow += [s.get("w1_to_normal", {}).get(c, math.nan),
                     s.get("w1_se", {}).get(c, math.nan)]
        var_rows.append(vrow)
        w1_rows.append(wrow)
    emit("variance_vs_t.csv", var_header, var_rows)
    emit("w1_vs_t.csv", w1_header, w1_rows)

    # correlation trajectories and eigenvalue spectra over the grid
    with_corr = [s for s in summaries if "correlation" in s]
    if with_corr:
        names = with_corr[0]["correlation_columns"]
        pairs = [(i, j) for i in range(len(names)) for j in range(i + 1, len(names))]
        header = ["t"]
        for i, j in pairs:
            key = f"{names[i]}.{names[j]}"
            header += [f"corr.{key}", f"corr.{key}.lo", f"corr.{key}.hi"]
        rows = []
        for s in with_corr:
            if s["correlation_columns"] != names:
                continue
            corr = s["correlation"]
            row = [s["t"]]
            for i, j in pairs:
                key = f"{names[i]}.{names[j]}"
                ci = s.get("correlation_ci", {}).get(key, [math.nan, math.nan])
                row += [corr[i][j], ci[0], ci[1]]
            rows.append(row)
        emit("correlation_vs_t.csv", header, rows)
        k = max(len(s["eigenvalues"]) for s in with_corr)
        header = ["t"] + [f"eig_{i + 1}" for i in range(k)]
        rows = []
        for s in with_corr:
            eig = list(s["eigenvalues"]) + [math.nan] * (k - len(s["eigenvalues"]))
            rows.append([s["t"]] + eig)
        emit("eigenvalues_vs_t.csv", header, rows)
    return written


def _malliavin_report(config: ExperimentConfig, table: ReplicationTable) -> dict:
    """Estimate the error terms at the configured intensity using plug-in
    moments from the replication table."""
    ms = config.malliavin
    body = body_from_spec(config.body)
    rng = stream(config.seed, MALLIAVIN_STAGE, table.t_index)
    d = body.dim
    from .functionals import intrinsic_volumes  # local import to avoid cycle
    from .hull import f_vector

    if ms.multivariate:
        labels = multivariate_labels(d)
        for lab in labels:
            if lab not in table.columns:
                raise ConfigError(
                    "malliavin", f"table lacks column {lab!r}; include the "
                    "multivariate functional in the config"
                )
        scales = np.array([table.column(l).std(ddof=1) for l in labels])
        ss = covariance_matrix(table, labels)

        def raw(poly):
            vols = intrinsic_volumes(poly, mode="exact")
            fv = f_vector(poly)
            return np.array(vols[1:] + [float(c) for c in fv.counts])

        vf = VectorFunctional(fn=raw, labels=tuple(labels), scales=scales)
        g = estimate_gammas(body, ms.t, vf, ss.covariance, ms.n_outer,
                            ms.n_inner, rng, sampling=ms.sampling,
                            shell_c=ms.c)
        return {
            "kind": "multivariate",
            "labels": list(g.labels),
            "gamma1": g.gamma1, "gamma2": g.gamma2, "gamma3": g.gamma3,
            "se": {"gamma1": g.se1, "gamma2": g.se2, "gamma3": g.se3},
            "bound": ms_bound_multivariate(g),
            "n_outer": g.n_outer, "n_inner": g.n_inner,
            "t": g.t, "sampling": g.sampling,
        }

    label = ms.functional
    if label == "V_d":
        label = f"V_{d}"
    col = table.column(label)
    variance = float(col.var(ddof=1))

    def scalar(poly):
        if label.startswith("V_"):
            j = int(label.split("_")[1])
            return intrinsic_volumes(poly, mode="exact")[j]
        if label.startswith("f_"):
            j = int(label.split("_")[1])
            return float(f_vector(poly)[j])
        if label == "wills":
            return float(sum(intrinsic_volumes(poly, mode="exact")))
        raise ConfigError("malliavin.functional",
                          f"cannot rebuild evaluator for column {label!r}")

    tau = estimate_taus(body, ms.t, scalar, variance, ms.n_outer, ms.n_inner,
                        rng, sampling=ms.sampling, shell_c=ms.c, label=label)
    return {
        "kind": "univariate",
        "functional": label,
        "tau1": tau.tau1, "tau2": tau.tau2, "tau3": tau.tau3,
        "se": {"tau1": tau.se1, "tau2": tau.se2, "tau3": tau.se3},
        "bound": tau.bound(),
        "bound_se": tau.bound_standard_error(),
        "variance_estimate": variance,
        "n_outer": tau.n_outer, "n_inner": tau.n_inner,
        "t": tau.t, "sampling": tau.sampling,
    }


def run(config, outdir=None, workers: int | None = None,
        preset: str | None = None) -> RunManifest:
    """Execute a config end to end; returns the manifest (also persisted).

    ``config`` may be an ExperimentConfig, a dict, a path to a JSON file,
    or a preset name.
    """
    if isinstance(config, (str, Path)) and str(config) in PRESETS:
        preset = str(config)
        config = preset_config(preset)
    elif isinstance(config, (str, Path)):
        config = ExperimentConfig.from_file(config)
    elif isinstance(config, dict):
        config = ExperimentConfig.from_dict(config)

    out = _resolve_outdir(config, outdir)
    started = time.perf_counter()
    seeds = {
        "base": config.seed,
        "replication_stage_key": "(seed, t_index, rep_index)",
        "malliavin_stage_key": [config.seed, MALLIAVIN_STAGE],
    }
    manifest = RunManifest(
        config=config.to_dict(), config_hash=_config_hash(config),
        version=__version__, status="running", wall_seconds=0.0,
        seeds=seeds, tables=[], reports={}, preset=preset,
    )
    manifest_path = out / "manifest.json"
    try:
        summaries = []
        tables = []
        for ti in range(len(config.t_grid)):
            table = run_replications(config, ti, workers=workers)
            csv_path = out / f"table_t{ti}.csv"
            table.write_csv(csv_path)
            manifest.tables.append({
                "t_index": ti,
                "t": table.t,
                "csv": str(csv_path),
                "meta": str(csv_path.with_suffix(".meta.json")),
                "sha256": _sha256(csv_path),
            })
            summaries.append(_summarize_table(table, config.seed))
            tables.append(table)

        report: dict = {"summaries": summaries}
        if len(config.t_grid) >= 3:
            rates = {}
            cols = sorted({c for s in summaries for c in s["variances"]})
            for c in cols:
                pairs = [(s["t"], s["variances"][c]) for s in summaries
                         if s["variances"].get(c, 0.0) > 0.0]
                if len(pairs) >= 3:
                    fit = rate_fit(pairs)
                    rates[c] = {
                        "slope": fit.slope, "intercept": fit.intercept,
                        "r_squared": fit.r_squared, "t_grid": list(fit.t_grid),
                    }
            report["rate_fits"] = rates
        if "oracle" in tables[0].names and f"V_{body_from_spec(config.body).dim}" in tables[0].names:
            report["oracle_variance_ratio"] = {
                str(tb.t): variance_identity_check(tb, tb) for tb in tables
            }
        if config.malliavin is not None:
            ti = list(config.t_grid).index(config.malliavin.t)
            report["malliavin_stein"] = _malliavin_report(config, tables[ti])

        report_path = out / "report.json"
        report_path.write_text(json.dumps(report, indent=2, sort_keys=True) + "\n")
        plot_files = _write_plot_data(out, summaries)
        manifest.reports = {"report": str(report_path), "plots": plot_files}
        manifest.status = "completed"
    except Exception as exc:
        manifest.status = "failed"
        manifest.error = f"{type(exc).__name__}: {exc}"
        manifest.wall_seconds = time.perf_counter() - started
        manifest.write(manifest_path)
        raise
    manifest.wall_seconds = time.perf_counter() - started
    manifest.write(manifest_path)
    return manifest


# ---------------------------------------------------------------------------
# verification


def _isclose(a, b, rel=1e-12) -> bool:
    if isinstance(a, float) and isinstance(b, float):
        if math.isnan(a) and math.isnan(b):
            return True
        return math.isclose(a, b, rel_tol=rel, abs_tol=1e-300)
    return a == b


def _deep_compare(a, b, path="") -> list[str]:
    diffs = []
    if isinstance(a, dict) and isinstance(b, dict):
        for k in sorted(set(a) | set(b)):
            if k not in a or k not in b:
                diffs.append(f"{path}.{k}: missing on one side")
            else:
                diffs += _deep_compare(a[k], b[k], f"{path}.{k}")
    elif isinstance(a, list) and isinstance(b, list):
        if len(a) != len(b):
            diffs.append(f"{path}: length {len(a)} != {len(b)}")
        else:
            for i, (x, y) in enumerate(zip(a, b)):
                diffs += _deep_compare(x, y, f"{path}[{i}]")
    else:
        fa = float(a) if isinstance(a, (int, float)) else a
        fb = float(b) if isinstance(b, (int, float)) else b
        if isinstance(fa, float) and isinstance(fb, float):
            if not _isclose(fa, fb):
                diffs.append(f"{path}: {a} != {b}")
        elif a != b:
            diffs.append(f"{path}: {a!r} != {b!r}")
    return diffs


def verify(manifest_path, quiet: bool = False) -> dict:
    """Re-derive all summaries from the stored tables and evaluate preset
    assertions; returns a report with per-check pass/fail entries."""
    manifest_path = Path(manifest_path)
    manifest = RunManifest.from_file(manifest_path)
    config = ExperimentConfig.from_dict(manifest.config)
    checks: list[dict] = []

    def check(name, passed, detail=""):
        checks.append({"name": name, "passed": bool(passed), "detail": detail})
        if not quiet:
            print(f"[{'PASS' if passed else 'FAIL'}] {name}"
                  + (f"  ({detail})" if detail else ""))

    tables = []
    for entry in manifest.tables:
        p = Path(entry["csv"])
        if not p.exists():
            check(f"table {p.name} exists", False)
            continue
        digest = _sha256(p)
        check(f"checksum {p.name}", digest == entry["sha256"],
              f"{digest[:12]} vs {entry['sha256'][:12]}")
        try:
            tables.append(ReplicationTable.read_csv(p))
        except (ValueError, KeyError) as exc:
            check(f"table {p.name} readable", False, str(exc))

    report_path = manifest.reports.get("report")
    if report_path and Path(report_path).exists() and len(tables) == len(manifest.tables):
        stored = json.loads(Path(report_path).read_text())
        recomputed = {"summaries": [
            _summarize_table(tb, config.seed) for tb in tables
        ]}
        if "rate_fits" in stored:
            rates = {}
            for c in stored["rate_fits"]:
                pairs = [(s["t"], s["variances"][c])
                         for s in recomputed["summaries"]
                         if s["variances"].get(c, 0.0) > 0.0]
                fit = rate_fit(pairs)
                rates[c] = {"slope": fit.slope, "intercept": fit.intercept,
                            "r_squared": fit.r_squared,
                            "t_grid": list(fit.t_grid)}
            recomputed["rate_fits"] = rates
        if "oracle_variance_ratio" in stored:
            recomputed["oracle_variance_ratio"] = {
                str(tb.t): variance_identity_check(tb, tb) for tb in tables
            }
        diffs = []
        for key in ("summaries", "rate_fits", "oracle_variance_ratio"):
            if key in stored and key in recomputed:
                diffs += _deep_compare(stored[key], recomputed[key], key)
        check("report reproducible from tables", not diffs,
              "; ".join(diffs[:3]))
        stored_for_assert = stored
    else:
        stored_for_assert = {}

    if manifest.preset and manifest.preset in PRESETS:
        assertions = PRESETS[manifest.preset].get("assertions", [])
        for a in assertions:
            name, passed, detail = _evaluate_assertion(a, tables,
                                                       stored_for_assert)
            check(name, passed, detail)

    ok = all(c["passed"] for c in checks)
    result = {"ok": ok, "checks": checks, "manifest": str(manifest_path)}
    if not quiet:
        print(f"verify: {'all checks passed' if ok else 'FAILURES present'}")
    return result


def _evaluate_assertion(a: dict, tables: list[ReplicationTable],
                        report: dict):
    kind = a["kind"]
    summaries = report.get("summaries", [])

    def summary_at(t):
        for s in summaries:
            if s["t"] == t:
                return s
        raise KeyError(f"no summary at t={t}")

    try:
        if kind == "slope_range":
            fit = report["rate_fits"][a["column"]]
            ok = a["lo"] <= fit["slope"] <= a["hi"]
            return (f"slope[{a['column']}] in [{a['lo']:.3g}, {a['hi']:.3g}]",
                    ok, f"slope={fit['slope']:.4f}")
        if kind == "mean_close":
            s = summary_at(a["t"])
            mean = s["means"][a["column"]]
            se = math.sqrt(s["variances"][a["column"]] / s["n_reps"])
            tol = a.get("se_mult", 4) * se
            ok = abs(mean - a["target"]) <= tol
            return (f"mean[{a['column']}] at t={a['t']} near {a['target']:.6g}",
                    ok, f"|{mean:.6g} - {a['target']:.6g}| vs {tol:.2g}")
        if kind == "w1_max":
            s = summary_at(a["t"])
            w1 = s["w1_to_normal"][a["column"]]
            return (f"w1[{a['column']}] at t={a['t']} <= {a['max']}",
                    w1 <= a["max"], f"w1={w1:.4f}")
        if kind == "w1_decreasing":
            first = summaries[0]["w1_to_normal"][a["column"]]
            last = summaries[-1]["w1_to_normal"][a["column"]]
            return (f"w1[{a['column']}] decreases over the grid",
                    last < first, f"{first:.4f} -> {last:.4f}")
        if kind == "ratio_range":
            val = report["oracle_variance_ratio"][str(float(a["t"]))]
            ok = a["lo"] <= val <= a["hi"]
            return ("oracle variance ratio in "
                    f"[{a['lo']}, {a['hi']}]", ok, f"ratio={val:.4f}")
        if kind == "rank_max":
            s = summary_at(a["t"])
            ok = s["rank_estimate"] <= a["max"]
            return (f"correlation rank at t={a['t']} <= {a['max']}",
                    ok, f"rank={s['rank_estimate']}")
        if kind == "corr_min":
            s = summary_at(a["t"])
            names = s["correlation_columns"]
            corr = np.asarray(s["correlation"])
            sel = [names.index(c) for c in a["columns"]]
            worst = min(corr[i][j] for i in sel for j in sel if i < j)
            ok = worst >= a["min"]
            return (f"pairwise correlations of {a['columns']} >= {a['min']}",
                    ok, f"min={worst:.4f}")
        if kind == "bound_dominates_w1":
            ms = report["malliavin_stein"]
            s = summary_at(ms["t"])
            w1 = s["w1_to_normal"][a["column"]]
            se = math.sqrt(ms.get("bound_se", 0.0) ** 2
                           + s["w1_se"][a["column"]] ** 2)
            ok = ms["bound"] - w1 >= -4.0 * se
            return ("difference-operator bound dominates empirical w1",
                    ok, f"bound={ms['bound']:.3g}, w1={w1:.4f}")
    except (KeyError, IndexError) as exc:
        return (f"assertion {kind}", False, f"missing data: {exc}")
    return (f"assertion {kind}", False, "unknown assertion kind")


# ---------------------------------------------------------------------------
# presets


def _ball(d):
    return {"kind": "ball", "dim": d, "radius": 1.0}


PRESETS: dict[str, dict] = {
    "smoke": {
        "description": "tiny end-to-end run (seconds)",
        "config": {
            "name": "smoke",
            "body": _ball(2),
            "t_grid": [50.0, 100.0, 200.0],
            "n_reps": 200,
            "functionals": [{"type": "multivariate"}, {"type": "oracle"},
                            {"type": "wills"}],
            "seed": 1,
        },
        "assertions": [
            {"kind": "mean_close", "column": "oracle", "t": 200.0,
             "target": math.pi, "se_mult": 4},
        ],
    },
    "theorem1": {
        "description": "variance scaling of V_1, V_2, f_0 in the plane",
        "config": {
            "name": "theorem1",
            "body": _ball(2),
            "t_grid": [250.0, 500.0, 1000.0, 2000.0, 4000.0],
            "n_reps": 2000,
            "functionals": [{"type": "multivariate"}],
            "seed": 20,
        },
        "assertions": [
            {"kind": "slope_range", "column": "V_2",
             "lo": -5.0 / 3 - 0.15, "hi": -5.0 / 3 + 0.15},
            {"kind": "slope_range", "column": "V_1",
             "lo": -5.0 / 3 - 0.15, "hi": -5.0 / 3 + 0.15},
            {"kind": "slope_range", "column": "f_0",
             "lo": 1.0 / 3 - 0.15, "hi": 1.0 / 3 + 0.15},
        ],
    },
    "theorem1_d3": {
        "description": "variance scaling of V_3 and f_0 in space",
        "config": {
            "name": "theorem1_d3",
            "body": _ball(3),
            "t_grid": [250.0, 500.0, 1000.0, 2000.0],
            "n_reps": 500,
            "functionals": [{"type": "multivariate"}],
            "seed": 21,
        },
        "assertions": [
            {"kind": "slope_range", "column": "V_3",
             "lo": -1.5 - 0.2, "hi": -1.5 + 0.2},
            {"kind": "slope_range", "column": "f_0",
             "lo": 0.5 - 0.2, "hi": 0.5 + 0.2},
        ],
    },
    "oracle": {
        "description": "unbiasedness and the exact variance identity",
        "config": {
            "name": "oracle",
            "body": _ball(2),
            "t_grid": [1000.0],
            "n_reps": 5000,
            "functionals": [{"type": "multivariate"}, {"type": "oracle"}],
            "seed": 22,
        },
        "assertions": [
            {"kind": "mean_close", "column": "oracle", "t": 1000.0,
             "target": math.pi, "se_mult": 4},
            {"kind": "ratio_range", "t": 1000.0, "lo": 0.9, "hi": 1.1},
            {"kind": "corr_min", "t": 1000.0, "columns": ["V_1", "V_2"],
             "min": -0.05},
            {"kind": "rank_max", "t": 1000.0, "max": 3},
        ],
    },
    "clt_trend": {
        "description": "Wasserstein distance of the standardized area",
        "config": {
            "name": "clt_trend",
            "body": _ball(2),
            "t_grid": [250.0, 4000.0],
            "n_reps": 5000,
            "functionals": [{"type": "intrinsic", "j": 2}],
            "seed": 23,
        },
        "assertions": [
            {"kind": "w1_decreasing", "column": "V_2"},
            {"kind": "w1_max", "column": "V_2", "t": 4000.0, "max": 0.05},
        ],
    },
    "bound": {
        "description": "difference-operator bound against the empirical w1",
        "config": {
            "name": "bound",
            "body": _ball(2),
            "t_grid": [500.0],
            "n_reps": 5000,
            "functionals": [{"type": "multivariate"}],
            "seed": 24,
            "malliavin": {"t": 500.0, "functional": "V_2", "n_outer": 2000,
                          "n_inner": 8, "sampling": "boundary_shell",
                          "c": 2.0},
        },
        "assertions": [
            {"kind": "bound_dominates_w1", "column": "V_2"},
        ],
    },
}


def preset_config(name: str) -> ExperimentConfig:
    if name not in PRESETS:
        raise ConfigError("preset", f"unknown preset {name!r}; "
                                    f"known: {', '.join(sorted(PRESETS))}")
    return ExperimentConfig.from_dict(PRESETS[name]["config"])
