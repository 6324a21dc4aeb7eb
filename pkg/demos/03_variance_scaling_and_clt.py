"""Variance scaling rates and the normal limit of the standardized area.

Runs a small intensity grid, fits the log-log variance slopes against the
predicted exponents -1 - 2/(d+1) (intrinsic volumes) and 1 - 2/(d+1)
(face counts), and tracks the Wasserstein-1 distance of the standardized
area to the standard normal as intensity grows.
"""
from randpoly import (
    ExperimentConfig,
    rate_fit,
    run_replications,
    standardize,
    w1_to_normal,
)

config = ExperimentConfig.from_dict({
    "name": "demo-scaling",
    "body": {"kind": "ball", "dim": 2, "radius": 1.0},
    "t_grid": [125.0, 250.0, 500.0, 1000.0, 2000.0],
    "n_reps": 600,
    "functionals": [{"type": "multivariate"}],
    "seed": 99,
    "workers": 4,
})

print("=== replication tables over the intensity grid ===")
tables = []
for i, t in enumerate(config.t_grid):
    table = run_replications(config, i)
    tables.append(table)
    print(f"t = {t:6.0f}: mean V_2 = {table.column('V_2').mean():.5f}, "
          f"var V_2 = {table.column('V_2').var(ddof=1):.3e}, "
          f"mean f_0 = {table.column('f_0').mean():.1f}")

print("\n=== log-log variance slopes (d = 2 targets: -5/3 and +1/3) ===")
for col, target in (("V_1", -5 / 3), ("V_2", -5 / 3), ("f_0", 1 / 3)):
    fit = rate_fit([(tb.t, tb.column(col).var(ddof=1)) for tb in tables])
    print(f"Var[{col}] ~ t^{fit.slope:+.3f}   "
          f"(target {target:+.3f}, r^2 = {fit.r_squared:.4f})")

print("\n=== Wasserstein-1 distance of the standardized area to N(0,1) ===")
for tb in tables:
    w1 = w1_to_normal(standardize(tb.column("V_2")))
    print(f"t = {tb.t:6.0f}: w1 = {w1:.4f}")
print("(decreasing with t, as the central limit theorem predicts)")
