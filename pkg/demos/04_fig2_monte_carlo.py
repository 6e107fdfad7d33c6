# %% [markdown]
# # Monte Carlo: clique RIC against the lower-bound curve
#
# N = 500, n from 100 to 480, eps = 0.3 mu_E, planted cliques of size 6 to 10.
# Each cell averages clique_ric over independent draws and sets it next to
# (k-1) mu_E + sigma^2/mu_E. Coverage columns give the fraction of draws below
# the high-probability upper end.
#
# Run from the repository root:  python demos/04_fig2_monte_carlo.py [trials]

# %%
import sys
from pathlib import Path

from qef.experiments import ExperimentConfig, emit_results, run_coverage

trials = int(sys.argv[1]) if len(sys.argv) > 1 else 50
config = ExperimentConfig(N=500, n_values=(100, 200, 300, 400, 480), k_values=(6, 7, 8, 9, 10),
                          eps_frac=0.3, trials=trials, t_values=(1.0, 3.0), base_seed=1)
rows = run_coverage(config)

# %%
print(f"{'n':>4} {'k':>3} {'theory':>8} {'mean':>8} {'std':>7} {'|diff|/eps':>10} {'cov@3':>6}")
for r in rows:
    print(f"{r.n:>4} {r.k:>3} {r.theory_lower_primary:8.4f} {r.empirical_mean:8.4f} "
          f"{r.empirical_std:7.4f} {abs(r.empirical_mean - r.theory_lower_primary) / r.eps:10.3f} "
          f"{r.coverage_at_t[3.0]:6.3f}")

out = Path("fig2_results.csv")
emit_results(rows, out)
print("wrote", out)

# %% [markdown]
# Plot, if matplotlib is around.

# %%
try:
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt
except ImportError:
    plt = None

if plt is not None:
    fig, ax = plt.subplots(figsize=(6, 4))
    for k in config.k_values:
        sel = [r for r in rows if r.k == k]
        ns = [r.n for r in sel]
        ax.plot(ns, [r.theory_lower_primary for r in sel], "-", label=f"k={k} theory")
        ax.errorbar(ns, [r.empirical_mean for r in sel], yerr=[r.empirical_std for r in sel],
                    fmt="o", ms=3, capsize=2)
    ax.set_xlabel("n")
    ax.set_ylabel("RIC")
    ax.legend(fontsize=7)
    fig.tight_layout()
    fig.savefig("fig2.png", dpi=120)
    print("wrote fig2.png")
