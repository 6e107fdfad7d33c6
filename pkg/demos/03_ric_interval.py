# %% [markdown]
# # The probabilistic RIC interval
#
# The lower end is (k-1) mu_E + sigma^2/mu_E - C log k / sqrt(k); the upper end
# adds k f and a Bernstein radius a to (k-1) mu_E and holds with probability at
# least 1 - exp(-t). For uniform fluctuations on [-eps, eps]:
# sigma^2 = eps^2/3, f = eps/2, v = eps^2/12.

# %%
import math

from qef import moments_uniform, theorem1_lower, theorem1_upper, welch_bound
from qef.spectral import PIZZO_C_PILOT

N, n = 500, 100
mu = welch_bound(n, N)
eps = 0.3 * mu
m = moments_uniform(eps)
print(f"mu_E={mu:.6f} eps={eps:.6f} sigma2={m.sigma2:.3e} f={m.f:.3e} v={m.v:.3e}")

# %%
for k in (6, 8, 10):
    primary = theorem1_lower(k, mu, m.sigma2, 0.0)
    full = theorem1_lower(k, mu, m.sigma2, PIZZO_C_PILOT)
    r = theorem1_upper(k, N, mu, eps, m.f, m.v, 3.0)
    print(f"k={k:2d}  lower(C=0)={primary:.4f}  lower(C={PIZZO_C_PILOT})={full:.4f}  "
          f"upper={r.upper:.4f}  a={r.radius_a:.4f}  P>={r.probability:.4f}")

# %% [markdown]
# The upper end is loose because of the union bound over every k-subset, but it
# collapses onto the equiangular value as eps shrinks.

# %%
for d in range(2, 9):
    e = 10.0**-d
    mm = moments_uniform(e)
    r = theorem1_upper(10, N, mu, e, mm.f, mm.v, 3.0)
    print(f"eps=1e-{d}  upper - 9 mu_E = {r.upper - 9 * mu:.3e}  (envelope {100 * e:.1e})")
