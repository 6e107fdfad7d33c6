# %% [markdown]
# # Frames, coherence and the Welch bound
#
# The Welch bound is the smallest coherence any unit-norm frame of N vectors
# in R^n can have. The regular simplex attains it, so it is an equiangular
# tight frame and passes the quasi-equiangular check at (almost) zero slack.

# %%
import numpy as np

from qef import QefParams, check_qef, coherence, gram, simplex_etf, welch_bound

# %%
for n in (2, 3, 5, 10):
    G = gram(simplex_etf(n))
    print(f"n={n:2d}  N={n + 1:2d}  coherence={coherence(G):.12f}  welch={welch_bound(n, n + 1):.12f}")

# %% [markdown]
# A random unit-norm frame sits well above the bound. Loosening eps until it
# passes shows how far from equiangular it is.

# %%
rng = np.random.default_rng(0)
phi = rng.normal(size=(4, 8))
phi /= np.linalg.norm(phi, axis=0)
G = gram(phi)
print("random frame coherence", coherence(G), "welch", welch_bound(4, 8))
for eps in (0.05, 0.2, 0.4, 0.6):
    rep = check_qef(G, QefParams(4, 8, eps))
    print(f"eps={eps:.2f} passed={rep.passed} correlation violations={len(rep.correlation_violations)}")

# %% [markdown]
# The paper-scale dimensions used later: N = 500, n between 100 and 480.

# %%
for n in (100, 200, 300, 400, 480):
    print(n, welch_bound(n, 500))
