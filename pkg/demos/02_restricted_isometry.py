# %% [markdown]
# # Restricted isometry constants: exact, clique and Gershgorin
#
# delta_k is the worst deviation from identity over all k-column blocks of the
# Gram matrix. On small problems we can enumerate every block and compare
# against two cheap certificates: the clique block (a lower bound) and the
# worst Gershgorin row sum (an upper bound).

# %%
from qef import CliqueSpec, GenSpec, clique_ric, etf_ric, exact_ric, gen_qef_gram, gram, simplex_etf
from qef.ric import max_gershgorin_bound

# %% [markdown]
# For an equiangular tight frame the answer is (k - 1) mu_E.

# %%
G = gram(simplex_etf(8))
for k in (2, 3, 4, 5):
    print(f"k={k}  exact={exact_ric(G, k):.12f}  (k-1)/n={etf_ric(k, 1 / 8):.12f}")

# %% [markdown]
# A random quasi-equiangular Gram with a planted clique of size 4.

# %%
spec = GenSpec(n=4, N=14, eps_frac=0.3, clique=CliqueSpec.first(4), seed=1)
G, _ = gen_qef_gram(spec)
for k in (2, 3, 4):
    clique = CliqueSpec.first(k)
    print(f"k={k}  clique={clique_ric(G, clique):.4f}  exact={exact_ric(G, k):.4f}  "
          f"gershgorin={max_gershgorin_bound(G, k):.4f}")

# %% [markdown]
# Enumeration stops being possible very quickly:

# %%
from qef import SubsetCapExceeded

G500, _ = gen_qef_gram(GenSpec(n=100, N=500, eps_frac=0.3, clique=CliqueSpec.first(10), seed=0))
try:
    exact_ric(G500, 10)
except SubsetCapExceeded as e:
    print(e)
print("clique value instead:", clique_ric(G500, CliqueSpec.first(10)))
