"""Restricted isometry constants and the probabilistic RIC interval for QEFs.

``delta_k`` is the largest ``||G_L - I||_2`` over all principal ``k x k``
blocks ``G_L`` of the Gram matrix. Exhaustive enumeration is exact but
combinatorial; the clique value is a certified lower bound; the Gershgorin
maximum is a certified upper bound.
"""
from __future__ import annotations

import itertools
import json
import math
from dataclasses import asdict, dataclass, field

import numpy as np

from .frame_core import GramMatrix
from .spectral import (
    centered_opnorm,
    centered_opnorm_batch,
    gershgorin_bound_batch,
)

__all__ = [
    "CliqueSpec",
    "MomentTriple",
    "RicBoundReport",
    "SubsetCapExceeded",
    "DEFAULT_SUBSET_CAP",
    "exact_ric",
    "max_gershgorin_bound",
    "sampled_ric",
    "etf_ric",
    "clique_ric",
    "moments_uniform",
    "empirical_moments",
    "theorem1_lower",
    "theorem1_upper",
    "union_log_term",
    "bernstein_radius",
    "greedy_clique",
]

DEFAULT_SUBSET_CAP = 10**6
_BATCH = 4096


class SubsetCapExceeded(RuntimeError):
    """Raised when exhaustive subset enumeration would exceed the cap."""

    def __init__(self, N, k, count, cap):
        self.N, self.k, self.count, self.cap = N, k, count, cap
        super().__init__(
            f"binomial({N},{k}) = {count} subsets exceeds the cap of {cap}; "
            "use a clique, sampled_ric, or raise the cap"
        )


@dataclass(frozen=True)
class CliqueSpec:
    """Sorted, distinct, 0-based column indices of a clique (size >= 2)."""

    indices: tuple

    def __post_init__(self):
        idx = tuple(sorted(int(i) for i in self.indices))
        if len(set(idx)) != len(idx):
            raise ValueError(f"clique indices must be distinct, got {self.indices}")
        if len(idx) < 2:
            raise ValueError(f"a clique needs at least 2 indices, got {len(idx)}")
        if idx[0] < 0:
            raise ValueError(f"clique indices must be non-negative, got {idx[0]}")
        object.__setattr__(self, "indices", idx)

    @property
    def k(self) -> int:
        return len(self.indices)

    @classmethod
    def first(cls, k: int) -> "CliqueSpec":
        return cls(tuple(range(k)))


@dataclass(frozen=True)
class MomentTriple:
    """Moments of a centred fluctuation X: ``sigma2 = Var X``, ``f = E|X|``,
    ``v = Var |X|``."""

    sigma2: float
    f: float
    v: float


@dataclass(frozen=True)
class RicBoundReport:
    lower: float
    upper: float
    t: float
    probability: float
    radius_a: float
    log_term_L: float
    params: dict = field(default_factory=dict)

    def to_json(self) -> str:
        return json.dumps(asdict(self), sort_keys=True)


def _gram_array(G):
    return G.entries if isinstance(G, GramMatrix) else np.asarray(G, dtype=float)


def _check_k(k, N):
    if not 1 <= k <= N:
        raise ValueError(f"need 1 <= k <= N, got k={k}, N={N}")


def _subset_blocks(a, k, cap):
    N = a.shape[0]
    _check_k(k, N)
    count = math.comb(N, k)
    if count > cap:
        raise SubsetCapExceeded(N, k, count, cap)
    combos = itertools.combinations(range(N), k)
    while True:
        chunk = np.array(list(itertools.islice(combos, _BATCH)), dtype=int)
        if chunk.size == 0:
            return
        yield chunk, a[chunk[:, :, None], chunk[:, None, :]]


def exact_ric(G, k: int, subset_cap: int = DEFAULT_SUBSET_CAP) -> float:
    """Exact ``delta_k`` by enumerating every ``k``-subset in lexicographic order."""
    a = _gram_array(G)
    best = 0.0
    for _, blocks in _subset_blocks(a, k, subset_cap):
        best = max(best, float(centered_opnorm_batch(blocks).max()))
    return best


def max_gershgorin_bound(G, k: int, subset_cap: int = DEFAULT_SUBSET_CAP) -> float:
    """Largest Gershgorin bound over every ``k``-subset; an upper bound on ``delta_k``."""
    a = _gram_array(G)
    best = 0.0
    for _, blocks in _subset_blocks(a, k, subset_cap):
        best = max(best, float(gershgorin_bound_batch(blocks).max()))
    return best


def sampled_ric(G, k: int, samples: int, rng) -> tuple[float, int]:
    """Max of ``||G_L - I||_2`` over ``samples`` uniformly random ``k``-subsets.

    Returns ``(estimate, samples)``. This is a lower estimate of ``delta_k``,
    never the exact value.
    """
    a = _gram_array(G)
    N = a.shape[0]
    _check_k(k, N)
    best = 0.0
    done = 0
    while done < samples:
        m = min(_BATCH, samples - done)
        idx = np.sort(rng.random((m, N)).argsort(axis=1)[:, :k], axis=1)
        blocks = a[idx[:, :, None], idx[:, None, :]]
        best = max(best, float(centered_opnorm_batch(blocks).max()))
        done += m
    return best, samples


def etf_ric(k: int, mu_E: float) -> float:
    """RIC of an equiangular tight frame below its clique size: ``(k - 1) mu_E``."""
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    return (k - 1) * mu_E


def clique_ric(G, clique: CliqueSpec) -> float:
    """``||G_L - I||_2`` on the clique block; always ``<= delta_k`` for ``k = |L|``."""
    a = _gram_array(G)
    if clique.indices[-1] >= a.shape[0]:
        raise ValueError(f"clique index {clique.indices[-1]} out of range for N={a.shape[0]}")
    idx = np.asarray(clique.indices)
    return centered_opnorm(a[np.ix_(idx, idx)])


def moments_uniform(eps: float) -> MomentTriple:
    """Moments of X ~ Uniform[-eps, eps]: ``(eps^2/3, eps/2, eps^2/12)``."""
    if eps < 0:
        raise ValueError(f"eps must be >= 0, got {eps}")
    return MomentTriple(eps * eps / 3.0, eps / 2.0, eps * eps / 12.0)


def empirical_moments(samples, center: float) -> MomentTriple:
    """Sample moments of ``samples - center`` (unbiased variances)."""
    d = np.asarray(samples, dtype=float).ravel() - center
    if d.size < 2:
        raise ValueError(f"need at least 2 samples, got {d.size}")
    ad = np.abs(d)
    return MomentTriple(float(d.var(ddof=1)), float(ad.mean()), float(ad.var(ddof=1)))


def theorem1_lower(k: int, mu_E: float, sigma2: float, C: float) -> float:
    """Lower end of the RIC interval: ``(k-1) mu_E + sigma2/mu_E - C log(k)/sqrt(k)``.

    With ``C = 0`` this is the "primary part" compared against simulations.
    """
    if k < 2:
        raise ValueError(f"k must be >= 2, got {k}")
    if mu_E <= 0:
        raise ValueError(f"mu_E must be > 0, got {mu_E}")
    if sigma2 < 0 or C < 0:
        raise ValueError("sigma2 and C must be >= 0")
    return (k - 1) * mu_E + sigma2 / mu_E - C * math.log(k) / math.sqrt(k)


def union_log_term(k: int, N: int) -> float:
    """``log k + k log(e N / k)``: log of ``k * binomial(N, k)`` after the
    Stirling-type estimate."""
    return math.log(k) + k * math.log(math.e * N / k)


def bernstein_radius(L: float, t: float, eps: float, k: int, v: float) -> float:
    """Positive root ``a`` of ``a^2 / (2 a eps / 3 + 2 k v) = L + t``."""
    Lt = L + t
    if eps == 0.0 and v == 0.0:
        return 0.0
    return Lt * (eps / 3.0 + math.sqrt(eps * eps / 9.0 + 2.0 * k * v / Lt))


def theorem1_upper(k: int, N: int, mu_E: float, eps: float, f: float, v: float,
                   t: float, *, sigma2: float | None = None, C: float = 0.0) -> RicBoundReport:
    """Upper end of the RIC interval, holding with probability ``>= 1 - exp(-t)``.

    ``upper = (k-1) mu_E + k f + a`` where ``a`` is the Bernstein radius after
    a union bound over all ``k * binomial(N, k)`` row sums. If ``sigma2`` is
    given the report also carries :func:`theorem1_lower` with constant ``C``;
    otherwise ``lower`` is ``(k-1) mu_E``.
    """
    if k < 2 or N < k:
        raise ValueError(f"need 2 <= k <= N, got k={k}, N={N}")
    if not t > 0:
        raise ValueError(f"t must be > 0, got {t}")
    if eps < 0 or f < 0 or v < 0 or mu_E < 0:
        raise ValueError("eps, f, v and mu_E must be >= 0")
    L = union_log_term(k, N)
    a = bernstein_radius(L, t, eps, k, v)
    if a > 0:
        denom = 2.0 * a * eps / 3.0 + 2.0 * k * v
        back = a * a / denom
        if abs(back - (L + t)) > 1e-9 * (L + t):
            raise ArithmeticError(
                f"Bernstein radius self-check failed: {back!r} != {L + t!r}")
    upper = (k - 1) * mu_E + k * f + a
    if sigma2 is not None and mu_E > 0:
        lower = theorem1_lower(k, mu_E, sigma2, C)
    else:
        lower = etf_ric(k, mu_E)
    params = {"k": k, "N": N, "mu_E": mu_E, "eps": eps, "f": f, "v": v,
              "sigma2": sigma2, "C": C}
    return RicBoundReport(lower=lower, upper=upper, t=t, probability=-math.expm1(-t),
                          radius_a=a, log_term_L=L, params=params)


def greedy_clique(G, mu_E: float, eps: float) -> CliqueSpec | None:
    """Greedy maximal clique of pairs with ``mu_ij`` in ``[-mu_E - eps, -mu_E + eps]``.

    Starts at the vertex with the most qualifying neighbours and repeatedly
    adds the candidate with the most neighbours among the remaining
    candidates; ties go to the lowest index. Returns ``None`` when no pair
    qualifies. The result is maximal, not necessarily maximum.
    """
    a = _gram_array(G)
    adj = (a >= -mu_E - eps) & (a <= -mu_E + eps)
    np.fill_diagonal(adj, False)
    deg = adj.sum(axis=1)
    if deg.max(initial=0) == 0:
        return None
    start = int(np.argmax(deg))
    members = [start]
    cand = adj[start].copy()
    while cand.any():
        idx = np.flatnonzero(cand)
        inner = adj[np.ix_(idx, idx)].sum(axis=1)
        pick = int(idx[np.argmax(inner)])
        members.append(pick)
        cand &= adj[pick]
        cand[pick] = False
    return CliqueSpec(tuple(members))
