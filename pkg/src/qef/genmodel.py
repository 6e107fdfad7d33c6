"""Random quasi-equiangular Gram matrices with a planted clique.

Off-diagonal entries are ``s_ij * mu_E + u_ij`` where ``s_ij = -1`` inside
the planted clique and an independent fair sign elsewhere; diagonal entries
are ``1 + u_ii``. The fluctuations ``u`` are i.i.d. Uniform[-eps, eps] on the
upper triangle and mirrored. The output satisfies the QEF conditions entry
by entry but is generally not the Gram matrix of any n-dimensional frame;
:func:`psd_diagnostics` measures that gap.

Randomness comes from numpy's PCG64 seeded through ``SeedSequence``; see
:func:`trial_seed` for the per-trial stream derivation.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from .frame_core import FrameMatrix, GramMatrix, welch_bound
from .ric import CliqueSpec, MomentTriple, moments_uniform

__all__ = [
    "PerturbationModel",
    "GramDecomposition",
    "GenSpec",
    "PsdReport",
    "make_rng",
    "trial_seed",
    "gen_sign_pattern",
    "gen_qef_gram",
    "psd_diagnostics",
    "synthesize_frame",
]


def make_rng(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(int(seed))))


def trial_seed(base_seed: int, *keys: int) -> int:
    """64-bit seed for the stream identified by ``(base_seed, *keys)``.

    Derived with ``SeedSequence(base_seed, spawn_key=keys)``, so it depends
    only on the key tuple and not on the order in which trials run.
    """
    ss = np.random.SeedSequence(int(base_seed), spawn_key=tuple(int(k) for k in keys))
    return int(ss.generate_state(1, dtype=np.uint64)[0])


@dataclass(frozen=True)
class PerturbationModel:
    eps: float
    kind: str = "uniform"

    def __post_init__(self):
        if self.kind != "uniform":
            raise ValueError(f"unsupported perturbation kind {self.kind!r}")
        if not self.eps >= 0:
            raise ValueError(f"eps must be >= 0, got {self.eps}")

    @property
    def moments(self) -> MomentTriple:
        return moments_uniform(self.eps)

    def sample(self, rng, size) -> np.ndarray:
        eps = self.eps
        return np.clip(rng.uniform(-eps, eps, size=size), -eps, eps)


@dataclass(frozen=True)
class GramDecomposition:
    """``G = I + (D + S) + F`` with ``D = mu_E I``, ``S = mu_E * signs - mu_E I``
    and ``F`` the symmetric fluctuations. On the clique block ``S = -mu_E J``."""

    D: np.ndarray
    S: np.ndarray
    F: np.ndarray

    def reconstruct(self) -> np.ndarray:
        return np.eye(self.F.shape[0]) + (self.D + self.S) + self.F


@dataclass(frozen=True)
class GenSpec:
    n: int
    N: int
    eps_frac: float
    clique: CliqueSpec
    seed: int
    kind: str = "uniform"
    mu_E: float = field(init=False)
    eps: float = field(init=False)

    def __post_init__(self):
        if not 1 <= self.n < self.N:
            raise ValueError(f"need 1 <= n < N, got n={self.n}, N={self.N}")
        if not 0 <= self.eps_frac < 1:
            raise ValueError(
                f"eps_frac must be in [0, 1) so that eps < mu_E, got {self.eps_frac}")
        if self.clique.indices[-1] >= self.N:
            raise ValueError(f"clique index {self.clique.indices[-1]} does not fit in N={self.N}")
        if not 0 <= int(self.seed) < 2**64:
            raise ValueError(f"seed must be an unsigned 64-bit integer, got {self.seed}")
        mu = welch_bound(self.n, self.N)
        object.__setattr__(self, "mu_E", mu)
        object.__setattr__(self, "eps", self.eps_frac * mu)

    @property
    def model(self) -> PerturbationModel:
        return PerturbationModel(self.eps, self.kind)

    def to_dict(self) -> dict:
        return {"n": self.n, "N": self.N, "eps_frac": self.eps_frac,
                "clique": list(self.clique.indices), "seed": int(self.seed),
                "model": self.kind}

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)

    @classmethod
    def from_dict(cls, d: dict) -> "GenSpec":
        clique = d["clique"]
        if isinstance(clique, int):
            clique = range(clique)
        return cls(n=int(d["n"]), N=int(d["N"]), eps_frac=float(d["eps_frac"]),
                   clique=CliqueSpec(tuple(clique)), seed=int(d["seed"]),
                   kind=d.get("model", "uniform"))

    @classmethod
    def from_json(cls, text: str) -> "GenSpec":
        return cls.from_dict(json.loads(text))


def gen_sign_pattern(N: int, clique: CliqueSpec, rng) -> np.ndarray:
    """Symmetric sign matrix: 0 diagonal, -1 inside the clique, fair +-1 elsewhere."""
    draws = rng.integers(0, 2, size=(N, N), dtype=np.int8) * 2 - 1
    s = np.triu(draws, 1)
    s = s + s.T
    idx = np.asarray(clique.indices)
    s[np.ix_(idx, idx)] = -1
    np.fill_diagonal(s, 0)
    return s.astype(float)


def gen_qef_gram(spec: GenSpec, rng=None) -> tuple[GramMatrix, GramDecomposition]:
    """Draw one Gram matrix for ``spec``; uses ``make_rng(spec.seed)`` unless
    ``rng`` is supplied. Signs are drawn before fluctuations."""
    if rng is None:
        rng = make_rng(spec.seed)
    N, mu = spec.N, spec.mu_E
    signs = gen_sign_pattern(N, spec.clique, rng)
    U = spec.model.sample(rng, (N, N))
    F = np.triu(U) + np.triu(U, 1).T
    D = mu * np.eye(N)
    S = mu * signs - D
    decomp = GramDecomposition(D, S, F)
    return GramMatrix(decomp.reconstruct(), spec.n), decomp


@dataclass(frozen=True)
class PsdReport:
    lambda_min: float
    rank: int
    negative_mass: float
    realizable: bool


def psd_diagnostics(G: GramMatrix, tol: float = 1e-8) -> PsdReport:
    """Whether ``G`` could be the Gram matrix of ``n`` real vectors."""
    w = np.linalg.eigvalsh(G.entries)
    rank = int(np.sum(np.abs(w) > tol))
    lam_min = float(w[0])
    return PsdReport(
        lambda_min=lam_min,
        rank=rank,
        negative_mass=float(-w[w < 0].sum()),
        realizable=lam_min >= -tol and rank <= G.ambient_dim,
    )


def synthesize_frame(G: GramMatrix, n: int) -> tuple[FrameMatrix, float]:
    """Nearest rank-``n`` PSD factorisation ``Phi^T Phi`` of ``G``.

    Negative eigenvalues are clipped to zero and the ``n`` largest kept.
    Returns the ``n x N`` frame and ``||Phi^T Phi - G||_F``.
    """
    N = G.N
    if not 1 <= n <= N:
        raise ValueError(f"need 1 <= n <= N, got n={n}, N={N}")
    w, V = np.linalg.eigh(G.entries)
    w, V = w[::-1][:n], V[:, ::-1][:, :n]
    phi = np.sqrt(np.clip(w, 0.0, None))[:, None] * V.T
    resid = float(np.linalg.norm(phi.T @ phi - G.entries))
    return FrameMatrix(phi), resid
