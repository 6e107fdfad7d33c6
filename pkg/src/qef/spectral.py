"""Symmetric eigenvalues, centered operator norms and Gershgorin bounds."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .frame_core import GramMatrix

__all__ = [
    "EigenResult",
    "sym_eigs",
    "centered_opnorm",
    "centered_opnorm_batch",
    "gershgorin_bound",
    "gershgorin_bound_batch",
    "rank1_deformation_spectrum",
    "pizzo_deviation",
    "calibrate_pizzo_constant",
    "PIZZO_C_PILOT",
]

# Pilot calibration of the rank-one deformation constant, from
# calibrate_pizzo_constant(k, mu, 0.3 * mu, trials=2000, seed=20240101) with
# mu = welch_bound(100, 500) over k = 6..10: the largest mean deviation
# scaled by sqrt(k)/log(k) was 0.0234 (k = 8); rounded up to 0.03.
# The true constant is not known in closed form; pass your own C to override.
PIZZO_C_PILOT = 0.03


@dataclass(frozen=True)
class EigenResult:
    eigenvalues: np.ndarray
    residual_bound: float

    @property
    def lambda_max(self) -> float:
        return float(self.eigenvalues[0])

    @property
    def lambda_min(self) -> float:
        return float(self.eigenvalues[-1])


def _square(A) -> np.ndarray:
    if isinstance(A, GramMatrix):
        return A.entries
    a = np.asarray(A, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1] or a.shape[0] < 1:
        raise ValueError(f"expected a non-empty square matrix, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise ValueError("matrix entries must be finite")
    return a


def sym_eigs(A) -> EigenResult:
    """All eigenvalues of a symmetric matrix, sorted in descending order.

    Only the upper triangle is read. ``residual_bound`` is the largest
    ``||A x - lambda x||_2`` over the computed unit eigenvectors.
    """
    a = _square(A)
    w, V = np.linalg.eigh(a, UPLO="U")
    a_sym = np.triu(a) + np.triu(a, 1).T
    resid = np.linalg.norm(a_sym @ V - V * w, axis=0)
    order = np.argsort(-w, kind="stable")
    vals = w[order]
    vals.setflags(write=False)
    return EigenResult(vals, float(resid.max()))


def centered_opnorm(G_sub) -> float:
    """Spectral norm ``||G_sub - I||_2`` of a square symmetric block."""
    # Same kernel as the batched path so clique and exhaustive values agree bitwise.
    return float(centered_opnorm_batch(_square(G_sub)[None])[0])


def centered_opnorm_batch(blocks: np.ndarray) -> np.ndarray:
    """:func:`centered_opnorm` over a stack of ``k x k`` blocks, shape ``(B, k, k)``."""
    k = blocks.shape[-1]
    ev = np.linalg.eigvalsh(blocks - np.eye(k), UPLO="U")
    return np.maximum(np.abs(ev[..., 0]), np.abs(ev[..., -1]))


def gershgorin_bound(G_sub) -> float:
    """Largest Gershgorin radius of ``G_sub - I`` measured from the origin:
    ``max_i |g_ii - 1| + sum_{j != i} |g_ij|``."""
    a = _square(G_sub)
    return float(gershgorin_bound_batch(a[None])[0])


def gershgorin_bound_batch(blocks: np.ndarray) -> np.ndarray:
    k = blocks.shape[-1]
    dev = np.abs(blocks - np.eye(k))
    return dev.sum(axis=-1).max(axis=-1)


def rank1_deformation_spectrum(k: int, mu: float, F, eps: float | None = None) -> EigenResult:
    """Spectrum of ``mu * J - F`` with ``J`` the ``k x k`` all-ones matrix.

    If ``eps`` is given, entries of ``F`` outside ``[-eps, eps]`` raise.
    """
    F = _square(F)
    if F.shape[0] != k:
        raise ValueError(f"F is {F.shape[0]}x{F.shape[0]}, expected {k}x{k}")
    if eps is not None and np.any(np.abs(F) > eps):
        raise ValueError(f"F has entries outside [-{eps}, {eps}]")
    return sym_eigs(mu * np.ones((k, k)) - F)


def pizzo_deviation(k: int, mu: float, eps: float, trials: int, rng) -> np.ndarray:
    """Per-trial ``|lambda_max(mu J - F) - k mu - sigma^2/mu|`` with F uniform on
    ``[-eps, eps]`` (symmetric, i.i.d. upper triangle), ``sigma^2 = eps^2/3``."""
    sigma2 = eps * eps / 3.0
    out = np.empty(trials)
    J = mu * np.ones((k, k))
    for t in range(trials):
        U = rng.uniform(-eps, eps, size=(k, k))
        F = np.triu(U) + np.triu(U, 1).T
        lam = np.linalg.eigvalsh(J - F)[-1]
        out[t] = abs(lam - k * mu - sigma2 / mu)
    return out


def calibrate_pizzo_constant(k: int, mu: float, eps: float, trials: int = 2000,
                             seed: int = 20240101) -> float:
    """Mean deviation from :func:`pizzo_deviation` rescaled by ``sqrt(k)/log(k)``."""
    if k < 2:
        raise ValueError("k must be >= 2 (log k vanishes at k = 1)")
    rng = np.random.default_rng(seed)
    dev = pizzo_deviation(k, mu, eps, trials, rng)
    return float(dev.mean() * math.sqrt(k) / math.log(k))
