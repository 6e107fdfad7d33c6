"""Frames, Gram matrices, the Welch bound and the quasi-equiangular check.

A frame is stored as an ``n x N`` real matrix whose columns are the frame
vectors. Its Gram matrix holds the pairwise correlations ``mu_ij``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "FrameMatrix",
    "GramMatrix",
    "QefParams",
    "QefCheckReport",
    "welch_bound",
    "gram",
    "coherence",
    "check_qef",
    "simplex_etf",
]


def _readonly(a):
    a = np.array(a, dtype=float, copy=True)
    a.setflags(write=False)
    return a


@dataclass(frozen=True)
class FrameMatrix:
    """Real ``n x N`` matrix; column ``i`` is the frame vector phi_i."""

    entries: np.ndarray

    def __post_init__(self):
        a = np.asarray(self.entries, dtype=float)
        if a.ndim == 1:
            a = a.reshape(-1, 1)
        if a.ndim != 2 or a.shape[0] < 1 or a.shape[1] < 1:
            raise ValueError(f"frame must be a non-empty 2-D matrix, got shape {a.shape}")
        if not np.all(np.isfinite(a)):
            raise ValueError("frame entries must be finite")
        object.__setattr__(self, "entries", _readonly(a))

    @property
    def n(self) -> int:
        return self.entries.shape[0]

    @property
    def N(self) -> int:
        return self.entries.shape[1]


@dataclass(frozen=True)
class GramMatrix:
    """Symmetric ``N x N`` correlation matrix with its ambient dimension ``n``.

    Only the upper triangle of the input is read; the lower triangle is a
    mirror of it, so symmetry holds bit for bit.
    """

    entries: np.ndarray
    ambient_dim: int

    def __post_init__(self):
        a = np.asarray(self.entries, dtype=float)
        if a.ndim != 2 or a.shape[0] != a.shape[1] or a.shape[0] < 1:
            raise ValueError(f"Gram matrix must be square and non-empty, got shape {a.shape}")
        upper = np.triu(a)
        sym = upper + np.triu(a, 1).T
        if not np.all(np.isfinite(sym)):
            raise ValueError("Gram entries must be finite")
        if int(self.ambient_dim) < 1:
            raise ValueError(f"ambient_dim must be positive, got {self.ambient_dim}")
        object.__setattr__(self, "entries", _readonly(sym))
        object.__setattr__(self, "ambient_dim", int(self.ambient_dim))

    @property
    def N(self) -> int:
        return self.entries.shape[0]

    @property
    def n(self) -> int:
        return self.ambient_dim

    def sub(self, indices) -> np.ndarray:
        """Principal submatrix on ``indices`` (a plain array)."""
        idx = np.asarray(indices, dtype=int)
        return self.entries[np.ix_(idx, idx)]


def welch_bound(n: int, N: int) -> float:
    """Welch bound ``sqrt((N - n) / (n (N - 1)))``; zero when ``N == n``."""
    n, N = int(n), int(N)
    if n < 1 or N < 1:
        raise ValueError(f"dimensions must be positive, got n={n}, N={N}")
    if n > N:
        raise ValueError(f"need n <= N, got n={n}, N={N}")
    if N == n:
        return 0.0
    return math.sqrt((N - n) / (n * (N - 1)))


@dataclass(frozen=True)
class QefParams:
    n: int
    N: int
    eps: float
    mu_E: float = field(init=False)

    def __post_init__(self):
        if self.eps < 0 or not math.isfinite(self.eps):
            raise ValueError(f"eps must be finite and >= 0, got {self.eps}")
        object.__setattr__(self, "mu_E", welch_bound(self.n, self.N))

    @property
    def small_eps(self) -> bool:
        """True when ``eps < mu_E``, i.e. the correlation band excludes zero."""
        return self.eps < self.mu_E


@dataclass(frozen=True)
class QefCheckReport:
    passed: bool
    norm_violations: list
    correlation_violations: list
    coherence: float


def _as_gram(G) -> GramMatrix:
    if isinstance(G, GramMatrix):
        return G
    a = np.asarray(G, dtype=float)
    return GramMatrix(a, a.shape[0])


def gram(frame) -> GramMatrix:
    """Gram matrix of the columns of ``frame`` (a :class:`FrameMatrix` or array)."""
    if not isinstance(frame, FrameMatrix):
        frame = FrameMatrix(frame)
    phi = frame.entries
    # GramMatrix mirrors the upper triangle, so the product only needs to be
    # correct there.
    return GramMatrix(phi.T @ phi, frame.n)


def coherence(G) -> float:
    """Largest absolute off-diagonal correlation."""
    a = _as_gram(G).entries
    N = a.shape[0]
    if N < 2:
        raise ValueError("coherence needs at least two frame vectors")
    iu = np.triu_indices(N, 1)
    return float(np.max(np.abs(a[iu])))


def check_qef(G: GramMatrix, params: QefParams) -> QefCheckReport:
    """Check the two quasi-equiangular conditions on a Gram matrix.

    Column norms must lie in ``[1 - eps, 1 + eps]`` and every ``|mu_ij|``,
    ``i != j``, in ``[mu_E - eps, mu_E + eps]``. Both intervals are closed
    and compared exactly; widen ``eps`` to allow rounding slack.
    """
    if G.N != params.N or G.ambient_dim != params.n:
        raise ValueError(
            f"Gram is {G.ambient_dim}x{G.N} (n x N) but params are {params.n}x{params.N}"
        )
    a = G.entries
    eps, mu = params.eps, params.mu_E
    diag = np.diag(a)
    bad_d = np.flatnonzero((diag < 1.0 - eps) | (diag > 1.0 + eps))
    norm_violations = [(int(i), float(diag[i])) for i in bad_d]

    iu, ju = np.triu_indices(G.N, 1)
    absval = np.abs(a[iu, ju])
    bad_o = np.flatnonzero((absval < mu - eps) | (absval > mu + eps))
    corr_violations = [((int(iu[p]), int(ju[p])), float(absval[p])) for p in bad_o]

    coh = float(absval.max()) if absval.size else 0.0
    return QefCheckReport(
        passed=not norm_violations and not corr_violations,
        norm_violations=norm_violations,
        correlation_violations=corr_violations,
        coherence=coh,
    )


def simplex_etf(n: int) -> FrameMatrix:
    """Regular simplex frame: ``n + 1`` unit vectors in R^n with
    pairwise inner product ``-1/n``."""
    n = int(n)
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    m = n + 1
    # Rows of the Helmert matrix (without its constant row) form an
    # orthonormal basis of the hyperplane orthogonal to the all-ones vector.
    H = np.zeros((n, m))
    for r in range(1, m):
        H[r - 1, :r] = 1.0
        H[r - 1, r] = -r
        H[r - 1] /= math.sqrt(r * (r + 1))
    phi = H / np.linalg.norm(H, axis=0)
    return FrameMatrix(phi)
