"""Monte Carlo harness: clique RIC against the lower-bound curve, and coverage
of the high-probability upper bound.

Each cell ``(n, k)`` draws ``trials`` Gram matrices with a clique planted on
indices ``0..k-1`` and records ``clique_ric``, a lower-bound estimate of
``delta_k`` (exhaustive search is out of reach at N = 500).
"""
from __future__ import annotations

import csv
import io
import json
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np

from .frame_core import welch_bound
from .genmodel import GenSpec, gen_qef_gram, trial_seed
from .ric import CliqueSpec, clique_ric, moments_uniform, theorem1_upper

__all__ = [
    "ExperimentConfig",
    "ResultRow",
    "ESTIMATOR",
    "CSV_COLUMNS",
    "run_fig2",
    "run_coverage",
    "emit_results",
    "rows_to_csv",
    "rows_to_json",
    "rows_from_json",
    "default_workers",
]

ESTIMATOR = "clique_ric (lower-bound estimate of delta_k)"
CSV_COLUMNS = ["n", "k", "mu_E", "eps", "theory_lower_primary", "empirical_mean",
               "empirical_std", "empirical_min", "empirical_max", "trials"]


@dataclass(frozen=True)
class ExperimentConfig:
    N: int = 500
    n_values: tuple = (100, 200, 300, 400, 480)
    k_values: tuple = (6, 7, 8, 9, 10)
    eps_frac: float = 0.3
    trials: int = 200
    t_values: tuple = (1.0, 3.0)
    base_seed: int = 0
    output_path: str | None = None

    def __post_init__(self):
        object.__setattr__(self, "n_values", tuple(int(x) for x in self.n_values))
        object.__setattr__(self, "k_values", tuple(int(x) for x in self.k_values))
        object.__setattr__(self, "t_values", tuple(float(x) for x in self.t_values))
        if self.trials < 1:
            raise ValueError(f"trials must be >= 1, got {self.trials}")
        if not self.n_values or not self.k_values:
            raise ValueError("n_values and k_values must be non-empty")
        for n in self.n_values:
            if not 1 <= n < self.N:
                raise ValueError(f"every n must satisfy 1 <= n < N={self.N}, got {n}")
        for k in self.k_values:
            if not 2 <= k <= self.N:
                raise ValueError(f"every k must satisfy 2 <= k <= N={self.N}, got {k}")
        if not 0 <= self.eps_frac < 1:
            raise ValueError(f"eps_frac must be in [0, 1), got {self.eps_frac}")
        if any(t <= 0 for t in self.t_values):
            raise ValueError("t_values must be positive")

    @classmethod
    def from_dict(cls, d: dict) -> "ExperimentConfig":
        known = {f for f in cls.__dataclass_fields__}
        unknown = set(d) - known
        if unknown:
            raise ValueError(f"unknown config keys: {sorted(unknown)}")
        return cls(**d)

    @classmethod
    def from_json_file(cls, path) -> "ExperimentConfig":
        return cls.from_dict(json.loads(Path(path).read_text()))


@dataclass
class ResultRow:
    n: int
    k: int
    mu_E: float
    eps: float
    theory_lower_primary: float
    empirical_mean: float
    empirical_std: float
    empirical_min: float
    empirical_max: float
    trials: int
    coverage_at_t: dict = field(default_factory=dict)
    estimator: str = ESTIMATOR


def default_workers() -> int:
    """Worker count from ``QEF_THREADS`` (0 or unset means one per CPU)."""
    raw = os.environ.get("QEF_THREADS", "0")
    try:
        w = int(raw)
    except ValueError:
        raise ValueError(f"QEF_THREADS must be an integer, got {raw!r}") from None
    if w < 0:
        raise ValueError(f"QEF_THREADS must be >= 0, got {w}")
    return w or (os.cpu_count() or 1)


def _cell(config: ExperimentConfig, n: int, k: int, with_coverage: bool) -> ResultRow:
    N = config.N
    mu = welch_bound(n, N)
    eps = config.eps_frac * mu
    mom = moments_uniform(eps)
    clique = CliqueSpec.first(k)
    vals = np.empty(config.trials)
    for trial in range(config.trials):
        spec = GenSpec(n=n, N=N, eps_frac=config.eps_frac, clique=clique,
                       seed=trial_seed(config.base_seed, n, k, trial))
        G, _ = gen_qef_gram(spec)
        vals[trial] = clique_ric(G, clique)

    coverage = {}
    if with_coverage:
        for t in config.t_values:
            upper = theorem1_upper(k, N, mu, eps, mom.f, mom.v, t).upper
            coverage[t] = float(np.mean(vals <= upper))

    return ResultRow(
        n=n, k=k, mu_E=mu, eps=eps,
        theory_lower_primary=(k - 1) * mu + mom.sigma2 / mu,
        empirical_mean=float(vals.mean()),
        empirical_std=float(vals.std(ddof=1)) if config.trials > 1 else 0.0,
        empirical_min=float(vals.min()),
        empirical_max=float(vals.max()),
        trials=config.trials,
        coverage_at_t=coverage,
    )


def _run(config, with_coverage, workers):
    cells = [(n, k) for n in sorted(config.n_values) for k in sorted(config.k_values)]
    workers = default_workers() if workers is None else workers
    if workers <= 1:
        return [_cell(config, n, k, with_coverage) for n, k in cells]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(lambda c: _cell(config, *c, with_coverage), cells))


def run_fig2(config: ExperimentConfig, workers: int | None = None) -> list[ResultRow]:
    """Clique-RIC statistics per ``(n, k)`` cell next to
    ``(k-1) mu_E + sigma^2 / mu_E``; rows sorted by ``(n, k)``."""
    return _run(config, False, workers)


def run_coverage(config: ExperimentConfig, workers: int | None = None) -> list[ResultRow]:
    """As :func:`run_fig2`, plus the fraction of trials with
    ``clique_ric <= theorem1_upper(..., t)`` for each ``t`` in the config."""
    if not config.t_values:
        raise ValueError("coverage needs at least one t value")
    return _run(config, True, workers)


def _fmt(x) -> str:
    if isinstance(x, float):
        return format(x, ".17g")
    return str(x)


def _t_label(t: float) -> str:
    return f"coverage_t_{t:g}"


def rows_to_csv(rows) -> str:
    ts = sorted({t for r in rows for t in r.coverage_at_t})
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_COLUMNS + [_t_label(t) for t in ts])
    for r in rows:
        d = asdict(r)
        w.writerow([_fmt(d[c]) for c in CSV_COLUMNS]
                   + [_fmt(r.coverage_at_t[t]) if t in r.coverage_at_t else "" for t in ts])
    return buf.getvalue()


def rows_to_json(rows) -> str:
    out = []
    for r in rows:
        d = asdict(r)
        d["coverage_at_t"] = {repr(float(t)): v for t, v in sorted(r.coverage_at_t.items())}
        out.append(d)
    return json.dumps(out, sort_keys=True, indent=1) + "\n"


def rows_from_json(text: str) -> list[ResultRow]:
    rows = []
    for d in json.loads(text):
        d = dict(d)
        d["coverage_at_t"] = {float(t): v for t, v in d["coverage_at_t"].items()}
        rows.append(ResultRow(**d))
    return rows


def emit_results(rows, path, format: str | None = None) -> None:
    """Write rows as CSV (header plus fixed columns, then one
    ``coverage_t_<t>`` column per t) or JSON (a list of row objects).

    ``format`` defaults to the file extension.
    """
    path = Path(path)
    fmt = format or path.suffix.lstrip(".").lower()
    if fmt == "csv":
        text = rows_to_csv(rows)
    elif fmt == "json":
        text = rows_to_json(rows)
    else:
        raise ValueError(f"unknown result format {fmt!r}; use csv or json")
    try:
        path.write_text(text)
    except OSError as e:
        raise OSError(f"cannot write results to {path}: {e.strerror or e}") from e

