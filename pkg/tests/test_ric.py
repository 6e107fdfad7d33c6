import json
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.optimize import brentq

from oracles import brute_ric, uniform_moments_mc
from qef.frame_core import GramMatrix, gram, simplex_etf, welch_bound
from qef.genmodel import GenSpec, gen_qef_gram, make_rng
from qef.ric import (
    CliqueSpec,
    SubsetCapExceeded,
    bernstein_radius,
    clique_ric,
    empirical_moments,
    etf_ric,
    exact_ric,
    greedy_clique,
    max_gershgorin_bound,
    moments_uniform,
    sampled_ric,
    theorem1_lower,
    theorem1_upper,
    union_log_term,
)

MU = welch_bound(100, 500)
EPS = 0.3 * MU


def equiangular_clique_gram(k, mu):
    return GramMatrix((1 + mu) * np.eye(k) - mu * np.ones((k, k)), k)


# -- CliqueSpec -------------------------------------------------------------

def test_clique_spec_sorts_and_validates():
    assert CliqueSpec((4, 1, 2)).indices == (1, 2, 4)
    assert CliqueSpec.first(3).k == 3
    for bad in [(1, 1), (3,), (), (-1, 2)]:
        with pytest.raises(ValueError):
            CliqueSpec(bad)


# -- exact / sampled / gershgorin ------------------------------------------

def test_exact_ric_identity():
    for k in (1, 2, 3):
        assert exact_ric(GramMatrix(np.eye(6), 6), k) == 0.0


@pytest.mark.parametrize("k,expected", [(2, 0.25), (3, 0.5)])
def test_exact_ric_simplex4(k, expected):
    G = gram(simplex_etf(4))
    assert exact_ric(G, k) == pytest.approx(expected, abs=1e-12)
    assert brute_ric(G.entries, k) == pytest.approx(expected, abs=1e-12)


def test_exact_ric_matches_brute_force_oracle():
    rng = np.random.default_rng(11)
    for _ in range(20):
        N = int(rng.integers(4, 9))
        phi = rng.normal(size=(3, N))
        phi /= np.linalg.norm(phi, axis=0)
        G = gram(phi)
        for k in (2, 3):
            assert exact_ric(G, k) == pytest.approx(brute_ric(G.entries, k), abs=1e-10)


def test_exact_ric_subset_cap():
    G = GramMatrix(np.eye(500), 100)
    with pytest.raises(SubsetCapExceeded) as ei:
        exact_ric(G, 20)
    assert ei.value.count == math.comb(500, 20)
    assert "binomial(500,20)" in str(ei.value)


def test_exact_ric_rejects_bad_k():
    with pytest.raises(ValueError):
        exact_ric(GramMatrix(np.eye(3), 3), 4)


def test_exact_ric_monotone_in_k():
    rng = np.random.default_rng(5)
    for _ in range(15):
        N = int(rng.integers(5, 10))
        G = gram(rng.normal(size=(4, N)))
        vals = [exact_ric(G, k) for k in range(1, N + 1)]
        assert all(b >= a - 1e-12 for a, b in zip(vals, vals[1:]))


def test_sampled_ric_is_lower_estimate():
    rng = np.random.default_rng(8)
    G = gram(rng.normal(size=(4, 10)))
    est, m = sampled_ric(G, 3, 300, make_rng(1))
    assert m == 300
    assert est <= exact_ric(G, 3) + 1e-12
    assert est > 0


# -- etf_ric -----------------------------------------------------------------

def test_etf_ric_examples():
    assert etf_ric(1, 0.3) == 0.0
    assert etf_ric(2, 0.5) == 0.5
    assert etf_ric(10, 0.089532) == pytest.approx(0.805788, abs=1e-12)
    G = equiangular_clique_gram(10, 0.089532)
    assert exact_ric(G, 10) == pytest.approx(0.805788, abs=1e-12)
    with pytest.raises(ValueError):
        etf_ric(0, 0.1)


def test_exact_etf_grams_match_analytic():
    for n in (2, 3, 5):
        G = gram(simplex_etf(n))
        for k in range(2, n + 2):
            assert exact_ric(G, k) == pytest.approx(etf_ric(k, welch_bound(n, n + 1)), abs=1e-9)


# -- clique_ric ----------------------------------------------------------------

def test_clique_ric_examples():
    assert clique_ric(GramMatrix(np.eye(5), 5), CliqueSpec((0, 3))) == 0.0
    G = equiangular_clique_gram(6, 0.0895)
    assert clique_ric(G, CliqueSpec.first(6)) == pytest.approx(5 * 0.0895, abs=1e-12)
    with pytest.raises(ValueError):
        clique_ric(G, CliqueSpec((0, 6)))


def test_clique_ric_paper_settings_band():
    k = 10
    spec = GenSpec(n=100, N=500, eps_frac=0.3, clique=CliqueSpec.first(k), seed=2024)
    G, _ = gen_qef_gram(spec)
    val = clique_ric(G, spec.clique)
    assert (k - 1) * (MU - EPS) - 2 * EPS <= val <= (k - 1) * (MU + EPS) + 2 * EPS


def test_sandwich_on_small_instances():
    rng = np.random.default_rng(17)
    for trial in range(40):
        N = int(rng.integers(5, 11))
        k = int(rng.integers(2, 5))
        spec = GenSpec(n=int(rng.integers(1, N)), N=N, eps_frac=float(rng.uniform(0, 0.9)),
                       clique=CliqueSpec.first(k), seed=trial)
        G, _ = gen_qef_gram(spec)
        lo, ex, hi = clique_ric(G, spec.clique), exact_ric(G, k), max_gershgorin_bound(G, k)
        assert lo <= ex + 1e-12 and ex <= hi + 1e-12


# -- moments -----------------------------------------------------------------

def test_moments_uniform_closed_form():
    m = moments_uniform(0.0)
    assert (m.sigma2, m.f, m.v) == (0.0, 0.0, 0.0)
    m = moments_uniform(0.03)
    assert (m.sigma2, m.f, m.v) == pytest.approx((3e-4, 0.015, 7.5e-5), rel=1e-12)
    m = moments_uniform(1.0)
    assert (m.sigma2, m.f, m.v) == pytest.approx((1 / 3, 1 / 2, 1 / 12), rel=1e-15)
    with pytest.raises(ValueError):
        moments_uniform(-1e-3)


@pytest.mark.parametrize("eps", [0.03, 1.0])
def test_moments_uniform_monte_carlo_oracle(eps):
    s2, f, v = uniform_moments_mc(eps, 10**6, np.random.default_rng(0))
    m = moments_uniform(eps)
    assert m.sigma2 == pytest.approx(s2, rel=0.01)
    assert m.f == pytest.approx(f, rel=0.01)
    assert m.v == pytest.approx(v, rel=0.01)
    # second absolute moment splits as f^2 + v
    assert m.f**2 + m.v == pytest.approx(m.sigma2, rel=1e-12)


def test_empirical_moments_examples():
    m = empirical_moments([0.7] * 5, 0.7)
    assert (m.sigma2, m.f, m.v) == (0.0, 0.0, 0.0)
    eps, c = 0.25, -0.5
    m = empirical_moments([c - eps, c + eps], c)
    assert (m.sigma2, m.f, m.v) == pytest.approx((2 * eps**2, eps, 0.0), abs=1e-15)
    with pytest.raises(ValueError):
        empirical_moments([1.0], 0.0)


def test_empirical_moments_large_sample():
    eps = 0.1
    x = 0.3 + np.random.default_rng(3).uniform(-eps, eps, 10**6)
    m, ref = empirical_moments(x, 0.3), moments_uniform(eps)
    assert m.sigma2 == pytest.approx(ref.sigma2, rel=0.01)
    assert m.f == pytest.approx(ref.f, rel=0.01)
    assert m.v == pytest.approx(ref.v, rel=0.01)


# -- bounds ------------------------------------------------------------------

def test_lower_bound_examples():
    assert theorem1_lower(10, MU, 0.0, 0.0) == pytest.approx(9 * MU, abs=1e-15)
    s2 = EPS**2 / 3
    lo = theorem1_lower(10, MU, s2, 0.0)
    assert lo == pytest.approx(0.805788 + 0.0027, abs=1e-4)
    assert lo == pytest.approx(9 * MU + 0.03 * MU, rel=1e-12)
    lo_c = theorem1_lower(10, MU, s2, 0.1)
    assert lo - lo_c == pytest.approx(0.1 * math.log(10) / math.sqrt(10), rel=1e-12)
    assert lo - lo_c == pytest.approx(0.0728, abs=1e-4)
    with pytest.raises(ValueError):
        theorem1_lower(10, 0.0, 0.0, 0.0)
    with pytest.raises(ValueError):
        theorem1_lower(1, MU, 0.0, 0.0)


def test_upper_bound_degenerates_to_etf():
    r = theorem1_upper(10, 500, MU, 0.0, 0.0, 0.0, 2.0)
    assert r.radius_a == 0.0
    assert r.upper == pytest.approx(9 * MU, abs=1e-15)
    assert r.probability == pytest.approx(1 - math.exp(-2.0), rel=1e-15)


def test_upper_bound_paper_settings_regression():
    m = moments_uniform(EPS)
    r = theorem1_upper(10, 500, MU, EPS, m.f, m.v, 3.0, sigma2=m.sigma2)
    L = math.log(10) + 10 * math.log(math.e * 500 / 10)
    assert r.log_term_L == pytest.approx(L, rel=1e-15)

    # independent root of a^2 / (2 a eps / 3 + 2 k v) = L + t by bracketing
    root = brentq(lambda a: a * a / (2 * a * EPS / 3 + 20 * m.v) - (L + 3.0),
                  1e-12, 100.0, xtol=1e-15, rtol=1e-14)
    assert r.radius_a == pytest.approx(root, rel=1e-12)

    assert r.upper == pytest.approx(1.9776767222069012, rel=1e-13)
    assert r.upper > r.lower
    assert r.upper >= 9 * MU + 10 * m.f
    assert r.probability == pytest.approx(1 - math.exp(-3), rel=1e-15)
    json.loads(r.to_json())


def test_upper_bound_v_zero_simplifies():
    L = union_log_term(8, 200)
    for eps in (1e-3, 0.05, 0.4):
        r = theorem1_upper(8, 200, 0.1, eps, 0.0, 0.0, 1.5)
        assert r.radius_a == pytest.approx((L + 1.5) * 2 * eps / 3, rel=1e-14)


@pytest.mark.parametrize("d", range(2, 9))
def test_upper_bound_eps_to_zero_envelope(d):
    eps = 10.0**-d
    m = moments_uniform(eps)
    for k in (6, 10):
        r = theorem1_upper(k, 500, MU, eps, m.f, m.v, 3.0)
        assert abs(r.upper - (k - 1) * MU) <= 10 * k * eps


@settings(max_examples=200, deadline=None)
@given(k=st.integers(2, 50), extra=st.integers(0, 1000), eps=st.floats(1e-6, 2.0),
       vfrac=st.floats(0, 1), t=st.floats(1e-3, 50))
def test_radius_self_consistency(k, extra, eps, vfrac, t):
    N = k + extra
    v = vfrac * eps**2 / 12
    L = union_log_term(k, N)
    a = bernstein_radius(L, t, eps, k, v)
    assert a > 0
    assert a * a / (2 * a * eps / 3 + 2 * k * v) == pytest.approx(L + t, rel=1e-9)


def test_upper_bound_rejects_bad_params():
    for args in [(1, 10, 0.1, 0.1, 0, 0, 1.0), (5, 4, 0.1, 0.1, 0, 0, 1.0),
                 (5, 10, 0.1, 0.1, 0, 0, 0.0), (5, 10, 0.1, -0.1, 0, 0, 1.0)]:
        with pytest.raises(ValueError):
            theorem1_upper(*args)


def test_coverage_at_paper_settings():
    k, N = 10, 500
    m = moments_uniform(EPS)
    uppers = {t: theorem1_upper(k, N, MU, EPS, m.f, m.v, t).upper for t in (1.0, 3.0)}
    hits = {t: 0 for t in uppers}
    trials = 500
    for s in range(trials):
        spec = GenSpec(n=100, N=N, eps_frac=0.3, clique=CliqueSpec.first(k), seed=10_000 + s)
        val = clique_ric(gen_qef_gram(spec)[0], spec.clique)
        for t, u in uppers.items():
            hits[t] += val <= u
    for t in uppers:
        assert hits[t] / trials >= 1 - math.exp(-t)


# -- greedy_clique -------------------------------------------------------------

def test_greedy_full_equiangular():
    G = equiangular_clique_gram(7, 0.2)
    assert greedy_clique(G, 0.2, 0.01).indices == tuple(range(7))


def test_greedy_identity_signals_none():
    assert greedy_clique(GramMatrix(np.eye(5), 2), 0.3, 0.1) is None


def test_greedy_is_a_maximal_clique():
    spec = GenSpec(n=10, N=40, eps_frac=0.3, clique=CliqueSpec.first(8), seed=5)
    G, _ = gen_qef_gram(spec)
    c = greedy_clique(G, spec.mu_E, spec.eps)
    a = G.entries
    band = (a >= -spec.mu_E - spec.eps) & (a <= -spec.mu_E + spec.eps)
    idx = list(c.indices)
    assert band[np.ix_(idx, idx)][~np.eye(len(idx), dtype=bool)].all()
    others = [j for j in range(40) if j not in idx]
    assert not any(band[j, idx].all() for j in others)


def test_greedy_recovers_planted_clique_often():
    hits = 0
    for s in range(200):
        spec = GenSpec(n=10, N=40, eps_frac=0.3, clique=CliqueSpec.first(10), seed=s)
        G, _ = gen_qef_gram(spec)
        c = greedy_clique(G, spec.mu_E, spec.eps)
        hits += c is not None and set(range(10)) <= set(c.indices)
    # 159/200 on these seeds
    assert hits / 200 >= 0.7
