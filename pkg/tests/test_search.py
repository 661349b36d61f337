import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from toeplitz_lab import _backend
from toeplitz_lab.caratheodory import HerglotzMeasure, measure_from_params, random_params
from toeplitz_lab.functionals import EXTREMAL_MEASURE, Functional, bound_FS, bound_T22, bound_T31
from toeplitz_lab.search import (
    SearchConfig,
    functional_code,
    maximize,
    non_exceedance_scan,
    objective,
)

BACKENDS = _backend.available()


def test_objective_examples():
    assert objective(EXTREMAL_MEASURE, SearchConfig(k=1, functional="t22")) == pytest.approx(13)
    assert objective(EXTREMAL_MEASURE, SearchConfig(k=2, functional="t31")) == pytest.approx(4)
    koebe = HerglotzMeasure.point(0.0)
    assert objective(koebe, SearchConfig(k=1, functional="fs", lam=2)) == pytest.approx(5)


def test_config_validation():
    with pytest.raises(ValueError):
        SearchConfig(k=0)
    with pytest.raises(ValueError):
        SearchConfig(k=1, multistarts=0)
    with pytest.raises(ValueError):
        SearchConfig(k=1, functional="hankel")


def test_config_round_trip():
    cfg = SearchConfig(k=3, functional="fs", lam=0.5 - 1j, multistarts=7, seed=11)
    assert SearchConfig.from_dict(cfg.to_dict()) == cfg


@pytest.mark.parametrize("backend", BACKENDS)
def test_search_reaches_t22_bound(backend):
    res = maximize(SearchConfig(k=2, functional="t22", multistarts=50), backend=backend)
    assert abs(res.best_value - bound_T22(2)) < 1e-6
    assert res.best_value <= bound_T22(2) + 1e-9
    assert objective(res.best_measure, SearchConfig(k=2)) == pytest.approx(res.best_value, abs=1e-9)


def test_fs_branch_witnesses():
    cfg = SearchConfig(k=1, functional="fs", lam=2)
    assert abs(objective(HerglotzMeasure.point(0.0), cfg) - bound_FS(1, 2)) < 1e-12
    for k in (1, 2, 3, 5):
        lam = (2 + k) / 4
        mu = HerglotzMeasure([0.0, math.pi], [0.5, 0.5])
        val = objective(mu, SearchConfig(k=k, functional="fs", lam=lam))
        assert abs(val - 1 / k) < 1e-12
        assert bound_FS(k, lam) == pytest.approx(1 / k)


def test_determinism():
    cfg = SearchConfig(k=3, functional="t31", multistarts=20, seed=4)
    a, b = maximize(cfg), maximize(cfg)
    assert a.to_dict() == b.to_dict()


def test_more_starts_never_worse():
    small = maximize(SearchConfig(k=4, functional="t31", multistarts=10, seed=2))
    large = maximize(SearchConfig(k=4, functional="t31", multistarts=40, seed=2))
    assert np.array_equal(small.per_start_values, large.per_start_values[:10])
    assert large.best_value >= small.best_value


def test_workers_do_not_change_result():
    cfg = SearchConfig(k=2, functional="t31", multistarts=17, seed=9)
    assert maximize(cfg, workers=1).to_dict() == maximize(cfg, workers=4).to_dict()


def test_tie_breaks_to_lowest_index():
    res = maximize(SearchConfig(k=1, functional="t22", multistarts=30))
    v = res.per_start_values
    assert res.best_index == int(np.flatnonzero(v == v.max())[0])


@pytest.mark.skipif(len(BACKENDS) < 2, reason="compiled backend not built")
def test_backends_agree():
    cfg = SearchConfig(k=3, functional="fs", lam=0.3 + 0.4j, multistarts=12, seed=1)
    a = maximize(cfg, backend="cython")
    b = maximize(cfg, backend="python")
    assert np.allclose(a.per_start_values, b.per_start_values, rtol=0, atol=1e-9)


@pytest.mark.parametrize("backend", BACKENDS)
@pytest.mark.parametrize("functional", list(Functional))
def test_batch_objective_matches_reference(backend, functional):
    kern = _backend.load(backend)
    rng = np.random.default_rng(0)
    params = random_params(rng, 3, 64)
    for k in (1, 2, 5):
        cfg = SearchConfig(k=k, functional=functional, lam=0.7 - 0.2j)
        vals = kern.batch_objective(params, k, functional_code(functional), cfg.lam)
        ref = [objective(measure_from_params(p), cfg) for p in params]
        assert np.allclose(vals, ref, rtol=0, atol=1e-12)


@settings(max_examples=25, deadline=None)
@given(st.integers(1, 6), st.sampled_from(list(Functional)), st.integers(0, 2**31))
def test_scan_never_exceeds_bound(k, functional, seed):
    lam = 0.5 if functional is Functional.FS else 0.0
    cfg = SearchConfig(k=k, functional=functional, lam=lam, seed=seed)
    best, mu = non_exceedance_scan(cfg, 2000)
    assert best <= cfg.bound + 1e-9
    assert objective(mu, cfg) == pytest.approx(best, abs=1e-9)


def test_scan_include_wins_ties():
    cfg = SearchConfig(k=2, functional="t22")
    best, mu = non_exceedance_scan(cfg, 100, include=[EXTREMAL_MEASURE])
    assert best == pytest.approx(bound_T22(2))
    assert mu == EXTREMAL_MEASURE


def test_scan_is_deterministic():
    cfg = SearchConfig(k=3, functional="t31", seed=5)
    assert non_exceedance_scan(cfg, 5000, chunk=700) == non_exceedance_scan(cfg, 5000, chunk=700)


def test_backend_loader():
    with pytest.raises(ValueError):
        _backend.load("fortran")
    assert "python" in _backend.available()
    assert _backend.load("python").NAME == "python"


def test_t31_search_stays_below_bound_for_large_k():
    res = maximize(SearchConfig(k=4, functional="t31", multistarts=50))
    assert res.best_value <= bound_T31(4) + 1e-9


def test_environment_forces_fallback():
    import os
    import subprocess
    import sys
    env = dict(os.environ, TOEPLITZ_LAB_BACKEND="python")
    out = subprocess.run([sys.executable, "-c", "from toeplitz_lab import _backend; print(_backend.BACKEND)"],
                         env=env, capture_output=True, text=True, check=True)
    assert out.stdout.strip() == "python"
