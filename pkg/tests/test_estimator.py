import numpy as np
import pytest
from sklearn.base import clone
from sklearn.pipeline import make_pipeline
from sklearn.preprocessing import FunctionTransformer

from pogs import PeriodicGroupShrinkage
from pogs.exceptions import DomainError
from pogs.estimator import resolve_pattern
from pogs.signalgen import SimConfig, simulate
from pogs.solver import denoise, make_config


def test_params_roundtrip():
    est = PeriodicGroupShrinkage(lam=1.5, group_size=4, penalty="log")
    params = est.get_params()
    assert params["lam"] == 1.5 and params["group_size"] == 4
    other = clone(est)
    assert other.get_params() == params
    est.set_params(lam=2.0)
    assert est.lam == 2.0


def test_matches_functional_api(rng):
    y = rng.standard_normal(300)
    est = PeriodicGroupShrinkage(lam=0.7, group_size=3).fit(y)
    ref = denoise(y, make_config(0.7, [1, 1, 1])).x
    assert np.array_equal(est.transform(y), ref)
    assert est.a_ == pytest.approx(0.99 / (3 * 0.7))
    assert est.sigma_ is None


def test_auto_lambda_and_rows():
    sig = simulate(SimConfig(seed=2))
    est = PeriodicGroupShrinkage(fs=6400, fault_freq=80, n1=4, m=4)
    X = np.vstack([sig.noisy, sig.noisy[::-1]])
    out = est.fit_transform(X)
    assert out.shape == X.shape
    assert est.lam_ == pytest.approx(0.325 * est.sigma_)
    assert est.pattern_.k1 == 16
    assert est.n_iter_.shape == (2,)
    assert np.sqrt(np.mean((out[0] - sig.clean) ** 2)) < np.sqrt(np.mean((sig.noisy - sig.clean) ** 2))


def test_pipeline():
    y = np.random.default_rng(0).standard_normal((2, 64))
    pipe = make_pipeline(FunctionTransformer(lambda X: 2 * X), PeriodicGroupShrinkage(lam=1.0, pattern="101"))
    assert pipe.fit_transform(y).shape == (2, 64)


def test_pattern_modes_are_exclusive():
    with pytest.raises(DomainError):
        resolve_pattern(fs=100, fault_freq=10, group_size=3)
    with pytest.raises(DomainError):
        resolve_pattern()
    with pytest.raises(DomainError):
        resolve_pattern(fault_freq=10)
    assert resolve_pattern(pattern=[1, 0, 1, 0]).bitstring == "101"


def test_transform_before_fit():
    from sklearn.exceptions import NotFittedError

    with pytest.raises(NotFittedError):
        PeriodicGroupShrinkage(lam=1.0, group_size=2).transform(np.ones(5))


def test_rejects_nan():
    with pytest.raises(ValueError):
        PeriodicGroupShrinkage(lam=1.0, group_size=2).fit(np.array([1.0, np.nan, 2.0]))


def test_zero_noise_needs_lambda():
    with pytest.raises(DomainError):
        PeriodicGroupShrinkage(group_size=2).fit(np.zeros(10))
