import json

import numpy as np
import pytest
from hypothesis import given, strategies as st

from lemmas import LEMMAS
from oracles import GOLDEN, gauss_det, ginibre, psd, top_sum_profile
from sdlab.errors import DomainError, NotInvertible
from sdlab.funcspec import Log1pPow, Pow
from sdlab.spectral import (
    StepFunction,
    fk_det,
    integrate_steps,
    log_sigma,
    log_sigma_profile,
    mu,
    mu_power,
    sigma,
    sigma_profile,
    trace_f,
    variational_sigma,
)

seeds = st.integers(0, 2**32 - 1)


def test_mu_fixtures():
    m = mu(np.diag([3.0, 1.0]))
    assert m(0) == 3 and m(0.49) == 3 and m(0.5) == 1 and m(0.99) == 1 and m(1) == 0 and m(2) == 0
    np.testing.assert_array_equal(mu(np.eye(4)).values, np.ones(4))


def test_sigma_fixtures():
    x = np.diag([3.0, 1.0])
    assert sigma(x, 0.5) == 1.5 and sigma(x, 1.0) == 2.0 and sigma(x, 0) == 0
    assert sigma(x, 0.25) == pytest.approx(0.75)
    assert sigma(x, 0.75) == pytest.approx(1.75)
    np.testing.assert_allclose(sigma_profile(x), [1.5, 2.0])
    with pytest.raises(DomainError):
        sigma(x, 1.5)


def test_grid_snapping():
    v = [3.0, 2.0, 1.0]
    # 1/3 computed in floating point lands within the snap window
    assert integrate_steps(v, 1 / 3) == pytest.approx(1.0, abs=0)
    assert integrate_steps(v, 2 / 3) == pytest.approx(5 / 3, rel=1e-15)


def test_log_sigma_fixtures():
    assert log_sigma(np.eye(3), 0.4) == 0
    assert log_sigma(np.diag([np.e, np.e]), 1.0) == pytest.approx(1)
    with pytest.raises(NotInvertible):
        log_sigma([[0, 1], [0, 0]], 1.0)
    with pytest.raises(NotInvertible):
        log_sigma_profile(np.diag([1.0, 1e-10]))


def test_trace_f_fixtures():
    assert trace_f(np.diag([3.0, 1.0]), Pow(1)) == 2
    assert trace_f([[1, 1], [0, 1]], Pow(2)) == pytest.approx(1.5, abs=1e-14)
    assert trace_f(np.zeros((2, 2)), Log1pPow(2)) == 0


def test_fk_det_fixtures():
    assert fk_det(np.eye(3)) == 1
    assert fk_det([[1, 1], [0, 1]]) == pytest.approx(1, abs=1e-15)
    assert fk_det([[0, 1], [0, 0]]) == 0
    assert fk_det(np.diag([3.0, 1.0])) == pytest.approx(np.sqrt(3))


def test_golden_profile():
    a = np.array([[1.0, 1], [0, 1]])
    np.testing.assert_allclose(mu(a).values, [GOLDEN, 1 / GOLDEN], atol=1e-12)
    np.testing.assert_allclose(sigma_profile(a), [GOLDEN / 2, np.sqrt(5) / 2], atol=1e-12)
    np.testing.assert_allclose(log_sigma_profile(a), [np.log(GOLDEN) / 2, 0], atol=1e-12)


def test_step_function_contract():
    for bad in ([], [1, 2], [-1.0], [np.inf]):
        with pytest.raises(ValueError):
            StepFunction(bad)
    s = StepFunction([2.0, 1.0, 1.0])
    assert StepFunction.from_json(s.to_json()) == s
    assert s != StepFunction([2.0, 1.0, 0.0])
    assert json.loads(s.to_json()) == [2.0, 1.0, 1.0]
    np.testing.assert_allclose(s.profile(), [2 / 3, 1, 4 / 3])
    with pytest.raises(ValueError):
        s.values[0] = 5


@given(seeds, st.integers(1, 8))
def test_sigma_matches_variational_oracle(seed, n):
    x = psd(np.random.default_rng(seed), n)
    prof = sigma_profile(x)
    top = top_sum_profile(np.linalg.eigvalsh(x))
    np.testing.assert_allclose(prof, top, rtol=1e-10, atol=1e-14)
    for j in range(1, n + 1):
        assert variational_sigma(x, j) == pytest.approx(prof[j - 1], rel=1e-10, abs=1e-14)


@given(seeds, st.integers(1, 8))
def test_variational_oracle_is_a_sup(seed, n):
    """No random rank-j projection beats the top-j sum."""
    rng = np.random.default_rng(seed)
    x = psd(rng, n)
    j = int(rng.integers(1, n + 1))
    q, _ = np.linalg.qr(ginibre(rng, n))
    p = q[:, :j] @ q[:, :j].conj().T
    assert np.trace(x @ p).real / n <= sigma(x, j / n) + 1e-12


@given(seeds, st.integers(1, 10))
def test_fk_det_matches_elimination(seed, n):
    x = ginibre(np.random.default_rng(seed), n)
    ref = abs(gauss_det(x)) ** (1 / n)
    assert fk_det(x) == pytest.approx(ref, rel=1e-10)
    assert log_sigma(x, 1.0) == pytest.approx(np.log(ref), abs=1e-10 * max(1, abs(np.log(ref))))


@given(seeds, st.integers(1, 8), st.sampled_from([0.5, 1.0, 2.0]))
def test_mu_power(seed, n, p):
    x = ginibre(np.random.default_rng(seed), n)
    np.testing.assert_allclose(mu_power(x, p).values, mu(x).values ** p)


@pytest.mark.parametrize("name", sorted(LEMMAS))
@given(seed=seeds, n=st.integers(1, 8))
def test_lemma(name, seed, n):
    assert LEMMAS[name](np.random.default_rng(seed), n) <= 0
