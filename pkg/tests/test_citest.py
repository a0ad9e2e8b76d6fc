import itertools
import math
import warnings

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from trifaith.citest import (
    Dataset,
    DegenerateCorrelationWarning,
    InsufficientSampleError,
    TestConfig,
    local_markov_statements,
    margin_test,
    markov_condition_test,
    sample_partial_correlation,
    zero_pcorr_test,
)
from trifaith.graph import Dag, enumerate_disambiguations, extend_to_dag, is_d_separated, subsets
from trifaith.search import PopulationDecider, csgs
from trifaith.sem import CovMatrix, RandomSemConfig, implied_covariance, partial_correlation, random_sem, sample


def test_dataset_validation():
    with pytest.raises(ValueError):
        Dataset(("A", "B"), np.zeros((3, 3)))
    with pytest.raises(ValueError):
        Dataset(("A",), np.array([[np.nan]]))
    with pytest.raises(ValueError):
        Dataset(("A",), np.zeros((0, 1)))


def test_csv_round_trip_is_exact(tmp_path, chain_sem):
    d = sample(chain_sem, 30, seed=4)
    path = tmp_path / "d.csv"
    d.to_csv(path)
    back = Dataset.from_csv(path)
    assert back.names == d.names
    assert np.array_equal(back.values, d.values)


def test_csv_rejects_garbage(tmp_path):
    p = tmp_path / "bad.csv"
    p.write_text("A,B\n1,x\n")
    with pytest.raises(ValueError):
        Dataset.from_csv(p)


def test_identical_columns_flagged_as_degenerate():
    x = np.random.default_rng(0).standard_normal(50)
    d = Dataset(("X", "Y"), np.column_stack([x, x]))
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        r = sample_partial_correlation(d, "X", "Y")
    assert r == pytest.approx(1.0)
    assert any(issubclass(w.category, DegenerateCorrelationWarning) for w in caught)


def test_chain_sample_partial_correlation_near_zero(chain_sem):
    d = sample(chain_sem, 100_000, seed=9)
    assert abs(sample_partial_correlation(d, "X", "Z", ["Y"])) < 0.02


def test_sample_and_population_share_kernel(chain_sem):
    cov = implied_covariance(chain_sem)
    d = Dataset(("X", "Y", "Z"), np.zeros((10, 3)) + np.arange(3))
    object.__setattr__(d, "cov", CovMatrix(cov.names, cov.matrix, n=10**6))
    assert sample_partial_correlation(d, "X", "Z") == partial_correlation(cov, "X", "Z")


def test_sample_too_small():
    d = Dataset(("A", "B", "C"), np.random.default_rng(1).standard_normal((3, 3)))
    with pytest.raises(InsufficientSampleError):
        sample_partial_correlation(d, "A", "B", ["C"])


def test_fisher_examples():
    assert zero_pcorr_test(0.0, 50, 2, 0.05) == 0
    assert zero_pcorr_test(0.0, 10**6, 0, 0.5) == 0
    # z = atanh(0.5) ~ 0.549; sqrt(997) * 0.549 ~ 17.3 > 1.96
    assert zero_pcorr_test(0.5, 1000, 0, 0.05) == 1
    assert math.sqrt(997) * math.atanh(0.5) == pytest.approx(17.34, abs=0.01)


def test_fisher_threshold_edge():
    n = 103
    crit = 1.959963984540054 / math.sqrt(n - 3)
    assert zero_pcorr_test(math.tanh(crit * 0.999), n, 0, 0.05) == 0
    assert zero_pcorr_test(math.tanh(crit * 1.001), n, 0, 0.05) == 1


def test_fisher_errors_and_clamp():
    with pytest.raises(InsufficientSampleError):
        zero_pcorr_test(0.1, 5, 2, 0.05)
    with pytest.raises(ValueError):
        zero_pcorr_test(1.5, 100, 0, 0.05)
    assert zero_pcorr_test(1.0, 100, 0, 0.05) == 1
    assert zero_pcorr_test(-1.0, 100, 0, 0.05) == 1


def test_margin_examples():
    assert margin_test(0.4, 0.0, 0.2) == 0
    assert margin_test(0.05, 0.0, 0.2) == 1
    assert margin_test(0.3, 0.3, 0.0) == 0


@given(st.floats(-1, 1), st.floats(-1, 1), st.floats(0, 2))
def test_margin_symmetric_and_sign_invariant(a, b, L):
    assert margin_test(a, b, L) == margin_test(b, a, L) == margin_test(-a, -b, L)


def test_test_config_validation():
    with pytest.raises(ValueError):
        TestConfig(alpha=0)
    with pytest.raises(ValueError):
        TestConfig(L=-1)
    assert TestConfig().alpha == 0.05 and TestConfig().L == 0.1


def test_local_markov_statements():
    g = Dag("XYZ", [("X", "Y"), ("Y", "Z")])
    stmts = {(x, y, tuple(pa)) for x, y, pa in local_markov_statements(g)}
    assert stmts == {("Z", "X", ("Y",))}


def test_markov_single_vertex():
    d = Dataset(("A",), np.zeros((5, 1)))
    assert markov_condition_test(Dag("A"), d, 0.05) is True


def test_markov_true_dag_passes_at_large_n(collider_sem):
    d = sample(collider_sem, 20_000, seed=3)
    assert markov_condition_test(collider_sem.dag, d, 0.01) is True


def test_markov_untestable_is_none():
    d = Dataset(("A", "B", "C"), np.random.default_rng(0).standard_normal((4, 3)))
    assert markov_condition_test(Dag("ABC", [("A", "B"), ("B", "C")]), d, 0.05) is None


def test_markov_rejects_pattern_with_false_marginal_independence(four_cycle_sem):
    ep = csgs(PopulationDecider.from_sem(four_cycle_sem))
    d = sample(four_cycle_sem, 50_000, seed=12)
    wrong = [p for p in enumerate_disambiguations(ep) if is_d_separated(extend_to_dag(p), "X", "Z", ())]
    assert len(wrong) == 1
    assert markov_condition_test(extend_to_dag(wrong[0]), d, 0.05) is False


def test_markov_mismatched_variables():
    d = Dataset(("A", "B"), np.zeros((5, 2)))
    with pytest.raises(ValueError):
        markov_condition_test(Dag("AC"), d, 0.05)


@pytest.mark.slow
def test_power_increases_with_n():
    rng = np.random.default_rng(5)
    rho = 0.2
    cov = np.array([[1, rho], [rho, 1]])
    rates = []
    for n in (100, 1000, 10000):
        hits = 0
        for _ in range(300):
            x = rng.multivariate_normal([0, 0], cov, size=n)
            hits += zero_pcorr_test(sample_partial_correlation(Dataset(("A", "B"), x), "A", "B"), n, 0, 0.05)
        rates.append(hits / 300)
    assert rates[0] <= rates[1] + 0.03 <= rates[2] + 0.06
    assert rates[2] == 1.0


@pytest.mark.slow
def test_sample_matches_population_at_large_n():
    sem = random_sem(RandomSemConfig(4, seed=2))
    pop = implied_covariance(sem)
    close = total = 0
    for rep in range(20):
        d = sample(sem, 10**6, seed=rep)
        for x, y in itertools.combinations(sem.vertices, 2):
            for w in subsets([v for v in sem.vertices if v not in (x, y)]):
                total += 1
                close += abs(sample_partial_correlation(d, x, y, w) - partial_correlation(pop, x, y, w)) <= 0.01
    assert close / total >= 0.99
