import itertools
import json
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import covariance_by_series, generic_coefficients, recursive_pcorr
from trifaith.graph import Dag, is_d_separated, iter_dags, subsets
from trifaith.sem import (
    CovMatrix,
    LinearSem,
    ModelClassParams,
    ModelError,
    RandomSemConfig,
    RejectionExhausted,
    SingularMatrixError,
    check_k_triangle_faithfulness,
    check_nvv,
    check_ubc,
    conditional_variances,
    draw_sem,
    four_cycle_cancellation_model,
    implied_covariance,
    coefficient_bounds,
    partial_correlation,
    population_oracle,
    random_sem,
    regression_coefficients,
    residual_variance,
    sample,
    standardize,
    triangle_cancellation_model,
    verify_coefficient_bounds,
)


def unit(dag, coefs):
    return LinearSem(dag, coefs, {v: 1.0 for v in dag.vertices})


def test_single_edge_covariance():
    sem = LinearSem(Dag("XY", [("X", "Y")]), {("X", "Y"): 0.5}, {"X": 1.0, "Y": 0.75})
    S = implied_covariance(sem).matrix
    assert S[1, 1] == pytest.approx(1.0, abs=1e-12)
    assert S[0, 1] == pytest.approx(0.5, abs=1e-12)


def test_empty_graph_identity():
    sem = unit(Dag("ABC"), {})
    assert np.allclose(implied_covariance(sem).matrix, np.eye(3))


@pytest.mark.parametrize("seed", range(20))
def test_covariance_matches_series_and_precision(seed):
    rng = np.random.default_rng(seed)
    dag = Dag([f"V{i}" for i in range(6)], [(f"V{i}", f"V{j}") for i, j in itertools.combinations(range(6), 2) if rng.random() < 0.5])
    sem = LinearSem(dag, generic_coefficients(dag, rng), {v: float(rng.uniform(0.5, 2)) for v in dag.vertices})
    S = implied_covariance(sem).matrix
    assert np.allclose(S, covariance_by_series(dag.vertices, sem.coefficients, sem.error_variances), atol=1e-12)
    assert np.allclose(S @ sem.precision(), np.eye(6), atol=1e-9)


def test_chain_partial_correlations(chain_sem):
    cov = implied_covariance(chain_sem)
    assert partial_correlation(cov, "X", "Z") == pytest.approx(0.36, abs=1e-12)
    assert abs(partial_correlation(cov, "X", "Z", ["Y"])) < 1e-12


def test_plain_correlation_when_unconditioned(collider_sem):
    cov = implied_covariance(collider_sem)
    c = cov.correlation()
    assert partial_correlation(cov, "X", "Z") == pytest.approx(c[0, 2])


def test_partial_correlation_matches_recursion():
    rng = np.random.default_rng(3)
    dag = Dag("ABCDE", [("A", "B"), ("A", "C"), ("B", "D"), ("C", "D"), ("D", "E"), ("A", "E")])
    cov = implied_covariance(unit(dag, generic_coefficients(dag, rng)))
    for x, y in itertools.combinations(dag.vertices, 2):
        rest = [v for v in dag.vertices if v not in (x, y)]
        for w in subsets(rest):
            i, j, *ws = cov.idx((x, y, *w))
            assert partial_correlation(cov, x, y, w) == pytest.approx(recursive_pcorr(cov.matrix, i, j, ws), abs=1e-10)


def test_singular_submatrix_is_named():
    cov = CovMatrix("XYZ", np.array([[1.0, 1.0, 0.5], [1.0, 1.0, 0.5], [0.5, 0.5, 1.0]]))
    with pytest.raises(SingularMatrixError, match="X"):
        partial_correlation(cov, "X", "Z", ["Y"])


def test_vanishing_partial_correlations_track_d_separation():
    rng = np.random.default_rng(11)
    for dag in iter_dags("ABCD"):
        cov = implied_covariance(unit(dag, generic_coefficients(dag, rng)))
        for x, y in itertools.combinations(dag.vertices, 2):
            for w in subsets([v for v in dag.vertices if v not in (x, y)]):
                zero = abs(partial_correlation(cov, x, y, w)) < 1e-9
                assert zero == is_d_separated(dag, x, y, w)


def test_population_oracle(collider_sem, chain_sem):
    assert population_oracle(collider_sem)("X", "Y", ())
    chain = population_oracle(chain_sem)
    assert chain("X", "Z", ["Y"]) and not chain("X", "Z", ())


def test_population_oracle_reports_cancellation(four_cycle_sem):
    oracle = population_oracle(four_cycle_sem)
    dag = four_cycle_sem.dag
    extra = []
    for x, y in itertools.combinations(dag.vertices, 2):
        for w in subsets([v for v in dag.vertices if v not in (x, y)]):
            if oracle(x, y, w) and not is_d_separated(dag, x, y, w):
                extra.append((x, y, w))
    assert extra == [("X", "Z", ("Y",))]


def test_standardize_examples():
    sem = standardize(unit(Dag("XY", [("X", "Y")]), {("X", "Y"): 1.0}))
    assert sem.coef("X", "Y") == pytest.approx(1 / math.sqrt(2), abs=1e-12)
    assert sem.error_variances["Y"] == pytest.approx(0.5, abs=1e-12)
    again = standardize(sem)
    assert all(again.coefficients[e] == pytest.approx(c, abs=1e-12) for e, c in sem.coefficients.items())
    assert np.allclose(np.diag(implied_covariance(sem).matrix), 1.0)


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10_000))
def test_standardize_preserves_partial_correlations(seed):
    rng = np.random.default_rng(seed)
    dag = Dag("ABCD", [(a, b) for a, b in itertools.combinations("ABCD", 2) if rng.random() < 0.6])
    sem = LinearSem(dag, generic_coefficients(dag, rng, 0.1, 2.0), {v: float(rng.uniform(0.2, 3)) for v in "ABCD"})
    before, after = implied_covariance(sem), implied_covariance(standardize(sem))
    for x, y in itertools.combinations("ABCD", 2):
        for w in subsets([v for v in "ABCD" if v not in (x, y)]):
            assert partial_correlation(before, x, y, w) == pytest.approx(partial_correlation(after, x, y, w), abs=1e-10)


def test_triangle_with_equal_coefficients_is_fine():
    tri = Dag("XYZ", [("X", "Y"), ("Y", "Z"), ("X", "Z")])
    sem = standardize(unit(tri, {e: 0.5 for e in tri.edges}))
    assert check_k_triangle_faithfulness(sem, 0.1) == []


def test_no_triangle_no_violation(collider_sem):
    assert check_k_triangle_faithfulness(standardize(collider_sem), 1.0) == []


@pytest.mark.parametrize("k", [1e-6, 0.1, 0.5])
def test_cancelling_triangle_violates_for_any_k(k):
    sem = standardize(triangle_cancellation_model())
    bad = check_k_triangle_faithfulness(sem, k)
    assert any(v.w == () and (v.x, v.z) in (("X", "Z"), ("Z", "X")) for v in bad)
    assert "triangle" in str(bad[0])


def test_nvv_and_ubc_on_empty_graph():
    sem = unit(Dag("ABC"), {})
    assert check_nvv(sem, 1.0) and check_ubc(sem, 1e-6)


def test_ubc_single_edge():
    sem = LinearSem(Dag("XY", [("X", "Y")]), {("X", "Y"): 0.9}, {"X": 1.0, "Y": 0.19})
    assert not check_ubc(sem, 0.8)
    assert check_ubc(sem, 0.95)


def test_nvv_is_inverse_precision_diagonal(collider_sem):
    sem = standardize(collider_sem)
    R = np.linalg.inv(implied_covariance(sem).matrix)
    cv = conditional_variances(sem)
    assert [cv[v] for v in sem.vertices] == pytest.approx(list(1 / np.diag(R)))
    assert check_nvv(sem, min(cv.values())) and not check_nvv(sem, min(cv.values()) + 1e-6)


def test_coefficient_bounds_single_edge():
    sem = LinearSem(Dag("XY", [("X", "Y")]), {("X", "Y"): 0.5}, {"X": 1.0, "Y": 0.75})
    assert verify_coefficient_bounds(sem, 0.75)
    (rec,) = coefficient_bounds(sem, 0.75)
    assert rec.upper == pytest.approx(0.5 / math.sqrt(0.75))
    assert rec.lower == pytest.approx(0.5 * math.sqrt(0.75))


def test_coefficient_bounds_check_every_ancestral_set():
    sem = standardize(unit(Dag("ABCDE", [("A", "B"), ("C", "B"), ("B", "D"), ("A", "D")]),
                           {("A", "B"): 0.5, ("C", "B"): -0.4, ("B", "D"): 0.6, ("A", "D"): 0.3}))
    recs = coefficient_bounds(sem, min(conditional_variances(sem).values()))
    sets = {(r.parent, r.child): set() for r in recs}
    for r in recs:
        sets[(r.parent, r.child)].add(r.conditioning)
    # any ancestral set holding both endpoints also holds the child's other
    # parents; the isolated E may or may not join
    assert sets == {
        ("A", "B"): {("C",), ("C", "E")},
        ("C", "B"): {("A",), ("A", "E")},
        ("B", "D"): {("A", "C"), ("A", "C", "E")},
        ("A", "D"): {("B", "C"), ("B", "C", "E")},
    }
    assert all(r.holds for r in recs)


def test_random_sem_determinism_and_single_vertex():
    cfg = RandomSemConfig(5, seed=42)
    assert random_sem(cfg) == random_sem(cfg)
    one = random_sem(RandomSemConfig(1, seed=0))
    assert one.vertices == ("X1",) and not one.dag.edges


def test_random_sem_accepted_models_revalidate():
    params = ModelClassParams()
    for seed in range(200):
        sem, _ = draw_sem(RandomSemConfig(5, params=params, seed=seed))
        assert check_k_triangle_faithfulness(sem, params.k) == []
        assert check_nvv(sem, params.J) and check_ubc(sem, params.C)
        assert np.allclose(np.diag(implied_covariance(sem).matrix), 1.0)


def test_random_sem_rejection_budget():
    impossible = ModelClassParams(k=1.0, J=0.99, C=0.01)
    with pytest.raises(RejectionExhausted, match="3"):
        random_sem(RandomSemConfig(4, edge_prob=1.0, params=impossible, seed=0, max_tries=3))


def test_sample_shapes_and_determinism(chain_sem):
    d = sample(chain_sem, 1, seed=0)
    assert d.values.shape == (1, 3)
    assert np.array_equal(sample(chain_sem, 50, seed=5).values, sample(chain_sem, 50, seed=5).values)


def test_sample_covariance_converges():
    empty = unit(Dag("ABC"), {})
    assert np.allclose(sample(empty, 100_000, seed=1).cov.matrix, np.eye(3), atol=0.05)
    sem = random_sem(RandomSemConfig(5, seed=8))
    S = implied_covariance(sem).matrix
    d = sample(sem, 100_000, seed=2)
    assert np.allclose(d.cov.matrix, S, atol=0.05)
    n = d.n
    assert np.mean(np.abs(d.cov.matrix - S) <= 3 * math.sqrt(1 / n) * 2) >= 0.99


def test_regression_recovers_collider_coefficients(collider_sem):
    cov = implied_covariance(collider_sem)
    assert regression_coefficients(cov, "Z", ["X", "Y"]) == pytest.approx([0.6, 0.7], abs=1e-12)


def test_single_predictor_standardized_gives_correlation(chain_sem):
    cov = implied_covariance(chain_sem)
    assert regression_coefficients(cov, "Z", ["X"]) == pytest.approx([0.36])


@pytest.mark.parametrize("seed", range(10))
def test_parent_regression_recovers_structure(seed):
    sem = random_sem(RandomSemConfig(6, edge_prob=0.5, seed=seed))
    cov = implied_covariance(sem)
    for z in sem.vertices:
        pa = sem.dag.sort(sem.dag.parents(z))
        got = regression_coefficients(cov, z, pa)
        assert got == pytest.approx([sem.coef(p, z) for p in pa], abs=1e-9)
        assert residual_variance(cov, z, pa) == pytest.approx(sem.error_variances[z], abs=1e-9)


def test_regression_singular_predictors():
    cov = CovMatrix("XYZ", np.array([[1.0, 1.0, 0.5], [1.0, 1.0, 0.5], [0.5, 0.5, 1.0]]))
    with pytest.raises(SingularMatrixError):
        regression_coefficients(cov, "Z", ["X", "Y"])


def test_sem_json_round_trip(tmp_path, four_cycle_sem):
    path = tmp_path / "m.json"
    path.write_text(four_cycle_sem.dumps())
    assert LinearSem.load(path) == four_cycle_sem
    with pytest.raises(ModelError):
        LinearSem.from_json({"vertices": ["X"], "edges": [{"from": "X"}]})
    with pytest.raises(ModelError):
        LinearSem(Dag("XY", [("X", "Y")]), {}, {"X": 1.0, "Y": 1.0})
    with pytest.raises(ModelError):
        LinearSem(Dag("X"), {}, {"X": 0.0})
    assert json.loads(four_cycle_sem.dumps())["edges"][0].keys() == {"from", "to", "coef"}


def test_four_cycle_model_cancels_exactly():
    sem = four_cycle_cancellation_model(0.7, 0.4, -0.5)
    cov = implied_covariance(sem)
    assert abs(partial_correlation(cov, "X", "Z", ["Y"])) < 1e-14
    assert abs(partial_correlation(cov, "X", "Z")) > 0.1
