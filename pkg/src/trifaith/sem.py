"""Linear Gaussian structural equation models.

A model is ``X = B X + e`` over a DAG with independent Gaussian errors.
Covariances, partial correlations and regressions are computed from the
implied covariance; the same kernels serve sample covariances.
"""
from __future__ import annotations

import itertools
import json
import logging
import math
from dataclasses import dataclass, field
from typing import Callable, Iterable, Mapping, Sequence

import numpy as np

from .graph import Dag, Edge, GraphError, subsets

log = logging.getLogger(__name__)

ZERO_TOL = 1e-9


class ModelError(ValueError):
    pass


class SingularMatrixError(ArithmeticError):
    pass


class RejectionExhausted(RuntimeError):
    def __init__(self, tries: int):
        self.tries = tries
        super().__init__(f"no model accepted after {tries} draws (acceptance rate 0/{tries})")


@dataclass(frozen=True)
class LinearSem:
    dag: Dag
    coefficients: Mapping[Edge, float]
    error_variances: Mapping[str, float]

    def __post_init__(self):
        if set(self.coefficients) != set(self.dag.edges):
            raise ModelError("coefficients must be given for exactly the DAG's edges")
        if set(self.error_variances) != set(self.dag.vertices):
            raise ModelError("error variance required for every vertex")
        if any(not v > 0 for v in self.error_variances.values()):
            raise ModelError("error variances must be positive")
        object.__setattr__(self, "coefficients", {e: float(b) for e, b in self.coefficients.items()})
        object.__setattr__(self, "error_variances", {v: float(s) for v, s in self.error_variances.items()})

    @property
    def vertices(self) -> tuple[str, ...]:
        return self.dag.vertices

    def coef(self, a: str, b: str) -> float:
        """Coefficient of ``a -> b``; 0 when there is no such edge."""
        return self.coefficients.get((a, b), 0.0)

    def edge_coef(self, a: str, b: str) -> float:
        """Coefficient of the edge between ``a`` and ``b`` in whichever direction."""
        return self.coefficients.get((a, b), self.coefficients.get((b, a), 0.0))

    def b_matrix(self) -> np.ndarray:
        """``B[child, parent]`` in canonical vertex order."""
        p = len(self.vertices)
        B = np.zeros((p, p))
        idx = self.dag.index
        for (a, b), c in self.coefficients.items():
            B[idx(b), idx(a)] = c
        return B

    def omega(self) -> np.ndarray:
        return np.diag([self.error_variances[v] for v in self.vertices])

    def precision(self) -> np.ndarray:
        """``(I - B)^T var(E)^{-1} (I - B)``."""
        I_B = np.eye(len(self.vertices)) - self.b_matrix()
        return I_B.T @ np.diag(1.0 / np.diag(self.omega())) @ I_B

    def to_json(self) -> dict:
        d = self.dag
        return {
            "vertices": list(d.vertices),
            "edges": [
                {"from": a, "to": b, "coef": self.coefficients[(a, b)]}
                for a, b in sorted(d.edges, key=d._edge_key)
            ],
            "error_variances": {v: self.error_variances[v] for v in d.vertices},
        }

    @classmethod
    def from_json(cls, obj: Mapping) -> LinearSem:
        try:
            edges = [(e["from"], e["to"]) for e in obj["edges"]]
            dag = Dag(obj["vertices"], edges)
            coefs = {(e["from"], e["to"]): float(e["coef"]) for e in obj["edges"]}
            ev = obj.get("error_variances") or {v: 1.0 for v in dag.vertices}
            return cls(dag, coefs, {v: float(s) for v, s in ev.items()})
        except (KeyError, TypeError) as exc:
            raise ModelError(f"malformed model JSON: {exc}") from exc

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=2)

    @classmethod
    def load(cls, path) -> LinearSem:
        with open(path) as fh:
            return cls.from_json(json.load(fh))


@dataclass(frozen=True)
class CovMatrix:
    """Covariance indexed by variable name. ``n`` is ``None`` for a population matrix."""

    names: tuple[str, ...]
    matrix: np.ndarray
    n: int | None = None
    _index: dict = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=float)
        object.__setattr__(self, "names", tuple(self.names))
        if m.shape != (len(self.names),) * 2:
            raise ModelError("covariance shape does not match names")
        if not np.allclose(m, m.T, atol=1e-12, rtol=0):
            raise ModelError("covariance matrix is not symmetric")
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)
        object.__setattr__(self, "_index", {v: i for i, v in enumerate(self.names)})

    @property
    def is_population(self) -> bool:
        return self.n is None

    def idx(self, names: Iterable[str]) -> list[int]:
        try:
            return [self._index[v] for v in names]
        except KeyError as exc:
            raise GraphError(f"unknown vertex {exc.args[0]!r}") from None

    def sub(self, names: Sequence[str]) -> np.ndarray:
        ix = self.idx(names)
        return self.matrix[np.ix_(ix, ix)]

    def correlation(self) -> np.ndarray:
        sd = np.sqrt(np.diag(self.matrix))
        return self.matrix / np.outer(sd, sd)


@dataclass(frozen=True)
class ModelClassParams:
    k: float = 0.3
    J: float = 0.05
    C: float = 0.95

    def __post_init__(self):
        if not 0 < self.k <= 1:
            raise ValueError("k must be in (0, 1]")
        if not self.J > 0:
            raise ValueError("J must be positive")
        if not 0 < self.C < 1:
            raise ValueError("C must be in (0, 1)")


def implied_covariance(sem: LinearSem) -> CovMatrix:
    p = len(sem.vertices)
    I_B = np.eye(p) - sem.b_matrix()
    try:
        A = np.linalg.solve(I_B, np.eye(p))
    except np.linalg.LinAlgError as exc:
        raise SingularMatrixError("I - B is singular") from exc
    S = A @ sem.omega() @ A.T
    return CovMatrix(sem.vertices, (S + S.T) / 2)


def pcorr_from_matrix(S: np.ndarray, i: int, j: int, w: Sequence[int], label=None) -> float:
    """Partial correlation of coordinates ``i``, ``j`` given ``w``.

    ``-R[0,1] / sqrt(R[0,0] R[1,1])`` with ``R`` the inverse of the
    submatrix over ``[i, j, *w]``.
    """
    ix = [i, j, *w]
    sub = S[np.ix_(ix, ix)]
    try:
        if np.linalg.cond(sub) > 1e13:
            raise np.linalg.LinAlgError
        R = np.linalg.inv(sub)
    except np.linalg.LinAlgError:
        raise SingularMatrixError(f"covariance submatrix over {label or ix} is singular") from None
    r = float(-R[0, 1] / math.sqrt(R[0, 0] * R[1, 1]))
    return min(1.0, max(-1.0, r))


def partial_correlation(cov: CovMatrix, x: str, y: str, w: Iterable[str] = ()) -> float:
    w = tuple(w)
    if x == y:
        raise GraphError("x and y must differ")
    if x in w or y in w:
        raise GraphError("conditioning set must exclude x and y")
    i, j, *ws = cov.idx((x, y, *w))
    return pcorr_from_matrix(cov.matrix, i, j, ws, label=(x, y, *w))


def population_oracle(sem: LinearSem, zero_tol: float = ZERO_TOL) -> Callable[[str, str, Iterable[str]], bool]:
    if not zero_tol > 0:
        raise ValueError("zero_tol must be positive")
    cov = implied_covariance(sem)

    def independent(x: str, y: str, w: Iterable[str] = ()) -> bool:
        return abs(partial_correlation(cov, x, y, w)) < zero_tol

    return independent


def standardize(sem: LinearSem) -> LinearSem:
    var = np.diag(implied_covariance(sem).matrix)
    sd = {v: math.sqrt(var[i]) for i, v in enumerate(sem.vertices)}
    coefs = {(a, b): c * sd[a] / sd[b] for (a, b), c in sem.coefficients.items()}
    ev = {v: s / sd[v] ** 2 for v, s in sem.error_variances.items()}
    return LinearSem(sem.dag, coefs, ev)


def conditional_variances(sem_or_cov: LinearSem | CovMatrix) -> dict[str, float]:
    """``var(X | V \\ {X})`` for every vertex, i.e. ``1 / R[X, X]``."""
    cov = sem_or_cov if isinstance(sem_or_cov, CovMatrix) else implied_covariance(sem_or_cov)
    R = np.linalg.inv(cov.matrix)
    return {v: float(1.0 / R[i, i]) for i, v in enumerate(cov.names)}


@dataclass(frozen=True)
class TriangleViolation:
    x: str
    y: str
    z: str
    w: tuple[str, ...]
    pcorr: float
    bound: float

    def __str__(self) -> str:
        return (
            f"triangle <{self.x},{self.y},{self.z}> W={{{', '.join(self.w)}}}: "
            f"|rho|={abs(self.pcorr):.4g} < k*|e|={self.bound:.4g}"
        )


def check_k_triangle_faithfulness(sem: LinearSem, k: float) -> list[TriangleViolation]:
    """Every (triangle, W) pair violating k-Triangle-Faithfulness.

    For each triangle and each choice of middle vertex Y, the endpoints X, Z
    must satisfy ``|rho(X, Z | W)| >= k |e(X - Z)|`` for every W that omits Y
    (Y a noncollider in the DAG) or contains Y (Y a collider).
    """
    cov = implied_covariance(sem)
    dag = sem.dag
    out = []
    for tri in dag.triangles():
        for y in tri:
            x, z = (v for v in tri if v != y)
            bound = k * abs(sem.edge_coef(x, z))
            collider = dag.is_collider(x, y, z)
            rest = [v for v in dag.vertices if v not in (x, y, z)]
            for s in subsets(rest):
                w = dag.sort((*s, y)) if collider else list(s)
                r = partial_correlation(cov, x, z, w)
                if abs(r) < bound:
                    out.append(TriangleViolation(x, y, z, tuple(w), r, bound))
    return out


def check_nvv(sem: LinearSem, J: float) -> bool:
    return bool(min(conditional_variances(sem).values()) >= J)


def max_abs_partial_correlation(sem_or_cov: LinearSem | CovMatrix) -> float:
    cov = sem_or_cov if isinstance(sem_or_cov, CovMatrix) else implied_covariance(sem_or_cov)
    names = cov.names
    best = 0.0
    for x, y in itertools.combinations(names, 2):
        rest = [v for v in names if v not in (x, y)]
        for w in subsets(rest):
            best = max(best, abs(partial_correlation(cov, x, y, w)))
    return best


def check_ubc(sem: LinearSem, C: float) -> bool:
    return bool(max_abs_partial_correlation(sem) <= C)


@dataclass(frozen=True)
class CoefficientBound:
    parent: str
    child: str
    conditioning: tuple[str, ...]
    coef: float
    pcorr: float
    lower: float
    upper: float
    holds: bool


def coefficient_bounds(sem: LinearSem, J: float, slack: float = 1e-9) -> list[CoefficientBound]:
    """Check the coefficient/partial-correlation sandwich for every edge.

    For edge ``Xi -> Xj`` and every ancestral set ``A`` holding both
    endpoints but no proper descendant of ``Xj``, compare
    ``|rho(Xi, Xj | A \\ {Xi, Xj})|`` against ``|b| sqrt(J)`` and
    ``|b| / sqrt(J)``.
    """
    dag = sem.dag
    cov = implied_covariance(sem)
    out = []
    for a, b in sorted(dag.edges, key=dag._edge_key):
        coef = sem.coefficients[(a, b)]
        below = dag.descendants(b) - {b}
        free = [v for v in dag.vertices if v not in (a, b) and v not in below]
        for s in subsets(free):
            A = {a, b, *s}
            if dag.ancestors(A) != A:
                continue
            w = dag.sort(A - {a, b})
            r = partial_correlation(cov, a, b, w)
            lo, hi = abs(coef) * math.sqrt(J), abs(coef) / math.sqrt(J)
            ok = hi + slack >= abs(r) >= lo - slack
            out.append(CoefficientBound(a, b, tuple(w), coef, r, lo, hi, ok))
    return out


def verify_coefficient_bounds(sem: LinearSem, J: float, slack: float = 1e-9) -> bool:
    return all(r.holds for r in coefficient_bounds(sem, J, slack))


@dataclass(frozen=True)
class RandomSemConfig:
    n_vars: int
    edge_prob: float = 0.4
    coef_range: tuple[float, float] = (0.2, 0.9)
    params: ModelClassParams = field(default_factory=ModelClassParams)
    seed: int | np.random.SeedSequence | None = None
    max_tries: int = 10


def random_dag(n_vars: int, edge_prob: float, rng: np.random.Generator, names=None) -> Dag:
    names = list(names or [f"X{i + 1}" for i in range(n_vars)])
    order = rng.permutation(n_vars)
    edges = []
    for i in range(n_vars):
        for j in range(i + 1, n_vars):
            if rng.random() < edge_prob:
                edges.append((names[order[i]], names[order[j]]))
    return Dag(names, edges)


def random_coefficients(dag: Dag, coef_range, rng: np.random.Generator) -> LinearSem:
    lo, hi = coef_range
    coefs = {}
    for e in sorted(dag.edges, key=dag._edge_key):
        coefs[e] = rng.uniform(lo, hi) * rng.choice((-1.0, 1.0))
    return LinearSem(dag, coefs, {v: 1.0 for v in dag.vertices})


def in_model_class(sem: LinearSem, params: ModelClassParams) -> bool:
    return (
        check_nvv(sem, params.J)
        and check_ubc(sem, params.C)
        and not check_k_triangle_faithfulness(sem, params.k)
    )


def draw_sem(config: RandomSemConfig) -> tuple[LinearSem, int]:
    """Like :func:`random_sem` but also returns the number of draws used."""
    if not 0 <= config.edge_prob <= 1:
        raise ValueError("edge_prob must be in [0, 1]")
    rng = np.random.default_rng(config.seed)
    for attempt in range(1, config.max_tries + 1):
        dag = random_dag(config.n_vars, config.edge_prob, rng)
        sem = standardize(random_coefficients(dag, config.coef_range, rng))
        if in_model_class(sem, config.params):
            log.debug("random_sem accepted after %d draw(s)", attempt)
            return sem, attempt
    log.warning("random_sem rejected all %d draws", config.max_tries)
    raise RejectionExhausted(config.max_tries)


def random_sem(config: RandomSemConfig) -> LinearSem:
    """Rejection-sample a standardized model from the (k, J, C) class."""
    return draw_sem(config)[0]


def sample(sem: LinearSem, n: int, seed=None):
    """``n`` i.i.d. rows, evaluating the equations in topological order."""
    from .citest import Dataset

    if n < 1:
        raise ValueError("n must be at least 1")
    rng = np.random.default_rng(seed)
    vs = sem.vertices
    idx = sem.dag.index
    X = np.empty((n, len(vs)))
    noise = rng.standard_normal((n, len(vs)))
    for v in sem.dag.topological_order():
        i = idx(v)
        col = math.sqrt(sem.error_variances[v]) * noise[:, i]
        for p in sem.dag.sort(sem.dag.parents(v)):
            col = col + sem.coefficients[(p, v)] * X[:, idx(p)]
        X[:, i] = col
    return Dataset(vs, X)


def regression_coefficients(cov: CovMatrix, target: str, predictors: Sequence[str]) -> list[float]:
    """``cov(target, P) var(P)^{-1}`` for predictors ``P``."""
    predictors = list(predictors)
    if not predictors:
        return []
    if target in predictors:
        raise GraphError("target cannot be its own predictor")
    S_pp = cov.sub(predictors)
    t, *ps = cov.idx([target, *predictors])
    s_pt = cov.matrix[ps, t]
    if np.linalg.cond(S_pp) > 1e13:
        raise SingularMatrixError(f"predictor covariance over {predictors} is singular")
    return [float(b) for b in np.linalg.solve(S_pp, s_pt)]


def residual_variance(cov: CovMatrix, target: str, predictors: Sequence[str]) -> float:
    """``var(target | predictors)``."""
    predictors = list(predictors)
    t = cov.idx([target])[0]
    if not predictors:
        return float(cov.matrix[t, t])
    beta = np.array(regression_coefficients(cov, target, predictors))
    ps = cov.idx(predictors)
    return float(cov.matrix[t, t] - cov.matrix[t, ps] @ beta)


# --------------------------------------------------------------------------
# constructed unfaithful models


def triangle_cancellation_model(a: float = 0.6, b: float = 0.5) -> LinearSem:
    """``X -> Y -> Z`` plus ``X -> Z`` with the direct edge cancelling the chain.

    With unit error variances ``cov(X, Z) = e(X->Z) + a b``, so setting
    ``e(X->Z) = -a b`` makes ``X`` and ``Z`` marginally uncorrelated.
    """
    dag = Dag("XYZ", [("X", "Y"), ("Y", "Z"), ("X", "Z")])
    coefs = {("X", "Y"): a, ("Y", "Z"): b, ("X", "Z"): -a * b}
    return LinearSem(dag, coefs, {v: 1.0 for v in "XYZ"})


def four_cycle_cancellation_model(a: float = 0.8, b: float = 0.7, d: float = 0.6) -> LinearSem:
    """``X -> W -> Z`` and collider ``X -> Y <- Z`` with ``rho(X, Z | Y) = 0``.

    Unit error variances. Writing ``s = cov(X, Z) = a b`` and
    ``v = var(Z) = b^2 (a^2 + 1) + 1``, the condition
    ``cov(X,Z) var(Y) = cov(X,Y) cov(Z,Y)`` reduces to
    ``c d (v - s^2) = s`` for the coefficient ``c`` of ``X -> Y``, which is
    solved exactly here. Every other independence is the one the DAG entails.
    """
    s = a * b
    v = b * b * (a * a + 1) + 1
    c = s / (d * (v - s * s))
    dag = Dag("XYZW", [("X", "W"), ("W", "Z"), ("X", "Y"), ("Z", "Y")])
    coefs = {("X", "W"): a, ("W", "Z"): b, ("X", "Y"): c, ("Z", "Y"): d}
    return LinearSem(dag, coefs, {v_: 1.0 for v_ in "XYZW"})
