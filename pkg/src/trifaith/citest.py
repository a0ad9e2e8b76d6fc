"""Sample partial correlations and the tests built on them."""
from __future__ import annotations

import csv
import math
import warnings
from dataclasses import dataclass
from functools import cached_property
from statistics import NormalDist
from typing import Callable, Iterator, Sequence

import numpy as np

from .graph import Dag
from .sem import CovMatrix, SingularMatrixError, pcorr_from_matrix

CLAMP = 1 - 1e-12


class InsufficientSampleError(ValueError):
    """Too few rows for the requested test; callers treat it as 'cannot test'."""


class DegenerateCorrelationWarning(RuntimeWarning):
    pass


@dataclass(frozen=True)
class Dataset:
    names: tuple[str, ...]
    values: np.ndarray

    def __post_init__(self):
        vals = np.asarray(self.values, dtype=float)
        if vals.ndim != 2 or vals.shape[0] < 1:
            raise ValueError("dataset needs at least one row")
        if vals.shape[1] != len(self.names):
            raise ValueError("column count does not match variable count")
        if not np.isfinite(vals).all():
            raise ValueError("dataset contains non-finite values")
        vals.setflags(write=False)
        object.__setattr__(self, "names", tuple(self.names))
        object.__setattr__(self, "values", vals)

    @property
    def n(self) -> int:
        return self.values.shape[0]

    @cached_property
    def cov(self) -> CovMatrix:
        if self.n < 2:
            raise InsufficientSampleError("need at least two rows for a covariance")
        S = np.cov(self.values, rowvar=False, ddof=1).reshape(len(self.names), len(self.names))
        return CovMatrix(self.names, (S + S.T) / 2, n=self.n)

    def write_csv(self, fh) -> None:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(self.names)
        for row in self.values:
            w.writerow([repr(float(v)) for v in row])

    def to_csv(self, path) -> None:
        with open(path, "w", newline="") as fh:
            self.write_csv(fh)

    @classmethod
    def from_csv(cls, path) -> Dataset:
        with open(path, newline="") as fh:
            rows = list(csv.reader(fh))
        if len(rows) < 2:
            raise ValueError(f"{path}: need a header row and at least one data row")
        try:
            vals = np.array([[float(v) for v in r] for r in rows[1:] if r], dtype=float)
        except ValueError as exc:
            raise ValueError(f"{path}: {exc}") from exc
        return cls(tuple(rows[0]), vals)


@dataclass(frozen=True)
class TestConfig:
    alpha: float = 0.05
    L: float = 0.1
    zero_tol: float = 1e-9

    __test__ = False  # not a pytest class

    def __post_init__(self):
        if not 0 < self.alpha < 1:
            raise ValueError("alpha must be in (0, 1)")
        if self.L < 0:
            raise ValueError("L must be nonnegative")
        if not self.zero_tol > 0:
            raise ValueError("zero_tol must be positive")


def cov_partial_correlation(cov: CovMatrix, x: str, y: str, w: Sequence[str] = ()) -> float:
    """Partial correlation from a (sample) covariance, flagging degenerate pairs."""
    w = tuple(w)
    if cov.n is not None and cov.n <= len(w) + 2:
        raise InsufficientSampleError(f"n={cov.n} too small to condition on {len(w)} variables")
    i, j, *ws = cov.idx((x, y, *w))
    try:
        r = pcorr_from_matrix(cov.matrix, i, j, ws, label=(x, y, *w))
    except SingularMatrixError:
        if w:
            raise
        S = cov.matrix
        with np.errstate(invalid="ignore", divide="ignore"):
            r = S[i, j] / math.sqrt(S[i, i] * S[j, j])
        if not abs(r) >= CLAMP:
            raise
        r = math.copysign(1.0, r)
    if abs(r) >= CLAMP:
        warnings.warn(f"degenerate correlation between {x} and {y}: {r}", DegenerateCorrelationWarning)
    return r


def sample_partial_correlation(data: Dataset, x: str, y: str, w: Sequence[str] = ()) -> float:
    return cov_partial_correlation(data.cov, x, y, w)


_NORMAL = NormalDist()


def zero_pcorr_test(r_hat: float, n: int, cond_size: int, alpha: float) -> int:
    """Fisher z test of a zero partial correlation: 1 rejects, 0 accepts."""
    if abs(r_hat) > 1:
        raise ValueError("|r_hat| must be at most 1")
    if n <= cond_size + 3:
        raise InsufficientSampleError(f"n={n} too small for {cond_size} conditioning variables")
    r = max(-CLAMP, min(CLAMP, r_hat))
    z = math.atanh(r)
    return int(math.sqrt(n - cond_size - 3) * abs(z) > _NORMAL.inv_cdf(1 - alpha / 2))


def margin_test(r_u: float, r_w: float, L: float) -> int:
    """0 accepts ``|r_u - r_w| >= L``, 1 rejects it."""
    return 0 if abs(r_u - r_w) >= L else 1


def local_markov_statements(dag: Dag) -> Iterator[tuple[str, str, list[str]]]:
    """``(x, y, parents(x))`` for every nondescendant nonparent ``y`` of ``x``."""
    for x in dag.vertices:
        pa = dag.sort(dag.parents(x))
        below = dag.descendants(x)
        for y in dag.vertices:
            if y not in below and y not in pa:
                yield x, y, pa


def markov_holds(dag: Dag, test: Callable[[str, str, list[str]], int | None]) -> bool | None:
    """Run ``test`` (0 = independent) on every local Markov statement.

    Returns ``None`` if some statement could not be tested, else whether
    all were accepted.
    """
    untestable = False
    for x, y, pa in local_markov_statements(dag):
        res = test(x, y, pa)
        if res is None:
            untestable = True
        elif res:
            return False
    return None if untestable else True


def markov_condition_test(dag: Dag, data: Dataset, alpha: float) -> bool | None:
    """Local Markov condition of ``dag`` against ``data``.

    ``None`` means some test needed more rows than available; callers treat
    it as a failure to confirm.
    """
    if set(dag.vertices) != set(data.names):
        raise ValueError("DAG and dataset have different variables")
    cov = data.cov

    def test(x, y, pa):
        try:
            r = cov_partial_correlation(cov, x, y, pa)
            return zero_pcorr_test(r, data.n, len(pa), alpha)
        except (InsufficientSampleError, SingularMatrixError):
            return None

    return markov_holds(dag, test)
