"""SGS, Conservative SGS and Very Conservative SGS.

Every search takes a *decider*: an object answering zero-partial-correlation
questions either exactly (:class:`PopulationDecider`) or by Fisher z tests on
data (:class:`SampleDecider`). Conditioning sets range over all subsets of
the remaining variables, smallest first, so cost grows as ``2^p``.
"""
from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .citest import (
    Dataset,
    InsufficientSampleError,
    cov_partial_correlation,
    margin_test,
    markov_condition_test,
    markov_holds,
    zero_pcorr_test,
)
from .graph import (
    Dag,
    ExtendedPattern,
    GraphError,
    PairMark,
    Pattern,
    Triple,
    TripleMark,
    apply_orientation_rules,
    enumerate_disambiguations,
    extend_to_dag,
    orient_colliders,
    subsets,
)
from .sem import ZERO_TOL, CovMatrix, LinearSem, SingularMatrixError, implied_covariance

MAX_VARS = 12


class FaithfulnessViolation(RuntimeError):
    """SGS met an unshielded triple that neither orientation clause covers."""


class _Decider:
    is_sample = False

    def __init__(self, cov: CovMatrix):
        self.cov = cov
        self._cache: dict = {}

    @property
    def variables(self) -> tuple[str, ...]:
        return self.cov.names

    def pcorr(self, x: str, y: str, w: Sequence[str]) -> float | None:
        key = (frozenset((x, y)), frozenset(w))
        if key not in self._cache:
            try:
                self._cache[key] = cov_partial_correlation(self.cov, x, y, tuple(w))
            except (InsufficientSampleError, SingularMatrixError):
                self._cache[key] = None
        return self._cache[key]

    def test(self, x: str, y: str, w: Sequence[str]) -> int | None:
        raise NotImplementedError

    def independent(self, x: str, y: str, w: Sequence[str] = ()) -> bool:
        return self.test(x, y, w) == 0

    def markov(self, dag: Dag, alpha: float | None = None) -> bool | None:
        return markov_holds(dag, self.test)


class PopulationDecider(_Decider):
    """Exact answers from a population covariance: independent iff ``|rho| < zero_tol``."""

    def __init__(self, cov: CovMatrix, zero_tol: float = ZERO_TOL):
        super().__init__(cov)
        self.zero_tol = zero_tol

    @classmethod
    def from_sem(cls, sem: LinearSem, zero_tol: float = ZERO_TOL) -> PopulationDecider:
        return cls(implied_covariance(sem), zero_tol)

    def test(self, x, y, w):
        r = self.pcorr(x, y, w)
        if r is None:
            return None
        return 0 if abs(r) < self.zero_tol else 1


class SampleDecider(_Decider):
    """Fisher z tests at level ``alpha`` on a dataset's sample covariance."""

    is_sample = True

    def __init__(self, data: Dataset, alpha: float = 0.05):
        super().__init__(data.cov)
        flat = [v for v, var in zip(data.names, np.diag(data.cov.matrix)) if not var > 0]
        if flat:
            raise SingularMatrixError(f"zero variance in column(s): {', '.join(flat)}")
        self.data = data
        self.alpha = alpha

    def test(self, x, y, w):
        r = self.pcorr(x, y, w)
        if r is None:
            return None
        try:
            return zero_pcorr_test(r, self.data.n, len(w), self.alpha)
        except InsufficientSampleError:
            return None

    def markov(self, dag, alpha=None):
        if alpha is None or alpha == self.alpha:
            return markov_holds(dag, self.test)
        return markov_condition_test(dag, self.data, alpha)


@dataclass
class SearchResult:
    graph: ExtendedPattern
    nonadjacency_confirmed: bool
    diagnostics: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {
            "graph": self.graph.to_json(),
            "nonadjacency_confirmed": self.nonadjacency_confirmed,
            "diagnostics": self.diagnostics,
        }


def _variables(decider: _Decider, vars: Iterable[str] | None) -> list[str]:
    vs = list(decider.variables if vars is None else vars)
    if len(vs) > MAX_VARS:
        raise ValueError(f"at most {MAX_VARS} variables supported, got {len(vs)}")
    return vs


def _adjacencies(decider: _Decider, vs: list[str], diag: dict) -> tuple[list, list]:
    kept, removed = [], []
    sepsets = diag.setdefault("sepsets", {})
    for x, y in itertools.combinations(vs, 2):
        rest = [v for v in vs if v not in (x, y)]
        for s in subsets(rest):
            if decider.test(x, y, s) == 0:
                removed.append((x, y))
                sepsets[f"{x}|{y}"] = list(s)
                break
        else:
            kept.append((x, y))
    return kept, removed


def _plain_clauses(decider, x, y, z, rest) -> tuple[bool, bool]:
    with_y = [s for s in subsets(rest) if y in s]
    without_y = [s for s in subsets(rest) if y not in s]
    collider = all(decider.test(x, z, s) == 1 for s in with_y)
    noncollider = all(decider.test(x, z, s) == 1 for s in without_y)
    return collider, noncollider


def _margin_clause(decider, x, z, witnesses, others, L) -> bool:
    # some witness set is accepted as zero while every opposite-side set is
    # rejected and separated from the witness by at least L
    if not all(decider.test(x, z, u) == 1 for u in others):
        return False
    for w in witnesses:
        if decider.test(x, z, w) != 0:
            continue
        r_w = decider.pcorr(x, z, w)
        if all(margin_test(decider.pcorr(x, z, u), r_w, L) == 0 for u in others):
            return True
    return False


def _decide_triple(decider, vs, triple: Triple, L: float | None) -> TripleMark:
    x, y, z = triple
    rest = [v for v in vs if v not in (x, z)]
    if L is None:
        collider, noncollider = _plain_clauses(decider, x, y, z, rest)
    else:
        with_y = [s for s in subsets(rest) if y in s]
        without_y = [s for s in subsets(rest) if y not in s]
        collider = _margin_clause(decider, x, z, without_y, with_y, L)
        noncollider = _margin_clause(decider, x, z, with_y, without_y, L)
    if collider:
        return TripleMark.COLLIDER
    if noncollider:
        return TripleMark.NONCOLLIDER
    return TripleMark.AMBIGUOUS


def _conservative(decider, vars, L, *, definite: bool, strict: bool) -> tuple[ExtendedPattern, dict]:
    vs = _variables(decider, vars)
    diag: dict = {}
    kept, removed = _adjacencies(decider, vs, diag)
    skel = ExtendedPattern(vs, (), kept)
    marks, pairs, decisions = {}, {}, []
    for t in skel.unshielded_triples():
        mark = _decide_triple(decider, vs, t, L)
        if strict and mark is TripleMark.AMBIGUOUS:
            raise FaithfulnessViolation(f"neither orientation clause holds for <{t[0]},{t[1]},{t[2]}>")
        marks[t] = mark
        decisions.append({"triple": list(t), "mark": mark.value})
        if definite and mark is TripleMark.AMBIGUOUS:
            pairs[skel.pair(t[0], t[2])] = PairMark.DEFINITE
    for p in removed:
        pairs.setdefault(skel.pair(*p), PairMark.APPARENT)
    diag["triples"] = decisions
    ep = ExtendedPattern(vs, (), kept, marks, pairs)
    ep, demoted = orient_colliders(ep, absorb_conflicts=not strict)
    diag["collider_conflicts"] = [list(t) for t in demoted]
    ep = apply_orientation_rules(ep, strict=strict)
    return ep, diag


def sgs(decider: _Decider, vars: Iterable[str] | None = None) -> Pattern:
    """SGS under full faithfulness; raises :class:`FaithfulnessViolation` otherwise."""
    ep, _ = _conservative(decider, vars, None, definite=False, strict=True)
    return ep.to_pattern()


def csgs(decider: _Decider, vars: Iterable[str] | None = None, L: float | None = None,
         return_diagnostics: bool = False):
    """Conservative SGS.

    With ``L=None`` the orientation step uses the plain independence clauses;
    with a margin ``L`` it uses the refined clauses, in which a triple is
    oriented only when the accepted zero and every rejected opposite-side
    partial correlation differ by at least ``L``.
    """
    ep, diag = _conservative(decider, vars, L, definite=False, strict=False)
    return (ep, diag) if return_diagnostics else ep


V5_VARIANTS = ("all", "some", "off")


def vcsgs(decider: _Decider, vars: Iterable[str] | None = None, L: float | None = None,
          v5_variant: str = "all", markov_alpha: float | None = None) -> SearchResult:
    """Very Conservative SGS.

    After the conservative search, every consistent disambiguation of the
    ambiguous triples is extended to a DAG and checked against the local
    Markov condition. ``v5_variant="all"`` confirms the apparent
    nonadjacencies only if every such pattern passes; ``"some"`` (experimental)
    confirms if any passes; ``"off"`` skips the check. ``markov_alpha``
    overrides the level of the Markov tests on sample data.
    """
    if v5_variant not in V5_VARIANTS:
        raise ValueError(f"v5_variant must be one of {V5_VARIANTS}")
    ep, diag = _conservative(decider, vars, L, definite=True, strict=False)
    confirmed = False
    if v5_variant != "off":
        results = []
        for p in enumerate_disambiguations(ep):
            try:
                ok = decider.markov(extend_to_dag(p), markov_alpha)
            except GraphError:
                continue
            results.append({"pattern": p.to_json(), "markov": ok})
        diag["v5"] = results
        passes = [r["markov"] is True for r in results]
        confirmed = bool(passes) and (all(passes) if v5_variant == "all" else any(passes))
        if confirmed:
            pm = {p: PairMark.DEFINITE for p in ep.pair_marks}
            ep = ep.replace(pair_marks=pm)
    diag["v5_variant"] = v5_variant
    return SearchResult(ep, confirmed, diag)


class ErrorKind(str, enum.Enum):
    NONE = "none"
    KIND_I = "I"
    KIND_II = "II"
    KIND_III = "III"


def classify_error(output: ExtendedPattern | Pattern, truth: Dag) -> ErrorKind:
    """First applicable error kind of a search output against the true DAG.

    I: an adjacency absent from the truth. II: a marked noncollider that is a
    collider in the truth. III: an orientation contradicting the truth.
    Missing edges are never errors.
    """
    if set(output.vertices) != set(truth.vertices):
        raise GraphError("output and truth have different vertices")
    if isinstance(output, Pattern):
        output = output.extended()
    if any(not truth.is_adjacent(a, b) for a, b in output.skeleton()):
        return ErrorKind.KIND_I
    if any(truth.is_collider(x, y, z) for x, y, z in output.triples_marked(TripleMark.NONCOLLIDER)):
        return ErrorKind.KIND_II
    if any((b, a) in truth.edges for a, b in output.directed):
        return ErrorKind.KIND_III
    return ErrorKind.NONE
