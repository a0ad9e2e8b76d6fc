"""Edge Estimation: structural coefficients where the search output identifies them."""
from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass, field
from typing import Mapping

from .citest import Dataset, TestConfig
from .graph import Edge, ExtendedPattern, GraphError, TripleMark
from .search import SampleDecider, SearchResult, _Decider, vcsgs
from .sem import CovMatrix, LinearSem, SingularMatrixError, regression_coefficients


class Kind(str, enum.Enum):
    VALUE = "value"
    ZERO = "zero"
    UNKNOWN = "unknown"


@dataclass(frozen=True)
class Estimate:
    kind: Kind
    value: float | None = None
    provenance: str = ""

    def to_json_value(self):
        return self.value if self.kind is Kind.VALUE else self.kind.value


@dataclass
class EdgeEstimates:
    """One estimate per ordered vertex pair ``(from, to)``."""

    vertices: tuple[str, ...]
    pairs: Mapping[Edge, Estimate]
    search: SearchResult | None = None
    diagnostics: dict = field(default_factory=dict)

    def __getitem__(self, key: Edge) -> Estimate:
        return self.pairs[key]

    def unknown_rate(self) -> float:
        if not self.pairs:
            return 0.0
        return sum(e.kind is Kind.UNKNOWN for e in self.pairs.values()) / len(self.pairs)

    def values(self) -> dict[Edge, float]:
        return {k: e.value for k, e in self.pairs.items() if e.kind is Kind.VALUE}

    def to_json(self) -> dict:
        return {
            "pairs": [
                {"from": a, "to": b, "estimate": e.to_json_value(), "provenance": e.provenance}
                for (a, b), e in self.pairs.items()
            ]
        }


def _all_unknown(vertices, provenance: str) -> dict[Edge, Estimate]:
    return {
        (a, b): Estimate(Kind.UNKNOWN, provenance=provenance)
        for a, b in itertools.permutations(vertices, 2)
    }


def _fully_oriented(ep: ExtendedPattern, z: str) -> bool:
    ambiguous_edges = set()
    for x, y, w in ep.triples_marked(TripleMark.AMBIGUOUS):
        ambiguous_edges |= {ep.pair(x, y), ep.pair(y, w)}
    for v in ep.adjacent(z):
        p = ep.pair(v, z)
        if p in ep.undirected or p in ambiguous_edges:
            return False
    return True


def estimates_from_search(result: SearchResult, cov: CovMatrix) -> EdgeEstimates:
    """Turn a confirmed (or unconfirmed) search result into per-pair estimates."""
    ep = result.graph
    vs = ep.vertices
    diag: dict = {}
    if not result.nonadjacency_confirmed:
        return EdgeEstimates(vs, _all_unknown(vs, "unconfirmed"), result, diag)
    pairs: dict[Edge, Estimate] = {}
    for a, b in ep.nonadjacent_pairs():
        pairs[(a, b)] = pairs[(b, a)] = Estimate(Kind.ZERO, 0.0, "nonadjacent")
    for z in vs:
        pa = ep.parents(z)
        if not pa or not _fully_oriented(ep, z):
            continue
        try:
            betas = regression_coefficients(cov, z, pa)
        except SingularMatrixError as exc:
            diag.setdefault("singular", []).append({"vertex": z, "message": str(exc)})
            continue
        for y, beta in zip(pa, betas):
            pairs[(y, z)] = Estimate(Kind.VALUE, float(beta), "regression")
            # the orientation itself claims there is no z -> y edge
            pairs[(z, y)] = Estimate(Kind.ZERO, 0.0, "orientation")
    for a, b in itertools.permutations(vs, 2):
        pairs.setdefault((a, b), Estimate(Kind.UNKNOWN, provenance="unresolved"))
    order = {(a, b): i for i, (a, b) in enumerate(itertools.permutations(vs, 2))}
    return EdgeEstimates(vs, dict(sorted(pairs.items(), key=lambda kv: order[kv[0]])), result, diag)


def edge_estimation(data: Dataset, config: TestConfig = TestConfig(), v5_variant: str = "all") -> EdgeEstimates:
    """Conservative search, Markov check of every disambiguation, then regression.

    Coefficients are estimated only for edges into vertices whose every
    incident edge is oriented, and only when the apparent nonadjacencies
    have been confirmed; otherwise every pair is reported as unknown.
    """
    return estimate_with(SampleDecider(data, config.alpha), config.L, v5_variant)


def estimate_with(decider: _Decider, L: float | None, v5_variant: str = "all") -> EdgeEstimates:
    result = vcsgs(decider, L=L, v5_variant=v5_variant)
    return estimates_from_search(result, decider.cov)


def structural_distance(est: EdgeEstimates, truth: LinearSem) -> float:
    """Largest ``|estimate - true coefficient|`` over ordered pairs; unknowns count 0."""
    if set(est.vertices) != set(truth.vertices):
        raise GraphError("estimates and model have different vertices")
    worst = 0.0
    for (a, b), e in est.pairs.items():
        if e.kind is Kind.UNKNOWN:
            continue
        worst = max(worst, abs((e.value or 0.0) - truth.coef(a, b)))
    return worst
