"""DAGs, patterns and extended patterns.

Vertices are strings. The order in which they are given at construction
fixes a canonical index, and every set-valued output is reported in that
order so results are deterministic.

Unordered pairs are stored as ``(a, b)`` with ``index(a) < index(b)`` and
triples as ``(x, y, z)`` with ``y`` the middle vertex and
``index(x) < index(z)``, so ``<X,Y,Z>`` and ``<Z,Y,X>`` share one key.
"""
from __future__ import annotations

import enum
import itertools
from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Mapping

Edge = tuple[str, str]
Triple = tuple[str, str, str]


class GraphError(ValueError):
    """Malformed graph input (unknown vertex, cycle, overlapping edges)."""


class OrientationConflict(GraphError):
    """The orientation rules ran into contradictory requirements."""


class NoExtensionError(GraphError):
    """A pattern admits no consistent DAG extension."""


class TripleMark(str, enum.Enum):
    COLLIDER = "collider"
    NONCOLLIDER = "noncollider"
    AMBIGUOUS = "ambiguous"


class PairMark(str, enum.Enum):
    APPARENT = "apparently_nonadjacent"
    DEFINITE = "definitely_nonadjacent"


class _Vertices:
    """Shared vertex bookkeeping for every graph type."""

    vertices: tuple[str, ...]

    def _init_index(self) -> None:
        if len(set(self.vertices)) != len(self.vertices):
            raise GraphError("duplicate vertex identifiers")
        object.__setattr__(self, "_index", {v: i for i, v in enumerate(self.vertices)})

    def index(self, v: str) -> int:
        try:
            return self._index[v]
        except KeyError:
            raise GraphError(f"unknown vertex {v!r}") from None

    def check(self, *vs: str) -> None:
        for v in vs:
            self.index(v)

    def pair(self, a: str, b: str) -> Edge:
        return (a, b) if self.index(a) < self.index(b) else (b, a)

    def triple(self, x: str, y: str, z: str) -> Triple:
        if len({x, y, z}) != 3:
            raise GraphError(f"triple needs three distinct vertices, got {(x, y, z)}")
        return (x, y, z) if self.index(x) < self.index(z) else (z, y, x)

    def sort(self, vs: Iterable[str]) -> list[str]:
        return sorted(vs, key=self.index)


def _freeze_edges(g: _Vertices, edges: Iterable[Edge]) -> frozenset[Edge]:
    out = set()
    for a, b in edges:
        g.check(a, b)
        if a == b:
            raise GraphError(f"self-loop on {a!r}")
        out.add((a, b))
    return frozenset(out)


@dataclass(frozen=True)
class Dag(_Vertices):
    vertices: tuple[str, ...]
    edges: frozenset[Edge]
    _parents: dict = field(init=False, repr=False, compare=False)
    _children: dict = field(init=False, repr=False, compare=False)

    def __init__(self, vertices: Iterable[str], edges: Iterable[Edge] = ()):
        object.__setattr__(self, "vertices", tuple(vertices))
        self._init_index()
        object.__setattr__(self, "edges", _freeze_edges(self, edges))
        parents = {v: set() for v in self.vertices}
        children = {v: set() for v in self.vertices}
        for a, b in self.edges:
            if (b, a) in self.edges:
                raise GraphError(f"two edges between {a!r} and {b!r}")
            parents[b].add(a)
            children[a].add(b)
        object.__setattr__(self, "_parents", {v: frozenset(s) for v, s in parents.items()})
        object.__setattr__(self, "_children", {v: frozenset(s) for v, s in children.items()})
        self.topological_order()  # raises on cycles

    def __hash__(self) -> int:
        return hash((self.vertices, self.edges))

    def parents(self, v: str) -> frozenset[str]:
        self.check(v)
        return self._parents[v]

    def children(self, v: str) -> frozenset[str]:
        self.check(v)
        return self._children[v]

    def adjacent(self, v: str) -> frozenset[str]:
        return self.parents(v) | self.children(v)

    def is_adjacent(self, a: str, b: str) -> bool:
        return (a, b) in self.edges or (b, a) in self.edges

    def topological_order(self) -> list[str]:
        indeg = {v: len(self._parents[v]) for v in self.vertices}
        ready = [v for v in self.vertices if indeg[v] == 0]
        order = []
        while ready:
            v = ready.pop(0)
            order.append(v)
            for c in self.sort(self._children[v]):
                indeg[c] -= 1
                if indeg[c] == 0:
                    ready.append(c)
        if len(order) != len(self.vertices):
            raise GraphError("graph contains a directed cycle")
        return order

    def ancestors(self, seed: Iterable[str]) -> frozenset[str]:
        """Proper and improper ancestors of every vertex in ``seed``."""
        return ancestral_closure(self, seed)

    def descendants(self, v: str) -> frozenset[str]:
        """Descendants of ``v``, including ``v`` itself."""
        self.check(v)
        seen = {v}
        stack = [v]
        while stack:
            for c in self._children[stack.pop()]:
                if c not in seen:
                    seen.add(c)
                    stack.append(c)
        return frozenset(seen)

    def skeleton(self) -> frozenset[Edge]:
        return frozenset(self.pair(a, b) for a, b in self.edges)

    def unshielded_triples(self) -> list[Triple]:
        return _unshielded_triples(self, self.is_adjacent)

    def unshielded_colliders(self) -> frozenset[Triple]:
        return frozenset(
            t for t in self.unshielded_triples()
            if (t[0], t[1]) in self.edges and (t[2], t[1]) in self.edges
        )

    def triangles(self) -> list[tuple[str, str, str]]:
        """Vertex triples that are pairwise adjacent, in canonical order."""
        return [
            t for t in itertools.combinations(self.vertices, 3)
            if self.is_adjacent(t[0], t[1]) and self.is_adjacent(t[1], t[2])
            and self.is_adjacent(t[0], t[2])
        ]

    def is_collider(self, x: str, y: str, z: str) -> bool:
        return (x, y) in self.edges and (z, y) in self.edges

    def to_json(self) -> dict:
        return {
            "vertices": list(self.vertices),
            "directed": [list(e) for e in sorted(self.edges, key=self._edge_key)],
            "undirected": [],
        }

    def _edge_key(self, e: Edge) -> tuple[int, int]:
        return (self.index(e[0]), self.index(e[1]))


def _unshielded_triples(g: _Vertices, adjacent) -> list[Triple]:
    out = []
    for y in g.vertices:
        nbrs = [v for v in g.vertices if v != y and adjacent(v, y)]
        for x, z in itertools.combinations(nbrs, 2):
            if not adjacent(x, z):
                out.append(g.triple(x, y, z))
    return sorted(out, key=lambda t: (g.index(t[1]), g.index(t[0]), g.index(t[2])))


@dataclass(frozen=True)
class ExtendedPattern(_Vertices):
    """Mixed graph with triple marks and nonadjacency marks.

    ``triple_marks`` holds a mark for unshielded triples only; ``pair_marks``
    holds one mark per nonadjacent pair. A plain pattern is the special case
    with no ambiguous marks.
    """

    vertices: tuple[str, ...]
    directed: frozenset[Edge]
    undirected: frozenset[Edge]
    triple_marks: Mapping[Triple, TripleMark]
    pair_marks: Mapping[Edge, PairMark]

    def __init__(
        self,
        vertices: Iterable[str],
        directed: Iterable[Edge] = (),
        undirected: Iterable[Edge] = (),
        triple_marks: Mapping[Triple, TripleMark] | None = None,
        pair_marks: Mapping[Edge, PairMark] | None = None,
    ):
        object.__setattr__(self, "vertices", tuple(vertices))
        self._init_index()
        d = _freeze_edges(self, directed)
        u = frozenset(self.pair(a, b) for a, b in _freeze_edges(self, undirected))
        for a, b in d:
            if (b, a) in d:
                raise GraphError(f"directed 2-cycle between {a!r} and {b!r}")
            if self.pair(a, b) in u:
                raise GraphError(f"edge {a!r}-{b!r} both directed and undirected")
        object.__setattr__(self, "directed", d)
        object.__setattr__(self, "undirected", u)
        tm = {}
        for (x, y, z), m in (triple_marks or {}).items():
            key = self.triple(x, y, z)
            if not (self.is_adjacent(x, y) and self.is_adjacent(y, z)) or self.is_adjacent(x, z):
                raise GraphError(f"marked triple {key} is not unshielded")
            tm[key] = TripleMark(m)
        pm = {}
        for (a, b), m in (pair_marks or {}).items():
            if self.is_adjacent(a, b):
                raise GraphError(f"pair mark on adjacent pair {(a, b)}")
            pm[self.pair(a, b)] = PairMark(m)
        object.__setattr__(self, "triple_marks", tm)
        object.__setattr__(self, "pair_marks", pm)

    @classmethod
    def from_graph(
        cls,
        vertices: Iterable[str],
        directed: Iterable[Edge] = (),
        undirected: Iterable[Edge] = (),
        ambiguous: Iterable[Triple] = (),
        pair_mark: PairMark = PairMark.APPARENT,
    ) -> ExtendedPattern:
        """Build with the implicit marking convention.

        Unshielded triples with both edges into the middle are colliders,
        those listed in ``ambiguous`` are ambiguous, and the rest are
        noncolliders. Every nonadjacent pair gets ``pair_mark``.
        """
        bare = cls(vertices, directed, undirected)
        amb = {bare.triple(*t) for t in ambiguous}
        marks = {}
        for t in bare.unshielded_triples():
            if t in amb:
                marks[t] = TripleMark.AMBIGUOUS
            elif (t[0], t[1]) in bare.directed and (t[2], t[1]) in bare.directed:
                marks[t] = TripleMark.COLLIDER
            else:
                marks[t] = TripleMark.NONCOLLIDER
        if amb - set(marks):
            raise GraphError(f"ambiguous triples not unshielded: {sorted(amb - set(marks))}")
        pairs = {p: pair_mark for p in bare.nonadjacent_pairs()}
        return cls(bare.vertices, bare.directed, bare.undirected, marks, pairs)

    def is_adjacent(self, a: str, b: str) -> bool:
        return (a, b) in self.directed or (b, a) in self.directed or self.pair(a, b) in self.undirected

    def adjacent(self, v: str) -> list[str]:
        return [u for u in self.vertices if u != v and self.is_adjacent(u, v)]

    def parents(self, v: str) -> list[str]:
        return [u for u in self.vertices if (u, v) in self.directed]

    def nonadjacent_pairs(self) -> list[Edge]:
        return [(a, b) for a, b in itertools.combinations(self.vertices, 2) if not self.is_adjacent(a, b)]

    def unshielded_triples(self) -> list[Triple]:
        return _unshielded_triples(self, self.is_adjacent)

    def skeleton(self) -> frozenset[Edge]:
        return frozenset(self.pair(a, b) for a, b in self.directed) | self.undirected

    def triples_marked(self, mark: TripleMark) -> list[Triple]:
        return [t for t, m in self.triple_marks.items() if m is mark]

    def to_pattern(self) -> Pattern:
        return Pattern(self.vertices, self.directed, self.undirected)

    def replace(self, **changes) -> ExtendedPattern:
        kw = dict(
            vertices=self.vertices, directed=self.directed, undirected=self.undirected,
            triple_marks=self.triple_marks, pair_marks=self.pair_marks,
        )
        kw.update(changes)
        return ExtendedPattern(**kw)

    def __eq__(self, other) -> bool:
        if not isinstance(other, ExtendedPattern):
            return NotImplemented
        return (
            self.vertices == other.vertices and self.directed == other.directed
            and self.undirected == other.undirected
            and dict(self.triple_marks) == dict(other.triple_marks)
            and dict(self.pair_marks) == dict(other.pair_marks)
        )

    __hash__ = None

    def to_json(self) -> dict:
        idx = self.index
        return {
            "vertices": list(self.vertices),
            "directed": [list(e) for e in sorted(self.directed, key=lambda e: (idx(e[0]), idx(e[1])))],
            "undirected": [list(e) for e in sorted(self.undirected, key=lambda e: (idx(e[0]), idx(e[1])))],
            "triple_marks": [
                {"triple": list(t), "mark": m.value}
                for t, m in sorted(self.triple_marks.items(), key=lambda kv: tuple(map(idx, kv[0])))
            ],
            "pair_marks": [
                {"pair": list(p), "mark": m.value}
                for p, m in sorted(self.pair_marks.items(), key=lambda kv: tuple(map(idx, kv[0])))
            ],
        }

    @classmethod
    def from_json(cls, obj: Mapping) -> ExtendedPattern:
        return cls(
            obj["vertices"],
            [tuple(e) for e in obj.get("directed", [])],
            [tuple(e) for e in obj.get("undirected", [])],
            {tuple(r["triple"]): TripleMark(r["mark"]) for r in obj.get("triple_marks", [])},
            {tuple(r["pair"]): PairMark(r["mark"]) for r in obj.get("pair_marks", [])},
        )

    def to_dot(self, name: str = "G") -> str:
        lines = [f"digraph {name} {{"]
        lines += [f'  "{v}";' for v in self.vertices]
        for a, b in sorted(self.directed, key=lambda e: (self.index(e[0]), self.index(e[1]))):
            lines.append(f'  "{a}" -> "{b}";')
        for a, b in sorted(self.undirected, key=lambda e: (self.index(e[0]), self.index(e[1]))):
            lines.append(f'  "{a}" -> "{b}" [dir=none];')
        for t in sorted(self.triples_marked(TripleMark.AMBIGUOUS), key=lambda t: tuple(map(self.index, t))):
            lines.append(f"  // ambiguous <{t[0]},{t[1]},{t[2]}>")
        for p, m in self.pair_marks.items():
            if m is PairMark.DEFINITE:
                lines.append(f"  // definitely nonadjacent {p[0]} {p[1]}")
        lines.append("}")
        return "\n".join(lines) + "\n"


@dataclass(frozen=True)
class Pattern(_Vertices):
    vertices: tuple[str, ...]
    directed: frozenset[Edge]
    undirected: frozenset[Edge]

    def __init__(self, vertices: Iterable[str], directed: Iterable[Edge] = (), undirected: Iterable[Edge] = ()):
        ep = ExtendedPattern(vertices, directed, undirected)
        object.__setattr__(self, "vertices", ep.vertices)
        object.__setattr__(self, "_index", ep._index)
        object.__setattr__(self, "directed", ep.directed)
        object.__setattr__(self, "undirected", ep.undirected)

    def __hash__(self) -> int:
        return hash((self.vertices, self.directed, self.undirected))

    def is_adjacent(self, a: str, b: str) -> bool:
        return (a, b) in self.directed or (b, a) in self.directed or self.pair(a, b) in self.undirected

    def skeleton(self) -> frozenset[Edge]:
        return frozenset(self.pair(a, b) for a, b in self.directed) | self.undirected

    def unshielded_colliders(self) -> frozenset[Triple]:
        return frozenset(
            t for t in _unshielded_triples(self, self.is_adjacent)
            if (t[0], t[1]) in self.directed and (t[2], t[1]) in self.directed
        )

    def extended(self) -> ExtendedPattern:
        """The same graph with every unshielded triple explicitly marked."""
        return ExtendedPattern.from_graph(self.vertices, self.directed, self.undirected)

    def to_json(self) -> dict:
        d = self.extended().to_json()
        d["triple_marks"], d["pair_marks"] = [], []
        return d


# --------------------------------------------------------------------------
# d-separation and ancestral sets


def ancestral_closure(dag: Dag, seed: Iterable[str]) -> frozenset[str]:
    seen = set()
    stack = list(seed)
    dag.check(*stack)
    while stack:
        v = stack.pop()
        if v not in seen:
            seen.add(v)
            stack.extend(dag._parents[v])
    return frozenset(seen)


def is_d_separated(dag: Dag, x: str, y: str, z: Iterable[str] = ()) -> bool:
    """Whether ``x`` and ``y`` are d-separated given ``z`` in ``dag``.

    Uses the moralised ancestral graph: restrict to the ancestors of
    ``{x, y} | z``, marry co-parents, drop direction, delete ``z`` and test
    whether ``x`` can still reach ``y``.
    """
    z = frozenset(z)
    dag.check(x, y, *z)
    if x == y:
        raise GraphError("x and y must differ")
    if x in z or y in z:
        raise GraphError("conditioning set must exclude x and y")
    keep = ancestral_closure(dag, {x, y} | z)
    nbrs = {v: set() for v in keep}
    for v in keep:
        ps = dag._parents[v]
        for p in ps:
            nbrs[v].add(p)
            nbrs[p].add(v)
        for p, q in itertools.combinations(ps, 2):
            nbrs[p].add(q)
            nbrs[q].add(p)
    seen = {x}
    queue = deque([x])
    while queue:
        v = queue.popleft()
        for u in nbrs[v]:
            if u == y:
                return False
            if u not in seen and u not in z:
                seen.add(u)
                queue.append(u)
    return True


def markov_equivalent(g1: Dag, g2: Dag) -> bool:
    if set(g1.vertices) != set(g2.vertices):
        raise GraphError("DAGs are over different vertex sets")
    s1 = {frozenset(e) for e in g1.edges}
    s2 = {frozenset(e) for e in g2.edges}
    if s1 != s2:
        return False
    c1 = {(frozenset((x, z)), y) for x, y, z in g1.unshielded_colliders()}
    c2 = {(frozenset((x, z)), y) for x, y, z in g2.unshielded_colliders()}
    return c1 == c2


# --------------------------------------------------------------------------
# orientation


class _Mixed:
    """Mutable working copy of a partially directed graph."""

    def __init__(self, g: _Vertices, directed, undirected):
        self.g = g
        self.dir = set(directed)
        self.und = set(undirected)

    def adj(self, a: str, b: str) -> bool:
        return (a, b) in self.dir or (b, a) in self.dir or self.g.pair(a, b) in self.und

    def is_und(self, a: str, b: str) -> bool:
        return self.g.pair(a, b) in self.und

    def orient(self, a: str, b: str) -> None:
        self.und.discard(self.g.pair(a, b))
        self.dir.add((a, b))


def _orient_colliders(m: _Mixed, colliders: Iterable[Triple]) -> None:
    for x, y, z in colliders:
        for a in (x, z):
            if (y, a) in m.dir:
                raise OrientationConflict(f"collider <{x},{y},{z}> conflicts with {y}->{a}")
            if m.is_und(a, y):
                m.orient(a, y)


def _close(m: _Mixed, marks: Mapping[Triple, TripleMark], strict: bool) -> None:
    g = m.g
    noncolliders = [t for t, mk in marks.items() if mk is TripleMark.NONCOLLIDER]
    vs = g.vertices
    changed = True
    while changed:
        changed = False
        # (i) X->Y--Z with <X,Y,Z> a noncollider: Y->Z
        for x, y, z in noncolliders:
            for a, c in ((x, z), (z, x)):
                if (a, y) in m.dir and m.is_und(y, c):
                    m.orient(y, c)
                    changed = True
        # (ii) X->Y->Z and X--Z: X->Z
        for a, c in sorted(m.und, key=lambda e: (g.index(e[0]), g.index(e[1]))):
            for s, t in ((a, c), (c, a)):
                if any((s, b) in m.dir and (b, t) in m.dir for b in vs):
                    m.orient(s, t)
                    changed = True
                    break
        # (iii) X->Y<-Z, <X,W,Z> a noncollider, W--Y: W->Y
        for x, w, z in noncolliders:
            for y in vs:
                if y in (x, w, z):
                    continue
                if (x, y) in m.dir and (z, y) in m.dir and m.is_und(w, y):
                    m.orient(w, y)
                    changed = True
    if strict:
        for x, y, z in noncolliders:
            if (x, y) in m.dir and (z, y) in m.dir:
                raise OrientationConflict(f"noncollider <{x},{y},{z}> has both edges into {y}")


def apply_orientation_rules(ep: ExtendedPattern, strict: bool = True) -> ExtendedPattern:
    """Run the three orientation rules to a fixed point.

    Only undirected edges are ever oriented. With ``strict`` a marked
    noncollider whose edges both end up pointing into its middle raises
    :class:`OrientationConflict`; otherwise it is left as is.
    """
    m = _Mixed(ep, ep.directed, ep.undirected)
    _close(m, ep.triple_marks, strict)
    return ep.replace(directed=m.dir, undirected=m.und)


def orient_colliders(ep: ExtendedPattern, absorb_conflicts: bool = False) -> tuple[ExtendedPattern, list[Triple]]:
    """Point both edges of every collider-marked triple into its middle.

    Two colliders asking for opposite directions on one edge raise
    :class:`OrientationConflict`, unless ``absorb_conflicts`` is set, in
    which case every collider touching a contested edge is re-marked
    ambiguous and left unoriented. Returns the graph and the demoted triples.
    """
    colliders = [t for t, m in ep.triple_marks.items() if m is TripleMark.COLLIDER]
    want: dict[Edge, set[Edge]] = {}
    for x, y, z in colliders:
        for a in (x, z):
            want.setdefault(ep.pair(a, y), set()).add((a, y))
    contested = {p for p, dirs in want.items() if len(dirs) > 1}
    contested |= {ep.pair(a, b) for p, dirs in want.items() for a, b in dirs if (b, a) in ep.directed}
    if contested and not absorb_conflicts:
        raise OrientationConflict(f"colliders disagree on edges {sorted(contested)}")
    demoted = [t for t in colliders if ep.pair(t[0], t[1]) in contested or ep.pair(t[2], t[1]) in contested]
    marks = dict(ep.triple_marks)
    marks.update({t: TripleMark.AMBIGUOUS for t in demoted})
    m = _Mixed(ep, ep.directed, ep.undirected)
    _orient_colliders(m, [t for t in colliders if t not in demoted])
    return ep.replace(directed=m.dir, undirected=m.und, triple_marks=marks), demoted


def _dor_tarsi(g: _Vertices, directed, undirected) -> Dag | None:
    m = _Mixed(g, directed, undirected)
    remaining = list(g.vertices)
    out = set(m.dir)
    while remaining:
        for x in remaining:
            if any((x, b) in m.dir for b in remaining):
                continue
            nbrs = [v for v in remaining if v != x and m.adj(v, x)]
            und = [v for v in nbrs if m.is_und(v, x)]
            if all(m.adj(v, u) for v in und for u in nbrs if u != v):
                for v in und:
                    out.add((v, x))
                remaining.remove(x)
                break
        else:
            return None
    try:
        return Dag(g.vertices, out)
    except GraphError:
        return None


def extend_to_dag(p: Pattern | ExtendedPattern) -> Dag:
    """A DAG with ``p``'s skeleton and directed edges and no new unshielded colliders."""
    dag = _dor_tarsi(p, p.directed, p.undirected)
    colliders = {
        t for t in _unshielded_triples(p, p.is_adjacent)
        if (t[0], t[1]) in p.directed and (t[2], t[1]) in p.directed
    }
    if dag is None or set(dag.unshielded_colliders()) != colliders:
        raise NoExtensionError("pattern has no consistent DAG extension")
    return dag


def pattern_of(dag: Dag) -> Pattern:
    colliders = dag.unshielded_colliders()
    marks = {
        t: (TripleMark.COLLIDER if t in colliders else TripleMark.NONCOLLIDER)
        for t in dag.unshielded_triples()
    }
    m = _Mixed(dag, (), dag.skeleton())
    _orient_colliders(m, colliders)
    _close(m, marks, strict=True)
    return Pattern(dag.vertices, m.dir, m.und)


def enumerate_disambiguations(ep: ExtendedPattern) -> list[Pattern]:
    """Every pattern obtainable by resolving each ambiguous triple.

    An assignment of collider/noncollider to the ambiguous triples is kept
    only if orienting and closing under the rules succeeds and the result
    extends to a DAG whose unshielded colliders are exactly the triples
    now marked as colliders.
    """
    amb = sorted(ep.triples_marked(TripleMark.AMBIGUOUS), key=lambda t: tuple(map(ep.index, t)))
    out: list[Pattern] = []
    seen = set()
    for choice in itertools.product((TripleMark.COLLIDER, TripleMark.NONCOLLIDER), repeat=len(amb)):
        marks = dict(ep.triple_marks)
        marks.update(zip(amb, choice))
        p = _resolve(ep, marks)
        if p is not None and p not in seen:
            seen.add(p)
            out.append(p)
    return out


def _resolve(ep: ExtendedPattern, marks: Mapping[Triple, TripleMark]) -> Pattern | None:
    colliders = [t for t, mk in marks.items() if mk is TripleMark.COLLIDER]
    m = _Mixed(ep, ep.directed, ep.undirected)
    try:
        _orient_colliders(m, colliders)
        _close(m, marks, strict=True)
    except OrientationConflict:
        return None
    dag = _dor_tarsi(ep, m.dir, m.und)
    if dag is None or set(dag.unshielded_colliders()) != set(colliders):
        return None
    return pattern_of(dag)


# --------------------------------------------------------------------------
# enumeration helpers


def iter_dags(vertices: Iterable[str]) -> Iterator[Dag]:
    """All DAGs on ``vertices`` (543 on four vertices)."""
    vs = tuple(vertices)
    pairs = list(itertools.combinations(vs, 2))
    for choice in itertools.product((0, 1, 2), repeat=len(pairs)):
        edges = [(a, b) if c == 1 else (b, a) for (a, b), c in zip(pairs, choice) if c]
        try:
            yield Dag(vs, edges)
        except GraphError:
            continue


def subsets(items: Iterable[str]) -> Iterator[tuple[str, ...]]:
    """All subsets, smallest first, each in the given order."""
    items = tuple(items)
    for r in range(len(items) + 1):
        yield from itertools.combinations(items, r)
