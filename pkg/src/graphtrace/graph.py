"""Finite directed graph model, path combinatorics, and cycle certificates.

Direction convention
--------------------
An edge ``e`` points from its source ``src(e)`` to its range ``rng(e)``;
the edge stands for a partial isometry from the projection at the source
into the projection at the range.  A path
``a_1 ... a_n`` requires ``src(a_i) == rng(a_{i+1})``: paths grow at the
*source* end, and reading the edges right-to-left gives an ordinary walk
along src -> rng arrows.  This is the opposite of the convention used in
much of the Cuntz-Krieger literature; every consumer of this package
should double-check which way their edges point.

A vertex is *regular* when it receives at least one edge, all finitely
many (no infinite bundle); otherwise it is *singular*.  Infinite bundles
(countably many parallel edges sharing one src/rng pair) are first-class
data but most path operations reject graphs containing them.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Mapping


class GraphValidationError(ValueError):
    """Raised when a graph document violates the schema or its invariants."""


@dataclass(frozen=True)
class Edge:
    id: str
    src: str
    rng: str


@dataclass(frozen=True)
class Bundle:
    """Countably infinitely many parallel edges from src to rng."""

    src: str
    rng: str


@dataclass(frozen=True)
class Path:
    """A finite path: a vertex (length 0) or a composable edge-id word.

    ``via`` lists the n+1 visited vertices range-side first:
    ``via[0] == rng(path)``, ``via[-1] == src(path)``, and ``via[i]`` is the
    source of edge ``edges[i]`` (equivalently the range of ``edges[i+1]``).
    """

    edges: tuple[str, ...]
    via: tuple[str, ...]

    def __post_init__(self) -> None:
        if len(self.via) != len(self.edges) + 1:
            raise ValueError("path vertex itinerary does not match edge count")

    def __len__(self) -> int:
        return len(self.edges)

    @property
    def rng(self) -> str:
        return self.via[0]

    @property
    def src(self) -> str:
        return self.via[-1]

    def __str__(self) -> str:
        if not self.edges:
            return f"({self.via[0]})"
        return ".".join(self.edges)


class Graph:
    """Immutable finite graph with optional infinite parallel-edge bundles.

    Vertex and edge order is the input order and is the canonical order
    everywhere downstream (matrix rows/columns, enumeration output).
    """

    def __init__(
        self,
        vertices: Iterable[str],
        edges: Iterable[Edge] = (),
        infinite_bundles: Iterable[Bundle] = (),
    ) -> None:
        self.vertices: tuple[str, ...] = tuple(vertices)
        self.edges: tuple[Edge, ...] = tuple(edges)
        self.infinite_bundles: tuple[Bundle, ...] = tuple(infinite_bundles)
        self._validate()

    def _validate(self) -> None:
        seen: set[str] = set()
        for v in self.vertices:
            if not v:
                raise GraphValidationError("empty vertex identifier")
            if v in seen:
                raise GraphValidationError(f"duplicate identifier {v!r}")
            seen.add(v)
        eids: set[str] = set()
        for e in self.edges:
            if not e.id:
                raise GraphValidationError("empty edge identifier")
            if e.id in eids:
                raise GraphValidationError(f"duplicate identifier {e.id!r}")
            eids.add(e.id)
            for endpoint in (e.src, e.rng):
                if endpoint not in seen:
                    raise GraphValidationError(
                        f"dangling endpoint {endpoint!r} in edge {e.id!r}"
                    )
        pairs: set[tuple[str, str]] = set()
        for b in self.infinite_bundles:
            for endpoint in (b.src, b.rng):
                if endpoint not in seen:
                    raise GraphValidationError(
                        f"dangling endpoint {endpoint!r} in infinite bundle"
                    )
            if (b.src, b.rng) in pairs:
                raise GraphValidationError(
                    f"duplicate infinite bundle {b.src!r} -> {b.rng!r}"
                )
            pairs.add((b.src, b.rng))

    @cached_property
    def vertex_index(self) -> dict[str, int]:
        return {v: i for i, v in enumerate(self.vertices)}

    @cached_property
    def edge_by_id(self) -> dict[str, Edge]:
        return {e.id: e for e in self.edges}

    @cached_property
    def edge_index(self) -> dict[str, int]:
        return {e.id: i for i, e in enumerate(self.edges)}

    @cached_property
    def edges_into(self) -> dict[str, tuple[Edge, ...]]:
        by_rng: dict[str, list[Edge]] = {v: [] for v in self.vertices}
        for e in self.edges:
            by_rng[e.rng].append(e)
        return {v: tuple(es) for v, es in by_rng.items()}

    @cached_property
    def edges_out_of(self) -> dict[str, tuple[Edge, ...]]:
        by_src: dict[str, list[Edge]] = {v: [] for v in self.vertices}
        for e in self.edges:
            by_src[e.src].append(e)
        return {v: tuple(es) for v, es in by_src.items()}

    @cached_property
    def bundles_into(self) -> dict[str, tuple[Bundle, ...]]:
        by_rng: dict[str, list[Bundle]] = {v: [] for v in self.vertices}
        for b in self.infinite_bundles:
            by_rng[b.rng].append(b)
        return {v: tuple(bs) for v, bs in by_rng.items()}

    def vertex_path(self, v: str) -> Path:
        if v not in self.vertex_index:
            raise GraphValidationError(f"unknown vertex {v!r}")
        return Path((), (v,))

    def path(self, edge_ids: Iterable[str]) -> Path:
        """Build a path from an edge-id word, checking composability."""
        ids = tuple(edge_ids)
        if not ids:
            raise ValueError("length-0 paths need a base vertex; use vertex_path")
        via: list[str] = []
        for i, eid in enumerate(ids):
            e = self.edge_by_id.get(eid)
            if e is None:
                raise GraphValidationError(f"unknown edge {eid!r}")
            if i == 0:
                via.append(e.rng)
            elif via[-1] != e.rng:
                raise ValueError(
                    f"edges {ids[i - 1]!r} and {eid!r} do not compose: "
                    f"src({ids[i - 1]!r}) = {via[-1]!r} but rng({eid!r}) = {e.rng!r}"
                )
            via.append(e.src)
        return Path(ids, tuple(via))

    def __repr__(self) -> str:
        return (
            f"Graph({len(self.vertices)} vertices, {len(self.edges)} edges, "
            f"{len(self.infinite_bundles)} bundles)"
        )


@dataclass(frozen=True)
class VertexClassification:
    """Partition of the vertex set into regular and singular vertices."""

    regular: tuple[str, ...]
    singular: tuple[str, ...]

    def is_regular(self, v: str) -> bool:
        return v in self._regular_set

    @cached_property
    def _regular_set(self) -> frozenset[str]:
        return frozenset(self.regular)


def parse_graph(document: object) -> Graph:
    """Validate a graph document (parsed JSON) and build a Graph.

    Schema: {"vertices": [id...], "edges": [{"id","src","rng"}...],
    "infinite_bundles": [{"src","rng"}...]?}.  Input order is preserved.
    """
    if not isinstance(document, Mapping):
        raise GraphValidationError("malformed document: expected a JSON object")
    allowed = {"vertices", "edges", "infinite_bundles"}
    unknown = set(document) - allowed
    if unknown:
        raise GraphValidationError(
            f"malformed document: unknown key {sorted(unknown)[0]!r}"
        )
    for key in ("vertices", "edges"):
        if key not in document:
            raise GraphValidationError(f"malformed document: missing key {key!r}")

    vertices = document["vertices"]
    if not isinstance(vertices, list) or not all(isinstance(v, str) for v in vertices):
        raise GraphValidationError("malformed document: vertices must be strings")

    edges: list[Edge] = []
    for rec in _require_list(document["edges"], "edges"):
        edges.append(
            Edge(
                id=_require_str(rec, "id", "edge"),
                src=_require_str(rec, "src", "edge"),
                rng=_require_str(rec, "rng", "edge"),
            )
        )
        extra = set(rec) - {"id", "src", "rng"}
        if extra:
            raise GraphValidationError(
                f"malformed document: unknown edge key {sorted(extra)[0]!r}"
            )

    bundles: list[Bundle] = []
    for rec in _require_list(document.get("infinite_bundles", []), "infinite_bundles"):
        bundles.append(
            Bundle(
                src=_require_str(rec, "src", "infinite bundle"),
                rng=_require_str(rec, "rng", "infinite bundle"),
            )
        )
        extra = set(rec) - {"src", "rng"}
        if extra:
            raise GraphValidationError(
                f"malformed document: unknown bundle key {sorted(extra)[0]!r}"
            )

    return Graph(vertices, edges, bundles)


def _require_list(value: object, what: str) -> list:
    if not isinstance(value, list):
        raise GraphValidationError(f"malformed document: {what} must be a list")
    return value


def _require_str(rec: object, key: str, what: str) -> str:
    if not isinstance(rec, Mapping) or key not in rec:
        raise GraphValidationError(f"malformed document: {what} missing {key!r}")
    value = rec[key]
    if not isinstance(value, str):
        raise GraphValidationError(f"malformed document: {what} {key!r} must be a string")
    return value


def load_graph(path: str) -> Graph:
    import json

    with open(path, encoding="utf-8") as fh:
        try:
            document = json.load(fh)
        except json.JSONDecodeError as exc:
            raise GraphValidationError(f"malformed document: {exc}") from exc
    return parse_graph(document)


def classify_vertices(g: Graph) -> VertexClassification:
    """Regular = receives at least one edge and no infinite bundle."""
    regular = []
    singular = []
    for v in g.vertices:
        if g.edges_into[v] and not g.bundles_into[v]:
            regular.append(v)
        else:
            singular.append(v)
    return VertexClassification(tuple(regular), tuple(singular))


def enumerate_paths(g: Graph, k: int) -> list[Path]:
    """All length-k paths in lexicographic order of edge-id words.

    The alphabet order is the input edge order.  k = 0 yields the vertices
    as length-0 paths.  Graphs with infinite bundles are not enumerable.
    """
    if g.infinite_bundles:
        raise ValueError("not enumerable: graph has infinite bundles")
    if k < 0:
        raise ValueError("path length must be nonnegative")
    paths = [g.vertex_path(v) for v in g.vertices]
    for _ in range(k):
        paths = extend_at_source(g, paths)
    return paths


def extend_at_source(g: Graph, paths: list[Path]) -> list[Path]:
    """All one-edge source-end extensions, in lexicographic edge-id order."""
    eidx = g.edge_index
    extended = [
        Path(p.edges + (e.id,), p.via + (e.src,))
        for p in paths
        for e in g.edges_into[p.src]
    ]
    extended.sort(key=lambda p: tuple(eidx[e] for e in p.edges))
    return extended


def concat(prefix: Path, suffix: Path) -> Path:
    """Concatenate two paths; requires src(prefix) == rng(suffix).

    Length-0 paths act as identities on either side.
    """
    if prefix.src != suffix.rng:
        raise ValueError(
            f"cannot concatenate: src(prefix) = {prefix.src!r} "
            f"!= rng(suffix) = {suffix.rng!r}"
        )
    return Path(prefix.edges + suffix.edges, prefix.via + suffix.via[1:])


def is_range_prefix(prefix: Path, path: Path) -> Path | None:
    """If ``path`` starts (range side) with ``prefix``, return the remainder.

    A length-0 prefix at v matches any path with range v (remainder = path);
    equal paths leave a length-0 remainder at the common source.
    """
    k = len(prefix)
    if k > len(path):
        return None
    if k == 0:
        return path if prefix.src == path.rng else None
    if path.edges[:k] != prefix.edges:
        return None
    return Path(path.edges[k:], path.via[k:])


def _scc_partition(g: Graph, include_bundles: bool) -> list[set[str]]:
    """Strongly connected components of the src -> rng digraph (Kosaraju)."""
    succ: dict[str, list[str]] = {v: [] for v in g.vertices}
    pred: dict[str, list[str]] = {v: [] for v in g.vertices}
    arcs = [(e.src, e.rng) for e in g.edges]
    if include_bundles:
        arcs += [(b.src, b.rng) for b in g.infinite_bundles]
    for src, rng in arcs:
        succ[src].append(rng)
        pred[rng].append(src)

    order: list[str] = []
    seen: set[str] = set()
    for start in g.vertices:
        if start in seen:
            continue
        stack: list[tuple[str, int]] = [(start, 0)]
        seen.add(start)
        while stack:
            node, i = stack[-1]
            if i < len(succ[node]):
                stack[-1] = (node, i + 1)
                nxt = succ[node][i]
                if nxt not in seen:
                    seen.add(nxt)
                    stack.append((nxt, 0))
            else:
                order.append(node)
                stack.pop()

    assigned: set[str] = set()
    components: list[set[str]] = []
    for start in reversed(order):
        if start in assigned:
            continue
        component = {start}
        assigned.add(start)
        frontier = [start]
        while frontier:
            node = frontier.pop()
            for prv in pred[node]:
                if prv not in assigned:
                    assigned.add(prv)
                    component.add(prv)
                    frontier.append(prv)
        components.append(component)
    return components


def cycle_sources(g: Graph) -> tuple[str, ...]:
    """Vertices that are the source (= range) of some cycle, in input order.

    A vertex lies on a cycle iff its strongly connected component contains
    an edge; infinite bundles count as (at least) one edge here.
    """
    on_cycle: set[str] = set()
    arcs = [(e.src, e.rng) for e in g.edges] + [
        (b.src, b.rng) for b in g.infinite_bundles
    ]
    for component in _scc_partition(g, include_bundles=True):
        if any(src in component and rng in component for src, rng in arcs):
            on_cycle |= component
    return tuple(v for v in g.vertices if v in on_cycle)


AT_LEAST_TWO = 2


@dataclass(frozen=True)
class SimpleCycleCount:
    """Classification of the simple cycles based at one vertex.

    ``count`` is 0, 1, or 2, where 2 means "at least two".  ``witnesses``
    holds the unique simple cycle (count 1) or two distinct simple cycles
    (count 2), each of length at most 2 * #vertices + 1.
    """

    vertex: str
    count: int
    witnesses: tuple[Path, ...]


def simple_cycles_at(g: Graph, v: str, cap: int | None = None) -> SimpleCycleCount:
    """Classify how many simple cycles are based at v: 0, 1, or >= 2.

    A cycle is simple when its last edge does not occur earlier in it.  The
    classification goes through first-return cycles (cycles never passing
    through v in between): every first-return cycle is simple, and when only
    one first-return cycle exists every cycle at v is one of its powers,
    none of which is simple.  Whether v has 0, 1, or >= 2 first-return
    cycles is read off the strongly connected component of v: no internal
    edge -> 0; every component vertex has exactly one internal out-edge
    (the component is a lone cycle) -> 1; any internal branching -> >= 2.

    ``cap`` bounds the witness length; the construction guarantees
    witnesses of length <= 2 * #vertices + 1, so any cap at least that
    large (the default) always succeeds.
    """
    if g.infinite_bundles:
        raise ValueError("simple-cycle analysis requires a graph without bundles")
    if v not in g.vertex_index:
        raise GraphValidationError(f"unknown vertex {v!r}")
    if cap is None:
        cap = 2 * len(g.vertices) + 1
    if cap <= 0:
        raise ValueError("cap must be positive")

    component = next(c for c in _scc_partition(g, False) if v in c)
    internal = [e for e in g.edges if e.src in component and e.rng in component]
    if not internal:
        return SimpleCycleCount(v, 0, ())

    out_count = {u: 0 for u in component}
    for e in internal:
        out_count[e.src] += 1

    if all(n == 1 for n in out_count.values()):
        # Lone cycle: follow the unique internal out-edge until v returns.
        internal_out = {e.src: e for e in internal}
        walk = [internal_out[v]]
        while walk[-1].rng != v:
            walk.append(internal_out[walk[-1].rng])
        witness = _walk_to_path(g, walk)
        if len(witness) > cap:
            raise ValueError(f"witness length {len(witness)} exceeds cap {cap}")
        return SimpleCycleCount(v, 1, (witness,))

    # Branching component: two first-return cycles via shortest connections.
    branch = next(u for u in g.vertices if u in component and out_count[u] >= 2)
    e1, e2 = [e for e in internal if e.src == branch][:2]
    approach = _shortest_walk(g, v, branch, component)
    witnesses = []
    for e in (e1, e2):
        closing = _shortest_walk(g, e.rng, v, component)
        walk = approach + [e] + closing
        witness = _walk_to_path(g, walk)
        if len(witness) > cap:
            raise ValueError(f"witness length {len(witness)} exceeds cap {cap}")
        witnesses.append(witness)
    return SimpleCycleCount(v, AT_LEAST_TWO, tuple(witnesses))


def _shortest_walk(g: Graph, start: str, goal: str, component: set[str]) -> list[Edge]:
    """BFS along src -> rng arrows; deterministic via input edge order."""
    if start == goal:
        return []
    parent: dict[str, tuple[str, Edge]] = {}
    frontier = [start]
    seen = {start}
    while frontier:
        nxt: list[str] = []
        for node in frontier:
            for e in g.edges_out_of[node]:
                if e.rng in component and e.rng not in seen:
                    seen.add(e.rng)
                    parent[e.rng] = (node, e)
                    if e.rng == goal:
                        walk: list[Edge] = []
                        cur = goal
                        while cur != start:
                            prv, edge = parent[cur]
                            walk.append(edge)
                            cur = prv
                        walk.reverse()
                        return walk
                    nxt.append(e.rng)
        frontier = nxt
    raise AssertionError("no walk inside a strongly connected component")


def _walk_to_path(g: Graph, walk: list[Edge]) -> Path:
    """Convert a src -> rng walk into a path (edges in reverse walk order)."""
    ids = tuple(e.id for e in reversed(walk))
    return g.path(ids)


@dataclass(frozen=True)
class ConditionKVerdict:
    """Outcome of the condition (K) decision.

    Satisfied means no vertex is the source of exactly one simple cycle.
    On failure, ``vertex`` is the first offending vertex in input order and
    ``witness`` its unique simple cycle.
    """

    satisfied: bool
    vertex: str | None = None
    witness: Path | None = None


def condition_k(g: Graph) -> ConditionKVerdict:
    """Decide condition (K) per strongly connected component.

    A component whose vertices each have exactly one internal out-edge is a
    lone cycle and all its vertices carry a unique simple cycle; any
    internal branching gives every component vertex at least two.
    """
    if g.infinite_bundles:
        raise ValueError("condition (K) analysis requires a graph without bundles")
    failing: set[str] = set()
    for component in _scc_partition(g, False):
        internal = [e for e in g.edges if e.src in component and e.rng in component]
        if not internal:
            continue
        out_count = {u: 0 for u in component}
        for e in internal:
            out_count[e.src] += 1
        if all(n == 1 for n in out_count.values()):
            failing |= component
    if not failing:
        return ConditionKVerdict(True)
    vertex = next(v for v in g.vertices if v in failing)
    witness = simple_cycles_at(g, vertex).witnesses[0]
    return ConditionKVerdict(False, vertex, witness)
