"""Shared fixtures and independent oracles for the test suite.

The oracles here deliberately avoid the package's own algorithms: the
extreme-point oracle enumerates square subsystems with integer Cramer
solves, the cycle oracle walks the graph directly, and determinants come
from a fraction-free elimination written only for the tests.
"""

from __future__ import annotations

import itertools
import random
from collections import defaultdict
from fractions import Fraction

import pytest

from graphtrace import Graph, Path, enumerate_paths
from graphtrace.fixtures import NAMES, fixture_graph
from graphtrace.graph import Edge
from graphtrace.star import FormalElement, GaussianRational


@pytest.fixture(scope="session")
def graphs() -> dict[str, Graph]:
    return {name: fixture_graph(name) for name in NAMES}


EXPECTED_EXTREME = {
    "loop": [{"v": Fraction(1)}],
    "o2": [],
    "m2": [{"u": Fraction(1, 2), "v": Fraction(1, 2)}],
    "y": [
        {"a": Fraction(1, 2), "b": Fraction(0), "c": Fraction(1, 2)},
        {"a": Fraction(1, 2), "b": Fraction(1, 2), "c": Fraction(0)},
    ],
    "fork": [{"u": Fraction(1, 3), "v1": Fraction(1, 3), "v2": Fraction(1, 3)}],
    "fib": [],
    "c3": [{"x": Fraction(1, 3), "y": Fraction(1, 3), "z": Fraction(1, 3)}],
    "inf": [{"v": Fraction(1), "w": Fraction(0)}],
}


def sweep_graphs(max_vertices: int = 4, max_edges: int = 5) -> list[Graph]:
    """Every multigraph with <= max_vertices vertices and <= max_edges edges."""
    out: list[Graph] = []
    for n in range(1, max_vertices + 1):
        vertices = [f"v{i}" for i in range(n)]
        pairs = [(a, b) for a in vertices for b in vertices]
        for k in range(max_edges + 1):
            for combo in itertools.combinations_with_replacement(pairs, k):
                edges = [
                    Edge(f"e{i}", src, rng) for i, (src, rng) in enumerate(combo)
                ]
                out.append(Graph(vertices, edges))
    return out


@pytest.fixture(scope="session")
def small_graph_sweep() -> list[Graph]:
    return sweep_graphs()


def random_graph(rng: random.Random, max_vertices: int, max_edges: int) -> Graph:
    n = rng.randint(1, max_vertices)
    vertices = [f"v{i}" for i in range(n)]
    k = rng.randint(0, max_edges)
    edges = [
        Edge(f"e{i}", rng.choice(vertices), rng.choice(vertices)) for i in range(k)
    ]
    return Graph(vertices, edges)


# --- cycle oracle ---------------------------------------------------------


def brute_force_first_returns(
    g: Graph, v: str, max_len: int, stop_at: int = 2
) -> list[tuple[str, ...]]:
    """Cycles at v that avoid v strictly in between, found by direct walks.

    Walks run along src -> rng arrows and are reversed into path order on
    the way out.  Stops as soon as ``stop_at`` cycles are found.
    """
    found: list[tuple[str, ...]] = []
    stack: list[tuple[str, tuple[str, ...]]] = [(v, ())]
    while stack:
        node, walk = stack.pop()
        for e in g.edges_out_of[node]:
            extended = walk + (e.id,)
            if e.rng == v:
                found.append(tuple(reversed(extended)))
                if len(found) >= stop_at:
                    return found
            elif len(extended) < max_len:
                stack.append((e.rng, extended))
    return found


def is_simple_cycle_at(g: Graph, path: Path, v: str) -> bool:
    """Directly check the defining conditions of a simple cycle based at v."""
    if len(path) < 1 or path.rng != v or path.src != v:
        return False
    last = path.edges[-1]
    return all(e != last for e in path.edges[:-1])


# --- exact integer linear algebra for the oracles -------------------------


def det_int(matrix: list[list[int]]) -> int:
    """Fraction-free (Bareiss) determinant of a square integer matrix."""
    a = [row[:] for row in matrix]
    n = len(a)
    if n == 0:
        return 1
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if a[i][k] != 0), None)
            if swap is None:
                return 0
            a[k], a[swap] = a[swap], a[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
            a[i][k] = 0
        prev = a[k][k]
    return sign * a[-1][-1]


def oracle_trace_constraints(
    g: Graph,
) -> list[tuple[tuple[int, ...], int, bool]]:
    """Rows (coeffs, rhs, is_equality) of the trace system, built from
    scratch: in-edges counted directly, no package helpers."""
    n = len(g.vertices)
    index = {v: i for i, v in enumerate(g.vertices)}
    rows: list[tuple[tuple[int, ...], int, bool]] = []
    for v in g.vertices:
        ins = [e for e in g.edges if e.rng == v]
        has_bundle = any(b.rng == v for b in g.infinite_bundles)
        coeffs = [0] * n
        coeffs[index[v]] += 1
        for e in ins:
            coeffs[index[e.src]] -= 1
        if ins and not has_bundle:
            rows.append((tuple(coeffs), 0, True))
        elif ins:
            rows.append((tuple(coeffs), 0, False))
    for b in g.infinite_bundles:
        coeffs = [0] * n
        coeffs[index[b.src]] = 1
        rows.append((tuple(coeffs), 0, True))
    rows.append((tuple([1] * n), 1, True))
    return rows


def _det_small(rows: list[tuple[int, ...]]) -> int:
    n = len(rows)
    if n == 1:
        return rows[0][0]
    if n == 2:
        (a, b), (c, d) = rows
        return a * d - b * c
    if n == 3:
        (a, b, c), (d, e, f), (g_, h, i) = rows
        return a * (e * i - f * h) - b * (d * i - f * g_) + c * (d * h - e * g_)
    if n == 4:
        # Laplace along the first two rows via 2x2 complements.
        r0, r1, r2, r3 = rows
        total = 0
        sign_of = {(0, 1): 1, (0, 2): -1, (0, 3): 1, (1, 2): 1, (1, 3): -1, (2, 3): 1}
        for (i, j), sign in sign_of.items():
            top = r0[i] * r1[j] - r0[j] * r1[i]
            k, l = [c for c in range(4) if c not in (i, j)]
            bottom = r2[k] * r3[l] - r2[l] * r3[k]
            total += sign * top * bottom
        return total
    return det_int([list(r) for r in rows])


def oracle_extreme_points(g: Graph) -> list[tuple[Fraction, ...]]:
    """Basic-feasible-solution enumeration: solve square subsystems of the
    constraint rows (bounds included) by Cramer's rule, keep the feasible
    solutions, deduplicate, sort.

    Every row except normalization is homogeneous, so a nonsingular
    subsystem avoiding the normalization row can only produce x = 0, which
    normalization rejects; those subsystems are skipped outright.
    """
    n = len(g.vertices)
    rows = oracle_trace_constraints(g)
    norm = len(rows) - 1
    pool = rows[:]
    for i in range(n):
        coeffs = [0] * n
        coeffs[i] = 1
        pool.append((tuple(coeffs), 0, False))

    points: set[tuple[Fraction, ...]] = set()
    candidates = [i for i in range(len(pool)) if i != norm]
    for combo in itertools.combinations(candidates, n - 1):
        mat = [pool[norm][0]] + [pool[i][0] for i in combo]
        rhs = [1] + [0] * (n - 1)
        d = _det_small(mat)
        if d == 0:
            continue
        numerators = []
        for j in range(n):
            replaced = [
                row[:j] + (b,) + row[j + 1 :] for row, b in zip(mat, rhs)
            ]
            numerator = _det_small(replaced)
            if numerator * d < 0:  # x_j < 0: infeasible, stop solving
                break
            numerators.append(numerator)
        if len(numerators) < n:
            continue
        if d < 0:
            d = -d
            numerators = [-x for x in numerators]
        ok = True
        for coeffs, b, is_eq in rows:
            lhs = sum(c * x for c, x in zip(coeffs, numerators) if c)
            target = b * d
            if (is_eq and lhs != target) or (not is_eq and lhs < target):
                ok = False
                break
        if ok:
            points.add(tuple(Fraction(x, d) for x in numerators))
    return sorted(points)


# --- random star-algebra elements -----------------------------------------


def path_pool(g: Graph, max_len: int = 4) -> tuple[list[Path], dict[str, list[Path]]]:
    paths: list[Path] = []
    for k in range(max_len + 1):
        paths.extend(enumerate_paths(g, k))
    by_src: dict[str, list[Path]] = defaultdict(list)
    for p in paths:
        by_src[p.src].append(p)
    return paths, by_src


def random_element(
    g: Graph,
    rng: random.Random,
    pool: tuple[list[Path], dict[str, list[Path]]],
    max_terms: int = 5,
) -> FormalElement:
    paths, by_src = pool
    terms: dict = {}
    for _ in range(rng.randint(1, max_terms)):
        alpha = rng.choice(paths)
        beta = rng.choice(by_src[alpha.src])
        coeff = GaussianRational(
            Fraction(rng.randint(-2, 2)), Fraction(rng.randint(-2, 2))
        )
        key = (alpha, beta)
        terms[key] = terms.get(key, GaussianRational()) + coeff
    return FormalElement(g, terms)
