"""Invariant measures on a finite graph: the trace polytope and certificates.

An invariant measure (graph trace) is a probability vector mu on the
vertices with

    mu(v) == sum of mu(src(e)) over edges e into v      (v regular)
    mu(v) >= sum of mu(src(e)) over finite edges into v (v singular)
    mu(src) == 0 for every infinite bundle,

the last constraint because an infinite bundle into v would otherwise push
infinite mass below mu(v).  These measures parametrize the gauge-invariant
tracial states on the graph C*-algebra, so the extreme points computed
here are exactly the extreme gauge-invariant traces.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Mapping

from .exactlp import reduce_to_echelon, simplex_minimize, solve_exact
from .graph import Graph, classify_vertices, condition_k, cycle_sources

_ZERO = Fraction(0)
_ONE = Fraction(1)


@dataclass(frozen=True)
class GraphTrace:
    """An exact invariant probability vector on the vertices."""

    values: Mapping[str, Fraction]

    def __getitem__(self, vertex: str) -> Fraction:
        return self.values[vertex]

    def support(self) -> tuple[str, ...]:
        return tuple(v for v, m in self.values.items() if m > 0)

    def as_tuple(self, g: Graph) -> tuple[Fraction, ...]:
        return tuple(self.values[v] for v in g.vertices)


@dataclass(frozen=True)
class Row:
    """One linear condition sum(coeffs . mu) (op) rhs over the vertex order."""

    coeffs: tuple[Fraction, ...]
    rhs: Fraction
    label: str


@dataclass(frozen=True)
class ConstraintSystem:
    """Equality/inequality description of the trace polytope.

    Nonnegativity of every variable is implicit throughout; inequalities
    are of the form coeffs . mu >= rhs.
    """

    variables: tuple[str, ...]
    equalities: tuple[Row, ...]
    inequalities: tuple[Row, ...]
    normalization: Row


def constraint_system(g: Graph) -> ConstraintSystem:
    """Instantiate the invariance conditions at vertex indicator functions.

    One equality row per regular vertex, one >=-row per singular vertex
    that receives a finite edge, one pin-to-zero equality per infinite
    bundle, plus the normalization row.
    """
    classification = classify_vertices(g)
    n = len(g.vertices)
    index = g.vertex_index
    equalities: list[Row] = []
    inequalities: list[Row] = []
    for v in g.vertices:
        coeffs = [_ZERO] * n
        coeffs[index[v]] += _ONE
        for e in g.edges_into[v]:
            coeffs[index[e.src]] -= _ONE
        if classification.is_regular(v):
            equalities.append(Row(tuple(coeffs), _ZERO, f"regular vertex {v}"))
        elif g.edges_into[v]:
            inequalities.append(Row(tuple(coeffs), _ZERO, f"singular vertex {v}"))
    for b in g.infinite_bundles:
        coeffs = [_ZERO] * n
        coeffs[index[b.src]] = _ONE
        equalities.append(
            Row(tuple(coeffs), _ZERO, f"infinite bundle {b.src}->{b.rng}")
        )
    normalization = Row(tuple([_ONE] * n), _ONE, "normalization")
    return ConstraintSystem(g.vertices, tuple(equalities), tuple(inequalities), normalization)


@dataclass(frozen=True)
class Violation:
    constraint: str
    vertex: str | None
    lhs: Fraction
    rhs: Fraction


@dataclass(frozen=True)
class InvarianceReport:
    """Exact verdict on a candidate vertex weighting.

    ``pushforward_mass`` is the total mass pushed onto the edge space,
    sum of mu(v) * outdeg(v); None means infinite (some bundle source
    carries positive mass).  For a genuine trace it never exceeds 1.
    """

    is_trace: bool
    violations: tuple[Violation, ...]
    pushforward_mass: Fraction | None


def coerce_weights(g: Graph, candidate: Mapping[str, Fraction] | GraphTrace) -> dict[str, Fraction]:
    values = candidate.values if isinstance(candidate, GraphTrace) else candidate
    missing = [v for v in g.vertices if v not in values]
    if missing:
        raise ValueError(f"candidate missing vertex {missing[0]!r}")
    unknown = [v for v in values if v not in g.vertex_index]
    if unknown:
        raise ValueError(f"candidate names unknown vertex {unknown[0]!r}")
    for v in g.vertices:
        if isinstance(values[v], float):
            raise ValueError(f"floats are not exact; got {values[v]!r} at {v!r}")
    return {v: Fraction(values[v]) for v in g.vertices}


def check_invariant(
    g: Graph, candidate: Mapping[str, Fraction] | GraphTrace
) -> InvarianceReport:
    """Verify every trace constraint exactly, reporting all violations."""
    mu = coerce_weights(g, candidate)
    violations: list[Violation] = []
    classification = classify_vertices(g)

    for v in g.vertices:
        if mu[v] < 0:
            violations.append(Violation("nonnegativity", v, mu[v], _ZERO))
    total = sum(mu.values(), _ZERO)
    if total != 1:
        violations.append(Violation("normalization", None, total, _ONE))
    for v in g.vertices:
        incoming = sum((mu[e.src] for e in g.edges_into[v]), _ZERO)
        if classification.is_regular(v):
            if mu[v] != incoming:
                violations.append(Violation("regular-equality", v, mu[v], incoming))
        elif mu[v] < incoming:
            violations.append(Violation("singular-inequality", v, mu[v], incoming))
    for b in g.infinite_bundles:
        if mu[b.src] != 0:
            violations.append(Violation("bundle-zero", b.src, mu[b.src], _ZERO))

    mass: Fraction | None = _ZERO
    for v in g.vertices:
        mass = mass + mu[v] * len(g.edges_out_of[v])
    for b in g.infinite_bundles:
        if mu[b.src] != 0:  # 0 * infinity = 0 for mass-zero bundle sources
            mass = None
            break

    is_trace = not violations
    if is_trace:
        assert mass is not None and mass <= 1
    return InvarianceReport(is_trace, tuple(violations), mass)


def extreme_traces(g: Graph) -> list[GraphTrace]:
    """All extreme points of the trace polytope, exactly.

    Enumerates the basic solutions: every choice of active inequalities
    that completes the always-active equalities to full rank pins down one
    candidate, which is kept when it satisfies the whole system.  The
    result is duplicate-free and sorted by the value tuple in vertex
    order; the empty list means there are no invariant measures at all.
    """
    system = constraint_system(g)
    n = len(system.variables)
    if n == 0:
        return []

    eq_rows = [row.coeffs for row in system.equalities]
    eq_rows.append(system.normalization.coeffs)
    eq_rhs = [row.rhs for row in system.equalities]
    eq_rhs.append(system.normalization.rhs)
    reduced = reduce_to_echelon(eq_rows, eq_rhs)
    if reduced is None:
        return []  # the equalities alone are contradictory
    base_rows = [row for row, _ in reduced]
    base_rhs = [b for _, b in reduced]
    need = n - len(reduced)

    pool: list[tuple[Fraction, ...]] = [row.coeffs for row in system.inequalities]
    for i in range(n):  # nonnegativity bounds mu(v) >= 0
        bound = [_ZERO] * n
        bound[i] = _ONE
        pool.append(tuple(bound))

    found: set[tuple[Fraction, ...]] = set()
    for chosen in combinations(range(len(pool)), need):
        rows = base_rows + [pool[i] for i in chosen]
        rhs = base_rhs + [_ZERO] * need
        x = solve_exact(rows, rhs)
        if x is None or x in found:
            continue
        if _feasible(system, x):
            found.add(x)
    ordered = sorted(found)
    return [
        GraphTrace(dict(zip(system.variables, x, strict=True))) for x in ordered
    ]


def _feasible(system: ConstraintSystem, x: tuple[Fraction, ...]) -> bool:
    if any(xi < 0 for xi in x):
        return False
    for row in system.equalities:
        if _dot(row.coeffs, x) != row.rhs:
            return False
    if _dot(system.normalization.coeffs, x) != system.normalization.rhs:
        return False
    for row in system.inequalities:
        if _dot(row.coeffs, x) < row.rhs:
            return False
    return True


def _dot(a, b) -> Fraction:
    return sum((ai * bi for ai, bi in zip(a, b) if ai != 0), _ZERO)


@dataclass(frozen=True)
class TraceMinimum:
    value: Fraction
    argmin: GraphTrace


def minimize_over_traces(
    g: Graph, objective: Mapping[str, Fraction]
) -> TraceMinimum | None:
    """Exact minimum of the objective over the trace polytope.

    Runs a rational two-phase simplex, so the answer and the optimal basic
    point are exact; None means the trace polytope is empty.  The argmin is
    always an extreme point of the polytope.
    """
    obj = coerce_weights(g, objective)
    system = constraint_system(g)
    eq_rows = [row.coeffs for row in system.equalities]
    eq_rows.append(system.normalization.coeffs)
    eq_rhs = [row.rhs for row in system.equalities]
    eq_rhs.append(system.normalization.rhs)
    ge_rows = [row.coeffs for row in system.inequalities]
    ge_rhs = [row.rhs for row in system.inequalities]

    outcome = simplex_minimize(
        [obj[v] for v in system.variables], eq_rows, eq_rhs, ge_rows, ge_rhs
    )
    if outcome is None:
        return None
    value, x = outcome
    trace = GraphTrace(dict(zip(system.variables, x, strict=True)))
    report = check_invariant(g, trace)
    assert report.is_trace, "simplex produced an infeasible point"
    return TraceMinimum(value, trace)


@dataclass(frozen=True)
class GaugeCertificate:
    """Evidence that every tracial state attached to mu is gauge invariant.

    kind "NoCycleInSupport": no cycle is based inside the support of mu
    (for the all-traces question this degenerates to "the graph has no
    cycles").  kind "ConditionK": no vertex carries a unique simple cycle.
    kind "Unknown" is advisory only -- it carries the obstructions and does
    not assert that a non-gauge-invariant trace exists.
    """

    kind: str
    cycle_sources: tuple[str, ...] = ()
    support: tuple[str, ...] | None = None
    failing_vertex: str | None = None


def certify_gauge_invariance(
    g: Graph, mu: GraphTrace | Mapping[str, Fraction] | str
) -> list[GaugeCertificate]:
    """All gauge-invariance certificates that apply to mu (or to "all").

    With a concrete measure, the cycle-support test asks whether any cycle
    is based in supp(mu); with "all" it asks for no cycles at all.  The
    condition (K) certificate is measure-independent and is attempted
    whenever the graph has no bundles.  If nothing applies the single
    Unknown certificate carries the obstructing data.
    """
    sources = cycle_sources(g)
    if isinstance(mu, str):
        if mu != "all":
            raise ValueError(f"expected a measure or \"all\", got {mu!r}")
        support: tuple[str, ...] | None = None
        clear = not sources
    else:
        report = check_invariant(g, mu)
        if not report.is_trace:
            first = report.violations[0]
            raise ValueError(
                f"measure fails invariance: {first.constraint} at {first.vertex}"
            )
        values = mu.values if isinstance(mu, GraphTrace) else mu
        support = tuple(v for v in g.vertices if values[v] > 0)
        clear = not (set(sources) & set(support))

    certificates: list[GaugeCertificate] = []
    if clear:
        certificates.append(
            GaugeCertificate("NoCycleInSupport", sources, support)
        )
    k_verdict = None
    if not g.infinite_bundles:
        k_verdict = condition_k(g)
        if k_verdict.satisfied:
            certificates.append(GaugeCertificate("ConditionK"))
    if not certificates:
        certificates.append(
            GaugeCertificate(
                "Unknown",
                sources,
                support,
                k_verdict.vertex if k_verdict is not None else None,
            )
        )
    return certificates
