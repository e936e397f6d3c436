"""Finite levels of the boundary path space and their induced measures.

Level n collects the paths that either have length exactly n or end (at
the source side) in a singular vertex before reaching length n; level 0 is
the whole vertex set.  A trace mu on the vertices induces a measure on
each level by the recursion

    mass_0 = mu
    mass_{n+1}(path)   = mass_n(shift(path))          for length >= 1
    mass_{n+1}(vertex) = mu(vertex) - incoming mass   for singular vertices,

where the correction term subtracts mu(src(e)) over the finite edges into
the vertex.  In a finite graph without bundles singular vertices receive
no edges, so the correction is identically zero; it is implemented in full
generality and asserted to vanish.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping

from .graph import (
    Graph,
    Path,
    classify_vertices,
    enumerate_paths,
    extend_at_source,
    is_range_prefix,
)
from .traces import coerce_weights

_ZERO = Fraction(0)


class BudgetExceededError(RuntimeError):
    """Raised when a level would enumerate more paths than allowed."""

    def __init__(self, level: int, count: int, budget: int) -> None:
        super().__init__(
            f"boundary level {level} holds {count} paths, over the budget of {budget}"
        )
        self.level = level
        self.count = count
        self.budget = budget


@dataclass(frozen=True)
class BoundaryLevel:
    """One finite level: its paths in canonical order, optionally measured."""

    n: int
    paths: tuple[Path, ...]
    measure: Mapping[Path, Fraction] | None = None

    def mass(self, path: Path) -> Fraction:
        assert self.measure is not None
        return self.measure[path]


def boundary_level(g: Graph, n: int, budget: int | None = None) -> BoundaryLevel:
    """Enumerate level n: short paths with singular source, then length n.

    Order is by length, then lexicographically by edge-id word (input edge
    order), matching enumerate_paths.
    """
    if g.infinite_bundles:
        raise ValueError("boundary enumeration requires a graph without bundles")
    if n < 0:
        raise ValueError("level must be nonnegative")
    classification = classify_vertices(g)
    singular = set(classification.singular)
    out: list[Path] = []
    layer = [g.vertex_path(v) for v in g.vertices]
    for length in range(n + 1):
        if length == n:
            out.extend(layer)
        else:
            out.extend(p for p in layer if p.src in singular)
        if budget is not None and len(out) > budget:
            raise BudgetExceededError(n, len(out), budget)
        if length < n:
            layer = extend_at_source(g, layer)
    return BoundaryLevel(n, tuple(out))


def _is_member(path: Path, n: int, singular: set[str]) -> bool:
    return len(path) == n or (len(path) < n and path.src in singular)


def truncate(g: Graph, path: Path, n: int) -> Path:
    """The level-n -> level-(n-1) map: drop the last edge of a full-length
    path, fix everything shorter.

    Dropping the only edge of a length-1 path leaves the length-0 path at
    its range vertex.
    """
    if n < 1:
        raise ValueError("truncation needs a level n >= 1")
    singular = set(classify_vertices(g).singular)
    if not _is_member(path, n, singular):
        raise ValueError(f"path {path} does not belong to boundary level {n}")
    if len(path) < n:
        return path
    return Path(path.edges[:-1], path.via[:-1])


def shift(path: Path) -> Path:
    """Backwards shift: delete the first (range-side) edge.

    A length-1 path maps to the length-0 path at its source.
    """
    if len(path) == 0:
        raise ValueError("cannot shift a length-0 path")
    return Path(path.edges[1:], path.via[1:])


def boundary_measure(
    g: Graph,
    mu: Mapping[str, Fraction],
    n: int,
    budget: int | None = None,
) -> list[BoundaryLevel]:
    """Measured levels 0..n induced by the vertex weighting mu.

    The recursion is well defined for any weighting; the identities checked
    by verify_boundary_identities are theorems only when mu is invariant.
    """
    weights = coerce_weights(g, mu)
    classification = classify_vertices(g)
    singular = set(classification.singular)

    levels: list[BoundaryLevel] = []
    level0 = boundary_level(g, 0, budget)
    masses0 = {p: weights[p.src] for p in level0.paths}
    levels.append(BoundaryLevel(0, level0.paths, masses0))

    for m in range(1, n + 1):
        level = boundary_level(g, m, budget)
        prev = levels[-1].measure
        assert prev is not None
        masses: dict[Path, Fraction] = {}
        for p in level.paths:
            if len(p) >= 1:
                masses[p] = prev[shift(p)]
            else:
                correction = sum(
                    (weights[e.src] for e in g.edges_into[p.src]), _ZERO
                )
                # Bundle-free finite graphs have no edges into singular
                # vertices, so the subtracted mass is structurally zero.
                assert correction == 0
                masses[p] = weights[p.src] - correction
        levels.append(BoundaryLevel(m, level.paths, masses))
    return levels


@dataclass(frozen=True)
class CheckResult:
    holds: bool
    witnesses: tuple[str, ...]


@dataclass(frozen=True)
class BoundaryReport:
    """Outcome of the six exact identities, each with failure witnesses."""

    nonnegativity: CheckResult
    unit_mass: CheckResult
    rho_consistency: CheckResult
    range_identity: CheckResult
    cylinder_identity: CheckResult
    shift_identity: CheckResult

    def all_hold(self) -> bool:
        return all(
            check.holds
            for check in (
                self.nonnegativity,
                self.unit_mass,
                self.rho_consistency,
                self.range_identity,
                self.cylinder_identity,
                self.shift_identity,
            )
        )


def verify_boundary_identities(
    g: Graph,
    mu: Mapping[str, Fraction],
    n: int,
    budget: int | None = None,
) -> BoundaryReport:
    """Check the measure identities exactly on levels 0..n.

    (a) every mass is nonnegative; (b) each level has total mass 1;
    (c) truncation pushes level m+1 forward onto level m; (d) summing over
    paths with a given range vertex recovers mu; (e) the mass of the
    cylinder of a path alpha with 1 <= |alpha| <= m is mu(src(alpha));
    (f) k-fold shifts relate level m to level m-k mass-for-mass.
    """
    weights = coerce_weights(g, mu)
    levels = boundary_measure(g, weights, n, budget)

    nonneg: list[str] = []
    unit: list[str] = []
    rho: list[str] = []
    rng_id: list[str] = []
    cyl: list[str] = []
    shf: list[str] = []

    for level in levels:
        assert level.measure is not None
        total = _ZERO
        for p in level.paths:
            mass = level.measure[p]
            total += mass
            if mass < 0:
                nonneg.append(f"level {level.n}: mass({p}) = {mass}")
        if total != 1:
            unit.append(f"level {level.n}: total mass {total}")

    for level, above in zip(levels, levels[1:]):
        assert level.measure is not None and above.measure is not None
        pushed = {p: _ZERO for p in level.paths}
        for p in above.paths:
            pushed[truncate(g, p, above.n)] += above.measure[p]
        for p in level.paths:
            if pushed[p] != level.measure[p]:
                rho.append(
                    f"level {above.n}->{level.n}: image mass {pushed[p]} "
                    f"!= {level.measure[p]} at {p}"
                )

    for level in levels:
        assert level.measure is not None
        by_range = {v: _ZERO for v in g.vertices}
        for p in level.paths:
            by_range[p.rng] += level.measure[p]
        for v in g.vertices:
            if by_range[v] != weights[v]:
                rng_id.append(
                    f"level {level.n}: range mass {by_range[v]} != mu({v}) = "
                    f"{weights[v]} at vertex {v}"
                )

    for level in levels:
        assert level.measure is not None
        for k in range(1, level.n + 1):
            for alpha in enumerate_paths(g, k):
                cylinder = sum(
                    (
                        level.measure[p]
                        for p in level.paths
                        if is_range_prefix(alpha, p) is not None
                    ),
                    _ZERO,
                )
                if cylinder != weights[alpha.src]:
                    cyl.append(
                        f"level {level.n}: cylinder mass {cylinder} != "
                        f"mu({alpha.src}) = {weights[alpha.src]} at {alpha}"
                    )

    for level in levels:
        assert level.measure is not None
        for p in level.paths:
            shifted = p
            for k in range(1, len(p) + 1):
                shifted = shift(shifted)
                lower = levels[level.n - k].measure
                assert lower is not None
                if level.measure[p] != lower[shifted]:
                    shf.append(
                        f"level {level.n}: mass({p}) = {level.measure[p]} != "
                        f"mass(shift^{k}) = {lower[shifted]}"
                    )

    def result(witnesses: list[str]) -> CheckResult:
        return CheckResult(not witnesses, tuple(witnesses))

    return BoundaryReport(
        result(nonneg), result(unit), result(rho), result(rng_id),
        result(cyl), result(shf),
    )

