"""Command-line front end emitting deterministic JSON reports.

All numeric output is exact: rationals appear as strings like "2/3", never
as floats.  Exit codes: 0 for a completed computation (including
mathematically empty answers), 1 for input or validation problems, 2 when
a resource budget is exhausted.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from typing import Mapping

from . import boundary as boundary_mod
from . import ktheory as ktheory_mod
from . import star as star_mod
from . import traces as traces_mod
from .graph import Graph, GraphValidationError, Path, classify_vertices, condition_k, cycle_sources, load_graph
from .rationals import format_rational, parse_rational

SCHEMA_VERSION = 1

_CONVENTION = (
    "edge direction: an edge runs src -> rng and denotes a partial isometry "
    "from the projection at its source into the projection at its range; "
    "paths a_1...a_n compose with src(a_i) == rng(a_{i+1})"
)

DEFAULT_PATH_BUDGET = 100_000


class _Parser(argparse.ArgumentParser):
    def error(self, message: str) -> None:  # usage problems are exit code 1
        self.print_usage(sys.stderr)
        raise CliError(message)


class CliError(ValueError):
    pass


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(
        prog="graphtrace",
        description=(
            "Exact computations for finite graph C*-algebras: invariant "
            "measures, boundary path levels, K-theory, and trace evaluation."
        ),
        epilog=f"Convention reminder -- {_CONVENTION}.",
    )
    sub = parser.add_subparsers(dest="subcommand", required=True)

    p = sub.add_parser("info", help="graph summary, classification, cycle data")
    p.add_argument("graph", help="graph JSON file")

    p = sub.add_parser("traces", help="invariant-measure polytope operations")
    p.add_argument("graph")
    p.add_argument("--extreme", action="store_true", help="list all extreme traces (default action)")
    p.add_argument("--check", metavar="MEASURE", help="verify a measure file exactly")
    p.add_argument("--minimize", metavar="VEC", help='minimize "v:1,w:-1" over the polytope')

    p = sub.add_parser("ktheory", help="K-groups, marked classes, induced states")
    p.add_argument("graph")
    p.add_argument("--state", metavar="MEASURE", help="induce a K_0 state from a trace")

    p = sub.add_parser("boundary", help="boundary levels and measure identities")
    p.add_argument("graph")
    p.add_argument("--depth", type=int, required=True)
    p.add_argument("--measure", metavar="MEASURE")
    p.add_argument("--verify", action="store_true", help="check the measure identities")
    p.add_argument("--budget", type=int, default=DEFAULT_PATH_BUDGET,
                   help=f"maximum paths per level (default {DEFAULT_PATH_BUDGET})")

    p = sub.add_parser("star", help="formal *-algebra calculus")
    p.add_argument("graph")
    p.add_argument("--element", metavar="FILE", help="element JSON file")
    p.add_argument("--defect", metavar="VERTEX", help="start from the covariance defect at a regular vertex")
    p.add_argument("--multiply", metavar="FILE", help="right-multiply by another element")
    p.add_argument("--adjoint", action="store_true")
    p.add_argument("--degree", type=int, metavar="N", help="project onto gauge degree N")
    p.add_argument("--trace", metavar="MEASURE", help="evaluate the trace attached to a measure")

    p = sub.add_parser("kpositive", help="eventual positivity of a K_0 class")
    p.add_argument("graph")
    p.add_argument("--vector", required=True, metavar="VEC", help='integer class, e.g. "x:1,y:-1,z:0"')

    p = sub.add_parser("certify", help="gauge-invariance certificates")
    p.add_argument("graph")
    p.add_argument("--measure", metavar="MEASURE", help="certify one trace instead of all")

    return parser


def parse_command(argv: list[str]) -> argparse.Namespace:
    return build_parser().parse_args(argv)


def canonical_json(document: dict) -> str:
    return json.dumps(document, indent=2, sort_keys=True) + "\n"


def _load_measure(path: str) -> dict[str, Fraction]:
    with open(path, encoding="utf-8") as fh:
        doc = json.load(fh)
    if not isinstance(doc, dict):
        raise CliError("measure document must be a JSON object")
    return {v: parse_rational(text) for v, text in doc.items()}


def _parse_vector(text: str) -> dict[str, Fraction]:
    out: dict[str, Fraction] = {}
    for chunk in text.split(","):
        if ":" not in chunk:
            raise CliError(f'bad vector entry {chunk!r}; expected "vertex:value"')
        v, value = chunk.rsplit(":", 1)
        out[v.strip()] = parse_rational(value.strip())
    return out


def _measure_json(values: Mapping[str, Fraction]) -> dict[str, str]:
    return {v: format_rational(x) for v, x in values.items()}


def _path_json(p: Path) -> object:
    return star_mod.path_to_json(p)


def _trace_json(trace: traces_mod.GraphTrace) -> dict[str, str]:
    return _measure_json(trace.values)


def execute(cmd: argparse.Namespace) -> tuple[dict, int]:
    g = load_graph(cmd.graph)
    handler = _HANDLERS[cmd.subcommand]
    document = handler(g, cmd)
    document["schema_version"] = SCHEMA_VERSION
    return document, 0


def _cmd_info(g: Graph, cmd: argparse.Namespace) -> dict:
    classification = classify_vertices(g)
    doc: dict = {
        "vertices": list(g.vertices),
        "edges": [{"id": e.id, "src": e.src, "rng": e.rng} for e in g.edges],
        "infinite_bundles": [
            {"src": b.src, "rng": b.rng} for b in g.infinite_bundles
        ],
        "regular": list(classification.regular),
        "singular": list(classification.singular),
        "cycle_sources": list(cycle_sources(g)),
    }
    if g.infinite_bundles:
        doc["condition_k"] = None
    else:
        verdict = condition_k(g)
        doc["condition_k"] = {"satisfied": verdict.satisfied}
        if not verdict.satisfied:
            doc["condition_k"]["vertex"] = verdict.vertex
            doc["condition_k"]["witness"] = _path_json(verdict.witness)
    return doc


def _cmd_traces(g: Graph, cmd: argparse.Namespace) -> dict:
    doc: dict = {}
    if cmd.check:
        report = traces_mod.check_invariant(g, _load_measure(cmd.check))
        doc["check"] = {
            "is_trace": report.is_trace,
            "violations": [
                {
                    "constraint": v.constraint,
                    "vertex": v.vertex,
                    "lhs": format_rational(v.lhs),
                    "rhs": format_rational(v.rhs),
                }
                for v in report.violations
            ],
            "pushforward_mass": (
                "infinite"
                if report.pushforward_mass is None
                else format_rational(report.pushforward_mass)
            ),
        }
    if cmd.minimize:
        outcome = traces_mod.minimize_over_traces(g, _parse_vector(cmd.minimize))
        if outcome is None:
            doc["minimize"] = {"status": "EmptyTraceSpace"}
        else:
            doc["minimize"] = {
                "status": "Minimum",
                "value": format_rational(outcome.value),
                "argmin": _trace_json(outcome.argmin),
            }
    if cmd.extreme or not doc:
        doc["extreme_traces"] = [
            _trace_json(t) for t in traces_mod.extreme_traces(g)
        ]
    return doc


def _group_element_json(el: ktheory_mod.GroupElement) -> dict:
    return {"torsion": list(el.torsion), "free": list(el.free)}


def _cmd_ktheory(g: Graph, cmd: argparse.Namespace) -> dict:
    matrix = ktheory_mod.pv_matrix(g)
    snf = ktheory_mod.smith_normal_form(matrix)
    k0, k1 = ktheory_mod.k_groups(g)
    doc: dict = {
        "matrix": {
            "rows": list(matrix.row_labels),
            "cols": list(matrix.col_labels),
            "entries": [list(row) for row in matrix.entries],
        },
        "invariant_factors": [d for d in snf.diagonal if d != 0],
        "K0": {"free_rank": k0.free_rank, "torsion": list(k0.torsion)},
        "generator_classes": {
            v: _group_element_json(el) for v, el in k0.generator_classes.items()
        },
        "order_unit_class": _group_element_json(k0.order_unit_class),
        "K1": {
            "free_rank": k1.free_rank,
            "kernel_basis": [list(col) for col in k1.kernel_basis],
        },
    }
    if cmd.state:
        state = ktheory_mod.state_from_trace(g, _load_measure(cmd.state))
        doc["state"] = {
            "values": _measure_json(state.values),
            "order_unit_value": format_rational(state.order_unit_value),
        }
    return doc


def _cmd_boundary(g: Graph, cmd: argparse.Namespace) -> dict:
    if cmd.depth < 0:
        raise CliError("--depth must be nonnegative")
    if cmd.verify and not cmd.measure:
        raise CliError("--verify needs --measure")
    doc: dict = {"depth": cmd.depth}
    if cmd.measure:
        mu = _load_measure(cmd.measure)
        levels = boundary_mod.boundary_measure(g, mu, cmd.depth, cmd.budget)
    else:
        levels = [
            boundary_mod.boundary_level(g, m, cmd.budget)
            for m in range(cmd.depth + 1)
        ]
    doc["levels"] = [
        {
            "n": level.n,
            "paths": [_path_json(p) for p in level.paths],
            **(
                {
                    "measure": [
                        {
                            "path": _path_json(p),
                            "mass": format_rational(level.measure[p]),
                        }
                        for p in level.paths
                    ]
                }
                if level.measure is not None
                else {}
            ),
        }
        for level in levels
    ]
    if cmd.verify:
        report = boundary_mod.verify_boundary_identities(g, mu, cmd.depth, cmd.budget)
        doc["report"] = {
            name: {
                "holds": check.holds,
                "witnesses": list(check.witnesses),
            }
            for name, check in (
                ("nonnegativity", report.nonnegativity),
                ("unit_mass", report.unit_mass),
                ("rho_consistency", report.rho_consistency),
                ("range_identity", report.range_identity),
                ("cylinder_identity", report.cylinder_identity),
                ("shift_identity", report.shift_identity),
            )
        }
    return doc


def _cmd_star(g: Graph, cmd: argparse.Namespace) -> dict:
    if bool(cmd.element) == bool(cmd.defect):
        raise CliError("exactly one of --element or --defect is required")
    if cmd.element:
        with open(cmd.element, encoding="utf-8") as fh:
            element = star_mod.element_from_json(g, json.load(fh))
    else:
        element = star_mod.covariance_defect(g, cmd.defect)
    if cmd.multiply:
        with open(cmd.multiply, encoding="utf-8") as fh:
            other = star_mod.element_from_json(g, json.load(fh))
        element = star_mod.multiply(element, other)
    if cmd.adjoint:
        element = star_mod.adjoint(element)
    if cmd.degree is not None:
        element = star_mod.degree_component(element, cmd.degree)
    doc: dict = {"element": star_mod.element_to_json(element)}
    if cmd.trace:
        value = star_mod.trace_eval(_load_measure(cmd.trace), element)
        doc["trace_value"] = {
            "re": format_rational(value.re),
            "im": format_rational(value.im),
        }
    return doc


def _cmd_kpositive(g: Graph, cmd: argparse.Namespace) -> dict:
    vector = _parse_vector(cmd.vector)
    ints: dict[str, int] = {}
    for v, value in vector.items():
        if value.denominator != 1:
            raise CliError(f"class vector must be integral; {v!r} -> {value}")
        ints[v] = int(value)
    report = ktheory_mod.eventually_positive(g, ints)
    doc: dict = {
        "verdict": report.verdict,
        "hypotheses_checked": report.hypotheses_checked,
        "note": (
            "a Nonnegative verdict certifies eventual positivity only under "
            "minimality and vertex-space compactness, which are not checked"
        ),
    }
    if report.minimum is not None:
        doc["minimum"] = format_rational(report.minimum)
    if report.witness is not None:
        doc["witness"] = _trace_json(report.witness)
    return doc


def _cmd_certify(g: Graph, cmd: argparse.Namespace) -> dict:
    mu = _load_measure(cmd.measure) if cmd.measure else "all"
    certificates = traces_mod.certify_gauge_invariance(g, mu)
    out = []
    for cert in certificates:
        entry: dict = {"kind": cert.kind}
        if cert.kind in ("NoCycleInSupport", "Unknown"):
            entry["cycle_sources"] = list(cert.cycle_sources)
            if cert.support is not None:
                entry["support"] = list(cert.support)
        if cert.kind == "Unknown" and cert.failing_vertex is not None:
            entry["condition_k_fails_at"] = cert.failing_vertex
        out.append(entry)
    return {"certificates": out}


_HANDLERS = {
    "info": _cmd_info,
    "traces": _cmd_traces,
    "ktheory": _cmd_ktheory,
    "boundary": _cmd_boundary,
    "star": _cmd_star,
    "kpositive": _cmd_kpositive,
    "certify": _cmd_certify,
}


def main(argv: list[str] | None = None) -> int:
    argv = sys.argv[1:] if argv is None else argv
    try:
        cmd = parse_command(argv)
        document, code = execute(cmd)
    except boundary_mod.BudgetExceededError as exc:
        print(
            f"graphtrace: budget exhausted: {exc} "
            f"(raise --budget to allow more paths)",
            file=sys.stderr,
        )
        return 2
    except GraphValidationError as exc:
        print(f"graphtrace: {exc}", file=sys.stderr)
        print(f"graphtrace: reminder -- {_CONVENTION}", file=sys.stderr)
        return 1
    except (CliError, ValueError, OSError, json.JSONDecodeError) as exc:
        print(f"graphtrace: {exc}", file=sys.stderr)
        return 1
    sys.stdout.write(canonical_json(document))
    return code


if __name__ == "__main__":
    raise SystemExit(main())
