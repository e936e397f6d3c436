"""Acceptance suite: every criterion is exact (no tolerances anywhere).

Each test prints one PASS/FAIL line; run with ``pytest -s`` to stream them.
The two sweep-based criteria share one exhaustive enumeration of all
multigraphs with at most 4 vertices and 5 edges.
"""

import random
from fractions import Fraction

from graphtrace import (
    certify_gauge_invariance,
    condition_k,
    eventually_positive,
    extreme_traces,
    k_groups,
    simple_cycles_at,
    smith_normal_form,
    state_from_trace,
    verify_boundary_identities,
)
from graphtrace.star import (
    GaussianRational,
    adjoint,
    covariance_defect,
    degree_component,
    multiply,
    projection,
    trace_eval,
)

from conftest import (
    brute_force_first_returns,
    is_simple_cycle_at,
    oracle_extreme_points,
    path_pool,
    random_element,
)
from test_ktheory import assert_snf_contract, entries_gcd, minor_gcd

F = Fraction


def report(num, text, check):
    try:
        check()
    except BaseException:
        print(f"FAIL criterion {num}: {text}")
        raise
    print(f"PASS criterion {num}: {text}")


def as_value_sets(traces):
    return {tuple(sorted(t.values.items())) for t in traces}


def test_criterion_01_traceless_fixtures(graphs):
    def check():
        assert extreme_traces(graphs["o2"]) == []
        assert extreme_traces(graphs["fib"]) == []

    report(1, "o2 and fib have empty trace space", check)


def test_criterion_02_unique_trace_fixtures(graphs):
    def check():
        assert as_value_sets(extreme_traces(graphs["m2"])) == {
            (("u", F(1, 2)), ("v", F(1, 2)))
        }
        assert as_value_sets(extreme_traces(graphs["fork"])) == {
            (("u", F(1, 3)), ("v1", F(1, 3)), ("v2", F(1, 3)))
        }
        assert as_value_sets(extreme_traces(graphs["loop"])) == {(("v", F(1)),)}
        assert as_value_sets(extreme_traces(graphs["y"])) == {
            (("a", F(1, 2)), ("b", F(1, 2)), ("c", F(0))),
            (("a", F(1, 2)), ("b", F(0)), ("c", F(1, 2))),
        }

    report(2, "extreme traces of m2, fork, loop, y are exact", check)


def test_criterion_03_k_theory(graphs):
    def check():
        expected = {
            "loop": (1, (), 1),
            "o2": (0, (), 0),
            "fib": (0, (), 0),
            "m2": (1, (), 0),
            "inf": (2, (), 0),
        }
        for name, (free0, torsion, free1) in expected.items():
            k0, k1 = k_groups(graphs[name])
            assert (k0.free_rank, k0.torsion, k1.free_rank) == (
                free0,
                torsion,
                free1,
            ), name
        assert k_groups(graphs["m2"])[0].order_unit_class.free == (2,)

    report(3, "K-groups and order-unit classes match", check)


def test_criterion_04_boundary_identity_suite(graphs):
    def check():
        for name in ("loop", "m2", "y", "fork", "c3"):
            g = graphs[name]
            traces = extreme_traces(g)
            assert traces, name
            for trace in traces:
                for depth in range(7):
                    assert verify_boundary_identities(
                        g, trace.values, depth
                    ).all_hold(), (name, depth)
        bad = verify_boundary_identities(graphs["m2"], {"u": F(1), "v": F(0)}, 4)
        assert not bad.range_identity.holds
        assert bad.range_identity.witnesses

    report(4, "boundary identities hold to depth 6; injection caught", check)


STAR_FIXTURES = ("loop", "o2", "m2", "y", "fork", "fib", "c3")


def test_criterion_05_star_property_suite(graphs):
    def check():
        rng = random.Random(271828)
        for name in STAR_FIXTURES:
            g = graphs[name]
            pool = path_pool(g, max_len=4)
            elements = [random_element(g, rng, pool, max_terms=5) for _ in range(500)]
            traces = extreme_traces(g)
            weightings = [t.values for t in traces] + [
                {v: F(rng.randint(0, 4), 3) for v in g.vertices} for _ in range(2)
            ]
            from graphtrace import classify_vertices

            regular = classify_vertices(g).regular
            defects = [covariance_defect(g, v) for v in regular]
            for i, x in enumerate(elements):
                y = elements[(i + 1) % 500]
                z = elements[(i + 7) % 500]
                assert multiply(multiply(x, y), z) == multiply(x, multiply(y, z))
                assert adjoint(multiply(x, y)) == multiply(adjoint(y), adjoint(x))
                for mu in weightings:
                    assert trace_eval(mu, multiply(x, y)) == trace_eval(
                        mu, multiply(y, x)
                    )
                    assert trace_eval(mu, x) == trace_eval(mu, degree_component(x, 0))
                for trace in traces:
                    value = trace_eval(trace.values, multiply(adjoint(x), x))
                    assert value.im == 0 and value.re >= 0
                    for defect in defects:
                        assert trace_eval(
                            trace.values, multiply(defect, x)
                        ).is_zero()
        # perturbing a regular vertex of m2 by 1/100 breaks annihilation
        m2 = graphs["m2"]
        perturbed = {"u": F(1, 2), "v": F(1, 2) + F(1, 100)}
        witness = multiply(covariance_defect(m2, "v"), projection(m2, "v"))
        assert trace_eval(perturbed, witness) == GaussianRational(F(1, 100))

    report(5, "star-algebra properties on 500 random elements per fixture", check)


def test_criterion_06_round_trip(graphs):
    def check():
        for name, g in graphs.items():
            for trace in extreme_traces(g):
                for v in g.vertices:
                    assert trace_eval(trace.values, projection(g, v)) == (
                        GaussianRational(trace[v])
                    ), (name, v)
                state = state_from_trace(g, trace)  # annihilation asserted inside
                assert state.order_unit_value == 1

    report(6, "trace round trip and induced K_0 states", check)


def test_criterion_07_condition_k_certificates(graphs, small_graph_sweep):
    def check():
        loop_verdict = condition_k(graphs["loop"])
        assert not loop_verdict.satisfied and loop_verdict.vertex == "v"
        assert condition_k(graphs["o2"]).satisfied
        for name in ("m2", "y", "fork"):
            kinds = [c.kind for c in certify_gauge_invariance(graphs[name], "all")]
            assert kinds[0] == "NoCycleInSupport", name
        for g in small_graph_sweep:
            bound = 2 * len(g.vertices) + 1
            counts = {}
            for v in g.vertices:
                verdict = simple_cycles_at(g, v)
                oracle = brute_force_first_returns(g, v, bound)
                assert verdict.count == min(len(oracle), 2)
                counts[v] = verdict.count
                for witness in verdict.witnesses:
                    assert len(witness) <= bound
                    assert is_simple_cycle_at(g, witness, v)
            assert condition_k(g).satisfied == all(c != 1 for c in counts.values())

    report(7, "condition (K) and cycle counts on the exhaustive sweep", check)


def test_criterion_08_smith_properties():
    def check():
        rng = random.Random(112358)
        for _ in range(1000):
            m = rng.randint(1, 6)
            n = rng.randint(1, 6)
            matrix = [[rng.randint(-9, 9) for _ in range(n)] for _ in range(m)]
            snf = assert_snf_contract(matrix)
            diag = snf.diagonal
            if any(any(row) for row in matrix):
                assert diag[0] == entries_gcd(matrix)
            for k in (2, 3):
                if k <= min(m, n):
                    prod = 1
                    for d in diag[:k]:
                        prod *= d
                    assert prod == minor_gcd(matrix, k)

    report(8, "Smith normal form contract on 1000 random matrices", check)


def test_criterion_09_eventual_positivity(graphs):
    def check():
        c3 = graphs["c3"]
        nonneg = eventually_positive(c3, {"x": 1, "y": -1, "z": 0})
        assert nonneg.verdict == "Nonnegative" and nonneg.minimum == 0
        neg = eventually_positive(c3, {"x": -1, "y": 0, "z": 0})
        assert neg.verdict == "NegativeWitness" and neg.minimum == F(-1, 3)
        assert eventually_positive(graphs["o2"], {"v": 1}).verdict == (
            "EmptyTraceSpace"
        )

    report(9, "eventual-positivity verdicts on c3 and o2", check)


def test_criterion_10_polytope_oracle_equivalence(small_graph_sweep):
    def check():
        for g in small_graph_sweep:
            ours = [t.as_tuple(g) for t in extreme_traces(g)]
            assert ours == oracle_extreme_points(g)

    report(10, "extreme traces match basic-solution oracle on the sweep", check)
