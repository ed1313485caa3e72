import itertools
import random

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from chainpoly import (AbelianGroup, ContractViolation, Graph, HypothesisViolation, SchemaError,
                       SizeCapExceeded, complete_graph, count_coupled_colorings,
                       count_coupled_flows, coupled_chromatic_poly, coupled_flow_poly,
                       cycle_graph, is_coupled_coloring, is_coupled_flow, parse_group,
                       parse_groups, path_graph)
from chainpoly.graph import random_orientation
from chainpoly.graphlab import FlowAssignment, coloring_condition, flow_condition

import oracles


def _poly_at(coeffs, t):
    return sum(c * t ** d for d, c in enumerate(coeffs))


def _brute_colorings(g, palette):
    k = len(palette)
    per = [itertools.product(range(t), repeat=g.n_vertices) for t in palette]
    total = 0
    for fs in itertools.product(*per):
        total += all(oracles.coloring_edge_ok([f[a] == f[b] for f in fs], k) for a, b in g.edges)
    return total


def _kirchhoff(g, orientation, factors, values):
    # values are per-edge tuples of cyclic components
    for v in range(g.n_vertices):
        for j, q in enumerate(factors):
            net = sum((x[j] if head == v else 0) - (x[j] if tail == v else 0)
                      for (tail, head), x in zip(orientation, values))
            if net % q:
                return False
    return True


def _brute_flows(g, factor_lists):
    """All edge functions, filtered by Kirchhoff and the literal coupling condition."""
    orientation = [(min(u, v), max(u, v)) for u, v in g.edges]
    k = len(factor_lists)
    flows = []
    for factors in factor_lists:
        elems = list(itertools.product(*[range(q) for q in factors]))
        flows.append([f for f in itertools.product(elems, repeat=g.n_edges)
                      if _kirchhoff(g, orientation, factors, f)])
    total = 0
    for fs in itertools.product(*flows):
        zero = lambda e: [not any(f[e]) for f in fs]  # noqa: E731
        total += all(oracles.flow_edge_ok(zero(e), k) for e in range(g.n_edges))
    return total


# -- conditions --------------------------------------------------------------------------

@pytest.mark.parametrize("k", [1, 2, 3, 4, 5])
def test_conditions_match_literal_definition(k):
    for bits in itertools.product([False, True], repeat=k):
        arg = [np.bool_(b) for b in bits]
        assert bool(coloring_condition(arg, k)) == oracles.coloring_edge_ok(bits, k)
        assert bool(flow_condition(arg, k)) == oracles.flow_edge_ok(bits, k)



def _recursive_bad(bits):
    # "bad" set on one edge: first entry holds and the shifted tail is not bad
    if len(bits) == 1:
        return bits[0]
    return bits[0] and not _recursive_bad(bits[1:])


@pytest.mark.parametrize("k", [1, 2, 3, 4, 5, 6])
def test_conditions_match_recursive_complement_form(k):
    for bits in itertools.product([False, True], repeat=k):
        arg = [np.bool_(b) for b in bits]
        assert bool(coloring_condition(arg, k)) == (not _recursive_bad(bits))
        assert bool(flow_condition(arg, k)) == (not _recursive_bad(bits))

@settings(max_examples=50)
@given(st.integers(1, 5), st.lists(st.integers(0, 2**20 - 1), min_size=5, max_size=5))
def test_bitset_form_agrees_with_scalar_form(k, words):
    words = [np.uint64(w) for w in words[:k]]
    col = coloring_condition(words, k)
    flo = flow_condition(words, k)
    for bit in range(20):
        eq = [bool(int(w) >> bit & 1) for w in words]
        assert bool(int(col) >> bit & 1) == oracles.coloring_edge_ok(eq, k)
        assert bool(int(flo) >> bit & 1) == oracles.flow_edge_ok(eq, k)


# -- colorings ----------------------------------------------------------------------------

K3 = complete_graph(3)


def test_pictured_triangle_coloring():
    # f1 = (1, 1, 2), f2 = (2, 2, 1) with colors shifted to start at 0
    assert is_coupled_coloring(K3, [(0, 0, 1), (1, 1, 0)])


def test_triangle_non_example():
    # g1 agrees on {1, 2} but g2 does not
    assert not is_coupled_coloring(K3, [(0, 0, 1), (0, 1, 0)])


def test_coloring_needs_simple_graph():
    multi = Graph(2, ((0, 1), (0, 1)))
    with pytest.raises(HypothesisViolation):
        is_coupled_coloring(multi, [(0, 1)])
    with pytest.raises(HypothesisViolation):
        count_coupled_colorings(multi, [2])


@pytest.mark.parametrize("g", [K3, complete_graph(4), cycle_graph(5), path_graph(4),
                               Graph(4, ())])
def test_single_coloring_is_chromatic_polynomial(g):
    ref = oracles.chromatic_dc(g.n_vertices, g.edges)
    for t in range(1, 5):
        assert count_coupled_colorings(g, [t]) == _poly_at(ref, t)


@pytest.mark.parametrize("palette", [(2, 2), (1, 3), (3, 2), (2, 1, 2), (2, 2, 2), (1, 2, 1, 2)])
@pytest.mark.parametrize("g", [K3, path_graph(3), cycle_graph(4)])
def test_pattern_count_matches_brute_force(g, palette):
    want = _brute_colorings(g, palette)
    assert count_coupled_colorings(g, palette) == want
    assert count_coupled_colorings(g, palette, method="naive") == want


def test_triangle_counts():
    assert count_coupled_colorings(K3, [3]) == 6
    assert count_coupled_colorings(K3, [2, 2]) == 28
    p = coupled_chromatic_poly(K3, 2)
    assert p(2, 2) == 28 and p(2, 3) == 60 and p(3, 2) == 126


@pytest.mark.parametrize("k", [1, 2, 3])
def test_chromatic_poly_counts_k4(k):
    g = complete_graph(4)
    p = coupled_chromatic_poly(g, k)
    for pal in itertools.product(range(1, 3), repeat=k):
        assert count_coupled_colorings(g, pal) == p(*pal)


def test_coloring_work_cap():
    with pytest.raises(SizeCapExceeded):
        count_coupled_colorings(complete_graph(4), [3, 3], max_work=100)


# -- groups --------------------------------------------------------------------------------

def test_group_parsing():
    assert parse_group("Z4").order == 4
    g = parse_group("Z2xZ3")
    assert g.factors == (2, 3) and str(g) == "Z2xZ3"
    assert [x.order for x in parse_groups("Z2,Z2xZ2")] == [2, 4]
    with pytest.raises(SchemaError):
        parse_group("Q8")


@given(st.lists(st.integers(1, 4), min_size=1, max_size=3), st.data())
def test_group_laws(factors, data):
    g = AbelianGroup(tuple(factors))
    x, y, z = (data.draw(st.integers(0, g.order - 1)) for _ in range(3))
    assert g.add(x, y) == g.add(y, x)
    assert g.add(g.add(x, y), z) == g.add(x, g.add(y, z))
    assert g.add(x, g.neg(x)) == 0 and g.add(x, 0) == x


# -- flows -----------------------------------------------------------------------------------

@pytest.mark.parametrize("g", [K3, complete_graph(4), cycle_graph(5),
                               Graph(3, ((0, 1), (1, 2), (0, 2), (1, 1))),
                               Graph(2, ((0, 1), (0, 1), (0, 1))), path_graph(3)])
def test_single_flow_is_flow_polynomial(g):
    ref = oracles.flow_dc(g.edges)
    for q in range(1, 5):
        assert count_coupled_flows(g, [f"Z{q}"]) == _poly_at(ref, q)


@pytest.mark.parametrize("groups", [[(2,), (2,)], [(3,), (2,)], [(2, 2), (2,)], [(2,), (3,), (2,)],
                                    [(4,)], [(2,), (2,), (2,), (2,)]])
@pytest.mark.parametrize("g", [K3, cycle_graph(4), Graph(2, ((0, 1), (0, 1), (0, 1)))])
def test_flow_count_matches_brute_force(g, groups):
    want = _brute_flows(g, groups)
    grps = [AbelianGroup(f) for f in groups]
    assert count_coupled_flows(g, grps) == want
    assert count_coupled_flows(g, grps, method="naive") == want


@pytest.mark.parametrize("k", [1, 2, 3])
@pytest.mark.parametrize("g", [K3, complete_graph(4), cycle_graph(5)])
def test_flow_poly_counts(g, k):
    p = coupled_flow_poly(g, k)
    for sizes in itertools.product([1, 2, 3], repeat=k):
        assert count_coupled_flows(g, [f"Z{q}" for q in sizes]) == p(*sizes)


def test_flow_depends_only_on_group_order():
    g = complete_graph(4)
    assert count_coupled_flows(g, ["Z4", "Z3"]) == count_coupled_flows(g, ["Z2xZ2", "Z3"])
    assert count_coupled_flows(g, ["Z4"]) == count_coupled_flows(g, ["Z2xZ2"])


def test_flow_orientation_invariance():
    g = complete_graph(4)
    rng = random.Random(5)
    base = count_coupled_flows(g, ["Z3", "Z2xZ2"])
    for _ in range(10):
        assert count_coupled_flows(g, ["Z3", "Z2xZ2"], random_orientation(g, rng)) == base


def test_is_coupled_flow():
    z2 = parse_group("Z2")
    # all-ones is a flow on a triangle oriented as a directed cycle
    cyc = ((0, 1), (2, 0), (1, 2))
    assert is_coupled_flow(K3, cyc, FlowAssignment(((1, 1, 1), (0, 0, 0)), (z2, z2)))
    assert not is_coupled_flow(K3, cyc, FlowAssignment(((0, 0, 0), (1, 1, 1)), (z2, z2)))
    with pytest.raises(ContractViolation):
        is_coupled_flow(K3, cyc, FlowAssignment(((1, 0, 0),), (z2,)))


def test_flow_routes_agree():
    for g in (K3, complete_graph(4), cycle_graph(4)):
        for k in (1, 2, 3):
            assert coupled_flow_poly(g, k, "chain") == coupled_flow_poly(g, k, "tutte")


def test_flow_of_triangle():
    p = coupled_flow_poly(K3, 2)
    assert p.to_text() == "t1*t2 - t2 + 1"
    assert p(2, 2) == 3


def test_bad_orientation_rejected():
    with pytest.raises(ContractViolation):
        count_coupled_flows(K3, ["Z2"], orientation=((0, 1), (1, 2), (0, 1)))
