import json
import math

import networkx as nx
import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from signlab.errors import DisconnectedGraph, InputError
from signlab.graphs import (GraphSpec, complete_graph, cycle_graph, girth, induced_path3,
                            induced_subgraph, is_tree, parse_graph, path_graph,
                            shortest_induced_cycle, star_graph)
from signlab.numeric import positivity_verdict
from signlab.transforms import apply_entrywise_graph, parse_fn, power_sign


@st.composite
def graphs(draw, n_min=1, n_max=9, connected=False):
    n = draw(st.integers(n_min, n_max))
    pairs = [(i, j) for i in range(1, n + 1) for j in range(i + 1, n + 1)]
    edges = draw(st.lists(st.sampled_from(pairs), unique=True)) if pairs else []
    if connected:
        # attach every vertex to an earlier one, then add the drawn edges
        parents = [draw(st.integers(1, v - 1)) for v in range(2, n + 1)]
        edges = sorted(set(edges) | {(p, v) for v, p in zip(range(2, n + 1), parents)})
    return GraphSpec.from_edges(n, edges)


@st.composite
def trees(draw, n_max=7):
    n = draw(st.integers(2, n_max))
    return GraphSpec.from_edges(n, [(draw(st.integers(1, v - 1)), v) for v in range(2, n + 1)])


def to_nx(G):
    H = nx.Graph()
    H.add_nodes_from(range(1, G.n + 1))
    H.add_edges_from(G.edges)
    return H


def patterned(G, rng, scale=1.0):
    """Random Hermitian matrix supported on G with a loaded diagonal."""
    n = G.n
    A = np.zeros((n, n), dtype=complex)
    for i, j in G.edges:
        z = complex(*rng.normal(size=2)) * scale
        A[i - 1, j - 1], A[j - 1, i - 1] = z, z.conjugate()
    np.fill_diagonal(A, rng.uniform(0.1, 3, n))
    return A


# -------------------------------------------------------------- examples


def test_examples():
    assert is_tree(path_graph(4)) and girth(path_graph(4)) is None
    assert girth(cycle_graph(5)) == 5
    assert shortest_induced_cycle(cycle_graph(5)) == (1, 2, 3, 4, 5)
    assert girth(complete_graph(4)) == 3
    assert is_tree(star_graph(3)) and induced_path3(star_graph(3)) == (2, 1, 3)


def test_construction_validation():
    with pytest.raises(InputError):
        GraphSpec(3, frozenset({(1, 1)}))
    with pytest.raises(InputError):
        GraphSpec(3, frozenset({(1, 4)}))
    with pytest.raises(InputError):
        GraphSpec.from_edges(3, [(1, 2), (2, 1)])
    with pytest.raises(InputError):
        GraphSpec(0)


def test_disconnected_theorem_ops():
    G = GraphSpec.from_edges(6, [(1, 2), (2, 3), (3, 1), (4, 5)])
    assert G.components == ((1, 2, 3), (4, 5), (6,))
    with pytest.raises(DisconnectedGraph):
        shortest_induced_cycle(G)
    assert not is_tree(G)


def test_parse_graph_forms():
    C4 = cycle_graph(4)
    assert parse_graph("cycle:4") == C4
    assert parse_graph(json.dumps(C4.to_json())) == C4
    assert parse_graph(C4.to_text()) == C4
    assert parse_graph("4\n1 2  # first\n2 3\n3 4\n4 1\n") == C4
    with pytest.raises(InputError):
        parse_graph("3\n1 2 3\n")
    with pytest.raises(InputError):
        parse_graph("")


def test_shortest_cycle_tie_break():
    # two 4-cycles sharing the edge 1-2: (1,2,3,4) and (1,2,5,6)
    G = GraphSpec.from_edges(6, [(1, 2), (2, 3), (3, 4), (4, 1), (2, 5), (5, 6), (6, 1)])
    assert shortest_induced_cycle(G) == (1, 2, 3, 4)
    assert shortest_induced_cycle(path_graph(4)) is None


# -------------------------------------------------------------- networkx oracle


@given(graphs())
def test_structure_matches_networkx(G):
    H = to_nx(G)
    g = nx.girth(H)
    assert girth(G) == (None if math.isinf(g) else g)
    assert is_tree(G) == nx.is_tree(H)
    assert sorted(G.components) == sorted(tuple(sorted(c)) for c in nx.connected_components(H))


@given(graphs(n_min=3, connected=True))
def test_shortest_cycle_is_induced_and_minimal(G):
    cyc = shortest_induced_cycle(G)
    H = to_nx(G)
    if cyc is None:
        assert nx.is_tree(H)
        return
    assert len(cyc) == nx.girth(H)
    sub = H.subgraph(cyc)
    assert sub.number_of_edges() == len(cyc) and all(d == 2 for _, d in sub.degree())
    assert nx.is_connected(sub)
    # lexicographically smallest canonical listing
    assert cyc[0] == min(cyc) and cyc[1] < cyc[-1]


@given(graphs(n_min=3, connected=True))
def test_induced_path3(G):
    p = induced_path3(G)
    H = to_nx(G)
    if p is None:
        assert nx.density(H) == 1.0  # only complete graphs lack an induced P3
        return
    u, v, w = p
    assert H.has_edge(u, v) and H.has_edge(v, w) and not H.has_edge(u, w)


@given(graphs(n_min=2), st.data())
def test_induced_subgraph_matches_networkx(G, data):
    S = data.draw(st.lists(st.integers(1, G.n), min_size=1, unique=True))
    sub = induced_subgraph(G, S)
    H = nx.relabel_nodes(to_nx(G).subgraph(S), {v: k + 1 for k, v in enumerate(S)})
    assert sub.edges == frozenset(tuple(sorted(e)) for e in H.edges)


# -------------------------------------------------------------- matrix properties


@given(trees(), st.integers(0, 2**32 - 1), st.floats(-math.pi, math.pi))
def test_tree_verdict_ignores_arguments(G, seed, phi):
    rng = np.random.default_rng(seed)
    A = patterned(G, rng)
    i, j = sorted(G.edges)[int(rng.integers(len(G.edges)))]
    B = A.copy()
    B[i - 1, j - 1] *= complex(math.cos(phi), math.sin(phi))
    B[j - 1, i - 1] = B[i - 1, j - 1].conjugate()
    va, vb = positivity_verdict(A), positivity_verdict(B)
    assert va.min_eigenvalue == pytest.approx(vb.min_eigenvalue, abs=1e-9 * max(1, va.scale))
    if va.decided and vb.decided:
        assert va.kind is vb.kind


def test_tree_argument_insensitivity_sampled(rng):
    count = 0
    for _ in range(1000):
        n = int(rng.integers(2, 8))
        G = GraphSpec.from_edges(n, [(int(rng.integers(1, v)), v) for v in range(2, n + 1)])
        A = patterned(G, rng)
        phases = np.exp(1j * rng.uniform(-np.pi, np.pi, (n, n)))
        phases = np.triu(phases, 1)
        phases = phases + phases.conj().T + np.eye(n)
        va, vb = positivity_verdict(A), positivity_verdict(np.where(A != 0, A * phases, 0))
        if va.decided and vb.decided:
            assert va.kind is vb.kind
            count += 1
    assert count > 900


def test_block_decomposition(rng):
    for _ in range(500):
        G1 = GraphSpec.from_edges(3, [(1, 2), (2, 3), (1, 3)][: int(rng.integers(0, 4))])
        G2 = cycle_graph(int(rng.integers(3, 6)))
        n1 = G1.n
        G = GraphSpec.from_edges(n1 + G2.n, list(G1.edges) + [(i + n1, j + n1) for i, j in G2.edges])
        A = patterned(G, rng, scale=0.7)
        whole = positivity_verdict(A)
        b1, b2 = positivity_verdict(A[:n1, :n1]), positivity_verdict(A[n1:, n1:])
        for mode in ("pd", "psd"):
            if None not in (whole.positive(mode), b1.positive(mode), b2.positive(mode)):
                assert whole.positive(mode) == (b1.positive(mode) and b2.positive(mode))


@pytest.mark.parametrize("f", [power_sign(1, 2), parse_fn("conj(z) + 1"), parse_fn("z*abs(z)")])
def test_graph_transform_commutes_with_restriction(f, rng):
    for _ in range(200):
        n = int(rng.integers(2, 8))
        pairs = [(i, j) for i in range(1, n + 1) for j in range(i + 1, n + 1)]
        keep = rng.uniform(size=len(pairs)) < 0.5
        G = GraphSpec.from_edges(n, [p for p, k in zip(pairs, keep) if k])
        A = patterned(G, rng)
        S = sorted(rng.choice(np.arange(1, n + 1), size=int(rng.integers(1, n + 1)), replace=False).tolist())
        idx = [s - 1 for s in S]
        lhs = apply_entrywise_graph(f, G, A)[np.ix_(idx, idx)]
        rhs = apply_entrywise_graph(f, induced_subgraph(G, S), A[np.ix_(idx, idx)])
        assert np.array_equal(lhs, rhs)
