import json

import numpy as np
import pytest

from signlab.domains import COMPLEX_PLANE, POSITIVE_REALS, REAL_LINE, annulus
from signlab.errors import DisconnectedGraph, InputError
from signlab.graph_verifier import (cycle_candidates, dispatch, padded, path_candidates,
                                    verify_graph_preserver)
from signlab.graphs import GraphSpec, complete_graph, cycle_graph, path_graph, star_graph
from signlab.numeric import Kind, positivity_verdict
from signlab.reports import Construction, Outcome, dumps, rebuild, replay
from signlab.transforms import (build_irregular_preserver, parse_fn, power_sign, scaled_conjugate,
                                scaled_identity)

MIXED = "re(z) + 1i*im(z)*sgn(re(z))"  # z on the right half plane, conj z on the left
C5_PENDANT = GraphSpec.from_edges(6, [(1, 2), (2, 3), (3, 4), (4, 5), (5, 1), (3, 6)])


def replays(rep):
    return replay(json.loads(dumps(rep.to_json()))).ok


def test_dispatch():
    assert dispatch(path_graph(3)) == {"kind": "tree", "path": [1, 2, 3]}
    assert dispatch(star_graph(3))["kind"] == "tree"
    assert dispatch(complete_graph(4)) == {"kind": "triangle", "cycle": [1, 2, 3]}
    info = dispatch(C5_PENDANT)
    assert info["kind"] == "cycle" and info["cycle"] == [1, 2, 3, 4, 5] and info["path"] == [1, 2, 3]
    with pytest.raises(DisconnectedGraph):
        dispatch(GraphSpec.from_edges(4, [(1, 2), (3, 4)]))
    with pytest.raises(InputError):
        dispatch(path_graph(2))


def test_padding_keeps_verdict_and_pattern():
    G = star_graph(3)
    adj = G.adjacency()
    for strategy, cons, centre in path_candidates(REAL_LINE, "pd"):
        S = [1, 0, 2] if centre == 1 else [0, 1, 2]
        c = padded(cons, adj, S, REAL_LINE, 1e-9)
        if c is None:
            continue
        M, stamp, _ = rebuild(c)
        base, bstamp, _ = rebuild(cons)
        assert positivity_verdict(M, exact_singular=stamp).kind is positivity_verdict(base, exact_singular=bstamp).kind
        assert np.all(M[~adj & ~np.eye(4, dtype=bool)] == 0)


def test_cycle_candidates_come_from_moving_pairs():
    f = parse_fn(MIXED)
    cands = list(cycle_candidates(f, COMPLEX_PLANE, 4, seed=0))
    assert cands
    for _, cons in cands[:50]:
        p = cons.params
        M, _, _ = rebuild(cons)
        if "a" not in p:
            assert positivity_verdict(M).kind is Kind.PD
    assert not list(cycle_candidates(scaled_conjugate(1.5), COMPLEX_PLANE, 4, seed=0))


@pytest.mark.parametrize("G", [path_graph(3), star_graph(3)], ids=["P3", "K13"])
def test_trees_square_falsified_by_gate(G):
    rep = verify_graph_preserver(power_sign(1, 2), G, POSITIVE_REALS)
    w = rep.witness
    assert w.strategy == "beta-gate" and w.direction.value == "PDgained"
    assert replays(rep)


@pytest.mark.parametrize("G", [path_graph(3), star_graph(3)], ids=["P3", "K13"])
@pytest.mark.parametrize("mode", ["pd", "psd"])
def test_trees_irregular_not_falsified(G, mode):
    rep = verify_graph_preserver(build_irregular_preserver(2, 1, 0), G, COMPLEX_PLANE, mode)
    assert rep.outcome is Outcome.NOT_FALSIFIED
    assert rep.context["dispatch"]["kind"] == "tree"


@pytest.mark.parametrize("G", [cycle_graph(4), cycle_graph(5), C5_PENDANT], ids=["C4", "C5", "C5+"])
def test_cycles_mixed_conjugation_falsified(G):
    rep = verify_graph_preserver(parse_fn(MIXED), G, COMPLEX_PLANE)
    assert rep.witness.strategy == "cycle-witness"
    assert replays(rep)
    M = rep.witness.matrix
    adj = G.adjacency()
    assert np.all(M[~adj & ~np.eye(G.n, dtype=bool)] == 0)


@pytest.mark.parametrize("G", [cycle_graph(4), cycle_graph(5)], ids=["C4", "C5"])
def test_cycles_conjugate_not_falsified(G):
    assert verify_graph_preserver(scaled_conjugate(1.5), G, COMPLEX_PLANE).outcome is Outcome.NOT_FALSIFIED


def test_triangle_graphs_use_dense_battery():
    G = complete_graph(4)
    rep = verify_graph_preserver(build_irregular_preserver(1, 1, 0), G, COMPLEX_PLANE)
    assert rep.witness.strategy in ("multiplicativity", "g-battery") and replays(rep)
    assert verify_graph_preserver(scaled_identity(2), G, REAL_LINE).outcome is Outcome.NOT_FALSIFIED


def test_out_of_theorem_domain_is_flagged():
    rep = verify_graph_preserver(scaled_identity(1), path_graph(3), annulus(0.5, 2), budget=2000)
    assert rep.context["outOfTheorem"] is True
    rep = verify_graph_preserver(scaled_identity(1), path_graph(3), REAL_LINE, budget=2000)
    assert rep.context["outOfTheorem"] is False


def test_pattern_violating_candidates_are_skipped():
    # a dense 3x3 construction cannot live on a path
    from signlab.verifier import Stats, run_candidates
    adj = path_graph(3).adjacency()
    stats = Stats()
    cands = [("dense", Construction("fitzgerald-horn", {"n": 3, "eps": 0.1, "a": 1.0}))]
    assert run_candidates(scaled_identity(1), REAL_LINE, "pd", 1e-9, cands, stats, 10, {}, adj=adj) is None
    assert stats.skipped == {"patternViolation": 1}
