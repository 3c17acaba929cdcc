"""Sign-preserver falsification for graph-patterned matrices M_G(Omega).

Dispatch follows the graph's structure:

* trees get the three-vertex path batteries (the ``[[1,x,0],[x,1,x],[0,x,1]]``
  gate, the subadditivity and the growth matrices) on an induced path;
* graphs whose shortest cycle is a triangle get the dense 3 x 3 batteries on
  that triangle;
* graphs whose shortest cycle has length k >= 4 get the path batteries plus
  cycle witnesses on the induced k-cycle, built from pairs of domain points whose
  value of ``Re(z1 conj z2)`` changes under f.

Every construction on a proper induced subgraph is embedded into the whole
graph by padding: 1 on the remaining diagonal and a small ``eps`` on every edge
that touches a remaining vertex.  ``eps`` is taken from a grid and accepted only
if the padded matrix keeps the verdict of the unpadded one.  A random M_G phase
runs last.
"""

from __future__ import annotations

import itertools
import math

import numpy as np

from .domains import DomainSpec, is_theorem_domain
from .errors import InputError
from .graphs import GraphSpec, induced_path3, is_tree, shortest_induced_cycle
from .numeric import DEFAULT_TOL, Kind, positivity_verdict
from .reports import Construction, Outcome, VerdictReport, builder, rebuild
from . import witnesses as W
from .verifier import (ANGLES, DEFAULT_BUDGET, DEFAULT_SEED, Stats, _check_mode, _context,
                       run_candidates, run_random_phase, targeted_candidates, working_range)

PAD_GRID = (1e-6, 1e-4, 1e-2)


def _c(v) -> complex:
    if isinstance(v, (list, tuple)):
        return complex(v[0], v[1])
    return complex(v)


@builder("subadditive")
def _b_subadditive(p, ctx):
    M = W.subadditive_matrix(float(p["x"]), float(p["y"]))
    return M.entries, True


@builder("unbounded")
def _b_unbounded(p, ctx):
    return W.unbounded_matrix(float(p["t"])).entries, False


@builder("cycle-witness")
def _b_cycle(p, ctx):
    cw = W.cycle_witness(int(p["n"]), float(p["R"]), _c(p["offA"]), _c(p["offB"]), float(p["eps"]))
    if "a" in p:
        return cw.shell(_c(p["a"]), _c(p["b"])).entries, False
    return cw.matrix.entries, False


# ------------------------------------------------------------ embedding


def _pad_grid(d: DomainSpec):
    return ((0.0,) if d.contains_point(0) else ()) + PAD_GRID


def padded(cons: Construction, adj: np.ndarray, S, d: DomainSpec, tol: float):
    """Embed ``cons`` on vertex positions ``S`` (0-based) into the whole graph.

    Returns the first padded construction whose verdict equals the unpadded
    verdict, or None when the base is Marginal, its pattern does not fit, or
    no grid value works.  When S covers the whole graph the pad operation
    only permutes.
    """
    S = [int(s) for s in S]
    try:
        M, stamp, _ = rebuild(cons)
    except InputError:
        return None
    base = positivity_verdict(M, tol, exact_singular=stamp).kind
    if base is Kind.MARGINAL:
        return None
    adj_list = adj.astype(int).tolist()
    for eps in _pad_grid(d):
        c = cons.then("pad", adj_list, S, eps)
        try:
            P, st, _ = rebuild(c)
        except InputError:
            return None
        if positivity_verdict(P, tol, exact_singular=st).kind is base:
            return c
    return None


def _embed(candidates, adj, S, d, tol):
    for strategy, cons in candidates:
        c = padded(cons, adj, S, d, tol)
        if c is not None:
            yield strategy, c


def _embed_path(candidates, adj, path, d, tol):
    """Path constructions come with the index of their centre vertex."""
    u, v, w = path
    for strategy, cons, centre in candidates:
        S = [u, v, w] if centre == 1 else [v, u, w]
        c = padded(cons, adj, S, d, tol)
        if c is not None:
            yield strategy, c


# ------------------------------------------------------------ path batteries


def path_candidates(d: DomainSpec, mode: str):
    """Three-vertex path constructions as (strategy, construction, centre index).

    The gate matrix is centred at index 1, the subadditivity and growth
    matrices at index 0.
    """
    ab = working_range(d)
    if ab is None:
        return
    a, b = ab
    xs = sorted(set(np.round(np.linspace(0.05, 0.95, 19), 2).tolist()) | {0.75})
    for x in xs:
        cons = Construction("beta-gate", {"x": x})
        yield "beta-gate", (cons if a == 1.0 else cons.then("scale", a)), 1
    for x, y in ((1.0, 1.0), (0.5, 1.0), (1.0, 2.0), (0.3, 0.7)):
        if a * (x + y) * 1.02 > b:
            continue
        base = Construction("subadditive", {"x": a * x, "y": a * y})
        yield "subadditive", base, 0
        for delta in (1e-3, 1e-2):
            yield "subadditive", base.then("shift", delta * a), 0
            yield "subadditive", base.then("shift", -delta * a), 0
    for t in (1.0, 10.0, 100.0, 1e3, 1e4):
        if 3 * a * t > b:
            break
        yield "unbounded", Construction("unbounded", {"t": a * t}), 0


# ------------------------------------------------------------ cycle batteries


def _cycle_points(d: DomainSpec, seed: int):
    pts = [1.0 + 0j] if d.contains_point(1.0) else []
    for r in (1.0, 0.5, 2.0):
        for t in ANGLES:
            pts.append(r * complex(math.cos(t), math.sin(t)))
    pts += [-2.0, -1.0, -0.5, 0.5, 2.0]
    rng = np.random.default_rng(np.random.SeedSequence([int(seed), 13]))
    pts += d.sample(rng, 16).tolist()
    out = []
    for z in pts:
        z = complex(z)
        if z != 0 and d.contains_point(z) and z not in out:
            out.append(z)
    return out


def cycle_candidates(f, d: DomainSpec, k: int, seed: int):
    """Cycle witnesses from pairs (z1, z2) with ``Re(z1 conj z2) != Re(f(z1) conj f(z2))``.

    Values of f are normalized by ``f(1)`` when that is a positive real, so a
    positive scalar multiple of a preserver behaves like the preserver.  Each
    pair gives two candidates: the positive definite witness built at the
    input values, and the witness built at the image values evaluated at the
    input values (so that its image is the positive definite one).
    """
    pts = _cycle_points(d, seed)
    c = 1.0
    if d.contains_point(1.0):
        w1 = f.scalar(1.0)
        if np.isfinite(w1) and w1.imag == 0 and w1.real > 0:
            c = w1.real
    vals = {z: f.scalar(z) / c for z in pts}
    for z1, z2 in itertools.product(pts, repeat=2):
        w1, w2 = vals[z1], vals[z2]
        if not (np.isfinite(w1) and np.isfinite(w2)) or w1 == 0 or w2 == 0:
            continue
        gap = abs((z1 * z2.conjugate()).real - (w1 * w2.conjugate()).real)
        if gap < 1e-6 * max(1.0, abs(z1) * abs(z2)):
            continue
        eps = gap / 2
        yield "cycle-witness", Construction("cycle-witness", {"n": k, "R": 1.0, "offA": z1, "offB": z2,
                                                              "eps": eps})
        yield "cycle-witness", Construction("cycle-witness", {"n": k, "R": 1.0, "offA": w1, "offB": w2,
                                                              "eps": eps, "a": z1, "b": z2})


# ------------------------------------------------------------ public API


def dispatch(G: GraphSpec) -> dict:
    """Which battery family applies to G, and on which vertices (1-based)."""
    G.require_connected()
    if G.n < 3:
        raise InputError("graph sign preservation is tested for n >= 3 vertices")
    if is_tree(G):
        return {"kind": "tree", "path": list(induced_path3(G))}
    cyc = shortest_induced_cycle(G)
    info = {"kind": "triangle" if len(cyc) == 3 else "cycle", "cycle": list(cyc)}
    if len(cyc) > 3:
        info["path"] = list(cyc[:3])
    return info


def find_graph_counterexample(f, G: GraphSpec, d: DomainSpec, mode: str = "pd",
                              budget: int = DEFAULT_BUDGET, seed: int = DEFAULT_SEED,
                              tol: float = DEFAULT_TOL, workers: int = 1, stats: Stats | None = None):
    """Search for A in M_G(d) whose positivity differs from that of f_G[A]."""
    _check_mode(mode)
    stats = Stats() if stats is None else stats
    info = dispatch(G)
    adj = G.adjacency()
    ctx = {"domainSpec": d, "adjacency": adj.astype(int).tolist()}
    groups = []
    if "path" in info:
        S = [v - 1 for v in info["path"]]
        groups.append(_embed_path(path_candidates(d, mode), adj, S, d, tol))
    if info["kind"] == "triangle":
        S = [v - 1 for v in info["cycle"]]
        groups.append(_embed(targeted_candidates(f, d, 3, mode), adj, S, d, tol))
    elif info["kind"] == "cycle":
        S = [v - 1 for v in info["cycle"]]
        groups.append(_embed(cycle_candidates(f, d, len(S), seed), adj, S, d, tol))
    for cands in groups:
        w = run_candidates(f, d, mode, tol, cands, stats, budget, ctx, adj=adj)
        if w is not None:
            return w
    return run_random_phase(f, d, G.n, mode, tol, stats, budget, seed, workers, adj=adj, ctx=ctx)


def verify_graph_preserver(f, G: GraphSpec, d: DomainSpec, mode: str = "pd",
                           budget: int = DEFAULT_BUDGET, seed: int = DEFAULT_SEED,
                           tol: float = DEFAULT_TOL, workers: int = 1) -> VerdictReport:
    stats = Stats()
    w = find_graph_counterexample(f, G, d, mode, budget, seed, tol, workers, stats)
    outcome = Outcome.FALSIFIED if w is not None else Outcome.NOT_FALSIFIED
    ctx = _context(f, d, G.n, mode, budget, seed, tol, graph=G.to_json(),
                   adjacency=G.adjacency().astype(int).tolist(), dispatch=dispatch(G),
                   outOfTheorem=is_theorem_domain(d) is None)
    return VerdictReport(outcome, w, stats.checks, stats.skipped, ctx)
