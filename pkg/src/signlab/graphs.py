"""Simple undirected graphs on vertices 1..n and the structure queries the
graph verifier dispatches on (tree test, girth, shortest induced cycle).

Vertices are 1-based everywhere in the public API; :meth:`GraphSpec.adjacency`
returns a 0-based boolean mask for matrix work.
"""

from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from .errors import DisconnectedGraph, InputError


@dataclass(frozen=True)
class GraphSpec:
    """Simple graph: no loops, no repeated edges.  Edges are stored as sorted pairs."""

    n: int
    edges: frozenset = field(default_factory=frozenset)

    def __post_init__(self):
        if int(self.n) != self.n or self.n < 1:
            raise InputError("a graph needs n >= 1 vertices")
        object.__setattr__(self, "n", int(self.n))
        seen = set()
        for e in self.edges:
            i, j = (int(v) for v in e)
            if i == j:
                raise InputError(f"loop at vertex {i}")
            if not (1 <= i <= self.n and 1 <= j <= self.n):
                raise InputError(f"edge ({i}, {j}) has a vertex outside 1..{self.n}")
            key = (min(i, j), max(i, j))
            if key in seen:
                raise InputError(f"repeated edge {key}")
            seen.add(key)
        object.__setattr__(self, "edges", frozenset(seen))

    @classmethod
    def from_edges(cls, n: int, edges) -> "GraphSpec":
        """Like the constructor but takes any iterable and rejects repeats in it."""
        edges = [tuple(e) for e in edges]
        keys = [(min(i, j), max(i, j)) for i, j in edges]
        if len(set(keys)) != len(keys):
            raise InputError("repeated edge in edge list")
        return cls(n, frozenset(keys))

    @cached_property
    def neighbors(self) -> dict:
        nb = {v: [] for v in range(1, self.n + 1)}
        for i, j in self.edges:
            nb[i].append(j)
            nb[j].append(i)
        return {v: sorted(ws) for v, ws in nb.items()}

    def adjacency(self) -> np.ndarray:
        """Boolean n x n mask, 0-based, False on the diagonal."""
        A = np.zeros((self.n, self.n), dtype=bool)
        for i, j in self.edges:
            A[i - 1, j - 1] = A[j - 1, i - 1] = True
        return A

    def degree(self, v: int) -> int:
        return len(self.neighbors[v])

    @cached_property
    def components(self) -> tuple:
        left = set(range(1, self.n + 1))
        out = []
        while left:
            root = min(left)
            comp = {root}
            queue = deque([root])
            while queue:
                u = queue.popleft()
                for w in self.neighbors[u]:
                    if w not in comp:
                        comp.add(w)
                        queue.append(w)
            left -= comp
            out.append(tuple(sorted(comp)))
        return tuple(out)

    @property
    def connected(self) -> bool:
        return len(self.components) == 1

    def require_connected(self):
        if not self.connected:
            raise DisconnectedGraph(
                f"graph has {len(self.components)} components; treat each component separately")

    def to_json(self) -> dict:
        return {"n": self.n, "edges": [list(e) for e in sorted(self.edges)]}

    @classmethod
    def from_json(cls, obj) -> "GraphSpec":
        if isinstance(obj, str):
            obj = json.loads(obj)
        try:
            return cls.from_edges(int(obj["n"]), [(int(e[0]), int(e[1])) for e in obj.get("edges", [])])
        except (KeyError, TypeError, IndexError, ValueError) as exc:
            raise InputError(f"bad graph JSON: {exc}") from exc

    def to_text(self) -> str:
        return "\n".join([str(self.n)] + [f"{i} {j}" for i, j in sorted(self.edges)]) + "\n"


# ------------------------------------------------------------ structure


def is_tree(G: GraphSpec) -> bool:
    return G.connected and len(G.edges) == G.n - 1


def girth(G: GraphSpec) -> int | None:
    """Length of a shortest cycle (BFS from every vertex), None for forests."""
    best = None
    for root in range(1, G.n + 1):
        dist = {root: 0}
        parent = {root: 0}
        queue = deque([root])
        while queue:
            u = queue.popleft()
            for w in G.neighbors[u]:
                if w not in dist:
                    dist[w] = dist[u] + 1
                    parent[w] = u
                    queue.append(w)
                elif parent[u] != w:
                    length = dist[u] + dist[w] + 1
                    if best is None or length < best:
                        best = length
    return best


def induced_subgraph(G: GraphSpec, S) -> GraphSpec:
    """Subgraph induced on the vertices ``S`` (1-based), relabelled 1..|S| in the order given.

    A set is taken in sorted order.
    """
    order = sorted(S) if isinstance(S, (set, frozenset)) else list(S)
    if len(set(order)) != len(order):
        raise InputError("repeated vertex in subset")
    if any(not 1 <= v <= G.n for v in order):
        raise InputError("subset has a vertex outside the graph")
    pos = {v: k + 1 for k, v in enumerate(order)}
    edges = [(pos[i], pos[j]) for i, j in G.edges if i in pos and j in pos]
    return GraphSpec.from_edges(len(order), edges)


def _cycles_from(G: GraphSpec, s: int, length: int):
    """Cycles of the given length whose smallest vertex is s, as lists starting at s,
    in lexicographic order, oriented so the second vertex is below the last."""
    path = [s]
    on = {s}

    def dfs():
        u = path[-1]
        if len(path) == length:
            if s in G.neighbors[u] and path[1] < path[-1]:
                yield list(path)
            return
        for w in G.neighbors[u]:
            if w > s and w not in on:
                path.append(w)
                on.add(w)
                yield from dfs()
                path.pop()
                on.discard(w)

    yield from dfs()


def shortest_induced_cycle(G: GraphSpec) -> tuple | None:
    """A minimum-length cycle with the lexicographically smallest vertex list.

    A chord of a shortest cycle would close a shorter one, so the result is an
    induced cycle.  Raises DisconnectedGraph on disconnected input.
    """
    G.require_connected()
    g = girth(G)
    if g is None:
        return None
    for s in range(1, G.n + 1):
        for cyc in _cycles_from(G, s, g):
            return tuple(cyc)
    raise AssertionError("girth found a cycle that enumeration missed")  # pragma: no cover


def induced_path3(G: GraphSpec) -> tuple | None:
    """An induced path u - v - w (1-based), smallest centre first, or None."""
    for v in range(1, G.n + 1):
        nb = G.neighbors[v]
        for a in range(len(nb)):
            for b in range(a + 1, len(nb)):
                u, w = nb[a], nb[b]
                if w not in G.neighbors[u]:
                    return (u, v, w)
    return None


# ------------------------------------------------------------ families and IO


def path_graph(n: int) -> GraphSpec:
    return GraphSpec.from_edges(n, [(i, i + 1) for i in range(1, n)])


def cycle_graph(n: int) -> GraphSpec:
    if n < 3:
        raise InputError("a cycle needs n >= 3")
    return GraphSpec.from_edges(n, [(i, i + 1) for i in range(1, n)] + [(n, 1)])


def star_graph(leaves: int) -> GraphSpec:
    """K_{1,leaves} with centre 1."""
    return GraphSpec.from_edges(leaves + 1, [(1, j) for j in range(2, leaves + 2)])


def complete_graph(n: int) -> GraphSpec:
    return GraphSpec.from_edges(n, [(i, j) for i in range(1, n + 1) for j in range(i + 1, n + 1)])


FAMILIES = {"path": path_graph, "cycle": cycle_graph, "star": star_graph, "complete": complete_graph}


def parse_edge_list(text: str) -> GraphSpec:
    """``n`` on the first line, then one ``i j`` pair per line; ``#`` starts a comment."""
    lines = [ln.split("#", 1)[0].strip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln]
    if not lines:
        raise InputError("empty edge list")
    try:
        n = int(lines[0])
        edges = []
        for ln in lines[1:]:
            parts = ln.replace(",", " ").split()
            if len(parts) != 2:
                raise ValueError(f"expected 'i j', got {ln!r}")
            edges.append((int(parts[0]), int(parts[1])))
    except ValueError as exc:
        raise InputError(f"bad edge list: {exc}") from exc
    return GraphSpec.from_edges(n, edges)


def parse_graph(text: str) -> GraphSpec:
    """JSON object, edge-list text, or a family name such as ``cycle:5`` or ``star:3``."""
    t = text.strip()
    if t.startswith("{"):
        return GraphSpec.from_json(t)
    head, sep, rest = t.partition(":")
    if sep and head in FAMILIES:
        try:
            return FAMILIES[head](int(rest))
        except ValueError as exc:
            raise InputError(f"bad graph family size in {t!r}") from exc
    return parse_edge_list(t)
