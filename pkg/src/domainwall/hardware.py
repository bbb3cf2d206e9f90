"""Chimera and Pegasus hardware graphs, and qubit interaction graphs.

Chimera ``C(L)``: an ``L x L`` grid of ``K_{4,4}`` cells.  Qubit
``(row, col, u, k)`` has linear index ``((row * L + col) * 2 + u) * 4 + k``;
``u = 0`` qubits couple vertically to the same ``k`` in neighbouring rows,
``u = 1`` qubits couple horizontally.

Pegasus ``P(L)``: qubits ``(u, w, k, z)`` with ``u`` in {0, 1}, ``w`` in
``0..L-1``, ``k`` in ``0..11`` and ``z`` in ``0..L-2``, joined by external
couplers ``z ~ z+1``, odd couplers ``k = 2j ~ 2j+1`` and internal couplers
between orientations given by the standard offset tables.  Qubits on the
boundary that cannot reach the main fabric are trimmed, leaving
``8 (L-1) (3L-1)`` vertices.  Vertices are relabelled ``0..V-1`` in
increasing order of ``((u * L + w) * 12 + k) * (L - 1) + z``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Sequence

import networkx as nx

from .encoding import EncodedProblem
from .exceptions import DomainError
from .ising import IsingModel

__all__ = [
    "HardwareGraph",
    "chimera",
    "pegasus",
    "pegasus_coordinates",
    "edge_distance",
    "interaction_graph",
    "CHIMERA_MAX_DEGREE",
    "PEGASUS_MAX_DEGREE",
    "PEGASUS_OFFSETS",
]

CHIMERA_MAX_DEGREE = 6
PEGASUS_MAX_DEGREE = 15

# vertical and horizontal offsets (offset index 0 of the published construction)
PEGASUS_OFFSETS = (
    (2, 2, 2, 2, 10, 10, 10, 10, 6, 6, 6, 6),
    (6, 6, 6, 6, 2, 2, 2, 2, 10, 10, 10, 10),
)


@dataclass(frozen=True)
class HardwareGraph:
    """Simple undirected graph on vertices ``0 .. n-1``.

    Attributes:
        family: ``"chimera"``, ``"pegasus"`` or ``"arbitrary"``.
        L: Size parameter (0 for arbitrary graphs).
        n: Number of vertices.
        edges: Sorted tuple of ``(a, b)`` pairs with ``a < b``.
    """

    family: str
    L: int
    n: int
    edges: tuple[tuple[int, int], ...] = field(default=())

    def __post_init__(self):
        es = set()
        for a, b in self.edges:
            a, b = int(a), int(b)
            if a == b:
                raise DomainError(f"self-loop on vertex {a}")
            if not (0 <= a < self.n and 0 <= b < self.n):
                raise DomainError(f"edge {(a, b)} outside {self.n} vertices")
            es.add((min(a, b), max(a, b)))
        object.__setattr__(self, "edges", tuple(sorted(es)))

    @cached_property
    def adjacency(self) -> tuple[tuple[int, ...], ...]:
        adj: list[list[int]] = [[] for _ in range(self.n)]
        for a, b in self.edges:
            adj[a].append(b)
            adj[b].append(a)
        return tuple(tuple(sorted(x)) for x in adj)

    @cached_property
    def edge_set(self) -> frozenset[tuple[int, int]]:
        return frozenset(self.edges)

    def has_edge(self, a: int, b: int) -> bool:
        return (min(a, b), max(a, b)) in self.edge_set

    def degree(self, v: int) -> int:
        return len(self.adjacency[v])

    @property
    def max_degree(self) -> int:
        return max((len(a) for a in self.adjacency), default=0)

    def to_networkx(self) -> nx.Graph:
        g = nx.Graph()
        g.add_nodes_from(range(self.n))
        g.add_edges_from(self.edges)
        return g

    def to_json(self) -> dict:
        return {"family": self.family, "L": self.L, "n": self.n, "edges": [list(e) for e in self.edges]}

    @classmethod
    def from_json(cls, d: dict) -> HardwareGraph:
        return cls(d.get("family", "arbitrary"), int(d.get("L", 0)), int(d["n"]), tuple(tuple(e) for e in d["edges"]))

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[Sequence[int]]) -> HardwareGraph:
        return cls("arbitrary", 0, n, tuple(tuple(e) for e in edges))


def chimera(L: int) -> HardwareGraph:
    if L < 1:
        raise DomainError("Chimera size must be at least 1")

    def q(r, c, u, k):
        return ((r * L + c) * 2 + u) * 4 + k

    edges = []
    for r in range(L):
        for c in range(L):
            for a in range(4):
                for b in range(4):
                    edges.append((q(r, c, 0, a), q(r, c, 1, b)))
            for k in range(4):
                if r + 1 < L:
                    edges.append((q(r, c, 0, k), q(r + 1, c, 0, k)))
                if c + 1 < L:
                    edges.append((q(r, c, 1, k), q(r, c + 1, 1, k)))
    return HardwareGraph("chimera", L, 8 * L * L, tuple(edges))


def _pegasus_fabric(L: int):
    """Membership test for qubits kept after boundary trimming."""
    off_v, off_h = PEGASUS_OFFSETS
    start = (min(off_h), min(off_v))
    end = (12 - max(off_h), 12 - max(off_v))

    def keep(u, w, k, z):
        if w == 0 and k < start[u]:
            return False
        if w == L - 1 and k >= 12 - end[u]:
            return False
        return True

    return keep


def pegasus_coordinates(L: int) -> list[tuple[int, int, int, int]]:
    """Retained ``(u, w, k, z)`` coordinates in linear-index order."""
    if L < 2:
        raise DomainError("Pegasus size must be at least 2")
    keep = _pegasus_fabric(L)
    return [
        (u, w, k, z)
        for u in (0, 1)
        for w in range(L)
        for k in range(12)
        for z in range(L - 1)
        if keep(u, w, k, z)
    ]


def pegasus(L: int) -> HardwareGraph:
    coords = pegasus_coordinates(L)
    index = {c: i for i, c in enumerate(coords)}
    off_v, off_h = PEGASUS_OFFSETS

    edges = []

    def link(a, b):
        if a in index and b in index:
            edges.append((index[a], index[b]))

    for u, w, k, z in coords:
        link((u, w, k, z), (u, w, k, z + 1))
        if k % 2 == 0:
            link((u, w, k, z), (u, w, k + 1, z))
        if u == 0:
            # a vertical qubit crosses horizontal qubits of every minor offset
            for kh in range(12):
                wh = z + (1 if kh < off_v[k] else 0)
                zh = w - (1 if k < off_h[kh] else 0)
                if 0 <= wh < L and 0 <= zh < L - 1:
                    link((u, w, k, z), (1, wh, kh, zh))
    return HardwareGraph("pegasus", L, len(coords), tuple(edges))


def edge_distance(g: HardwareGraph | nx.Graph, a: int, b: int) -> int | None:
    """Fewest edges between ``a`` and ``b``; ``None`` when unreachable."""
    G = g.to_networkx() if isinstance(g, HardwareGraph) else g
    if a not in G or b not in G:
        raise DomainError(f"vertices {a}, {b} not both in graph")
    try:
        return nx.shortest_path_length(G, a, b)
    except nx.NetworkXNoPath:
        return None


def interaction_graph(p: EncodedProblem | IsingModel) -> HardwareGraph:
    """Graph on qubits with an edge for each nonzero coupler."""
    model = p.model if isinstance(p, EncodedProblem) else p
    return HardwareGraph.from_edges(model.n_qubits, model.couplers)
