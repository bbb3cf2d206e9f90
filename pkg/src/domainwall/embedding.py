"""Heuristic minor embedding and the minimum-embeddable-size search.

``find_embedding`` grows chains in the style of Cai, Macready and Roy:
each source vertex is placed in turn by picking the target qubit that
minimises the summed node-weighted shortest-path cost to the chains of its
already placed neighbours, then taking the union of those paths.  Qubit
weights grow geometrically with the number of chains already using them,
so the first passes may overfill qubits and later passes repair the
overlaps.  Once no qubit is shared, a few refinement passes re-place each
vertex with sharing forbidden and keep shorter chains.
"""

from __future__ import annotations

import functools
import logging
from dataclasses import asdict, dataclass, field

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import dijkstra

from .encoding import EncodedProblem
from .exceptions import DomainError
from .hardware import HardwareGraph, chimera, interaction_graph, pegasus
from .ising import IsingModel
from .rng import derive_seed

__all__ = [
    "EmbedParams",
    "Embedding",
    "InvalidEmbeddingError",
    "SizeSearch",
    "find_embedding",
    "validate",
    "embedding_ratio",
    "min_embeddable_size",
    "target_graph",
    "DEFAULT_CEILING",
]

log = logging.getLogger(__name__)

DEFAULT_CEILING = {"chimera": 16, "pegasus": 16}
_FAMILY_MIN = {"chimera": 1, "pegasus": 2}
SPLIT = 0.5
_BASE = 16.0
_BASE_MAX = 1e6
_PATIENCE = 2
# a try whose overfill is still above this many per source vertex after
# _HOPELESS_AFTER rounds has, in practice, never been repaired
_HOPELESS = 0.5
_HOPELESS_AFTER = 3


class InvalidEmbeddingError(DomainError):
    pass


@dataclass(frozen=True)
class EmbedParams:
    """Search settings.

    Attributes:
        max_tries: Independent randomised attempts before giving up.
        seed: Base seed; try ``t`` uses a seed derived from ``(seed, t)``.
        rounds: Placement passes per try while repairing overlaps.
        refine_rounds: Passes spent shortening chains once valid.
    """

    max_tries: int = 10
    seed: int = 0
    rounds: int = 40
    refine_rounds: int = 2

    def __post_init__(self):
        if self.max_tries < 1:
            raise DomainError("max_tries must be at least 1")
        if self.rounds < 1:
            raise DomainError("rounds must be at least 1")

    def to_json(self) -> dict:
        return asdict(self)


@dataclass
class Embedding:
    chains: dict[int, tuple[int, ...]]
    source: HardwareGraph
    target: HardwareGraph
    params: EmbedParams | None = None
    try_index: int | None = None

    @property
    def physical_qubits(self) -> int:
        return sum(len(c) for c in self.chains.values())

    def validate(self) -> tuple[bool, list[str]]:
        return validate(self)

    def ratio(self) -> float:
        return embedding_ratio(self)

    def to_json(self) -> dict:
        return {
            "chains": {str(v): list(c) for v, c in sorted(self.chains.items())},
            "ratio": embedding_ratio(self),
            "params": self.params.to_json() if self.params else {},
        }


def _as_graph(g: HardwareGraph | IsingModel | EncodedProblem) -> HardwareGraph:
    if isinstance(g, HardwareGraph):
        return g
    return interaction_graph(g)


def validate(e: Embedding) -> tuple[bool, list[str]]:
    """Check disjointness, chain connectivity and edge coverage.

    Returns:
        ``(ok, violations)`` where ``violations`` lists every problem found.
    """
    src, tgt = e.source, e.target
    problems = []
    owner: dict[int, int] = {}
    for v in range(src.n):
        chain = e.chains.get(v, ())
        if not chain:
            problems.append(f"empty chain for vertex {v}")
            continue
        for q in chain:
            if not 0 <= q < tgt.n:
                problems.append(f"vertex {v}: qubit {q} not in target")
            elif q in owner and owner[q] != v:
                problems.append(f"overlapping chains {owner[q]} and {v} at qubit {q}")
            else:
                owner[q] = v
        members = set(chain)
        seen = {chain[0]}
        stack = [chain[0]]
        while stack:
            x = stack.pop()
            if not 0 <= x < tgt.n:
                continue
            for y in tgt.adjacency[x]:
                if y in members and y not in seen:
                    seen.add(y)
                    stack.append(y)
        if seen != members:
            problems.append(f"disconnected chain for vertex {v}")
    extra = set(e.chains) - set(range(src.n))
    if extra:
        problems.append(f"chains for unknown vertices {sorted(extra)}")
    for a, b in src.edges:
        ca, cb = e.chains.get(a, ()), set(e.chains.get(b, ()))
        if not any(y in cb for x in ca if 0 <= x < tgt.n for y in tgt.adjacency[x]):
            problems.append(f"missing edge ({a}, {b})")
    return (not problems, problems)


def embedding_ratio(e: Embedding) -> float:
    """Physical qubits used per logical vertex."""
    ok, problems = validate(e)
    if not ok:
        raise InvalidEmbeddingError("; ".join(problems[:5]))
    return e.physical_qubits / e.source.n if e.source.n else 1.0


class _ChainGrower:
    def __init__(self, source: HardwareGraph, target: HardwareGraph, rng: np.random.Generator):
        self.src = source
        self.rng = rng
        self.nt = target.n
        adj = target.adjacency
        indptr = np.zeros(self.nt + 1, dtype=np.int64)
        indptr[1:] = np.cumsum([len(a) for a in adj])
        self.indptr = indptr
        self.indices = np.fromiter((y for a in adj for y in a), dtype=np.int64, count=int(indptr[-1]))
        self.tadj = adj
        self.usage = np.zeros(self.nt, dtype=np.int64)
        self.chains: list[np.ndarray | None] = [None] * source.n

    def weights(self, base: float) -> np.ndarray:
        return np.power(base, np.minimum(self.usage, 30).astype(np.float64))

    def place(self, v: int, base: float) -> tuple[np.ndarray, dict[int, list[int]]]:
        """New chain for ``v`` plus the qubits each neighbour's chain should absorb."""
        w = self.weights(base)
        placed = [u for u in self.src.adjacency[v] if self.chains[u] is not None]
        if not placed:
            best = np.flatnonzero(w == w.min())
            return np.array([self.rng.choice(best)]), {}
        # sharing a qubit with a neighbour never helps, so those qubits cost extra
        nbr = np.zeros(self.nt, dtype=bool)
        for u in placed:
            nbr[self.chains[u]] = True
        w = np.where(nbr, w * base * base, w)
        graph = csr_matrix((w[self.indices], self.indices, self.indptr), shape=(self.nt, self.nt))
        total = w.copy()
        preds = []
        for u in placed:
            cu = self.chains[u]
            dist, pred, _ = dijkstra(graph, indices=cu, min_only=True, return_predecessors=True)
            cost = dist - w
            cost[cu] = 0.0
            total += cost
            preds.append((u, cu, pred))
        lo = total.min()
        best = np.flatnonzero(total <= lo * (1 + 1e-12))
        root = int(self.rng.choice(best))
        chain = {root}
        grow: dict[int, list[int]] = {}
        for u, cu, pred in preds:
            members = set(cu.tolist())
            path = []
            x = int(pred[root]) if root not in members else -1
            while x >= 0 and x not in members:
                path.append(x)
                x = int(pred[x])
            # the half of the path nearer the neighbour extends the neighbour
            keep = len(path) - int(len(path) * SPLIT)
            chain.update(q for q in path[:keep] if q not in chain)
            rest = [q for q in path[keep:] if q not in chain]
            if rest:
                grow[u] = rest
        return np.fromiter(sorted(chain), dtype=np.int64), grow

    def replace(self, v: int, base: float) -> None:
        old = self.chains[v]
        if old is not None:
            self.usage[old] -= 1
            self.chains[v] = None
            for u in self.src.adjacency[v]:
                self.trim(u)
        new, grow = self.place(v, base)
        self.chains[v] = new
        self.usage[new] += 1
        for u, qs in grow.items():
            extra = np.setdiff1d(np.array(qs, dtype=np.int64), self.chains[u])
            self.chains[u] = np.union1d(self.chains[u], extra)
            self.usage[extra] += 1
        self.trim(v)

    def trim(self, u: int) -> None:
        """Drop leaf qubits of ``u``'s chain that no neighbour contact depends on."""
        cur = self.chains[u]
        if cur is None or len(cur) <= 1:
            return
        nbrs = [self.chains[w] for w in self.src.adjacency[u] if self.chains[w] is not None]
        contact = np.zeros((self.nt, len(nbrs)), dtype=bool)
        for i, c in enumerate(nbrs):
            contact[c, i] = True
        lens = self.indptr[cur + 1] - self.indptr[cur]
        seg = np.concatenate([self.indices[self.indptr[q] : self.indptr[q + 1]] for q in cur])
        offsets = np.concatenate(([0], np.cumsum(lens)[:-1]))
        touches = np.logical_or.reduceat(contact[seg], offsets, axis=0)
        count = touches.sum(axis=0)
        chain = set(cur.tolist())
        tadj = self.tadj
        changed = True
        while changed and len(chain) > 1:
            changed = False
            for a, q in enumerate(cur.tolist()):
                if len(chain) == 1:
                    break
                if q not in chain:
                    continue
                t = touches[a]
                if np.all(count[t] > 1) and sum(y in chain for y in tadj[q]) <= 1:
                    chain.discard(q)
                    count -= t
                    changed = True
        if len(chain) < len(cur):
            new = np.fromiter(sorted(chain), dtype=np.int64)
            self.usage[np.setdiff1d(cur, new)] -= 1
            self.chains[u] = new

    def snapshot(self):
        return list(self.chains), self.usage.copy()

    def restore(self, snap) -> None:
        chains, usage = snap
        self.chains = list(chains)
        self.usage = usage.copy()

    def size(self) -> int:
        return sum(len(c) for c in self.chains if c is not None)

    def overfill(self) -> int:
        return int(np.maximum(self.usage - 1, 0).sum())

    def initial_order(self) -> list[int]:
        """Breadth-first order from random roots so neighbours land near each other."""
        n = self.src.n
        seen = np.zeros(n, dtype=bool)
        order = []
        for root in self.rng.permutation(n):
            if seen[root]:
                continue
            seen[root] = True
            queue = [int(root)]
            while queue:
                x = queue.pop(0)
                order.append(x)
                nbrs = [y for y in self.src.adjacency[x] if not seen[y]]
                for y in self.rng.permutation(nbrs) if nbrs else ():
                    seen[y] = True
                    queue.append(int(y))
        return order


def chimera_clique_chains(L: int) -> list[tuple[int, ...]]:
    """Chains of the standard ``K_{4L}`` minor of ``chimera(L)``, each of length ``L + 1``.

    Slot ``(c, k)`` runs up column ``c`` on vertical qubits ``k`` (rows
    ``0..c``) and along row ``c`` on horizontal qubits ``k`` (columns
    ``c..L-1``); any two slots meet in the cell at row ``min(c)``.
    """
    def q(r, c, u, k):
        return ((r * L + c) * 2 + u) * 4 + k

    return [
        tuple(sorted([q(r, c, 0, k) for r in range(c + 1)] + [q(c, col, 1, k) for col in range(c, L)]))
        for c in range(L)
        for k in range(4)
    ]


def _refine(g: _ChainGrower, rounds: int) -> None:
    """Re-place each vertex with sharing forbidden, keeping only non-growing moves."""
    for v in range(g.src.n):
        g.trim(v)
    for _ in range(rounds):
        before = g.size()
        for v in g.rng.permutation(g.src.n):
            snap = g.snapshot()
            size = g.size()
            g.replace(int(v), _BASE_MAX)
            if g.overfill() or g.size() > size:
                g.restore(snap)
        if g.size() >= before:
            break


def _seeded_try(source: HardwareGraph, target: HardwareGraph, params: EmbedParams, rng: np.random.Generator):
    slots = chimera_clique_chains(target.L)
    g = _ChainGrower(source, target, rng)
    for v, slot in zip(rng.permutation(source.n), rng.permutation(len(slots))):
        chain = np.array(slots[slot], dtype=np.int64)
        g.chains[int(v)] = chain
        g.usage[chain] += 1
    _refine(g, params.refine_rounds)
    return {v: tuple(int(q) for q in c) for v, c in enumerate(g.chains)}


def _one_try(source: HardwareGraph, target: HardwareGraph, params: EmbedParams, rng: np.random.Generator):
    g = _ChainGrower(source, target, rng)
    for v in g.initial_order():
        g.replace(v, _BASE)
    best, stale = g.overfill(), 0
    for r in range(1, params.rounds + 1):
        if best == 0:
            break
        for v in rng.permutation(source.n):
            snap, before = g.snapshot(), g.overfill()
            g.replace(int(v), _BASE)
            if g.overfill() > before:
                g.restore(snap)
        fill = g.overfill()
        if fill < best:
            best, stale = fill, 0
        else:
            stale += 1
            if stale >= _PATIENCE:
                break
        if r >= _HOPELESS_AFTER and fill > _HOPELESS * source.n:
            break
    if g.overfill():
        return None
    _refine(g, params.refine_rounds)
    return {v: tuple(int(q) for q in c) for v, c in enumerate(g.chains)}


def find_embedding(
    source: HardwareGraph | IsingModel | EncodedProblem,
    target: HardwareGraph,
    params: EmbedParams | None = None,
) -> Embedding | None:
    """Embed ``source`` into ``target``; ``None`` when every try fails.

    Deterministic for fixed ``(source, target, params)``: try ``t`` is seeded
    from ``(params.seed, t)`` and the lowest successful try wins.
    """
    params = params or EmbedParams()
    src = _as_graph(source)
    if src.n == 0 or target.n == 0:
        raise DomainError("source and target graphs must be nonempty")
    if src.n <= target.n and all(target.has_edge(a, b) for a, b in src.edges):
        return Embedding({v: (v,) for v in range(src.n)}, src, target, params, None)
    if src.n > target.n or len(src.edges) > len(target.edges):
        return None
    seeded = target.family == "chimera" and src.n <= 4 * target.L
    for t in range(params.max_tries):
        rng = np.random.default_rng(derive_seed(params.seed, t))
        if seeded and t == 0:
            chains = _seeded_try(src, target, params, rng)
        else:
            chains = _one_try(src, target, params, rng)
        if chains is None:
            continue
        e = Embedding(chains, src, target, params, t)
        ok, problems = validate(e)
        if ok:
            return e
        log.warning("discarding invalid embedding from try %d: %s", t, problems[:3])
    return None


@functools.lru_cache(maxsize=64)
def target_graph(family: str, L: int) -> HardwareGraph:
    family = family.lower()
    if family == "chimera":
        return chimera(L)
    if family == "pegasus":
        return pegasus(L)
    raise DomainError(f"unknown hardware family {family!r}")


@dataclass
class SizeSearch:
    """Outcome of :func:`min_embeddable_size`.

    ``L`` is ``None`` when the ceiling was reached without success.
    ``attempts`` maps each size tried to whether embedding succeeded.
    """

    family: str
    L: int | None
    embedding: Embedding | None
    params: EmbedParams
    attempts: dict[int, bool] = field(default_factory=dict)


def min_embeddable_size(
    source: HardwareGraph | IsingModel | EncodedProblem,
    family: str,
    params: EmbedParams | None = None,
    start: int | None = None,
    ceiling: int | None = None,
) -> SizeSearch:
    """Smallest hardware size at which ``find_embedding`` succeeds.

    Starting from ``start`` (a warm start such as the previous problem's
    result), the size grows until success, or, if the first size already
    works, shrinks until failure.
    """
    params = params or EmbedParams()
    family = family.lower()
    if family not in _FAMILY_MIN:
        raise DomainError(f"unknown hardware family {family!r}")
    src = _as_graph(source)
    lo = _FAMILY_MIN[family]
    ceiling = DEFAULT_CEILING[family] if ceiling is None else ceiling
    L = max(lo, start or lo)
    if L > ceiling:
        L = ceiling
    attempts: dict[int, bool] = {}

    def attempt(size):
        e = find_embedding(src, target_graph(family, size), params)
        attempts[size] = e is not None
        return e

    e = attempt(L)
    if e is None:
        while e is None:
            L += 1
            if L > ceiling:
                return SizeSearch(family, None, None, params, attempts)
            e = attempt(L)
        return SizeSearch(family, L, e, params, attempts)
    while L > lo:
        smaller = attempt(L - 1)
        if smaller is None:
            break
        L, e = L - 1, smaller
    return SizeSearch(family, L, e, params, attempts)
