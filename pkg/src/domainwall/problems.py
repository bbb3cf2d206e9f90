"""Synthetic problem families, their encodings and exhaustive classical oracles.

Three families are supported:

* unstructured: arbitrary dense value matrices between pairs of variables;
* max graph colouring: one ``Z_N`` colour per vertex, each monochromatic
  edge costs ``w``;
* scheduling: one start time per event, each overlapping conflicting pair
  costs ``w``.

Assignments are tuples of value indices, one per logical variable.  For
scheduling the value index is the offset of the start time from the event's
earliest start.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Mapping, Sequence, Union

import numpy as np

from .encoding import EncodedProblem, Encoding, VariableHandle
from .exceptions import DomainError, SizeLimitError
from .rng import SplitMix64

__all__ = [
    "ColoringInstance",
    "Event",
    "SchedulingInstance",
    "UnstructuredInstance",
    "Optimum",
    "gen_erdos_renyi",
    "gen_coloring",
    "gen_scheduling",
    "gen_unstructured",
    "overlap_matrix",
    "build_unstructured",
    "build_coloring",
    "build_scheduling",
    "build_problem",
    "domain_sizes",
    "objective",
    "classical_optimum",
    "decode_assignment",
    "critical_ratio",
    "MAX_ASSIGNMENTS",
]

MAX_ASSIGNMENTS = 10**7


def _normalise_pairs(pairs) -> tuple[tuple[int, int], ...]:
    out = set()
    for i, j in pairs:
        i, j = int(i), int(j)
        if i == j:
            raise DomainError(f"self pair ({i}, {j}) is not allowed")
        out.add((min(i, j), max(i, j)))
    return tuple(sorted(out))


@dataclass(frozen=True)
class ColoringInstance:
    n_vertices: int
    edges: tuple[tuple[int, int], ...]
    n_colors: int

    def __post_init__(self):
        edges = _normalise_pairs(self.edges)
        if edges and edges[-1][1] >= self.n_vertices:
            raise DomainError("edge endpoint out of range")
        object.__setattr__(self, "edges", edges)

    def edge_matrix(self) -> np.ndarray:
        e = np.zeros((self.n_vertices, self.n_vertices), dtype=bool)
        for i, j in self.edges:
            e[i, j] = True
        return e

    def with_edge(self, i: int, j: int) -> ColoringInstance:
        return ColoringInstance(self.n_vertices, self.edges + ((i, j),), self.n_colors)


@dataclass(frozen=True)
class Event:
    t_min: int
    t_max: int
    duration: int

    def __post_init__(self):
        if self.t_max < self.t_min:
            raise DomainError(f"t_max {self.t_max} < t_min {self.t_min}")
        if self.duration < 1:
            raise DomainError("durations must be at least one time unit")

    @property
    def dur(self) -> int:
        """Width of the start-time window (number of values minus one)."""
        return self.t_max - self.t_min


@dataclass(frozen=True)
class SchedulingInstance:
    events: tuple[Event, ...]
    conflicts: tuple[tuple[int, int], ...]
    t_max_global: int | None = None

    def __post_init__(self):
        object.__setattr__(self, "events", tuple(self.events))
        conflicts = _normalise_pairs(self.conflicts)
        if conflicts and conflicts[-1][1] >= len(self.events):
            raise DomainError("conflict index out of range")
        object.__setattr__(self, "conflicts", conflicts)


@dataclass(frozen=True)
class UnstructuredInstance:
    sizes: tuple[int, ...]
    matrices: Mapping[tuple[int, int], np.ndarray] = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "sizes", tuple(int(s) for s in self.sizes))
        mats = {}
        for (i, j), A in self.matrices.items():
            A = np.asarray(A, dtype=np.float64)
            if i == j:
                raise DomainError("matrices couple distinct variables")
            if i > j:
                i, j, A = j, i, A.T
            if A.shape != (self.sizes[i], self.sizes[j]):
                raise DomainError(f"matrix for {(i, j)} has shape {A.shape}")
            mats[i, j] = A
        object.__setattr__(self, "matrices", dict(sorted(mats.items())))


Instance = Union[ColoringInstance, SchedulingInstance, UnstructuredInstance]


# -- generators ----------------------------------------------------------------


def gen_erdos_renyi(n_vertices: int, p: float, seed: int) -> tuple[tuple[int, int], ...]:
    """Edges of G(n, p); pairs ``i < j`` are visited lexicographically."""
    if not 0.0 <= p <= 1.0:
        raise DomainError(f"edge probability {p} outside [0, 1]")
    rng = SplitMix64(seed)
    return tuple((i, j) for i in range(n_vertices) for j in range(i + 1, n_vertices) if rng.random() < p)


def gen_coloring(n_vertices: int, n_colors: int, p: float, seed: int) -> ColoringInstance:
    return ColoringInstance(n_vertices, gen_erdos_renyi(n_vertices, p, seed), n_colors)


def gen_scheduling(n_events: int, seed: int, conflict_p: float = 0.75, max_duration: int = 5) -> SchedulingInstance:
    """Random scheduling instance with a time horizon of twice the event count.

    Draw order: one conflict coin per pair (lexicographic), then per event the
    earliest start, latest start and duration.
    """
    if n_events < 2:
        raise DomainError("need at least two events")
    rng = SplitMix64(seed)
    horizon = 2 * n_events
    conflicts = [(i, j) for i in range(n_events) for j in range(i + 1, n_events) if rng.random() < conflict_p]
    events = []
    for _ in range(n_events):
        early = rng.randint(0, horizon - 2)
        late = rng.randint(early + 1, horizon)
        events.append(Event(early, late, rng.randint(1, max_duration)))
    return SchedulingInstance(tuple(events), tuple(conflicts), horizon)


def gen_unstructured(sizes: Sequence[int], seed: int, scale: float = 1.0) -> UnstructuredInstance:
    """Dense uniform ``[-scale, scale]`` matrices between every pair of variables."""
    rng = SplitMix64(seed)
    mats = {}
    for i, j in itertools.combinations(range(len(sizes)), 2):
        mats[i, j] = np.array([[rng.uniform(-scale, scale) for _ in range(sizes[j])] for _ in range(sizes[i])])
    return UnstructuredInstance(tuple(sizes), mats)


# -- encodings -----------------------------------------------------------------


def _overlaps(s1: int, d1: int, s2: int, d2: int) -> bool:
    return s1 < s2 + d2 and s2 < s1 + d1


def overlap_matrix(inst: SchedulingInstance, i: int, j: int) -> np.ndarray:
    """``R[l, q] = 1`` iff event ``i`` starting at offset ``l`` overlaps event ``j`` at offset ``q``."""
    a, b = inst.events[i], inst.events[j]
    R = np.zeros((a.dur + 1, b.dur + 1))
    for l in range(a.dur + 1):
        for q in range(b.dur + 1):
            R[l, q] = _overlaps(a.t_min + l, a.duration, b.t_min + q, b.duration)
    return R


def _lambdas(loads: Sequence[float], lam: float | None) -> list[float]:
    if lam is not None:
        return [float(lam)] * len(loads)
    return [1.0 + x for x in loads]


def build_unstructured(inst: UnstructuredInstance, kind: str | Encoding, lam: float | None = None) -> EncodedProblem:
    """Cores plus one interaction per stored matrix.

    ``lam=None`` picks the recommended strength for each variable separately.
    """
    if min(inst.sizes, default=2) < 2:
        raise DomainError("every variable needs at least two values")
    loads = [0.0] * len(inst.sizes)
    for (i, j), A in inst.matrices.items():
        s = float(np.abs(A).max())
        loads[i] += s
        loads[j] += s
    p = EncodedProblem()
    vs = [p.add_variable(kind, m, l) for m, l in zip(inst.sizes, _lambdas(loads, lam))]
    for (i, j), A in inst.matrices.items():
        p.add_interaction(vs[i], vs[j], A)
    p.check_penalty_strength()
    return p


def build_coloring(inst: ColoringInstance, kind: str | Encoding, lam: float | None = None, w: float = 1.0) -> EncodedProblem:
    """One ``Z_N`` variable per vertex; ``w`` times the identity on every edge."""
    if inst.n_colors < 2:
        raise DomainError("need at least two colours")
    degree = [0] * inst.n_vertices
    for i, j in inst.edges:
        degree[i] += 1
        degree[j] += 1
    p = EncodedProblem()
    vs = [p.add_variable(kind, inst.n_colors, l) for l in _lambdas([abs(w) * d for d in degree], lam)]
    penalty = w * np.eye(inst.n_colors)
    for i, j in inst.edges:
        p.add_interaction(vs[i], vs[j], penalty)
    p.check_penalty_strength()
    return p


def build_scheduling(inst: SchedulingInstance, kind: str | Encoding, lam: float | None = None, w: float = 1.0) -> EncodedProblem:
    """One variable per event with a start window; ``w`` per realised conflict.

    Events whose window is a single time are not encoded; their conflicts
    become value penalties on the partner (or a constant when both are fixed).
    """
    n = len(inst.events)
    loads = [0.0] * n
    R = {}
    for i, j in inst.conflicts:
        R[i, j] = w * overlap_matrix(inst, i, j)
        s = float(np.abs(R[i, j]).max())
        loads[i] += s
        loads[j] += s
    lams = _lambdas(loads, lam)
    p = EncodedProblem()
    handles: list[VariableHandle | None] = [
        p.add_variable(kind, e.dur + 1, lams[k]) if e.dur >= 1 else None for k, e in enumerate(inst.events)
    ]
    for (i, j), E in R.items():
        vi, vj = handles[i], handles[j]
        if vi is not None and vj is not None:
            p.add_interaction(vi, vj, E)
        elif vi is not None:
            for l, x in enumerate(E[:, 0]):
                p.add_value_penalty(vi, l, x)
        elif vj is not None:
            for q, x in enumerate(E[0, :]):
                p.add_value_penalty(vj, q, x)
        else:
            p.add_constant(E[0, 0])
    p.logical = handles
    p.check_penalty_strength()
    return p


def build_problem(inst: Instance, kind: str | Encoding, lam: float | None = None, w: float = 1.0) -> EncodedProblem:
    if isinstance(inst, ColoringInstance):
        return build_coloring(inst, kind, lam, w)
    if isinstance(inst, SchedulingInstance):
        return build_scheduling(inst, kind, lam, w)
    if isinstance(inst, UnstructuredInstance):
        return build_unstructured(inst, kind, lam)
    raise TypeError(f"unknown instance type {type(inst).__name__}")


# -- classical oracle ----------------------------------------------------------


def domain_sizes(inst: Instance) -> list[int]:
    if isinstance(inst, ColoringInstance):
        return [inst.n_colors] * inst.n_vertices
    if isinstance(inst, SchedulingInstance):
        return [e.dur + 1 for e in inst.events]
    return list(inst.sizes)


def _pair_tables(inst: Instance) -> dict[tuple[int, int], np.ndarray]:
    if isinstance(inst, ColoringInstance):
        eye = np.eye(inst.n_colors)
        return {e: eye for e in inst.edges}
    if isinstance(inst, SchedulingInstance):
        return {(i, j): overlap_matrix(inst, i, j) for i, j in inst.conflicts}
    return dict(inst.matrices)


def objective(inst: Instance, assignment: Sequence[int]) -> float:
    """Monochromatic edges, realised conflicts, or summed matrix energies."""
    return float(sum(T[assignment[i], assignment[j]] for (i, j), T in _pair_tables(inst).items()))


@dataclass
class Optimum:
    value: float
    argmin: list[tuple[int, ...]]


def classical_optimum(inst: Instance, max_assignments: int = MAX_ASSIGNMENTS, atol: float = 1e-9) -> Optimum:
    """Exhaustive minimum of :func:`objective` over all logical assignments."""
    sizes = domain_sizes(inst)
    space = int(np.prod(sizes, dtype=object)) if sizes else 1
    if space > max_assignments:
        raise SizeLimitError(f"{space} assignments exceeds cap {max_assignments}")
    X = np.indices(sizes).reshape(len(sizes), -1).T if sizes else np.zeros((1, 0), dtype=int)
    cost = np.zeros(len(X))
    for (i, j), T in _pair_tables(inst).items():
        cost += T[X[:, i], X[:, j]]
    best = float(cost.min())
    rows = np.nonzero(cost <= best + atol)[0]
    return Optimum(best, sorted(tuple(int(x) for x in X[r]) for r in rows))


def decode_assignment(problem: EncodedProblem, spins: Sequence[int]) -> tuple[int, ...] | None:
    """Logical assignment for ``spins``; fixed (unencoded) variables read 0."""
    handles = problem.logical if problem.logical is not None else problem.variables
    out = []
    for v in handles:
        if v is None:
            out.append(0)
            continue
        x = problem.decode_one(v, spins)
        if x is None:
            return None
        out.append(x)
    return tuple(out)


def critical_ratio(n: int) -> float:
    """Edge-to-vertex ratio where one-hot and domain-wall colourings need equal couplers."""
    if n < 3:
        raise DomainError("critical ratio is defined for n >= 3")
    return (0.5 * n * n - 1.5 * n + 2) / (2 * n - 5)
