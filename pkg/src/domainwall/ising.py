"""Classical Ising models, energy evaluation and exhaustive ground-state search.

Spin/bit convention used throughout the package: bit ``b = (1 - z) / 2``, so
bit 1 is spin -1.  Basis states are enumerated as integers with qubit 0 as the
least significant bit.  Bitstrings are written qubit 0 first, so ``"1100"``
means qubits 0 and 1 carry bit 1.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from types import MappingProxyType
from typing import Iterable, Mapping, Sequence

import numpy as np

from .exceptions import DimensionError, MappingError, SizeLimitError

__all__ = [
    "IsingModel",
    "IsingBuilder",
    "GroundSet",
    "energy",
    "energies",
    "brute_force",
    "merge",
    "bits_to_spins",
    "spins_to_bits",
    "index_to_spins",
    "ATOL",
    "MAX_BRUTE_FORCE_QUBITS",
]

#: Absolute tolerance for energy comparisons.
ATOL = 1e-9

#: Hard cap on exhaustive enumeration.
MAX_BRUTE_FORCE_QUBITS = 26

_CHUNK_BITS = 18


def bits_to_spins(bits: str | Sequence[int]) -> np.ndarray:
    """Convert a bitstring (qubit 0 first) or bit sequence to ±1 spins."""
    b = np.array([int(c) for c in bits], dtype=np.int8)
    if np.any((b != 0) & (b != 1)):
        raise ValueError(f"bits must be 0/1, got {bits!r}")
    return (1 - 2 * b).astype(np.int8)


def spins_to_bits(spins: Sequence[int]) -> str:
    """Inverse of :func:`bits_to_spins`, returning a bitstring."""
    return "".join("1" if s < 0 else "0" for s in spins)


def index_to_spins(index: int, n: int) -> np.ndarray:
    """Spins of basis state ``index`` (qubit 0 is the least significant bit)."""
    bits = (index >> np.arange(n)) & 1
    return (1 - 2 * bits).astype(np.int8)


@dataclass(frozen=True)
class IsingModel:
    """An immutable two-body Ising model ``offset + sum h_i z_i + sum J_ij z_i z_j``.

    Args:
        n_qubits: Number of spins.
        h: Mapping from qubit index to linear field.
        J: Mapping from ordered pair ``(i, j)`` with ``i < j`` to coupler strength.
        offset: Constant energy term.
    """

    n_qubits: int
    h: Mapping[int, float] = field(default_factory=dict)
    J: Mapping[tuple[int, int], float] = field(default_factory=dict)
    offset: float = 0.0

    def __post_init__(self):
        if self.n_qubits < 0:
            raise ValueError("n_qubits must be non-negative")
        h = {int(i): float(v) for i, v in self.h.items()}
        J = {(int(i), int(j)): float(v) for (i, j), v in self.J.items()}
        for i in h:
            if not 0 <= i < self.n_qubits:
                raise DimensionError(f"field index {i} out of range for {self.n_qubits} qubits")
        for i, j in J:
            if not i < j:
                raise DimensionError(f"coupler key {(i, j)} must satisfy i < j")
            if i < 0 or j >= self.n_qubits:
                raise DimensionError(f"coupler {(i, j)} out of range for {self.n_qubits} qubits")
        object.__setattr__(self, "h", MappingProxyType(dict(sorted(h.items()))))
        object.__setattr__(self, "J", MappingProxyType(dict(sorted(J.items()))))
        object.__setattr__(self, "offset", float(self.offset))

    @classmethod
    def empty(cls, n_qubits: int = 0) -> IsingModel:
        return cls(n_qubits)

    @property
    def couplers(self) -> list[tuple[int, int]]:
        """Coupler keys with a nonzero coefficient."""
        return [k for k, v in self.J.items() if v != 0.0]

    def field_vector(self) -> np.ndarray:
        h = np.zeros(self.n_qubits)
        for i, v in self.h.items():
            h[i] = v
        return h

    def coupler_matrix(self) -> np.ndarray:
        """Strictly upper-triangular dense coupler matrix."""
        J = np.zeros((self.n_qubits, self.n_qubits))
        for (i, j), v in self.J.items():
            J[i, j] = v
        return J

    def pruned(self) -> IsingModel:
        """Copy with exactly-zero fields and couplers removed."""
        return IsingModel(
            self.n_qubits,
            {i: v for i, v in self.h.items() if v != 0.0},
            {k: v for k, v in self.J.items() if v != 0.0},
            self.offset,
        )

    def flipped(self) -> IsingModel:
        """Model with all fields negated (the image under a global spin flip)."""
        return IsingModel(self.n_qubits, {i: -v for i, v in self.h.items()}, self.J, self.offset)

    def energy(self, spins: Sequence[int]) -> float:
        return energy(self, spins)


class IsingBuilder:
    """Mutable accumulator that produces :class:`IsingModel` snapshots.

    Adding a term to an existing key sums the coefficients.
    """

    def __init__(self, n_qubits: int = 0):
        self.n_qubits = n_qubits
        self.h: dict[int, float] = {}
        self.J: dict[tuple[int, int], float] = {}
        self.offset = 0.0

    @classmethod
    def from_model(cls, model: IsingModel) -> IsingBuilder:
        b = cls(model.n_qubits)
        b.h.update(model.h)
        b.J.update(model.J)
        b.offset = model.offset
        return b

    def add_qubits(self, count: int) -> range:
        """Append ``count`` fresh qubits and return their index range."""
        lo = self.n_qubits
        self.n_qubits += count
        return range(lo, self.n_qubits)

    def add_field(self, i: int, value: float) -> None:
        if not 0 <= i < self.n_qubits:
            raise DimensionError(f"qubit {i} out of range")
        if value:
            self.h[i] = self.h.get(i, 0.0) + float(value)

    def add_coupler(self, i: int, j: int, value: float) -> None:
        if i == j:
            # z_i * z_i == 1
            self.offset += float(value)
            return
        if i > j:
            i, j = j, i
        if i < 0 or j >= self.n_qubits:
            raise DimensionError(f"coupler {(i, j)} out of range")
        if value:
            self.J[i, j] = self.J.get((i, j), 0.0) + float(value)

    def add_offset(self, value: float) -> None:
        self.offset += float(value)

    def build(self, prune: bool = True) -> IsingModel:
        h, J = self.h, self.J
        if prune:
            h = {i: v for i, v in h.items() if v != 0.0}
            J = {k: v for k, v in J.items() if v != 0.0}
        return IsingModel(self.n_qubits, h, J, self.offset)


def energy(model: IsingModel, spins: Sequence[int]) -> float:
    """Energy of a single spin assignment.

    Raises:
        DimensionError: If ``len(spins) != model.n_qubits``.
    """
    if len(spins) != model.n_qubits:
        raise DimensionError(f"expected {model.n_qubits} spins, got {len(spins)}")
    z = [int(s) for s in spins]
    e = model.offset
    for i, v in model.h.items():
        e += v * z[i]
    for (i, j), v in model.J.items():
        e += v * z[i] * z[j]
    return e


def energies(model: IsingModel, spins: np.ndarray) -> np.ndarray:
    """Vectorised energies for a ``(k, n_qubits)`` array of spin rows."""
    z = np.asarray(spins, dtype=np.float64)
    if z.ndim != 2 or z.shape[1] != model.n_qubits:
        raise DimensionError(f"expected shape (k, {model.n_qubits}), got {z.shape}")
    e = np.full(z.shape[0], model.offset)
    if model.h:
        e += z @ model.field_vector()
    n = model.n_qubits
    if len(model.J) > n * n // 4:
        e += np.einsum("ki,ki->k", z @ model.coupler_matrix(), z)
    else:
        for (i, j), v in model.J.items():
            e += v * z[:, i] * z[:, j]
    return e


def _index_spins(start: int, stop: int, n: int) -> np.ndarray:
    idx = np.arange(start, stop, dtype=np.int64)
    bits = (idx[:, None] >> np.arange(n, dtype=np.int64)) & 1
    return (1 - 2 * bits).astype(np.int8)


@dataclass
class GroundSet:
    """Result of an exhaustive search.

    Attributes:
        energy: Ground-state energy.
        states: All minimising spin assignments, in increasing basis-index order.
        spectrum_gap: First excited level minus ground level; ``inf`` when every
            state is a ground state.
    """

    energy: float
    states: list[np.ndarray]
    spectrum_gap: float

    @property
    def bitstrings(self) -> list[str]:
        return [spins_to_bits(s) for s in self.states]

    @property
    def indices(self) -> list[int]:
        return [int(((1 - s.astype(np.int64)) // 2) @ (1 << np.arange(len(s)))) for s in self.states]


def brute_force(model: IsingModel, max_qubits: int = MAX_BRUTE_FORCE_QUBITS, atol: float = ATOL) -> GroundSet:
    """Enumerate all ``2**n`` states and return the exact ground manifold.

    Args:
        model: Model to solve.
        max_qubits: Size cap; exceeding it raises :class:`SizeLimitError`.
        atol: Energies within ``atol`` of the minimum count as degenerate.
    """
    n = model.n_qubits
    if n > max_qubits:
        raise SizeLimitError(f"{n} qubits exceeds the brute-force cap of {max_qubits}")
    total = 1 << n
    chunk = 1 << min(n, _CHUNK_BITS)

    best = math.inf
    best_idx: list[np.ndarray] = []
    # lowest energy seen that is not degenerate with `best`
    excited = math.inf
    for start in range(0, total, chunk):
        stop = min(start + chunk, total)
        e = energies(model, _index_spins(start, stop, n))
        cmin = float(e.min())
        if cmin < best - atol:
            # previous ground level becomes an excited candidate
            excited = min(excited, best)
            best = cmin
            best_idx = []
        if cmin <= best + atol:
            low = e <= best + atol
            best_idx.append(np.nonzero(low)[0] + start)
            rest = e[~low]
        else:
            rest = e
        if rest.size:
            excited = min(excited, float(rest.min()))
        best = min(best, cmin)

    idx = np.concatenate(best_idx) if best_idx else np.array([], dtype=np.int64)
    states = [index_to_spins(int(i), n) for i in idx]
    ground = min(energy(model, s) for s in states)
    # states accepted under an earlier, slightly higher minimum
    states = [s for s in states if energy(model, s) <= ground + atol]
    gap = excited - ground if math.isfinite(excited) else math.inf
    return GroundSet(ground, states, max(gap, 0.0))


def merge(a: IsingModel, b: IsingModel, qubit_mapping: Sequence[int] | Mapping[int, int] | None = None) -> IsingModel:
    """Sum two models, placing ``b``'s qubit ``q`` at ``qubit_mapping[q]``.

    ``a`` keeps its indices.  By default ``b`` is appended after ``a``.  The
    result spans every index used by either operand.

    Raises:
        MappingError: If the mapping is not injective, is negative, or does not
            cover every qubit of ``b``.
    """
    if qubit_mapping is None:
        qubit_mapping = range(a.n_qubits, a.n_qubits + b.n_qubits)
    if isinstance(qubit_mapping, Mapping):
        mapping = dict(qubit_mapping)
    else:
        mapping = dict(enumerate(qubit_mapping))
    missing = set(range(b.n_qubits)) - set(mapping)
    if missing:
        raise MappingError(f"mapping does not cover qubits {sorted(missing)}")
    targets = [mapping[q] for q in range(b.n_qubits)]
    if len(set(targets)) != len(targets):
        raise MappingError("qubit mapping is not injective")
    if any(t < 0 for t in targets):
        raise MappingError("qubit mapping has negative targets")

    n = max([a.n_qubits] + [t + 1 for t in targets])
    out = IsingBuilder(n)
    for i, v in a.h.items():
        out.add_field(i, v)
    for (i, j), v in a.J.items():
        out.add_coupler(i, j, v)
    for i, v in b.h.items():
        out.add_field(mapping[i], v)
    for (i, j), v in b.J.items():
        out.add_coupler(mapping[i], mapping[j], v)
    out.add_offset(a.offset + b.offset)
    return out.build(prune=False)


def restrict(spins: Sequence[int], qubits: Iterable[int]) -> np.ndarray:
    """Sub-assignment of ``spins`` on ``qubits`` (in the given order)."""
    s = np.asarray(spins)
    return s[list(qubits)]
