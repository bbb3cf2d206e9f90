"""Domain-wall and one-hot encodings of discrete variables into Ising models.

A domain-wall variable over ``Z_m`` is a ferromagnetic chain of ``N = m - 1``
qubits pinned by two virtual end qubits (the one before qubit 0 fixed at
spin -1, the one after qubit ``N-1`` fixed at spin +1).  Its value is the
position of the single domain wall, so value ``k`` is the bit pattern
``1^k 0^(N-k)``.  Virtual qubits are never materialised: every expression
that touches them is resolved into linear terms and constant offsets when it
is expanded.

One-hot variables use ``m`` qubits with exactly one bit set.

Both kinds expose the same indicator ``delta(v, i)`` (1 iff ``v == i`` on
valid states) and arbitrary two-variable interactions are built from
products of indicators, which never exceed two-body terms.
"""

from __future__ import annotations

import enum
import warnings
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .exceptions import AliasingError, DimensionError, DomainError, InfeasibleError
from .ising import IsingBuilder, IsingModel

__all__ = [
    "Encoding",
    "VariableHandle",
    "EncodedProblem",
    "EncodingMetrics",
    "PenaltyStrengthWarning",
    "delta_expansion",
    "decode",
    "is_valid",
    "encoding_metrics",
    "build_k_hot_ensemble",
    "valid_spins",
]


class Encoding(str, enum.Enum):
    DOMAIN_WALL = "dw"
    ONE_HOT = "onehot"
    BINARY = "binary"  # qubit-count metric only

    @classmethod
    def parse(cls, kind: str | Encoding) -> Encoding:
        if isinstance(kind, Encoding):
            return kind
        aliases = {"domain_wall": "dw", "domainwall": "dw", "one_hot": "onehot", "one-hot": "onehot"}
        return cls(aliases.get(kind.lower(), kind.lower()))


class PenaltyStrengthWarning(UserWarning):
    """A variable's core penalty is below the recommended strength."""


@dataclass(frozen=True)
class VariableHandle:
    """A discrete variable placed in an :class:`EncodedProblem`.

    Attributes:
        id: Index of the variable within its problem.
        kind: :attr:`Encoding.DOMAIN_WALL` or :attr:`Encoding.ONE_HOT`.
        m: Domain size; values are ``0 .. m-1``.
        qubits: Contiguous qubit range in the host model.
        lam: Core penalty strength.
    """

    id: int
    kind: Encoding
    m: int
    qubits: range
    lam: float

    @property
    def n_qubits(self) -> int:
        return len(self.qubits)

    def to_json(self) -> dict:
        return {
            "id": self.id,
            "kind": self.kind.value,
            "m": self.m,
            "qubits": [self.qubits.start, self.qubits.stop],
            "lambda": self.lam,
        }

    @classmethod
    def from_json(cls, d: dict) -> VariableHandle:
        lo, hi = d["qubits"]
        return cls(int(d["id"]), Encoding.parse(d["kind"]), int(d["m"]), range(lo, hi), float(d["lambda"]))


# A linear form over spins: (constant, {qubit: coefficient}).
LinearForm = tuple[float, dict[int, float]]


def _zbar(v: VariableHandle, i: int) -> LinearForm:
    """Chain spin ``i`` of a domain-wall variable, virtual ends included."""
    n = v.n_qubits
    if i == -1:
        return (-1.0, {})
    if i == n:
        return (1.0, {})
    if 0 <= i < n:
        return (0.0, {v.qubits[i]: 1.0})
    raise DomainError(f"chain position {i} undefined for N={n}")


def delta_expansion(v: VariableHandle, i: int) -> LinearForm:
    """Linear expansion of the value indicator ``[v == i]``.

    Domain wall: half the difference of chain spins ``i`` and ``i-1``.
    One-hot: ``(1 - z_i) / 2``.  Either way the form evaluates to 1 on valid
    states with value ``i`` and 0 on other valid states.

    Returns:
        ``(offset, {qubit: coefficient})``.
    """
    if not 0 <= i < v.m:
        raise DomainError(f"value {i} outside 0..{v.m - 1}")
    if v.kind is Encoding.ONE_HOT:
        return (0.5, {v.qubits[i]: -0.5})
    hi_c, hi = _zbar(v, i)
    lo_c, lo = _zbar(v, i - 1)
    terms = {q: 0.5 * c for q, c in hi.items()}
    for q, c in lo.items():
        terms[q] = terms.get(q, 0.0) - 0.5 * c
    return (0.5 * (hi_c - lo_c), terms)


def _delta_matrix(v: VariableHandle) -> np.ndarray:
    """Row ``i`` holds ``[offset, coef(q_0), coef(q_1), ...]`` of ``delta(v, i)``."""
    C = np.zeros((v.m, 1 + v.n_qubits))
    base = v.qubits.start
    for i in range(v.m):
        const, terms = delta_expansion(v, i)
        C[i, 0] = const
        for q, c in terms.items():
            C[i, 1 + q - base] = c
    return C


def decode(v: VariableHandle, spins: Sequence[int]) -> int | None:
    """Logical value of ``v`` under ``spins``, or ``None`` if the bits are invalid.

    ``spins`` may be a full-model assignment; only ``v.qubits`` are read.
    """
    if len(spins) < v.qubits.stop:
        raise DimensionError(f"assignment of length {len(spins)} does not cover qubits {v.qubits}")
    bits = [1 if spins[q] < 0 else 0 for q in v.qubits]
    if v.kind is Encoding.ONE_HOT:
        if sum(bits) != 1:
            return None
        return bits.index(1)
    k = sum(bits)
    if bits != [1] * k + [0] * (len(bits) - k):
        return None
    return k


def is_valid(v: VariableHandle, spins: Sequence[int]) -> bool:
    return decode(v, spins) is not None


def valid_spins(v: VariableHandle, value: int) -> np.ndarray:
    """Local spins (length ``v.n_qubits``) that encode ``value``."""
    if not 0 <= value < v.m:
        raise DomainError(f"value {value} outside 0..{v.m - 1}")
    if v.kind is Encoding.ONE_HOT:
        bits = [1 if q == value else 0 for q in range(v.m)]
    else:
        bits = [1] * value + [0] * (v.n_qubits - value)
    return (1 - 2 * np.array(bits)).astype(np.int8)


class EncodedProblem:
    """Builder for an Ising model made of encoded discrete variables.

    Variables occupy disjoint contiguous qubit ranges in creation order.
    ``model`` returns an immutable snapshot of the terms added so far.
    """

    def __init__(self):
        self._builder = IsingBuilder()
        self.variables: list[VariableHandle] = []
        self._load: list[float] = []
        self._snapshot: IsingModel | None = None
        # per logical variable handle; None marks a variable fixed at value 0
        self.logical: list[VariableHandle | None] | None = None

    @property
    def model(self) -> IsingModel:
        if self._snapshot is None:
            self._snapshot = self._builder.build()
        return self._snapshot

    @property
    def n_qubits(self) -> int:
        return self._builder.n_qubits

    def _touch(self) -> None:
        self._snapshot = None

    # -- variables -------------------------------------------------------

    def add_variable(self, kind: str | Encoding, m: int, lam: float = 1.0) -> VariableHandle:
        kind = Encoding.parse(kind)
        if kind is Encoding.DOMAIN_WALL:
            return self.add_domain_wall_variable(m, lam)
        if kind is Encoding.ONE_HOT:
            return self.add_one_hot_variable(m, lam)
        raise DomainError(f"no interaction compiler for {kind.value} variables")

    def add_domain_wall_variable(self, m: int, lam: float = 1.0) -> VariableHandle:
        """Append a ``Z_m`` domain-wall variable on ``m - 1`` fresh qubits.

        Adds ``-lam * z_i z_{i+1}`` along the chain and fields ``+lam`` on the
        first qubit and ``-lam`` on the last (they cancel when ``m == 2``).
        """
        _check_domain(m, lam)
        qubits = self._builder.add_qubits(m - 1)
        b = self._builder
        for a, c in zip(qubits, qubits[1:]):
            b.add_coupler(a, c, -lam)
        if len(qubits) > 1:
            b.add_field(qubits[0], lam)
            b.add_field(qubits[-1], -lam)
        return self._register(Encoding.DOMAIN_WALL, m, qubits, lam)

    def add_one_hot_variable(self, m: int, lam: float = 1.0) -> VariableHandle:
        """Append a ``Z_m`` one-hot variable on ``m`` fresh qubits.

        Penalty ``lam * (b - 1)**2`` in the bit count ``b``, up to a constant:
        ``+lam`` on every pair and ``-(m - 2) * lam`` on every qubit.
        """
        _check_domain(m, lam)
        qubits = self._builder.add_qubits(m)
        b = self._builder
        for x, a in enumerate(qubits):
            for c in qubits[x + 1:]:
                b.add_coupler(a, c, lam)
        field = _one_hot_field(m, lam)
        for a in qubits:
            b.add_field(a, field)
        return self._register(Encoding.ONE_HOT, m, qubits, lam)

    def _register(self, kind: Encoding, m: int, qubits: range, lam: float) -> VariableHandle:
        v = VariableHandle(len(self.variables), kind, m, qubits, float(lam))
        self.variables.append(v)
        self._load.append(0.0)
        self._touch()
        return v

    def _own(self, v: VariableHandle) -> None:
        if v.id >= len(self.variables) or self.variables[v.id] != v:
            raise DomainError(f"variable {v.id} does not belong to this problem")

    # -- terms -----------------------------------------------------------

    def _add_form(self, form: LinearForm, weight: float) -> None:
        const, terms = form
        self._builder.add_offset(weight * const)
        for q, c in terms.items():
            self._builder.add_field(q, weight * c)

    def add_constant(self, value: float) -> None:
        self._builder.add_offset(value)
        self._touch()

    def add_value_penalty(self, v: VariableHandle, value: int, weight: float) -> None:
        """Raise the energy of valid states where ``v == value`` by ``weight``."""
        self._own(v)
        form = delta_expansion(v, value)
        if weight == 0:
            return
        self._add_form(form, weight)
        self._load[v.id] += abs(weight)
        self._touch()

    def add_interaction(self, vk: VariableHandle, vl: VariableHandle, E) -> None:
        """Add ``sum_ij E[i, j] [vk == i][vl == j]`` using only two-body terms.

        Offsets are tracked, so on every pair of valid states the added energy
        is exactly ``E[vk, vl]``.

        Raises:
            AliasingError: If ``vk`` and ``vl`` are the same variable.
            DomainError: If ``E`` is not ``vk.m x vl.m``.
        """
        self._own(vk)
        self._own(vl)
        if vk.id == vl.id:
            raise AliasingError("an interaction needs two distinct variables")
        E = np.asarray(E, dtype=np.float64)
        if E.shape != (vk.m, vl.m):
            raise DomainError(f"value matrix shape {E.shape} != {(vk.m, vl.m)}")
        scale = float(np.abs(E).max()) if E.size else 0.0
        if scale == 0.0:
            return
        T = _delta_matrix(vk).T @ E @ _delta_matrix(vl)
        # cancellation residue from reordered float sums
        T[np.abs(T) <= 1e-12 * max(1.0, scale)] = 0.0

        b = self._builder
        b.add_offset(T[0, 0])
        for a, qa in enumerate(vk.qubits, start=1):
            b.add_field(qa, T[a, 0])
        for c, qc in enumerate(vl.qubits, start=1):
            b.add_field(qc, T[0, c])
        for a, qa in enumerate(vk.qubits, start=1):
            for c, qc in enumerate(vl.qubits, start=1):
                if T[a, c] != 0.0:
                    b.add_coupler(qa, qc, T[a, c])
        self._load[vk.id] += scale
        self._load[vl.id] += scale
        self._touch()

    def add_order_constraint(self, vj: VariableHandle, vj1: VariableHandle, lam: float = 1.0) -> None:
        """Penalise valid pairs unless ``value(vj) < value(vj1)``.

        For every chain site ``i`` the term ``lam/4 (1 - Z_j[i-1]) (1 + Z_j1[i])``
        is 1 exactly when ``vj >= i`` and ``vj1 <= i``.  Summing over
        ``i = 0 .. N`` gives ``lam * (vj - vj1 + 1)`` when ``vj >= vj1`` and 0
        otherwise.
        """
        self._own(vj)
        self._own(vj1)
        if vj.id == vj1.id:
            raise AliasingError("an order constraint needs two distinct variables")
        if vj.kind is not Encoding.DOMAIN_WALL or vj1.kind is not Encoding.DOMAIN_WALL:
            raise DomainError("order constraints require domain-wall variables")
        if vj.m != vj1.m:
            raise DomainError(f"domain sizes differ: {vj.m} != {vj1.m}")
        if lam <= 0:
            raise DomainError("order penalty must be positive")
        for i in range(vj.n_qubits + 1):
            a_c, a = _zbar(vj, i - 1)
            b_c, b = _zbar(vj1, i)
            self._add_product((1.0 - a_c, {q: -c for q, c in a.items()}), (1.0 + b_c, b), lam / 4)
        self._touch()

    def _add_product(self, f: LinearForm, g: LinearForm, scale: float) -> None:
        fc, ft = f
        gc, gt = g
        b = self._builder
        b.add_offset(scale * fc * gc)
        for q, c in ft.items():
            b.add_field(q, scale * c * gc)
        for q, c in gt.items():
            b.add_field(q, scale * c * fc)
        for q, c in ft.items():
            for r, d in gt.items():
                b.add_coupler(q, r, scale * c * d)

    # -- inspection ------------------------------------------------------

    def decode(self, spins: Sequence[int]) -> list[int | None]:
        return [decode(v, spins) for v in self.variables]

    def decode_one(self, v: VariableHandle, spins: Sequence[int]) -> int | None:
        self._own(v)
        return decode(v, spins)

    def encode(self, values: Sequence[int]) -> np.ndarray:
        """Full spin assignment for one value per variable."""
        if len(values) != len(self.variables):
            raise DimensionError(f"expected {len(self.variables)} values, got {len(values)}")
        s = np.ones(self.n_qubits, dtype=np.int8)
        for v, x in zip(self.variables, values):
            s[v.qubits.start:v.qubits.stop] = valid_spins(v, x)
        return s

    def recommended_lambda(self, v: VariableHandle) -> float:
        """Heuristic core strength: one plus the summed largest ``|E|`` on ``v``."""
        self._own(v)
        return 1.0 + self._load[v.id]

    def check_penalty_strength(self) -> list[VariableHandle]:
        """Warn about, and return, variables whose ``lam`` is below the recommendation."""
        weak = [v for v in self.variables if v.lam < self.recommended_lambda(v)]
        for v in weak:
            warnings.warn(
                f"variable {v.id}: lambda={v.lam} below recommended {self.recommended_lambda(v)}",
                PenaltyStrengthWarning,
                stacklevel=2,
            )
        return weak

    def core_model(self) -> IsingModel:
        """Model holding only the variable cores (same qubit layout)."""
        p = EncodedProblem()
        for v in self.variables:
            p.add_variable(v.kind, v.m, v.lam)
        return p.model

    @classmethod
    def from_parts(cls, model: IsingModel, variables: Sequence[VariableHandle]) -> EncodedProblem:
        """Rebuild a problem from a serialised model and its variable table."""
        p = cls()
        p._builder = IsingBuilder.from_model(model)
        p.variables = list(variables)
        p._load = [0.0] * len(p.variables)
        return p


def _check_domain(m: int, lam: float) -> None:
    if int(m) != m or m < 2:
        raise DomainError(f"domain size must be an integer >= 2, got {m}")
    if lam <= 0:
        raise DomainError(f"penalty strength must be positive, got {lam}")


def _one_hot_field(m: int, lam: float) -> float:
    return -(m - 2) * lam


def build_k_hot_ensemble(k: int, m: int, lam: float = 1.0, lam_order: float = 1.0) -> EncodedProblem:
    """Chain ``k`` domain-wall ``Z_m`` variables with strict order constraints.

    The ground manifold is the set of strictly increasing ``k``-tuples, so it
    behaves like a ``k``-hot selection of ``m`` items.
    """
    if k < 1:
        raise DomainError("k must be at least 1")
    if k > m:
        raise InfeasibleError(f"cannot choose {k} strictly increasing values from {m}")
    p = EncodedProblem()
    vs = [p.add_domain_wall_variable(m, lam) for _ in range(k)]
    for a, b in zip(vs, vs[1:]):
        p.add_order_constraint(a, b, lam_order)
    return p


@dataclass(frozen=True)
class EncodingMetrics:
    """Per-variable resource counts.  ``None`` marks an unsupported metric."""

    qubits: int
    core_couplers: int | None
    intra_connectivity: str | None


def encoding_metrics(kind: str | Encoding, m: int) -> EncodingMetrics:
    if m < 2:
        raise DomainError("m must be at least 2")
    kind = Encoding.parse(kind)
    if kind is Encoding.DOMAIN_WALL:
        return EncodingMetrics(m - 1, m - 2, "linear")
    if kind is Encoding.ONE_HOT:
        return EncodingMetrics(m, m * (m - 1) // 2, "complete")
    return EncodingMetrics((m - 1).bit_length(), None, None)
