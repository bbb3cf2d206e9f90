"""Subspace-preserving QAOA mixers for domain-wall variables.

The mixer flips chain qubit ``i`` only when exactly one of its chain
neighbours disagrees with the other, i.e. when a single domain wall sits
next to it, so it moves walls without creating or destroying them.  All
operators here are real in the computational basis.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Mapping

import numpy as np

from .encoding import Encoding, VariableHandle
from .exceptions import DomainError, SizeLimitError

__all__ = [
    "PauliTerm",
    "PauliOperatorSum",
    "build_mixer",
    "split_even_odd",
    "to_dense",
    "domain_wall_number",
    "check_subspace_preservation",
    "SubspaceReport",
    "MAX_DENSE_QUBITS",
    "MAX_CHECK_M",
]

MAX_DENSE_QUBITS = 14
MAX_CHECK_M = 8


@dataclass(frozen=True)
class PauliTerm:
    """``coefficient * prod(factors)`` with at most one X or Z per qubit."""

    coefficient: float
    factors: tuple[tuple[int, str], ...] = ()

    def __post_init__(self):
        facs = tuple(sorted((int(q), p.upper()) for q, p in dict(self.factors).items()))
        if len(facs) != len(self.factors):
            raise DomainError("at most one factor per qubit")
        for _, p in facs:
            if p not in ("X", "Z"):
                raise DomainError(f"unsupported Pauli factor {p!r}")
        object.__setattr__(self, "factors", facs)

    @classmethod
    def of(cls, coefficient: float, factors: Mapping[int, str] | None = None) -> PauliTerm:
        return cls(float(coefficient), tuple((factors or {}).items()))

    @property
    def x_qubits(self) -> tuple[int, ...]:
        return tuple(q for q, p in self.factors if p == "X")

    @property
    def z_qubits(self) -> tuple[int, ...]:
        return tuple(q for q, p in self.factors if p == "Z")

    def __str__(self):
        body = " ".join(f"{p}{q}" for q, p in self.factors) or "I"
        return f"{self.coefficient:+g} {body}"


@dataclass
class PauliOperatorSum:
    n_qubits: int
    terms: list[PauliTerm] = field(default_factory=list)

    def __post_init__(self):
        for t in self.terms:
            for q, _ in t.factors:
                if not 0 <= q < self.n_qubits:
                    raise DomainError(f"factor on qubit {q} outside {self.n_qubits} qubits")

    @classmethod
    def collect(cls, n_qubits: int, terms: Iterable[PauliTerm]) -> PauliOperatorSum:
        """Merge like terms (same factors) and drop zeros, keeping first-seen order."""
        acc: dict[tuple, float] = {}
        for t in terms:
            acc[t.factors] = acc.get(t.factors, 0.0) + t.coefficient
        return cls(n_qubits, [PauliTerm(c, f) for f, c in acc.items() if c != 0.0])

    def __add__(self, other: PauliOperatorSum) -> PauliOperatorSum:
        return PauliOperatorSum.collect(max(self.n_qubits, other.n_qubits), self.terms + other.terms)

    def __len__(self):
        return len(self.terms)

    def __str__(self):
        return " ".join(str(t) for t in self.terms) or "0"


def _require_dw(v: VariableHandle) -> None:
    if v.kind is not Encoding.DOMAIN_WALL:
        raise DomainError("operator is defined for domain-wall variables only")


def _chain_factor(v: VariableHandle, i: int) -> tuple[float, dict[int, str]]:
    """Chain Z at position ``i`` as (sign, factors); virtual ends are signed identities."""
    n = v.n_qubits
    if i == -1:
        return -1.0, {}
    if i == n:
        return 1.0, {}
    return 1.0, {v.qubits[i]: "Z"}


def build_mixer(v: VariableHandle, n_qubits: int | None = None) -> PauliOperatorSum:
    """Sum over chain sites of ``Zbar[i-1] X[i] - X[i] Zbar[i+1]``.

    Args:
        v: Domain-wall variable.
        n_qubits: Width of the operator; defaults to ``v.qubits.stop``.
    """
    _require_dw(v)
    n_qubits = v.qubits.stop if n_qubits is None else n_qubits
    terms = []
    for i in range(v.n_qubits):
        x = {v.qubits[i]: "X"}
        s, z = _chain_factor(v, i - 1)
        terms.append(PauliTerm.of(s, {**z, **x}))
        s, z = _chain_factor(v, i + 1)
        terms.append(PauliTerm.of(-s, {**x, **z}))
    return PauliOperatorSum.collect(n_qubits, terms)


def split_even_odd(mixer: PauliOperatorSum) -> tuple[PauliOperatorSum, PauliOperatorSum]:
    """Partition terms by the parity of the qubit carrying X.

    Parity is taken relative to the lowest X qubit in the operator, so a
    variable placed at an odd offset splits the same way as at offset 0.
    """
    xs = [t.x_qubits for t in mixer.terms]
    if any(len(x) != 1 for x in xs):
        raise DomainError("every mixer term must carry exactly one X")
    base = min((x[0] for x in xs), default=0)
    even = [t for t, x in zip(mixer.terms, xs) if (x[0] - base) % 2 == 0]
    odd = [t for t, x in zip(mixer.terms, xs) if (x[0] - base) % 2 == 1]
    return PauliOperatorSum(mixer.n_qubits, even), PauliOperatorSum(mixer.n_qubits, odd)


def to_dense(op: PauliOperatorSum, max_qubits: int = MAX_DENSE_QUBITS) -> np.ndarray:
    """Dense matrix in the computational basis (qubit 0 is the lowest index bit).

    ``Z`` contributes ``(-1)**bit`` and ``X`` flips its bit.
    """
    n = op.n_qubits
    if n > max_qubits:
        raise SizeLimitError(f"{n} qubits exceeds the dense cap of {max_qubits}")
    dim = 1 << n
    M = np.zeros((dim, dim))
    idx = np.arange(dim)
    for t in op.terms:
        xmask = sum(1 << q for q in t.x_qubits)
        parity = np.zeros(dim, dtype=np.int64)
        for q in t.z_qubits:
            parity ^= (idx >> q) & 1
        M[idx ^ xmask, idx] += t.coefficient * (1 - 2 * parity)
    return M


def domain_wall_number(v: VariableHandle, n_qubits: int | None = None) -> PauliOperatorSum:
    """Number of walls along the chain including both virtual ends."""
    _require_dw(v)
    n_qubits = v.qubits.stop if n_qubits is None else n_qubits
    terms = []
    for i in range(-1, v.n_qubits):
        sa, za = _chain_factor(v, i)
        sb, zb = _chain_factor(v, i + 1)
        terms.append(PauliTerm.of(0.5))
        terms.append(PauliTerm.of(-0.5 * sa * sb, {**za, **zb}))
    return PauliOperatorSum.collect(n_qubits, terms)


@dataclass
class SubspaceReport:
    m: int
    checks: dict[str, bool]
    valid_block: np.ndarray
    max_commutator: float

    @property
    def passed(self) -> bool:
        return all(self.checks.values())

    def format(self) -> str:
        lines = [f"domain-wall mixer, m={self.m} (off-diagonal valid elements are -2 under this normalisation)"]
        lines += [f"  [{'PASS' if ok else 'FAIL'}] {name}" for name, ok in self.checks.items()]
        return "\n".join(lines)

    def block_csv(self) -> str:
        return "\n".join(",".join(f"{x:g}" for x in row) for row in self.valid_block)


def _commutator_max(a: np.ndarray, b: np.ndarray) -> float:
    return float(np.abs(a @ b - b @ a).max()) if a.size else 0.0


def check_subspace_preservation(v: VariableHandle, max_m: int = MAX_CHECK_M) -> SubspaceReport:
    """Dense verification that the mixer and both halves conserve wall number.

    Runs on a copy of ``v`` relocated to qubits ``0 .. N-1``.
    """
    _require_dw(v)
    if v.m > max_m:
        raise SizeLimitError(f"m={v.m} exceeds the dense check cap of {max_m}")
    local = VariableHandle(0, v.kind, v.m, range(v.n_qubits), v.lam)
    mixer = build_mixer(local)
    even, odd = split_even_odd(mixer)
    M, Me, Mo = to_dense(mixer), to_dense(even), to_dense(odd)
    D = to_dense(domain_wall_number(local))
    walls = np.diag(D)

    checks = {}
    comms = {name: _commutator_max(X, D) for name, X in (("mixer", M), ("even", Me), ("odd", Mo))}
    for name, c in comms.items():
        checks[f"[{name}, D] == 0"] = c == 0.0
    sector_mismatch = walls[:, None] != walls[None, :]
    checks["no elements between wall sectors"] = all(
        not np.any(X[sector_mismatch]) for X in (M, Me, Mo)
    )
    checks["even + odd == mixer"] = np.array_equal(Me + Mo, M)
    checks["terms within each half commute"] = all(
        _commutator_max(to_dense(PauliOperatorSum(half.n_qubits, [s])), to_dense(PauliOperatorSum(half.n_qubits, [t]))) == 0.0
        for half in (even, odd)
        for a, s in enumerate(half.terms)
        for t in half.terms[a + 1:]
    )
    valid = [(1 << k) - 1 for k in range(v.m)]
    block = M[np.ix_(valid, valid)]
    band = np.abs(np.subtract.outer(np.arange(v.m), np.arange(v.m)))
    checks["valid block tridiagonal, zero diagonal"] = (
        not np.any(block[band != 1]) and bool(np.all(block[band == 1] != 0))
    )
    return SubspaceReport(v.m, checks, block, max(comms.values()))
