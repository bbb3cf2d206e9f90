"""Embedding-overhead experiments and their CSV summaries.

One row is produced per (size, instance, encoding, target family).  Each
instance is generated from ``derive_seed(master_seed, size, index)`` so adding
sizes or instances never changes existing rows.
"""

from __future__ import annotations

import csv
import io
import logging
import math
from dataclasses import dataclass, field
from typing import Callable, Iterable, Sequence

from .embedding import EmbedParams, min_embeddable_size
from .encoding import Encoding
from .exceptions import DomainError
from .hardware import interaction_graph
from .problems import Instance, build_problem, gen_coloring, gen_scheduling
from .rng import derive_seed

__all__ = [
    "COLUMNS",
    "PROBLEMS",
    "ExperimentSpec",
    "ResultRow",
    "make_instance",
    "run_experiment",
    "rows_to_csv",
    "parse_rows",
    "summarize",
    "summary_to_csv",
]

log = logging.getLogger(__name__)

COLUMNS = (
    "problem_type",
    "size_param",
    "instance_index",
    "instance_seed",
    "encoding",
    "target_family",
    "min_L",
    "logical_qubits",
    "physical_qubits",
    "embedding_ratio",
    "couplers",
    "tries",
    "status",
)

PROBLEMS = ("three-color", "n-color", "scheduling")
TARGETS = ("chimera", "pegasus")


def make_instance(problem: str, size: int, seed: int) -> Instance:
    """Instance generator per family.

    ``three-color``: ``size`` vertices, 3 colours, edge probability 0.5.
    ``n-color``: ``2 * size`` vertices, ``size`` colours, edge probability 0.75.
    ``scheduling``: ``size`` events.
    """
    if problem == "three-color":
        return gen_coloring(size, 3, 0.5, seed)
    if problem == "n-color":
        return gen_coloring(2 * size, size, 0.75, seed)
    if problem == "scheduling":
        return gen_scheduling(size, seed)
    raise DomainError(f"unknown problem family {problem!r}; expected one of {PROBLEMS}")


@dataclass(frozen=True)
class ExperimentSpec:
    problem: str
    sizes: tuple[int, ...]
    instances: int = 10
    encodings: tuple[Encoding, ...] = (Encoding.DOMAIN_WALL, Encoding.ONE_HOT)
    targets: tuple[str, ...] = TARGETS
    seed: int = 0
    tries: int = 10
    rounds: int = EmbedParams.rounds
    ceiling: int | None = None

    def __post_init__(self):
        if self.problem not in PROBLEMS:
            raise DomainError(f"unknown problem family {self.problem!r}")
        if not self.sizes or not self.encodings or not self.targets:
            raise DomainError("sizes, encodings and targets must be non-empty")
        if self.instances < 1:
            raise DomainError("instances must be at least 1")
        object.__setattr__(self, "sizes", tuple(sorted(set(int(s) for s in self.sizes))))
        object.__setattr__(self, "encodings", tuple(Encoding.parse(e) for e in self.encodings))
        for t in self.targets:
            if t not in TARGETS:
                raise DomainError(f"unknown target family {t!r}")

    def params(self) -> EmbedParams:
        return EmbedParams(max_tries=self.tries, seed=self.seed, rounds=self.rounds)


@dataclass(frozen=True)
class ResultRow:
    problem_type: str
    size_param: int
    instance_index: int
    instance_seed: int
    encoding: str
    target_family: str
    min_L: int | None
    logical_qubits: int
    physical_qubits: int | None
    embedding_ratio: float | None
    couplers: int
    tries: int
    status: str

    def key(self) -> tuple:
        return (self.problem_type, self.size_param, self.instance_index, self.encoding, self.target_family)

    def cells(self) -> list[str]:
        def fmt(x):
            if x is None:
                return ""
            if isinstance(x, float):
                return f"{x:.6f}"
            return str(x)

        return [fmt(getattr(self, c)) for c in COLUMNS]


def run_experiment(
    spec: ExperimentSpec,
    progress: Callable[[ResultRow], None] | None = None,
) -> list[ResultRow]:
    """Every row of ``spec`` in canonical order.

    Each size search starts at the result for the previous instance with the
    same encoding and target, as a warm start.
    """
    params = spec.params()
    warm: dict[tuple[str, str], int] = {}
    rows = []
    for size in spec.sizes:
        for idx in range(spec.instances):
            seed = derive_seed(spec.seed, size, idx)
            inst = make_instance(spec.problem, size, seed)
            for enc in spec.encodings:
                source = interaction_graph(build_problem(inst, enc))
                for target in spec.targets:
                    base = dict(
                        problem_type=spec.problem,
                        size_param=size,
                        instance_index=idx,
                        instance_seed=seed,
                        encoding=enc.value,
                        target_family=target,
                        logical_qubits=source.n,
                        couplers=len(source.edges),
                        tries=spec.tries,
                    )
                    if source.n == 0:
                        row = ResultRow(min_L=None, physical_qubits=0, embedding_ratio=None, status="empty", **base)
                    else:
                        res = min_embeddable_size(source, target, params, warm.get((enc.value, target)), spec.ceiling)
                        if res.L is None:
                            row = ResultRow(min_L=None, physical_qubits=None, embedding_ratio=None, status="ceiling", **base)
                        else:
                            warm[enc.value, target] = res.L
                            phys = res.embedding.physical_qubits
                            row = ResultRow(
                                min_L=res.L, physical_qubits=phys, embedding_ratio=phys / source.n, status="ok", **base
                            )
                    rows.append(row)
                    if progress is not None:
                        progress(row)
    return sorted(rows, key=ResultRow.key)


def rows_to_csv(rows: Iterable[ResultRow]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(COLUMNS)
    for r in sorted(rows, key=ResultRow.key):
        w.writerow(r.cells())
    return buf.getvalue()


def _opt(cast, text):
    return None if text == "" else cast(text)


def parse_rows(text: str) -> list[ResultRow]:
    """Parse experiment CSV; malformed input raises with the offending line number."""
    reader = csv.reader(io.StringIO(text))
    try:
        header = next(reader)
    except StopIteration:
        raise DomainError("line 1: empty CSV") from None
    if tuple(header) != COLUMNS:
        raise DomainError(f"line 1: header must be {','.join(COLUMNS)}")
    rows = []
    for line, cells in enumerate(reader, start=2):
        if not cells:
            continue
        if len(cells) != len(COLUMNS):
            raise DomainError(f"line {line}: expected {len(COLUMNS)} fields, got {len(cells)}")
        d = dict(zip(COLUMNS, cells))
        try:
            row = ResultRow(
                problem_type=d["problem_type"],
                size_param=int(d["size_param"]),
                instance_index=int(d["instance_index"]),
                instance_seed=int(d["instance_seed"]),
                encoding=d["encoding"],
                target_family=d["target_family"],
                min_L=_opt(int, d["min_L"]),
                logical_qubits=int(d["logical_qubits"]),
                physical_qubits=_opt(int, d["physical_qubits"]),
                embedding_ratio=_opt(float, d["embedding_ratio"]),
                couplers=int(d["couplers"]),
                tries=int(d["tries"]),
                status=d["status"],
            )
        except ValueError as exc:
            raise DomainError(f"line {line}: {exc}") from None
        if row.status == "ok" and (row.min_L is None or row.embedding_ratio is None):
            raise DomainError(f"line {line}: ok row without min_L or embedding_ratio")
        rows.append(row)
    return rows


@dataclass
class SummaryRow:
    problem_type: str
    size_param: int
    encoding: str
    target_family: str
    count: int
    ok: int
    min_L: tuple[float, float, float] | None
    ratio: tuple[float, float, float] | None = field(default=None)


def _stats(xs: Sequence[float]) -> tuple[float, float, float] | None:
    if not xs:
        return None
    return (min(xs), max(xs), math.fsum(xs) / len(xs))


def summarize(rows: Iterable[ResultRow] | str) -> list[SummaryRow]:
    """Min, max and mean of ``min_L`` and ``embedding_ratio`` over ok rows per group."""
    if isinstance(rows, str):
        rows = parse_rows(rows)
    groups: dict[tuple, list[ResultRow]] = {}
    for r in rows:
        groups.setdefault((r.problem_type, r.size_param, r.encoding, r.target_family), []).append(r)
    out = []
    for key in sorted(groups):
        rs = groups[key]
        ok = [r for r in rs if r.status == "ok"]
        out.append(
            SummaryRow(
                *key,
                count=len(rs),
                ok=len(ok),
                min_L=_stats([float(r.min_L) for r in ok]),
                ratio=_stats([r.embedding_ratio for r in ok]),
            )
        )
    return out


SUMMARY_COLUMNS = (
    "problem_type", "size_param", "encoding", "target_family", "count", "ok",
    "min_L_min", "min_L_max", "min_L_mean", "ratio_min", "ratio_max", "ratio_mean",
)


def summary_to_csv(summary: Iterable[SummaryRow]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(SUMMARY_COLUMNS)
    for s in summary:
        ml = s.min_L or (None, None, None)
        rt = s.ratio or (None, None, None)
        w.writerow(
            [s.problem_type, s.size_param, s.encoding, s.target_family, s.count, s.ok]
            + ["" if x is None else f"{x:.6f}" for x in (*ml, *rt)]
        )
    return buf.getvalue()
