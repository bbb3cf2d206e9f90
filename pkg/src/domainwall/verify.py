"""Property suites behind ``domainwall verify all``.

Each check returns ``(ok, detail)``.  Randomised checks use fixed seeds, so a
run is reproducible.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Callable, Iterable

import networkx as nx
import numpy as np

from . import embedding as emb
from . import encoding as enc
from . import experiment as exp
from . import hardware as hw
from . import ising
from . import mixers
from . import problems as pr
from .encoding import EncodedProblem, Encoding

__all__ = ["Check", "CHECKS", "run_checks", "verify_all", "oracle_equivalence"]

KINDS = (Encoding.DOMAIN_WALL, Encoding.ONE_HOT)


@dataclass(frozen=True)
class Check:
    module: str
    name: str
    fn: Callable[[], tuple[bool, str]]


def _random_model(rng: np.random.Generator, n: int) -> ising.IsingModel:
    h = {i: float(rng.uniform(-1, 1)) for i in range(n)}
    J = {(i, j): float(rng.uniform(-1, 1)) for i, j in itertools.combinations(range(n), 2) if rng.random() < 0.5}
    return ising.IsingModel(n, h, J, float(rng.uniform(-1, 1)))


# -- ising ---------------------------------------------------------------------


def check_merge_linearity():
    rng = np.random.default_rng(1)
    for _ in range(50):
        a, b = _random_model(rng, 4), _random_model(rng, 3)
        m = ising.merge(a, b)
        s = rng.choice([-1, 1], size=7)
        if not math.isclose(m.energy(s), a.energy(s[:4]) + b.energy(s[4:]), abs_tol=1e-12):
            return False, f"merge energy mismatch on {s.tolist()}"
    return True, "50 random pairs"


def check_spin_flip():
    rng = np.random.default_rng(2)
    for _ in range(50):
        m = _random_model(rng, 6)
        s = rng.choice([-1, 1], size=6)
        if not math.isclose(m.energy(-s), m.flipped().energy(s), abs_tol=1e-12):
            return False, "flip symmetry broken"
    return True, "50 random models"


def check_brute_force_bound():
    rng = np.random.default_rng(3)
    m = _random_model(rng, 12)
    g = ising.brute_force(m)
    S = rng.choice([-1, 1], size=(1000, 12))
    worst = float((ising.energies(m, S) - g.energy).min())
    return worst >= -1e-9, f"min(E(s) - E0) = {worst:.3g} over 1000 states"


# -- encoding --------------------------------------------------------------------


def check_ground_manifold():
    for kind in KINDS:
        for m in range(2, 11):
            p = EncodedProblem()
            v = p.add_variable(kind, m, 1.0)
            g = ising.brute_force(p.model)
            values = [enc.decode(v, s) for s in g.states]
            if None in values:
                return False, f"{kind.value} m={m}: invalid state in ground manifold"
            if sorted(values) != list(range(m)):
                return False, f"{kind.value} m={m}: ground states decode to {values}"
    return True, "both kinds, m = 2..10"


def interaction_exactness(n_trials: int = 200, seed: int = 4, atol: float = 1e-9) -> tuple[bool, str]:
    rng = np.random.default_rng(seed)
    worst = 0.0
    for t in range(n_trials):
        kind = KINDS[t % 2]
        mk, ml = rng.integers(2, 6, size=2)
        E = rng.uniform(-5, 5, size=(mk, ml))
        p = EncodedProblem()
        a, b = p.add_variable(kind, mk, 1.0), p.add_variable(kind, ml, 1.0)
        core = p.model
        p.add_interaction(a, b, E)
        for i in range(mk):
            for j in range(ml):
                s = p.encode([i, j])
                worst = max(worst, abs(p.model.energy(s) - core.energy(s) - E[i, j]))
    return worst <= atol, f"{n_trials} matrices, max error {worst:.2e}"


def check_density():
    rng = np.random.default_rng(5)
    for mk, ml in itertools.product(range(2, 7), repeat=2):
        p = EncodedProblem()
        a, b = p.add_domain_wall_variable(mk), p.add_domain_wall_variable(ml)
        core = p.model
        p.add_interaction(a, b, rng.uniform(-1, 1, size=(mk, ml)))
        inter = [c for c in p.model.couplers if (c[0] in a.qubits) != (c[1] in a.qubits)]
        lin = [q for q in range(p.n_qubits) if p.model.h.get(q, 0.0) != core.h.get(q, 0.0)]
        if len(inter) > (mk - 1) * (ml - 1) or len(lin) > mk + ml - 2:
            return False, f"m=({mk},{ml}): {len(inter)} couplers, {len(lin)} fields"
    return True, "m_k, m_l = 2..6"


def check_gauge_cancellation():
    for mk, ml in itertools.product(range(2, 7), repeat=2):
        p = EncodedProblem()
        a, b = p.add_domain_wall_variable(mk), p.add_domain_wall_variable(ml)
        core = p.model
        p.add_interaction(a, b, np.ones((mk, ml)))
        if p.model.J != core.J or p.model.h != core.h or not math.isclose(p.model.offset, core.offset + 1.0):
            return False, f"m=({mk},{ml}) all-ones matrix left non-constant terms"
    return True, "all-ones matrices are pure offsets"


def check_penalty_gap():
    for m in range(2, 9):
        lam = 1.5
        p = EncodedProblem()
        v = p.add_domain_wall_variable(m, lam)
        n = v.n_qubits
        S = np.array([ising.index_to_spins(k, n) for k in range(1 << n)])
        E = ising.energies(p.model, S)
        ext = np.concatenate([-np.ones((len(S), 1)), S, np.ones((len(S), 1))], axis=1)
        walls = (ext[:, 1:] != ext[:, :-1]).sum(axis=1)
        ground = E[walls == 1].max()
        if (walls > 1).any() and E[walls > 1].min() < ground + 4 * lam - 1e-9:
            return False, f"m={m}: extra wall pair costs less than 4 lambda"
    return True, "m = 2..8"


def check_order_constraint():
    for m in range(2, 6):
        p = EncodedProblem()
        a, b = p.add_domain_wall_variable(m), p.add_domain_wall_variable(m)
        core = p.model
        p.add_order_constraint(a, b, 2.0)
        for x, y in itertools.product(range(m), repeat=2):
            s = p.encode([x, y])
            want = 2.0 * (x - y + 1) if x >= y else 0.0
            if not math.isclose(p.model.energy(s) - core.energy(s), want, abs_tol=1e-9):
                return False, f"m={m}, values ({x},{y})"
    return True, "m = 2..5, all valid pairs"


# -- problems --------------------------------------------------------------------


def _small_instances(n: int, seed: int = 6, max_qubits: int = 20):
    """``n`` random instances per family whose encodings fit ``max_qubits``."""
    rng = np.random.default_rng(seed)
    out = {"coloring": [], "scheduling": [], "unstructured": []}
    while min(len(v) for v in out.values()) < n:
        s = int(rng.integers(1 << 62))
        if len(out["coloring"]) < n:
            out["coloring"].append(pr.gen_coloring(int(rng.integers(2, 6)), 3, 0.6, s))
        if len(out["scheduling"]) < n:
            inst = pr.gen_scheduling(int(rng.integers(2, 5)), s)
            if sum(e.dur + 1 for e in inst.events) <= max_qubits:
                out["scheduling"].append(inst)
        if len(out["unstructured"]) < n:
            sizes = tuple(int(x) for x in rng.integers(2, 5, size=int(rng.integers(2, 4))))
            out["unstructured"].append(pr.gen_unstructured(sizes, s))
    return out


def oracle_equivalence(n: int = 50, seed: int = 6) -> tuple[bool, str]:
    """Decoded ground states of both encodings equal the exhaustive optimum."""
    checked = 0
    for family, insts in _small_instances(n, seed).items():
        for inst in insts:
            want = pr.classical_optimum(inst)
            for kind in KINDS:
                p = pr.build_problem(inst, kind)
                g = ising.brute_force(p.model)
                got = sorted({pr.decode_assignment(p, s) for s in g.states})
                if got != want.argmin:
                    return False, f"{family} {kind.value}: {got} != {want.argmin}"
                checked += 1
    return True, f"{checked} encoded instances"


def check_conflict_symmetry():
    inst = pr.gen_scheduling(4, 11)
    swapped = pr.SchedulingInstance(inst.events, tuple((j, i) for i, j in inst.conflicts))
    for kind in KINDS:
        if pr.build_scheduling(inst, kind).model != pr.build_scheduling(swapped, kind).model:
            return False, kind.value
    return True, "both kinds"


def check_monotonicity():
    rng = np.random.default_rng(7)
    for t in range(20):
        inst = pr.gen_coloring(5, 3, 0.4, int(rng.integers(1 << 62)))
        missing = [e for e in itertools.combinations(range(5), 2) if e not in inst.edges]
        if not missing:
            continue
        bigger = inst.with_edge(*missing[0])
        for kind in KINDS:
            a, b = pr.build_coloring(inst, kind, lam=10.0), pr.build_coloring(bigger, kind, lam=10.0)
            for values in itertools.product(range(3), repeat=5):
                s = a.encode(values)
                if b.model.energy(s) < a.model.energy(s) - 1e-9:
                    return False, f"{kind.value}: adding {missing[0]} lowered {values}"
    return True, "20 instances, fixed lambda"


# -- mixers ----------------------------------------------------------------------


def check_mixers():
    for m in range(2, mixers.MAX_CHECK_M + 1):
        p = EncodedProblem()
        rep = mixers.check_subspace_preservation(p.add_domain_wall_variable(m))
        if not rep.passed:
            failed = [k for k, ok in rep.checks.items() if not ok]
            return False, f"m={m}: {', '.join(failed)}"
    return True, f"m = 2..{mixers.MAX_CHECK_M}"


# -- hardware --------------------------------------------------------------------


def check_chimera_counts():
    for L in range(1, 17):
        g = hw.chimera(L)
        if g.n != 8 * L * L or len(g.edges) != 16 * L * L + 8 * L * (L - 1) or g.max_degree > 6:
            return False, f"L={L}"
    return True, "L = 1..16"


def check_pegasus_counts():
    for L in range(2, 9):
        g = hw.pegasus(L)
        if g.n != 8 * (L - 1) * (3 * L - 1) or g.max_degree > hw.PEGASUS_MAX_DEGREE:
            return False, f"L={L}: {g.n} vertices, degree {g.max_degree}"
    return True, "L = 2..8"


def check_edge_distance_metric():
    g = hw.chimera(3)
    G = g.to_networkx()
    rng = np.random.default_rng(8)
    for _ in range(100):
        a, b, c = (int(x) for x in rng.integers(0, g.n, size=3))
        d = lambda x, y: hw.edge_distance(G, x, y)
        if d(a, b) != d(b, a) or d(a, c) > d(a, b) + d(b, c) or d(a, a) != 0:
            return False, f"triple {(a, b, c)}"
    return True, "100 random triples on chimera(3)"


def check_dw_layers():
    for n_colors in range(3, 7):
        inst = pr.gen_coloring(6, n_colors, 0.7, n_colors)
        p = pr.build_coloring(inst, Encoding.DOMAIN_WALL)
        layer = {q: q - v.qubits.start for v in p.variables for q in v.qubits}
        G = hw.interaction_graph(p).to_networkx()
        dist = dict(nx.all_pairs_shortest_path_length(G))
        for a, row in dist.items():
            for b, d in row.items():
                if d < abs(layer[a] - layer[b]):
                    return False, f"{n_colors} colours: d_e({a},{b}) = {d}"
    return True, "colourings with 3..6 colours"


# -- embedding -------------------------------------------------------------------


def _graphs():
    yield hw.HardwareGraph.from_edges(4, nx.complete_graph(4).edges)
    yield hw.HardwareGraph.from_edges(10, nx.path_graph(10).edges)
    yield hw.interaction_graph(pr.build_scheduling(pr.gen_scheduling(4, 3), Encoding.ONE_HOT))


def check_embeddings():
    params = emb.EmbedParams(max_tries=3, seed=9)
    for src in _graphs():
        for target in (hw.chimera(3), hw.pegasus(3)):
            e1 = emb.find_embedding(src, target, params)
            e2 = emb.find_embedding(src, target, params)
            if e1 is None:
                continue
            ok, problems = emb.validate(e1)
            if not ok:
                return False, problems[0]
            if e2 is None or e1.chains != e2.chains:
                return False, "non-deterministic result"
            r = emb.embedding_ratio(e1)
            if r < 1 or (r == 1) != all(len(c) == 1 for c in e1.chains.values()):
                return False, f"ratio {r}"
    return True, "valid, deterministic, ratio >= 1"


def check_search_contract():
    params = emb.EmbedParams(max_tries=2, seed=10)
    for src in _graphs():
        res = emb.min_embeddable_size(src, "chimera", params, ceiling=6)
        if res.L is None:
            continue
        if res.L > 1 and emb.find_embedding(src, emb.target_graph("chimera", res.L - 1), params) is not None:
            return False, f"succeeds below reported L={res.L}"
    return True, "no success below reported size"


# -- experiment ------------------------------------------------------------------


def check_experiment_determinism():
    spec = exp.ExperimentSpec("three-color", (4,), instances=2, targets=("chimera",), tries=2, seed=12)
    a, b = exp.rows_to_csv(exp.run_experiment(spec)), exp.rows_to_csv(exp.run_experiment(spec))
    if a != b:
        return False, "CSV differs between identical runs"
    if a.splitlines()[0] != ",".join(exp.COLUMNS):
        return False, "header"
    rows = exp.parse_rows(a)
    rng = np.random.default_rng(13)
    shuffled = [rows[i] for i in rng.permutation(len(rows))]
    if exp.summarize(rows) != exp.summarize(shuffled):
        return False, "summary depends on row order"
    return True, "byte-identical CSV, order-free summary"


CHECKS = [
    Check("ising", "merge is additive", check_merge_linearity),
    Check("ising", "global flip negates fields", check_spin_flip),
    Check("ising", "brute force below random states", check_brute_force_bound),
    Check("encoding", "ground manifold exact", check_ground_manifold),
    Check("encoding", "interaction exactness", interaction_exactness),
    Check("encoding", "domain-wall density bound", check_density),
    Check("encoding", "gauge cancellation", check_gauge_cancellation),
    Check("encoding", "extra wall pair gap", check_penalty_gap),
    Check("encoding", "order constraint", check_order_constraint),
    Check("problems", "oracle equivalence", oracle_equivalence),
    Check("problems", "conflict symmetry", check_conflict_symmetry),
    Check("problems", "edge monotonicity", check_monotonicity),
    Check("mixers", "subspace preservation", check_mixers),
    Check("hardware", "chimera counts", check_chimera_counts),
    Check("hardware", "pegasus counts", check_pegasus_counts),
    Check("hardware", "edge distance metric", check_edge_distance_metric),
    Check("hardware", "domain-wall layering", check_dw_layers),
    Check("embedding", "embeddings valid", check_embeddings),
    Check("embedding", "size search contract", check_search_contract),
    Check("experiment", "determinism", check_experiment_determinism),
]


def run_checks(checks: Iterable[Check] = CHECKS) -> list[tuple[Check, bool, str]]:
    results = []
    for c in checks:
        try:
            ok, detail = c.fn()
        except Exception as exc:  # a crash is a failed property
            ok, detail = False, f"{type(exc).__name__}: {exc}"
        results.append((c, ok, detail))
    return results


def verify_all(echo: Callable[[str], None] = print) -> bool:
    """Run every property check, print one line each, return overall success."""
    results = run_checks()
    for c, ok, detail in results:
        echo(f"{'PASS' if ok else 'FAIL'}  {c.module:<10} {c.name}: {detail}")
    passed = sum(ok for _, ok, _ in results)
    echo(f"{passed}/{len(results)} properties passed")
    return passed == len(results)
