"""Randomised properties driven by hypothesis."""

import itertools

import networkx as nx
import numpy as np
from hypothesis import HealthCheck, given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from domainwall.embedding import EmbedParams, find_embedding
from domainwall.encoding import EncodedProblem, Encoding, decode
from domainwall.hardware import HardwareGraph, chimera
from domainwall.ising import IsingModel, bits_to_spins, energy, merge, spins_to_bits

KINDS = st.sampled_from([Encoding.DOMAIN_WALL, Encoding.ONE_HOT])
coef = st.floats(-10, 10, allow_nan=False)


@st.composite
def models(draw, max_n=6):
    n = draw(st.integers(1, max_n))
    h = draw(st.dictionaries(st.integers(0, n - 1), coef, max_size=n))
    pairs = list(itertools.combinations(range(n), 2))
    J = draw(st.dictionaries(st.sampled_from(pairs), coef, max_size=len(pairs))) if pairs else {}
    return IsingModel(n, h, J, draw(coef))


def spins_for(draw, n):
    return np.array(draw(st.lists(st.sampled_from([-1, 1]), min_size=n, max_size=n)))


@given(st.text("01", min_size=1, max_size=20))
def test_bits_roundtrip(bits):
    assert spins_to_bits(bits_to_spins(bits)) == bits


@given(st.data())
def test_merge_is_additive(data):
    a, b = data.draw(models()), data.draw(models())
    s = spins_for(data.draw, a.n_qubits + b.n_qubits)
    want = energy(a, s[: a.n_qubits]) + energy(b, s[a.n_qubits :])
    assert np.isclose(energy(merge(a, b), s), want, atol=1e-9)


@given(KINDS, st.integers(2, 12), st.data())
def test_encode_decode_roundtrip(kind, m, data):
    p = EncodedProblem()
    v = p.add_variable(kind, m)
    value = data.draw(st.integers(0, m - 1))
    assert decode(v, p.encode([value])) == value


@given(KINDS, st.integers(2, 6), st.data())
def test_valid_states_share_the_core_energy(kind, m, data):
    lam = data.draw(st.floats(0.1, 5))
    p = EncodedProblem()
    p.add_variable(kind, m, lam)
    es = {round(energy(p.model, p.encode([k])), 9) for k in range(m)}
    assert len(es) == 1


@settings(max_examples=60)
@given(KINDS, st.integers(2, 5), st.integers(2, 5), st.data())
def test_interaction_reproduces_matrix(kind, mk, ml, data):
    E = data.draw(arrays(np.float64, (mk, ml), elements=st.floats(-5, 5)))
    p = EncodedProblem()
    a, b = p.add_variable(kind, mk), p.add_variable(kind, ml)
    core = p.model
    p.add_interaction(a, b, E)
    for i, j in itertools.product(range(mk), range(ml)):
        s = p.encode([i, j])
        assert abs(energy(p.model, s) - energy(core, s) - E[i, j]) <= 1e-9


@settings(max_examples=25, deadline=None, suppress_health_check=[HealthCheck.too_slow])
@given(st.integers(2, 10), st.floats(0.1, 0.9), st.integers(0, 2**32))
def test_found_embeddings_are_valid(n, p, seed):
    G = nx.gnp_random_graph(n, p, seed=seed)
    if G.number_of_edges() == 0:
        return
    src = HardwareGraph.from_edges(n, G.edges)
    e = find_embedding(src, chimera(3), EmbedParams(max_tries=2, seed=seed % 1000))
    if e is not None:
        ok, problems = e.validate()
        assert ok, problems
        assert e.ratio() >= 1
