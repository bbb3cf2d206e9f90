import itertools

import numpy as np
import pytest

from domainwall.encoding import (
    EncodedProblem,
    Encoding,
    PenaltyStrengthWarning,
    VariableHandle,
    build_k_hot_ensemble,
    decode,
    delta_expansion,
    encoding_metrics,
    is_valid,
)
from domainwall.exceptions import AliasingError, DomainError, InfeasibleError
from domainwall.ising import bits_to_spins, brute_force, energy


def single(kind, m, lam=1.0):
    p = EncodedProblem()
    v = p.add_variable(kind, m, lam)
    return p, v


def pair(kind_a, m_a, kind_b=None, m_b=None, lam=1.0):
    p = EncodedProblem()
    a = p.add_variable(kind_a, m_a, lam)
    b = p.add_variable(kind_b or kind_a, m_b or m_a, lam)
    return p, a, b


def relative_valid_energies(p, values_list):
    core = p.core_model()
    return {
        vals: energy(p.model, p.encode(vals)) - energy(core, p.encode(vals))
        for vals in values_list
    }


class TestDomainWallCore:
    def test_m5_coefficients(self):
        p, v = single("dw", 5)
        m = p.model
        assert v.n_qubits == 4
        assert list(m.field_vector()) == [1.0, 0.0, 0.0, -1.0]
        assert dict(m.J) == {(0, 1): -1.0, (1, 2): -1.0, (2, 3): -1.0}

    def test_m5_ground_states(self):
        p, _ = single("dw", 5)
        assert sorted(brute_force(p.model).bitstrings) == ["0000", "1000", "1100", "1110", "1111"]

    def test_m2_is_a_plain_qubit(self):
        p, v = single("dw", 2)
        g = brute_force(p.model)
        assert v.n_qubits == 1
        assert dict(p.model.J) == {} and dict(p.model.h) == {}
        assert len(g.states) == 2

    def test_m3_lambda2(self):
        p, _ = single("dw", 3, 2.0)
        g = brute_force(p.model)
        assert sorted(g.bitstrings) == ["00", "10", "11"]
        assert g.spectrum_gap == 8

    @pytest.mark.parametrize("m", range(3, 9))
    def test_extra_wall_pair_costs_four_lambda(self, m):
        lam = 1.5
        p, _ = single("dw", m, lam)
        ground = energy(p.model, bits_to_spins("0" * (m - 1)))
        three_walls = energy(p.model, bits_to_spins("01" + "0" * (m - 3)))
        assert three_walls - ground == pytest.approx(4 * lam)

    def test_domain_errors(self):
        p = EncodedProblem()
        with pytest.raises(DomainError):
            p.add_domain_wall_variable(1)
        with pytest.raises(DomainError):
            p.add_domain_wall_variable(3, 0.0)


class TestOneHotCore:
    def test_m4(self):
        p, v = single("onehot", 4)
        m = p.model
        assert v.n_qubits == 4
        assert sorted(m.J.values()) == [1.0] * 6
        assert list(m.field_vector()) == [-2.0] * 4
        g = brute_force(m)
        assert g.energy == -4
        assert len(g.states) == 4
        assert g.spectrum_gap == 2

    def test_m2(self):
        p, _ = single("onehot", 2)
        assert dict(p.model.J) == {(0, 1): 1.0}
        assert dict(p.model.h) == {}
        assert sorted(brute_force(p.model).bitstrings) == ["01", "10"]

    def test_m3(self):
        p, _ = single("onehot", 3)
        assert sorted(brute_force(p.model).bitstrings) == ["001", "010", "100"]

    def test_domain_error(self):
        with pytest.raises(DomainError):
            EncodedProblem().add_one_hot_variable(1)


class TestDelta:
    def test_dw_interior(self):
        _, v = single("dw", 5)
        assert delta_expansion(v, 2) == (0.0, {2: 0.5, 1: -0.5})

    def test_dw_first_value_uses_virtual_spin(self):
        _, v = single("dw", 5)
        const, terms = delta_expansion(v, 0)
        assert (const, terms) == (0.5, {0: 0.5})
        assert const + terms[0] * 1 == 1  # bits 0000

    def test_one_hot(self):
        _, v = single("onehot", 4)
        assert delta_expansion(v, 1) == (0.5, {1: -0.5})

    @pytest.mark.parametrize("kind", ["dw", "onehot"])
    def test_indicator_on_valid_states(self, kind):
        p, v = single(kind, 5)
        for value in range(5):
            s = p.encode([value])
            for i in range(5):
                const, terms = delta_expansion(v, i)
                got = const + sum(c * s[q] for q, c in terms.items())
                assert got == (1 if i == value else 0)

    def test_out_of_range(self):
        _, v = single("dw", 3)
        with pytest.raises(DomainError):
            delta_expansion(v, 3)


class TestValuePenalty:
    def test_dw(self):
        p, v = single("dw", 3)
        p.add_value_penalty(v, 1, 2.0)
        rel = relative_valid_energies(p, [(0,), (1,), (2,)])
        assert [rel[(x,)] for x in range(3)] == [0, 2, 0]

    def test_zero_weight_is_noop(self):
        p, v = single("dw", 3)
        before = p.model
        p.add_value_penalty(v, 1, 0.0)
        assert p.model == before

    def test_one_hot(self):
        p, v = single("onehot", 3)
        p.add_value_penalty(v, 0, 5.0)
        rel = relative_valid_energies(p, [(0,), (1,), (2,)])
        assert [rel[(x,)] for x in range(3)] == [5, 0, 0]


class TestInteraction:
    def test_two_z2_identity(self):
        p, a, b = pair("dw", 2)
        p.add_interaction(a, b, np.eye(2))
        m = p.model
        assert dict(m.J) == {(0, 1): 0.5}
        assert m.offset == 0.5
        for s in itertools.product((1, -1), repeat=2):
            assert energy(m, s) == (1 if s[0] == s[1] else 0)

    def test_two_z3_identity(self):
        p, a, b = pair("dw", 3)
        p.add_interaction(a, b, np.eye(3))
        # hand expansion of sum_i delta_i(a) delta_i(b)
        assert dict(p.model.J) == {(0, 1): -1.0, (0, 2): 0.5, (0, 3): -0.25, (1, 2): -0.25, (1, 3): 0.5, (2, 3): -1.0}
        inter = [k for k in p.model.J if (k[0] < 2) != (k[1] < 2)]
        assert len(inter) == 3 * 3 - 5

    def test_zero_matrix_adds_nothing(self):
        p, a, b = pair("dw", 3)
        before = p.model
        p.add_interaction(a, b, np.zeros((3, 3)))
        assert p.model == before

    def test_constant_matrix_is_pure_offset(self):
        p, a, b = pair("dw", 4)
        core = p.model
        p.add_interaction(a, b, np.full((4, 4), 2.5))
        assert dict(p.model.J) == dict(core.J)
        assert dict(p.model.h) == dict(core.h)
        assert p.model.offset == pytest.approx(core.offset + 2.5)

    @pytest.mark.parametrize("kinds", [("dw", "dw"), ("onehot", "onehot"), ("dw", "onehot")])
    def test_valid_pairs_reproduce_matrix(self, kinds):
        rng = np.random.default_rng(3)
        for _ in range(10):
            m, n = (int(x) for x in rng.integers(2, 6, size=2))
            E = rng.normal(size=(m, n))
            p, a, b = pair(kinds[0], m, kinds[1], n)
            p.add_interaction(a, b, E)
            rel = relative_valid_energies(p, list(itertools.product(range(m), range(n))))
            for (i, j), e in rel.items():
                assert e == pytest.approx(E[i, j], abs=1e-9)

    def test_dw_density_bound(self):
        rng = np.random.default_rng(5)
        p, a, b = pair("dw", 5, "dw", 4)
        p.add_interaction(a, b, rng.normal(size=(5, 4)))
        inter = [k for k in p.model.J if (k[0] < 4) != (k[1] < 4)]
        assert len(inter) <= 4 * 3

    def test_errors(self):
        p, a, b = pair("dw", 3)
        with pytest.raises(DomainError):
            p.add_interaction(a, b, np.eye(2))
        with pytest.raises(AliasingError):
            p.add_interaction(a, a, np.eye(3))
        _, c = single("dw", 4)
        with pytest.raises(DomainError):
            p.add_interaction(a, c, np.ones((3, 3)))


class TestDecode:
    def test_dw(self):
        _, v = single("dw", 5)
        assert decode(v, bits_to_spins("1100")) == 2
        assert decode(v, bits_to_spins("1010")) is None
        assert is_valid(v, bits_to_spins("0000"))
        assert not is_valid(v, bits_to_spins("0110"))

    def test_one_hot(self):
        _, v = single("onehot", 4)
        assert decode(v, bits_to_spins("0100")) == 1
        assert not is_valid(v, bits_to_spins("0000"))

    def test_encode_roundtrip(self):
        p = EncodedProblem()
        p.add_domain_wall_variable(4)
        p.add_one_hot_variable(3)
        for vals in itertools.product(range(4), range(3)):
            assert p.decode(p.encode(vals)) == list(vals)

    def test_handle_json_roundtrip(self):
        _, v = single("dw", 6, 2.0)
        assert VariableHandle.from_json(v.to_json()) == v


# zero-penalty table for vj >= vj1 at m = 3: lam * (vj - vj1 + 1)
ORDER_TABLE_M3 = {(0, 0): 1, (1, 0): 2, (1, 1): 1, (2, 0): 3, (2, 1): 2, (2, 2): 1}


class TestOrderConstraint:
    def test_m3_table(self):
        p, a, b = pair("dw", 3)
        p.add_order_constraint(a, b, 1.0)
        rel = relative_valid_energies(p, list(itertools.product(range(3), repeat=2)))
        zero = sorted(k for k, e in rel.items() if abs(e) < 1e-12)
        assert zero == [(0, 1), (0, 2), (1, 2)]
        for k, e in rel.items():
            assert e == pytest.approx(ORDER_TABLE_M3.get(k, 0))

    def test_m2(self):
        p, a, b = pair("dw", 2)
        p.add_order_constraint(a, b, 1.0)
        rel = relative_valid_energies(p, list(itertools.product(range(2), repeat=2)))
        assert sorted(k for k, e in rel.items() if abs(e) < 1e-12) == [(0, 1)]

    def test_ground_states_over_all_spins(self):
        p, a, b = pair("dw", 3, lam=2.0)
        p.add_order_constraint(a, b, 1.0)
        g = brute_force(p.model)
        assert sorted(tuple(p.decode(s)) for s in g.states) == [(0, 1), (0, 2), (1, 2)]

    def test_errors(self):
        p = EncodedProblem()
        a = p.add_domain_wall_variable(3)
        b = p.add_one_hot_variable(3)
        c = p.add_domain_wall_variable(4)
        with pytest.raises(DomainError):
            p.add_order_constraint(a, b)
        with pytest.raises(DomainError):
            p.add_order_constraint(a, c)
        with pytest.raises(AliasingError):
            p.add_order_constraint(a, a)


class TestKHot:
    def test_two_of_four(self):
        p = build_k_hot_ensemble(2, 4)
        g = brute_force(p.model)
        decoded = sorted(tuple(p.decode(s)) for s in g.states)
        assert decoded == list(itertools.combinations(range(4), 2))

    def test_k1_is_plain_variable(self):
        assert len(brute_force(build_k_hot_ensemble(1, 3).model).states) == 3

    def test_forced(self):
        p = build_k_hot_ensemble(3, 3)
        g = brute_force(p.model)
        assert [p.decode(s) for s in g.states] == [[0, 1, 2]]

    def test_infeasible(self):
        with pytest.raises(InfeasibleError):
            build_k_hot_ensemble(4, 3)


class TestMetrics:
    def test_table(self):
        assert tuple(vars(encoding_metrics("dw", 7)).values()) == (6, 5, "linear")
        assert tuple(vars(encoding_metrics("onehot", 4)).values()) == (4, 6, "complete")
        assert tuple(vars(encoding_metrics(Encoding.BINARY, 5)).values()) == (3, None, None)

    @pytest.mark.parametrize("m", range(2, 9))
    def test_matches_built_cores(self, m):
        for kind in ("dw", "onehot"):
            p, v = single(kind, m)
            met = encoding_metrics(kind, m)
            assert met.qubits == v.n_qubits
            assert met.core_couplers == len(p.model.couplers)


class TestPenaltyStrength:
    def test_warns_when_weak(self):
        p, a, b = pair("dw", 3, lam=0.5)
        p.add_interaction(a, b, np.eye(3))
        with pytest.warns(PenaltyStrengthWarning):
            weak = p.check_penalty_strength()
        assert weak == [a, b]
        assert p.recommended_lambda(a) == 2.0
