import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy.stats import unitary_group

from qbottleneck.graphs import GraphSpecError, Tripartition, star
from qbottleneck.numerics import is_unitary
from qbottleneck.pauli import PauliSum, sample_bottleneck_hamiltonian
from qbottleneck.permutations import Permutation
from qbottleneck.qubit_dynamics import (
    ArchitectureError,
    LocalCircuit,
    Schedule,
    apply_circuit,
    basis_state,
    capacity_experiment,
    circuit_unitary,
    entropy_across_cut,
    evolve,
    ghz_fast_entangling,
    ghz_state,
    haar_state,
    markov_tail,
    permutation_unitary,
    propagator,
    random_local_circuit,
    random_piecewise_schedule,
    sie_rate_check,
    ste_check,
)
from qbottleneck.witnesses import ste_suite, sie_suite

SWAP = np.array([[1, 0, 0, 0], [0, 0, 1, 0], [0, 1, 0, 0], [0, 0, 0, 1]], dtype=complex)


class TestEvolve:
    def test_empty(self):
        psi = haar_state(3, np.random.default_rng(0))
        assert np.allclose(evolve(psi, Schedule([])), psi)
        assert np.allclose(propagator(Schedule([]), 3), np.eye(8))

    def test_rabi(self):
        out = evolve(basis_state("0"), Schedule([(PauliSum(1, {"X": 1}), math.pi / 2)]))
        assert np.allclose(out, [0, -1j])

    def test_split_segments(self):
        h, _ = sample_bottleneck_hamiltonian(star(3), 2)
        psi = haar_state(4, np.random.default_rng(1))
        one = evolve(psi, Schedule([(h, 0.8)]))
        two = evolve(psi, Schedule([(h, 0.4), (h, 0.4)]))
        assert np.allclose(one, two, atol=1e-12)

    def test_negative_duration(self):
        with pytest.raises(ValueError):
            Schedule([(PauliSum(1, {"X": 1}), -1.0)])

    def test_dense_oracle(self):
        u = propagator(Schedule([(PauliSum(2, {"ZI": 1}), math.pi)]))
        assert np.allclose(u, np.diag(np.exp(-1j * math.pi * np.array([1, 1, -1, -1]))))

    def test_size_limits(self):
        with pytest.raises(ValueError):
            propagator(Schedule([(PauliSum(13, {"Z" * 13: 1}), 1.0)]))
        with pytest.raises(ValueError):
            evolve(basis_state("0"), Schedule([(PauliSum(2, {"ZZ": 1}), 1.0)]))
        with pytest.raises(ValueError):
            evolve([1, 1], Schedule([]))

    @settings(max_examples=25, deadline=None)
    @given(st.integers(0, 10**6), st.lists(st.floats(0, 3), min_size=1, max_size=4))
    def test_norm_preserved(self, seed, durations):
        g = star(3)
        rng = np.random.default_rng(seed)
        segs = [(sum(sample_bottleneck_hamiltonian(g, rng), PauliSum(g.n)), d) for d in durations]
        out = evolve(haar_state(g.n, rng), Schedule(segs))
        assert abs(np.linalg.norm(out) - 1) <= 1e-9
        assert is_unitary(propagator(Schedule(segs)))


class TestEntropy:
    def test_examples(self):
        bell = np.array([1, 0, 0, 1]) / math.sqrt(2)
        assert entropy_across_cut(bell, [0]) == pytest.approx(1)
        assert entropy_across_cut(basis_state("0110"), [1, 2]) == 0
        ghz = ghz_state(5)
        for cut in ([0], [1, 3], [0, 2, 4], [4]):
            assert entropy_across_cut(ghz, cut) == pytest.approx(1)
        assert entropy_across_cut(ghz, []) == 0 and entropy_across_cut(ghz, range(5)) == 0

    @settings(max_examples=30, deadline=None)
    @given(st.integers(0, 10**6), st.sets(st.integers(0, 5)))
    def test_complement_symmetry(self, seed, cut):
        psi = haar_state(6, np.random.default_rng(seed))
        comp = [q for q in range(6) if q not in cut]
        assert abs(entropy_across_cut(psi, cut) - entropy_across_cut(psi, comp)) <= 1e-9

    def test_out_of_range(self):
        with pytest.raises(ValueError):
            entropy_across_cut(basis_state("00"), [2])


class TestCircuits:
    def test_overlap_rejected(self):
        with pytest.raises(ArchitectureError):
            LocalCircuit([[((0, 1), SWAP), ((1, 2), SWAP)]])

    def test_gate_on_non_edge(self):
        c = LocalCircuit([[((0, 1), SWAP)]])
        with pytest.raises(ArchitectureError):
            c.check_architecture(star(4))

    def test_apply_matches_kron(self, rng):
        g1 = unitary_group.rvs(2, random_state=rng)
        g2 = unitary_group.rvs(4, random_state=rng)
        c = LocalCircuit([[((2,), g1), ((0, 1), g2)]])
        assert np.allclose(circuit_unitary(c, 3), np.kron(g2, g1))
        c_rev = LocalCircuit([[((1, 0), g2)]])
        assert np.allclose(circuit_unitary(c_rev, 2), SWAP @ g2 @ SWAP)

    def test_permutation_unitary(self):
        p = Permutation((1, 2, 0))
        u = permutation_unitary(p)
        assert np.allclose(u @ basis_state("100"), basis_state("010"))
        assert np.allclose(u @ basis_state("001"), basis_state("100"))
        swap01 = permutation_unitary(Permutation((1, 0)))
        assert np.allclose(swap01, SWAP)

    def test_random_circuit_respects_star(self, rng):
        g = star(6)
        c = random_local_circuit(g, 5, rng)
        c.check_architecture(g)
        assert c.depth == 5
        assert is_unitary(circuit_unitary(c, g.n))


class TestGHZ:
    @pytest.mark.parametrize("n", range(2, 9))
    def test_fidelity(self, n):
        r = ghz_fast_entangling(n)
        assert r.fidelity >= 1 - 1e-9
        assert r.entropy_before == pytest.approx(0, abs=1e-12)
        assert r.entropy_after == pytest.approx(1)
        assert r.time == pytest.approx(math.pi / n)
        assert r.average_rate == pytest.approx(n / math.pi)

    @pytest.mark.parametrize("n", [1, 12])
    def test_range(self, n):
        with pytest.raises(ValueError):
            ghz_fast_entangling(n)


class TestSTE:
    def test_identity(self):
        g = star(4)
        assert ste_check(LocalCircuit([]), haar_state(5, np.random.default_rng(0)), g) == (0.0, 0.0)

    def test_center_swaps_with_mixed_right(self):
        # R qubits 3, 4 share Bell pairs with ancillas 5, 6; one swap through the center
        g = star(4)
        n = 7
        psi = np.zeros(1 << n, dtype=complex)
        for a in (0, 1):
            for b in (0, 1):
                bits = [0, 0, 0, a, b, a, b]
                psi[int("".join(map(str, bits)), 2)] = 0.5
        c = LocalCircuit([[((2, 3), SWAP)]])
        delta, bound = ste_check(c, psi, g)
        assert bound == 2 and delta == pytest.approx(1.0) and delta <= bound

    def test_rejects_violation(self):
        c = LocalCircuit([[((0, 3), SWAP)]])
        with pytest.raises(ArchitectureError):
            ste_check(c, haar_state(5, np.random.default_rng(0)), star(4))

    def test_seeded_suite(self):
        recs = ste_suite(star(6), 1000, seed=11)
        assert all(r["passed"] for r in recs)


class TestSIE:
    def test_no_coupling(self):
        g = star(4)
        h = PauliSum(5, {"XIIII": 1.0, "IIXZI": 0.5, "IIIIY": 2.0})
        rate, bound = sie_rate_check(h, haar_state(5, np.random.default_rng(0)), g)
        assert bound == 0 and abs(rate) <= 1e-6

    def test_bell_generating(self):
        g = star(2)
        h = PauliSum(3, {"XYI": 1.0})
        rng = np.random.default_rng(3)
        psi = np.kron(np.kron(haar_state(1, rng), haar_state(1, rng)), haar_state(1, rng))
        rate, bound = sie_rate_check(h, psi, g)
        assert bound == pytest.approx(2.0)
        assert rate <= bound + 1e-4

    def test_seeded_suite(self):
        assert all(r["passed"] for r in sie_suite(star(5), 200, seed=5))

    def test_lr_graph_rejected(self):
        t = Tripartition(1, 1, 1, frozenset({(0, 2)}))
        with pytest.raises(GraphSpecError):
            sie_rate_check(PauliSum(3, {"ZII": 1}), basis_state("000"), t)


class TestCapacity:
    def test_zero_time(self):
        r = capacity_experiment(star(4), trials=5, time=0.0, seed=1)
        assert r.mean_delta_s_l == 0.0

    def test_deterministic(self):
        a = capacity_experiment(star(4), trials=1, time=0.7, seed=9)
        b = capacity_experiment(star(4), trials=1, time=0.7, seed=9)
        assert a.mean_delta_s_l == b.mean_delta_s_l

    def test_schedule_widths(self):
        g = star(6)
        s = random_piecewise_schedule(g, 2.0, np.random.default_rng(0))
        assert s.is_piecewise(1 / math.sqrt(g.n_l))
        assert s.total_time == pytest.approx(2.0)

    def test_narrow_schedule_rejected(self):
        def narrow(t, time, rng):
            h = PauliSum(t.n, {"Z" * t.n: 1})
            return Schedule([(h, 0.01)] * 3)

        with pytest.raises(ValueError):
            capacity_experiment(star(4), narrow, trials=2, time=0.03, seed=0)

    def test_markov_tail(self):
        assert markov_tail([0.0, 0.5, 1.0, 2.0], [0.1, 1.0, 3.0], 1.0) == [0.75, 0.5, 0.0]
