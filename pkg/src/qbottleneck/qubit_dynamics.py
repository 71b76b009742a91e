"""Exact statevector dynamics for small tripartite qubit systems.

States are complex numpy vectors of length ``2**n`` with qubit 0 as the most
significant bit.  Extra qubits beyond the graph's vertices are treated as
ancillas that no gate or Hamiltonian touches.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, NamedTuple, Sequence

import numpy as np
from scipy.stats import unitary_group

from ._constants import TOL
from .graphs import GraphSpecError, Tripartition, require_bottleneck, star, validate
from .numerics import eigh, expm_from_eig, operator_norm, reduced_density_from_state, entropy_of_spectrum
from .pauli import PauliSum, coupling_terms, sample_bottleneck_hamiltonian
from .permutations import Permutation


class ArchitectureError(ValueError):
    """A circuit or Hamiltonian does not respect the graph's edges."""


# --- states ----------------------------------------------------------------


def n_qubits_of(psi) -> int:
    size = np.asarray(psi).size
    n = size.bit_length() - 1
    if size < 1 or (1 << n) != size:
        raise ValueError(f"state length {size} is not a power of two")
    return n


def as_state(psi, n: int | None = None) -> np.ndarray:
    v = np.asarray(psi, dtype=complex).ravel()
    m = n_qubits_of(v)
    if n is not None and m != n:
        raise ValueError(f"state has {m} qubits, expected {n}")
    nrm = np.linalg.norm(v)
    if abs(nrm - 1.0) > TOL.norm:
        raise ValueError(f"state is not normalized (norm {nrm:.12g})")
    return v


def basis_state(bits: Sequence[int] | str) -> np.ndarray:
    bits = [int(b) for b in bits]
    v = np.zeros(1 << len(bits), dtype=complex)
    v[int("".join(map(str, bits)) or "0", 2)] = 1.0
    return v


def ghz_state(n: int) -> np.ndarray:
    v = np.zeros(1 << n, dtype=complex)
    v[0] = v[-1] = 1 / math.sqrt(2)
    return v


def haar_state(n: int, rng: np.random.Generator) -> np.ndarray:
    v = rng.standard_normal(1 << n) + 1j * rng.standard_normal(1 << n)
    return v / np.linalg.norm(v)


def entropy_across_cut(psi, cut: Sequence[int], base: float = 2.0) -> float:
    """Von Neumann entropy (bits by default) of the reduced state on ``cut``."""
    v = np.asarray(psi, dtype=complex).ravel()
    n = n_qubits_of(v)
    cut = sorted(set(int(q) for q in cut))
    if any(q < 0 or q >= n for q in cut):
        raise ValueError(f"cut {cut} out of range for {n} qubits")
    if not cut or len(cut) == n:
        return 0.0
    rest = [q for q in range(n) if q not in cut]
    mat = v.reshape([2] * n).transpose(cut + rest).reshape(1 << len(cut), -1)
    s = np.linalg.svd(mat, compute_uv=False)
    return entropy_of_spectrum(s**2, base)


# --- Hamiltonian schedules ---------------------------------------------------


@dataclass
class Schedule:
    """Piecewise-constant program: ``(hamiltonian, duration)`` segments in time order."""

    segments: list = field(default_factory=list)

    def __post_init__(self):
        segs = []
        for h, dur in self.segments:
            if not isinstance(h, PauliSum):
                raise TypeError("schedule segments need PauliSum Hamiltonians")
            if not dur >= 0:
                raise ValueError(f"negative segment duration {dur}")
            if not h.is_hermitian(1e-12):
                raise ValueError("segment Hamiltonian is not Hermitian")
            segs.append((h, float(dur)))
        sizes = {h.n for h, _ in segs}
        if len(sizes) > 1:
            raise ValueError(f"segments act on different qubit counts: {sorted(sizes)}")
        self.segments = segs

    @property
    def n(self) -> int | None:
        return self.segments[0][0].n if self.segments else None

    @property
    def total_time(self) -> float:
        return sum(d for _, d in self.segments)

    def min_width(self) -> float:
        return min((d for _, d in self.segments), default=math.inf)

    def is_piecewise(self, width: float) -> bool:
        return self.min_width() >= width - 1e-12

    def __add__(self, other: "Schedule") -> "Schedule":
        return Schedule(self.segments + other.segments)


def _segment_unitary(h: PauliSum, dur: float, n: int) -> np.ndarray:
    if h.n != n:
        raise ValueError(f"Hamiltonian on {h.n} qubits applied to {n}-qubit state")
    return expm_from_eig(eigh(h.to_matrix()), -1j * dur)


def evolve(psi, s: Schedule) -> np.ndarray:
    """Apply each segment's ``exp(-i H dt)`` in order.

    Hamiltonians on fewer qubits than the state act on its leading qubits.
    """
    v = as_state(psi)
    n = n_qubits_of(v)
    for h, dur in s.segments:
        if h.n > n:
            raise ValueError(f"Hamiltonian on {h.n} qubits applied to {n}-qubit state")
        u = _segment_unitary(h, dur, h.n)
        v = (u @ v.reshape(1 << h.n, -1)).ravel()
    return v


def propagator(s: Schedule, n: int | None = None) -> np.ndarray:
    n = s.n if n is None else n
    if n is None:
        return np.eye(1, dtype=complex)
    if n > TOL.max_dense_qubits:
        raise ValueError(f"{n} qubits exceeds the dense propagator limit {TOL.max_dense_qubits}")
    u = np.eye(1 << n, dtype=complex)
    for h, dur in s.segments:
        u = _segment_unitary(h, dur, n) @ u
    return u


# --- gate circuits -----------------------------------------------------------


class Gate(NamedTuple):
    qubits: tuple
    matrix: np.ndarray


@dataclass
class LocalCircuit:
    """Layers of 1- and 2-qubit gates; each layer has disjoint supports."""

    layers: list = field(default_factory=list)

    def __post_init__(self):
        layers = []
        for layer in self.layers:
            gates = []
            used: set = set()
            for g in layer:
                qs = tuple(int(q) for q in g[0])
                mat = np.asarray(g[1], dtype=complex)
                if len(qs) not in (1, 2) or len(set(qs)) != len(qs):
                    raise ArchitectureError(f"gate support {qs} must be 1 or 2 distinct qubits")
                if mat.shape != (1 << len(qs),) * 2:
                    raise ValueError(f"gate on {qs} has matrix shape {mat.shape}")
                if used & set(qs):
                    raise ArchitectureError(f"overlapping supports within a layer at {qs}")
                used |= set(qs)
                gates.append(Gate(qs, mat))
            layers.append(gates)
        self.layers = layers

    @property
    def depth(self) -> int:
        return len(self.layers)

    def check_architecture(self, t: Tripartition) -> None:
        for k, layer in enumerate(self.layers):
            for g in layer:
                if any(q >= t.n for q in g.qubits):
                    raise ArchitectureError(f"layer {k}: gate on {g.qubits} leaves the graph")
                if len(g.qubits) == 2 and not t.has_edge(*g.qubits):
                    raise ArchitectureError(f"layer {k}: gate on non-edge {g.qubits}")


def apply_gate(psi: np.ndarray, gate: Gate, n: int) -> np.ndarray:
    """Apply ``gate`` to a state, or to each column of a ``2^n x m`` block."""
    batch = psi.size >> n
    qs = list(gate.qubits)
    k = len(qs)
    t = psi.reshape([2] * n + [batch])
    g = gate.matrix.reshape([2] * (2 * k))
    t = np.tensordot(g, t, axes=(list(range(k, 2 * k)), qs))
    rest = [q for q in range(n) if q not in qs]
    order = qs + rest + [n]
    t = np.moveaxis(t, list(range(n + 1)), order)
    return t.reshape(psi.shape)


def apply_circuit(psi, c: LocalCircuit) -> np.ndarray:
    v = np.asarray(psi, dtype=complex)
    n = n_qubits_of(v if v.ndim == 1 else v[:, 0])
    for layer in c.layers:
        for g in layer:
            v = apply_gate(v, g, n)
    return v


def circuit_unitary(c: LocalCircuit, n: int) -> np.ndarray:
    if n > TOL.max_dense_qubits:
        raise ValueError(f"{n} qubits exceeds the dense limit {TOL.max_dense_qubits}")
    return apply_circuit(np.eye(1 << n, dtype=complex), c)


def permutation_unitary(p: Permutation) -> np.ndarray:
    """``U_p``: the state of qubit ``i`` moves to qubit ``p(i)``."""
    n = len(p)
    dim = 1 << n
    inv = p.inverse().images
    eye = np.eye(dim, dtype=complex).reshape([2] * n + [dim])
    return np.transpose(eye, list(inv) + [n]).reshape(dim, dim)


def random_local_circuit(
    t: Tripartition, depth: int, rng: np.random.Generator, p_two: float = 0.8
) -> LocalCircuit:
    """Architecture-respecting circuit of Haar-random 1- and 2-qubit gates."""
    edges = t.sorted_edges()
    layers = []
    for _ in range(depth):
        used: set = set()
        layer = []
        for idx in rng.permutation(len(edges)):
            i, j = edges[idx]
            if i in used or j in used or rng.random() > p_two:
                continue
            used |= {i, j}
            layer.append(((i, j), unitary_group.rvs(4, random_state=rng)))
        for q in range(t.n):
            if q not in used and rng.random() < 0.5:
                layer.append(((q,), unitary_group.rvs(2, random_state=rng)))
        layers.append(layer)
    return LocalCircuit(layers)


# --- experiments ------------------------------------------------------------


def edge_projector_hamiltonian(t: Tripartition) -> PauliSum:
    """Sum over edges (leaf, center) of ``|1><1|_leaf (x) |-><-|_center``."""
    n = t.n
    terms: dict[str, complex] = {}
    for i, j in t.sorted_edges():
        leaf, c = (i, j) if t.block(j) == "C" else (j, i)
        for zl, xc, coeff in (("I", "I", 0.25), ("Z", "I", -0.25), ("I", "X", -0.25), ("Z", "X", 0.25)):
            letters = ["I"] * n
            letters[leaf], letters[c] = zl, xc
            key = "".join(letters)
            terms[key] = terms.get(key, 0) + coeff
    return PauliSum(n, terms)


class GHZResult(NamedTuple):
    final: np.ndarray
    fidelity: float
    entropy_before: float
    entropy_after: float
    time: float

    @property
    def average_rate(self) -> float:
        return (self.entropy_after - self.entropy_before) / self.time


def ghz_fast_entangling(n_leaves: int) -> GHZResult:
    """Grow a leaf GHZ state into an (N+1)-qubit GHZ state in time pi/N.

    Starts from GHZ on the leaves of ``star(n_leaves)`` with the center in
    ``|0>`` and evolves under the edge projectors for time ``pi / N``.
    """
    if not 2 <= n_leaves <= 11:
        raise ValueError(f"n_leaves must be in 2..11, got {n_leaves}")
    g = star(n_leaves)
    c = g.n_l
    n = g.n
    psi0 = np.zeros(1 << n, dtype=complex)
    all_leaves = sum(1 << (n - 1 - q) for q in range(n) if q != c)
    psi0[0] = psi0[all_leaves] = 1 / math.sqrt(2)
    dur = math.pi / n_leaves
    final = evolve(psi0, Schedule([(edge_projector_hamiltonian(g), dur)]))
    fid = float(abs(np.vdot(ghz_state(n), final)) ** 2)
    return GHZResult(
        final,
        fid,
        entropy_across_cut(psi0, [c]),
        entropy_across_cut(final, [c]),
        dur,
    )


def ste_check(c: LocalCircuit, psi, t: Tripartition) -> tuple[float, float]:
    """``(|Delta S_R|, 2 * depth * N_C)`` for a circuit applied to ``psi``.

    ``psi`` may carry ancilla qubits after the graph's vertices; the entropy
    is that of the reduced state on R.
    """
    rep = validate(t)
    if not rep.valid:
        raise GraphSpecError(f"tripartition has L-R edges: {list(rep.violating_edges)}")
    c.check_architecture(t)
    v = as_state(psi)
    r = list(t.right)
    before = entropy_across_cut(v, r)
    after = entropy_across_cut(apply_circuit(v, c), r)
    return abs(after - before), 2.0 * c.depth * t.n_c


def sie_bound(h: PauliSum, t: Tripartition) -> float:
    """``2 * ||H_LC coupling|| * log2(min(dim A, dim B))``."""
    coup = coupling_terms(h, t, "L", "C")
    if not len(coup):
        return 0.0
    sup = coup.support()
    a = sum(1 for q in sup if t.block(q) == "L")
    b = sum(1 for q in sup if t.block(q) == "C")
    return 2.0 * operator_norm(coup.to_matrix()) * min(a, b)


def sie_rate_check(h: PauliSum, psi, t: Tripartition, step: float = TOL.sie_step) -> tuple[float, float]:
    """Finite-difference entangling rate ``dS_L/dt`` at ``t=0`` and its SIE bound.

    Uses the central difference of the L-entropy with step ``step``.
    """
    rep = validate(t)
    if not rep.valid:
        raise GraphSpecError(f"tripartition has L-R edges: {list(rep.violating_edges)}")
    if h.n != t.n:
        raise ValueError(f"Hamiltonian on {h.n} qubits, graph has {t.n}")
    v = as_state(psi)
    n = n_qubits_of(v)
    eig = eigh(h.to_matrix())
    left = list(t.left)

    def s_at(tau: float) -> float:
        u = expm_from_eig(eig, -1j * tau)
        return entropy_across_cut((u @ v.reshape(1 << h.n, -1)).ravel(), left)

    if n < h.n:
        raise ValueError(f"state has {n} qubits, Hamiltonian needs {h.n}")
    rate = (s_at(step) - s_at(-step)) / (2 * step)
    return rate, sie_bound(h, t)


def random_piecewise_schedule(
    t: Tripartition, time: float, rng: np.random.Generator, worst_case: bool = True
) -> Schedule:
    """Random bottleneck Hamiltonians on equal segments of width at least ``1/sqrt(N_L)``."""
    if time <= 0:
        return Schedule([])
    width = 1.0 / math.sqrt(t.n_l)
    nseg = max(1, int(math.floor(time / width + 1e-12)))
    segs = []
    for _ in range(nseg):
        h_lc, h_r = sample_bottleneck_hamiltonian(t, rng, worst_case=worst_case)
        segs.append((h_lc + h_r, time / nseg))
    return Schedule(segs)


class CapacityResult(NamedTuple):
    mean_delta_s_l: float
    reference: float
    values: np.ndarray

    def tail_fractions(self, gammas: Sequence[float], time: float) -> list[float]:
        return markov_tail(self.values, gammas, time)


def markov_tail(values, gammas: Sequence[float], time: float) -> list[float]:
    """Fraction of capacities with ``C >= gamma * time`` for each ``gamma``."""
    vals = np.asarray(values, float)
    return [float(np.mean(vals >= g * time)) for g in gammas]


def capacity_experiment(
    t: Tripartition,
    schedule_sampler: Callable[[Tripartition, float, np.random.Generator], Schedule] | None = None,
    trials: int = 200,
    time: float = 1.0,
    seed=None,
) -> CapacityResult:
    """Mean ``|Delta S_L|`` over Haar-random initial states for one sampled schedule.

    The reference value is ``N_C * sqrt(N_L) * time`` (prefactor 1, not a bound).
    """
    require_bottleneck(t)
    if t.n > TOL.max_dense_qubits:
        raise ValueError(f"{t.n} qubits exceeds the dense limit {TOL.max_dense_qubits}")
    if trials < 1:
        raise ValueError("trials must be >= 1")
    sampler = schedule_sampler or random_piecewise_schedule
    ss = np.random.SeedSequence(seed)
    sched_seq, state_seq = ss.spawn(2)
    sched = sampler(t, time, np.random.default_rng(sched_seq))
    # a run shorter than the minimum width is a single segment
    if sched.segments and not sched.is_piecewise(min(1.0 / math.sqrt(t.n_l), sched.total_time)):
        raise ValueError("schedule segments are narrower than 1/sqrt(N_L)")
    u = propagator(sched, t.n)
    left = list(t.left)
    vals = np.empty(trials)
    for i, child in enumerate(state_seq.spawn(trials)):
        psi = haar_state(t.n, np.random.default_rng(child))
        vals[i] = abs(entropy_across_cut(u @ psi, left) - entropy_across_cut(psi, left))
    ref = t.n_c * math.sqrt(t.n_l) * time
    return CapacityResult(float(np.mean(vals)), ref, vals)
