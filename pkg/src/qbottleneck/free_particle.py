"""Single-particle dynamics of free fermions and bosons on a graph.

Only the mode-transformation matrix ``A`` in ``b_i(t) = sum_j A_ij b_j(0)`` is
simulated; it is the same for both statistics.  On the star graph the
routing protocol swaps the center with one Fourier mode of the left leaves,
then with the matching Fourier mode of the right leaves, then back.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
from scipy.stats import binom, entropy as shannon_entropy

from ._constants import TOL
from .graphs import GraphSpecError, Tripartition, is_star, star
from .numerics import eigh, expm_from_eig, entropy_of_spectrum
from .permutations import Permutation, PermutationError


@dataclass(frozen=True)
class ModeHamiltonian:
    """Hermitian hopping matrix; the diagonal holds on-site fields."""

    matrix: np.ndarray

    def __post_init__(self):
        m = np.array(self.matrix, dtype=complex)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise ValueError(f"mode Hamiltonian must be square, got {m.shape}")
        if np.max(np.abs(m - m.conj().T), initial=0.0) > TOL.hermitian:
            raise ValueError("mode Hamiltonian is not Hermitian")
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)

    @property
    def n(self) -> int:
        return self.matrix.shape[0]

    def check_architecture(self, t: Tripartition, hop_cap: float = 1.0) -> None:
        """Raise unless hoppings sit on edges and have modulus at most ``hop_cap``."""
        if self.n != t.n:
            raise ValueError(f"{self.n} modes for a {t.n}-vertex graph")
        rows, cols = np.nonzero(np.abs(self.matrix) > 1e-15)
        for i, j in zip(rows, cols):
            if i < j:
                if not t.has_edge(int(i), int(j)):
                    raise GraphSpecError(f"hopping on non-edge ({i}, {j})")
                if abs(self.matrix[i, j]) > hop_cap + 1e-12:
                    raise ValueError(f"hopping ({i}, {j}) exceeds {hop_cap}")


@dataclass
class PulseSchedule:
    pulses: list = field(default_factory=list)

    def __post_init__(self):
        pulses = []
        for h, dur in self.pulses:
            h = h if isinstance(h, ModeHamiltonian) else ModeHamiltonian(h)
            if not dur >= 0:
                raise ValueError(f"negative pulse duration {dur}")
            pulses.append((h, float(dur)))
        sizes = {h.n for h, _ in pulses}
        if len(sizes) > 1:
            raise ValueError(f"pulses act on different mode counts: {sorted(sizes)}")
        self.pulses = pulses

    @property
    def n(self) -> int | None:
        return self.pulses[0][0].n if self.pulses else None

    @property
    def total_time(self) -> float:
        return sum(d for _, d in self.pulses)

    def __add__(self, other: "PulseSchedule") -> "PulseSchedule":
        return PulseSchedule(self.pulses + other.pulses)

    def to_json_obj(self) -> list[dict]:
        """Pulses as ``{"duration", "entries": [[i, j, re, im], ...]}`` (upper triangle)."""
        out = []
        for h, dur in self.pulses:
            m = h.matrix
            rows, cols = np.nonzero(np.abs(np.triu(m)) > 0)
            entries = [
                [int(i), int(j), float(m[i, j].real), float(m[i, j].imag)]
                for i, j in zip(rows, cols)
            ]
            out.append({"n": h.n, "duration": dur, "entries": entries})
        return out

    @classmethod
    def from_json_obj(cls, obj: Sequence[dict]) -> "PulseSchedule":
        pulses = []
        for p in obj:
            m = np.zeros((p["n"], p["n"]), dtype=complex)
            for i, j, re, im in p["entries"]:
                m[i, j] = complex(re, im)
                m[j, i] = complex(re, -im)
            pulses.append((ModeHamiltonian(m), p["duration"]))
        return cls(pulses)


def evolve_modes(s: PulseSchedule, n: int | None = None) -> np.ndarray:
    """Mode unitary ``A``; later pulses multiply on the left."""
    n = s.n if n is None else n
    if n is None:
        raise ValueError("empty schedule needs an explicit mode count")
    u = np.eye(n, dtype=complex)
    cache: dict[int, object] = {}
    for h, dur in s.pulses:
        if h.n != n:
            raise ValueError(f"pulse on {h.n} modes, expected {n}")
        key = id(h)
        if key not in cache:
            cache[key] = eigh(h.matrix)
        u = expm_from_eig(cache[key], -1j * dur) @ u
    return u


def _check_star_pairing(t: Tripartition, pairing: Permutation) -> list[int]:
    if not is_star(t) or t.n_l != t.n_r:
        raise GraphSpecError("the Fourier protocol needs a star graph with an even leaf count")
    if len(pairing) != t.n:
        raise PermutationError(f"pairing on {len(pairing)} sites, graph has {t.n}")
    right_of = []
    for l in t.left:
        r = pairing(l)
        if t.block(r) != "R" or pairing(r) != l:
            raise PermutationError("pairing must swap every left leaf with a right leaf")
    c = t.n_l
    if pairing(c) != c:
        raise PermutationError("pairing must fix the center")
    for l in t.left:
        right_of.append(pairing(l))
    return right_of


def star_fourier_protocol(n_per_side: int, pairing: Permutation | None = None) -> PulseSchedule:
    """Pulse schedule routing the global transposition ``pairing`` on ``star(2N)``.

    For each Fourier index ``k`` three pulses of width ``pi / (2 sqrt(N))``
    couple the center to the ``k``-th Fourier mode of the left leaves, then
    of the right leaves (ordered by their partners), then of the left again.
    Each coupling has unit modulus.  Defaults to the pairing ``l_j <-> r_j``.
    """
    if n_per_side < 1:
        raise ValueError(f"n_per_side must be >= 1, got {n_per_side}")
    t = star(2 * n_per_side)
    N = n_per_side
    if pairing is None:
        pairing = Permutation.from_transpositions(t.n, zip(t.left, t.right))
    right_of = _check_star_pairing(t, pairing)
    c = t.n_l
    dur = math.pi / (2 * math.sqrt(N))
    pulses = []
    j = np.arange(N)
    for k in range(N):
        w = np.exp(-2j * math.pi * j * k / N)
        h_l = np.zeros((t.n, t.n), dtype=complex)
        h_l[c, list(t.left)] = w
        h_l[list(t.left), c] = w.conj()
        h_r = np.zeros((t.n, t.n), dtype=complex)
        h_r[c, right_of] = w
        h_r[right_of, c] = w.conj()
        hl, hr = ModeHamiltonian(h_l), ModeHamiltonian(h_r)
        pulses += [(hl, dur), (hr, dur), (hl, dur)]
    return PulseSchedule(pulses)


def column_leak(u: np.ndarray, p: Permutation) -> float:
    """Largest deviation of ``u`` from a phase-permutation matrix for ``p``."""
    a = np.abs(np.asarray(u))
    if a.shape != (len(p), len(p)):
        raise ValueError(f"unitary of shape {a.shape} for a permutation of size {len(p)}")
    idx = np.arange(len(p))
    dest = np.asarray(p.images)
    target = a[dest, idx]
    off = a.copy()
    off[dest, idx] = 0.0
    return float(max(np.max(1.0 - target, initial=0.0), np.max(off, initial=0.0)))


def verify_routing(u: np.ndarray, p: Permutation, tol: float = TOL.routing_leak) -> tuple[bool, list[complex]]:
    """Check ``|A[p(i), i]| >= 1 - tol`` with every other column entry below ``tol``."""
    u = np.asarray(u)
    ok = column_leak(u, p) <= tol
    phases = [complex(u[p(i), i]) for i in range(len(p))]
    return ok, phases


def phase_correct(u: np.ndarray, p: Permutation) -> PulseSchedule:
    """One on-site pulse that removes the phases left by a routing unitary.

    Angles ``theta`` in ``(-pi, pi]`` solve ``exp(-i theta) * phase = 1`` at
    each destination site.  The duration ``max|theta| / sqrt(n)`` keeps every
    field within ``sqrt(n)`` for ``n`` modes.
    """
    ok, phases = verify_routing(u, p)
    if not ok:
        raise ValueError("unitary does not route the permutation; cannot phase-correct")
    n = len(p)
    theta = np.zeros(n)
    for i, ph in enumerate(phases):
        ang = math.atan2(ph.imag, ph.real)
        theta[p(i)] = math.pi if ang <= -math.pi else ang
    big = float(np.max(np.abs(theta)))
    if big <= TOL.phase:
        return PulseSchedule([(ModeHamiltonian(np.zeros((n, n))), 0.0)])
    dur = big / math.sqrt(n)
    return PulseSchedule([(ModeHamiltonian(np.diag(theta / dur)), dur)])


def routed_unitary(n_per_side: int, pairing: Permutation | None = None) -> tuple[np.ndarray, PulseSchedule]:
    """Protocol plus phase correction: ``(A, schedule)``."""
    s = star_fourier_protocol(n_per_side, pairing)
    u = evolve_modes(s)
    p = pairing or Permutation.from_transpositions(
        2 * n_per_side + 1, zip(range(n_per_side), range(n_per_side + 1, 2 * n_per_side + 1))
    )
    full = s + phase_correct(u, p)
    return evolve_modes(full), full


# --- correlation matrices ---------------------------------------------------


@dataclass(frozen=True)
class CorrelationMatrix:
    """Single-particle density matrix of a number-conserving Gaussian state.

    Under the mode unitary ``A`` it transforms as ``A G A^dagger``.
    """

    matrix: np.ndarray

    def __post_init__(self):
        g = np.array(self.matrix, dtype=complex)
        if g.ndim != 2 or g.shape[0] != g.shape[1]:
            raise ValueError(f"correlation matrix must be square, got {g.shape}")
        if np.max(np.abs(g - g.conj().T), initial=0.0) > TOL.hermitian:
            raise ValueError("correlation matrix is not Hermitian")
        w = np.linalg.eigvalsh(g) if g.size else np.zeros(0)
        if w.size and (w.min() < -TOL.correlation_slack or w.max() > 1 + TOL.correlation_slack):
            raise ValueError(f"eigenvalues outside [0, 1]: [{w.min():.3g}, {w.max():.3g}]")
        g.setflags(write=False)
        object.__setattr__(self, "matrix", g)

    @property
    def n(self) -> int:
        return self.matrix.shape[0]

    def evolve(self, u: np.ndarray) -> "CorrelationMatrix":
        u = np.asarray(u)
        if u.shape != self.matrix.shape:
            raise ValueError(f"unitary shape {u.shape} vs correlation {self.matrix.shape}")
        g = u @ self.matrix @ u.conj().T
        return CorrelationMatrix(0.5 * (g + g.conj().T))

    @property
    def particle_number(self) -> float:
        return float(np.trace(self.matrix).real)


def mode_entanglement_gaussian(c: CorrelationMatrix, cut: Sequence[int]) -> float:
    """Entropy in bits of the Gaussian state restricted to the modes in ``cut``."""
    cut = sorted(set(int(i) for i in cut))
    if any(i < 0 or i >= c.n for i in cut):
        raise ValueError(f"cut {cut} out of range for {c.n} modes")
    if not cut:
        return 0.0
    lam = np.clip(np.linalg.eigvalsh(c.matrix[np.ix_(cut, cut)]), 0.0, 1.0)
    return entropy_of_spectrum(lam) + entropy_of_spectrum(1.0 - lam)


def routed_pair_experiment(n_per_side: int) -> dict:
    """Route R modes that each share one particle with an ancilla mode.

    The ancilla block is appended after the star's modes and never evolves.
    Returns the R-block mode entanglement before and after routing.
    """
    t = star(2 * n_per_side)
    u_sys, _ = routed_unitary(n_per_side)
    n_sys, n_anc = t.n, t.n_r
    g = np.zeros((n_sys + n_anc,) * 2, dtype=complex)
    for a, r in enumerate(t.right):
        anc = n_sys + a
        g[np.ix_([r, anc], [r, anc])] = 0.5
    u = np.eye(n_sys + n_anc, dtype=complex)
    u[:n_sys, :n_sys] = u_sys
    c0 = CorrelationMatrix(g)
    c1 = c0.evolve(u)
    right = list(t.right)
    s0 = mode_entanglement_gaussian(c0, right)
    s1 = mode_entanglement_gaussian(c1, right)
    return {
        "n_per_side": n_per_side,
        "n_r": t.n_r,
        "entropy_before": s0,
        "entropy_after": s1,
        "entropy_delta": abs(s1 - s0),
        "particle_number_drift": abs(c1.particle_number - c0.particle_number),
    }


def protocol_sweep(ns: Sequence[int]) -> list[dict]:
    """Routing time, leakage and transferred entanglement for each ``N``."""
    rows = []
    for N in ns:
        s = star_fourier_protocol(N)
        u = evolve_modes(s)
        t = star(2 * N)
        p = Permutation.from_transpositions(t.n, zip(t.left, t.right))
        corr = phase_correct(u, p)
        u_full = evolve_modes(corr, t.n) @ u
        ok, phases = verify_routing(u_full, p)
        rows.append(
            {
                "N": N,
                "protocol_time": s.total_time,
                "correction_time": corr.total_time,
                "total_time": s.total_time + corr.total_time,
                "max_column_leak": column_leak(u_full, p),
                "max_phase_error": max(abs(ph - 1) for ph in phases),
                "routed": bool(ok),
                "entropy_delta": routed_pair_experiment(N)["entropy_delta"],
            }
        )
    return rows


# --- closed-form oracles ----------------------------------------------------


def dicke_state(n: int, k: int) -> np.ndarray:
    idx = np.arange(1 << n)
    mask = np.bitwise_count(idx.astype(np.uint64)) == k
    v = mask.astype(complex)
    return v / math.sqrt(mask.sum())


def dicke_fourier_occupancy(n: int) -> float:
    """Occupancy of the zero-momentum mode in the half-filled Dicke state on ``n`` sites.

    Sites are hard-core (occupations 0 or 1); computed by applying
    ``f_0 = n^{-1/2} sum_j b_j`` to the state vector.
    """
    if n < 2 or n % 2:
        raise ValueError(f"n must be even and >= 2, got {n}")
    if n > 16:
        raise ValueError(f"n = {n} exceeds the brute-force limit 16")
    psi = dicke_state(n, n // 2)
    idx = np.arange(1 << n)
    out = np.zeros_like(psi)
    for j in range(n):
        bit = 1 << (n - 1 - j)
        occ = (idx & bit) != 0
        out[idx[occ] ^ bit] += psi[occ]
    out /= math.sqrt(n)
    return float(np.vdot(out, out).real)


def dicke_occupancy_report(n: int) -> dict:
    """Brute-force occupancy next to ``(n+2)/4`` and the printed ``sqrt(n+2)/4``."""
    return {
        "n": n,
        "brute_force": dicke_fourier_occupancy(n),
        "closed_form": (n + 2) / 4,
        "printed": math.sqrt(n + 2) / 4,
    }


def beam_splitter_entropy(n_particles: int) -> float:
    """Mode entanglement in bits after a 50/50 beam splitter acts on ``|n, 0>``."""
    if n_particles < 1:
        raise ValueError(f"need at least one particle, got {n_particles}")
    pmf = binom.pmf(np.arange(n_particles + 1), n_particles, 0.5)
    return float(shannon_entropy(pmf, base=2))
