"""Seeded suites that check the inequality witnesses case by case.

Every suite takes a root ``seed`` and spawns one substream per case, so a
case's record depends only on the seed and its index.  Each record carries
a ``passed`` flag.
"""

from __future__ import annotations

import math

import numpy as np

from ._constants import TOL
from .bounds import circuit_permutation_distance, fannes_audenaert_witness, rho_z_chain
from .graphs import Tripartition
from .numerics import operator_norm
from .pauli import (
    base_case_bound,
    base_case_bound_corrected,
    commutator,
    sample_bottleneck_hamiltonian,
)
from .permutations import Permutation, full_pairing, global_transposition
from .qubit_dynamics import (
    apply_circuit,
    haar_state,
    random_local_circuit,
    sie_rate_check,
    ste_check,
)
from .trotter import error_sweep, loglog_slope


def _streams(seed, count: int) -> list[np.random.Generator]:
    return [np.random.default_rng(s) for s in np.random.SeedSequence(seed).spawn(count)]


def random_product_state(n: int, rng: np.random.Generator) -> np.ndarray:
    v = np.ones(1, dtype=complex)
    for _ in range(n):
        q = rng.standard_normal(2) + 1j * rng.standard_normal(2)
        v = np.kron(v, q / np.linalg.norm(q))
    return v


def random_test_state(t: Tripartition, n_total: int, rng: np.random.Generator) -> tuple[np.ndarray, str]:
    """Haar-random, or a product state scrambled by one or two circuit layers."""
    if rng.random() < 0.5:
        return haar_state(n_total, rng), "haar"
    v = random_product_state(n_total, rng)
    c = random_local_circuit(t, int(rng.integers(1, 3)), rng)
    return apply_circuit(v, c), "shallow"


def ste_suite(t: Tripartition, trials: int, seed=0, max_depth: int = 3, max_ancillas: int = 2) -> list[dict]:
    out = []
    for i, rng in enumerate(_streams(seed, trials)):
        anc = int(rng.integers(0, max_ancillas + 1))
        anc = min(anc, TOL.max_dense_qubits - t.n)
        depth = int(rng.integers(1, max_depth + 1))
        psi, kind = random_test_state(t, t.n + anc, rng)
        circ = random_local_circuit(t, depth, rng)
        delta, bound = ste_check(circ, psi, t)
        out.append(
            {
                "case": i,
                "state": kind,
                "ancillas": anc,
                "depth": depth,
                "delta_s_r": delta,
                "bound": bound,
                "passed": bool(delta <= bound + TOL.witness),
            }
        )
    return out


def sie_suite(t: Tripartition, trials: int, seed=0) -> list[dict]:
    out = []
    for i, rng in enumerate(_streams(seed, trials)):
        worst = bool(rng.random() < 0.5)
        h_lc, h_r = sample_bottleneck_hamiltonian(t, rng, worst_case=worst)
        psi, kind = random_test_state(t, t.n, rng)
        rate, bound = sie_rate_check(h_lc + h_r, psi, t)
        out.append(
            {
                "case": i,
                "state": kind,
                "worst_case": worst,
                "rate": rate,
                "bound": bound,
                "passed": bool(abs(rate) <= bound + TOL.sie_slack),
            }
        )
    return out


def random_density(dim: int, rng: np.random.Generator, rank: int | None = None) -> np.ndarray:
    rank = rank or int(rng.integers(1, dim + 1))
    g = rng.standard_normal((dim, rank)) + 1j * rng.standard_normal((dim, rank))
    rho = g @ g.conj().T
    return rho / np.trace(rho).real


def fannes_suite(trials: int, seed=0, max_qubits: int = 6) -> list[dict]:
    out = []
    for i, rng in enumerate(_streams(seed, trials)):
        dim = 1 << int(rng.integers(1, max_qubits + 1))
        rho = random_density(dim, rng)
        sigma = random_density(dim, rng)
        lhs, rhs = fannes_audenaert_witness(rho, sigma)
        out.append(
            {"case": i, "dim": dim, "lhs": lhs, "rhs": rhs, "passed": bool(lhs >= rhs - TOL.witness)}
        )
    return out


def circuit_distance_suite(t: Tripartition, trials: int, seed=0) -> list[dict]:
    """Random shallow circuits against the full L-R transposition."""
    p = global_transposition(t, full_pairing(t))
    m = sum(1 for r in t.right if t.block(p(r)) == "L")
    d_max = math.ceil(m / t.n_c) - 1
    out = []
    for i, rng in enumerate(_streams(seed, trials)):
        d = int(rng.integers(0, d_max + 1))
        circ = random_local_circuit(t, d, rng)
        measured, lower = circuit_permutation_distance(circ, p, t, m)
        out.append(
            {
                "case": i,
                "depth": d,
                "m": m,
                "measured": measured,
                "lower": lower,
                "passed": bool(measured > lower - TOL.witness),
            }
        )
    return out


def rho_z_suite(t: Tripartition, trials: int, seed=0, max_depth: int = 3) -> list[dict]:
    out = []
    for i, rng in enumerate(_streams(seed, trials)):
        d = int(rng.integers(0, max_depth + 1))
        circ = random_local_circuit(t, d, rng)
        p = Permutation(tuple(int(x) for x in rng.permutation(t.n)))
        lhs, rhs = rho_z_chain(circ, p, t)
        out.append(
            {"case": i, "depth": d, "lhs": lhs, "rhs": rhs, "passed": bool(lhs >= rhs - TOL.witness)}
        )
    return out


def commutator_suite(
    t: Tripartition, samples: int, seed=0, bound: str = "printed", worst_case: bool = False
) -> list[dict]:
    """``||[H_LC, H_R]||_F`` against the base-case bound for sampled Hamiltonians."""
    if bound not in ("printed", "corrected"):
        raise ValueError(f"bound must be 'printed' or 'corrected', got {bound!r}")
    cap = base_case_bound(t) if bound == "printed" else base_case_bound_corrected(t)
    out = []
    for i, rng in enumerate(_streams(seed, samples)):
        h_lc, h_r = sample_bottleneck_hamiltonian(t, rng, worst_case=worst_case)
        norm = commutator(h_lc, h_r).frobenius_norm()
        out.append(
            {
                "case": i,
                "comm_norm": norm,
                "bound": cap,
                "ratio": norm / cap,
                "passed": bool(norm <= cap * (1 + 1e-12)),
            }
        )
    return out


def trotter_suite(t: Tripartition, k: int, time: float, Ms, seed=0) -> tuple[list[dict], float]:
    """Error sweep over ``Ms`` on one seeded instance and the fitted M-slope."""
    rng = np.random.default_rng(seed)
    h_lc, h_r = sample_bottleneck_hamiltonian(t, rng)
    head = {"seed": seed, "N_L": t.n_l, "N_C": t.n_c, "N_R": t.n_r}
    rows = [{**head, **r} for r in error_sweep(h_lc, h_r, t, k, [time], Ms)]
    slope = loglog_slope([r["M"] for r in rows], [r["frob_error"] for r in rows])
    return rows, slope


def hamiltonian_scale(t: Tripartition, seed=0) -> float:
    """Operator norm of the seeded instance used by :func:`trotter_suite`."""
    h_lc, h_r = sample_bottleneck_hamiltonian(t, np.random.default_rng(seed))
    return operator_norm((h_lc + h_r).to_matrix())
