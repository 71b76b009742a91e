"""Closed-form routing-time bounds and numerical inequality witnesses.

Entropies and log-dimensions are in bits throughout.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from itertools import product

import numpy as np

from ._constants import TOL
from .graphs import Tripartition, require_bottleneck
from .numerics import schatten_norm, von_neumann_entropy
from .permutations import Permutation
from .qubit_dynamics import LocalCircuit, circuit_unitary, permutation_unitary


@dataclass(frozen=True)
class BoundReport:
    name: str
    inputs: dict
    value: float | None
    units: str
    constant_known: bool
    notes: dict = field(default_factory=dict)

    def as_dict(self) -> dict:
        return {
            "name": self.name,
            "inputs": dict(self.inputs),
            "value": self.value,
            "units": self.units,
            "constant_known": self.constant_known,
            **({"notes": dict(self.notes)} if self.notes else {}),
        }


def _blocks(t: Tripartition) -> dict:
    return {"n_l": t.n_l, "n_c": t.n_c, "n_r": t.n_r}


def gate_based_free_bound(t: Tripartition) -> BoundReport:
    """Minimum circuit depth ``N_R / (2 N_C)`` to move ``N_R`` bits through C.

    Each layer changes the R entropy by at most ``2 N_C`` bits.
    """
    require_bottleneck(t)
    return BoundReport(
        "gate_based_free", _blocks(t), t.n_r / (2 * t.n_c), "layers", True
    )


def hamiltonian_free_bound(t: Tripartition, c: float = 2.0) -> BoundReport:
    """Minimum time ``N_R / (4 c N_C sqrt(N_L))`` for free particles (``c = 2``)."""
    require_bottleneck(t)
    return BoundReport(
        "hamiltonian_free",
        {**_blocks(t), "c": c},
        t.n_r / (4 * c * t.n_c * math.sqrt(t.n_l)),
        "time",
        True,
    )


def _check_density(rho: np.ndarray, what: str) -> np.ndarray:
    r = np.asarray(rho, dtype=complex)
    if r.ndim != 2 or r.shape[0] != r.shape[1]:
        raise ValueError(f"{what} must be square, got {r.shape}")
    if np.max(np.abs(r - r.conj().T), initial=0.0) > TOL.hermitian:
        raise ValueError(f"{what} is not Hermitian")
    if abs(np.trace(r).real - 1) > TOL.trace:
        raise ValueError(f"{what} has trace {np.trace(r).real:.12g}, expected 1")
    if np.linalg.eigvalsh(r).min() < TOL.psd_floor:
        raise ValueError(f"{what} is not positive semidefinite")
    return r


def fannes_audenaert_witness(rho, sigma) -> tuple[float, float]:
    """``(||rho - sigma||_1, (S(sigma) - S(rho) - 1) / log2 dim)``.

    The witness holds when ``lhs >= rhs - 1e-9``.
    """
    r, s = _check_density(rho, "rho"), _check_density(sigma, "sigma")
    if r.shape != s.shape:
        raise ValueError(f"dimension mismatch {r.shape} vs {s.shape}")
    dim = r.shape[0]
    if dim < 2:
        raise ValueError("need dimension >= 2")
    lhs = float(schatten_norm(r - s, 1))
    rhs = (von_neumann_entropy(s) - von_neumann_entropy(r) - 1) / math.log2(dim)
    return lhs, rhs


def distance_lower_bound(t: Tripartition, m: int, depth: int) -> float:
    # the trace-norm bound (m - 2dN_C - 1)/N_R is vacuous once negative
    return 0.25 * (max(0, m - 2 * depth * t.n_c - 1) / t.n_r) ** 2


def circuit_permutation_distance(
    circuit: LocalCircuit, p: Permutation, t: Tripartition, m: int
) -> tuple[float, float]:
    """``(||U_circ - U_p||_F^2, (1/4) ((m - 2 d N_C - 1) / N_R)^2)``.

    ``m`` is the number of qubits ``p`` moves from R to L; the Frobenius
    norm is normalized.  Requires depth ``d < m / N_C``.
    """
    require_bottleneck(t)
    circuit.check_architecture(t)
    if len(p) != t.n:
        raise ValueError(f"permutation on {len(p)} sites, graph has {t.n}")
    if t.n > 10:
        raise ValueError(f"{t.n} qubits exceeds the dense limit 10")
    d = circuit.depth
    if not d * t.n_c < m:
        raise ValueError(f"precondition d < m / N_C fails: d={d}, m={m}, N_C={t.n_c}")
    moved = sum(1 for r in t.right if t.block(p(r)) == "L")
    if moved < m:
        raise ValueError(f"permutation moves {moved} qubits from R to L, fewer than m={m}")
    diff = circuit_unitary(circuit, t.n) - permutation_unitary(p)
    measured = float(schatten_norm(diff, 2, normalized=True) ** 2)
    return measured, distance_lower_bound(t, m, d)


def rho_z_chain(circuit: LocalCircuit, p: Permutation, t: Tripartition) -> tuple[float, float]:
    """``(||U - U_p||_F^2, (1/4) mean_z ||U rho_z U^+ - U_p rho_z U_p^+||_1^2)``.

    ``rho_z = |z><z|_R (x) I / 2^{N_L + N_C}`` over all R bit strings ``z``.
    """
    n = t.n
    if n > 6:
        raise ValueError(f"{n} qubits exceeds the enumeration limit 6")
    circuit.check_architecture(t)
    u = circuit_unitary(circuit, n)
    up = permutation_unitary(p)
    lhs = float(schatten_norm(u - up, 2, normalized=True) ** 2)
    n_lc = t.n_l + t.n_c
    norms = []
    for z in product((0, 1), repeat=t.n_r):
        zi = int("".join(map(str, z)) or "0", 2)
        proj = np.zeros(1 << t.n_r)
        proj[zi] = 1.0
        rho = np.kron(np.eye(1 << n_lc), np.diag(proj)) / (1 << n_lc)
        delta = u @ rho @ u.conj().T - up @ rho @ up.conj().T
        norms.append(schatten_norm(delta, 1) ** 2)
    return lhs, 0.25 * float(np.mean(norms))


def routing_threshold_report(t: Tripartition, delta: float) -> BoundReport:
    """Applicability and shape ``N_R^{1-delta} / (sqrt(N_L) N_C)`` of the qubit routing bound.

    The prefactor is an unknown existence constant; the shape is withheld
    when ``N_R`` does not exceed ``4 (2 * 5^{(1-delta)/(2 delta)}) N_C + 2``.
    """
    require_bottleneck(t)
    if not (0 < delta <= 1 / 3 + 1e-12):
        raise ValueError(f"delta must lie in (0, 1/3], got {delta}")
    threshold = 4 * (2 * 5 ** ((1 - delta) / (2 * delta))) * t.n_c + 2
    applicable = t.n_r > threshold
    shape = t.n_r ** (1 - delta) / (math.sqrt(t.n_l) * t.n_c)
    return BoundReport(
        "routing_threshold",
        {**_blocks(t), "delta": delta},
        shape if applicable else None,
        "time (shape, prefactor unknown)",
        False,
        {
            "applicable": applicable,
            "threshold_n_r": threshold,
            "shape": shape,
            "min_segment_width": 1 / math.sqrt(t.n_l),
        },
    )
