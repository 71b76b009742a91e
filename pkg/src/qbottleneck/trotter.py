"""Trotter-Suzuki product formulas over the ``H_LC + H_R`` split."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ._constants import TOL
from .graphs import Tripartition, require_bottleneck
from .numerics import HermitianEig, eigh, expm_from_eig, frobenius_normalized
from .pauli import PauliSum


@dataclass(frozen=True)
class TrotterParams:
    """Half-order ``k`` (formula order ``2k``), segment count ``M``, time ``t``."""

    k: int
    M: int
    t: float

    def __post_init__(self):
        if int(self.k) != self.k or self.k < 1:
            raise ValueError(f"k must be a positive integer, got {self.k}")
        if int(self.M) != self.M or self.M < 1:
            raise ValueError(f"M must be a positive integer, got {self.M}")
        if not self.t >= 0:
            raise ValueError(f"t must be non-negative, got {self.t}")

    @property
    def depth(self) -> int:
        return 2 * 5 ** (self.k - 1) * self.M


def suzuki_coefficient(k: int) -> float:
    return 1.0 / (4.0 - 4.0 ** (1.0 / (2 * k - 1)))


def _merge(seq: list) -> list:
    out: list = []
    for which, frac in seq:
        if out and out[-1][0] == which:
            out[-1] = (which, out[-1][1] + frac)
        else:
            out.append((which, frac))
    return out


def suzuki_stage_sequence(k: int) -> list[tuple[str, float]]:
    """Exponentials of one segment of the order-``2k`` formula.

    Entries are ``(operand, fraction of the segment step)`` with adjacent
    same-operand factors merged.  The sequence starts and ends with ``LC``,
    so consecutive segments share a boundary factor and each segment costs
    ``len(seq) - 1 == 2 * 5**(k-1)`` two-block stages.
    """
    if int(k) != k or k < 1:
        raise ValueError(f"k must be a positive integer, got {k}")
    seq = [("LC", 0.5), ("R", 1.0), ("LC", 0.5)]
    for j in range(2, k + 1):
        u = suzuki_coefficient(j)
        outer = [(w, f * u) for w, f in seq]
        inner = [(w, f * (1.0 - 4.0 * u)) for w, f in seq]
        seq = _merge(outer + outer + inner + outer + outer)
    return seq


def stages_per_segment(k: int) -> int:
    return len(suzuki_stage_sequence(k)) - 1


def _check_size(h_lc: PauliSum, h_r: PauliSum) -> None:
    if h_lc.n != h_r.n:
        raise ValueError(f"size mismatch: {h_lc.n} vs {h_r.n}")
    if h_lc.n > TOL.max_trotter_qubits:
        raise ValueError(
            f"{h_lc.n} qubits exceeds the dense Trotter limit of {TOL.max_trotter_qubits}"
        )


class _Split:
    """Cached eigendecompositions of the two blocks and of their sum."""

    def __init__(self, h_lc: PauliSum, h_r: PauliSum):
        _check_size(h_lc, h_r)
        a, b = h_lc.to_matrix(), h_r.to_matrix()
        self.eig = {"LC": eigh(a), "R": eigh(b)}
        self._full_mats = (a, b)
        self._full: HermitianEig | None = None

    def exact(self, t: float) -> np.ndarray:
        if self._full is None:
            a, b = self._full_mats
            self._full = eigh(a + b)
        return expm_from_eig(self._full, -1j * t)

    def circuit(self, p: TrotterParams) -> np.ndarray:
        step = p.t / p.M
        seg = None
        for which, frac in suzuki_stage_sequence(p.k):
            u = expm_from_eig(self.eig[which], -1j * step * frac)
            seg = u if seg is None else u @ seg
        return np.linalg.matrix_power(seg, p.M)


def trotter_circuit(h_lc: PauliSum, h_r: PauliSum, p: TrotterParams) -> tuple[np.ndarray, int]:
    """Product-formula unitary for ``exp(-i (H_LC + H_R) t)`` and its depth."""
    return _Split(h_lc, h_r).circuit(p), p.depth


def bound_shape(graph: Tripartition, p: TrotterParams) -> float:
    """``t^{2k+1} / M^{2k} * sqrt(N_L^{2k} N_R N_C)`` with the unknown prefactor set to 1."""
    return (
        p.t ** (2 * p.k + 1)
        / p.M ** (2 * p.k)
        * math.sqrt(graph.n_l ** (2 * p.k) * graph.n_r * graph.n_c)
    )


def trotter_error(
    h_lc: PauliSum, h_r: PauliSum, p: TrotterParams, graph: Tripartition
) -> tuple[float, float]:
    """Exact normalized-Frobenius Trotter error and the bound's scaling shape.

    The shape is never a certified bound: its prefactor is unknown.
    """
    split = _Split(h_lc, h_r)
    err = frobenius_normalized(split.exact(p.t) - split.circuit(p))
    return err, bound_shape(graph, p)


def error_sweep(
    h_lc: PauliSum, h_r: PauliSum, graph: Tripartition, k: int, ts, Ms
) -> list[dict]:
    """Errors on a grid of times and segment counts, reusing one eigendecomposition."""
    split = _Split(h_lc, h_r)
    rows = []
    for t in ts:
        exact = split.exact(t)
        for M in Ms:
            p = TrotterParams(k, int(M), float(t))
            err = frobenius_normalized(exact - split.circuit(p))
            rows.append(
                {
                    "k": k,
                    "M": int(M),
                    "t": float(t),
                    "frob_error": err,
                    "bound_shape": bound_shape(graph, p),
                    "depth": p.depth,
                }
            )
    return rows


def loglog_slope(xs, ys) -> float:
    """Least-squares slope of ``log y`` against ``log x``."""
    lx, ly = np.log(np.asarray(xs, float)), np.log(np.asarray(ys, float))
    return float(np.polyfit(lx, ly, 1)[0])


def circuit_budget(graph: Tripartition, delta: float) -> tuple[int, int, int]:
    """``(k, M, depth_cap)`` used to approximate an evolution by a shallow circuit.

    ``k`` is the smallest positive integer with ``1/(2k+1) <= delta``,
    ``M = ceil(N_R / (4 N_C * 2 * 5^{k-1}))`` and the depth cap is
    ``floor(N_R/(4 N_C) + 2 * 5^{k-1})``.
    """
    require_bottleneck(graph)
    if not (0 < delta <= 1 / 3 + 1e-12):
        raise ValueError(f"delta must lie in (0, 1/3], got {delta}")
    k = 1
    while 1.0 / (2 * k + 1) > delta + 1e-12:
        k += 1
    per = 2 * 5 ** (k - 1)
    M = math.ceil(graph.n_r / (4 * graph.n_c * per) - 1e-12)
    M = max(M, 1)
    cap = math.floor(graph.n_r / (4 * graph.n_c) + per + 1e-12)
    return k, M, cap


def _step_unitary(split: _Split, k: int, dt: float) -> np.ndarray:
    u = None
    for which, frac in suzuki_stage_sequence(k):
        f = expm_from_eig(split.eig[which], -1j * dt * frac)
        u = f if u is None else f @ u
    return u


def piecewise_trotter_error(segments, k: int, M: int) -> float:
    """Trotter error for a piecewise-constant ``[(H_LC, H_R, duration), ...]`` program.

    The total time is cut into ``M`` equal windows; a window that straddles a
    segment boundary is split there and each piece gets one formula step.
    """
    TrotterParams(k, M, 0.0)
    splits = [(_Split(a, b), float(d)) for a, b, d in segments]
    if not splits:
        return 0.0
    if any(d < 0 for _, d in splits):
        raise ValueError("negative segment duration")
    dim = splits[0][0].eig["LC"].eigenvectors.shape[0]
    exact = np.eye(dim, dtype=complex)
    for sp, d in splits:
        exact = sp.exact(d) @ exact
    total = sum(d for _, d in splits)
    bounds = np.cumsum([0.0] + [d for _, d in splits])
    grid = np.linspace(0.0, total, M + 1)
    cuts = np.unique(np.concatenate([grid, bounds]))
    approx = np.eye(dim, dtype=complex)
    for a, b in zip(cuts[:-1], cuts[1:]):
        if b - a <= 1e-15:
            continue
        seg = min(int(np.searchsorted(bounds, 0.5 * (a + b)) - 1), len(splits) - 1)
        approx = _step_unitary(splits[seg][0], k, b - a) @ approx
    return frobenius_normalized(exact - approx)
