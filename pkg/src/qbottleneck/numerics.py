"""Dense complex linear algebra used throughout the package.

Matrices are plain ``numpy.ndarray`` objects of complex dtype.  The
production eigensolver is LAPACK (``numpy.linalg.eigh``); a cyclic complex
Jacobi solver is kept alongside it as an independent, dependency-free
reference for small matrices.
"""

from __future__ import annotations

from typing import NamedTuple, Sequence

import numpy as np

from ._constants import TOL


class HermitianEig(NamedTuple):
    """Eigendecomposition ``m = V diag(eigenvalues) V^dagger``.

    ``eigenvalues`` are real and ascending, ``eigenvectors`` holds the
    orthonormal eigenvectors as columns.
    """

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray


def as_matrix(m) -> np.ndarray:
    a = np.asarray(m, dtype=complex)
    if a.ndim != 2:
        raise ValueError(f"expected a 2-d matrix, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise ValueError("matrix has non-finite entries")
    return a


def _check_hermitian(a: np.ndarray, tol: float = TOL.hermitian) -> None:
    if a.shape[0] != a.shape[1]:
        raise ValueError(f"matrix is not square: {a.shape}")
    dev = np.max(np.abs(a - a.conj().T)) if a.size else 0.0
    if dev > tol:
        raise ValueError(f"matrix is not Hermitian (max deviation {dev:.3e})")


def eigh(m) -> HermitianEig:
    """Eigendecomposition of a Hermitian matrix.

    Raises ``ValueError`` for non-square input or when ``m`` deviates from
    its adjoint by more than ``1e-9`` in any entry.
    """
    a = as_matrix(m)
    _check_hermitian(a)
    a = 0.5 * (a + a.conj().T)
    w, v = np.linalg.eigh(a)
    return HermitianEig(w, v)


def jacobi_eigh(
    m,
    tol: float = TOL.jacobi_offdiag,
    max_sweeps: int = TOL.jacobi_max_sweeps,
) -> HermitianEig:
    """Cyclic complex Jacobi eigensolver.

    Each rotation first removes the phase of the pivot and then applies the
    classical real Jacobi rotation.  Sweeps stop once the off-diagonal
    Frobenius norm drops below ``tol`` (relative to the full norm).
    Intended for small matrices; cost is O(n^3) per sweep with Python
    overhead per pivot.
    """
    a = as_matrix(m).copy()
    _check_hermitian(a)
    a = 0.5 * (a + a.conj().T)
    n = a.shape[0]
    v = np.eye(n, dtype=complex)
    scale = max(np.linalg.norm(a), 1.0)
    for _ in range(max_sweeps):
        off = np.sqrt(max(np.linalg.norm(a) ** 2 - np.sum(np.abs(np.diag(a)) ** 2), 0.0))
        if off <= tol * scale:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                mag = abs(apq)
                if mag <= 1e-300:
                    continue
                phase = apq / mag
                theta = (a[q, q].real - a[p, p].real) / (2.0 * mag)
                t = np.sign(theta) / (abs(theta) + np.sqrt(theta * theta + 1.0))
                if theta == 0.0:
                    t = 1.0
                c = 1.0 / np.sqrt(1.0 + t * t)
                s = t * c
                rot = np.array([[c, s * phase], [-s * np.conj(phase), c]])
                idx = [p, q]
                a[:, idx] = a[:, idx] @ rot
                a[idx, :] = rot.conj().T @ a[idx, :]
                v[:, idx] = v[:, idx] @ rot
    else:
        raise RuntimeError("Jacobi iteration did not converge")
    w = np.real(np.diag(a))
    order = np.argsort(w, kind="stable")
    return HermitianEig(w[order], v[:, order])


def expm_from_eig(eig: HermitianEig, scale: complex) -> np.ndarray:
    w, v = eig
    if scale == 0:
        return np.eye(v.shape[0], dtype=complex)
    return (v * np.exp(scale * w)) @ v.conj().T


def expm_hermitian(m, scale: complex) -> np.ndarray:
    """``exp(scale * m)`` for Hermitian ``m`` via its eigendecomposition.

    With ``scale = -1j * t`` this is the propagator ``exp(-i m t)``.
    """
    return expm_from_eig(eigh(m), scale)


def schatten_norm(m, p: int | float | str = 2, normalized: bool = False) -> float:
    """Schatten ``p``-norm for ``p`` in ``{1, 2, inf}``.

    ``normalized=True`` (only meaningful with ``p=2``) divides by the square
    root of the dimension, so every Pauli string has norm one.
    """
    a = as_matrix(m)
    if p in (2, 2.0):
        val = float(np.sqrt(np.sum(np.abs(a) ** 2)))
        if normalized:
            val /= np.sqrt(a.shape[0])
        return val
    if normalized:
        raise ValueError("normalization is defined for the Frobenius (p=2) norm only")
    if p in (1, 1.0):
        if a.shape[0] == a.shape[1] and np.allclose(a, a.conj().T, atol=1e-13, rtol=0):
            return float(np.sum(np.abs(np.linalg.eigvalsh(0.5 * (a + a.conj().T)))))
        return float(np.sum(np.linalg.svd(a, compute_uv=False)))
    if p in ("inf", np.inf, float("inf")):
        if a.size == 0:
            return 0.0
        return float(np.linalg.svd(a, compute_uv=False)[0])
    raise ValueError(f"unsupported Schatten index {p!r}")


def frobenius_normalized(m) -> float:
    return schatten_norm(m, 2, normalized=True)


def operator_norm(m) -> float:
    return schatten_norm(m, "inf")


def is_unitary(u, tol: float = TOL.unitary) -> bool:
    a = as_matrix(u)
    if a.shape[0] != a.shape[1]:
        return False
    return bool(np.max(np.abs(a.conj().T @ a - np.eye(a.shape[0]))) <= tol)


def _validate_dims(total: int, dims: Sequence[int], keep: Sequence[int]) -> tuple[list, list]:
    dims = [int(d) for d in dims]
    if any(d < 1 for d in dims):
        raise ValueError(f"subsystem dimensions must be positive: {dims}")
    if int(np.prod(dims)) != total:
        raise ValueError(f"dimension mismatch: prod{tuple(dims)} != {total}")
    keep = sorted(set(int(k) for k in keep))
    if any(k < 0 or k >= len(dims) for k in keep):
        raise ValueError(f"keep indices {keep} out of range for {len(dims)} subsystems")
    traced = [i for i in range(len(dims)) if i not in keep]
    return keep, traced


def partial_trace(rho, dims: Sequence[int], keep: Sequence[int], check_trace: bool = True) -> np.ndarray:
    """Reduce ``rho`` to the subsystems listed in ``keep``.

    Subsystem 0 is the leftmost tensor factor.  The kept factors stay in
    ascending order.  ``check_trace=False`` allows traceless operators such
    as differences of density matrices.
    """
    a = as_matrix(rho)
    if a.shape[0] != a.shape[1]:
        raise ValueError(f"density matrix is not square: {a.shape}")
    keep, traced = _validate_dims(a.shape[0], dims, keep)
    if check_trace and abs(np.trace(a) - 1.0) > TOL.trace:
        raise ValueError(f"density matrix trace {np.trace(a).real:.6g} != 1")
    n = len(dims)
    dk = int(np.prod([dims[i] for i in keep])) if keep else 1
    dt = int(np.prod([dims[i] for i in traced])) if traced else 1
    t = a.reshape(list(dims) * 2)
    t = t.transpose(keep + traced + [n + i for i in keep] + [n + i for i in traced])
    t = t.reshape(dk, dt, dk, dt)
    return np.einsum("ajbj->ab", t)


def reduced_density_from_state(psi, dims: Sequence[int], keep: Sequence[int]) -> np.ndarray:
    """Reduced density matrix of the pure state ``psi`` on ``keep``."""
    v = np.asarray(psi, dtype=complex).ravel()
    keep, traced = _validate_dims(v.size, dims, keep)
    dk = int(np.prod([dims[i] for i in keep])) if keep else 1
    t = v.reshape(dims).transpose(keep + traced).reshape(dk, -1)
    return t @ t.conj().T


def entropy_of_spectrum(p, base: float = 2.0, floor: float = TOL.entropy_eig_floor) -> float:
    p = np.asarray(p, dtype=float)
    p = p[p > floor]
    return float(-np.sum(p * np.log(p)) / np.log(base)) + 0.0


def von_neumann_entropy(rho, base: float = 2.0) -> float:
    a = as_matrix(rho)
    w = np.linalg.eigvalsh(0.5 * (a + a.conj().T))
    return entropy_of_spectrum(w, base)
