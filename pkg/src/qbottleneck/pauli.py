"""Exact Pauli-string algebra.

A Pauli string on ``n`` qubits is stored as two bitmasks ``(x, z)``;
qubit ``q`` lives on bit ``n - 1 - q`` so that qubit 0 is the leftmost
letter and the most significant bit of a computational basis index.  The
Hermitian string for ``(x, z)`` is ``i^{|x & z|} X^x Z^z`` (so ``Y = iXZ``).

``PauliSum`` keeps its terms in canonical arrays sorted by letters.
Products and commutators are computed on whole coefficient arrays at once.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

import numpy as np

from ._constants import TOL
from .graphs import Tripartition, validate, GraphSpecError

_LETTER_BITS = {"I": (0, 0), "X": (1, 0), "Z": (0, 1), "Y": (1, 1)}
_BITS_LETTER = {v: k for k, v in _LETTER_BITS.items()}
_PHASES = (1, 1j, -1, -1j)
_MAX_PACKED = 31


def _popcount(v: int) -> int:
    return v.bit_count()


def letters_to_masks(letters: str) -> tuple[int, int]:
    n = len(letters)
    x = z = 0
    for q, ch in enumerate(letters.upper()):
        try:
            bx, bz = _LETTER_BITS[ch]
        except KeyError:
            raise ValueError(f"bad Pauli letter {ch!r} in {letters!r}") from None
        x |= bx << (n - 1 - q)
        z |= bz << (n - 1 - q)
    return x, z


def masks_to_letters(n: int, x: int, z: int) -> str:
    return "".join(
        _BITS_LETTER[((x >> (n - 1 - q)) & 1, (z >> (n - 1 - q)) & 1)] for q in range(n)
    )


def _product_phase(x1: int, z1: int, x2: int, z2: int) -> tuple[int, int, int]:
    x3, z3 = x1 ^ x2, z1 ^ z2
    k = (_popcount(x1 & z1) + _popcount(x2 & z2) + 2 * _popcount(z1 & x2) - _popcount(x3 & z3)) % 4
    return x3, z3, k


@dataclass(frozen=True)
class PauliString:
    """A single Pauli string with a phase in ``{+1, +i, -1, -i}``."""

    n: int
    letters: str
    phase: complex = 1

    def __post_init__(self):
        if len(self.letters) != self.n:
            raise ValueError(f"letters {self.letters!r} do not have length {self.n}")
        letters_to_masks(self.letters)
        ph = complex(self.phase)
        if not any(abs(ph - p) < 1e-12 for p in _PHASES):
            raise ValueError(f"phase must be one of +-1, +-i, got {self.phase}")
        object.__setattr__(self, "letters", self.letters.upper())
        object.__setattr__(self, "phase", complex(round(ph.real), round(ph.imag)))

    @property
    def masks(self) -> tuple[int, int]:
        return letters_to_masks(self.letters)

    def to_sum(self) -> "PauliSum":
        return PauliSum(self.n, {self.letters: self.phase})

    def to_matrix(self) -> np.ndarray:
        return self.to_sum().to_matrix()


def multiply(a: PauliString, b: PauliString) -> PauliString:
    """Product ``a b`` with the phase tracked exactly."""
    if a.n != b.n:
        raise ValueError(f"size mismatch: {a.n} vs {b.n}")
    x1, z1 = a.masks
    x2, z2 = b.masks
    x3, z3, k = _product_phase(x1, z1, x2, z2)
    phase = a.phase * b.phase * _PHASES[k]
    return PauliString(a.n, masks_to_letters(a.n, x3, z3), phase)


def _popcount_arr(a: np.ndarray) -> np.ndarray:
    return np.bitwise_count(a.astype(np.uint64)).astype(np.int64)


class PauliSum:
    """Complex-weighted sum of Pauli strings on ``n`` qubits."""

    __slots__ = ("n", "x", "z", "c")

    def __init__(self, n: int, terms: Mapping[str, complex] | None = None):
        self.n = int(n)
        xs, zs, cs = [], [], []
        for letters, coeff in (terms or {}).items():
            if len(letters) != self.n:
                raise ValueError(f"term {letters!r} is not on {self.n} qubits")
            x, z = letters_to_masks(letters)
            xs.append(x)
            zs.append(z)
            cs.append(complex(coeff))
        self._set(xs, zs, cs)

    @classmethod
    def _from_arrays(cls, n: int, x, z, c) -> "PauliSum":
        obj = cls.__new__(cls)
        obj.n = n
        obj._set(x, z, c)
        return obj

    def _set(self, x, z, c) -> None:
        x = np.asarray(x, dtype=np.int64).ravel()
        z = np.asarray(z, dtype=np.int64).ravel()
        c = np.asarray(c, dtype=complex).ravel()
        if x.size and self.n <= _MAX_PACKED:
            key = (x << self.n) | z
            uniq, inv = np.unique(key, return_inverse=True)
            acc = np.zeros(uniq.size, dtype=complex)
            np.add.at(acc, inv, c)
            x = uniq >> self.n
            z = uniq & ((1 << self.n) - 1)
            c = acc
        elif x.size:
            acc: dict = {}
            for xi, zi, ci in zip(x.tolist(), z.tolist(), c.tolist()):
                acc[(xi, zi)] = acc.get((xi, zi), 0) + ci
            items = sorted(acc.items())
            x = np.array([k[0] for k, _ in items], dtype=np.int64)
            z = np.array([k[1] for k, _ in items], dtype=np.int64)
            c = np.array([v for _, v in items], dtype=complex)
        keep = np.abs(c) > TOL.pauli_prune
        self.x, self.z, self.c = x[keep], z[keep], c[keep]

    # -- container protocol ------------------------------------------------
    def __len__(self) -> int:
        return int(self.c.size)

    def terms(self) -> dict[str, complex]:
        out = {
            masks_to_letters(self.n, int(xi), int(zi)): complex(ci)
            for xi, zi, ci in zip(self.x, self.z, self.c)
        }
        return dict(sorted(out.items()))

    def __iter__(self):
        return iter(self.terms().items())

    def coefficient(self, letters: str) -> complex:
        return self.terms().get(letters.upper(), 0j)

    def __repr__(self) -> str:
        body = " + ".join(f"({c:.4g}){s}" for s, c in list(self.terms().items())[:6])
        more = "" if len(self) <= 6 else f" + ... ({len(self)} terms)"
        return f"PauliSum(n={self.n}, {body or '0'}{more})"

    def __eq__(self, other) -> bool:
        if not isinstance(other, PauliSum) or other.n != self.n:
            return NotImplemented
        return len(self - other) == 0

    # -- arithmetic --------------------------------------------------------
    def _check(self, other: "PauliSum") -> None:
        if not isinstance(other, PauliSum):
            raise TypeError(f"expected PauliSum, got {type(other).__name__}")
        if other.n != self.n:
            raise ValueError(f"size mismatch: {self.n} vs {other.n}")

    def __add__(self, other: "PauliSum") -> "PauliSum":
        self._check(other)
        return PauliSum._from_arrays(
            self.n,
            np.concatenate([self.x, other.x]),
            np.concatenate([self.z, other.z]),
            np.concatenate([self.c, other.c]),
        )

    def __neg__(self) -> "PauliSum":
        return PauliSum._from_arrays(self.n, self.x, self.z, -self.c)

    def __sub__(self, other: "PauliSum") -> "PauliSum":
        return self + (-other)

    def __mul__(self, scalar) -> "PauliSum":
        if isinstance(scalar, PauliSum):
            return self @ scalar
        return PauliSum._from_arrays(self.n, self.x, self.z, self.c * complex(scalar))

    __rmul__ = __mul__

    def _pairwise(self, other: "PauliSum"):
        x1, z1, c1 = self.x[:, None], self.z[:, None], self.c[:, None]
        x2, z2, c2 = other.x[None, :], other.z[None, :], other.c[None, :]
        x3, z3 = x1 ^ x2, z1 ^ z2
        k = (
            _popcount_arr(x1 & z1)
            + _popcount_arr(x2 & z2)
            + 2 * _popcount_arr(z1 & x2)
            - _popcount_arr(x3 & z3)
        ) % 4
        coeff = c1 * c2 * np.array(_PHASES)[k]
        anti = (_popcount_arr(x1 & z2) + _popcount_arr(z1 & x2)) % 2 == 1
        return x3, z3, coeff, anti

    def __matmul__(self, other: "PauliSum") -> "PauliSum":
        self._check(other)
        if not len(self) or not len(other):
            return PauliSum(self.n)
        x3, z3, coeff, _ = self._pairwise(other)
        return PauliSum._from_arrays(self.n, x3, z3, coeff)

    def dagger(self) -> "PauliSum":
        return PauliSum._from_arrays(self.n, self.x, self.z, np.conj(self.c))

    def is_hermitian(self, tol: float = TOL.pauli_prune) -> bool:
        return bool(np.all(np.abs(self.c.imag) <= tol))

    # -- norms and conversions ---------------------------------------------
    def frobenius_norm(self) -> float:
        return frobenius_norm(self)

    def to_matrix(self) -> np.ndarray:
        """Dense ``2^n x 2^n`` matrix (qubit 0 is the most significant bit)."""
        if self.n > 14:
            raise ValueError(f"refusing to densify {self.n} qubits")
        dim = 1 << self.n
        b = np.arange(dim, dtype=np.int64)
        m = np.zeros((dim, dim), dtype=complex)
        for xi, zi, ci in zip(self.x.tolist(), self.z.tolist(), self.c.tolist()):
            vals = ci * (1j ** _popcount(xi & zi)) * (1 - 2 * (_popcount_arr(b & zi) & 1))
            m[b ^ xi, b] += vals
        return m

    def support(self) -> set[int]:
        both = int(np.bitwise_or.reduce(self.x | self.z)) if len(self) else 0
        return {q for q in range(self.n) if (both >> (self.n - 1 - q)) & 1}

    def term_supports(self) -> list[set[int]]:
        out = []
        for xi, zi in zip(self.x.tolist(), self.z.tolist()):
            both = xi | zi
            out.append({q for q in range(self.n) if (both >> (self.n - 1 - q)) & 1})
        return out

    def filter(self, keep) -> "PauliSum":
        """Keep only terms whose support set satisfies ``keep(support)``."""
        mask = np.array([bool(keep(s)) for s in self.term_supports()], dtype=bool)
        if not mask.size:
            return PauliSum(self.n)
        return PauliSum._from_arrays(self.n, self.x[mask], self.z[mask], self.c[mask])

    def to_text(self) -> str:
        lines = []
        for letters, coeff in self.terms().items():
            if coeff.imag == 0:
                lines.append(f"{coeff.real!r} {letters}")
            else:
                lines.append(f"{coeff!r} {letters}".replace("(", "").replace(")", ""))
        return "\n".join(lines) + ("\n" if lines else "")

    @classmethod
    def from_text(cls, text: str, n: int | None = None) -> "PauliSum":
        terms: dict[str, complex] = {}
        size = n
        for raw in text.splitlines():
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            parts = line.split()
            if len(parts) != 2:
                raise ValueError(f"bad PauliSum line {raw!r}")
            coeff, letters = complex(parts[0]), parts[1].upper()
            if size is None:
                size = len(letters)
            if len(letters) != size:
                raise ValueError(f"term {letters!r} is not on {size} qubits")
            terms[letters] = terms.get(letters, 0) + coeff
        if size is None:
            raise ValueError("empty PauliSum text needs an explicit qubit count")
        return cls(size, terms)


def single(n: int, ops: Mapping[int, str], coeff: complex = 1.0) -> PauliSum:
    """``coeff`` times the string with letter ``ops[q]`` on qubit ``q``."""
    letters = ["I"] * n
    for q, ch in ops.items():
        letters[q] = ch
    return PauliSum(n, {"".join(letters): coeff})


def commutator(a: PauliSum, b: PauliSum) -> PauliSum:
    """Exact ``[a, b] = ab - ba``; only anticommuting pairs survive, doubled."""
    a._check(b)
    if not len(a) or not len(b):
        return PauliSum(a.n)
    x3, z3, coeff, anti = a._pairwise(b)
    return PauliSum._from_arrays(a.n, x3[anti], z3[anti], 2.0 * coeff[anti])


def frobenius_norm(a: PauliSum) -> float:
    """Normalized Frobenius norm; Pauli strings are orthonormal, so exact."""
    return float(np.sqrt(np.sum(np.abs(a.c) ** 2)))


_PAULI_IDX = ("X", "Y", "Z")


def sample_bottleneck_hamiltonian(
    t: Tripartition, seed=None, worst_case: bool = False
) -> tuple[PauliSum, PauliSum]:
    """Random architecture-respecting Hamiltonian split as ``(H_LC, H_R)``.

    Every vertex carries the three 1-local Paulis with coefficients uniform
    in ``[-sqrt(N), sqrt(N)]``; every edge carries the nine 2-local products
    with coefficients uniform in ``[-1, 1]``.  ``worst_case`` puts every
    coefficient at its cap with a random sign.  Terms touching R go to
    ``H_R``; everything else (L, C, L-L, L-C, C-C) to ``H_LC``.
    """
    rep = validate(t)
    if not rep.valid:
        raise GraphSpecError(f"tripartition has L-R edges: {list(rep.violating_edges)}")
    rng = np.random.default_rng(seed)
    n = t.n
    cap1 = math.sqrt(n)

    def draw(cap: float) -> float:
        if worst_case:
            return cap * (1.0 if rng.random() < 0.5 else -1.0)
        return float(rng.uniform(-cap, cap))

    lc: dict[str, complex] = {}
    r: dict[str, complex] = {}
    for v in range(n):
        target = r if t.block(v) == "R" else lc
        for p in _PAULI_IDX:
            letters = ["I"] * n
            letters[v] = p
            target["".join(letters)] = draw(cap1)
    for i, j in t.sorted_edges():
        target = r if "R" in (t.block(i), t.block(j)) else lc
        for p in _PAULI_IDX:
            for q in _PAULI_IDX:
                letters = ["I"] * n
                letters[i], letters[j] = p, q
                target["".join(letters)] = draw(1.0)
    return PauliSum(n, lc), PauliSum(n, r)


def nested_commutator(sequence: Sequence[str], h_lc: PauliSum, h_r: PauliSum) -> PauliSum:
    """Right-nested ``[H_{s_k}, ..., [H_{s_2}, H_{s_1}]]`` for labels in {LC, R}."""
    seq = [str(s).upper() for s in sequence]
    if len(seq) < 2:
        raise ValueError("nested commutator needs a sequence of length >= 2")
    ops = {"LC": h_lc, "R": h_r}
    try:
        acc = ops[seq[0]]
        for s in seq[1:]:
            acc = commutator(ops[s], acc)
    except KeyError as exc:
        raise ValueError(f"sequence labels must be 'LC' or 'R', got {exc}") from None
    return acc


def base_case_bound(t: Tripartition) -> float:
    """Square root of ``16 N N_C N_R + 64 N_C^2 N_R + 16 N_L N_C N_R``."""
    rep = validate(t)
    if not rep.valid:
        raise GraphSpecError(f"tripartition has L-R edges: {list(rep.violating_edges)}")
    if t.n_c < 1:
        raise GraphSpecError("base-case bound needs a non-empty center (N_C >= 1)")
    n = t.n
    return math.sqrt(
        16 * n * t.n_c * t.n_r + 64 * t.n_c**2 * t.n_r + 16 * t.n_l * t.n_c * t.n_r
    )


def base_case_bound_corrected(t: Tripartition) -> float:
    """Base-case bound with the Pauli-index multiplicities counted.

    Each (r, c) pair contributes 9 anticommuting string pairs, and each
    (l, r, c) or (r, c1, c2) triple 27, so the three terms of
    :func:`base_case_bound` pick up factors 9, 27 and 27.
    """
    base_case_bound(t)
    n = t.n
    return math.sqrt(
        144 * n * t.n_c * t.n_r + 27 * 64 * t.n_c**2 * t.n_r + 27 * 16 * t.n_l * t.n_c * t.n_r
    )


def coupling_terms(h: PauliSum, t: Tripartition, a: str = "L", b: str = "C") -> PauliSum:
    """Terms of ``h`` whose support touches both block ``a`` and block ``b``."""
    return h.filter(lambda s: any(t.block(q) == a for q in s) and any(t.block(q) == b for q in s))


def split_lc_r(h: PauliSum, t: Tripartition) -> tuple[PauliSum, PauliSum]:
    """Split an architecture-respecting ``h`` into ``(H_LC, H_R)``."""
    h_r = h.filter(lambda s: any(t.block(q) == "R" for q in s))
    return h - h_r, h_r
