"""Permutations of site labels.

``Permutation.images[i]`` is the destination of the token that starts on
site ``i``.  Composition applies the right argument first:
``compose(p, q)(i) == p(q(i))``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable, Sequence

from .graphs import Tripartition


class PermutationError(ValueError):
    pass


@dataclass(frozen=True)
class Permutation:
    images: tuple

    def __post_init__(self):
        imgs = tuple(int(x) for x in self.images)
        if sorted(imgs) != list(range(len(imgs))):
            raise PermutationError(f"not a bijection on 0..{len(imgs) - 1}: {list(imgs)}")
        object.__setattr__(self, "images", imgs)

    @classmethod
    def identity(cls, n: int) -> "Permutation":
        return cls(tuple(range(n)))

    @classmethod
    def from_cycles(cls, n: int, cycles: Iterable[Sequence[int]]) -> "Permutation":
        imgs = list(range(n))
        seen = set()
        for cyc in cycles:
            cyc = [int(x) for x in cyc]
            if seen & set(cyc) or len(set(cyc)) != len(cyc):
                raise PermutationError(f"cycles overlap: {cyc}")
            seen |= set(cyc)
            for a, b in zip(cyc, cyc[1:] + cyc[:1]):
                if not 0 <= a < n:
                    raise PermutationError(f"label {a} outside 0..{n - 1}")
                imgs[a] = b
        return cls(tuple(imgs))

    @classmethod
    def from_transpositions(cls, n: int, pairs: Iterable[Sequence[int]]) -> "Permutation":
        return cls.from_cycles(n, [tuple(p) for p in pairs])

    def __len__(self) -> int:
        return len(self.images)

    def __call__(self, i: int) -> int:
        return self.images[i]

    def inverse(self) -> "Permutation":
        inv = [0] * len(self.images)
        for i, j in enumerate(self.images):
            inv[j] = i
        return Permutation(tuple(inv))

    def moved(self) -> list[int]:
        return [i for i, j in enumerate(self.images) if i != j]

    def is_identity(self) -> bool:
        return all(i == j for i, j in enumerate(self.images))

    def apply_to_list(self, items: Sequence) -> list:
        """Place ``items[i]`` at position ``p(i)``."""
        out = [None] * len(items)
        for i, x in enumerate(items):
            out[self.images[i]] = x
        return out

    def __str__(self) -> str:
        return "p:" + ",".join(str(x) for x in self.images)


def compose(p: Permutation, q: Permutation) -> Permutation:
    """``p o q``: apply ``q`` first, then ``p``."""
    if len(p) != len(q):
        raise PermutationError(f"size mismatch: {len(p)} vs {len(q)}")
    return Permutation(tuple(p.images[j] for j in q.images))


def cycles(p: Permutation) -> list[tuple[int, ...]]:
    """Non-trivial cycles, each starting at its minimum, sorted by that minimum."""
    seen = [False] * len(p)
    out = []
    for start in range(len(p)):
        if seen[start] or p.images[start] == start:
            seen[start] = True
            continue
        cyc = [start]
        seen[start] = True
        j = p.images[start]
        while j != start:
            cyc.append(j)
            seen[j] = True
            j = p.images[j]
        out.append(tuple(cyc))
    return out


@dataclass(frozen=True)
class TranspositionStage:
    pairs: frozenset

    def __post_init__(self):
        pairs = frozenset(tuple(sorted((int(a), int(b)))) for a, b in self.pairs)
        used = [x for pr in pairs for x in pr]
        if len(used) != len(set(used)) or any(a == b for a, b in pairs):
            raise PermutationError(f"transpositions overlap: {sorted(pairs)}")
        object.__setattr__(self, "pairs", pairs)

    def __len__(self) -> int:
        return len(self.pairs)

    def as_permutation(self, n: int) -> Permutation:
        return Permutation.from_transpositions(n, self.pairs)


def _reflect_cycle(cyc: Sequence[int]) -> tuple[list, list]:
    # c_j -> c_{m-1-j} (first), then c_j -> c_{-j mod m}: net c_j -> c_{j+1}
    m = len(cyc)
    first = [(cyc[j], cyc[m - 1 - j]) for j in range(m // 2)]
    second = [(cyc[j], cyc[m - j]) for j in range(1, (m + 1) // 2) if j != m - j]
    return first, second


def two_stage_decomposition(p: Permutation) -> tuple[TranspositionStage, TranspositionStage]:
    """Split ``p`` into two involutions of disjoint transpositions.

    Each cycle is reflected about two axes.  ``compose(stage_b, stage_a)``
    (stage A first) reproduces ``p``.
    """
    a_pairs, b_pairs = [], []
    for cyc in cycles(p):
        first, second = _reflect_cycle(cyc)
        a_pairs += first
        b_pairs += second
    return TranspositionStage(frozenset(a_pairs)), TranspositionStage(frozenset(b_pairs))


def global_transposition(t: Tripartition, pairing: Sequence[tuple[int, int]]) -> Permutation:
    """Swap each listed (L site, R site) pair and fix every other site."""
    used = [x for pr in pairing for x in pr]
    if len(used) != len(set(used)):
        raise PermutationError(f"duplicated site in pairing {list(pairing)}")
    for l, r in pairing:
        if t.block(l) != "L" or t.block(r) != "R":
            raise PermutationError(f"pair ({l}, {r}) is not an (L, R) pair")
    return Permutation.from_transpositions(t.n, pairing)


def full_pairing(t: Tripartition) -> list[tuple[int, int]]:
    """Pair the first ``n_r`` left sites with the right sites, in order."""
    return list(zip(list(t.left)[: t.n_r], list(t.right)))


_CYC = re.compile(r"\(([^()]*)\)")


def parse_permutation(text: str, n: int | None = None) -> Permutation:
    """Parse ``p:3,0,1,2`` (image list) or ``c:(0 1 2 3)(4 5)`` (cycles).

    For cycle notation the size defaults to one past the largest label.
    """
    s = text.strip()
    try:
        if s.startswith("p:"):
            imgs = tuple(int(x) for x in s[2:].split(",") if x.strip())
            p = Permutation(imgs)
            if n is not None and len(p) != n:
                raise PermutationError(f"permutation has size {len(p)}, expected {n}")
            return p
        if s.startswith("c:"):
            body = s[2:]
            if _CYC.sub("", body).strip():
                raise PermutationError(f"bad cycle notation {text!r}")
            cyc = [tuple(int(x) for x in grp.replace(",", " ").split()) for grp in _CYC.findall(body)]
            size = n if n is not None else max((max(c) for c in cyc if c), default=-1) + 1
            return Permutation.from_cycles(size, [c for c in cyc if len(c) > 1])
    except ValueError as exc:
        if isinstance(exc, PermutationError):
            raise
        raise PermutationError(f"bad permutation {text!r}: {exc}") from None
    raise PermutationError(f"bad permutation {text!r}; expected p:<images> or c:(<cycle>)")


def format_cycles(p: Permutation) -> str:
    return "c:" + "".join("(" + " ".join(str(x) for x in c) + ")" for c in cycles(p))
