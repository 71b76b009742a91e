"""Gate-based baseline: swap circuits that route permutations on the star graph.

Every swap on a star touches the center, so each layer holds one swap and
depth equals the swap count.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

from .free_particle import star_fourier_protocol
from .graphs import Tripartition, star
from .permutations import Permutation, PermutationError, cycles


@dataclass
class SwapCircuit:
    layers: list = field(default_factory=list)

    def __post_init__(self):
        layers = []
        for layer in self.layers:
            pairs = [tuple(sorted((int(a), int(b)))) for a, b in layer]
            used = [q for pr in pairs for q in pr]
            if len(used) != len(set(used)) or any(a == b for a, b in pairs):
                raise ValueError(f"swaps overlap within a layer: {pairs}")
            layers.append(pairs)
        self.layers = layers

    @property
    def depth(self) -> int:
        return len(self.layers)

    @property
    def n_swaps(self) -> int:
        return sum(len(layer) for layer in self.layers)

    def check_architecture(self, t: Tripartition) -> None:
        for k, layer in enumerate(self.layers):
            for a, b in layer:
                if not t.has_edge(a, b):
                    raise ValueError(f"layer {k}: swap on non-edge ({a}, {b})")

    def to_json_obj(self) -> list:
        return [[list(pr) for pr in layer] for layer in self.layers]

    @classmethod
    def from_json_obj(cls, obj) -> "SwapCircuit":
        return cls([[tuple(pr) for pr in layer] for layer in obj])


def route_star(p: Permutation, leaves: int) -> SwapCircuit:
    """Swap circuit realizing ``p`` on ``star(leaves)``.

    Cycles are handled in order of their smallest label.  A cycle through
    the center ``(c a1 ... ak)`` costs ``k`` swaps ``(c,a1), ..., (c,ak)``;
    a leaf-only cycle ``(a1 ... am)`` costs ``m + 1`` swaps
    ``(c,a1), ..., (c,am), (c,a1)``.
    """
    t = star(leaves)
    if len(p) != t.n:
        raise PermutationError(f"permutation on {len(p)} sites, star({leaves}) has {t.n}")
    c = t.n_l
    swaps: list[tuple[int, int]] = []
    for cyc in cycles(p):
        if c in cyc:
            i = cyc.index(c)
            # the center's token goes to a1 and each displaced token rides the center onward
            swaps += [(c, a) for a in cyc[i + 1 :] + cyc[:i]]
        else:
            swaps += [(c, a) for a in cyc] + [(c, cyc[0])]
    return SwapCircuit([[s] for s in swaps])


def apply_circuit_labels(circ: SwapCircuit, labels: Sequence[int]) -> list[int]:
    """Track positions: ``labels[i]`` is where token ``i`` currently sits.

    A swap ``(a, b)`` exchanges whatever tokens occupy sites ``a`` and ``b``.
    Starting from ``range(n)``, a circuit for ``p`` ends at ``p.images``.
    """
    out = list(labels)
    if len(set(out)) != len(out):
        raise ValueError("labels must be distinct positions")
    n = len(out)
    for layer in circ.layers:
        for a, b in layer:
            if not (0 <= a < n and 0 <= b < n):
                raise ValueError(f"swap ({a}, {b}) outside 0..{n - 1}")
            out = [b if x == a else a if x == b else x for x in out]
    return out


def routing_comparison(ns: Sequence[int]) -> list[dict]:
    """Swap depth against Fourier-protocol time for the full transposition on ``star(2N)``."""
    rows = []
    for N in ns:
        t = star(2 * N)
        p = Permutation.from_transpositions(t.n, zip(t.left, t.right))
        circ = route_star(p, 2 * N)
        free_time = star_fourier_protocol(N).total_time
        rows.append(
            {
                "N": N,
                "swap_depth": circ.depth,
                "free_time": free_time,
                "depth_over_time": circ.depth / free_time,
            }
        )
    return rows
