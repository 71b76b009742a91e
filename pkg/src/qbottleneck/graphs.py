"""Architecture graphs split into left, center and right vertex blocks.

Vertices are labelled ``0 .. n_l-1`` (L), ``n_l .. n_l+n_c-1`` (C) and the
remaining ``n_r`` labels (R).  Every other module relies on this order.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from itertools import combinations


class GraphSpecError(ValueError):
    """Raised for malformed graph specifications or invalid tripartitions."""


def _norm_edge(i: int, j: int) -> tuple[int, int]:
    if i == j:
        raise GraphSpecError(f"self-loop on vertex {i}")
    return (i, j) if i < j else (j, i)


@dataclass(frozen=True)
class Tripartition:
    n_l: int
    n_c: int
    n_r: int
    edges: frozenset = field(default_factory=frozenset)
    name: str = field(default="", compare=False)

    def __post_init__(self):
        if min(self.n_l, self.n_c, self.n_r) < 0:
            raise GraphSpecError("block sizes must be non-negative")
        edges = frozenset(_norm_edge(int(i), int(j)) for i, j in self.edges)
        n = self.n
        for i, j in edges:
            if not (0 <= i < n and 0 <= j < n):
                raise GraphSpecError(f"edge ({i}, {j}) outside 0..{n - 1}")
        object.__setattr__(self, "edges", edges)

    @property
    def n(self) -> int:
        return self.n_l + self.n_c + self.n_r

    @property
    def left(self) -> range:
        return range(0, self.n_l)

    @property
    def center(self) -> range:
        return range(self.n_l, self.n_l + self.n_c)

    @property
    def right(self) -> range:
        return range(self.n_l + self.n_c, self.n)

    def block(self, v: int) -> str:
        if v < self.n_l:
            return "L"
        if v < self.n_l + self.n_c:
            return "C"
        if v < self.n:
            return "R"
        raise IndexError(v)

    def has_edge(self, i: int, j: int) -> bool:
        return i != j and _norm_edge(i, j) in self.edges

    def neighbors(self, v: int) -> list[int]:
        return sorted({j for e in self.edges if v in e for j in e if j != v})

    def degree(self, v: int) -> int:
        return sum(1 for e in self.edges if v in e)

    def sorted_edges(self) -> list[tuple[int, int]]:
        return sorted(self.edges)

    def spec(self) -> str:
        if self.name:
            return self.name
        edges = ";".join(f"{i}-{j}" for i, j in self.sorted_edges())
        return f"tri:{self.n_l},{self.n_c},{self.n_r}:{edges}"


@dataclass(frozen=True)
class BottleneckReport:
    valid: bool
    bottleneck: bool
    violating_edges: tuple
    n_l: int
    n_c: int
    n_r: int

    def as_dict(self) -> dict:
        return {
            "valid": self.valid,
            "bottleneck": self.bottleneck,
            "violating_edges": [list(e) for e in self.violating_edges],
            "n_l": self.n_l,
            "n_c": self.n_c,
            "n_r": self.n_r,
        }


def star(leaves: int) -> Tripartition:
    """Star graph with ``leaves`` leaves; the odd leaf, if any, goes to L."""
    if leaves < 2:
        raise GraphSpecError(f"star graph needs at least 2 leaves, got {leaves}")
    n_l = (leaves + 1) // 2
    n_r = leaves // 2
    c = n_l
    edges = [(c, v) for v in range(leaves + 1) if v != c]
    return Tripartition(n_l, 1, n_r, frozenset(edges), name=f"star:{leaves}")


def vertex_barbell(n: int) -> Tripartition:
    """Two ``K_n`` cliques joined through one shared cut vertex."""
    if n < 2:
        raise GraphSpecError(f"vertex barbell needs n >= 2, got {n}")
    c = n
    left = range(0, n)
    right = range(n + 1, 2 * n + 1)
    edges = list(combinations(left, 2)) + list(combinations(right, 2))
    edges += [(c, v) for v in list(left) + list(right)]
    return Tripartition(n, 1, n, frozenset(edges), name=f"barbell:{n}")


def validate(t: Tripartition) -> BottleneckReport:
    bad = tuple(
        e for e in t.sorted_edges() if {t.block(e[0]), t.block(e[1])} == {"L", "R"}
    )
    valid = not bad
    bottleneck = valid and t.n_c >= 1 and t.n_l >= t.n_r >= t.n_c
    return BottleneckReport(valid, bottleneck, bad, t.n_l, t.n_c, t.n_r)


def require_bottleneck(t: Tripartition) -> BottleneckReport:
    rep = validate(t)
    if not rep.valid:
        raise GraphSpecError(f"tripartition has L-R edges: {list(rep.violating_edges)}")
    if not rep.bottleneck:
        raise GraphSpecError(
            f"C is not a vertex bottleneck (need N_L >= N_R >= N_C >= 1, "
            f"got {t.n_l}, {t.n_r}, {t.n_c})"
        )
    return rep


def is_star(t: Tripartition) -> bool:
    if t.n_c != 1 or t.n_l + t.n_r < 2:
        return False
    c = t.n_l
    return t.edges == frozenset(_norm_edge(c, v) for v in range(t.n) if v != c)


_TRI = re.compile(r"^tri:(\d+),(\d+),(\d+):(.*)$")


def parse_graph(text: str) -> Tripartition:
    """Parse ``star:<leaves>``, ``barbell:<n>`` or ``tri:<nl>,<nc>,<nr>:<i-j;...>``.

    L-R edges are rejected.
    """
    s = text.strip()
    try:
        if s.startswith("star:"):
            return star(int(s[5:]))
        if s.startswith("barbell:"):
            return vertex_barbell(int(s[8:]))
    except ValueError as exc:
        if isinstance(exc, GraphSpecError):
            raise
        raise GraphSpecError(f"bad graph spec {text!r}: {exc}") from None
    m = _TRI.match(s)
    if not m:
        raise GraphSpecError(
            f"bad graph spec {text!r}; expected star:<k>, barbell:<n> or tri:<nl>,<nc>,<nr>:<edges>"
        )
    n_l, n_c, n_r = (int(g) for g in m.groups()[:3])
    edges = []
    body = m.group(4).strip()
    for tok in filter(None, (x.strip() for x in body.split(";"))):
        parts = tok.split("-")
        if len(parts) != 2:
            raise GraphSpecError(f"bad edge {tok!r} in {text!r}")
        try:
            edges.append((int(parts[0]), int(parts[1])))
        except ValueError:
            raise GraphSpecError(f"bad edge {tok!r} in {text!r}") from None
    t = Tripartition(n_l, n_c, n_r, frozenset(edges))
    rep = validate(t)
    if not rep.valid:
        raise GraphSpecError(f"graph spec {text!r} has L-R edges: {list(rep.violating_edges)}")
    return t
