import numpy as np
import pytest
from hypothesis import given, strategies as st

from qbottleneck.graphs import star
from qbottleneck.permutations import (
    Permutation,
    PermutationError,
    TranspositionStage,
    compose,
    cycles,
    format_cycles,
    full_pairing,
    global_transposition,
    parse_permutation,
    two_stage_decomposition,
)


def test_cycles_examples():
    assert cycles(Permutation.identity(5)) == []
    assert cycles(Permutation((1, 2, 3, 0))) == [(0, 1, 2, 3)]
    assert cycles(Permutation((1, 0, 3, 2))) == [(0, 1), (2, 3)]


def test_decomposition_four_cycle():
    p = Permutation((1, 2, 3, 0))
    a, b = two_stage_decomposition(p)
    assert a.pairs == {(0, 3), (1, 2)}
    assert b.pairs == {(1, 3)}
    assert compose(b.as_permutation(4), a.as_permutation(4)) == p


def test_decomposition_trivial_cases():
    a, b = two_stage_decomposition(Permutation((1, 0)))
    assert a.pairs == {(0, 1)} and b.pairs == frozenset()
    a, b = two_stage_decomposition(Permutation.identity(3))
    assert not a.pairs and not b.pairs


def test_compose_examples():
    q = Permutation((2, 0, 1))
    assert compose(Permutation.identity(3), q) == q
    assert compose(q, q.inverse()).is_identity()
    s01 = Permutation.from_transpositions(3, [(0, 1)])
    s12 = Permutation.from_transpositions(3, [(1, 2)])
    r = compose(s01, s12)
    assert r.images == (1, 2, 0)
    # apply-to-list oracle: applying s12 then s01 to labels
    items = ["a", "b", "c"]
    assert r.apply_to_list(items) == s01.apply_to_list(s12.apply_to_list(items))


def test_compose_size_mismatch():
    with pytest.raises(PermutationError):
        compose(Permutation.identity(2), Permutation.identity(3))


@pytest.mark.parametrize("bad", [(0, 0), (1, 2), (-1, 0)])
def test_invalid(bad):
    with pytest.raises(PermutationError):
        Permutation(bad)


def test_stage_disjointness():
    with pytest.raises(PermutationError):
        TranspositionStage(frozenset({(0, 1), (1, 2)}))


def test_global_transposition_star4():
    g = star(4)
    p = global_transposition(g, [(0, 3), (1, 4)])
    assert compose(p, p).is_identity()
    assert all(p(leaf) != leaf for leaf in (0, 1, 3, 4))
    assert global_transposition(g, []).is_identity()
    assert len(global_transposition(star(6), full_pairing(star(6))).moved()) == 6


def test_global_transposition_errors():
    g = star(4)
    with pytest.raises(PermutationError):
        global_transposition(g, [(0, 3), (0, 4)])
    with pytest.raises(PermutationError):
        global_transposition(g, [(0, 1)])


def test_seeded_decompositions():
    rng = np.random.default_rng(2024)
    for _ in range(1000):
        n = int(rng.integers(1, 65))
        p = Permutation(tuple(int(x) for x in rng.permutation(n)))
        a, b = two_stage_decomposition(p)
        pa, pb = a.as_permutation(n), b.as_permutation(n)
        assert compose(pb, pa) == p
        assert compose(pa, pa).is_identity() and compose(pb, pb).is_identity()


@given(st.integers(1, 40))
def test_even_cycle_stage_sizes(n):
    p = Permutation.from_cycles(2 * n, [list(range(2 * n))])
    a, b = two_stage_decomposition(p)
    assert (len(a), len(b)) == (n, n - 1)


@given(st.permutations(list(range(9))))
def test_text_roundtrip(images):
    p = Permutation(tuple(images))
    assert parse_permutation(str(p)) == p
    assert parse_permutation(format_cycles(p), 9) == p


def test_parse_examples():
    assert parse_permutation("p:3,0,1,2").images == (3, 0, 1, 2)
    assert parse_permutation("c:(0 1 2 3)").images == (1, 2, 3, 0)
    assert parse_permutation("c:(0 1)", 4).images == (1, 0, 2, 3)
    assert parse_permutation("c:", 3).is_identity()


@pytest.mark.parametrize("bad", ["3,0,1,2", "p:0,0", "c:(0 1", "c:(0 1)(1 2)", "c:(a b)", "p:0,1"])
def test_parse_rejects(bad):
    with pytest.raises(PermutationError):
        parse_permutation(bad, 3 if bad == "p:0,1" else None)
