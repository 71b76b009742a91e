import pytest

from qbottleneck.graphs import (
    GraphSpecError,
    Tripartition,
    is_star,
    parse_graph,
    require_bottleneck,
    star,
    validate,
    vertex_barbell,
)


def test_star_nine_vertices():
    g = star(8)
    assert g.n == 9 and len(g.edges) == 8
    assert all(g.n_l in e for e in g.edges)


def test_star_path():
    g = star(2)
    assert g.sorted_edges() == [(0, 1), (1, 2)]


def test_star_odd_split():
    g = star(5)
    assert (g.n_l, g.n_c, g.n_r) == (3, 1, 2)
    assert validate(g).bottleneck


@pytest.mark.parametrize("k", range(1, 12))
def test_star_even_edges_and_cut(k):
    g = star(2 * k)
    assert len(g.edges) == 2 * k
    c = g.n_l
    assert all(c in e for e in g.edges)  # removing c leaves no edges, so L and R disconnect


@pytest.mark.parametrize("n", range(2, 30))
def test_star_is_bottleneck(n):
    assert validate(star(n)).bottleneck


def test_barbell_counts():
    assert vertex_barbell(5).n == 11
    g = vertex_barbell(2)
    assert g.n == 5 and len(g.edges) == 6
    assert vertex_barbell(3).degree(3) == 6
    for n in range(2, 8):
        assert len(vertex_barbell(n).edges) == n * (n - 1) + 2 * n


def test_validate_lr_edge():
    tri = Tripartition(1, 1, 1, frozenset({(0, 1), (1, 2), (0, 2)}))
    rep = validate(tri)
    assert not rep.valid and rep.violating_edges == ((0, 2),)


def test_validate_fat_center():
    rep = validate(Tripartition(3, 3, 2, frozenset()))
    assert rep.valid and not rep.bottleneck
    with pytest.raises(GraphSpecError):
        require_bottleneck(Tripartition(3, 3, 2, frozenset()))


@pytest.mark.parametrize("bad", [1, 0, -3])
def test_constructor_errors(bad):
    with pytest.raises(GraphSpecError):
        star(bad)
    with pytest.raises(GraphSpecError):
        vertex_barbell(bad)


class TestParse:
    def test_named(self):
        assert parse_graph("star:8") == star(8)
        assert parse_graph(" barbell:3 ") == vertex_barbell(3)

    def test_tri_roundtrip(self):
        g = parse_graph("tri:2,1,1:0-2;1-2;2-3;0-1")
        assert g.n == 4 and g.has_edge(2, 0)
        assert parse_graph(g.spec()) == g

    def test_star_spec_is_star(self):
        assert is_star(parse_graph("tri:2,1,2:0-2;1-2;2-3;2-4"))
        assert not is_star(vertex_barbell(2))

    @pytest.mark.parametrize(
        "text",
        ["", "star:x", "ring:4", "tri:1,1,1:0-2", "tri:1,1,1:0-5", "tri:1,1,1:0~1", "tri:1,1:0-1", "star:1", "tri:1,1,1:1-1"],
    )
    def test_rejects(self, text):
        with pytest.raises(GraphSpecError):
            parse_graph(text)
