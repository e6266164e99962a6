import pytest

from lpakit import (
    Graph,
    bk_matrix,
    classify_vertices,
    condition_L,
    disjoint_union,
    graph_from_json,
    graph_to_json,
    hereditary_saturated_closure,
    incidence_matrix,
    is_purely_infinite_simple,
    is_simple,
    matrix_algebra_size,
    rose,
    source_eliminate,
)
from lpakit.errors import InputError

from conftest import corpus, make_E34, make_K2, make_line3, seeded


def test_graph_validation():
    with pytest.raises(InputError):
        Graph((), ())
    with pytest.raises(InputError):
        Graph(("v", "v"), ())
    with pytest.raises(InputError):
        Graph(("v",), (("e", "v", "v"), ("e", "v", "v")))
    with pytest.raises(InputError):
        Graph(("v",), (("e", "v", "w"),))


def test_classify_vertices():
    r2 = rose(2)
    cls = classify_vertices(r2)
    assert cls.regular == ("v",) and cls.sinks == ()

    cls = classify_vertices(make_line3())
    assert cls.regular == ("v1", "v2")
    assert cls.sinks == ("v3",)
    assert cls.sources == ("v1",)

    cls = classify_vertices(make_E34())
    assert cls.regular == ("u", "v")
    assert cls.sources == ("u",)


def test_incidence_matrix():
    assert incidence_matrix(rose(2)).data == ((2,),)
    assert incidence_matrix(make_K2()).data == ((2, 1), (1, 2))
    assert incidence_matrix(make_line3()).data == ((0, 1, 0), (0, 0, 1))


def test_incidence_row_sums():
    for g in corpus().values():
        a = incidence_matrix(g)
        regular = classify_vertices(g).regular
        for row, v in zip(a.data, regular):
            assert all(x >= 0 for x in row)
            assert sum(row) == len(g.out_edges(v))


def test_bk_matrix():
    assert bk_matrix(rose(2)).data == ((-1,),)
    assert bk_matrix(make_K2()).data == ((-1, -1), (-1, -1))
    assert bk_matrix(make_line3()).data == ((1, 0), (-1, 1), (0, -1))


def test_condition_L():
    assert condition_L(rose(1)) is False
    assert condition_L(rose(2)) is True
    assert condition_L(make_line3()) is True


def test_is_simple():
    assert is_simple(rose(2)) is True
    assert is_simple(rose(1)) is False
    assert is_simple(disjoint_union(rose(2), rose(2))) is False
    assert is_simple(make_line3()) is True


def test_purely_infinite_simple():
    assert is_purely_infinite_simple(rose(2)) is True
    assert is_purely_infinite_simple(make_line3()) is False
    assert is_purely_infinite_simple(rose(1)) is False
    assert is_purely_infinite_simple(make_line3()) is (
        is_simple(make_line3()) and False
    )


def test_pis_implies_simple():
    for g in corpus().values():
        if is_purely_infinite_simple(g):
            assert is_simple(g)
        if matrix_algebra_size(g) is not None:
            assert not is_purely_infinite_simple(g)


def test_matrix_algebra_size():
    assert matrix_algebra_size(make_line3()) == 3
    assert matrix_algebra_size(rose(2)) is None
    assert matrix_algebra_size(Graph(("v",), ())) == 1


def test_closure():
    line3 = make_line3()
    allv = frozenset(line3.vertices)
    for v in line3.vertices:
        assert hereditary_saturated_closure(line3, {v}) == allv
    both = disjoint_union(rose(2), rose(2))
    assert hereditary_saturated_closure(both, {"g1_v"}) == frozenset({"g1_v"})


def test_source_eliminate():
    line3 = make_line3()
    got = source_eliminate(line3)
    assert got.vertices == ("v3",) and got.edges == ()

    r2 = rose(2)
    assert source_eliminate(r2) == r2

    got = source_eliminate(make_E34())
    assert got.vertices == ("v",)
    assert len(got.edges) == 4
    assert all(s == r == "v" for _, s, r in got.edges)


def test_source_eliminate_idempotent():
    for g in corpus().values():
        once = source_eliminate(g)
        assert source_eliminate(once) == once


def relabel(g, rng):
    verts = list(g.vertices)
    rng.shuffle(verts)
    edges = list(g.edges)
    rng.shuffle(edges)
    vmap = {v: f"x{i}" for i, v in enumerate(verts)}
    emap = {e: f"y{i}" for i, (e, _, _) in enumerate(edges)}
    return Graph(
        tuple(vmap[v] for v in verts),
        tuple((emap[e], vmap[s], vmap[r]) for e, s, r in edges),
    )


def test_simplicity_relabel_invariant():
    rng = seeded("relabel")
    for g in corpus().values():
        want = is_simple(g)
        for _ in range(4):
            assert is_simple(relabel(g, rng)) == want


def test_json_round_trip():
    for g in corpus().values():
        assert graph_from_json(graph_to_json(g)) == g


def test_json_errors():
    with pytest.raises(InputError, match="unknown keys"):
        graph_from_json('{"vertices": ["v"], "edges": [], "extra": 1}')
    with pytest.raises(InputError, match="'a'"):
        graph_from_json('{"vertices": ["a", "a"], "edges": []}')
    with pytest.raises(InputError, match="'e'"):
        graph_from_json(
            '{"vertices": ["v"], "edges": ['
            '{"id": "e", "src": "v", "dst": "v"},'
            '{"id": "e", "src": "v", "dst": "v"}]}'
        )
    with pytest.raises(InputError, match="unknown keys"):
        graph_from_json(
            '{"vertices": ["v"], "edges": [{"id": "e", "src": "v", "dst": "v", "weight": 2}]}'
        )
    with pytest.raises(InputError):
        graph_from_json("not json")
