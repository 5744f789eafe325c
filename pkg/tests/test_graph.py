from collections import Counter

import networkx as nx
import pytest

from conftest import graph_from_pairs, knit

from knitgraph import (
    EdgeKind,
    EdgeLengthConfig,
    IncompleteRow,
    InvalidParameter,
    KnitGraph,
    NeedleUnderflow,
    NotKnittable,
    UnknownStitch,
    convert,
    default_dictionary,
    hamiltonian_path,
    is_planar,
    parse,
    yarn_path,
)

# per stitch: context pattern, ids of the stitch's new nodes, edges it adds
TABLE_1 = {
    "k": ("co 3\nrow: k3\nrow: k3", [5], {(4, 5), (2, 5)}),
    "p": ("co 3\nrow: k1, p1, k1", [5], {(4, 5), (2, 5)}),
    "yo": ("co 3\nrow: yo, k3", [4], {(3, 4)}),
    "kfb": ("co 3\nrow: k1, kfb, k1", [5, 6], {(4, 5), (5, 6), (2, 5), (2, 6)}),
    "k2tog": ("co 4\nrow: k4\nrow: k1, k2tog, k1", [10], {(6, 10), (7, 10), (9, 10)}),
    "sl1-k2-psso": ("co 4\nrow: k4, yo\nrow: k1, sl1-k2-psso, k1", [11], {(6, 11), (7, 11), (8, 11), (10, 11)}),
}
# cable rows list only the loop edges
TABLE_1_CABLES = {
    "c1b": ("co 4\nrow: k4\nrow: k1, c1b, k1", [10, 11], {(7, 11), (6, 10)}),
    "c2b": ("co 4\nrow: k4\nrow: c2b", [9, 10, 11, 12], {(8, 11), (7, 12), (6, 9), (5, 10)}),
}


def _added(g, new_nodes, kinds=(EdgeKind.YARN, EdgeKind.LOOP)):
    new = set(new_nodes)
    return {(e.u, e.v) for e in g.edges if max(e.u, e.v) in new and e.kind in kinds}


@pytest.mark.parametrize("stitch", sorted(TABLE_1))
def test_table_1_edges(stitch):
    text, new_nodes, expected = TABLE_1[stitch]
    g = knit(text)
    assert all(g.nodes[i - 1].stitch == stitch for i in new_nodes)
    assert _added(g, new_nodes) == expected


@pytest.mark.parametrize("stitch", sorted(TABLE_1_CABLES))
def test_table_1_cable_loops(stitch):
    text, new_nodes, expected = TABLE_1_CABLES[stitch]
    g = knit(text)
    assert _added(g, new_nodes, (EdgeKind.LOOP,)) == expected
    assert hamiltonian_path(g) == list(range(1, g.n + 1))


def test_cast_on_chain():
    g = knit("co 3")
    assert [n.id for n in g.nodes] == [1, 2, 3]
    assert {(e.u, e.v, e.kind) for e in g.edges} == {(1, 2, EdgeKind.YARN), (2, 3, EdgeKind.YARN)}


def test_edge_kinds_and_lengths():
    g = knit("co 3\nrow: k3\nrow: k3")
    by_pair = {(e.u, e.v, e.kind): e.length for e in g.edges}
    assert by_pair[(4, 5, EdgeKind.YARN)] == 0.75
    assert by_pair[(2, 5, EdgeKind.LOOP)] == 1.0
    g2 = convert(parse("co 3\nrow: k3"), EdgeLengthConfig(base_yarn_length=0.5, base_loop_length=2.0))
    assert {e.length for e in g2.edges} == {0.5, 2.0}


def test_needle_underflow():
    with pytest.raises(NeedleUnderflow) as err:
        knit("co 2\nrow: k3")
    assert err.value.row == 1
    assert (err.value.needed, err.value.available) == (1, 0)


def test_unworked_stitches_without_turn():
    with pytest.raises(IncompleteRow) as err:
        knit("co 4\nrow: k2")
    assert (err.value.row, err.value.remaining) == (1, 2)


def test_unknown_stitch_surfaces_at_conversion():
    with pytest.raises(UnknownStitch) as err:
        knit("co 4\nrow: k4\nrow: k1, zz")
    assert err.value.row == 2


def test_to_targets_resolve_against_the_needle():
    g = knit("co 6\nrow: k to last 2, k2\nrow: k to center, yo, k to end")
    assert [n.stitch for n in g.nodes[12:]] == ["k", "k", "k", "yo", "k", "k", "k"]


def test_short_row_turn_reverses_direction():
    g = knit("co 4\nrow: k4\nrow: k2, turn\nrow: k2, turn\nrow: k to end")
    loops = {e.v: e.u for e in g.edges if e.kind is EdgeKind.LOOP}
    # after the first turn, the two row-2 stitches are worked back in reverse
    assert (loops[9], loops[10]) == (8, 7)
    assert (loops[11], loops[12]) == (10, 9)


def test_drop_stretches_next_yarn_edge():
    g = knit("co 3\nrow: k3\nrow: k1, drop, k1")
    yarn = {(e.u, e.v): e.length for e in g.edges if e.kind is EdgeKind.YARN}
    # the drop pops a row-1 stitch in row 2: one row dropped doubles the edge
    assert g.n == 8
    assert yarn[(7, 8)] == pytest.approx(0.75 * 2)
    assert yarn[(6, 7)] == 0.75


def test_node_count_is_cast_on_plus_produces():
    d = default_dictionary()
    for text in ("co 5\nrow: k1, kfb, k2tog, yo, k1\nrow: p6", "co 6\nrow: k2, c1b, k2\nrow: k1, sl1-k2-psso, k2"):
        p = parse(text)
        expected = p.cast_on + sum(d[i.stitch].produces * i.count for r in p.rows for i in r.instructions)
        assert knit(text).n == expected


def test_graph_invariants(bundled):
    for name, g in bundled.items():
        assert [n.id for n in g.nodes] == list(range(1, g.n + 1)), name
        kinds = Counter()
        for e in g.edges:
            if e.kind is EdgeKind.LOOP:
                assert e.u < e.v, name
            kinds[(min(e.u, e.v), max(e.u, e.v), e.kind)] += 1
        assert max(kinds.values()) == 1, name
        assert nx.is_connected(g.to_networkx()), name


def test_flat_rows_pull_previous_row_in_reverse():
    g = knit("co 5\nrow: k5\nrow: k5\nrow: k5")
    for row in (1, 2, 3):
        ids = [n.id for n in g.nodes if n.row == row]
        parents = [next(e.u for e in g.edges if e.v == i and e.kind is EdgeKind.LOOP) for i in ids]
        assert parents == sorted(parents, reverse=True)


def test_convert_is_deterministic():
    text = "co 7\nrow: k2, yo, k to center, yo, k1, yo, k to last 2, yo, k2\nrow: k to end"
    a, b = knit(text), knit(text)
    assert a == b and a.to_json() == b.to_json()


def test_hamiltonian_path():
    assert hamiltonian_path(knit("co 3\nrow: k3")) == [1, 2, 3, 4, 5, 6]
    assert hamiltonian_path(knit("co 1")) == [1]
    with pytest.raises(NotKnittable) as err:
        hamiltonian_path(graph_from_pairs(3, [(1, 2)]))
    assert (err.value.u, err.value.v) == (2, 3)


def _walk_multiset(walk):
    return Counter((min(a, b), max(a, b)) for a, b in zip(walk, walk[1:]))


def _expected_multiset(g):
    out = Counter()
    for e in g.edges:
        out[(min(e.u, e.v), max(e.u, e.v))] += 1 if e.kind is EdgeKind.YARN else 2
    return out


def test_yarn_path_examples():
    assert yarn_path(knit("co 2")) == [1, 2]
    g = knit("co 2\nrow: k2")
    walk = yarn_path(g)
    assert walk == [1, 4, 1, 2, 3, 2, 3, 4]
    assert _walk_multiset(walk) == _expected_multiset(g)


def test_yarn_path_on_bundled(bundled):
    for name, g in bundled.items():
        walk = yarn_path(g)
        yarn = sum(e.kind is EdgeKind.YARN for e in g.edges)
        loop = len(g.edges) - yarn
        assert walk[0] == 1 and walk[-1] == g.n, name
        assert len(walk) - 1 == yarn + 2 * loop, name
        assert _walk_multiset(walk) == _expected_multiset(g), name


def test_is_planar():
    k5 = graph_from_pairs(5, [(a, b) for a in range(1, 6) for b in range(a + 1, 6)])
    assert not is_planar(k5)
    assert is_planar(KnitGraph([], []))
    assert is_planar(knit("co 3\nrow: k3\nrow: k3"))


def test_json_round_trip(tmp_path, bundled):
    g = bundled["lace"]
    path = tmp_path / "g.json"
    g.save(path)
    again = KnitGraph.load(path)
    assert again == g
    assert again.to_json() == g.to_json()
    data = g.to_dict()
    assert set(data) == {"nodes", "edges"}
    assert set(data["nodes"][0]) == {"id", "row", "stitch"}
    assert set(data["edges"][0]) == {"u", "v", "kind", "len"}


@pytest.mark.parametrize("text", ["", "{", '{"nodes": []}', '{"nodes": [{"id": 2, "row": 0, "stitch": "co"}], "edges": []}'])
def test_malformed_graph_documents(text):
    with pytest.raises(InvalidParameter):
        KnitGraph.from_json(text)


def test_segments_collapse_parallel_pairs(stockinette):
    g = stockinette
    assert len(g.edges) == 14
    assert len(g.segments) == 12
    i = [tuple(s) for s in g.segments.tolist()].index((2, 3))
    assert g.segment_lengths[i] == 0.75 and g.segment_kinds[i] is EdgeKind.YARN
