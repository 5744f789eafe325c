import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import brute_crossings, brute_touching, exact_cross, graph_from_pairs

from knitgraph import (
    InvalidParameter,
    Layout,
    MissingPosition,
    SpatialGrid,
    build_grid,
    count_crossings,
    crossing_pairs,
    crossings_touching,
    segments_cross,
)
from knitgraph.geometry import segments_cross_many


def test_predicate_examples():
    assert segments_cross((0, 0), (1, 1), (0, 1), (1, 0))
    assert not segments_cross((0, 0), (1, 0), (1, 0), (2, 1))
    assert segments_cross((0, 0), (2, 0), (1, 0), (3, 0))


@pytest.mark.parametrize(
    "a1, a2, b1, b2, expected",
    [
        ((0, 0), (2, 0), (1, 0), (1, 1), True),  # T-junction
        ((0, 0), (2, 0), (2, 0), (3, 0), False),  # collinear, touching end to end
        ((0, 0), (2, 0), (3, 0), (4, 0), False),  # collinear, apart
        ((0, 0), (2, 0), (0, 0), (2, 0), True),  # identical
        ((0, 0), (1, 0), (0, 1), (1, 1), False),  # parallel
        ((0, 0), (1, 0), (0, 0), (0, 1), False),  # shared endpoint at a corner
        ((0, 0), (4, 0), (1, 0), (3, 0), True),  # containment
    ],
)
def test_degenerate_cases(a1, a2, b1, b2, expected):
    assert segments_cross(a1, a2, b1, b2) is expected
    assert exact_cross(a1, a2, b1, b2) is expected


def test_epsilon_is_a_distance():
    assert segments_cross((0, 0), (2, 0), (1, 1e-12), (1, 1))
    assert not segments_cross((0, 0), (2, 0), (1, 1e-6), (1, 1))
    assert not segments_cross((0, 0), (2, 0), (1, 1e-6), (1, 1), eps=1e-9)
    assert segments_cross((0, 0), (2, 0), (1, 1e-6), (1, 1), eps=1e-5)


def test_randomized_predicate_against_exact_oracle():
    rng = np.random.default_rng(7)
    for trial in range(1000):
        # small integer grid: plenty of collinear and shared-endpoint cases
        pts = rng.integers(0, 4, size=(4, 2)) if trial % 2 else rng.uniform(-3, 3, size=(4, 2))
        a1, a2, b1, b2 = (tuple(p) for p in pts.tolist())
        assert segments_cross(a1, a2, b1, b2) == exact_cross(a1, a2, b1, b2), (a1, a2, b1, b2)


def test_vectorised_matches_scalar():
    rng = np.random.default_rng(3)
    P = rng.integers(0, 3, size=(500, 4, 2)).astype(float)
    many = segments_cross_many(P[:, 0], P[:, 1], P[:, 2], P[:, 3])
    assert many.tolist() == [segments_cross(*p) for p in P]


_coord = st.integers(-20, 20)
_point = st.tuples(_coord, _coord)


@settings(max_examples=300, deadline=None)
@given(_point, _point, _point, _point, _point, st.integers(1, 50))
def test_predicate_symmetry_and_invariance(a1, a2, b1, b2, shift, scale):
    base = segments_cross(a1, a2, b1, b2)
    assert segments_cross(b1, b2, a1, a2) == base
    assert segments_cross(a2, a1, b2, b1) == base
    moved = [(x + shift[0], y + shift[1]) for x, y in (a1, a2, b1, b2)]
    assert segments_cross(*moved) == base
    scaled = [(x * scale, y * scale) for x, y in (a1, a2, b1, b2)]
    assert segments_cross(*scaled) == base


def test_k4_square_with_diagonals():
    g = graph_from_pairs(4, [(1, 2), (2, 3), (3, 4), (4, 1), (1, 3), (2, 4)])
    layout = Layout([(0, 0), (1, 0), (1, 1), (0, 1)])
    assert count_crossings(layout, g) == 1
    pairs = crossing_pairs(layout, g)
    assert len(pairs) == 1
    a, b = pairs[0]
    assert {tuple(g.segments[a] + 1), tuple(g.segments[b] + 1)} == {(1, 3), (2, 4)}


def _random_instance(rng, float_coords=False):
    n = int(rng.integers(4, 9))
    pairs = [p for p in itertools.combinations(range(1, n + 1), 2) if rng.random() < 0.35]
    if not pairs:
        pairs = [(1, 2)]
    g = graph_from_pairs(n, pairs)
    coords = rng.uniform(0, 4, size=(n, 2)) if float_coords else rng.integers(0, 5, size=(n, 2)).astype(float)
    return g, Layout(coords), {i + 1: tuple(c) for i, c in enumerate(coords.tolist())}


def test_count_crossings_matches_brute_force():
    rng = np.random.default_rng(11)
    for trial in range(1000):
        g, layout, pos = _random_instance(rng, float_coords=trial % 4 == 0)
        assert count_crossings(layout, g) == brute_crossings(pos, g), trial


def test_crossings_touching_matches_brute_force():
    rng = np.random.default_rng(12)
    for trial in range(1000):
        g, layout, pos = _random_instance(rng, float_coords=trial % 4 == 0)
        node = int(rng.integers(1, g.n + 1))
        new = tuple(rng.integers(0, 5, size=2).astype(float)) if trial % 4 else tuple(rng.uniform(0, 4, size=2))
        grid = build_grid(layout.positions, g)
        got = crossings_touching(layout, g, node, new, grid)
        assert got == brute_touching(pos, g, node, new), trial
        assert crossings_touching(layout, g, node, new) == got


def test_crossings_touching_on_planar_layouts_predicts_new_crossings():
    rng = np.random.default_rng(13)
    checked = 0
    while checked < 200:
        g, layout, pos = _random_instance(rng, float_coords=True)
        if count_crossings(layout, g):
            continue
        node = int(rng.integers(1, g.n + 1))
        new = rng.uniform(0, 4, size=2)
        after = layout.copy()
        after.positions[node - 1] = new
        assert crossings_touching(layout, g, node, new) == (count_crossings(after, g) > 0)
        checked += 1


def test_move_far_from_edges_is_safe():
    g = graph_from_pairs(4, [(1, 2), (2, 3), (3, 4), (4, 1)])
    layout = Layout([(0, 0), (10, 0), (10, 10), (0, 10)])
    assert not crossings_touching(layout, g, 1, (1, 1))
    assert crossings_touching(layout, g, 1, (12, 5))


def test_grid_lists_every_overlapped_cell():
    rng = np.random.default_rng(5)
    g, layout, _ = _random_instance(rng, float_coords=True)
    grid = SpatialGrid(layout.positions, g.segments, cell_size=0.7)
    ox, oy = grid.origin
    cs = grid.cell_size
    buckets = grid.buckets
    for sid, (a, b) in enumerate(g.segments):
        p, q = layout.positions[a], layout.positions[b]
        i0, i1 = int((min(p[0], q[0]) - ox) // cs), int((max(p[0], q[0]) - ox) // cs)
        j0, j1 = int((min(p[1], q[1]) - oy) // cs), int((max(p[1], q[1]) - oy) // cs)
        for i in range(i0, min(i1, grid.shape[0] - 1) + 1):
            for j in range(j0, min(j1, grid.shape[1] - 1) + 1):
                assert sid in buckets[(i, j)]
        assert sid in grid.query(p, q)


def test_grid_margin_covers_moved_segments():
    P = np.array([[0.0, 0.0], [1.0, 0.0], [5.0, 5.0], [6.0, 5.0]])
    g = graph_from_pairs(4, [(1, 2), (3, 4)])
    tight = build_grid(P, g, cell_size=1.0)
    loose = build_grid(P, g, cell_size=1.0, margin=0.5)
    assert 0 not in tight.query((2.2, 0.3), (2.3, 0.4))
    assert 0 in loose.query((2.2, 0.3), (2.3, 0.4))


def test_grid_stays_bounded_for_spread_out_layouts():
    P = np.array([[0.0, 0.0], [1e6, 0.0], [0.0, 1e6], [1e6, 1e6]])
    g = graph_from_pairs(4, [(1, 2), (3, 4), (1, 4)])
    grid = build_grid(P, g, cell_size=0.75)
    assert grid.shape[0] * grid.shape[1] <= 1 << 16
    assert count_crossings(Layout(P), g) == 0


def test_grid_rejects_bad_cell_size():
    g = graph_from_pairs(2, [(1, 2)])
    with pytest.raises(InvalidParameter):
        build_grid(np.zeros((2, 2)), g, cell_size=0.0)


def test_missing_position():
    g = graph_from_pairs(3, [(1, 2), (2, 3)])
    with pytest.raises(MissingPosition) as err:
        count_crossings(Layout.from_mapping({1: (0, 0), 3: (1, 1)}, n=3), g)
    assert err.value.node == 2
    with pytest.raises(MissingPosition):
        count_crossings(Layout([(0, 0), (1, 1)]), g)


def test_layout_json_round_trip(tmp_path):
    layout = Layout([(0.1, 0.2), (1e-17, -3.5), (2.0 / 3.0, 7.0)])
    path = tmp_path / "l.json"
    layout.save(path)
    assert Layout.load(path) == layout
    assert '"positions"' in path.read_text()
    assert layout[2].tolist() == [1e-17, -3.5]


@pytest.mark.parametrize("text", ["{}", '{"positions": {"1": [0]}}', "nope"])
def test_layout_json_errors(text):
    with pytest.raises(InvalidParameter):
        Layout.from_json(text)
