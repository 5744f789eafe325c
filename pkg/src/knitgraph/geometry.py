"""Planar geometry: segment crossing predicate, crossing counts, spatial grid."""

from __future__ import annotations

import json
import math
from pathlib import Path
from typing import Iterable, Mapping

import numpy as np

from . import _kernels

from .errors import InvalidParameter, MissingPosition

__all__ = [
    "EPS",
    "Layout",
    "positions_for",
    "segments_cross",
    "segments_cross_many",
    "SpatialGrid",
    "build_grid",
    "count_crossings",
    "crossing_pairs",
    "crossings_touching",
]

#: Collinearity tolerance, as a point-to-line distance in stitch units.
EPS = 1e-9

# Grid size caps: cells per grid, and cell entries per segment on average.
_MAX_CELLS = 1 << 16
_MAX_ENTRIES_PER_SEGMENT = 64


class Layout:
    """Node positions; row ``i`` of :attr:`positions` belongs to node ``i + 1``.

    Missing nodes are stored as NaN and rejected when the layout is used.
    """

    def __init__(self, positions):
        arr = np.array(positions, dtype=float).reshape(-1, 2)
        self.positions = arr

    def __len__(self) -> int:
        return len(self.positions)

    def __getitem__(self, node_id: int) -> np.ndarray:
        if not 1 <= node_id <= len(self.positions) or not np.all(np.isfinite(self.positions[node_id - 1])):
            raise MissingPosition(node_id)
        return self.positions[node_id - 1].copy()

    def __eq__(self, other) -> bool:
        return isinstance(other, Layout) and np.array_equal(self.positions, other.positions, equal_nan=True)

    __hash__ = None  # type: ignore[assignment]

    def __repr__(self) -> str:
        return f"Layout(n={len(self)})"

    def copy(self) -> Layout:
        return Layout(self.positions.copy())

    @classmethod
    def from_mapping(cls, mapping: Mapping[int, Iterable[float]], n: int | None = None) -> Layout:
        n = max(mapping, default=0) if n is None else n
        arr = np.full((n, 2), np.nan)
        for node_id, xy in mapping.items():
            if 1 <= int(node_id) <= n:
                arr[int(node_id) - 1] = tuple(xy)
        return cls(arr)

    def as_mapping(self) -> dict[int, tuple[float, float]]:
        return {
            i + 1: (float(x), float(y))
            for i, (x, y) in enumerate(self.positions)
            if math.isfinite(x) and math.isfinite(y)
        }

    def to_json(self) -> str:
        body = {str(k): [x, y] for k, (x, y) in self.as_mapping().items()}
        return json.dumps({"positions": body}, indent=1) + "\n"

    @classmethod
    def from_json(cls, text: str) -> Layout:
        try:
            raw = json.loads(text)["positions"]
            mapping = {int(k): (float(v[0]), float(v[1])) for k, v in raw.items()}
        except (KeyError, TypeError, ValueError, IndexError) as exc:
            raise InvalidParameter(f"malformed layout document: {exc}") from None
        return cls.from_mapping(mapping)

    def save(self, path: str | Path) -> None:
        Path(path).write_text(self.to_json(), encoding="utf-8")

    @classmethod
    def load(cls, path: str | Path) -> Layout:
        return cls.from_json(Path(path).read_text(encoding="utf-8"))


def positions_for(layout: Layout, g) -> np.ndarray:
    """The (n, 2) position array for ``g``; raises MissingPosition if incomplete."""
    P = layout.positions
    if len(P) < g.n:
        bad = np.flatnonzero(~np.all(np.isfinite(P), axis=1))
        raise MissingPosition(int(bad[0]) + 1 if len(bad) else len(P) + 1)
    P = P[: g.n]
    finite = np.all(np.isfinite(P), axis=1)
    if not finite.all():
        raise MissingPosition(int(np.flatnonzero(~finite)[0]) + 1)
    return P


# -- predicates ---------------------------------------------------------


def segments_cross_many(a1, a2, b1, b2, eps: float = EPS) -> np.ndarray:
    """Elementwise :func:`segments_cross` over (k, 2) endpoint arrays."""
    arrs = [np.ascontiguousarray(np.asarray(x, dtype=float).reshape(-1, 2)) for x in (a1, a2, b1, b2)]
    k = max(len(a) for a in arrs)
    arrs = [np.ascontiguousarray(np.broadcast_to(a, (k, 2))) for a in arrs]
    return _kernels.seg_cross_many(*arrs, float(eps))


def segments_cross(a1, a2, b1, b2, eps: float = EPS) -> bool:
    """Whether segment a1-a2 and segment b1-b2 cross.

    A shared endpoint does not count. A T-junction (an endpoint strictly
    inside the other segment) and a collinear overlap of positive length do.
    Distances within ``eps`` of a line count as on it.
    """
    (ax, ay), (bx, by), (cx, cy), (dx, dy) = (map(float, p) for p in (a1, a2, b1, b2))
    return bool(_kernels.seg_cross(ax, ay, bx, by, cx, cy, dx, dy, float(eps)))


# -- spatial grid -------------------------------------------------------


class SpatialGrid:
    """Static bucket grid over segment bounding boxes, stored as CSR arrays.

    Every segment is listed in every cell its bounding box, grown by
    ``margin`` on each side, overlaps. With ``margin`` at least the largest
    distance any endpoint moves, the grid stays a valid broad phase while
    nodes move, so it never needs updating within one iteration. Queries
    return candidate ids only; callers run the exact predicate.
    """

    def __init__(self, P: np.ndarray, segments: np.ndarray, cell_size: float | None = None, margin: float = 0.0):
        P = np.ascontiguousarray(P, dtype=float)
        S = np.ascontiguousarray(segments, dtype=np.int64).reshape(-1, 2)
        if margin < 0 or not math.isfinite(margin):
            raise InvalidParameter("margin must be finite and >= 0")
        if cell_size is None:
            cell_size = float(np.hypot(*(P[S[:, 1]] - P[S[:, 0]]).T).max()) if len(S) else 1.0
            cell_size = cell_size if cell_size > 0 else 1.0
        if not cell_size > 0 or not math.isfinite(cell_size):
            raise InvalidParameter("cell_size must be positive and finite")
        self.margin = float(margin)
        if len(S):
            used = P[np.unique(S)]
            lo = used.min(axis=0) - margin
            hi = used.max(axis=0) + margin
        else:
            lo = hi = np.zeros(2)
        self.origin = (float(lo[0]), float(lo[1]))
        extent = hi - lo
        cs = float(cell_size)
        # coarsen until the grid and its entry lists stay bounded
        while True:
            nx, ny = (int(e // cs) + 1 for e in extent)
            if nx * ny <= _MAX_CELLS and self._entries(P, S, cs, lo) <= _MAX_ENTRIES_PER_SEGMENT * max(len(S), 1):
                break
            cs *= 2.0
        self.cell_size = cs
        self.shape = (nx, ny)
        self._P, self._S = P, S
        self.offsets, self.items = _kernels.grid_build(P, S, self.margin, self.origin[0], self.origin[1], cs, nx, ny)

    def _entries(self, P, S, cs, lo) -> int:
        if not len(S):
            return 0
        a, b = P[S[:, 0]], P[S[:, 1]]
        c0 = np.floor((np.minimum(a, b) - self.margin - lo) / cs)
        c1 = np.floor((np.maximum(a, b) + self.margin - lo) / cs)
        span = c1 - c0 + 1
        return int((span[:, 0] * span[:, 1]).sum())

    @property
    def params(self) -> tuple:
        """Arguments describing the grid, in kernel order."""
        return (self.offsets, self.items, self.origin[0], self.origin[1], self.cell_size, self.shape[0], self.shape[1])

    @property
    def buckets(self) -> dict[tuple[int, int], list[int]]:
        """Non-empty cells, keyed by integer cell coordinates."""
        nx, ny = self.shape
        out = {}
        for c in range(nx * ny):
            lo, hi = self.offsets[c], self.offsets[c + 1]
            if hi > lo:
                out[(c // ny, c % ny)] = [int(s) for s in self.items[lo:hi]]
        return out

    def _cell(self, v: float, axis: int) -> int:
        c = math.floor((v - self.origin[axis]) / self.cell_size)
        return min(max(c, 0), self.shape[axis] - 1)

    def query(self, p, q) -> set[int]:
        """Ids of segments sharing a cell with the bounding box of p-q."""
        i0, i1 = self._cell(min(p[0], q[0]), 0), self._cell(max(p[0], q[0]), 0)
        j0, j1 = self._cell(min(p[1], q[1]), 1), self._cell(max(p[1], q[1]), 1)
        ny = self.shape[1]
        out: set[int] = set()
        for i in range(i0, i1 + 1):
            for j in range(j0, j1 + 1):
                c = i * ny + j
                out.update(self.items[self.offsets[c] : self.offsets[c + 1]].tolist())
        return out

    def __len__(self) -> int:
        return len(self._S)


def build_grid(P: np.ndarray, g, cell_size: float | None = None, margin: float = 0.0) -> SpatialGrid:
    """Grid over the collapsed segments of ``g`` at positions ``P`` (n, 2).

    The default cell size is the longest desired segment length.
    """
    if cell_size is None and len(g.segment_lengths):
        cell_size = float(g.segment_lengths.max())
    return SpatialGrid(P, g.segments, cell_size, margin)


def _incidence(g) -> tuple[np.ndarray, np.ndarray]:
    # CSR form of g.incident_segments
    cached = g.__dict__.get("_incidence_csr")
    if cached is None:
        inc = g.incident_segments
        ptr = np.zeros(g.n + 1, dtype=np.int64)
        ptr[1:] = np.cumsum([len(x) for x in inc])
        idx = np.concatenate([np.asarray(x, dtype=np.int64) for x in inc]) if g.n else np.empty(0, dtype=np.int64)
        cached = g.__dict__["_incidence_csr"] = (ptr, np.ascontiguousarray(idx, dtype=np.int64))
    return cached


def _segments(g) -> np.ndarray:
    return np.ascontiguousarray(g.segments, dtype=np.int64).reshape(-1, 2)


# -- crossing counts ----------------------------------------------------


def _crossing_pairs(P: np.ndarray, g, grid: SpatialGrid | None, limit: int) -> tuple[int, np.ndarray]:
    S = _segments(g)
    if len(S) < 2:
        return 0, np.empty((0, 2), dtype=np.intp)
    P = np.ascontiguousarray(P, dtype=float)
    if grid is None or grid.margin > 0:
        grid = build_grid(P, g)
    out = np.empty((limit, 2), dtype=np.int64)
    count = _kernels.crossing_pairs(P, S, *grid.params, EPS, out)
    return count, out[: min(count, limit)]


def crossing_pairs(layout: Layout, g, grid: SpatialGrid | None = None) -> np.ndarray:
    """(k, 2) array of crossing segment-id pairs, each pair once, sorted."""
    P = positions_for(layout, g)
    count, pairs = _crossing_pairs(P, g, grid, 0)
    if count:
        count, pairs = _crossing_pairs(P, g, grid, count)
    pairs = pairs[np.lexsort((pairs[:, 1], pairs[:, 0]))] if len(pairs) else pairs
    return pairs.astype(np.intp)


def count_crossings(layout: Layout, g, grid: SpatialGrid | None = None) -> int:
    """Number of crossing pairs of non-adjacent segments.

    A parallel yarn + loop pair is one segment.
    """
    return _crossing_pairs(positions_for(layout, g), g, grid, 0)[0]


def crossings_touching(layout: Layout, g, node: int, new_pos, grid: SpatialGrid | None = None) -> bool:
    """Would moving ``node`` to ``new_pos`` make one of its edges cross a non-adjacent edge?

    Only segments the grid reports near the moved edges are tested, so the
    grid must cover ``layout`` (a grid built with a margin covers nearby
    layouts too).
    """
    P = np.ascontiguousarray(positions_for(layout, g), dtype=float)
    if not 1 <= node <= g.n:
        raise MissingPosition(node)
    grid = grid if grid is not None else build_grid(P, g)
    ptr, idx = _incidence(g)
    x, y = (float(v) for v in new_pos)
    stamp = np.full(len(g.segments), -1, dtype=np.int64)
    token = np.zeros(1, dtype=np.int64)
    return bool(_kernels.touching(P, _segments(g), ptr, idx, node - 1, x, y, *grid.params, EPS, stamp, token))
