"""Crossing-free initial layout.

The planarity test comes from networkx; everything after it (face tracing,
outer-face choice, augmentation, canonical ordering and the shift method)
operates on our own rotation system.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass

import numpy as np

from .errors import InvalidParameter, NotPlanar
from .geometry import Layout
from .graph import KnitGraph, _planarity

__all__ = ["Embedding", "RotationSystem", "embed", "grid_layout", "planar_layout", "trace_faces"]


class RotationSystem:
    """Cyclic clockwise neighbour order around every node (doubly linked)."""

    def __init__(self):
        self._cw: dict[int, dict[int, int]] = {}
        self._ccw: dict[int, dict[int, int]] = {}
        self._first: dict[int, int | None] = {}

    @classmethod
    def from_lists(cls, rotation: dict[int, list[int]]) -> RotationSystem:
        rot = cls()
        for v, nbrs in rotation.items():
            rot.add_node(v)
            k = len(nbrs)
            rot._cw[v] = {nbrs[i]: nbrs[(i + 1) % k] for i in range(k)}
            rot._ccw[v] = {nbrs[i]: nbrs[(i - 1) % k] for i in range(k)}
            rot._first[v] = nbrs[0] if nbrs else None
        return rot

    def add_node(self, v: int) -> None:
        self._cw.setdefault(v, {})
        self._ccw.setdefault(v, {})
        self._first.setdefault(v, None)

    @property
    def nodes(self):
        return self._cw.keys()

    def has_edge(self, v: int, w: int) -> bool:
        return w in self._cw[v]

    def cw(self, v: int, w: int) -> int:
        return self._cw[v][w]

    def ccw(self, v: int, w: int) -> int:
        return self._ccw[v][w]

    def degree(self, v: int) -> int:
        return len(self._cw[v])

    def neighbors_cw(self, v: int) -> list[int]:
        start = self._first[v]
        if start is None:
            return []
        out = [start]
        nxt = self._cw[v][start]
        while nxt != start:
            out.append(nxt)
            nxt = self._cw[v][nxt]
        return out

    def _insert_between(self, v: int, w: int, before: int, after: int) -> None:
        # order becomes ... before, w, after ... (clockwise)
        self._cw[v][before] = w
        self._ccw[v][w] = before
        self._cw[v][w] = after
        self._ccw[v][after] = w

    def insert_cw_after(self, v: int, w: int, ref: int | None) -> None:
        """Add half-edge v->w directly clockwise after v->ref."""
        if ref is None or not self._cw[v]:
            self._cw[v][w] = w
            self._ccw[v][w] = w
            self._first[v] = w
            return
        self._insert_between(v, w, ref, self._cw[v][ref])

    def insert_cw_before(self, v: int, w: int, ref: int) -> None:
        """Add half-edge v->w directly clockwise before v->ref."""
        self._insert_between(v, w, self._ccw[v][ref], ref)

    def next_face_half_edge(self, v: int, w: int) -> tuple[int, int]:
        return w, self._ccw[w][v]

    def connect_components(self, v: int, w: int) -> None:
        for a, b in ((v, w), (w, v)):
            first = self._first[a]
            self.insert_cw_after(a, b, None if first is None else self._ccw[a][first])

    def to_lists(self) -> dict[int, list[int]]:
        return {v: self.neighbors_cw(v) for v in sorted(self._cw)}


def trace_faces(rot: RotationSystem) -> list[list[int]]:
    """All faces as node cycles, in a deterministic order.

    A face is listed by walking its half-edges; a node may repeat when it is
    a cut vertex. An isolated node forms a one-node face.
    """
    seen: set[tuple[int, int]] = set()
    faces = []
    for v in sorted(rot.nodes):
        nbrs = rot.neighbors_cw(v)
        if not nbrs:
            faces.append([v])
            continue
        for w in nbrs:
            if (v, w) in seen:
                continue
            face = []
            a, b = v, w
            while (a, b) not in seen:
                seen.add((a, b))
                face.append(a)
                a, b = rot.next_face_half_edge(a, b)
            faces.append(face)
    return faces


@dataclass(frozen=True)
class Embedding:
    """Combinatorial embedding: clockwise rotation lists, faces, chosen outer face."""

    rotation: dict[int, list[int]]
    faces: tuple[tuple[int, ...], ...]
    outer_face: int

    @property
    def outer(self) -> tuple[int, ...]:
        return self.faces[self.outer_face]

    @property
    def n_edges(self) -> int:
        return sum(len(v) for v in self.rotation.values()) // 2


def _choose_outer(faces, must_contain: int | None) -> int:
    best = None
    for idx, face in enumerate(faces):
        nodes = set(face)
        if must_contain is not None and must_contain not in nodes:
            continue
        key = (-len(nodes), min(nodes))
        if best is None or key < best[0]:
            best = (key, idx)
    if best is None:
        raise InvalidParameter(f"node {must_contain} lies on no face")
    return best[1]


def embed(g: KnitGraph, outer_node: int | None = None) -> Embedding:
    """Planar embedding of ``g`` whose outer face is a face with the most nodes.

    Ties go to the face with the smallest minimum node id. ``outer_node``
    restricts the choice to faces through that node.
    """
    planar, result = _planarity(g)
    if not planar:
        witness = None
        if result is not None:
            witness = (set(result.nodes), set(result.edges))
        raise NotPlanar(witness)
    rotation = {v: list(result.neighbors_cw_order(v)) for v in range(1, g.n + 1)}
    faces = trace_faces(RotationSystem.from_lists(rotation))
    outer = _choose_outer(faces, outer_node) if faces else 0
    return Embedding(rotation, tuple(tuple(f) for f in faces), outer)


# -- augmentation -------------------------------------------------------


def _make_biconnected(rot: RotationSystem, start: int, out: int, counted: set) -> list[int]:
    """Walk the face left of start->out, adding chords where a node repeats."""
    if (start, out) in counted:
        return []
    counted.add((start, out))
    v1, v2 = start, out
    face = [start]
    face_set = {start}
    _, v3 = rot.next_face_half_edge(v1, v2)
    while v2 != start or v3 != out:
        if v2 in face_set:
            rot.insert_cw_after(v1, v3, v2)
            rot.insert_cw_before(v3, v1, v2)
            counted.add((v2, v3))
            counted.add((v3, v1))
            v2 = v1
        else:
            face_set.add(v2)
            face.append(v2)
        v1 = v2
        v2, v3 = rot.next_face_half_edge(v2, v3)
        counted.add((v1, v2))
    return face


def _triangulate_face(rot: RotationSystem, v1: int, v2: int) -> None:
    _, v3 = rot.next_face_half_edge(v1, v2)
    _, v4 = rot.next_face_half_edge(v2, v3)
    if v1 in (v2, v3):
        return
    while v1 != v4:
        if rot.has_edge(v1, v3):
            v1, v2, v3 = v2, v3, v4
        else:
            rot.insert_cw_after(v1, v3, v2)
            rot.insert_cw_before(v3, v1, v2)
            v1, v2, v3 = v1, v3, v4
        _, v4 = rot.next_face_half_edge(v2, v3)


def _augment(emb: Embedding) -> tuple[RotationSystem, list[int]]:
    """Connected, biconnected, internally triangulated copy plus its outer face."""
    rot = RotationSystem.from_lists(emb.rotation)
    outer = list(emb.outer)

    # join components at their smallest nodes
    comp_of: dict[int, int] = {}
    reps = []
    for v in sorted(rot.nodes):
        if v in comp_of:
            continue
        reps.append(v)
        stack = [v]
        comp_of[v] = v
        while stack:
            x = stack.pop()
            for y in rot.neighbors_cw(x):
                if y not in comp_of:
                    comp_of[y] = v
                    stack.append(y)
    if len(reps) > 1:
        for a, b in zip(reps, reps[1:]):
            rot.connect_components(a, b)
        faces = trace_faces(rot)
        outer = faces[_choose_outer(faces, None)]

    counted: set[tuple[int, int]] = set()
    start, out = outer[0], outer[1 % len(outer)]
    outer_face = _make_biconnected(rot, start, out, counted)
    faces = []
    for v in sorted(rot.nodes):
        for w in rot.neighbors_cw(v):
            face = _make_biconnected(rot, v, w, counted)
            if face:
                faces.append(face)
    for face in faces:
        _triangulate_face(rot, face[0], face[1])
    return rot, outer_face


def _canonical_ordering(rot: RotationSystem, outer_face: list[int]):
    """Canonical ordering (v_k, contour neighbours) for an internally triangulated graph."""
    v1, v2 = outer_face[0], outer_face[1]
    chords: dict[int, int] = {v: 0 for v in rot.nodes}
    marked: set[int] = set()
    ready: set[int] = set(outer_face)
    heap = list(ready)
    heapq.heapify(heap)

    ccw_nbr: dict[int, int] = {}
    prev = v2
    for idx in range(2, len(outer_face)):
        ccw_nbr[prev] = outer_face[idx]
        prev = outer_face[idx]
    ccw_nbr[prev] = v1

    cw_nbr: dict[int, int] = {}
    prev = v1
    for idx in range(len(outer_face) - 1, 0, -1):
        cw_nbr[prev] = outer_face[idx]
        prev = outer_face[idx]

    def is_outer_nbr(x, y):
        if x not in ccw_nbr:
            return cw_nbr[x] == y
        if x not in cw_nbr:
            return ccw_nbr[x] == y
        return ccw_nbr[x] == y or cw_nbr[x] == y

    def on_outer(x):
        return x not in marked and (x in ccw_nbr or x == v1)

    def make_ready(x):
        if x not in ready:
            ready.add(x)
            heapq.heappush(heap, x)

    for v in outer_face:
        for nbr in rot.neighbors_cw(v):
            if on_outer(nbr) and not is_outer_nbr(v, nbr):
                chords[v] += 1
                ready.discard(v)

    n = len(rot.nodes)
    order: list = [None] * n
    order[0] = (v1, [])
    order[1] = (v2, [])
    ready.discard(v1)
    ready.discard(v2)

    for k in range(n - 1, 1, -1):
        while True:
            v = heapq.heappop(heap)
            if v in ready:
                break
        ready.discard(v)
        marked.add(v)

        wp = wq = None
        for nbr in rot.neighbors_cw(v):
            if nbr in marked:
                continue
            if on_outer(nbr):
                if nbr == v1:
                    wp = v1
                elif nbr == v2:
                    wq = v2
                elif cw_nbr[nbr] == v:
                    wp = nbr
                else:
                    wq = nbr
            if wp is not None and wq is not None:
                break

        contour = [wp]
        nbr = wp
        while nbr != wq:
            nxt = rot.ccw(v, nbr)
            contour.append(nxt)
            cw_nbr[nbr] = nxt
            ccw_nbr[nxt] = nbr
            nbr = nxt

        if len(contour) == 2:
            for w in (wp, wq):
                chords[w] -= 1
                if chords[w] == 0:
                    make_ready(w)
        else:
            fresh = set(contour[1:-1])
            for w in sorted(fresh):
                make_ready(w)
                for nbr in rot.neighbors_cw(w):
                    if on_outer(nbr) and not is_outer_nbr(w, nbr):
                        chords[w] += 1
                        ready.discard(w)
                        if nbr not in fresh:
                            chords[nbr] += 1
                            ready.discard(nbr)
        order[k] = (v, contour)
    return order


def _shift_method(order) -> dict[int, tuple[int, int]]:
    left: dict[int, int | None] = {}
    right: dict[int, int | None] = {}
    dx: dict[int, int] = {}
    y: dict[int, int] = {}

    v1, v2, v3 = order[0][0], order[1][0], order[2][0]
    dx[v1], y[v1], right[v1], left[v1] = 0, 0, v3, None
    dx[v2], y[v2], right[v2], left[v2] = 1, 0, None, None
    dx[v3], y[v3], right[v3], left[v3] = 1, 1, v2, None

    for k in range(3, len(order)):
        vk, contour = order[k]
        wp, wp1, wq, wq1 = contour[0], contour[1], contour[-1], contour[-2]
        multi = len(contour) > 2

        dx[wp1] += 1
        dx[wq] += 1
        span = sum(dx[x] for x in contour[1:])

        dx[vk] = (-y[wp] + span + y[wq]) // 2
        y[vk] = (y[wp] + span + y[wq]) // 2
        dx[wq] = span - dx[vk]
        if multi:
            dx[wp1] -= dx[vk]

        right[wp] = vk
        right[vk] = wq
        if multi:
            left[vk] = wp1
            right[wq1] = None
        else:
            left[vk] = None

    pos = {v1: (0, y[v1])}
    stack = [v1]
    while stack:
        parent = stack.pop()
        for tree in (left, right):
            child = tree[parent]
            if child is not None:
                pos[child] = (pos[parent][0] + dx[child], y[child])
                stack.append(child)
    return pos


def grid_coordinates(emb: Embedding) -> dict[int, tuple[int, int]]:
    """Integer straight-line drawing of the embedded graph, outer face kept outside."""
    nodes = sorted(emb.rotation)
    if len(nodes) < 4:
        corners = [(0, 0), (2, 0), (1, 1)]
        return {v: corners[i] for i, v in enumerate(nodes)}
    rot, outer_face = _augment(emb)
    return _shift_method(_canonical_ordering(rot, outer_face))


def grid_layout(emb: Embedding, g: KnitGraph | None = None) -> Layout:
    """Layout from :func:`grid_coordinates`.

    With ``g`` given, the drawing is uniformly rescaled so the mean segment
    length equals the mean desired length of ``g``.
    """
    coords = grid_coordinates(emb)
    n = max(emb.rotation, default=0)
    P = np.zeros((n, 2))
    for v, xy in coords.items():
        P[v - 1] = xy
    if g is not None and len(g.segments):
        S = g.segments
        current = np.hypot(*(P[S[:, 0]] - P[S[:, 1]]).T).mean()
        if current > 0:
            P = P * (g.segment_lengths.mean() / current)
    return Layout(P)


def planar_layout(g: KnitGraph, outer_node: int | None = None) -> Layout:
    """Embed ``g`` and return its rescaled crossing-free grid drawing."""
    return grid_layout(embed(g, outer_node), g)
