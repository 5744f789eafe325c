"""Knit multigraph: conversion from patterns, structural checks, JSON I/O."""

from __future__ import annotations

import json
from dataclasses import dataclass
from enum import Enum
from functools import cached_property
from pathlib import Path

import networkx as nx
import numpy as np

from .errors import IncompleteRow, InvalidParameter, NeedleUnderflow, NotKnittable, UnknownStitch, ValidationError
from .pattern import Instruction, Pattern
from .stitches import EdgeLengthConfig, StitchDictionary, default_dictionary

__all__ = [
    "EdgeKind",
    "Node",
    "Edge",
    "KnitGraph",
    "NeedleState",
    "convert",
    "hamiltonian_path",
    "yarn_path",
    "is_planar",
]


class EdgeKind(str, Enum):
    YARN = "yarn"
    LOOP = "loop"


@dataclass(frozen=True)
class Node:
    id: int
    row: int
    stitch: str


@dataclass(frozen=True)
class Edge:
    u: int
    v: int
    kind: EdgeKind
    length: float


class KnitGraph:
    """Stitch nodes ``1..n`` in creation order plus typed edges.

    The graph is treated as immutable once built; derived arrays are cached.
    """

    def __init__(self, nodes, edges):
        self.nodes: tuple[Node, ...] = tuple(nodes)
        self.edges: tuple[Edge, ...] = tuple(edges)
        for i, node in enumerate(self.nodes, 1):
            if node.id != i:
                raise InvalidParameter(f"node ids must be 1..n in order, found {node.id} at position {i}")
        n = len(self.nodes)
        for e in self.edges:
            if not (1 <= e.u <= n and 1 <= e.v <= n):
                raise InvalidParameter(f"edge ({e.u}, {e.v}) references a missing node")
            if e.u == e.v:
                raise InvalidParameter(f"self loop on node {e.u}")
            if not np.isfinite(e.length):
                raise InvalidParameter(f"edge ({e.u}, {e.v}) has a non-finite length")

    @property
    def n(self) -> int:
        return len(self.nodes)

    def __repr__(self) -> str:
        return f"KnitGraph(n={self.n}, m={len(self.edges)})"

    def __eq__(self, other) -> bool:
        return isinstance(other, KnitGraph) and self.nodes == other.nodes and self.edges == other.edges

    __hash__ = None  # type: ignore[assignment]

    @cached_property
    def edge_index(self) -> np.ndarray:
        """(m, 2) int array of 0-based endpoints, one row per graph edge."""
        return np.array([(e.u - 1, e.v - 1) for e in self.edges], dtype=np.intp).reshape(-1, 2)

    @cached_property
    def desired(self) -> np.ndarray:
        return np.array([e.length for e in self.edges], dtype=float)

    @cached_property
    def _segments(self):
        first: dict[tuple[int, int], int] = {}
        ends, lengths, kinds = [], [], []
        for e in self.edges:
            key = (min(e.u, e.v), max(e.u, e.v))
            if key in first:
                s = first[key]
                lengths[s] = min(lengths[s], e.length)
                if e.kind is EdgeKind.YARN:
                    kinds[s] = EdgeKind.YARN
                continue
            first[key] = len(ends)
            ends.append((key[0] - 1, key[1] - 1))
            lengths.append(e.length)
            kinds.append(e.kind)
        return (
            np.array(ends, dtype=np.intp).reshape(-1, 2),
            np.array(lengths, dtype=float),
            tuple(kinds),
        )

    @property
    def segments(self) -> np.ndarray:
        """Collapsed simple-graph edges as 0-based index pairs (u < v).

        A parallel yarn + loop pair becomes one segment whose desired length
        is the smaller of the two.
        """
        return self._segments[0]

    @property
    def segment_lengths(self) -> np.ndarray:
        return self._segments[1]

    @property
    def segment_kinds(self) -> tuple[EdgeKind, ...]:
        return self._segments[2]

    @cached_property
    def incident_segments(self) -> tuple[np.ndarray, ...]:
        """Per node (0-based), the indices of its segments."""
        buckets: list[list[int]] = [[] for _ in range(self.n)]
        for s, (a, b) in enumerate(self.segments):
            buckets[a].append(s)
            buckets[b].append(s)
        return tuple(np.array(b, dtype=np.intp) for b in buckets)

    def to_networkx(self) -> nx.Graph:
        G = nx.Graph()
        G.add_nodes_from(range(1, self.n + 1))
        G.add_edges_from((int(a) + 1, int(b) + 1) for a, b in self.segments)
        return G

    # -- serialization -------------------------------------------------

    def to_dict(self) -> dict:
        return {
            "nodes": [{"id": v.id, "row": v.row, "stitch": v.stitch} for v in self.nodes],
            "edges": [{"u": e.u, "v": e.v, "kind": e.kind.value, "len": e.length} for e in self.edges],
        }

    @classmethod
    def from_dict(cls, data: dict) -> KnitGraph:
        try:
            nodes = [Node(int(v["id"]), int(v["row"]), str(v["stitch"])) for v in data["nodes"]]
            edges = [
                Edge(int(e["u"]), int(e["v"]), EdgeKind(e["kind"]), float(e["len"])) for e in data["edges"]
            ]
        except (KeyError, TypeError, ValueError) as exc:
            raise InvalidParameter(f"malformed graph document: {exc}") from None
        return cls(nodes, edges)

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=1) + "\n"

    @classmethod
    def from_json(cls, text: str) -> KnitGraph:
        try:
            data = json.loads(text)
        except ValueError as exc:
            raise InvalidParameter(f"malformed graph document: {exc}") from None
        return cls.from_dict(data)

    def save(self, path: str | Path) -> None:
        Path(path).write_text(self.to_json(), encoding="utf-8")

    @classmethod
    def load(cls, path: str | Path) -> KnitGraph:
        return cls.from_json(Path(path).read_text(encoding="utf-8"))


@dataclass
class NeedleState:
    """Two stacks; the top of ``working`` is the next stitch to work."""

    working: list[int]
    done: list[int]

    def swap(self) -> None:
        self.working, self.done = self.done, self.working


def _repetitions(ins: Instruction, needle: NeedleState, consumes: int, row_start: int, row: int):
    if ins.until is None:
        for _ in range(ins.count):
            yield
        return
    if consumes == 0:
        raise ValidationError(f"row {row}: '{ins}' never consumes a stitch")
    if ins.until == "end":
        target = 0
    elif ins.until == "last":
        target = ins.leave
    else:
        target = (row_start + 1) // 2
    if len(needle.working) < target:
        raise NeedleUnderflow(row, str(ins), target, len(needle.working))
    while len(needle.working) - consumes >= target:
        yield


def convert(
    pattern: Pattern,
    cfg: EdgeLengthConfig | None = None,
    dictionary: StitchDictionary | None = None,
) -> KnitGraph:
    """Run the pattern on a two-stack needle and record every stitch.

    Each new node gets a yarn edge to the previously created node and loop
    edges to the stitches it was pulled through. Rows (and ``turn``) swap the
    two stacks, which reverses direction the way flat knitting does.
    """
    cfg = cfg or EdgeLengthConfig()
    dictionary = dictionary or default_dictionary()
    co = dictionary.lookup("co")
    nodes: list[Node] = []
    edges: list[Edge] = []
    pending_stretch = 0.0

    def add_node(row: int, sdef, loops: list[int]) -> int:
        nonlocal pending_stretch
        nid = len(nodes) + 1
        nodes.append(Node(nid, row, sdef.name))
        if nid > 1:
            factor = sdef.yarn_length_factor * (1.0 + pending_stretch)
            pending_stretch = 0.0
            edges.append(Edge(nid - 1, nid, EdgeKind.YARN, cfg.base_yarn_length * factor))
        for p in loops:
            edges.append(Edge(p, nid, EdgeKind.LOOP, cfg.base_loop_length * sdef.loop_length_factor))
        return nid

    needle = NeedleState(working=[], done=[])
    for _ in range(pattern.cast_on):
        needle.working.append(add_node(0, co, []))

    for r, row in enumerate(pattern.rows, 1):
        row_start = len(needle.working)
        for ins in row.instructions:
            if ins.stitch not in dictionary:
                raise UnknownStitch(ins.stitch, r)
            sdef = dictionary[ins.stitch]
            for _ in _repetitions(ins, needle, sdef.consumes, row_start, r):
                if len(needle.working) < sdef.consumes:
                    raise NeedleUnderflow(r, str(ins), sdef.consumes, len(needle.working))
                popped = [needle.working.pop() for _ in range(sdef.consumes)]
                if sdef.produces == 0:
                    for p in popped:
                        pending_stretch += cfg.drop_multiplier * (r - nodes[p - 1].row)
                for loops in sdef.loop_targets(popped):
                    needle.done.append(add_node(r, sdef, loops))
        if needle.working and not row.turn:
            raise IncompleteRow(r, len(needle.working))
        needle.swap()
    return KnitGraph(nodes, edges)


def _yarn_pairs(g: KnitGraph) -> set[tuple[int, int]]:
    return {(min(e.u, e.v), max(e.u, e.v)) for e in g.edges if e.kind is EdgeKind.YARN}


def hamiltonian_path(g: KnitGraph) -> list[int]:
    """The creation order ``[1..n]``, after checking it is walkable on yarn edges."""
    yarn = _yarn_pairs(g)
    for i in range(1, g.n):
        if (i, i + 1) not in yarn:
            raise NotKnittable(i, i + 1)
    return list(range(1, g.n + 1))


def yarn_path(g: KnitGraph) -> list[int]:
    """Walk of the physical yarn: every loop edge out and back, yarn edges once.

    Along the creation order, at each node the not yet walked loop edges are
    taken out-and-back in ascending neighbour order before moving on.
    """
    order = hamiltonian_path(g)
    if not order:
        return []
    loops: dict[int, list[tuple[int, int]]] = {v: [] for v in order}
    for idx, e in enumerate(g.edges):
        if e.kind is EdgeKind.LOOP:
            loops[e.u].append((e.v, idx))
            loops[e.v].append((e.u, idx))
    seen: set[int] = set()
    walk = [order[0]]
    for v in order:
        for nbr, idx in sorted(loops[v]):
            if idx in seen:
                continue
            seen.add(idx)
            walk.extend((nbr, v))
        if v != order[-1]:
            walk.append(v + 1)
    return walk


def is_planar(g: KnitGraph) -> bool:
    """Planarity of the underlying simple graph.

    The embedding (or Kuratowski witness) is cached on the graph for reuse.
    """
    return _planarity(g)[0]


def _planarity(g: KnitGraph):
    cached = g.__dict__.get("_planarity_cache")
    if cached is None:
        cached = nx.check_planarity(g.to_networkx(), counterexample=True)
        g.__dict__["_planarity_cache"] = cached
    return cached
