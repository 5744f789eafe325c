from __future__ import annotations

import math
from fractions import Fraction

import pytest

from knitgraph import Edge, EdgeKind, KnitGraph, Node, bundled_patterns, convert, parse


def graph_from_pairs(n: int, pairs, length: float = 1.0) -> KnitGraph:
    """Hand-built graph: nodes 1..n in row 0, every pair a yarn edge."""
    nodes = [Node(i, 0, "co") for i in range(1, n + 1)]
    edges = [Edge(u, v, EdgeKind.YARN, length) for u, v in pairs]
    return KnitGraph(nodes, edges)


def knit(text: str) -> KnitGraph:
    return convert(parse(text))


_ACCEPTANCE = pytest.StashKey[list]()


@pytest.fixture
def record(request):
    """Log one acceptance line; it is printed in the terminal summary."""
    lines = request.config.stash.setdefault(_ACCEPTANCE, [])

    def _record(number: int, ok: bool, detail: str) -> bool:
        lines.append((number, f"criterion {number}: {'PASS' if ok else 'FAIL'}  {detail}"))
        return ok

    return _record


def pytest_terminal_summary(terminalreporter, config):
    lines = config.stash.get(_ACCEPTANCE, [])
    if lines:
        terminalreporter.section("acceptance")
        for _, line in sorted(lines, key=lambda x: x[0]):
            terminalreporter.write_line(line)


@pytest.fixture
def stockinette() -> KnitGraph:
    return knit("co 3\nrow: k3\nrow: k3\n")


@pytest.fixture(scope="session")
def bundled() -> dict[str, KnitGraph]:
    return {name: convert(parse(path.read_text())) for name, path in bundled_patterns().items()}


# -- exact oracles ------------------------------------------------------


def _cross(o, p, q):
    return (p[0] - o[0]) * (q[1] - o[1]) - (p[1] - o[1]) * (q[0] - o[0])


def exact_cross(a1, a2, b1, b2) -> bool:
    """Do two segments meet at a point interior to at least one of them?

    Collinear segments count when they share more than one point.
    Rational arithmetic throughout.
    """
    a1, a2, b1, b2 = ((Fraction(x), Fraction(y)) for x, y in (a1, a2, b1, b2))
    if a1 == a2 and b1 == b2:
        return False
    if a1 == a2:
        a1, a2, b1, b2 = b1, b2, a1, a2
    if b1 == b2:
        # point against segment: only a strictly interior touch counts
        if _cross(a1, a2, b1) != 0:
            return False
        t = ((b1[0] - a1[0]) * (a2[0] - a1[0]) + (b1[1] - a1[1]) * (a2[1] - a1[1]))
        return 0 < t < (a2[0] - a1[0]) ** 2 + (a2[1] - a1[1]) ** 2
    r = (a2[0] - a1[0], a2[1] - a1[1])
    s = (b2[0] - b1[0], b2[1] - b1[1])
    denom = r[0] * s[1] - r[1] * s[0]
    w = (b1[0] - a1[0], b1[1] - a1[1])
    if denom == 0:
        if w[0] * r[1] - w[1] * r[0] != 0:
            return False  # parallel, distinct lines
        rr = r[0] * r[0] + r[1] * r[1]
        t0 = (w[0] * r[0] + w[1] * r[1]) / rr
        t1 = t0 + (s[0] * r[0] + s[1] * r[1]) / rr
        lo, hi = max(Fraction(0), min(t0, t1)), min(Fraction(1), max(t0, t1))
        return hi > lo
    t = (w[0] * s[1] - w[1] * s[0]) / denom
    u = (w[0] * r[1] - w[1] * r[0]) / denom
    if not (0 <= t <= 1 and 0 <= u <= 1):
        return False
    return 0 < t < 1 or 0 < u < 1


def brute_segments(g: KnitGraph) -> list[tuple[int, int]]:
    """Distinct unordered node pairs joined by at least one edge (1-based)."""
    return sorted({(min(e.u, e.v), max(e.u, e.v)) for e in g.edges})


def brute_crossings(pos, g: KnitGraph) -> int:
    """All-pairs count over segments that share no node, exact predicate."""
    segs = brute_segments(g)
    total = 0
    for i, (a, b) in enumerate(segs):
        for c, d in segs[i + 1 :]:
            if len({a, b, c, d}) < 4:
                continue
            total += exact_cross(pos[a], pos[b], pos[c], pos[d])
    return total


def brute_touching(pos, g: KnitGraph, node: int, new) -> bool:
    moved = dict(pos)
    moved[node] = tuple(new)
    segs = brute_segments(g)
    for a, b in segs:
        if node not in (a, b):
            continue
        for c, d in segs:
            if len({a, b, c, d}) < 4:
                continue
            if exact_cross(moved[a], moved[b], moved[c], moved[d]):
                return True
    return False


def naive_del(pos, g: KnitGraph) -> float:
    if not g.edges:
        return 0.0
    total = 0.0
    for e in g.edges:
        (x1, y1), (x2, y2) = pos[e.u], pos[e.v]
        d = math.sqrt((x1 - x2) ** 2 + (y1 - y2) ** 2)
        total += ((d - e.length) / e.length) ** 2
    return math.sqrt(total / len(g.edges))


def brute_crossings_np(P, g: KnitGraph, chunk: int = 256) -> int:
    """All-pairs crossing count for big layouts, no spatial index.

    Pairs whose four orientations are clearly nonzero are settled in floating
    point; anything near-degenerate is handed to ``exact_cross``.
    """
    import numpy as np

    S = np.array(brute_segments(g), dtype=np.int64).reshape(-1, 2) - 1
    P = np.asarray(P, dtype=float)
    A, B = P[S[:, 0]], P[S[:, 1]]
    m = len(S)
    total = 0
    for lo in range(0, m, chunk):
        i = np.arange(lo, min(lo + chunk, m))[:, None]
        j = np.arange(m)[None, :]
        mask = (j > i) & (S[i, 0] != S[j, 0]) & (S[i, 0] != S[j, 1]) & (S[i, 1] != S[j, 0]) & (S[i, 1] != S[j, 1])
        ii, jj = np.broadcast_arrays(i, j)
        ii, jj = ii[mask], jj[mask]
        a1, a2, b1, b2 = A[ii], B[ii], A[jj], B[jj]

        def orient(o, p, q):
            return (p[:, 0] - o[:, 0]) * (q[:, 1] - o[:, 1]) - (p[:, 1] - o[:, 1]) * (q[:, 0] - o[:, 0])

        o = np.stack([orient(a1, a2, b1), orient(a1, a2, b2), orient(b1, b2, a1), orient(b1, b2, a2)])
        scale = np.hypot(*(a2 - a1).T) * np.hypot(*(b2 - b1).T)
        unsure = (np.abs(o) <= 1e-9 * np.maximum(scale, 1e-300)).any(axis=0)
        total += int(((o[0] * o[1] < 0) & (o[2] * o[3] < 0) & ~unsure).sum())
        for k in np.flatnonzero(unsure):
            total += exact_cross(*(tuple(x) for x in (a1[k].tolist(), a2[k].tolist(), b1[k].tolist(), b2[k].tolist())))
    return total
