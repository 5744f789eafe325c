"""Layout quality: desired-edge-length score, crossings, timing reports."""

from __future__ import annotations

import csv
import io
from dataclasses import astuple, dataclass, fields

import numpy as np

from .errors import ZeroDesiredLength
from .geometry import Layout, count_crossings, positions_for

__all__ = ["del_score", "EvalReport", "evaluate"]


def del_score(layout: Layout, g) -> float:
    """Root mean square relative edge-length error over all graph edges.

    Parallel yarn and loop edges count separately. 0 means every edge has
    exactly its desired length. An edgeless graph scores 0.
    """
    P = positions_for(layout, g)
    if not g.edges:
        return 0.0
    l = g.desired
    bad = np.flatnonzero(~(l > 0))
    if len(bad):
        e = g.edges[bad[0]]
        raise ZeroDesiredLength(e.u, e.v)
    E = g.edge_index
    d = np.hypot(*(P[E[:, 0]] - P[E[:, 1]]).T)
    return float(np.sqrt(np.mean(((d - l) / l) ** 2)))


@dataclass(frozen=True)
class EvalReport:
    pattern: str
    nodes: int
    edges: int
    del_: float
    crossings: int
    seconds: float

    @classmethod
    def header(cls) -> list[str]:
        return ["pattern", "nodes", "edges", "knitlayout", "crossings", "seconds"]

    def row(self) -> list:
        return [self.pattern, self.nodes, self.edges, f"{self.del_:.6f}", self.crossings, f"{self.seconds:.3f}"]

    def to_csv(self, header: bool = True) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        if header:
            w.writerow(self.header())
        w.writerow(self.row())
        return buf.getvalue()


def evaluate(layout: Layout, g, elapsed: float = 0.0, name: str = "") -> EvalReport:
    return EvalReport(
        pattern=name,
        nodes=g.n,
        edges=len(g.edges),
        del_=del_score(layout, g),
        crossings=count_crossings(layout, g),
        seconds=float(elapsed),
    )
