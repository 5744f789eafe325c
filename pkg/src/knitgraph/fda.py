"""Force-directed improvement that never introduces an edge crossing."""

from __future__ import annotations

import csv
import io
import time
from dataclasses import dataclass, field, fields, replace
from pathlib import Path

import numpy as np

from .errors import InvalidParameter, NotPlanar
from . import _kernels
from .geometry import EPS, Layout, SpatialGrid, _incidence, _segments, build_grid, count_crossings, positions_for
from .graph import KnitGraph, is_planar
from .metrics import del_score
from .planar import embed, grid_layout
from .stitches import EdgeLengthConfig

__all__ = ["FdaConfig", "IterationRecord", "RunReport", "compute_displacements", "safe_step", "run"]


@dataclass(frozen=True)
class FdaConfig:
    """Force constants, step schedule and stopping rule.

    Lengths are in stitch units. ``repulse_k`` is multiplied by
    ``repulse_decay`` after every iteration.
    """

    spring_k: float = 0.15
    collision_radius: float = 0.225
    collision_k: float = 2.0
    repulse_k: float = 0.2
    repulse_decay: float = 0.995
    max_step: float = 0.375
    iterations: int = 2000
    del_tolerance: float = 1e-4
    plateau_window: int = 50
    bisect_moves: bool = False

    def __post_init__(self):
        for name in ("spring_k", "collision_k", "repulse_k", "del_tolerance"):
            if getattr(self, name) < 0:
                raise InvalidParameter(f"{name} must be >= 0")
        for name in ("collision_radius", "max_step"):
            if not getattr(self, name) > 0:
                raise InvalidParameter(f"{name} must be > 0")
        if not 0 < self.repulse_decay <= 1:
            raise InvalidParameter("repulse_decay must be in (0, 1]")
        if self.iterations < 0 or self.plateau_window < 1:
            raise InvalidParameter("iterations must be >= 0 and plateau_window >= 1")

    @classmethod
    def for_lengths(cls, lengths: EdgeLengthConfig, **overrides) -> FdaConfig:
        """Defaults whose distance settings scale with the base yarn length."""
        base = dict(
            collision_radius=0.3 * lengths.base_yarn_length,
            max_step=0.5 * lengths.base_yarn_length,
        )
        base.update(overrides)
        return cls(**base)

    @classmethod
    def field_names(cls) -> list[str]:
        return [f.name for f in fields(cls)]


@dataclass(frozen=True)
class IterationRecord:
    iteration: int
    del_: float
    crossings: int
    moved: int
    seconds: float


@dataclass
class RunReport:
    records: list[IterationRecord] = field(default_factory=list)

    CSV_HEADER = ("iteration", "del", "crossings", "moved", "seconds")

    @property
    def initial_del(self) -> float:
        return self.records[0].del_

    @property
    def final_del(self) -> float:
        return self.records[-1].del_

    @property
    def iterations(self) -> int:
        return self.records[-1].iteration if self.records else 0

    @property
    def max_crossings(self) -> int:
        return max((r.crossings for r in self.records), default=0)

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(self.CSV_HEADER)
        for r in self.records:
            w.writerow([r.iteration, repr(r.del_), r.crossings, r.moved, f"{r.seconds:.6f}"])
        return buf.getvalue()

    def save(self, path: str | Path) -> None:
        Path(path).write_text(self.to_csv(), encoding="utf-8")

    @classmethod
    def from_csv(cls, text: str) -> RunReport:
        rows = list(csv.DictReader(io.StringIO(text)))
        return cls([
            IterationRecord(int(r["iteration"]), float(r["del"]), int(r["crossings"]), int(r["moved"]), float(r["seconds"]))
            for r in rows
        ])


def _forces(P: np.ndarray, g: KnitGraph, cfg: FdaConfig, repulse_k: float) -> np.ndarray:
    return _kernels.forces(
        np.ascontiguousarray(P, dtype=float),
        _segments(g),
        np.ascontiguousarray(g.segment_lengths, dtype=float),
        float(cfg.spring_k),
        float(cfg.collision_radius),
        float(cfg.collision_k),
        float(repulse_k),
    )


def _clamp(F: np.ndarray, max_step: float) -> np.ndarray:
    norm = np.hypot(F[:, 0], F[:, 1])
    scale = np.where(norm > max_step, max_step / np.where(norm > 0, norm, 1.0), 1.0)
    return F * scale[:, None]


def compute_displacements(
    layout: Layout, g: KnitGraph, cfg: FdaConfig, repulse_k: float | None = None
) -> np.ndarray:
    """Proposed per-node displacement, an (n, 2) array aligned with node ids.

    Sum of the spring force ``spring_k * (d - l) / l`` along every edge, a
    linear collision push inside ``collision_radius`` and an inverse-square
    repulsion between all pairs; the sum is clamped to ``max_step``.
    """
    P = positions_for(layout, g)
    k = cfg.repulse_k if repulse_k is None else repulse_k
    return _clamp(_forces(P, g, cfg, k), cfg.max_step)


def _apply_moves(P: np.ndarray, g: KnitGraph, D: np.ndarray, grid: SpatialGrid, bisect: bool) -> int:
    # grid must have been built with a margin >= the largest step in D
    ptr, idx = _incidence(g)
    return int(_kernels.apply_moves(P, np.ascontiguousarray(D), _segments(g), ptr, idx, *grid.params, EPS, 5 if bisect else 1))


def safe_step(
    layout: Layout,
    g: KnitGraph,
    cfg: FdaConfig,
    grid: SpatialGrid | None = None,
    repulse_k: float | None = None,
) -> tuple[Layout, int]:
    """One iteration: compute all proposals, then move nodes one at a time.

    Nodes are visited in creation order; a node whose move would make one of
    its edges cross another edge stays where it is. Returns the new layout
    and the number of accepted moves (null moves included).
    """
    P = positions_for(layout, g).copy()
    D = _clamp(_forces(P, g, cfg, cfg.repulse_k if repulse_k is None else repulse_k), cfg.max_step)
    if grid is None or grid.margin < cfg.max_step:
        grid = build_grid(P, g, margin=cfg.max_step)
    moved = _apply_moves(P, g, D, grid, cfg.bisect_moves)
    return Layout(P), moved


def run(
    g: KnitGraph,
    cfg: FdaConfig | None = None,
    *,
    initial: Layout | None = None,
    outer_node: int | None = None,
    seed_scale: float = 1.0,
    timing: bool = True,
    check_crossings: bool = True,
    assert_planar: bool = False,
    callback=None,
) -> tuple[Layout, RunReport]:
    """Planar grid initialisation followed by safe force-directed steps.

    Stops after ``cfg.iterations`` or once DEL has changed by less than
    ``cfg.del_tolerance`` over the last ``cfg.plateau_window`` iterations.
    ``callback(iteration, layout)`` is called after the initial layout
    (iteration 0) and after every step. With ``assert_planar`` the crossing
    count is checked after every step and an AssertionError raised if it is
    ever non-zero.
    """
    cfg = cfg or FdaConfig()
    t0 = time.perf_counter()

    def clock() -> float:
        return time.perf_counter() - t0 if timing else 0.0

    if initial is None:
        if not is_planar(g):
            embed(g)  # raises NotPlanar with the witness
            raise NotPlanar()
        initial = grid_layout(embed(g, outer_node), g)
        if seed_scale != 1.0:
            initial = Layout(initial.positions * seed_scale)
    P = positions_for(initial, g).copy()

    def crossings(grid=None) -> int:
        if not (check_crossings or assert_planar):
            return 0
        return count_crossings(Layout(P), g, grid)

    report = RunReport()
    c0 = crossings()
    if assert_planar and c0:
        raise AssertionError(f"initial layout has {c0} crossings")
    report.records.append(IterationRecord(0, del_score(Layout(P), g), c0, 0, clock()))
    if callback is not None:
        callback(0, Layout(P))

    repulse_k = cfg.repulse_k
    history = [report.records[0].del_]
    for it in range(1, cfg.iterations + 1):
        grid = build_grid(P, g, margin=cfg.max_step)
        D = _clamp(_forces(P, g, cfg, repulse_k), cfg.max_step)
        moved = _apply_moves(P, g, D, grid, cfg.bisect_moves)
        repulse_k *= cfg.repulse_decay
        c = crossings()
        if assert_planar and c:
            raise AssertionError(f"iteration {it} introduced {c} crossings")
        value = del_score(Layout(P), g)
        history.append(value)
        report.records.append(IterationRecord(it, value, c, moved, clock()))
        if callback is not None:
            callback(it, Layout(P))
        w = cfg.plateau_window
        if it >= w and abs(history[it - w] - value) < cfg.del_tolerance:
            break
    return Layout(P), report
