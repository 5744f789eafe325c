"""Knitting patterns to knit graphs to crossing-free layouts.

Typical use::

    from knitgraph import parse, convert, run, to_svg

    g = convert(parse("co 3\nrow: k3\nrow: k3\n"))
    layout, report = run(g)
    svg = to_svg(layout, g)
"""

__version__ = "0.1.0"

from .errors import (
    IncompleteRow,
    InvalidParameter,
    KnitGraphError,
    MissingPosition,
    NeedleUnderflow,
    NotKnittable,
    NotPlanar,
    PatternSyntaxError,
    UnknownStitch,
    ValidationError,
    ZeroDesiredLength,
)
from .stitches import EdgeLengthConfig, StitchDef, StitchDictionary, classify_pattern, default_dictionary, lookup
from .pattern import Instruction, Pattern, Row, bundled_patterns, gen_triangle, parse, pretty_print
from .graph import Edge, EdgeKind, KnitGraph, Node, convert, hamiltonian_path, is_planar, yarn_path
from .geometry import EPS, Layout, SpatialGrid, build_grid, count_crossings, crossing_pairs, crossings_touching, segments_cross
from .planar import Embedding, embed, grid_layout, planar_layout
from .fda import FdaConfig, IterationRecord, RunReport, compute_displacements, run, safe_step
from .metrics import EvalReport, del_score, evaluate
from .render import RenderStyle, to_svg

__all__ = [
    "__version__",
    "IncompleteRow",
    "InvalidParameter",
    "KnitGraphError",
    "MissingPosition",
    "NeedleUnderflow",
    "NotKnittable",
    "NotPlanar",
    "PatternSyntaxError",
    "UnknownStitch",
    "ValidationError",
    "ZeroDesiredLength",
    "EdgeLengthConfig",
    "StitchDef",
    "StitchDictionary",
    "classify_pattern",
    "default_dictionary",
    "lookup",
    "Instruction",
    "Pattern",
    "Row",
    "bundled_patterns",
    "gen_triangle",
    "parse",
    "pretty_print",
    "Edge",
    "EdgeKind",
    "KnitGraph",
    "Node",
    "convert",
    "hamiltonian_path",
    "is_planar",
    "yarn_path",
    "EPS",
    "Layout",
    "SpatialGrid",
    "build_grid",
    "count_crossings",
    "crossing_pairs",
    "crossings_touching",
    "segments_cross",
    "Embedding",
    "embed",
    "grid_layout",
    "planar_layout",
    "FdaConfig",
    "IterationRecord",
    "RunReport",
    "compute_displacements",
    "run",
    "safe_step",
    "EvalReport",
    "del_score",
    "evaluate",
    "RenderStyle",
    "to_svg",
]
