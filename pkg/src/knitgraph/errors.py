"""Exception hierarchy shared by every stage of the pipeline."""

from __future__ import annotations


class KnitGraphError(Exception):
    """Base class for all errors raised by knitgraph."""


class ValidationError(KnitGraphError):
    """The pattern itself is wrong (bad syntax, unknown stitch, bad counts)."""


class UnknownStitch(ValidationError, KeyError):
    def __init__(self, token: str, row: int | None = None):
        super().__init__(token)
        self.token = token
        self.row = row

    def __str__(self) -> str:
        where = f"row {self.row}: " if self.row is not None else ""
        return f"{where}unknown stitch {self.token!r}"


class PatternSyntaxError(ValidationError):
    def __init__(self, line: int, col: int, message: str):
        super().__init__(f"line {line}, col {col}: {message}")
        self.line = line
        self.col = col
        self.message = message


class InvalidParameter(ValidationError, ValueError):
    pass


class NeedleUnderflow(ValidationError):
    """A stitch tried to consume more live stitches than the needle holds."""

    def __init__(self, row: int, instruction: str, needed: int, available: int):
        super().__init__(
            f"row {row}: {instruction} needs {needed} live stitch(es), "
            f"only {available} left on the needle"
        )
        self.row = row
        self.instruction = instruction
        self.needed = needed
        self.available = available


class IncompleteRow(ValidationError):
    """A row ended with unworked stitches and no ``turn``."""

    def __init__(self, row: int, remaining: int):
        super().__init__(f"row {row}: {remaining} stitch(es) left unworked without 'turn'")
        self.row = row
        self.remaining = remaining


class NotKnittable(KnitGraphError):
    def __init__(self, u: int, v: int):
        super().__init__(f"no yarn edge between consecutive stitches {u} and {v}")
        self.u = u
        self.v = v


class NotPlanar(KnitGraphError):
    def __init__(self, witness=None):
        msg = "graph is not planar"
        if witness is not None:
            msg += f" (Kuratowski witness on nodes {sorted(witness[0])})"
        super().__init__(msg)
        self.witness = witness


class MissingPosition(KnitGraphError, KeyError):
    def __init__(self, node: int):
        super().__init__(node)
        self.node = node

    def __str__(self) -> str:
        return f"layout has no finite position for node {self.node}"


class ZeroDesiredLength(KnitGraphError, ValueError):
    def __init__(self, u: int, v: int):
        super().__init__(f"edge ({u}, {v}) has a non-positive desired length")
        self.u = u
        self.v = v
