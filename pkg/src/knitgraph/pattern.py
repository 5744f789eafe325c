"""Text pattern DSL and parametric benchmark patterns.

Grammar (``#`` starts a comment, commas are optional separators)::

    pattern     = header , { row } ;
    header      = "co" , integer ;
    row         = "row" , ":" , item , { item } , [ "turn" ] ;
    item        = group | stitch_item ;
    group       = "*" , stitch_item , { stitch_item } , "*" , "x" integer ;
    stitch_item = token , [ "x" integer | "to" , target ]
                | letters integer ;             (* "k3" is "k x3" *)
    target      = "end" | "center" | "last" , integer ;

Repeat groups are expanded while parsing. ``to`` targets are resolved later,
against the live needle, because they depend on earlier rows.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

from .errors import InvalidParameter, PatternSyntaxError

__all__ = ["Instruction", "Row", "Pattern", "parse", "load", "pretty_print", "gen_triangle", "bundled_patterns"]

_TOKEN = re.compile(r"[A-Za-z][A-Za-z0-9\-]*")
_SUGAR = re.compile(r"([A-Za-z]+)(\d+)")
_COUNT = re.compile(r"x(\d+)")
_LEXEME = re.compile(r"\s*(?:([*,:])|([^\s,*:]+))")

UNTIL_TARGETS = ("end", "center", "last")


@dataclass(frozen=True)
class Instruction:
    """``stitch`` worked ``count`` times, or until the needle reaches ``until``.

    ``until`` is one of ``"end"``, ``"center"`` or ``"last"``; with ``"last"``,
    ``leave`` stitches stay unworked.
    """

    stitch: str
    count: int = 1
    until: str | None = None
    leave: int = 0

    def __post_init__(self):
        if self.count < 1:
            raise InvalidParameter(f"{self.stitch}: repeat count must be >= 1")
        if self.until is not None and self.until not in UNTIL_TARGETS:
            raise InvalidParameter(f"unknown target {self.until!r}")
        if self.leave < 0:
            raise InvalidParameter("leave must be >= 0")

    def __str__(self) -> str:
        if self.until == "last":
            return f"{self.stitch} to last {self.leave}"
        if self.until is not None:
            return f"{self.stitch} to {self.until}"
        if self.count == 1:
            return self.stitch
        if self.stitch.isalpha():
            return f"{self.stitch}{self.count}"
        return f"{self.stitch} x{self.count}"


@dataclass(frozen=True)
class Row:
    instructions: tuple[Instruction, ...]
    turn: bool = False

    def __str__(self) -> str:
        items = [str(i) for i in self.instructions]
        if self.turn:
            items.append("turn")
        return "row: " + ", ".join(items)


@dataclass(frozen=True)
class Pattern:
    cast_on: int
    rows: tuple[Row, ...] = field(default_factory=tuple)

    def __post_init__(self):
        if self.cast_on < 1:
            raise InvalidParameter("cast_on must be >= 1")


class _Lexer:
    def __init__(self, text: str, line: int, offset: int):
        self.items: list[tuple[str, int]] = []
        pos = 0
        while pos < len(text):
            m = _LEXEME.match(text, pos)
            if m is None or m.end() == pos:
                break
            lex = m.group(1) or m.group(2)
            self.items.append((lex, offset + m.start(m.lastindex) + 1))
            pos = m.end()
        self.i = 0
        self.line = line
        self.end_col = offset + len(text) + 1

    def peek(self) -> str | None:
        return self.items[self.i][0] if self.i < len(self.items) else None

    def col(self) -> int:
        return self.items[self.i][1] if self.i < len(self.items) else self.end_col

    def next(self) -> str:
        lex = self.items[self.i][0]
        self.i += 1
        return lex

    def error(self, message: str) -> PatternSyntaxError:
        return PatternSyntaxError(self.line, self.col(), message)

    def skip_commas(self):
        while self.peek() == ",":
            self.i += 1


def _count(lex: _Lexer) -> int:
    m = _COUNT.fullmatch(lex.peek() or "")
    if m is None:
        raise lex.error("expected repeat count like 'x3'")
    n = int(m.group(1))
    if n < 1:
        raise lex.error("repeat count must be >= 1")
    lex.next()
    return n


def _stitch_item(lex: _Lexer) -> Instruction:
    col = lex.col()
    word = lex.next()
    if word in ("*", ":"):
        raise PatternSyntaxError(lex.line, col, f"unexpected {word!r}")
    if not _TOKEN.fullmatch(word):
        raise PatternSyntaxError(lex.line, col, f"bad stitch token {word!r}")
    nxt = lex.peek()
    if nxt == "to":
        lex.next()
        target = lex.peek()
        if target not in UNTIL_TARGETS:
            raise lex.error("expected 'end', 'center' or 'last N' after 'to'")
        lex.next()
        if target == "last":
            n = lex.peek()
            if n is None or not n.isdigit():
                raise lex.error("expected stitch count after 'to last'")
            lex.next()
            return Instruction(word, until="last", leave=int(n))
        return Instruction(word, until=target)
    if nxt is not None and _COUNT.fullmatch(nxt):
        return Instruction(word, _count(lex))
    m = _SUGAR.fullmatch(word)
    if m is not None:
        n = int(m.group(2))
        if n < 1:
            raise PatternSyntaxError(lex.line, col, "repeat count must be >= 1")
        return Instruction(m.group(1), n)
    return Instruction(word)


def _row(lex: _Lexer) -> Row:
    out: list[Instruction] = []
    turn = False
    lex.skip_commas()
    while lex.peek() is not None:
        if turn:
            raise lex.error("'turn' must be the last instruction of a row")
        if lex.peek() == "turn":
            lex.next()
            turn = True
        elif lex.peek() == "*":
            lex.next()
            group = []
            lex.skip_commas()
            while lex.peek() not in ("*", None):
                if lex.peek() == "turn":
                    raise lex.error("'turn' is not allowed inside a repeat")
                ins = _stitch_item(lex)
                if ins.until is not None:
                    raise lex.error("'to' targets are not allowed inside a repeat")
                group.append(ins)
                lex.skip_commas()
            if lex.peek() is None:
                raise lex.error("unterminated repeat group")
            lex.next()
            if not group:
                raise lex.error("empty repeat group")
            out.extend(group * _count(lex))
        else:
            out.append(_stitch_item(lex))
        lex.skip_commas()
    if not out:
        raise lex.error("empty row")
    return Row(tuple(out), turn)


def parse(text: str) -> Pattern:
    """Parse DSL text into a :class:`Pattern`; raises PatternSyntaxError."""
    cast_on = None
    rows: list[Row] = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0]
        if not line.strip():
            continue
        indent = len(line) - len(line.lstrip())
        body = line.strip()
        if cast_on is None:
            m = re.fullmatch(r"co\s+(\d+)", body)
            if m is None:
                raise PatternSyntaxError(lineno, indent + 1, "pattern must start with 'co N'")
            cast_on = int(m.group(1))
            if cast_on < 1:
                raise PatternSyntaxError(lineno, indent + 4, "cast on at least one stitch")
            continue
        m = re.match(r"row\b\s*", body)
        if m is None:
            raise PatternSyntaxError(lineno, indent + 1, "expected 'row:'")
        if body[m.end():m.end() + 1] != ":":
            raise PatternSyntaxError(lineno, indent + m.end() + 1, "expected ':' after 'row'")
        start = m.end() + 1
        rows.append(_row(_Lexer(body[start:], lineno, indent + start)))
    if cast_on is None:
        raise PatternSyntaxError(1, 1, "empty pattern")
    return Pattern(cast_on, tuple(rows))


def load(path: str | Path) -> Pattern:
    return parse(Path(path).read_text(encoding="utf-8"))


def bundled_patterns() -> dict[str, Path]:
    """Name -> path of the sample ``.knit`` files shipped with the package."""
    root = resources.files("knitgraph").joinpath("data/patterns")
    return {p.name[:-5]: Path(str(p)) for p in sorted(root.iterdir(), key=lambda p: p.name) if p.name.endswith(".knit")}


def pretty_print(pattern: Pattern) -> str:
    lines = [f"co {pattern.cast_on}"]
    lines.extend(str(r) for r in pattern.rows)
    return "\n".join(lines) + "\n"


def gen_triangle(rows: int, cast_on: int = 7, increase_every: int = 2) -> Pattern:
    """Top-down triangle shawl worked flat.

    Increase rows read ``k2, yo, k to center, yo, k1, yo, k to last 2, yo, k2``
    (four new stitches); the rows in between are plain knit. With the default
    ``increase_every=2`` the odd rows increase.
    """
    if rows < 1:
        raise InvalidParameter("rows must be >= 1")
    if cast_on < 5:
        raise InvalidParameter("triangle needs at least 5 cast-on stitches")
    if increase_every < 1:
        raise InvalidParameter("increase_every must be >= 1")
    inc = Row((
        Instruction("k", 2),
        Instruction("yo"),
        Instruction("k", until="center"),
        Instruction("yo"),
        Instruction("k"),
        Instruction("yo"),
        Instruction("k", until="last", leave=2),
        Instruction("yo"),
        Instruction("k", 2),
    ))
    plain = Row((Instruction("k", until="end"),))
    return Pattern(cast_on, tuple(inc if r % increase_every == 0 else plain for r in range(rows)))
