"""Stitch dictionary: what each stitch token does to the needle and the graph."""

from __future__ import annotations

from collections.abc import Iterable, Iterator, Mapping
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

from .errors import InvalidParameter, UnknownStitch

__all__ = [
    "StitchDef",
    "EdgeLengthConfig",
    "StitchDictionary",
    "default_dictionary",
    "lookup",
    "classify_pattern",
]


@dataclass(frozen=True)
class StitchDef:
    """One dictionary entry.

    ``consumes`` live stitches are popped from the working needle and
    ``produces`` new nodes are created. Lengths of the new edges are the base
    lengths from :class:`EdgeLengthConfig` times the two factors.
    """

    name: str
    consumes: int
    produces: int
    yarn_length_factor: float = 1.0
    loop_length_factor: float = 1.0
    complexity_class: int = 0
    permutation: tuple[int, ...] | None = None

    def __post_init__(self):
        if not self.name or any(c.isspace() for c in self.name):
            raise InvalidParameter(f"bad stitch name {self.name!r}")
        if self.consumes < 0 or self.produces < 0:
            raise InvalidParameter(f"{self.name}: negative stitch counts")
        if self.consumes == 0 and self.produces == 0:
            raise InvalidParameter(f"{self.name}: stitch does nothing")
        if self.yarn_length_factor < 0 or self.loop_length_factor <= 0:
            raise InvalidParameter(f"{self.name}: bad length factors")
        if self.complexity_class not in (0, 1, 2):
            raise InvalidParameter(f"{self.name}: complexity class must be 0, 1 or 2")
        if self.permutation is not None:
            if sorted(self.permutation) != list(range(self.consumes)):
                raise InvalidParameter(f"{self.name}: permutation is not a permutation of the popped stitches")
            if self.consumes != self.produces:
                raise InvalidParameter(f"{self.name}: permutation needs consumes == produces")

    def loop_targets(self, popped: list[int]) -> list[list[int]]:
        """For each produced node, the popped stitches it is looped through.

        ``popped`` is in pop order. Equal counts pair one-to-one (after the
        cable permutation); one consumed stitch feeds every produced node;
        otherwise all popped stitches go to the first produced node.
        """
        if self.produces == 0:
            return []
        if not popped:
            return [[] for _ in range(self.produces)]
        if len(popped) == self.produces and self.produces > 1:
            order = self.permutation or tuple(range(len(popped)))
            return [[popped[j]] for j in order]
        if len(popped) == 1:
            return [list(popped) for _ in range(self.produces)]
        return [list(popped)] + [[] for _ in range(self.produces - 1)]


@dataclass(frozen=True)
class EdgeLengthConfig:
    """Base edge lengths in stitch units.

    A yarn edge created right after ``drop`` is stretched by
    ``1 + drop_multiplier * rows_dropped`` (summed over pending drops).
    """

    base_yarn_length: float = 0.75
    base_loop_length: float = 1.0
    drop_multiplier: float = 1.0

    def __post_init__(self):
        if self.base_yarn_length <= 0 or self.base_loop_length <= 0:
            raise InvalidParameter("edge lengths must be strictly positive")
        if self.base_yarn_length >= self.base_loop_length:
            raise InvalidParameter("stitches are taller than wide: base_yarn_length must be < base_loop_length")
        if self.drop_multiplier <= 0:
            raise InvalidParameter("drop_multiplier must be positive")


class StitchDictionary(Mapping[str, StitchDef]):
    """Immutable name -> StitchDef mapping."""

    def __init__(self, defs: Iterable[StitchDef] = ()):
        table: dict[str, StitchDef] = {}
        for d in defs:
            if d.name in table:
                raise InvalidParameter(f"duplicate stitch {d.name!r}")
            table[d.name] = d
        self._table = table

    def __getitem__(self, name: str) -> StitchDef:
        return self._table[name]

    def __iter__(self) -> Iterator[str]:
        return iter(self._table)

    def __len__(self) -> int:
        return len(self._table)

    def lookup(self, name: str) -> StitchDef:
        try:
            return self._table[name]
        except KeyError:
            raise UnknownStitch(name) from None

    def merged(self, other: StitchDictionary) -> StitchDictionary:
        """Entries of ``other`` added to, or replacing, ours."""
        table = dict(self._table)
        table.update(other._table)
        return StitchDictionary(table.values())

    @classmethod
    def parse(cls, text: str, source: str = "<string>") -> StitchDictionary:
        defs = []
        for lineno, raw in enumerate(text.splitlines(), 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            fields = line.split()
            if len(fields) not in (6, 7):
                raise InvalidParameter(f"{source}:{lineno}: expected 6 or 7 fields, got {len(fields)}")
            try:
                perm = tuple(int(x) for x in fields[6].split(",")) if len(fields) == 7 else None
                defs.append(
                    StitchDef(
                        name=fields[0],
                        consumes=int(fields[1]),
                        produces=int(fields[2]),
                        yarn_length_factor=float(fields[3]),
                        loop_length_factor=float(fields[4]),
                        complexity_class=int(fields[5]),
                        permutation=perm,
                    )
                )
            except ValueError as exc:
                raise InvalidParameter(f"{source}:{lineno}: {exc}") from None
        return cls(defs)

    @classmethod
    def load(cls, path: str | Path, base: StitchDictionary | None = None) -> StitchDictionary:
        """Read an override file; entries are merged over ``base`` (bundled defaults if None)."""
        path = Path(path)
        override = cls.parse(path.read_text(encoding="utf-8"), source=str(path))
        return (base if base is not None else default_dictionary()).merged(override)


_DEFAULT: StitchDictionary | None = None


def default_dictionary() -> StitchDictionary:
    global _DEFAULT
    if _DEFAULT is None:
        text = resources.files("knitgraph").joinpath("data/stitches.txt").read_text(encoding="utf-8")
        _DEFAULT = StitchDictionary.parse(text, source="stitches.txt")
    return _DEFAULT


def lookup(name: str, dictionary: StitchDictionary | None = None) -> StitchDef:
    return (dictionary or default_dictionary()).lookup(name)


def classify_pattern(pattern, dictionary: StitchDictionary | None = None) -> int:
    """Highest complexity class among the stitches a pattern uses (0 if it only casts on)."""
    dictionary = dictionary or default_dictionary()
    cls = dictionary.lookup("co").complexity_class if "co" in dictionary else 0
    for r, row in enumerate(pattern.rows, 1):
        for ins in row.instructions:
            if ins.stitch not in dictionary:
                raise UnknownStitch(ins.stitch, r)
            cls = max(cls, dictionary[ins.stitch].complexity_class)
    return cls
