"""
Finite partial functions h: Z -> symbols and the cylinder sets C(h).
"""
from dataclasses import dataclass
import re
from typing import Dict, Iterable, Mapping, Optional, Sequence, Tuple, Union

from shiftlab.biseq import BiSeq, symbol_at
from shiftlab.exceptions import FormatError, InvalidInterval

_ENTRY_RE = re.compile(r"^(-?\d+):(-?\d+)$")


@dataclass(frozen=True)
class FinMap:
    """
    Finite partial function, stored as (position, symbol) pairs sorted by
    position. The empty map describes the whole full shift.
    """

    entries: Tuple[Tuple[int, int], ...] = ()

    def __post_init__(self):
        positions = [p for p, _ in self.entries]
        if positions != sorted(set(positions)):
            raise ValueError(
                f"FinMap positions must be distinct and sorted: {positions}"
            )

    @classmethod
    def from_dict(cls, mapping: Mapping[int, int]) -> "FinMap":
        return cls(tuple(sorted((int(p), int(s)) for p, s in mapping.items())))

    @classmethod
    def from_word(cls, word: Sequence[int], lo: int = 0) -> "FinMap":
        """The word laid out on [lo, lo+len-1]."""
        return cls(tuple((lo + i, int(s)) for i, s in enumerate(word)))

    @property
    def domain(self) -> Tuple[int, ...]:
        return tuple(p for p, _ in self.entries)

    def as_dict(self) -> Dict[int, int]:
        return dict(self.entries)

    def get(self, position: int) -> Optional[int]:
        for p, s in self.entries:
            if p == position:
                return s
        return None

    def __len__(self) -> int:
        return len(self.entries)

    def __str__(self) -> str:
        return format_finmap(self)


EMPTY_MAP = FinMap()


@dataclass(frozen=True)
class Incompatible:
    """Two joined maps disagree at `position`; the cylinders are disjoint."""

    position: int
    symbol_a: int
    symbol_b: int

    def __bool__(self) -> bool:
        return False


JoinResult = Union[FinMap, Incompatible]


def contains(h: FinMap, x: BiSeq) -> bool:
    return all(symbol_at(x, p) == s for p, s in h.entries)


def translate(h: FinMap, n: int) -> FinMap:
    """h^[n]: dom shifted by n, so that C(h^[n]) = sigma^-n C(h)."""
    return FinMap(tuple((p + n, s) for p, s in h.entries))


def join(hs: Iterable[FinMap]) -> JoinResult:
    hs = list(hs)
    if not hs:
        raise ValueError("join needs at least one map")
    merged: Dict[int, int] = {}
    for h in hs:
        for p, s in h.entries:
            known = merged.get(p)
            if known is None:
                merged[p] = s
            elif known != s:
                return Incompatible(p, known, s)
    return FinMap.from_dict(merged)


def is_subcylinder(inner: FinMap, outer: FinMap) -> bool:
    """C(inner) is contained in C(outer), exact for full-shift cylinders."""
    inner_map = inner.as_dict()
    return all(inner_map.get(p) == s for p, s in outer.entries)


def from_sequence(x: BiSeq, a: int, b: int) -> FinMap:
    """The cylinder fixing x on [a, b]."""
    if a > b:
        raise InvalidInterval(a, b)
    return FinMap(tuple((p, symbol_at(x, p)) for p in range(a, b + 1)))


def contains_shifted(h: FinMap, x: BiSeq, n: int) -> bool:
    """sigma^n(x) in C(h), evaluated without building the shifted sequence."""
    return all(symbol_at(x, p + n) == s for p, s in h.entries)


def parse_finmap(text: str) -> FinMap:
    body = "".join(text.split())
    if not (body.startswith("{") and body.endswith("}")):
        raise FormatError(f"bad cylinder map {text!r}")
    body = body[1:-1]
    if not body:
        return EMPTY_MAP
    mapping: Dict[int, int] = {}
    for part in body.split(","):
        match = _ENTRY_RE.match(part)
        if match is None:
            raise FormatError(f"bad cylinder entry {part!r}")
        position = int(match.group(1))
        if position in mapping:
            raise FormatError(f"duplicate position {position} in {text!r}")
        mapping[position] = int(match.group(2))
    return FinMap.from_dict(mapping)


def format_finmap(h: FinMap) -> str:
    return "{" + ",".join(f"{p}:{s}" for p, s in h.entries) + "}"
