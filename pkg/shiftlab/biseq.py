"""
Finitely described bi-infinite sequences over a countable alphabet.

A BiSeq is a finite center word placed at center_lo, continued to the left
and to the right by a TailSpec. Tails are constant, periodic or arithmetic;
this is enough to represent every point the engine constructs while keeping
equality and the Cantor distance exactly decidable.

Text format, one sequence per line:

    left=<tail>;center@<lo>=[s0,s1,...];right=<tail>

with <tail> one of const:<s> | per:<s0,s1,...> | arith:<start>,<step>.
A left tail is read outwards: its first symbol sits at center_lo - 1.
"""
from dataclasses import dataclass
from fractions import Fraction
from functools import total_ordering
from math import gcd
import re
from typing import Iterable, Optional, Sequence, Tuple

from shiftlab.constants import TailKind
from shiftlab.exceptions import FormatError, InvalidInterval

Word = Tuple[int, ...]

_SEQ_RE = re.compile(
    r"^left=(?P<left>[^;]+);"
    r"center@(?P<lo>-?\d+)=\[(?P<center>[^\]]*)\];"
    r"right=(?P<right>[^;]+)$"
)


def _primitive(word: Word) -> Word:
    """Shortest word whose repetition gives `word`."""
    n = len(word)
    for p in range(1, n + 1):
        if n % p == 0 and word == word[:p] * (n // p):
            return word[:p]
    return word


@dataclass(frozen=True)
class TailSpec:
    """
    One side of a sequence beyond the center.

    `at(d)` is the symbol at distance d >= 0 from the tail's first position,
    counted away from the center. Arithmetic tails generate start + step*d;
    the step is positive for sequences over N and may be negative only for
    signed outputs such as the zero locator's.
    """

    kind: str
    word: Word = ()
    start: int = 0
    step: int = 0

    def __post_init__(self):
        if self.kind not in TailKind.get_all_kinds():
            raise FormatError(f"unknown tail kind {self.kind!r}")
        if self.kind == TailKind.ARITHMETIC:
            if self.step == 0:
                raise FormatError("arithmetic tail needs a nonzero step")
        elif not self.word:
            raise FormatError("periodic tail needs a nonempty word")
        elif self.kind == TailKind.CONSTANT and len(self.word) != 1:
            raise FormatError("constant tail carries exactly one symbol")

    @classmethod
    def constant(cls, symbol: int) -> "TailSpec":
        return cls(TailKind.CONSTANT, (int(symbol),))

    @classmethod
    def periodic(cls, word: Sequence[int]) -> "TailSpec":
        """Periodic tail, reduced to its primitive period."""
        word = _primitive(tuple(int(s) for s in word))
        if len(word) == 1:
            return cls.constant(word[0])
        return cls(TailKind.PERIODIC, word)

    @classmethod
    def arithmetic(cls, start: int, step: int) -> "TailSpec":
        return cls(TailKind.ARITHMETIC, (), int(start), int(step))

    @property
    def is_bounded(self) -> bool:
        return self.kind != TailKind.ARITHMETIC

    @property
    def period(self) -> Optional[int]:
        return len(self.word) if self.is_bounded else None

    def at(self, d: int) -> int:
        if self.kind == TailKind.ARITHMETIC:
            return self.start + self.step * d
        return self.word[d % len(self.word)]

    def advanced(self, d: int) -> "TailSpec":
        """The same tail seen from distance d (d may be negative)."""
        if self.kind == TailKind.ARITHMETIC:
            return TailSpec.arithmetic(self.at(d), self.step)
        if self.kind == TailKind.CONSTANT:
            return self
        p = len(self.word)
        k = d % p
        return TailSpec(TailKind.PERIODIC, self.word[k:] + self.word[:k])

    def symbols(self) -> Word:
        """Symbols generated by a bounded tail over one period."""
        if not self.is_bounded:
            raise ValueError("arithmetic tails generate infinitely many symbols")
        return self.word


@dataclass(frozen=True)
class BiSeq:
    """
    A point of the full shift: symbols at center_lo ... center_lo+len-1
    come from `center`; every other coordinate comes from a tail.
    Build through make_biseq to get the canonical form.
    """

    center_lo: int
    center: Word
    left: TailSpec
    right: TailSpec

    @property
    def center_hi(self) -> int:
        """First coordinate governed by the right tail."""
        return self.center_lo + len(self.center)

    def symbols_used(self) -> Optional[Word]:
        """All symbols of the sequence, or None when a tail is arithmetic."""
        if not (self.left.is_bounded and self.right.is_bounded):
            return None
        return tuple(
            sorted(set(self.center) | set(self.left.word)
                   | set(self.right.word))
        )


@total_ordering
@dataclass(frozen=True)
class CantorDistance:
    """
    Exact value mantissa * 2**(-exponent): mantissa 0 means equal
    sequences (exponent then 0), mantissa 1 means first disagreement at
    |n| == exponent.
    """

    mantissa: int
    exponent: int = 0

    def as_fraction(self) -> Fraction:
        return Fraction(self.mantissa, 2 ** self.exponent)

    def __lt__(self, other: "CantorDistance") -> bool:
        return self.as_fraction() < other.as_fraction()

    def __str__(self) -> str:
        if self.mantissa == 0:
            return "0"
        return f"2^-{self.exponent}"


ZERO_DISTANCE = CantorDistance(0, 0)


def normalize(x: BiSeq) -> BiSeq:
    """
    Canonical form: the center carries no prefix or suffix already generated
    by its adjacent tail. With an empty center the split sits as far left as
    the right tail reaches; a sequence the right tail generates entirely
    (constant, purely periodic, one progression) is split at 0.
    """
    center = list(x.center)
    lo = x.center_lo
    left = _canonical_tail(x.left)
    right = _canonical_tail(x.right)
    while center and center[-1] == right.at(-1):
        center.pop()
        right = right.advanced(-1)
    while center and center[0] == left.at(-1):
        center.pop(0)
        lo += 1
        left = left.advanced(-1)
    if not center:
        lo, left, right = _settle_split(lo, left, right)
    return BiSeq(lo, tuple(center), left, right)


def _right_generates_left(left: TailSpec, right: TailSpec) -> bool:
    """The right tail, run backwards past the split, reproduces the left one."""
    if left.is_bounded and right.is_bounded:
        return all(
            left.at(d) == right.at(-1 - d)
            for d in range(len(left.word) * len(right.word))
        )
    if left.is_bounded or right.is_bounded:
        return False
    return left.step == -right.step and left.at(0) == right.at(-1)


def _settle_split(lo: int, left: TailSpec, right: TailSpec):
    if _right_generates_left(left, right):
        return 0, left.advanced(lo), right.advanced(-lo)
    # Terminates: otherwise the right tail would generate the left one.
    while left.at(0) == right.at(-1):
        lo -= 1
        left = left.advanced(1)
        right = right.advanced(-1)
    return lo, left, right


def _canonical_tail(tail: TailSpec) -> TailSpec:
    if tail.kind == TailKind.PERIODIC:
        return TailSpec.periodic(tail.word)
    return tail


def make_biseq(
    left: TailSpec,
    center: Iterable[int] = (),
    right: Optional[TailSpec] = None,
    center_lo: int = 0,
) -> BiSeq:
    """Build a normalized sequence; right defaults to the left tail."""
    if right is None:
        right = left
    return normalize(
        BiSeq(int(center_lo), tuple(int(s) for s in center), left, right)
    )


def constant_sequence(symbol: int) -> BiSeq:
    return make_biseq(TailSpec.constant(symbol))


def finite_support(
    word: Sequence[int], lo: int = 0, background: int = 0
) -> BiSeq:
    """`word` placed at lo over a constant background."""
    return make_biseq(
        TailSpec.constant(background), word, TailSpec.constant(background), lo
    )


def symbol_at(x: BiSeq, n: int) -> int:
    if n < x.center_lo:
        return x.left.at(x.center_lo - 1 - n)
    if n < x.center_hi:
        return x.center[n - x.center_lo]
    return x.right.at(n - x.center_hi)


def shift(x: BiSeq, k: int) -> BiSeq:
    """sigma^k: the result has x_{n+k} at coordinate n."""
    return normalize(BiSeq(x.center_lo - k, x.center, x.left, x.right))


def restrict(x: BiSeq, a: int, b: int) -> Word:
    """The block x|[a,b]."""
    if a > b:
        raise InvalidInterval(a, b)
    return tuple(symbol_at(x, n) for n in range(a, b + 1))


def _first_tail_mismatch(
    tx: TailSpec, ox: int, ty: TailSpec, oy: int
) -> Optional[int]:
    """
    First d >= 0 with tx.at(ox+d) != ty.at(oy+d), or None when the two
    tails agree forever.
    """
    if tx.is_bounded and ty.is_bounded:
        px, py = len(tx.word), len(ty.word)
        span = px * py // gcd(px, py)
        for d in range(span):
            if tx.at(ox + d) != ty.at(oy + d):
                return d
        return None
    if not tx.is_bounded and not ty.is_bounded:
        first_x, first_y = tx.at(ox), ty.at(oy)
        if first_x != first_y:
            return 0
        return None if tx.step == ty.step else 1
    # Arithmetic against bounded: the progression leaves the bounded
    # tail's symbol range, so the scan terminates.
    d = 0
    while tx.at(ox + d) == ty.at(oy + d):
        d += 1
    return d


def _scan_bounds(x: BiSeq, y: BiSeq) -> Tuple[int, int]:
    lo = min(x.center_lo, y.center_lo, 0)
    hi = max(x.center_hi, y.center_hi, 0)
    return lo, hi


def seq_equal(x: BiSeq, y: BiSeq) -> bool:
    """Exact equality at every coordinate of Z."""
    lo, hi = _scan_bounds(x, y)
    for n in range(lo, hi):
        if symbol_at(x, n) != symbol_at(y, n):
            return False
    right = _first_tail_mismatch(
        x.right, hi - x.center_hi, y.right, hi - y.center_hi
    )
    if right is not None:
        return False
    left = _first_tail_mismatch(
        x.left, x.center_lo - lo, y.left, y.center_lo - lo
    )
    return left is None


def first_disagreement(x: BiSeq, y: BiSeq) -> Optional[int]:
    """min{|n| : x_n != y_n}, or None for equal sequences."""
    lo, hi = _scan_bounds(x, y)
    best = None
    for n in range(lo, hi):
        if symbol_at(x, n) != symbol_at(y, n):
            if best is None or abs(n) < best:
                best = abs(n)
    right = _first_tail_mismatch(
        x.right, hi - x.center_hi, y.right, hi - y.center_hi
    )
    if right is not None and (best is None or hi + right < best):
        best = hi + right
    left = _first_tail_mismatch(
        x.left, x.center_lo - lo, y.left, y.center_lo - lo
    )
    if left is not None:
        distance = -(lo - 1 - left)
        if best is None or distance < best:
            best = distance
    return best


def cantor_distance(x: BiSeq, y: BiSeq) -> CantorDistance:
    k = first_disagreement(x, y)
    if k is None:
        return ZERO_DISTANCE
    return CantorDistance(1, k)


def _parse_symbols(text: str) -> Word:
    text = text.strip()
    if not text:
        return ()
    try:
        return tuple(int(part) for part in text.split(","))
    except ValueError as exc:
        raise FormatError(f"bad symbol list {text!r}") from exc


def parse_tail(text: str) -> TailSpec:
    kind, sep, body = text.strip().partition(":")
    if not sep:
        raise FormatError(f"bad tail {text!r}")
    symbols = _parse_symbols(body)
    if kind == TailKind.CONSTANT and len(symbols) == 1:
        return TailSpec.constant(symbols[0])
    if kind == TailKind.PERIODIC and symbols:
        return TailSpec.periodic(symbols)
    if kind == TailKind.ARITHMETIC and len(symbols) == 2:
        return TailSpec.arithmetic(symbols[0], symbols[1])
    raise FormatError(f"bad tail {text!r}")


def format_tail(tail: TailSpec) -> str:
    if tail.kind == TailKind.ARITHMETIC:
        return f"{TailKind.ARITHMETIC}:{tail.start},{tail.step}"
    return f"{tail.kind}:{','.join(str(s) for s in tail.word)}"


def parse_biseq(text: str) -> BiSeq:
    """Parse the one-line text format; the result is normalized."""
    match = _SEQ_RE.match("".join(text.split()))
    if match is None:
        raise FormatError(f"bad sequence {text!r}")
    return make_biseq(
        parse_tail(match.group("left")),
        _parse_symbols(match.group("center")),
        parse_tail(match.group("right")),
        int(match.group("lo")),
    )


def format_biseq(x: BiSeq) -> str:
    center = ",".join(str(s) for s in x.center)
    return (
        f"left={format_tail(x.left)};center@{x.center_lo}=[{center}];"
        f"right={format_tail(x.right)}"
    )


def format_word(word: Iterable[int]) -> str:
    return " ".join(str(s) for s in word)
