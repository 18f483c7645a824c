"""
Shift morphisms in three presentations: a windowed local rule, a barrier
(finite list of cylinders with one value each) and a data-dependent window
given by a closed form.

Built-in rules:

    arre          y_n = x_n + 2 x_{n+1}                       (windowed, m=0, n=1)
    sum-window    y_n = sum of x_{n+j} over |j| <= x_n
    two-point     y_n = x_{n - x_n} + x_{n + x_n}
    zero-locator  y_n = z(x) - n, z(x) the position of the unique zero
"""
from dataclasses import dataclass, field
from itertools import product
import logging
from pathlib import Path
import re
from typing import Callable, Dict, List, Mapping, Optional, Tuple, Union

from shiftlab.biseq import (
    BiSeq,
    TailSpec,
    Word,
    make_biseq,
    restrict,
    seq_equal,
    shift,
    symbol_at,
)
from shiftlab.constants import BuiltinSpace, RuleName, TailKind
from shiftlab.cylinder import (
    FinMap,
    Incompatible,
    contains_shifted,
    join,
)
from shiftlab.exceptions import (
    AmbiguousCylinder,
    CoverageError,
    FormatError,
    InvalidInterval,
    MissingWindowWord,
    MissingZero,
    NoCylinder,
    NotInSpace,
)
from shiftlab.shiftspace import (
    FULL_NATURALS,
    INJECTIVE_WITH_ZERO,
    NATURALS,
    AlphabetSpec,
    ShiftSpaceSpec,
    member,
)

logger = logging.getLogger(__name__)

_TABLE_LINE_RE = re.compile(r"^(?P<word>.+?)\s*->\s*(?P<symbol>-?\d+)$")


class TablePhi:
    """Local rule read from an explicit finite table."""

    def __init__(self, table: Mapping[Word, int]):
        self.table = dict(table)

    def __call__(self, word: Word) -> int:
        try:
            return self.table[word]
        except KeyError:
            raise MissingWindowWord(word) from None


class WidenedPhi:
    """phi_hat(a_-M ... a_N) = phi(a_-m ... a_n)."""

    def __init__(self, phi: Callable[[Word], int], offset: int, width: int):
        self.phi = phi
        self.offset = offset
        self.width = width

    def __call__(self, word: Word) -> int:
        return self.phi(word[self.offset:self.offset + self.width])


def _arre_phi(word: Word) -> int:
    return word[0] + 2 * word[1]


@dataclass(frozen=True)
class WindowedRule:
    memory: int
    anticipation: int
    phi: Callable[[Word], int] = field(compare=False)
    name: str = ""
    table: Optional[Tuple[Tuple[Word, int], ...]] = None

    def __post_init__(self):
        if self.memory < 0 or self.anticipation < 0:
            raise ValueError(
                f"memory and anticipation must be nonnegative, got "
                f"{self.memory}, {self.anticipation}"
            )

    @property
    def width(self) -> int:
        return self.memory + self.anticipation + 1


@dataclass(frozen=True)
class BarrierRule:
    """
    Cylinders C(h_i) with output values_i. `default` is emitted for points
    in no listed cylinder; None makes such points an error.
    """

    cylinders: Tuple[FinMap, ...]
    values: Tuple[int, ...]
    default: Optional[int] = None
    coverage_gaps: Tuple[str, ...] = ()

    def __post_init__(self):
        if len(self.cylinders) != len(self.values):
            raise ValueError("one value per cylinder is required")

    def reach(self) -> Tuple[int, int]:
        """How far left and right of a coordinate the cylinders look."""
        positions = [p for h in self.cylinders for p in h.domain]
        if not positions:
            return 0, 0
        return max(0, -min(positions)), max(0, max(positions))

    def items(self) -> List[Tuple[FinMap, int]]:
        return list(zip(self.cylinders, self.values))


@dataclass(frozen=True)
class DataDependentRule:
    name: str

    def __post_init__(self):
        if self.name not in RuleName.get_data_dependent_names():
            raise ValueError(f"unknown data-dependent rule {self.name!r}")


Rule = Union[WindowedRule, BarrierRule, DataDependentRule]


@dataclass(frozen=True)
class Morphism:
    rule: Rule = field(compare=False)
    input_space: ShiftSpaceSpec = FULL_NATURALS
    output_alphabet: AlphabetSpec = NATURALS
    name: str = ""
    signed_output: bool = False


@dataclass(frozen=True)
class WindowOnly:
    """eval_full could not derive output tails; use eval_window instead."""

    reason: str

    def __bool__(self) -> bool:
        return False


def arre() -> Morphism:
    rule = WindowedRule(0, 1, _arre_phi, RuleName.ARRE)
    return Morphism(rule, FULL_NATURALS, NATURALS, RuleName.ARRE)


def sum_window() -> Morphism:
    return Morphism(
        DataDependentRule(RuleName.SUM_WINDOW), FULL_NATURALS, NATURALS,
        RuleName.SUM_WINDOW,
    )


def two_point() -> Morphism:
    return Morphism(
        DataDependentRule(RuleName.TWO_POINT), FULL_NATURALS, NATURALS,
        RuleName.TWO_POINT,
    )


def zero_locator() -> Morphism:
    return Morphism(
        DataDependentRule(RuleName.ZERO_LOCATOR), INJECTIVE_WITH_ZERO,
        NATURALS, RuleName.ZERO_LOCATOR, signed_output=True,
    )


def _parse_table_word(text: str) -> Word:
    tokens = [t for t in re.split(r"[\s,]+", text.strip()) if t]
    if len(tokens) == 1 and tokens[0].isdigit() and len(tokens[0]) > 1:
        # Compact form "011": one digit per symbol.
        tokens = list(tokens[0])
    try:
        return tuple(int(t) for t in tokens)
    except ValueError as exc:
        raise FormatError(f"bad table word {text!r}") from exc


def parse_table(text: str) -> Dict[Word, int]:
    """Lines `word -> symbol`; blank lines and # comments are skipped."""
    table: Dict[Word, int] = {}
    width = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        match = _TABLE_LINE_RE.match(line)
        if match is None:
            raise FormatError(f"bad table line {lineno}: {raw!r}")
        word = _parse_table_word(match.group("word"))
        if width is None:
            width = len(word)
        elif len(word) != width:
            raise FormatError(
                f"table line {lineno}: window length {len(word)} != {width}"
            )
        if word in table:
            raise FormatError(f"table line {lineno}: duplicate word {word}")
        table[word] = int(match.group("symbol"))
    if not table:
        raise FormatError("empty rule table")
    return table


def windowed_from_table(
    table: Mapping[Word, int],
    memory: Optional[int] = None,
    name: str = "",
) -> Morphism:
    """
    Windowed morphism over the finite alphabet of the table's symbols.
    Memory defaults to the centered choice (width-1)//2.
    """
    width = len(next(iter(table)))
    if memory is None:
        memory = (width - 1) // 2
    if not 0 <= memory < width:
        raise ValueError(f"memory={memory} does not fit window width {width}")
    entries = tuple(sorted(table.items()))
    rule = WindowedRule(
        memory, width - 1 - memory, TablePhi(table), name or "table", entries
    )
    symbols = sorted({s for word in table for s in word})
    outputs = sorted(set(table.values()))
    return Morphism(
        rule,
        ShiftSpaceSpec.full(AlphabetSpec.finite(symbols)),
        AlphabetSpec.finite(outputs),
        name or "table",
    )


def load_table_morphism(path: Union[str, Path], memory: Optional[int] = None):
    path = Path(path)
    return windowed_from_table(
        parse_table(path.read_text()),
        memory,
        f"{RuleName.WINDOWED_PREFIX}{path.name}",
    )


def morphism_by_name(name: str, memory: Optional[int] = None) -> Morphism:
    """Resolve a CLI rule name (sum-window, two-point, ..., windowed:<file>)."""
    if name.startswith(RuleName.WINDOWED_PREFIX):
        return load_table_morphism(name[len(RuleName.WINDOWED_PREFIX):], memory)
    factories = {
        RuleName.ARRE: arre,
        RuleName.SUM_WINDOW: sum_window,
        RuleName.TWO_POINT: two_point,
        RuleName.ZERO_LOCATOR: zero_locator,
    }
    try:
        return factories[name]()
    except KeyError:
        raise FormatError(
            f"unknown rule {name!r}; expected one of "
            f"{RuleName.get_builtin_names()} or {RuleName.WINDOWED_PREFIX}<file>"
        ) from None


def zero_position(x: BiSeq) -> int:
    """Position of the unique zero of x; MissingZero when there is none."""
    zeros = [x.center_lo + i for i, s in enumerate(x.center) if s == 0]
    for tail, first in ((x.left, x.center_lo - 1), (x.right, x.center_hi)):
        if tail.kind == TailKind.ARITHMETIC:
            if tail.start == 0:
                zeros.append(first)
        elif 0 in tail.word:
            raise MissingZero(f"zero repeats in a {tail.kind} tail")
    if len(zeros) != 1:
        raise MissingZero(f"expected one zero, found positions {zeros}")
    return zeros[0]


def _sum_window_at(x: BiSeq, n: int) -> int:
    radius = symbol_at(x, n)
    return sum(symbol_at(x, n + j) for j in range(-radius, radius + 1))


def _two_point_at(x: BiSeq, n: int) -> int:
    radius = symbol_at(x, n)
    return symbol_at(x, n - radius) + symbol_at(x, n + radius)


def _barrier_at(rule: BarrierRule, x: BiSeq, n: int) -> int:
    hits = [
        i for i, h in enumerate(rule.cylinders) if contains_shifted(h, x, n)
    ]
    if len(hits) == 1:
        return rule.values[hits[0]]
    if hits:
        raise AmbiguousCylinder(n, hits)
    if rule.default is None:
        raise NoCylinder(n)
    return rule.default


def _check_domain(Psi: Morphism, x: BiSeq) -> None:
    if member(Psi.input_space, x) is False:
        raise NotInSpace(
            f"sequence is not a point of {Psi.input_space} for {Psi.name}"
        )


def eval_window(Psi: Morphism, x: BiSeq, a: int, b: int) -> Word:
    """Psi(x) restricted to [a, b]."""
    if a > b:
        raise InvalidInterval(a, b)
    rule = Psi.rule
    if (
        isinstance(rule, DataDependentRule)
        and rule.name == RuleName.ZERO_LOCATOR
    ):
        z = zero_position(x)
        _check_domain(Psi, x)
        return tuple(z - n for n in range(a, b + 1))
    _check_domain(Psi, x)
    if isinstance(rule, WindowedRule):
        return tuple(
            rule.phi(restrict(x, i - rule.memory, i + rule.anticipation))
            for i in range(a, b + 1)
        )
    if isinstance(rule, BarrierRule):
        return tuple(_barrier_at(rule, x, i) for i in range(a, b + 1))
    if rule.name == RuleName.SUM_WINDOW:
        return tuple(_sum_window_at(x, i) for i in range(a, b + 1))
    return tuple(_two_point_at(x, i) for i in range(a, b + 1))


def coordinate(Psi: Morphism, x: BiSeq, n: int = 0) -> int:
    return eval_window(Psi, x, n, n)[0]


def _reach(Psi: Morphism, x: BiSeq) -> Optional[Tuple[int, int]]:
    """
    (left, right) such that Psi(x)_i only reads x on [i-left, i+right],
    or None when no such bound follows from the representation.
    """
    rule = Psi.rule
    if isinstance(rule, WindowedRule):
        return rule.memory, rule.anticipation
    if isinstance(rule, BarrierRule):
        return rule.reach()
    symbols = x.symbols_used()
    if symbols is None:
        return None
    radius = max(symbols)
    return radius, radius


def eval_full(Psi: Morphism, x: BiSeq) -> Union[BiSeq, WindowOnly]:
    """
    The whole image Psi(x) when its tails can be derived: past the reach of
    the rule, the image of a constant or periodic tail repeats with the
    tail's period. Zero locator images are arithmetic progressions.
    """
    rule = Psi.rule
    if (
        isinstance(rule, DataDependentRule)
        and rule.name == RuleName.ZERO_LOCATOR
    ):
        z = zero_position(x)
        _check_domain(Psi, x)
        return make_biseq(
            TailSpec.arithmetic(1, 1), (), TailSpec.arithmetic(0, -1), z
        )
    if not (x.left.is_bounded and x.right.is_bounded):
        return WindowOnly("arithmetic input tails")
    reach = _reach(Psi, x)
    if reach is None:
        return WindowOnly("unbounded window reach")
    back, ahead = reach
    lo = x.center_lo - ahead
    hi = x.center_hi + back
    p_left, p_right = len(x.left.word), len(x.right.word)
    window = eval_window(Psi, x, lo - 2 * p_left, hi + 2 * p_right - 1)
    offset = lo - 2 * p_left
    center = window[lo - offset:hi - offset]
    right_word = window[hi - offset:hi - offset + p_right]
    left_word = tuple(window[lo - offset - 1 - d] for d in range(p_left))
    # Stabilization check over one extra period on each side.
    right_check = window[hi - offset + p_right:hi - offset + 2 * p_right]
    left_check = tuple(
        window[lo - offset - 1 - p_left - d] for d in range(p_left)
    )
    if right_check != right_word or left_check != left_word:
        logger.warning(
            f"Output tails failed to stabilize rule={Psi.name} "
            f"right={right_word}/{right_check} left={left_word}/{left_check}"
        )
        return WindowOnly("output tails did not stabilize")
    return make_biseq(
        TailSpec.periodic(left_word), center, TailSpec.periodic(right_word), lo
    )


def check_shift_commuting(
    Psi: Morphism, x: BiSeq, k: int, a: int, b: int
) -> bool:
    """Psi(sigma^k x)|[a,b] == Psi(x)|[a+k,b+k]."""
    return eval_window(Psi, shift(x, k), a, b) == eval_window(
        Psi, x, a + k, b + k
    )


def widen_rule(rule: WindowedRule, memory: int, anticipation: int) -> WindowedRule:
    """Same sliding block code seen through the wider window [-M, N]."""
    if memory < rule.memory or anticipation < rule.anticipation:
        raise ValueError(
            f"cannot widen ({rule.memory},{rule.anticipation}) to "
            f"({memory},{anticipation})"
        )
    if memory == rule.memory and anticipation == rule.anticipation:
        return rule
    return WindowedRule(
        memory,
        anticipation,
        WidenedPhi(rule.phi, memory - rule.memory, rule.width),
        f"{rule.name}@({memory},{anticipation})",
    )


def widen(Psi: Morphism, memory: int, anticipation: int) -> Morphism:
    if not isinstance(Psi.rule, WindowedRule):
        raise ValueError(f"{Psi.name} is not a windowed rule")
    return Morphism(
        widen_rule(Psi.rule, memory, anticipation),
        Psi.input_space,
        Psi.output_alphabet,
        Psi.name,
        Psi.signed_output,
    )


def _words_with_sum(length: int, total: int, cap: int):
    """All words of `length` over 0..cap whose symbols add up to `total`."""
    if length == 0:
        if total == 0:
            yield ()
        return
    for first in range(min(cap, total) + 1):
        for rest in _words_with_sum(length - 1, total - first, cap):
            yield (first,) + rest


def _sum_window_cylinders(
    symbol_bound: int, domain_bound: int, value: Optional[int]
) -> List[Tuple[FinMap, int]]:
    found = []
    for radius in range(min(symbol_bound, domain_bound) + 1):
        if value is not None and radius > value:
            break
        side = 2 * radius
        if value is None:
            others = product(range(symbol_bound + 1), repeat=side)
        else:
            others = _words_with_sum(side, value - radius, symbol_bound)
        for rest in others:
            word = rest[:radius] + (radius,) + rest[radius:]
            found.append((FinMap.from_word(word, -radius), sum(word)))
    return found


def _two_point_cylinders(
    symbol_bound: int, domain_bound: int, value: Optional[int]
) -> List[Tuple[FinMap, int]]:
    found = []
    if value is None or value == 0:
        found.append((FinMap(((0, 0),)), 0))
    for m in range(1, min(symbol_bound, domain_bound) + 1):
        for a, b in product(range(symbol_bound + 1), repeat=2):
            if value is None or a + b == value:
                found.append(
                    (FinMap(((-m, a), (0, m), (m, b))), a + b)
                )
    return found


def _arre_cylinders(
    symbol_bound: int, domain_bound: int, value: Optional[int]
) -> List[Tuple[FinMap, int]]:
    if domain_bound < 1:
        return []
    return [
        (FinMap(((0, u), (1, v))), u + 2 * v)
        for u, v in product(range(symbol_bound + 1), repeat=2)
        if value is None or u + 2 * v == value
    ]


def _zero_locator_cylinders(
    symbol_bound: int, domain_bound: int, value: Optional[int]
) -> List[Tuple[FinMap, int]]:
    return [
        (FinMap(((z, 0),)), z)
        for z in range(-domain_bound, domain_bound + 1)
        if value is None or z == value
    ]


_CYLINDER_BUILDERS = {
    RuleName.SUM_WINDOW: _sum_window_cylinders,
    RuleName.TWO_POINT: _two_point_cylinders,
    RuleName.ARRE: _arre_cylinders,
    RuleName.ZERO_LOCATOR: _zero_locator_cylinders,
}


def _coverage_gaps(
    name: str, symbol_bound: int, domain_bound: int, value: Optional[int]
) -> List[str]:
    """Checked inputs (symbols <= symbol_bound) the cylinder list misses."""
    if name == RuleName.ARRE:
        if domain_bound < 1:
            return ["window [0,1] exceeds domain bound"]
        return []
    if name == RuleName.ZERO_LOCATOR:
        if value is None:
            return [f"zero outside [-{domain_bound},{domain_bound}]"]
        if abs(value) > domain_bound:
            return [f"zero at {value} outside domain bound"]
        return []
    # Both rules read x_0 positions to each side of the origin; a sum-window
    # value v also caps x_0 at v.
    needed = symbol_bound
    if name == RuleName.SUM_WINDOW and value is not None:
        needed = min(symbol_bound, value)
    if needed > domain_bound:
        return [f"x_0 in ({domain_bound},{needed}] reaches beyond domain bound"]
    return []


def barrier_from_coordinate(
    name: str,
    symbol_bound: int,
    domain_bound: int,
    value: Optional[int] = None,
    strict: bool = False,
) -> BarrierRule:
    """
    Minimal cylinders on which the 0-coordinate of a built-in rule is
    constant, with domains inside [-domain_bound, domain_bound] and symbols
    <= symbol_bound; optionally only those with the given value. Checked
    inputs the list cannot cover are recorded in coverage_gaps, or raise
    CoverageError when strict.
    """
    try:
        builder = _CYLINDER_BUILDERS[name]
    except KeyError:
        raise FormatError(f"no coordinate barrier for rule {name!r}") from None
    pairs = builder(symbol_bound, domain_bound, value)
    gaps = _coverage_gaps(name, symbol_bound, domain_bound, value)
    if gaps:
        if strict:
            raise CoverageError(gaps)
        logger.warning(
            f"Barrier coverage gaps rule={name} symbol_bound={symbol_bound} "
            f"domain_bound={domain_bound} value={value} gaps={gaps}"
        )
    logger.debug(
        f"Built barrier rule={name} value={value} cylinders={len(pairs)}"
    )
    return BarrierRule(
        tuple(h for h, _ in pairs), tuple(v for _, v in pairs), None,
        tuple(gaps),
    )


def _empty_in_space(h: FinMap, space: Optional[ShiftSpaceSpec]) -> bool:
    """C_X(h) is empty: an injective space cannot repeat a symbol."""
    if space is None or space.builtin != BuiltinSpace.INJECTIVE_WITH_ZERO:
        return False
    symbols = [s for _, s in h.entries]
    return len(set(symbols)) != len(symbols)


def overlapping_pairs(
    rule: BarrierRule, space: Optional[ShiftSpaceSpec] = None
) -> List[Tuple[int, int]]:
    """
    Index pairs whose cylinders may intersect. Disjointness is shown by an
    incompatible join, or by the join being empty inside `space`.
    """
    overlaps = []
    cylinders = rule.cylinders
    for i in range(len(cylinders)):
        for j in range(i + 1, len(cylinders)):
            joined = join([cylinders[i], cylinders[j]])
            if isinstance(joined, Incompatible):
                continue
            if _empty_in_space(joined, space):
                continue
            overlaps.append((i, j))
    return overlaps


def check_disjoint(
    rule: BarrierRule, space: Optional[ShiftSpaceSpec] = None
) -> bool:
    return not overlapping_pairs(rule, space)


def split_cylinder(
    rule: BarrierRule, index: int, position: int, symbols
) -> BarrierRule:
    """
    Replace cylinder `index` by its refinements fixing `position` to each
    of `symbols`, all carrying the original value.
    """
    h = rule.cylinders[index]
    if position in h.domain:
        raise ValueError(f"position {position} already fixed by {h}")
    value = rule.values[index]
    pieces = []
    for s in symbols:
        refined = join([h, FinMap(((position, s),))])
        pieces.append(refined)
    cylinders = (
        rule.cylinders[:index] + tuple(pieces) + rule.cylinders[index + 1:]
    )
    values = (
        rule.values[:index] + (value,) * len(pieces) + rule.values[index + 1:]
    )
    return BarrierRule(cylinders, values, rule.default, rule.coverage_gaps)


def barrier_morphism(
    rule: BarrierRule,
    input_space: ShiftSpaceSpec = FULL_NATURALS,
    name: str = "barrier",
) -> Morphism:
    return Morphism(rule, input_space, NATURALS, name)


def images_agree(Psi: Morphism, x: BiSeq, y: BiSeq) -> bool:
    """Psi(x) equals y, checked through eval_full."""
    image = eval_full(Psi, x)
    return bool(image) and seq_equal(image, y)
