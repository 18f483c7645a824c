"""
Shift-space specifications: membership, bounded language enumeration,
follower / predecessor sets and right/left-finiteness checks.

Spec text format:

    full:nat | full:fin[0,1,2] | forbid:nat{[1,1],[2,0,2]}
    forbid:fin[0,1]{[0,0]} | builtin:injective-with-zero | builtin:arre-image
"""
from dataclasses import dataclass, field
from functools import lru_cache
from itertools import permutations, product
import logging
from math import gcd
import random
import re
from typing import FrozenSet, Iterable, List, Optional, Sequence, Set, Tuple

import networkx as nx

from shiftlab import conf
from shiftlab.biseq import (
    BiSeq,
    TailSpec,
    Word,
    make_biseq,
    restrict,
)
from shiftlab.constants import (
    AlphabetKind,
    BuiltinSpace,
    FinitenessVerdict,
    Side,
    SpaceKind,
    TailKind,
)
from shiftlab.cylinder import EMPTY_MAP, FinMap, contains
from shiftlab.exceptions import (
    FormatError,
    ShiftlabError,
    SymbolNotAllowed,
    SymbolOutsideAlphabet,
)

logger = logging.getLogger(__name__)

_SPACE_RE = re.compile(
    r"^(?P<kind>full|forbid):(?P<alpha>nat|fin\[(?P<symbols>[^\]]*)\])"
    r"(?:\{(?P<words>.*)\})?$"
)


@dataclass(frozen=True)
class AlphabetSpec:
    """
    A finite symbol list, or N. `enumeration_bound` only feeds searches
    over N and falls back to SHIFTLAB_SYMBOL_BOUND_DEFAULT.
    """

    kind: str
    symbols: Tuple[int, ...] = ()
    enumeration_bound: Optional[int] = None

    def __post_init__(self):
        if self.kind not in AlphabetKind.get_all_kinds():
            raise FormatError(f"unknown alphabet kind {self.kind!r}")
        if self.kind == AlphabetKind.FINITE:
            if not self.symbols:
                raise FormatError("finite alphabet must be nonempty")
            if len(set(self.symbols)) != len(self.symbols):
                raise FormatError(f"duplicate symbols in {self.symbols}")

    @classmethod
    def naturals(cls, enumeration_bound: Optional[int] = None):
        return cls(AlphabetKind.NATURALS, (), enumeration_bound)

    @classmethod
    def finite(cls, symbols: Iterable[int]):
        return cls(AlphabetKind.FINITE, tuple(int(s) for s in symbols))

    @property
    def is_finite(self) -> bool:
        return self.kind == AlphabetKind.FINITE

    def admits(self, symbol: int) -> bool:
        if self.is_finite:
            return symbol in self.symbols
        return symbol >= 0

    def enumerate(self, symbol_bound: Optional[int] = None) -> Tuple[int, ...]:
        """Finite symbol list, or 0..bound over N."""
        if self.is_finite:
            return self.symbols
        if symbol_bound is None:
            symbol_bound = self.enumeration_bound
        if symbol_bound is None:
            symbol_bound = conf.get_symbol_bound_default()
        return tuple(range(symbol_bound + 1))

    def __str__(self) -> str:
        if self.is_finite:
            return f"fin[{','.join(str(s) for s in self.symbols)}]"
        return AlphabetKind.NATURALS


NATURALS = AlphabetSpec.naturals()


@dataclass(frozen=True)
class ShiftSpaceSpec:
    alphabet: AlphabetSpec
    kind: str = SpaceKind.FULL
    forbidden: FrozenSet[Word] = field(default_factory=frozenset)
    builtin: Optional[str] = None

    def __post_init__(self):
        if self.kind not in SpaceKind.get_all_kinds():
            raise FormatError(f"unknown space kind {self.kind!r}")
        if self.kind == SpaceKind.FORBIDDEN:
            if not self.forbidden:
                raise FormatError("forbidden-block space needs blocks")
            for word in self.forbidden:
                if not word:
                    raise FormatError("forbidden blocks must be nonempty")
                for symbol in word:
                    if not self.alphabet.admits(symbol):
                        raise SymbolOutsideAlphabet(symbol, self.alphabet)
        if self.kind == SpaceKind.BUILTIN:
            if self.builtin not in BuiltinSpace.get_all_names():
                raise FormatError(f"unknown builtin space {self.builtin!r}")

    @classmethod
    def full(cls, alphabet: AlphabetSpec = NATURALS) -> "ShiftSpaceSpec":
        return cls(alphabet)

    @classmethod
    def forbidding(
        cls, words: Iterable[Sequence[int]], alphabet: AlphabetSpec = NATURALS
    ) -> "ShiftSpaceSpec":
        return cls(
            alphabet,
            SpaceKind.FORBIDDEN,
            frozenset(tuple(int(s) for s in w) for w in words),
        )

    @classmethod
    def builtin_space(cls, name: str) -> "ShiftSpaceSpec":
        return cls(NATURALS, SpaceKind.BUILTIN, frozenset(), name)

    @property
    def max_forbidden_length(self) -> int:
        return max((len(w) for w in self.forbidden), default=0)

    def __str__(self) -> str:
        return format_space(self)


FULL_NATURALS = ShiftSpaceSpec.full()
INJECTIVE_WITH_ZERO = ShiftSpaceSpec.builtin_space(
    BuiltinSpace.INJECTIVE_WITH_ZERO
)
ARRE_IMAGE = ShiftSpaceSpec.builtin_space(BuiltinSpace.ARRE_IMAGE)


@dataclass(frozen=True)
class FollowerResult:
    """
    Followers (or predecessors) found up to the bound. `exhaustive` means
    the set is complete; `infinite` means the true set is provably infinite.
    """

    symbols: FrozenSet[int]
    exhaustive: bool
    infinite: bool


@dataclass(frozen=True)
class FinitenessRow:
    symbol: int
    side: str
    count: int
    exhaustive: bool
    infinite: bool


@dataclass
class FinitenessReport:
    side: str
    symbol_bound: int
    verdict: str
    rows: List[FinitenessRow] = field(default_factory=list)
    grew_with_bound: bool = False

    def lines(self) -> List[str]:
        out = [
            f"a={row.symbol} side={row.side} count={row.count} "
            f"exhaustive={str(row.exhaustive).lower()}"
            for row in self.rows
        ]
        out.append(
            f"side={self.side} bound={self.symbol_bound} verdict={self.verdict}"
        )
        return out


def _parse_word_list(text: str) -> List[Word]:
    words = []
    for chunk in re.findall(r"\[([^\]]*)\]", text):
        chunk = chunk.strip()
        if not chunk:
            raise FormatError("forbidden blocks must be nonempty")
        try:
            words.append(tuple(int(s) for s in chunk.split(",")))
        except ValueError as exc:
            raise FormatError(f"bad block [{chunk}]") from exc
    return words


def parse_space(text: str) -> ShiftSpaceSpec:
    body = "".join(text.split())
    if body.startswith(f"{SpaceKind.BUILTIN}:"):
        return ShiftSpaceSpec.builtin_space(body.split(":", 1)[1])
    match = _SPACE_RE.match(body)
    if match is None:
        raise FormatError(f"bad space {text!r}")
    if match.group("alpha") == AlphabetKind.NATURALS:
        alphabet = NATURALS
    else:
        raw = match.group("symbols")
        try:
            alphabet = AlphabetSpec.finite(
                int(s) for s in raw.split(",") if s
            )
        except ValueError as exc:
            raise FormatError(f"bad alphabet in {text!r}") from exc
    if match.group("kind") == SpaceKind.FULL:
        if match.group("words") is not None:
            raise FormatError(f"full shift takes no blocks: {text!r}")
        return ShiftSpaceSpec.full(alphabet)
    if match.group("words") is None:
        raise FormatError(f"forbidden-block space needs blocks: {text!r}")
    return ShiftSpaceSpec.forbidding(
        _parse_word_list(match.group("words")), alphabet
    )


def format_space(X: ShiftSpaceSpec) -> str:
    if X.kind == SpaceKind.BUILTIN:
        return f"{SpaceKind.BUILTIN}:{X.builtin}"
    head = f"{X.kind}:{X.alphabet}"
    if X.kind == SpaceKind.FULL:
        return head
    blocks = ",".join(
        "[" + ",".join(str(s) for s in w) + "]" for w in sorted(X.forbidden)
    )
    return head + "{" + blocks + "}"


def check_alphabet(X: ShiftSpaceSpec, x: BiSeq) -> None:
    """Raise SymbolOutsideAlphabet unless every symbol of x lies in X's alphabet."""
    for symbol in x.center:
        if not X.alphabet.admits(symbol):
            raise SymbolOutsideAlphabet(symbol, X.alphabet)
    for tail in (x.left, x.right):
        if tail.kind == TailKind.ARITHMETIC:
            if X.alphabet.is_finite or tail.start < 0 or tail.step < 0:
                raise SymbolOutsideAlphabet(
                    f"arith:{tail.start},{tail.step}", X.alphabet
                )
            continue
        for symbol in tail.word:
            if not X.alphabet.admits(symbol):
                raise SymbolOutsideAlphabet(symbol, X.alphabet)


def is_legal(word: Sequence[int], forbidden: Iterable[Word]) -> bool:
    """No forbidden block occurs in `word`."""
    word = tuple(word)
    for f in forbidden:
        n = len(f)
        for i in range(len(word) - n + 1):
            if word[i:i + n] == f:
                return False
    return True


def _tail_extent(tail: TailSpec, max_symbol: int) -> int:
    """Distance after which the tail repeats itself or exceeds max_symbol."""
    if tail.is_bounded:
        return len(tail.word)
    return max(0, (max_symbol - tail.start) // tail.step + 1)


def member(X: ShiftSpaceSpec, x: BiSeq) -> Optional[bool]:
    """
    Membership of x in X. Returns None only for builtin:arre-image when the
    bounded inversion cannot decide.
    """
    check_alphabet(X, x)
    if X.kind == SpaceKind.FULL:
        return True
    if X.kind == SpaceKind.FORBIDDEN:
        return _member_forbidden(X, x)
    if X.builtin == BuiltinSpace.INJECTIVE_WITH_ZERO:
        return _member_injective_with_zero(x)
    # NOTE: arre_invert imports this module; import lazily to avoid a cycle.
    from shiftlab.arre_invert import membership_in_Y

    return membership_in_Y(x)


def _member_forbidden(X: ShiftSpaceSpec, x: BiSeq) -> bool:
    longest = X.max_forbidden_length
    max_symbol = max(s for w in X.forbidden for s in w)
    lo = x.center_lo - _tail_extent(x.left, max_symbol) - longest
    hi = x.center_hi + _tail_extent(x.right, max_symbol) + longest
    return is_legal(restrict(x, lo, hi), X.forbidden)


def _in_progression(value: int, tail: TailSpec) -> bool:
    return value >= tail.start and (value - tail.start) % tail.step == 0


def _member_injective_with_zero(x: BiSeq) -> bool:
    left, right = x.left, x.right
    if left.is_bounded or right.is_bounded:
        # Constant and periodic tails repeat a symbol.
        return False
    if len(set(x.center)) != len(x.center):
        return False
    for symbol in x.center:
        if _in_progression(symbol, left) or _in_progression(symbol, right):
            return False
    if (right.start - left.start) % gcd(left.step, right.step) == 0:
        return False
    return 0 in x.center or left.start == 0 or right.start == 0


@lru_cache(maxsize=64)
def _essential_states(X: ShiftSpaceSpec) -> Tuple[int, FrozenSet[Word]]:
    """
    States of the finite forbidden-block space: legal words of length
    max(L-1, 1), pruned to those lying on a bi-infinite path.
    """
    k = max(X.max_forbidden_length - 1, 1)
    graph = nx.DiGraph()
    states = [
        w for w in product(X.alphabet.symbols, repeat=k)
        if is_legal(w, X.forbidden)
    ]
    graph.add_nodes_from(states)
    for u in states:
        for a in X.alphabet.symbols:
            v = u[1:] + (a,)
            if v in graph and is_legal(u + (a,), X.forbidden):
                graph.add_edge(u, v)
    stranded = [
        q for q in graph
        if graph.out_degree(q) == 0 or graph.in_degree(q) == 0
    ]
    while stranded:
        frontier = set()
        for q in stranded:
            frontier.update(graph.predecessors(q))
            frontier.update(graph.successors(q))
        graph.remove_nodes_from(stranded)
        stranded = [
            q for q in frontier
            if q in graph
            and (graph.out_degree(q) == 0 or graph.in_degree(q) == 0)
        ]
    logger.debug(
        f"Pruned state graph space={format_space(X)} k={k} "
        f"states={graph.number_of_nodes()}"
    )
    return k, frozenset(graph.nodes)


def _block_allowed(X: ShiftSpaceSpec, word: Word) -> bool:
    if X.kind == SpaceKind.FULL:
        return True
    if X.kind == SpaceKind.FORBIDDEN:
        if not is_legal(word, X.forbidden):
            return False
        if not X.alphabet.is_finite:
            # Pad with a symbol larger than every forbidden one.
            return True
        k, states = _essential_states(X)
        if len(word) >= k:
            return all(
                word[i:i + k] in states for i in range(len(word) - k + 1)
            )
        n = len(word)
        return any(
            state[i:i + n] == word
            for state in states
            for i in range(k - n + 1)
        )
    if X.builtin == BuiltinSpace.INJECTIVE_WITH_ZERO:
        return len(set(word)) == len(word)
    from shiftlab.arre_invert import chain_solutions

    return bool(chain_solutions(word))


def allowed_blocks(
    X: ShiftSpaceSpec, n: int, symbol_bound: Optional[int] = None
) -> Set[Word]:
    """L_n(X) restricted to symbols <= symbol_bound (or the finite alphabet)."""
    if n < 1:
        raise ValueError(f"block length must be positive, got {n}")
    symbols = X.alphabet.enumerate(symbol_bound)
    if X.builtin == BuiltinSpace.INJECTIVE_WITH_ZERO:
        return set(permutations(symbols, n))
    return {w for w in product(symbols, repeat=n) if _block_allowed(X, w)}


def _provably_infinite(X: ShiftSpaceSpec) -> bool:
    """
    Every space over N in this vocabulary has infinitely many followers and
    predecessors of each allowed symbol: a fresh large symbol (full and
    forbidden spaces), any symbol but itself (injective), or a parity class
    (doubling-chain image).
    """
    return not X.alphabet.is_finite


def _neighbours(
    X: ShiftSpaceSpec, a: int, symbol_bound: Optional[int], after: bool
) -> FollowerResult:
    if not X.alphabet.admits(a):
        raise SymbolOutsideAlphabet(a, X.alphabet)
    if not _block_allowed(X, (a,)):
        raise SymbolNotAllowed(f"symbol {a} does not occur in {format_space(X)}")
    found = frozenset(
        b for b in X.alphabet.enumerate(symbol_bound)
        if _block_allowed(X, (a, b) if after else (b, a))
    )
    finite = X.alphabet.is_finite
    return FollowerResult(found, finite, _provably_infinite(X))


def follower_set(
    X: ShiftSpaceSpec, a: int, symbol_bound: Optional[int] = None
) -> FollowerResult:
    """{b <= symbol_bound : ab in L(X)} with completeness flags."""
    return _neighbours(X, a, symbol_bound, after=True)


def predecessor_set(
    X: ShiftSpaceSpec, a: int, symbol_bound: Optional[int] = None
) -> FollowerResult:
    return _neighbours(X, a, symbol_bound, after=False)


def _side_rows(
    X: ShiftSpaceSpec, side: str, symbol_bound: int
) -> List[FinitenessRow]:
    rows = []
    for a in X.alphabet.enumerate(symbol_bound):
        if not _block_allowed(X, (a,)):
            continue
        result = _neighbours(X, a, symbol_bound, after=side == Side.RIGHT)
        rows.append(
            FinitenessRow(
                a, side, len(result.symbols), result.exhaustive,
                result.infinite,
            )
        )
    return rows


def _side_verdict(rows: List[FinitenessRow]) -> str:
    if not rows:
        return FinitenessVerdict.INCONCLUSIVE
    if all(row.exhaustive for row in rows):
        return FinitenessVerdict.FINITE
    if any(row.infinite for row in rows):
        return FinitenessVerdict.INFINITE
    return FinitenessVerdict.INCONCLUSIVE


def finiteness_probe(
    X: ShiftSpaceSpec, side: str, symbol_bound: Optional[int] = None
) -> FinitenessReport:
    """Right-, left- or bilateral finiteness of X, checked up to the bound."""
    if side not in Side.get_all_sides():
        raise ValueError(f"unknown side {side!r}")
    if symbol_bound is None:
        symbol_bound = conf.get_symbol_bound_default()
    sides = [Side.RIGHT, Side.LEFT] if side == Side.BILATERAL else [side]
    rows: List[FinitenessRow] = []
    verdicts = []
    grew = False
    for one_side in sides:
        side_rows = _side_rows(X, one_side, symbol_bound)
        rows.extend(side_rows)
        verdicts.append(_side_verdict(side_rows))
        if not X.alphabet.is_finite and side_rows:
            wider = _neighbours(
                X, side_rows[0].symbol, 2 * symbol_bound + 1,
                after=one_side == Side.RIGHT,
            )
            grew = grew or len(wider.symbols) > side_rows[0].count
    if FinitenessVerdict.INFINITE in verdicts:
        verdict = FinitenessVerdict.INFINITE
    elif all(v == FinitenessVerdict.FINITE for v in verdicts):
        verdict = FinitenessVerdict.FINITE
    else:
        verdict = FinitenessVerdict.INCONCLUSIVE
    logger.info(
        f"Finiteness probe space={format_space(X)} side={side} "
        f"bound={symbol_bound} verdict={verdict}"
    )
    return FinitenessReport(side, symbol_bound, verdict, rows, grew)


def sample_members(
    X: ShiftSpaceSpec,
    rng: random.Random,
    around: FinMap = EMPTY_MAP,
    count: Optional[int] = None,
    symbol_bound: Optional[int] = None,
    margin: int = 3,
) -> List[BiSeq]:
    """
    Random members of C_X(around). Forbidden-block spaces are rejection
    sampled; fewer than `count` points come back when rejection keeps
    failing.
    """
    if count is None:
        count = conf.get_sample_size_default()
    if symbol_bound is None:
        symbol_bound = conf.get_symbol_bound_default()
    if X.builtin == BuiltinSpace.ARRE_IMAGE:
        raise ShiftlabError("sampling is not available for builtin:arre-image")
    domain = around.domain or (0,)
    lo, hi = min(domain) - margin, max(domain) + margin
    if X.builtin == BuiltinSpace.INJECTIVE_WITH_ZERO:
        return [
            _sample_injective(rng, around, lo, hi, symbol_bound)
            for _ in range(count)
        ]
    symbols = X.alphabet.enumerate(symbol_bound)
    fixed = around.as_dict()
    samples: List[BiSeq] = []
    attempts = 0
    while len(samples) < count and attempts < 50 * count:
        attempts += 1
        center = [
            fixed.get(p, rng.choice(symbols)) for p in range(lo, hi + 1)
        ]
        x = make_biseq(
            TailSpec.constant(rng.choice(symbols)),
            center,
            TailSpec.constant(rng.choice(symbols)),
            lo,
        )
        if X.kind == SpaceKind.FULL or _member_forbidden(X, x):
            samples.append(x)
    if len(samples) < count:
        logger.warning(
            f"Rejection sampling fell short space={format_space(X)} "
            f"around={around} wanted={count} got={len(samples)}"
        )
    return samples


def _sample_injective(
    rng: random.Random, around: FinMap, lo: int, hi: int, symbol_bound: int
) -> BiSeq:
    fixed = around.as_dict()
    if len(set(fixed.values())) != len(fixed):
        raise SymbolNotAllowed(f"cylinder {around} repeats a symbol")
    used = set(fixed.values())
    free = [p for p in range(lo, hi + 1) if p not in fixed]
    if 0 not in used:
        spot = rng.choice(free)
        fixed[spot] = 0
        used.add(0)
        free.remove(spot)
    pool = [
        s for s in range(symbol_bound + len(free) + len(used) + 1)
        if s not in used
    ]
    for p, s in zip(free, rng.sample(pool, len(free))):
        fixed[p] = s
    top = max(fixed.values()) + 1
    odd = top if top % 2 else top + 1
    even = top + 1 if top % 2 else top
    return make_biseq(
        TailSpec.arithmetic(odd, 2),
        [fixed[p] for p in range(lo, hi + 1)],
        TailSpec.arithmetic(even, 2),
        lo,
    )


def in_cylinder_and_space(X: ShiftSpaceSpec, h: FinMap, x: BiSeq) -> bool:
    """x in C_X(h); an undecided membership counts as outside."""
    return contains(h, x) and bool(member(X, x))
