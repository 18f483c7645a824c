"""
Constructive pin-down of a limit image through attached cylinders.

Given a family k -> x^k whose images Psi(x^k) converge to y, build_trace
selects for every coordinate j with |j| <= ell an attached cylinder
h_{y_j, j} hit by many indices k, and joins the translates into h_ell, so
that every z in C_X(h_ell) has Psi(z)|[-ell, ell] = y|[-ell, ell]. The
final domain, read through an observation window, falls into one of five
shapes:

    C1 bounded, C2 all of Z, C3 unbounded on both sides with gaps,
    C4 unbounded to the left only, C5 unbounded to the right only.
"""
from collections import Counter, defaultdict
from dataclasses import dataclass, field
import logging
import random
from typing import Callable, Dict, List, Optional, Sequence, Tuple

from shiftlab import conf
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
from shiftlab.constants import (
    DomainClass,
    FinitenessVerdict,
    NiceVerdict,
    ObservationTag,
    RuleName,
    Side,
)
from shiftlab.cylinder import (
    FinMap,
    Incompatible,
    contains,
    format_finmap,
    from_sequence,
    is_subcylinder,
    join,
    translate,
)
from shiftlab.exceptions import NotStabilized, ShiftlabError, TraceFailed
from shiftlab.morphism import (
    BarrierRule,
    DataDependentRule,
    Morphism,
    WindowedRule,
    eval_window,
    zero_position,
)
from shiftlab.shiftspace import ShiftSpaceSpec, finiteness_probe, sample_members

logger = logging.getLogger(__name__)

ALL_INDICES = "all k>=1"


def _format_word(word: Sequence[int]) -> str:
    return "[" + ",".join(str(s) for s in word) + "]"


class DistinguishedFamily:
    """
    A family k -> x^k for k >= 1. Subclasses add closed forms; a plain
    instance wraps a generator and trusts only its declared limit.
    """

    name = "family"

    def __init__(
        self,
        generator: Optional[Callable[[int], BiSeq]] = None,
        name: Optional[str] = None,
        declared_limit: Optional[BiSeq] = None,
    ):
        self._generator = generator
        self.declared_limit = declared_limit
        if name:
            self.name = name

    def point(self, k: int) -> BiSeq:
        if self._generator is None:
            raise NotImplementedError
        return self._generator(k)

    def closed_form_limit(self, Psi: Morphism, W: int) -> Optional[Word]:
        if self.declared_limit is None:
            return None
        return restrict(self.declared_limit, -W, W)

    def limit_point(self) -> Optional[BiSeq]:
        return None

    def closed_form_index_set(self, Psi: Morphism) -> Optional[str]:
        return None

    def closed_form_h_infinity(self, Psi: Morphism) -> Optional[Tuple[str, FinMap]]:
        return None

    def closed_form_nice(self) -> Optional[Tuple[str, Optional[BiSeq]]]:
        return None


class NoImageFamily(DistinguishedFamily):
    """x^k_j = 3k+1-j on [-k, k], 1 to the left, 0 to the right."""

    name = "noimage"

    def point(self, k: int) -> BiSeq:
        return make_biseq(
            TailSpec.constant(1),
            [3 * k + 1 - j for j in range(-k, k + 1)],
            TailSpec.constant(0),
            -k,
        )

    def closed_form_limit(self, Psi: Morphism, W: int) -> Optional[Word]:
        if Psi.name == RuleName.TWO_POINT:
            return (1,) * (2 * W + 1)
        return None

    def closed_form_nice(self):
        # Every fixed coordinate diverges: x^k_j = 3k+1-j.
        return NiceVerdict.NOT_NICE, None


class ConstantFamily(DistinguishedFamily):
    name = "constant"

    def __init__(self, x: BiSeq):
        super().__init__()
        self.x = x

    def point(self, k: int) -> BiSeq:
        return self.x

    def closed_form_limit(self, Psi: Morphism, W: int) -> Optional[Word]:
        return eval_window(Psi, self.x, -W, W)

    def limit_point(self) -> Optional[BiSeq]:
        return self.x

    def closed_form_index_set(self, Psi: Morphism) -> Optional[str]:
        return ALL_INDICES

    def closed_form_nice(self):
        return NiceVerdict.NICE, self.x


class ZeroDriftFamily(DistinguishedFamily):
    """
    Injective points with their zero at n. With drift the odd left tail and
    the even right tail start at 2k+1 and 2k+2, so every other coordinate
    diverges; without drift every x^k is the same zigzag point.
    """

    name = "zerodrift"

    def __init__(self, n: int = 0, drift: bool = True):
        super().__init__()
        self.n = n
        self.drift = drift

    def point(self, k: int) -> BiSeq:
        base = k if self.drift else 0
        return make_biseq(
            TailSpec.arithmetic(2 * base + 1, 2),
            [0],
            TailSpec.arithmetic(2 * base + 2, 2),
            self.n,
        )

    def closed_form_limit(self, Psi: Morphism, W: int) -> Optional[Word]:
        if Psi.name == RuleName.ZERO_LOCATOR:
            return tuple(self.n - m for m in range(-W, W + 1))
        if not self.drift:
            return eval_window(Psi, self.point(1), -W, W)
        return None

    def limit_point(self) -> Optional[BiSeq]:
        return None if self.drift else self.point(1)

    def closed_form_index_set(self, Psi: Morphism) -> Optional[str]:
        if Psi.name == RuleName.ZERO_LOCATOR or not self.drift:
            return ALL_INDICES
        return None

    def closed_form_h_infinity(self, Psi: Morphism):
        if Psi.name == RuleName.ZERO_LOCATOR:
            return DomainClass.C1, FinMap(((self.n, 0),))
        return None

    def closed_form_nice(self):
        if self.drift:
            return NiceVerdict.NOT_NICE, None
        return NiceVerdict.NICE, self.point(1)


class BarrierSource:
    """Supplies the attached cylinder at coordinate 0 containing a point."""

    def cell(self, x: BiSeq) -> Optional[Tuple[FinMap, int]]:
        raise NotImplementedError


class BarrierRuleSource(BarrierSource):
    def __init__(self, rule: BarrierRule):
        self.rule = rule

    def cell(self, x: BiSeq):
        for h, value in self.rule.items():
            if contains(h, x):
                return h, value
        return None


class WindowPartition(BarrierSource):
    """Cylinders fixing [-m, n] for a windowed rule."""

    def __init__(self, Psi: Morphism):
        self.Psi = Psi
        self.memory = Psi.rule.memory
        self.anticipation = Psi.rule.anticipation

    def cell(self, x: BiSeq):
        h = from_sequence(x, -self.memory, self.anticipation)
        return h, self.Psi.rule.phi(
            restrict(x, -self.memory, self.anticipation)
        )


class SumWindowPartition(BarrierSource):
    """C_w with w = x|[-x_0, x_0]."""

    def cell(self, x: BiSeq):
        radius = symbol_at(x, 0)
        word = restrict(x, -radius, radius)
        return FinMap.from_word(word, -radius), sum(word)


class TwoPointPartition(BarrierSource):
    """{-m: a, 0: m, m: b} with m = x_0, or {0: 0}."""

    def cell(self, x: BiSeq):
        m = symbol_at(x, 0)
        if m == 0:
            return FinMap(((0, 0),)), 0
        a, b = symbol_at(x, -m), symbol_at(x, m)
        return FinMap(((-m, a), (0, m), (m, b))), a + b


class ZeroLocatorPartition(BarrierSource):
    """C_X({z: 0}), value z."""

    def cell(self, x: BiSeq):
        z = zero_position(x)
        return FinMap(((z, 0),)), z


def default_source(Psi: Morphism) -> BarrierSource:
    rule = Psi.rule
    if isinstance(rule, BarrierRule):
        return BarrierRuleSource(rule)
    if isinstance(rule, WindowedRule):
        return WindowPartition(Psi)
    if isinstance(rule, DataDependentRule):
        return {
            RuleName.SUM_WINDOW: SumWindowPartition,
            RuleName.TWO_POINT: TwoPointPartition,
            RuleName.ZERO_LOCATOR: ZeroLocatorPartition,
        }[rule.name]()
    raise ShiftlabError(f"no barrier source for rule {Psi.name}")


@dataclass(frozen=True)
class LevelRecord:
    ell: int
    h: FinMap
    indices: Tuple[int, ...]
    index_text: str
    y_word: Word

    def line(self) -> str:
        return (
            f"ell={self.ell} h={format_finmap(self.h)} S={self.index_text} "
            f"y={_format_word(self.y_word)}"
        )


@dataclass
class LemmaTrace:
    family: str
    rule: str
    L_max: int
    limit: Word
    levels: List[LevelRecord] = field(default_factory=list)
    sample: Tuple[int, ...] = ()
    closed_form: Optional[Tuple[str, FinMap]] = None

    @property
    def final_map(self) -> FinMap:
        return self.levels[-1].h

    def limit_window(self, ell: int) -> Word:
        """y|[-ell, ell] out of the stored limit on [-L_max, L_max]."""
        offset = self.L_max - ell
        return self.limit[offset:len(self.limit) - offset]

    def lines(self) -> List[str]:
        return [level.line() for level in self.levels]


@dataclass(frozen=True)
class HInfinityObservation:
    truncated_map: FinMap
    window: Tuple[int, int]
    domain_class: str
    tag: str

    def line(self) -> str:
        return (
            f"class={self.domain_class} tag={self.tag} "
            f"window=[{self.window[0]},{self.window[1]}] "
            f"h={format_finmap(self.truncated_map)}"
        )


@dataclass(frozen=True)
class NiceResult:
    verdict: str
    witness: Optional[BiSeq] = None
    tag: str = ObservationTag.CLOSED_FORM


@dataclass
class UpgradeResult:
    h: FinMap
    indices: Tuple[int, ...]
    filled: Dict[int, int]
    side: str
    premise: str


def limit_image(
    fam: DistinguishedFamily, Psi: Morphism, W: int, k_max: Optional[int] = None
) -> Word:
    """
    Stabilized Psi(x^k)|[-W, W]: three consecutive k agree, confirmed
    against the family's closed form when it has one.
    """
    if k_max is None:
        k_max = conf.get_kmax_default()
    history: List[Word] = []
    for k in range(1, k_max + 1):
        history.append(eval_window(Psi, fam.point(k), -W, W))
        if len(history) >= 3 and history[-1] == history[-2] == history[-3]:
            stable = history[-1]
            expected = fam.closed_form_limit(Psi, W)
            if expected is not None and tuple(expected) != stable:
                logger.warning(
                    f"Observed limit disagrees with closed form "
                    f"family={fam.name} rule={Psi.name} k={k}"
                )
                continue
            logger.debug(
                f"Limit stabilized family={fam.name} rule={Psi.name} W={W} k={k}"
            )
            return stable
    raise NotStabilized((-W, W), k_max)


def _index_text(
    fam: DistinguishedFamily, Psi: Morphism, indices: Sequence[int],
    sample: Sequence[int],
) -> str:
    closed = fam.closed_form_index_set(Psi)
    if closed is not None and tuple(indices) == tuple(sample):
        return closed
    body = ",".join(str(k) for k in indices)
    return f"sample{{{body}}}:at-sample-size={len(sample)}"


def _candidates(
    fam: DistinguishedFamily,
    source: BarrierSource,
    indices: Sequence[int],
    j: int,
    target: int,
) -> List[Tuple[FinMap, List[int]]]:
    """Cylinders at coordinate j with value y_j, most-hit first."""
    groups: Dict[FinMap, List[int]] = defaultdict(list)
    for k in indices:
        found = source.cell(shift(fam.point(k), j))
        if found is None:
            continue
        h, value = found
        if value == target:
            groups[translate(h, j)].append(k)
    return sorted(
        groups.items(),
        key=lambda item: (-len(item[1]), len(item[0]), item[0].entries),
    )


def build_trace(
    fam: DistinguishedFamily,
    Psi: Morphism,
    source: Optional[BarrierSource] = None,
    L_max: int = 3,
    sample: Optional[Sequence[int]] = None,
    k_max: Optional[int] = None,
) -> LemmaTrace:
    """
    Levels 0..L_max of h_ell and S_ell. Candidates are tried in order
    (most sampled indices, smallest domain, lexicographic) and a join
    conflict moves on to the next one.
    """
    if source is None:
        source = default_source(Psi)
    if sample is None:
        sample = range(1, conf.get_sample_size_default() + 1)
    sample = tuple(sample)
    limit = limit_image(fam, Psi, L_max, k_max)
    trace = LemmaTrace(
        fam.name, Psi.name, L_max, limit, sample=sample,
        closed_form=fam.closed_form_h_infinity(Psi),
    )
    h = FinMap()
    indices: Tuple[int, ...] = sample
    for ell in range(L_max + 1):
        coordinates = [0] if ell == 0 else [-ell, ell]
        for j in coordinates:
            target = limit[j + L_max]
            candidates = _candidates(fam, source, indices, j, target)
            for candidate, hit in candidates:
                joined = join([h, candidate])
                if isinstance(joined, Incompatible):
                    logger.debug(
                        f"Join conflict level={ell} j={j} "
                        f"position={joined.position}"
                    )
                    continue
                h, indices = joined, tuple(hit)
                break
            else:
                raise TraceFailed(
                    ell, j,
                    f"{len(candidates)} candidate cylinders with value "
                    f"{target} over {len(indices)} indices",
                )
        trace.levels.append(
            LevelRecord(
                ell, h, indices, _index_text(fam, Psi, indices, sample),
                trace.limit_window(ell),
            )
        )
    logger.info(
        f"Built trace family={fam.name} rule={Psi.name} L_max={L_max} "
        f"final_domain={list(h.domain)} indices={len(indices)}"
    )
    return trace


def verify_trace(
    trace: LemmaTrace,
    fam: DistinguishedFamily,
    Psi: Morphism,
    rng: Optional[random.Random] = None,
    samples_per_level: int = 5,
) -> List[str]:
    """
    Nesting of h_ell and S_ell, membership of every kept x^k, and the
    image pin-down on sampled members of each C_X(h_ell). Returns the
    violations found.
    """
    if rng is None:
        rng = random.Random(conf.get_seed_default())
    problems = []
    previous = None
    for level in trace.levels:
        if previous is not None:
            if not is_subcylinder(level.h, previous.h):
                problems.append(f"ell={level.ell}: h does not extend h_prev")
            if not set(level.indices) <= set(previous.indices):
                problems.append(f"ell={level.ell}: S is not nested")
        for k in level.indices:
            if not contains(level.h, fam.point(k)):
                problems.append(f"ell={level.ell}: x^{k} escapes h")
        members = sample_members(
            Psi.input_space, rng, level.h, samples_per_level
        )
        for z in members:
            got = eval_window(Psi, z, -level.ell, level.ell)
            if got != level.y_word:
                problems.append(
                    f"ell={level.ell}: image {_format_word(got)} != "
                    f"{_format_word(level.y_word)}"
                )
        previous = level
    return problems


def _observed_class(trace: LemmaTrace) -> str:
    final = set(trace.final_map.domain)
    middle = set(trace.levels[len(trace.levels) // 2].h.domain)
    if not final:
        return DomainClass.C1
    grows_left = min(final) < min(middle, default=0)
    grows_right = max(final) > max(middle, default=0)
    if not grows_left and not grows_right:
        return DomainClass.C1
    if grows_left and grows_right:
        W = trace.L_max
        if all(p in final for p in range(min(final), max(final) + 1)) and (
            min(final) <= -W and max(final) >= W
        ):
            return DomainClass.C2
        return DomainClass.C3
    return DomainClass.C4 if grows_left else DomainClass.C5


def classify(trace: LemmaTrace) -> HInfinityObservation:
    """Shape of dom(h_inf), closed-form for built-ins that have one."""
    W = trace.L_max
    if trace.closed_form is not None:
        domain_class, h_inf = trace.closed_form
        if is_subcylinder(trace.final_map, h_inf) and is_subcylinder(
            h_inf, trace.final_map
        ):
            return HInfinityObservation(
                h_inf, (-W, W), domain_class, ObservationTag.CLOSED_FORM
            )
        logger.warning(
            f"Trace disagrees with closed-form h_inf family={trace.family}"
        )
    return HInfinityObservation(
        trace.final_map, (-W, W), _observed_class(trace),
        ObservationTag.OBSERVED,
    )


def nice_check(
    fam: DistinguishedFamily, W: int = 3, k_max: Optional[int] = None
) -> NiceResult:
    """
    Closed forms decide for built-ins. Otherwise three equal points among
    the first k_max are an observed constant subsequence.
    """
    closed = fam.closed_form_nice()
    if closed is not None:
        verdict, witness = closed
        return NiceResult(verdict, witness, ObservationTag.CLOSED_FORM)
    if k_max is None:
        k_max = conf.get_kmax_default()
    by_window: Dict[Word, List[BiSeq]] = defaultdict(list)
    for k in range(1, k_max + 1):
        x = fam.point(k)
        bucket = by_window[restrict(x, -W, W)]
        bucket.append(x)
        if len(bucket) >= 3 and seq_equal(bucket[0], bucket[-1]) and seq_equal(
            bucket[0], bucket[-2]
        ):
            return NiceResult(NiceVerdict.NICE, bucket[0], ObservationTag.OBSERVED)
    return NiceResult(NiceVerdict.INCONCLUSIVE, None, ObservationTag.OBSERVED)


def upgrade_trace(
    trace: LemmaTrace,
    fam: DistinguishedFamily,
    side: str = Side.RIGHT,
    space: Optional[ShiftSpaceSpec] = None,
) -> UpgradeResult:
    """
    Fill the gaps of the final domain with the symbol most sampled indices
    carry there (ties to the smaller symbol), narrowing S. Legitimate when
    the space is right-finite (filled left to right) or left-finite (right
    to left); the premise is 'established' when finiteness_probe
    confirms it, 'assumed' otherwise.
    """
    h = trace.final_map
    indices = trace.levels[-1].indices
    domain = h.domain
    filled: Dict[int, int] = {}
    if domain:
        gaps = [p for p in range(min(domain), max(domain) + 1) if p not in domain]
        if side == Side.LEFT:
            gaps.reverse()
        for p in gaps:
            votes = Counter(symbol_at(fam.point(k), p) for k in indices)
            symbol = min(votes, key=lambda s: (-votes[s], s))
            indices = tuple(
                k for k in indices if symbol_at(fam.point(k), p) == symbol
            )
            h = join([h, FinMap(((p, symbol),))])
            filled[p] = symbol
    premise = "assumed"
    if space is not None:
        if finiteness_probe(space, side).verdict == FinitenessVerdict.FINITE:
            premise = "established"
    logger.info(
        f"Upgraded trace family={trace.family} side={side} "
        f"filled={len(filled)} premise={premise}"
    )
    return UpgradeResult(h, indices, filled, side, premise)


def exhibit_limit_preimage(
    trace: LemmaTrace,
    observation: HInfinityObservation,
    fam: DistinguishedFamily,
    Psi: Morphism,
    W: Optional[int] = None,
) -> Optional[BiSeq]:
    """
    A point whose image matches the limit window: for closed-form C1 any
    kept x^k lies in the final cylinder; for C2 the family's limit point.
    """
    if W is None:
        W = trace.L_max
    target = limit_image(fam, Psi, W)
    candidate = None
    if (
        observation.domain_class == DomainClass.C1
        and observation.tag == ObservationTag.CLOSED_FORM
    ):
        for k in trace.levels[-1].indices:
            x = fam.point(k)
            if contains(observation.truncated_map, x):
                candidate = x
                break
    elif observation.domain_class == DomainClass.C2:
        candidate = fam.limit_point()
    if candidate is None:
        return None
    if eval_window(Psi, candidate, -W, W) != target:
        logger.warning(
            f"Exhibited point misses the limit family={fam.name} W={W}"
        )
        return None
    return candidate


