"""
Finite-degree analysis of barriers and morphisms within explicit bounds.

Infinite degree is only ever witnessed by growth against a closed form;
finite degree is reported when a completeness argument applies.
"""
from dataclasses import dataclass, field
from itertools import product
import logging
from typing import List, Sequence, Tuple

from shiftlab.biseq import BiSeq
from shiftlab.constants import DegreeVerdict, Evidence, RuleName
from shiftlab.cylinder import contains, is_subcylinder
from shiftlab.morphism import (
    BarrierRule,
    DataDependentRule,
    Morphism,
    WindowedRule,
    barrier_from_coordinate,
    coordinate,
)
from shiftlab.shiftspace import ShiftSpaceSpec, member

logger = logging.getLogger(__name__)

BoundGrid = Sequence[Tuple[int, int]]


@dataclass(frozen=True)
class DegreeRow:
    symbol_bound: int
    domain_bound: int
    count: int


@dataclass
class DegreeReport:
    value: int
    verdict: str
    rows: List[DegreeRow] = field(default_factory=list)
    witness: str = ""
    notes: List[str] = field(default_factory=list)

    @property
    def is_monotone(self) -> bool:
        """Counts never drop when both bounds grow."""
        for a in self.rows:
            for b in self.rows:
                if (
                    a.symbol_bound <= b.symbol_bound
                    and a.domain_bound <= b.domain_bound
                    and a.count > b.count
                ):
                    return False
        return True

    def lines(self) -> List[str]:
        return [
            f"ℓ={self.value} bound=({row.symbol_bound},{row.domain_bound}) "
            f"count={row.count} verdict={self.verdict}"
            for row in self.rows
        ]


@dataclass
class AttachedReport:
    attached: bool
    mismatches: List[Tuple[int, int, int, int]] = field(default_factory=list)
    uncovered: List[int] = field(default_factory=list)


def _strictly_increasing(counts: List[int]) -> bool:
    return len(counts) > 1 and all(a < b for a, b in zip(counts, counts[1:]))


def _windowed_count(rule: WindowedRule, symbols, value: int) -> int:
    return sum(
        1 for w in product(symbols, repeat=rule.width) if rule.phi(w) == value
    )


def degree_probe(Psi: Morphism, value: int, bound_grid: BoundGrid) -> DegreeReport:
    """
    Count the minimal attached cylinders with 0-coordinate value `value` at
    each (symbol_bound, domain_bound) grid point.
    """
    rule = Psi.rule
    grid = sorted(bound_grid, key=lambda sd: (sd[1], sd[0]))
    report = DegreeReport(value, DegreeVerdict.INCONCLUSIVE)

    if isinstance(rule, BarrierRule):
        count = sum(1 for v in rule.values if v == value)
        report.rows = [DegreeRow(s, d, count) for s, d in grid]
        report.verdict = DegreeVerdict.FINITE
        report.witness = "finite cylinder list"
    elif isinstance(rule, WindowedRule) and Psi.input_space.alphabet.is_finite:
        count = _windowed_count(rule, Psi.input_space.alphabet.symbols, value)
        report.rows = [DegreeRow(s, d, count) for s, d in grid]
        report.verdict = DegreeVerdict.FINITE
        report.witness = (
            f"finite alphabet: at most "
            f"{len(Psi.input_space.alphabet.symbols)}^{rule.width} window words"
        )
    elif Psi.name in RuleName.get_builtin_names():
        report.rows = [
            DegreeRow(
                s, d,
                len(barrier_from_coordinate(Psi.name, s, d, value).cylinders),
            )
            for s, d in grid
        ]
        _judge_builtin(Psi.name, report)
    elif isinstance(rule, (WindowedRule, DataDependentRule)):
        report.notes.append(f"no completeness argument for rule {Psi.name}")

    logger.info(
        f"Degree probe rule={Psi.name} value={value} "
        f"counts={[row.count for row in report.rows]} verdict={report.verdict}"
    )
    return report


def _judge_builtin(name: str, report: DegreeReport) -> None:
    value = report.value
    counts = [row.count for row in report.rows]
    if name == RuleName.ARRE:
        expected = value // 2 + 1
        report.witness = f"u+2v={value} has {expected} solutions"
        complete = [
            row for row in report.rows
            if row.symbol_bound >= value and row.domain_bound >= 1
        ]
        if complete and all(row.count == expected for row in complete):
            report.verdict = DegreeVerdict.FINITE
        return
    if name == RuleName.ZERO_LOCATOR:
        report.witness = "one cylinder {z:0} per value z"
        if any(row.count == 1 for row in report.rows):
            report.verdict = DegreeVerdict.FINITE
        return
    if name == RuleName.SUM_WINDOW:
        report.witness = f"every cylinder with value {value} has x_0 <= {value}"
        report.notes.append(
            "the maximal barrier {C_w} has finitely many cylinders per value; "
            "the finite-degree reading of this barrier is counted, not assumed"
        )
        complete = [
            row for row in report.rows
            if row.symbol_bound >= value and row.domain_bound >= value
        ]
        if len({row.count for row in complete}) == 1:
            report.verdict = DegreeVerdict.FINITE
        return
    if name == RuleName.TWO_POINT:
        report.witness = "one family {-m:a,0:m,m:b} per m <= domain_bound"
        closed = [
            _two_point_closed_count(row.symbol_bound, row.domain_bound, value)
            for row in report.rows
        ]
        if counts == closed and _strictly_increasing(counts):
            report.verdict = DegreeVerdict.GROWING


def _two_point_closed_count(symbol_bound: int, domain_bound: int, value: int) -> int:
    pairs = sum(
        1 for a in range(symbol_bound + 1) if 0 <= value - a <= symbol_bound
    )
    count = min(symbol_bound, domain_bound) * pairs
    return count + (1 if value == 0 else 0)


def attached_check(
    B: BarrierRule, Psi: Morphism, samples: Sequence[BiSeq]
) -> AttachedReport:
    """Psi_0 equals the cylinder's value on every sample it contains."""
    report = AttachedReport(True)
    for index, x in enumerate(samples):
        hits = [i for i, h in enumerate(B.cylinders) if contains(h, x)]
        if not hits:
            report.uncovered.append(index)
            continue
        got = coordinate(Psi, x, 0)
        for i in hits:
            if B.values[i] != got:
                report.mismatches.append((index, i, B.values[i], got))
    report.attached = not report.mismatches
    if report.uncovered:
        logger.info(
            f"Attached check left samples uncovered count={len(report.uncovered)}"
        )
    return report


def refinement_check(B1: BarrierRule, B2: BarrierRule) -> bool:
    """Every cylinder of B1 lies inside some cylinder of B2 (full shift)."""
    return all(
        any(is_subcylinder(inner, outer) for outer in B2.cylinders)
        for inner in B1.cylinders
    )


def sampled_refinement_check(
    B1: BarrierRule,
    B2: BarrierRule,
    space: ShiftSpaceSpec,
    samples: Sequence[BiSeq],
) -> Tuple[bool, str]:
    """
    Containment inside a proper space X: C_X(h') may sit inside C_X(h)
    without dom(h) being part of dom(h'), so cylinders without an exact
    container are judged on the sampled members they hold.
    """
    points = [x for x in samples if member(space, x)]
    evidence = Evidence.EXACT
    for inner in B1.cylinders:
        if any(is_subcylinder(inner, outer) for outer in B2.cylinders):
            continue
        evidence = Evidence.SAMPLED
        held = [x for x in points if contains(inner, x)]
        if not held:
            continue
        if not any(
            all(contains(outer, x) for x in held) for outer in B2.cylinders
        ):
            return False, evidence
    return True, evidence


def degree_grid(
    symbol_bounds: Sequence[int], domain_bounds: Sequence[int]
) -> List[Tuple[int, int]]:
    return [(s, d) for d in domain_bounds for s in symbol_bounds]


def parse_grid(text: str) -> List[Tuple[int, int]]:
    """`s:d,s:d,...`; `s:d1..d2` expands a domain range at one symbol bound."""
    grid: List[Tuple[int, int]] = []
    for part in text.split(","):
        part = part.strip()
        if not part:
            continue
        s_text, sep, d_text = part.partition(":")
        if not sep:
            raise ValueError(f"bad grid point {part!r}")
        s = int(s_text)
        if ".." in d_text:
            lo, hi = (int(v) for v in d_text.split("..", 1))
            grid.extend((s, d) for d in range(lo, hi + 1))
        else:
            grid.append((s, int(d_text)))
    return grid
