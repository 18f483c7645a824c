"""
Registry of named, reproducible verification cases.

Each case builds its objects from the engine modules and records one entry
per expectation in a VerificationLog. Cases never raise: a check that
raises is recorded as ERROR.
"""
from dataclasses import dataclass, field
import itertools
import logging
import random
from typing import Callable, Dict, List, Optional, Tuple

from shiftlab import conf
from shiftlab.arre_invert import (
    ambiguity_pair,
    compute_r,
    invert,
    phi_not_finite_degree_witness,
    solution_count,
)
from shiftlab.biseq import (
    BiSeq,
    TailSpec,
    constant_sequence,
    finite_support,
    format_biseq,
    make_biseq,
    seq_equal,
    symbol_at,
)
from shiftlab.constants import (
    DegreeVerdict,
    DomainClass,
    Evidence,
    NiceVerdict,
    ObservationTag,
    Outcome,
    RunStatus,
)
from shiftlab.cylinder import FinMap
from shiftlab.degree import (
    attached_check,
    degree_grid,
    degree_probe,
    refinement_check,
)
from shiftlab.exceptions import UnknownExample
from shiftlab.lemma import (
    NoImageFamily,
    ZeroDriftFamily,
    build_trace,
    classify,
    exhibit_limit_preimage,
    limit_image,
    nice_check,
    verify_trace,
)
from shiftlab.morphism import (
    arre,
    barrier_from_coordinate,
    barrier_morphism,
    check_disjoint,
    eval_full,
    eval_window,
    images_agree,
    split_cylinder,
    sum_window,
    two_point,
    zero_locator,
)
from shiftlab.shiftspace import FULL_NATURALS, sample_members
from shiftlab.verification_log import VerificationLog

logger = logging.getLogger(__name__)

CheckResult = Tuple[bool, str]
CaseBody = Callable[["CaseContext"], None]


@dataclass
class CaseContext:
    log: VerificationLog
    rng: random.Random

    def expect(
        self,
        description: str,
        check: Callable[[], CheckResult],
        evidence: str = Evidence.EXACT,
    ) -> bool:
        try:
            ok, detail = check()
        except Exception as exc:
            logger.exception(f"Expectation raised description={description!r}")
            self.log.errored(description, f"{type(exc).__name__}: {exc}", evidence)
            return False
        if ok:
            self.log.passed(description, detail, evidence)
        else:
            self.log.failed(description, detail, evidence)
        return ok


@dataclass(frozen=True)
class ExampleCase:
    example_id: str
    title: str
    body: CaseBody


@dataclass
class ExampleReport:
    example_id: str
    title: str
    status: str
    seed: int
    entries: List[Dict] = field(default_factory=list)
    summary: Dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return self.status == RunStatus.PASSED

    def lines(self) -> List[str]:
        out = [f"example={self.example_id} status={self.status} seed={self.seed}"]
        for entry in self.entries:
            detail = entry.get("detail") or entry.get("exception") or ""
            line = f"{entry['outcome']} {entry['description']} [{entry['evidence']}]"
            out.append(f"{line} {detail}".rstrip())
        return out

    def to_dict(self) -> Dict:
        return {
            "example_id": self.example_id,
            "title": self.title,
            "status": self.status,
            "seed": self.seed,
            "entries": self.entries,
            "summary": self.summary,
        }


_REGISTRY: Dict[str, ExampleCase] = {}


def register(example_id: str, title: str):
    def decorator(body: CaseBody) -> CaseBody:
        if example_id in _REGISTRY:
            raise ValueError(f"example {example_id!r} registered twice")
        _REGISTRY[example_id] = ExampleCase(example_id, title, body)
        return body

    return decorator


def list_examples() -> List[ExampleCase]:
    return sorted(_REGISTRY.values(), key=lambda case: case.example_id)


def get_example(example_id: str) -> ExampleCase:
    try:
        return _REGISTRY[example_id]
    except KeyError:
        raise UnknownExample(example_id) from None


def run_example(example_id: str, seed: Optional[int] = None) -> ExampleReport:
    case = get_example(example_id)
    if seed is None:
        seed = conf.get_seed_default()
    ctx = CaseContext(VerificationLog(), random.Random(seed))
    logger.info(f"Running example example_id={example_id} seed={seed}")
    case.body(ctx)
    entries = ctx.log.get_entries()
    outcomes = {entry["outcome"] for entry in entries}
    if Outcome.ERROR in outcomes:
        status = RunStatus.ERROR
    elif Outcome.FAIL in outcomes:
        status = RunStatus.FAILED
    else:
        status = RunStatus.PASSED
    report = ExampleReport(
        example_id, case.title, status, seed, entries, ctx.log.get_summary()
    )
    logger.info(
        f"Example finished example_id={example_id} status={status} "
        f"checks={len(entries)}"
    )
    return report


def run_all(seed: Optional[int] = None) -> List[ExampleReport]:
    return [run_example(case.example_id, seed) for case in list_examples()]


def _two_point_tail_ok(tail: TailSpec, target: int, symbol_bound: int) -> bool:
    """Far enough out every read stays in the tail; check one period there."""
    for d in range(symbol_bound, symbol_bound + len(tail.word)):
        m = tail.at(d)
        if tail.at(d - m) + tail.at(d + m) != target:
            return False
    return True


def _periodic_tails(symbol_bound: int, period: int) -> List[TailSpec]:
    tails: List[TailSpec] = []
    for p in range(1, period + 1):
        for word in itertools.product(range(symbol_bound + 1), repeat=p):
            tail = TailSpec.periodic(word)
            if tail not in tails:
                tails.append(tail)
    return tails


def two_point_preimage_search(
    target: int = 1, symbol_bound: int = 20, radius: int = 10, period: int = 2
) -> List[BiSeq]:
    """
    Points x with symbols <= symbol_bound whose two-point image is the
    constant `target`, among those with periodic tails of period <= `period`
    (constant backgrounds, zero or not, included) that differ from their
    tails only on [-r, r] for some r <= radius.

    Each tail is screened on its own first: far from the center the image is
    the tail's own image. Center positions are then assigned outward from 0;
    a coordinate is rejected as soon as the known part of x_{n-m} + x_{n+m}
    exceeds the target. For a nonzero target every position needs a nonzero
    symbol, since x_n = 0 gives an image of 0.
    """
    tails = [
        t for t in _periodic_tails(symbol_bound, period)
        if _two_point_tail_ok(t, target, symbol_bound)
    ]
    found: List[BiSeq] = []
    floor = 1 if target > 0 else 0
    for left, right, r in itertools.product(tails, tails, range(radius + 1)):
        order = sorted(range(-r, r + 1), key=lambda p: (abs(p), p))
        values: Dict[int, int] = {}

        def known(p: int) -> Optional[int]:
            if p < -r:
                return left.at(-r - 1 - p)
            if p > r:
                return right.at(p - r - 1)
            return values.get(p)

        def feasible() -> bool:
            for n, m in values.items():
                low = 0
                complete = True
                for p in (n - m, n + m):
                    s = known(p)
                    if s is None:
                        complete = False
                        s = floor
                    low += s
                if low > target or (complete and low != target):
                    return False
            return True

        def extend(depth: int) -> None:
            if depth == len(order):
                x = make_biseq(
                    left, [values[p] for p in range(-r, r + 1)], right, -r
                )
                lo = -r - symbol_bound - len(left.word)
                hi = r + symbol_bound + len(right.word)
                window = eval_window(two_point(), x, lo, hi)
                if all(s == target for s in window) and not any(
                    seq_equal(x, y) for y in found
                ):
                    found.append(x)
                return
            p = order[depth]
            for s in range(floor, symbol_bound + 1):
                values[p] = s
                if feasible():
                    extend(depth + 1)
                del values[p]

        extend(0)
    logger.info(
        f"Two-point preimage search target={target} symbol_bound={symbol_bound} "
        f"radius={radius} period={period} tails={len(tails)} found={len(found)}"
    )
    return found


def _random_finite_support(
    rng: random.Random, symbol_bound: int, radius: int
) -> BiSeq:
    r = rng.randint(0, radius)
    return finite_support(
        [rng.randint(0, symbol_bound) for _ in range(2 * r + 1)], -r
    )


@register("noimage", "two-point images converge to a sequence with no preimage")
def _noimage(ctx: CaseContext) -> None:
    fam = NoImageFamily()
    Psi = two_point()

    def windows_are_ones():
        for k in range(1, 51):
            got = eval_window(Psi, fam.point(k), -k, k)
            if got != (1,) * (2 * k + 1):
                return False, f"k={k} window={got}"
        return True, "k=1..50"

    ctx.expect("Psi(x^k)|[-k,k] = 1^(2k+1)", windows_are_ones)
    ctx.expect(
        "limit image on [-5,5] is 1^11",
        lambda: (limit_image(fam, Psi, 5) == (1,) * 11, ""),
    )
    ctx.expect(
        "x^k has no convergent subsequence",
        lambda: (nice_check(fam).verdict == NiceVerdict.NOT_NICE, ""),
    )

    def no_preimage():
        found = two_point_preimage_search(1, 20, 10, period=2)
        return not found, (
            f"symbols<=20 radius<=10 tail period<=2 found={len(found)}"
        )

    ctx.expect(
        "no preimage of 1^Z with periodic tails (any background)",
        no_preimage,
        Evidence.BOUNDED,
    )


@register("sum-window-barrier", "barriers B^0 and B^1 of the sum-window rule")
def _sum_window_barrier(ctx: CaseContext) -> None:
    Psi = sum_window()
    B0 = barrier_from_coordinate(Psi.name, 2, 2)
    zero_index = B0.items().index((FinMap(((0, 0),)), 0))
    B1 = split_cylinder(B0, zero_index, 1, range(3))
    samples = sample_members(FULL_NATURALS, ctx.rng, count=40, symbol_bound=2)

    ctx.expect(
        "Psi_0^-1(0) is the single cylinder C_0",
        lambda: (
            barrier_from_coordinate(Psi.name, 5, 5, 0).cylinders
            == (FinMap(((0, 0),)),),
            "",
        ),
    )
    ctx.expect("B^0 cylinders are disjoint", lambda: (check_disjoint(B0), ""))
    ctx.expect(
        "B^0 is attached to Psi",
        lambda: (attached_check(B0, Psi, samples).attached, ""),
        Evidence.SAMPLED,
    )
    ctx.expect(
        "B^1 is attached to Psi",
        lambda: (attached_check(B1, Psi, samples).attached, ""),
        Evidence.SAMPLED,
    )
    ctx.expect(
        "B^1 refines B^0 and not the other way round",
        lambda: (refinement_check(B1, B0) and not refinement_check(B0, B1), ""),
    )

    def value_zero_grows():
        counts = []
        for s in (2, 4, 6):
            B0_s = barrier_from_coordinate(Psi.name, s, 0)
            split = split_cylinder(B0_s, 0, 1, range(s + 1))
            report = degree_probe(barrier_morphism(split), 0, [(s, 1)])
            counts.append(report.rows[0].count)
        return counts == [3, 5, 7], f"counts={counts}"

    ctx.expect("value-0 cylinders of B^1 grow with the alphabet", value_zero_grows)

    def per_value_counts():
        report = degree_probe(Psi, 3, [(3, 3), (4, 4)])
        counts = [row.count for row in report.rows]
        return report.verdict == DegreeVerdict.FINITE and counts[0] == counts[1], (
            f"counts={counts}"
        )

    ctx.expect("B^0 count for value 3 is stable under wider bounds", per_value_counts)


@register("no-finite-degree", "the two-point rule is not of finite degree")
def _no_finite_degree(ctx: CaseContext) -> None:
    Psi = two_point()

    def growth():
        report = degree_probe(Psi, 1, degree_grid([20], range(1, 21)))
        counts = [row.count for row in report.rows]
        expected = [2 * d for d in range(1, 21)]
        return report.verdict == DegreeVerdict.GROWING and counts == expected, (
            f"counts={counts[:3]}...{counts[-1]}"
        )

    ctx.expect("value-1 cylinder count grows with the domain bound", growth)

    def trace_pins_window():
        fam = NoImageFamily()
        trace = build_trace(fam, Psi, L_max=2, sample=range(1, 11))
        problems = verify_trace(trace, fam, Psi, ctx.rng)
        observation = classify(trace)
        return not problems, (
            f"class={observation.domain_class} tag={observation.tag} "
            f"problems={problems[:2]}"
        )

    ctx.expect("lemma trace for x^k pins the image to 1s", trace_pins_window,
               Evidence.SAMPLED)


@register("exam2", "zero locator: class C1 with an exhibited preimage")
def _exam2(ctx: CaseContext) -> None:
    n = 2
    Psi = zero_locator()
    fam = ZeroDriftFamily(n)

    ctx.expect(
        "images are y^n with y^n_m = n - m",
        lambda: (
            all(
                eval_window(Psi, fam.point(k), -3, 3)
                == tuple(n - m for m in range(-3, 4))
                for k in range(1, 6)
            ),
            f"n={n}",
        ),
    )

    def same_zero_same_image():
        x, other = fam.point(1), fam.point(7)
        image = eval_full(Psi, x)
        return (
            not seq_equal(x, other) and bool(image) and images_agree(Psi, other, image),
            format_biseq(image) if image else image.reason,
        )

    ctx.expect("distinct points with one zero position share an image",
               same_zero_same_image)

    def trace_is_c1():
        trace = build_trace(fam, Psi, L_max=3, sample=range(1, 9))
        observation = classify(trace)
        maps = {level.h for level in trace.levels}
        preimage = exhibit_limit_preimage(trace, observation, fam, Psi)
        ok = (
            maps == {FinMap(((n, 0),))}
            and observation.domain_class == DomainClass.C1
            and observation.tag == ObservationTag.CLOSED_FORM
            and preimage is not None
        )
        return ok, observation.line()

    ctx.expect("h_inf = {n:0}, class C1 closed-form, preimage exhibited", trace_is_c1)


@register("arre", "doubling chain: finite degree and exact inversion")
def _arre(ctx: CaseContext) -> None:
    Psi = arre()

    def counts():
        wrong = []
        for y in range(101):
            report = degree_probe(Psi, y, [(y, 1)])
            if (
                report.rows[0].count != y // 2 + 1
                or report.verdict != DegreeVerdict.FINITE
            ):
                wrong.append(y)
        return not wrong, f"y=0..100 wrong={wrong}"

    ctx.expect("count of cylinders for y is floor(y/2)+1", counts)
    corpus = [_random_finite_support(ctx.rng, 64, 8) for _ in range(500)]

    def cardinality_bound():
        for x in corpus:
            y = eval_full(Psi, x)
            for N in range(1, 9):
                count = solution_count(y, N)
                if not 1 <= count <= symbol_at(y, 0) // 2 ** N + 1:
                    return False, f"x={format_biseq(x)} N={N} count={count}"
        return True, f"samples={len(corpus)}"

    ctx.expect("1 <= #S_N(y) <= floor(y_0/2^N)+1", cardinality_bound, Evidence.SAMPLED)

    def round_trip():
        for x in corpus:
            back = invert(eval_full(Psi, x))
            if not back or not seq_equal(back, x):
                return False, f"x={format_biseq(x)} got={back}"
        return True, f"samples={len(corpus)}"

    ctx.expect("invert(Psi(x)) = x", round_trip, Evidence.SAMPLED)
    ctx.expect(
        "r(0^Z) = 1", lambda: (compute_r(constant_sequence(0)) == 1, "")
    )

    def inverse_not_finite_degree():
        report = phi_not_finite_degree_witness(5)
        ok = report.counts_increase and all(
            row.values_zero and row.witnesses_in_image and row.escapes
            for row in report.rows
        )
        return ok, f"counts={[row.count for row in report.rows]}"

    ctx.expect("the inverse has growing value-0 cylinder families",
               inverse_not_finite_degree)


@register("arre-ambiguity", "doubling chain inverse is not a sliding block code")
def _arre_ambiguity(ctx: CaseContext) -> None:
    Psi = arre()

    def collision(L: int):
        x, x_prime = ambiguity_pair(L)
        block = tuple(2 ** (L + 2 - k) for k in range(-L, L + 1))
        a = eval_window(Psi, x, -L, L)
        b = eval_window(Psi, x_prime, -L, L)
        x0, x0_prime = symbol_at(x, 0), symbol_at(x_prime, 0)
        return a == b == block and x0 != x0_prime, (
            f"block={list(a)} x_0={x0} x'_0={x0_prime}"
        )

    ctx.expect(
        "L=1 central block is [16,8,4]",
        lambda: (eval_window(Psi, ambiguity_pair(1)[0], -1, 1) == (16, 8, 4), ""),
    )
    for L in (1, 2, 3):
        ctx.expect(
            f"L={L}: same central block, different x_0",
            lambda L=L: collision(L),
        )
