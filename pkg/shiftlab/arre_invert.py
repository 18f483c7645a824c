"""
Inversion of the doubling chain y_n = x_n + 2 x_{n+1} over N.

S_N(y) is the set of words w_{-N} ... w_{N+1} with w_i + 2 w_{i+1} = y_i on
[-N, N]; r(y) is the first N from which it is a singleton. The preimage of a
tail-represented y is also computed exactly: going left the chain expands by
-2, so the preimage's left tail is pinned to the periodic fixed orbit of the
left tail of y; going right it contracts by -1/2 and integrality pins the
right tail the same way. The center follows by back-propagation.
"""
from dataclasses import dataclass, field
from fractions import Fraction
import logging
from typing import List, Optional, Sequence, Tuple, Union

from shiftlab import conf
from shiftlab.biseq import (
    BiSeq,
    TailSpec,
    Word,
    finite_support,
    format_biseq,
    make_biseq,
    restrict,
    seq_equal,
    symbol_at,
)
from shiftlab.cylinder import FinMap, contains
from shiftlab.exceptions import (
    NotInSpace,
    RNotFound,
    ShiftlabError,
    UnsupportedTail,
)
from shiftlab.morphism import BarrierRule, arre, eval_full

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class SolutionSet:
    """Solutions w_{-N} ... w_{N+1} of the chain over the window [-N, N]."""

    N: int
    words: Tuple[Word, ...]

    def __len__(self) -> int:
        return len(self.words)

    def lines(self) -> List[str]:
        return ["[" + ",".join(str(s) for s in w) + "]" for w in self.words]


@dataclass(frozen=True)
class NotInImage:
    reason: str

    def __bool__(self) -> bool:
        return False


@dataclass(frozen=True)
class Inconclusive:
    """
    No r(y) <= N_max. `candidate` carries the exact tail-derived preimage
    when one exists.
    """

    reason: str
    candidate: Optional[BiSeq] = None

    def __bool__(self) -> bool:
        return False


InvertResult = Union[BiSeq, NotInImage, Inconclusive]


@dataclass
class WitnessRow:
    bound: int
    count: int
    values_zero: bool
    witnesses_in_image: bool
    escapes: bool


@dataclass
class NotFiniteDegreeReport:
    rows: List[WitnessRow] = field(default_factory=list)
    cylinders: List[FinMap] = field(default_factory=list)

    @property
    def counts_increase(self) -> bool:
        counts = [row.count for row in self.rows]
        return all(a < b for a, b in zip(counts, counts[1:]))

    def lines(self) -> List[str]:
        return [
            f"bound={row.bound} count={row.count} "
            f"phi0_zero={str(row.values_zero).lower()} "
            f"witnesses_in_Y={str(row.witnesses_in_image).lower()} "
            f"escapes={str(row.escapes).lower()}"
            for row in self.rows
        ]


def chain_solutions(word: Sequence[int]) -> List[Word]:
    """
    All w_0 ... w_len over N with w_i + 2 w_{i+1} = word[i], found by
    choosing w_0 and propagating forward; parity prunes each branch.
    """
    if not word:
        return []
    if any(s < 0 for s in word):
        return []
    found = []
    for first in range(word[0] + 1):
        w = [first]
        for y in word:
            rest = y - w[-1]
            if rest < 0 or rest % 2:
                break
            w.append(rest // 2)
        else:
            found.append(tuple(w))
    return found


def solve_chain(y_window: Sequence[int]) -> SolutionSet:
    """S_N for the window y_{-N} ... y_N (odd length 2N+1)."""
    if len(y_window) % 2 == 0 or len(y_window) < 3:
        raise ValueError(
            f"window must have odd length 2N+1 with N >= 1, got {len(y_window)}"
        )
    return SolutionSet((len(y_window) - 1) // 2, tuple(chain_solutions(y_window)))


def _check_representable(y: BiSeq) -> None:
    if not (y.left.is_bounded and y.right.is_bounded):
        raise UnsupportedTail(
            "doubling-chain inversion needs constant or periodic tails"
        )


def solution_count(y: BiSeq, N: int) -> int:
    return len(chain_solutions(restrict(y, -N, N)))


def compute_r(y: BiSeq, n_max: Optional[int] = None) -> Optional[int]:
    """r(y), or None when no N <= n_max gives a singleton."""
    _check_representable(y)
    if n_max is None:
        n_max = conf.get_nmax_default()
    for N in range(1, n_max + 1):
        count = solution_count(y, N)
        if count == 0:
            logger.debug(f"Chain has no solution N={N}; y is outside the image")
            return None
        if count == 1:
            if solution_count(y, N + 1) != 1:
                logger.warning(f"Singleton S_N not confirmed at N+1 N={N}")
                return None
            return N
    logger.warning(f"No stabilization index within n_max={n_max}")
    return None


def _left_orbit(y: BiSeq) -> Optional[Tuple[int, ...]]:
    """
    Values x_{lo}, x_{lo-1}, ..., x_{lo-p} of the only nonnegative preimage
    on the left tail: the fixed orbit of u_d = a_d - 2 u_{d-1}.
    """
    a = y.left.word
    # u_d = A + C * u_{-1}
    A, C = Fraction(0), Fraction(1)
    for symbol in a:
        A, C = symbol - 2 * A, -2 * C
    start = A / (1 - C)
    orbit = [start]
    for symbol in a:
        orbit.append(symbol - 2 * orbit[-1])
    if any(v.denominator != 1 or v < 0 for v in orbit):
        return None
    return tuple(int(v) for v in orbit)


def _right_orbit(y: BiSeq) -> Optional[Tuple[int, ...]]:
    """Values x_hi ... x_{hi+p}: the fixed orbit of v_{d+1} = (b_d - v_d)/2."""
    b = y.right.word
    A, C = Fraction(0), Fraction(1)
    for symbol in b:
        A, C = (symbol - A) / 2, -C / 2
    start = A / (1 - C)
    orbit = [start]
    for symbol in b:
        orbit.append((symbol - orbit[-1]) / 2)
    if any(v.denominator != 1 or v < 0 for v in orbit):
        return None
    return tuple(int(v) for v in orbit)


def exact_preimage(y: BiSeq) -> Optional[BiSeq]:
    """The unique x over N with x_n + 2 x_{n+1} = y_n, or None."""
    _check_representable(y)
    if any(s < 0 for s in (y.symbols_used() or ())):
        return None
    left = _left_orbit(y)
    right = _right_orbit(y)
    if left is None or right is None:
        return None
    lo, hi = y.center_lo, y.center_hi
    x = {hi: right[0]}
    for n in range(hi - 1, lo - 1, -1):
        value = y.center[n - lo] - 2 * x[n + 1]
        if value < 0:
            return None
        x[n] = value
    if x[lo] != left[0]:
        return None
    center = [x[n] for n in range(lo, hi)]
    return make_biseq(
        TailSpec.periodic(left[1:]),
        center,
        TailSpec.periodic(right[:-1]),
        lo,
    )


def membership_in_Y(y: BiSeq) -> Optional[bool]:
    """y in the image of N^Z; None for arithmetic tails."""
    if not (y.left.is_bounded and y.right.is_bounded):
        return None
    return exact_preimage(y) is not None


def invert(y: BiSeq, n_max: Optional[int] = None) -> InvertResult:
    """
    The preimage of y. The central block comes from the singleton S_r and
    must agree with the exact tail-derived preimage, whose image is then
    checked against y.
    """
    _check_representable(y)
    if n_max is None:
        n_max = conf.get_nmax_default()
    candidate = exact_preimage(y)
    if candidate is None:
        return NotInImage("no nonnegative integer preimage")
    r = None
    for N in range(1, n_max + 1):
        count = solution_count(y, N)
        if count == 0:
            return NotInImage(f"S_{N}(y) is empty")
        if count == 1:
            r = N
            break
    if r is None:
        logger.warning(
            f"Inversion inconclusive n_max={n_max} y={format_biseq(y)}"
        )
        return Inconclusive(f"no r(y) <= {n_max}", candidate)
    (block,) = chain_solutions(restrict(y, -r, r))
    if block != restrict(candidate, -r, r + 1):
        raise ShiftlabError(
            f"singleton S_{r} {block} disagrees with exact preimage"
        )
    image = eval_full(arre(), candidate)
    if not image or not seq_equal(image, y):
        raise ShiftlabError("preimage does not map back onto y")
    return candidate


def barrier_h_y(y: BiSeq, n_max: Optional[int] = None) -> FinMap:
    """h^y on {-r(y), ..., r(y)} with h^y(i) = y_i."""
    r = compute_r(y, n_max)
    if r is None:
        raise RNotFound(n_max if n_max is not None else conf.get_nmax_default())
    return FinMap(tuple((i, symbol_at(y, i)) for i in range(-r, r + 1)))


def phi_coordinate(y: BiSeq, n: int = 0) -> int:
    """x^y_n for the preimage x^y of y."""
    x = exact_preimage(y)
    if x is None:
        raise NotInSpace(f"{format_biseq(y)} is not in the chain image")
    return symbol_at(x, n)


def phi_barrier_rule(
    ys: Sequence[BiSeq], n_max: Optional[int] = None
) -> BarrierRule:
    """Cylinders C_Y(h^y) with value x^y_0, repeated cylinders collapsed."""
    seen = {}
    for y in ys:
        h = barrier_h_y(y, n_max)
        if h not in seen:
            seen[h] = phi_coordinate(y, 0)
    return BarrierRule(tuple(seen), tuple(seen.values()))


def ambiguity_pair(L: int) -> Tuple[BiSeq, BiSeq]:
    """
    x with x_k = 2^(L+1-k) on [-L, L+1] and x' with 2^(2l+1) at L-2l+1;
    both images read 2^(2L+2) ... 2^2 on [-L, L] while x_0 != x'_0.
    """
    if L < 1:
        raise ValueError(f"L must be positive, got {L}")
    x = finite_support(
        [2 ** (L + 1 - k) for k in range(-L, L + 2)], -L
    )
    spots = {L - 2 * ell + 1: 2 ** (2 * ell + 1) for ell in range(L + 1)}
    lo = min(spots)
    x_prime = finite_support(
        [spots.get(k, 0) for k in range(lo, max(spots) + 1)], lo
    )
    return x, x_prime


def chain_image_point(j: int) -> BiSeq:
    """y^j: image of the point with j at coordinate 1, so y_0 = 2j, y_1 = j."""
    return finite_support([2 * j, j], 0)


def joint_escape_point(spots: Sequence[int]) -> BiSeq:
    """
    Chain image of the 0/1 point supported on spots: y_n = 1_S(n) + 2 1_S(n+1).
    Its preimage is 0 at coordinate 0, and y_l >= 1 at every spot l.
    """
    support = set(spots)
    if not support:
        raise ValueError("escape point needs at least one spot")
    if 0 in support:
        raise ValueError("escape spots must avoid coordinate 0")
    lo, hi = min(support) - 1, max(support)
    return finite_support(
        [
            int(n in support) + 2 * int(n + 1 in support)
            for n in range(lo, hi + 1)
        ],
        lo,
    )


def escape_point(ell: int) -> BiSeq:
    """y with y_{ell-1} = 2, y_ell = 1, zero elsewhere; its preimage is 0 at 0."""
    return joint_escape_point([ell])


def escapes_all(y: BiSeq, cylinders: Sequence[FinMap]) -> bool:
    return not any(contains(h, y) for h in cylinders)


def _escape_spot(h: FinMap) -> Optional[int]:
    """Leftmost zero-valued coordinate of h off the origin."""
    spots = [p for p, s in h.entries if s == 0 and p != 0]
    return min(spots) if spots else None


def phi_not_finite_degree_witness(
    bound: int, n_max: Optional[int] = None
) -> NotFiniteDegreeReport:
    """
    Growing family of value-0 cylinders h^{y^j}, j <= b, of the inverse.
    Each cylinder contributes one zero spot; the chain image of the
    indicator of those spots and the next image y^{b+1} both have inverse
    value 0 and must lie outside every listed cylinder, so no finite list
    of them covers the 0-fibre.
    """
    report = NotFiniteDegreeReport()
    for b in range(1, bound + 1):
        cylinders = [barrier_h_y(chain_image_point(j), n_max) for j in range(b + 1)]
        values_zero = all(
            phi_coordinate(chain_image_point(j), 0) == 0 for j in range(b + 1)
        )
        spots = [_escape_spot(h) for h in cylinders]
        if None in spots:
            report.rows.append(
                WitnessRow(b, len(set(cylinders)), values_zero, False, False)
            )
            report.cylinders = cylinders
            continue
        points = [escape_point(ell) for ell in sorted(set(spots))]
        escapees = [joint_escape_point(spots), chain_image_point(b + 1)]
        witnesses_ok = all(
            bool(invert(y, n_max)) and phi_coordinate(y, 0) == 0
            for y in points + escapees
        )
        report.rows.append(
            WitnessRow(
                b,
                len(set(cylinders)),
                values_zero,
                witnesses_ok,
                all(escapes_all(y, cylinders) for y in escapees),
            )
        )
        report.cylinders = cylinders
    logger.info(
        f"Inverse degree witness bound={bound} "
        f"counts={[row.count for row in report.rows]}"
    )
    return report
