"""
Unit tests for shift morphisms: window and full evaluation, shift
commuting, widening, local rule tables and coordinate barriers.
"""
from itertools import product
import random

import pytest

from shiftlab.biseq import (
    TailSpec,
    constant_sequence,
    finite_support,
    make_biseq,
    restrict,
    seq_equal,
    symbol_at,
)
from shiftlab.cylinder import FinMap, contains
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
from shiftlab.morphism import (
    BarrierRule,
    WindowOnly,
    arre,
    barrier_from_coordinate,
    barrier_morphism,
    check_disjoint,
    check_shift_commuting,
    coordinate,
    eval_full,
    eval_window,
    load_table_morphism,
    morphism_by_name,
    overlapping_pairs,
    parse_table,
    split_cylinder,
    sum_window,
    two_point,
    widen,
    widen_rule,
    windowed_from_table,
    zero_locator,
)

pytestmark = [pytest.mark.unit]

XOR_TABLE = "00 -> 0\n01 -> 1\n10 -> 1\n11 -> 0\n"


def _counting_down(k):
    """x_j = 3k+1-j on [-k, k], ones to the left, zeros to the right."""
    return make_biseq(
        TailSpec.constant(1),
        [3 * k + 1 - j for j in range(-k, k + 1)],
        TailSpec.constant(0),
        -k,
    )


def _zigzag(z=0):
    """Injective point with its zero at z: odd symbols left, even right."""
    return make_biseq(
        TailSpec.arithmetic(1, 2), [0], TailSpec.arithmetic(2, 2), z
    )


class TestEvalWindow:
    def test_sum_window_on_zero(self):
        assert eval_window(sum_window(), constant_sequence(0), -2, 2) == (0,) * 5

    @pytest.mark.parametrize("k", [1, 2, 3, 7])
    def test_two_point_reads_past_the_block(self, k):
        assert eval_window(two_point(), _counting_down(k), -k, k) == (1,) * (2 * k + 1)

    @pytest.mark.parametrize("j", [0, 1, 3, 10])
    def test_doubling_chain_single_symbol(self, j):
        y = eval_window(arre(), finite_support([j], 1), -2, 3)
        assert y == (0, 0, 2 * j, j, 0, 0)

    def test_sum_window_by_hand(self):
        x = finite_support([1, 2, 0, 3], -1)
        # x_0 = 2 sums x_-2..x_2 = 0+1+2+0+3
        assert coordinate(sum_window(), x, 0) == 6
        assert coordinate(sum_window(), x, 1) == 0

    def test_bad_interval(self):
        with pytest.raises(InvalidInterval):
            eval_window(arre(), constant_sequence(0), 1, 0)

    def test_zero_locator_needs_unique_zero(self):
        with pytest.raises(MissingZero):
            eval_window(zero_locator(), constant_sequence(0), 0, 0)

    def test_zero_locator_rejects_points_outside_space(self):
        x = make_biseq(TailSpec.constant(5), [0], TailSpec.constant(5))
        with pytest.raises(NotInSpace):
            eval_window(zero_locator(), x, 0, 0)


class TestEvalFull:
    def test_doubling_chain_of_zero(self):
        assert seq_equal(eval_full(arre(), constant_sequence(0)), constant_sequence(0))

    def test_zero_locator_is_a_progression(self):
        y = eval_full(zero_locator(), _zigzag(3))
        for n in range(-6, 10):
            assert symbol_at(y, n) == 3 - n

    def test_two_point_tails(self):
        y = eval_full(two_point(), _counting_down(1))
        assert y
        assert restrict(y, -1, 1) == (1, 1, 1)
        assert symbol_at(y, 50) == 0
        assert symbol_at(y, -50) == 2

    def test_periodic_input_gives_periodic_output(self):
        x = make_biseq(TailSpec.periodic([0, 1]), [], TailSpec.periodic([1, 0]))
        y = eval_full(arre(), x)
        assert y
        assert restrict(y, -4, 3) == eval_window(arre(), x, -4, 3)

    def test_arithmetic_input_is_window_only(self):
        x = make_biseq(TailSpec.constant(0), [], TailSpec.arithmetic(1, 1))
        result = eval_full(arre(), x)
        assert isinstance(result, WindowOnly)
        assert not result


class TestShiftCommuting:
    def test_two_point(self):
        assert check_shift_commuting(two_point(), _counting_down(2), 5, -10, 10)

    def test_zero_locator(self):
        assert check_shift_commuting(zero_locator(), _zigzag(0), -3, -4, 4)

    @pytest.mark.parametrize(
        "make_morphism, make_point",
        [
            (arre, "finite"),
            (sum_window, "finite"),
            (two_point, "finite"),
            (zero_locator, "injective"),
            (lambda: barrier_morphism(barrier_from_coordinate("arre", 4, 1)), "finite"),
            (
                lambda: barrier_morphism(barrier_from_coordinate("two-point", 4, 4)),
                "finite",
            ),
            (
                lambda: barrier_morphism(
                    barrier_from_coordinate("zero-locator", 0, 40)
                ),
                "injective",
            ),
        ],
        ids=[
            "arre",
            "sum-window",
            "two-point",
            "zero-locator",
            "arre-barrier",
            "two-point-barrier",
            "zero-locator-barrier",
        ],
    )
    def test_random_windows(self, make_morphism, make_point):
        rng = random.Random(7)
        Psi = make_morphism()
        for _ in range(100):
            if make_point == "injective":
                x = _zigzag(rng.randint(-10, 10))
            else:
                x = finite_support(
                    [rng.randint(0, 4) for _ in range(rng.randint(1, 8))],
                    rng.randint(-8, 8),
                )
            k = rng.randint(-10, 10)
            a = rng.randint(-20, 20)
            b = rng.randint(a, 20)
            assert check_shift_commuting(Psi, x, k, a, b)


class TestWiden:
    def test_widened_rule_induces_same_code(self):
        wide = widen(arre(), 2, 3)
        rng = random.Random(9)
        for _ in range(20):
            x = finite_support([rng.randint(0, 5) for _ in range(5)], -2)
            assert eval_window(wide, x, -6, 6) == eval_window(arre(), x, -6, 6)

    def test_same_window_returns_rule(self):
        rule = arre().rule
        assert widen_rule(rule, 0, 1) is rule

    def test_cannot_narrow(self):
        with pytest.raises(ValueError):
            widen_rule(arre().rule, 0, 0)

    def test_only_windowed_rules_widen(self):
        with pytest.raises(ValueError):
            widen(two_point(), 3, 3)


class TestRuleTables:
    def test_xor_table(self):
        Psi = windowed_from_table(parse_table(XOR_TABLE))
        x = finite_support([1, 1, 0, 1], 0)
        assert Psi.rule.memory == 0
        assert eval_window(Psi, x, -1, 4) == (1, 0, 1, 1, 1, 0)

    def test_missing_word(self):
        Psi = windowed_from_table({(0, 0): 0, (0, 1): 1})
        with pytest.raises(MissingWindowWord):
            eval_window(Psi, finite_support([1, 1]), 0, 0)

    def test_load_from_file(self, tmp_path):
        path = tmp_path / "xor.txt"
        path.write_text("# xor\n" + XOR_TABLE)
        Psi = morphism_by_name(f"windowed:{path}")
        assert Psi.name == "windowed:xor.txt"
        assert Psi.input_space.alphabet.symbols == (0, 1)
        assert load_table_morphism(path).rule.table == Psi.rule.table

    @pytest.mark.parametrize(
        "text",
        ["", "00 => 1", "00 -> 1\n011 -> 0", "00 -> 1\n00 -> 0", "a b -> 1"],
    )
    def test_bad_tables(self, text):
        with pytest.raises(FormatError):
            parse_table(text)

    def test_unknown_rule_name(self):
        with pytest.raises(FormatError):
            morphism_by_name("no-such-rule")


def _sum_window_brute(symbol_bound, domain_bound, value):
    words = set()
    for radius in range(min(symbol_bound, domain_bound) + 1):
        for rest in product(range(symbol_bound + 1), repeat=2 * radius):
            word = rest[:radius] + (radius,) + rest[radius:]
            if sum(word) == value:
                words.add(FinMap.from_word(word, -radius))
    return words


class TestBarrierFromCoordinate:
    def test_sum_window_value_zero(self):
        B = barrier_from_coordinate("sum-window", 3, 3, 0)
        assert B.cylinders == (FinMap(((0, 0),)),)

    def test_sum_window_value_one(self):
        B = barrier_from_coordinate("sum-window", 3, 3, 1)
        assert B.cylinders == (FinMap(((-1, 0), (0, 1), (1, 0))),)

    @pytest.mark.parametrize("value", [0, 1, 2, 3])
    def test_sum_window_matches_brute_force(self, value):
        B = barrier_from_coordinate("sum-window", 3, 3, value)
        assert set(B.cylinders) == _sum_window_brute(3, 3, value)
        assert set(B.values) <= {value}

    def test_two_point_value_two(self):
        B = barrier_from_coordinate("two-point", 3, 2, 2)
        assert len(B.cylinders) == 6
        for h in B.cylinders:
            m = h.get(0)
            assert h.domain == (-m, 0, m)
            assert h.get(-m) + h.get(m) == 2

    def test_two_point_value_zero_has_fixed_point_cylinder(self):
        B = barrier_from_coordinate("two-point", 3, 2, 0)
        assert FinMap(((0, 0),)) in B.cylinders
        assert len(B.cylinders) == 3

    def test_gaps_are_recorded(self):
        B = barrier_from_coordinate("two-point", 5, 2)
        assert B.coverage_gaps

    def test_strict_gaps_raise(self):
        with pytest.raises(CoverageError):
            barrier_from_coordinate("two-point", 5, 2, strict=True)

    def test_unknown_rule(self):
        with pytest.raises(FormatError):
            barrier_from_coordinate("windowed:x", 2, 2)

    def test_full_barriers_are_disjoint(self):
        for name in ("sum-window", "two-point", "arre"):
            assert check_disjoint(barrier_from_coordinate(name, 2, 2))


class TestBarrierEvaluation:
    def test_arre_barrier_agrees_with_local_rule(self):
        Psi = barrier_morphism(barrier_from_coordinate("arre", 3, 1))
        x = finite_support([1, 2, 3, 0, 2], -2)
        assert eval_window(Psi, x, -4, 4) == eval_window(arre(), x, -4, 4)

    def test_point_outside_every_cylinder(self):
        Psi = barrier_morphism(barrier_from_coordinate("arre", 3, 1))
        with pytest.raises(NoCylinder):
            coordinate(Psi, finite_support([7]), 0)

    def test_default_value_fills_gaps(self):
        rule = BarrierRule((FinMap(((0, 1),)),), (5,), default=0)
        Psi = barrier_morphism(rule)
        assert eval_window(Psi, finite_support([1], 0), -1, 1) == (0, 5, 0)

    def test_overlapping_cylinders(self):
        rule = BarrierRule(
            (FinMap(((0, 1),)), FinMap(((1, 2),))), (0, 1)
        )
        assert overlapping_pairs(rule) == [(0, 1)]
        with pytest.raises(AmbiguousCylinder):
            coordinate(barrier_morphism(rule), finite_support([1, 2]), 0)


class TestSplitCylinder:
    def test_split_refines_value_zero_cylinder(self):
        B0 = barrier_from_coordinate("sum-window", 2, 2)
        index = B0.cylinders.index(FinMap(((0, 0),)))
        B1 = split_cylinder(B0, index, 1, range(3))
        assert len(B1.cylinders) == len(B0.cylinders) + 2
        pieces = B1.cylinders[index:index + 3]
        assert pieces == tuple(FinMap(((0, 0), (1, s))) for s in range(3))
        assert B1.values[index:index + 3] == (0, 0, 0)
        assert check_disjoint(B1)

    def test_split_pieces_cover_original(self):
        B0 = BarrierRule((FinMap(((0, 0),)),), (0,))
        B1 = split_cylinder(B0, 0, -1, range(2))
        for s in range(2):
            x = finite_support([s, 0], -1)
            assert contains(B0.cylinders[0], x)
            assert any(contains(h, x) for h in B1.cylinders)

    def test_cannot_split_fixed_position(self):
        B0 = BarrierRule((FinMap(((0, 0),)),), (0,))
        with pytest.raises(ValueError):
            split_cylinder(B0, 0, 0, range(2))
