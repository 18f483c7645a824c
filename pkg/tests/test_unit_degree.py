"""
Unit tests for finite-degree probes, attached barriers and refinement.
"""
import random

import pytest

from shiftlab.biseq import finite_support
from shiftlab.constants import DegreeVerdict, Evidence
from shiftlab.cylinder import FinMap
from shiftlab.degree import (
    attached_check,
    degree_grid,
    degree_probe,
    parse_grid,
    refinement_check,
    sampled_refinement_check,
)
from shiftlab.morphism import (
    BarrierRule,
    Morphism,
    WindowedRule,
    arre,
    barrier_from_coordinate,
    barrier_morphism,
    parse_table,
    split_cylinder,
    sum_window,
    two_point,
    windowed_from_table,
    zero_locator,
)
from shiftlab.shiftspace import AlphabetSpec, ShiftSpaceSpec, sample_members

pytestmark = [pytest.mark.unit]


def _small_samples(seed, count=60):
    rng = random.Random(seed)
    return [
        finite_support(
            [rng.randint(0, 2) for _ in range(5)], -2
        )
        for _ in range(count)
    ]


def _split_barriers():
    B0 = barrier_from_coordinate("sum-window", 2, 2)
    index = B0.cylinders.index(FinMap(((0, 0),)))
    return B0, split_cylinder(B0, index, 1, range(3))


class TestDegreeProbe:
    @pytest.mark.parametrize("y", [0, 1, 5, 17, 40])
    def test_doubling_chain_counts(self, y):
        report = degree_probe(arre(), y, [(40, 1)])
        assert [row.count for row in report.rows] == [y // 2 + 1]
        assert report.verdict == DegreeVerdict.FINITE

    def test_doubling_chain_counts_up_to_one_hundred(self):
        for y in range(101):
            report = degree_probe(arre(), y, [(y, 1), (100, 2)])
            assert [row.count for row in report.rows] == [y // 2 + 1] * 2
            assert report.verdict == DegreeVerdict.FINITE

    def test_two_point_grows_with_domain(self):
        report = degree_probe(two_point(), 1, degree_grid([20], range(1, 21)))
        assert [row.count for row in report.rows] == [2 * d for d in range(1, 21)]
        assert report.verdict == DegreeVerdict.GROWING
        assert report.is_monotone
        assert report.lines()[0] == "ℓ=1 bound=(20,1) count=2 verdict=growing"

    def test_sum_window_counts_settle(self):
        report = degree_probe(sum_window(), 3, [(3, 3), (4, 4), (5, 5)])
        counts = {row.count for row in report.rows}
        assert len(counts) == 1
        assert report.verdict == DegreeVerdict.FINITE
        assert report.notes

    def test_zero_locator_single_cylinder(self):
        report = degree_probe(zero_locator(), 2, [(5, 3)])
        assert report.rows[0].count == 1
        assert report.verdict == DegreeVerdict.FINITE

    def test_finite_alphabet_table(self):
        Psi = windowed_from_table(parse_table("00 -> 0\n01 -> 1\n10 -> 1\n11 -> 0"))
        report = degree_probe(Psi, 1, [(1, 1), (5, 5)])
        assert [row.count for row in report.rows] == [2, 2]
        assert report.verdict == DegreeVerdict.FINITE

    def test_barrier_rule_is_finite(self):
        rule = BarrierRule(
            (FinMap(((0, 0),)), FinMap(((0, 1),)), FinMap(((0, 2),))), (0, 1, 0)
        )
        report = degree_probe(barrier_morphism(rule), 0, [(2, 2)])
        assert report.rows[0].count == 2
        assert report.verdict == DegreeVerdict.FINITE

    def test_rule_without_completeness_argument(self):
        identity = Morphism(WindowedRule(0, 0, lambda w: w[0], "id"), name="id")
        report = degree_probe(identity, 1, [(3, 3)])
        assert report.verdict == DegreeVerdict.INCONCLUSIVE
        assert report.notes


class TestAttachedCheck:
    def test_barrier_is_attached_to_its_rule(self):
        B = barrier_from_coordinate("sum-window", 2, 2)
        report = attached_check(B, sum_window(), _small_samples(1))
        assert report.attached
        assert not report.uncovered

    def test_split_barrier_stays_attached(self):
        _, B1 = _split_barriers()
        assert attached_check(B1, sum_window(), _small_samples(2)).attached

    def test_corrupted_value_is_caught(self):
        B = barrier_from_coordinate("sum-window", 2, 2)
        index = B.cylinders.index(FinMap(((0, 0),)))
        values = list(B.values)
        values[index] = 9
        corrupted = BarrierRule(B.cylinders, tuple(values))
        samples = _small_samples(3) + [finite_support([0])]
        report = attached_check(corrupted, sum_window(), samples)
        assert not report.attached
        assert any(m[1] == index for m in report.mismatches)

    def test_uncovered_samples_are_listed(self):
        B = BarrierRule((FinMap(((0, 0),)),), (0,))
        report = attached_check(B, sum_window(), [finite_support([1])])
        assert report.attached
        assert report.uncovered == [0]


class TestRefinement:
    def test_reflexive(self):
        B0, _ = _split_barriers()
        assert refinement_check(B0, B0)

    def test_split_refines_original_only(self):
        B0, B1 = _split_barriers()
        assert refinement_check(B1, B0)
        assert not refinement_check(B0, B1)

    def test_refinement_inside_a_proper_space(self):
        X = ShiftSpaceSpec.forbidding([[1, 1]], AlphabetSpec.finite([0, 1]))
        inner = BarrierRule((FinMap(((0, 1),)),), (0,))
        follows = BarrierRule((FinMap(((1, 0),)),), (0,))
        clash = BarrierRule((FinMap(((1, 1),)),), (0,))
        samples = sample_members(X, random.Random(6), FinMap(((0, 1),)), count=10)
        assert not refinement_check(inner, follows)
        assert sampled_refinement_check(inner, follows, X, samples) == (
            True, Evidence.SAMPLED,
        )
        ok, _ = sampled_refinement_check(inner, clash, X, samples)
        assert not ok

    def test_exact_when_every_cylinder_has_a_container(self):
        B0, B1 = _split_barriers()
        X = ShiftSpaceSpec.full()
        assert sampled_refinement_check(B1, B0, X, []) == (True, Evidence.EXACT)


class TestGrid:
    def test_parse_grid(self):
        assert parse_grid("3:1, 5:2..4") == [(3, 1), (5, 2), (5, 3), (5, 4)]

    def test_degree_grid_orders_by_domain(self):
        assert degree_grid([1, 2], [3, 4]) == [(1, 3), (2, 3), (1, 4), (2, 4)]

    def test_bad_grid(self):
        with pytest.raises(ValueError):
            parse_grid("3")
