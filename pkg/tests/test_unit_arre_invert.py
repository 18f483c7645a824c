"""
Unit tests for the doubling chain y_n = x_n + 2 x_{n+1}: window solution
sets, r(y), exact inversion and the inverse's barrier.
"""
from itertools import product
import random

import pytest

from shiftlab.arre_invert import (
    Inconclusive,
    NotInImage,
    ambiguity_pair,
    barrier_h_y,
    chain_image_point,
    chain_solutions,
    compute_r,
    escape_point,
    escapes_all,
    exact_preimage,
    invert,
    joint_escape_point,
    membership_in_Y,
    phi_barrier_rule,
    phi_coordinate,
    phi_not_finite_degree_witness,
    solution_count,
    solve_chain,
)
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
from shiftlab.exceptions import NotInSpace, RNotFound, UnsupportedTail
from shiftlab.morphism import arre, eval_full

pytestmark = [pytest.mark.unit]


def _image(x):
    return eval_full(arre(), x)


def _brute_force(window):
    top = max(window)
    return sorted(
        w for w in product(range(top + 1), repeat=len(window) + 1)
        if all(w[i] + 2 * w[i + 1] == y for i, y in enumerate(window))
    )


def _random_finite_support(rng, symbol_bound=64, radius=8):
    r = rng.randint(0, radius)
    return finite_support(
        [rng.randint(0, symbol_bound) for _ in range(2 * r + 1)], -r
    )


def _sweep_count(y, N):
    """#S_N(y) by fixing w_{N+1} and solving w_i = y_i - 2 w_{i+1} leftwards."""
    window = restrict(y, -N, N)
    count = 0
    for last in range(max(window) + 1):
        w = last
        for s in reversed(window):
            w = s - 2 * w
            if w < 0:
                break
        else:
            count += 1
    return count


def _sweep_r(y):
    N = 1
    while _sweep_count(y, N) != 1:
        N += 1
    return N


class TestSolveChain:
    def test_single_symbol_image(self):
        result = solve_chain([0, 6, 3])
        assert result.N == 1
        assert result.words == ((0, 0, 3, 0),)
        assert result.lines() == ["[0,0,3,0]"]

    def test_zero_window(self):
        assert solve_chain([0, 0, 0]).words == ((0, 0, 0, 0),)

    def test_ambiguous_block(self):
        result = solve_chain([16, 8, 4])
        assert (8, 4, 2, 1) in result.words
        assert len(result) > 1

    def test_matches_brute_force(self):
        rng = random.Random(12)
        for _ in range(25):
            window = [rng.randint(0, 9) for _ in range(3)]
            assert sorted(chain_solutions(window)) == _brute_force(window)

    def test_negative_symbols_have_no_solution(self):
        assert chain_solutions([1, -2, 0]) == []

    def test_window_must_have_odd_length(self):
        with pytest.raises(ValueError):
            solve_chain([1, 2])


class TestComputeR:
    def test_zero(self):
        assert compute_r(constant_sequence(0)) == 1

    def test_not_in_image(self):
        assert compute_r(finite_support([1])) is None

    def test_ambiguous_block_needs_a_larger_window(self):
        x, _ = ambiguity_pair(1)
        y = _image(x)
        r = compute_r(y)
        assert r is not None and r > 1
        assert solution_count(y, r) == 1
        assert compute_r(y, n_max=1) is None

    def test_matches_sweep_oracle(self):
        rng = random.Random(31)
        for _ in range(100):
            y = _image(_random_finite_support(rng))
            assert compute_r(y) == _sweep_r(y)

    def test_arithmetic_tails_are_unsupported(self):
        y = make_biseq(TailSpec.constant(0), [], TailSpec.arithmetic(1, 1))
        with pytest.raises(UnsupportedTail):
            compute_r(y)


class TestCardinalityBound:
    def test_solution_count_bounded_by_center_symbol(self):
        rng = random.Random(27)
        for _ in range(500):
            y = _image(_random_finite_support(rng))
            for N in range(1, 9):
                count = solution_count(y, N)
                assert 1 <= count <= symbol_at(y, 0) // 2 ** N + 1
                assert count == _sweep_count(y, N)


class TestInvert:
    def test_zero(self):
        assert seq_equal(invert(constant_sequence(0)), constant_sequence(0))

    def test_round_trip_on_finite_support(self):
        rng = random.Random(21)
        for _ in range(1000):
            x = _random_finite_support(rng)
            result = invert(_image(x))
            assert seq_equal(result, x)

    def test_round_trip_on_periodic_point(self):
        x = make_biseq(TailSpec.periodic([0, 1]), [3], TailSpec.periodic([1, 0]), 0)
        assert seq_equal(invert(_image(x)), x)

    def test_constant_background(self):
        x = constant_sequence(2)
        y = _image(x)
        assert seq_equal(y, constant_sequence(6))
        assert seq_equal(exact_preimage(y), x)

    def test_not_in_image(self):
        result = invert(finite_support([1]))
        assert isinstance(result, NotInImage)
        assert not result

    def test_odd_constant_is_not_in_image(self):
        assert isinstance(invert(constant_sequence(1)), NotInImage)
        assert membership_in_Y(constant_sequence(3)) is True
        assert membership_in_Y(constant_sequence(1)) is False

    def test_inconclusive_keeps_candidate(self):
        x, _ = ambiguity_pair(1)
        result = invert(_image(x), n_max=1)
        assert isinstance(result, Inconclusive)
        assert seq_equal(result.candidate, x)

    def test_membership_unknown_for_arithmetic_tails(self):
        y = make_biseq(TailSpec.constant(0), [], TailSpec.arithmetic(1, 1))
        assert membership_in_Y(y) is None


class TestBarrierHY:
    def test_zero(self):
        assert barrier_h_y(constant_sequence(0)) == FinMap(
            ((-1, 0), (0, 0), (1, 0))
        )

    def test_values_read_off_y(self):
        y = chain_image_point(4)
        h = barrier_h_y(y)
        assert all(symbol_at(y, p) == s for p, s in h.entries)
        r = compute_r(y)
        assert h.domain == tuple(range(-r, r + 1))

    def test_no_stabilization(self):
        x, _ = ambiguity_pair(1)
        with pytest.raises(RNotFound):
            barrier_h_y(_image(x), n_max=1)


class TestInverseAsBarrier:
    def test_phi_coordinate(self):
        y = chain_image_point(5)
        assert phi_coordinate(y, 0) == 0
        assert phi_coordinate(y, 1) == 5

    def test_phi_coordinate_outside_image(self):
        with pytest.raises(NotInSpace):
            phi_coordinate(finite_support([1]))

    def test_barrier_rule_from_points(self):
        ys = [chain_image_point(j) for j in range(4)] + [chain_image_point(2)]
        rule = phi_barrier_rule(ys)
        assert len(rule.cylinders) == 4
        assert set(rule.values) == {0}
        for y, h in zip(ys, rule.cylinders):
            assert contains(h, y)

    def test_not_finite_degree_witness(self):
        report = phi_not_finite_degree_witness(5)
        assert [row.count for row in report.rows] == [2, 3, 4, 5, 6]
        assert report.counts_increase
        assert all(row.values_zero for row in report.rows)
        assert all(row.witnesses_in_image for row in report.rows)
        assert all(row.escapes for row in report.rows)
        assert report.lines()[0].startswith("bound=1 count=2 ")

    def test_escape_point_preimage_vanishes_at_zero(self):
        point = escape_point(3)
        assert restrict(point, 2, 3) == (2, 1)
        assert phi_coordinate(point, 0) == 0

    def test_joint_escape_point_marks_every_spot(self):
        point = joint_escape_point([-3, -1, 4])
        assert restrict(point, -4, 4) == (2, 1, 2, 1, 0, 0, 0, 2, 1)
        assert phi_coordinate(point, 0) == 0
        assert membership_in_Y(point)

    def test_joint_escape_point_rejects_origin(self):
        with pytest.raises(ValueError):
            joint_escape_point([-2, 0])

    def test_point_inside_a_listed_cylinder_does_not_escape(self):
        cylinders = [barrier_h_y(chain_image_point(j)) for j in range(3)]
        assert not escapes_all(chain_image_point(2), cylinders)
        assert not escapes_all(escape_point(-1), [FinMap.from_dict({-2: 2, -1: 1})])
        assert escapes_all(escape_point(-1), cylinders)

    def test_witness_escape_point_leaves_every_cylinder(self):
        report = phi_not_finite_degree_witness(4)
        spots = [
            min(p for p, s in h.entries if s == 0 and p != 0)
            for h in report.cylinders
        ]
        point = joint_escape_point(spots)
        assert all(not contains(h, point) for h in report.cylinders)

    @pytest.mark.parametrize("b", [1, 3, 6])
    def test_next_chain_image_escapes_only_past_the_list(self, b):
        cylinders = [barrier_h_y(chain_image_point(j)) for j in range(b + 1)]
        assert escapes_all(chain_image_point(b + 1), cylinders)
        assert not escapes_all(chain_image_point(b), cylinders)
        assert phi_coordinate(chain_image_point(b + 1), 0) == 0


class TestAmbiguityPair:
    @pytest.mark.parametrize("L", [1, 2, 3])
    def test_images_share_central_block(self, L):
        x, x_prime = ambiguity_pair(L)
        expected = tuple(2 ** (L + 2 - k) for k in range(-L, L + 1))
        assert restrict(_image(x), -L, L) == expected
        assert restrict(_image(x_prime), -L, L) == expected
        assert symbol_at(x, 0) != symbol_at(x_prime, 0)

    def test_first_instance(self):
        x, x_prime = ambiguity_pair(1)
        assert restrict(_image(x), -1, 1) == (16, 8, 4)
        assert restrict(x, -1, 2) == (8, 4, 2, 1)
        assert restrict(x_prime, -1, 3) == (0, 8, 0, 2, 0)

    def test_needs_positive_length(self):
        with pytest.raises(ValueError):
            ambiguity_pair(0)
