from fractions import Fraction

import pytest

from growth_forge import seqfn
from growth_forge.errors import BudgetExceededError, DomainOverflowError
from growth_forge.holefn import (
    HoleFn,
    HoleSchedule,
    build_schedule,
    check_dominates,
    default_schedule,
    eval_hole,
    find_nonrealizability_witness,
    floor_geometric,
    grid_search_witness,
)


class TestFloorGeometric:
    def test_exact_doubling(self):
        seq, report = floor_geometric(1, (1, 1), 5, (1, 8))
        assert seq == [1, 2, 4, 8, 16, 32] and report.passed

    def test_sqrt2_steps(self):
        seq, report = floor_geometric(100, (1, 2), 2, (1, 8))
        assert seq == [100, 141, 199] and report.passed

    def test_tiny_seed_stalls(self):
        seq, report = floor_geometric(1, (1, 2), 3, (1, 8))
        assert seq == [1, 1, 1, 1]
        assert not report.passed and report.counterexample[0] == 1


class TestScheduleRoundTrip:
    def test_json(self):
        sched = default_schedule()
        again = HoleSchedule.from_json(sched.to_json())
        assert again.d == sched.d and again.n == sched.n
        assert {k: (e.verified_to, e.passed) for k, e in again.ledger.items()} == \
               {k: (e.verified_to, e.passed) for k, e in sched.ledger.items()}

    def test_stage_multiplicity_enforced(self):
        with pytest.raises(ValueError):
            HoleSchedule(d=(3, 5), n=(4, 9))  # n_2 = 9 not a multiple of 2


class TestBuild:
    def test_rejects_d1_of_two(self):
        with pytest.raises(ValueError):
            build_schedule(1, 2)

    def test_bare_minimum_stage_one(self):
        sched = build_schedule(1, 3, witness_stages=())
        assert sched.d == (3,) and sched.n == (11,)
        assert all(e.passed for e in sched.ledger.values())

    def test_witness_backed_stage_one(self):
        sched = build_schedule(1, 3)
        assert sched.n == (51,)
        assert "witness_stage1" in sched.ledger

    def test_stage_two_structural_floor(self):
        sched = default_schedule()
        d1, d2 = sched.d
        n1 = sched.n[0]
        assert d2 >= max(8, d1 * n1 + 2, -(-n1 // 2))
        assert sched.n[1] > 4 * d1 * n1

    def test_omega_hint_pushes_stage_up(self):
        slow = {m: Fraction(1, 6) for m in range(1, 30)}  # >= 1/(2 d_1) up to 29
        sched = build_schedule(1, 3, slow, witness_stages=())
        assert sched.n[0] >= 30


class TestEval:
    def test_piecewise_values(self):
        sched = build_schedule(1, 3, witness_stages=())
        h = HoleFn(sched)
        n1, d1 = sched.n[0], sched.d[0]
        assert eval_hole(h, n1) == 2 ** n1
        assert eval_hole(h, n1 + 1) == 2 ** n1 + n1 + 2
        from growth_forge.exactnum import floor_mul_pow2
        assert eval_hole(h, d1 * n1 + 1) == floor_mul_pow2(h(d1 * n1), (1, 2 * d1))

    def test_cap(self):
        h = HoleFn(default_schedule(), cap=100)
        with pytest.raises(DomainOverflowError):
            eval_hole(h, 101)


class TestWitness:
    def test_prescribed_point_is_strict_on_shipped_schedule(self, default_hole):
        w = find_nonrealizability_witness(default_hole, 1)
        assert w is not None and w.lhs > w.rhs
        sched = default_hole.schedule
        m1 = sched.m[0]
        assert w.n == m1 + 1
        assert w.D == (sched.d[0] * m1) // (m1 + 1)
        assert sched.d[0] <= 2 * w.D and w.D <= sched.d[0] and w.D >= 1

    def test_prescribed_point_vs_direct_evaluation(self, default_hole):
        w = find_nonrealizability_witness(default_hole, 1)
        holds, lhs, rhs = seqfn.check_realizability_constraint(
            default_hole.fn, 1, w.D, w.n)
        assert not holds and (lhs, rhs) == (w.lhs, w.rhs)

    def test_stage_beyond_schedule_rejected(self):
        sched = build_schedule(1, 3)
        with pytest.raises(ValueError):
            find_nonrealizability_witness(HoleFn(sched), 2)

    def test_well_behaved_function_has_no_witness_on_grid(self):
        free_like = seqfn.growth_from_callable(lambda n: 2 ** (n + 1) - 1)
        for n in range(2, 40):
            holds, _, _ = seqfn.check_realizability_constraint(free_like, 1, 2, n)
            assert holds

    def test_grid_search_widens(self, default_hole):
        m1 = default_hole.schedule.m[0]
        w = grid_search_witness(default_hole, 1, range(m1 - 2, m1 + 3))
        assert w is not None and w.lhs > w.rhs


class TestDominates:
    def test_quarter_exponent_passes(self, default_hole):
        d1, n1 = default_hole.schedule.d[0], default_hole.schedule.n[0]
        report = check_dominates(default_hole, Fraction(1, 4 * d1), d1 * n1)
        assert report.passed

    def test_full_exponent_fails_right_after_stage_one(self, default_hole):
        n1 = default_hole.schedule.n[0]
        report = check_dominates(default_hole, Fraction(1), n1 + 5)
        assert not report.passed and report.counterexample[0] == n1 + 1

    def test_zero_exponent_trivial(self, default_hole):
        report = check_dominates(default_hole, Fraction(0), 2 * default_hole.schedule.n[0])
        assert report.passed


class TestShippedScheduleProperties:
    def test_ledger_all_green(self):
        sched = default_schedule()
        assert all(e.passed for e in sched.ledger.values())

    def test_increasing_and_submultiplicative(self, default_hole):
        n2 = default_hole.schedule.n[1]
        assert seqfn.check_increasing(default_hole.fn, n2).passed
        assert seqfn.check_submultiplicative(default_hole.fn, n2).passed

    def test_derivative_floor_fails_only_at_two(self, default_hole):
        n2 = default_hole.schedule.n[1]
        bad = seqfn.check_derivative_lb(default_hole.fn, n2, collect_all=True)
        assert bad == [2]

    def test_dyadic_halving_bound(self, default_hole):
        # submultiplicativity specialized to p = q = 2^(s-1)
        n2 = default_hole.schedule.n[1]
        s = 1
        while 2 ** s <= n2:
            assert default_hole(2 ** (s - 1)) ** 2 >= default_hole(2 ** s)
            s += 1

    def test_matches_fresh_build(self):
        fresh = build_schedule(2, 3)
        shipped = default_schedule()
        assert fresh.d == shipped.d and fresh.n == shipped.n
