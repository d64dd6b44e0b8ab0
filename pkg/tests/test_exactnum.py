import math
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from growth_forge.exactnum import EQ, GT, LT, RatExp, cmp_pow2, floor_mul_pow2, iroot


class TestIroot:
    def test_exact_cube(self):
        assert iroot(8, 3) == 2

    def test_zero(self):
        assert iroot(0, 5) == 0

    def test_sqrt_20000(self):
        assert iroot(20000, 2) == 141
        assert 141 ** 2 <= 20000 < 142 ** 2

    def test_order_one_is_identity(self):
        assert iroot(123456789, 1) == 123456789

    def test_rejects_zero_order(self):
        with pytest.raises(ValueError):
            iroot(10, 0)

    def test_rejects_negative(self):
        with pytest.raises(ValueError):
            iroot(-1, 2)

    @given(st.integers(min_value=0, max_value=10 ** 60),
           st.integers(min_value=1, max_value=40))
    def test_sandwich(self, a, q):
        r = iroot(a, q)
        assert r ** q <= a < (r + 1) ** q

    def test_huge_operand(self):
        a = (1 << 5000) + 987654321
        r = iroot(a, 137)
        assert r ** 137 <= a < (r + 1) ** 137


class TestCmpPow2:
    def test_spec_triples(self):
        assert cmp_pow2(141, 100, (1, 2)) == LT      # 141^2 = 19881 < 20000
        assert cmp_pow2(142, 100, (1, 2)) == GT      # 142^2 = 20164 > 20000
        assert cmp_pow2(8, 8, (0, 1)) == EQ

    def test_integer_exponents(self):
        assert cmp_pow2(1024, 1, 10) == EQ
        assert cmp_pow2(1023, 1, (10, 1)) == LT
        assert cmp_pow2(3 << 7, 3, (7, 1)) == EQ

    def test_negative_exponent(self):
        # a vs b * 2^(-1/2): 100 vs 141.42... -> LT ; 100 vs 70.7... -> GT
        assert cmp_pow2(100, 200, (-1, 2)) == LT
        assert cmp_pow2(100, 100, (-1, 2)) == GT

    def test_zero_sides(self):
        assert cmp_pow2(0, 5, (1, 3)) == LT
        assert cmp_pow2(5, 0, (1, 3)) == GT
        assert cmp_pow2(0, 0, (1, 3)) == EQ

    def test_large_q_bracket_path(self):
        # forces the bracket route: tie-ish margin with q in the thousands
        a = floor_mul_pow2(1 << 2000, (7, 15168))
        assert cmp_pow2(a, 1 << 2000, (7, 15168)) == LT
        assert cmp_pow2(a + 1, 1 << 2000, (7, 15168)) == GT

    @given(st.integers(min_value=1, max_value=1 << 200),
           st.integers(min_value=1, max_value=1 << 200),
           st.integers(min_value=-60, max_value=60),
           st.integers(min_value=1, max_value=24))
    @settings(max_examples=300)
    def test_matches_direct_powering(self, a, b, p, q):
        expected = _direct_cmp(a, b, p, q)
        assert cmp_pow2(a, b, (p, q)) == expected

    def test_agrees_with_highprec_floats(self):
        mp = pytest.importorskip("mpmath")
        mp.mp.prec = 256
        rng = random.Random(20240817)
        checked = 0
        for _ in range(2000):
            a = rng.getrandbits(rng.randint(1, 600)) + 1
            b = rng.getrandbits(rng.randint(1, 600)) + 1
            p = rng.randint(-200, 200)
            q = rng.randint(1, 48)
            margin = q * (mp.log(a, 2) - mp.log(b, 2)) - p
            if abs(margin) <= mp.mpf(2) ** -200:
                continue
            want = GT if margin > 0 else LT
            assert cmp_pow2(a, b, (p, q)) == want
            checked += 1
        assert checked > 1900


def _direct_cmp(a, b, p, q):
    if p >= 0:
        lhs, rhs = a ** q, (b ** q) << p
    else:
        lhs, rhs = (a ** q) << (-p), b ** q
    return (lhs > rhs) - (lhs < rhs)


class TestFloorMulPow2:
    def test_spec_values(self):
        assert floor_mul_pow2(100, (1, 2)) == 141
        assert floor_mul_pow2(77, (0, 1)) == 77
        assert floor_mul_pow2(5, (1, 1)) == 10

    def test_rejects_downscaling(self):
        with pytest.raises(ValueError):
            floor_mul_pow2(5, (-1, 2))

    @given(st.integers(min_value=0, max_value=1 << 300),
           st.integers(min_value=0, max_value=50),
           st.integers(min_value=1, max_value=30))
    @settings(max_examples=300)
    def test_floor_bracketing(self, a, p, q):
        v = floor_mul_pow2(a, (p, q))
        assert v == iroot((a ** q) << p, q)
        if a > 0:
            assert cmp_pow2(v, a, (p, q)) in (LT, EQ)
            assert cmp_pow2(v + 1, a, (p, q)) == GT

    def test_bracket_route_equals_power_route(self):
        a = (1 << 700) + 3141592653589793
        for p, q in [(1, 948), (5, 930), (11, 4096)]:
            assert floor_mul_pow2(a, (p, q)) == iroot((a ** q) << p, q)


class TestRatExp:
    def test_requires_positive_denominator(self):
        with pytest.raises(ValueError):
            RatExp(1, 0)

    def test_reduction(self):
        assert RatExp(6, 4).reduced() == RatExp(3, 2)
