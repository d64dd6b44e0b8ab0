"""Exact integer primitives for comparisons against powers of two with
rational exponents.

Everything here operates on Python's arbitrary-precision ``int``; no value is
ever rounded.  The only non-integer quantities that appear are exponents of 2
of the form ``p/q``, represented by :class:`RatExp`.  Three operations cover
all downstream needs:

* :func:`iroot` -- integer q-th roots,
* :func:`cmp_pow2` -- exact three-way comparison of ``a`` against ``b * 2^(p/q)``,
* :func:`floor_mul_pow2` -- ``floor(a * 2^(p/q))`` for ``p >= 0``.

Floating point appears only as a prefilter: when a double-precision log2
estimate is far from a tie the sign is already certain, otherwise the code
falls back to an exact integer decision.  Large-``q`` exact decisions use
cached integer brackets of ``2^(r/q)`` instead of raising both sides to the
q-th power; the result is identical and the cost is two multiplications.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

LT, EQ, GT = -1, 0, 1

# Above this many bits in the powered operand, exact comparisons switch from
# direct q-th powers to the bracket method.
_POW_LIMIT = 1 << 14

# (r, q) -> (B, floor(2^((r + q*B)/q))), kept at the largest precision seen.
_BRACKET_CACHE: dict[tuple[int, int], tuple[int, int]] = {}


@dataclass(frozen=True)
class RatExp:
    """Exponent ``p/q`` of 2 with integer ``p`` and positive integer ``q``.

    Normalization (gcd reduction) is permitted but not required of callers;
    operations reduce internally.
    """

    p: int
    q: int

    def __post_init__(self) -> None:
        if self.q < 1:
            raise ValueError(f"RatExp denominator must be >= 1, got {self.q}")

    def reduced(self) -> "RatExp":
        g = math.gcd(self.p, self.q)
        if g <= 1:
            return self
        return RatExp(self.p // g, self.q // g)


def _as_exp(e) -> RatExp:
    if isinstance(e, RatExp):
        return e
    if isinstance(e, int):
        return RatExp(e, 1)
    p, q = e
    return RatExp(p, q)


def _icmp(a: int, b: int) -> int:
    return (a > b) - (a < b)


def approx_log2(n: int) -> float:
    """log2 of a positive int, exact enough for prefilters (error ~1 ulp)."""
    if n <= 0:
        return float("-inf")
    return math.log2(n)


def _upper_root_seed(a: int, q: int) -> int:
    """An integer >= a**(1/q), within ~2^-30 relative of it."""
    bits = a.bit_length()
    if bits <= 512:
        level = math.log2(a) / q
    else:
        top = a >> (bits - 53)
        level = (math.log2(top) + (bits - 53)) / q
    li = int(level)
    m = int(2.0 ** (level - li) * (1 << 56))
    m += (m >> 30) + 4  # pad past float error so the seed stays an upper bound
    return ((m << li) >> 56) + 2


def iroot(a: int, q: int) -> int:
    """Largest integer r with ``r**q <= a``.

    ``a`` must be nonnegative and ``q`` positive; ``q == 0`` is a contract
    violation.  Newton iteration from a certified upper seed, with an exact
    final correction loop.
    """
    if q < 1:
        raise ValueError(f"iroot order must be >= 1, got {q}")
    if a < 0:
        raise ValueError("iroot argument must be nonnegative")
    if a == 0:
        return 0
    if q == 1:
        return a
    if q == 2:
        return math.isqrt(a)
    bits = a.bit_length()
    if q >= bits:
        return 1
    x = min(1 << -(-bits // q), _upper_root_seed(a, q))
    while True:
        y = ((q - 1) * x + a // x ** (q - 1)) // q
        if y >= x:
            break
        x = y
    while x ** q > a:
        x -= 1
    while (x + 1) ** q <= a:
        x += 1
    return x


def _floor_pow2_frac(r: int, q: int, out_bits: int) -> int:
    """``floor(2^(r/q) * 2^out_bits)`` for ``0 < r < q``, certified exact.

    Runs interval arithmetic over the square-root chain
    ``2^(1/2), 2^(1/4), ...``, multiplying in the terms selected by the binary
    expansion of r/q.  Every operation floors the lower end and ceils the
    upper, so the true value stays inside; precision is raised until both
    ends share a floor at the requested scale (2^(r/q) is irrational, so this
    terminates).
    """
    work = out_bits + 96
    while True:
        lo = hi = 1 << work
        s_lo = s_hi = None
        num = r
        for _ in range(work):
            if s_lo is None:
                s_lo = math.isqrt(1 << (2 * work + 1))
                s_hi = s_lo + 1
            else:
                s_lo = math.isqrt(s_lo << work)
                s_hi = math.isqrt(s_hi << work) + 1
            num <<= 1
            if num >= q:
                num -= q
                lo = (lo * s_lo) >> work
                hi = ((hi * s_hi) >> work) + 1
            if num == 0:
                break
        floor_lo = lo >> (work - out_bits)
        floor_hi = hi >> (work - out_bits)
        if floor_lo == floor_hi:
            return floor_lo
        work += 128


def _bracket(r: int, q: int, min_bits: int) -> tuple[int, int]:
    """Return ``(B, lo)`` with ``lo = floor(2^(r/q) * 2^B)`` and ``B >= min_bits``.

    ``lo`` brackets the irrational scale factor: ``lo <= 2^(r/q) * 2^B < lo+1``
    strictly (``0 < r < q`` so the scale is irrational after reduction).
    Cached per ``(r, q)`` at the largest precision computed so far; smaller
    precisions are derived by shifting, which preserves the floor.
    """
    want = max(256, 1 << (min_bits + 64).bit_length())
    cached = _BRACKET_CACHE.get((r, q))
    if cached is not None and cached[0] >= want:
        b_have, lo_have = cached
        return want, lo_have >> (b_have - want)
    lo = _floor_pow2_frac(r, q, want)
    _BRACKET_CACHE[(r, q)] = (want, lo)
    return want, lo


def cmp_pow2(a: int, b: int, e) -> int:
    """Exact order of ``a`` versus ``b * 2^(p/q)``; returns LT, EQ or GT.

    ``e`` may be a :class:`RatExp`, an ``(p, q)`` pair, or an int exponent.
    A double log2 prefilter decides when its margin exceeds 0.5; otherwise the
    comparison is settled exactly (direct powering for small ``q * bits``,
    bracketed integer intervals beyond).
    """
    if a < 0 or b < 0:
        raise ValueError("cmp_pow2 arguments must be nonnegative")
    if b == 0:
        return GT if a > 0 else EQ
    if a == 0:
        return LT
    ex = _as_exp(e).reduced()
    p, q = ex.p, ex.q
    if p < 0:
        return -cmp_pow2(b, a, RatExp(-p, q))
    w, r = divmod(p, q)
    b2 = b << w
    if r == 0:
        return _icmp(a, b2)
    margin = q * (math.log2(a) - math.log2(b)) - p
    if margin > 0.5:
        return GT
    if margin < -0.5:
        return LT
    if q * (max(a.bit_length(), b2.bit_length()) + 2) <= _POW_LIMIT:
        return _icmp(a ** q, (b2 ** q) << r)
    # a/b2 is never exactly 2^(r/q) (irrational), so brackets must separate.
    min_bits = max(a.bit_length(), b2.bit_length()) + 64
    for _ in range(8):
        big_b, lo = _bracket(r, q, min_bits)
        lhs = a << big_b
        if lhs <= b2 * lo:
            return LT
        if lhs >= b2 * (lo + 1):
            return GT
        min_bits *= 2
    return _icmp(a ** q, (b2 ** q) << r)  # unreachable in practice


def floor_mul_pow2(a: int, e) -> int:
    """``floor(a * 2^(p/q))`` computed exactly; requires ``p >= 0``.

    Equal by definition to ``iroot(a**q << p, q)``; the implementation takes
    that route for small operands and a cached-bracket route (two
    multiplications per call) when raising to the q-th power would be costly.
    """
    if a < 0:
        raise ValueError("floor_mul_pow2 argument must be nonnegative")
    ex = _as_exp(e).reduced()
    if ex.p < 0:
        raise ValueError("floor_mul_pow2 supports upward scalings only (p >= 0)")
    if a == 0:
        return 0
    w, r = divmod(ex.p, ex.q)
    a2 = a << w
    if r == 0:
        return a2
    q = ex.q
    if q * (a2.bit_length() + 2) + r <= _POW_LIMIT:
        return iroot((a2 ** q) << r, q)
    min_bits = a2.bit_length() + 64
    while True:
        big_b, lo = _bracket(r, q, min_bits)
        c_lo = (a2 * lo) >> big_b
        c_hi = (a2 * (lo + 1)) >> big_b
        if c_lo == c_hi:
            return c_lo
        min_bits *= 2  # an integer fell inside the bracket; sharpen it
