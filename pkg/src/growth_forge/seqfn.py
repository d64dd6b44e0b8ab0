"""Growth-function abstraction and generic finite checks.

A :class:`GrowthFn` memoizes an exact integer sequence defined by a rule on
positive indices.  Index 0 carries a fixed conventional value (default 1, the
dimension of the ground field / the empty word) so that difference expressions
like ``f(Cn) - f(Cn - C)`` stay evaluable when ``Cn == C``.

The check_* functions sweep finite ranges exhaustively and return a
:class:`CheckReport`; on failure the counterexample carries the indices and
both exact side values, so re-evaluating the named inequality there reproduces
the failure.  Sweeps over quadratically many pairs use a log2 prefilter that
may skip a pair only when the exact inequality provably holds, and confirm
everything within a 0.5 margin by exact integer arithmetic.
"""

from __future__ import annotations

import csv
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Iterable, Optional, Sequence

import numpy as np

from .errors import DomainOverflowError

LOG_MARGIN = 0.5
DEFAULT_SWEEP_CAP = 4096


class GrowthFn:
    """Memoized map from nonnegative index to exact integer value.

    ``rule(n)`` is consulted for ``n >= 1`` and may read ``self(j)`` for any
    ``j < n``: evaluation fills the memo in increasing index order, so
    recurrences never recurse.  Values are final once computed.
    """

    def __init__(
        self,
        rule: Callable[[int], int],
        name: str = "f",
        cap: Optional[int] = None,
        value_at_zero: int = 1,
    ):
        self._rule = rule
        self._values: list[int] = [value_at_zero]
        self.name = name
        self.cap = cap

    @property
    def verified_to(self) -> int:
        """Largest index whose value is finalized in the memo."""
        return len(self._values) - 1

    def __call__(self, n: int) -> int:
        if n < 0:
            raise ValueError(f"index must be nonnegative, got {n}")
        if self.cap is not None and n > self.cap:
            raise DomainOverflowError(
                f"{self.name}({n}) requested but evaluation cap is {self.cap}"
            )
        values = self._values
        while len(values) <= n:
            values.append(self._rule(len(values)))
        return values[n]

    def __repr__(self) -> str:
        return f"GrowthFn({self.name!r}, verified_to={self.verified_to})"


def growth_from_callable(fn: Callable[[int], int], name: str = "f", cap=None) -> GrowthFn:
    return GrowthFn(lambda n: fn(n), name=name, cap=cap)


def growth_from_table(values: Sequence[int], name: str = "table", value_at_zero: int = 1) -> GrowthFn:
    """Table-backed function; ``values[0]`` is f(1).  Indices beyond the table
    raise :class:`DomainOverflowError`."""
    vals = list(values)
    return GrowthFn(lambda n: vals[n - 1], name=name, cap=len(vals), value_at_zero=value_at_zero)


@dataclass
class CheckReport:
    prop: str
    lo: int
    hi: int
    passed: bool
    counterexample: Optional[tuple] = None
    note: str = ""

    def as_dict(self) -> dict:
        d = {
            "property": self.prop,
            "range": [self.lo, self.hi],
            "verdict": "pass" if self.passed else "fail",
        }
        if self.counterexample is not None:
            d["counterexample"] = [
                list(x) if isinstance(x, tuple) else x for x in self.counterexample
            ]
        if self.note:
            d["note"] = self.note
        return d


@dataclass
class RealizabilityWitness:
    """A strict violation of the growth-realizability inequality.

    ``lhs = f(2CDn) - f(2CDn - C)`` exceeds
    ``rhs = 2 D^2 n (f(CDn) - f(Cn - C))^(2D)`` with ``D >= C^2``.
    """

    C: int
    D: int
    n: int
    lhs: int
    rhs: int

    def as_dict(self) -> dict:
        return {
            "C": self.C,
            "D": self.D,
            "n": self.n,
            "lhs_bits": self.lhs.bit_length(),
            "rhs_bits": self.rhs.bit_length(),
            "strict": self.lhs > self.rhs,
        }


@dataclass
class Condition2Witness:
    """A point where f'((C^2+1)m) exceeds
    (f(2C^2 N) - f(N)) * (f(2C^2 N + (C^4+C^2)m) - f(N+m))."""

    C: int
    m: int
    N: int
    lhs: int
    rhs: int
    i: Optional[int] = None  # stage index when produced by a schedule search

    def as_dict(self) -> dict:
        d = {
            "C": self.C,
            "m": self.m,
            "N": self.N,
            "lhs_bits": self.lhs.bit_length(),
            "rhs_bits": self.rhs.bit_length(),
            "strict": self.lhs > self.rhs,
        }
        if self.i is not None:
            d["i"] = self.i
        return d


def derivative(f: GrowthFn, n: int) -> int:
    """Discrete derivative: f(n) - f(n-1) for n >= 2, and f(1) at n = 1."""
    if n < 1:
        raise ValueError(f"derivative index must be >= 1, got {n}")
    if n == 1:
        return f(1)
    return f(n) - f(n - 1)


def integral(f: GrowthFn) -> GrowthFn:
    """Running sum F(n) = sum_{i<=n} f(i).

    For increasing f the sum is squeezed pointwise: f(n) <= F(n) <= n f(n).
    """
    F = GrowthFn(lambda n: f(n) if n == 1 else F(n - 1) + f(n),
                 name=f"sum({f.name})", cap=f.cap)
    return F


def _derivative_list(f: GrowthFn, n_max: int) -> list[int]:
    """[f'(1), ..., f'(n_max)] with the f'(1) = f(1) convention; index 0 unused."""
    f(n_max)
    out = [0, f(1)]
    prev = f(1)
    for n in range(2, n_max + 1):
        cur = f(n)
        out.append(cur - prev)
        prev = cur
    return out


def check_increasing(f: GrowthFn, n_max: int) -> CheckReport:
    """f(n) < f(n+1) for all 1 <= n < n_max."""
    prev = f(1)
    for n in range(1, n_max):
        cur = f(n + 1)
        if not prev < cur:
            return CheckReport("increasing", 1, n_max, False,
                               counterexample=(n, prev, cur))
        prev = cur
    return CheckReport("increasing", 1, n_max, True)


def _log_array(values: Sequence[int]) -> np.ndarray:
    return np.array([math.log2(v) if v > 0 else float("-inf") for v in values],
                    dtype=np.float64)


def _submul_scan(values: list[int], logs: np.ndarray, s_lo: int, s_hi: int):
    """First (p, q) with f(p+q) > f(p) f(q) among sums in [s_lo, s_hi], or None."""
    for s in range(s_lo, s_hi + 1):
        half = s // 2
        left = logs[1: half + 1]
        right = logs[s - 1: s - half - 1: -1]
        near = np.nonzero(left + right - logs[s] < LOG_MARGIN)[0]
        if near.size:
            fs = values[s]
            for idx in near:
                p = int(idx) + 1
                if values[p] * values[s - p] < fs:
                    return p, s - p
    return None


def _submul_worker(args):
    values, s_lo, s_hi = args
    return _submul_scan(values, _log_array(values), s_lo, s_hi)


def check_submultiplicative(f: GrowthFn, n_max: int, jobs: int = 1) -> CheckReport:
    """f(p+q) <= f(p) f(q) for all p, q >= 1 with p + q <= n_max, exhaustively.

    The log2 prefilter only ever skips pairs whose inequality holds with a
    margin far beyond float error; everything nearer is confirmed exactly.
    With ``jobs > 1`` disjoint sum ranges are sharded across processes after
    the memo prefix is finalized.
    """
    f(n_max)
    values = [f(i) for i in range(0, n_max + 1)]
    if jobs > 1:
        chunks = []
        step = max(64, (n_max - 1) // jobs + 1)
        for lo in range(2, n_max + 1, step):
            chunks.append((values, lo, min(n_max, lo + step - 1)))
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            for hit in pool.map(_submul_worker, chunks):
                if hit is not None:
                    p, q = hit
                    return CheckReport("submultiplicative", 1, n_max, False,
                                       counterexample=((p, q), values[p + q],
                                                       values[p] * values[q]))
        return CheckReport("submultiplicative", 1, n_max, True)
    hit = _submul_scan(values, _log_array(values), 2, n_max)
    if hit is not None:
        p, q = hit
        return CheckReport("submultiplicative", 1, n_max, False,
                           counterexample=((p, q), values[p + q], values[p] * values[q]))
    return CheckReport("submultiplicative", 1, n_max, True)


def check_derivative_lb(f: GrowthFn, n_max: int, collect_all: bool = False):
    """f'(n) >= n + 1 for 2 <= n <= n_max.

    With ``collect_all`` returns the full list of violating indices instead of
    a report (used to pin exact failure sets in tests).
    """
    d = _derivative_list(f, n_max)
    bad = [n for n in range(2, n_max + 1) if d[n] < n + 1]
    if collect_all:
        return bad
    if bad:
        n = bad[0]
        return CheckReport("derivative_lower_bound", 2, n_max, False,
                           counterexample=(n, d[n], n + 1))
    return CheckReport("derivative_lower_bound", 2, n_max, True)


def check_bz_condition(f: GrowthFn, n_max: int, d: int = 2, collect_all: bool = False):
    """f'(m) <= f'(n)^d for all n <= m <= d*n with m <= n_max.

    Requires d >= 2.  This is the window condition satisfied by derivatives of
    algebra growth functions (every length-m word is a prefix of a product of
    d length-n words).
    """
    if d < 2:
        raise ValueError(f"window exponent d must be >= 2, got {d}")
    der = _derivative_list(f, n_max)
    logs = _log_array(der)
    bad: list[tuple[int, int]] = []
    for n in range(1, n_max + 1):
        hi = min(d * n, n_max)
        seg = logs[n: hi + 1]
        if not seg.size:
            continue
        threshold = d * logs[n] - LOG_MARGIN
        if seg.max() <= threshold:
            continue
        pow_n = der[n] ** d
        for off in np.nonzero(seg > threshold)[0]:
            m = n + int(off)
            if der[m] > pow_n:
                if not collect_all:
                    return CheckReport("derivative_window", 1, n_max, False,
                                       counterexample=((n, m), der[m], pow_n))
                bad.append((n, m))
    if collect_all:
        return bad
    return CheckReport("derivative_window", 1, n_max, True)


def check_convexity_bounds(f: GrowthFn, n_max: int) -> CheckReport:
    """For f with nondecreasing derivative: f(n) <= n f'(n) and n f'(n) <= f(2n)
    for all n with 2n <= n_max.

    The precondition f'' >= 0 on [2, n_max] is checked first; a decrease of f'
    is reported as a precondition violation, not as a bound failure.
    """
    der = _derivative_list(f, n_max)
    for n in range(2, n_max + 1):
        if der[n] < der[n - 1]:
            return CheckReport("convexity_bounds", 1, n_max, False,
                               counterexample=(n, der[n - 1], der[n]),
                               note="precondition violation: derivative decreases")
    for n in range(1, n_max // 2 + 1):
        lhs = f(n)
        mid = n * der[n]
        if lhs > mid:
            return CheckReport("convexity_bounds", 1, n_max, False,
                               counterexample=(("f<=nf'", n), lhs, mid))
        rhs = f(2 * n)
        if mid > rhs:
            return CheckReport("convexity_bounds", 1, n_max, False,
                               counterexample=(("nf'<=f(2n)", n), mid, rhs))
    return CheckReport("convexity_bounds", 1, n_max, True)


def check_equiv_witness(f: GrowthFn, g: GrowthFn, C: int, n_max: int) -> CheckReport:
    """Finite certificate of mutual domination with stretch C:
    f(n) <= g(Cn) and g(n) <= f(Cn) for all n <= n_max."""
    if C < 1:
        raise ValueError("stretch constant C must be >= 1")
    for n in range(1, n_max + 1):
        if f(n) > g(C * n):
            return CheckReport(f"equiv_witness(C={C})", 1, n_max, False,
                               counterexample=(("f<=g(Cn)", n), f(n), g(C * n)))
        if g(n) > f(C * n):
            return CheckReport(f"equiv_witness(C={C})", 1, n_max, False,
                               counterexample=(("g<=f(Cn)", n), g(n), f(C * n)))
    return CheckReport(f"equiv_witness(C={C})", 1, n_max, True)


def check_realizability_constraint(f: GrowthFn, C: int, D: int, n: int):
    """Evaluate both sides of the realizability inequality at (C, D, n).

    Returns ``(holds, lhs, rhs)`` where ``holds`` means
    ``f(2CDn) - f(2CDn - C) <= 2 D^2 n (f(CDn) - f(Cn - C))^(2D)``,
    all exactly.  Requires D >= C^2 and n >= 1; f(0) is the conventional
    value 1 when Cn - C == 0.
    """
    if C < 1 or n < 1:
        raise ValueError("C and n must be positive")
    if D < C * C:
        raise ValueError(f"D must satisfy D >= C^2, got D={D}, C={C}")
    lhs = f(2 * C * D * n) - f(2 * C * D * n - C)
    rhs = 2 * D * D * n * (f(C * D * n) - f(C * n - C)) ** (2 * D)
    return lhs <= rhs, lhs, rhs


def probe_condition2(f: GrowthFn, C: int,
                     candidates: Iterable[tuple[int, int]]) -> Optional[Condition2Witness]:
    """Search the candidate (m, N) pairs for a violation of the window product
    condition with constant C; returns the first witness or None.

    This is witness search only: an empty result never certifies that the
    condition holds for all (m, N).
    """
    if C < 1:
        raise ValueError("C must be >= 1")
    c2 = C * C
    for m, N in candidates:
        k = (c2 + 1) * m
        lhs = derivative(f, k)
        rhs = (f(2 * c2 * N) - f(N)) * (f(2 * c2 * N + (c2 * c2 + c2) * m) - f(N + m))
        if lhs > rhs:
            return Condition2Witness(C=C, m=m, N=N, lhs=lhs, rhs=rhs)
    return None


def write_csv(f: GrowthFn, upto: int, path) -> None:
    """Export ``n,value`` rows for n = 1..upto, decimal, no gaps."""
    f(upto)
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["n", "value"])
        for n in range(1, upto + 1):
            writer.writerow([n, f(n)])


def read_csv(path, name: Optional[str] = None, value_at_zero: int = 1) -> GrowthFn:
    """Load a ``n,value`` table written by :func:`write_csv`."""
    values: list[int] = []
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        if [h.strip() for h in header] != ["n", "value"]:
            raise ValueError(f"expected header 'n,value' in {path}, got {header}")
        for row in reader:
            if not row:
                continue
            n, v = int(row[0]), int(row[1])
            if n != len(values) + 1:
                raise ValueError(f"non-contiguous index {n} in {path}")
            values.append(v)
    if not values:
        raise ValueError(f"empty table in {path}")
    return growth_from_table(values, name=name or str(path), value_at_zero=value_at_zero)
