"""Growth recurrences with derivative-squaring segments and their finite
realizability certificates.

A :class:`BZSchedule` is a validated sequence n_1 < n_2 < ... of stage
exponents.  The associated function is

* ``f(k) = 2^k``                                    for ``k <= 2^(n_1)``,
* ``f(k) = f(k-1) + k + 1``                         on ``(2^(n_i), 2^(n_i + i)]``,
* ``f(k) = f(k-1) + min{f'(d)^2 : ceil(k/2) <= d <= k-1}``
                                                    on ``(2^(n_i + i), 2^(n_(i+1))]``,

with the squaring rule continuing past the last listed stage.  The window
minimum is maintained incrementally with a monotone deque, and the streaming
evaluator retains only the active window plus requested probe indices, so
refutation runs near index 10^5 stay within a small memory footprint while
intermediate derivative values grow to thousands of bits.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Iterator, Optional, Sequence

from .errors import DomainOverflowError
from .seqfn import CheckReport, Condition2Witness, GrowthFn, growth_from_table

DEFAULT_CAP = 1 << 20


@dataclass(frozen=True)
class BZSchedule:
    n: tuple[int, ...]

    def __post_init__(self):
        if not self.n:
            raise ValueError("schedule needs at least one stage")

    @classmethod
    def parse(cls, text: str) -> "BZSchedule":
        return cls(tuple(int(x) for x in text.replace(" ", "").split(",")))


def validate_bz(s: BZSchedule) -> CheckReport:
    """Stage constraints: n_1 > 2, n_{i+1} > n_i + i, n_{i+1} > 2(n_i + i + 1)."""
    n = s.n
    if n[0] <= 2:
        return CheckReport("bz_schedule", 1, len(n), False,
                           counterexample=(1, n[0], 3),
                           note="first stage must exceed 2")
    for i in range(1, len(n)):
        lower = max(n[i - 1] + i, 2 * (n[i - 1] + i + 1))
        if n[i] <= lower:
            return CheckReport("bz_schedule", 1, len(n), False,
                               counterexample=(i + 1, n[i], lower + 1),
                               note="stage spacing too small")
    return CheckReport("bz_schedule", 1, len(n), True)


def _segments(s: BZSchedule) -> list[tuple[int, int, str]]:
    """(start_exclusive, end_inclusive, kind); the last squaring end is None."""
    segs = [(0, 1 << s.n[0], "pow2")]
    for i in range(1, len(s.n) + 1):
        lin_end = 1 << (s.n[i - 1] + i)
        segs.append((1 << s.n[i - 1], lin_end, "linear"))
        sq_end = (1 << s.n[i]) if i < len(s.n) else None
        segs.append((lin_end, sq_end, "squaring"))
    return segs


def stream(s: BZSchedule, upto: int, cap: int = DEFAULT_CAP) -> Iterator[tuple[int, int, int]]:
    """Yield ``(k, f'(k), f(k))`` for k = 1..upto, streaming.

    Memory holds only the monotone window-minimum deque (plus transiently the
    current value), never the full table.
    """
    if upto > cap:
        raise DomainOverflowError(f"requested index {upto} exceeds cap {cap}")
    report = validate_bz(s)
    if not report.passed:
        raise ValueError(f"invalid schedule {s.n}: {report.note}")
    segs = _segments(s)
    seg_idx = 0
    window: deque[tuple[int, int]] = deque()  # (index, f'(index)), values increasing
    f_val = 0
    for k in range(1, upto + 1):
        while segs[seg_idx][1] is not None and k > segs[seg_idx][1]:
            seg_idx += 1
        kind = segs[seg_idx][2]
        if kind == "pow2":
            f_val = 1 << k
            fp = 2 if k == 1 else (1 << (k - 1))
        elif kind == "linear":
            fp = k + 1
            f_val += fp
        else:
            lo = (k + 1) // 2  # ceil(k/2)
            while window and window[0][0] < lo:
                window.popleft()
            fp = window[0][1] ** 2
            f_val += fp
        while window and window[-1][1] >= fp:
            window.pop()
        window.append((k, fp))
        yield k, fp, f_val


def eval_bz(s: BZSchedule, k: int, cap: int = DEFAULT_CAP) -> int:
    """f(k), streaming from scratch."""
    val = 0
    for _, _, val in stream(s, k, cap):
        pass
    return val


def values_at(s: BZSchedule, f_indices: Sequence[int], fp_indices: Sequence[int] = (),
              cap: int = DEFAULT_CAP) -> tuple[dict[int, int], dict[int, int]]:
    """Single streaming pass collecting f at ``f_indices`` and f' at ``fp_indices``."""
    want_f = set(f_indices)
    want_fp = set(fp_indices)
    top = max(want_f | want_fp)
    f_out: dict[int, int] = {}
    fp_out: dict[int, int] = {}
    for k, fp, val in stream(s, top, cap):
        if k in want_f:
            f_out[k] = val
        if k in want_fp:
            fp_out[k] = fp
    return f_out, fp_out


def growth_fn(s: BZSchedule, upto: int, cap: int = DEFAULT_CAP) -> GrowthFn:
    """Fully materialized table up to ``upto`` wrapped as a GrowthFn.

    Suitable for the generic sweeps, which need random access; use the
    streaming interfaces for probes near the cap.
    """
    table = [val for _, _, val in stream(s, upto, cap)]
    return growth_from_table(table, name=f"bz{s.n}")


def check_aux(s: BZSchedule, i: int, cap: int = DEFAULT_CAP) -> CheckReport:
    """Derivative floor on the top dyadic block of stage i+1:
    f'(k) >= 2^(ceil(2^(n_(i+1)/2))) for all 2^(n_(i+1)-1) < k <= 2^(n_(i+1)).

    The integer ceiling in the exponent strengthens the half-power threshold,
    so a pass is sufficient; for even stage exponents it is exactly the
    half-power bound.  The note records the minimum derivative bit length and
    the reference inequality 4 e^2 >= 2^(n+2) on e = floor(log2 f'(k_min)).
    """
    if i < 0 or i + 1 > len(s.n):
        raise ValueError(f"stage {i} out of range for schedule {s.n}")
    n_next = s.n[i]  # n_(i+1) in 1-based stage language
    lo = 1 << (n_next - 1)
    hi = 1 << n_next
    if hi > cap:
        raise DomainOverflowError(f"stage needs index {hi} beyond cap {cap}")
    half = n_next // 2
    threshold_exp = (1 << half) if n_next % 2 == 0 else _ceil_pow2_half(n_next)
    threshold = 1 << threshold_exp
    min_fp = None
    min_k = None
    for k, fp, _ in stream(s, hi, cap):
        if lo < k <= hi and (min_fp is None or fp < min_fp):
            min_fp, min_k = fp, k
    e = min_fp.bit_length() - 1
    ref_ok = 4 * e * e >= 1 << (n_next + 2)
    note = (f"min f' at k={min_k} has {min_fp.bit_length()} bits; "
            f"threshold exponent {threshold_exp}; reference 4e^2>=2^(n+2): {ref_ok}")
    if min_fp >= threshold:
        return CheckReport(f"aux_stage_{i}", lo + 1, hi, True, note=note)
    return CheckReport(f"aux_stage_{i}", lo + 1, hi, False,
                       counterexample=(min_k, min_fp, threshold), note=note)


def _ceil_pow2_half(n: int) -> int:
    """ceil(2^(n/2)) for odd n, exactly."""
    # 2^(n/2) = 2^((n-1)/2) * sqrt(2); ceil via integer sqrt of 2^(n+? )
    from math import isqrt
    base = isqrt(1 << n)  # floor(2^(n/2))
    return base if base * base == (1 << n) else base + 1


@dataclass
class RefutationOutcome:
    witness: Optional[Condition2Witness]
    evaluated: list[tuple[int, int, int]]  # (i, m, N) actually evaluated
    overflowed: list[int]                  # stages skipped for cap reasons

    def as_dict(self) -> dict:
        return {
            "witness": self.witness.as_dict() if self.witness else None,
            "evaluated": [list(t) for t in self.evaluated],
            "overflowed": self.overflowed,
        }


def refute_condition2(s: BZSchedule, C: int, i_max: int,
                      cap: int = DEFAULT_CAP) -> RefutationOutcome:
    """Evaluate the window product condition at the prescribed per-stage points
    ``m = floor(2^(n_(i+1)) / (C^2+1))``, ``N = 2^(n_(i+1))`` and return the
    first strict violation.

    Stages whose required indices exceed the cap are reported as overflowed
    and skipped; the search still covers all smaller stages.
    """
    if C < 1:
        raise ValueError("C must be >= 1")
    c2 = C * C
    evaluated: list[tuple[int, int, int]] = []
    overflowed: list[int] = []
    witness = None
    for i in range(1, i_max + 1):
        if i + 1 > len(s.n):
            break
        N = 1 << s.n[i]
        m = N // (c2 + 1)
        top = 2 * c2 * N + (c2 * c2 + c2) * m
        if top > cap:
            overflowed.append(i)
            continue
        k = (c2 + 1) * m
        f_need = [2 * c2 * N, N, top, N + m, k, k - 1]
        f_vals, fp_vals = values_at(s, f_need, [k], cap)
        lhs = fp_vals[k]
        rhs = (f_vals[2 * c2 * N] - f_vals[N]) * (f_vals[top] - f_vals[N + m])
        evaluated.append((i, m, N))
        if lhs > rhs:
            witness = Condition2Witness(C=C, m=m, N=N, lhs=lhs, rhs=rhs, i=i)
            break
    return RefutationOutcome(witness, evaluated, overflowed)


def write_table_csv(s: BZSchedule, upto: int, path, cap: int = DEFAULT_CAP) -> None:
    """Stream ``n,value`` rows directly to disk (no full table in memory)."""
    import csv

    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["n", "value"])
        for k, _, val in stream(s, upto, cap):
            writer.writerow([k, val])
