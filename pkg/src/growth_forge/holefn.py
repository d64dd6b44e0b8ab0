"""Piecewise growth functions with validated parameter schedules, built so
that every "large enough" choice is replaced by a machine-checked certificate.

The function attached to a :class:`HoleSchedule` with parameters
(d_1, n_1), ..., (d_K, n_K) is

* ``f(x) = 2^x``                              for ``x <= n_1``,
* ``f(x) = f(x-1) + x + 1``                   on ``(n_k, d_k n_k]``,
* ``f(x) = floor(2^(1/(2 d_1 ... d_k)) f(x-1))`` on ``(d_k n_k, n_(k+1)]``,

with the last exponential segment running to the evaluation cap.  The builder
searches the smallest d_k and then the smallest m_k (with n_k = k m_k) whose
exact certificate ledger passes; by default it additionally requires the
prescribed non-realizability witness at stage 1 to be strict, since that
witness is the point of the construction and the pure-ledger minimum is too
small to exhibit it.

All irrational comparisons (2^(1/3), sqrt(2)-1, 2^(-k-2), ...) go through
:func:`growth_forge.exactnum.cmp_pow2`; no verdict depends on floating point.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Mapping, Optional, Sequence, Union

from . import seqfn
from .errors import BudgetExceededError, DomainOverflowError
from .exactnum import EQ, GT, LT, RatExp, cmp_pow2, floor_mul_pow2
from .seqfn import CheckReport, GrowthFn, RealizabilityWitness

DEFAULT_CAP = 1 << 20
DEFAULT_SWEEP_CAP = seqfn.DEFAULT_SWEEP_CAP


@dataclass
class LedgerEntry:
    verified_to: int
    passed: bool
    note: str = ""

    def as_dict(self) -> dict:
        return {"verified_to": self.verified_to, "pass": self.passed}


@dataclass
class HoleSchedule:
    d: tuple[int, ...]
    n: tuple[int, ...]
    ledger: dict[str, LedgerEntry] = field(default_factory=dict)

    def __post_init__(self):
        if len(self.d) != len(self.n) or not self.d:
            raise ValueError("parameter lists must be nonempty and aligned")
        for k, nk in enumerate(self.n, start=1):
            if nk % k:
                raise ValueError(f"n_{k}={nk} is not a multiple of its stage {k}")

    @property
    def k_max(self) -> int:
        return len(self.d)

    @property
    def m(self) -> tuple[int, ...]:
        return tuple(nk // k for k, nk in enumerate(self.n, start=1))

    def exp_denominator(self, k: int) -> int:
        """2 d_1 ... d_k, the exponent denominator of stage k (1-based)."""
        out = 2
        for dk in self.d[:k]:
            out *= dk
        return out

    def to_json(self) -> str:
        return json.dumps(
            {
                "d": list(self.d),
                "n": list(self.n),
                "ledger": {name: e.as_dict() for name, e in sorted(self.ledger.items())},
            },
            indent=2,
            sort_keys=True,
        ) + "\n"

    @classmethod
    def from_json(cls, text: str) -> "HoleSchedule":
        obj = json.loads(text)
        ledger = {
            name: LedgerEntry(verified_to=e["verified_to"], passed=e["pass"])
            for name, e in obj.get("ledger", {}).items()
        }
        return cls(d=tuple(obj["d"]), n=tuple(obj["n"]), ledger=ledger)


class HoleFn:
    """Memoized piecewise evaluator for a schedule."""

    def __init__(self, schedule: HoleSchedule, cap: int = DEFAULT_CAP):
        self.schedule = schedule
        self.cap = cap
        self._exps = [RatExp(1, schedule.exp_denominator(k))
                      for k in range(1, schedule.k_max + 1)]
        self.fn = GrowthFn(self._rule, name=f"hole{schedule.n}", cap=cap)

    def _rule(self, x: int) -> int:
        sched = self.schedule
        if x <= sched.n[0]:
            return 1 << x
        for k in range(sched.k_max, 0, -1):
            nk, dk = sched.n[k - 1], sched.d[k - 1]
            if x > dk * nk:
                return floor_mul_pow2(self.fn(x - 1), self._exps[k - 1])
            if x > nk:
                return self.fn(x - 1) + x + 1
        raise AssertionError("unreachable")

    def __call__(self, x: int) -> int:
        return self.fn(x)


def eval_hole(h: HoleFn, x: int) -> int:
    """Exact value at x; indices beyond the cap raise DomainOverflowError."""
    return h(x)


def floor_geometric(a0: int, e, steps: int, eps) -> tuple[list[int], CheckReport]:
    """Iterate ``a_(j+1) = floor(2^e a_j)`` and certify, exactly, that
    ``c^(j-eps) a_0 <= a_j <= c^j a_0`` for all j <= steps (c = 2^e).

    A failed lower bound signals that a_0 was too small for the floor losses;
    the report names the first violating j.
    """
    e = e if isinstance(e, RatExp) else RatExp(*e) if isinstance(e, tuple) else RatExp(e, 1)
    eps = eps if isinstance(eps, RatExp) else RatExp(*eps) if isinstance(eps, tuple) else RatExp(eps, 1)
    if e.p < 0 or a0 < 1:
        raise ValueError("need a nonnegative exponent and a0 >= 1")
    seq = [a0]
    for _ in range(steps):
        seq.append(floor_mul_pow2(seq[-1], e))
    for j in range(1, steps + 1):
        aj = seq[j]
        if cmp_pow2(aj, a0, RatExp(j * e.p, e.q)) == GT:
            return seq, CheckReport("floor_geometric", 0, steps, False,
                                    counterexample=(j, aj, "upper"),
                                    note="upper bound c^j a0 violated")
        low_exp = RatExp((j * eps.q - eps.p) * e.p, e.q * eps.q)
        if cmp_pow2(aj, a0, low_exp) == LT:
            return seq, CheckReport("floor_geometric", 0, steps, False,
                                    counterexample=(j, aj, "lower"),
                                    note="lower bound c^(j-eps) a0 violated (a0 too small)")
    return seq, CheckReport("floor_geometric", 0, steps, True)


OmegaLike = Union[Fraction, Mapping[int, Fraction], Callable[[int], Fraction]]


def _omega_fn(omega: OmegaLike) -> Callable[[int], Fraction]:
    if isinstance(omega, Fraction):
        return lambda _x: omega
    if callable(omega):
        return omega
    table = dict(omega)
    def lookup(x: int) -> Fraction:
        try:
            return table[x]
        except KeyError:
            raise DomainOverflowError(f"omega table has no entry for {x}") from None
    return lookup


# -- schedule validation ------------------------------------------------------

def _stage_checks(h: HoleFn, k: int, exp_end: int) -> dict[str, LedgerEntry]:
    """Exact certificates for stage k, with the exponential segment verified
    on (d_k n_k, exp_end]."""
    sched = h.schedule
    nk, dk = sched.n[k - 1], sched.d[k - 1]
    den = sched.exp_denominator(k)
    ledger: dict[str, LedgerEntry] = {}

    f_nk = h(nk)
    f_top = h(dk * nk)

    # f(d_k n_k) <= f(n_k) * 2^(1/3)
    ok = cmp_pow2(f_top, f_nk, RatExp(1, 3)) != GT
    ledger[f"exp_gap_stage{k}"] = LedgerEntry(dk * nk, ok)

    # d_k^2 n_k^2 <= f(n_k)
    ledger[f"poly_room_stage{k}"] = LedgerEntry(nk, dk * dk * nk * nk <= f_nk)

    # n_k^2 <= (sqrt(2) - 1) f(n_k), checked as (n_k^2 + f)^2 <= 2 f^2
    ledger[f"sqrt2_room_stage{k}"] = LedgerEntry(
        nk, (nk * nk + f_nk) ** 2 <= 2 * f_nk * f_nk)

    # ratio bound: f(t+1) <= f(t) + (t+2) on the linear segment, and
    # f(t+1)/f(t) <= 2^(1/den) there and through the exponential segment
    ratio_ok = True
    ratio_to = exp_end - 1
    for t in range(nk, exp_end):
        ft, ft1 = h(t), h(t + 1)
        if (t < dk * nk and ft1 > ft + t + 2) or cmp_pow2(ft1, ft, RatExp(1, den)) == GT:
            ratio_ok = False
            ratio_to = t
            break
    ledger[f"ratio_bound_stage{k}"] = LedgerEntry(ratio_to + 1, ratio_ok)

    # lower bound: f(x) >= 2^(x/den + 1 + 2^(-k-1)) for 2 <= x <= d_k n_k
    pw = 1 << (k + 1)
    lb_ok = True
    lb_to = dk * nk
    for x in range(2, dk * nk + 1):
        e = RatExp(x * pw + den * pw + den, den * pw)
        if cmp_pow2(h(x), 1, e) == LT:
            lb_ok = False
            lb_to = x
            break
    ledger[f"lower_bound_stage{k}"] = LedgerEntry(lb_to, lb_ok)

    # Condition (I): f(y) >= f(x) 2^((y-x)/den - 2^(-k-2)) on [d_k n_k, exp_end].
    # Within one exponential segment x -> f(x) 2^(-x/den) is non-increasing
    # (each step floors an exact scaling), so the binding pair is always
    # (segment start, y) and one comparison per y suffices.
    eps_pw = 1 << (k + 2)
    x0 = dk * nk
    f_x0 = h(x0)
    ci_ok = True
    ci_to = exp_end
    for y in range(x0 + 1, exp_end + 1):
        e = RatExp((y - x0) * eps_pw - den, den * eps_pw)
        if cmp_pow2(h(y), f_x0, e) == LT:
            ci_ok = False
            ci_to = y
            break
    ledger[f"condition_i_stage{k}"] = LedgerEntry(ci_to, ci_ok)

    # derivative floor f'(x) >= x+1 on the tunable segments (n_k, exp_end]
    der_ok = True
    der_to = exp_end
    for x in range(nk + 1, exp_end + 1):
        if h(x) - h(x - 1) < x + 1:
            der_ok = False
            der_to = x
            break
    ledger[f"derivative_floor_stage{k}"] = LedgerEntry(der_to, der_ok)

    return ledger


def _structural_d_min(d: Sequence[int], n: Sequence[int], k: int) -> int:
    """Smallest admissible d_k given stages 1..k-1 (k is 1-based)."""
    if k == 1:
        return 3  # d_1 > 2
    prod = 1
    for dk in d[: k - 2]:
        prod *= dk
    return max(
        d[k - 2] + 1,
        2 * k * k,
        d[k - 2] * n[k - 2] + 2,
        -(-n[k - 2] // (2 * prod)),
    )


def _structural_m_min(d: Sequence[int], n: Sequence[int], k: int) -> int:
    if k == 1:
        return 3  # n_1 >= 3
    prev = 4 * d[k - 2] * n[k - 2] + 1  # n_k > 4 d_(k-1) n_(k-1)
    return -(-prev // k)


def prescribed_witness_point(schedule_d: Sequence[int], m_k: int, C: int) -> tuple[int, int]:
    """The stage-C witness point: n = m_C + 1, D = floor(d_C (1 - 1/(m_C+1)))."""
    d_k = schedule_d[C - 1]
    n = m_k + 1
    return n, (d_k * m_k) // (m_k + 1)


def find_nonrealizability_witness(h: HoleFn, C: int) -> Optional[RealizabilityWitness]:
    """Evaluate the realizability inequality at the prescribed stage-C point
    (k = C, n = m_C + 1, D = floor(d_C (1 - 1/(m_C+1)))) and return a witness
    iff the violation is strict.

    Never forges a witness: returns None when the inequality holds at the
    prescribed point (callers may widen with :func:`grid_search_witness`).
    """
    sched = h.schedule
    if not 1 <= C <= sched.k_max:
        raise ValueError(f"C={C} exceeds the schedule's {sched.k_max} stages")
    m_c = sched.m[C - 1]
    n, D = prescribed_witness_point(sched.d, m_c, C)
    d_c = sched.d[C - 1]
    if 2 * D < d_c or D > d_c:
        raise ValueError(f"prescribed D={D} escaped [d_C/2, d_C] (m_C too small)")
    if D < C * C:
        raise ValueError(f"prescribed D={D} below C^2={C * C}")
    holds, lhs, rhs = seqfn.check_realizability_constraint(h.fn, C, D, n)
    if holds:
        return None
    return RealizabilityWitness(C=C, D=D, n=n, lhs=lhs, rhs=rhs)


def grid_search_witness(h: HoleFn, C: int, n_range: Sequence[int]) -> Optional[RealizabilityWitness]:
    """Widened search: first strict violation over the given n values, with the
    same prescribed D rule per n."""
    sched = h.schedule
    d_c = sched.d[C - 1]
    for n in n_range:
        D = (d_c * (n - 1)) // n if n > 1 else d_c
        if D < C * C:
            continue
        holds, lhs, rhs = seqfn.check_realizability_constraint(h.fn, C, D, n)
        if not holds:
            return RealizabilityWitness(C=C, D=D, n=n, lhs=lhs, rhs=rhs)
    return None


def check_dominates(h: HoleFn, omega: OmegaLike, n_max: int) -> CheckReport:
    """f(x) >= 2^(x * omega(x)) for n_1 <= x <= n_max, exactly."""
    w = _omega_fn(omega)
    lo = h.schedule.n[0]
    for x in range(lo, n_max + 1):
        ex = Fraction(x) * w(x)
        if cmp_pow2(h(x), 1, RatExp(ex.numerator, ex.denominator)) == LT:
            return CheckReport("dominates", lo, n_max, False,
                               counterexample=(x, h(x), str(ex)))
    return CheckReport("dominates", lo, n_max, True)


def build_schedule(
    k_max: int,
    d1: int = 3,
    omega: Optional[OmegaLike] = None,
    *,
    witness_stages: Sequence[int] = (1,),
    m_search_cap: int = 4096,
    tail_factor: int = 2,
    sweep_cap: int = DEFAULT_SWEEP_CAP,
    cap: int = DEFAULT_CAP,
) -> HoleSchedule:
    """Search the smallest d_k, then the smallest m_k (n_k = k m_k), whose
    exact certificate ledger passes, stage by stage.

    ``witness_stages`` lists stages whose prescribed non-realizability witness
    must additionally be strict (default stage 1; pass ``()`` for the bare
    ledger minimum).  ``omega`` optionally forces n_k past every m with
    ``omega(m) >= 1/(2 d_1 ... d_k)``.  The final stage's exponential segment
    is certified on a prefix of length ``tail_factor * d_K n_K`` (recorded per
    constraint in the ledger), and increasing/submultiplicative sweeps run to
    ``sweep_cap``.

    Raises :class:`BudgetExceededError` when no m_k under ``m_search_cap``
    passes.
    """
    if k_max < 1:
        raise ValueError("need at least one stage")
    if d1 <= 2:
        raise ValueError(f"d_1 must exceed 2, got {d1}")
    omega_fn = _omega_fn(omega) if omega is not None else None
    omega_support = sorted(omega.keys()) if isinstance(omega, Mapping) else None

    d: list[int] = []
    n: list[int] = []
    full_ledger: dict[str, LedgerEntry] = {}
    for k in range(1, k_max + 1):
        dk = d1 if k == 1 else _structural_d_min(d, n, k)
        d.append(dk)
        m_lo = _structural_m_min(d, n, k)
        if omega_fn is not None:
            den = 2
            for di in d:
                den *= di
            bound = Fraction(1, den)
            if omega_support is not None:
                past = [m for m in omega_support if omega_fn(m) >= bound]
                if past:
                    m_lo = max(m_lo, -(-(past[-1] + 1) // k))
            else:
                raise ValueError("omega hints require a finite table")
        found = None
        for m_k in range(m_lo, m_search_cap + 1):
            n_cand = n + [k * m_k]
            try:
                trial = HoleSchedule(d=tuple(d), n=tuple(n_cand))
            except ValueError:
                continue
            h = HoleFn(trial, cap=cap)
            exp_end = min(cap, tail_factor * d[k - 1] * n_cand[k - 1])
            ledger = _stage_checks(h, k, exp_end)
            if k > 1:
                # previous stage's exponential segment now ends at n_k:
                # re-certify it on the full closed range
                prev = _stage_checks(h, k - 1, n_cand[k - 1])
                ledger.update({name: entry for name, entry in prev.items()
                               if name.startswith(("condition_i", "ratio_bound",
                                                   "derivative_floor"))})
            if not all(e.passed for e in ledger.values()):
                continue
            if k in witness_stages:
                try:
                    w = find_nonrealizability_witness(h, k)
                except (ValueError, DomainOverflowError):
                    continue
                if w is None:
                    continue
                ledger[f"witness_stage{k}"] = LedgerEntry(2 * k * w.D * w.n, True)
            found = (m_k, ledger)
            break
        if found is None:
            raise BudgetExceededError(
                f"no admissible m_{k} up to {m_search_cap} for d_{k}={dk}")
        m_k, stage_ledger = found
        n.append(k * m_k)
        if k == 1:
            full_ledger: dict[str, LedgerEntry] = {}
        full_ledger.update(stage_ledger)

    schedule = HoleSchedule(d=tuple(d), n=tuple(n), ledger=full_ledger)
    h = HoleFn(schedule, cap=cap)
    horizon = min(cap, tail_factor * d[-1] * n[-1])
    sweep_to = min(horizon, sweep_cap)
    inc = seqfn.check_increasing(h.fn, horizon)
    schedule.ledger["increasing"] = LedgerEntry(horizon, inc.passed)
    sub = seqfn.check_submultiplicative(h.fn, sweep_to)
    schedule.ledger["submultiplicative"] = LedgerEntry(sweep_to, sub.passed)
    if not (inc.passed and sub.passed):
        raise AssertionError(f"built schedule failed its own sweeps: {schedule.to_json()}")
    return schedule


# -- packaged default ---------------------------------------------------------

def default_schedule() -> HoleSchedule:
    """The shipped two-stage schedule (d_1 = 3, strict stage-1 witness)."""
    from importlib.resources import files

    text = files("growth_forge.data").joinpath("hole_schedule_default.json").read_text()
    return HoleSchedule.from_json(text)
