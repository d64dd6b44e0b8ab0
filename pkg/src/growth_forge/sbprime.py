"""Stagewise word-set construction realizing a target growth profile inside a
recurrent (prime) hereditary language, together with its exact bookkeeping.

Given a nondecreasing target ``f`` with ``f(2^(n+1)) <= f(2^n)^2``, the
construction maintains, per stage n:

* ``W(2^n)``   -- words of length 2^n, with ``W(2^(n+1)) = W(2^n) C(2^n)``,
* ``C(2^n)``   -- a chosen subset of W(2^n) of size ``c_(2^n)``, required to
  contain a word with the current queue front ``u_1`` as a prefix,
* ``U``        -- the service queue: after choosing C, all of W(2^(n+1)) is
  appended and ``u_1`` is erased.

The c-sequence tracks ``f`` within the factor-4 envelope
``f(2^(n+1)) <= f(1) c_1 ... c_(2^n) <= 4 f(2^(n+1))`` (checked exactly at
every stage), and the queue discipline is what makes every word recurrent.

Factor enumeration uses the dyadic window identity: every factor of length
<= 2^m of the limit set of infinite words is a window of
``W(2^m)C(2^m) + C(2^m)W(2^m)``; per length the smallest adequate scale is
used, falling back to the deepest computed stage for lengths up to twice its
block size.
"""

from __future__ import annotations

import random
from collections import Counter
from dataclasses import dataclass, field, replace
from string import ascii_letters, digits
from typing import Optional, Sequence

from .errors import BudgetExceededError
from .seqfn import CheckReport, GrowthFn, growth_from_table

DEFAULT_BYTE_BUDGET = 1 << 26
_LETTERS = digits + ascii_letters


@dataclass(frozen=True)
class SBTarget:
    """Target profile; only values at 1, 2 and the powers of two are read."""

    fn: GrowthFn

    def __call__(self, n: int) -> int:
        return self.fn(n)

    def validate(self, stages: int) -> CheckReport:
        """f nondecreasing on the read points and f(2^(n+1)) <= f(2^n)^2."""
        points = [1, 2] + [1 << j for j in range(1, stages + 1)]
        prev = None
        for p in points:
            v = self.fn(p)
            if prev is not None and v < prev:
                return CheckReport("sb_target", 1, 1 << stages, False,
                                   counterexample=(p, prev, v),
                                   note="target decreases")
            prev = v
        for j in range(stages):
            a, b = self.fn(1 << j), self.fn(1 << (j + 1))
            if b > a * a:
                return CheckReport("sb_target", 1, 1 << stages, False,
                                   counterexample=(j, b, a * a),
                                   note="doubling hypothesis violated")
        return CheckReport("sb_target", 1, 1 << stages, True)


def builtin_target(name: str) -> SBTarget:
    """Named targets: ``square`` is (n+1)^2, ``npow:k`` is (n+1)^k."""
    if name == "square":
        return SBTarget(GrowthFn(lambda n: (n + 1) ** 2, name="square"))
    if name.startswith("npow:"):
        k = int(name.split(":", 1)[1])
        if k < 1:
            raise ValueError("npow exponent must be positive")
        return SBTarget(GrowthFn(lambda n: (n + 1) ** k, name=name))
    raise ValueError(f"unknown builtin target {name!r}")


def c_sequence(target: SBTarget, stages: int) -> tuple[list[int], CheckReport]:
    """c_1, c_2, c_4, ..., c_(2^(stages-1)) with the exact envelope check
    f(2^(n+1)) <= f(1) c_1 ... c_(2^n) <= 4 f(2^(n+1)) at every stage."""
    tv = target.validate(stages)
    if not tv.passed:
        return [], tv
    f = target.fn
    cs = [-(-f(2) // f(1))]
    product = f(1) * cs[0]
    for n in range(1, stages):
        lo, hi = f(1 << n), f(1 << (n + 1))
        c = -(-hi // lo) if product < 2 * lo else hi // lo
        cs.append(c)
        product *= c
        if not (hi <= product <= 4 * hi):
            return cs, CheckReport("c_sequence_envelope", 0, stages - 1, False,
                                   counterexample=(n, product, (hi, 4 * hi)))
    # stage-0 part of the envelope: f(2) <= f(1) c_1 <= 4 f(2)
    if not (f(2) <= f(1) * cs[0] <= 4 * f(2)):
        return cs, CheckReport("c_sequence_envelope", 0, stages - 1, False,
                               counterexample=(0, f(1) * cs[0], (f(2), 4 * f(2))))
    return cs, CheckReport("c_sequence_envelope", 0, stages - 1, True)


@dataclass(frozen=True)
class Erasure:
    word: str
    appended_stage: int
    erased_stage: int


@dataclass(frozen=True)
class SBState:
    """Immutable snapshot after ``stage`` advancement steps.

    ``words`` is W(2^stage); ``history[j]`` is W(2^j) and ``chosen[j]`` is
    C(2^j) for j < stage.  The queue holds (word, appended_stage) pairs.
    """

    target: SBTarget
    letters: str
    stage: int
    words: tuple[str, ...]
    history: tuple[tuple[str, ...], ...]
    chosen: tuple[tuple[str, ...], ...]
    queue: tuple[tuple[str, int], ...]
    erasures: tuple[Erasure, ...]
    c_values: tuple[int, ...]
    seed: Optional[int] = None
    byte_budget: int = DEFAULT_BYTE_BUDGET


def initial_state(target: SBTarget, *, seed: Optional[int] = None,
                  byte_budget: int = DEFAULT_BYTE_BUDGET) -> SBState:
    size = target(1)
    if size < 2 or size > len(_LETTERS):
        raise ValueError(f"alphabet size f(1)={size} out of supported range")
    letters = _LETTERS[:size]
    w1 = tuple(letters)
    return SBState(target=target, letters=letters, stage=0, words=w1,
                   history=(), chosen=(),
                   queue=tuple((w, 0) for w in w1), erasures=(),
                   c_values=(), seed=seed, byte_budget=byte_budget)


def _choose_subset(words: Sequence[str], size: int, u1: str,
                   rng: Optional[random.Random]) -> tuple[str, ...]:
    """The mandated u1-prefixed word plus enough others: lexicographically
    least by default, seeded-random when a generator is supplied."""
    prefixed = sorted(w for w in words if w.startswith(u1))
    if not prefixed:
        raise AssertionError(f"no word extends the queue front {u1!r}")
    first = prefixed[0] if rng is None else rng.choice(prefixed)
    rest = sorted(w for w in words if w != first)
    if rng is not None:
        rest = rng.sample(rest, size - 1)
    return tuple(sorted([first] + rest[: size - 1]))


def advance_stage(state: SBState) -> SBState:
    """Choose C(2^stage), form W(2^(stage+1)), and service the queue front."""
    n = state.stage
    f = state.target
    cs, envelope = c_sequence(state.target, n + 1)
    if not envelope.passed:
        raise ValueError(f"target violates construction hypotheses: {envelope.note}")
    c = cs[n]
    if c > len(state.words):
        raise AssertionError(f"c_(2^{n})={c} exceeds |W|={len(state.words)}")
    next_size = len(state.words) * c * (2 << n)
    if next_size > state.byte_budget:
        raise BudgetExceededError(
            f"stage {n + 1} would materialize ~{next_size} bytes "
            f"(budget {state.byte_budget})")
    rng = random.Random(f"{state.seed}:{n}") if state.seed is not None else None
    u1, appended = state.queue[0]
    chosen = _choose_subset(state.words, c, u1, rng)
    new_words = tuple(w + ext for w in state.words for ext in chosen)
    queue = state.queue[1:] + tuple((w, n + 1) for w in new_words)
    erasure = Erasure(word=u1, appended_stage=appended, erased_stage=n)
    return replace(
        state,
        stage=n + 1,
        words=new_words,
        history=state.history + (state.words,),
        chosen=state.chosen + (chosen,),
        queue=queue,
        erasures=state.erasures + (erasure,),
        c_values=tuple(cs),
    )


def run_stages(target: SBTarget, stages: int, **kw) -> SBState:
    state = initial_state(target, **kw)
    for _ in range(stages):
        state = advance_stage(state)
    return state


@dataclass(frozen=True)
class FactorTable:
    """Per-length factor sets.

    Lengths up to ``exact_to`` (the deepest computed block size) enumerate the
    construction's factors exactly via the dyadic window identity; longer
    lengths, up to twice that, are windows of the deepest string family and
    may omit factors that straddle three blocks.
    """

    by_length: dict[int, frozenset[str]]
    max_length: int
    exact_to: int

    def count(self, length: int) -> int:
        return len(self.by_length.get(length, ()))

    def counts(self) -> list[int]:
        return [0] + [self.count(l) for l in range(1, self.max_length + 1)]


def _scale_strings(state: SBState, m: int) -> list[str]:
    """The window source at scale m: W(2^m)C(2^m) and C(2^m)W(2^m)."""
    w = state.history[m] if m < len(state.history) else state.words
    c = state.chosen[m]
    out = {a + b for a in w for b in c}
    out.update(b + a for a in w for b in c)
    return sorted(out)


def factors(state: SBState, max_length: int) -> FactorTable:
    """All factors of length <= max_length via dyadic windows.

    Per length the scale is the smallest stage whose block covers it, capped
    at the deepest chosen stage; lengths up to twice the deepest block are
    reachable, anything longer raises (insufficient stages).
    """
    deepest = len(state.chosen) - 1
    if deepest < 0 or max_length > 2 << deepest:
        raise BudgetExceededError(
            f"factors to length {max_length} need more stages "
            f"(deepest computed scale covers {2 << deepest if deepest >= 0 else 0})")
    strings: dict[int, list[str]] = {}
    table: dict[int, frozenset[str]] = {}
    for length in range(1, max_length + 1):
        m = min(deepest, max(0, (length - 1).bit_length()))
        if m not in strings:
            strings[m] = _scale_strings(state, m)
        seen: set[str] = set()
        for s in strings[m]:
            for i in range(len(s) - length + 1):
                seen.add(s[i: i + length])
        table[length] = frozenset(seen)
    return FactorTable(by_length=table, max_length=max_length,
                       exact_to=min(max_length, 1 << deepest))


def brute_force_window_factors(state: SBState, max_length: int) -> dict[int, set[str]]:
    """Independent oracle: materialize every window-source concatenation
    explicitly and extract subwords naively at the per-length scale."""
    deepest = len(state.chosen) - 1
    out: dict[int, set[str]] = {}
    for length in range(1, max_length + 1):
        m = min(deepest, max(0, (length - 1).bit_length()))
        w = state.history[m] if m < len(state.history) else state.words
        c = state.chosen[m]
        pool = [a + b for a in w for b in c] + [b + a for a in w for b in c]
        seen: set[str] = set()
        for s in pool:
            for i in range(len(s) - length + 1):
                seen.add(s[i: i + length])
        out[length] = seen
    return out


def gamma_s(table: FactorTable, target: SBTarget) -> tuple[GrowthFn, list[CheckReport]]:
    """Cumulative factor counts as a GrowthFn plus the exact envelope checks:

    * gamma' is nondecreasing on the exactly-enumerated range,
    * f(n) <= gamma'(2n) for 2n in range,
    * gamma'(n) <= 64 n f(4n) and gamma(n) <= 64 n^2 f(4n).

    Monotonicity is asserted only up to ``table.exact_to``: beyond it the
    table counts windows of a fixed finite string family, which necessarily
    decline near the family's string length.
    """
    counts = table.counts()
    L = table.max_length
    cumulative = [1]
    for length in range(1, L + 1):
        cumulative.append(cumulative[-1] + counts[length])
    fn = growth_from_table(cumulative[1:], name="gamma_S")
    reports = []

    mono_to = table.exact_to
    bad = next((l for l in range(2, mono_to + 1) if counts[l] < counts[l - 1]), None)
    reports.append(CheckReport("gammaprime_nondecreasing", 1, mono_to, bad is None,
                               counterexample=None if bad is None else
                               (bad, counts[bad - 1], counts[bad])))

    f = target.fn
    bad = next((n for n in range(1, L // 2 + 1) if f(n) > counts[2 * n]), None)
    reports.append(CheckReport("target_below_gammaprime", 1, L // 2, bad is None,
                               counterexample=None if bad is None else
                               (bad, f(bad), counts[2 * bad])))

    bad = next((n for n in range(1, L + 1) if counts[n] > 64 * n * f(4 * n)), None)
    reports.append(CheckReport("gammaprime_upper", 1, L, bad is None,
                               counterexample=None if bad is None else
                               (bad, counts[bad], 64 * bad * f(4 * bad))))

    bad = next((n for n in range(1, L + 1)
                if cumulative[n] > 64 * n * n * f(4 * n)), None)
    reports.append(CheckReport("gamma_upper", 1, L, bad is None,
                               counterexample=None if bad is None else
                               (bad, cumulative[bad], 64 * bad * bad * f(4 * bad))))
    return fn, reports


def check_recurrence(state: SBState, horizon: Optional[int] = None) -> CheckReport:
    """Every word erased from the queue within the horizon must prefix some
    member of the stage's chosen subset; reports the time-in-queue histogram."""
    horizon = state.stage if horizon is None else horizon
    if horizon > state.stage:
        raise ValueError(f"horizon {horizon} exceeds computed stages {state.stage}")
    latencies = Counter()
    for er in state.erasures[:horizon]:
        serviced = any(w.startswith(er.word) for w in state.chosen[er.erased_stage])
        if not serviced:
            return CheckReport("queue_recurrence", 0, horizon, False,
                               counterexample=(er.erased_stage, er.word,
                                               state.chosen[er.erased_stage]))
        latencies[er.erased_stage - er.appended_stage] += 1
    note = "stage latencies " + str(sorted(latencies.items()))
    return CheckReport("queue_recurrence", 0, horizon, True, note=note)


def finite_irreducibility(table: FactorTable, max_total: int,
                          pair_len: Optional[int] = None) -> CheckReport:
    """For every pair of stored factors u, v of length <= pair_len (default
    max_total // 4) some stored factor of length <= max_total must equal
    u w v for some (possibly empty) w.

    This is the bounded-window shadow of the recurrence mechanism; the note
    records the covered fraction, since connectives in this construction grow
    with the queue-service stage and bounded windows can only certify a part.
    """
    pair_len = max_total // 4 if pair_len is None else pair_len
    short = [w for l in range(1, pair_len + 1) for w in table.by_length.get(l, ())]
    covered: set[tuple[str, str]] = set()
    for l in range(1, max_total + 1):
        for s in table.by_length.get(l, ()):
            top_u = min(pair_len, l)
            for i in range(1, top_u + 1):
                u = s[:i]
                for j in range(1, min(pair_len, l - i) + 1):
                    covered.add((u, s[-j:]))
    missing = [(u, v) for u in short for v in short if (u, v) not in covered]
    total = len(short) ** 2
    note = (f"{total - len(missing)}/{total} pairs of length <= {pair_len} "
            f"covered within length {max_total}")
    if missing:
        return CheckReport("finite_irreducibility", 1, max_total, False,
                           counterexample=missing[0], note=note)
    return CheckReport("finite_irreducibility", 1, max_total, True, note=note)
