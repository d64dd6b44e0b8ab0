"""Hereditary-language engine: forbidden-factor automata, exact growth
counting (plain and weighted), and prolongability / irreducibility decisions.

Words are strings of digit characters '0'..'9' over an alphabet of size d
(letter i is ``str(i)``).  A word belongs to the language iff it contains no
forbidden factor; the language is hereditary (factor-closed) by construction.

The automaton is the standard Aho-Corasick factor automaton: states are proper
prefixes of the reduced forbidden set plus one absorbing dead state, and a run
is alive iff no suffix of the input read so far is forbidden.
"""

from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass
from typing import Optional, Sequence

from .errors import BudgetExceededError
from .seqfn import GrowthFn

DEFAULT_SUBSET_BUDGET = 1 << 16


def reduce_forbidden(words) -> tuple[str, ...]:
    """Antichain under the factor order: drop any word containing another."""
    uniq = sorted(set(words), key=lambda w: (len(w), w))
    kept: list[str] = []
    for w in uniq:
        if not any(shorter in w for shorter in kept):
            kept.append(w)
    return tuple(kept)


@dataclass(frozen=True)
class LangSpec:
    alphabet_size: int
    forbidden: tuple[str, ...]

    def __post_init__(self):
        if self.alphabet_size < 1:
            raise ValueError("alphabet must have at least one letter")
        if self.alphabet_size > 10:
            raise ValueError("letters are digit characters; alphabet size <= 10")
        object.__setattr__(self, "forbidden", reduce_forbidden(self.forbidden))
        for w in self.forbidden:
            if not w or any(not ("0" <= ch < str(self.alphabet_size)) for ch in w):
                if not all(ch.isdigit() and int(ch) < self.alphabet_size for ch in w):
                    raise ValueError(f"forbidden word {w!r} not over the alphabet")

    @classmethod
    def from_json(cls, obj) -> "LangSpec":
        if isinstance(obj, (str, bytes)):
            obj = json.loads(obj)
        return cls(alphabet_size=int(obj["alphabet"]),
                   forbidden=tuple(obj.get("forbidden", [])))

    def as_dict(self) -> dict:
        return {"alphabet": self.alphabet_size, "forbidden": list(self.forbidden)}


class LangAutomaton:
    """Deterministic complete factor automaton.

    ``trans[s][a]`` is the successor of state ``s`` on letter ``a``; state
    ``dead_state`` is absorbing and marks every word with a forbidden factor.
    ``live`` is the greatest fixpoint of "has a successor in the set": the
    states from which arbitrarily long live extension exists.
    """

    def __init__(self, spec: LangSpec, trans: list[list[int]], dead_state: int):
        self.spec = spec
        self.trans = trans
        self.dead_state = dead_state
        self.n_letters = spec.alphabet_size
        n = len(trans)
        self.reachable = self._reachable_set()
        self.live = self._live_set()
        self.n_states = n

    def _reachable_set(self) -> set[int]:
        seen = {0}
        frontier = deque([0])
        while frontier:
            s = frontier.popleft()
            for t in self.trans[s]:
                if t != self.dead_state and t not in seen:
                    seen.add(t)
                    frontier.append(t)
        return seen

    def _live_set(self) -> set[int]:
        alive = {s for s in range(len(self.trans)) if s != self.dead_state}
        while True:
            keep = {s for s in alive
                    if any(t in alive for t in self.trans[s])}
            if keep == alive:
                return keep
            alive = keep

    def run(self, word: str) -> int:
        """Final state after reading word from the root (dead is absorbing)."""
        s = 0
        for ch in word:
            s = self.trans[s][int(ch)]
            if s == self.dead_state:
                return s
        return s

    def accepts(self, word: str) -> bool:
        return self.run(word) != self.dead_state


def build_automaton(spec: LangSpec) -> LangAutomaton:
    """Aho-Corasick construction over the reduced forbidden set."""
    d = spec.alphabet_size
    goto: list[dict[int, int]] = [{}]
    depth_word: list[str] = [""]
    terminal: list[bool] = [False]
    for w in spec.forbidden:
        s = 0
        for ch in w:
            a = int(ch)
            if a not in goto[s]:
                goto.append({})
                depth_word.append(depth_word[s] + ch)
                terminal.append(False)
                goto[s][a] = len(goto) - 1
            s = goto[s][a]
        terminal[s] = True

    n = len(goto)
    fail = [0] * n
    order: list[int] = []
    queue = deque(goto[0].values())
    while queue:
        s = queue.popleft()
        order.append(s)
        for a, t in goto[s].items():
            queue.append(t)
            f = fail[s]
            while f and a not in goto[f]:
                f = fail[f]
            fail[t] = goto[f][a] if (a in goto[f] and goto[f][a] != t) else 0
            terminal[t] = terminal[t] or terminal[fail[t]]

    dead = n
    trans = [[0] * d for _ in range(n + 1)]
    trans[dead] = [dead] * d
    for s in [0] + order:
        for a in range(d):
            if terminal[s]:
                trans[s][a] = dead
                continue
            f = s
            while f and a not in goto[f]:
                f = fail[f]
            t = goto[f].get(a, 0)
            trans[s][a] = dead if terminal[t] else t
    if terminal[0]:
        # the empty word itself forbidden never happens (words are nonempty)
        raise ValueError("empty forbidden word")
    auto = LangAutomaton(spec, trans, dead)
    auto.state_word = depth_word  # path word per trie state, handy for witnesses
    return auto


def count_words(auto: LangAutomaton, n_max: int) -> tuple[list[int], list[int]]:
    """Exact counts via per-length transition of the state count vector.

    Returns ``(gamma_prime, gamma)`` where ``gamma_prime[n]`` (1-based) is the
    number of length-n words and ``gamma[n]`` the number of length <= n words
    counting the empty word (``gamma[0] == 1``).
    """
    dead = auto.dead_state
    vec = [0] * (auto.n_states)
    vec[0] = 1
    gamma_prime = [0] * (n_max + 1)
    gamma = [1] * (n_max + 1)
    total = 1
    for n in range(1, n_max + 1):
        nxt = [0] * auto.n_states
        for s, c in enumerate(vec):
            if c:
                for t in auto.trans[s]:
                    if t != dead:
                        nxt[t] += c
        vec = nxt
        gamma_prime[n] = sum(vec)
        total += gamma_prime[n]
        gamma[n] = total
    return gamma_prime, gamma


def growth_fn(auto: LangAutomaton, include_empty: bool = True,
              name: Optional[str] = None) -> GrowthFn:
    """Cumulative growth as a GrowthFn.

    With ``include_empty`` this is the growth function of the associated
    unital monomial algebra (value 1 at index 0); without it, the language
    growth over nonempty words (value 0 at index 0).
    """
    dead = auto.dead_state
    state = {"vec": None, "next_n": 1, "total": 1 if include_empty else 0}

    def rule(n: int) -> int:
        if state["vec"] is None:
            vec = [0] * auto.n_states
            vec[0] = 1
            state["vec"] = vec
        assert n == state["next_n"], "growth rule consulted out of order"
        vec = state["vec"]
        nxt = [0] * auto.n_states
        for s, c in enumerate(vec):
            if c:
                for t in auto.trans[s]:
                    if t != dead:
                        nxt[t] += c
        state["vec"] = nxt
        state["next_n"] = n + 1
        state["total"] += sum(nxt)
        return state["total"]

    label = name or f"gamma[{','.join(auto.spec.forbidden) or 'free'}]"
    return GrowthFn(rule, name=label, value_at_zero=1 if include_empty else 0)


def weighted_count(auto: LangAutomaton, weights: Sequence[int], n_max: int) -> list[int]:
    """Cumulative counts of nonempty live words of total letter weight <= n.

    ``weights[a]`` is the positive integer weight of letter ``a``.  Returned
    list is indexed by weight bound 0..n_max (entry 0 is 0: the empty word is
    not counted).
    """
    if len(weights) != auto.n_letters or any(w < 1 for w in weights):
        raise ValueError("need one positive weight per letter")
    dead = auto.dead_state
    # layer[w][s]: number of live words of total weight exactly w ending in s
    layers: list[list[int]] = [[0] * auto.n_states for _ in range(n_max + 1)]
    layers[0][0] = 1
    cumulative = [0] * (n_max + 1)
    running = 0
    for w in range(1, n_max + 1):
        layer = layers[w]
        for a in range(auto.n_letters):
            wa = weights[a]
            if wa > w:
                continue
            src = layers[w - wa]
            for s, c in enumerate(src):
                if c:
                    t = auto.trans[s][a]
                    if t != dead:
                        layer[t] += c
        running += sum(layer)
        cumulative[w] = running
    return cumulative


@dataclass
class SideResult:
    ok: bool
    witness: Optional[str] = None


@dataclass
class ProlongabilityResult:
    ok: bool
    witness: Optional[str] = None
    side: Optional[str] = None


def _word_to_state(auto: LangAutomaton, target: int) -> str:
    """Shortest live word reaching ``target`` (BFS from the root)."""
    if target == 0:
        return ""
    prev: dict[int, tuple[int, int]] = {0: (-1, -1)}
    queue = deque([0])
    while queue:
        s = queue.popleft()
        for a, t in enumerate(auto.trans[s]):
            if t != auto.dead_state and t not in prev:
                prev[t] = (s, a)
                if t == target:
                    out = []
                    cur = t
                    while cur != 0:
                        cur, letter = prev[cur]
                        out.append(str(letter))
                    return "".join(reversed(out))
                queue.append(t)
    raise ValueError(f"state {target} not reachable alive")


def right_prolongable(auto: LangAutomaton) -> SideResult:
    """Every word of the language extends by one letter on the right.

    The root carries the empty word, which is not a member of the language:
    an empty language is vacuously prolongable, and in a nonempty hereditary
    language the root always has a live successor anyway.
    """
    for s in sorted(auto.reachable - {0}):
        if all(t == auto.dead_state for t in auto.trans[s]):
            return SideResult(False, _word_to_state(auto, s))
    return SideResult(True)


def left_prolongable(auto: LangAutomaton) -> SideResult:
    reversed_spec = LangSpec(auto.spec.alphabet_size,
                             tuple(w[::-1] for w in auto.spec.forbidden))
    res = right_prolongable(build_automaton(reversed_spec))
    if res.ok:
        return res
    return SideResult(False, res.witness[::-1])


def check_prolongable(auto: LangAutomaton) -> ProlongabilityResult:
    """Two-sided prolongability: every word extends on the right and on the
    left; the witness is a non-extendable word for the failing side."""
    right = right_prolongable(auto)
    if not right.ok:
        return ProlongabilityResult(False, right.witness, "right")
    left = left_prolongable(auto)
    if not left.ok:
        return ProlongabilityResult(False, left.witness, "left")
    return ProlongabilityResult(True)


@dataclass
class IrreducibilityResult:
    ok: bool
    witness: Optional[tuple[str, str]] = None


def check_irreducible(auto: LangAutomaton,
                      subset_budget: int = DEFAULT_SUBSET_BUDGET) -> IrreducibilityResult:
    """Decide whether for all words u, v of the language some u w v belongs to it.

    For each word v let A(v) be the set of live states from which v reads
    alive.  The family {A(v)} is closed backwards under single-letter
    prepends, so its closure is computed as a fixpoint over the subset
    lattice, seeded by single letters.  The language is irreducible iff from
    every reachable live word-state some member of every minimal A(v) (with v
    in the language) is reachable.
    """
    dead = auto.dead_state
    nondead = [s for s in range(auto.n_states) if s != dead]

    def pre(letter: int, target: frozenset[int]) -> frozenset[int]:
        return frozenset(q for q in nondead if auto.trans[q][letter] in target)

    family: dict[frozenset[int], str] = {}
    queue: deque[frozenset[int]] = deque()
    for a in range(auto.n_letters):
        s = frozenset(q for q in nondead if auto.trans[q][a] != dead)
        if s and s not in family:
            family[s] = str(a)
            queue.append(s)
    while queue:
        cur = queue.popleft()
        for a in range(auto.n_letters):
            nxt = pre(a, cur)
            if nxt and nxt not in family:
                if len(family) >= subset_budget:
                    raise BudgetExceededError(
                        f"alive-reading subset family exceeded budget {subset_budget}")
                family[nxt] = str(a) + family[cur]
                queue.append(nxt)

    in_language = {s: w for s, w in family.items() if 0 in s}
    minimal = [s for s in in_language
               if not any(t < s for t in in_language)]

    reach: dict[int, frozenset[int]] = {}
    for p in auto.reachable:
        seen = {p}
        frontier = deque([p])
        while frontier:
            s = frontier.popleft()
            for t in auto.trans[s]:
                if t != dead and t not in seen:
                    seen.add(t)
                    frontier.append(t)
        reach[p] = frozenset(seen)

    for p in sorted(auto.reachable):
        for aset in minimal:
            if not (reach[p] & aset):
                return IrreducibilityResult(False,
                                            (_word_to_state(auto, p), in_language[aset]))
    return IrreducibilityResult(True)


def bergman_probe(auto: LangAutomaton, n_max: int) -> str:
    """Observational probe of the derivative gap on a finite range.

    Returns "constant" when the per-length counts are constant on the upper
    half of the range, "at-least-linear" when they stay >= n/4 there, and
    "inconclusive" otherwise.  A finite range can never refute the gap, so no
    refuting verdict exists.
    """
    gamma_prime, _ = count_words(auto, n_max)
    tail = gamma_prime[n_max // 2:]
    if all(v == tail[0] for v in tail):
        return "constant"
    if all(gamma_prime[n] * 4 >= n for n in range(n_max // 2, n_max + 1)):
        return "at-least-linear"
    return "inconclusive"


# Brute-force oracles (independent of the automaton; naive substring scans).

def brute_force_words(spec: LangSpec, n_max: int) -> list[list[str]]:
    """All language words grouped by length, by exhaustive extension."""
    letters = [str(a) for a in range(spec.alphabet_size)]

    def clean(w: str) -> bool:
        return not any(f in w for f in spec.forbidden)

    by_len: list[list[str]] = [[""]]
    for n in range(1, n_max + 1):
        cur = [w + a for w in by_len[n - 1] for a in letters if clean(w + a)]
        by_len.append(cur)
    return by_len


def enumerate_reduced_specs(alphabet_size: int = 2, max_words: int = 2,
                            max_len: int = 3) -> list[LangSpec]:
    """Every reduced forbidden set with at most ``max_words`` words of length
    at most ``max_len``, including the empty set."""
    letters = [str(a) for a in range(alphabet_size)]
    words: list[str] = []
    cur = [""]
    for _ in range(max_len):
        cur = [w + a for w in cur for a in letters]
        words.extend(cur)
    specs = [LangSpec(alphabet_size, ())]
    seen = {()}
    from itertools import combinations
    for k in range(1, max_words + 1):
        for combo in combinations(words, k):
            reduced = reduce_forbidden(combo)
            if len(reduced) == k and reduced not in seen:
                seen.add(reduced)
                specs.append(LangSpec(alphabet_size, reduced))
    return specs
