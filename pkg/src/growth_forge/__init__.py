"""growth-forge: exact-arithmetic toolkit for growth functions of hereditary
languages and their counterexample constructions."""

from .bzfn import BZSchedule, check_aux, eval_bz, refute_condition2, validate_bz
from .errors import BudgetExceededError, DomainOverflowError
from .exactnum import EQ, GT, LT, RatExp, cmp_pow2, floor_mul_pow2, iroot
from .holefn import (
    HoleFn,
    HoleSchedule,
    build_schedule,
    check_dominates,
    default_schedule,
    eval_hole,
    find_nonrealizability_witness,
    floor_geometric,
)
from .langgrowth import (
    LangAutomaton,
    LangSpec,
    build_automaton,
    check_irreducible,
    check_prolongable,
    count_words,
    weighted_count,
)
from .sbprime import SBTarget, advance_stage, c_sequence, check_recurrence, factors, gamma_s
from .seqfn import (
    CheckReport,
    Condition2Witness,
    GrowthFn,
    RealizabilityWitness,
    check_bz_condition,
    check_convexity_bounds,
    check_derivative_lb,
    check_equiv_witness,
    check_increasing,
    check_realizability_constraint,
    check_submultiplicative,
    derivative,
    integral,
    probe_condition2,
)

__version__ = "0.1.0"
