"""Command-line front door.

Subcommands map onto the library modules:

* ``hole {build,eval,witness,dominates}`` -- schedule construction and its
  certificates,
* ``bz {eval,validate,aux,refute}``       -- derivative-squaring recurrences,
* ``sb run``                              -- the stagewise word-set construction,
* ``lang {count,check}``                  -- forbidden-factor languages,
* ``fn check``                            -- the generic check suite on a CSV table.

Every command writes a deterministic JSON report (stdout or ``--report``);
table-producing commands optionally emit ``n,value`` CSV and a bit-length
figure next to it.  Exit codes: 0 all checks passed, 1 a check failed (its
counterexample is in the report), 2 budget or cap exceeded, 64 usage error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Optional

from . import bzfn, holefn, langgrowth, sbprime, seqfn
from .errors import BudgetExceededError, DomainOverflowError

USAGE_EXIT = 64
CHECK_FAILED_EXIT = 1
BUDGET_EXIT = 2


@dataclass
class RunConfig:
    command: str
    args: argparse.Namespace
    cap: int
    jobs: int = 1
    seed: int = 0
    reports: list = field(default_factory=list)
    artifacts: dict = field(default_factory=dict)

    def record(self, report) -> None:
        self.reports.append(report)

    def verdict(self) -> bool:
        return all(r.passed for r in self.reports)

    def emit(self) -> int:
        payload = {
            "command": self.command,
            "cap": self.cap,
            "seed": self.seed,
            "reports": [r.as_dict() for r in self.reports],
            "artifacts": self.artifacts,
            "verdict": "pass" if self.verdict() else "fail",
        }
        text = json.dumps(payload, indent=2, sort_keys=True, default=str) + "\n"
        out = getattr(self.args, "report", None)
        if out:
            Path(out).write_text(text)
        else:
            sys.stdout.write(text)
        return 0 if self.verdict() else CHECK_FAILED_EXIT


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        sys.stderr.write(f"{self.prog}: error: {message}\n")
        raise SystemExit(USAGE_EXIT)


def _resolve_cap(args) -> int:
    if getattr(args, "cap", None):
        return args.cap
    env = os.environ.get("GROWTH_FORGE_CAP")
    return int(env) if env else holefn.DEFAULT_CAP


def _load_hole(args, cap) -> holefn.HoleFn:
    if getattr(args, "schedule", None):
        sched = holefn.HoleSchedule.from_json(Path(args.schedule).read_text())
    else:
        sched = holefn.default_schedule()
    return holefn.HoleFn(sched, cap=cap)


def _parse_omega(text: str):
    if "/" in text and not Path(text).exists():
        num, den = text.split("/")
        return Fraction(int(num), int(den))
    if Path(text).exists():
        table = {}
        with open(text) as fh:
            for line in fh:
                line = line.strip()
                if not line or line.startswith("m,"):
                    continue
                m, val = line.split(",")
                table[int(m)] = Fraction(val)
        return table
    return Fraction(text)


def _maybe_plot(args, xs, values, title):
    plot = getattr(args, "plot", None)
    if plot:
        from .plotting import save_bitlength_plot

        save_bitlength_plot(plot, xs, values, title=title)
        return str(plot)
    return None


# -- hole ----------------------------------------------------------------------

def _cmd_hole_build(cfg: RunConfig) -> int:
    a = cfg.args
    omega = _parse_omega(a.omega) if a.omega else None
    sched = holefn.build_schedule(
        a.k, a.d1, omega,
        witness_stages=() if a.no_witness else (1,),
        m_search_cap=a.m_cap, cap=cfg.cap)
    text = sched.to_json()
    if a.out:
        Path(a.out).write_text(text)
        cfg.artifacts["schedule"] = str(a.out)
    else:
        sys.stdout.write(text)
    ok = all(e.passed for e in sched.ledger.values())
    return 0 if ok else CHECK_FAILED_EXIT


def _cmd_hole_eval(cfg: RunConfig) -> int:
    a = cfg.args
    h = _load_hole(cfg.args, cfg.cap)
    if a.x is not None:
        value = holefn.eval_hole(h, a.x)
        cfg.artifacts["value"] = {"x": a.x, "decimal": str(value),
                                  "bits": value.bit_length()}
        return cfg.emit()
    upto = a.upto or min(h.schedule.d[-1] * h.schedule.n[-1], cfg.cap)
    values = [h(x) for x in range(1, upto + 1)]
    if a.csv:
        seqfn.write_csv(h.fn, upto, a.csv)
        cfg.artifacts["csv"] = str(a.csv)
    plotted = _maybe_plot(a, range(1, upto + 1), values,
                          f"piecewise growth, stages {h.schedule.n}")
    if plotted:
        cfg.artifacts["plot"] = plotted
    return cfg.emit()


def _cmd_hole_witness(cfg: RunConfig) -> int:
    a = cfg.args
    h = _load_hole(a, cfg.cap)
    witness = holefn.find_nonrealizability_witness(h, a.C)
    if witness is None and a.grid:
        lo, hi = (int(x) for x in a.grid.split(":"))
        witness = holefn.grid_search_witness(h, a.C, range(lo, hi + 1))
    payload = {
        "command": "hole witness", "C": a.C,
        "witness": witness.as_dict() if witness else None,
    }
    text = json.dumps(payload, indent=2, sort_keys=True) + "\n"
    if getattr(a, "report", None):
        Path(a.report).write_text(text)
    else:
        sys.stdout.write(text)
    return 0 if witness is not None else CHECK_FAILED_EXIT


def _cmd_hole_dominates(cfg: RunConfig) -> int:
    a = cfg.args
    h = _load_hole(a, cfg.cap)
    omega = _parse_omega(a.omega)
    n_max = a.N or h.schedule.d[0] * h.schedule.n[0]
    cfg.record(holefn.check_dominates(h, omega, n_max))
    return cfg.emit()


# -- bz ------------------------------------------------------------------------

def _bz_schedule(a) -> bzfn.BZSchedule:
    return bzfn.BZSchedule.parse(a.schedule)


def _cmd_bz_eval(cfg: RunConfig) -> int:
    a = cfg.args
    s = _bz_schedule(a)
    if a.out:
        bzfn.write_table_csv(s, a.upto, a.out, cap=cfg.cap)
        cfg.artifacts["csv"] = str(a.out)
    if a.plot:
        values = [v for _, _, v in bzfn.stream(s, a.upto, cfg.cap)]
        cfg.artifacts["plot"] = _maybe_plot(a, range(1, a.upto + 1), values,
                                            f"derivative-squaring growth {s.n}")
    if not a.out and not a.plot:
        value = bzfn.eval_bz(s, a.upto, cap=cfg.cap)
        cfg.artifacts["value"] = {"k": a.upto, "decimal": str(value),
                                  "bits": value.bit_length()}
    return cfg.emit()


def _cmd_bz_validate(cfg: RunConfig) -> int:
    cfg.record(bzfn.validate_bz(_bz_schedule(cfg.args)))
    return cfg.emit()


def _cmd_bz_aux(cfg: RunConfig) -> int:
    cfg.record(bzfn.check_aux(_bz_schedule(cfg.args), cfg.args.i, cap=cfg.cap))
    return cfg.emit()


def _cmd_bz_refute(cfg: RunConfig) -> int:
    a = cfg.args
    outcome = bzfn.refute_condition2(_bz_schedule(a), a.C, a.imax, cap=cfg.cap)
    payload = {"command": "bz refute", "C": a.C, **outcome.as_dict()}
    text = json.dumps(payload, indent=2, sort_keys=True) + "\n"
    target = a.json_out or getattr(a, "report", None)
    if target:
        Path(target).write_text(text)
    else:
        sys.stdout.write(text)
    if outcome.witness is not None:
        return 0
    return BUDGET_EXIT if outcome.overflowed and not outcome.evaluated else CHECK_FAILED_EXIT


# -- sb ------------------------------------------------------------------------

def _cmd_sb_run(cfg: RunConfig) -> int:
    a = cfg.args
    if a.f in ("square",) or a.f.startswith("npow:"):
        target = sbprime.builtin_target(a.f)
    else:
        target = sbprime.SBTarget(seqfn.read_csv(a.f))
    seed = a.seed if a.random_choice else None
    state = sbprime.run_stages(target, a.stages, seed=seed,
                               byte_budget=a.byte_budget)
    _, envelope = sbprime.c_sequence(target, a.stages)
    cfg.record(envelope)
    cfg.record(sbprime.check_recurrence(state))
    table = sbprime.factors(state, a.L)
    fn, reports = sbprime.gamma_s(table, target)
    for r in reports:
        cfg.record(r)
    cfg.record(sbprime.finite_irreducibility(table, min(a.L, 16)))
    counts = table.counts()
    cfg.artifacts["gamma_prime"] = counts[1:]
    cfg.artifacts["c_values"] = list(state.c_values)
    if a.plot:
        from .plotting import save_count_plot

        save_count_plot(a.plot, range(1, a.L + 1),
                        {"factors per length": counts[1:]},
                        title=f"factor counts, target {a.f}")
        cfg.artifacts["plot"] = str(a.plot)
    return cfg.emit()


# -- lang ----------------------------------------------------------------------

def _lang_spec(a) -> langgrowth.LangSpec:
    path = Path(a.spec)
    if not path.exists():
        raise _Usage(f"language spec file not found: {a.spec}")
    return langgrowth.LangSpec.from_json(path.read_text())


class _Usage(Exception):
    pass


def _cmd_lang_count(cfg: RunConfig) -> int:
    a = cfg.args
    auto = langgrowth.build_automaton(_lang_spec(a))
    if a.weights:
        weights = [int(x) for x in a.weights.split(",")]
        cumulative = langgrowth.weighted_count(auto, weights, a.upto)
        cfg.artifacts["weighted_gamma"] = cumulative
        rows = list(enumerate(cumulative))[1:]
    else:
        gamma_prime, gamma = langgrowth.count_words(auto, a.upto)
        cfg.artifacts["gamma_prime"] = gamma_prime[1:]
        cfg.artifacts["gamma"] = gamma
        rows = [(n, gamma[n]) for n in range(1, a.upto + 1)]
    if a.csv:
        import csv as _csv

        with open(a.csv, "w", newline="") as fh:
            w = _csv.writer(fh)
            w.writerow(["n", "value"])
            w.writerows(rows)
        cfg.artifacts["csv"] = str(a.csv)
    if a.plot:
        from .plotting import save_count_plot

        save_count_plot(a.plot, [n for n, _ in rows],
                        {"cumulative": [v for _, v in rows]},
                        title=f"language growth {auto.spec.forbidden}")
        cfg.artifacts["plot"] = str(a.plot)
    return cfg.emit()


def _cmd_lang_check(cfg: RunConfig) -> int:
    a = cfg.args
    auto = langgrowth.build_automaton(_lang_spec(a))
    if a.check == "prolongable":
        res = langgrowth.check_prolongable(auto)
        cfg.record(seqfn.CheckReport("prolongable", 1, auto.n_states, res.ok,
                                     counterexample=None if res.ok else
                                     (res.side, res.witness)))
    else:
        res = langgrowth.check_irreducible(auto)
        cfg.record(seqfn.CheckReport("irreducible", 1, auto.n_states, res.ok,
                                     counterexample=res.witness))
    return cfg.emit()


# -- fn ------------------------------------------------------------------------

def _cmd_fn_check(cfg: RunConfig) -> int:
    a = cfg.args
    f = seqfn.read_csv(a.table)
    n_max = min(a.N, f.cap) if a.N else f.cap
    cfg.record(seqfn.check_increasing(f, n_max))
    cfg.record(seqfn.check_submultiplicative(f, n_max, jobs=cfg.jobs))
    cfg.record(seqfn.check_derivative_lb(f, n_max))
    cfg.record(seqfn.check_bz_condition(f, n_max, 2))
    cfg.record(seqfn.check_convexity_bounds(f, n_max))
    return cfg.emit()


# -- wiring ---------------------------------------------------------------------

def _build_parser() -> _Parser:
    parser = _Parser(prog="growth-forge",
                     description="exact growth-function toolkit")
    parser.add_argument("--cap", type=int, default=None,
                        help="evaluation cap (default env GROWTH_FORGE_CAP or 2^20)")
    parser.add_argument("--jobs", type=int, default=1,
                        help="worker processes for shardable sweeps")
    parser.add_argument("--seed", type=int, default=0,
                        help="seed echoed into reports; randomized modes derive from it")
    sub = parser.add_subparsers(dest="command", required=True)

    hole = sub.add_parser("hole").add_subparsers(dest="sub", required=True)
    b = hole.add_parser("build")
    b.add_argument("--k", type=int, required=True)
    b.add_argument("--d1", type=int, default=3)
    b.add_argument("--omega", default=None)
    b.add_argument("--no-witness", action="store_true",
                   help="bare certificate-ledger minimum, no witness requirement")
    b.add_argument("--m-cap", type=int, default=4096)
    b.add_argument("--out", default=None)
    e = hole.add_parser("eval")
    e.add_argument("--schedule", default=None)
    e.add_argument("--x", type=int, default=None)
    e.add_argument("--upto", type=int, default=None)
    e.add_argument("--csv", default=None)
    e.add_argument("--plot", default=None)
    e.add_argument("--report", default=None)
    w = hole.add_parser("witness")
    w.add_argument("--schedule", default=None)
    w.add_argument("--C", type=int, required=True)
    w.add_argument("--grid", default=None, help="widen: n range LO:HI")
    w.add_argument("--report", default=None)
    d = hole.add_parser("dominates")
    d.add_argument("--schedule", default=None)
    d.add_argument("--omega", required=True, help="constant p/q or CSV table m,omega")
    d.add_argument("--N", type=int, default=None)
    d.add_argument("--report", default=None)

    bz = sub.add_parser("bz").add_subparsers(dest="sub", required=True)
    e = bz.add_parser("eval")
    e.add_argument("--schedule", required=True)
    e.add_argument("--upto", type=int, required=True)
    e.add_argument("--out", default=None)
    e.add_argument("--plot", default=None)
    e.add_argument("--report", default=None)
    v = bz.add_parser("validate")
    v.add_argument("--schedule", required=True)
    v.add_argument("--report", default=None)
    x = bz.add_parser("aux")
    x.add_argument("--schedule", required=True)
    x.add_argument("--i", type=int, required=True)
    x.add_argument("--report", default=None)
    r = bz.add_parser("refute")
    r.add_argument("--schedule", default="3,13")
    r.add_argument("--C", type=int, required=True)
    r.add_argument("--imax", type=int, default=1)
    r.add_argument("--json", dest="json_out", default=None,
                   help="write the witness JSON here instead of stdout")
    r.add_argument("--report", default=None)

    sb = sub.add_parser("sb").add_subparsers(dest="sub", required=True)
    s = sb.add_parser("run")
    s.add_argument("--f", required=True, help="builtin (square, npow:k) or CSV table")
    s.add_argument("--stages", type=int, required=True)
    s.add_argument("--L", type=int, required=True)
    s.add_argument("--report", default=None)
    s.add_argument("--random-choice", action="store_true")
    s.add_argument("--byte-budget", type=int, default=sbprime.DEFAULT_BYTE_BUDGET)
    s.add_argument("--plot", default=None)

    lang = sub.add_parser("lang").add_subparsers(dest="sub", required=True)
    c = lang.add_parser("count")
    c.add_argument("--spec", required=True)
    c.add_argument("--upto", type=int, required=True)
    c.add_argument("--csv", default=None)
    c.add_argument("--weights", default=None)
    c.add_argument("--plot", default=None)
    c.add_argument("--report", default=None)
    k = lang.add_parser("check")
    k.add_argument("--spec", required=True)
    k.add_argument("--check", choices=["prolongable", "irreducible"], required=True)
    k.add_argument("--report", default=None)

    fn = sub.add_parser("fn").add_subparsers(dest="sub", required=True)
    f = fn.add_parser("check")
    f.add_argument("--table", required=True)
    f.add_argument("--N", type=int, default=None)
    f.add_argument("--report", default=None)

    return parser


_DISPATCH = {
    ("hole", "build"): _cmd_hole_build,
    ("hole", "eval"): _cmd_hole_eval,
    ("hole", "witness"): _cmd_hole_witness,
    ("hole", "dominates"): _cmd_hole_dominates,
    ("bz", "eval"): _cmd_bz_eval,
    ("bz", "validate"): _cmd_bz_validate,
    ("bz", "aux"): _cmd_bz_aux,
    ("bz", "refute"): _cmd_bz_refute,
    ("sb", "run"): _cmd_sb_run,
    ("lang", "count"): _cmd_lang_count,
    ("lang", "check"): _cmd_lang_check,
    ("fn", "check"): _cmd_fn_check,
}


def run(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else USAGE_EXIT
    cfg = RunConfig(command=f"{args.command} {args.sub}", args=args,
                    cap=_resolve_cap(args), jobs=args.jobs, seed=args.seed)
    handler = _DISPATCH[(args.command, args.sub)]
    try:
        return handler(cfg)
    except _Usage as exc:
        sys.stderr.write(f"growth-forge: error: {exc}\n")
        return USAGE_EXIT
    except FileNotFoundError as exc:
        sys.stderr.write(f"growth-forge: error: {exc}\n")
        return USAGE_EXIT
    except (DomainOverflowError, BudgetExceededError) as exc:
        sys.stderr.write(f"growth-forge: budget: {exc}\n")
        return BUDGET_EXIT
    except ValueError as exc:
        sys.stderr.write(f"growth-forge: error: {exc}\n")
        return USAGE_EXIT


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
