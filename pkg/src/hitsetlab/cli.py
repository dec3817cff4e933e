"""Command-line front end.

Subcommands: gen, solve, sweep, report, plotdata, conjecture, theory.
Exit codes: 0 success, 2 config or usage error, 3 infeasible instance,
4 resource guard tripped.
"""

from __future__ import annotations

import argparse
import dataclasses
import math
import sys
from typing import Optional

from . import experiments as ex
from . import instance as inst_mod
from . import ip as ip_mod
from . import lp as lp_mod
from . import theory as theory_mod
from ._rng import split_seed
from .greedy import block_greedy, block_greedy_best_of, build_schedule
from .greedy import greedy as greedy_solve
from .errors import (
    ConfigError,
    DegenerateError,
    DimensionOverflowError,
    DomainError,
    EmptyInputError,
    IndexOutOfRangeError,
    InfeasibleError,
    InvalidProbabilityError,
    ParseError,
    RegimeViolationError,
    TooLargeError,
)

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_INFEASIBLE = 3
EXIT_GUARD = 4


def _f(x) -> str:
    return f"{x:.9g}"


def _common_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=None,
                        help="base seed (64-bit unsigned)")
    common.add_argument("--config", default=None, help="config file path")
    common.add_argument("--out", default=None, help="output path")
    common.add_argument("--parallelism", type=int, default=None,
                        help="worker pool size for sweeps")
    common.add_argument("--force-large", action="store_true",
                        help="override the size guards")
    return common


def build_parser() -> argparse.ArgumentParser:
    common = _common_parser()
    parser = argparse.ArgumentParser(
        prog="hitsetlab",
        description="random hitting set laboratory")
    sub = parser.add_subparsers(dest="command", required=True)

    p_gen = sub.add_parser("gen", parents=[common],
                           help="generate an instance and write it")
    p_gen.add_argument("--n", type=int, required=True)
    p_gen.add_argument("--m", type=int, required=True)
    p_gen.add_argument("--p", type=float, required=True)
    p_gen.set_defaults(func=_cmd_gen)

    p_solve = sub.add_parser("solve", parents=[common],
                             help="solve one instance with a chosen solver")
    p_solve.add_argument("--in", dest="in_path", default=None,
                         help="instance file; omit to generate from --n/--m/--p")
    p_solve.add_argument("--n", type=int, default=None)
    p_solve.add_argument("--m", type=int, default=None)
    p_solve.add_argument("--p", type=float, default=None)
    p_solve.add_argument("--solver", required=True,
                         choices=["greedy", "block_greedy", "best_of", "lp",
                                  "ip_exact", "ip_bruteforce"])
    p_solve.add_argument("--trace", action="store_true",
                         help="print per-pick gains")
    p_solve.add_argument("--epsilon", type=float, default=0.25,
                         help="schedule epsilon for the block variants")
    p_solve.add_argument("--j", type=int, default=32,
                         help="restart count for best_of")
    p_solve.add_argument("--node-limit", type=int, default=None,
                         help="node cap for ip_exact")
    p_solve.set_defaults(func=_cmd_solve)

    p_sweep = sub.add_parser("sweep", parents=[common],
                             help="run a configured sweep, write records CSV")
    p_sweep.add_argument("--point", action="append", default=None,
                         metavar="'n=<int> m=<spec> p=<spec>'",
                         help="inline grid point, repeatable")
    p_sweep.add_argument("--trials", type=int, default=None)
    p_sweep.add_argument("--solvers", default=None,
                         help="comma list, e.g. greedy,block_greedy,lp")
    p_sweep.add_argument("--epsilon", type=float, default=None)
    p_sweep.add_argument("--record-timings", action="store_true")
    p_sweep.set_defaults(func=_cmd_sweep)

    p_report = sub.add_parser("report", parents=[common],
                              help="gap summary from a records CSV")
    p_report.add_argument("--in", dest="in_path", required=True)
    p_report.set_defaults(func=_cmd_report)

    p_plot = sub.add_parser("plotdata", parents=[common],
                            help="phase-diagram plot data from records")
    p_plot.add_argument("--in", dest="in_path", required=True)
    p_plot.set_defaults(func=_cmd_plotdata)

    p_conj = sub.add_parser("conjecture", parents=[common],
                            help="ratio trends along an n ladder")
    p_conj.add_argument("--regime", choices=ex.CONJECTURE_REGIMES, default=None)
    p_conj.set_defaults(func=_cmd_conjecture)

    p_theory = sub.add_parser("theory", parents=[common],
                              help="evaluate a closed-form quantity")
    p_theory.add_argument("name", choices=sorted(_THEORY_FNS),
                          help="which quantity to evaluate")
    p_theory.add_argument("--n", type=int, default=None)
    p_theory.add_argument("--m", type=int, default=None)
    p_theory.add_argument("--p", type=float, default=None)
    p_theory.add_argument("--k", type=int, default=None)
    p_theory.add_argument("--r", type=int, default=None)
    p_theory.add_argument("--x", type=float, default=None)
    p_theory.add_argument("--mu", type=float, default=None)
    p_theory.add_argument("--delta", type=float, default=None)
    p_theory.add_argument("--a", type=float, default=None)
    p_theory.add_argument("--b", type=float, default=None)
    p_theory.add_argument("--variant", choices=["small_b", "large_b"],
                          default=None)
    p_theory.add_argument("--c-ratio", type=float, default=None)
    p_theory.add_argument("--epsilon", type=float, default=0.25)
    p_theory.add_argument("--big-d", type=float, default=None)
    p_theory.add_argument("--c", type=float, default=None)
    p_theory.add_argument("--big-c", type=float, default=None)
    p_theory.set_defaults(func=_cmd_theory)

    return parser


# ---------------------------------------------------------------------------
# subcommand bodies

def _cmd_gen(args) -> int:
    seed = args.seed if args.seed is not None else 0
    max_cells = (1 << 34) if args.force_large else inst_mod.DEFAULT_MAX_CELLS
    inst = inst_mod.generate(args.n, args.m, args.p, seed, max_cells=max_cells)
    text = inst_mod.serialize(inst)
    if args.out:
        with open(args.out, "w", newline="") as fh:
            fh.write(text)
        print(f"wrote {args.out} (n={inst.n} m={inst.m})")
    else:
        sys.stdout.write(text)
    return EXIT_OK


def _load_or_generate(args):
    if args.in_path:
        inst = inst_mod.load(args.in_path)
        seed = args.seed
        if seed is None and inst.gen_meta is not None:
            seed = inst.gen_meta.seed
        return inst, (0 if seed is None else seed)
    if args.n is None or args.m is None or args.p is None:
        raise ConfigError("solve needs --in or all of --n/--m/--p")
    seed = args.seed if args.seed is not None else 0
    return inst_mod.generate(args.n, args.m, args.p, seed), seed


def _print_cover(sol, trace: bool) -> None:
    print(f"value {sol.value}")
    print(f"algorithm {sol.algorithm_tag.value}")
    print(f"trivial_fallback {'true' if sol.used_trivial_fallback else 'false'}")
    if trace:
        for j, g, c in zip(sol.chosen, sol.gains, sol.covered_after):
            print(f"pick {j} gain {g} covered {c}")
    else:
        print("chosen " + " ".join(str(j) for j in sol.chosen))


def _cmd_solve(args) -> int:
    inst, seed = _load_or_generate(args)
    solver = args.solver
    if solver == "lp":
        res = lp_mod.solve_lp(inst, force_large=args.force_large)
        print(f"status {res.status.value}")
        if res.status is lp_mod.LPStatus.OPTIMAL:
            print(f"value {_f(res.value)}")
            print(f"max_violation {_f(res.max_constraint_violation)}")
            print(f"iterations {res.iterations}")
            if res.dual_objective is not None:
                print(f"dual_objective {_f(res.dual_objective)}")
            return EXIT_OK
        return EXIT_INFEASIBLE if res.status is lp_mod.LPStatus.INFEASIBLE \
            else EXIT_GUARD
    if solver == "greedy":
        _print_cover(greedy_solve(inst), args.trace)
        return EXIT_OK
    if solver in ("block_greedy", "best_of"):
        meta_p = inst.gen_meta.p if inst.gen_meta is not None else None
        if meta_p is None:
            raise ConfigError(
                "block solvers need the generation p; the instance file "
                "carries no meta line")
        sched = build_schedule(inst.n, inst.m, meta_p, args.epsilon)
        shuffle_seed = split_seed(seed, inst.m * inst.n)
        if solver == "best_of":
            sol = block_greedy_best_of(inst, sched, args.j,
                                                  shuffle_seed)
        else:
            sol = block_greedy(inst, sched, shuffle_seed)
        print(f"k_blocks {sched.K}")
        print(f"schedule_case {sched.case_tag.value}")
        _print_cover(sol, args.trace)
        return EXIT_OK
    if solver == "ip_bruteforce":
        res = ip_mod.solve_ip_bruteforce(inst)
    else:
        if inst.n > ex.IP_EXACT_MAX_N and not args.force_large:
            raise TooLargeError(
                f"ip_exact guarded at n={inst.n} > {ex.IP_EXACT_MAX_N}; "
                "pass --force-large to run anyway")
        res = ip_mod.solve_ip_exact(inst, node_limit=args.node_limit)
    print(f"optimal {'true' if res.optimal else 'false'}")
    print(f"nodes {res.nodes_explored}")
    _print_cover(res.solution, args.trace)
    return EXIT_OK


def _sweep_config(args) -> ex.ExperimentConfig:
    if args.config:
        config = ex.load_config(args.config)
    else:
        if not args.point:
            raise ConfigError("sweep needs --config or at least one --point")
        config = ex.ExperimentConfig(grid=())
    updates: dict = {}
    if args.point:
        grid = tuple(ex._parse_point(value, i + 1)
                     for i, value in enumerate(args.point))
        updates["grid"] = grid
    if args.trials is not None:
        updates["trials"] = args.trials
    if args.seed is not None:
        updates["base_seed"] = args.seed
    if args.solvers is not None:
        names, inline_j, inline_nodes = ex.parse_solvers(args.solvers.split(","))
        updates["solvers"] = names
        if inline_j is not None:
            updates["best_of_j"] = inline_j
        if inline_nodes is not None:
            updates["ip_node_limit"] = inline_nodes
    if args.epsilon is not None:
        updates["schedule_epsilon"] = args.epsilon
    if args.out is not None:
        updates["output_path"] = args.out
    if args.parallelism is not None:
        updates["parallelism"] = args.parallelism
    if args.force_large:
        updates["force_large"] = True
    if args.record_timings:
        updates["record_timings"] = True
    config = dataclasses.replace(config, **updates)
    ex.validate_config(config)
    return config


def _cmd_sweep(args) -> int:
    config = _sweep_config(args)
    records = ex.run_sweep(config)
    if config.output_path:
        print(f"wrote {config.output_path} ({len(records)} records)")
    else:
        sys.stdout.write(ex.CSV_HEADER + "\n")
        for rec in records:
            sys.stdout.write(ex.record_to_csv_row(rec) + "\n")
    return EXIT_OK


def _cmd_report(args) -> int:
    rows = ex.gap_report(args.in_path)
    sys.stdout.write(ex.report_to_text(rows))
    if args.out:
        with open(args.out, "w", newline="") as fh:
            fh.write(ex.report_to_csv(rows))
        print(f"wrote {args.out}")
    return EXIT_OK


def _cmd_plotdata(args) -> int:
    if not args.out:
        raise ConfigError("plotdata needs --out")
    ex.emit_plot_data(args.in_path, args.out)
    print(f"wrote {args.out}")
    return EXIT_OK


def _cmd_conjecture(args) -> int:
    if not args.config:
        raise ConfigError("conjecture needs --config with an n ladder")
    config = ex.load_config(args.config)
    updates: dict = {}
    if args.regime is not None:
        updates["conjecture_regime"] = args.regime
    if args.seed is not None:
        updates["base_seed"] = args.seed
    if args.parallelism is not None:
        updates["parallelism"] = args.parallelism
    if args.force_large:
        updates["force_large"] = True
    if updates:
        config = dataclasses.replace(config, **updates)
    rows = ex.conjecture_probe(config)
    text = ex.probe_to_text(rows)
    sys.stdout.write(text)
    if args.out:
        with open(args.out, "w", newline="") as fh:
            fh.write(text)
    return EXIT_OK


# ---------------------------------------------------------------------------
# theory dispatch

def _need(args, *names):
    values = []
    for name in names:
        value = getattr(args, name)
        if value is None:
            flag = name.replace("_", "-")
            raise ConfigError(f"theory {args.name} needs --{flag}")
        values.append(value)
    return values


def _theory_w0(args):
    (x,) = _need(args, "x")
    print(f"w0 {_f(theory_mod.lambert_w0(x))}")
    if x >= math.e:
        lo, hi = theory_mod.lambert_w0_bracket(x)
        print(f"bracket_lo {_f(lo)}")
        print(f"bracket_hi {_f(hi)}")


def _theory_edmax(args):
    n, m, p = _need(args, "n", "m", "p")
    est = theory_mod.expected_dmax_estimate(n, m, p)
    print(f"value {_f(est.value)}")
    print(f"formula {est.formula_used.value}")
    print(f"regime {est.regime.kind.value}")
    if est.g_n is not None:
        print(f"g_n {_f(est.g_n)}")


def _theory_gn(args):
    n, m, p = _need(args, "n", "m", "p")
    print(f"g_n {_f(theory_mod.g_n(n, m, p))}")


def _theory_chernoff(args):
    mu, delta = _need(args, "mu", "delta")
    print(f"tail {_f(theory_mod.chernoff_upper_tail(mu, delta))}")


def _theory_pmf(args):
    m, p, r = _need(args, "m", "p", "r")
    print(f"log_pmf {_f(theory_mod.binom_pmf_log(m, p, r))}")


def _theory_pmf_bound(args):
    a, b, p, variant = _need(args, "a", "b", "p", "variant")
    kind = (theory_mod.BoundVariant.SMALL_B if variant == "small_b"
            else theory_mod.BoundVariant.LARGE_B)
    log_bound = theory_mod.binom_pmf_lower_bound_log(
        a, b, p, kind, c_ratio=args.c_ratio)
    print(f"log_bound {_f(log_bound)}")


def _theory_var_dmax(args):
    m, p = _need(args, "m", "p")
    print(f"variance_bound {_f(theory_mod.dmax_variance_bound(m, p))}")


def _theory_target_degree(args):
    n, m, p = _need(args, "n", "m", "p")
    target = theory_mod.sparse_target_degree(n, m, p, args.epsilon)
    print(f"degree {target.degree}")
    print(f"log_pmf {_f(target.pmf_log)}")


def _theory_zk(args):
    n, m, p, k = _need(args, "n", "m", "p", "k")
    print(f"log_expected_zk {_f(ip_mod.expected_Zk_log(n, m, p, k))}")


def _theory_first_moment(args):
    n, m, p, big_d, delta = _need(args, "n", "m", "p", "big_d", "delta")
    rep = ip_mod.first_moment_thresholds(n, m, p, big_d, delta)
    print(f"k {rep.k}")
    print(f"log_expected_zk {_f(rep.log_expected_Zk)}")
    print(f"k_star_lower {_f(rep.k_star_lower)}")
    print(f"k_star_upper {_f(rep.k_star_upper)}")
    print(f"w0_bracket_ok {'true' if rep.w0_bracket_ok else 'false'}")


def _theory_regime(args):
    n, m, p = _need(args, "n", "m", "p")
    label = inst_mod.classify_regime(n, m, p)
    print(f"kind {label.kind.value}")
    print(f"ratio {_f(label.ratio)}")
    print(f"polydense {'true' if label.polydense else 'false'}")


def _theory_assumption(args):
    n, m, p, delta = _need(args, "n", "m", "p", "delta")
    clauses = inst_mod.assumption_check(n, m, p, delta, c=args.c, C=args.big_c)
    for cl in clauses:
        print(f"clause {cl.name} {'ok' if cl.passed else 'violated'} {cl.detail}")


def _theory_schedule(args):
    n, m, p = _need(args, "n", "m", "p")
    sched = build_schedule(n, m, p, args.epsilon)
    print(f"case {sched.case_tag.value}")
    print(f"k_tilde {sched.k_tilde}")
    print(f"k_blocks {sched.K}")
    print(f"overflowed {'true' if sched.overflowed else 'false'}")
    head = " ".join(str(v) for v in sched.f[:12])
    print(f"f_head {head}")


_THEORY_FNS = {
    "w0": _theory_w0,
    "edmax": _theory_edmax,
    "gn": _theory_gn,
    "chernoff": _theory_chernoff,
    "pmf": _theory_pmf,
    "pmf_bound": _theory_pmf_bound,
    "var_dmax": _theory_var_dmax,
    "target_degree": _theory_target_degree,
    "zk": _theory_zk,
    "first_moment": _theory_first_moment,
    "regime": _theory_regime,
    "assumption": _theory_assumption,
    "schedule": _theory_schedule,
}


def _cmd_theory(args) -> int:
    _THEORY_FNS[args.name](args)
    return EXIT_OK


# ---------------------------------------------------------------------------

def main(argv: Optional[list] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        code = exc.code if isinstance(exc.code, int) else EXIT_CONFIG
        return EXIT_OK if code == 0 else EXIT_CONFIG
    try:
        return args.func(args)
    except (ConfigError, ParseError, EmptyInputError, InvalidProbabilityError,
            DomainError, IndexOutOfRangeError, RegimeViolationError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (InfeasibleError, DegenerateError) as exc:
        print(f"infeasible: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE
    except (TooLargeError, DimensionOverflowError) as exc:
        print(f"guard: {exc}", file=sys.stderr)
        return EXIT_GUARD
    except OSError as exc:
        print(f"io error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


def main_entry() -> None:
    sys.exit(main())
