"""Configuration-driven experiment harness.

A sweep walks a grid of (n, m, p) points, samples `trials` instances per
point with seeds split deterministically from a base seed, runs the
enabled solvers, and emits one CSV row per trial.  Reports aggregate the
rows into gap medians per grid point; plot data projects them onto the
(log_n m, -log_n p) plane of the phase diagram.

Output is byte-deterministic for a fixed config at any parallelism
(timing columns stay empty unless explicitly enabled).
"""

from __future__ import annotations

import math
import re
import statistics
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Callable, Optional, Sequence

from . import ip as ip_mod
from . import lp as lp_mod
from ._rng import split_seed
from .greedy import block_greedy, block_greedy_best_of, build_schedule
from .greedy import greedy as greedy_solve
from .errors import (
    ConfigError,
    EmptyInputError,
    HitSetError,
    InfeasibleError,
    ParseError,
    TooLargeError,
)
from .instance import classify_regime, dmax as inst_dmax, generate

KNOWN_SOLVERS = ("greedy", "block_greedy", "best_of", "lp", "lp_bounds",
                 "ip_exact", "ip_bruteforce")

IP_EXACT_MAX_N = 30

CSV_HEADER = ("n,m,p,seed,regime,dmax,val_lp,lp_lb,lp_ub_uniform,val_ip,"
              "ip_optimal,val_gr,val_bgr,k_blocks,trivial_fallback,gap_ip_lp,"
              "gap_gr_ip,gap_bgr_ip,rt_lp_ms,rt_ip_ms,rt_gr_ms,rt_bgr_ms,error")

_POWER_LAW_RE = re.compile(r"^([^*^]+)\*n\^([^*^]+)$")


@dataclass(frozen=True)
class GridPoint:
    """One sweep point; m_spec and p_spec are literals or a*n^b power laws."""

    n: int
    m_spec: str
    p_spec: str


@dataclass(frozen=True)
class ExperimentConfig:
    grid: tuple
    trials: int = 1
    base_seed: int = 0
    solvers: tuple = ("greedy", "block_greedy", "lp")
    schedule_epsilon: float = 0.25
    output_path: Optional[str] = None
    parallelism: int = 1
    best_of_j: int = 32
    ip_node_limit: Optional[int] = None
    force_large: bool = False
    record_timings: bool = False
    conjecture_regime: Optional[str] = None


@dataclass(frozen=True)
class ExperimentRecord:
    n: int
    m: int
    p: float
    seed: int
    regime: Optional[str] = None
    dmax: Optional[int] = None
    val_lp: Optional[float] = None
    lp_lb: Optional[float] = None
    lp_ub_uniform: Optional[float] = None
    val_ip: Optional[int] = None
    ip_optimal: Optional[bool] = None
    val_gr: Optional[int] = None
    val_bgr: Optional[int] = None
    k_blocks: Optional[int] = None
    trivial_fallback: Optional[bool] = None
    gap_ip_lp: Optional[float] = None
    gap_gr_ip: Optional[float] = None
    gap_bgr_ip: Optional[float] = None
    rt_lp_ms: Optional[float] = None
    rt_ip_ms: Optional[float] = None
    rt_gr_ms: Optional[float] = None
    rt_bgr_ms: Optional[float] = None
    error: str = ""


# ---------------------------------------------------------------------------
# grid resolution

def _eval_spec(spec: str, n: int) -> float:
    spec = spec.strip()
    match = _POWER_LAW_RE.match(spec)
    try:
        if match:
            return float(match.group(1)) * float(n) ** float(match.group(2))
        return float(spec)
    except (ValueError, OverflowError):
        raise ConfigError(f"bad numeric spec {spec!r}")


def resolve_grid_point(gp: GridPoint) -> tuple:
    """(n, m, p) with the power laws evaluated; validates ranges."""
    if gp.n < 2:
        raise ConfigError(f"grid point needs n >= 2, got n={gp.n}")
    m_val = _eval_spec(gp.m_spec, gp.n)
    if not math.isfinite(m_val):
        raise ConfigError(f"m spec {gp.m_spec!r} is not finite at n={gp.n}")
    m = int(math.floor(m_val))
    if m < 1:
        raise ConfigError(f"m spec {gp.m_spec!r} gives m={m} < 1 at n={gp.n}")
    p = _eval_spec(gp.p_spec, gp.n)
    if not (math.isfinite(p) and 0.0 < p <= 1.0):
        raise ConfigError(f"p spec {gp.p_spec!r} gives p={p!r} outside (0, 1]")
    return gp.n, m, p


def _parse_solver_item(item: str) -> tuple:
    """'name', 'name(arg)' or 'name:arg' -> (name, arg or None)."""
    item = item.strip()
    arg = None
    match = re.match(r"^([a-z_]+)\(([^)]*)\)$", item)
    if match:
        item, arg = match.group(1), match.group(2)
    elif ":" in item:
        item, arg = item.split(":", 1)
    if item not in KNOWN_SOLVERS:
        raise ConfigError(f"unknown solver {item!r}, expected one of {KNOWN_SOLVERS}")
    return item, arg


def parse_solvers(items) -> tuple:
    """Normalize a solver list; returns (names, best_of_j, node_limit).

    best_of_j / node_limit are None unless given inline, e.g. best_of(64)
    or ip_exact(100000).
    """
    names = []
    best_of_j = None
    node_limit = None
    for raw in items:
        name, arg = _parse_solver_item(raw)
        if arg is not None and arg != "":
            try:
                val = int(arg)
            except ValueError:
                raise ConfigError(f"bad solver argument in {raw!r}")
            if name == "best_of":
                best_of_j = val
            elif name == "ip_exact":
                node_limit = val
            else:
                raise ConfigError(f"solver {name!r} takes no argument")
        if name not in names:
            names.append(name)
    if not names:
        raise ConfigError("at least one solver must be enabled")
    return tuple(names), best_of_j, node_limit


def validate_config(config: ExperimentConfig) -> None:
    if not config.grid:
        raise ConfigError("grid is empty")
    if config.trials < 1:
        raise ConfigError(f"trials must be >= 1, got {config.trials}")
    if config.parallelism < 1:
        raise ConfigError(f"parallelism must be >= 1, got {config.parallelism}")
    if config.best_of_j < 1:
        raise ConfigError(f"best_of_j must be >= 1, got {config.best_of_j}")
    for name in config.solvers:
        if name not in KNOWN_SOLVERS:
            raise ConfigError(f"unknown solver {name!r}")
    if not config.solvers:
        raise ConfigError("at least one solver must be enabled")
    for gp in config.grid:
        resolve_grid_point(gp)


# ---------------------------------------------------------------------------
# one trial

def _gap(numer, denom) -> Optional[float]:
    if numer is None or denom is None or not denom > 0:
        return None
    return numer / denom


def _audit_chain(rec: ExperimentRecord) -> None:
    """Hard sandwich assertion; a violation is a solver bug, not data."""
    tol = 1e-6
    pairs = []
    if rec.lp_lb is not None and rec.val_lp is not None:
        pairs.append(("lp_lb <= val_lp", rec.lp_lb - tol <= rec.val_lp))
    if rec.val_lp is not None and rec.val_ip is not None:
        pairs.append(("val_lp <= val_ip", rec.val_lp <= rec.val_ip + tol))
    if rec.val_ip is not None and rec.val_gr is not None:
        pairs.append(("val_ip <= val_gr", rec.val_ip <= rec.val_gr))
    if rec.val_ip is not None and rec.val_bgr is not None and rec.ip_optimal:
        pairs.append(("val_ip <= val_bgr", rec.val_ip <= rec.val_bgr))
    for name, ok in pairs:
        if not ok:
            raise RuntimeError(
                f"sandwich violation ({name}) at n={rec.n} m={rec.m} "
                f"p={rec.p} seed={rec.seed}: {rec}")


def run_trial(config: ExperimentConfig, point_index: int, trial_index: int,
              instance_provider: Optional[Callable] = None) -> ExperimentRecord:
    """Generate one instance and run the enabled solvers against it."""
    n, m, p = resolve_grid_point(config.grid[point_index])
    seed = split_seed(config.base_seed, point_index, trial_index)
    solvers = config.solvers
    errors = []
    fields: dict = {"n": n, "m": m, "p": p, "seed": seed}

    try:
        if instance_provider is not None:
            inst = instance_provider(n, m, p, seed)
        else:
            inst = generate(n, m, p, seed)
    except HitSetError as exc:
        fields["error"] = f"generate:{type(exc).__name__}"
        return ExperimentRecord(**fields)

    fields["regime"] = classify_regime(n, m, p).kind.value
    d = inst_dmax(inst)
    fields["dmax"] = d
    if d > 0:
        fields["lp_lb"] = m / d

    def timed(key, fn):
        t0 = time.perf_counter()
        out = fn()
        if config.record_timings:
            fields[key] = (time.perf_counter() - t0) * 1e3
        return out

    if "lp" in solvers:
        try:
            res = timed("rt_lp_ms", lambda: lp_mod.solve_lp(
                inst, force_large=config.force_large))
            if res.status is lp_mod.LPStatus.OPTIMAL:
                fields["val_lp"] = res.value
            else:
                errors.append(f"lp:{res.status.value}")
        except TooLargeError:
            errors.append("lp:too_large")

    if "lp_bounds" in solvers and d > 0:
        bound = lp_mod.uniform_upper_bound(inst, p=p)
        if bound is not None:
            fields["lp_ub_uniform"] = bound

    if "greedy" in solvers:
        try:
            fields["val_gr"] = timed("rt_gr_ms", lambda: greedy_solve(inst)).value
        except InfeasibleError:
            errors.append("greedy:infeasible")

    wants_blocks = "block_greedy" in solvers or "best_of" in solvers
    if wants_blocks:
        try:
            sched = build_schedule(n, m, p, config.schedule_epsilon)
            fields["k_blocks"] = sched.K
            # shuffle streams start past the words the matrix consumed
            shuffle_seed = split_seed(seed, m * n)
            if "best_of" in solvers:
                sol = timed("rt_bgr_ms", lambda: block_greedy_best_of(
                    inst, sched, config.best_of_j, shuffle_seed))
            else:
                sol = timed("rt_bgr_ms", lambda: block_greedy(
                    inst, sched, shuffle_seed))
            fields["val_bgr"] = sol.value
            fields["trivial_fallback"] = sol.used_trivial_fallback
        except HitSetError as exc:
            errors.append(f"block_greedy:{type(exc).__name__}")

    ip_value = None
    ip_optimal = None
    if "ip_bruteforce" in solvers and inst.n <= ip_mod.BRUTEFORCE_MAX_N:
        try:
            res = timed("rt_ip_ms", lambda: ip_mod.solve_ip_bruteforce(inst))
            ip_value, ip_optimal = res.solution.value, True
        except InfeasibleError:
            errors.append("ip:infeasible")
    if "ip_exact" in solvers and (inst.n <= IP_EXACT_MAX_N or config.force_large):
        try:
            res = timed("rt_ip_ms", lambda: ip_mod.solve_ip_exact(
                inst, node_limit=config.ip_node_limit))
            if ip_value is not None and res.optimal and res.solution.value != ip_value:
                raise RuntimeError(
                    f"exact and brute-force optima disagree at seed={seed}: "
                    f"{res.solution.value} vs {ip_value}")
            ip_value, ip_optimal = res.solution.value, res.optimal
        except InfeasibleError:
            if "ip:infeasible" not in errors:
                errors.append("ip:infeasible")
    if ip_value is not None:
        fields["val_ip"] = ip_value
        fields["ip_optimal"] = ip_optimal

    fields["gap_ip_lp"] = _gap(fields.get("val_ip"), fields.get("val_lp"))
    fields["gap_gr_ip"] = _gap(fields.get("val_gr"), fields.get("val_ip"))
    fields["gap_bgr_ip"] = _gap(fields.get("val_bgr"), fields.get("val_ip"))
    fields["error"] = ";".join(errors)

    rec = ExperimentRecord(**fields)
    _audit_chain(rec)
    return rec


def _run_trial_packed(args) -> ExperimentRecord:
    return run_trial(*args)


def run_sweep(config: ExperimentConfig,
              instance_provider: Optional[Callable] = None) -> list:
    """All trials over the grid, in deterministic (point, trial) order.

    With parallelism > 1 the trials run on a process pool; the record
    order and content are identical to the serial run.  When
    instance_provider is given it replaces the Bernoulli generator (it
    must be picklable to combine with parallelism).
    """
    validate_config(config)
    tasks = [(config, pi, ti, instance_provider)
             for pi in range(len(config.grid))
             for ti in range(config.trials)]
    if config.parallelism > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=config.parallelism) as pool:
            records = list(pool.map(_run_trial_packed, tasks))
    else:
        records = [_run_trial_packed(t) for t in tasks]
    if config.output_path:
        write_records_csv(records, config.output_path)
    return records


# ---------------------------------------------------------------------------
# CSV persistence

def _fmt(value) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return f"{value:.9g}"
    if isinstance(value, str):
        return value.replace(",", ";").replace("\n", ";")
    return str(value)


def record_to_csv_row(rec: ExperimentRecord) -> str:
    cells = [
        rec.n, rec.m, float(rec.p), rec.seed, rec.regime, rec.dmax,
        rec.val_lp, rec.lp_lb, rec.lp_ub_uniform, rec.val_ip, rec.ip_optimal,
        rec.val_gr, rec.val_bgr, rec.k_blocks, rec.trivial_fallback,
        rec.gap_ip_lp, rec.gap_gr_ip, rec.gap_bgr_ip,
        rec.rt_lp_ms, rec.rt_ip_ms, rec.rt_gr_ms, rec.rt_bgr_ms, rec.error,
    ]
    return ",".join(_fmt(c) for c in cells)


def write_records_csv(records: Sequence[ExperimentRecord], path) -> None:
    with open(path, "w", newline="") as fh:
        fh.write(CSV_HEADER + "\n")
        for rec in records:
            fh.write(record_to_csv_row(rec) + "\n")


def _parse_cell(text: str, kind: str):
    if text == "":
        return None
    if kind == "int":
        return int(text)
    if kind == "float":
        return float(text)
    if kind == "bool":
        if text not in ("true", "false"):
            raise ValueError(f"bad boolean {text!r}")
        return text == "true"
    return text


_COLUMN_KINDS = ("int", "int", "float", "int", "str", "int", "float", "float",
                 "float", "int", "bool", "int", "int", "int", "bool", "float",
                 "float", "float", "float", "float", "float", "float", "str")


def read_records_csv(path) -> list:
    """Parse a sweep CSV back into ExperimentRecord objects."""
    with open(path, "r", newline="") as fh:
        lines = fh.read().split("\n")
    if lines and lines[-1] == "":
        lines.pop()
    if not lines:
        raise ParseError("empty records file", line=1)
    if lines[0] != CSV_HEADER:
        raise ParseError("unexpected records header", line=1)
    names = CSV_HEADER.split(",")
    records = []
    for idx, line in enumerate(lines[1:], start=2):
        cells = line.split(",")
        if len(cells) != len(names):
            raise ParseError(f"expected {len(names)} columns, found {len(cells)}",
                             line=idx)
        fields = {}
        for name, cell, kind in zip(names, cells, _COLUMN_KINDS):
            try:
                value = _parse_cell(cell, kind)
            except ValueError:
                raise ParseError(f"bad {name} value {cell!r}", line=idx)
            fields[name] = value
        for required in ("n", "m", "p", "seed"):
            if fields[required] is None:
                raise ParseError(f"missing {required}", line=idx)
        if fields["error"] is None:
            fields["error"] = ""
        records.append(ExperimentRecord(**fields))
    if not records:
        raise EmptyInputError("records file has a header but no rows")
    return records


# ---------------------------------------------------------------------------
# reports

@dataclass(frozen=True)
class GapReportRow:
    n: int
    m: int
    p: float
    regime: Optional[str]
    records: int
    trivial_fallbacks: int
    med_gap_ip_lp: Optional[float]
    iqr_gap_ip_lp: Optional[float]
    med_gap_gr_ip: Optional[float]
    iqr_gap_gr_ip: Optional[float]
    med_gap_bgr_ip: Optional[float]
    iqr_gap_bgr_ip: Optional[float]


def _median_iqr(values) -> tuple:
    values = [v for v in values if v is not None]
    if not values:
        return None, None
    med = statistics.median(values)
    if len(values) < 2:
        return med, 0.0
    q1, _, q3 = statistics.quantiles(values, n=4, method="inclusive")
    return med, q3 - q1


def _group_records(records) -> list:
    groups: dict = {}
    order = []
    for rec in records:
        key = (rec.n, rec.m, rec.p)
        if key not in groups:
            groups[key] = []
            order.append(key)
        groups[key].append(rec)
    return [(key, groups[key]) for key in order]


def gap_report(records) -> list:
    """Per-grid-point gap medians and IQRs as GapReportRow objects.

    records is a path to a sweep CSV or an in-memory record list.
    """
    if isinstance(records, (str, bytes)) or hasattr(records, "__fspath__"):
        records = read_records_csv(records)
    if not records:
        raise EmptyInputError("no records to report on")
    rows = []
    for (n, m, p), group in _group_records(records):
        med_il, iqr_il = _median_iqr([r.gap_ip_lp for r in group])
        med_gi, iqr_gi = _median_iqr([r.gap_gr_ip for r in group])
        med_bi, iqr_bi = _median_iqr([r.gap_bgr_ip for r in group])
        rows.append(GapReportRow(
            n=n, m=m, p=p,
            regime=next((r.regime for r in group if r.regime), None),
            records=len(group),
            trivial_fallbacks=sum(1 for r in group if r.trivial_fallback),
            med_gap_ip_lp=med_il, iqr_gap_ip_lp=iqr_il,
            med_gap_gr_ip=med_gi, iqr_gap_gr_ip=iqr_gi,
            med_gap_bgr_ip=med_bi, iqr_gap_bgr_ip=iqr_bi,
        ))
    return rows


REPORT_HEADER = ("n,m,p,regime,records,trivial_fallbacks,med_gap_ip_lp,"
                 "iqr_gap_ip_lp,med_gap_gr_ip,iqr_gap_gr_ip,med_gap_bgr_ip,"
                 "iqr_gap_bgr_ip")


def report_to_csv(rows) -> str:
    out = [REPORT_HEADER]
    for r in rows:
        out.append(",".join(_fmt(c) for c in (
            r.n, r.m, float(r.p), r.regime, r.records, r.trivial_fallbacks,
            r.med_gap_ip_lp, r.iqr_gap_ip_lp, r.med_gap_gr_ip, r.iqr_gap_gr_ip,
            r.med_gap_bgr_ip, r.iqr_gap_bgr_ip)))
    return "\n".join(out) + "\n"


def report_to_text(rows) -> str:
    cols = REPORT_HEADER.split(",")
    table = [cols]
    for r in rows:
        table.append([_fmt(c) or "-" for c in (
            r.n, r.m, float(r.p), r.regime, r.records, r.trivial_fallbacks,
            r.med_gap_ip_lp, r.iqr_gap_ip_lp, r.med_gap_gr_ip, r.iqr_gap_gr_ip,
            r.med_gap_bgr_ip, r.iqr_gap_bgr_ip)])
    widths = [max(len(row[i]) for row in table) for i in range(len(cols))]
    lines = ["  ".join(cell.ljust(w) for cell, w in zip(row, widths)).rstrip()
             for row in table]
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# conjecture probes

@dataclass(frozen=True)
class ProbeRow:
    n: int
    m: int
    p: float
    records: int
    med_gr_lp: Optional[float]
    med_ip_lp: Optional[float]
    med_gr_ip: Optional[float]


CONJECTURE_REGIMES = ("very_sparse", "sparse", "dense")


def conjecture_probe(config: ExperimentConfig,
                     instance_provider: Optional[Callable] = None) -> list:
    """Ratio trends along an n ladder, one ProbeRow per grid point.

    The configured conjecture regime only selects which ratio column the
    caller should read; all computable ratios are reported and no limit
    is asserted (the conjectured limits are open questions).
    """
    if config.conjecture_regime not in CONJECTURE_REGIMES:
        raise ConfigError(
            f"conjecture regime must be one of {CONJECTURE_REGIMES}, "
            f"got {config.conjecture_regime!r}")
    records = run_sweep(config, instance_provider)
    rows = []
    for (n, m, p), group in _group_records(records):
        gr_lp = [_gap(r.val_gr, r.val_lp) for r in group]
        ip_lp = [r.gap_ip_lp for r in group]
        gr_ip = [r.gap_gr_ip for r in group]
        rows.append(ProbeRow(
            n=n, m=m, p=p, records=len(group),
            med_gr_lp=_median_iqr(gr_lp)[0],
            med_ip_lp=_median_iqr(ip_lp)[0],
            med_gr_ip=_median_iqr(gr_ip)[0],
        ))
    return rows


PROBE_HEADER = "n,m,p,records,med_gr_lp,med_ip_lp,med_gr_ip"


def probe_to_text(rows) -> str:
    table = [PROBE_HEADER.split(",")]
    for r in rows:
        table.append([_fmt(c) or "-" for c in (
            r.n, r.m, float(r.p), r.records, r.med_gr_lp, r.med_ip_lp,
            r.med_gr_ip)])
    widths = [max(len(row[i]) for row in table) for i in range(len(table[0]))]
    lines = ["  ".join(cell.ljust(w) for cell, w in zip(row, widths)).rstrip()
             for row in table]
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# plot data

def emit_plot_data(records, out_path) -> None:
    """Phase-diagram projection: rows of b = log_n m, d = -log_n p, gap.

    The gap per grid point is the median val_ip/val_lp when available,
    otherwise the median val_bgr/val_lp.  A second block samples the
    mp = log n separatrix at the median n of the data.
    """
    if isinstance(records, (str, bytes)) or hasattr(records, "__fspath__"):
        records = read_records_csv(records)
    lines = ["# b d gap   (b = log_n m, d = -log_n p, gap = median ip/lp or bgr/lp)"]
    points = []
    for (n, m, p), group in _group_records(records):
        gaps = [r.gap_ip_lp for r in group if r.gap_ip_lp is not None]
        if not gaps:
            gaps = [g for g in (_gap(r.val_bgr, r.val_lp) for r in group)
                    if g is not None]
        if not gaps:
            continue
        b = math.log(m) / math.log(n)
        dexp = -math.log(p) / math.log(n)
        points.append((n, b, dexp, statistics.median(gaps)))
    for _, b, dexp, gap in points:
        lines.append(f"{b:.9g} {dexp:.9g} {gap:.9g}")
    if points:
        n_ref = int(statistics.median(sorted(pt[0] for pt in points)))
        lines.append("")
        lines.append(f"# separatrix mp = log n at n = {n_ref}")
        bs = sorted(pt[1] for pt in points)
        lo, hi = bs[0], bs[-1]
        shift = math.log(math.log(n_ref)) / math.log(n_ref)
        for i in range(21):
            b = lo + (hi - lo) * i / 20 if hi > lo else lo
            lines.append(f"{b:.9g} {b - shift:.9g}")
            if hi <= lo:
                break
    with open(out_path, "w", newline="") as fh:
        fh.write("\n".join(lines) + "\n")


# ---------------------------------------------------------------------------
# config files
#
# Flat key = value lines; '#' starts a comment; keys:
#   point        repeatable: n=<int> m=<spec> p=<spec>
#   trials, base_seed, parallelism, best_of_j, node_limit   integers
#   epsilon (or schedule_epsilon)                           real
#   solvers      comma list from KNOWN_SOLVERS, args allowed
#   out          output CSV path
#   force_large, record_timings                             true/false
#   conjecture   very_sparse | sparse | dense

_POINT_PART_RE = re.compile(r"^(n|m|p)=(\S+)$")


def _parse_point(value: str, line_no: int) -> GridPoint:
    parts = value.split()
    seen = {}
    for part in parts:
        match = _POINT_PART_RE.match(part)
        if not match:
            raise ConfigError(f"bad point component {part!r} on line {line_no}")
        seen[match.group(1)] = match.group(2)
    if set(seen) != {"n", "m", "p"}:
        raise ConfigError(f"point needs n=, m= and p= on line {line_no}")
    try:
        n = int(seen["n"])
    except ValueError:
        raise ConfigError(f"bad n value {seen['n']!r} on line {line_no}")
    gp = GridPoint(n=n, m_spec=seen["m"], p_spec=seen["p"])
    resolve_grid_point(gp)
    return gp


def _parse_bool(value: str, key: str) -> bool:
    if value not in ("true", "false"):
        raise ConfigError(f"{key} must be true or false, got {value!r}")
    return value == "true"


def load_config(path) -> ExperimentConfig:
    """Read the flat key-value config format into an ExperimentConfig."""
    with open(path, "r") as fh:
        text = fh.read()
    grid = []
    fields: dict = {}
    solver_spec = None
    for line_no, raw in enumerate(text.split("\n"), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"expected key = value on line {line_no}: {raw!r}")
        key, _, value = line.partition("=")
        key = key.strip()
        value = value.strip()
        try:
            if key == "point":
                grid.append(_parse_point(value, line_no))
            elif key in ("trials", "base_seed", "parallelism", "best_of_j",
                         "node_limit"):
                dest = "ip_node_limit" if key == "node_limit" else key
                fields[dest] = int(value)
            elif key in ("epsilon", "schedule_epsilon"):
                fields["schedule_epsilon"] = float(value)
            elif key == "solvers":
                solver_spec = [s for s in value.split(",") if s.strip()]
            elif key == "out":
                fields["output_path"] = value
            elif key in ("force_large", "record_timings"):
                fields[key] = _parse_bool(value, key)
            elif key == "conjecture":
                if value not in CONJECTURE_REGIMES:
                    raise ConfigError(
                        f"conjecture must be one of {CONJECTURE_REGIMES}")
                fields["conjecture_regime"] = value
            else:
                raise ConfigError(f"unknown config key {key!r} on line {line_no}")
        except ConfigError:
            raise
        except ValueError:
            raise ConfigError(f"bad value for {key!r} on line {line_no}: {value!r}")
    if solver_spec is not None:
        names, inline_j, inline_nodes = parse_solvers(solver_spec)
        fields["solvers"] = names
        if inline_j is not None:
            fields["best_of_j"] = inline_j
        if inline_nodes is not None:
            fields["ip_node_limit"] = inline_nodes
    if not grid:
        raise ConfigError("config defines no grid points")
    config = ExperimentConfig(grid=tuple(grid), **fields)
    validate_config(config)
    return config
