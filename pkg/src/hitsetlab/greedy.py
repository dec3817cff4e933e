"""Greedy covering heuristics and their block-restricted variants.

greedy takes the best column outright at every step.  block_greedy works
through a random column order in K blocks, taking one greedy step per
newly unlocked block, then patches any leftover rows with the trivial
rule (one dedicated column per uncovered row).  The block count comes
from a gain schedule f_1, f_2, ... tuned to the density regime, and
best-of-J reruns block_greedy over reshuffles keeping the smallest cover.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from enum import Enum
from typing import Optional

from . import _rng, theory
from .errors import ConfigError, DomainError, InfeasibleError, InvalidProbabilityError
from .instance import HSInstance, RegimeKind, RegimeThresholds, classify_regime


class AlgorithmTag(Enum):
    GREEDY = "greedy"
    BLOCK_GREEDY = "block_greedy"
    BEST_OF_J = "best_of_j"
    TRIVIAL = "trivial"
    EXACT_IP = "exact_ip"
    BRUTE_FORCE = "brute_force"


@dataclass(frozen=True)
class CoverSolution:
    """A valid hitting set with its per-step trace.

    chosen holds distinct 1-based column indices in pick order; gains[t]
    counts rows newly hit at step t and covered_after[t] the cumulative
    total, which ends at m for any valid solution.
    """

    chosen: tuple
    value: int
    gains: tuple
    covered_after: tuple
    used_trivial_fallback: bool
    algorithm_tag: AlgorithmTag


def _pick_trace(inst: HSInstance, chosen_zero_based,
                tag: AlgorithmTag) -> CoverSolution:
    """Replay a pick order into a CoverSolution (used by the exact solvers)."""
    uncovered = inst.full_row_mask()
    gains, covered = [], []
    for j in chosen_zero_based:
        gains.append((inst.cols[j] & uncovered).bit_count())
        uncovered &= ~inst.cols[j]
        covered.append(inst.m - uncovered.bit_count())
    return CoverSolution(
        chosen=tuple(j + 1 for j in chosen_zero_based),
        value=len(chosen_zero_based),
        gains=tuple(gains),
        covered_after=tuple(covered),
        used_trivial_fallback=False,
        algorithm_tag=tag,
    )


def greedy(inst: HSInstance) -> CoverSolution:
    """Pick the column hitting the most uncovered rows until all are hit.

    Ties go to the lowest column index.  Raises Infeasible when rows
    remain but no column can hit them (some row is all-zero).
    """
    uncovered = inst.full_row_mask()
    cols = inst.cols
    used = [False] * inst.n
    chosen, gains, covered = [], [], []
    while uncovered:
        best_gain = 0
        best_j = -1
        for j in range(inst.n):
            if used[j]:
                continue
            g = (cols[j] & uncovered).bit_count()
            if g > best_gain:
                best_gain, best_j = g, j
        if best_gain == 0:
            raise InfeasibleError("uncovered rows remain but every column has zero gain")
        used[best_j] = True
        chosen.append(best_j + 1)
        gains.append(best_gain)
        uncovered &= ~cols[best_j]
        covered.append(inst.m - uncovered.bit_count())
    return CoverSolution(chosen=tuple(chosen), value=len(chosen),
                         gains=tuple(gains), covered_after=tuple(covered),
                         used_trivial_fallback=False,
                         algorithm_tag=AlgorithmTag.GREEDY)


# ---------------------------------------------------------------------------
# schedules

class ScheduleCase(Enum):
    SPARSE_OR_THRESHOLD = "sparse_or_threshold"
    DENSE_SWITCH = "dense_switch"
    POLY_DENSE = "poly_dense"


@dataclass(frozen=True)
class ScheduleParams:
    tau: Optional[float]
    alpha: Optional[float]
    beta: Optional[float]
    gamma: Optional[float]
    epsilon: float
    t_star: Optional[int]
    edmax_estimate: float


@dataclass(frozen=True)
class Schedule:
    """Per-step gain targets f_t, their partial sums, and the block count.

    K = min(2 * k_tilde, n) where k_tilde is the first t with
    F_t >= m - t; once F covers all but K rows, K greedy block steps plus
    one trivial pick per leftover row suffice.  overflowed marks the
    degenerate case where no such t exists within n steps; block_greedy
    then leans entirely on the trivial fallback.
    """

    f: tuple
    F: tuple
    K: int
    k_tilde: int
    case_tag: ScheduleCase
    params: ScheduleParams
    overflowed: bool = False


def _bucket_index(remaining: int, m_loc: int, beta: float) -> int:
    # k such that beta^-(k+1) * m_loc < remaining <= beta^-k * m_loc
    k = 0
    while remaining * beta ** (k + 1) <= m_loc:
        k += 1
    return k


def build_schedule(n: int, m: int, p: float, epsilon: float = 0.25,
                   overrides: Optional[dict] = None,
                   thresholds: Optional[RegimeThresholds] = None) -> Schedule:
    """Choose the gain schedule for (n, m, p) by density regime.

    Sparse and threshold points use geometric buckets on the uncovered
    count: f_t = ceil((alpha/beta)^k * tau * Edmax) with k the bucket of
    m - F_{t-1}.  Dense points burn down the bulk with
    f_t = ceil(m p (1-p)^(t-1)) and, unless the point is polydense, switch
    to the bucket rule for the residual after t* = ceil((1/p) log(mp/log n))
    steps.  Constants are overridable; defaults follow the sparse choice
    (tau = epsilon/8, alpha = 2, beta = 3) and the near-1 threshold choice
    (alpha = 1.1, beta = 1.2, gamma = 1.1).
    """
    if not (isinstance(p, (int, float)) and 0.0 < float(p) <= 0.5):
        raise InvalidProbabilityError(f"schedules need p in (0, 1/2], got {p!r}")
    if not 0.0 < epsilon < 1.0:
        raise DomainError(f"epsilon must lie in (0, 1), got {epsilon!r}")
    p = float(p)
    regime = classify_regime(n, m, p, thresholds)
    est = theory.expected_dmax_estimate(n, m, p, thresholds)
    edmax = est.value
    mp = m * p
    logn = math.log(n)

    ov = dict(overrides or {})
    unknown = set(ov) - {"tau", "alpha", "beta", "gamma"}
    if unknown:
        raise ConfigError(f"unknown schedule overrides: {sorted(unknown)}")

    kind = regime.kind
    if kind in (RegimeKind.SPARSE, RegimeKind.THRESHOLD):
        case = ScheduleCase.SPARSE_OR_THRESHOLD
    elif kind is RegimeKind.DENSE:
        case = ScheduleCase.DENSE_SWITCH
    else:
        case = ScheduleCase.POLY_DENSE

    alpha = beta = gamma = tau = None
    t_star = None
    if case is not ScheduleCase.POLY_DENSE:
        if kind is RegimeKind.SPARSE:
            alpha = float(ov.get("alpha", 2.0))
            beta = float(ov.get("beta", 3.0))
            tau = float(ov.get("tau", epsilon / 8.0))
            gamma = ov.get("gamma")
            gamma = float(gamma) if gamma is not None else None
        else:
            # threshold constants, also used for the dense-switch tail
            alpha = float(ov.get("alpha", 1.1))
            beta = float(ov.get("beta", 1.2))
            gamma = float(ov.get("gamma", 1.1))
            tau = float(ov.get("tau", gamma * mp / edmax))
        if case is ScheduleCase.DENSE_SWITCH:
            t_star = max(1, math.ceil((1.0 / p) * math.log(mp / logn)))

    f_list: list = []
    F_list: list = []
    F = 0
    k_tilde = None
    K = None
    m_loc = None      # local row total for the bucket rule
    offset = 0        # global F when the bucket rule took over
    lead = None       # k = 0 bucket target
    t = 0
    while t < n:
        t += 1
        geometric = case is ScheduleCase.POLY_DENSE or (
            case is ScheduleCase.DENSE_SWITCH and t <= t_star)
        if geometric:
            ft = max(1, math.ceil(mp * (1.0 - p) ** (t - 1)))
        else:
            if m_loc is None:
                if case is ScheduleCase.DENSE_SWITCH:
                    # bucket phase targets the rows the geometric phase left over
                    offset = F
                    m_loc = max(m - F, 1)
                    lead = gamma * m_loc * p
                else:
                    m_loc = m
                    lead = tau * edmax
            remaining = m_loc - (F - offset)
            if remaining <= 0:
                ft = 1
            else:
                k = _bucket_index(remaining, m_loc, beta)
                ft = max(1, math.ceil((alpha / beta) ** k * lead))
        F += ft
        f_list.append(ft)
        F_list.append(F)
        if k_tilde is None and F >= m - t:
            k_tilde = t
            K = min(2 * k_tilde, n)
        if K is not None and t >= K:
            break

    overflowed = k_tilde is None
    if overflowed:
        k_tilde = n
        K = n

    return Schedule(
        f=tuple(f_list), F=tuple(F_list), K=K, k_tilde=k_tilde,
        case_tag=case,
        params=ScheduleParams(tau=tau, alpha=alpha, beta=beta, gamma=gamma,
                              epsilon=epsilon, t_star=t_star,
                              edmax_estimate=edmax),
        overflowed=overflowed,
    )


# ---------------------------------------------------------------------------
# block-restricted greedy

def _trivial_extend(inst: HSInstance, uncovered: int, chosen, gains, covered):
    """Cover remaining rows in index order, each by its lowest covering column."""
    while uncovered:
        i = (uncovered & -uncovered).bit_length() - 1
        row = inst.rows[i]
        if row == 0:
            raise InfeasibleError(f"row {i + 1} is all-zero")
        j = (row & -row).bit_length() - 1
        chosen.append(j + 1)
        gains.append((inst.cols[j] & uncovered).bit_count())
        uncovered &= ~inst.cols[j]
        covered.append(inst.m - uncovered.bit_count())


def trivial_cover(inst: HSInstance) -> CoverSolution:
    """One dedicated column per uncovered row, rows taken in index order."""
    chosen, gains, covered = [], [], []
    _trivial_extend(inst, inst.full_row_mask(), chosen, gains, covered)
    return CoverSolution(chosen=tuple(chosen), value=len(chosen),
                         gains=tuple(gains), covered_after=tuple(covered),
                         used_trivial_fallback=True,
                         algorithm_tag=AlgorithmTag.TRIVIAL)


def block_greedy(inst: HSInstance, sched: Schedule, seed: int) -> CoverSolution:
    """Greedy over progressively unlocked random column blocks.

    Columns are shuffled by seed and split into sched.K blocks of size
    floor(n/K), leftovers appended to the last block.  Step t unlocks
    block t and takes one greedy step over every unlocked unused column
    (a step with zero best gain picks nothing).  Rows still uncovered
    after the last block are patched by the trivial rule.
    """
    n, m = inst.n, inst.m
    order = _rng.shuffled(range(n), seed)
    K = max(1, min(sched.K, n))
    bs = n // K
    uncovered = inst.full_row_mask()
    cols = inst.cols
    available: list = []
    chosen, gains, covered = [], [], []

    for t in range(K):
        if not uncovered:
            break
        start = t * bs
        stop = start + bs if t < K - 1 else n
        available.extend(order[start:stop])
        best_gain = 0
        best_j = -1
        best_pos = -1
        for pos, j in enumerate(available):
            g = (cols[j] & uncovered).bit_count()
            if g > best_gain or (g == best_gain and g > 0 and j < best_j):
                best_gain, best_j, best_pos = g, j, pos
        if best_gain == 0:
            continue  # nothing in the unlocked pool helps yet
        available[best_pos] = available[-1]
        available.pop()
        chosen.append(best_j + 1)
        gains.append(best_gain)
        uncovered &= ~cols[best_j]
        covered.append(m - uncovered.bit_count())

    used_fallback = bool(uncovered)
    if uncovered:
        _trivial_extend(inst, uncovered, chosen, gains, covered)
    return CoverSolution(chosen=tuple(chosen), value=len(chosen),
                         gains=tuple(gains), covered_after=tuple(covered),
                         used_trivial_fallback=used_fallback,
                         algorithm_tag=AlgorithmTag.BLOCK_GREEDY)


def block_greedy_best_of(inst: HSInstance, sched: Schedule, J: int,
                         seed: int) -> CoverSolution:
    """Minimum-value cover over J reshuffled block_greedy runs.

    Copy i runs with split_seed(seed, i), so results for smaller J are
    prefixes of larger J and the minimum is non-increasing in J.  Ties
    keep the lowest copy index.
    """
    if J < 1:
        raise DomainError(f"J must be at least 1, got {J!r}")
    best = None
    for idx in range(J):
        sol = block_greedy(inst, sched, _rng.split_seed(seed, idx))
        if best is None or sol.value < best.value:
            best = sol
    return replace(best, algorithm_tag=AlgorithmTag.BEST_OF_J)
