"""Exact integer optima and first-moment counterparts.

solve_ip_exact runs depth-first branch-and-bound seeded with the greedy
cover; solve_ip_bruteforce enumerates subsets by increasing cardinality
as a slow, unarguable oracle.  count_feasible_k and expected_Zk_log give
the empirical and analytic sides of the number Z_k of size-k covers,
whose first-moment thresholds bracket the integer optimum in the dense
regime.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from enum import Enum
from typing import Optional

import numpy as np

from .errors import (
    DomainError,
    IndexOutOfRangeError,
    InfeasibleError,
    InvalidProbabilityError,
    RegimeViolationError,
    TooLargeError,
)
from .greedy import AlgorithmTag, CoverSolution, _pick_trace, greedy
from .instance import HSInstance
from .theory import lambert_w0

BRUTEFORCE_MAX_N = 26


class BoundKind(Enum):
    LP_RELAXATION = "lp_relaxation"
    M_OVER_DMAX = "m_over_dmax"


@dataclass(frozen=True)
class IPResult:
    """Exact-solver outcome; bound_used is None for plain enumeration."""

    solution: CoverSolution
    optimal: bool
    nodes_explored: int
    bound_used: Optional[BoundKind]


def _check_feasible(inst: HSInstance) -> None:
    for i, r in enumerate(inst.rows):
        if r == 0:
            raise InfeasibleError(f"row {i + 1} is all-zero")


def solve_ip_bruteforce(inst: HSInstance) -> IPResult:
    """Smallest hitting set by level-wise subset enumeration.

    Walks cardinalities k = 1, 2, ... keeping every k-subset's cover mask
    as numpy rows (lexicographic order within a level), so the first hit
    is the lexicographically least optimum.  Guarded at n <= 26.
    """
    if inst.n > BRUTEFORCE_MAX_N:
        raise TooLargeError(f"brute force is guarded at n <= {BRUTEFORCE_MAX_N}")
    _check_feasible(inst)
    n, m = inst.n, inst.m
    words = (m + 63) // 64
    mask64 = (1 << 64) - 1
    col_words = np.zeros((n, words), dtype=np.uint64)
    for j, c in enumerate(inst.cols):
        for w in range(words):
            col_words[j, w] = (c >> (64 * w)) & mask64
    full = np.zeros(words, dtype=np.uint64)
    full_mask = inst.full_row_mask()
    for w in range(words):
        full[w] = (full_mask >> (64 * w)) & mask64

    covers = col_words.copy()
    colsets = np.uint32(1) << np.arange(n, dtype=np.uint32)
    last = np.arange(n, dtype=np.int64)
    nodes = 0
    for _k in range(1, n + 1):
        nodes += covers.shape[0]
        hit = (covers == full).all(axis=1)
        if hit.any():
            subset = int(colsets[int(np.argmax(hit))])
            chosen = [j for j in range(n) if (subset >> j) & 1]
            sol = _pick_trace(inst, chosen, AlgorithmTag.BRUTE_FORCE)
            return IPResult(solution=sol, optimal=True, nodes_explored=nodes,
                            bound_used=None)
        # extend every subset by each column index above its last one
        counts = (n - 1 - last).astype(np.int64)
        keep = counts > 0
        reps = counts[keep]
        parents = np.flatnonzero(keep)
        parent_idx = np.repeat(parents, reps)
        ends = np.cumsum(reps)
        offsets = np.arange(int(ends[-1])) - np.repeat(ends - reps, reps)
        child_j = np.repeat(last[keep] + 1, reps) + offsets
        covers = covers[parent_idx] | col_words[child_j]
        colsets = colsets[parent_idx] | (np.uint32(1) << child_j.astype(np.uint32))
        last = child_j
    raise AssertionError("unreachable: the full column set is always a cover")


def solve_ip_exact(inst: HSInstance, node_limit: Optional[int] = None,
                   use_lp_bound: bool = False) -> IPResult:
    """Branch-and-bound on column inclusion.

    Incumbent starts at the greedy cover.  Branches on the column of
    maximum residual gain (ties to the lowest index), include branch
    first; nodes are pruned when depth + bound >= incumbent, where the
    bound is ceil(residual rows / residual dmax) and optionally the
    rounded-up node LP value when use_lp_bound is set.  With node_limit
    exhausted the best incumbent is returned with optimal=False.
    """
    _check_feasible(inst)
    incumbent = greedy(inst)
    best = {
        "val": incumbent.value,
        "chosen": [j - 1 for j in incumbent.chosen],
        "nodes": 0,
        "capped": False,
    }
    cols = inst.cols
    n = inst.n

    def node_lp_floor(uncovered: int, avail_mask: int) -> float:
        from . import lp as lp_mod
        from .instance import from_rows

        avail_cols = []
        mask = avail_mask
        while mask:
            j = (mask & -mask).bit_length() - 1
            mask &= mask - 1
            avail_cols.append(j)
        sub_rows = []
        left = uncovered
        while left:
            i = (left & -left).bit_length() - 1
            left &= left - 1
            row = inst.rows[i]
            sub = 0
            for pos, j in enumerate(avail_cols):
                if (row >> j) & 1:
                    sub |= 1 << pos
            sub_rows.append(sub)
        if not sub_rows:
            return 0.0
        sub_inst = from_rows(len(avail_cols), sub_rows)
        res = lp_mod.solve_lp(sub_inst)
        if res.status is not lp_mod.LPStatus.OPTIMAL:
            return 0.0
        return res.value

    def dfs(uncovered: int, avail_mask: int, chosen: list) -> None:
        if best["capped"]:
            return
        best["nodes"] += 1
        if node_limit is not None and best["nodes"] > node_limit:
            best["capped"] = True
            return
        if uncovered == 0:
            if len(chosen) < best["val"]:
                best["val"] = len(chosen)
                best["chosen"] = list(chosen)
            return
        best_g = 0
        best_j = -1
        mask = avail_mask
        while mask:
            j = (mask & -mask).bit_length() - 1
            mask &= mask - 1
            g = (cols[j] & uncovered).bit_count()
            if g > best_g:
                best_g, best_j = g, j
        if best_g == 0:
            return  # some uncovered row is unreachable down this branch
        lb = -(-uncovered.bit_count() // best_g)
        if len(chosen) + lb >= best["val"]:
            return
        if use_lp_bound:
            lp_lb = math.ceil(node_lp_floor(uncovered, avail_mask) - 1e-9)
            if len(chosen) + max(lb, lp_lb) >= best["val"]:
                return
        rest = avail_mask & ~(1 << best_j)
        chosen.append(best_j)
        dfs(uncovered & ~cols[best_j], rest, chosen)
        chosen.pop()
        dfs(uncovered, rest, chosen)

    dfs(inst.full_row_mask(), (1 << n) - 1, [])
    sol = _pick_trace(inst, best["chosen"], AlgorithmTag.EXACT_IP)
    return IPResult(
        solution=sol,
        optimal=not best["capped"],
        nodes_explored=best["nodes"],
        bound_used=BoundKind.LP_RELAXATION if use_lp_bound else BoundKind.M_OVER_DMAX,
    )


def count_feasible_k(inst: HSInstance, k: int) -> int:
    """Exact number of k-subsets of columns that hit every row."""
    if inst.n > BRUTEFORCE_MAX_N:
        raise TooLargeError(f"counting is guarded at n <= {BRUTEFORCE_MAX_N}")
    if not 0 <= k <= inst.n:
        raise IndexOutOfRangeError(f"need 0 <= k <= n, got k={k}")
    full = inst.full_row_mask()
    cols = inst.cols
    count = 0
    for combo in itertools.combinations(range(inst.n), k):
        covered = 0
        for j in combo:
            covered |= cols[j]
            if covered == full:
                break
        if covered == full:
            count += 1
    return count


def expected_Zk_log(n: int, m: int, p: float, k: int) -> float:
    """log E[Z_k] = log C(n,k) + m log(1 - (1-p)^k), -inf when the mean is 0.

    The inner probability is computed as -expm1(k log1p(-p)) so small p
    does not cancel catastrophically.
    """
    if not (isinstance(p, (int, float)) and 0.0 <= float(p) <= 1.0):
        raise InvalidProbabilityError(f"p must lie in [0, 1], got {p!r}")
    if not 0 <= k <= n:
        raise IndexOutOfRangeError(f"need 0 <= k <= n, got k={k}, n={n}")
    p = float(p)
    log_comb = math.lgamma(n + 1) - math.lgamma(k + 1) - math.lgamma(n - k + 1)
    if m == 0:
        return log_comb
    if k == 0 or p == 0.0:
        return -math.inf
    if p == 1.0:
        return log_comb
    hit = -math.expm1(k * math.log1p(-p))  # 1 - (1-p)^k
    if hit <= 0.0:
        return -math.inf
    if hit >= 1.0:
        return log_comb
    return log_comb + m * math.log(hit)


@dataclass(frozen=True)
class FirstMomentReport:
    """Cardinality thresholds where E[Z_k] crosses zero and one.

    Below k_star_lower = W0(mp / (D log n)) / (2p) size-k covers have
    vanishing expected count (so val_IP exceeds it w.h.p.); at
    k_star_upper = (1/p) log((1/delta) mp / log n) the expectation is
    at least one.  w0_bracket_ok reports whether the argument reached e,
    where the elementary W0 bracket applies; the value is computed by
    the iterative solver either way.
    """

    k: int
    log_expected_Zk: float
    k_star_lower: float
    k_star_upper: float
    D: float
    delta: float
    w0_bracket_ok: bool


def first_moment_thresholds(n: int, m: int, p: float, D: float,
                            delta: float) -> FirstMomentReport:
    """Evaluate both first-moment thresholds for a dense point."""
    if not (isinstance(p, (int, float)) and 0.0 < float(p) < 1.0):
        raise InvalidProbabilityError(f"p must lie in (0, 1), got {p!r}")
    if n < 2:
        raise DomainError("need n >= 2")
    if not D >= 1.0:
        raise DomainError(f"need D >= 1, got {D!r}")
    if not 0.0 < delta <= 1.0:
        raise DomainError(f"need delta in (0, 1], got {delta!r}")
    p = float(p)
    mp = m * p
    logn = math.log(n)
    if mp <= logn:
        raise RegimeViolationError(
            f"first-moment thresholds need m*p > log n, got {mp:.6g} <= {logn:.6g}")
    arg = mp / (D * logn)
    k_star_lower = lambert_w0(arg) / (2.0 * p)
    k_star_upper = (1.0 / p) * math.log((1.0 / delta) * mp / logn)
    k = math.ceil(k_star_lower)
    log_ez = expected_Zk_log(n, m, p, k) if k <= n else -math.inf
    return FirstMomentReport(k=k, log_expected_Zk=log_ez,
                             k_star_lower=k_star_lower,
                             k_star_upper=k_star_upper,
                             D=float(D), delta=float(delta),
                             w0_bracket_ok=arg >= math.e)
