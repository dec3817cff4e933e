"""Covering LP relaxation: min 1'x subject to Ax >= 1, 0 <= x <= 1.

Solved exactly at desk scale by a bounded-variable revised simplex.  The
standard form is [A | -I] [x; s] = 1 with 0 <= x <= 1 and s >= 0.  Box
bounds are handled implicitly (variables rest at either bound, never as
extra rows).

Two pivoting strategies share the same basis machinery:

* ``primal``: flip-down crash to a feasible all-surplus basis, Dantzig
  pricing, Bland's rule past a pivot budget so termination is guaranteed
  on degenerate polytopes.  Comfortable up to a few hundred rows+columns.
* ``dual``: starts from the (dual feasible, primal infeasible) zero
  vertex and drives primal infeasibility out with a bound-flipping
  long-step ratio test and Devex row pricing.  On dense instances the
  long steps pass through many degenerate breakpoints per pivot, which
  keeps the pivot count a couple of orders of magnitude below the primal
  path at n = m = 2000.

The basis inverse is kept transposed and C-contiguous so that the hot
operations (row extraction, sparse column gathers, rank-1 update) all
touch contiguous memory.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Optional

import numpy as np

from .errors import ConfigError, DegenerateError, InvalidProbabilityError, TooLargeError
from .instance import HSInstance, dmax as inst_dmax

FEASIBILITY_TOL = 1e-7
OPTIMALITY_TOL = 1e-9
SIZE_GUARD_CELLS = 25_000_000

# primal path switches to the dual solver above this many rows+columns
PRIMAL_AUTO_LIMIT = 800

_REFRESH_EVERY = 128       # pivots between refactorizations (primal, small m)
_REFRESH_EVERY_BIG = 1024  # large m: refactorization is an O(m^3) inverse
_DRIFT_CHECK_EVERY = 128
_DRIFT_TOL = 1e-8
_PIVOT_DROP_TOL = 1e-11
_RATIO_EPS = 1e-9


class LPStatus(Enum):
    OPTIMAL = "optimal"
    INFEASIBLE = "infeasible"
    ITERATION_LIMIT = "iteration_limit"


@dataclass(frozen=True)
class LPSolution:
    """Fractional cover and solver certificate.

    x, value and the violation figure are meaningful for every status;
    dual fields are populated only at optimality.
    """

    x: np.ndarray
    value: float
    status: LPStatus
    max_constraint_violation: float
    iterations: int
    dual: Optional[np.ndarray] = None
    dual_objective: Optional[float] = None
    cs_residual: Optional[float] = None


# variable states
_AT_LOWER = 0
_AT_UPPER = 1
_BASIC = 2


class _Simplex:
    """One solve on a dense matrix; variables 0..n-1 structural, n..n+m-1 surplus."""

    def __init__(self, A: np.ndarray):
        self.A = A
        self.m, self.n = A.shape
        self.nv = self.n + self.m
        self.vstat = np.full(self.nv, _AT_LOWER, dtype=np.int8)
        self.basis = np.arange(self.n, self.nv, dtype=np.int64)
        self.vstat[self.basis] = _BASIC
        # BinvT[k, i] = (B^-1)[i, k]; C order makes gathers and updates contiguous
        self.BinvT = -np.eye(self.m)
        self.xB = np.zeros(self.m)
        self.iterations = 0
        # column index of A in compressed form, for sparse gathers
        jj, ii = np.nonzero(A.T)
        self.col_rows = ii.astype(np.int64)
        counts = np.bincount(jj, minlength=self.n)
        self.col_indptr = np.concatenate(([0], np.cumsum(counts)))
        self.col_empty = counts == 0
        self._gbuf = np.zeros(self.col_rows.size + 1)
        self._refresh_every = _REFRESH_EVERY if self.m < 1000 else _REFRESH_EVERY_BIG

    # -- shared basis machinery -------------------------------------------

    def crash(self) -> None:
        """Start from x = 1 and flip columns to 0 while rows stay covered."""
        self.vstat[: self.n] = _AT_UPPER
        s = self.A.sum(axis=1)  # coverage counts, exact small integers
        for j in range(self.n):
            rows_j = np.flatnonzero(self.A[:, j])
            if rows_j.size == 0 or s[rows_j].min() >= 2.0:
                self.vstat[j] = _AT_LOWER
                if rows_j.size:
                    s[rows_j] -= 1.0
                self.iterations += 1
        # surplus basics carry the leftover coverage
        self.xB = s - 1.0

    def _col(self, q: int) -> np.ndarray:
        if q < self.n:
            return self.A[:, q]
        col = np.zeros(self.m)
        col[q - self.n] = -1.0
        return col

    def _ftran(self, q: int) -> np.ndarray:
        """B^-1 times column q, gathering only the column's nonzero rows."""
        if q >= self.n:
            return -self.BinvT[q - self.n].copy()
        lo, hi = self.col_indptr[q], self.col_indptr[q + 1]
        if hi == lo:
            return np.zeros(self.m)
        return self.BinvT[self.col_rows[lo:hi]].sum(axis=0)

    def _pivot_row_alpha(self, brow: np.ndarray) -> np.ndarray:
        """Row brow times [A | -I] over every variable."""
        alpha = np.empty(self.nv)
        nnz = self.col_rows.size
        if nnz:
            np.take(brow, self.col_rows, out=self._gbuf[:nnz])
            seg = np.add.reduceat(self._gbuf, self.col_indptr[:-1])
            seg[self.col_empty] = 0.0
            alpha[: self.n] = seg
        else:
            alpha[: self.n] = 0.0
        alpha[self.n:] = -brow
        return alpha

    def _refactorize(self) -> None:
        B = np.zeros((self.m, self.m))
        sp = np.flatnonzero(self.basis < self.n)
        if sp.size:
            B[:, sp] = self.A[:, self.basis[sp]]
        su = np.flatnonzero(self.basis >= self.n)
        if su.size:
            B[self.basis[su] - self.n, su] = -1.0
        self.BinvT = np.linalg.inv(B.T)
        self._recompute_xb()

    def _rhs(self) -> np.ndarray:
        up = np.flatnonzero(self.vstat[: self.n] == _AT_UPPER)
        return np.ones(self.m) - self.A[:, up].sum(axis=1)

    def _recompute_xb(self) -> None:
        self.xB = self._rhs() @ self.BinvT

    def _duals(self) -> np.ndarray:
        c_b = (self.basis < self.n).astype(float)
        return self.BinvT @ c_b

    def _upper(self, var: int) -> float:
        return 1.0 if var < self.n else math.inf

    def _update_basis(self, leave_pos: int, q: int, w: np.ndarray) -> None:
        """Rank-1 update of the transposed inverse after q replaces position leave_pos."""
        piv = w[leave_pos]
        br = self.BinvT[:, leave_pos] / piv
        self.BinvT -= np.outer(br, w)
        self.BinvT[:, leave_pos] = br

    # -- primal path -------------------------------------------------------

    def solve_primal(self, max_iters: int, bland_after: int) -> LPStatus:
        n, m = self.n, self.m
        pivots_since_refresh = 0
        while True:
            if self.iterations > max_iters:
                return LPStatus.ITERATION_LIMIT
            y = self._duals()
            red = np.empty(self.nv)
            red[:n] = 1.0 - y @ self.A
            red[n:] = y

            viol = np.zeros(self.nv)
            lo_mask = self.vstat == _AT_LOWER
            up_mask = self.vstat == _AT_UPPER
            viol[lo_mask] = -red[lo_mask]
            viol[up_mask] = red[up_mask]

            if self.iterations <= bland_after:
                q = int(np.argmax(viol))
                if viol[q] <= OPTIMALITY_TOL:
                    return LPStatus.OPTIMAL
            else:
                eligible = np.flatnonzero(viol > OPTIMALITY_TOL)
                if eligible.size == 0:
                    return LPStatus.OPTIMAL
                q = int(eligible[0])

            sigma = 1.0 if self.vstat[q] == _AT_LOWER else -1.0
            w = self._ftran(q)
            d = sigma * w

            # ratio test: largest step t keeping every basic inside its bounds
            limits = np.full(m, math.inf)
            inc = d > _PIVOT_DROP_TOL            # basic decreases toward its lower bound 0
            limits[inc] = np.maximum(self.xB[inc], 0.0) / d[inc]
            dec = (d < -_PIVOT_DROP_TOL) & (self.basis < n)  # only structurals have a ceiling
            limits[dec] = np.maximum(1.0 - self.xB[dec], 0.0) / -d[dec]
            t_basic = float(limits.min()) if m else math.inf

            t_flip = self._upper(q)  # finite only for structurals
            if t_flip <= t_basic:
                if t_flip == math.inf:
                    raise ArithmeticError("unbounded direction in a box-bounded LP")
                # bound flip, basis unchanged
                self.xB -= d * t_flip
                self.vstat[q] = _AT_UPPER if sigma > 0 else _AT_LOWER
                self.iterations += 1
                continue

            ties = np.flatnonzero(limits <= t_basic + 1e-12)
            leave_pos = int(ties[np.argmin(self.basis[ties])])  # lowest variable index
            leave_state = _AT_LOWER if d[leave_pos] > 0 else _AT_UPPER
            piv = w[leave_pos]
            if abs(piv) < _PIVOT_DROP_TOL:
                # cannot happen while |d| = |w| gates the ratio test; purely defensive
                self._refactorize()
                pivots_since_refresh = 0
                self.iterations += 1
                continue

            lv = int(self.basis[leave_pos])
            self.xB -= d * t_basic
            entering_value = (0.0 if sigma > 0 else 1.0) + sigma * t_basic
            self.basis[leave_pos] = q
            self.vstat[q] = _BASIC
            self.vstat[lv] = leave_state
            self.xB[leave_pos] = entering_value
            self._update_basis(leave_pos, q, w)

            self.iterations += 1
            pivots_since_refresh += 1
            if pivots_since_refresh >= self._refresh_every:
                self._refactorize()
                pivots_since_refresh = 0

    # -- dual path ----------------------------------------------------------

    def solve_dual(self, max_iters: int) -> LPStatus:
        """Dual simplex from the all-surplus basis at x = 0.

        Reduced costs start at 1 (structural) / 0 (surplus), so the basis
        is dual feasible and no crash is needed.  Each pivot removes the
        worst primal infeasibility, weighted by Devex reference weights;
        the ratio test walks breakpoints in increasing ratio order and
        flips bounded columns it passes, so one pivot can move many
        variables across the box.
        """
        n, m = self.n, self.m
        self._recompute_xb()
        red = np.zeros(self.nv)
        red[:n] = 1.0
        devex = np.ones(m)
        pivots_since_refresh = 0
        since_drift_check = 0

        while True:
            if self.iterations > max_iters:
                return LPStatus.ITERATION_LIMIT

            ub_b = np.where(self.basis < n, 1.0, math.inf)
            below = np.maximum(-self.xB, 0.0)
            above = np.maximum(self.xB - ub_b, 0.0)
            infeas = np.maximum(below, above)
            infeas[infeas <= FEASIBILITY_TOL * 0.01] = 0.0
            if not infeas.any():
                return LPStatus.OPTIMAL
            r = int(np.argmax(infeas * infeas / devex))
            to_upper = above[r] > below[r]
            sign = 1.0 if to_upper else -1.0
            target = ub_b[r] if to_upper else 0.0

            brow = self.BinvT[:, r]
            alpha = self._pivot_row_alpha(brow)
            d = sign * alpha

            lo_mask = self.vstat == _AT_LOWER
            up_mask = self.vstat == _AT_UPPER
            cand_mask = (lo_mask & (d > _RATIO_EPS)) | (up_mask & (d < -_RATIO_EPS))
            cand = np.flatnonzero(cand_mask)
            if cand.size == 0:
                return LPStatus.INFEASIBLE

            ratios = np.maximum(red[cand] / d[cand], 0.0)
            order = np.argsort(ratios, kind="stable")
            flow = np.where(cand < n, np.abs(d[cand]), math.inf)[order]
            need = infeas[r]
            csum = np.cumsum(flow)
            crossing = csum >= need - 1e-12
            if not crossing.any():
                return LPStatus.INFEASIBLE
            k = int(np.argmax(crossing))
            enter_q = int(cand[order[k]])
            flips = cand[order[:k]]

            if flips.size:
                jl = flips[self.vstat[flips] == _AT_LOWER]
                ju = flips[self.vstat[flips] == _AT_UPPER]
                dv = np.zeros(m)
                if jl.size:
                    dv += self.A[:, jl].sum(axis=1)
                if ju.size:
                    dv -= self.A[:, ju].sum(axis=1)
                self.xB -= dv @ self.BinvT
                self.vstat[jl] = _AT_UPPER
                self.vstat[ju] = _AT_LOWER

            w = self._ftran(enter_q)
            piv = w[r]
            if abs(piv) < _PIVOT_DROP_TOL:
                self._refactorize()
                pivots_since_refresh = 0
                self.iterations += 1
                continue

            delta = (self.xB[r] - target) / piv
            bound_q = 1.0 if self.vstat[enter_q] == _AT_UPPER else 0.0
            t_dual = red[enter_q] / piv

            lv = int(self.basis[r])
            self.xB -= delta * w
            self.xB[r] = bound_q + delta
            self.basis[r] = enter_q
            self.vstat[enter_q] = _BASIC
            self.vstat[lv] = _AT_UPPER if to_upper else _AT_LOWER
            red -= t_dual * alpha
            red[enter_q] = 0.0

            self._update_basis(r, enter_q, w)
            g = devex[r]
            rel = w / piv
            np.maximum(devex, rel * rel * g, out=devex)
            devex[r] = max(g / (piv * piv), 1.0)
            if devex.max() > 1e12:
                devex[:] = 1.0

            self.iterations += 1
            pivots_since_refresh += 1
            since_drift_check += 1
            if pivots_since_refresh >= self._refresh_every:
                self._refactorize()
                red = self._fresh_reduced_costs()
                pivots_since_refresh = 0
                since_drift_check = 0
            elif since_drift_check >= _DRIFT_CHECK_EVERY:
                since_drift_check = 0
                drift = float(np.abs(self._rhs() @ self.BinvT - self.xB).max())
                if drift > _DRIFT_TOL:
                    self._refactorize()
                    red = self._fresh_reduced_costs()
                    pivots_since_refresh = 0

    def _fresh_reduced_costs(self) -> np.ndarray:
        y = self._duals()
        red = np.empty(self.nv)
        red[: self.n] = 1.0 - y @ self.A
        red[self.n:] = y
        red[self.basis] = 0.0
        return red

    def primal_x(self) -> np.ndarray:
        x = np.zeros(self.n)
        x[self.vstat[: self.n] == _AT_UPPER] = 1.0
        for pos, var in enumerate(self.basis):
            if var < self.n:
                x[var] = self.xB[pos]
        return x


def solve_lp(inst: HSInstance, tol: float = FEASIBILITY_TOL,
             max_iters: Optional[int] = None,
             force_large: bool = False,
             strategy: str = "auto") -> LPSolution:
    """Optimal basic solution of the covering relaxation.

    strategy picks the pivoting path: "primal" (Dantzig with a Bland
    switch after 10(m+n) pivots), "dual" (bound-flipping long steps), or
    "auto", which uses the primal path while m + n <= PRIMAL_AUTO_LIMIT
    and the dual path beyond that.  Both return the same optimal value;
    the dual path is far faster on dense instances.  The default
    iteration cap is 50(m+n).

    Instances with m*n above SIZE_GUARD_CELLS are refused unless
    force_large is set; at that scale use lp_lower_bound and
    uniform_upper_bound instead.
    """
    m, n = inst.m, inst.n
    if m * n > SIZE_GUARD_CELLS and not force_large:
        raise TooLargeError(
            f"m*n = {m * n} exceeds the LP size guard {SIZE_GUARD_CELLS}")
    if strategy not in ("auto", "primal", "dual"):
        raise ConfigError(f"unknown LP strategy {strategy!r}")
    if strategy == "auto":
        strategy = "primal" if m + n <= PRIMAL_AUTO_LIMIT else "dual"
    if max_iters is None:
        max_iters = 50 * (m + n)

    if any(r == 0 for r in inst.rows):
        return LPSolution(x=np.zeros(n), value=0.0, status=LPStatus.INFEASIBLE,
                          max_constraint_violation=1.0, iterations=0)

    A = inst.to_dense().astype(np.float64)
    sx = _Simplex(A)
    if strategy == "primal":
        sx.crash()
        status = sx.solve_primal(max_iters=max_iters, bland_after=10 * (m + n))
    else:
        status = sx.solve_dual(max_iters=max_iters)
    sx._refactorize()  # polish the final point before reporting
    x = sx.primal_x()
    value = float(x.sum())
    ax = A @ x
    violation = float(max(0.0, (1.0 - ax).max(), (-x).max(), (x - 1.0).max()))

    if status is not LPStatus.OPTIMAL:
        return LPSolution(x=x, value=value, status=status,
                          max_constraint_violation=violation,
                          iterations=sx.iterations)

    y = sx._duals()
    red = 1.0 - y @ A
    overcharge = np.maximum(-red, 0.0)           # amount A'y exceeds cost 1
    dual_objective = float(y.sum() - overcharge.sum())
    cs_terms = [
        float(np.max(np.abs(y * (ax - 1.0)))),                  # y_i (Ax - 1)_i
        float(np.max(np.maximum(red, 0.0) * x)),                # positive r_j forces x_j = 0
        float(np.max(np.maximum(-red, 0.0) * (1.0 - x))),       # negative r_j forces x_j = 1
    ]
    return LPSolution(x=x, value=value, status=status,
                      max_constraint_violation=violation,
                      iterations=sx.iterations,
                      dual=y, dual_objective=dual_objective,
                      cs_residual=max(cs_terms))


def lp_lower_bound(inst: HSInstance) -> float:
    """m / dmax, which no fractional cover can beat.

    Summing all constraints gives m <= sum_j degree(j) x_j <= dmax * 1'x.
    """
    d = inst_dmax(inst)
    if d == 0:
        raise DegenerateError("lower bound undefined for an all-zero matrix")
    return inst.m / d


def uniform_upper_bound(inst: HSInstance, c_tilde: float = 0.5,
                        p: Optional[float] = None) -> Optional[float]:
    """Value of the uniform candidate x_hat = min(1, 1/(c_tilde n p)) * 1.

    Returns its norm when x_hat is feasible for this instance (an upper
    bound on the LP value, of order 1/p in the dense regime) and None
    when some row is too thin to be covered by it.
    """
    if not 0.0 < c_tilde < 1.0:
        raise InvalidProbabilityError(f"c_tilde must lie in (0, 1), got {c_tilde!r}")
    if p is None:
        if inst.gen_meta is None:
            raise InvalidProbabilityError("p unknown: no gen_meta and none supplied")
        p = inst.gen_meta.p
    if not 0.0 < p <= 1.0:
        raise InvalidProbabilityError(f"p must lie in (0, 1], got {p!r}")
    entry = min(1.0, 1.0 / (c_tilde * inst.n * p))
    # row sum of x_hat is entry * popcount(row); feasible iff >= 1 everywhere
    min_width = min(r.bit_count() for r in inst.rows)
    if entry * min_width < 1.0 - 1e-12:
        return None
    return entry * inst.n
