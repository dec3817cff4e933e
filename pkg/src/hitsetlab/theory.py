"""Closed-form calculators: Lambert W, degree maxima, tail and pmf bounds.

Everything here is deterministic arithmetic on (n, m, p) and friends; no
instances are sampled.  Logs are natural throughout.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Optional

from .errors import (
    DomainError,
    IndexOutOfRangeError,
    InvalidProbabilityError,
    RegimeViolationError,
)
from .instance import RegimeKind, RegimeLabel, RegimeThresholds, classify_regime

_INV_E = math.exp(-1.0)


def lambert_w0(x: float) -> float:
    """Principal branch of w * exp(w) = x for x >= -1/e.

    Halley iteration seeded by log x - log log x for x >= e and by x
    itself for smaller arguments; converges to machine precision in a
    handful of steps everywhere except right at the branch point.
    """
    x = float(x)
    if math.isnan(x) or x < -_INV_E:
        raise DomainError(f"lambert_w0 requires x >= -1/e, got {x!r}")
    if x == 0.0:
        return 0.0
    if x >= math.e:
        logx = math.log(x)
        w = logx - math.log(logx)
    else:
        w = x
    for _ in range(80):
        ew = math.exp(w)
        f = w * ew - x
        wp1 = w + 1.0
        denom = ew * wp1 - (w + 2.0) * f / (2.0 * wp1)
        if denom == 0.0:
            break
        step = f / denom
        w -= step
        if abs(step) <= 1e-16 * max(1.0, abs(w)):
            break
    return w


def lambert_w0_bracket(x: float) -> tuple:
    """Elementary lower and upper bounds on lambert_w0(x) for x >= e.

    (log x - log log x + (log log x) / (2 log x),
     log x - log log x + (e / (e - 1)) * (log log x) / (log x))
    """
    x = float(x)
    if x < math.e:
        raise DomainError(f"bracket requires x >= e, got {x!r}")
    logx = math.log(x)
    loglogx = math.log(logx)
    base = logx - loglogx
    lo = base + 0.5 * loglogx / logx
    hi = base + (math.e / (math.e - 1.0)) * loglogx / logx
    return lo, hi


def chernoff_upper_tail(mu: float, delta_dev: float) -> float:
    """Bound exp(-delta**2 * mu / (2 + delta)) on P(X >= (1+delta) mu).

    Valid for sums of independent 0/1 variables with mean mu and any
    relative deviation delta > 0.
    """
    if not mu > 0.0:
        raise DomainError(f"mu must be positive, got {mu!r}")
    if not delta_dev > 0.0:
        raise DomainError(f"delta_dev must be positive, got {delta_dev!r}")
    return math.exp(-delta_dev * delta_dev * mu / (2.0 + delta_dev))


def binom_pmf_log(m: int, p: float, r: int) -> float:
    """log P(Binomial(m, p) = r); -inf off the support at p in {0, 1}."""
    if not (isinstance(p, (int, float)) and 0.0 <= float(p) <= 1.0):
        raise InvalidProbabilityError(f"p must lie in [0, 1], got {p!r}")
    if m < 0 or not 0 <= r <= m:
        raise IndexOutOfRangeError(f"need 0 <= r <= m, got r={r}, m={m}")
    p = float(p)
    if p == 0.0:
        return 0.0 if r == 0 else -math.inf
    if p == 1.0:
        return 0.0 if r == m else -math.inf
    log_comb = math.lgamma(m + 1) - math.lgamma(r + 1) - math.lgamma(m - r + 1)
    return log_comb + r * math.log(p) + (m - r) * math.log1p(-p)


class BoundVariant(Enum):
    SMALL_B = "small_b"
    LARGE_B = "large_b"


def binom_pmf_lower_bound_log(a: float, b: float, p: float,
                              variant: BoundVariant,
                              c_ratio: Optional[float] = None) -> float:
    """Elementary log lower bounds on P(Binomial(ceil(a), p) = ceil(b)).

    a and b may be real; the bounds are leading terms without their
    1 + o(1) factors.  SMALL_B gives -(b log(b / (a p)) - b + a p) and
    needs b >= c_ratio * a * p for some c_ratio > 1; LARGE_B gives the
    cruder -b log(b / (a p)).
    """
    a, b = float(a), float(b)
    if not 1.0 <= b <= a:
        raise DomainError(f"need 1 <= b <= a, got a={a}, b={b}")
    if not (isinstance(p, (int, float)) and 0.0 < float(p) < 1.0):
        raise InvalidProbabilityError(f"p must lie in (0, 1), got {p!r}")
    ap = a * float(p)
    ratio = b / ap
    if variant is BoundVariant.SMALL_B:
        if c_ratio is None or not c_ratio > 1.0:
            raise DomainError("SMALL_B needs a ratio constant c_ratio > 1")
        if b < c_ratio * ap:
            raise DomainError(
                f"SMALL_B needs b >= c_ratio * a * p, got b={b} < {c_ratio * ap:.6g}")
        return -(b * math.log(ratio) - b + ap)
    if variant is BoundVariant.LARGE_B:
        return -b * math.log(ratio)
    raise DomainError(f"unknown variant {variant!r}")


def _pmf_log_or_off_support(m: int, p: float, r: int) -> float:
    # off-support probabilities are 0, not errors
    if r < 0 or r > m or m < 0:
        return -math.inf
    return binom_pmf_log(m, p, r)


def binomial_monotonicity_check(m: int, p: float, r: int) -> tuple:
    """For r >= m*p, check pmf decay in r and growth in sample size.

    Returns (step_ok, sample_ok):
      step_ok:   P(Bin(m, p) = r + 1) <= P(Bin(m, p) = r)
      sample_ok: P(Bin(m - 1, p) = r) <= P(Bin(m, p) = r)
    Off-support events count as probability 0.  Both inequalities hold
    exactly in this range; a false return means the pmf code is broken.
    """
    if not (isinstance(p, (int, float)) and 0.0 < float(p) < 1.0):
        raise InvalidProbabilityError(f"p must lie in (0, 1), got {p!r}")
    if m < 1 or not 0 <= r <= m:
        raise IndexOutOfRangeError(f"need 0 <= r <= m, got r={r}, m={m}")
    if r < m * p:
        raise DomainError(f"monotonicity needs r >= m*p, got r={r} < {m * p:.6g}")
    here = binom_pmf_log(m, p, r)
    step = _pmf_log_or_off_support(m, p, r + 1)
    smaller = _pmf_log_or_off_support(m - 1, p, r)
    slack = 1e-12
    step_ok = step <= here + slack
    sample_ok = smaller <= here + slack
    return step_ok, sample_ok


# ---------------------------------------------------------------------------
# expected maximum degree

class DmaxFormula(Enum):
    GN_SPARSE = "gn_sparse"   # log n / log(log n / (m p))
    MP_DENSE = "mp_dense"     # m p


@dataclass(frozen=True)
class DmaxEstimate:
    value: float
    regime: RegimeLabel
    formula_used: DmaxFormula
    g_n: Optional[float]


def g_n(n: int, m: int, p: float) -> float:
    """Sparse-regime growth rate log n / log(log n / (m p)); needs mp < log n."""
    if not 0.0 < p < 1.0:
        raise InvalidProbabilityError(f"p must lie in (0, 1), got {p!r}")
    if n < 3 or m < 1:
        raise DomainError("need n >= 3 and m >= 1")
    logn = math.log(n)
    mp = m * p
    if mp >= logn:
        raise RegimeViolationError(
            f"g_n needs m*p < log n, got m*p = {mp:.6g}, log n = {logn:.6g}")
    return logn / math.log(logn / mp)


def expected_dmax_estimate(n: int, m: int, p: float,
                           thresholds: Optional[RegimeThresholds] = None,
                           force_formula: Optional[DmaxFormula] = None) -> DmaxEstimate:
    """First-order estimate of E[max column degree] for Bernoulli(p) entries.

    Sparse points use g_n, everything else uses m*p.  The maximum of n
    i.i.d. Binomial(m, p) degrees concentrates around these within
    constant factors.
    """
    if not 0.0 < p < 1.0:
        raise InvalidProbabilityError(f"p must lie in (0, 1), got {p!r}")
    if n < 3 or m < 1:
        raise DomainError("need n >= 3 and m >= 1")
    regime = classify_regime(n, m, p, thresholds)
    logn = math.log(n)
    mp = m * p
    gn = logn / math.log(logn / mp) if mp < logn else None

    formula = force_formula
    if formula is None:
        formula = DmaxFormula.GN_SPARSE if regime.kind is RegimeKind.SPARSE \
            else DmaxFormula.MP_DENSE
    if formula is DmaxFormula.GN_SPARSE:
        if gn is None:
            raise DomainError(
                f"GN_SPARSE formula needs m*p < log n, got m*p = {mp:.6g}")
        value = gn
    else:
        value = mp
    return DmaxEstimate(value=value, regime=regime, formula_used=formula, g_n=gn)


def dmax_variance_bound(m: int, p: float) -> float:
    """Upper bound m*p on Var(max degree); crude but distribution-free."""
    if not 0.0 < p < 1.0:
        raise InvalidProbabilityError(f"p must lie in (0, 1), got {p!r}")
    if m < 1:
        raise DomainError("need m >= 1")
    return m * p


@dataclass(frozen=True)
class SparseTarget:
    degree: int
    pmf_log: float


def sparse_target_degree(n: int, m: int, p: float, epsilon: float) -> SparseTarget:
    """Degree level ceil((epsilon / 8) * g_n) a sparse schedule aims at.

    Also reports log P(Binomial(m, p) = target) so callers can see how
    rare columns of that degree are.
    """
    if not epsilon > 0.0:
        raise DomainError(f"epsilon must be positive, got {epsilon!r}")
    gn = g_n(n, m, p)
    target = max(1, math.ceil((epsilon / 8.0) * gn))
    pmf_log = binom_pmf_log(m, p, target) if target <= m else -math.inf
    return SparseTarget(degree=target, pmf_log=pmf_log)
