"""Random and explicit hitting-set instances.

An instance is an m x n 0/1 incidence matrix: row i is a subset of the
ground set [n] = {1, ..., n}, and a hitting set is a set of columns that
meets every row.  Rows and columns are stored as packed Python-int bitsets
so membership tests, unions, and degree counts are single popcounts.

Public indices are 1-based (element j with 1 <= j <= n, subset i with
1 <= i <= m) to match the usual [m] x [n] convention; bit positions inside
the packed masks are 0-based.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Optional, Sequence

import numpy as np

from . import _rng
from .errors import (
    DimensionOverflowError,
    IndexOutOfRangeError,
    InvalidProbabilityError,
    ParseError,
)

GENERATOR_VERSION = "ctr-splitmix64-1"

# generation budget: m * n incidence cells
DEFAULT_MAX_CELLS = 1 << 27

_ROW_CHUNK = 2048  # rows per generation chunk; must stay a multiple of 8


@dataclass(frozen=True)
class GenMeta:
    """Provenance of a generated instance, enough to regenerate it exactly."""

    p: float
    seed: int
    generator_version: str = GENERATOR_VERSION


@dataclass(frozen=True)
class HSInstance:
    """Immutable incidence matrix with row and column bitset views.

    rows[i] bit j set means element j+1 belongs to subset i+1; cols[j] is
    the transpose view.  Both views are kept in sync by the constructors.
    """

    n: int
    m: int
    rows: tuple
    cols: tuple
    gen_meta: Optional[GenMeta] = None

    def full_row_mask(self) -> int:
        return (1 << self.m) - 1

    def to_dense(self) -> np.ndarray:
        """m x n uint8 matrix; rows are padded little-endian bitsets."""
        width = (self.n + 7) // 8
        buf = bytearray()
        for r in self.rows:
            buf += r.to_bytes(width, "little")
        bits = np.unpackbits(
            np.frombuffer(bytes(buf), dtype=np.uint8).reshape(self.m, width),
            axis=1, bitorder="little",
        )
        return bits[:, : self.n]


def _cols_from_rows(n: int, m: int, rows: Sequence[int]) -> tuple:
    """Transpose a sequence of row masks into column masks."""
    if m == 0:
        return tuple(0 for _ in range(n))
    width = (n + 7) // 8
    cols_bytes = [bytearray() for _ in range(n)]
    for i0 in range(0, m, _ROW_CHUNK):
        nrows = min(_ROW_CHUNK, m - i0)
        buf = bytearray()
        for r in rows[i0 : i0 + nrows]:
            buf += r.to_bytes(width, "little")
        bits = np.unpackbits(
            np.frombuffer(bytes(buf), dtype=np.uint8).reshape(nrows, width),
            axis=1, bitorder="little",
        )[:, :n]
        pad = (-nrows) % 8
        if pad:
            bits = np.vstack([bits, np.zeros((pad, n), dtype=np.uint8)])
        packed = np.packbits(np.ascontiguousarray(bits.T), axis=1, bitorder="little")
        for j in range(n):
            cols_bytes[j] += packed[j].tobytes()
    return tuple(int.from_bytes(bytes(b), "little") for b in cols_bytes)


def from_rows(n: int, row_masks: Sequence[int], gen_meta: Optional[GenMeta] = None) -> HSInstance:
    """Build an instance from 0-based row bitmasks."""
    if n < 1:
        raise ValueError("n must be at least 1")
    m = len(row_masks)
    if m < 1:
        raise ValueError("m must be at least 1")
    limit = 1 << n
    rows = []
    for i, r in enumerate(row_masks):
        r = int(r)
        if r < 0 or r >= limit:
            raise IndexOutOfRangeError(f"row {i + 1} mask has bits outside [1, {n}]")
        rows.append(r)
    return HSInstance(n=n, m=m, rows=tuple(rows), cols=_cols_from_rows(n, m, rows),
                      gen_meta=gen_meta)


def from_dense(matrix) -> HSInstance:
    """Build an instance from any m x n array-like of 0/1 entries."""
    arr = np.asarray(matrix)
    if arr.ndim != 2:
        raise ValueError("expected a 2-d array")
    m, n = arr.shape
    masks = []
    for i in range(m):
        mask = 0
        for j in range(n):
            if arr[i, j]:
                mask |= 1 << j
        masks.append(mask)
    return from_rows(n, masks)


def generate(n: int, m: int, p: float, seed: int,
             max_cells: int = DEFAULT_MAX_CELLS) -> HSInstance:
    """Sample an m x n matrix with i.i.d. Bernoulli(p) entries.

    Entry (i, j) (0-based) is bit number i*n + j of the stream keyed by
    seed, so the matrix is a pure function of (n, m, p, seed) regardless
    of chunking.

    Args:
        n: number of elements (columns), at least 1.
        m: number of subsets (rows), at least 1.
        p: inclusion probability, in [0, 1].
        seed: 64-bit stream key; wider ints are reduced mod 2**64.
        max_cells: refuse matrices with m*n above this budget.
    """
    if not (isinstance(p, (int, float)) and 0.0 <= float(p) <= 1.0):
        raise InvalidProbabilityError(f"p must lie in [0, 1], got {p!r}")
    if n < 1 or m < 1:
        raise ValueError("n and m must be at least 1")
    if m * n > max_cells:
        raise DimensionOverflowError(
            f"m*n = {m * n} exceeds the cell budget {max_cells}")
    seed &= _rng.MASK64
    p = float(p)

    row_masks: list = []
    cols_bytes = [bytearray() for _ in range(n)]
    for i0 in range(0, m, _ROW_CHUNK):
        nrows = min(_ROW_CHUNK, m - i0)
        bits = _rng.bernoulli_bits(seed, i0 * n, nrows * n, p).reshape(nrows, n)
        packed_rows = np.packbits(bits, axis=1, bitorder="little")
        row_masks.extend(int.from_bytes(pr.tobytes(), "little") for pr in packed_rows)
        pad = (-nrows) % 8
        if pad:
            bits = np.vstack([bits, np.zeros((pad, n), dtype=np.uint8)])
        packed_cols = np.packbits(np.ascontiguousarray(bits.T), axis=1, bitorder="little")
        for j in range(n):
            cols_bytes[j] += packed_cols[j].tobytes()
    cols = tuple(int.from_bytes(bytes(b), "little") for b in cols_bytes)
    return HSInstance(n=n, m=m, rows=tuple(row_masks), cols=cols,
                      gen_meta=GenMeta(p=p, seed=seed))


def degree(inst: HSInstance, j: int) -> int:
    """Number of subsets containing element j (1-based)."""
    if not 1 <= j <= inst.n:
        raise IndexOutOfRangeError(f"element index {j} outside [1, {inst.n}]")
    return inst.cols[j - 1].bit_count()


def dmax(inst: HSInstance) -> int:
    """Maximum column degree; 0 only for an all-zero matrix."""
    return max(c.bit_count() for c in inst.cols)


def is_hitting_set(inst: HSInstance, elements: Iterable[int]) -> bool:
    """True iff the 1-based element set meets every row."""
    covered = 0
    for j in elements:
        j = int(j)
        if not 1 <= j <= inst.n:
            raise IndexOutOfRangeError(f"element index {j} outside [1, {inst.n}]")
        covered |= inst.cols[j - 1]
    return covered == inst.full_row_mask()


# ---------------------------------------------------------------------------
# density regimes

class RegimeKind(Enum):
    SPARSE = "sparse"
    THRESHOLD = "threshold"
    DENSE = "dense"
    POLY_DENSE = "polydense"


@dataclass(frozen=True)
class RegimeThresholds:
    """Classification cutoffs; configuration, not constants of nature."""

    t_lo: float = 0.5
    t_hi: float = 2.0
    gamma0: float = 0.1


DEFAULT_THRESHOLDS = RegimeThresholds()


@dataclass(frozen=True)
class RegimeLabel:
    kind: RegimeKind
    ratio: float            # m*p / log(n)
    polydense: bool         # log(m*p) >= gamma0 * log(n)


def classify_regime(n: int, m: int, p: float,
                    thresholds: Optional[RegimeThresholds] = None) -> RegimeLabel:
    """Label (n, m, p) by how m*p compares with log n.

    Below t_lo * log n is sparse, above t_hi * log n is dense, in between
    is the threshold window.  A dense point is promoted to polydense when
    log(m*p) >= gamma0 * log(n).
    """
    th = thresholds or DEFAULT_THRESHOLDS
    if not 0.0 < p <= 1.0:
        raise InvalidProbabilityError(f"p must lie in (0, 1], got {p!r}")
    if n < 2 or m < 1:
        raise ValueError("need n >= 2 and m >= 1")
    logn = math.log(n)
    mp = m * p
    ratio = mp / logn
    poly = math.log(mp) >= th.gamma0 * logn
    if mp < th.t_lo * logn:
        kind = RegimeKind.SPARSE
    elif mp > th.t_hi * logn:
        kind = RegimeKind.POLY_DENSE if poly else RegimeKind.DENSE
    else:
        kind = RegimeKind.THRESHOLD
    return RegimeLabel(kind=kind, ratio=ratio, polydense=poly)


@dataclass(frozen=True)
class AssumptionClause:
    name: str
    passed: bool
    detail: str


def assumption_check(n: int, m: int, p: float, delta: float,
                     c: Optional[float] = None, C: Optional[float] = None) -> list:
    """Report whether (n, m, p) sits in the analyzed parameter range.

    Checks n**(-delta) <= p <= 1/2 and, when the polynomial-growth
    constants are supplied, c * n**c <= m <= C * n**C.  Pure report: it
    never rejects an instance.
    """
    if not 0.0 < delta < 1.0:
        raise ValueError(f"delta must lie in (0, 1), got {delta!r}")
    clauses = []
    lo = n ** (-delta)
    clauses.append(AssumptionClause(
        name="p-range",
        passed=lo <= p <= 0.5,
        detail=f"n^-delta = {lo:.6g} <= p = {p:.6g} <= 0.5",
    ))
    if c is not None:
        clauses.append(AssumptionClause(
            name="m-poly-lower",
            passed=c * n ** c <= m,
            detail=f"c*n^c = {c * n ** c:.6g} <= m = {m}",
        ))
    if C is not None:
        clauses.append(AssumptionClause(
            name="m-poly-upper",
            passed=m <= C * n ** C,
            detail=f"m = {m} <= C*n^C = {C * n ** C:.6g}",
        ))
    return clauses


# ---------------------------------------------------------------------------
# text format
#
#   hs <m> <n>
#   meta p=<float> seed=<uint64> gen=<string>     (optional)
#   <m lines of n characters, each 0 or 1>
#
# LF line endings, no trailing whitespace, file ends with a newline.

_META_RE = re.compile(r"^meta p=(\S+) seed=(\d+) gen=(\S+)$")


def _row_to_text(mask: int, n: int) -> str:
    return format(mask, f"0{n}b")[::-1]


def serialize(inst: HSInstance) -> str:
    lines = [f"hs {inst.m} {inst.n}"]
    if inst.gen_meta is not None:
        g = inst.gen_meta
        lines.append(f"meta p={g.p!r} seed={g.seed} gen={g.generator_version}")
    lines.extend(_row_to_text(r, inst.n) for r in inst.rows)
    return "\n".join(lines) + "\n"


def save(inst: HSInstance, path) -> None:
    with open(path, "w", newline="") as fh:
        fh.write(serialize(inst))


def parse(text: str) -> HSInstance:
    lines = text.split("\n")
    if lines and lines[-1] == "":
        lines.pop()
    elif lines:
        raise ParseError("file must end with a newline", line=len(lines))
    if not lines:
        raise ParseError("empty file", line=1)

    header = lines[0]
    parts = header.split(" ")
    if len(parts) != 3 or parts[0] != "hs":
        raise ParseError(f"bad header {header!r}, expected 'hs <m> <n>'", line=1)
    try:
        m, n = int(parts[1]), int(parts[2])
    except ValueError:
        raise ParseError(f"bad header {header!r}, m and n must be integers", line=1)
    if m < 1 or n < 1:
        raise ParseError(f"bad dimensions m={m} n={n}", line=1)

    idx = 1
    gen_meta = None
    if idx < len(lines) and lines[idx].startswith("meta "):
        match = _META_RE.match(lines[idx])
        if not match:
            raise ParseError("bad meta line, expected 'meta p=<p> seed=<seed> gen=<tag>'",
                             line=idx + 1)
        try:
            meta_p = float(match.group(1))
        except ValueError:
            raise ParseError(f"bad meta p value {match.group(1)!r}", line=idx + 1)
        gen_meta = GenMeta(p=meta_p, seed=int(match.group(2)),
                           generator_version=match.group(3))
        idx += 1

    if len(lines) - idx != m:
        raise ParseError(f"expected {m} row lines, found {len(lines) - idx}",
                         line=idx + 1)
    rows = []
    for r in range(m):
        line = lines[idx + r]
        if len(line) != n:
            raise ParseError(f"row has length {len(line)}, expected {n}",
                             line=idx + r + 1, column=min(len(line), n) + 1)
        mask = 0
        for col, ch in enumerate(line):
            if ch == "1":
                mask |= 1 << col
            elif ch != "0":
                raise ParseError(f"invalid character {ch!r}",
                                 line=idx + r + 1, column=col + 1)
        rows.append(mask)
    return HSInstance(n=n, m=m, rows=tuple(rows), cols=_cols_from_rows(n, m, rows),
                      gen_meta=gen_meta)


def load(path) -> HSInstance:
    with open(path, "r", newline="") as fh:
        text = fh.read()
    if "\r" in text:
        raise ParseError("carriage returns not allowed, use LF line endings")
    return parse(text)
