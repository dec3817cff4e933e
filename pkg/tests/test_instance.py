"""Instance generation, masks, regimes, and the text format."""

import math
import random

import numpy as np
import pytest

from hitsetlab._rng import split_seed, stream_word
from hitsetlab.errors import (
    DimensionOverflowError,
    IndexOutOfRangeError,
    InvalidProbabilityError,
    ParseError,
)
from hitsetlab.instance import (
    GenMeta,
    RegimeKind,
    RegimeThresholds,
    assumption_check,
    classify_regime,
    degree,
    dmax,
    from_dense,
    from_rows,
    generate,
    is_hitting_set,
    load,
    parse,
    save,
    serialize,
)

SEED42_DENSE = [
    [0, 1, 1, 1, 1, 0],
    [1, 0, 1, 0, 1, 0],
    [0, 0, 0, 1, 1, 0],
    [1, 0, 0, 1, 0, 0],
    [1, 1, 0, 0, 0, 0],
]

SEED42_TEXT = (
    "hs 5 6\n"
    "meta p=0.4 seed=42 gen=ctr-splitmix64-1\n"
    "011110\n"
    "101010\n"
    "000110\n"
    "100100\n"
    "110000\n"
)


def test_generate_seed42_golden():
    inst = generate(6, 5, 0.4, seed=42)
    assert inst.to_dense().tolist() == SEED42_DENSE
    assert dmax(inst) == 3
    assert inst.gen_meta == GenMeta(p=0.4, seed=42)


def test_generate_deterministic():
    a = generate(40, 30, 0.17, seed=900)
    b = generate(40, 30, 0.17, seed=900)
    assert a.rows == b.rows and a.cols == b.cols


def test_generate_entry_matches_stream_word():
    # entry (i, j) is drawn from counter word i*n + j of the instance seed
    n, m, p, seed = 9, 7, 0.31, 5150
    inst = generate(n, m, p, seed=seed)
    threshold = int(p * 2.0**64)
    for i in range(m):
        for j in range(n):
            bit = (inst.rows[i] >> j) & 1
            expect = 1 if stream_word(seed, i * n + j) < threshold else 0
            assert bit == expect, f"entry ({i + 1}, {j + 1}) disagrees with the stream"


def test_generate_seed_changes_matrix():
    base = generate(30, 20, 0.3, seed=1)
    assert base.rows != generate(30, 20, 0.3, seed=2).rows


def test_generate_p_extremes():
    assert all(r == 0 for r in generate(8, 4, 0.0, seed=3).rows)
    full = generate(8, 4, 1.0, seed=3)
    assert all(r == (1 << 8) - 1 for r in full.rows)


def test_generate_validation():
    with pytest.raises(InvalidProbabilityError):
        generate(4, 4, 1.5, seed=0)
    with pytest.raises(InvalidProbabilityError):
        generate(4, 4, -0.25, seed=0)
    with pytest.raises(ValueError):
        generate(0, 4, 0.5, seed=0)
    with pytest.raises(DimensionOverflowError):
        generate(2**18, 2**17, 0.5, seed=0)


def test_generate_density_close_to_p():
    # marginal check: cell frequency within 4 sigma of p
    n, m, p = 400, 300, 0.23
    inst = generate(n, m, p, seed=77)
    ones = sum(r.bit_count() for r in inst.rows)
    cells = n * m
    sigma = math.sqrt(cells * p * (1 - p))
    assert abs(ones - cells * p) < 4 * sigma, f"{ones} ones vs expected {cells * p:.0f}"


def test_rows_cols_consistency_fuzz():
    rng = random.Random(4242)
    for trial in range(60):
        n = rng.randint(1, 40)
        m = rng.randint(1, 40)
        inst = generate(n, m, rng.random(), seed=rng.getrandbits(32))
        assert len(inst.rows) == m and len(inst.cols) == n
        for j in range(n):
            expect = 0
            for i in range(m):
                if (inst.rows[i] >> j) & 1:
                    expect |= 1 << i
            assert inst.cols[j] == expect, f"trial {trial}: column {j + 1} mask mismatch"
        assert sum(r.bit_count() for r in inst.rows) == \
            sum(c.bit_count() for c in inst.cols)


def test_from_rows_and_degree():
    inst = from_rows(3, [0b011, 0b100])
    assert degree(inst, 1) == 1 and degree(inst, 2) == 1 and degree(inst, 3) == 1
    assert dmax(inst) == 1
    with pytest.raises(IndexOutOfRangeError):
        degree(inst, 0)
    with pytest.raises(IndexOutOfRangeError):
        degree(inst, 4)
    with pytest.raises(IndexOutOfRangeError):
        from_rows(2, [0b100])  # bit beyond n
    with pytest.raises(ValueError):
        from_rows(0, [])


def test_from_dense_rejects_non_2d():
    with pytest.raises(ValueError):
        from_dense([1, 0, 1])


def test_is_hitting_set_one_based():
    inst = from_dense(SEED42_DENSE)
    assert is_hitting_set(inst, [1, 4])
    assert not is_hitting_set(inst, [1])
    assert not is_hitting_set(inst, [])
    with pytest.raises(IndexOutOfRangeError):
        is_hitting_set(inst, [0])
    with pytest.raises(IndexOutOfRangeError):
        is_hitting_set(inst, [7])


def test_split_seed_departs_from_matrix_block():
    # the sweep shuffle seed sits at counter m*n, just past the matrix words
    n, m, seed = 11, 6, 31337
    words = {stream_word(seed, c) for c in range(m * n)}
    assert split_seed(seed, m * n) not in words


def test_split_seed_composes():
    assert split_seed(99, 3, 7) == split_seed(split_seed(99, 3), 7)


def test_serialize_golden_and_roundtrip():
    inst = generate(6, 5, 0.4, seed=42)
    assert serialize(inst) == SEED42_TEXT
    back = parse(serialize(inst))
    assert back.rows == inst.rows
    assert back.gen_meta == inst.gen_meta


def test_save_load_roundtrip(tmp_path):
    inst = generate(13, 9, 0.4, seed=8)
    path = tmp_path / "inst.hs"
    save(inst, path)
    assert load(path).rows == inst.rows


def test_parse_without_meta():
    inst = parse("hs 2 3\n010\n111\n")
    assert inst.gen_meta is None
    assert inst.rows == (0b010, 0b111)


def test_parse_errors():
    for text in (
        "",                            # empty
        "hs 2\n01\n10\n",              # bad header arity
        "xx 2 2\n01\n10\n",            # wrong magic
        "hs 2 2\n01\n",                # missing row
        "hs 1 2\n01\n10\n",            # extra row
        "hs 2 2\n012\n10\n",           # bad digit... and too wide
        "hs 2 2\n0\n10\n",             # short row
        "hs 2 2\nmeta p=x seed=1 gen=g\n01\n10\n",  # unparseable p
        "hs 2 2\n01\n10",              # missing final newline
    ):
        with pytest.raises(ParseError):
            parse(text)


def test_parse_error_carries_line_number():
    with pytest.raises(ParseError) as err:
        parse("hs 2 2\n01\n1x\n")
    assert err.value.line == 3
    assert err.value.column == 2


def test_classify_regime_boundaries():
    # cutoffs sit at t_lo * log n and t_hi * log n of mean column degree m*p
    assert classify_regime(1000, 100, 0.01).kind is RegimeKind.SPARSE
    assert classify_regime(1000, 100, 0.069).kind is RegimeKind.THRESHOLD
    dense_lbl = classify_regime(1000, 2000, 0.05)
    assert dense_lbl.kind is RegimeKind.POLY_DENSE  # log(100) >= 0.1 log 1000
    assert dense_lbl.polydense
    assert dense_lbl.ratio == pytest.approx(100 / math.log(1000))


def test_classify_regime_custom_thresholds():
    th = RegimeThresholds(t_lo=0.5, t_hi=2.0, gamma0=0.9)
    lbl = classify_regime(1000, 2000, 0.05, th)
    assert lbl.kind is RegimeKind.DENSE  # log(100) = 4.6 < 0.9 log 1000 = 6.2
    assert not lbl.polydense


def test_classify_regime_validation():
    with pytest.raises(InvalidProbabilityError):
        classify_regime(100, 10, 0.0)
    with pytest.raises(ValueError):
        classify_regime(1, 10, 0.5)


def test_assumption_check_clauses():
    clauses = assumption_check(10_000, 50, 0.02, delta=0.5)
    assert [cl.name for cl in clauses] == ["p-range"]
    assert clauses[0].passed  # n^-0.5 = 0.01 <= 0.02 <= 0.5
    full = assumption_check(100, 50, 0.2, delta=0.5, c=0.5, C=2.0)
    assert [cl.name for cl in full] == ["p-range", "m-poly-lower", "m-poly-upper"]
    assert all(cl.detail for cl in full)
    with pytest.raises(ValueError):
        assumption_check(100, 50, 0.2, delta=1.5)


def test_column_degree_law_matches_binomial_max():
    # the corridor tests sample Binomial(m, p) maxima instead of full
    # instances; this anchors that shortcut: generated column degrees
    # are iid Binomial(m, p), so dmax means agree within MC noise
    n, m, p, trials = 8, 12, 0.3, 4000
    inst_dmax = np.array([
        float(dmax(generate(n, m, p, seed=split_seed(7007, t))))
        for t in range(trials)])
    rng = np.random.default_rng(7008)
    binom_dmax = rng.binomial(m, p, size=(trials, n)).max(axis=1)
    se = math.hypot(inst_dmax.std(ddof=1), binom_dmax.std(ddof=1))
    se /= math.sqrt(trials)
    assert abs(inst_dmax.mean() - binom_dmax.mean()) <= 3 * se
