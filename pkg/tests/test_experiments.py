"""Sweep harness: grid resolution, trials, CSV persistence, reports, configs."""

import dataclasses
import math

import pytest

from hitsetlab._rng import split_seed
from hitsetlab.errors import ConfigError, EmptyInputError, ParseError
from hitsetlab.experiments import (
    CSV_HEADER,
    REPORT_HEADER,
    ExperimentConfig,
    ExperimentRecord,
    GridPoint,
    conjecture_probe,
    emit_plot_data,
    gap_report,
    load_config,
    parse_solvers,
    probe_to_text,
    read_records_csv,
    record_to_csv_row,
    report_to_csv,
    report_to_text,
    resolve_grid_point,
    run_sweep,
    run_trial,
    validate_config,
    write_records_csv,
)
from hitsetlab.greedy import block_greedy, build_schedule, greedy
from hitsetlab.instance import from_rows, generate
from hitsetlab.ip import solve_ip_bruteforce
from hitsetlab.lp import solve_lp


# ---------------------------------------------------------------------------
# grid and solver specs

def test_resolve_grid_point():
    assert resolve_grid_point(GridPoint(100, "50", "0.1")) == (100, 50, 0.1)
    n, m, p = resolve_grid_point(GridPoint(100, "2*n^1.5", "1*n^-0.5"))
    assert n == 100 and m == 2000
    assert p == pytest.approx(0.1)
    # m is floored
    assert resolve_grid_point(GridPoint(5, "0.5*n^1", "0.2"))[1] == 2


def test_resolve_grid_point_errors():
    with pytest.raises(ConfigError):
        resolve_grid_point(GridPoint(1, "5", "0.1"))
    with pytest.raises(ConfigError):
        resolve_grid_point(GridPoint(10, "0.001*n^0", "0.1"))  # floors to 0
    with pytest.raises(ConfigError):
        resolve_grid_point(GridPoint(10, "5", "2"))
    with pytest.raises(ConfigError):
        resolve_grid_point(GridPoint(10, "5", "0"))
    with pytest.raises(ConfigError):
        resolve_grid_point(GridPoint(10, "abc", "0.1"))
    with pytest.raises(ConfigError):
        resolve_grid_point(GridPoint(10, "1e308*n^5", "0.1"))  # overflows


def test_parse_solvers():
    assert parse_solvers(["greedy", "lp"]) == (("greedy", "lp"), None, None)
    names, j, nodes = parse_solvers(["best_of(64)", "ip_exact:100000"])
    assert names == ("best_of", "ip_exact")
    assert j == 64 and nodes == 100000
    # duplicates collapse, first occurrence wins the order
    assert parse_solvers(["greedy", "greedy"]) == (("greedy",), None, None)
    with pytest.raises(ConfigError):
        parse_solvers(["sat"])
    with pytest.raises(ConfigError):
        parse_solvers(["best_of(x)"])
    with pytest.raises(ConfigError):
        parse_solvers(["greedy(3)"])
    with pytest.raises(ConfigError):
        parse_solvers([])


def test_validate_config():
    good = ExperimentConfig(grid=(GridPoint(10, "5", "0.3"),))
    validate_config(good)
    with pytest.raises(ConfigError):
        validate_config(dataclasses.replace(good, grid=()))
    with pytest.raises(ConfigError):
        validate_config(dataclasses.replace(good, trials=0))
    with pytest.raises(ConfigError):
        validate_config(dataclasses.replace(good, parallelism=0))
    with pytest.raises(ConfigError):
        validate_config(dataclasses.replace(good, best_of_j=0))
    with pytest.raises(ConfigError):
        validate_config(dataclasses.replace(good, solvers=("greedy", "sat")))
    with pytest.raises(ConfigError):
        validate_config(dataclasses.replace(good, solvers=()))


# ---------------------------------------------------------------------------
# single trials

FULL_SOLVERS = ("greedy", "block_greedy", "lp", "lp_bounds", "ip_exact",
                "ip_bruteforce")


def test_run_trial_matches_direct_calls():
    config = ExperimentConfig(grid=(GridPoint(12, "10", "0.3"),), trials=1,
                              base_seed=5, solvers=FULL_SOLVERS)
    rec = run_trial(config, 0, 0)
    seed = split_seed(5, 0, 0)
    assert rec.seed == seed
    inst = generate(12, 10, 0.3, seed)
    sched = build_schedule(12, 10, 0.3, 0.25)
    assert rec.regime == "threshold"
    assert rec.dmax == 4
    assert rec.val_lp == pytest.approx(solve_lp(inst).value) == pytest.approx(4.0)
    assert rec.lp_lb == pytest.approx(2.5)
    assert rec.lp_ub_uniform is None  # a thin row defeats the uniform candidate
    assert rec.val_ip == solve_ip_bruteforce(inst).solution.value == 4
    assert rec.ip_optimal is True
    assert rec.val_gr == greedy(inst).value == 5
    assert rec.k_blocks == sched.K == 6
    assert rec.val_bgr == block_greedy(inst, sched, split_seed(seed, 120)).value == 5
    assert rec.trivial_fallback is False
    assert rec.gap_ip_lp == pytest.approx(1.0)
    assert rec.gap_gr_ip == pytest.approx(1.25)
    assert rec.gap_bgr_ip == pytest.approx(1.25)
    assert rec.rt_lp_ms is None  # timings stay empty unless enabled
    assert rec.error == ""


def test_run_trial_records_solver_errors():
    config = ExperimentConfig(grid=(GridPoint(5, "4", "0.03"),), trials=1,
                              base_seed=0,
                              solvers=("greedy", "block_greedy", "lp", "ip_exact"))
    rec = run_trial(config, 0, 0)  # this seed yields an all-zero row
    assert rec.error == ("lp:infeasible;greedy:infeasible;"
                         "block_greedy:InfeasibleError;ip:infeasible")
    assert rec.val_lp is None and rec.val_gr is None and rec.val_ip is None
    assert rec.dmax == 1


def test_run_trial_generate_failure_row():
    config = ExperimentConfig(grid=(GridPoint(20000, "10000", "0.5"),), trials=1,
                              solvers=("greedy",))
    rec = run_trial(config, 0, 0)
    assert rec.error == "generate:DimensionOverflowError"
    assert rec.regime is None and rec.dmax is None and rec.val_gr is None


def test_run_trial_with_provider_and_timings():
    def provider(n, m, p, seed):
        return from_rows(n, [1 << i for i in range(m)])

    config = ExperimentConfig(grid=(GridPoint(8, "8", "0.4"),), trials=1,
                              solvers=("greedy", "lp"), record_timings=True)
    rec = run_trial(config, 0, 0, instance_provider=provider)
    assert rec.val_gr == 8  # disjoint singleton rows
    assert rec.val_lp == pytest.approx(8.0)
    assert rec.rt_gr_ms is not None and rec.rt_gr_ms >= 0.0
    assert rec.rt_lp_ms is not None


# ---------------------------------------------------------------------------
# CSV persistence

def test_record_csv_row_golden():
    config = ExperimentConfig(grid=(GridPoint(12, "10", "0.3"),), trials=1,
                              base_seed=5, solvers=FULL_SOLVERS)
    rec = run_trial(config, 0, 0)
    assert record_to_csv_row(rec) == (
        "12,10,0.3,18074882946671919669,threshold,4,4,2.5,,4,true,5,5,6,"
        "false,1,1.25,1.25,,,,,")


def test_csv_cell_escaping():
    rec = ExperimentRecord(n=3, m=2, p=0.25, seed=1, error="a,b\nc")
    assert record_to_csv_row(rec).endswith(",a;b;c")


def test_csv_roundtrip(tmp_path):
    config = ExperimentConfig(
        grid=(GridPoint(12, "10", "0.3"), GridPoint(16, "8", "0.25")),
        trials=2, base_seed=5, solvers=FULL_SOLVERS,
        output_path=str(tmp_path / "sweep.csv"))
    records = run_sweep(config)
    assert len(records) == 4
    back = read_records_csv(config.output_path)
    # one formatting pass is a fixed point: rewriting changes nothing
    assert [record_to_csv_row(r) for r in back] == \
        [record_to_csv_row(r) for r in records]
    assert [(r.n, r.m, r.seed, r.val_ip, r.error) for r in back] == \
        [(r.n, r.m, r.seed, r.val_ip, r.error) for r in records]


def test_read_records_csv_errors(tmp_path):
    path = tmp_path / "bad.csv"
    path.write_text("nope\n")
    with pytest.raises(ParseError) as err:
        read_records_csv(path)
    assert err.value.line == 1

    path.write_text(CSV_HEADER + "\n1,2\n")
    with pytest.raises(ParseError) as err:
        read_records_csv(path)
    assert err.value.line == 2

    row = "12,10,0.3,7," + "," * 18
    path.write_text(CSV_HEADER + "\n" + row + "\n" + row.replace("12,", "x,", 1) + "\n")
    with pytest.raises(ParseError) as err:
        read_records_csv(path)
    assert err.value.line == 3 and "bad n" in str(err.value)

    path.write_text(CSV_HEADER + "\n" + ",10,0.3,7," + "," * 18 + "\n")
    with pytest.raises(ParseError):
        read_records_csv(path)  # missing n

    path.write_text(CSV_HEADER + "\n")
    with pytest.raises(EmptyInputError):
        read_records_csv(path)


# ---------------------------------------------------------------------------
# reports

def _toy_records():
    base = dict(n=10, m=5, p=0.5, regime="dense", val_lp=2.0)
    rows = []
    for gap, fb in ((1.0, False), (2.0, True), (4.0, False)):
        rows.append(ExperimentRecord(seed=len(rows), gap_ip_lp=gap,
                                     gap_gr_ip=None, gap_bgr_ip=gap + 1,
                                     trivial_fallback=fb, **base))
    rows.append(ExperimentRecord(n=20, m=9, p=0.25, seed=9, regime="sparse",
                                 gap_ip_lp=3.0))
    return rows


def test_gap_report_hand_checked():
    rows = gap_report(_toy_records())
    assert len(rows) == 2
    first = rows[0]
    assert (first.n, first.m, first.p) == (10, 5, 0.5)
    assert first.records == 3 and first.trivial_fallbacks == 1
    assert first.regime == "dense"
    assert first.med_gap_ip_lp == pytest.approx(2.0)
    assert first.iqr_gap_ip_lp == pytest.approx(1.5)  # inclusive quartiles of 1,2,4
    assert first.med_gap_gr_ip is None and first.iqr_gap_gr_ip is None
    assert first.med_gap_bgr_ip == pytest.approx(3.0)
    second = rows[1]
    assert second.records == 1
    assert second.med_gap_ip_lp == pytest.approx(3.0)
    assert second.iqr_gap_ip_lp == 0.0
    with pytest.raises(EmptyInputError):
        gap_report([])


def test_gap_report_from_path(tmp_path):
    path = tmp_path / "rows.csv"
    write_records_csv(_toy_records(), path)
    rows = gap_report(path)
    assert rows[0].med_gap_ip_lp == pytest.approx(2.0)


def test_report_rendering():
    rows = gap_report(_toy_records())
    csv_text = report_to_csv(rows)
    lines = csv_text.splitlines()
    assert lines[0] == REPORT_HEADER
    assert lines[1].startswith("10,5,0.5,dense,3,1,2,1.5,")
    text = report_to_text(rows)
    tlines = text.splitlines()
    assert tlines[0].split() == REPORT_HEADER.split(",")
    assert "-" in tlines[1].split()  # missing medians render as dashes


# ---------------------------------------------------------------------------
# probes and plot data

def test_conjecture_probe():
    config = ExperimentConfig(grid=(GridPoint(30, "20", "0.2"),), trials=2,
                              base_seed=1, solvers=("greedy", "lp"),
                              conjecture_regime="sparse")
    rows = conjecture_probe(config)
    assert len(rows) == 1
    assert rows[0].records == 2
    assert rows[0].med_gr_lp is not None and rows[0].med_gr_lp >= 1.0
    assert rows[0].med_ip_lp is None  # no exact solver enabled
    text = probe_to_text(rows)
    assert text.splitlines()[0].split() == \
        "n,m,p,records,med_gr_lp,med_ip_lp,med_gr_ip".split(",")
    with pytest.raises(ConfigError):
        conjecture_probe(dataclasses.replace(config, conjecture_regime=None))
    with pytest.raises(ConfigError):
        conjecture_probe(dataclasses.replace(config, conjecture_regime="polylog"))


def test_emit_plot_data(tmp_path):
    base = dict(regime="dense", val_lp=2.0)
    records = [
        ExperimentRecord(n=100, m=1000, p=0.1, seed=0, gap_ip_lp=1.5, **base),
        ExperimentRecord(n=100, m=1000, p=0.1, seed=1, gap_ip_lp=2.5, **base),
        # no exact value here: falls back to the block ratio 4 / 2
        ExperimentRecord(n=100, m=100, p=0.01, seed=2, val_bgr=4, **base),
    ]
    out = tmp_path / "plot.dat"
    emit_plot_data(records, out)
    lines = out.read_text().splitlines()
    assert lines[0].startswith("# b d gap")
    assert lines[1] == "1.5 0.5 2"
    assert lines[2] == "1 1 2"
    assert lines[3] == ""
    assert lines[4] == "# separatrix mp = log n at n = 100"
    sep = [tuple(map(float, ln.split())) for ln in lines[5:]]
    assert len(sep) == 21
    shift = math.log(math.log(100)) / math.log(100)
    assert sep[0][0] == pytest.approx(1.0)
    assert sep[0][1] == pytest.approx(1.0 - shift)
    assert sep[-1][0] == pytest.approx(1.5)
    assert sep[-1][1] == pytest.approx(1.5 - shift)


# ---------------------------------------------------------------------------
# config files

CONFIG_TEXT = """\
# two-point ladder
point = n=100 m=2*n^0.5 p=0.1   # power-law m
point = n=50 m=10 p=0.2
trials = 4
base_seed = 9
parallelism = 2
epsilon = 0.3
solvers = greedy, lp, best_of(8), ip_exact:500
out = OUTPATH
force_large = true
record_timings = false
conjecture = dense
"""


def test_load_config(tmp_path):
    path = tmp_path / "sweep.conf"
    out = tmp_path / "records.csv"
    path.write_text(CONFIG_TEXT.replace("OUTPATH", str(out)))
    config = load_config(path)
    assert config.grid == (GridPoint(100, "2*n^0.5", "0.1"),
                           GridPoint(50, "10", "0.2"))
    assert config.trials == 4 and config.base_seed == 9
    assert config.parallelism == 2
    assert config.schedule_epsilon == pytest.approx(0.3)
    assert config.solvers == ("greedy", "lp", "best_of", "ip_exact")
    assert config.best_of_j == 8
    assert config.ip_node_limit == 500
    assert config.output_path == str(out)
    assert config.force_large is True
    assert config.record_timings is False
    assert config.conjecture_regime == "dense"


@pytest.mark.parametrize("text,needle", [
    ("point = n=10 m=5 p=0.1\ntrials = x\n", "line 2"),
    ("point = n=abc m=5 p=0.1\n", "line 1"),
    ("point = m=5 p=0.1\n", "line 1"),
    ("point = n=10 m=5 p=0.1\nnonsense\n", "line 2"),
    ("point = n=10 m=5 p=0.1\nbogus = 1\n", "line 2"),
    ("trials = 3\n", "no grid points"),
    ("point = n=10 m=5 p=0.1\nconjecture = polylog\n", "conjecture"),
])
def test_load_config_errors(tmp_path, text, needle):
    path = tmp_path / "bad.conf"
    path.write_text(text)
    with pytest.raises(ConfigError) as err:
        load_config(path)
    assert needle in str(err.value)


# ---------------------------------------------------------------------------
# determinism

def test_sweep_parallelism_invariance():
    config = ExperimentConfig(
        grid=(GridPoint(16, "12", "0.3"), GridPoint(20, "10", "0.25")),
        trials=3, base_seed=3, solvers=("greedy", "block_greedy", "lp"))
    serial = run_sweep(config)
    parallel = run_sweep(dataclasses.replace(config, parallelism=2))
    assert serial == parallel


def test_sweep_trial_prefix_stability():
    config = ExperimentConfig(grid=(GridPoint(16, "12", "0.3"),), trials=3,
                              base_seed=3, solvers=("greedy",))
    short = run_sweep(config)
    long = run_sweep(dataclasses.replace(config, trials=6))
    assert long[:3] == short
