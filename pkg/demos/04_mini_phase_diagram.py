"""A shrunk version of the production sweep: a handful of grid points
spanning sparse to dense, exact covers included, gap report and plot
data at the end.

Everything is small enough to finish in well under a minute; scale the
grid up (and drop the exact solvers) to reproduce the real diagram.

Run:  python3 demos/04_mini_phase_diagram.py
"""

import tempfile
from pathlib import Path

from hitsetlab.experiments import (
    ExperimentConfig,
    GridPoint,
    emit_plot_data,
    gap_report,
    report_to_text,
    run_sweep,
    write_records_csv,
)

CONFIG = ExperimentConfig(
    grid=(
        GridPoint(300, "18", "0.1"),     # mp well under log n
        GridPoint(120, "24", "0.2"),     # threshold window
        GridPoint(24, "26", "0.35"),     # dense, small enough for exact
    ),
    trials=6,
    base_seed=29,
    solvers=("greedy", "block_greedy", "lp", "ip_exact"),
)


def main() -> None:
    records = run_sweep(CONFIG)
    out = Path(tempfile.mkdtemp(prefix="hitset_demo_"))

    write_records_csv(records, out / "sweep.csv")
    print(f"wrote {len(records)} records to {out / 'sweep.csv'}\n")

    print(report_to_text(gap_report(records)))

    emit_plot_data(records, out / "diagram.txt")
    print(f"\nplot data (x = log(mp)/log n, y = median gaps) in "
          f"{out / 'diagram.txt'}:")
    print((out / "diagram.txt").read_text())


if __name__ == "__main__":
    main()
