"""Closed-form calculators next to the Monte Carlo quantities they
predict.

Run:  python3 demos/03_theory_walkthrough.py
"""

import math
import random

from hitsetlab.instance import dmax, generate
from hitsetlab.ip import expected_Zk_log, first_moment_thresholds
from hitsetlab.theory import (
    chernoff_upper_tail,
    dmax_variance_bound,
    expected_dmax_estimate,
    g_n,
    lambert_w0,
    lambert_w0_bracket,
)


def main() -> None:
    print("Lambert W, principal branch")
    for x in (math.e, 100.0, 1e6):
        w = lambert_w0(x)
        lo, hi = lambert_w0_bracket(x)
        print(f"  W({x:g}) = {w:.10f}   w e^w = {w * math.exp(w):g}"
              f"   bracket [{lo:.4f}, {hi:.4f}]")

    print("\nmaximum degree, estimate vs a 200-trial sample mean")
    rng = random.Random(3)
    for n, m, p in ((5000, 40, 0.02), (300, 300, 0.2)):
        est = expected_dmax_estimate(n, m, p)
        mean = sum(dmax(generate(n, m, p, rng.randrange(1 << 48)))
                   for _ in range(200)) / 200
        print(f"  (n={n}, m={m}, p={p}): estimate {est.value:.2f} "
              f"[{est.formula_used.value}], sample mean {mean:.2f},"
              f" variance bound {dmax_variance_bound(m, p):.0f}")
    print(f"  sparse scale g_n(5000, 40, 0.02) = {g_n(5000, 40, 0.02):.3f}")

    print("\ntail bound: P(Bin exceeds twice its mean)")
    for mu in (5.0, 20.0, 80.0):
        print(f"  mu={mu:<4} bound {chernoff_upper_tail(mu, 1.0):.3e}")

    print("\nexpected number of feasible covers of size k (n=30, m=25, p=0.1)")
    for k in (4, 8, 12):
        lz = expected_Zk_log(30, 25, 0.1, k)
        print(f"  k={k:<3} log E[Z_k] = {lz:9.3f}"
              + ("   (first moment rules this size out)" if lz < 0 else ""))

    print("\nwhere the count dies, per the closed-form threshold")
    rep = first_moment_thresholds(3000, 3000, 0.2, D=2.0, delta=1.0)
    print(f"  n=3000 m=3000 p=0.2: k* in [{rep.k_star_lower:.2f}, "
          f"{rep.k_star_upper:.2f}], certified size {rep.k}")


if __name__ == "__main__":
    main()
