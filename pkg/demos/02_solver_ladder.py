"""Every solver on one instance, smallest value to largest.

The chain printed at the end is the whole point of the library:
m/dmax <= LP <= IP <= greedy variants, with the LP certified by its
dual and the IP by exhaustive search.

Run:  python3 demos/02_solver_ladder.py
"""

from hitsetlab._rng import split_seed
from hitsetlab.greedy import (
    block_greedy,
    block_greedy_best_of,
    build_schedule,
    greedy,
)
from hitsetlab.instance import dmax, generate
from hitsetlab.ip import solve_ip_bruteforce, solve_ip_exact
from hitsetlab.lp import lp_lower_bound, solve_lp

N, M, P, SEED = 24, 30, 0.2, 5


def main() -> None:
    inst = generate(N, M, P, seed=SEED)
    print(f"instance n={N} m={M} p={P} seed={SEED}, dmax={dmax(inst)}\n")

    lp = solve_lp(inst)
    print(f"lp relaxation     {lp.value:.6f}  "
          f"({lp.iterations} pivots, dual objective {lp.dual_objective:.6f})")

    bb = solve_ip_exact(inst)
    bf = solve_ip_bruteforce(inst)
    assert bb.solution.value == bf.solution.value
    print(f"exact cover       {bb.solution.value}  "
          f"(branch and bound {bb.nodes_explored} nodes, "
          f"enumeration {bf.nodes_explored} nodes)")

    gr = greedy(inst)
    print(f"greedy            {gr.value}  gains per step {gr.gains}")

    sched = build_schedule(N, M, P)
    seed = split_seed(SEED, 0)
    bgr = block_greedy(inst, sched, seed)
    best = block_greedy_best_of(inst, sched, 32, seed)
    print(f"block greedy      {bgr.value}  "
          f"(K={sched.K} blocks, case {sched.case_tag.value})")
    print(f"best of 32        {best.value}")

    print("\nsandwich:",
          f"{lp_lower_bound(inst):.4f} <= {lp.value:.4f}"
          f" <= {bb.solution.value} <= {gr.value} <= {bgr.value}")


if __name__ == "__main__":
    main()
