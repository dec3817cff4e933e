"""Generate random instances, look at their degree statistics, and
round-trip one through the text format.

Run:  python3 demos/01_instances.py
"""

from hitsetlab.instance import (
    classify_regime,
    dmax,
    generate,
    parse,
    serialize,
)
from hitsetlab.theory import expected_dmax_estimate


def main() -> None:
    print("three instances, same shape, increasing density\n")
    n, m = 400, 300
    for p in (0.01, 0.05, 0.25):
        inst = generate(n, m, p, seed=7)
        label = classify_regime(n, m, p)
        est = expected_dmax_estimate(n, m, p)
        print(f"p={p:<5} regime={label.kind.value:<10} "
              f"dmax={dmax(inst):<4} estimate={est.value:.2f} "
              f"(mp/log n = {label.ratio:.2f})")

    print("\nround-trip through the text format")
    inst = generate(6, 4, 0.5, seed=11)
    text = serialize(inst)
    print(text)
    again = parse(text)
    assert again.rows == inst.rows and again.n == inst.n
    print("parse(serialize(inst)) reproduces the instance, "
          f"n={again.n} m={again.m}")


if __name__ == "__main__":
    main()
