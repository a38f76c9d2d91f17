#!/usr/bin/env python3
"""A guided tour of the core metric: effective parallelization.

Story: a job takes 10 seconds on one processor and 7 seconds on three.
How parallel is it *really*?  We invert the speedup into the fraction
of execution that behaved as parallelizable, compare it with the
fraction that was parallel by construction, and use the fitted model
to predict what more processors would buy.
"""

from alphaeff import (
    AmdahlModel,
    alpha_classic,
    alpha_eff,
    amdahl_speedup,
    half_efficiency_k,
    karp_flatt,
    speedup,
)


def main():
    t1, t3 = 10.0, 7.0
    s = speedup(t1, t3)
    print(f"one processor: {t1:.1f}s   three processors: {t3:.1f}s")
    print(f"speedup        S = {s:.6g}")

    # Invert the two-term scaling model at k=3: which parallelizable
    # fraction would explain this speedup?
    a = alpha_eff(s, 3)
    f = karp_flatt(s, 3)
    print(f"alpha_eff        = {a:.6g}   ({a.regime})")
    print(f"serial fraction  = {f:.6g}")
    print()

    # Compare with the fraction that was parallel by construction.
    # Suppose the program spent 1.5s + 1.0s in serial phases and ran
    # three 2.5s chunks in parallel: 7.5 of 10 seconds of real work.
    built_in = alpha_classic(sequential_durations=[1.5, 1.0],
                             parallel_durations=[2.5, 2.5, 2.5])
    print(f"parallel fraction by construction: {built_in:.6g}")
    print(f"observed effective parallelization: {a:.6g}")
    print("the gap (0.75 vs 0.45) is what synchronization, imbalance and")
    print("control overhead cost us -- the whole point of measuring it.")
    print()

    # Forward predictions from the measured alpha.
    model = AmdahlModel(float(a))
    print("if 0.45 is all we effectively parallelize, more hardware buys:")
    for k in (2, 4, 8, 16, 64):
        print(f"  k={k:<3d} predicted speedup {model.speedup(k):8.4f}"
              f"   efficiency {model.efficiency(k):6.1%}")
    limit = 1.0 / (1.0 - float(a))
    print(f"  k->oo asymptotic ceiling {limit:.4f}")
    print()

    # How many processors until half of them are effectively wasted?
    for alpha in (0.45, 0.9, 0.999):
        print(f"alpha={alpha:<6}: efficiency drops to 50% at k* = "
              f"{half_efficiency_k(alpha):.6g}")
    print()
    print("sanity: the forward model at k=3 reproduces the measurement:")
    print(f"  amdahl_speedup({float(a):.2f}, 3) = {amdahl_speedup(float(a), 3):.6g}"
          f"  (measured {s:.6g})")


if __name__ == "__main__":
    main()
