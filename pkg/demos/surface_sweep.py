#!/usr/bin/env python3
"""How effective parallelization degrades with serial time and overhead.

We fix k=3 workers chewing on 0.25s parallel chunks and sweep two
knobs: how much purely sequential work surrounds the parallel region,
and how much control overhead each scheduling round costs.  The result
is a surface alpha_eff(seq, overhead), printed as a small text matrix,
and cross-checked against the explicit schedule simulator.
"""

from alphaeff import (
    Timeline,
    control,
    parallel_chunk,
    sequential,
    simulate,
    surface,
    sweep_surface,
)


def main():
    k, chunk, steps = 3, 0.25, 9
    grid = sweep_surface(seq_range=(0.0, 0.8), overhead_range=(0.0, 0.6),
                         steps=steps, k=k, chunk_time=chunk)

    print(f"alpha_eff for k={k}, chunk={chunk}s "
          f"(rows: sequential time, columns: overhead fraction)\n")
    header = "seq\\ov " + " ".join(f"{float(ov):6.3g}" for ov in grid.overhead_values)
    print(header)
    for i, seq in enumerate(grid.seq_values):
        cells = " ".join(f"{float(a):6.3f}" for a in grid.alpha[i])
        print(f"{float(seq):6.3g} {cells}")

    print()
    print("reading the surface:")
    print(" - top-left corner (no serial work, no overhead) is exactly 1.0;")
    print(" - moving down, sequential work crowds out the parallel benefit;")
    print(" - moving right, control overhead eats it from the other side;")
    print(" - values can only reach 1.0 on the degenerate top-left corner.")
    print()

    # The closed form is not a separate model: it matches an explicit
    # schedule of the same shape, here checked at one mid-grid point.
    seq, ov = 0.6, 0.25
    closed = surface(seq, ov, k, chunk)
    tl = Timeline(
        [sequential(seq)]
        + [parallel_chunk(chunk) for _ in range(k)]
        + [control(ov * chunk)]
    )
    scheduled = simulate(tl, k)
    print(f"spot check at seq={seq}, overhead={ov}:")
    print(f"  closed form      {float(closed)!r}")
    print(f"  simulated        {float(scheduled.alpha_eff)!r}")
    print(f"  agree within     {abs(float(closed) - float(scheduled.alpha_eff)):.3g}")


if __name__ == "__main__":
    main()
