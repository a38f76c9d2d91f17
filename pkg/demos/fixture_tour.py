#!/usr/bin/env python3
"""Tour of the bundled datasets: published parallel-scaling measurements.

Three fixtures pair machine-measured efficiency curves with the serial
fractions their original authors published, so the package can audit
its own arithmetic against decades-old numbers: classic supercomputer
Linpack runs, signal-processing workstation traces, and three numeric
algorithms scaled to 1024 processors.  Two more carry published serial
fractions only (particle-swarm optimizer topologies).
"""

from alphaeff import FIXTURE_IDS, analyze, fit_alpha, load_fixture


def main():
    for fixture_id in FIXTURE_IDS:
        fixture = load_fixture(fixture_id)
        kind = "verifiable" if fixture.verifiable else "published-only"
        print(f"== {fixture.id} ({kind})")
        print(f"   {fixture.description}")

        if not fixture.series:
            for label, pairs in fixture.published_serial_fraction.items():
                ks = [k for k, _ in pairs]
                vals = ", ".join(f"{v:g}" for _, v in pairs)
                print(f"   {label}: serial fraction at k={ks}: {vals}")
            print()
            continue

        # Recompute serial fractions from the efficiency series and
        # report how far we land from the published values.
        for series in fixture.series:
            report = analyze(series)
            rows = {r.k: r for r in report.rows}
            published = dict(fixture.published_serial_fraction.get(series.label, ()))
            if published:
                worst = max(
                    abs(rows[k].serial_fraction - v)
                    for k, v in published.items() if v > 0.0
                )
                agreement = f"worst |recomputed - published| = {worst:.2g}"
            else:
                agreement = "no published values"
            ks = [k for k, _ in series.points]
            print(f"   {series.label}: k={min(ks)}..{max(ks)}, {agreement}")
        print()

    # One curve in detail: fit a single parallel fraction to the whole
    # Cray Linpack series and compare with the per-point inversions.
    fixture = load_fixture("linpack_architectures")
    cray = next(s for s in fixture.series if "Y-MP" in s.label)
    report = analyze(cray)
    fit = fit_alpha(cray)
    print(f"-- {cray.label} in detail")
    for row in report.rows:
        a = "      -" if row.alpha_eff is None else f"{float(row.alpha_eff):7.4f}"
        print(f"   k={row.k:<2d} efficiency {row.efficiency:6.3f}  alpha_eff {a}")
    print(f"   least-squares alpha across the curve: {fit.model.alpha:.6f}"
          f" (residual {fit.residual:.3g})")
    print("   a machine from 1990 scaling this cleanly is why the serial")
    print("   fraction, not raw speedup, is the durable way to report it.")


if __name__ == "__main__":
    main()
