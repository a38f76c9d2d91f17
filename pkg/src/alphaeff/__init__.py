"""Effective-parallelization analysis for strong-scaling measurements.

The headline number: given a measured speedup ``s`` on ``k``
processors, ``alpha_eff(s, k)`` is the parallelizable fraction that
Amdahl's law would need to reproduce the measurement, and
``1 - alpha_eff`` is the experimentally determined serial fraction —
a far more sensitive lens on scaling quality than raw efficiency.

The package splits into:

* :mod:`alphaeff.metrics` — closed-form formulas and model fitting;
* :mod:`alphaeff.timeline` — segment-timeline makespan simulation and
  the alpha_eff parameter surface;
* :mod:`alphaeff.dataio` — measurement parsing, bundled fixtures,
  report and plot-data emission;
* :mod:`alphaeff.harness` — synthetic scaling measurements on the
  local host;
* :mod:`alphaeff.cli` — the ``alphaeff`` command.
"""

from .metrics import (
    AmdahlModel,
    EffectiveParallelization,
    FitResult,
    MetricRow,
    alpha_classic,
    alpha_eff,
    amdahl_efficiency,
    amdahl_speedup,
    classify_regime,
    efficiency,
    fit_alpha,
    half_efficiency_k,
    karp_flatt,
    speedup,
)
from .timeline import (
    LPT,
    ROUND_ROBIN,
    ScheduleResult,
    Segment,
    SegmentKind,
    SurfaceGrid,
    Timeline,
    control,
    parallel_chunk,
    sequential,
    serial_time,
    simulate,
    surface,
    sweep_surface,
)
from .dataio import (
    FIXTURE_IDS,
    SCENARIO_IDS,
    DataFormatError,
    Fixture,
    MeasurementSeries,
    ScalingReport,
    ValueKind,
    analyze,
    emit_measurements,
    emit_plot_data,
    emit_report,
    emit_reports,
    load_fixture,
    parse_measurements,
    parse_scenario,
    scenario_fixture,
)
from .harness import (
    AMDAHL_OVERHEAD_RANGE,
    SyntheticWorkload,
    available_processors,
    calibrate,
    run_synthetic,
    workload_from_spec,
)

__version__ = "0.1.0"
