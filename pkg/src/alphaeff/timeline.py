"""Segment-timeline execution model.

A program is an ordered list of segments: ``Sequential`` work that only
one processor can do, ``ParallelChunk`` work items that can be handed to
any worker, and ``Control`` work (scheduling, distribution, collection)
that serializes execution and is pure overhead — it does not appear in
the one-processor baseline.

The simulator assigns chunks to k workers with a *static* policy, then
reads the makespan off the resulting schedule:

    t_total = all sequential + all control + busiest worker's load

Waiting time is derived, not an input: every worker waits from the end
of its own load until the busiest one finishes.  ``surface`` evaluates
the closed form of alpha_eff for the special case of equal chunks with
proportional per-chunk control overhead, which is handy for sweeping
whole parameter grids.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Sequence, Union

import numpy as np

from . import metrics

__all__ = [
    "LPT",
    "ROUND_ROBIN",
    "AssignmentPolicy",
    "ScheduleResult",
    "Segment",
    "SegmentKind",
    "SurfaceGrid",
    "Timeline",
    "control",
    "parallel_chunk",
    "sequential",
    "serial_time",
    "simulate",
    "surface",
    "sweep_surface",
]


class SegmentKind(Enum):
    SEQUENTIAL = "S"
    PARALLEL_CHUNK = "P"
    CONTROL = "C"


@dataclass(frozen=True)
class Segment:
    kind: SegmentKind
    duration: float

    def __post_init__(self):
        if not isinstance(self.kind, SegmentKind):
            raise ValueError(f"kind must be a SegmentKind, got {self.kind!r}")
        d = float(self.duration)
        if not (math.isfinite(d) and d >= 0.0):
            raise ValueError(f"duration must be finite and >= 0, got {self.duration!r}")
        object.__setattr__(self, "duration", d)


def sequential(duration: float) -> Segment:
    return Segment(SegmentKind.SEQUENTIAL, duration)


def parallel_chunk(duration: float) -> Segment:
    return Segment(SegmentKind.PARALLEL_CHUNK, duration)


def control(duration: float) -> Segment:
    return Segment(SegmentKind.CONTROL, duration)


@dataclass(frozen=True)
class Timeline:
    """An ordered, immutable sequence of segments with some work in it."""

    segments: tuple[Segment, ...]

    def __post_init__(self):
        segs = tuple(self.segments)
        if not segs:
            raise ValueError("timeline must contain at least one segment")
        if not any(s.duration > 0.0 for s in segs):
            raise ValueError("timeline must contain at least one positive duration")
        object.__setattr__(self, "segments", segs)

    @property
    def chunk_durations(self) -> tuple[float, ...]:
        """Durations of the parallel chunks, in timeline order."""
        return tuple(
            s.duration for s in self.segments if s.kind is SegmentKind.PARALLEL_CHUNK
        )

    @property
    def total_sequential(self) -> float:
        return math.fsum(
            s.duration for s in self.segments if s.kind is SegmentKind.SEQUENTIAL
        )

    @property
    def total_control(self) -> float:
        return math.fsum(
            s.duration for s in self.segments if s.kind is SegmentKind.CONTROL
        )


# Static assignment policies.  ROUND_ROBIN deals chunk i to worker
# i mod k in timeline order; LPT (longest processing time first) sorts
# chunks by descending duration and greedily gives each to the currently
# least-loaded worker, breaking ties toward the lowest worker index.  An
# explicit policy is any sequence of worker indices, one per chunk.
ROUND_ROBIN = "round-robin"
LPT = "lpt"

AssignmentPolicy = Union[str, Sequence[int]]


def _assign(chunks: Sequence[float], k: int, policy: AssignmentPolicy) -> list[int]:
    n = len(chunks)
    if isinstance(policy, str):
        if policy == ROUND_ROBIN:
            return [i % k for i in range(n)]
        if policy == LPT:
            # Stable sort keeps timeline order among equal durations.
            order = sorted(range(n), key=lambda i: chunks[i], reverse=True)
            loads = [0.0] * k
            assignment = [0] * n
            for i in order:
                worker = min(range(k), key=loads.__getitem__)
                assignment[i] = worker
                loads[worker] += chunks[i]
            return assignment
        raise ValueError(f"unknown assignment policy {policy!r}")

    try:
        assignment = [int(w) for w in policy]
    except (TypeError, ValueError) as exc:
        raise ValueError(f"explicit policy must be a sequence of worker indices: {exc}")
    if len(assignment) != n:
        raise ValueError(
            f"explicit policy assigns {len(assignment)} chunks, timeline has {n}"
        )
    for w in assignment:
        if not 0 <= w < k:
            raise ValueError(f"worker index {w} out of range for k={k}")
    return assignment


def serial_time(timeline: Timeline) -> float:
    """One-processor baseline: sequential plus chunk work, no control."""
    return math.fsum(
        s.duration
        for s in timeline.segments
        if s.kind is not SegmentKind.CONTROL
    )


@dataclass(frozen=True)
class ScheduleResult:
    """Outcome of simulating a timeline on k workers.

    ``per_processor_busy[w]`` is the chunk work assigned to worker w;
    ``per_processor_wait[w]`` is how long w idles at the end while the
    busiest worker finishes.  ``alpha_eff`` is None when it is undefined
    (k = 1, or a degenerate timeline with no baseline work).
    """

    k: int
    t_serial: float
    t_total: float
    speedup: float
    alpha_eff: metrics.EffectiveParallelization | None
    per_processor_busy: tuple[float, ...]
    per_processor_wait: tuple[float, ...]
    assignment: tuple[int, ...]


def simulate(
    timeline: Timeline, k: int, policy: AssignmentPolicy = ROUND_ROBIN
) -> ScheduleResult:
    """Run the static-assignment schedule of ``timeline`` on k workers.

    Sequential and control segments execute one after another on a
    single processor; parallel chunks run on the workers given by
    ``policy``, all starting after the serialized work so the makespan
    is serialized time plus the maximum per-worker load.
    """
    if not isinstance(k, int) or k < 1:
        raise ValueError(f"k must be an integer >= 1, got {k!r}")
    chunks = timeline.chunk_durations
    assignment = _assign(chunks, k, policy)

    loads = [0.0] * k
    for duration, worker in zip(chunks, assignment):
        loads[worker] += duration

    max_load = max(loads)
    busy = tuple(loads)
    wait = tuple(max_load - load for load in loads)

    t_serial = serial_time(timeline)
    t_total = timeline.total_sequential + timeline.total_control + max_load
    # t_total > 0 because some segment has positive duration and every
    # kind contributes to it (chunks via some worker's load <= max).
    s = t_serial / t_total
    if k >= 2 and s > 0.0:
        ae = metrics.alpha_eff(s, k)
    else:
        ae = None
    return ScheduleResult(
        k=k,
        t_serial=t_serial,
        t_total=t_total,
        speedup=s,
        alpha_eff=ae,
        per_processor_busy=busy,
        per_processor_wait=wait,
        assignment=tuple(assignment),
    )


def surface(
    seq_time: float,
    overhead_fraction: float,
    k: int,
    chunk_time: float,
) -> metrics.EffectiveParallelization:
    """alpha_eff of the equal-chunk workload, in closed form.

    Models ``seq_time`` of sequential work plus k equal chunks of
    ``chunk_time``, with control overhead proportional to the chunk
    payload length, ``overhead_fraction * chunk_time`` in total:

        t_serial = seq_time + k * chunk_time
        t_total  = seq_time + chunk_time * (1 + overhead_fraction)

    so the result is (k/(k-1)) * (1 - t_total / t_serial).  Equals
    simulate() on the equivalent timeline — Sequential(seq_time), k
    chunks of chunk_time, Control(overhead_fraction * chunk_time) — to
    within rounding.  Large overhead can push the result negative; it
    comes back flagged "slowdown", not clamped.
    """
    seq_time = metrics._check_finite("seq_time", seq_time)
    overhead_fraction = metrics._check_finite("overhead_fraction", overhead_fraction)
    chunk_time = metrics._check_finite("chunk_time", chunk_time)
    if not isinstance(k, int) or k < 2:
        raise ValueError(f"surface needs integer k >= 2, got {k!r}")
    if seq_time < 0.0:
        raise ValueError(f"seq_time must be >= 0, got {seq_time}")
    if overhead_fraction < 0.0:
        raise ValueError(f"overhead_fraction must be >= 0, got {overhead_fraction}")
    if chunk_time <= 0.0:
        raise ValueError(f"chunk_time must be positive, got {chunk_time}")

    t_serial = seq_time + k * chunk_time
    t_total = seq_time + chunk_time * (1.0 + overhead_fraction)
    return metrics.alpha_eff(t_serial / t_total, k)


@dataclass(frozen=True, eq=False)
class SurfaceGrid:
    """alpha_eff sampled on a (sequential time) x (overhead fraction) grid.

    ``alpha[i, j]`` corresponds to ``seq_values[i]`` and
    ``overhead_values[j]``.
    """

    k: int
    chunk_time: float
    seq_values: np.ndarray
    overhead_values: np.ndarray
    alpha: np.ndarray


def sweep_surface(
    seq_range: tuple[float, float],
    overhead_range: tuple[float, float],
    steps: int,
    k: int,
    chunk_time: float,
) -> SurfaceGrid:
    """Evaluate ``surface`` on an evenly spaced steps x steps grid.

    Both ranges are inclusive (lo, hi) and must be non-degenerate
    (hi > lo); ``steps`` must be at least 2.  Grid cells are exactly the
    corresponding pointwise ``surface`` calls.
    """
    seq_lo, seq_hi = (float(v) for v in seq_range)
    ov_lo, ov_hi = (float(v) for v in overhead_range)
    if not (seq_hi > seq_lo):
        raise ValueError(f"degenerate seq_range {seq_range!r}")
    if not (ov_hi > ov_lo):
        raise ValueError(f"degenerate overhead_range {overhead_range!r}")
    if not isinstance(steps, int) or steps < 2:
        raise ValueError(f"steps must be an integer >= 2, got {steps!r}")

    seq_values = np.linspace(seq_lo, seq_hi, steps)
    overhead_values = np.linspace(ov_lo, ov_hi, steps)
    alpha = np.empty((steps, steps), dtype=float)
    for i, seq in enumerate(seq_values):
        for j, ov in enumerate(overhead_values):
            alpha[i, j] = surface(float(seq), float(ov), k, chunk_time)
    return SurfaceGrid(
        k=k,
        chunk_time=float(chunk_time),
        seq_values=seq_values,
        overhead_values=overhead_values,
        alpha=alpha,
    )
