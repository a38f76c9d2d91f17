"""Closed-form strong-scaling metrics.

Forward model (Amdahl): a program with parallelizable fraction ``alpha``
run on ``k`` processors achieves

    speedup(alpha, k) = 1 / ((1 - alpha) + alpha / k)

Inverse model: given a *measured* speedup ``s`` on ``k`` processors, the
effective parallelization is the alpha that Amdahl's law would need to
reproduce it,

    alpha_eff(s, k) = (k / (k - 1)) * (s - 1) / s

and ``1 - alpha_eff`` is the experimentally determined serial fraction
(the Karp-Flatt metric).  Anomalous measurements (slowdown, superlinear
speedup) push alpha_eff outside [0, 1]; results are flagged, never
clamped, so the anomaly stays visible.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

__all__ = [
    "NORMAL",
    "SLOWDOWN",
    "SUPERLINEAR",
    "AmdahlModel",
    "EffectiveParallelization",
    "FitResult",
    "MetricRow",
    "alpha_classic",
    "alpha_eff",
    "amdahl_efficiency",
    "amdahl_speedup",
    "classify_regime",
    "efficiency",
    "fit_alpha",
    "half_efficiency_k",
    "karp_flatt",
    "speedup",
]

# Scaling regimes, judged against the ideal range 1 <= s <= k.
NORMAL = "normal"
SLOWDOWN = "slowdown"
SUPERLINEAR = "superlinear"


def _check_finite(name: str, value: float) -> float:
    value = float(value)
    if not math.isfinite(value):
        raise ValueError(f"{name} must be finite, got {value!r}")
    return value


def classify_regime(s: float, k: float) -> str:
    """Name the scaling regime of speedup s on k processors."""
    if s < 1.0:
        return SLOWDOWN
    if s > k:
        return SUPERLINEAR
    return NORMAL


class EffectiveParallelization(float):
    """An alpha_eff value carrying the scaling regime it was derived in.

    Behaves exactly like ``float`` in arithmetic and comparisons.  The
    ``regime`` attribute is ``"normal"`` for 1 <= s <= k, ``"slowdown"``
    for s < 1 (value is negative) and ``"superlinear"`` for s > k (value
    exceeds 1).  Out-of-range values are deliberately not clamped.
    """

    regime: str

    def __new__(cls, value: float, regime: str = NORMAL):
        obj = super().__new__(cls, value)
        obj.regime = regime
        return obj

    def __getnewargs__(self):
        return (float(self), self.regime)


def speedup(t_serial: float, t_parallel: float) -> float:
    """Ratio of serial to parallel wall time; > 1 means the run got faster."""
    t_serial = _check_finite("t_serial", t_serial)
    t_parallel = _check_finite("t_parallel", t_parallel)
    if t_serial <= 0.0:
        raise ValueError(f"t_serial must be positive, got {t_serial}")
    if t_parallel <= 0.0:
        raise ValueError(f"t_parallel must be positive, got {t_parallel}")
    return t_serial / t_parallel


def efficiency(s: float, k: float) -> float:
    """Speedup per processor, s / k."""
    s = _check_finite("s", s)
    k = _check_finite("k", k)
    if s <= 0.0:
        raise ValueError(f"speedup must be positive, got {s}")
    if k < 1:
        raise ValueError(f"processor count must be >= 1, got {k}")
    return s / k


def alpha_eff(s: float, k: float) -> EffectiveParallelization:
    """Effective parallelization implied by measured speedup s on k processors.

    Inverts Amdahl's law: the returned value is the parallelizable
    fraction that would exactly reproduce the measurement.  Requires
    k >= 2 (a single processor carries no information about parallelism)
    and s > 0.  The result is flagged by regime, not clamped: s < 1
    gives a negative value tagged "slowdown", s > k gives a value above
    1 tagged "superlinear".
    """
    s = _check_finite("s", s)
    k = _check_finite("k", k)
    if k < 2:
        raise ValueError(f"alpha_eff needs k >= 2, got {k}")
    if s <= 0.0:
        raise ValueError(f"speedup must be positive, got {s}")
    value = (k / (k - 1.0)) * (s - 1.0) / s
    return EffectiveParallelization(value, classify_regime(s, k))


def karp_flatt(s: float, k: float) -> float:
    """Experimentally determined serial fraction, 1 - alpha_eff(s, k)."""
    return 1.0 - alpha_eff(s, k)


@dataclass(frozen=True)
class AmdahlModel:
    """Amdahl forward model with parallelizable fraction ``alpha`` in [0, 1]."""

    alpha: float

    def __post_init__(self):
        alpha = _check_finite("alpha", self.alpha)
        if not 0.0 <= alpha <= 1.0:
            raise ValueError(f"alpha must lie in [0, 1], got {alpha}")
        object.__setattr__(self, "alpha", alpha)

    def speedup(self, k: float) -> float:
        return amdahl_speedup(self, k)

    def efficiency(self, k: float) -> float:
        return amdahl_efficiency(self, k)


def _as_model(model: "AmdahlModel | float") -> AmdahlModel:
    if isinstance(model, AmdahlModel):
        return model
    return AmdahlModel(model)


def _check_k_at_least_one(k: float) -> float:
    k = _check_finite("k", k)
    if k < 1:
        raise ValueError(f"processor count must be >= 1, got {k}")
    return k


def amdahl_speedup(model: "AmdahlModel | float", k: float) -> float:
    """Predicted speedup on k processors: 1 / ((1 - alpha) + alpha / k).

    ``model`` may be an :class:`AmdahlModel` or a bare alpha.  k may be
    fractional (useful for plotting smooth curves); it must be >= 1.
    """
    alpha = _as_model(model).alpha
    k = _check_k_at_least_one(k)
    return 1.0 / ((1.0 - alpha) + alpha / k)


def amdahl_efficiency(model: "AmdahlModel | float", k: float) -> float:
    """Predicted efficiency on k processors: 1 / (k (1 - alpha) + alpha)."""
    alpha = _as_model(model).alpha
    k = _check_k_at_least_one(k)
    return 1.0 / (k * (1.0 - alpha) + alpha)


def half_efficiency_k(model: "AmdahlModel | float") -> float:
    """Processor count at which predicted efficiency drops to one half.

    Solves amdahl_efficiency(alpha, k) = 1/2 for k, giving
    (2 - alpha) / (1 - alpha).  For alpha = 1 efficiency never drops, so
    the result is ``math.inf``.
    """
    alpha = _as_model(model).alpha
    if alpha == 1.0:
        return math.inf
    return (2.0 - alpha) / (1.0 - alpha)


def alpha_classic(
    sequential_durations: Iterable[float],
    parallel_durations: Iterable[float],
) -> float:
    """Definitional parallelizable fraction of a known workload breakdown.

    Given the durations of the purely sequential parts and of the
    parallelizable parts (as run serially), returns parallel time over
    total time.  This is the alpha a perfectly scheduled, overhead-free
    execution would realize; measured alpha_eff can only fall short of it.
    """
    seq = [_check_finite("sequential duration", d) for d in sequential_durations]
    par = [_check_finite("parallel duration", d) for d in parallel_durations]
    for d in seq + par:
        if d < 0.0:
            raise ValueError(f"durations must be non-negative, got {d}")
    total_seq = math.fsum(seq)
    total_par = math.fsum(par)
    total = total_seq + total_par
    if total <= 0.0:
        raise ValueError("total duration must be positive")
    return total_par / total


@dataclass(frozen=True)
class FitResult:
    """Least-squares Amdahl fit: the model plus its sum of squared residuals.

    Residuals are taken in inverse-speedup space, where the model is
    linear; ``residual`` is 0 (to rounding) when the data follow
    Amdahl's law exactly.
    """

    model: AmdahlModel
    residual: float


def fit_alpha(points) -> FitResult:
    """Fit a single alpha to measured (k, speedup) points with k >= 2.

    ``points`` is an iterable of (k, speedup) pairs, or any object with
    a ``speedup_points()`` method returning one.  In inverse-speedup
    space Amdahl's law reads 1/s = 1 - alpha * (k - 1)/k, so alpha is
    the slope of a line through the origin fitted to
    x = (k - 1)/k, y = 1 - 1/s by ordinary least squares:

        alpha = sum(x * y) / sum(x * x)

    The estimate is clamped to [0, 1] so it is always a valid model;
    disagreement with the data shows up in the residual instead.  With a
    single usable point the fit reduces to alpha_eff (clamped).  Points
    with k < 2 are ignored; if none remain, raises ValueError.
    """
    if hasattr(points, "speedup_points"):
        points = points.speedup_points()
    usable = []
    for k, s in points:
        k = _check_finite("k", k)
        s = _check_finite("speedup", s)
        if s <= 0.0:
            raise ValueError(f"speedup must be positive, got {s}")
        if k >= 2:
            usable.append((k, s))
    if not usable:
        raise ValueError("no points with k >= 2 to fit")

    sxy = math.fsum((k - 1.0) / k * (1.0 - 1.0 / s) for k, s in usable)
    sxx = math.fsum(((k - 1.0) / k) ** 2 for k, s in usable)
    alpha = min(1.0, max(0.0, sxy / sxx))
    residual = math.fsum(
        (1.0 / s - ((1.0 - alpha) + alpha / k)) ** 2 for k, s in usable
    )
    return FitResult(AmdahlModel(alpha), residual)


@dataclass(frozen=True)
class MetricRow:
    """One processor count's worth of derived metrics.

    ``alpha_eff`` and ``serial_fraction`` exist only for k >= 2 and
    satisfy serial_fraction == 1 - alpha_eff exactly; ``efficiency`` is
    speedup / k exactly.  Construct via :meth:`from_speedup` to get the
    derived fields right.
    """

    k: int
    speedup: float
    efficiency: float
    alpha_eff: float | None
    serial_fraction: float | None

    def __post_init__(self):
        if not isinstance(self.k, int) or self.k < 1:
            raise ValueError(f"k must be an integer >= 1, got {self.k!r}")
        if not (math.isfinite(self.speedup) and self.speedup > 0.0):
            raise ValueError(f"speedup must be positive, got {self.speedup!r}")
        if self.efficiency != self.speedup / self.k:
            raise ValueError("efficiency must equal speedup / k")
        if self.k >= 2:
            if self.alpha_eff is None or self.serial_fraction is None:
                raise ValueError("alpha_eff and serial_fraction required for k >= 2")
            if self.serial_fraction != 1.0 - self.alpha_eff:
                raise ValueError("serial_fraction must equal 1 - alpha_eff")
        elif self.alpha_eff is not None or self.serial_fraction is not None:
            raise ValueError("alpha_eff is undefined for k = 1")

    @classmethod
    def from_speedup(cls, k: int, s: float) -> "MetricRow":
        if not isinstance(k, int) or k < 1:
            raise ValueError(f"k must be an integer >= 1, got {k!r}")
        eff = efficiency(s, k)
        if k >= 2:
            ae = alpha_eff(s, k)
            return cls(k, s, eff, ae, 1.0 - ae)
        return cls(k, s, eff, None, None)

    @property
    def regime(self) -> str:
        """"normal", "slowdown" (s < 1) or "superlinear" (s > k)."""
        return classify_regime(self.speedup, self.k)
