"""Entropy statistics of an experiment and selection of the sample count.

All quantities are in nats. The reference distribution is uniform over the
instrument span, so the indeterminacy of the estimated joint density is

    H_z = -integral_span f log f  -  2 log(2L)

which is never positive. Subtracting the calibration uncertainty H_u of the
scattering kernel gives the experimental information I(N) = H_z - H_u, the
net information carried by N noisy measurements. From I(N) follow the
redundancy R = log N - I, the cost C = log N - 2 I whose minimizer is the
proper number of samples, and the complexity K = exp(I), the equivalent
count of non-overlapping kernels.

Entropy integrals are evaluated with the trapezoid rule on a uniform tensor
grid restricted to the span. Kernel mass that leaks outside the span is not
renormalized; the leak is a property of the instrument, not of the estimator.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from typing import Callable, Optional, Sequence

import numpy as np

from .density import Dataset, DensityModel
from .errors import InvalidGrid, InvalidSchedule
from .scattering import ScatteringFunction, SpanConfig

# Densities at or below this value contribute 0 to entropy integrands
# (removes -inf * 0 at working precision).
DENSITY_FLOOR = 1e-300

# Near-geometric ladder used when no explicit schedule is given.
_BASE_SCHEDULE = (1, 2, 3, 4, 6, 8, 11, 16, 22, 32, 45, 64, 90, 128, 180)


@dataclass(frozen=True)
class QuadratureGrid:
    """Uniform tensor grid over the span square [-L, L]^2.

    Parameters
    ----------
    span:
        Instrument span configuration providing the half width L.
    points_per_axis:
        Number of nodes per axis, at least 129. The step is
        2L / (points_per_axis - 1) and must not exceed sigma/4 of the kernel
        being integrated (checked by :meth:`require_resolves`).
    """

    span: SpanConfig
    points_per_axis: int

    def __post_init__(self) -> None:
        if int(self.points_per_axis) != self.points_per_axis or self.points_per_axis < 129:
            raise InvalidGrid(
                f"points_per_axis must be an integer >= 129, got {self.points_per_axis}"
            )

    @property
    def step(self) -> float:
        return self.span.width / (self.points_per_axis - 1)

    @property
    def axis(self) -> np.ndarray:
        return np.linspace(-self.span.half_width, self.span.half_width, self.points_per_axis)

    def weights(self) -> np.ndarray:
        w = np.full(self.points_per_axis, self.step)
        w[0] *= 0.5
        w[-1] *= 0.5
        return w

    def require_resolves(self, sigma: float) -> None:
        """Reject grids coarser than a quarter kernel width per step."""
        if self.step > sigma / 4.0 + 1e-15:
            raise InvalidGrid(
                f"grid step {self.step:.6g} exceeds sigma/4 = {sigma / 4.0:.6g}; "
                f"increase points_per_axis"
            )


def _entropy_of_values(values: np.ndarray, grid: QuadratureGrid) -> float:
    f = np.asarray(values, dtype=float)
    integrand = np.where(f > DENSITY_FLOOR, -f * np.log(np.where(f > 0, f, 1.0)), 0.0)
    w = grid.weights()
    return float(w @ integrand @ w)


def entropy_quadrature(pdf: Callable[[np.ndarray, np.ndarray], np.ndarray],
                       grid: QuadratureGrid) -> float:
    """Trapezoid estimate of -integral_span f log f, in nats.

    Parameters
    ----------
    pdf:
        Vectorized density, called once as ``pdf(X, Y)`` on the full meshgrid
        (indexing "ij"); must return finite nonnegative values.
    grid:
        Integration grid over the span square.
    """
    ax = grid.axis
    X, Y = np.meshgrid(ax, ax, indexing="ij")
    values = np.asarray(pdf(X, Y), dtype=float)
    if values.shape != X.shape:
        raise InvalidGrid(f"pdf returned shape {values.shape}, expected {X.shape}")
    if not np.all(np.isfinite(values)) or np.any(values < 0):
        raise InvalidGrid("pdf must be finite and nonnegative on the grid")
    return _entropy_of_values(values, grid)


def indeterminacy(model: DensityModel, grid: QuadratureGrid) -> float:
    """H_z of the model's joint density relative to the uniform reference."""
    grid.require_resolves(model.sf.sigma)
    values = model.joint_on_grid(grid.axis, grid.axis)
    return _entropy_of_values(values, grid) - 2.0 * math.log(grid.span.width)


def experimental_information(model: DensityModel, grid: QuadratureGrid) -> float:
    """I(N) = H_z - H_u; the span terms cancel, leaving pure information."""
    return indeterminacy(model, grid) - model.sf.calibration_entropy()


@dataclass(frozen=True)
class InfoRecord:
    """Statistics of one prefix experiment of size n.

    redundancy, cost and complexity are derived from (n, info) at
    construction, so the identities R = log n - I, C = log n - 2I and
    K = exp(I) hold exactly.
    """

    n: int
    log_n: float
    info: float
    redundancy: float
    cost: float
    complexity: float

    @classmethod
    def from_info(cls, n: int, info: float) -> "InfoRecord":
        log_n = math.log(n)
        return cls(
            n=n,
            log_n=log_n,
            info=info,
            redundancy=log_n - info,
            cost=log_n - 2.0 * info,
            complexity=math.exp(info),
        )


@dataclass(frozen=True)
class InfoCurve:
    """Information statistics over a growing schedule of prefix sizes."""

    records: tuple[InfoRecord, ...]
    n_opt: int
    info_limit: float
    complexity_limit: float

    def record_for(self, n: int) -> InfoRecord:
        for rec in self.records:
            if rec.n == n:
                return rec
        raise KeyError(f"no record for n={n}")

    def write_records_csv(self, path) -> None:
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["N", "logN", "I", "R", "C", "K"])
            for r in self.records:
                writer.writerow(
                    [r.n, _fmt(r.log_n), _fmt(r.info), _fmt(r.redundancy),
                     _fmt(r.cost), _fmt(r.complexity)]
                )

    def write_summary_csv(self, path) -> None:
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["N_opt", "I_inf", "K_inf"])
            writer.writerow([self.n_opt, _fmt(self.info_limit), _fmt(self.complexity_limit)])


def _fmt(v: float) -> str:
    return format(float(v), ".17g")


def default_schedule(n_max: int) -> list[int]:
    """Near-geometric ladder 1, 2, 3, 4, 6, ... clipped to and ending at n_max."""
    if n_max < 1:
        raise InvalidSchedule(f"n_max must be >= 1, got {n_max}")
    return [n for n in _BASE_SCHEDULE if n < n_max] + [n_max]


def _validate_schedule(schedule: Sequence[int], n_available: int) -> list[int]:
    sched = [int(n) for n in schedule]
    if len(sched) == 0:
        raise InvalidSchedule("schedule is empty")
    if any(b <= a for a, b in zip(sched, sched[1:])):
        raise InvalidSchedule(f"schedule must be strictly increasing, got {sched}")
    if sched[0] < 1:
        raise InvalidSchedule(f"schedule starts below 1: {sched[0]}")
    if sched[-1] > n_available:
        raise InvalidSchedule(
            f"schedule reaches {sched[-1]} but only {n_available} samples exist"
        )
    return sched


def info_curve(data: Dataset,
               sf: ScatteringFunction,
               grid: QuadratureGrid,
               schedule: Optional[Sequence[int]] = None) -> InfoCurve:
    """Evaluate I, R, C, K over nested prefixes and select the proper count.

    For each n in the schedule the model is built on the first n samples.
    n_opt is the schedule point with the smallest cost (ties resolved toward
    the smallest n). The limit of I is estimated as the mean of the top tenth
    of the schedule (at least the last three records) and the complexity
    limit is its exponential.
    """
    grid.require_resolves(sf.sigma)
    if schedule is None:
        schedule = default_schedule(len(data))
    sched = _validate_schedule(schedule, len(data))

    records = []
    for n in sched:
        model = DensityModel(data.prefix(n), sf)
        records.append(InfoRecord.from_info(n, experimental_information(model, grid)))

    n_opt = records[0].n
    best = records[0].cost
    for rec in records[1:]:
        if rec.cost < best:
            best = rec.cost
            n_opt = rec.n

    tail = min(len(records), max(3, math.ceil(len(records) / 10)))
    info_limit = float(np.mean([r.info for r in records[-tail:]]))
    return InfoCurve(
        records=tuple(records),
        n_opt=n_opt,
        info_limit=info_limit,
        complexity_limit=math.exp(info_limit),
    )
