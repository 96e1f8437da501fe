"""Kernel density estimates of the joint, marginal and conditional PDFs.

A DensityModel is a dataset of measured pairs plus the instrument's
scattering function. The joint density is the plain average of kernels
centered at the samples; the marginal over x is the analytic average of the
x-channel Gaussians (integrating a channel Gaussian over the real line gives
exactly 1, so no quadrature is involved). The conditional density is the
joint/marginal ratio evaluated in log domain: far away from all samples both
sums underflow to zero in direct arithmetic, while the log-domain ratio stays
well defined.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from typing import Iterator, Optional, Sequence

import numpy as np

from ._threads import run_chunks
from .errors import EmptyDataset, InvalidParameter, ShapeMismatch
from .scattering import ScatteringFunction, log_gaussian, _require_finite


@dataclass(frozen=True)
class Sample:
    """One measured pair of channel signals."""

    x: float
    y: float

    def __post_init__(self) -> None:
        if not (math.isfinite(self.x) and math.isfinite(self.y)):
            raise InvalidParameter(f"sample must be finite, got ({self.x}, {self.y})")


class Dataset:
    """Ordered collection of measured pairs, optionally with clean references.

    Insertion order is significant: statistics over growing experiments are
    defined on nested prefixes, so ``prefix(n)`` must always return the same
    first n samples.
    """

    def __init__(self, x, y, x_clean=None, y_clean=None, meta=None):
        x = np.asarray(x, dtype=float).copy()
        y = np.asarray(y, dtype=float).copy()
        if x.ndim != 1 or y.ndim != 1:
            raise InvalidParameter("sample columns must be one-dimensional")
        if x.shape != y.shape:
            raise ShapeMismatch(f"x has {x.size} entries, y has {y.size}")
        _require_finite("x", x)
        _require_finite("y", y)
        if (x_clean is None) != (y_clean is None):
            raise InvalidParameter("clean columns must be given for both channels or neither")
        if x_clean is not None:
            x_clean = np.asarray(x_clean, dtype=float).copy()
            y_clean = np.asarray(y_clean, dtype=float).copy()
            if x_clean.shape != x.shape or y_clean.shape != y.shape:
                raise ShapeMismatch("clean columns must match the sample count")
            _require_finite("x_clean", x_clean)
            _require_finite("y_clean", y_clean)
            x_clean.flags.writeable = False
            y_clean.flags.writeable = False
        x.flags.writeable = False
        y.flags.writeable = False
        self.x = x
        self.y = y
        self.x_clean = x_clean
        self.y_clean = y_clean
        self.meta = meta

    @classmethod
    def from_pairs(cls, pairs: Sequence[tuple[float, float]], meta=None) -> "Dataset":
        arr = np.asarray(pairs, dtype=float).reshape(-1, 2)
        return cls(arr[:, 0], arr[:, 1], meta=meta)

    def __len__(self) -> int:
        return self.x.size

    def __iter__(self) -> Iterator[Sample]:
        return (Sample(float(a), float(b)) for a, b in zip(self.x, self.y))

    def sample(self, i: int) -> Sample:
        return Sample(float(self.x[i]), float(self.y[i]))

    @property
    def has_clean(self) -> bool:
        return self.x_clean is not None

    def prefix(self, n: int) -> "Dataset":
        """First n samples, preserving order and metadata."""
        if not 1 <= n <= len(self):
            raise InvalidParameter(f"prefix size {n} outside [1, {len(self)}]")
        if n == len(self):
            return self
        xc = self.x_clean[:n] if self.has_clean else None
        yc = self.y_clean[:n] if self.has_clean else None
        return Dataset(self.x[:n], self.y[:n], xc, yc, meta=self.meta)


class DensityModel:
    """Kernel estimate of the joint PDF of a dataset under a scattering function."""

    def __init__(self, data: Dataset, sf: ScatteringFunction):
        if len(data) == 0:
            raise EmptyDataset("a density model needs at least one sample")
        self.data = data
        self.sf = sf

    def _log_kernels_x(self, x):
        return log_gaussian(x, self.data.x, self.sf.sigma)

    def _log_kernels_y(self, y):
        return log_gaussian(y, self.data.y, self.sf.sigma)

    def joint_pdf(self, x: float, y: float) -> float:
        """Average of sample-centered kernels at (x, y); strictly positive."""
        _require_finite("x", x)
        _require_finite("y", y)
        lw = self._log_kernels_x(x) + self._log_kernels_y(y)
        return float(np.exp(_logsumexp(lw) - math.log(len(self.data))))

    def marginal_pdf(self, x: float) -> float:
        """Analytic x-marginal: average of the x-channel Gaussians."""
        _require_finite("x", x)
        lw = self._log_kernels_x(x)
        return float(np.exp(_logsumexp(lw) - math.log(len(self.data))))

    def conditional_pdf(self, y: float, given_x: float) -> float:
        """Density of y given x, the joint/marginal ratio in log domain."""
        _require_finite("y", y)
        _require_finite("given_x", given_x)
        lx = self._log_kernels_x(given_x)
        num = _logsumexp(lx + self._log_kernels_y(y))
        den = _logsumexp(lx)
        return float(np.exp(num - den))

    def joint_on_grid(self, xs, ys) -> np.ndarray:
        """Joint PDF on the tensor grid xs x ys; out[a, b] = f(xs[a], ys[b]).

        Uses the separable form of the kernel, so the cost is two kernel
        matrices and one matrix product. Rows are filled in fixed-size chunks
        (optionally on a thread pool); values do not depend on the chunking.
        """
        xs = np.asarray(xs, dtype=float)
        ys = np.asarray(ys, dtype=float)
        _require_finite("xs", xs)
        _require_finite("ys", ys)
        n = len(self.data)
        gy = np.exp(log_gaussian(ys[None, :], self.data.y[:, None], self.sf.sigma))
        out = np.empty((xs.size, ys.size))

        def fill(lo: int, hi: int) -> None:
            gx = np.exp(log_gaussian(xs[None, lo:hi], self.data.x[:, None], self.sf.sigma))
            out[lo:hi] = gx.T @ gy / n

        run_chunks(fill, xs.size)
        return out

    def marginal_on_grid(self, xs) -> np.ndarray:
        xs = np.asarray(xs, dtype=float)
        _require_finite("xs", xs)
        g = np.exp(log_gaussian(xs[None, :], self.data.x[:, None], self.sf.sigma))
        return g.mean(axis=0)


def _logsumexp(a: np.ndarray) -> float:
    m = np.max(a)
    return float(m + np.log(np.sum(np.exp(a - m))))


# --- dataset CSV format ------------------------------------------------------
#
# Optional leading comment "# seed=<s> sigma=<v> map=<name> prng=<name> n=<n>",
# then the header "i,x,y" or "i,x,y,x_o,y_o" and one row per sample in
# insertion order, 17 significant digits (floats round-trip exactly).


def _fmt(v: float) -> str:
    return format(float(v), ".17g")


def write_dataset_csv(dataset: Dataset, path) -> None:
    meta = dataset.meta
    with open(path, "w", newline="") as fh:
        if meta is not None:
            fh.write(
                f"# seed={meta.seed} sigma={float(meta.sigma_noise)!r} "
                f"map={meta.map_name} prng={meta.prng_name} n={len(dataset)}\n"
            )
        writer = csv.writer(fh)
        if dataset.has_clean:
            writer.writerow(["i", "x", "y", "x_o", "y_o"])
            for i in range(len(dataset)):
                writer.writerow(
                    [i + 1, _fmt(dataset.x[i]), _fmt(dataset.y[i]),
                     _fmt(dataset.x_clean[i]), _fmt(dataset.y_clean[i])]
                )
        else:
            writer.writerow(["i", "x", "y"])
            for i in range(len(dataset)):
                writer.writerow([i + 1, _fmt(dataset.x[i]), _fmt(dataset.y[i])])


def read_dataset_csv(path) -> Dataset:
    from .generator import GenerationMeta  # local import; generator depends on density

    meta: Optional[GenerationMeta] = None
    with open(path, newline="") as fh:
        first = fh.readline()
        if first.startswith("#"):
            fields = dict(
                item.split("=", 1) for item in first[1:].strip().split() if "=" in item
            )
            try:
                meta = GenerationMeta(
                    seed=int(fields["seed"]),
                    sigma_noise=float(fields["sigma"]),
                    n=int(fields["n"]),
                    map_name=fields.get("map", "ulam"),
                    prng_name=fields.get("prng", "pcg64"),
                )
            except (KeyError, ValueError, InvalidParameter):
                meta = None  # unknown comment style; data rows still load
            header_line = fh.readline()
        else:
            header_line = first
        header = [h.strip() for h in header_line.strip().split(",")]
        if header[:3] != ["i", "x", "y"]:
            raise InvalidParameter(f"unrecognized dataset header {header!r} in {path}")
        with_clean = header == ["i", "x", "y", "x_o", "y_o"]
        rows = [row for row in csv.reader(fh) if row]
    x = [float(r[1]) for r in rows]
    y = [float(r[2]) for r in rows]
    if with_clean:
        xc = [float(r[3]) for r in rows]
        yc = [float(r[4]) for r in rows]
        return Dataset(x, y, xc, yc, meta=meta)
    return Dataset(x, y, meta=meta)
