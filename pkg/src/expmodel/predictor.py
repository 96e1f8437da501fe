"""Conditional-average predictor and its quality statistic.

The predictor is the conditional mean extracted from the kernel estimator:
y_p(x) = sum_i y_i C_i(x), where C_i are the normalized kernel similarities
between x and the stored x_i. The weights are computed in log domain
(maximum-exponent subtraction), so they stay a valid convex combination for
queries arbitrarily far from the data.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .density import Dataset
from .errors import DegenerateVariance, EmptyDataset, InvalidParameter, ShapeMismatch
from .information import default_schedule, _validate_schedule
from .scattering import ScatteringFunction, _require_finite


class CaPredictor:
    """Conditional-average predictor built on a basic dataset."""

    def __init__(self, data: Dataset, sf: ScatteringFunction):
        if len(data) == 0:
            raise EmptyDataset("the basic set must contain at least one sample")
        self.data = data
        self.sf = sf

    def _log_similarity(self, x) -> np.ndarray:
        # Column j holds log g(x_j - x_i) up to the common kernel constant,
        # which cancels in the normalized weights.
        x = np.atleast_1d(np.asarray(x, dtype=float))
        d = (x[None, :] - self.data.x[:, None]) / self.sf.sigma
        return -0.5 * d * d

    def weights(self, x: float) -> np.ndarray:
        """Similarity coefficients C_i(x): nonnegative, summing to one."""
        _require_finite("x", x)
        ls = self._log_similarity(x)[:, 0]
        w = np.exp(ls - ls.max())
        return w / w.sum()

    def predict(self, x: float) -> float:
        """Kernel-weighted average of the stored y values at query x."""
        return float(self.predict_many([x])[0])

    def predict_many(self, xs) -> np.ndarray:
        xs = np.asarray(xs, dtype=float)
        _require_finite("xs", xs)
        ls = self._log_similarity(xs)
        w = np.exp(ls - ls.max(axis=0, keepdims=True))
        w /= w.sum(axis=0, keepdims=True)
        return self.data.y @ w


@dataclass(frozen=True)
class QualityReport:
    """Moment breakdown of a prediction run against a test set.

    q is 1 - mse / (var_true + var_pred): exactly 1 for perfect prediction,
    0 for an independent predictor with matching mean, negative under mean
    bias. Population moments (divide by n) throughout.
    """

    q: float
    mean_true: float
    mean_pred: float
    var_true: float
    var_pred: float
    cov: float
    mse: float
    n_test: int


def predictor_quality(y_true: Sequence[float], y_pred: Sequence[float]) -> QualityReport:
    """Quality statistic of predictions y_pred against observed y_true."""
    yt = np.asarray(y_true, dtype=float)
    yp = np.asarray(y_pred, dtype=float)
    if yt.shape != yp.shape or yt.ndim != 1:
        raise ShapeMismatch(f"y_true has shape {yt.shape}, y_pred {yp.shape}")
    if yt.size < 2:
        raise ShapeMismatch("need at least two test points")
    _require_finite("y_true", yt)
    _require_finite("y_pred", yp)

    mean_true = float(yt.mean())
    mean_pred = float(yp.mean())
    var_true = float(np.mean((yt - mean_true) ** 2))
    var_pred = float(np.mean((yp - mean_pred) ** 2))
    denom = var_true + var_pred
    if denom == 0.0:
        raise DegenerateVariance("both variances vanish; quality undefined")
    cov = float(np.mean((yt - mean_true) * (yp - mean_pred)))
    mse = float(np.mean((yt - yp) ** 2))
    return QualityReport(
        q=1.0 - mse / denom,
        mean_true=mean_true,
        mean_pred=mean_pred,
        var_true=var_true,
        var_pred=var_pred,
        cov=cov,
        mse=mse,
        n_test=yt.size,
    )


def ca_quality_theoretical(var_true: float, var_pred: float) -> float:
    """Quality of an exact conditional average: 2 Var(y_p) / (Var(y) + Var(y_p)).

    Follows from the identities m(y) = m(y_p) and Cov(y, y_p) = Var(y_p),
    which hold when the conditional average is taken under the model
    distribution itself.
    """
    if not (np.isfinite(var_true) and np.isfinite(var_pred)):
        raise InvalidParameter("variances must be finite")
    if var_true < 0 or var_pred < 0:
        raise InvalidParameter("variances must be nonnegative")
    denom = var_true + var_pred
    if denom == 0.0:
        raise DegenerateVariance("both variances vanish; quality undefined")
    return 2.0 * var_pred / denom


def quality_sweep(basic: Dataset,
                  test: Dataset,
                  sf: ScatteringFunction,
                  schedule: Optional[Sequence[int]] = None) -> list[tuple[int, QualityReport]]:
    """Quality of predictors built on growing prefixes of the basic set.

    Every schedule point n yields a predictor on the first n basic samples,
    evaluated on the full test set.
    """
    if schedule is None:
        schedule = default_schedule(len(basic))
    sched = _validate_schedule(schedule, len(basic))
    out = []
    for n in sched:
        predictor = CaPredictor(basic.prefix(n), sf)
        y_p = predictor.predict_many(test.x)
        out.append((n, predictor_quality(test.y, y_p)))
    return out


def _fmt(v: float) -> str:
    return format(float(v), ".17g")


def write_predictions_csv(path, x_t, y_t, y_p) -> None:
    """Prediction table: x_t, y_t, y_p, err with err = y_p - y_t."""
    x_t = np.asarray(x_t, dtype=float)
    y_t = np.asarray(y_t, dtype=float)
    y_p = np.asarray(y_p, dtype=float)
    if not (x_t.shape == y_t.shape == y_p.shape):
        raise ShapeMismatch("prediction columns must have equal length")
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["x_t", "y_t", "y_p", "err"])
        for a, b, c in zip(x_t, y_t, y_p):
            writer.writerow([_fmt(a), _fmt(b), _fmt(c), _fmt(c - b)])


def write_quality_csv(path, rows: Sequence[tuple[int, int, QualityReport]]) -> None:
    """Quality table over (n, seed) runs."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["N", "seed", "Q", "var_y", "var_yp", "cov", "mse"])
        for n, seed, rep in rows:
            writer.writerow(
                [n, seed, _fmt(rep.q), _fmt(rep.var_true), _fmt(rep.var_pred),
                 _fmt(rep.cov), _fmt(rep.mse)]
            )
