"""Inference-accuracy model for partitioned DNN execution over a jammed link.

Accuracy at a partition point k < K follows a four-parameter logistic curve in
the received linear SINR: corrupting the intermediate feature data hurts more
or less depending on where the network is split.  Fully local execution
(k = K) sends nothing and keeps the clean model accuracy.
"""
from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np
from scipy.optimize import least_squares

# Logistic parameters per split point for the bundled profile, obtained by
# fitting corrupted-feature accuracy measurements of an 18-layer residual CNN
# on 32x32 RGB images.  Index k = 0 is full offload (raw input transmitted).
_DEFAULT_AMPLITUDE = (0.86, 0.85, 0.83, 0.89, 0.84)
_DEFAULT_SLOPE = (0.38, 0.70, 0.46, 0.42, 0.57)
_DEFAULT_MIDPOINT = (6.98, 7.29, 11.79, 14.08, 11.58)
_DEFAULT_OFFSET = (0.09, 0.10, 0.12, 0.06, 0.11)
DEFAULT_LOCAL_ACCURACY = 0.95

# Exponent magnitude beyond which the logistic saturates in float64.
_EXP_CLIP = 700.0


@dataclass(frozen=True)
class AccuracyModel:
    """Per-split-point logistic parameters plus the fully-local accuracy.

    amplitude[k] is the curve height A, slope[k] the steepness per unit of
    linear SINR, midpoint[k] the SINR of the half-rise point, offset[k] the
    accuracy floor under total corruption.  All tuples have one entry per
    transmitting split point k = 0 .. K-1; local_accuracy covers k = K.
    """

    amplitude: tuple[float, ...]
    slope: tuple[float, ...]
    midpoint: tuple[float, ...]
    offset: tuple[float, ...]
    local_accuracy: float = DEFAULT_LOCAL_ACCURACY

    def __post_init__(self):
        object.__setattr__(self, "amplitude", tuple(float(a) for a in self.amplitude))
        object.__setattr__(self, "slope", tuple(float(t) for t in self.slope))
        object.__setattr__(self, "midpoint", tuple(float(m) for m in self.midpoint))
        object.__setattr__(self, "offset", tuple(float(b) for b in self.offset))
        object.__setattr__(self, "local_accuracy", float(self.local_accuracy))
        n = len(self.amplitude)
        if not (len(self.slope) == len(self.midpoint) == len(self.offset) == n):
            raise ValueError("accuracy_model: parameter tuples must share one length")
        if n == 0:
            raise ValueError("accuracy_model: needs at least one split point")
        for k, (a, t, b) in enumerate(zip(self.amplitude, self.slope, self.offset)):
            if a <= 0.0:
                raise ValueError(f"accuracy_model.amplitude[{k}]: must be positive")
            if t <= 0.0:
                raise ValueError(f"accuracy_model.slope[{k}]: must be positive")
            if b < 0.0:
                raise ValueError(f"accuracy_model.offset[{k}]: must be nonnegative")
            if a + b > 1.0 + 1e-12:
                raise ValueError(f"accuracy_model: amplitude[{k}] + offset[{k}] exceeds 1")
        if not 0.0 < self.local_accuracy <= 1.0:
            raise ValueError("accuracy_model.local_accuracy: must lie in (0, 1]")

    @property
    def num_points(self) -> int:
        """Number of transmitting split points; local execution is index num_points."""
        return len(self.amplitude)


@dataclass(frozen=True)
class AccuracySample:
    """One measured (split point, linear SINR, accuracy) triple."""

    partition_point: int
    sinr: float
    accuracy: float


@dataclass(frozen=True)
class FitResult:
    amplitude: float
    slope: float
    midpoint: float
    offset: float
    rmse: float


def default_accuracy_model() -> AccuracyModel:
    """Model bundled with the six-segment residual-CNN profile."""
    return AccuracyModel(
        amplitude=_DEFAULT_AMPLITUDE,
        slope=_DEFAULT_SLOPE,
        midpoint=_DEFAULT_MIDPOINT,
        offset=_DEFAULT_OFFSET,
        local_accuracy=DEFAULT_LOCAL_ACCURACY,
    )


def accuracy(model: AccuracyModel, k: int, sinr: float) -> float:
    """Inference accuracy at split point k under linear SINR ``sinr``.

    Returns model.local_accuracy for k = num_points (nothing transmitted);
    otherwise the logistic value, saturating cleanly instead of overflowing
    for extreme SINR.
    """
    if not 0 <= k <= model.num_points:
        raise ValueError(f"split point {k} outside [0, {model.num_points}]")
    if sinr < 0.0:
        raise ValueError("sinr must be nonnegative")
    if k == model.num_points:
        return model.local_accuracy
    z = -model.slope[k] * (sinr - model.midpoint[k])
    if z > _EXP_CLIP:
        return model.offset[k]
    if z < -_EXP_CLIP:
        return model.offset[k] + model.amplitude[k]
    return model.amplitude[k] / (1.0 + math.exp(z)) + model.offset[k]


def min_sinr_for_accuracy(model: AccuracyModel, k: int, acc_min: float) -> float:
    """Smallest linear SINR whose accuracy at split point k reaches acc_min.

    Inverts the logistic.  Returns -inf when the floor alone already meets the
    target (the constraint is vacuous) and +inf when the curve can never reach
    it.  Only defined for transmitting split points k < num_points.
    """
    if not 0 <= k < model.num_points:
        raise ValueError(f"split point {k} outside [0, {model.num_points})")
    a, t, m, b = model.amplitude[k], model.slope[k], model.midpoint[k], model.offset[k]
    if acc_min <= b:
        return float("-inf")
    if acc_min >= a + b:
        return float("inf")
    return m - math.log(a / (acc_min - b) - 1.0) / t


def _logistic_residuals(params, s, y):
    a, t, m, b = params
    z = np.clip(-t * (s - m), -_EXP_CLIP, _EXP_CLIP)
    return a / (1.0 + np.exp(z)) + b - y


def fit(samples, k: int, init=None, restarts: int = 4, seed: int = 0) -> FitResult:
    """Least-squares logistic fit for split point k from measured samples.

    Runs a bounded trust-region solve from a data-driven initial guess plus
    ``restarts`` perturbed restarts (deterministic in ``seed``), keeping the
    lowest-residual result.  Requires at least 8 samples for the point
    spanning at least two distinct SINRs; identical accuracies everywhere are
    rejected as non-identifiable.
    """
    sel = [x for x in samples if x.partition_point == k]
    if len(sel) < 8:
        raise ValueError(f"need at least 8 samples for split point {k}, got {len(sel)}")
    s = np.array([x.sinr for x in sel], dtype=float)
    y = np.array([x.accuracy for x in sel], dtype=float)
    if np.unique(s).size < 2:
        raise ValueError("samples must span at least two distinct SINR values")
    if float(np.ptp(y)) == 0.0:
        raise ValueError("non-identifiable: all samples share one accuracy value")

    lo, hi = float(y.min()), float(y.max())
    span = max(hi - lo, 1e-3)
    s_lo, s_hi = float(s.min()), float(s.max())
    s_range = max(s_hi - s_lo, 1e-6)
    if init is None:
        # Midpoint guess: the sample closest to the half-rise accuracy.
        mid_guess = float(s[np.argmin(np.abs(y - (lo + hi) / 2.0))])
        init = (span, 4.0 / s_range, mid_guess, max(lo, 0.0))
    bounds = (
        [1e-6, 1e-6, s_lo - 5.0 * s_range - 10.0, 0.0],
        [1.0, 1e3, s_hi + 5.0 * s_range + 10.0, 1.0 - 1e-9],
    )
    x0 = np.clip(np.asarray(init, dtype=float), bounds[0], bounds[1])

    rng = np.random.default_rng(seed)
    starts = [x0]
    for _ in range(restarts):
        jitter = np.exp(rng.normal(0.0, 0.4, size=4))
        cand = x0 * jitter
        cand[2] = x0[2] + rng.normal(0.0, 0.25 * s_range)
        starts.append(np.clip(cand, bounds[0], bounds[1]))

    best = None
    for start in starts:
        res = least_squares(
            _logistic_residuals,
            start,
            bounds=bounds,
            args=(s, y),
            xtol=1e-10,
            ftol=1e-12,
            gtol=1e-12,
            max_nfev=2000,
        )
        if best is None or res.cost < best.cost:
            best = res

    a, t, m, b = (float(v) for v in best.x)
    # Project onto the admissible region if the optimizer grazed its edge.
    b = min(max(b, 0.0), 1.0 - 1e-9)
    a = min(max(a, 1e-9), 1.0 - b)
    rmse = float(np.sqrt(np.mean(_logistic_residuals((a, t, m, b), s, y) ** 2)))
    return FitResult(amplitude=a, slope=t, midpoint=m, offset=b, rmse=rmse)


def load_samples_csv(path) -> list[AccuracySample]:
    """Read (k, sinr, accuracy) rows from a headered CSV file."""
    out = []
    with open(Path(path), newline="") as fh:
        reader = csv.DictReader(fh)
        required = {"k", "sinr", "accuracy"}
        if reader.fieldnames is None or not required.issubset(reader.fieldnames):
            raise ValueError(f"samples CSV must have columns {sorted(required)}")
        for i, row in enumerate(reader):
            try:
                out.append(
                    AccuracySample(
                        partition_point=int(row["k"]),
                        sinr=float(row["sinr"]),
                        accuracy=float(row["accuracy"]),
                    )
                )
            except (TypeError, ValueError) as exc:
                raise ValueError(f"samples CSV row {i + 2}: {exc}") from exc
    return out
