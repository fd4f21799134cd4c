"""R and L estimation from sampled line voltage and current.

Every row integrates ``v = R*i + L*di/dt`` between two adjacent samples with
the trapezoidal rule::

    (dt/2)(v[k+1] + v[k]) = R (dt/2)(i[k+1] + i[k]) + L (i[k+1] - i[k])

Two consecutive rows give the three-sample algorithm; N rows solved in the
least-squares sense give the long-window variant.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Sequence, Tuple

import numpy as np

from .signals import SampledSignal

#: window is flagged invalid when |denominator| < SINGULARITY_FLOOR * max|i|^2
SINGULARITY_FLOOR = 1e-9
#: least-squares window is invalid when det(G) < GRAM_FLOOR * G11 * G22
GRAM_FLOOR = 1e-9


@dataclass(frozen=True)
class RLEstimate:
    R: float
    L: float
    denominator: float
    k: int
    valid: bool = True
    excluded: int = 0  # averaged estimates only: members dropped as invalid


@dataclass(frozen=True)
class EstimateSeries:
    """Consecutive estimates; entry j belongs to window ``k_start + j``."""

    estimates: Tuple[RLEstimate, ...]

    def __post_init__(self):
        est = tuple(self.estimates)
        for a, b in zip(est, est[1:]):
            if b.k != a.k + 1:
                raise ValueError("estimate windows must advance by exactly one sample")
        object.__setattr__(self, "estimates", est)

    def __len__(self) -> int:
        return len(self.estimates)

    def __iter__(self) -> Iterator[RLEstimate]:
        return iter(self.estimates)

    def __getitem__(self, j) -> RLEstimate:
        return self.estimates[j]

    @property
    def R(self) -> np.ndarray:
        return np.array([e.R for e in self.estimates])

    @property
    def L(self) -> np.ndarray:
        return np.array([e.L for e in self.estimates])

    @property
    def denominators(self) -> np.ndarray:
        return np.array([e.denominator for e in self.estimates])

    @property
    def valid(self) -> np.ndarray:
        return np.array([e.valid for e in self.estimates], dtype=bool)

    @property
    def k(self) -> np.ndarray:
        return np.array([e.k for e in self.estimates], dtype=int)


def _check_pair(v: SampledSignal, i: SampledSignal) -> None:
    if not v.same_grid(i):
        raise ValueError("voltage and current must share sampling config and start time")


def _rows(v: np.ndarray, i: np.ndarray, dt: float):
    """Row coefficients (a, b, y) of the trapezoid-integrated line equation."""
    a = 0.5 * dt * (i[1:] + i[:-1])
    b = i[1:] - i[:-1]
    y = 0.5 * dt * (v[1:] + v[:-1])
    return a, b, y


def _second_order_parts(i0, i1, i2):
    """First difference, second difference and ``2 (i1^2 - i0 i2)``.

    The denominator is formed as ``2 (d0^2 - i0 dd)``, which is algebraically
    identical but keeps its accuracy when the current is nearly linear.
    """
    d0 = i1 - i0
    dd = (i2 - i1) - d0
    return d0, dd, 2.0 * (d0 * d0 - i0 * dd)


def _three_sample(v: np.ndarray, i: np.ndarray, dt: float):
    """Vectorised closed-form solution of every consecutive row pair.

    Returns R, L, denominator, valid arrays of length len(i) - 2.
    """
    i0, i1, i2 = i[:-2], i[1:-1], i[2:]
    v0, v1, v2 = v[:-2], v[1:-1], v[2:]
    d0, dd, den = _second_order_parts(i0, i1, i2)
    v_sum, v_span = v1 + v0, v2 - v0
    num_R = v_span * d0 - v_sum * dd
    num_L = 0.5 * dt * ((i2 - i0) * v_sum - (i1 + i0) * v_span)
    scale = np.maximum(np.maximum(np.abs(i0), np.abs(i1)), np.abs(i2))
    valid = np.abs(den) > SINGULARITY_FLOOR * scale * scale
    with np.errstate(divide="ignore", invalid="ignore"):
        R = np.where(valid, num_R / den, np.nan)
        L = np.where(valid, num_L / den, np.nan)
    return R, L, den, valid


def denominator(i: SampledSignal, k: int) -> float:
    """``2 (i[k+1]^2 - i[k] i[k+2])``, proportional to the determinant of the row pair at k."""
    if not (0 <= k and k + 2 < len(i)):
        raise IndexError(f"window k={k} needs samples up to {k + 2}, signal has {len(i)}")
    x = i.values
    return float(_second_order_parts(x[k], x[k + 1], x[k + 2])[2])


def three_sample_estimate(v: SampledSignal, i: SampledSignal, k: int) -> RLEstimate:
    """Solve the two-row system built from samples k, k+1, k+2.

    Near-singular windows come back with ``valid=False`` and NaN R, L.
    """
    _check_pair(v, i)
    if not (0 <= k and k + 2 < len(i)):
        raise IndexError(f"window k={k} needs samples up to {k + 2}, signal has {len(i)}")
    R, L, den, ok = _three_sample(v.values[k : k + 3], i.values[k : k + 3], i.dt)
    return RLEstimate(float(R[0]), float(L[0]), float(den[0]), k, bool(ok[0]))


def estimate_series(
    v: SampledSignal, i: SampledSignal, k_start: int = 0, count: int = None
) -> EstimateSeries:
    """Three-sample estimates for windows ``k_start .. k_start + count - 1``.

    ``count`` defaults to every remaining window.
    """
    _check_pair(v, i)
    n_windows = len(i) - 2
    if count is None:
        count = n_windows - k_start
    if k_start < 0 or count < 0 or k_start + count > n_windows:
        raise IndexError(f"windows {k_start}..{k_start + count - 1} exceed {n_windows} available")
    sl = slice(k_start, k_start + count + 2)
    R, L, den, ok = _three_sample(v.values[sl], i.values[sl], i.dt)
    return EstimateSeries(
        tuple(
            RLEstimate(float(R[j]), float(L[j]), float(den[j]), k_start + j, bool(ok[j]))
            for j in range(count)
        )
    )


def long_window_ls(v: SampledSignal, i: SampledSignal, k: int, N: int) -> RLEstimate:
    """Least-squares (R, L) over N rows starting at sample k (samples k .. k+N).

    Solves the 2x2 normal equations after scaling both columns to unit norm;
    the reported denominator is the unscaled Gram determinant.
    """
    _check_pair(v, i)
    if N < 2:
        raise ValueError(f"long window needs N >= 2 rows, got {N}")
    if not (0 <= k and k + N < len(i)):
        raise IndexError(f"window k={k}, N={N} needs samples up to {k + N}, signal has {len(i)}")
    a, b, y = _rows(v.values[k : k + N + 1], i.values[k : k + N + 1], i.dt)
    na, nb = np.sqrt(a @ a), np.sqrt(b @ b)
    if na == 0.0 or nb == 0.0:
        return RLEstimate(float("nan"), float("nan"), 0.0, k, False)
    a_s, b_s = a / na, b / nb
    c = a_s @ b_s
    det_s = 1.0 - c * c
    gram_det = float((na * nb) ** 2 * det_s)
    if not det_s > GRAM_FLOOR:
        return RLEstimate(float("nan"), float("nan"), gram_det, k, False)
    ra, rb = a_s @ y, b_s @ y
    R = (ra - c * rb) / det_s / na
    L = (rb - c * ra) / det_s / nb
    return RLEstimate(float(R), float(L), gram_det, k, True)


def averaged_estimates(v: SampledSignal, i: SampledSignal, k: int, count: int) -> RLEstimate:
    """Mean of ``count`` consecutive three-sample estimates starting at k.

    Invalid members are left out of the mean and tallied in ``excluded``.
    The denominator field is the mean denominator of the members used.
    """
    if count < 1:
        raise ValueError(f"count must be >= 1, got {count}")
    series = estimate_series(v, i, k, count)
    ok = series.valid
    if not ok.any():
        return RLEstimate(float("nan"), float("nan"), 0.0, k, False, excluded=count)
    return RLEstimate(
        float(np.mean(series.R[ok])),
        float(np.mean(series.L[ok])),
        float(np.mean(series.denominators[ok])),
        k,
        True,
        excluded=int(count - ok.sum()),
    )


def row_residuals(v: SampledSignal, i: SampledSignal, est: RLEstimate) -> np.ndarray:
    """Residuals of the two rows behind a three-sample estimate."""
    a, b, y = _rows(v.values[est.k : est.k + 3], i.values[est.k : est.k + 3], i.dt)
    return a * est.R + b * est.L - y


def trapezoid_inductance_factor(frequency: float, dt: float) -> float:
    """Ratio L_estimated / L_true for a steady sinusoid at ``frequency``.

    The trapezoid rule sees d/dt of a sinusoid as (2/dt) tan(w dt/2) instead
    of w, so every window returns the true R and an inductance scaled by
    x / tan(x) with x = w dt / 2.
    """
    x = np.pi * frequency * dt
    return float(x / np.tan(x)) if x else 1.0


def relative_errors(est: Sequence[RLEstimate], R: float, L: float) -> Tuple[np.ndarray, np.ndarray]:
    R_hat = np.array([e.R for e in est])
    L_hat = np.array([e.L for e in est])
    return np.abs(R_hat / R - 1.0), np.abs(L_hat / L - 1.0)
