"""Zone characteristic in the R-L plane and the counting trip scheme."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, List, Optional, Sequence, Tuple, Union

import numpy as np

from .estimators import EstimateSeries, RLEstimate, estimate_series
from .signals import SampledSignal


@dataclass(frozen=True)
class RectangleZone:
    R_min: float
    R_max: float
    L_min: float
    L_max: float

    def __post_init__(self):
        if not self.R_min < self.R_max:
            raise ValueError(f"R_min must be < R_max, got {self.R_min}, {self.R_max}")
        if not self.L_min < self.L_max:
            raise ValueError(f"L_min must be < L_max, got {self.L_min}, {self.L_max}")

    def contains_point(self, R: float, L: float) -> bool:
        return self.R_min <= R <= self.R_max and self.L_min <= L <= self.L_max


@dataclass(frozen=True)
class PolygonZone:
    """Convex polygon given by (R, L) vertices in either winding order."""

    vertices: Tuple[Tuple[float, float], ...]

    def __post_init__(self):
        verts = tuple((float(r), float(l)) for r, l in self.vertices)
        if len(verts) < 3:
            raise ValueError("a polygon zone needs at least three vertices")
        crosses = self._edge_crosses(verts)
        if np.all(crosses == 0):
            raise ValueError("polygon vertices are collinear")
        if not (np.all(crosses >= 0) or np.all(crosses <= 0)):
            raise ValueError("polygon zone must be convex")
        # A star-shaped vertex order has same-sign turns but winds more than once.
        turning = 0.0
        for j in range(len(verts)):
            (x0, y0), (x1, y1), (x2, y2) = verts[j - 2], verts[j - 1], verts[j]
            turning += np.arctan2((x1 - x0) * (y2 - y1) - (y1 - y0) * (x2 - x1),
                                  (x1 - x0) * (x2 - x1) + (y1 - y0) * (y2 - y1))
        if abs(abs(turning) - 2 * np.pi) > 1e-6:
            raise ValueError("polygon zone must be simple and convex")
        object.__setattr__(self, "vertices", verts)

    @staticmethod
    def _edge_crosses(verts) -> np.ndarray:
        p = np.asarray(verts)
        d1 = np.roll(p, -1, axis=0) - p
        d2 = np.roll(p, -2, axis=0) - np.roll(p, -1, axis=0)
        return d1[:, 0] * d2[:, 1] - d1[:, 1] * d2[:, 0]

    def contains_point(self, R: float, L: float) -> bool:
        p = np.asarray(self.vertices)
        q = np.roll(p, -1, axis=0)
        side = (q[:, 0] - p[:, 0]) * (L - p[:, 1]) - (q[:, 1] - p[:, 1]) * (R - p[:, 0])
        return bool(np.all(side >= 0) or np.all(side <= 0))


ZoneCharacteristic = Union[RectangleZone, PolygonZone]


def zone_contains(zone: ZoneCharacteristic, est: RLEstimate) -> bool:
    """Closed-boundary containment; invalid estimates are never inside."""
    if not est.valid or not (np.isfinite(est.R) and np.isfinite(est.L)):
        return False
    return zone.contains_point(est.R, est.L)


@dataclass(frozen=True)
class CounterState:
    count: int = 0
    threshold: int = 4

    def __post_init__(self):
        if self.threshold < 1:
            raise ValueError(f"threshold must be >= 1, got {self.threshold}")
        if not 0 <= self.count <= self.threshold:
            raise ValueError(f"count {self.count} outside [0, {self.threshold}]")

    @property
    def at_threshold(self) -> bool:
        return self.count >= self.threshold


def counter_step(state: CounterState, inside: bool) -> CounterState:
    """Up one for an in-zone estimate, down one otherwise; saturates at 0 and threshold."""
    if inside:
        count = min(state.count + 1, state.threshold)
    else:
        count = max(state.count - 1, 0)
    return CounterState(count, state.threshold)


@dataclass(frozen=True)
class TripEvent:
    sample_index: int  # last sample consumed when the counter reached threshold
    time: float
    window: int  # three-sample window index k of that step


@dataclass(frozen=True)
class RelayRun:
    trip: Optional[TripEvent]
    estimates: Tuple[RLEstimate, ...]
    inside: Tuple[bool, ...]
    counts: Tuple[int, ...]
    threshold: int

    @property
    def tripped(self) -> bool:
        return self.trip is not None


def count_to_trip(
    estimates: Iterable[RLEstimate],
    zone: ZoneCharacteristic,
    threshold: int = 4,
    dt: float = 1.0,
    t_start: float = 0.0,
    window_span: int = 2,
) -> RelayRun:
    """Feed a stream of estimates through the counter.

    ``window_span`` is how many samples past k an estimate consumes (2 for the
    three-sample algorithm). The trip is the first step that brings the
    counter to threshold; the scan keeps going so the trace covers every
    estimate.
    """
    state = CounterState(0, threshold)
    est_list: List[RLEstimate] = list(estimates)
    inside: List[bool] = []
    counts: List[int] = []
    trip = None
    for est in est_list:
        flag = zone_contains(zone, est)
        state = counter_step(state, flag)
        inside.append(flag)
        counts.append(state.count)
        if trip is None and state.at_threshold:
            last = est.k + window_span
            trip = TripEvent(last, t_start + last * dt, est.k)
    return RelayRun(trip, tuple(est_list), tuple(inside), tuple(counts), threshold)


def run_relay(
    v: SampledSignal, i: SampledSignal, zone: ZoneCharacteristic, threshold: int = 4
) -> RelayRun:
    """Slide the three-sample estimator over the record and run the counter."""
    if len(i) < 3:
        raise ValueError(f"need at least 3 samples, got {len(i)}")
    if threshold < 1:
        raise ValueError(f"threshold must be >= 1, got {threshold}")
    series: EstimateSeries = estimate_series(v, i)
    return count_to_trip(series, zone, threshold, i.dt, i.t_start)


def trip_samples(inside: Sequence[bool], threshold: int = 4) -> Optional[int]:
    """Number of samples consumed before tripping, for an in/out pattern that starts at sample 0."""
    state = CounterState(0, threshold)
    for k, flag in enumerate(inside):
        state = counter_step(state, flag)
        if state.at_threshold:
            return k + 3
    return None
