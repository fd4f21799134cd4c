"""Trapezoidal integration and paired-interval harmonic rejection.

Integrating a harmonic of order ``m`` over two equal windows whose starts are
``pi/(n*w0)`` apart shifts its phase by ``m*pi/n``. When ``m/n`` is odd the
two integrals are exact negatives and their sum drops the harmonic. Even
multiples of ``n`` are doubled instead.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Tuple, Union

import numpy as np

from .signals import FourierSeries, SampledSignal, SamplingConfig

GRID_TOL = 1e-9


def trapz(s: SampledSignal, k_start: int, k_end: int) -> float:
    """Trapezoidal area of ``s`` between samples ``k_start`` and ``k_end`` inclusive."""
    n = len(s)
    if not (0 <= k_start < k_end < n):
        raise IndexError(f"need 0 <= k_start < k_end < {n}, got {k_start}, {k_end}")
    seg = s.values[k_start : k_end + 1]
    return 0.5 * s.dt * float(np.sum(seg[1:] + seg[:-1]))


@dataclass(frozen=True)
class IntervalPair:
    """Two windows of angular length ``alpha`` whose starts differ by ``pi/n``.

    Absolute windows are ``[origin, origin + alpha/w0]`` and
    ``[origin + pi/(n w0), origin + (pi/n + alpha)/w0]``.
    """

    n: int
    alpha: float = math.pi / 3
    origin: float = 0.0

    def __post_init__(self):
        if int(self.n) != self.n or self.n < 1:
            raise ValueError(f"rejected harmonic order must be an integer >= 1, got {self.n!r}")
        if not (0 < self.alpha <= math.pi):
            raise ValueError(f"alpha must lie in (0, pi], got {self.alpha!r}")
        object.__setattr__(self, "n", int(self.n))

    def shift(self, omega0: float) -> float:
        return math.pi / (self.n * omega0)

    def duration(self, omega0: float) -> float:
        return self.alpha / omega0

    def windows(self, omega0: float) -> Tuple[Tuple[float, float], Tuple[float, float]]:
        t1 = self.origin
        t3 = self.origin + self.shift(omega0)
        d = self.duration(omega0)
        return (t1, t1 + d), (t3, t3 + d)


def _analytic_window(series: FourierSeries, omega0: float, start_phase: float, alpha: float,
                     shift_angle: float) -> float:
    # start_phase is w0*origin; shift_angle is the extra fundamental angle of the window start.
    total = series.c0 * alpha / omega0
    for h in series.terms:
        m = h.order
        a = m * start_phase + m * shift_angle + h.phase
        total += h.amplitude / (m * omega0) * (math.sin(a + m * alpha) - math.sin(a))
    return total


def _grid_index(t: float, s: SampledSignal, what: str) -> int:
    x = (t - s.t_start) / s.dt
    k = round(x)
    if abs(x - k) > GRID_TOL * max(1.0, abs(x)):
        raise ValueError(f"{what} at t={t!r} s does not fall on a sample instant")
    return int(k)


def harmonic_pair_integrals(
    i: Union[FourierSeries, SampledSignal],
    pair: IntervalPair,
    config: SamplingConfig = None,
) -> Tuple[float, float]:
    """Integrals of ``i`` over both windows of ``pair``.

    A FourierSeries is integrated in closed form term by term (needs
    ``config`` for f0). A SampledSignal is integrated with the trapezoidal
    rule; every window edge must land exactly on a sample instant.
    """
    if isinstance(i, FourierSeries):
        if config is None:
            raise ValueError("analytic mode needs a SamplingConfig for the fundamental")
        w0 = config.omega0
        start = w0 * pair.origin
        return (
            _analytic_window(i, w0, start, pair.alpha, 0.0),
            _analytic_window(i, w0, start, pair.alpha, math.pi / pair.n),
        )
    if isinstance(i, SampledSignal):
        if config is not None and config.f0 != i.config.f0:
            raise ValueError("config and signal disagree on the fundamental")
        w0 = i.config.omega0
        width = pair.duration(w0) / i.dt
        shift = pair.shift(w0) / i.dt
        for name, x in (("window length alpha/w0", width), ("window shift pi/(n w0)", shift)):
            if abs(x - round(x)) > GRID_TOL * max(1.0, x):
                raise ValueError(f"{name} is {x:g} samples, not a whole number")
        (t1, t2), (t3, t4) = pair.windows(w0)
        k1, k2 = _grid_index(t1, i, "t1"), _grid_index(t2, i, "t2")
        k3, k4 = _grid_index(t3, i, "t3"), _grid_index(t4, i, "t4")
        if k1 < 0 or k4 >= len(i):
            raise ValueError(
                f"windows span samples {k1}..{k4} but the signal has {len(i)} samples"
            )
        return trapz(i, k1, k2), trapz(i, k3, k4)
    raise TypeError(f"unsupported input {type(i).__name__}")


def reject_harmonic(
    i: Union[FourierSeries, SampledSignal],
    pair: IntervalPair,
    config: SamplingConfig = None,
) -> float:
    """Sum of the paired integrals; harmonic ``n`` and its odd multiples cancel."""
    a, b = harmonic_pair_integrals(i, pair, config)
    return a + b
