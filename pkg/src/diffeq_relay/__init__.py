"""Differential-equation distance-relay algorithms for a series R-L line."""

from .estimators import (
    EstimateSeries,
    RLEstimate,
    averaged_estimates,
    denominator,
    estimate_series,
    long_window_ls,
    three_sample_estimate,
)
from .quadrature import IntervalPair, harmonic_pair_integrals, reject_harmonic, trapz
from .signals import (
    AnalyticWaveform,
    Constant,
    DecayingExponential,
    ErrorModel,
    FaultScenario,
    FourierSeries,
    Harmonic,
    Ramp,
    SampledSignal,
    SamplingConfig,
    Sinusoid,
    add_measurement_error,
    analytic_line_voltage,
    fault_current,
    line_voltage,
    synth_fourier,
)
from .trip import (
    CounterState,
    PolygonZone,
    RectangleZone,
    TripEvent,
    counter_step,
    run_relay,
    zone_contains,
)

__all__ = [
    "add_measurement_error",
    "analytic_line_voltage",
    "AnalyticWaveform",
    "averaged_estimates",
    "Constant",
    "counter_step",
    "CounterState",
    "DecayingExponential",
    "denominator",
    "ErrorModel",
    "estimate_series",
    "EstimateSeries",
    "fault_current",
    "FaultScenario",
    "FourierSeries",
    "Harmonic",
    "harmonic_pair_integrals",
    "IntervalPair",
    "line_voltage",
    "long_window_ls",
    "PolygonZone",
    "Ramp",
    "RectangleZone",
    "reject_harmonic",
    "RLEstimate",
    "run_relay",
    "SampledSignal",
    "SamplingConfig",
    "Sinusoid",
    "synth_fourier",
    "three_sample_estimate",
    "trapz",
    "TripEvent",
    "zone_contains",
]

__version__ = "0.1.0"
