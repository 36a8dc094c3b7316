"""Task routing: frequency/urgency classification into RB, PB or HUMAN.

Urgency is intrinsic per event kind (a static time-to-impact table);
frequency is observed per kind over a sliding window. Boundaries shift
when a kind's windowed frequency stays across the cut for a full
hysteresis window, and shift back on sustained decay.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

SIM_HOUR_MS = 3_600_000
HYSTERESIS_SAMPLES = 3

# Time-to-impact classes mapped onto urgency scores.
URGENCY_TABLE = {
    "port_failure": 0.95,
    "fiber_cut": 0.90,
    "message_loss_burst": 0.85,
    "congestion_alarm": 0.60,
    "service_restoration": 0.50,
    "capacity_trend": 0.30,
    "fiber_aging": 0.25,
    "latency_drift": 0.20,
    "repair_notice": 0.10,
    "license_expiry": 0.10,
    "hardware_upgrade_request": 0.20,
    "vendor_unknown_alarm": 0.30,
    "sla_renegotiation": 0.15,
    "external_report": 0.20,
}

DEFAULT_PB_COVERAGE = (
    "latency_drift", "fiber_aging", "service_restoration",
    "capacity_trend", "congestion_alarm", "repair_notice",
)


class Responsibility(str, Enum):
    RB = "RB"
    PB = "PB"
    HUMAN = "HUMAN"


@dataclass
class EventProfile:
    kind: str
    frequency_per_hour: float
    urgency: float

    def __post_init__(self) -> None:
        if self.frequency_per_hour < 0:
            raise ValueError("frequency must be non-negative")
        if not 0.0 <= self.urgency <= 1.0:
            raise ValueError("urgency must lie in [0, 1]")


@dataclass
class RoutingThresholds:
    urgency_cut: float = 0.7
    frequency_cut_per_hour: float = 10.0
    window_ms: int = SIM_HOUR_MS
    pb_coverage: tuple[str, ...] = DEFAULT_PB_COVERAGE
    rb_overrides: frozenset[str] = frozenset()

    def __post_init__(self) -> None:
        if not 0.0 < self.urgency_cut < 1.0:
            raise ValueError("urgency cut must lie in (0, 1)")
        if self.frequency_cut_per_hour <= 0:
            raise ValueError("frequency cut must be positive")


def classify(profile: EventProfile, thresholds: RoutingThresholds) -> Responsibility:
    if (profile.urgency >= thresholds.urgency_cut
            or profile.frequency_per_hour >= thresholds.frequency_cut_per_hour
            or profile.kind in thresholds.rb_overrides):
        return Responsibility.RB
    if profile.kind in thresholds.pb_coverage:
        return Responsibility.PB
    return Responsibility.HUMAN


@dataclass
class BoundaryShift:
    kind: str
    direction: str          # "PB->RB" | "RB->PB"
    frequency_per_hour: float

    def describe(self) -> dict:
        return {"kind": self.kind, "direction": self.direction,
                "frequency_per_hour": self.frequency_per_hour}


def shift_boundary(thresholds: RoutingThresholds,
                   history: dict[str, list[float]]
                   ) -> tuple[RoutingThresholds, list[BoundaryShift]]:
    """Migrate kinds whose windowed frequency stayed across the cut for the
    last HYSTERESIS_SAMPLES samples; migrate back on sustained decay."""
    if not history:
        raise ValueError("frequency history must be non-empty")
    overrides = set(thresholds.rb_overrides)
    shifts: list[BoundaryShift] = []
    for kind in sorted(history):
        samples = history[kind]
        if len(samples) < HYSTERESIS_SAMPLES:
            continue
        tail = samples[-HYSTERESIS_SAMPLES:]
        if kind not in overrides and all(
                s >= thresholds.frequency_cut_per_hour for s in tail):
            overrides.add(kind)
            shifts.append(BoundaryShift(kind, "PB->RB", tail[-1]))
        elif kind in overrides and all(
                s < thresholds.frequency_cut_per_hour for s in tail):
            overrides.discard(kind)
            shifts.append(BoundaryShift(kind, "RB->PB", tail[-1]))
    if not shifts:
        return thresholds, []
    updated = RoutingThresholds(
        urgency_cut=thresholds.urgency_cut,
        frequency_cut_per_hour=thresholds.frequency_cut_per_hour,
        window_ms=thresholds.window_ms,
        pb_coverage=thresholds.pb_coverage,
        rb_overrides=frozenset(overrides))
    return updated, shifts


class FrequencyTracker:
    """Sliding-window occurrence counter per event kind."""

    def __init__(self, window_ms: int = SIM_HOUR_MS):
        self.window_ms = window_ms
        self._arrivals: dict[str, list[int]] = {}
        self.history: dict[str, list[float]] = {}

    def observe(self, kind: str, t: int) -> float:
        arrivals = self._arrivals.setdefault(kind, [])
        arrivals.append(t)
        cutoff = t - self.window_ms
        self._arrivals[kind] = [a for a in arrivals if a > cutoff]
        frequency = len(self._arrivals[kind]) * SIM_HOUR_MS / self.window_ms
        self.history.setdefault(kind, []).append(frequency)
        del self.history[kind][:-16]
        return frequency
