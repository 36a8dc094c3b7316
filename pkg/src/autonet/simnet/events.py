"""Scheduled facility events and the stimuli they emit."""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum


class SimEventKind(str, Enum):
    PORT_FAIL = "PORT_FAIL"
    FIBER_CUT = "FIBER_CUT"
    LATENCY_DRIFT = "LATENCY_DRIFT"
    TRAFFIC_CHANGE = "TRAFFIC_CHANGE"
    REPAIR = "REPAIR"


class StimulusKind(str, Enum):
    ALARM = "ALARM"
    KPI = "KPI"
    LOG = "LOG"
    EXTERNAL = "EXTERNAL"


@dataclass(frozen=True)
class SimEvent:
    t: int
    kind: SimEventKind
    target: str                      # "NE3" | "NE3/p-L36" | "L78"
    magnitude_ms: float = 0.0

    def describe(self) -> dict:
        return {
            "t": self.t,
            "kind": self.kind.value,
            "target": self.target,
            "magnitude_ms": self.magnitude_ms,
        }


# Documented stimulus payload vocabulary. Perception treats anything
# outside this set as unclassified.
PAYLOAD_KEYS = frozenset({
    "port", "state", "link", "service", "route", "latency_ms",
    "utilization", "event", "delta_ms", "loss_ms", "board",
})


@dataclass(frozen=True)
class Stimulus:
    t: int
    source: str
    kind: StimulusKind
    payload: dict = field(default_factory=dict)

    def describe(self) -> dict:
        return {"t": self.t, "source": self.source, "kind": self.kind.value,
                "payload": dict(self.payload)}
