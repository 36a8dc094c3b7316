"""Run reports: per-service metrics computed solely from the merged trace."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Optional

from .trace import TraceRecord


@dataclass
class ServiceMetrics:
    max_latency_ms: Optional[float] = None
    interrupted_ms: int = 0
    degraded_ms: int = 0
    loss_ms: int = 0
    final_state: Optional[str] = None
    final_active: Optional[str] = None
    final_working: Optional[list[str]] = None
    final_protection: Optional[list[str]] = None
    final_latency_ms: Optional[float] = None

    def describe(self) -> dict:
        return {
            "max_latency_ms": self.max_latency_ms,
            "interrupted_ms": self.interrupted_ms,
            "degraded_ms": self.degraded_ms,
            "loss_ms": self.loss_ms,
            "final_state": self.final_state,
            "final_active": self.final_active,
            "final_working": self.final_working,
            "final_protection": self.final_protection,
            "final_latency_ms": self.final_latency_ms,
        }


@dataclass
class RunReport:
    scenario: str
    phase: str
    seed: int
    until: int
    services: dict[str, ServiceMetrics] = field(default_factory=dict)
    deadlines_checked: int = 0
    deadlines_missed: int = 0
    rta_transitions: list[dict] = field(default_factory=list)
    boundary_shifts: list[dict] = field(default_factory=list)
    coordination_verdicts: list[dict] = field(default_factory=list)
    checks: dict[str, bool] = field(default_factory=dict)
    exit_status: int = 0

    def to_json(self) -> str:
        return json.dumps({
            "scenario": self.scenario, "phase": self.phase, "seed": self.seed,
            "until": self.until,
            "services": {sid: m.describe() for sid, m in sorted(self.services.items())},
            "deadlines": {"checked": self.deadlines_checked,
                          "missed": self.deadlines_missed},
            "rta_transitions": self.rta_transitions,
            "boundary_shifts": self.boundary_shifts,
            "coordination_verdicts": self.coordination_verdicts,
            "checks": dict(sorted(self.checks.items())),
            "exit_status": self.exit_status,
        }, sort_keys=True, indent=2)


def build_report(records: list[TraceRecord], scenario: str, phase: str,
                 seed: int, until: int) -> RunReport:
    report = RunReport(scenario=scenario, phase=phase, seed=seed, until=until)
    timelines: dict[str, list[tuple[int, str]]] = {}
    for record in records:
        payload = record.payload
        if record.stage == "facility":
            timelines.setdefault(payload["service"], []).append(
                (record.t, payload["state"]))
        elif record.stage == "final":
            sid = payload["service"]
            metrics = report.services.setdefault(sid, ServiceMetrics())
            metrics.final_state = payload["state"]
            metrics.final_active = payload["active"]
            metrics.final_working = payload.get("working")
            metrics.final_protection = payload.get("protection")
            metrics.final_latency_ms = payload.get("latency_ms")
            metrics.loss_ms = payload.get("loss_ms", 0)
            timelines.setdefault(sid, []).append((record.t, payload["state"]))
        elif record.stage == "stimulus" and "latency_ms" in payload.get("payload", {}):
            sid = payload["payload"]["service"]
            metrics = report.services.setdefault(sid, ServiceMetrics())
            latency = payload["payload"]["latency_ms"]
            if metrics.max_latency_ms is None or latency > metrics.max_latency_ms:
                metrics.max_latency_ms = latency
        elif record.stage == "deadline":
            report.deadlines_checked += 1
            if not payload.get("met", True):
                report.deadlines_missed += 1
        elif record.stage == "boundary_shift":
            report.boundary_shifts.append({"agent": record.agent, "t": record.t,
                                           **payload})
        elif record.stage == "rta":
            mode = payload.get("mode")
            if mode is not None:
                previous = next(
                    (tr["mode"] for tr in reversed(report.rta_transitions)
                     if tr["agent"] == record.agent), "ACTIVE_AI")
                if mode != previous:
                    report.rta_transitions.append(
                        {"agent": record.agent, "t": record.t, "mode": mode})
        elif record.stage == "coordination" and "relation" in payload:
            report.coordination_verdicts.append({"agent": record.agent,
                                                 "t": record.t, **payload})

    for sid, timeline in timelines.items():
        metrics = report.services.setdefault(sid, ServiceMetrics())
        for (t0, state), (t1, _) in zip(timeline, timeline[1:]):
            span = t1 - t0
            if state == "DEGRADED":
                metrics.degraded_ms += span
            elif state == "INTERRUPTED":
                metrics.interrupted_ms += span
        if metrics.final_latency_ms is not None:
            if metrics.max_latency_ms is None or \
                    metrics.final_latency_ms > metrics.max_latency_ms:
                metrics.max_latency_ms = metrics.final_latency_ms
    return report
