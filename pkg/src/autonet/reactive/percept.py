"""Perception: classify raw stimuli into a percept, enriched from world knowledge."""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Optional

from ..knowledge.repository import WorldKnowledge
from ..simnet.events import Stimulus, StimulusKind
from ..simnet.model import (
    RouteRole,
    ServiceState,
    route_operational,
    route_port_pairs,
    service_state,
)


class DegradationClass(str, Enum):
    NONE = "NONE"
    DEGRADED = "DEGRADED"
    INTERRUPTED = "INTERRUPTED"


_SEVERITY = {DegradationClass.NONE: 0, DegradationClass.DEGRADED: 1,
             DegradationClass.INTERRUPTED: 2}


@dataclass
class Finding:
    finding: str
    service: Optional[str] = None
    element: Optional[str] = None
    port: Optional[str] = None
    role: Optional[str] = None
    state: Optional[str] = None
    latency_ms: Optional[float] = None
    margin_ms: Optional[float] = None
    enriched: bool = False
    detail: dict = field(default_factory=dict)

    def describe(self) -> dict:
        d = {"finding": self.finding}
        for key in ("service", "element", "port", "role", "state"):
            value = getattr(self, key)
            if value is not None:
                d[key] = value
        for key in ("latency_ms", "margin_ms"):
            value = getattr(self, key)
            if value is not None:
                d[key] = value
        if self.enriched:
            d["enriched"] = True
        if self.detail:
            d["detail"] = dict(self.detail)
        return d


@dataclass
class Percept:
    t: int
    findings: list[Finding]
    degradation: DegradationClass
    stimuli_kinds: list[str] = field(default_factory=list)

    def describe(self) -> dict:
        return {"t": self.t, "degradation": self.degradation.value,
                "findings": [f.describe() for f in self.findings]}


def _port_findings(stimulus: Stimulus, wk: WorldKnowledge) -> list[Finding]:
    ne_id = stimulus.source
    pid = stimulus.payload.get("port")
    down = stimulus.payload.get("state") == "DOWN"
    findings = [Finding(finding="port_down" if down else "repair",
                        element=ne_id, port=pid, state=stimulus.payload.get("state"))]
    facility = wk.state.facility
    if facility is None or not down:
        return findings
    for sid in sorted(facility.services):
        svc = facility.services[sid]
        for role in (RouteRole.WORKING, RouteRole.PROTECTION):
            route = svc.route_for(role)
            if route is None or (ne_id, pid) not in route_port_pairs(facility, route):
                continue
            if not route_operational(facility, svc, role):
                findings.append(Finding(
                    finding="route_failed", service=sid, role=role.value,
                    state=service_state(facility, svc).value, enriched=True))
    return findings


def _link_findings(stimulus: Stimulus, wk: WorldKnowledge) -> list[Finding]:
    link_id = stimulus.payload.get("link")
    down = stimulus.payload.get("state") == "DOWN"
    findings = [Finding(finding="link_down" if down else "repair",
                        element=link_id, state=stimulus.payload.get("state"))]
    facility = wk.state.facility
    if facility is None or not down:
        return findings
    for sid in sorted(facility.services):
        svc = facility.services[sid]
        for role in (RouteRole.WORKING, RouteRole.PROTECTION):
            route = svc.route_for(role)
            if route is None or link_id not in route.links:
                continue
            if not route_operational(facility, svc, role):
                findings.append(Finding(
                    finding="route_failed", service=sid, role=role.value,
                    state=service_state(facility, svc).value, enriched=True))
    return findings


def _kpi_findings(stimulus: Stimulus, wk: WorldKnowledge) -> list[Finding]:
    payload = stimulus.payload
    if "service" in payload and "latency_ms" in payload:
        sid = payload["service"]
        latency = float(payload["latency_ms"])
        digest = wk.state.service_digest(sid)
        margin = None
        enriched = False
        if digest.get("sla_latency_ms") is not None:
            margin = digest["sla_latency_ms"] - latency
            enriched = True
        return [Finding(finding="kpi", service=sid, latency_ms=latency,
                        margin_ms=margin, enriched=enriched,
                        detail={"route": payload.get("route", [])})]
    if "utilization" in payload:
        return [Finding(finding="utilization", element=payload.get("link", stimulus.source),
                        detail={"utilization": payload["utilization"]})]
    return [Finding(finding="kpi", detail=dict(payload))]


def perceive(stimuli: list[Stimulus], wk: WorldKnowledge) -> Percept:
    """Classify stimuli; unknown kinds pass through as UNCLASSIFIED findings."""
    if not stimuli:
        raise ValueError("perceive requires at least one stimulus")
    findings: list[Finding] = []
    for stimulus in stimuli:
        if stimulus.kind is StimulusKind.ALARM:
            if "port" in stimulus.payload:
                findings.extend(_port_findings(stimulus, wk))
            elif "link" in stimulus.payload:
                findings.extend(_link_findings(stimulus, wk))
            elif "service" in stimulus.payload:
                sid = stimulus.payload["service"]
                down = stimulus.payload.get("state") == "DOWN"
                state = None
                facility = wk.state.facility
                if facility and sid in facility.services:
                    state = service_state(facility, facility.services[sid]).value
                findings.append(Finding(
                    finding="route_failed" if down else "repair", service=sid,
                    role=stimulus.payload.get("route"), state=state,
                    enriched=state is not None))
            else:
                findings.append(Finding(finding="repair", element=stimulus.source,
                                        state=stimulus.payload.get("state")))
        elif stimulus.kind is StimulusKind.KPI:
            findings.extend(_kpi_findings(stimulus, wk))
        elif stimulus.kind is StimulusKind.LOG:
            findings.append(Finding(finding="log", element=stimulus.source,
                                    detail=dict(stimulus.payload)))
        else:
            findings.append(Finding(finding="UNCLASSIFIED", element=stimulus.source,
                                    detail=dict(stimulus.payload)))

    worst = DegradationClass.NONE
    facility = wk.state.facility
    for finding in findings:
        if finding.finding != "route_failed" or finding.service is None:
            continue
        if facility and finding.service in facility.services:
            svc = facility.services[finding.service]
            cls = DegradationClass(service_state(facility, svc).value) \
                if service_state(facility, svc) is not ServiceState.NORMAL \
                else DegradationClass.NONE
        else:
            cls = DegradationClass.DEGRADED
        if _SEVERITY[cls] > _SEVERITY[worst]:
            worst = cls
    return Percept(t=max(s.t for s in stimuli), findings=findings,
                   degradation=worst, stimuli_kinds=[s.kind.value for s in stimuli])
