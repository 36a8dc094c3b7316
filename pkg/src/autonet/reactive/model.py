"""Reflection: build a predictive model (state snapshot plus enabled actions)."""

from __future__ import annotations

from dataclasses import dataclass, field

from ..knowledge.repository import WorldKnowledge
from ..knowledge.types import ContextAction, NetworkContext, QueryKind
from ..simnet.model import (
    FacilityState,
    PortState,
    ServiceState,
    route_operational,
    service_state,
)
from .percept import Percept


@dataclass
class PredictiveModel:
    """Snapshot of the controlled facility with enabled actions and a
    horizon-1 view of anticipated environment events."""
    t: int
    snapshot: FacilityState
    enabled_actions: list[ContextAction] = field(default_factory=list)
    anticipated: list[dict] = field(default_factory=list)
    low_confidence: bool = False
    context: NetworkContext | None = None

    def describe(self) -> dict:
        return {
            "t": self.t,
            "services": {sid: service_state(self.snapshot, svc).value
                         for sid, svc in sorted(self.snapshot.services.items())},
            "enabled_actions": [a.describe() for a in self.enabled_actions],
            "anticipated": [dict(a) for a in self.anticipated],
            "low_confidence": self.low_confidence,
        }


def _action_enabled(snapshot: FacilityState, action: ContextAction) -> bool:
    svc = snapshot.services.get(action.service or "")
    if svc is None:
        return False
    if action.kind == "SWITCHOVER":
        return route_operational(snapshot, svc, svc.active.other)
    # route construction and cross-connect edits stay enabled as long as the
    # service exists; the planner binds and validates concrete paths
    return True


def reflect(percept: Percept, wk: WorldKnowledge) -> PredictiveModel:
    """Overlay percept findings on the known state and compute enabled actions."""
    if wk.state.facility is None:
        raise ValueError("world knowledge carries no facility view")
    snapshot = wk.state.facility.clone()
    for finding in percept.findings:
        if finding.finding == "port_down" and finding.element and finding.port:
            ne = snapshot.elements.get(finding.element)
            if ne is not None and finding.port in ne.ports:
                ne.ports[finding.port] = PortState.DOWN

    result = wk.query(QueryKind.PERCEPT_TO_CONTEXT, percept)
    low_confidence = result.no_match
    context = result.context
    enabled = [a for a in (context.actions if context else [])
               if _action_enabled(snapshot, a)]

    anticipated: list[dict] = []
    for sid in sorted(snapshot.services):
        svc = snapshot.services[sid]
        if service_state(snapshot, svc) is ServiceState.DEGRADED:
            anticipated.append({"event": "remaining_route_failure",
                                "service": sid, "likelihood": "POSSIBLE"})
    for finding in percept.findings:
        if (finding.finding == "kpi" and finding.margin_ms is not None
                and 0 < finding.margin_ms <= 1.0):
            anticipated.append({"event": "sla_breach", "service": finding.service,
                                "likelihood": "LIKELY"})
    return PredictiveModel(t=percept.t, snapshot=snapshot, enabled_actions=enabled,
                           anticipated=anticipated, low_confidence=low_confidence,
                           context=context)
