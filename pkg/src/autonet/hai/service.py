"""Human-agent interaction service: intake, routing, takeover, dashboard export."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from ..proactive.purpose import PurposeCondition
from ..reactive.goals import Goal
from ..simnet.model import Action, PortState, active_latency_ms, service_state
from .intents import Intent, IntentVerb, parse_intent
from .solver import ExpertRule, SolverRequest, SolverResponse, solve

SNAPSHOT_SCHEMA_VERSION = 1


@dataclass
class Receipt:
    destination: str
    trace_id: str
    accepted: bool = True
    detail: dict = field(default_factory=dict)

    def describe(self) -> dict:
        return {"destination": self.destination, "trace_id": self.trace_id,
                "accepted": self.accepted, "detail": dict(self.detail)}


@dataclass
class DashboardSnapshot:
    schema_version: int
    t: int
    services: dict[str, dict]
    alarms: list[dict]
    resources: dict
    goals: list[dict]
    rta: dict
    pending_human: list[dict]
    takeover: bool

    def describe(self) -> dict:
        return {"schema_version": self.schema_version, "t": self.t,
                "services": self.services, "alarms": self.alarms,
                "resources": self.resources, "goals": self.goals, "rta": self.rta,
                "pending_human": self.pending_human, "takeover": self.takeover}


class HAIService:
    """Front end of an owning agent; all effects go through that agent's
    serialized intake queues."""

    def __init__(self, agent, expert_rules: Optional[list[ExpertRule]] = None):
        self.agent = agent
        self.expert_rules = expert_rules or []
        self._receipt_seq = 0

    # ------------------------------------------------------------------
    def _receipt(self, destination: str, accepted: bool = True,
                 detail: Optional[dict] = None) -> Receipt:
        self._receipt_seq += 1
        trace_id = f"hai:{self.agent.id}:{self._receipt_seq:06d}"
        receipt = Receipt(destination=destination, trace_id=trace_id,
                          accepted=accepted, detail=detail or {})
        self.agent.trace_event("hai", {"receipt": receipt.describe()})
        return receipt

    def parse_intent(self, text: str) -> Intent:
        return parse_intent(text)

    def handle(self, item, origin: str = "human"):
        """Umbrella intake: submissions route onward, queries go to the
        problem solver."""
        if isinstance(item, SolverRequest):
            return self.solve(item)
        return self.submit(item, origin=origin)

    # ------------------------------------------------------------------
    def submit(self, item, origin: str = "human") -> Receipt:
        """Route a submission to the module the architecture prescribes:
        intents to Intent Management, goals to Goal Management, actions to
        Decision-Making, feedback to Self-Awareness."""
        if origin == "agent" and self.agent.takeover_enabled:
            self.agent.suspend_item(item)
            return self._receipt("SUSPENDED", accepted=False,
                                 detail={"error": "REJECTED_IN_TAKEOVER"})

        if isinstance(item, str):
            item = self.parse_intent(item)

        if isinstance(item, Intent):
            return self._submit_intent(item)
        if isinstance(item, Goal):
            try:
                self.agent.queue_goal(
                    item, origin="HUMAN" if origin == "human" else item.origin)
            except ValueError as exc:
                return self._receipt("GOAL_MANAGEMENT", accepted=False,
                                     detail={"error": str(exc)})
            return self._receipt("GOAL_MANAGEMENT", detail={"goal": item.id})
        if isinstance(item, Action):
            result = self.agent.execute_human_action(item)
            return self._receipt("DECISION_MAKING",
                                 accepted=result.ok, detail=result.describe())
        if isinstance(item, dict) and "feedback" in item:
            self.agent.record_feedback(item)
            return self._receipt("SELF_AWARENESS", detail={"feedback": item["feedback"]})
        raise TypeError(f"cannot route submission of type {type(item).__name__}")

    def _submit_intent(self, intent: Intent) -> Receipt:
        if intent.verb is IntentVerb.ENSURE:
            condition = self._condition_from_intent(intent)
            self.agent.register_condition(condition, intent)
            return self._receipt("INTENT_MANAGEMENT",
                                 detail={"condition": condition.id,
                                         "intent": intent.describe()})
        if intent.verb is IntentVerb.REPORT:
            response = self.solve(SolverRequest(
                text=f"report {intent.metric} of {intent.target}",
                context={"service": intent.target}))
            return self._receipt("PROBLEM_SOLVER",
                                 detail={"response": response.describe()})
        needs = self.agent.needs_from_intent(intent)
        return self._receipt("INTENT_MANAGEMENT",
                             detail={"needs": [n.id for n in needs],
                                     "intent": intent.describe()})

    def _condition_from_intent(self, intent: Intent) -> PurposeCondition:
        bound = intent.amount if intent.unit != "percent" else None
        return PurposeCondition(
            id=f"human:{intent.metric}:{intent.target}",
            kind="latency_bound" if intent.metric == "latency" else intent.metric,
            params={"bound_ms": bound, "target": intent.target,
                    "comparator": intent.comparator or "<"})

    # ------------------------------------------------------------------
    def solve(self, request: SolverRequest) -> SolverResponse:
        response = solve(request, self.agent.wk, self.expert_rules)
        self.agent.trace_event("solver", {"request": request.text,
                                          "response": response.describe()})
        return response

    # ------------------------------------------------------------------
    def takeover(self, enable: bool) -> Receipt:
        released, dropped = self.agent.set_takeover(enable)
        return self._receipt("TAKEOVER", detail={
            "enabled": enable, "released": released, "dropped": dropped})

    # ------------------------------------------------------------------
    def snapshot(self) -> DashboardSnapshot:
        """Consistent cut of world knowledge at the current sim time."""
        wk = self.agent.wk
        facility = wk.state.facility
        now = self.agent.now()
        services: dict[str, dict] = {}
        alarms: list[dict] = []
        elements: dict[str, dict] = {}
        links: dict[str, dict] = {}
        if facility is not None:
            for sid in sorted(facility.services):
                svc = facility.services[sid]
                series = wk.state.kpi_series.get(sid, [])
                services[sid] = {
                    "state": service_state(facility, svc).value,
                    "active": svc.active.value,
                    "working": list(svc.working.nodes) if svc.working else None,
                    "protection": list(svc.protection.nodes) if svc.protection else None,
                    "latency_ms": active_latency_ms(facility, svc),
                    "sla_latency_ms": svc.sla_latency_ms,
                    "protection_class": svc.protection_class.value,
                    "loss_ms": svc.loss_ms,
                    "kpi_tail": [list(p) for p in series[-8:]],
                }
            for ne_id in sorted(facility.elements):
                ne = facility.elements[ne_id]
                down = sorted(p for p, st in ne.ports.items() if st is PortState.DOWN)
                elements[ne_id] = {"ports_down": down,
                                   "node_latency_ms": ne.node_latency_ms}
                for port in down:
                    alarms.append({"element": ne_id, "port": port, "state": "DOWN"})
            for link_id in sorted(facility.links):
                link = facility.links[link_id]
                links[link_id] = {"a": link.a, "b": link.b, "cut": link.cut,
                                  "latency_ms": link.effective_latency_ms,
                                  "capacity": link.capacity,
                                  "utilization": link.utilization}
                if link.cut:
                    alarms.append({"link": link_id, "state": "DOWN"})
        goals = [dict(digest, id=gid)
                 for gid, digest in sorted(wk.state.pursued_goals.items())]
        return DashboardSnapshot(
            schema_version=SNAPSHOT_SCHEMA_VERSION, t=now, services=services,
            alarms=alarms, resources={"elements": elements, "links": links},
            goals=goals, rta=self.agent.rta_state.describe(),
            pending_human=[dict(item) for item in self.agent.pending_human],
            takeover=self.agent.takeover_enabled)
