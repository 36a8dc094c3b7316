"""Runtime assurance: trusted monitor, switch, and conservative fallback plans.

The monitor vets proposed control policies by simulating their declared
effects on the model snapshot before anything touches the facility. The
switch keeps control with the trusted side until the untrusted planner has
produced RECOVERY_CLEAN_OUTPUTS consecutive clean proposals.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Optional

from .reactive.goals import Goal
from .reactive.model import PredictiveModel
from .reactive.planner import ControlPolicy, PolicyStep
from .simnet.model import (
    Action,
    ActionKind,
    FacilityState,
    ServiceState,
    active_latency_ms,
    apply_action,
    route_operational,
    service_state,
)

RECOVERY_CLEAN_OUTPUTS = 3

TRUSTED_REPERTOIRE = ("SWITCHOVER", "RESTORE_PROTECTION", "HOLD")


class RtaMode(str, Enum):
    ACTIVE_AI = "ACTIVE_AI"
    FALLBACK = "FALLBACK"


class FallbackInfeasible(Exception):
    """Even the trusted plan violates critical properties; actions halt."""

    def __init__(self, goal_id: str, violated: list[str]):
        super().__init__(f"trusted plan for {goal_id} violates {violated}")
        self.goal_id = goal_id
        self.violated = violated


class OutOfRepertoire(Exception):
    def __init__(self, goal_kind: str):
        super().__init__(f"goal kind {goal_kind!r} outside the trusted repertoire")
        self.goal_kind = goal_kind


@dataclass
class RtaState:
    mode: RtaMode = RtaMode.ACTIVE_AI
    clean_outputs: int = 0

    def describe(self) -> dict:
        return {"mode": self.mode.value, "clean_outputs": self.clean_outputs}


@dataclass
class CriticalProperty:
    id: str
    check: str
    params: dict = field(default_factory=dict)


DEFAULT_PROPERTIES = (
    CriticalProperty(id="no-last-route-delete", check="no_last_route_delete"),
    CriticalProperty(id="post-plan-latency-sla", check="post_plan_latency_sla"),
)


def _holds_stepwise(prop: CriticalProperty, before: FacilityState,
                    after: FacilityState, action: Action) -> bool:
    if prop.check != "no_last_route_delete":
        return True
    if action.kind not in (ActionKind.DELETE_XC, ActionKind.SET_ROUTE):
        return True
    for sid in sorted(before.services):
        svc_before = before.services[sid]
        if service_state(before, svc_before) is ServiceState.INTERRUPTED:
            continue
        svc_after = after.services.get(sid)
        if svc_after is None or service_state(after, svc_after) is ServiceState.INTERRUPTED:
            return False
    return True


def _holds_terminal(prop: CriticalProperty, final: FacilityState) -> bool:
    if prop.check != "post_plan_latency_sla":
        return True
    for sid in sorted(final.services):
        svc = final.services[sid]
        latency = active_latency_ms(final, svc)
        if latency is not None and route_operational(final, svc, svc.active) \
                and latency > svc.sla_latency_ms:
            return False
    return True


def monitor(policy: ControlPolicy, model: PredictiveModel,
            properties: tuple[CriticalProperty, ...] = DEFAULT_PROPERTIES
            ) -> list[str]:
    """Simulate the plan's effects and report every violated property id.

    Evaluation is side-effect free: it works on clones of the snapshot.
    """
    violated: set[str] = set()
    state = model.snapshot.clone()
    for step in policy.steps:
        before = state.clone()
        result = apply_action(state, step.action)
        if not result.ok:
            # an inapplicable step cannot harm the facility; skip it the way
            # guarded execution would
            state = before
            continue
        for prop in properties:
            if not _holds_stepwise(prop, before, state, step.action):
                violated.add(prop.id)
    for prop in properties:
        if not _holds_terminal(prop, state):
            violated.add(prop.id)
    return sorted(violated)


def trusted_plan(goal: Goal, model: PredictiveModel) -> ControlPolicy:
    """Conservative repertoire: switchover, or hold when nothing is safer."""
    svc = model.snapshot.services.get(goal.service or "")
    if svc is None or goal.kind not in TRUSTED_REPERTOIRE:
        raise OutOfRepertoire(goal.kind)
    steps: list[PolicyStep] = []
    if not route_operational(model.snapshot, svc, svc.active) and \
            route_operational(model.snapshot, svc, svc.active.other):
        steps.append(PolicyStep(
            guard="standby_operational",
            action=Action(kind=ActionKind.SWITCHOVER, service=svc.id)))
        success = "active_route_operational"
    else:
        success = "service_operational" if steps else "noop"
    return ControlPolicy(goal=goal, steps=steps, success=success,
                         meta={"trusted": True})


@dataclass
class GateOutcome:
    executed: Optional[ControlPolicy]
    state: RtaState
    verdict: str                     # "OK" | "VIOLATION"
    violated: list[str] = field(default_factory=list)
    substituted: bool = False
    escalation: Optional[dict] = None

    def describe(self) -> dict:
        d = {"verdict": self.verdict, "mode": self.state.mode.value,
             "clean_outputs": self.state.clean_outputs,
             "substituted": self.substituted}
        if self.violated:
            d["violated"] = list(self.violated)
        if self.escalation:
            d["escalation"] = dict(self.escalation)
        return d


def gate(policy: ControlPolicy, model: PredictiveModel, state: RtaState,
         properties: tuple[CriticalProperty, ...] = DEFAULT_PROPERTIES
         ) -> GateOutcome:
    """Route the untrusted plan through the monitor and switch.

    Clean plans pass through (and count toward recovery while in fallback);
    violating plans are replaced by the trusted repertoire. A trusted plan
    that itself violates raises FallbackInfeasible after recording the
    escalation in the outcome.
    """
    violated = monitor(policy, model, properties)
    if not violated:
        clean = state.clean_outputs + 1
        if state.mode is RtaMode.FALLBACK and clean < RECOVERY_CLEAN_OUTPUTS:
            substitute = _substitute(policy.goal, model, properties)
            return GateOutcome(executed=substitute,
                               state=RtaState(RtaMode.FALLBACK, clean),
                               verdict="OK", substituted=True)
        return GateOutcome(executed=policy,
                           state=RtaState(RtaMode.ACTIVE_AI, clean), verdict="OK")

    substitute = _substitute(policy.goal, model, properties)
    outcome = GateOutcome(executed=substitute, state=RtaState(RtaMode.FALLBACK, 0),
                          verdict="VIOLATION", violated=violated, substituted=True)
    if substitute is None:
        outcome.escalation = {"reason": "OUT_OF_REPERTOIRE", "goal": policy.goal.id,
                              "violated": violated}
    return outcome


def _substitute(goal: Goal, model: PredictiveModel,
                properties: tuple[CriticalProperty, ...]) -> Optional[ControlPolicy]:
    try:
        fallback = trusted_plan(goal, model)
    except OutOfRepertoire:
        return None
    trusted_violations = monitor(fallback, model, properties)
    if trusted_violations:
        raise FallbackInfeasible(goal.id, trusted_violations)
    return fallback
