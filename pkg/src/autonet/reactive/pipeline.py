"""Composed reactive pipeline: stimuli -> percept -> model -> goals -> policies."""

from __future__ import annotations

from ..knowledge.repository import WorldKnowledge
from ..simnet.events import Stimulus
from ..simnet.model import ServiceState, route_operational, service_state
from .goals import Goal, manage_goals
from .model import PredictiveModel, reflect
from .percept import perceive
from .planner import ControlPolicy, NoFeasiblePlan, plan


def situation_awareness(stimuli: list[Stimulus], wk: WorldKnowledge) -> PredictiveModel:
    return reflect(perceive(stimuli, wk), wk)


def goals_from_model(model: PredictiveModel, layer: str, t: int,
                     scope: frozenset[str] = frozenset()) -> list[Goal]:
    """Candidate goals an agent of the given layer derives from enabled actions.

    NE agents raise millisecond-class switchovers for services sinking at
    their own element (the receive selector is sink-local); NMS agents raise
    second-class route repairs.
    """
    state = model.snapshot
    candidates: dict[str, Goal] = {}
    for action in model.enabled_actions:
        svc = state.services.get(action.service or "")
        if svc is None:
            continue
        if layer == "NE" and action.kind == "SWITCHOVER":
            if scope and svc.sink not in scope:
                continue
            if route_operational(state, svc, svc.active):
                continue
            goal = Goal(id=f"switchover:{svc.id}", kind="SWITCHOVER", service=svc.id,
                        weight=100.0, claims={f"service:{svc.id}": 1.0},
                        deadline_class="MS", origin="RB", trigger_t=t)
            candidates.setdefault(goal.id, goal)
        elif layer == "NMS" and action.kind == "SET_ROUTE":
            st = service_state(state, svc)
            if st is ServiceState.INTERRUPTED:
                goal = Goal(id=f"create_route:{svc.id}", kind="CREATE_ROUTE",
                            service=svc.id, weight=9.0,
                            claims={f"service:{svc.id}": 1.0}, deadline_class="S",
                            params={"mode": "restore"}, origin="RB", trigger_t=t)
            elif st is ServiceState.DEGRADED:
                goal = Goal(id=f"restore_protection:{svc.id}", kind="RESTORE_PROTECTION",
                            service=svc.id, weight=8.0,
                            claims={f"service:{svc.id}": 1.0}, deadline_class="S",
                            origin="RB", trigger_t=t)
            else:
                continue
            candidates.setdefault(goal.id, goal)
    return [candidates[k] for k in sorted(candidates)]


def decision_making(model: PredictiveModel, candidates: list[Goal]
                    ) -> tuple[list[ControlPolicy], list[NoFeasiblePlan]]:
    """Goal Management then Planning; infeasible goals are reported upward."""
    active = manage_goals(model, candidates)
    policies: list[ControlPolicy] = []
    failures: list[NoFeasiblePlan] = []
    for goal in active:
        try:
            policies.append(plan(goal, model))
        except NoFeasiblePlan as exc:
            failures.append(exc)
    return policies, failures


def reactive_behavior(stimuli: list[Stimulus], wk: WorldKnowledge,
                      extra_goals: list[Goal] | None = None, layer: str = "NMS"
                      ) -> tuple[PredictiveModel, list[ControlPolicy], list[NoFeasiblePlan]]:
    model = situation_awareness(stimuli, wk)
    candidates = goals_from_model(model, layer, model.t)
    for goal in extra_goals or []:
        if all(goal.id != c.id for c in candidates):
            candidates.append(goal)
    policies, failures = decision_making(model, candidates)
    return model, policies, failures
