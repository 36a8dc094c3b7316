"""Intent management and choice-making: need -> meta-goal -> assessed goals -> choice."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Union

from ..knowledge.repository import WorldKnowledge
from ..knowledge.types import ConstraintKind, MetaGoal, QueryKind
from ..knowledge.values import ValueAssessment, assess_value
from ..reactive.goals import Goal
from ..reactive.model import PredictiveModel
from ..reactive.planner import find_routes
from ..simnet.model import route_latency_ms
from .purpose import Need

AGENT_VALUE_SHARE = 0.5

# Feasibility rubric: resource availability contributes up to 0.6,
# degree of automation up to 0.4.
AVAILABILITY_SHARE = 0.6
AUTOMATION_SHARE = 0.4
AVAILABILITY_BY_MODE = {"shared_resources": 0.4, "procurement": 0.2}


class NoCatalogEntry(Exception):
    def __init__(self, need_kind: str):
        super().__init__(f"no catalog entry for need kind {need_kind!r}")
        self.need_kind = need_kind


@dataclass
class Infeasible:
    need_id: str
    failed_constraints: list[str]


@dataclass
class GoalAssessment:
    goal: Goal
    feasibility: float
    value: ValueAssessment
    veto: bool

    def score(self, agent_share: float = AGENT_VALUE_SHARE) -> float:
        return self.feasibility * self.value.aggregated(agent_share)

    def describe(self) -> dict:
        return {"goal": self.goal.describe(), "feasibility": self.feasibility,
                "agent_value": self.value.agent_score,
                "environment_value": self.value.environment_score,
                "veto": self.veto, "score": self.score()}


def manage_intent(need: Need, wk: WorldKnowledge) -> Union[MetaGoal, Infeasible]:
    """Fetch the catalog meta-goal for a need and gate it on hard constraints
    (ODD ranges and veto-flagged normative rules)."""
    result = wk.query(QueryKind.NEED_TO_CONSTRAINTS, need)
    if result.no_match:
        raise NoCatalogEntry(need.kind)
    meta = result.meta_goal
    subject = {"need_kind": need.kind, "service": need.target, **need.details}
    failed = []
    for constraint in meta.constraints:
        hard = constraint.kind is ConstraintKind.ODD or (
            constraint.kind is ConstraintKind.NORMATIVE and constraint.veto)
        if hard and not constraint.passes(subject, wk.state):
            failed.append(constraint.id)
    if failed:
        return Infeasible(need_id=need.id, failed_constraints=failed)
    return meta


def _availability(template, meta: MetaGoal, model: Optional[PredictiveModel],
                  wk: WorldKnowledge) -> float:
    mode = template.resource_mode
    if mode in AVAILABILITY_BY_MODE:
        return AVAILABILITY_BY_MODE[mode]
    # idle_resources: confirm an idle candidate path actually exists
    if model is None or meta.target not in model.snapshot.services:
        return 0.1
    svc = model.snapshot.services[meta.target]
    other = svc.route_for(svc.active.other)
    avoid = frozenset(other.intermediates) if other else frozenset()
    active = svc.route_for(svc.active)
    current = route_latency_ms(model.snapshot, active) if active else None
    for candidate in find_routes(model.snapshot, svc.source, svc.sink,
                                 avoid_nodes=avoid, max_latency_ms=svc.sla_latency_ms):
        if active is not None and candidate.nodes == active.nodes:
            continue
        if current is None or route_latency_ms(model.snapshot, candidate) < current:
            return AVAILABILITY_SHARE
    return 0.1


def expand_metagoal(meta: MetaGoal, wk: WorldKnowledge,
                    model: Optional[PredictiveModel] = None) -> list[GoalAssessment]:
    """Bind each template of the meta-goal and assess feasibility and value."""
    assessments = []
    for template in meta.templates:
        params = dict(template.params)
        params.setdefault("need", meta.need_kind)
        goal = Goal(
            id=f"{template.kind.lower()}:{meta.target}",
            kind=template.kind, service=meta.target, weight=template.base_weight,
            claims={f"service:{meta.target}": 1.0},
            deadline_class=template.deadline_class, params=params, origin="PB")
        hard_failed = False
        subject = {"need_kind": meta.need_kind, "service": meta.target, **meta.details}
        for constraint in meta.constraints:
            hard = constraint.kind is ConstraintKind.ODD or (
                constraint.kind is ConstraintKind.NORMATIVE and constraint.veto)
            if hard and not constraint.passes(subject, wk.state):
                hard_failed = True
        feasibility = 0.0 if hard_failed else (
            _availability(template, meta, model, wk)
            + template.automation * AUTOMATION_SHARE)
        value = assess_value(goal.kind, goal.params, wk.value_system)
        assessments.append(GoalAssessment(goal=goal, feasibility=round(feasibility, 6),
                                          value=value, veto=value.veto))
    return assessments


def choose_goal(assessments: list[GoalAssessment],
                agent_share: float = AGENT_VALUE_SHARE) -> Optional[Goal]:
    """Argmax of feasibility x aggregated value over non-vetoed goals;
    None means escalation to a human. Ties break by goal id."""
    best: Optional[tuple[float, str, Goal]] = None
    for assessment in assessments:
        if assessment.veto or assessment.feasibility <= 0:
            continue
        score = assessment.score(agent_share)
        key = (-score, assessment.goal.id)
        if best is None or key < (-best[0], best[1]):
            best = (score, assessment.goal.id, assessment.goal)
    if best is None or best[0] <= 0:
        return None
    return best[2]
