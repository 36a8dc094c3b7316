"""Composed proactive pipeline: state conditions -> needs -> meta-goals -> new goals."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from ..knowledge.repository import WorldKnowledge
from ..knowledge.state import AgentState
from ..knowledge.types import MetaGoal
from ..reactive.goals import Goal
from ..reactive.model import PredictiveModel
from .choice import (
    GoalAssessment,
    Infeasible,
    NoCatalogEntry,
    choose_goal,
    expand_metagoal,
    manage_intent,
)
from .purpose import Need, PurposeCondition, monitor_purpose


@dataclass
class ProactiveOutcome:
    needs: list[Need] = field(default_factory=list)
    meta_goals: list[MetaGoal] = field(default_factory=list)
    infeasible: list[Infeasible] = field(default_factory=list)
    assessments: list[GoalAssessment] = field(default_factory=list)
    goals: list[Goal] = field(default_factory=list)
    escalations: list[dict] = field(default_factory=list)


def self_awareness(state: AgentState, conditions: list[PurposeCondition],
                   registry: dict[str, Need], wk: WorldKnowledge, now: int = 0
                   ) -> tuple[list[MetaGoal], ProactiveOutcome]:
    """Agent Purpose then Intent Management for every fresh need."""
    outcome = ProactiveOutcome()
    outcome.needs = monitor_purpose(state, conditions, registry, now)
    for need in outcome.needs:
        try:
            result = manage_intent(need, wk)
        except NoCatalogEntry:
            outcome.escalations.append({"reason": "NO_CATALOG_ENTRY",
                                        "need": need.describe()})
            continue
        if isinstance(result, Infeasible):
            outcome.infeasible.append(result)
            outcome.escalations.append({
                "reason": "INFEASIBLE", "need": need.describe(),
                "failed_constraints": result.failed_constraints})
        else:
            outcome.meta_goals.append(result)
    return outcome.meta_goals, outcome


def choice_making(meta: MetaGoal, wk: WorldKnowledge,
                  model: Optional[PredictiveModel] = None
                  ) -> tuple[Optional[Goal], list[GoalAssessment]]:
    """Meta-goal Management then Choice of Goals."""
    assessments = expand_metagoal(meta, wk, model)
    return choose_goal(assessments), assessments


def proactive_behavior(state: AgentState, conditions: list[PurposeCondition],
                       registry: dict[str, Need], wk: WorldKnowledge,
                       model: Optional[PredictiveModel] = None, now: int = 0
                       ) -> ProactiveOutcome:
    meta_goals, outcome = self_awareness(state, conditions, registry, wk, now)
    for meta in meta_goals:
        goal, assessments = choice_making(meta, wk, model)
        outcome.assessments.extend(assessments)
        if goal is None:
            outcome.escalations.append({
                "reason": "NO_VIABLE_GOAL", "need": meta.need_id,
                "meta_goal": meta.need_kind})
        else:
            goal.trigger_t = now
            outcome.goals.append(goal)
    return outcome
