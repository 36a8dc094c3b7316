"""Reactive behavior: situation awareness and decision-making."""

from .goals import DEADLINE_BUDGET_MS, EXACT_SELECTION_LIMIT, Goal, manage_goals
from .model import PredictiveModel, reflect
from .percept import DegradationClass, Finding, Percept, perceive
from .pipeline import (
    decision_making,
    goals_from_model,
    reactive_behavior,
    situation_awareness,
)
from .planner import (
    ControlPolicy,
    NoFeasiblePlan,
    PolicyStep,
    find_routes,
    plan,
    simulate_policy,
)

__all__ = [
    "ControlPolicy", "DEADLINE_BUDGET_MS", "DegradationClass",
    "EXACT_SELECTION_LIMIT", "Finding", "Goal", "NoFeasiblePlan", "Percept",
    "PolicyStep", "PredictiveModel", "decision_making", "find_routes",
    "goals_from_model", "manage_goals", "perceive", "plan", "reactive_behavior",
    "reflect", "simulate_policy", "situation_awareness",
]
