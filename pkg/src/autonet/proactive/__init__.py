"""Proactive behavior: self-awareness and choice-making."""

from .choice import (
    AGENT_VALUE_SHARE,
    GoalAssessment,
    Infeasible,
    NoCatalogEntry,
    choose_goal,
    expand_metagoal,
    manage_intent,
)
from .pipeline import ProactiveOutcome, choice_making, proactive_behavior, self_awareness
from .purpose import Need, PurposeCondition, monitor_purpose, predict_breach

__all__ = [
    "AGENT_VALUE_SHARE", "GoalAssessment", "Infeasible", "Need", "NoCatalogEntry",
    "ProactiveOutcome", "PurposeCondition", "choice_making", "choose_goal",
    "expand_metagoal", "manage_intent", "monitor_purpose", "predict_breach",
    "proactive_behavior", "self_awareness",
]
