"""World knowledge: repository, manager, agent state, value system."""

from .repository import INTEGRITY_RULES, INTEGRITY_RULES_VERSION, ProcessedQuery, WorldKnowledge
from .seeds import build_world_knowledge, load_seed
from .state import AgentState
from .types import (
    ActionSpec,
    ConstraintKind,
    ContextAction,
    FeasibilityConstraint,
    GoalTemplate,
    KnowledgeEntry,
    MetaGoal,
    NeedCatalogRecord,
    NetworkContext,
    QueryKind,
    QueryResult,
    TAG_AXES,
    UnknownQueryKind,
    UpdateResult,
    Violation,
    fact_entry,
)
from .values import ValueAssessment, ValueRule, ValueSystem, assess_value

__all__ = [
    "ActionSpec", "AgentState", "ConstraintKind", "ContextAction",
    "FeasibilityConstraint", "GoalTemplate", "INTEGRITY_RULES",
    "INTEGRITY_RULES_VERSION", "KnowledgeEntry", "MetaGoal", "NeedCatalogRecord",
    "NetworkContext", "ProcessedQuery", "QueryKind", "QueryResult", "TAG_AXES",
    "UnknownQueryKind", "UpdateResult", "ValueAssessment", "ValueRule",
    "ValueSystem", "Violation", "WorldKnowledge", "assess_value",
    "build_world_knowledge", "fact_entry", "load_seed",
]
