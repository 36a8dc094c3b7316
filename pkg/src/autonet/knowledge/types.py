"""Knowledge vocabulary: entries, rules, catalogs, query envelopes."""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Optional

# Closed tag vocabulary, one tag per classification axis.
TAG_AXES: dict[str, tuple[str, ...]] = {
    "scope": ("agent_specific", "general"),
    "form": ("declarative", "procedural"),
    "basis": ("data_based", "model_based"),
    "level": ("concrete", "abstract"),
}


@dataclass
class KnowledgeEntry:
    id: str
    tags: dict[str, str]
    content: dict
    valid_from: int = 0

    def validate_tags(self) -> Optional[str]:
        for axis, value in self.tags.items():
            allowed = TAG_AXES.get(axis)
            if allowed is None:
                return f"unknown tag axis {axis!r}"
            if value not in allowed:
                return f"tag {value!r} not in axis {axis!r}"
        return None

    def describe(self) -> dict:
        return {"id": self.id, "tags": dict(self.tags),
                "content": dict(self.content), "valid_from": self.valid_from}


def fact_entry(entry_id: str, key: str, value: Any, t: int,
               scope: str = "agent_specific") -> KnowledgeEntry:
    return KnowledgeEntry(
        id=entry_id,
        tags={"scope": scope, "form": "declarative",
              "basis": "data_based", "level": "concrete"},
        content={"kind": "fact", "key": key, "value": value},
        valid_from=t,
    )


class ConstraintKind(str, Enum):
    ODD = "ODD"
    NORMATIVE = "NORMATIVE"
    EXPERTISE = "EXPERTISE"


@dataclass
class FeasibilityConstraint:
    """A check applied to (need or goal, agent state).

    ODD constraints carry explicit ranges; NORMATIVE constraints may carry a
    veto flag that hard-blocks; EXPERTISE constraints are advisory.
    """
    id: str
    kind: ConstraintKind
    check: str
    params: dict = field(default_factory=dict)
    veto: bool = False

    def passes(self, subject: dict, state: "AgentStateLike") -> bool:
        if self.check == "latency_within_odd":
            value = subject.get("latency_ms")
            if value is None:
                return True
            return self.params.get("min", 0.0) <= value <= self.params.get("max", 1e9)
        if self.check == "target_service_known":
            target = subject.get("service")
            return target is None or target in state.services
        if self.check == "need_kind_in_scope":
            return subject.get("need_kind") in self.params.get("kinds", [])
        if self.check == "no_premium_teardown":
            return not (subject.get("tears_down") and subject.get("priority") == "premium")
        if self.check == "always":
            return True
        raise ValueError(f"undecidable constraint check {self.check!r}")

    def describe(self) -> dict:
        return {"id": self.id, "kind": self.kind.value, "check": self.check,
                "params": dict(self.params), "veto": self.veto}


class AgentStateLike:
    """Minimal surface constraints evaluate against (see state.AgentState)."""
    services: dict


@dataclass
class ActionSpec:
    """An action kind with its enabling condition and effect description."""
    kind: str
    enabling: str
    effect: str
    params: dict = field(default_factory=dict)


@dataclass
class GoalTemplate:
    kind: str
    base_weight: float
    deadline_class: str = "S"              # MS | S
    automation: float = 1.0                # 1.0 = no human involvement
    resource_mode: str = "idle_resources"  # idle_resources | shared_resources | procurement
    params: dict = field(default_factory=dict)


@dataclass
class NeedCatalogRecord:
    need_kind: str
    templates: list[GoalTemplate]
    constraint_ids: list[str]

    def __post_init__(self) -> None:
        if not self.templates:
            raise ValueError(f"meta-goal for {self.need_kind} must not be empty")


@dataclass
class MetaGoal:
    """A set of goal templates, any of which can satisfy the originating need."""
    need_id: str
    need_kind: str
    target: Optional[str]
    templates: list[GoalTemplate]
    constraints: list[FeasibilityConstraint]
    details: dict = field(default_factory=dict)


class QueryKind(str, Enum):
    PERCEPT_TO_CONTEXT = "PERCEPT_TO_CONTEXT"
    NEED_TO_CONSTRAINTS = "NEED_TO_CONSTRAINTS"
    METAGOAL_TO_VALUE_CONSTRAINTS = "METAGOAL_TO_VALUE_CONSTRAINTS"
    TEXT_TO_STRUCTURED = "TEXT_TO_STRUCTURED"
    AAI_REQUEST_TO_STATE_AND_GOAL = "AAI_REQUEST_TO_STATE_AND_GOAL"


class UnknownQueryKind(Exception):
    pass


@dataclass
class ContextAction:
    kind: str
    service: Optional[str] = None
    role: Optional[str] = None
    detail: dict = field(default_factory=dict)

    def describe(self) -> dict:
        d: dict = {"kind": self.kind}
        if self.service:
            d["service"] = self.service
        if self.role:
            d["role"] = self.role
        if self.detail:
            d["detail"] = dict(self.detail)
        return d


@dataclass
class NetworkContext:
    """Perceived state facts plus applicable action kinds with bindings."""
    facts: list[dict]
    actions: list[ContextAction]

    def describe(self) -> dict:
        return {"facts": [dict(f) for f in self.facts],
                "actions": [a.describe() for a in self.actions]}


@dataclass
class QueryResult:
    kind: QueryKind
    no_match: bool = False
    context: Optional[NetworkContext] = None
    meta_goal: Optional[MetaGoal] = None
    constraints: list[FeasibilityConstraint] = field(default_factory=list)
    value_system: Optional["ValueSystemLike"] = None
    ranked_entries: list[tuple[KnowledgeEntry, float]] = field(default_factory=list)
    state_summary: Optional[dict] = None
    goal_digests: list[dict] = field(default_factory=list)


class ValueSystemLike:
    pass


@dataclass
class Violation:
    rule: str
    entries: list[str]
    detail: str


@dataclass
class UpdateResult:
    accepted: bool
    reason: Optional[str] = None        # "stale" | "COHERENCY_VIOLATION" | tag error
    conflicts: list[str] = field(default_factory=list)
