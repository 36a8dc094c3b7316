"""Composed agent-agent exchange: merge peer reports, then coordinate goals."""

from __future__ import annotations

from dataclasses import dataclass, field

from ..knowledge.repository import WorldKnowledge
from ..reactive.goals import Goal
from .awareness import merge_global_state
from .bus import AgentMessage
from .coordination import CoordinationVerdict, coordinate_goals


@dataclass
class ExchangeOutcome:
    merge_summary: dict = field(default_factory=dict)
    verdicts: list[CoordinationVerdict] = field(default_factory=list)
    updated_goals: list[Goal] = field(default_factory=list)
    raised: list[str] = field(default_factory=list)


def aai_exchange(own_agent: str, wk: WorldKnowledge,
                 reports: list[AgentMessage], own_goals: list[Goal],
                 advertised: dict[str, list[dict]],
                 shared_resources: dict[str, float], now: int) -> ExchangeOutcome:
    outcome = ExchangeOutcome()
    if reports:
        outcome.merge_summary = merge_global_state(reports, wk, now)
    if advertised and shared_resources:
        outcome.verdicts, outcome.updated_goals, outcome.raised = coordinate_goals(
            own_agent, own_goals, advertised, shared_resources)
    else:
        outcome.updated_goals = list(own_goals)
    return outcome
