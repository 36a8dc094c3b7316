"""Goal coordination: conflict and synergy analysis over shared resources."""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Optional

from ..reactive.goals import Goal

SYNERGY_WEIGHT_BOOST = 1.1


class GoalRelation(str, Enum):
    CONFLICT = "CONFLICT"
    SYNERGY = "SYNERGY"
    INDEPENDENT = "INDEPENDENT"


@dataclass
class CoordinationVerdict:
    goal_a: str
    agent_a: str
    goal_b: str
    agent_b: str
    relation: GoalRelation
    resolution: dict = field(default_factory=dict)

    def describe(self) -> dict:
        return {"goal_a": self.goal_a, "agent_a": self.agent_a,
                "goal_b": self.goal_b, "agent_b": self.agent_b,
                "relation": self.relation.value, "resolution": dict(self.resolution)}


def _shared_touch(goal: dict, shared: dict[str, float]) -> bool:
    claims = set(goal.get("claims", {})) | set(goal.get("params", {}).get("releases", {}))
    return bool(claims & set(shared))


def _pair_relation(a: dict, b: dict, shared: dict[str, float]
                   ) -> tuple[GoalRelation, Optional[str]]:
    for resource in sorted(set(a.get("claims", {})) & set(b.get("claims", {}))):
        if resource not in shared:
            continue
        combined = a["claims"][resource] + b["claims"][resource]
        if combined > shared[resource]:
            return GoalRelation.CONFLICT, resource
    releases_a = a.get("params", {}).get("releases", {})
    releases_b = b.get("params", {}).get("releases", {})
    if set(releases_a) & set(b.get("claims", {})) & set(shared):
        return GoalRelation.SYNERGY, None
    if set(releases_b) & set(a.get("claims", {})) & set(shared):
        return GoalRelation.SYNERGY, None
    return GoalRelation.INDEPENDENT, None


def coordinate_goals(own_agent: str, own_goals: list[Goal],
                     advertised: dict[str, list[dict]],
                     shared_resources: dict[str, float]
                     ) -> tuple[list[CoordinationVerdict], list[Goal], list[str]]:
    """Analyze every cross-agent goal pair touching shared resources.

    Conflicts resolve deterministically: higher weight keeps the claim, ties
    go to the lower agent id. Returns (verdicts, updated own goals, ids of
    own goals whose feasibility a synergy raised).
    """
    verdicts: list[CoordinationVerdict] = []
    yielded: set[str] = set()
    raised: list[str] = []
    updated: list[Goal] = [g for g in own_goals]

    for goal in sorted(own_goals, key=lambda g: g.id):
        mine = goal.describe()
        if not _shared_touch(mine, shared_resources):
            continue
        for peer in sorted(advertised):
            if peer == own_agent:
                continue
            for theirs in sorted(advertised[peer], key=lambda g: g["id"]):
                if theirs.get("status") == "YIELDED":
                    continue
                if not _shared_touch(theirs, shared_resources):
                    continue
                relation, resource = _pair_relation(mine, theirs, shared_resources)
                resolution: dict = {}
                if relation is GoalRelation.CONFLICT:
                    their_weight = theirs.get("weight", 0.0)
                    winner_mine = goal.weight > their_weight or (
                        goal.weight == their_weight and own_agent < peer)
                    winner = goal.id if winner_mine else theirs["id"]
                    loser = theirs["id"] if winner_mine else goal.id
                    resolution = {"resource": resource, "winner": winner,
                                  "loser": loser}
                    if not winner_mine:
                        yielded.add(goal.id)
                elif relation is GoalRelation.SYNERGY:
                    if set(theirs.get("params", {}).get("releases", {})) & set(mine["claims"]):
                        resolution = {"raised": goal.id}
                        raised.append(goal.id)
                    else:
                        resolution = {"raised": theirs["id"]}
                verdicts.append(CoordinationVerdict(
                    goal_a=goal.id, agent_a=own_agent, goal_b=theirs["id"],
                    agent_b=peer, relation=relation, resolution=resolution))

    result: list[Goal] = []
    for goal in updated:
        if goal.id in yielded:
            continue
        if goal.id in raised:
            goal.weight = round(goal.weight * SYNERGY_WEIGHT_BOOST, 9)
        result.append(goal)
    return verdicts, result, raised
