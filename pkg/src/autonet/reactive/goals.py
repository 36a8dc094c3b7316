"""Goals and the non-conflicting goal selection of Goal Management."""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from typing import Optional

# Deadline budgets in sim milliseconds per class.
DEADLINE_BUDGET_MS = {"MS": 50, "S": 5000}

EXACT_SELECTION_LIMIT = 15


@dataclass
class Goal:
    id: str
    kind: str
    service: Optional[str] = None
    weight: float = 1.0
    claims: dict[str, float] = field(default_factory=dict)
    deadline_class: str = "S"
    params: dict = field(default_factory=dict)
    origin: str = "RB"
    trigger_t: int = 0

    def __post_init__(self) -> None:
        if self.weight <= 0:
            raise ValueError(f"goal {self.id} weight must be positive")
        if self.deadline_class not in DEADLINE_BUDGET_MS:
            raise ValueError(f"goal {self.id} has unknown deadline class")

    @property
    def budget_ms(self) -> int:
        return DEADLINE_BUDGET_MS[self.deadline_class]

    def conflicts_with(self, other: "Goal") -> bool:
        return bool(set(self.claims) & set(other.claims))

    def describe(self) -> dict:
        return {"id": self.id, "kind": self.kind, "service": self.service,
                "weight": self.weight, "claims": dict(self.claims),
                "deadline_class": self.deadline_class, "params": dict(self.params),
                "origin": self.origin, "trigger_t": self.trigger_t}

    @staticmethod
    def from_dict(d: dict) -> "Goal":
        return Goal(id=d["id"], kind=d["kind"], service=d.get("service"),
                    weight=float(d.get("weight", 1.0)),
                    claims={k: float(v) for k, v in d.get("claims", {}).items()},
                    deadline_class=d.get("deadline_class", "S"),
                    params=d.get("params", {}), origin=d.get("origin", "RB"),
                    trigger_t=int(d.get("trigger_t", 0)))


def _selection_key(goals: list[Goal]) -> tuple:
    return (-sum(g.weight for g in goals), tuple(sorted(g.id for g in goals)))


def manage_goals(model, candidates: list[Goal]) -> list[Goal]:
    """Maximum-weight subset with pairwise disjoint resource claims.

    Exact up to EXACT_SELECTION_LIMIT goals, greedy by weight above it.
    Deterministic tie-break by goal id.
    """
    goals = sorted(candidates, key=lambda g: g.id)
    if not goals:
        return []
    if len(goals) > EXACT_SELECTION_LIMIT:
        chosen: list[Goal] = []
        for goal in sorted(goals, key=lambda g: (-g.weight, g.id)):
            if not any(goal.conflicts_with(c) for c in chosen):
                chosen.append(goal)
        return sorted(chosen, key=lambda g: g.id)

    conflict = {
        (a.id, b.id)
        for a, b in combinations(goals, 2) if a.conflicts_with(b)
    }
    best: Optional[list[Goal]] = None
    for mask in range(1 << len(goals)):
        subset = [goals[i] for i in range(len(goals)) if mask >> i & 1]
        ok = all((a.id, b.id) not in conflict for a, b in combinations(subset, 2))
        if not ok:
            continue
        if best is None or _selection_key(subset) < _selection_key(best):
            best = subset
    return sorted(best or [], key=lambda g: g.id)
