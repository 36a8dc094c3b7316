"""Value system: scales and rules scoring goal costs and benefits."""

from __future__ import annotations

from dataclasses import dataclass, field


@dataclass
class ValueRule:
    """Score contributions per axis for goals matching a pattern."""
    pattern: dict                       # {"kind": ..., optional "mode": ...}
    agent: dict = field(default_factory=dict)
    environment: dict = field(default_factory=dict)

    def matches(self, goal_kind: str, goal_params: dict) -> bool:
        if self.pattern.get("kind") != goal_kind:
            return False
        mode = self.pattern.get("mode")
        return mode is None or goal_params.get("mode") == mode


@dataclass
class ValueSystem:
    axes: dict[str, tuple[float, float]]
    weights: dict[str, float]
    rules: list[ValueRule]
    veto_environment_below: float = 0.0

    def __post_init__(self) -> None:
        for axis, weight in self.weights.items():
            if axis not in self.axes:
                raise ValueError(f"weight references undeclared axis {axis!r}")
            if weight < 0:
                raise ValueError(f"weight for axis {axis!r} must be non-negative")
        for rule in self.rules:
            for side in (rule.agent, rule.environment):
                for axis in side:
                    if axis not in self.axes:
                        raise ValueError(f"rule references undeclared axis {axis!r}")

    @staticmethod
    def from_dict(doc: dict) -> "ValueSystem":
        return ValueSystem(
            axes={k: (float(v[0]), float(v[1])) for k, v in doc["axes"].items()},
            weights={k: float(v) for k, v in doc["weights"].items()},
            rules=[ValueRule(pattern=r["pattern"], agent=r.get("agent", {}),
                             environment=r.get("environment", {}))
                   for r in doc.get("rules", [])],
            veto_environment_below=float(doc.get("veto_environment_below", 0.0)),
        )

    def describe(self) -> dict:
        return {
            "axes": {k: list(v) for k, v in self.axes.items()},
            "weights": dict(self.weights),
            "rules": [{"pattern": r.pattern, "agent": r.agent,
                       "environment": r.environment} for r in self.rules],
            "veto_environment_below": self.veto_environment_below,
        }


@dataclass
class ValueAssessment:
    agent_score: float
    environment_score: float
    veto: bool
    matched: bool

    def aggregated(self, agent_share: float = 0.5) -> float:
        return agent_share * self.agent_score + (1 - agent_share) * self.environment_score


def assess_value(goal_kind: str, goal_params: dict,
                 value_system: ValueSystem) -> ValueAssessment:
    """Weighted per-axis sums for agent and environment; veto from the
    normative balance rule (environment score below the veto threshold)."""
    agent = 0.0
    environment = 0.0
    matched = False
    for rule in value_system.rules:
        if not rule.matches(goal_kind, goal_params):
            continue
        matched = True
        for axis, contribution in rule.agent.items():
            agent += value_system.weights.get(axis, 0.0) * contribution
        for axis, contribution in rule.environment.items():
            environment += value_system.weights.get(axis, 0.0) * contribution
    veto = matched and environment < value_system.veto_environment_below
    return ValueAssessment(agent_score=agent, environment_score=environment,
                           veto=veto, matched=matched)
