"""Agent purpose: condition monitoring over agent state, raising needs."""

from __future__ import annotations

import statistics
from dataclasses import dataclass, field
from typing import Optional

from ..knowledge.state import AgentState

DEFAULT_TREND_WINDOW = 3
DEFAULT_TREND_HORIZON = 2


@dataclass
class PurposeCondition:
    id: str
    kind: str                      # latency_bound | service_operational | protection_intact
    params: dict = field(default_factory=dict)


@dataclass
class Need:
    id: str
    kind: str
    condition_id: str
    target: Optional[str]
    severity: str
    t: int
    details: dict = field(default_factory=dict)

    def describe(self) -> dict:
        return {"id": self.id, "kind": self.kind, "condition": self.condition_id,
                "target": self.target, "severity": self.severity, "t": self.t,
                "details": dict(self.details)}


def predict_breach(series: list[tuple[int, float]], bound: float,
                   window: int = DEFAULT_TREND_WINDOW,
                   horizon: int = DEFAULT_TREND_HORIZON) -> Optional[float]:
    """Linear fit over the last ``window`` samples; returns the first
    extrapolated value at or over the bound within ``horizon`` further
    samples, else None."""
    if len(series) < window:
        return None
    tail = [value for _, value in series[-window:]]
    xs = list(range(window))
    slope, intercept = statistics.linear_regression(xs, tail)
    if slope <= 0:
        return None
    for step in range(1, horizon + 1):
        predicted = intercept + slope * (window - 1 + step)
        if predicted >= bound:
            return predicted
    return None


def _violations(condition: PurposeCondition, state: AgentState, now: int) -> list[Need]:
    needs = []
    for sid in sorted(state.services):
        digest = state.services[sid]
        if condition.kind == "latency_bound":
            sla = digest.get("sla_latency_ms")
            series = state.kpi_series.get(sid, [])
            if sla is None or not series:
                continue
            latest = series[-1][1]
            window = int(condition.params.get("trend_window", DEFAULT_TREND_WINDOW))
            horizon = int(condition.params.get("trend_horizon", DEFAULT_TREND_HORIZON))
            predicted = predict_breach(series, sla, window, horizon)
            if not latest < sla:
                needs.append(Need(
                    id=f"need:LATENCY_BREACH:{sid}", kind="LATENCY_BREACH_RISK",
                    condition_id=condition.id, target=sid, severity="major", t=now,
                    details={"latency_ms": latest, "sla_ms": sla, "breached": True}))
            elif predicted is not None:
                needs.append(Need(
                    id=f"need:LATENCY_BREACH:{sid}", kind="LATENCY_BREACH_RISK",
                    condition_id=condition.id, target=sid, severity="minor", t=now,
                    details={"latency_ms": latest, "sla_ms": sla,
                             "predicted_ms": predicted}))
        elif condition.kind == "service_operational":
            if digest.get("state") == "INTERRUPTED":
                needs.append(Need(
                    id=f"need:SERVICE_DOWN:{sid}", kind="SERVICE_DOWN",
                    condition_id=condition.id, target=sid, severity="critical", t=now,
                    details={"state": digest.get("state")}))
        elif condition.kind == "protection_intact":
            if (digest.get("protection_class") == "1+1"
                    and digest.get("state") == "DEGRADED"):
                needs.append(Need(
                    id=f"need:PROTECTION_LOST:{sid}", kind="PROTECTION_LOST",
                    condition_id=condition.id, target=sid, severity="major", t=now,
                    details={"state": digest.get("state")}))
    return needs


def monitor_purpose(state: AgentState, conditions: list[PurposeCondition],
                    registry: dict[str, Need], now: int = 0) -> list[Need]:
    """One Need per violated (or trend-predicted) condition instance.

    ``registry`` keeps needs alive while their violation persists, so a
    persisting violation never yields a duplicate Need.
    """
    current: dict[str, Need] = {}
    for condition in conditions:
        for need in _violations(condition, state, now):
            current.setdefault(need.id, need)
    for stale in [nid for nid in registry if nid not in current]:
        del registry[stale]
    fresh = [need for nid, need in sorted(current.items()) if nid not in registry]
    registry.update({need.id: need for need in fresh})
    return fresh
