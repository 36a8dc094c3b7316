"""Per-agent state held in world knowledge."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Optional

from ..simnet.model import FacilityState

KPI_SERIES_LIMIT = 32


@dataclass
class AgentState:
    """Resource states, pursued goals and KPI values with per-key timestamps."""

    facts: dict[str, Any] = field(default_factory=dict)
    services: dict[str, dict] = field(default_factory=dict)
    kpi_series: dict[str, list[tuple[int, float]]] = field(default_factory=dict)
    pursued_goals: dict[str, dict] = field(default_factory=dict)
    managed_goals: list[str] = field(default_factory=list)
    peers: dict[str, dict] = field(default_factory=dict)
    timestamps: dict[str, int] = field(default_factory=dict)
    facility: Optional[FacilityState] = None

    def newer(self, key: str, t: int) -> bool:
        return t >= self.timestamps.get(key, -1)

    def touch(self, key: str, t: int) -> None:
        if not self.newer(key, t):
            raise ValueError(f"timestamp for {key} would move backwards")
        self.timestamps[key] = t

    def record_kpi(self, service_id: str, t: int, latency_ms: float) -> None:
        series = self.kpi_series.setdefault(service_id, [])
        series.append((t, latency_ms))
        del series[:-KPI_SERIES_LIMIT]
        self.touch(f"kpi:{service_id}", t)

    def set_fact(self, key: str, value: Any, t: int) -> None:
        self.facts[key] = value
        self.touch(key, t)

    def service_digest(self, service_id: str) -> dict:
        return dict(self.services.get(service_id, {}))

    def export_summary(self) -> dict:
        """Digest shared with peers; excludes raw facts and local detail."""
        utilization = {
            key.split(":", 1)[1]: value
            for key, value in sorted(self.facts.items())
            if key.startswith("utilization:")
        }
        kpis = {
            sid: series[-1][1]
            for sid, series in sorted(self.kpi_series.items()) if series
        }
        goals = [
            {"id": gid, "kind": g.get("kind"), "weight": g.get("weight"),
             "claims": g.get("claims", {}), "status": g.get("status", "PURSUED")}
            for gid, g in sorted(self.pursued_goals.items())
        ]
        return {"utilization": utilization, "service_kpis": kpis, "goals": goals}
