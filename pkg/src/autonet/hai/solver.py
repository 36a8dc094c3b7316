"""Problem solver backends: rule-based expert system, KPI predictor, copilot stub."""

from __future__ import annotations

import statistics
from dataclasses import dataclass, field
from enum import Enum
from typing import Optional

from ..knowledge.repository import WorldKnowledge
from ..simnet.model import RouteRole, route_port_pairs

PREDICTOR_WINDOW = 3


class SolverBackend(str, Enum):
    EXPERT = "EXPERT"
    PREDICTOR = "PREDICTOR"
    COPILOT_STUB = "COPILOT_STUB"


@dataclass
class SolverRequest:
    text: str
    context: dict = field(default_factory=dict)


@dataclass
class SolverResponse:
    answer: Optional[str]
    backend: SolverBackend
    confidence: float
    detail: dict = field(default_factory=dict)

    def describe(self) -> dict:
        return {"answer": self.answer, "backend": self.backend.value,
                "confidence": self.confidence, "detail": dict(self.detail)}


@dataclass
class ExpertRule:
    """Condition-action pair over world-knowledge facts."""
    id: str
    conditions: list[dict]
    answer: str

    @staticmethod
    def from_dict(raw: dict) -> "ExpertRule":
        return ExpertRule(id=raw["id"], conditions=list(raw["conditions"]),
                          answer=raw["answer"])


def _route_through(wk: WorldKnowledge, port_key: str) -> list[dict]:
    """Bindings {svc, role} for routes traversing the port named by a fact key."""
    facility = wk.state.facility
    if facility is None or not port_key.startswith("port:"):
        return []
    ne_id, pid = port_key.split(":", 1)[1].split("/", 1)
    out = []
    for sid in sorted(facility.services):
        svc = facility.services[sid]
        for role in (RouteRole.WORKING, RouteRole.PROTECTION):
            route = svc.route_for(role)
            if route and (ne_id, pid) in route_port_pairs(facility, route):
                out.append({"svc": sid, "role": role.value})
    return out


def _match_rule(rule: ExpertRule, wk: WorldKnowledge) -> Optional[dict]:
    """Unify the rule's conditions against facts; first binding wins."""
    bindings_pool: list[dict] = [{}]
    for condition in rule.conditions:
        next_pool: list[dict] = []
        ctype = condition["type"]
        for binding in bindings_pool:
            if ctype == "fact_equals":
                prefix = condition.get("prefix", "")
                for key in sorted(wk.state.facts):
                    if key.startswith(prefix) and wk.state.facts[key] == condition["value"]:
                        next_pool.append({**binding, condition["bind"]: key})
            elif ctype == "route_through":
                port_key = binding.get(condition["port_from"])
                if port_key is None:
                    continue
                for bound in _route_through(wk, port_key):
                    next_pool.append({**binding, "svc": bound["svc"],
                                      "role": bound["role"]})
            elif ctype == "service_state_in":
                sid = binding.get(condition.get("service_from", "svc"))
                digest = wk.state.service_digest(sid) if sid else {}
                if digest.get("state") in condition["states"]:
                    next_pool.append({**binding, "state": digest["state"]})
            else:
                raise ValueError(f"unknown condition type {ctype!r}")
        bindings_pool = next_pool
        if not bindings_pool:
            return None
    return bindings_pool[0]


def run_expert(request: SolverRequest, wk: WorldKnowledge,
               rules: list[ExpertRule]) -> SolverResponse:
    for rule in rules:
        binding = _match_rule(rule, wk)
        if binding is not None:
            pretty = {k: (v.split(":", 1)[1] if isinstance(v, str) and ":" in v else v)
                      for k, v in binding.items()}
            return SolverResponse(answer=rule.answer.format(**pretty),
                                  backend=SolverBackend.EXPERT, confidence=0.9,
                                  detail={"rule": rule.id, "binding": binding})
    return SolverResponse(answer=None, backend=SolverBackend.EXPERT, confidence=0.0,
                          detail={"reason": "no rule matched"})


def run_predictor(request: SolverRequest, wk: WorldKnowledge) -> SolverResponse:
    service = request.context.get("service")
    if service is None:
        for sid in sorted(wk.state.kpi_series):
            if sid.lower() in request.text.lower():
                service = sid
                break
    series = wk.state.kpi_series.get(service or "", [])
    if len(series) < 2:
        return SolverResponse(answer=None, backend=SolverBackend.PREDICTOR,
                              confidence=0.0, detail={"reason": "insufficient samples"})
    tail = [value for _, value in series[-PREDICTOR_WINDOW:]]
    xs = list(range(len(tail)))
    slope, intercept = statistics.linear_regression(xs, tail)
    forecast = intercept + slope * len(tail)
    sla = wk.state.service_digest(service).get("sla_latency_ms")
    breach = sla is not None and forecast >= sla
    answer = f"forecast latency for {service}: {forecast:.4f} ms"
    if breach:
        answer += f" (breaches SLA {sla} ms)"
    return SolverResponse(answer=answer, backend=SolverBackend.PREDICTOR,
                          confidence=0.8,
                          detail={"service": service, "forecast_ms": forecast,
                                  "slope": slope, "breach": breach})


def run_stub(request: SolverRequest) -> SolverResponse:
    return SolverResponse(answer=None, backend=SolverBackend.COPILOT_STUB,
                          confidence=0.0,
                          detail={"reason": "NOT_AVAILABLE",
                                  "echo": {"text": request.text,
                                           "context": dict(request.context)}})


_PREDICT_WORDS = ("forecast", "predict", "extrapolate", "next window")
_EXPERT_WORDS = ("cause", "caused", "why", "root", "reason")


def solve(request: SolverRequest, wk: WorldKnowledge,
          rules: list[ExpertRule]) -> SolverResponse:
    """Backend chosen by request kind; NOT_AVAILABLE is a response, not an error."""
    text = request.text.lower()
    if any(word in text for word in _PREDICT_WORDS):
        return run_predictor(request, wk)
    if any(word in text for word in _EXPERT_WORDS):
        return run_expert(request, wk, rules)
    return run_stub(request)
