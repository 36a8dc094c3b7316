"""Human-agent interaction: intents, problem solver, service facade."""

from .intents import Intent, IntentParseError, IntentVerb, parse_intent
from .service import DashboardSnapshot, HAIService, Receipt, SNAPSHOT_SCHEMA_VERSION
from .solver import (
    ExpertRule,
    SolverBackend,
    SolverRequest,
    SolverResponse,
    run_expert,
    run_predictor,
    run_stub,
    solve,
)

__all__ = [
    "DashboardSnapshot", "ExpertRule", "HAIService", "Intent", "IntentParseError",
    "IntentVerb", "Receipt", "SNAPSHOT_SCHEMA_VERSION", "SolverBackend",
    "SolverRequest", "SolverResponse", "parse_intent", "run_expert",
    "run_predictor", "run_stub", "solve",
]
