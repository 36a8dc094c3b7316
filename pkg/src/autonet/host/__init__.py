"""Agent host: configuration, instances, deterministic runtime."""

from .agent import AgentInstance, profile_kind
from .config import (
    AgentConfig,
    AgentsDocument,
    InvalidConfig,
    Layer,
    Module,
    PHASE_MODULES,
    Phase,
    configs_for_phase,
    load_agents_document,
)
from .runtime import ScenarioRuntime

__all__ = [
    "AgentConfig", "AgentInstance", "AgentsDocument", "InvalidConfig", "Layer",
    "Module", "PHASE_MODULES", "Phase", "ScenarioRuntime", "configs_for_phase",
    "load_agents_document", "profile_kind",
]
