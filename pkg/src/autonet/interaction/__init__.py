"""Agent-agent interaction: transport, global awareness, goal coordination."""

from .awareness import export_state_digest, merge_global_state, share_state
from .bus import (
    AgentMessage,
    DirectiveDirection,
    MessageBus,
    MessageKind,
    TRANSPORT_DELAY_MS,
    UnknownPeer,
)
from .coordination import (
    CoordinationVerdict,
    GoalRelation,
    SYNERGY_WEIGHT_BOOST,
    coordinate_goals,
)

__all__ = [
    "AgentMessage", "CoordinationVerdict", "DirectiveDirection", "GoalRelation",
    "MessageBus", "MessageKind", "SYNERGY_WEIGHT_BOOST", "TRANSPORT_DELAY_MS",
    "UnknownPeer", "coordinate_goals", "export_state_digest", "merge_global_state",
    "share_state",
]
