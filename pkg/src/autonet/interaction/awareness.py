"""Global awareness: state exchange and merging peer state into world knowledge."""

from __future__ import annotations

from ..knowledge.repository import WorldKnowledge
from .bus import AgentMessage, MessageBus, MessageKind


def export_state_digest(wk: WorldKnowledge) -> dict:
    """State summary shared with peers. Digests only: local-only knowledge
    entries (scope agent_specific) are never exported."""
    digest = wk.state.export_summary()
    exhausted: list[str] = []
    facility = wk.state.facility
    if facility is not None:
        exhausted = sorted(
            link.id for link in facility.links.values()
            if link.capacity > 0 and link.utilization >= link.capacity)
    digest["exhausted"] = exhausted
    digest["shared_notes"] = [
        entry.id for entry in wk.entries.values()
        if entry.tags.get("scope") == "general"
    ]
    return digest


def share_state(agent_id: str, wk: WorldKnowledge, peers: list[str],
                bus: MessageBus, now: int) -> list[AgentMessage]:
    digest = export_state_digest(wk)
    return [bus.send(agent_id, peer, MessageKind.STATE_REPORT, digest, now)
            for peer in peers]


def merge_global_state(reports: list[AgentMessage], wk: WorldKnowledge,
                       now: int) -> dict:
    """Integrate peer state reports; stale (lower or equal seq) reports are
    ignored. Exhausted shared links learned from peers are excluded from
    subsequent local planning."""
    changes = 0
    ignored = 0
    for report in reports:
        peer = report.sender
        last_seq = wk.state.peers.get(peer, {}).get("seq", 0)
        if report.seq <= last_seq:
            ignored += 1
            continue
        wk.state.peers[peer] = {"seq": report.seq, "t": report.sent_t,
                                **report.payload}
        wk.state.touch(f"peer:{peer}", now)
        changes += 1
        if wk.state.facility is not None:
            for resource in report.payload.get("exhausted", []):
                wk.state.facility.exhausted_resources.add(resource)
    return {"changes": changes, "ignored": ignored}
