"""In-process message transport: per-channel FIFO, zero loss, deterministic."""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Optional

TRANSPORT_DELAY_MS = 1


class MessageKind(str, Enum):
    STATE_REPORT = "STATE_REPORT"
    GOAL_ADVERT = "GOAL_ADVERT"
    COORDINATION_VERDICT = "COORDINATION_VERDICT"
    ACTION_DIRECTIVE = "ACTION_DIRECTIVE"


class UnknownPeer(Exception):
    pass


class DirectiveDirection(Exception):
    """Directives flow only downward in the hierarchy."""


@dataclass(frozen=True)
class AgentMessage:
    sender: str
    receiver: str
    seq: int
    kind: MessageKind
    payload: dict
    sent_t: int
    deliver_t: int

    def describe(self) -> dict:
        return {"sender": self.sender, "receiver": self.receiver, "seq": self.seq,
                "kind": self.kind.value, "payload": self.payload,
                "sent_t": self.sent_t, "deliver_t": self.deliver_t}


class MessageBus:
    """FIFO per (sender, receiver) channel with strictly increasing sequence
    numbers and a fixed transport delay."""

    def __init__(self) -> None:
        self._agents: dict[str, Optional[str]] = {}   # agent id -> parent id
        self._next_seq: dict[tuple[str, str], int] = {}
        self._in_flight: list[AgentMessage] = []

    def register(self, agent_id: str, parent: Optional[str] = None) -> None:
        self._agents[agent_id] = parent

    def known(self, agent_id: str) -> bool:
        return agent_id in self._agents

    def is_ancestor(self, candidate: str, agent_id: str) -> bool:
        parent = self._agents.get(agent_id)
        while parent is not None:
            if parent == candidate:
                return True
            parent = self._agents.get(parent)
        return False

    def send(self, sender: str, receiver: str, kind: MessageKind, payload: dict,
             now: int, delay_ms: int = TRANSPORT_DELAY_MS) -> AgentMessage:
        """delay_ms >= the base transport delay lets a sender stagger a
        sequence of messages so they apply in emission order across
        receivers."""
        if receiver not in self._agents:
            raise UnknownPeer(receiver)
        if sender not in self._agents:
            raise UnknownPeer(sender)
        if kind is MessageKind.ACTION_DIRECTIVE and not self.is_ancestor(sender, receiver):
            raise DirectiveDirection(
                f"directive {sender} -> {receiver} does not flow downward")
        channel = (sender, receiver)
        seq = self._next_seq.get(channel, 0) + 1
        self._next_seq[channel] = seq
        message = AgentMessage(sender=sender, receiver=receiver, seq=seq, kind=kind,
                               payload=payload, sent_t=now,
                               deliver_t=now + max(delay_ms, TRANSPORT_DELAY_MS))
        self._in_flight.append(message)
        return message

    def next_delivery_time(self) -> Optional[int]:
        return min((m.deliver_t for m in self._in_flight), default=None)

    def deliver_due(self, now: int) -> dict[str, list[AgentMessage]]:
        due = [m for m in self._in_flight if m.deliver_t <= now]
        self._in_flight = [m for m in self._in_flight if m.deliver_t > now]
        due.sort(key=lambda m: (m.deliver_t, m.sender, m.receiver, m.seq))
        mailboxes: dict[str, list[AgentMessage]] = {}
        for message in due:
            mailboxes.setdefault(message.receiver, []).append(message)
        return mailboxes
