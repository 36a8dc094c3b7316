"""Decision trace: one JSONL record per (time, agent, stage, payload)."""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, Optional


@dataclass(frozen=True)
class TraceRecord:
    seq: int
    t: int
    agent: str
    stage: str
    payload: dict

    def to_json(self) -> str:
        return json.dumps(
            {"seq": self.seq, "t": self.t, "agent": self.agent,
             "stage": self.stage, "payload": self.payload},
            sort_keys=True, separators=(",", ":"))

    @staticmethod
    def from_json(line: str) -> "TraceRecord":
        raw = json.loads(line)
        return TraceRecord(seq=raw["seq"], t=raw["t"], agent=raw["agent"],
                           stage=raw["stage"], payload=raw["payload"])


class TraceLog:
    """Ordered record sink; assigns the merged-trace sequence numbers."""

    def __init__(self) -> None:
        self.records: list[TraceRecord] = []
        self._subscribers: list[Callable[[TraceRecord], None]] = []

    def emit(self, t: int, agent: str, stage: str, payload: dict) -> TraceRecord:
        record = TraceRecord(seq=len(self.records), t=t, agent=agent,
                             stage=stage, payload=payload)
        self.records.append(record)
        for subscriber in self._subscribers:
            subscriber(record)
        return record

    def subscribe(self, callback: Callable[[TraceRecord], None]) -> None:
        self._subscribers.append(callback)

    def by_agent(self, agent: str) -> list[TraceRecord]:
        return [r for r in self.records if r.agent == agent]

    def by_stage(self, stage: str) -> list[TraceRecord]:
        return [r for r in self.records if r.stage == stage]

    def to_jsonl(self) -> str:
        return "".join(record.to_json() + "\n" for record in self.records)

    def write(self, path: Path, agent: Optional[str] = None) -> None:
        records = self.records if agent is None else self.by_agent(agent)
        path.write_text("".join(r.to_json() + "\n" for r in records))


def read_trace(path: Path) -> list[TraceRecord]:
    return [TraceRecord.from_json(line)
            for line in Path(path).read_text().splitlines() if line.strip()]
