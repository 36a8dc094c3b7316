"""Knowledge repository plus manager: retrieval, update and coherency checking."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Optional

from .state import AgentState
from .types import (
    ActionSpec,
    ContextAction,
    FeasibilityConstraint,
    KnowledgeEntry,
    MetaGoal,
    NeedCatalogRecord,
    NetworkContext,
    QueryKind,
    QueryResult,
    UnknownQueryKind,
    UpdateResult,
    Violation,
)
from .values import ValueSystem

# Versioned integrity-rule table; check_coherence evaluates the enabled ids.
INTEGRITY_RULES_VERSION = 1
INTEGRITY_RULES = ("contradiction", "dangling-reference", "tag-vocabulary")


@dataclass
class ProcessedQuery:
    """Manager-normalized query handed to the repository retrieval step."""
    kind: QueryKind
    payload: Any
    keys: list[str] = field(default_factory=list)


class WorldKnowledge:
    """One repository per agent; callers interact through the owning agent."""

    def __init__(self, agent_id: str,
                 action_specs: Optional[list[ActionSpec]] = None,
                 need_catalog: Optional[list[NeedCatalogRecord]] = None,
                 constraints: Optional[list[FeasibilityConstraint]] = None,
                 value_system: Optional[ValueSystem] = None,
                 entries: Optional[list[KnowledgeEntry]] = None):
        self.agent_id = agent_id
        self.state = AgentState()
        self.action_specs = action_specs or []
        self.need_catalog = {rec.need_kind: rec for rec in (need_catalog or [])}
        self.constraints = {c.id: c for c in (constraints or [])}
        self.value_system = value_system
        self.entries: dict[str, KnowledgeEntry] = {}
        self._entry_seq = 0
        for entry in entries or []:
            result = self.update(entry)
            if not result.accepted:
                raise ValueError(f"seed entry {entry.id} rejected: {result.reason}")

    # ------------------------------------------------------------------
    # Table-style retrieval: the manager prepares, the repository retrieves.
    # ------------------------------------------------------------------
    def prepare(self, kind: QueryKind, payload: Any) -> ProcessedQuery:
        if not isinstance(kind, QueryKind):
            raise UnknownQueryKind(str(kind))
        keys: list[str] = []
        if kind is QueryKind.TEXT_TO_STRUCTURED:
            keys = [tok for tok in str(payload).lower().replace("?", " ").split() if tok]
        return ProcessedQuery(kind=kind, payload=payload, keys=keys)

    def retrieve(self, query: ProcessedQuery) -> QueryResult:
        kind = query.kind
        if kind is QueryKind.PERCEPT_TO_CONTEXT:
            return self._context_for_percept(query.payload)
        if kind is QueryKind.NEED_TO_CONSTRAINTS:
            return self._constraints_for_need(query.payload)
        if kind is QueryKind.METAGOAL_TO_VALUE_CONSTRAINTS:
            constraints = [self.constraints[cid] for cid in
                           getattr(query.payload, "details", {}).get("constraint_ids", [])
                           if cid in self.constraints]
            if self.value_system is None:
                return QueryResult(kind=kind, no_match=True)
            return QueryResult(kind=kind, value_system=self.value_system,
                               constraints=constraints or list(self.constraints.values()))
        if kind is QueryKind.TEXT_TO_STRUCTURED:
            return self._ranked_entries(query.keys)
        if kind is QueryKind.AAI_REQUEST_TO_STATE_AND_GOAL:
            summary = self.state.export_summary()
            return QueryResult(kind=kind, state_summary=summary,
                               goal_digests=summary["goals"])
        raise UnknownQueryKind(str(kind))

    def query(self, kind: QueryKind, payload: Any) -> QueryResult:
        return self.retrieve(self.prepare(kind, payload))

    def _context_for_percept(self, percept) -> QueryResult:
        findings = list(getattr(percept, "findings", []))
        facts = [f.describe() if hasattr(f, "describe") else dict(f) for f in findings]
        actions: list[ContextAction] = []
        for fact in facts:
            service = fact.get("service")
            if service is None:
                continue
            subject = dict(self.state.service_digest(service))
            subject.update(fact)
            for spec in self.action_specs:
                if self._enabling_holds(spec, subject):
                    actions.append(ContextAction(
                        kind=spec.kind, service=service,
                        role=fact.get("role"), detail={"effect": spec.effect}))
        if not facts:
            return QueryResult(kind=QueryKind.PERCEPT_TO_CONTEXT, no_match=True)
        return QueryResult(kind=QueryKind.PERCEPT_TO_CONTEXT,
                           context=NetworkContext(facts=facts, actions=actions))

    def _enabling_holds(self, spec: ActionSpec, subject: dict) -> bool:
        cond = spec.enabling
        if cond == "route_failed":
            return subject.get("finding") == "route_failed"
        if cond == "protection_violated":
            return subject.get("state") in ("DEGRADED", "INTERRUPTED")
        if cond == "service_interrupted":
            return subject.get("state") == "INTERRUPTED"
        if cond == "latency_attention":
            margin = subject.get("margin_ms")
            return margin is not None and margin <= spec.params.get("margin_ms", 1.0)
        if cond == "always":
            return True
        return False

    def _constraints_for_need(self, need) -> QueryResult:
        record = self.need_catalog.get(getattr(need, "kind", None))
        if record is None:
            return QueryResult(kind=QueryKind.NEED_TO_CONSTRAINTS, no_match=True)
        constraints = [self.constraints[cid] for cid in record.constraint_ids
                       if cid in self.constraints]
        meta = MetaGoal(
            need_id=getattr(need, "id", "?"),
            need_kind=record.need_kind,
            target=getattr(need, "target", None),
            templates=list(record.templates),
            constraints=constraints,
            details={"constraint_ids": list(record.constraint_ids),
                     **getattr(need, "details", {})},
        )
        return QueryResult(kind=QueryKind.NEED_TO_CONSTRAINTS,
                           meta_goal=meta, constraints=constraints)

    def _ranked_entries(self, keys: list[str]) -> QueryResult:
        scored: list[tuple[KnowledgeEntry, float]] = []
        for entry in self.entries.values():
            text = " ".join(str(v) for v in entry.content.values()).lower()
            text += " " + " ".join(entry.tags.values())
            score = float(sum(1 for key in keys if key in text))
            if score > 0:
                scored.append((entry, score))
        scored.sort(key=lambda pair: (-pair[1], pair[0].id))
        if not scored:
            return QueryResult(kind=QueryKind.TEXT_TO_STRUCTURED, no_match=True)
        return QueryResult(kind=QueryKind.TEXT_TO_STRUCTURED, ranked_entries=scored)

    # ------------------------------------------------------------------
    # Updates
    # ------------------------------------------------------------------
    def update(self, entry: KnowledgeEntry) -> UpdateResult:
        tag_error = entry.validate_tags()
        if tag_error:
            return UpdateResult(accepted=False, reason=tag_error)
        if entry.content.get("kind") == "fact":
            key = entry.content["key"]
            if not self.state.newer(key, entry.valid_from):
                return UpdateResult(accepted=False, reason="stale")
            if key.startswith("kpi:") and \
                    key.split(":", 1)[1] not in self.state.services:
                return UpdateResult(accepted=False, reason="COHERENCY_VIOLATION",
                                    conflicts=[entry.id])
            stored = self.facts_at(key, entry.valid_from)
            for other in stored:
                if other.content["value"] != entry.content["value"]:
                    return UpdateResult(
                        accepted=False, reason="COHERENCY_VIOLATION",
                        conflicts=[other.id, entry.id])
        violations = self.check_coherence([entry])
        if violations:
            return UpdateResult(accepted=False, reason="COHERENCY_VIOLATION",
                                conflicts=[e for v in violations for e in v.entries])
        self.entries[entry.id] = entry
        if entry.content.get("kind") == "fact":
            self._apply_fact(entry)
        return UpdateResult(accepted=True)

    def facts_at(self, key: str, t: int) -> list[KnowledgeEntry]:
        return [e for e in self.entries.values()
                if e.content.get("kind") == "fact"
                and e.content.get("key") == key and e.valid_from == t]

    def _apply_fact(self, entry: KnowledgeEntry) -> None:
        key = entry.content["key"]
        value = entry.content["value"]
        t = entry.valid_from
        if key.startswith("kpi:"):
            self.state.record_kpi(key.split(":", 1)[1], t, float(value))
        elif key.startswith("service:"):
            sid = key.split(":", 1)[1]
            digest = dict(value) if isinstance(value, dict) else {"state": value}
            self.state.services[sid] = digest
            self.state.touch(key, t)
        else:
            self.state.set_fact(key, value, t)

    def next_entry_id(self, prefix: str) -> str:
        self._entry_seq += 1
        return f"{prefix}-{self._entry_seq:06d}"

    # ------------------------------------------------------------------
    # Coherency
    # ------------------------------------------------------------------
    def check_coherence(self, candidates: Optional[list[KnowledgeEntry]] = None
                        ) -> list[Violation]:
        candidates = candidates or []
        violations: list[Violation] = []
        pool = list(self.entries.values()) + candidates

        # tag-vocabulary
        for entry in pool:
            error = entry.validate_tags()
            if error:
                violations.append(Violation("tag-vocabulary", [entry.id], error))

        # contradiction: same fact key and timestamp, different value
        by_key: dict[tuple[str, int], list[KnowledgeEntry]] = {}
        for entry in pool:
            if entry.content.get("kind") == "fact":
                by_key.setdefault((entry.content["key"], entry.valid_from), []).append(entry)
        for (key, t), group in sorted(by_key.items()):
            values = {repr(e.content["value"]) for e in group}
            if len(values) > 1:
                violations.append(Violation(
                    "contradiction", sorted(e.id for e in group),
                    f"contradictory values for {key} at t={t}"))

        # dangling-reference: goals naming services the state no longer knows
        for entry in pool:
            if entry.content.get("kind") != "goal":
                continue
            target = entry.content.get("service")
            if target and target not in self.state.services:
                violations.append(Violation(
                    "dangling-reference", [entry.id],
                    f"goal references unknown service {target}"))
        for gid, goal in sorted(self.state.pursued_goals.items()):
            target = goal.get("service")
            if target and target not in self.state.services:
                violations.append(Violation(
                    "dangling-reference", [gid],
                    f"goal references unknown service {target}"))
        return violations

    # ------------------------------------------------------------------
    def dump(self) -> dict:
        """Full repository content for golden-file comparison."""
        return {
            "agent_id": self.agent_id,
            "integrity_rules": {"version": INTEGRITY_RULES_VERSION,
                                "enabled": list(INTEGRITY_RULES)},
            "entries": [self.entries[eid].describe() for eid in sorted(self.entries)],
            "action_specs": [vars(spec) for spec in self.action_specs],
            "need_catalog": [
                {"need_kind": rec.need_kind,
                 "templates": [vars(t) for t in rec.templates],
                 "constraint_ids": list(rec.constraint_ids)}
                for rec in self.need_catalog.values()],
            "constraints": [c.describe() for c in self.constraints.values()],
            "value_system": self.value_system.describe() if self.value_system else None,
            "state": {
                "facts": dict(sorted(self.state.facts.items())),
                "services": {k: dict(v) for k, v in sorted(self.state.services.items())},
                "kpi_series": {k: [list(p) for p in v]
                               for k, v in sorted(self.state.kpi_series.items())},
                "pursued_goals": {k: dict(v) for k, v in
                                  sorted(self.state.pursued_goals.items())},
                "managed_goals": list(self.state.managed_goals),
                "peers": {k: dict(v) for k, v in sorted(self.state.peers.items())},
                "timestamps": dict(sorted(self.state.timestamps.items())),
            },
        }
