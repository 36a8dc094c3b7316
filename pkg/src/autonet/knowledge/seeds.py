"""Knowledge seed files: action specs, goal templates, catalogs, value system."""

from __future__ import annotations

import json
from pathlib import Path

from .repository import WorldKnowledge
from .types import (
    ActionSpec,
    ConstraintKind,
    FeasibilityConstraint,
    GoalTemplate,
    KnowledgeEntry,
    NeedCatalogRecord,
)
from .values import ValueSystem

SEED_FORMAT_VERSION = 1


def load_seed(source) -> dict:
    doc = source if isinstance(source, dict) else json.loads(Path(source).read_text())
    if doc.get("format_version") != SEED_FORMAT_VERSION:
        raise ValueError(f"seed: unsupported format_version {doc.get('format_version')!r}")
    return doc


def build_world_knowledge(agent_id: str, seed: dict) -> WorldKnowledge:
    action_specs = [
        ActionSpec(kind=raw["kind"], enabling=raw["enabling"],
                   effect=raw.get("effect", ""), params=raw.get("params", {}))
        for raw in seed.get("action_specs", [])
    ]
    constraints = [
        FeasibilityConstraint(
            id=raw["id"], kind=ConstraintKind(raw["kind"]), check=raw["check"],
            params=raw.get("params", {}), veto=bool(raw.get("veto", False)))
        for raw in seed.get("constraints", [])
    ]
    catalog = [
        NeedCatalogRecord(
            need_kind=raw["need_kind"],
            templates=[GoalTemplate(
                kind=t["kind"], base_weight=float(t["base_weight"]),
                deadline_class=t.get("deadline_class", "S"),
                automation=float(t.get("automation", 1.0)),
                resource_mode=t.get("resource_mode", "idle_resources"),
                params=t.get("params", {})) for t in raw["templates"]],
            constraint_ids=list(raw.get("constraint_ids", [])))
        for raw in seed.get("need_catalog", [])
    ]
    value_system = (ValueSystem.from_dict(seed["value_system"])
                    if seed.get("value_system") else None)
    entries = [
        KnowledgeEntry(id=raw["id"], tags=raw["tags"], content=raw["content"],
                       valid_from=int(raw.get("valid_from", 0)))
        for raw in seed.get("entries", [])
    ]
    return WorldKnowledge(agent_id, action_specs=action_specs, need_catalog=catalog,
                          constraints=constraints, value_system=value_system,
                          entries=entries)
