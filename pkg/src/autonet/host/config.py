"""Agent configuration: layers, module sets, phases and their gating rules."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from typing import Optional

from ..reactive.goals import Goal
from ..routing import RoutingThresholds
from ..rta import CriticalProperty, DEFAULT_PROPERTIES

CONFIG_FORMAT_VERSION = 1


class Layer(str, Enum):
    NE = "NE"
    NMS = "NMS"
    SMS = "SMS"
    BMS = "BMS"


class Phase(str, Enum):
    COPILOT = "COPILOT"
    SINGLE = "SINGLE"
    MULTI = "MULTI"


class Module(str, Enum):
    RB = "RB"
    PB = "PB"
    HAI = "HAI"
    AAI = "AAI"


class InvalidConfig(Exception):
    def __init__(self, rule: str, detail: str):
        super().__init__(f"{rule}: {detail}")
        self.rule = rule
        self.detail = detail


# Module sets per layer and phase. A layer absent from a phase cannot be
# instantiated in that phase at all.
PHASE_MODULES: dict[Phase, dict[Layer, tuple[Module, ...]]] = {
    Phase.COPILOT: {
        Layer.NMS: (Module.HAI,),
        Layer.SMS: (Module.HAI,),
        Layer.BMS: (Module.HAI,),
    },
    Phase.SINGLE: {
        Layer.NE: (Module.RB,),
        Layer.NMS: (Module.RB, Module.PB, Module.HAI),
    },
    Phase.MULTI: {
        Layer.NE: (Module.RB, Module.AAI),
        Layer.NMS: (Module.RB, Module.PB, Module.HAI, Module.AAI),
        Layer.SMS: (Module.AAI,),
        Layer.BMS: (Module.AAI,),
    },
}


@dataclass
class AgentConfig:
    id: str
    layer: Layer
    modules: tuple[Module, ...]
    scope: tuple[str, ...] = ()
    parent: Optional[str] = None
    phase: Phase = Phase.SINGLE
    thresholds: RoutingThresholds = field(default_factory=RoutingThresholds)
    properties: tuple[CriticalProperty, ...] = DEFAULT_PROPERTIES
    initial_goals: tuple[Goal, ...] = ()
    pb_enabled_override: Optional[bool] = None

    def has(self, module: Module) -> bool:
        return module in self.modules

    def validate(self) -> None:
        modules = set(self.modules)
        if self.layer is Layer.NE:
            if Module.HAI in modules:
                raise InvalidConfig("NE_HAI_FORBIDDEN",
                                    f"{self.id}: NE agents never expose HAI")
            if Module.RB not in modules:
                raise InvalidConfig("NE_RB_REQUIRED",
                                    f"{self.id}: NE agents require RB")
        if self.phase is Phase.COPILOT and modules & {Module.RB, Module.PB, Module.AAI}:
            raise InvalidConfig("COPILOT_FORBIDS_BEHAVIOR",
                                f"{self.id}: copilot phase allows HAI and WK only")
        if self.phase is Phase.SINGLE and Module.AAI in modules:
            raise InvalidConfig("SINGLE_FORBIDS_AAI",
                                f"{self.id}: single-agent phase has no AAI")
        if self.layer is Layer.NMS and self.phase is Phase.MULTI:
            required = {Module.RB, Module.PB, Module.HAI, Module.AAI}
            if not required <= modules:
                raise InvalidConfig("NMS_MODULES_REQUIRED",
                                    f"{self.id}: NMS requires RB, PB, HAI and AAI")
        if self.layer is Layer.NMS and self.phase is Phase.SINGLE:
            if not {Module.RB, Module.PB, Module.HAI} <= modules:
                raise InvalidConfig("NMS_MODULES_REQUIRED",
                                    f"{self.id}: NMS requires RB, PB and HAI")


@dataclass
class AgentsDocument:
    specs: list[dict]
    shared_resources: dict[str, float]


def load_agents_document(source) -> AgentsDocument:
    doc = source if isinstance(source, dict) else json.loads(Path(source).read_text())
    if doc.get("format_version") != CONFIG_FORMAT_VERSION:
        raise InvalidConfig("FORMAT_VERSION",
                            f"unsupported format_version {doc.get('format_version')!r}")
    return AgentsDocument(
        specs=list(doc.get("agents", [])),
        shared_resources={k: float(v)
                          for k, v in doc.get("shared_resources", {}).items()})


def configs_for_phase(document: AgentsDocument, phase: Phase) -> list[AgentConfig]:
    """Instantiate the declared hierarchy for a phase, gating modules by the
    incremental evolution rules; layers a phase does not support are omitted."""
    available = PHASE_MODULES[phase]
    configs: list[AgentConfig] = []
    kept_ids = {spec["id"] for spec in document.specs
                if Layer(spec["layer"]) in available}
    for spec in sorted(document.specs, key=lambda s: s["id"]):
        layer = Layer(spec["layer"])
        if layer not in available:
            continue
        modules = list(available[layer])
        if layer is Layer.NE and spec.get("pb_enabled") and phase is not Phase.COPILOT:
            modules.append(Module.PB)
        parent = spec.get("parent")
        if parent is not None and parent not in kept_ids:
            parent = None
        thresholds = _thresholds_from(spec.get("thresholds", {}))
        config = AgentConfig(
            id=spec["id"], layer=layer, modules=tuple(modules),
            scope=tuple(spec.get("scope", [])), parent=parent, phase=phase,
            thresholds=thresholds,
            initial_goals=tuple(Goal.from_dict(g)
                                for g in spec.get("initial_goals", [])))
        config.validate()
        configs.append(config)
    _check_tree(configs)
    return configs


def _thresholds_from(raw: dict) -> RoutingThresholds:
    kwargs = {}
    if "urgency_cut" in raw:
        kwargs["urgency_cut"] = float(raw["urgency_cut"])
    if "frequency_cut_per_hour" in raw:
        kwargs["frequency_cut_per_hour"] = float(raw["frequency_cut_per_hour"])
    if "window_ms" in raw:
        kwargs["window_ms"] = int(raw["window_ms"])
    if "pb_coverage" in raw:
        kwargs["pb_coverage"] = tuple(raw["pb_coverage"])
    return RoutingThresholds(**kwargs)


def _check_tree(configs: list[AgentConfig]) -> None:
    """Parent/child edges must form a forest (a tree per surviving root)."""
    by_id = {c.id: c for c in configs}
    for config in configs:
        if config.parent is not None and config.parent not in by_id:
            raise InvalidConfig("UNKNOWN_PARENT",
                                f"{config.id} names unknown parent {config.parent}")
        seen = {config.id}
        parent = config.parent
        while parent is not None:
            if parent in seen:
                raise InvalidConfig("HIERARCHY_CYCLE",
                                    f"cycle through {config.id}")
            seen.add(parent)
            parent = by_id[parent].parent
