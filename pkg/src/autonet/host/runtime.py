"""Deterministic cooperative runtime: sim clock, message bus, agent scheduling.

Agents run round-robin in id order at each activation time; cross-agent
communication rides the message bus only. Identical inputs and seed yield
byte-identical traces.
"""

from __future__ import annotations

from typing import Optional

from ..hai.solver import ExpertRule
from ..interaction.bus import MessageBus
from ..knowledge.seeds import build_world_knowledge
from ..proactive.purpose import PurposeCondition
from ..simnet.events import Stimulus
from ..simnet.model import Action, ActionKind, ActionResult, FacilityState
from ..simnet.simulator import OpticalNetworkSim
from ..trace import TraceLog
from .agent import AgentInstance
from .config import AgentsDocument, Layer, Module, Phase, configs_for_phase


class ScenarioRuntime:
    def __init__(self, sim: OpticalNetworkSim, document: AgentsDocument,
                 phase: Phase, seed: int, knowledge_seed: dict,
                 expert_rules: Optional[list[ExpertRule]] = None,
                 trace: Optional[TraceLog] = None):
        self.sim = sim
        self.phase = phase
        self.seed = seed
        self.trace = trace or TraceLog()
        self.bus = MessageBus()
        self.shared_resources = dict(document.shared_resources)
        self.now = 0
        self._transition_cursor = 0
        self._wakeup: Optional[int] = None
        self._bootstrapped = False
        self.controllers: dict[str, set[str]] = {}

        self.trace.emit(0, "runtime", "start", {
            "phase": phase.value, "seed": seed,
            "services": sorted(sim.state.services),
            "shared_resources": dict(sorted(self.shared_resources.items()))})

        configs = configs_for_phase(document, phase)
        self.agents: dict[str, AgentInstance] = {}
        for config in configs:
            self.bus.register(config.id, config.parent)
        conditions = [
            PurposeCondition(id=raw["id"], kind=raw["kind"],
                             params=raw.get("params", {}))
            for raw in knowledge_seed.get("purpose_conditions", [])]
        for config in configs:
            wk = build_world_knowledge(config.id, knowledge_seed)
            agent = AgentInstance(
                config, wk, self,
                conditions=[PurposeCondition(c.id, c.kind, dict(c.params))
                            for c in conditions] if config.has(Module.PB) else [],
                expert_rules=expert_rules)
            self.agents[config.id] = agent
            self.trace.emit(0, config.id, "instantiate", {
                "layer": config.layer.value,
                "modules": [m.value for m in config.modules],
                "scope": list(config.scope), "parent": config.parent})

    # ------------------------------------------------------------------
    # topology of agents
    # ------------------------------------------------------------------
    def peers_of(self, agent: AgentInstance) -> list[str]:
        return sorted(
            other.id for other in self.agents.values()
            if other.id != agent.id
            and other.config.layer is agent.config.layer
            and other.config.parent == agent.config.parent
            and agent.config.has(Module.AAI) and other.config.has(Module.AAI))

    def responsible_agent(self, sender: AgentInstance, action: Action) -> Optional[str]:
        """NE agent that owns the action's target element, if any."""
        if action.kind in (ActionKind.CREATE_XC, ActionKind.DELETE_XC):
            target = action.ne
        else:
            svc = self.sim.state.services.get(action.service or "")
            target = svc.sink if svc else None
        if target is None:
            return None
        for aid in sorted(self.agents):
            agent = self.agents[aid]
            if agent.config.layer is Layer.NE and target in agent.config.scope:
                return aid
        return None

    def scoped_snapshot(self, agent: AgentInstance) -> FacilityState:
        scope = set(agent.config.scope)
        if not scope:
            return FacilityState()
        return self.sim.snapshot(scope)

    # ------------------------------------------------------------------
    # facility access: the single mutation path for agent actions
    # ------------------------------------------------------------------
    def facility_act(self, agent: AgentInstance, action: Action) -> ActionResult:
        result = self.sim.apply_action(action)
        for element in self._action_targets(action):
            self.controllers.setdefault(element, set()).add(agent.id)
        self._flush_transitions()
        return result

    def _action_targets(self, action: Action) -> list[str]:
        if action.kind in (ActionKind.CREATE_XC, ActionKind.DELETE_XC):
            return [action.ne] if action.ne else []
        return [f"service:{action.service}"] if action.service else []

    def _flush_transitions(self) -> None:
        new = self.sim.transitions[self._transition_cursor:]
        self._transition_cursor = len(self.sim.transitions)
        for tr in new:
            self.trace.emit(tr.t, "facility", "facility", {
                "service": tr.service, "state": tr.state.value,
                "active": tr.active, "loss_ms": tr.loss_ms})

    # ------------------------------------------------------------------
    # scheduling
    # ------------------------------------------------------------------
    def _stimulus_audience(self, stimulus: Stimulus) -> list[str]:
        source = stimulus.source
        audience = []
        for aid in sorted(self.agents):
            agent = self.agents[aid]
            scope = set(agent.config.scope)
            if not scope:
                continue
            if source in scope:
                audience.append(aid)
            elif source in self.sim.state.links:
                link = self.sim.state.links[source]
                if agent.config.layer is not Layer.NE and \
                        {link.a, link.b} <= scope:
                    audience.append(aid)
        return audience

    def step(self, t: int) -> None:
        self._bootstrapped = True
        self.now = t
        stimuli = self.sim.advance(t)
        self._flush_transitions()
        for stimulus in stimuli:
            self.trace.emit(stimulus.t, "facility", "stimulus", stimulus.describe())
        mailboxes = self.bus.deliver_due(t)
        for aid in sorted(self.agents):
            agent = self.agents[aid]
            mine = [s for s in stimuli if aid in self._stimulus_audience(s)]
            agent.receive(mine, mailboxes.get(aid, []))
        for aid in sorted(self.agents):
            self.agents[aid].run_step(t)
            self._flush_transitions()
        self._wakeup = None
        if any(agent.has_pending_work() for agent in self.agents.values()):
            self._wakeup = t + 1

    def next_time(self) -> Optional[int]:
        times = [self.sim.next_event_time(), self.bus.next_delivery_time(),
                 self._wakeup]
        times = [t for t in times if t is not None]
        return min(times) if times else None

    def run(self, until: int) -> None:
        if not self._bootstrapped:
            self._bootstrapped = True
            self.step(0)
        while True:
            nxt = self.next_time()
            if nxt is None or nxt > until:
                break
            self.step(max(nxt, self.now))
        if until > self.now:
            stimuli = self.sim.advance(until)
            self.now = until
            for stimulus in stimuli:
                self.trace.emit(stimulus.t, "facility", "stimulus",
                                stimulus.describe())
            self._flush_transitions()
        for sid in sorted(self.sim.state.services):
            svc = self.sim.state.services[sid]
            self.trace.emit(self.now, "facility", "final", {
                "service": sid, "state": self.sim.service_states()[sid],
                "active": svc.active.value, "loss_ms": svc.loss_ms,
                "working": list(svc.working.nodes) if svc.working else None,
                "protection": list(svc.protection.nodes) if svc.protection else None,
                "latency_ms": self.sim.route_latency(svc.route_for(svc.active))
                if svc.route_for(svc.active) else None})

    # ------------------------------------------------------------------
    def hai_agent(self) -> Optional[AgentInstance]:
        """The operator console: the domain NMS when it exposes HAI, else the
        lowest-layer agent that does."""
        ranked = sorted(
            (agent for agent in self.agents.values() if agent.hai is not None),
            key=lambda a: ({"NMS": 0, "SMS": 1, "BMS": 2}.get(
                a.config.layer.value, 3), a.id))
        return ranked[0] if ranked else None
