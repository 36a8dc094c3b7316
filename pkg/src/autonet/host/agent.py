"""Agent instances: compose the behavior modules and run the per-tick loop."""

from __future__ import annotations

from typing import Optional

from ..hai.service import HAIService
from ..hai.intents import Intent
from ..hai.solver import ExpertRule
from ..interaction.awareness import export_state_digest, share_state
from ..interaction.bus import AgentMessage, MessageKind
from ..interaction.pipeline import aai_exchange
from ..knowledge.repository import WorldKnowledge
from ..knowledge.types import fact_entry
from ..proactive.pipeline import proactive_behavior
from ..proactive.purpose import Need, PurposeCondition
from ..reactive.goals import Goal, manage_goals
from ..reactive.model import PredictiveModel, reflect
from ..reactive.percept import perceive
from ..reactive.pipeline import goals_from_model
from ..reactive.planner import ControlPolicy, NoFeasiblePlan, plan
from ..routing import (
    EventProfile,
    FrequencyTracker,
    Responsibility,
    URGENCY_TABLE,
    classify,
    shift_boundary,
)
from ..rta import FallbackInfeasible, RtaMode, RtaState, gate
from ..simnet.events import Stimulus, StimulusKind
from ..simnet.model import Action, ActionResult
from .config import AgentConfig, Layer, Module, Phase


def profile_kind(stimulus: Stimulus, wk: WorldKnowledge) -> str:
    """Map a stimulus to the event kind the task router classifies.

    Failures carry the urgency of their service impact class: anything
    touching a premium service is a port/fiber failure; best-effort-only
    impact is a restoration demand.
    """
    payload = stimulus.payload
    if stimulus.kind is StimulusKind.ALARM:
        if payload.get("state") == "UP":
            return "repair_notice"
        if "service" in payload:
            digest = wk.state.service_digest(payload["service"])
            return ("port_failure" if digest.get("priority", "premium") == "premium"
                    else "service_restoration")
        affected = _affected_priorities(stimulus, wk)
        base = "fiber_cut" if "link" in payload else "port_failure"
        if affected and all(p == "best_effort" for p in affected):
            return "service_restoration"
        return base
    if stimulus.kind is StimulusKind.KPI:
        return "latency_drift" if "latency_ms" in payload else "capacity_trend"
    if stimulus.kind is StimulusKind.LOG:
        return payload.get("event", "fiber_aging")
    return "external_report"


def _affected_priorities(stimulus: Stimulus, wk: WorldKnowledge) -> list[str]:
    facility = wk.state.facility
    if facility is None:
        return []
    from ..simnet.model import RouteRole, route_port_pairs
    payload = stimulus.payload
    priorities = []
    for sid in sorted(facility.services):
        svc = facility.services[sid]
        for role in (RouteRole.WORKING, RouteRole.PROTECTION):
            route = svc.route_for(role)
            if route is None:
                continue
            if "port" in payload and (stimulus.source, payload["port"]) in \
                    route_port_pairs(facility, route):
                priorities.append(svc.priority)
            elif "link" in payload and payload["link"] in route.links:
                priorities.append(svc.priority)
    return priorities


class AgentInstance:
    """One agent: config, mailbox, world knowledge, pipelines, trace sink."""

    def __init__(self, config: AgentConfig, wk: WorldKnowledge, runtime,
                 conditions: Optional[list[PurposeCondition]] = None,
                 expert_rules: Optional[list[ExpertRule]] = None):
        config.validate()
        self.config = config
        self.id = config.id
        self.wk = wk
        self.runtime = runtime
        self.conditions: list[PurposeCondition] = list(conditions or [])
        self.need_registry: dict[str, Need] = {}
        self.rta_state = RtaState()
        self.takeover_enabled = False
        self.suspended: list = []
        self.pending_human: list[dict] = []
        self.goals: dict[str, Goal] = {}
        self.queued_goals: list[Goal] = []
        self.queued_needs: list[Need] = []
        self.inbox_stimuli: list[Stimulus] = []
        self.mailbox: list[AgentMessage] = []
        self.advertised: dict[str, list[dict]] = {}
        self.tracker = FrequencyTracker(config.thresholds.window_ms)
        self.thresholds = config.thresholds
        self.hai: Optional[HAIService] = None
        if config.has(Module.HAI):
            self.hai = HAIService(self, expert_rules=expert_rules)
        self._acted = False
        self._pending_reports: list[AgentMessage] = []
        self._last_shared_digest: Optional[str] = None
        self._last_advert: Optional[str] = None
        for goal in config.initial_goals:
            self.queue_goal(goal, origin=goal.origin)

    # ------------------------------------------------------------------
    # runtime plumbing
    # ------------------------------------------------------------------
    def now(self) -> int:
        return self.runtime.now

    def trace_event(self, stage: str, payload: dict) -> None:
        self.runtime.trace.emit(self.now(), self.id, stage, payload)

    def receive(self, stimuli: list[Stimulus], messages: list[AgentMessage]) -> None:
        self.inbox_stimuli.extend(stimuli)
        self.mailbox.extend(messages)

    def has_pending_work(self) -> bool:
        return bool(self.inbox_stimuli or self.mailbox or self.queued_goals
                    or self.queued_needs)

    # ------------------------------------------------------------------
    # HAI-facing surface
    # ------------------------------------------------------------------
    def known_resource(self, claim: str) -> bool:
        if claim.startswith("service:"):
            return claim.split(":", 1)[1] in self.wk.state.services
        facility = self.wk.state.facility
        return (claim in self.runtime.shared_resources
                or (facility is not None
                    and (claim in facility.links or claim in facility.elements)))

    def queue_goal(self, goal: Goal, origin: str = "RB") -> None:
        unknown = sorted(c for c in goal.claims if not self.known_resource(c))
        if unknown:
            raise ValueError(f"goal {goal.id} claims unknown resources {unknown}")
        goal.origin = origin
        if all(g.id != goal.id for g in self.queued_goals):
            self.queued_goals.append(goal)
        self.goals[goal.id] = goal
        self.wk.state.pursued_goals[goal.id] = {
            **goal.describe(), "status": "PURSUED", "stage": "queued"}
        self.wk.state.managed_goals = sorted(self.wk.state.pursued_goals)

    def queue_need(self, need: Need) -> None:
        self.queued_needs.append(need)

    def needs_from_intent(self, intent: Intent) -> list[Need]:
        """Synthesize needs for REDUCE/INCREASE intents and queue them."""
        targets: list[str]
        if intent.target_kind == "region":
            targets = sorted(
                sid for sid, digest in self.wk.state.services.items()
                if digest.get("region") == intent.target)
        else:
            targets = [intent.target] if intent.target in self.wk.state.services else []
        needs = []
        for sid in targets:
            digest = self.wk.state.service_digest(sid)
            series = self.wk.state.kpi_series.get(sid, [])
            latest = series[-1][1] if series else None
            need = Need(
                id=f"need:INTENT:{intent.verb.value}:{sid}",
                kind="LATENCY_BREACH_RISK" if intent.metric == "latency"
                else "SERVICE_DOWN",
                condition_id="human-intent", target=sid, severity="minor",
                t=self.now(),
                details={"latency_ms": latest,
                         "sla_ms": digest.get("sla_latency_ms"),
                         "intent": intent.describe()})
            self.queue_need(need)
            needs.append(need)
        return needs

    def register_condition(self, condition: PurposeCondition, intent: Intent) -> None:
        self.conditions = [c for c in self.conditions if c.id != condition.id]
        self.conditions.append(condition)
        self.trace_event("condition", {"condition": condition.id,
                                       "intent": intent.describe()})

    def record_feedback(self, item: dict) -> None:
        entry = fact_entry(self.wk.next_entry_id("feedback"),
                           key=f"feedback:{self.now()}:{len(self.wk.entries)}",
                           value=item.get("feedback"), t=self.now())
        entry.content["kind"] = "feedback"
        entry.content["subject"] = item.get("subject")
        self.wk.entries[entry.id] = entry
        self.trace_event("feedback", {"feedback": item.get("feedback"),
                                      "subject": item.get("subject")})

    def execute_human_action(self, action: Action) -> ActionResult:
        """Human-submitted actions execute via the RTA gate even in takeover."""
        goal = Goal(id=f"human:{action.kind.value.lower()}", kind="HUMAN_ACTION",
                    service=action.service, weight=1.0, origin="HUMAN",
                    trigger_t=self.now())
        policy = ControlPolicy(goal=goal,
                               steps=[_human_step(action)], success="noop")
        model = self._model_from_state()
        outcome = gate(policy, model, self.rta_state, self.config.properties)
        self.rta_state = outcome.state
        self.trace_event("rta", outcome.describe())
        if outcome.executed is None or not outcome.executed.steps:
            return ActionResult(ok=False, action=action, error="PRECONDITION_FAILED",
                                detail="blocked by runtime assurance")
        result = self.runtime.facility_act(self, action)
        self.trace_event("action", {"origin": "HUMAN", **result.describe()})
        self._refresh_state(self.now())
        return result

    def set_takeover(self, enable: bool) -> tuple[int, int]:
        """Returns (released, dropped) counts when disabling."""
        self.trace_event("takeover", {"enabled": enable})
        if enable:
            self.takeover_enabled = True
            return 0, 0
        self.takeover_enabled = False
        released = dropped = 0
        for item in self.suspended:
            if isinstance(item, Goal) and self._still_applicable(item):
                self.queue_goal(item, origin=item.origin)
                released += 1
            else:
                dropped += 1
                if isinstance(item, Goal):
                    self._set_goal_stage(item.id, "dropped_stale")
        self.suspended = []
        return released, dropped

    def suspend_item(self, item) -> None:
        self.suspended.append(item)
        if isinstance(item, Goal):
            self.goals[item.id] = item
            self.wk.state.pursued_goals[item.id] = {
                **item.describe(), "status": "SUSPENDED", "stage": "suspended"}

    def _still_applicable(self, goal: Goal) -> bool:
        facility = self.wk.state.facility
        if facility is None or goal.service not in facility.services:
            return goal.kind == "RESERVE_CAPACITY"
        from ..simnet.model import ServiceState, route_operational, service_state
        svc = facility.services[goal.service]
        state = service_state(facility, svc)
        if goal.kind == "SWITCHOVER":
            return (not route_operational(facility, svc, svc.active)
                    and route_operational(facility, svc, svc.active.other))
        if goal.kind == "RESTORE_PROTECTION":
            return state is ServiceState.DEGRADED
        if goal.kind == "CREATE_ROUTE":
            return state is not ServiceState.NORMAL
        return True

    # ------------------------------------------------------------------
    # the intake -> route -> behave -> act loop
    # ------------------------------------------------------------------
    def run_step(self, now: int) -> None:
        self._refresh_state(now)
        self._process_mailbox(now)

        stimuli = self.inbox_stimuli
        self.inbox_stimuli = []
        rb_stimuli: list[Stimulus] = []
        pb_triggered = bool(self.queued_needs)
        for stimulus in stimuli:
            self._intake_fact(stimulus, now)
            kind = profile_kind(stimulus, self.wk)
            frequency = self.tracker.observe(kind, now)
            profile = EventProfile(kind=kind, frequency_per_hour=frequency,
                                   urgency=URGENCY_TABLE.get(kind, 0.3))
            decision = classify(profile, self.thresholds)
            self.trace_event("route", {
                "stimulus": stimulus.describe(), "kind": kind,
                "frequency_per_hour": frequency, "urgency": profile.urgency,
                "decision": decision.value})
            updated, shifts = shift_boundary(self.thresholds, self.tracker.history)
            for shift in shifts:
                self.thresholds = updated
                self.trace_event("boundary_shift", shift.describe())
            if decision is Responsibility.RB and self.config.has(Module.RB):
                rb_stimuli.append(stimulus)
            elif decision is Responsibility.PB and self.config.has(Module.PB):
                pb_triggered = True
            elif decision is not Responsibility.HUMAN and self.hai is None:
                pass  # behavior disabled here; another agent in the chain handles it
            else:
                self.pending_human.append({
                    "t": now, "stimulus": stimulus.describe(), "kind": kind})
                self.trace_event("human_queue", {"kind": kind,
                                                 "stimulus": stimulus.describe()})

        if self.config.has(Module.PB) and pb_triggered:
            self._proactive_pass(now)
        if self.config.has(Module.RB) and (rb_stimuli or self.queued_goals):
            self._reactive_pass(rb_stimuli, now)
        if self._acted:
            # re-observe after acting so world knowledge reflects the outcome
            self._acted = False
            self._refresh_state(now)
        if self.config.has(Module.AAI):
            self._aai_pass(now)

    # ------------------------------------------------------------------
    def _refresh_state(self, now: int) -> None:
        """Observe the controlled scope: the facility view and the derived
        per-service digests; the agent state follows observation."""
        facility = self.runtime.scoped_snapshot(self)
        self.wk.state.facility = facility
        from ..simnet.model import active_latency_ms, service_state
        for sid in sorted(facility.services):
            svc = facility.services[sid]
            digest = {
                "state": service_state(facility, svc).value,
                "active": svc.active.value,
                "sla_latency_ms": svc.sla_latency_ms,
                "protection_class": svc.protection_class.value,
                "priority": svc.priority,
                "region": svc.region,
                "latency_ms": active_latency_ms(facility, svc),
                "loss_ms": svc.loss_ms,
            }
            if self.wk.state.services.get(sid) != digest:
                self.wk.state.services[sid] = digest
                self.wk.state.touch(f"service:{sid}", now)

    def _intake_fact(self, stimulus: Stimulus, now: int) -> None:
        payload = stimulus.payload
        key = None
        value = None
        if stimulus.kind is StimulusKind.ALARM:
            if "port" in payload:
                key, value = f"port:{stimulus.source}/{payload['port']}", payload["state"]
            elif "link" in payload:
                key, value = f"link:{payload['link']}", payload["state"]
            elif "service" in payload:
                key = f"route:{payload['service']}:{payload.get('route')}"
                value = payload["state"]
        elif stimulus.kind is StimulusKind.KPI and "latency_ms" in payload:
            key, value = f"kpi:{payload['service']}", float(payload["latency_ms"])
        elif stimulus.kind is StimulusKind.KPI and "utilization" in payload:
            key = f"utilization:{payload.get('link', stimulus.source)}"
            value = float(payload["utilization"])
        if key is None:
            return
        entry = fact_entry(self.wk.next_entry_id("obs"), key, value, now)
        result = self.wk.update(entry)
        if not result.accepted and result.reason != "stale":
            self.trace_event("wk_reject", {"key": key, "reason": result.reason,
                                           "conflicts": result.conflicts})

    # ------------------------------------------------------------------
    def _model_from_state(self) -> PredictiveModel:
        facility = self.wk.state.facility
        if facility is None:
            facility = self.runtime.scoped_snapshot(self)
        return PredictiveModel(t=self.now(), snapshot=facility.clone())

    def _proactive_pass(self, now: int) -> None:
        model = self._model_from_state()
        outcome = proactive_behavior(self.wk.state, self.conditions,
                                     self.need_registry, self.wk, model, now)
        for need in self.queued_needs:
            self.need_registry.setdefault(need.id, need)
            outcome.needs.append(need)
            from ..proactive.choice import Infeasible, NoCatalogEntry, manage_intent
            try:
                result = manage_intent(need, self.wk)
            except NoCatalogEntry:
                outcome.escalations.append({"reason": "NO_CATALOG_ENTRY",
                                            "need": need.describe()})
                continue
            if isinstance(result, Infeasible):
                outcome.infeasible.append(result)
                outcome.escalations.append({
                    "reason": "INFEASIBLE", "need": need.describe(),
                    "failed_constraints": result.failed_constraints})
                continue
            from ..proactive.pipeline import choice_making
            goal, assessments = choice_making(result, self.wk, model)
            outcome.meta_goals.append(result)
            outcome.assessments.extend(assessments)
            if goal is None:
                outcome.escalations.append({"reason": "NO_VIABLE_GOAL",
                                            "need": need.id})
            else:
                goal.trigger_t = now
                outcome.goals.append(goal)
        self.queued_needs = []

        for need in outcome.needs:
            self.trace_event("need", need.describe())
        for meta in outcome.meta_goals:
            self.trace_event("metagoal", {
                "need": meta.need_id, "kind": meta.need_kind, "target": meta.target,
                "templates": [t.kind for t in meta.templates],
                "constraints": [c.id for c in meta.constraints]})
        for assessment in outcome.assessments:
            self.trace_event("assessment", assessment.describe())
        for goal in outcome.goals:
            self.trace_event("choice", {"goal": goal.describe()})
            if self.takeover_enabled:
                self.suspend_item(goal)
                self.trace_event("suspended", {"goal": goal.id})
            else:
                self.queue_goal(goal, origin="PB")
        for escalation in outcome.escalations:
            self.pending_human.append({"t": now, **escalation})
            self.trace_event("escalation", escalation)

    # ------------------------------------------------------------------
    def _reactive_pass(self, stimuli: list[Stimulus], now: int) -> None:
        if stimuli:
            percept = perceive(stimuli, self.wk)
            self.trace_event("percept", percept.describe())
            model = reflect(percept, self.wk)
            self.trace_event("model", model.describe())
            candidates = goals_from_model(model, self.config.layer.value, now,
                                          scope=frozenset(self.config.scope))
        else:
            model = self._model_from_state()
            candidates = []
        for goal in self.queued_goals:
            if any(goal.id == c.id for c in candidates):
                continue
            # operator-submitted goals always reach Goal Management; agent
            # goals are re-evaluated against the model state first
            if goal.origin == "HUMAN" or self._still_applicable(goal):
                candidates.append(goal)
        self.queued_goals = []

        active = manage_goals(model, candidates)
        self.trace_event("goals", {
            "candidates": [g.id for g in sorted(candidates, key=lambda g: g.id)],
            "active": [g.id for g in active]})
        for goal in active:
            self.goals[goal.id] = goal
            self.wk.state.pursued_goals[goal.id] = {
                **goal.describe(), "status": "PURSUED", "stage": "active"}
            self.wk.state.managed_goals = sorted(self.wk.state.pursued_goals)
            try:
                policy = plan(goal, model)
            except NoFeasiblePlan as exc:
                self.trace_event("plan_failed", {"goal": goal.id,
                                                 "reason": exc.reason})
                if goal.origin in ("PB", "HUMAN"):
                    escalation = {"reason": "NO_FEASIBLE_PLAN", "goal": goal.id,
                                  "detail": exc.reason}
                    self.pending_human.append({"t": now, **escalation})
                    self.trace_event("escalation", escalation)
                continue
            self.trace_event("plan", policy.describe())
            self._set_goal_stage(goal.id, "planned")
            if self.takeover_enabled:
                self.suspend_item(goal)
                self.trace_event("suspended", {"goal": goal.id,
                                               "policy": policy.describe()})
                continue
            self._gate_and_execute(policy, model, now)

    def _gate_and_execute(self, policy: ControlPolicy, model: PredictiveModel,
                          now: int) -> None:
        try:
            outcome = gate(policy, model, self.rta_state, self.config.properties)
        except FallbackInfeasible as exc:
            self.rta_state = RtaState(mode=RtaMode.FALLBACK, clean_outputs=0)
            escalation = {"reason": "FALLBACK_INFEASIBLE", "goal": exc.goal_id,
                          "violated": exc.violated}
            self.pending_human.append({"t": now, **escalation})
            self.trace_event("rta", {"verdict": "FALLBACK_INFEASIBLE",
                                     **escalation})
            return
        self.rta_state = outcome.state
        self.trace_event("rta", outcome.describe())
        if outcome.escalation is not None:
            self.pending_human.append({"t": now, **outcome.escalation})
        if outcome.executed is None:
            self._set_goal_stage(policy.goal.id, "held")
            return
        self._execute_policy(outcome.executed, now)

    def _execute_policy(self, policy: ControlPolicy, now: int) -> None:
        goal = policy.goal
        dispatch = (self.config.layer is Layer.NMS and self.config.has(Module.AAI)
                    and self.config.phase is Phase.MULTI)
        if not policy.steps:
            self._set_goal_stage(goal.id, "executed")
            self._deadline_record(goal, now)
            return
        if dispatch:
            dispatched = 0
            for index, step in enumerate(policy.steps):
                target_agent = self.runtime.responsible_agent(self, step.action)
                if target_agent is None or target_agent == self.id:
                    self._apply_step(policy, step, now,
                                     final=index == len(policy.steps) - 1)
                    continue
                payload = {
                    "action": step.action.describe(), "guard": step.guard,
                    "goal": goal.id, "goal_kind": goal.kind,
                    "trigger_t": goal.trigger_t, "budget_ms": goal.budget_ms,
                    "final": index == len(policy.steps) - 1}
                message = self.runtime.bus.send(self.id, target_agent,
                                                MessageKind.ACTION_DIRECTIVE,
                                                payload, now)
                self.trace_event("message", message.describe())
                dispatched += 1
            self._set_goal_stage(goal.id, "dispatched" if dispatched else "executed")
            return
        for index, step in enumerate(policy.steps):
            self._apply_step(policy, step, now, final=index == len(policy.steps) - 1)
        self._set_goal_stage(goal.id, "executed")

    def _apply_step(self, policy: ControlPolicy, step, now: int, final: bool) -> None:
        from ..reactive.planner import _guard_holds
        facility = self.runtime.sim.state
        if not _guard_holds(facility, step):
            self.trace_event("action", {"skipped": True, "guard": step.guard,
                                        "action": step.action.describe()})
            return
        result = self.runtime.facility_act(self, step.action)
        self._acted = True
        self.trace_event("action", {"origin": policy.goal.origin,
                                    "goal": policy.goal.id, **result.describe()})
        if final:
            self._deadline_record(policy.goal, now)

    def _deadline_record(self, goal: Goal, now: int) -> None:
        elapsed = now - goal.trigger_t
        met = elapsed <= goal.budget_ms
        self.trace_event("deadline", {"goal": goal.id, "budget_ms": goal.budget_ms,
                                      "elapsed_ms": elapsed, "met": met})
        if not met:
            self.trace_event("deadline_miss", {"goal": goal.id,
                                               "elapsed_ms": elapsed})

    def execute_directive(self, message: AgentMessage, now: int) -> None:
        payload = message.payload
        action = Action.from_dict(payload["action"])
        from ..reactive.planner import PolicyStep, _guard_holds
        step = PolicyStep(guard=payload.get("guard", "always"), action=action)
        if not _guard_holds(self.runtime.sim.state, step):
            self.trace_event("action", {"skipped": True, "directive": True,
                                        "action": action.describe()})
            return
        result = self.runtime.facility_act(self, action)
        self._acted = True
        self.trace_event("action", {"origin": "DIRECTIVE", "goal": payload["goal"],
                                    **result.describe()})
        if payload.get("final"):
            elapsed = now - payload["trigger_t"]
            met = elapsed <= payload["budget_ms"]
            self.trace_event("deadline", {"goal": payload["goal"],
                                          "budget_ms": payload["budget_ms"],
                                          "elapsed_ms": elapsed, "met": met})
            if not met:
                self.trace_event("deadline_miss", {"goal": payload["goal"],
                                                   "elapsed_ms": elapsed})

    def _set_goal_stage(self, goal_id: str, stage: str) -> None:
        if goal_id in self.wk.state.pursued_goals:
            self.wk.state.pursued_goals[goal_id]["stage"] = stage

    # ------------------------------------------------------------------
    def _process_mailbox(self, now: int) -> None:
        messages = self.mailbox
        self.mailbox = []
        for message in messages:
            if message.kind is MessageKind.STATE_REPORT:
                self._pending_reports.append(message)
            elif message.kind is MessageKind.GOAL_ADVERT:
                self.advertised[message.sender] = message.payload.get("goals", [])
            elif message.kind is MessageKind.COORDINATION_VERDICT:
                self.trace_event("coordination", {"from": message.sender,
                                                  **message.payload})
                yielded = message.payload.get("yielded")
                if yielded:
                    for advert in self.advertised.get(message.sender, []):
                        if advert.get("id") == yielded:
                            advert["status"] = "YIELDED"
            elif message.kind is MessageKind.ACTION_DIRECTIVE:
                self.execute_directive(message, now)

    def _aai_pass(self, now: int) -> None:
        peers = self.runtime.peers_of(self)
        reports = self._pending_reports
        self._pending_reports = []
        own_goals = [self.goals[gid] for gid, digest in
                     sorted(self.wk.state.pursued_goals.items())
                     if digest.get("status") == "PURSUED" and gid in self.goals]
        shared = self.runtime.shared_resources
        exchange = aai_exchange(self.id, self.wk, reports, own_goals,
                                self.advertised if self.config.layer is Layer.NMS
                                else {}, shared, now)
        if exchange.merge_summary:
            self.trace_event("global_awareness", exchange.merge_summary)
        if not peers:
            return
        digest = export_state_digest(self.wk)
        digest_key = repr(sorted(digest.items(), key=lambda kv: kv[0]))
        if digest_key != self._last_shared_digest:
            self._last_shared_digest = digest_key
            for message in share_state(self.id, self.wk, peers, self.runtime.bus, now):
                self.trace_event("message", message.describe())
        if self.config.layer is not Layer.NMS:
            return
        advert_payload = {"goals": [
            dict(self.wk.state.pursued_goals[g.id]) for g in own_goals]}
        advert_key = repr(advert_payload)
        if advert_key != self._last_advert and shared:
            self._last_advert = advert_key
            for peer in peers:
                message = self.runtime.bus.send(self.id, peer, MessageKind.GOAL_ADVERT,
                                                advert_payload, now)
                self.trace_event("message", message.describe())
        for verdict in exchange.verdicts:
            self.trace_event("coordination", verdict.describe())
        surviving = {g.id for g in exchange.updated_goals}
        for goal in own_goals:
            if goal.id not in surviving:
                self.wk.state.pursued_goals[goal.id]["status"] = "YIELDED"
                self.wk.state.pursued_goals[goal.id]["stage"] = "yielded"
                self.queued_goals = [g for g in self.queued_goals
                                     if g.id != goal.id]
                peer = next((v.agent_b for v in exchange.verdicts
                             if v.goal_a == goal.id), None)
                if peer:
                    message = self.runtime.bus.send(
                        self.id, peer, MessageKind.COORDINATION_VERDICT,
                        {"yielded": goal.id}, now)
                    self.trace_event("message", message.describe())
        for goal in exchange.updated_goals:
            if goal.id in exchange.raised:
                self.wk.state.pursued_goals[goal.id]["weight"] = goal.weight


def _human_step(action: Action):
    from ..reactive.planner import PolicyStep
    return PolicyStep(guard="always", action=action)
