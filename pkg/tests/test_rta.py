"""Runtime assurance: monitor, gate, trusted fallback."""

from __future__ import annotations

import hashlib
import json
import random

import pytest

from autonet.knowledge import build_world_knowledge, load_seed
from autonet.reactive import Goal, PredictiveModel, plan
from autonet.reactive.planner import ControlPolicy, PolicyStep
from autonet.rta import (
    DEFAULT_PROPERTIES,
    FallbackInfeasible,
    OutOfRepertoire,
    RECOVERY_CLEAN_OUTPUTS,
    RtaMode,
    RtaState,
    gate,
    monitor,
    trusted_plan,
)
from autonet.runner import bundled_path
from autonet.simnet import (
    Action,
    ActionKind,
    PortState,
    RouteRole,
    load_topology,
    port_id,
)
from conftest import topology_doc


def degraded_model() -> PredictiveModel:
    """L1 after the working-route failure: only the protection route carries."""
    state = load_topology(topology_doc("topology_switchover.json"))
    state.elements["NE3"].ports["p-L36"] = PortState.DOWN
    state.services["L1"].active = RouteRole.PROTECTION
    return PredictiveModel(t=1000, snapshot=state)


def healthy_model() -> PredictiveModel:
    return PredictiveModel(
        t=0, snapshot=load_topology(topology_doc("topology_switchover.json")))


def delete_last_route_policy(model: PredictiveModel,
                             extra_steps: list[PolicyStep] | None = None,
                             shuffle_seed: int | None = None) -> ControlPolicy:
    """Adversarial plan: tear down the cross-connects of L1's only
    operational route (the protection path over NE4-NE5)."""
    svc = model.snapshot.services["L1"]
    route = svc.protection
    steps = []
    for idx, ne_id in enumerate(route.nodes[1:-1], start=1):
        steps.append(PolicyStep(guard="always", action=Action(
            kind=ActionKind.DELETE_XC, service="L1", ne=ne_id,
            in_port=port_id(route.links[idx - 1]),
            out_port=port_id(route.links[idx]))))
    steps.extend(extra_steps or [])
    if shuffle_seed is not None:
        random.Random(shuffle_seed).shuffle(steps)
    goal = Goal(id="restore_protection:L1", kind="RESTORE_PROTECTION",
                service="L1", weight=8.0)
    return ControlPolicy(goal=goal, steps=steps, success="noop")


class TestMonitor:
    def test_last_route_deletion_is_violation(self):
        model = degraded_model()
        violated = monitor(delete_last_route_policy(model), model)
        assert "no-last-route-delete" in violated

    def test_empty_plan_is_vacuously_ok(self):
        policy = ControlPolicy(goal=Goal(id="g", kind="HOLD", service="L1",
                                         weight=1.0), steps=[], success="noop")
        assert monitor(policy, degraded_model()) == []

    def test_compliant_reroute_is_ok(self):
        model = degraded_model()
        goal = Goal(id="restore_protection:L1", kind="RESTORE_PROTECTION",
                    service="L1", weight=8.0)
        policy = plan(goal, model)
        assert monitor(policy, model) == []
        assert policy.meta["latency_ms"] <= 10.0

    def test_post_plan_latency_over_sla_is_violation(self):
        model = healthy_model()
        model.snapshot.links["L78"].drift_ms = 10.0  # 1-7-8-9 now 19 ms
        policy = ControlPolicy(
            goal=Goal(id="g", kind="REDUCE_LATENCY", service="L1", weight=1.0),
            steps=[PolicyStep(guard="always", action=Action(
                kind=ActionKind.SET_ROUTE, service="L1", role=RouteRole.PROTECTION,
                nodes=("NE1", "NE7", "NE8", "NE9")))],
            success="noop")
        model.snapshot.services["L1"].active = RouteRole.PROTECTION
        violated = monitor(policy, model)
        assert "post-plan-latency-sla" in violated

    def test_monitor_is_pure(self):
        model = degraded_model()
        def digest(m):
            blob = json.dumps({
                ne: sorted(xc.key() for xc in el.cross_connects)
                for ne, el in sorted(m.snapshot.elements.items())}, sort_keys=True)
            return hashlib.sha256(blob.encode()).hexdigest()
        before = digest(model)
        monitor(delete_last_route_policy(model), model)
        assert digest(model) == before


class TestTrustedPlan:
    def test_restore_protection_maps_to_switchover_only(self):
        model = degraded_model()
        model.snapshot.services["L1"].active = RouteRole.WORKING  # still on dead route
        goal = Goal(id="restore_protection:L1", kind="RESTORE_PROTECTION",
                    service="L1", weight=8.0)
        policy = trusted_plan(goal, model)
        assert [s.action.kind for s in policy.steps] == [ActionKind.SWITCHOVER]
        assert monitor(policy, model) == []

    def test_reduce_latency_outside_repertoire(self):
        goal = Goal(id="reduce_latency:L1", kind="REDUCE_LATENCY", service="L1",
                    weight=6.0)
        with pytest.raises(OutOfRepertoire):
            trusted_plan(goal, degraded_model())

    def test_empty_model_outside_repertoire(self):
        goal = Goal(id="switchover:L1", kind="SWITCHOVER", service="L1",
                    weight=1.0)
        empty = PredictiveModel(t=0, snapshot=load_topology(
            {"format_version": 1, "nodes": ["NE1"], "links": [], "services": []}))
        with pytest.raises(OutOfRepertoire):
            trusted_plan(goal, empty)


class TestGate:
    def test_adversarial_deletion_blocked_and_fallback_runs(self):
        model = degraded_model()
        outcome = gate(delete_last_route_policy(model), model, RtaState())
        assert outcome.verdict == "VIOLATION"
        assert outcome.state.mode is RtaMode.FALLBACK
        assert outcome.substituted
        assert outcome.executed is not None
        assert outcome.executed.meta.get("trusted")
        # the substituted plan never removes the carrying route
        assert monitor(outcome.executed, model) == []

    def test_recovery_after_exactly_three_clean_outputs(self):
        model = degraded_model()
        goal = Goal(id="restore_protection:L1", kind="RESTORE_PROTECTION",
                    service="L1", weight=8.0)
        clean = plan(goal, model)
        state = gate(delete_last_route_policy(model), model, RtaState()).state
        assert state.mode is RtaMode.FALLBACK
        modes = []
        for _ in range(RECOVERY_CLEAN_OUTPUTS):
            outcome = gate(clean, model, state)
            state = outcome.state
            modes.append(state.mode)
        assert modes == [RtaMode.FALLBACK, RtaMode.FALLBACK, RtaMode.ACTIVE_AI]

    def test_clean_plan_passes_through_in_active_mode(self):
        model = degraded_model()
        goal = Goal(id="restore_protection:L1", kind="RESTORE_PROTECTION",
                    service="L1", weight=8.0)
        policy = plan(goal, model)
        outcome = gate(policy, model, RtaState())
        assert outcome.executed is policy
        assert not outcome.substituted
        assert outcome.state.clean_outputs == 1

    def test_trusted_plan_violation_is_fallback_infeasible(self):
        model = degraded_model()
        # poison the standby path so even a switchover would land on a route
        # that breaches the SLA
        model.snapshot.services["L1"].active = RouteRole.WORKING
        model.snapshot.links["L45"].drift_ms = 10.0
        with pytest.raises(FallbackInfeasible):
            gate(delete_last_route_policy(model), model, RtaState())

    def test_out_of_repertoire_fallback_holds_and_escalates(self):
        model = degraded_model()
        bad = delete_last_route_policy(model)
        bad.goal = Goal(id="reduce_latency:L1", kind="REDUCE_LATENCY",
                        service="L1", weight=6.0)
        outcome = gate(bad, model, RtaState())
        assert outcome.verdict == "VIOLATION"
        assert outcome.executed is None
        assert outcome.escalation and outcome.escalation["reason"] == "OUT_OF_REPERTOIRE"


class TestFuzzedSoundness:
    def test_every_violating_variant_is_blocked(self):
        model = degraded_model()
        rng = random.Random(99)
        blocked = 0
        for i in range(100):
            extras = []
            if rng.random() < 0.5:
                extras.append(PolicyStep(guard="always", action=Action(
                    kind=ActionKind.CREATE_XC, service="L1", ne="NE2",
                    in_port="p-L12", out_port="p-L25")))
            policy = delete_last_route_policy(
                model, extra_steps=extras, shuffle_seed=i)
            outcome = gate(policy, model, RtaState())
            if outcome.verdict == "VIOLATION" and not (
                    outcome.executed and not outcome.executed.meta.get("trusted")):
                blocked += 1
        assert blocked == 100
