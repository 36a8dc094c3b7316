"""Reactive pipeline: perception, reflection, goal management, planning."""

from __future__ import annotations

import random
from itertools import combinations

import pytest

from autonet.knowledge import QueryKind, build_world_knowledge, load_seed
from autonet.reactive import (
    DegradationClass,
    Goal,
    NoFeasiblePlan,
    PredictiveModel,
    manage_goals,
    perceive,
    plan,
    reflect,
    simulate_policy,
)
from autonet.reactive.planner import find_routes
from autonet.runner import bundled_path
from autonet.simnet import (
    Action,
    ActionKind,
    PortState,
    RouteRole,
    ServiceState,
    Stimulus,
    StimulusKind,
    apply_action,
    build_route,
    load_topology,
    route_latency_ms,
    routes_node_disjoint,
    service_state,
)
from conftest import best_paths_oracle, topology_doc


def make_wk(topology="topology_switchover.json", agent="nms-test"):
    wk = build_world_knowledge(agent, load_seed(bundled_path("knowledge_seed.json")))
    wk.state.facility = load_topology(topology_doc(topology))
    for sid, svc in wk.state.facility.services.items():
        wk.state.services[sid] = {
            "state": service_state(wk.state.facility, svc).value,
            "active": svc.active.value, "sla_latency_ms": svc.sla_latency_ms,
            "protection_class": svc.protection_class.value,
            "priority": svc.priority, "region": svc.region}
    return wk


def fail_port(wk, ne="NE3", port="p-L36"):
    wk.state.facility.elements[ne].ports[port] = PortState.DOWN
    svc = wk.state.facility.services["L1"]
    wk.state.services["L1"]["state"] = service_state(wk.state.facility, svc).value


class TestPerceive:
    def test_port_alarm_classifies_route_failure(self):
        wk = make_wk()
        fail_port(wk)
        stimulus = Stimulus(t=1000, source="NE3", kind=StimulusKind.ALARM,
                            payload={"port": "p-L36", "state": "DOWN"})
        percept = perceive([stimulus], wk)
        assert percept.degradation is DegradationClass.DEGRADED
        failed = [f for f in percept.findings if f.finding == "route_failed"]
        assert failed and failed[0].service == "L1"
        assert failed[0].role == "WORKING"
        assert failed[0].enriched

    def test_kpi_within_sla_degradation_none(self):
        wk = make_wk("topology_drift.json")
        stimulus = Stimulus(t=0, source="NE9", kind=StimulusKind.KPI,
                            payload={"service": "L1", "latency_ms": 6.0})
        percept = perceive([stimulus], wk)
        assert percept.degradation is DegradationClass.NONE

    def test_kpi_margin_against_sla(self):
        wk = make_wk("topology_drift.json")
        stimulus = Stimulus(t=2000, source="NE4", kind=StimulusKind.KPI,
                            payload={"service": "L1", "latency_ms": 9.5,
                                     "route": ["NE1", "NE4", "NE5", "NE9"]})
        percept = perceive([stimulus], wk)
        kpi = [f for f in percept.findings if f.finding == "kpi"][0]
        assert kpi.latency_ms == 9.5
        assert kpi.margin_ms == pytest.approx(0.5)

    def test_unknown_kind_passes_through_unclassified(self):
        wk = make_wk()
        stimulus = Stimulus(t=1, source="ext", kind=StimulusKind.EXTERNAL,
                            payload={"event": "heatwave"})
        percept = perceive([stimulus], wk)
        assert percept.findings[0].finding == "UNCLASSIFIED"

    def test_empty_stimuli_rejected(self):
        with pytest.raises(ValueError):
            perceive([], make_wk())


class TestReflect:
    def test_degraded_service_enables_repair_actions(self):
        wk = make_wk()
        fail_port(wk)
        stimulus = Stimulus(t=1000, source="NE3", kind=StimulusKind.ALARM,
                            payload={"port": "p-L36", "state": "DOWN"})
        model = reflect(perceive([stimulus], wk), wk)
        kinds = {a.kind for a in model.enabled_actions}
        assert {"DELETE_XC", "SET_ROUTE"} <= kinds
        assert not model.low_confidence
        assert any(e["event"] == "remaining_route_failure"
                   for e in model.anticipated)

    def test_no_findings_no_repair_actions(self):
        wk = make_wk("topology_drift.json")
        stimulus = Stimulus(t=0, source="NE9", kind=StimulusKind.KPI,
                            payload={"service": "L1", "latency_ms": 6.0})
        model = reflect(perceive([stimulus], wk), wk)
        assert model.enabled_actions == []

    def test_applying_set_route_effects_keeps_invariants(self):
        wk = make_wk("topology_drift.json")
        model = PredictiveModel(t=0, snapshot=wk.state.facility.clone())
        result = apply_action(model.snapshot, Action(
            kind=ActionKind.SET_ROUTE, service="L1", role=RouteRole.WORKING,
            nodes=("NE1", "NE2", "NE5", "NE9")))
        assert result.ok
        svc = model.snapshot.services["L1"]
        assert routes_node_disjoint(svc.working, svc.protection)
        assert service_state(model.snapshot, svc) is ServiceState.NORMAL

    def test_no_context_flags_low_confidence(self):
        wk = make_wk()
        wk.action_specs = []
        stimulus = Stimulus(t=1, source="ext", kind=StimulusKind.EXTERNAL,
                            payload={})
        percept = perceive([stimulus], wk)
        percept.findings = []
        model = reflect(percept, wk)
        assert model.low_confidence


def brute_force_best(goals: list[Goal]) -> tuple[float, tuple[str, ...]]:
    """Independent oracle: enumerate every subset."""
    best = (0.0, ())
    for r in range(len(goals) + 1):
        for subset in combinations(goals, r):
            if any(set(a.claims) & set(b.claims)
                   for a, b in combinations(subset, 2)):
                continue
            weight = sum(g.weight for g in subset)
            ids = tuple(sorted(g.id for g in subset))
            if weight > best[0] or (weight == best[0] and ids < best[1]):
                best = (weight, ids)
    return best


class TestManageGoals:
    def test_heavier_goal_wins_shared_claim(self):
        g1 = Goal(id="a", kind="X", weight=3.0, claims={"link:L12": 1.0})
        g2 = Goal(id="b", kind="X", weight=5.0, claims={"link:L12": 1.0})
        active = manage_goals(None, [g1, g2])
        assert [g.id for g in active] == ["b"]

    def test_no_conflicts_keeps_all(self):
        goals = [Goal(id=f"g{i}", kind="X", weight=1.0 + i,
                      claims={f"r{i}": 1.0}) for i in range(5)]
        assert len(manage_goals(None, goals)) == 5

    def test_empty_input_empty_output(self):
        assert manage_goals(None, []) == []

    def test_matches_brute_force_on_random_instances(self):
        rng = random.Random(42)
        for _ in range(60):
            n = rng.randrange(1, 11)
            goals = [Goal(id=f"g{i:02d}", kind="X",
                          weight=float(rng.randrange(1, 20)),
                          claims={f"r{rng.randrange(6)}": 1.0
                                  for _ in range(rng.randrange(1, 3))})
                     for i in range(n)]
            selected = manage_goals(None, goals)
            expected_weight, expected_ids = brute_force_best(goals)
            assert sum(g.weight for g in selected) == expected_weight
            assert tuple(sorted(g.id for g in selected)) == expected_ids


class TestPlan:
    def _degraded_model(self):
        wk = make_wk()
        state = wk.state.facility.clone()
        state.elements["NE3"].ports["p-L36"] = PortState.DOWN
        state.services["L1"].active = RouteRole.PROTECTION
        return PredictiveModel(t=1000, snapshot=state)

    def test_restore_protection_picks_disjoint_minimum(self):
        model = self._degraded_model()
        goal = Goal(id="restore_protection:L1", kind="RESTORE_PROTECTION",
                    service="L1", weight=8.0)
        policy = plan(goal, model)
        kinds = [s.action.kind for s in policy.steps]
        assert kinds[:-1] == [ActionKind.DELETE_XC] * (len(kinds) - 1)
        assert kinds[-1] is ActionKind.SET_ROUTE
        # oracle: exhaustive enumeration, disjoint from surviving 1-4-5-9
        oracle = best_paths_oracle(model.snapshot, "NE1", "NE9",
                                   avoid={"NE4", "NE5"}, max_latency=10.0)
        assert tuple(policy.meta["route"]) == oracle[0][1]
        assert policy.meta["latency_ms"] == oracle[0][0] == 9.0
        final, ok = simulate_policy(policy, model.snapshot)
        assert ok
        svc = final.services["L1"]
        assert routes_node_disjoint(svc.working, svc.protection)

    def test_reduce_latency_establishes_1_2_5_9(self):
        wk = make_wk("topology_drift.json")
        state = wk.state.facility.clone()
        state.elements["NE4"].drift_ms = 3.5
        model = PredictiveModel(t=2000, snapshot=state)
        goal = Goal(id="reduce_latency:L1", kind="REDUCE_LATENCY", service="L1",
                    weight=6.0, params={"mode": "reroute"})
        policy = plan(goal, model)
        assert policy.meta["route"] == ["NE1", "NE2", "NE5", "NE9"]
        assert policy.meta["latency_ms"] == 6.0
        final, ok = simulate_policy(policy, model.snapshot)
        assert ok
        assert final.services["L1"].working.nodes == ("NE1", "NE2", "NE5", "NE9")

    def test_partitioned_topology_has_no_plan(self):
        wk = make_wk()
        state = wk.state.facility.clone()
        for ne in state.elements.values():
            for port in ne.ports:
                ne.ports[port] = PortState.DOWN
        model = PredictiveModel(t=0, snapshot=state)
        goal = Goal(id="create_route:L1", kind="CREATE_ROUTE", service="L1",
                    weight=9.0)
        with pytest.raises(NoFeasiblePlan):
            plan(goal, model)

    def test_switchover_plan_is_sound(self):
        model = self._degraded_model()
        model.snapshot.services["L1"].active = RouteRole.WORKING
        goal = Goal(id="switchover:L1", kind="SWITCHOVER", service="L1",
                    weight=100.0, deadline_class="MS")
        policy = plan(goal, model)
        final, ok = simulate_policy(policy, model.snapshot)
        assert ok
        assert final.services["L1"].active is RouteRole.PROTECTION


class TestPathOptimality:
    def test_chosen_route_matches_exhaustive_minimum(self):
        rng = random.Random(5)
        for trial in range(25):
            n = rng.randrange(5, 13)
            nodes = [f"N{i}" for i in range(n)]
            links = []
            # random connected-ish graph: a chain plus extra chords
            for i in range(n - 1):
                links.append({"id": f"C{i}", "a": nodes[i], "b": nodes[i + 1],
                              "latency_ms": rng.randrange(1, 9) * 1.0,
                              "capacity": 10.0})
            for j in range(n // 2):
                a, b = rng.sample(nodes, 2)
                if any({l["a"], l["b"]} == {a, b} for l in links):
                    continue
                links.append({"id": f"X{j}", "a": a, "b": b,
                              "latency_ms": rng.randrange(1, 9) * 1.0,
                              "capacity": 10.0})
            doc = {"format_version": 1, "nodes": nodes, "links": links,
                   "services": []}
            state = load_topology(doc)
            found = find_routes(state, nodes[0], nodes[-1], k=1)
            oracle = best_paths_oracle(state, nodes[0], nodes[-1])
            assert found, f"trial {trial}: no route found"
            latency = route_latency_ms(state, found[0])
            assert latency == oracle[0][0]


class TestCapacityFiltering:
    def test_full_link_excluded_from_search(self):
        wk = make_wk("topology_drift.json")
        state = wk.state.facility.clone()
        state.links["L25"].utilization = state.links["L25"].capacity
        routes = find_routes(state, "NE1", "NE9", k=8)
        assert all("L25" not in r.links for r in routes)

    def test_create_route_plan_is_sound(self):
        wk = make_wk("topology_drift.json")
        state = wk.state.facility.clone()
        # both routes of L1 severed: working over NE4 and protection over NE3
        state.elements["NE4"].ports["p-L45"] = PortState.DOWN
        state.elements["NE3"].ports["p-L36"] = PortState.DOWN
        model = PredictiveModel(t=0, snapshot=state)
        goal = Goal(id="create_route:L1", kind="CREATE_ROUTE", service="L1",
                    weight=9.0, params={"mode": "restore"})
        policy = plan(goal, model)
        final, ok = simulate_policy(policy, model.snapshot)
        assert ok
        assert service_state(final, final.services["L1"]).value != "INTERRUPTED"


class TestExactSelectionLimit:
    def test_fifteen_goals_still_exact(self):
        rng = random.Random(77)
        goals = [Goal(id=f"g{i:02d}", kind="X",
                      weight=float(rng.randrange(1, 30)),
                      claims={f"r{rng.randrange(5)}": 1.0})
                 for i in range(15)]
        selected = manage_goals(None, goals)
        weight, ids = brute_force_best(goals)
        assert sum(g.weight for g in selected) == weight
        assert tuple(sorted(g.id for g in selected)) == ids

    def test_beyond_limit_greedy_is_valid_and_deterministic(self):
        rng = random.Random(78)
        goals = [Goal(id=f"g{i:02d}", kind="X",
                      weight=float(rng.randrange(1, 30)),
                      claims={f"r{rng.randrange(4)}": 1.0})
                 for i in range(20)]
        first = manage_goals(None, goals)
        second = manage_goals(None, list(reversed(goals)))
        assert [g.id for g in first] == [g.id for g in second]
        from itertools import combinations as combos
        assert not any(a.conflicts_with(b) for a, b in combos(first, 2))
