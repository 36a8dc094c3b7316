"""Acceptance criteria, one test per criterion with a printed verdict line.

Run with `pytest tests/test_acceptance.py -s` to see one PASS/FAIL line per
criterion.
"""

from __future__ import annotations

import json
import random
import time
from itertools import combinations

import pytest

from autonet.contracts import REGISTRY
from autonet.knowledge import WorldKnowledge, build_world_knowledge, fact_entry, load_seed
from autonet.reactive import Goal, PredictiveModel, manage_goals, plan
from autonet.reactive.planner import simulate_policy
from autonet.routing import EventProfile, Responsibility, RoutingThresholds, classify
from autonet.rta import RECOVERY_CLEAN_OUTPUTS, RtaMode, RtaState, gate, monitor
from autonet.runner import RunSpec, bundled_path, run_scenario
from autonet.simnet import (
    PortState,
    RouteRole,
    ServiceState,
    load_topology,
    service_state,
)
from conftest import best_paths_oracle, topology_doc
from test_reactive import brute_force_best
from test_rta import degraded_model, delete_last_route_policy


def verdict(criterion: int, ok: bool, detail: str) -> None:
    print(f"ACCEPTANCE {criterion}: {'PASS' if ok else 'FAIL'} - {detail}")
    assert ok, f"criterion {criterion}: {detail}"


class TestCriterion1Switchover:
    def test_switchover_scenario(self):
        started = time.monotonic()
        report, runtime = run_scenario(RunSpec.resolve("switchover",
                                                       phase="single", seed=7))
        wall = time.monotonic() - started
        svc = report.services["L1"]

        fail_t = next(r.t for r in runtime.trace.records
                      if r.stage == "stimulus"
                      and r.payload["payload"].get("port") == "p-L36")
        switch_t = next(r.t for r in runtime.trace.records
                        if r.stage == "facility"
                        and r.payload["service"] == "L1"
                        and r.payload["active"] == "PROTECTION")
        restore = next(r for r in runtime.trace.records if r.stage == "deadline"
                       and r.payload["goal"] == "restore_protection:L1")

        # oracle: exhaustive simple paths on the post-failure facility,
        # node-disjoint from the surviving route, within the SLA
        state = load_topology(topology_doc("topology_switchover.json"))
        state.elements["NE3"].ports["p-L36"] = PortState.DOWN
        oracle = best_paths_oracle(state, "NE1", "NE9", avoid={"NE4", "NE5"},
                                   max_latency=10.0)

        ok = (switch_t - fail_t <= 50
              and svc.interrupted_ms == 0 and svc.loss_ms == 0
              and restore.payload["met"]
              and restore.payload["elapsed_ms"] <= 5000
              and svc.final_state == "NORMAL"
              and svc.final_working is not None
              and svc.final_protection is not None
              and not (set(svc.final_working[1:-1])
                       & set(svc.final_protection[1:-1]))
              and tuple(svc.final_working) == oracle[0][1]
              and wall < 5.0)
        verdict(1, ok,
                f"switchover in {switch_t - fail_t} sim-ms, loss {svc.loss_ms}, "
                f"new route {'-'.join(svc.final_working)} = oracle minimum "
                f"{oracle[0][0]} ms, final {svc.final_state}, wall {wall:.2f}s")


class TestCriterion2ProactiveLatency:
    def test_latency_drift_scenario(self):
        report, runtime = run_scenario(RunSpec.resolve("latency_drift",
                                                       phase="single", seed=7))
        svc = report.services["L1"]
        needs = [r for r in runtime.trace.records if r.stage == "need"
                 and r.payload["kind"] == "LATENCY_BREACH_RISK"]
        need_before_breach = any(
            r.payload["details"]["latency_ms"] < 10.0
            and not r.payload["details"].get("breached", False) for r in needs)
        choices = [r for r in runtime.trace.records if r.stage == "choice"]
        assessments = [r for r in runtime.trace.records if r.stage == "assessment"]
        upgrade_assessed = any(
            r.payload["goal"]["kind"] == "UPGRADE_HARDWARE" for r in assessments)
        reroute_chosen = any(
            r.payload["goal"]["kind"] == "REDUCE_LATENCY" for r in choices)
        reduction = svc.max_latency_ms - svc.final_latency_ms

        ok = (need_before_breach and upgrade_assessed and reroute_chosen
              and svc.final_working == ["NE1", "NE2", "NE5", "NE9"]
              and svc.final_latency_ms == 6.0
              and svc.max_latency_ms == 9.5
              and reduction == 3.5 and reduction > 3.0)
        verdict(2, ok,
                f"need before breach={need_before_breach}, reroute over upgrade="
                f"{reroute_chosen}, final route "
                f"{'-'.join(svc.final_working or [])} at {svc.final_latency_ms} ms "
                f"(reduction {reduction} ms)")


class TestCriterion3GoalOptimality:
    def test_200_random_instances_match_brute_force(self):
        rng = random.Random(2024)
        exact = 0
        for _ in range(200):
            n = rng.randrange(1, 13)
            goals = [
                Goal(id=f"g{i:02d}", kind="X",
                     weight=float(rng.randrange(1, 50)),
                     claims={f"r{rng.randrange(8)}": 1.0
                             for _ in range(rng.randrange(1, 4))})
                for i in range(n)]
            selected = manage_goals(None, goals)
            weight, ids = brute_force_best(goals)
            if sum(g.weight for g in selected) == weight and \
                    tuple(sorted(g.id for g in selected)) == ids:
                exact += 1
        verdict(3, exact == 200, f"{exact}/200 instances equal brute-force optimum")


class TestCriterion4TaskRouter:
    def test_quadrants_shift_and_per_domain(self):
        thresholds = RoutingThresholds()
        table = json.loads(bundled_path("event_table.json").read_text())["events"]
        matches = sum(
            classify(EventProfile(row["kind"], row["frequency_per_hour"],
                                  row["urgency"]), thresholds).value
            == row["expected"] for row in table)

        report, _ = run_scenario(RunSpec.resolve("aging_network",
                                                 phase="single", seed=7))
        shift_logged = any(s["direction"] == "PB->RB"
                           and s["kind"] == "service_restoration"
                           for s in report.boundary_shifts)

        domain_a = RoutingThresholds(frequency_cut_per_hour=30.0)
        domain_b = RoutingThresholds(frequency_cut_per_hour=5.0)
        profile = EventProfile("service_restoration", 10.0, 0.5)
        per_domain = (classify(profile, domain_a) is Responsibility.PB
                      and classify(profile, domain_b) is Responsibility.RB)

        ok = matches == len(table) == 12 and shift_logged and per_domain
        verdict(4, ok,
                f"{matches}/12 table rows exact, aging shift logged={shift_logged}, "
                f"per-domain split={per_domain}")


class TestCriterion5Rta:
    def test_adversarial_blocking_continuity_recovery(self):
        model = degraded_model()
        rng = random.Random(99)
        blocked = 0
        for i in range(100):
            policy = delete_last_route_policy(model, shuffle_seed=rng.randrange(10**6))
            outcome = gate(policy, model, RtaState())
            executed_untrusted = (outcome.executed is not None
                                  and not outcome.executed.meta.get("trusted"))
            if outcome.verdict == "VIOLATION" and not executed_untrusted:
                blocked += 1

        # continuity across an AI -> fallback -> AI cycle on a live facility
        facility = load_topology(topology_doc("topology_switchover.json"))
        facility.elements["NE3"].ports["p-L36"] = PortState.DOWN
        never_interrupted = True
        state = RtaState()
        goal = Goal(id="restore_protection:L1", kind="RESTORE_PROTECTION",
                    service="L1", weight=8.0)
        live = PredictiveModel(t=0, snapshot=facility)
        outcome = gate(delete_last_route_policy(live), live, state)
        state = outcome.state
        if outcome.executed is not None:
            facility, _ = simulate_policy(outcome.executed, facility)
        never_interrupted &= service_state(
            facility, facility.services["L1"]) is not ServiceState.INTERRUPTED
        modes = [state.mode]
        for _ in range(RECOVERY_CLEAN_OUTPUTS):
            live = PredictiveModel(t=0, snapshot=facility)
            clean = plan(goal, live)
            outcome = gate(clean, live, state)
            state = outcome.state
            if outcome.executed is not None:
                facility, _ = simulate_policy(outcome.executed, facility)
            never_interrupted &= service_state(
                facility, facility.services["L1"]) is not ServiceState.INTERRUPTED
            modes.append(state.mode)

        recovered_exactly_third = (
            modes[0] is RtaMode.FALLBACK and modes[1] is RtaMode.FALLBACK
            and modes[2] is RtaMode.FALLBACK and modes[3] is RtaMode.ACTIVE_AI)
        ok = blocked == 100 and never_interrupted and recovered_exactly_third
        verdict(5, ok,
                f"{blocked}/100 adversarial variants blocked, continuity="
                f"{never_interrupted}, mode sequence {[m.value for m in modes]}")


class TestCriterion6WorldKnowledge:
    def test_contracts_rejections_and_fuzz(self):
        from autonet.knowledge import QueryKind
        from autonet.proactive.purpose import Need
        from test_knowledge import degraded_percept

        seed = load_seed(bundled_path("knowledge_seed.json"))
        wk = build_world_knowledge("acc", seed)
        wk.state.facility = load_topology(topology_doc("topology_switchover.json"))
        wk.state.services["L1"] = {"state": "DEGRADED", "active": "WORKING",
                                   "sla_latency_ms": 10.0,
                                   "protection_class": "1+1",
                                   "priority": "premium", "region": "A"}

        categories_ok = True
        result = wk.query(QueryKind.PERCEPT_TO_CONTEXT, degraded_percept())
        categories_ok &= result.context is not None and bool(result.context.actions)
        need = Need(id="n", kind="LATENCY_BREACH_RISK", condition_id="c",
                    target="L1", severity="minor", t=0,
                    details={"latency_ms": 9.5})
        result = wk.query(QueryKind.NEED_TO_CONSTRAINTS, need)
        categories_ok &= result.meta_goal is not None and bool(result.constraints)
        result = wk.query(QueryKind.METAGOAL_TO_VALUE_CONSTRAINTS,
                          wk.query(QueryKind.NEED_TO_CONSTRAINTS, need).meta_goal)
        categories_ok &= result.value_system is not None
        result = wk.query(QueryKind.TEXT_TO_STRUCTURED, "protection switchover")
        categories_ok &= bool(result.ranked_entries)
        result = wk.query(QueryKind.AAI_REQUEST_TO_STATE_AND_GOAL, {})
        categories_ok &= result.state_summary is not None

        wk.update(fact_entry("a", "port:NE3/p-L36", "UP", 10))
        contradiction = wk.update(fact_entry("b", "port:NE3/p-L36", "DOWN", 10))
        rejection_ok = (not contradiction.accepted
                        and contradiction.reason == "COHERENCY_VIOLATION")

        rng = random.Random(1234)
        incoherent = 0
        keys = [f"port:NE{i}/p-X{i}" for i in range(4)] + ["kpi:L1"]
        for _ in range(1000):
            fuzz_wk = build_world_knowledge("fuzz", seed)
            fuzz_wk.state.services["L1"] = {"state": "NORMAL"}
            fuzz_wk.state.timestamps["service:L1"] = 0
            for j in range(rng.randrange(1, 6)):
                key = rng.choice(keys)
                value = rng.random() if key.startswith("kpi") else \
                    rng.choice(["UP", "DOWN"])
                fuzz_wk.update(fact_entry(f"f{j}", key, value, rng.randrange(20)))
            if fuzz_wk.check_coherence():
                incoherent += 1

        ok = categories_ok and rejection_ok and incoherent == 0
        verdict(6, ok,
                f"all five query kinds return documented outputs={categories_ok}, "
                f"contradiction rejected={rejection_ok}, "
                f"incoherent repositories after fuzz: {incoherent}/1000")


class TestCriterion7Determinism:
    def test_three_runs_byte_identical_per_scenario(self):
        combos = [("switchover", "multi"), ("latency_drift", "single"),
                  ("aging_network", "single"), ("shared_conflict", "multi")]
        all_ok = True
        for scenario, phase in combos:
            blobs = set()
            for _ in range(3):
                _, runtime = run_scenario(RunSpec.resolve(scenario, phase=phase,
                                                          seed=7))
                blobs.add(runtime.trace.to_jsonl())
            all_ok &= len(blobs) == 1
        verdict(7, all_ok, f"{len(combos)} scenarios x 3 runs byte-identical")


class TestCriterion8PhaseGating:
    def test_copilot_single_multi(self):
        report_c, runtime_c = run_scenario(RunSpec.resolve("switchover",
                                                           phase="copilot"))
        copilot_ok = not any(r.stage == "action"
                             for r in runtime_c.trace.records)

        single_ok = True
        for scenario in ("switchover", "latency_drift"):
            report_s, runtime_s = run_scenario(RunSpec.resolve(scenario,
                                                               phase="single"))
            single_ok &= all(report_s.checks.values())
            single_ok &= not any(r.stage == "message"
                                 for r in runtime_s.trace.records)

        report_m, runtime_m = run_scenario(RunSpec.resolve("shared_conflict",
                                                           phase="multi"))
        conflicts = [r for r in runtime_m.trace.records
                     if r.stage == "coordination"
                     and r.payload.get("relation") == "CONFLICT"]
        conflict_times = sorted({r.t for r in conflicts})
        goals_total = 2
        rounds_ok = len(conflict_times) <= goals_total
        yielded = [r for r in runtime_m.trace.records if r.stage == "coordination"
                   and r.payload.get("resolution", {}).get("loser") == "g-b-reserve"]
        after_yield = [r for r in conflicts if r.t > conflict_times[0]] \
            if conflict_times else []
        survivor = runtime_m.agents["nms-a"].wk.state.pursued_goals[
            "g-a-reserve"]["status"] == "PURSUED"
        loser = runtime_m.agents["nms-b"].wk.state.pursued_goals[
            "g-b-reserve"]["status"] == "YIELDED"
        multi_ok = (bool(conflicts) and bool(yielded) and rounds_ok
                    and not after_yield and survivor and loser)

        ok = copilot_ok and single_ok and multi_ok
        verdict(8, ok,
                f"copilot zero actions={copilot_ok}, single without AAI="
                f"{single_ok}, multi single-claimant in "
                f"{len(conflict_times)} round(s) no oscillation={multi_ok}")


EXPECTED_CONTRACT_ROWS = {
    "an_agent": (("stimuli", "state", "goal", "instruction", "query"),
                 ("action", "state", "goal", "linguistic_data")),
    "reactive_behavior": (("stimuli",), ("action_plan",)),
    "situation_awareness": (("stimuli",), ("predictive_model",)),
    "perception": (("stimuli",), ("percept",)),
    "reflection": (("percept",), ("predictive_model",)),
    "decision_making": (("predictive_model",), ("action_plan",)),
    "goal_management": (("new_goal", "predictive_model"), ("pursued_goal",)),
    "planner": (("pursued_goal",), ("action_plan",)),
    "proactive_behavior": (("agent_state",), ("new_goal",)),
    "self_awareness": (("agent_state",), ("meta_goal",)),
    "agent_purpose": (("agent_state",), ("need",)),
    "intent_management": (("need", "feasibility_constraints"), ("meta_goal",)),
    "choice_making": (("meta_goal",), ("new_goal",)),
    "metagoal_management": (("meta_goal",), ("goals",)),
    "choice_of_goals": (("goals", "feasibility_constraints"), ("new_goal",)),
    "world_knowledge": (("query",), ("knowledge",)),
    "knowledge_manager": (("query",), ("processed_query",)),
    "knowledge_repository": (("processed_query",), ("retrieval_knowledge",)),
    "human_agent_interaction": (("goal_intent_action_query",),
                                ("linguistic_data",)),
    "user_interface": (("goal_intent_action_query",), ("routed_submission",)),
    "problem_solver": (("query", "knowledge"), ("linguistic_data",)),
    "agent_agent_interaction": (("state", "goal"),
                                ("updated_state", "updated_goal")),
    "global_awareness": (("state",), ("updated_state",)),
    "goal_coordination": (("goal",), ("updated_goal",)),
}


class TestCriterion9ContractConformance:
    def test_every_row_realized_by_exactly_one_operation(self):
        names = [c.name for c in REGISTRY]
        unique = len(names) == len(set(names))
        complete = set(names) == set(EXPECTED_CONTRACT_ROWS)
        categories_ok = all(
            (c.inputs, c.outputs) == EXPECTED_CONTRACT_ROWS[c.name]
            for c in REGISTRY)
        resolvable = all(callable(c.resolve()) for c in REGISTRY)
        operations = [c.operation for c in REGISTRY]
        one_op_per_row = len(operations) == len(set(operations))
        ok = unique and complete and categories_ok and resolvable and one_op_per_row
        verdict(9, ok,
                f"{len(REGISTRY)} architecture rows, unique={unique}, "
                f"complete={complete}, categories match={categories_ok}, "
                f"operations resolvable={resolvable}")
