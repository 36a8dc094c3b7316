"""Proactive pipeline: purpose monitoring, intent management, goal choice."""

from __future__ import annotations

import numpy as np
import pytest

from autonet.knowledge import build_world_knowledge, load_seed
from autonet.proactive import (
    Infeasible,
    NoCatalogEntry,
    choose_goal,
    expand_metagoal,
    manage_intent,
    monitor_purpose,
    predict_breach,
)
from autonet.proactive.choice import GoalAssessment
from autonet.proactive.purpose import Need, PurposeCondition
from autonet.reactive.model import PredictiveModel
from autonet.runner import bundled_path
from autonet.simnet import load_topology, service_state
from conftest import topology_doc


def make_wk(topology="topology_drift.json"):
    wk = build_world_knowledge("nms-test",
                               load_seed(bundled_path("knowledge_seed.json")))
    wk.state.facility = load_topology(topology_doc(topology))
    for sid, svc in wk.state.facility.services.items():
        wk.state.services[sid] = {
            "state": service_state(wk.state.facility, svc).value,
            "active": svc.active.value, "sla_latency_ms": svc.sla_latency_ms,
            "protection_class": svc.protection_class.value,
            "priority": svc.priority, "region": svc.region}
    return wk


LATENCY_CONDITION = PurposeCondition(
    id="latency-under-sla", kind="latency_bound",
    params={"trend_window": 3, "trend_horizon": 2})


def feed_series(wk, values, sid="L1", start=0):
    for i, value in enumerate(values):
        wk.state.record_kpi(sid, start + 1000 * i, value)


class TestMonitorPurpose:
    def test_rising_trend_raises_need_before_breach(self):
        wk = make_wk()
        feed_series(wk, [6.0, 7.5, 9.5])
        needs = monitor_purpose(wk.state, [LATENCY_CONDITION], {}, now=2000)
        assert len(needs) == 1
        assert needs[0].kind == "LATENCY_BREACH_RISK"
        assert needs[0].details["latency_ms"] == 9.5
        assert not needs[0].details.get("breached", False)

    def test_flat_series_within_bound_is_quiet(self):
        wk = make_wk()
        feed_series(wk, [6.0, 6.0, 6.0])
        assert monitor_purpose(wk.state, [LATENCY_CONDITION], {}, now=0) == []

    def test_exactly_at_bound_violates_strict_less(self):
        wk = make_wk()
        feed_series(wk, [10.0])
        needs = monitor_purpose(wk.state, [LATENCY_CONDITION], {}, now=0)
        assert needs and needs[0].details["breached"] is True

    def test_persisting_violation_raises_once(self):
        wk = make_wk()
        feed_series(wk, [6.0, 7.5, 9.5])
        registry: dict[str, Need] = {}
        first = monitor_purpose(wk.state, [LATENCY_CONDITION], registry, now=2000)
        second = monitor_purpose(wk.state, [LATENCY_CONDITION], registry, now=3000)
        assert len(first) == 1 and second == []

    def test_registry_clears_when_violation_resolves(self):
        wk = make_wk()
        feed_series(wk, [6.0, 7.5, 9.5])
        registry: dict[str, Need] = {}
        monitor_purpose(wk.state, [LATENCY_CONDITION], registry, now=2000)
        feed_series(wk, [6.0, 6.0, 6.0], start=3000)
        monitor_purpose(wk.state, [LATENCY_CONDITION], registry, now=5000)
        assert registry == {}
        again = monitor_purpose(wk.state, [LATENCY_CONDITION], registry, now=6000)
        assert again == []


class TestPredictBreach:
    def test_extrapolation_matches_polyfit_oracle(self):
        series = [(0, 6.0), (1000, 7.5), (2000, 9.5)]
        predicted = predict_breach(series, bound=10.0, window=3, horizon=2)
        slope, intercept = np.polyfit([0, 1, 2], [6.0, 7.5, 9.5], 1)
        first_over = None
        for step in (3, 4):
            value = intercept + slope * step
            if value >= 10.0:
                first_over = value
                break
        assert first_over is not None
        assert predicted == pytest.approx(first_over)

    def test_downward_trend_never_predicts(self):
        series = [(0, 9.0), (1, 8.0), (2, 7.0)]
        assert predict_breach(series, bound=10.0) is None


def latency_need(target="L1", latency=9.5):
    return Need(id=f"need:LATENCY_BREACH:{target}", kind="LATENCY_BREACH_RISK",
                condition_id="latency-under-sla", target=target, severity="minor",
                t=2000, details={"latency_ms": latency, "sla_ms": 10.0,
                                 "predicted_ms": 11.25})


class TestManageIntent:
    def test_need_within_odd_yields_metagoal(self):
        wk = make_wk()
        meta = manage_intent(latency_need(), wk)
        assert not isinstance(meta, Infeasible)
        assert {t.kind for t in meta.templates} == {
            "REDUCE_LATENCY", "RAISE_PRIORITY", "UPGRADE_HARDWARE"}

    def test_need_outside_odd_infeasible(self):
        wk = make_wk()
        result = manage_intent(latency_need(latency=1000.0), wk)
        assert isinstance(result, Infeasible)
        assert "odd-latency-range" in result.failed_constraints

    def test_unknown_need_kind(self):
        wk = make_wk()
        need = latency_need()
        need.kind = "UNKNOWN_KIND"
        with pytest.raises(NoCatalogEntry):
            manage_intent(need, wk)


class TestExpandMetagoal:
    def _assessments(self, drift=3.5):
        wk = make_wk()
        wk.state.facility.elements["NE4"].drift_ms = drift
        model = PredictiveModel(t=2000, snapshot=wk.state.facility.clone())
        meta = manage_intent(latency_need(), wk)
        return expand_metagoal(meta, wk, model)

    def test_reroute_highly_feasible_upgrade_low(self):
        by_kind = {a.goal.kind: a for a in self._assessments()}
        assert by_kind["REDUCE_LATENCY"].feasibility >= 0.8
        assert by_kind["UPGRADE_HARDWARE"].feasibility < 0.3
        assert not by_kind["REDUCE_LATENCY"].veto

    def test_one_assessment_per_template(self):
        assessments = self._assessments()
        assert len(assessments) == 3


class TestChooseGoal:
    def test_reroute_chosen_over_hardware_upgrade(self):
        wk = make_wk()
        wk.state.facility.elements["NE4"].drift_ms = 3.5
        model = PredictiveModel(t=2000, snapshot=wk.state.facility.clone())
        meta = manage_intent(latency_need(), wk)
        goal = choose_goal(expand_metagoal(meta, wk, model))
        assert goal is not None and goal.kind == "REDUCE_LATENCY"

    def test_empty_assessments_escalate(self):
        assert choose_goal([]) is None

    def test_single_vetoed_goal_escalates(self):
        wk = make_wk()
        meta = manage_intent(latency_need(), wk)
        model = PredictiveModel(t=0, snapshot=wk.state.facility.clone())
        assessments = expand_metagoal(meta, wk, model)
        keep = [a for a in assessments if a.goal.kind == "REDUCE_LATENCY"]
        keep[0].veto = True
        assert choose_goal(keep) is None

    def test_zero_feasibility_never_chosen(self):
        wk = make_wk()
        meta = manage_intent(latency_need(), wk)
        model = PredictiveModel(t=0, snapshot=wk.state.facility.clone())
        assessments = expand_metagoal(meta, wk, model)
        for assessment in assessments:
            assessment.feasibility = 0.0
        assert choose_goal(assessments) is None

    def test_scale_invariance_of_choice(self):
        wk = make_wk()
        wk.state.facility.elements["NE4"].drift_ms = 3.5
        model = PredictiveModel(t=2000, snapshot=wk.state.facility.clone())
        meta = manage_intent(latency_need(), wk)
        baseline = choose_goal(expand_metagoal(meta, wk, model))
        for c in (0.25, 4.0):
            for axis in wk.value_system.weights:
                wk.value_system.weights[axis] *= c
            scaled = choose_goal(expand_metagoal(meta, wk, model))
            assert scaled.id == baseline.id
            for axis in wk.value_system.weights:
                wk.value_system.weights[axis] /= c
