"""Planning: constrained route search and guarded control policies."""

from __future__ import annotations

import heapq
from dataclasses import dataclass, field
from typing import Optional

from ..simnet.model import (
    Action,
    ActionKind,
    FacilityState,
    PortState,
    Route,
    RouteRole,
    ServiceState,
    active_latency_ms,
    apply_action,
    build_route,
    port_id,
    route_latency_ms,
    route_operational,
    routes_node_disjoint,
    service_state,
)
from .goals import Goal
from .model import PredictiveModel

PATH_CANDIDATES = 4


class NoFeasiblePlan(Exception):
    def __init__(self, goal: Goal, reason: str):
        super().__init__(f"no feasible plan for {goal.id}: {reason}")
        self.goal = goal
        self.reason = reason


@dataclass
class PolicyStep:
    guard: str
    action: Action

    def describe(self) -> dict:
        return {"guard": self.guard, "action": self.action.describe()}


@dataclass
class ControlPolicy:
    goal: Goal
    steps: list[PolicyStep]
    success: str
    meta: dict = field(default_factory=dict)

    def describe(self) -> dict:
        return {"goal": self.goal.id, "success": self.success,
                "steps": [s.describe() for s in self.steps], "meta": dict(self.meta)}


def _link_usable(state: FacilityState, link) -> bool:
    if link.cut or link.id in state.exhausted_resources:
        return False
    if link.utilization >= link.capacity:
        return False
    pid = port_id(link.id)
    for end in (link.a, link.b):
        ne = state.elements.get(end)
        if ne is None or ne.ports.get(pid) is not PortState.UP:
            return False
    return True


def find_routes(state: FacilityState, source: str, sink: str,
                avoid_nodes: frozenset[str] = frozenset(),
                max_latency_ms: Optional[float] = None,
                k: int = PATH_CANDIDATES) -> list[Route]:
    """Uniform-cost search over the operational graph; yields up to ``k``
    simple paths in (latency, node sequence) order."""
    adjacency: dict[str, list] = {}
    for link in state.links.values():
        if not _link_usable(state, link):
            continue
        adjacency.setdefault(link.a, []).append(link)
        adjacency.setdefault(link.b, []).append(link)
    for ne_id, ne in state.elements.items():
        if any(st is not PortState.UP for st in ne.boards.values()):
            adjacency.pop(ne_id, None)

    found: list[Route] = []
    heap: list[tuple[float, tuple[str, ...]]] = [(0.0, (source,))]
    while heap and len(found) < k:
        latency, nodes = heapq.heappop(heap)
        if max_latency_ms is not None and latency > max_latency_ms:
            break
        last = nodes[-1]
        if last == sink:
            found.append(build_route(state, list(nodes)))
            continue
        for link in sorted(adjacency.get(last, []), key=lambda l: l.id):
            nxt = link.other_end(last)
            if nxt in nodes or nxt in avoid_nodes or nxt not in state.elements:
                continue
            step = link.effective_latency_ms + (
                state.elements[last].node_latency_ms if last != source else 0.0)
            heapq.heappush(heap, (latency + step, nodes + (nxt,)))
    return found


def _dead_role(state: FacilityState, svc) -> Optional[RouteRole]:
    for role in (RouteRole.WORKING, RouteRole.PROTECTION):
        if svc.route_for(role) is not None and not route_operational(state, svc, role):
            return role
    for role in (RouteRole.WORKING, RouteRole.PROTECTION):
        if svc.route_for(role) is None:
            return role
    return None


def _delete_steps(svc_id: str, route: Route) -> list[PolicyStep]:
    steps = []
    for idx, ne_id in enumerate(route.nodes[1:-1], start=1):
        steps.append(PolicyStep(
            guard="xc_exists",
            action=Action(kind=ActionKind.DELETE_XC, service=svc_id, ne=ne_id,
                          in_port=port_id(route.links[idx - 1]),
                          out_port=port_id(route.links[idx]))))
    return steps


def plan(goal: Goal, model: PredictiveModel) -> ControlPolicy:
    """Compute a guarded action sequence whose terminal condition entails the
    goal's constraints; raises NoFeasiblePlan when the search is empty."""
    state = model.snapshot
    svc = state.services.get(goal.service or "")
    if goal.kind == "RESERVE_CAPACITY":
        return ControlPolicy(goal=goal, steps=[], success="noop")
    if svc is None:
        raise NoFeasiblePlan(goal, f"unknown service {goal.service}")

    if goal.kind == "SWITCHOVER":
        if not route_operational(state, svc, svc.active.other):
            raise NoFeasiblePlan(goal, "standby route not operational")
        return ControlPolicy(
            goal=goal,
            steps=[PolicyStep(guard="standby_operational",
                              action=Action(kind=ActionKind.SWITCHOVER, service=svc.id))],
            success="active_route_operational")

    if goal.kind in ("RESTORE_PROTECTION", "CREATE_ROUTE"):
        dead = _dead_role(state, svc)
        if dead is None:
            raise NoFeasiblePlan(goal, "no failed or missing route to replace")
        surviving = svc.route_for(dead.other)
        avoid = frozenset(surviving.intermediates) if surviving else frozenset()
        candidates = find_routes(state, svc.source, svc.sink, avoid_nodes=avoid,
                                 max_latency_ms=svc.sla_latency_ms)
        old = svc.route_for(dead)
        exclude = {old.nodes} if old else set()
        candidates = [c for c in candidates if c.nodes not in exclude]
        if not candidates:
            raise NoFeasiblePlan(goal, "no disjoint route within the latency bound")
        new_route = candidates[0]
        steps = _delete_steps(svc.id, old) if old else []
        steps.append(PolicyStep(
            guard="always",
            action=Action(kind=ActionKind.SET_ROUTE, service=svc.id, role=dead,
                          nodes=new_route.nodes)))
        success = ("service_normal_disjoint_within_sla"
                   if goal.kind == "RESTORE_PROTECTION" else "service_operational")
        return ControlPolicy(goal=goal, steps=steps, success=success,
                             meta={"route": list(new_route.nodes),
                                   "latency_ms": route_latency_ms(state, new_route)})

    if goal.kind == "REDUCE_LATENCY":
        active_route = svc.route_for(svc.active)
        if active_route is None:
            raise NoFeasiblePlan(goal, "service has no active route")
        current = route_latency_ms(state, active_route)
        other = svc.route_for(svc.active.other)
        avoid = frozenset(other.intermediates) if other else frozenset()
        bound = float(goal.params.get("latency_bound_ms", svc.sla_latency_ms))
        candidates = [c for c in find_routes(state, svc.source, svc.sink,
                                             avoid_nodes=avoid, max_latency_ms=bound)
                      if route_latency_ms(state, c) < current]
        if not candidates:
            raise NoFeasiblePlan(goal, "no route improves on the current latency")
        new_route = candidates[0]
        steps = [PolicyStep(
            guard="always",
            action=Action(kind=ActionKind.SET_ROUTE, service=svc.id, role=svc.active,
                          nodes=new_route.nodes))]
        steps.extend(_delete_steps(svc.id, active_route))
        return ControlPolicy(
            goal=goal, steps=steps, success="latency_within_target",
            meta={"route": list(new_route.nodes),
                  "latency_ms": route_latency_ms(state, new_route),
                  "previous_latency_ms": current})

    raise NoFeasiblePlan(goal, f"no planner for goal kind {goal.kind}")


# ---------------------------------------------------------------------------
# Policy simulation: shared by planner soundness checks and the RTA monitor.
# ---------------------------------------------------------------------------

def _guard_holds(state: FacilityState, step: PolicyStep) -> bool:
    if step.guard == "always":
        return True
    action = step.action
    if step.guard == "standby_operational":
        svc = state.services.get(action.service or "")
        return svc is not None and route_operational(state, svc, svc.active.other)
    if step.guard == "xc_exists":
        ne = state.elements.get(action.ne or "")
        return ne is not None and ne.has_xc(action.in_port, action.out_port, action.service)
    return False


def _success_holds(policy: ControlPolicy, state: FacilityState) -> bool:
    cond = policy.success
    if cond == "noop":
        return True
    svc = state.services.get(policy.goal.service or "")
    if svc is None:
        return False
    if cond == "active_route_operational":
        return route_operational(state, svc, svc.active)
    if cond == "service_operational":
        return service_state(state, svc) is not ServiceState.INTERRUPTED
    if cond == "service_normal_disjoint_within_sla":
        if service_state(state, svc) is not ServiceState.NORMAL:
            return False
        if svc.working and svc.protection and not routes_node_disjoint(
                svc.working, svc.protection):
            return False
        for route in (svc.working, svc.protection):
            if route and route_latency_ms(state, route) > svc.sla_latency_ms:
                return False
        return True
    if cond == "latency_within_target":
        latency = active_latency_ms(state, svc)
        if latency is None:
            return False
        previous = policy.meta.get("previous_latency_ms")
        bound = float(policy.goal.params.get("latency_bound_ms", svc.sla_latency_ms))
        return latency <= bound and (previous is None or latency < previous)
    return False


def simulate_policy(policy: ControlPolicy, snapshot: FacilityState
                    ) -> tuple[FacilityState, bool]:
    """Apply the policy's declared effects on a copy of the snapshot and
    evaluate its terminal condition."""
    state = snapshot.clone()
    for step in policy.steps:
        if not _guard_holds(state, step):
            continue
        result = apply_action(state, step.action)
        if not result.ok:
            return state, False
    return state, _success_holds(policy, state)
