"""Deterministic discrete-event simulator for the optical domain.

A single logical owner drives the simulator through ``advance`` and
``apply_action``; all returned values are plain copies safe to hand
across threads. Events scheduled for the same millisecond apply in
insertion order.
"""

from __future__ import annotations

from dataclasses import dataclass

from .events import SimEvent, SimEventKind, Stimulus, StimulusKind
from .loader import load_scenario, load_topology, resolve_target
from .model import (
    Action,
    ActionResult,
    FacilityState,
    PortState,
    PrivateLineService,
    Route,
    RouteRole,
    ServiceState,
    apply_action,
    active_latency_ms,
    route_latency_ms,
    route_operational,
    service_state,
)


@dataclass
class ServiceTransition:
    t: int
    service: str
    state: ServiceState
    active: str
    loss_ms: int


class OpticalNetworkSim:
    """Owns facility state, the event queue and the sim clock."""

    def __init__(self, state: FacilityState, events: list[SimEvent] | None = None):
        self.state = state
        self.clock = 0
        self._queue: list[tuple[int, int, SimEvent]] = []
        self._insertions = 0
        self._last_states: dict[str, ServiceState] = {
            sid: service_state(state, svc) for sid, svc in state.services.items()}
        self._last_loss_t = 0
        self.transitions: list[ServiceTransition] = [
            ServiceTransition(0, sid, st, state.services[sid].active.value,
                              state.services[sid].loss_ms)
            for sid, st in sorted(self._last_states.items())
        ]
        self._emitted_initial_kpis = False
        self._route_ok: dict[tuple[str, str], bool] = {}
        for sid, svc in state.services.items():
            for role in (RouteRole.WORKING, RouteRole.PROTECTION):
                if svc.route_for(role) is not None:
                    self._route_ok[(sid, role.value)] = \
                        route_operational(state, svc, role)
        for event in events or []:
            self.schedule(event)

    @classmethod
    def from_files(cls, topology, scenario=None) -> "OpticalNetworkSim":
        state = load_topology(topology)
        events = load_scenario(scenario, state) if scenario is not None else []
        return cls(state, events)

    # ------------------------------------------------------------------
    def schedule(self, event: SimEvent) -> None:
        if event.t < self.clock:
            raise ValueError(f"cannot schedule event in the past: {event}")
        resolve_target(self.state, event.target)
        self._queue.append((event.t, self._insertions, event))
        self._insertions += 1
        self._queue.sort(key=lambda item: (item[0], item[1]))

    def next_event_time(self) -> int | None:
        return self._queue[0][0] if self._queue else None

    def snapshot(self, scope: set[str] | None = None) -> FacilityState:
        """Deep copy of facility state; ``scope`` limits elements. Services
        touching the scope stay visible together with the elements and links
        their routes traverse (a participating element sees the path it
        carries)."""
        copy = self.state.clone()
        if scope is None:
            return copy
        copy.services = {
            k: v for k, v in copy.services.items()
            if v.source in scope or v.sink in scope
            or any(n in scope for r in (v.working, v.protection) if r for n in r.nodes)}
        visible = set(scope)
        for svc in copy.services.values():
            for route in (svc.working, svc.protection):
                if route is not None:
                    visible.update(route.nodes)
        copy.elements = {k: v for k, v in copy.elements.items() if k in visible}
        copy.links = {k: v for k, v in copy.links.items()
                      if v.a in visible and v.b in visible}
        return copy

    # ------------------------------------------------------------------
    def _integrate_loss(self, now: int) -> None:
        dt = now - self._last_loss_t
        if dt > 0:
            for svc in self.state.services.values():
                if self._last_states[svc.id] is ServiceState.INTERRUPTED:
                    svc.loss_ms += dt
        self._last_loss_t = now

    def _note_transitions(self, t: int) -> None:
        for sid in sorted(self.state.services):
            svc = self.state.services[sid]
            current = service_state(self.state, svc)
            if current is not self._last_states[sid]:
                self._last_states[sid] = current
                self.transitions.append(
                    ServiceTransition(t, sid, current, svc.active.value, svc.loss_ms))

    def advance(self, until: int) -> list[Stimulus]:
        """Apply all events with time <= until; return stimuli emitted in order."""
        if until < self.clock:
            raise ValueError(f"advance target {until} is before sim time {self.clock}")
        stimuli: list[Stimulus] = []
        if not self._emitted_initial_kpis:
            self._emitted_initial_kpis = True
            for sid in sorted(self.state.services):
                svc = self.state.services[sid]
                latency = active_latency_ms(self.state, svc)
                if latency is not None:
                    route = svc.route_for(svc.active)
                    stimuli.append(Stimulus(
                        t=self.clock, source=svc.sink, kind=StimulusKind.KPI,
                        payload={"service": sid, "route": list(route.nodes),
                                 "latency_ms": latency}))
        while self._queue and self._queue[0][0] <= until:
            t, _, event = self._queue.pop(0)
            self._integrate_loss(t)
            self.clock = t
            stimuli.extend(self._apply_event(event))
            stimuli.extend(self._route_state_alarms())
            self._note_transitions(t)
        self._integrate_loss(until)
        self.clock = until
        return stimuli

    def _route_state_alarms(self) -> list[Stimulus]:
        """Sink-side alarms when a route's operational state flips; the sink
        element observes signal loss on its own receive side."""
        alarms = []
        for sid in sorted(self.state.services):
            svc = self.state.services[sid]
            for role in (RouteRole.WORKING, RouteRole.PROTECTION):
                if svc.route_for(role) is None:
                    continue
                ok = route_operational(self.state, svc, role)
                key = (sid, role.value)
                if ok != self._route_ok.get(key, ok):
                    alarms.append(Stimulus(
                        t=self.clock, source=svc.sink, kind=StimulusKind.ALARM,
                        payload={"service": sid, "route": role.value,
                                 "state": "UP" if ok else "DOWN"}))
                self._route_ok[key] = ok
        return alarms

    def _affected_services(self, predicate) -> list[PrivateLineService]:
        return [self.state.services[sid] for sid in sorted(self.state.services)
                if predicate(self.state.services[sid])]

    def _kpi_for_active(self, traversing: str) -> list[Stimulus]:
        """KPI stimuli for services whose active route runs through ``traversing``."""
        out = []
        for svc in self._affected_services(lambda s: True):
            route = svc.route_for(svc.active)
            if route is None:
                continue
            if traversing in route.nodes[1:-1] or traversing in route.links:
                out.append(Stimulus(
                    t=self.clock, source=traversing, kind=StimulusKind.KPI,
                    payload={"service": svc.id, "route": list(route.nodes),
                             "latency_ms": route_latency_ms(self.state, route)}))
        return out

    def _apply_event(self, event: SimEvent) -> list[Stimulus]:
        target_id, pid = resolve_target(self.state, event.target)
        kind = event.kind
        if kind is SimEventKind.PORT_FAIL:
            ne = self.state.elements[target_id]
            port = pid or sorted(ne.ports)[0]
            ne.ports[port] = PortState.DOWN
            return [Stimulus(self.clock, target_id, StimulusKind.ALARM,
                             {"port": port, "state": "DOWN"})]
        if kind is SimEventKind.FIBER_CUT:
            link = self.state.links[target_id]
            link.cut = True
            return [Stimulus(self.clock, target_id, StimulusKind.ALARM,
                             {"link": target_id, "state": "DOWN"})]
        if kind is SimEventKind.LATENCY_DRIFT:
            if target_id in self.state.elements:
                self.state.elements[target_id].drift_ms += event.magnitude_ms
            else:
                self.state.links[target_id].drift_ms += event.magnitude_ms
                log = Stimulus(self.clock, target_id, StimulusKind.LOG,
                               {"event": "fiber_aging", "delta_ms": event.magnitude_ms})
                return [log] + self._kpi_for_active(target_id)
            return self._kpi_for_active(target_id)
        if kind is SimEventKind.TRAFFIC_CHANGE:
            link = self.state.links[target_id]
            link.utilization = max(0.0, link.utilization + event.magnitude_ms)
            return [Stimulus(self.clock, target_id, StimulusKind.KPI,
                             {"link": target_id, "utilization": link.utilization})]
        # REPAIR restores the named target to its baseline condition
        if pid is not None:
            self.state.elements[target_id].ports[pid] = PortState.UP
            return [Stimulus(self.clock, target_id, StimulusKind.ALARM,
                             {"port": pid, "state": "UP"})]
        if target_id in self.state.links:
            link = self.state.links[target_id]
            link.cut = False
            link.drift_ms = 0.0
            return [Stimulus(self.clock, target_id, StimulusKind.ALARM,
                             {"link": target_id, "state": "UP"})]
        ne = self.state.elements[target_id]
        ne.drift_ms = 0.0
        for port in ne.ports:
            ne.ports[port] = PortState.UP
        return [Stimulus(self.clock, target_id, StimulusKind.ALARM,
                         {"state": "UP"})]

    # ------------------------------------------------------------------
    def apply_action(self, action: Action) -> ActionResult:
        self._integrate_loss(self.clock)
        result = apply_action(self.state, action)
        self._note_transitions(self.clock)
        # the actor learns the outcome from the result; no alarms are raised
        for sid in sorted(self.state.services):
            svc = self.state.services[sid]
            for role in (RouteRole.WORKING, RouteRole.PROTECTION):
                if svc.route_for(role) is not None:
                    self._route_ok[(sid, role.value)] = \
                        route_operational(self.state, svc, role)
        return result

    def route_latency(self, route: Route) -> float:
        return route_latency_ms(self.state, route)

    def service_states(self) -> dict[str, str]:
        return {sid: service_state(self.state, svc).value
                for sid, svc in sorted(self.state.services.items())}
