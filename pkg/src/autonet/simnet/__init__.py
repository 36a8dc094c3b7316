"""Simulated optical network domain: facility model, events, simulator."""

from .events import SimEvent, SimEventKind, Stimulus, StimulusKind
from .loader import DocumentError, load_scenario, load_topology
from .model import (
    Action,
    ActionKind,
    ActionResult,
    FacilityError,
    FacilityState,
    PortState,
    PrivateLineService,
    ProtectionClass,
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
from .simulator import OpticalNetworkSim

__all__ = [
    "Action", "ActionKind", "ActionResult", "DocumentError", "FacilityError",
    "FacilityState", "OpticalNetworkSim", "PortState", "PrivateLineService",
    "ProtectionClass", "Route", "RouteRole", "ServiceState", "SimEvent",
    "SimEventKind", "Stimulus", "StimulusKind", "active_latency_ms",
    "apply_action", "build_route", "load_scenario", "load_topology", "port_id",
    "route_latency_ms", "route_operational", "routes_node_disjoint",
    "service_state",
]
