"""Facility state model for the simulated optical domain.

All functions here are pure with respect to the passed state unless the
name says otherwise (``apply_action`` mutates the state it is given;
callers that need what-if semantics clone first).
"""

from __future__ import annotations

import copy
from dataclasses import dataclass, field
from enum import Enum
from typing import Optional


class PortState(str, Enum):
    UP = "UP"
    DOWN = "DOWN"


class ServiceState(str, Enum):
    NORMAL = "NORMAL"
    DEGRADED = "DEGRADED"
    INTERRUPTED = "INTERRUPTED"


class RouteRole(str, Enum):
    WORKING = "WORKING"
    PROTECTION = "PROTECTION"

    @property
    def other(self) -> "RouteRole":
        return RouteRole.PROTECTION if self is RouteRole.WORKING else RouteRole.WORKING


class ProtectionClass(str, Enum):
    ONE_PLUS_ONE = "1+1"
    UNPROTECTED = "unprotected"


class FacilityError(Exception):
    """Invalid facility description or invariant violation; message names the offender."""


@dataclass
class Link:
    id: str
    a: str
    b: str
    latency_ms: float
    capacity: float
    cut: bool = False
    drift_ms: float = 0.0
    utilization: float = 0.0

    @property
    def effective_latency_ms(self) -> float:
        return self.latency_ms + self.drift_ms

    def other_end(self, ne_id: str) -> str:
        return self.b if ne_id == self.a else self.a


@dataclass
class CrossConnect:
    in_port: str
    out_port: str
    service_id: str

    def key(self) -> tuple:
        return (self.in_port, self.out_port, self.service_id)


@dataclass
class NetworkElement:
    id: str
    ports: dict[str, PortState] = field(default_factory=dict)
    boards: dict[str, PortState] = field(default_factory=lambda: {"main": PortState.UP})
    base_latency_ms: float = 0.0
    drift_ms: float = 0.0
    cross_connects: list[CrossConnect] = field(default_factory=list)

    @property
    def node_latency_ms(self) -> float:
        return self.base_latency_ms + self.drift_ms

    def has_xc(self, in_port: str, out_port: str, service_id: str) -> bool:
        return any(xc.key() == (in_port, out_port, service_id) for xc in self.cross_connects)


@dataclass
class Route:
    nodes: tuple[str, ...]
    links: tuple[str, ...]

    def __post_init__(self) -> None:
        if len(set(self.nodes)) != len(self.nodes):
            raise FacilityError(f"route repeats a node: {'-'.join(self.nodes)}")
        if self.nodes and len(self.links) != len(self.nodes) - 1:
            raise FacilityError("route link count does not match node count")

    @property
    def intermediates(self) -> tuple[str, ...]:
        return self.nodes[1:-1]

    def label(self) -> str:
        return "-".join(self.nodes)


@dataclass
class PrivateLineService:
    id: str
    source: str
    sink: str
    working: Optional[Route] = None
    protection: Optional[Route] = None
    active: RouteRole = RouteRole.WORKING
    sla_latency_ms: float = 10.0
    protection_class: ProtectionClass = ProtectionClass.ONE_PLUS_ONE
    priority: str = "premium"
    region: str = "A"
    loss_ms: int = 0

    def route_for(self, role: RouteRole) -> Optional[Route]:
        return self.working if role is RouteRole.WORKING else self.protection

    def set_route(self, role: RouteRole, route: Optional[Route]) -> None:
        if role is RouteRole.WORKING:
            self.working = route
        else:
            self.protection = route


@dataclass
class FacilityState:
    elements: dict[str, NetworkElement] = field(default_factory=dict)
    links: dict[str, Link] = field(default_factory=dict)
    services: dict[str, PrivateLineService] = field(default_factory=dict)
    # abstract shared-resource marks learned from peers: resource id -> exhausted
    exhausted_resources: set[str] = field(default_factory=set)

    def clone(self) -> "FacilityState":
        return copy.deepcopy(self)


def port_id(link_id: str) -> str:
    return f"p-{link_id}"


def link_between(state: FacilityState, a: str, b: str) -> Optional[Link]:
    """Lowest-latency link joining a pair of elements, ties by link id."""
    best = None
    for link in state.links.values():
        if {link.a, link.b} == {a, b}:
            if best is None or (link.latency_ms, link.id) < (best.latency_ms, best.id):
                best = link
    return best


def build_route(state: FacilityState, nodes: list[str] | tuple[str, ...]) -> Route:
    """Resolve a node sequence to a Route, validating adjacency."""
    nodes = tuple(nodes)
    for ne in nodes:
        if ne not in state.elements:
            raise FacilityError(f"route references unknown element {ne}")
    link_ids = []
    for a, b in zip(nodes, nodes[1:]):
        link = link_between(state, a, b)
        if link is None:
            raise FacilityError(f"no link joins {a} and {b}")
        link_ids.append(link.id)
    return Route(nodes=nodes, links=tuple(link_ids))


def route_port_pairs(state: FacilityState, route: Route) -> list[tuple[str, str]]:
    """(element, port) pairs the route traverses, in path order."""
    pairs = []
    for (a, b), link_id in zip(zip(route.nodes, route.nodes[1:]), route.links):
        pid = port_id(link_id)
        pairs.append((a, pid))
        pairs.append((b, pid))
    return pairs


def route_operational(state: FacilityState, service: PrivateLineService, role: RouteRole) -> bool:
    route = service.route_for(role)
    if route is None:
        return False
    for link_id in route.links:
        link = state.links.get(link_id)
        if link is None or link.cut:
            return False
    for ne_id, pid in route_port_pairs(state, route):
        ne = state.elements.get(ne_id)
        if ne is None or ne.ports.get(pid) is not PortState.UP:
            return False
        if any(st is not PortState.UP for st in ne.boards.values()):
            return False
    # intermediate elements must hold this service's cross-connect for the route
    for idx, ne_id in enumerate(route.nodes[1:-1], start=1):
        ne = state.elements[ne_id]
        in_pid = port_id(route.links[idx - 1])
        out_pid = port_id(route.links[idx])
        if not ne.has_xc(in_pid, out_pid, service.id):
            return False
    return True


def route_latency_ms(state: FacilityState, route: Route) -> float:
    """Sum of link latencies plus processing latency of intermediate elements."""
    for ne in route.nodes:
        if ne not in state.elements:
            raise FacilityError(f"route references unknown element {ne}")
    total = 0.0
    for link_id in route.links:
        if link_id not in state.links:
            raise FacilityError(f"route references unknown link {link_id}")
        total += state.links[link_id].effective_latency_ms
    for ne_id in route.intermediates:
        total += state.elements[ne_id].node_latency_ms
    return total


def service_state(state: FacilityState, service: PrivateLineService) -> ServiceState:
    operational = [
        role for role in (RouteRole.WORKING, RouteRole.PROTECTION)
        if route_operational(state, service, role)
    ]
    if not operational:
        return ServiceState.INTERRUPTED
    if service.protection_class is ProtectionClass.ONE_PLUS_ONE and len(operational) == 1:
        return ServiceState.DEGRADED
    return ServiceState.NORMAL


def active_latency_ms(state: FacilityState, service: PrivateLineService) -> Optional[float]:
    route = service.route_for(service.active)
    if route is None:
        return None
    return route_latency_ms(state, route)


def routes_node_disjoint(r1: Route, r2: Route) -> bool:
    """Node-disjoint except shared endpoints."""
    return not (set(r1.intermediates) & set(r2.intermediates))


# ---------------------------------------------------------------------------
# Actions
# ---------------------------------------------------------------------------

class ActionKind(str, Enum):
    CREATE_XC = "CREATE_XC"
    DELETE_XC = "DELETE_XC"
    SWITCHOVER = "SWITCHOVER"
    SET_ROUTE = "SET_ROUTE"


@dataclass(frozen=True)
class Action:
    kind: ActionKind
    service: Optional[str] = None
    ne: Optional[str] = None
    in_port: Optional[str] = None
    out_port: Optional[str] = None
    role: Optional[RouteRole] = None
    nodes: tuple[str, ...] = ()

    def describe(self) -> dict:
        d: dict = {"kind": self.kind.value}
        if self.service:
            d["service"] = self.service
        if self.ne:
            d["ne"] = self.ne
        if self.in_port:
            d["in_port"] = self.in_port
        if self.out_port:
            d["out_port"] = self.out_port
        if self.role:
            d["role"] = self.role.value
        if self.nodes:
            d["nodes"] = list(self.nodes)
        return d

    @staticmethod
    def from_dict(d: dict) -> "Action":
        return Action(
            kind=ActionKind(d["kind"]),
            service=d.get("service"),
            ne=d.get("ne"),
            in_port=d.get("in_port"),
            out_port=d.get("out_port"),
            role=RouteRole(d["role"]) if d.get("role") else None,
            nodes=tuple(d.get("nodes", ())),
        )


@dataclass
class ActionResult:
    ok: bool
    action: Action
    error: Optional[str] = None          # UNKNOWN_TARGET | PRECONDITION_FAILED
    detail: Optional[str] = None
    service_state: Optional[ServiceState] = None

    def describe(self) -> dict:
        d: dict = {"ok": self.ok, "action": self.action.describe()}
        if self.error:
            d["error"] = self.error
            d["detail"] = self.detail
        if self.service_state:
            d["service_state"] = self.service_state.value
        return d


def _fail(action: Action, code: str, detail: str) -> ActionResult:
    return ActionResult(ok=False, action=action, error=code, detail=detail)


def apply_action(state: FacilityState, action: Action) -> ActionResult:
    """Mutate ``state`` per the action; never touches other services' cross-connects."""
    if action.kind in (ActionKind.CREATE_XC, ActionKind.DELETE_XC):
        ne = state.elements.get(action.ne or "")
        if ne is None:
            return _fail(action, "UNKNOWN_TARGET", f"unknown element {action.ne}")
        for pid in (action.in_port, action.out_port):
            if pid not in ne.ports:
                return _fail(action, "UNKNOWN_TARGET", f"unknown port {action.ne}/{pid}")
        if action.in_port == action.out_port:
            return _fail(action, "PRECONDITION_FAILED", "cross-connect ports must differ")
        key = (action.in_port, action.out_port, action.service)
        if action.kind is ActionKind.CREATE_XC:
            if ne.has_xc(*key):
                return _fail(action, "PRECONDITION_FAILED", "cross-connect already present")
            ne.cross_connects.append(CrossConnect(*key))
        else:
            before = len(ne.cross_connects)
            ne.cross_connects = [xc for xc in ne.cross_connects if xc.key() != key]
            if len(ne.cross_connects) == before:
                return _fail(action, "PRECONDITION_FAILED", "no such cross-connect")
        svc = state.services.get(action.service or "")
        return ActionResult(
            ok=True, action=action,
            service_state=service_state(state, svc) if svc else None,
        )

    svc = state.services.get(action.service or "")
    if svc is None:
        return _fail(action, "UNKNOWN_TARGET", f"unknown service {action.service}")

    if action.kind is ActionKind.SWITCHOVER:
        target = svc.active.other
        if not route_operational(state, svc, target):
            return _fail(action, "PRECONDITION_FAILED",
                         f"{target.value} route not operational for {svc.id}")
        svc.active = target
        return ActionResult(ok=True, action=action, service_state=service_state(state, svc))

    # SET_ROUTE: install a role's route and its cross-connects. Stale
    # cross-connects of a replaced route are left for explicit DELETE_XC.
    try:
        route = build_route(state, action.nodes)
    except FacilityError as exc:
        return _fail(action, "PRECONDITION_FAILED", str(exc))
    if not route.nodes or route.nodes[0] != svc.source or route.nodes[-1] != svc.sink:
        return _fail(action, "PRECONDITION_FAILED",
                     f"route endpoints must be {svc.source}..{svc.sink}")
    other = svc.route_for((action.role or RouteRole.WORKING).other)
    if (svc.protection_class is ProtectionClass.ONE_PLUS_ONE and other is not None
            and not routes_node_disjoint(route, other)):
        return _fail(action, "PRECONDITION_FAILED",
                     f"route {route.label()} not node-disjoint from {other.label()}")
    svc.set_route(action.role or RouteRole.WORKING, route)
    for idx, ne_id in enumerate(route.nodes[1:-1], start=1):
        ne = state.elements[ne_id]
        in_pid = port_id(route.links[idx - 1])
        out_pid = port_id(route.links[idx])
        if not ne.has_xc(in_pid, out_pid, svc.id):
            ne.cross_connects.append(CrossConnect(in_pid, out_pid, svc.id))
    return ActionResult(ok=True, action=action, service_state=service_state(state, svc))
