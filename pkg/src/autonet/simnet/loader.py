"""Topology and scenario file loading.

Topology documents:
  {"format_version": 1, "nodes": [..], "links": [{id,a,b,latency_ms,capacity}],
   "node_latency_ms": {ne: ms}, "services": [{id, source, sink, working, protection,
   active, sla_latency_ms, protection_class, priority, region}]}

Scenario documents:
  {"format_version": 1, "events": [{t, kind, target, magnitude_ms}]}
"""

from __future__ import annotations

import json
from pathlib import Path

from .events import SimEvent, SimEventKind
from .model import (
    FacilityError,
    FacilityState,
    Link,
    NetworkElement,
    PortState,
    PrivateLineService,
    ProtectionClass,
    RouteRole,
    build_route,
    port_id,
    routes_node_disjoint,
)

FORMAT_VERSION = 1


class DocumentError(Exception):
    """Parse or schema problem; message carries the offending field."""


def _load_doc(source) -> dict:
    if isinstance(source, dict):
        return source
    path = Path(source)
    try:
        return json.loads(path.read_text())
    except json.JSONDecodeError as exc:
        raise DocumentError(f"{path}: line {exc.lineno}: {exc.msg}") from exc
    except OSError as exc:
        raise DocumentError(f"{path}: {exc}") from exc


def _check_version(doc: dict, what: str) -> None:
    version = doc.get("format_version")
    if version != FORMAT_VERSION:
        raise DocumentError(f"{what}: unsupported format_version {version!r}")


def load_topology(source) -> FacilityState:
    """Build a FacilityState from a topology document (path or dict)."""
    doc = _load_doc(source)
    _check_version(doc, "topology")
    nodes = doc.get("nodes") or []
    if not nodes:
        raise FacilityError("no nodes")
    state = FacilityState()
    node_latency = doc.get("node_latency_ms", {})
    for ne_id in nodes:
        if ne_id in state.elements:
            raise FacilityError(f"duplicate node {ne_id}")
        state.elements[ne_id] = NetworkElement(
            id=ne_id, base_latency_ms=float(node_latency.get(ne_id, 0.0)))

    for raw in doc.get("links", []):
        for key in ("id", "a", "b", "latency_ms", "capacity"):
            if key not in raw:
                raise DocumentError(f"link missing field {key!r}: {raw}")
        for end in (raw["a"], raw["b"]):
            if end not in state.elements:
                raise FacilityError(f"link {raw['id']} references unknown element {end}")
        if raw["a"] == raw["b"]:
            raise FacilityError(f"link {raw['id']} joins an element to itself")
        if float(raw["latency_ms"]) < 0 or float(raw["capacity"]) < 0:
            raise FacilityError(f"link {raw['id']} has negative latency or capacity")
        if raw["id"] in state.links:
            raise FacilityError(f"duplicate link {raw['id']}")
        link = Link(id=raw["id"], a=raw["a"], b=raw["b"],
                    latency_ms=float(raw["latency_ms"]), capacity=float(raw["capacity"]))
        state.links[link.id] = link
        for end in (link.a, link.b):
            pid = port_id(link.id)
            ports = state.elements[end].ports
            if pid in ports:
                raise FacilityError(f"port {end}/{pid} bound to more than one link")
            ports[pid] = PortState.UP

    for raw in doc.get("services", []):
        svc = PrivateLineService(
            id=raw["id"], source=raw["source"], sink=raw["sink"],
            active=RouteRole(raw.get("active", "WORKING")),
            sla_latency_ms=float(raw.get("sla_latency_ms", 10.0)),
            protection_class=ProtectionClass(raw.get("protection_class", "1+1")),
            priority=raw.get("priority", "premium"),
            region=raw.get("region", "A"),
        )
        for end in (svc.source, svc.sink):
            if end not in state.elements:
                raise FacilityError(f"service {svc.id} references unknown element {end}")
        if svc.id in state.services:
            raise FacilityError(f"duplicate service {svc.id}")
        state.services[svc.id] = svc
        for role, key in ((RouteRole.WORKING, "working"), (RouteRole.PROTECTION, "protection")):
            if raw.get(key):
                route = build_route(state, raw[key])
                if route.nodes[0] != svc.source or route.nodes[-1] != svc.sink:
                    raise FacilityError(
                        f"service {svc.id} {key} route endpoints must be "
                        f"{svc.source}..{svc.sink}")
                svc.set_route(role, route)
        if (svc.protection_class is ProtectionClass.ONE_PLUS_ONE
                and svc.working and svc.protection
                and not routes_node_disjoint(svc.working, svc.protection)):
            raise FacilityError(f"service {svc.id} routes are not node-disjoint")
        # initial routes come with their cross-connects installed
        for role in (RouteRole.WORKING, RouteRole.PROTECTION):
            route = svc.route_for(role)
            if route is None:
                continue
            for idx, ne_id in enumerate(route.nodes[1:-1], start=1):
                ne = state.elements[ne_id]
                in_pid = port_id(route.links[idx - 1])
                out_pid = port_id(route.links[idx])
                if not ne.has_xc(in_pid, out_pid, svc.id):
                    from .model import CrossConnect
                    ne.cross_connects.append(CrossConnect(in_pid, out_pid, svc.id))
    return state


def resolve_target(state: FacilityState, target: str) -> tuple[str, str | None]:
    """Split an event target into (element-or-link id, optional port id)."""
    if "/" in target:
        ne_id, pid = target.split("/", 1)
        ne = state.elements.get(ne_id)
        if ne is None:
            raise FacilityError(f"event targets unknown element {ne_id}")
        if pid not in ne.ports:
            raise FacilityError(f"event targets unknown port {target}")
        return ne_id, pid
    if target in state.elements or target in state.links:
        return target, None
    raise FacilityError(f"event targets unknown element {target}")


def load_scenario(source, state: FacilityState) -> list[SimEvent]:
    """Parse a scenario document and validate every target against the topology."""
    doc = _load_doc(source)
    _check_version(doc, "scenario")
    events = []
    for raw in doc.get("events", []):
        try:
            event = SimEvent(
                t=int(raw["t"]), kind=SimEventKind(raw["kind"]),
                target=raw["target"], magnitude_ms=float(raw.get("magnitude_ms", 0.0)))
        except (KeyError, ValueError) as exc:
            raise DocumentError(f"bad event {raw}: {exc}") from exc
        if event.t < 0:
            raise DocumentError(f"event time must be non-negative: {raw}")
        resolve_target(state, event.target)
        events.append(event)
    return events
