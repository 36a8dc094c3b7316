"""Shared fixtures and independent oracles used across the suite."""

from __future__ import annotations

import json
from pathlib import Path

import pytest

from autonet.runner import bundled_path
from autonet.simnet.loader import load_topology
from autonet.simnet.model import FacilityState, PortState, build_route, route_latency_ms


def topology_doc(name: str) -> dict:
    return json.loads(bundled_path(name).read_text())


@pytest.fixture
def switchover_state() -> FacilityState:
    return load_topology(topology_doc("topology_switchover.json"))


@pytest.fixture
def drift_state() -> FacilityState:
    return load_topology(topology_doc("topology_drift.json"))


# ---------------------------------------------------------------------------
# Exhaustive simple-path oracle, independent of the planner's search.
# ---------------------------------------------------------------------------

def enumerate_simple_paths(state: FacilityState, source: str, sink: str
                           ) -> list[tuple[str, ...]]:
    paths: list[tuple[str, ...]] = []

    def extend(path: list[str]) -> None:
        last = path[-1]
        if last == sink:
            paths.append(tuple(path))
            return
        for link in state.links.values():
            if last not in (link.a, link.b):
                continue
            nxt = link.other_end(last)
            if nxt not in path:
                extend(path + [nxt])

    extend([source])
    return paths


def path_usable(state: FacilityState, path: tuple[str, ...]) -> bool:
    route = build_route(state, list(path))
    for link_id in route.links:
        link = state.links[link_id]
        if link.cut or link.utilization >= link.capacity:
            return False
        pid = f"p-{link_id}"
        for end in (link.a, link.b):
            if state.elements[end].ports.get(pid) is not PortState.UP:
                return False
    return True


def best_paths_oracle(state: FacilityState, source: str, sink: str,
                      avoid: set[str] = frozenset(),
                      max_latency: float | None = None
                      ) -> list[tuple[float, tuple[str, ...]]]:
    """All usable constrained simple paths as (latency, nodes), sorted."""
    out = []
    for path in enumerate_simple_paths(state, source, sink):
        if set(path[1:-1]) & avoid:
            continue
        if not path_usable(state, path):
            continue
        latency = route_latency_ms(state, build_route(state, list(path)))
        if max_latency is not None and latency > max_latency:
            continue
        out.append((latency, path))
    return sorted(out)
