// DOM rendering. Layout geometry is the only thing computed client-side;
// every displayed value comes from the view model's mirrored server data.

import { Snapshot, TraceRecord } from "./api.js";
import { DashboardViewModel, RouteOverlay } from "./viewmodel.js";

const ROLE_COLOR: Record<string, string> = {
  working: "#3fb950",
  protection: "#bc8cff",
};

function el(tag: string, cls?: string, text?: string): HTMLElement {
  const node = document.createElement(tag);
  if (cls) node.className = cls;
  if (text !== undefined) node.textContent = text;
  return node;
}

export function renderBanner(root: HTMLElement, vm: DashboardViewModel): void {
  const banner = root.querySelector("#banner") as HTMLElement;
  banner.style.display = vm.schemaMismatch ? "block" : "none";
  banner.textContent = vm.schemaMismatch
    ? "snapshot schema version mismatch - refusing to render stale contract"
    : "";
}

export function renderKpis(root: HTMLElement, vm: DashboardViewModel): void {
  const host = root.querySelector("#kpis") as HTMLElement;
  host.replaceChildren();
  for (const tile of vm.kpiTiles()) {
    const card = el("div", `tile state-${tile.state.toLowerCase()}`);
    card.appendChild(el("h3", "", tile.service));
    const latency = el("p", "kpi-value");
    latency.dataset.service = tile.service;
    latency.dataset.field = "latency_ms";
    latency.textContent = tile.latency_ms === null
      ? "-" : `${JSON.stringify(tile.latency_ms)} ms`;
    card.appendChild(latency);
    card.appendChild(el("p", "kpi-sub",
                        `SLA ${JSON.stringify(tile.sla_latency_ms)} ms / `
                        + `loss ${JSON.stringify(tile.loss_ms)} ms`));
    card.appendChild(el("p", `badge ${tile.state.toLowerCase()}`,
                        `${tile.state} (${tile.active})`));
    host.appendChild(card);
  }
}

function nodePositions(snapshot: Snapshot, width: number, height: number
                       ): Map<string, [number, number]> {
  const ids = Object.keys(snapshot.resources.elements).sort();
  const positions = new Map<string, [number, number]>();
  const radius = Math.min(width, height) / 2 - 36;
  ids.forEach((id, index) => {
    const angle = (2 * Math.PI * index) / ids.length - Math.PI / 2;
    positions.set(id, [width / 2 + radius * Math.cos(angle),
                       height / 2 + radius * Math.sin(angle)]);
  });
  return positions;
}

export function renderTopology(root: HTMLElement, vm: DashboardViewModel): void {
  const svg = root.querySelector("#topology") as unknown as SVGSVGElement;
  while (svg.firstChild) svg.removeChild(svg.firstChild);
  if (!vm.snapshot) return;
  const width = 460;
  const height = 360;
  const positions = nodePositions(vm.snapshot, width, height);
  const ns = "http://www.w3.org/2000/svg";

  for (const [id, link] of Object.entries(vm.snapshot.resources.links)) {
    const a = positions.get(link.a);
    const b = positions.get(link.b);
    if (!a || !b) continue;
    const line = document.createElementNS(ns, "line");
    line.setAttribute("x1", String(a[0]));
    line.setAttribute("y1", String(a[1]));
    line.setAttribute("x2", String(b[0]));
    line.setAttribute("y2", String(b[1]));
    line.setAttribute("class", link.cut ? "link cut" : "link");
    line.dataset.link = id;
    svg.appendChild(line);
  }

  for (const overlay of vm.routeOverlays()) {
    const points = overlay.nodes
      .map((n) => positions.get(n))
      .filter((p): p is [number, number] => p !== undefined)
      .map(([x, y]) => `${x},${y}`)
      .join(" ");
    const poly = document.createElementNS(ns, "polyline");
    poly.setAttribute("points", points);
    poly.setAttribute("fill", "none");
    poly.setAttribute("stroke", ROLE_COLOR[overlay.role] ?? "#888");
    poly.setAttribute("stroke-width", overlay.active ? "4" : "2");
    poly.setAttribute("stroke-dasharray", overlay.role === "protection" ? "6 4" : "");
    poly.dataset.service = overlay.service;
    poly.dataset.role = overlay.role;
    svg.appendChild(poly);
  }

  for (const [id, element] of Object.entries(vm.snapshot.resources.elements)) {
    const pos = positions.get(id);
    if (!pos) continue;
    const circle = document.createElementNS(ns, "circle");
    circle.setAttribute("cx", String(pos[0]));
    circle.setAttribute("cy", String(pos[1]));
    circle.setAttribute("r", "14");
    circle.setAttribute("class",
                        element.ports_down.length ? "ne down" : "ne");
    svg.appendChild(circle);
    const label = document.createElementNS(ns, "text");
    label.setAttribute("x", String(pos[0]));
    label.setAttribute("y", String(pos[1] + 4));
    label.setAttribute("text-anchor", "middle");
    label.textContent = id;
    svg.appendChild(label);
  }
}

export function renderAlarms(root: HTMLElement, vm: DashboardViewModel): void {
  const body = root.querySelector("#alarms tbody") as HTMLElement;
  body.replaceChildren();
  for (const alarm of vm.alarmRows()) {
    const row = el("tr");
    row.appendChild(el("td", "", String(alarm.element ?? alarm.link ?? "")));
    row.appendChild(el("td", "", String(alarm.port ?? "")));
    row.appendChild(el("td", "alarm-state", String(alarm.state ?? "")));
    body.appendChild(row);
  }
  const empty = root.querySelector("#alarms-empty") as HTMLElement;
  empty.style.display = vm.alarmRows().length ? "none" : "block";
}

export function renderGoals(root: HTMLElement, vm: DashboardViewModel): void {
  const body = root.querySelector("#goals tbody") as HTMLElement;
  body.replaceChildren();
  for (const goal of vm.goalRows()) {
    const row = el("tr");
    row.appendChild(el("td", "", String(goal.id ?? "")));
    row.appendChild(el("td", "", String(goal.kind ?? "")));
    row.appendChild(el("td", "", String(goal.status ?? "")));
    row.appendChild(el("td", "", String(goal.stage ?? "")));
    body.appendChild(row);
  }
}

export function renderMode(root: HTMLElement, vm: DashboardViewModel): void {
  const badge = root.querySelector("#mode") as HTMLElement;
  const mode = vm.controlMode();
  badge.textContent = mode;
  badge.className = `mode ${mode.toLowerCase().replace(/[^a-z]+/g, "-")}`;
  const toggle = root.querySelector("#takeover") as HTMLInputElement;
  toggle.checked = vm.snapshot?.takeover ?? false;
}

export function renderEvents(root: HTMLElement, vm: DashboardViewModel): void {
  const list = root.querySelector("#events") as HTMLElement;
  list.replaceChildren();
  for (const record of vm.eventLog(60).slice().reverse()) {
    const line = el("li", `stage-${record.stage}`);
    line.dataset.seq = String(record.seq);
    line.textContent =
      `#${record.seq} t=${record.t} ${record.agent} ${record.stage} `
      + JSON.stringify(record.payload);
    list.appendChild(line);
  }
}

export function renderPending(root: HTMLElement, vm: DashboardViewModel): void {
  const list = root.querySelector("#pending") as HTMLElement;
  list.replaceChildren();
  for (const entry of vm.pending.slice(-8).reverse()) {
    const line = el("li", `submission ${entry.state}`);
    line.textContent = `${entry.kind}: ${entry.summary} [${entry.state}`
      + (entry.traceId ? ` ${entry.traceId}` : "")
      + (entry.error ? ` ${entry.error}` : "") + "]";
    list.appendChild(line);
  }
}

export function renderAll(root: HTMLElement, vm: DashboardViewModel): void {
  renderBanner(root, vm);
  renderKpis(root, vm);
  renderTopology(root, vm);
  renderAlarms(root, vm);
  renderGoals(root, vm);
  renderMode(root, vm);
  renderEvents(root, vm);
  renderPending(root, vm);
}
