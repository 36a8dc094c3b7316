import { describe, expect, it } from "vitest";

import { Snapshot, TraceRecord } from "../src/api.js";
import {
  DashboardViewModel,
  EVENT_BUFFER_LIMIT,
  intentText,
  validateIntentForm,
} from "../src/viewmodel.js";

function sampleSnapshot(overrides: Partial<Snapshot> = {}): Snapshot {
  return {
    schema_version: 1,
    t: 2000,
    services: {
      L1: {
        state: "DEGRADED", active: "WORKING",
        working: ["NE1", "NE4", "NE5", "NE9"],
        protection: ["NE1", "NE3", "NE6", "NE9"],
        latency_ms: 9.5, sla_latency_ms: 10.0, protection_class: "1+1",
        loss_ms: 0, kpi_tail: [[0, 6.0], [1000, 7.5], [2000, 9.5]],
      },
    },
    alarms: [{ element: "NE3", port: "p-L36", state: "DOWN" }],
    resources: { elements: {}, links: {} },
    goals: [],
    rta: { mode: "ACTIVE_AI", clean_outputs: 0 },
    pending_human: [],
    takeover: false,
    ...overrides,
  };
}

function record(seq: number, stage = "route"): TraceRecord {
  return { seq, t: seq, agent: "nms-1", stage, payload: { seq } };
}

describe("snapshot mirroring", () => {
  it("renders only server-provided values", () => {
    const vm = new DashboardViewModel();
    const snap = sampleSnapshot();
    vm.applySnapshot(snap);
    const tile = vm.kpiTiles()[0]!;
    // strict fidelity: the displayed numbers are the payload numbers
    expect(JSON.stringify(tile.latency_ms))
      .toBe(JSON.stringify(snap.services.L1!.latency_ms));
    expect(JSON.stringify(tile.sla_latency_ms))
      .toBe(JSON.stringify(snap.services.L1!.sla_latency_ms));
    expect(tile.state).toBe("DEGRADED");
    // margin is formatting-level arithmetic over two server numbers
    expect(tile.margin_ms).toBeCloseTo(0.5);
  });

  it("overlays follow exactly the snapshot route nodes", () => {
    const vm = new DashboardViewModel();
    vm.applySnapshot(sampleSnapshot());
    const overlays = vm.routeOverlays();
    expect(overlays.map((o) => o.nodes)).toEqual([
      ["NE1", "NE4", "NE5", "NE9"],
      ["NE1", "NE3", "NE6", "NE9"],
    ]);
    expect(overlays[0]!.active).toBe(true);
    expect(overlays[1]!.active).toBe(false);
  });

  it("rejects mismatched schema versions with a banner flag", () => {
    const vm = new DashboardViewModel();
    vm.applySnapshot(sampleSnapshot({ schema_version: 99 }));
    expect(vm.schemaMismatch).toBe(true);
    expect(vm.snapshot).toBeNull();
    vm.applySnapshot(sampleSnapshot());
    expect(vm.schemaMismatch).toBe(false);
  });

  it("control mode prefers human takeover over rta mode", () => {
    const vm = new DashboardViewModel();
    vm.applySnapshot(sampleSnapshot());
    expect(vm.controlMode()).toBe("ACTIVE_AI");
    vm.applySnapshot(sampleSnapshot({ takeover: true }));
    expect(vm.controlMode()).toBe("HUMAN CONTROL");
  });
});

describe("event buffer", () => {
  it("preserves server stream order", () => {
    const vm = new DashboardViewModel();
    for (const seq of [0, 1, 2, 5, 9]) vm.applyEvent(record(seq));
    expect(vm.eventLog().map((r) => r.seq)).toEqual([0, 1, 2, 5, 9]);
    expect(vm.outOfOrder).toBe(0);
  });

  it("drops regressions instead of reordering", () => {
    const vm = new DashboardViewModel();
    vm.applyEvent(record(3));
    vm.applyEvent(record(2));
    expect(vm.eventLog().map((r) => r.seq)).toEqual([3]);
    expect(vm.outOfOrder).toBe(1);
  });

  it("caps the buffer", () => {
    const vm = new DashboardViewModel();
    for (let seq = 0; seq < EVENT_BUFFER_LIMIT + 50; seq += 1) {
      vm.applyEvent(record(seq));
    }
    expect(vm.events.length).toBe(EVENT_BUFFER_LIMIT);
    expect(vm.events[0]!.seq).toBe(50);
  });
});

describe("intent form", () => {
  const base = { verb: "reduce", metric: "latency",
                 targetKind: "region" as const, target: "A", amount: "2",
                 unit: "%", constraint: true };

  it("builds the canonical utterance", () => {
    expect(intentText(base)).toBe(
      "reduce the latency of region A by 2% without affecting other KPIs");
    expect(intentText({ ...base, targetKind: "service", target: "L1",
                        unit: "ms", constraint: false }))
      .toBe("reduce the latency of L1 by 2 ms");
    expect(intentText({ ...base, verb: "ensure", targetKind: "service",
                        target: "L1", amount: "10", unit: "ms",
                        constraint: false }))
      .toBe("ensure the latency of L1 < 10 ms");
  });

  it("rejects malformed amounts before any request is sent", () => {
    expect(validateIntentForm({ ...base, amount: "banana" }))
      .toMatch(/not a number/);
    expect(validateIntentForm({ ...base, amount: "-3" }))
      .toMatch(/positive/);
    expect(validateIntentForm({ ...base, amount: "Infinity" }))
      .toMatch(/not a number|positive/);
  });

  it("rejects unit and metric mismatches", () => {
    expect(validateIntentForm({ ...base, metric: "utilization", unit: "ms" }))
      .toMatch(/does not match/);
    expect(validateIntentForm(base)).toBeNull();
  });

  it("tracks pending submission lifecycle", () => {
    const vm = new DashboardViewModel();
    const entry = vm.recordSent("intent", "reduce ...");
    expect(entry.state).toBe("sent");
    vm.resolveSubmission(entry, {
      schema_version: 1, destination: "INTENT_MANAGEMENT",
      trace_id: "hai:nms-1:000001", accepted: true, detail: {} });
    expect(entry.state).toBe("accepted");
    expect(entry.traceId).toBe("hai:nms-1:000001");
  });
});
