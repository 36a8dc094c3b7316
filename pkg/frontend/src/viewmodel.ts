// Dashboard view model: a mirror of the last snapshot plus the ordered event
// buffer. Everything rendered comes from server messages; the only
// client-side work is formatting and layout.

import {
  EXPECTED_SCHEMA_VERSION,
  Receipt,
  ServerRejection,
  Snapshot,
  TraceRecord,
} from "./api.js";

export const EVENT_BUFFER_LIMIT = 500;

export interface KpiTile {
  service: string;
  state: string;
  active: string;
  latency_ms: number | null;
  sla_latency_ms: number;
  loss_ms: number;
  margin_ms: number | null;
}

export interface RouteOverlay {
  service: string;
  role: "working" | "protection";
  nodes: string[];
  active: boolean;
}

export interface PendingSubmission {
  kind: string;
  summary: string;
  state: "sent" | "accepted" | "rejected";
  traceId?: string;
  error?: string;
}

export class DashboardViewModel {
  snapshot: Snapshot | null = null;
  schemaMismatch = false;
  events: TraceRecord[] = [];
  outOfOrder = 0;
  pending: PendingSubmission[] = [];

  applySnapshot(snapshot: Snapshot): void {
    if (snapshot.schema_version !== EXPECTED_SCHEMA_VERSION) {
      this.schemaMismatch = true;
      return;
    }
    this.schemaMismatch = false;
    this.snapshot = snapshot;
  }

  applyEvent(record: TraceRecord): void {
    const last = this.events[this.events.length - 1];
    if (last !== undefined && record.seq <= last.seq) {
      this.outOfOrder += 1;
      return;
    }
    this.events.push(record);
    if (this.events.length > EVENT_BUFFER_LIMIT) {
      this.events.splice(0, this.events.length - EVENT_BUFFER_LIMIT);
    }
  }

  kpiTiles(): KpiTile[] {
    if (!this.snapshot) return [];
    return Object.entries(this.snapshot.services).map(([service, view]) => ({
      service,
      state: view.state,
      active: view.active,
      latency_ms: view.latency_ms,
      sla_latency_ms: view.sla_latency_ms,
      loss_ms: view.loss_ms,
      margin_ms: view.latency_ms === null
        ? null : view.sla_latency_ms - view.latency_ms,
    }));
  }

  routeOverlays(): RouteOverlay[] {
    if (!this.snapshot) return [];
    const overlays: RouteOverlay[] = [];
    for (const [service, view] of Object.entries(this.snapshot.services)) {
      if (view.working) {
        overlays.push({ service, role: "working", nodes: view.working,
                        active: view.active === "WORKING" });
      }
      if (view.protection) {
        overlays.push({ service, role: "protection", nodes: view.protection,
                        active: view.active === "PROTECTION" });
      }
    }
    return overlays;
  }

  alarmRows(): Record<string, unknown>[] {
    return this.snapshot?.alarms ?? [];
  }

  goalRows(): Record<string, unknown>[] {
    return this.snapshot?.goals ?? [];
  }

  controlMode(): string {
    if (!this.snapshot) return "UNKNOWN";
    if (this.snapshot.takeover) return "HUMAN CONTROL";
    return this.snapshot.rta.mode;
  }

  eventLog(limit = 100): TraceRecord[] {
    return this.events.slice(-limit);
  }

  recordSent(kind: string, summary: string): PendingSubmission {
    const entry: PendingSubmission = { kind, summary, state: "sent" };
    this.pending.push(entry);
    return entry;
  }

  resolveSubmission(entry: PendingSubmission, outcome: Receipt | ServerRejection): void {
    if (outcome instanceof ServerRejection) {
      entry.state = "rejected";
      entry.error = JSON.stringify(outcome.body);
      return;
    }
    entry.state = outcome.accepted ? "accepted" : "rejected";
    entry.traceId = outcome.trace_id;
    if (!outcome.accepted) entry.error = JSON.stringify(outcome.detail);
  }
}

// ---------------------------------------------------------------------------
// Intent form validation: units and ranges are checked before any request
// leaves the browser.
// ---------------------------------------------------------------------------

export interface IntentFormFields {
  verb: string;
  metric: string;
  targetKind: "service" | "region";
  target: string;
  amount: string;
  unit: string;
  constraint: boolean;
}

const VERBS = ["reduce", "increase", "ensure", "report"];
const UNITS_BY_METRIC: Record<string, string[]> = {
  latency: ["ms", "%"],
  utilization: ["%"],
  loss: ["ms", "%"],
  kpis: [],
};

export function validateIntentForm(fields: IntentFormFields): string | null {
  if (!VERBS.includes(fields.verb)) return `unknown verb '${fields.verb}'`;
  const units = UNITS_BY_METRIC[fields.metric];
  if (units === undefined) return `unknown metric '${fields.metric}'`;
  if (!fields.target.trim()) return "target is required";
  if (fields.verb === "reduce" || fields.verb === "increase"
      || fields.verb === "ensure") {
    const amount = Number(fields.amount);
    if (!Number.isFinite(amount)) return `amount '${fields.amount}' is not a number`;
    if (amount <= 0) return "amount must be positive";
    if (!units.includes(fields.unit)) {
      return `unit '${fields.unit}' does not match metric '${fields.metric}'`;
    }
  }
  return null;
}

export function intentText(fields: IntentFormFields): string {
  const target = fields.targetKind === "region"
    ? `region ${fields.target}` : fields.target;
  let text = `${fields.verb} the ${fields.metric} of ${target}`;
  if (fields.verb === "ensure") {
    text += ` < ${fields.amount} ${fields.unit}`;
  } else if (fields.verb !== "report") {
    text += fields.unit === "%"
      ? ` by ${fields.amount}%` : ` by ${fields.amount} ${fields.unit}`;
  }
  if (fields.constraint) text += " without affecting other KPIs";
  return text;
}
