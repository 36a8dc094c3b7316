// Typed client for the HAI service contract: REST endpoints plus the
// /events WebSocket stream. The dashboard talks to the server through this
// module only.

export const EXPECTED_SCHEMA_VERSION = 1;

export interface ServiceView {
  state: string;
  active: string;
  working: string[] | null;
  protection: string[] | null;
  latency_ms: number | null;
  sla_latency_ms: number;
  protection_class: string;
  loss_ms: number;
  kpi_tail: [number, number][];
}

export interface Snapshot {
  schema_version: number;
  t: number;
  services: Record<string, ServiceView>;
  alarms: Record<string, unknown>[];
  resources: {
    elements: Record<string, { ports_down: string[]; node_latency_ms: number }>;
    links: Record<string, { a: string; b: string; cut: boolean;
                            latency_ms: number; capacity: number;
                            utilization: number }>;
  };
  goals: Record<string, unknown>[];
  rta: { mode: string; clean_outputs: number };
  pending_human: Record<string, unknown>[];
  takeover: boolean;
}

export interface Receipt {
  schema_version: number;
  destination: string;
  trace_id: string;
  accepted: boolean;
  detail: Record<string, unknown>;
}

export interface SolveResult {
  schema_version: number;
  answer: string | null;
  backend: string;
  confidence: number;
  detail: Record<string, unknown>;
}

export interface TraceRecord {
  seq: number;
  t: number;
  agent: string;
  stage: string;
  payload: Record<string, unknown>;
}

export class ServerRejection extends Error {
  constructor(public status: number, public body: Record<string, unknown>) {
    super(`server rejected request (${status}): ${JSON.stringify(body)}`);
  }
}

type FetchLike = typeof fetch;

export class ApiClient {
  constructor(private base: string,
              private fetchFn: FetchLike = fetch.bind(globalThis)) {}

  private async get(path: string): Promise<unknown> {
    const response = await this.fetchFn(`${this.base}${path}`);
    const body = await response.json();
    if (!response.ok) throw new ServerRejection(response.status, body);
    return body;
  }

  private async post(path: string, payload: unknown): Promise<unknown> {
    const response = await this.fetchFn(`${this.base}${path}`, {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify(payload),
    });
    const body = await response.json();
    if (!response.ok) throw new ServerRejection(response.status, body);
    return body;
  }

  snapshot(): Promise<Snapshot> {
    return this.get("/snapshot") as Promise<Snapshot>;
  }

  submitIntent(text: string): Promise<Receipt> {
    return this.post("/intent", { text }) as Promise<Receipt>;
  }

  submitGoal(goal: Record<string, unknown>): Promise<Receipt> {
    return this.post("/goal", goal) as Promise<Receipt>;
  }

  submitAction(action: Record<string, unknown>): Promise<Receipt> {
    return this.post("/action", action) as Promise<Receipt>;
  }

  submitFeedback(feedback: string, subject?: string): Promise<Receipt> {
    return this.post("/feedback", { feedback, subject }) as Promise<Receipt>;
  }

  takeover(enabled: boolean): Promise<Receipt> {
    return this.post("/takeover", { enabled }) as Promise<Receipt>;
  }

  solve(text: string, context: Record<string, unknown> = {}): Promise<SolveResult> {
    return this.post("/solve", { text, context }) as Promise<SolveResult>;
  }
}

// Minimal structural type so tests can substitute the `ws` package for the
// browser's native WebSocket.
export interface WebSocketLike {
  onmessage: ((event: { data: unknown }) => void) | null;
  onclose: (() => void) | null;
  close(): void;
}

export type WebSocketFactory = (url: string) => WebSocketLike;

export interface EventStream {
  close(): void;
}

export function connectEvents(base: string,
                              onRecord: (record: TraceRecord) => void,
                              factory?: WebSocketFactory): EventStream {
  const url = base.replace(/^http/, "ws") + "/events";
  const make: WebSocketFactory =
    factory ?? ((u) => new WebSocket(u) as unknown as WebSocketLike);
  const socket = make(url);
  socket.onmessage = (event) => {
    onRecord(JSON.parse(String(event.data)) as TraceRecord);
  };
  return { close: () => socket.close() };
}
