import { ApiClient, ServerRejection, connectEvents } from "./api.js";
import { renderAll, renderEvents, renderPending } from "./render.js";
import {
  DashboardViewModel,
  IntentFormFields,
  intentText,
  validateIntentForm,
} from "./viewmodel.js";

const SNAPSHOT_POLL_MS = 2000;

function serverBase(): string {
  const params = new URLSearchParams(location.search);
  return params.get("server") ?? "http://127.0.0.1:8000";
}

export function boot(root: HTMLElement = document.body): void {
  const base = serverBase();
  const api = new ApiClient(base);
  const vm = new DashboardViewModel();

  connectEvents(base, (record) => {
    vm.applyEvent(record);
    renderEvents(root, vm);
  });

  async function refresh(): Promise<void> {
    try {
      vm.applySnapshot(await api.snapshot());
    } catch {
      // transient fetch errors keep the last good snapshot on screen
    }
    renderAll(root, vm);
  }
  void refresh();
  setInterval(() => void refresh(), SNAPSHOT_POLL_MS);

  const form = root.querySelector("#intent-form") as HTMLFormElement;
  const errorBox = root.querySelector("#intent-error") as HTMLElement;
  form.addEventListener("submit", (event) => {
    event.preventDefault();
    const fields: IntentFormFields = {
      verb: (root.querySelector("#intent-verb") as HTMLSelectElement).value,
      metric: (root.querySelector("#intent-metric") as HTMLSelectElement).value,
      targetKind: (root.querySelector("#intent-target-kind") as
                   HTMLSelectElement).value as "service" | "region",
      target: (root.querySelector("#intent-target") as HTMLInputElement).value,
      amount: (root.querySelector("#intent-amount") as HTMLInputElement).value,
      unit: (root.querySelector("#intent-unit") as HTMLSelectElement).value,
      constraint: (root.querySelector("#intent-constraint") as
                   HTMLInputElement).checked,
    };
    const problem = validateIntentForm(fields);
    if (problem !== null) {
      errorBox.textContent = problem;
      return;  // client-side validation failed: nothing is sent
    }
    errorBox.textContent = "";
    const text = intentText(fields);
    const entry = vm.recordSent("intent", text);
    renderPending(root, vm);
    api.submitIntent(text)
      .then((receipt) => vm.resolveSubmission(entry, receipt))
      .catch((err) => {
        if (err instanceof ServerRejection) vm.resolveSubmission(entry, err);
        else entry.state = "rejected";
      })
      .finally(() => renderPending(root, vm));
  });

  const takeover = root.querySelector("#takeover") as HTMLInputElement;
  takeover.addEventListener("change", () => {
    const entry = vm.recordSent("takeover", takeover.checked ? "on" : "off");
    api.takeover(takeover.checked)
      .then((receipt) => vm.resolveSubmission(entry, receipt))
      .finally(() => void refresh());
  });

  const solveForm = root.querySelector("#solve-form") as HTMLFormElement;
  solveForm.addEventListener("submit", (event) => {
    event.preventDefault();
    const input = root.querySelector("#solve-text") as HTMLInputElement;
    const output = root.querySelector("#solve-answer") as HTMLElement;
    api.solve(input.value).then((result) => {
      output.textContent =
        `[${result.backend}] ${result.answer ?? JSON.stringify(result.detail)}`;
    });
  });

  const actionForm = root.querySelector("#action-form") as HTMLFormElement;
  actionForm.addEventListener("submit", (event) => {
    event.preventDefault();
    const input = root.querySelector("#action-json") as HTMLInputElement;
    let action: Record<string, unknown>;
    try {
      action = JSON.parse(input.value);
    } catch {
      (root.querySelector("#action-error") as HTMLElement).textContent =
        "action must be valid JSON";
      return;
    }
    (root.querySelector("#action-error") as HTMLElement).textContent = "";
    const entry = vm.recordSent("action", input.value);
    api.submitAction(action)
      .then((receipt) => vm.resolveSubmission(entry, receipt))
      .catch((err) => {
        if (err instanceof ServerRejection) vm.resolveSubmission(entry, err);
      })
      .finally(() => renderPending(root, vm));
  });
}

if (typeof document !== "undefined" && document.readyState !== "loading") {
  boot();
} else if (typeof document !== "undefined") {
  document.addEventListener("DOMContentLoaded", () => boot());
}
