import { ApiClient } from "./api.js";
import { ConsoleController } from "./controller.js";
import { renderEventLog, renderMetrics, renderRoadView, renderStatus, renderZoneEditor } from "./render.js";
import { ConsoleStore } from "./store.js";
import { EventStream } from "./stream.js";

// API origin: same origin when served from the service's /ui mount,
// overridable with ?api=http://host:port for a separately served build.
const apiBase = new URLSearchParams(location.search).get("api") ?? "";

const api = new ApiClient(apiBase);
const store = new ConsoleStore();
const controller = new ConsoleController(api, store);

const el = (id: string) => document.getElementById(id) as HTMLElement;

function render(): void {
  el("status").innerHTML = renderStatus(store.status, store.sim);
  el("road").innerHTML = renderRoadView(store.sim, store.zones);
  el("zones").innerHTML = renderZoneEditor(store.zones, controller.drafts,
                                           controller.errors);
  el("metrics").innerHTML = renderMetrics(store.sim?.metrics ?? null);
  el("log").innerHTML = renderEventLog(store.events);
}

function flash(message: string): void {
  const box = el("flash");
  box.textContent = message;
  box.classList.add("show");
  setTimeout(() => box.classList.remove("show"), 4000);
}

async function guard(work: () => Promise<unknown>): Promise<void> {
  try {
    await work();
  } catch (err) {
    flash(String(err instanceof Error ? err.message : err));
  }
}

function wireZoneForms(): void {
  document.addEventListener("input", (ev) => {
    const input = ev.target as HTMLInputElement;
    const form = input.closest<HTMLFormElement>("form.zone-card");
    if (!form || !input.name) return;
    const value = input.type === "checkbox" ? input.checked : input.value;
    controller.setDraft(form.dataset.zone as string,
                        input.name as never, value);
  });

  document.addEventListener("submit", (ev) => {
    const form = ev.target as HTMLFormElement;
    if (!form.classList.contains("zone-card")) return;
    ev.preventDefault();
    void guard(() => controller.saveZone(form.dataset.zone as string));
  });

  document.addEventListener("click", (ev) => {
    const button = (ev.target as HTMLElement).closest<HTMLButtonElement>("button[data-action]");
    if (!button) return;
    const form = button.closest<HTMLFormElement>("form.zone-card");
    if (button.dataset.action === "emergency" && form) {
      void guard(() => controller.toggleEmergency(form.dataset.zone as string,
                                                  button.dataset.on === "1"));
    }
    if (button.dataset.action === "sim") {
      const action = button.dataset.sim as string;
      const extra = action === "step" ? { ticks: 10 } : {};
      void guard(async () => {
        await api.sim(action, extra);
        await controller.loadState();
      });
    }
  });
}

async function boot(): Promise<void> {
  store.onChange(render);
  wireZoneForms();
  await guard(() => controller.init());

  const stream = new EventStream(apiBase, {
    onEvent: (index, line) => void controller.handleEvent(index, line),
    onStatus: (status) => store.setStatus(status),
    poll: controller.refreshAll,
    lastIndex: () => store.lastEventIndex,
  });
  stream.start();

  // Positions move every tick but only governance changes push events,
  // so keep the road view fresh with a light state poll.
  setInterval(() => void guard(() => controller.loadState()), 1000);
  render();
}

void boot();
