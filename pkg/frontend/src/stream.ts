// Live event subscription with index-based resume, lag recovery and a
// 1 s polling fallback while the stream is down.

export interface EventSourceLike {
  onmessage: ((ev: { data: string; lastEventId: string }) => void) | null;
  onerror: ((ev?: unknown) => void) | null;
  addEventListener(type: string, fn: (ev: { data?: string }) => void): void;
  close(): void;
}

export type SourceFactory = (url: string) => EventSourceLike;

export interface StreamHandlers {
  onEvent(index: number, line: string): void;
  onStatus(status: "connecting" | "live" | "polling"): void;
  poll(): Promise<void>;
  lastIndex(): number;
}

export interface StreamOptions {
  makeSource?: SourceFactory;
  pollIntervalMs?: number;
  retryMs?: number;
}

const defaultFactory: SourceFactory = (url) =>
  new (globalThis as any).EventSource(url) as EventSourceLike;

export class EventStream {
  private source: EventSourceLike | null = null;
  private pollTimer: ReturnType<typeof setInterval> | null = null;
  private retryTimer: ReturnType<typeof setTimeout> | null = null;
  private stopped = false;
  private makeSource: SourceFactory;
  private pollIntervalMs: number;
  private retryMs: number;

  constructor(private baseUrl: string, private handlers: StreamHandlers,
              options: StreamOptions = {}) {
    this.makeSource = options.makeSource ?? defaultFactory;
    this.pollIntervalMs = options.pollIntervalMs ?? 1000;
    this.retryMs = options.retryMs ?? 5000;
  }

  start(): void {
    this.stopped = false;
    this.connect();
  }

  stop(): void {
    this.stopped = true;
    this.source?.close();
    this.source = null;
    this.stopPolling();
    if (this.retryTimer !== null) {
      clearTimeout(this.retryTimer);
      this.retryTimer = null;
    }
  }

  private connect(): void {
    if (this.stopped) return;
    const after = this.handlers.lastIndex();
    const url = `${this.baseUrl}/events${after >= 0 ? `?after=${after}` : ""}`;
    this.handlers.onStatus("connecting");
    const source = this.makeSource(url);
    this.source = source;

    source.onmessage = (ev) => {
      this.stopPolling();
      this.handlers.onStatus("live");
      const index = Number.parseInt(ev.lastEventId, 10);
      if (Number.isFinite(index)) this.handlers.onEvent(index, ev.data);
    };
    source.onerror = () => {
      source.close();
      if (this.source === source) this.source = null;
      this.startPolling();
      this.scheduleReconnect(this.retryMs);
    };
    source.addEventListener("lag_error", () => {
      // We fell behind the bounded buffer; resume from the last index.
      source.close();
      if (this.source === source) this.source = null;
      this.scheduleReconnect(0);
    });
  }

  private scheduleReconnect(delayMs: number): void {
    if (this.stopped || this.retryTimer !== null) return;
    this.retryTimer = setTimeout(() => {
      this.retryTimer = null;
      this.connect();
    }, delayMs);
  }

  private startPolling(): void {
    if (this.stopped || this.pollTimer !== null) return;
    this.handlers.onStatus("polling");
    this.pollTimer = setInterval(() => {
      void this.handlers.poll();
    }, this.pollIntervalMs);
  }

  private stopPolling(): void {
    if (this.pollTimer !== null) {
      clearInterval(this.pollTimer);
      this.pollTimer = null;
    }
  }
}
