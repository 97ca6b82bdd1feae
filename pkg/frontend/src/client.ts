import {
  ClientMessage,
  ConfigPayload,
  PeriodChangedPayload,
  ServerMessage,
  StatePayload,
  UndoAppliedPayload,
  WinnerPayload,
} from "./protocol.js";
import { SessionClock } from "./sessionClock.js";
import { KeyboardStore } from "./store.js";
import { Transport } from "./transport.js";

export const REFRACTORY_MS = 50;

export interface ClientOptions {
  /** Local wall clock in ms; injectable for tests. */
  localNow?: () => number;
  flashDurationMs?: number;
}

/**
 * Protocol client: owns the handshake, the session clock, and click
 * delivery. Clicks are stamped at capture time on the synchronized session
 * clock and sent immediately; clicks arriving before the handshake finishes
 * are buffered and flushed (with their original capture times) once the
 * clock is synced. A 50 ms refractory window suppresses switch bounce; no
 * other debouncing is applied.
 */
export class KeyboardClient {
  readonly store: KeyboardStore;
  readonly clock: SessionClock;
  private readonly localNow: () => number;
  private seq = 0;
  private lastClickLocalMs = -Infinity;
  private preSyncClicks: number[] = [];
  private pendingPeriod: PeriodChangedPayload | null = null;

  constructor(private readonly transport: Transport, options: ClientOptions = {}) {
    this.localNow = options.localNow ?? (() => performance.now());
    this.clock = new SessionClock(this.localNow);
    this.store = new KeyboardStore(options.flashDurationMs);
    transport.onMessage((m) => this.handle(m));
    transport.onClose(() => this.store.disconnect());
  }

  start(): void {
    this.clock.markHelloSent();
    this.send({ kind: "hello", payload: {} });
  }

  /**
   * Register one switch actuation at local time `localMs` (defaults to now).
   * Returns true if the click was delivered or buffered, false if the
   * refractory window suppressed it.
   */
  captureClick(localMs?: number): boolean {
    const t = localMs ?? this.localNow();
    if (t - this.lastClickLocalMs < REFRACTORY_MS) {
      return false;
    }
    this.lastClickLocalMs = t;
    if (!this.clock.synced) {
      this.preSyncClicks.push(t);
      return true;
    }
    this.sendClick(this.clock.toSessionMs(t));
    return true;
  }

  requestPeriod(periodIndex: number): void {
    this.send({ kind: "set_period", payload: { period_index: periodIndex } });
  }

  /** Session time in seconds for the render loop; 0 before sync. */
  sessionSeconds(): number {
    return this.clock.synced ? this.clock.nowMs() / 1000 : 0;
  }

  private sendClick(sessionMs: number): void {
    this.send({ kind: "click", payload: { click_time_ms: sessionMs } });
  }

  private send(partial: { kind: ClientMessage["kind"]; payload: unknown }): void {
    this.seq += 1;
    this.transport.send({
      kind: partial.kind,
      seq: this.seq,
      ts_ms: Math.round(this.localNow()),
      payload: partial.payload,
    } as ClientMessage);
  }

  private handle(message: ServerMessage): void {
    switch (message.kind) {
      case "config": {
        const config = message.payload as ConfigPayload;
        this.clock.markConfigReceived(config.session_epoch_ms);
        this.store.applyConfig(config);
        for (const localMs of this.preSyncClicks.splice(0)) {
          this.sendClick(this.clock.toSessionMs(localMs));
        }
        break;
      }
      case "state":
        this.store.applyState(message.payload as StatePayload);
        break;
      case "winner":
        this.store.applyWinner(
          message.payload as WinnerPayload,
          this.clock.synced ? this.clock.nowMs() : 0,
        );
        // A deferred period change takes effect at the round boundary,
        // mirroring the engine, which does not re-announce it.
        if (this.pendingPeriod) {
          this.store.applyPeriod(
            this.pendingPeriod.period_index,
            this.pendingPeriod.period_T,
          );
          this.pendingPeriod = null;
        }
        break;
      case "undo_applied":
        this.store.applyUndo((message.payload as UndoAppliedPayload).text);
        break;
      case "period_changed": {
        const p = message.payload as PeriodChangedPayload;
        if (p.deferred) {
          this.pendingPeriod = p;
        } else {
          this.store.applyPeriod(p.period_index, p.period_T);
        }
        break;
      }
      case "error":
        this.store.lastError = (message.payload as { reason: string }).reason;
        break;
    }
  }
}
