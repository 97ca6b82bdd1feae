/**
 * Wire protocol types for the noonclick session service.
 *
 * Every message is an envelope:
 *   { kind, seq, ts_ms, payload }
 * Over WebSocket each envelope travels as one JSON text message (the raw
 * TCP/stdio transports use a 4-byte big-endian length prefix instead, but
 * WebSocket already frames).
 */

export const PROTOCOL_VERSION = 1;

export type ClientKind = "hello" | "click" | "set_period";
export type ServerKind =
  | "config"
  | "state"
  | "winner"
  | "undo_applied"
  | "period_changed"
  | "error";

export interface Envelope<K extends string = string, P = unknown> {
  kind: K;
  seq: number;
  ts_ms: number;
  payload: P;
}

export interface ConfigPayload {
  protocol_version: number;
  period_index: number;
  period_T: number;
  alpha: number;
  damping_lambda: number;
  bin_count: number;
  n_delay: number;
  /** Server clock reading at hello; anchors the session clock sync. */
  session_epoch_ms: number;
}

export interface ClockInfo {
  id: string;
  label: string;
  /** Phase offset in seconds: this clock reads noon at t = phase (mod T). */
  phase: number;
  posterior: number;
}

export interface StatePayload {
  text: string;
  clicks_so_far: number;
  clocks: ClockInfo[];
}

export interface WinnerPayload {
  clock_id: string;
  label: string;
  clicks: number;
}

export interface UndoAppliedPayload {
  text: string;
}

export interface PeriodChangedPayload {
  period_index: number;
  period_T: number;
  deferred: boolean;
}

export interface ErrorPayload {
  reason: string;
}

export interface ClickPayload {
  /** Click capture time in session-clock milliseconds. */
  click_time_ms: number;
}

export type ServerMessage =
  | Envelope<"config", ConfigPayload>
  | Envelope<"state", StatePayload>
  | Envelope<"winner", WinnerPayload>
  | Envelope<"undo_applied", UndoAppliedPayload>
  | Envelope<"period_changed", PeriodChangedPayload>
  | Envelope<"error", ErrorPayload>;

export type ClientMessage =
  | Envelope<"hello", Record<string, never>>
  | Envelope<"click", ClickPayload>
  | Envelope<"set_period", { period_index: number }>;

export function parseServerMessage(raw: string): ServerMessage {
  const msg = JSON.parse(raw);
  if (typeof msg !== "object" || msg === null || typeof msg.kind !== "string") {
    throw new Error(`malformed server message: ${raw.slice(0, 120)}`);
  }
  return msg as ServerMessage;
}
