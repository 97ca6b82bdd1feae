import {
  ClientMessage,
  ConfigPayload,
  ServerMessage,
  StatePayload,
} from "../src/protocol.js";
import { MockTransport } from "../src/transport.js";

/**
 * Minimal scripted stand-in for the Python session service. It speaks the
 * protocol envelope faithfully (seq, kinds, payload shapes) but replaces
 * inference with a script: a queue of per-click outcomes, each either
 * "state" (round continues) or a winning clock id.
 */
export class MockService {
  seq = 0;
  text = "";
  clicks = 0;
  received: ClientMessage[] = [];
  private outcomes: Array<string | null> = [];

  constructor(
    private readonly transport: MockTransport,
    private readonly serverNow: () => number,
    private readonly periodT = 2.0,
  ) {
    transport.respondWith((m) => this.handle(m));
  }

  /** Script the outcome of the next clicks: null = no winner yet. */
  scriptOutcomes(outcomes: Array<string | null>): void {
    this.outcomes.push(...outcomes);
  }

  private envelope<P>(kind: ServerMessage["kind"], payload: P): ServerMessage {
    this.seq += 1;
    return {
      kind,
      seq: this.seq,
      ts_ms: Math.round(this.serverNow()),
      payload,
    } as ServerMessage;
  }

  private statePayload(): StatePayload {
    return {
      text: this.text,
      clicks_so_far: this.clicks,
      clocks: [
        { id: "a", label: "a", phase: 0.0, posterior: 0.25 },
        { id: "b", label: "b", phase: 0.5, posterior: 0.25 },
        { id: "w:about", label: "about", phase: 1.0, posterior: 0.25 },
        { id: "undo", label: "undo", phase: 1.5, posterior: 0.25 },
      ],
    };
  }

  private handle(m: ClientMessage): ServerMessage[] {
    this.received.push(m);
    switch (m.kind) {
      case "hello": {
        const config: ConfigPayload = {
          protocol_version: 1,
          period_index: 0,
          period_T: this.periodT,
          alpha: 99,
          damping_lambda: 0.9,
          bin_count: 80,
          n_delay: 2,
          session_epoch_ms: this.serverNow(),
        };
        return [
          this.envelope("config", config),
          this.envelope("state", this.statePayload()),
        ];
      }
      case "click": {
        this.clicks += 1;
        const outcome = this.outcomes.shift() ?? null;
        if (outcome === null) {
          return [this.envelope("state", this.statePayload())];
        }
        const out: ServerMessage[] = [
          this.envelope("winner", {
            clock_id: outcome,
            label: outcome.replace(/^w:/, ""),
            clicks: this.clicks,
          }),
        ];
        if (outcome === "undo") {
          this.text = this.text.slice(0, -1);
          out.push(this.envelope("undo_applied", { text: this.text }));
        } else {
          this.text += outcome.replace(/^w:/, "");
        }
        this.clicks = 0;
        out.push(this.envelope("state", this.statePayload()));
        return out;
      }
      case "set_period":
        return [
          this.envelope("period_changed", {
            period_index: m.payload.period_index,
            period_T: 2.0 * Math.pow(0.9, m.payload.period_index),
            deferred: this.clicks > 0,
          }),
        ];
    }
  }
}
