import { describe, expect, it } from "vitest";

import { KeyboardClient, REFRACTORY_MS } from "../src/client.js";
import { MockTransport } from "../src/transport.js";
import { MockService } from "./mockService.js";

function makeFixture(serverSkewMs = 0) {
  let now = 10_000;
  const localNow = () => now;
  const advance = (ms: number) => {
    now += ms;
  };
  const transport = new MockTransport();
  const service = new MockService(transport, () => now + serverSkewMs);
  const client = new KeyboardClient(transport, { localNow });
  return { client, service, transport, advance };
}

describe("scripted transcript: hello -> state -> clicks -> winner -> undo", () => {
  it("runs the full exchange and mirrors service state", () => {
    const { client, service, advance } = makeFixture();

    client.start();
    expect(client.store.connected).toBe(true);
    expect(client.store.periodT).toBe(2.0);
    expect(client.store.sprites).toHaveLength(4);

    // Two clicks: first keeps the round open, second selects "a".
    service.scriptOutcomes([null, "a"]);
    advance(600);
    expect(client.captureClick()).toBe(true);
    advance(600);
    expect(client.captureClick()).toBe(true);
    expect(client.store.text).toBe("a");

    // Completion selection appends the whole word remainder.
    service.scriptOutcomes(["w:about"]);
    advance(600);
    client.captureClick();
    expect(client.store.text).toBe("aabout");

    // Undo restores the pre-selection text via undo_applied.
    service.scriptOutcomes(["undo"]);
    advance(600);
    client.captureClick();
    expect(client.store.text).toBe("aabou");
  });

  it("each actuation yields exactly one click message with seq +1", () => {
    const { client, service, advance } = makeFixture();
    client.start();
    service.scriptOutcomes([null, null, null]);
    for (let i = 0; i < 3; i++) {
      advance(200);
      client.captureClick();
    }
    const clickMsgs = service.received.filter((m) => m.kind === "click");
    expect(clickMsgs).toHaveLength(3);
    const seqs = service.received.map((m) => m.seq);
    expect(seqs).toEqual([1, 2, 3, 4]); // hello, then three clicks
  });

  it("suppresses the second of two clicks 40 ms apart", () => {
    const { client, service, advance } = makeFixture();
    client.start();
    service.scriptOutcomes([null, null]);
    advance(500);
    expect(client.captureClick()).toBe(true);
    advance(40);
    expect(client.captureClick()).toBe(false);
    advance(REFRACTORY_MS);
    expect(client.captureClick()).toBe(true);
    expect(service.received.filter((m) => m.kind === "click")).toHaveLength(2);
  });

  it("buffers clicks before handshake and flushes with capture times", () => {
    let now = 10_000;
    const transport = new MockTransport();
    const service = new MockService(transport, () => now + 5_000);
    const client = new KeyboardClient(transport, { localNow: () => now });

    // Click before any handshake: must be buffered, not dropped.
    expect(client.captureClick()).toBe(true);
    expect(service.received.filter((m) => m.kind === "click")).toHaveLength(0);

    const captureLocal = now;
    now += 120;
    client.start(); // config reply syncs the clock and flushes the buffer

    const clicks = service.received.filter((m) => m.kind === "click");
    expect(clicks).toHaveLength(1);
    // Stamped at original capture time, translated by the sync offset
    // (server skew 5000 ms, symmetric zero-delay exchange).
    const payload = clicks[0].payload as { click_time_ms: number };
    expect(payload.click_time_ms).toBeCloseTo(captureLocal + 5_000, 6);
  });

  it("marks exactly one sprite winner-flash on a winner message", () => {
    const { client, service, advance } = makeFixture();
    client.start();
    service.scriptOutcomes(["b"]);
    advance(300);
    client.captureClick();
    const flashed = client.store.sprites.filter(
      (s) => s.highlight === "winner-flash",
    );
    expect(flashed).toHaveLength(1);
    expect(flashed[0].clockId).toBe("b");
    expect(
      client.store.sprites.filter((s) => s.highlight === "dimmed").length,
    ).toBe(client.store.sprites.length - 1);
  });

  it("applies immediate period changes and defers mid-round ones", () => {
    const { client, service, advance } = makeFixture();
    client.start();

    client.requestPeriod(6);
    expect(client.store.periodT).toBeCloseTo(2.0 * Math.pow(0.9, 6), 9);

    // Mid-round request: one unresolved click, then the change.
    service.scriptOutcomes([null, "a"]);
    advance(300);
    client.captureClick();
    client.requestPeriod(0);
    expect(client.store.periodT).toBeCloseTo(2.0 * Math.pow(0.9, 6), 9);

    // Round ends -> deferred period takes effect.
    advance(300);
    client.captureClick();
    expect(client.store.periodT).toBe(2.0);
  });

  it("freezes to a disconnect banner state when the transport closes", () => {
    const { client, transport } = makeFixture();
    client.start();
    transport.simulateClose();
    expect(client.store.connected).toBe(false);
  });

  it("records service errors without dying", () => {
    const { client, transport } = makeFixture();
    client.start();
    transport.push({
      kind: "error",
      seq: 99,
      ts_ms: 0,
      payload: { reason: "period index out of range" },
    });
    expect(client.store.lastError).toBe("period index out of range");
  });
});
