import { describe, expect, it } from "vitest";

import { KeyboardClient } from "../src/client.js";
import { angleError, handAngle, posMod } from "../src/clock.js";
import { DEFAULT_THEME, Renderer } from "../src/render.js";
import { MockTransport } from "../src/transport.js";
import { MockService } from "./mockService.js";

const FRAME_S = 1 / 30; // render fidelity budget: one frame at 30 fps

describe("hand angle arithmetic", () => {
  it("is zero at noon and advances one revolution per period", () => {
    expect(handAngle(1.5, 1.5, 2.0)).toBe(0);
    expect(handAngle(2.5, 1.5, 2.0)).toBeCloseTo(Math.PI, 12);
    expect(handAngle(3.5, 1.5, 2.0)).toBeCloseTo(0, 12);
  });

  it("handles negative times via positive modulo", () => {
    expect(posMod(-0.5, 2.0)).toBeCloseTo(1.5, 12);
    expect(handAngle(-0.25, 0.0, 2.0)).toBeCloseTo(1.75 * Math.PI, 12);
  });

  it("completes a revolution in 1.06 s at period index 6", () => {
    const t6 = 2.0 * Math.pow(0.9, 6);
    expect(t6).toBeCloseTo(1.0628, 3);
    expect(handAngle(0.123 + t6, 0.123, t6)).toBeCloseTo(0, 9);
  });
});

/** Stub 2D context that records stroked line segments. */
class RecordingContext {
  segments: Array<{
    x0: number;
    y0: number;
    x1: number;
    y1: number;
    style: string;
  }> = [];
  fillStyle = "";
  strokeStyle = "";
  lineWidth = 1;
  font = "";
  textAlign = "left";
  private path: Array<[number, number]> = [];

  beginPath() {
    this.path = [];
  }
  moveTo(x: number, y: number) {
    this.path = [[x, y]];
  }
  lineTo(x: number, y: number) {
    this.path.push([x, y]);
  }
  arc() {}
  fill() {}
  stroke() {
    if (this.path.length === 2) {
      const [[x0, y0], [x1, y1]] = this.path;
      this.segments.push({ x0, y0, x1, y1, style: String(this.strokeStyle) });
    }
  }
  fillRect() {}
  fillText() {}
}

function makeRenderedFixture() {
  let now = 50_000;
  const transport = new MockTransport();
  new MockService(transport, () => now);
  const client = new KeyboardClient(transport, { localNow: () => now });
  client.start();

  const ctx = new RecordingContext();
  const canvas = {
    width: 1000,
    height: 700,
    getContext: () => ctx as unknown as CanvasRenderingContext2D,
  } as unknown as HTMLCanvasElement;
  const renderer = new Renderer(canvas, client);
  return {
    renderer,
    ctx,
    client,
    advance: (ms: number) => {
      now += ms;
    },
  };
}

describe("rendered hand fidelity", () => {
  it("probed hand angles match phase arithmetic within one frame", () => {
    const { renderer, ctx, client, advance } = makeRenderedFixture();
    const phases = client.store.sprites.map((s) => s.phase);
    const periodT = client.store.periodT;

    for (const probeMs of [0, 137, 912, 1776]) {
      advance(probeMs === 0 ? 0 : probeMs);
      const tau = client.sessionSeconds();
      ctx.segments = [];
      renderer.drawFrame();

      // Hands are the hand-colored two-point strokes (noon marks use the
      // noon color; the circle outline is an arc, not a two-point path).
      // Recover each angle from endpoints; screen y grows downward.
      const hands = ctx.segments.filter(
        (s) => s.style === DEFAULT_THEME.clockHand,
      );
      expect(hands).toHaveLength(phases.length);
      hands.forEach((hand, i) => {
        const rendered = posMod(
          Math.atan2(hand.x1 - hand.x0, hand.y0 - hand.y1),
          2 * Math.PI,
        );
        const truth = handAngle(tau, phases[i], periodT);
        const budget = (2 * Math.PI * FRAME_S) / periodT;
        expect(angleError(rendered, truth)).toBeLessThanOrEqual(budget);
      });
    }
  });
});
