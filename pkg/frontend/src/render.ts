import { handAngle } from "./clock.js";
import { KeyboardClient } from "./client.js";
import { ClockSprite } from "./store.js";

const GRID_COLS = 5;
const GRID_ROWS = 6;
const LABEL_MAX_CHARS = 12;

export interface Theme {
  background: string;
  flashBackground: string;
  clockFace: string;
  clockHand: string;
  noonMark: string;
  winnerFace: string;
  dimmedFace: string;
  label: string;
  text: string;
  banner: string;
}

export const DEFAULT_THEME: Theme = {
  background: "#fbf8f1",
  flashBackground: "#fff3b0",
  clockFace: "#ffffff",
  clockHand: "#1d3557",
  noonMark: "#e63946",
  winnerFace: "#2a9d8f",
  dimmedFace: "#e9e9e9",
  label: "#222222",
  text: "#111111",
  banner: "#b00020",
};

function truncateLabel(label: string): string {
  if (label.length <= LABEL_MAX_CHARS) return label;
  return label.slice(0, LABEL_MAX_CHARS - 1) + "…";
}

function drawClock(
  ctx: CanvasRenderingContext2D,
  sprite: ClockSprite,
  x: number,
  y: number,
  radius: number,
  tau: number,
  periodT: number,
  theme: Theme,
): void {
  const face =
    sprite.highlight === "winner-flash"
      ? theme.winnerFace
      : sprite.highlight === "dimmed"
        ? theme.dimmedFace
        : theme.clockFace;
  ctx.beginPath();
  ctx.arc(x, y, radius, 0, 2 * Math.PI);
  ctx.fillStyle = face;
  ctx.fill();
  ctx.strokeStyle = theme.clockHand;
  ctx.lineWidth = 1;
  ctx.stroke();

  // fixed noon mark
  ctx.beginPath();
  ctx.moveTo(x, y - radius);
  ctx.lineTo(x, y - radius * 0.7);
  ctx.strokeStyle = theme.noonMark;
  ctx.lineWidth = 2;
  ctx.stroke();

  // moving hand; angle 0 = noon, clockwise
  const angle = handAngle(tau, sprite.phase, periodT);
  ctx.beginPath();
  ctx.moveTo(x, y);
  ctx.lineTo(
    x + radius * 0.85 * Math.sin(angle),
    y - radius * 0.85 * Math.cos(angle),
  );
  ctx.strokeStyle = theme.clockHand;
  ctx.lineWidth = 2;
  ctx.stroke();
}

/**
 * Canvas render loop. Layout mirrors the engine's key order: the first
 * letter cell of each row is followed by its completions in state order,
 * GRID_COLS cells per row, GRID_ROWS rows, so sprites carry their own
 * (row, col) straight from message order.
 */
export class Renderer {
  private running = false;

  constructor(
    private readonly canvas: HTMLCanvasElement,
    private readonly client: KeyboardClient,
    private readonly theme: Theme = DEFAULT_THEME,
    private readonly raf: (cb: () => void) => void = (cb) =>
      requestAnimationFrame(() => cb()),
  ) {}

  start(): void {
    this.running = true;
    const loop = () => {
      if (!this.running) return;
      this.drawFrame();
      this.raf(loop);
    };
    this.raf(loop);
  }

  stop(): void {
    this.running = false;
  }

  drawFrame(): void {
    const ctx = this.canvas.getContext("2d");
    if (!ctx) return;
    const store = this.client.store;
    const now = this.client.sessionSeconds();
    store.tick(now * 1000);

    const { width, height } = this.canvas;
    ctx.fillStyle = store.flash ? this.theme.flashBackground : this.theme.background;
    ctx.fillRect(0, 0, width, height);

    const textBand = 60;
    const cellW = width / GRID_COLS;
    const cellH = (height - textBand) / GRID_ROWS;
    const radius = Math.min(cellW, cellH) * 0.28;

    ctx.font = "16px system-ui, sans-serif";
    ctx.fillStyle = this.theme.text;
    ctx.fillText("> " + store.text + "▏", 12, 34);

    ctx.font = "13px system-ui, sans-serif";
    for (const sprite of store.sprites) {
      // Key clocks center in their cell; completions stack beside them.
      const key = sprite.sub === 0;
      const r = key ? radius : radius * 0.55;
      const x = sprite.col * cellW + (key ? cellW * 0.3 : cellW * 0.72);
      const y =
        textBand +
        sprite.row * cellH +
        (key ? cellH * 0.4 : cellH * (0.12 + 0.28 * sprite.sub));
      drawClock(ctx, sprite, x, y, r, now, store.periodT, this.theme);
      ctx.fillStyle = this.theme.label;
      ctx.textAlign = "center";
      ctx.fillText(truncateLabel(sprite.label), x, y + r + (key ? 16 : 11));
      ctx.textAlign = "left";
    }

    if (!store.connected) {
      ctx.fillStyle = this.theme.banner;
      ctx.fillRect(0, 0, width, 28);
      ctx.fillStyle = "#ffffff";
      ctx.fillText("disconnected — reload to reconnect", 12, 19);
    }
  }
}
