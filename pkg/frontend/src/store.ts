import {
  ClockInfo,
  ConfigPayload,
  StatePayload,
  WinnerPayload,
} from "./protocol.js";

export type Highlight = "normal" | "winner-flash" | "dimmed";

export interface ClockSprite {
  clockId: string;
  label: string;
  phase: number;
  posterior: number;
  highlight: Highlight;
  /** Grid cell of the key (completions share their letter's cell). */
  row: number;
  col: number;
  /** 0 for the key clock itself, 1..3 for completions beside it. */
  sub: number;
}

const KEY_ORDER: string[] = [
  ..."abcdefghijklmnopqrstuvwxyz",
  "underscore",
  "period",
  "delete",
  "undo",
];
const GRID_COLS = 5;

/** Trailing run of letters in the text: the word being typed. */
function partialWord(text: string): string {
  const m = /[a-z]*$/.exec(text);
  return m ? m[0] : "";
}

export interface FlashState {
  clockId: string;
  /** Session time (ms) at which the flash ends. */
  untilMs: number;
}

/**
 * Single source of truth for everything the renderer draws. All mutations
 * come from server messages; the UI never decides a winner locally.
 */
export class KeyboardStore {
  text = "";
  periodT = 2.0;
  periodIndex = 0;
  sprites: ClockSprite[] = [];
  flash: FlashState | null = null;
  connected = false;
  lastError: string | null = null;
  flashDurationMs: number;

  constructor(flashDurationMs = 600) {
    this.flashDurationMs = flashDurationMs;
  }

  applyConfig(config: ConfigPayload): void {
    this.periodT = config.period_T;
    this.periodIndex = config.period_index;
    this.connected = true;
  }

  applyState(state: StatePayload): void {
    this.text = state.text;
    const context = partialWord(state.text);
    const subCount = new Map<string, number>();
    // A state message arrives right after winner; keep the flash/dim
    // treatment until the flash deadline passes (cleared by tick()).
    const highlightFor = (id: string): Highlight =>
      this.flash === null
        ? "normal"
        : id === this.flash.clockId
          ? "winner-flash"
          : "dimmed";
    this.sprites = state.clocks.map((c: ClockInfo) => {
      // Completion clocks ("w:<word>") sit beside the letter they extend.
      let keyId = c.id;
      let sub = 0;
      if (c.id.startsWith("w:")) {
        keyId = c.id.slice(2).charAt(context.length) || "a";
        sub = (subCount.get(keyId) ?? 0) + 1;
        subCount.set(keyId, sub);
      }
      const slot = Math.max(KEY_ORDER.indexOf(keyId), 0);
      return {
        clockId: c.id,
        label: c.label,
        phase: c.phase,
        posterior: c.posterior,
        highlight: highlightFor(c.id),
        row: Math.floor(slot / GRID_COLS),
        col: slot % GRID_COLS,
        sub,
      } as ClockSprite;
    });
  }

  applyWinner(winner: WinnerPayload, nowMs: number): void {
    this.flash = {
      clockId: winner.clock_id,
      untilMs: nowMs + this.flashDurationMs,
    };
    for (const sprite of this.sprites) {
      sprite.highlight =
        sprite.clockId === winner.clock_id ? "winner-flash" : "dimmed";
    }
  }

  applyUndo(text: string): void {
    this.text = text;
  }

  applyPeriod(periodIndex: number, periodT: number): void {
    this.periodIndex = periodIndex;
    this.periodT = periodT;
  }

  /** Expire the winner flash once its deadline passes. */
  tick(nowMs: number): void {
    if (this.flash && nowMs >= this.flash.untilMs) {
      this.flash = null;
      for (const sprite of this.sprites) {
        if (sprite.highlight !== "normal") sprite.highlight = "normal";
      }
    }
  }

  disconnect(): void {
    this.connected = false;
  }
}
