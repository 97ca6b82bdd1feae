/** Clock-hand geometry shared by the renderer and its tests. */

/** Positive modulo: result in [0, m) for any finite x. */
export function posMod(x: number, m: number): number {
  return ((x % m) + m) % m;
}

/**
 * Hand angle in radians at session time tau (seconds) for a clock with the
 * given phase and period. 0 means the hand points at noon; the angle grows
 * clockwise through a full revolution per period.
 *
 *   angle(tau) = 2*pi * ((tau - phase) mod T) / T
 */
export function handAngle(tau: number, phase: number, periodT: number): number {
  return (2 * Math.PI * posMod(tau - phase, periodT)) / periodT;
}

/**
 * Shortest angular distance between two hand angles, in radians.
 * Used to assert render fidelity (within one frame of truth).
 */
export function angleError(a: number, b: number): number {
  const d = posMod(a - b, 2 * Math.PI);
  return Math.min(d, 2 * Math.PI - d);
}
