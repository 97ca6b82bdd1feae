/**
 * Session clock synchronization.
 *
 * The engine interprets click timestamps on its own monotonic clock. At
 * handshake we observe three numbers: the local time the hello was sent,
 * the server's clock reading embedded in the config reply
 * (session_epoch_ms), and the local time that reply arrived. Assuming
 * symmetric transport delay, the server read its clock at the local
 * midpoint, giving the offset estimate
 *
 *   offset = session_epoch_ms - (helloSent + configReceived) / 2
 *
 * After sync, sessionNow() = localNow + offset is the engine's clock.
 */
export class SessionClock {
  private offsetMs: number | null = null;
  private helloSentMs: number | null = null;

  constructor(private readonly localNow: () => number) {}

  get synced(): boolean {
    return this.offsetMs !== null;
  }

  markHelloSent(): void {
    this.helloSentMs = this.localNow();
  }

  markConfigReceived(sessionEpochMs: number): void {
    const received = this.localNow();
    const sent = this.helloSentMs ?? received;
    this.offsetMs = sessionEpochMs - (sent + received) / 2;
  }

  /** Current session-clock time in ms. Throws before handshake completes. */
  nowMs(): number {
    if (this.offsetMs === null) {
      throw new Error("session clock not synchronized");
    }
    return this.localNow() + this.offsetMs;
  }

  /** Convert a local timestamp (ms) captured earlier to session time. */
  toSessionMs(localMs: number): number {
    if (this.offsetMs === null) {
      throw new Error("session clock not synchronized");
    }
    return localMs + this.offsetMs;
  }
}
