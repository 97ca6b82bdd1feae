import { ClientMessage, ServerMessage, parseServerMessage } from "./protocol.js";

/**
 * Message transport abstraction. The live client uses WebSocketTransport;
 * tests drive the client through MockTransport without any network.
 */
export interface Transport {
  send(message: ClientMessage): void;
  onMessage(handler: (message: ServerMessage) => void): void;
  onClose(handler: () => void): void;
  close(): void;
}

export class WebSocketTransport implements Transport {
  private readonly socket: WebSocket;
  private messageHandler: (m: ServerMessage) => void = () => {};
  private closeHandler: () => void = () => {};
  private readonly queue: ClientMessage[] = [];

  constructor(url: string, onOpen?: () => void) {
    this.socket = new WebSocket(url);
    this.socket.addEventListener("open", () => {
      for (const queued of this.queue.splice(0)) {
        this.socket.send(JSON.stringify(queued));
      }
      onOpen?.();
    });
    this.socket.addEventListener("message", (event) => {
      this.messageHandler(parseServerMessage(String(event.data)));
    });
    this.socket.addEventListener("close", () => this.closeHandler());
    this.socket.addEventListener("error", () => this.closeHandler());
  }

  send(message: ClientMessage): void {
    if (this.socket.readyState === WebSocket.OPEN) {
      this.socket.send(JSON.stringify(message));
    } else {
      this.queue.push(message);
    }
  }

  onMessage(handler: (m: ServerMessage) => void): void {
    this.messageHandler = handler;
  }

  onClose(handler: () => void): void {
    this.closeHandler = handler;
  }

  close(): void {
    this.socket.close();
  }
}

/** In-memory transport for tests: scripts server replies per client kind. */
export class MockTransport implements Transport {
  readonly sent: ClientMessage[] = [];
  private messageHandler: (m: ServerMessage) => void = () => {};
  private closeHandler: () => void = () => {};
  private responders: Array<(m: ClientMessage) => ServerMessage[]> = [];

  /** Register a scripted responder consulted on every client send. */
  respondWith(responder: (m: ClientMessage) => ServerMessage[]): void {
    this.responders.push(responder);
  }

  send(message: ClientMessage): void {
    this.sent.push(message);
    for (const responder of this.responders) {
      for (const reply of responder(message)) {
        this.messageHandler(reply);
      }
    }
  }

  /** Push an unsolicited server message (e.g. period_changed). */
  push(message: ServerMessage): void {
    this.messageHandler(message);
  }

  simulateClose(): void {
    this.closeHandler();
  }

  onMessage(handler: (m: ServerMessage) => void): void {
    this.messageHandler = handler;
  }

  onClose(handler: () => void): void {
    this.closeHandler = handler;
  }

  close(): void {
    this.simulateClose();
  }
}
