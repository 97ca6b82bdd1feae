import { KeyboardClient } from "./client.js";
import { Renderer } from "./render.js";
import { WebSocketTransport } from "./transport.js";

/**
 * Browser entry point. Configuration via query parameters:
 *   ?host=127.0.0.1&port=8765&switch=KeyJ
 * The single switch is the spacebar, any mouse button, or the configured
 * `switch` key code.
 */
function start(): void {
  const params = new URLSearchParams(window.location.search);
  const host = params.get("host") ?? "127.0.0.1";
  const port = params.get("port") ?? "8765";
  const switchKey = params.get("switch") ?? "KeyJ";

  const canvas = document.getElementById("keyboard") as HTMLCanvasElement;
  canvas.width = window.innerWidth;
  canvas.height = window.innerHeight;

  const transport = new WebSocketTransport(`ws://${host}:${port}/`, () =>
    client.start(),
  );
  const client = new KeyboardClient(transport);
  const renderer = new Renderer(canvas, client);
  renderer.start();

  const actuate = () => client.captureClick();
  window.addEventListener("keydown", (event) => {
    if (event.code === "Space" || event.code === switchKey) {
      event.preventDefault();
      actuate();
    }
  });
  window.addEventListener("mousedown", actuate);

  window.addEventListener("resize", () => {
    canvas.width = window.innerWidth;
    canvas.height = window.innerHeight;
  });
}

start();
