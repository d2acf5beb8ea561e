import { readFileSync } from "node:fs";
import { join } from "node:path";

import type { FrameSocket, SocketFactory } from "../src/chatView.js";

// vitest's root is the frontend directory; import.meta.url is unusable
// here because the DOM test environment rewrites module URLs to http:.
export const FRONTEND_ROOT = process.cwd();

/** Load the real page body into jsdom so tests run against shipped markup. */
export function mountPage(): void {
  const html = readFileSync(
    join(FRONTEND_ROOT, "public", "index.html"),
    "utf8",
  );
  const open = html.indexOf("<body>") + "<body>".length;
  const close = html.indexOf("</body>");
  document.body.innerHTML = html.slice(open, close);
  // both panes visible during tests; tab switching is wired by main.ts
  for (const pane of document.querySelectorAll<HTMLElement>(".tab-pane")) {
    pane.hidden = false;
  }
}

/** Scripted stand-in for a WebSocket: tests emit events and read sends. */
export class FakeSocket implements FrameSocket {
  onopen: (() => void) | null = null;
  onmessage: ((data: string) => void) | null = null;
  onclose: (() => void) | null = null;
  onerror: (() => void) | null = null;
  readonly sent: string[] = [];
  closed = false;

  constructor(readonly url: string) {}

  send(data: string): void {
    this.sent.push(data);
  }

  close(): void {
    this.closed = true;
  }

  open(): void {
    this.onopen?.();
  }

  receive(data: string): void {
    this.onmessage?.(data);
  }

  drop(): void {
    this.onclose?.();
  }
}

export function fakeSocketFactory(): {
  sockets: FakeSocket[];
  factory: SocketFactory;
} {
  const sockets: FakeSocket[] = [];
  const factory: SocketFactory = (url) => {
    const socket = new FakeSocket(url);
    sockets.push(socket);
    return socket;
  };
  return { sockets, factory };
}

/** Poll until `condition` holds; fail loudly on timeout. */
export async function until(
  condition: () => boolean,
  what: string,
  timeoutMs = 10_000,
): Promise<void> {
  const deadline = Date.now() + timeoutMs;
  while (Date.now() < deadline) {
    if (condition()) {
      return;
    }
    await new Promise((resolve) => setTimeout(resolve, 20));
  }
  throw new Error(`timed out waiting for ${what}`);
}

export function transcriptLines(): string[] {
  return Array.from(
    document.querySelectorAll<HTMLLIElement>("#chat-messages li"),
  ).map((li) => li.textContent ?? "");
}
