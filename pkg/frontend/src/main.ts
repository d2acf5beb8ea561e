/**
 * Page bootstrap: wires the chat and admin views to the document and
 * adapts the browser WebSocket to the views' socket interface.
 */

import { AdminApi } from "./api.js";
import { AdminView } from "./adminView.js";
import { ChatView, FrameSocket, SocketFactory } from "./chatView.js";

const browserSocketFactory: SocketFactory = (url) => {
  const ws = new WebSocket(url);
  const shim: FrameSocket = {
    onopen: null,
    onmessage: null,
    onclose: null,
    onerror: null,
    send: (data) => ws.send(data),
    close: () => ws.close(),
  };
  ws.onopen = () => shim.onopen?.();
  ws.onmessage = (event) => shim.onmessage?.(String(event.data));
  ws.onclose = () => shim.onclose?.();
  ws.onerror = () => shim.onerror?.();
  return shim;
};

function wsUrlFromLocation(): string {
  const scheme = location.protocol === "https:" ? "wss:" : "ws:";
  return `${scheme}//${location.host}/ws`;
}

function wireTabs(): void {
  const buttons = Array.from(
    document.querySelectorAll<HTMLButtonElement>(".tab-btn"),
  );
  const panes = Array.from(
    document.querySelectorAll<HTMLElement>(".tab-pane"),
  );
  for (const button of buttons) {
    button.addEventListener("click", () => {
      for (const other of buttons) {
        other.classList.toggle("active", other === button);
      }
      for (const pane of panes) {
        pane.hidden = pane.id !== button.dataset.target;
      }
    });
  }
}

export function boot(): void {
  wireTabs();
  new ChatView({
    root: document,
    wsUrl: wsUrlFromLocation(),
    socketFactory: browserSocketFactory,
  });
  new AdminView({
    root: document,
    makeApi: (token) => new AdminApi(token),
  });
}

boot();
