/**
 * Chat surface: login box, live transcript, send box, a modal for server
 * warnings, and a persistent banner once the server blocks the user.
 *
 * The view never interprets message content. Counts, masking, and blocking
 * all happen server-side; this class renders frames in arrival order and
 * sends the user's lines upstream verbatim.
 */

import { Frame, isValidUsername, parseFrame, serializeFrame } from "./frames.js";

/** Minimal socket surface the view needs; adapters wrap real WebSockets. */
export interface FrameSocket {
  onopen: (() => void) | null;
  onmessage: ((data: string) => void) | null;
  onclose: (() => void) | null;
  onerror: (() => void) | null;
  send(data: string): void;
  close(): void;
}

export type SocketFactory = (url: string) => FrameSocket;

export interface ChatViewOptions {
  root: ParentNode;
  wsUrl: string;
  socketFactory: SocketFactory;
}

/** The word that ends a session server-side when sent as a bare message. */
const STOP_WORD = "stop";

type Phase =
  | "idle"
  | "connecting"
  | "connected"
  | "leaving"
  | "left"
  | "blocked"
  | "dropped";

function requireElement<T extends Element>(root: ParentNode, id: string): T {
  const el = root.querySelector(`#${id}`);
  if (el === null) {
    throw new Error(`chat view: missing element #${id}`);
  }
  return el as T;
}

export class ChatView {
  private readonly wsUrl: string;
  private readonly socketFactory: SocketFactory;

  private readonly nameInput: HTMLInputElement;
  private readonly connectButton: HTMLButtonElement;
  private readonly loginError: HTMLElement;
  private readonly loginRow: HTMLElement;
  private readonly room: HTMLElement;
  private readonly status: HTMLElement;
  private readonly messages: HTMLUListElement;
  private readonly input: HTMLInputElement;
  private readonly sendButton: HTMLButtonElement;
  private readonly leaveButton: HTMLButtonElement;
  private readonly banner: HTMLElement;
  private readonly modal: HTMLElement;
  private readonly modalText: HTMLElement;
  private readonly modalDismiss: HTMLButtonElement;
  private readonly reconnectPrompt: HTMLElement;
  private readonly reconnectButton: HTMLButtonElement;

  private socket: FrameSocket | null = null;
  private phase: Phase = "idle";
  private username = "";

  constructor(options: ChatViewOptions) {
    this.wsUrl = options.wsUrl;
    this.socketFactory = options.socketFactory;
    const root = options.root;

    this.nameInput = requireElement(root, "chat-name");
    this.connectButton = requireElement(root, "chat-connect");
    this.loginError = requireElement(root, "chat-login-error");
    this.loginRow = requireElement(root, "chat-login");
    this.room = requireElement(root, "chat-room");
    this.status = requireElement(root, "chat-status");
    this.messages = requireElement(root, "chat-messages");
    this.input = requireElement(root, "chat-input");
    this.sendButton = requireElement(root, "chat-send");
    this.leaveButton = requireElement(root, "chat-leave");
    this.banner = requireElement(root, "block-banner");
    this.modal = requireElement(root, "warn-modal");
    this.modalText = requireElement(root, "warn-text");
    this.modalDismiss = requireElement(root, "warn-dismiss");
    this.reconnectPrompt = requireElement(root, "chat-reconnect");
    this.reconnectButton = requireElement(root, "chat-retry");

    this.connectButton.addEventListener("click", () => {
      this.connect(this.nameInput.value.trim());
    });
    this.nameInput.addEventListener("keydown", (event) => {
      if ((event as KeyboardEvent).key === "Enter") {
        this.connect(this.nameInput.value.trim());
      }
    });
    this.sendButton.addEventListener("click", () => this.sendCurrentLine());
    this.input.addEventListener("keydown", (event) => {
      if ((event as KeyboardEvent).key === "Enter") {
        this.sendCurrentLine();
      }
    });
    this.leaveButton.addEventListener("click", () => this.leave());
    this.modalDismiss.addEventListener("click", () => this.hideWarning());
    this.reconnectButton.addEventListener("click", () => {
      this.connect(this.username);
    });
  }

  // ------------------------------------------------------------------
  // connection lifecycle

  connect(name: string): void {
    if (this.phase === "connecting" || this.phase === "connected") {
      return;
    }
    if (!isValidUsername(name)) {
      this.loginError.textContent =
        "Names are 1-32 letters, digits, or underscores.";
      this.loginError.hidden = false;
      return;
    }
    this.username = name;
    this.loginError.hidden = true;
    this.reconnectPrompt.hidden = true;
    this.messages.replaceChildren();
    this.banner.hidden = true;
    this.setPhase("connecting");

    const socket = this.socketFactory(this.wsUrl);
    this.socket = socket;
    socket.onopen = () => {
      socket.send(serializeFrame({ kind: "login", name: this.username }));
      this.setPhase("connected");
    };
    socket.onmessage = (data) => this.receiveRaw(data);
    socket.onclose = () => this.connectionClosed();
    socket.onerror = () => {
      // the close handler decides what to show; nothing to do here
    };
  }

  private leave(): void {
    if (this.socket !== null && this.phase === "connected") {
      this.setPhase("leaving");
      this.socket.send(serializeFrame({ kind: "logout", name: this.username }));
    }
  }

  private connectionClosed(): void {
    this.socket = null;
    if (this.phase === "blocked") {
      return; // the banner already tells the story
    }
    if (this.phase === "leaving") {
      this.setPhase("left");
      return;
    }
    this.setPhase("dropped");
    this.reconnectPrompt.hidden = false;
  }

  private setPhase(phase: Phase): void {
    this.phase = phase;
    switch (phase) {
      case "idle": {
        this.loginRow.hidden = false;
        this.room.hidden = true;
        this.status.textContent = "";
        break;
      }
      case "connecting": {
        this.loginRow.hidden = true;
        this.room.hidden = false;
        this.status.textContent = `Connecting as ${this.username}…`;
        break;
      }
      case "connected": {
        this.status.textContent = `Connected as ${this.username}`;
        this.setComposerEnabled(true);
        break;
      }
      case "leaving": {
        this.status.textContent = "Leaving…";
        break;
      }
      case "left": {
        this.status.textContent = "You left the chat.";
        this.setComposerEnabled(false);
        this.loginRow.hidden = false;
        break;
      }
      case "blocked": {
        this.status.textContent = "Blocked by the server.";
        this.setComposerEnabled(false);
        break;
      }
      case "dropped": {
        this.status.textContent = "Connection lost.";
        this.setComposerEnabled(false);
        break;
      }
    }
  }

  private setComposerEnabled(enabled: boolean): void {
    this.input.disabled = !enabled;
    this.sendButton.disabled = !enabled;
    this.leaveButton.disabled = !enabled;
  }

  // ------------------------------------------------------------------
  // outbound

  private sendCurrentLine(): void {
    const text = this.input.value;
    if (this.socket === null || this.phase !== "connected") {
      return;
    }
    if (text.trim() === "") {
      return;
    }
    if (text.toLowerCase() === STOP_WORD) {
      // the server ends the session on this exact word; leave cleanly
      this.setPhase("leaving");
    }
    this.socket.send(
      serializeFrame({ kind: "message", sender: this.username, text }),
    );
    this.input.value = "";
  }

  // ------------------------------------------------------------------
  // inbound rendering — strictly in arrival order

  private receiveRaw(data: string): void {
    for (const line of data.split("\n")) {
      if (line !== "") {
        this.receiveLine(line);
      }
    }
  }

  private receiveLine(line: string): void {
    const frame = parseFrame(line);
    if (frame === null) {
      return; // a mirror has nothing to say about lines it cannot read
    }
    this.renderFrame(frame);
  }

  private renderFrame(frame: Frame): void {
    switch (frame.kind) {
      case "message": {
        const item = document.createElement("li");
        item.className = "message";
        const sender = document.createElement("span");
        sender.className = "sender";
        sender.textContent = frame.sender;
        item.append(sender, document.createTextNode(` ${frame.text}`));
        this.appendLine(item);
        break;
      }
      case "system": {
        const item = document.createElement("li");
        item.className = "system";
        item.textContent = `* ${frame.text}`;
        this.appendLine(item);
        break;
      }
      case "warn": {
        const item = document.createElement("li");
        item.className = "warn";
        item.textContent = `⚠ ${frame.text}`;
        this.appendLine(item);
        this.showWarning(frame.text);
        break;
      }
      case "block": {
        if (frame.name === this.username) {
          this.showBlockBanner(frame.until);
        } else {
          const item = document.createElement("li");
          item.className = "system";
          item.textContent = `* ${frame.name} is blocked until ${frame.until}`;
          this.appendLine(item);
        }
        break;
      }
      case "login":
      case "logout": {
        break; // the server never pushes these; nothing to render
      }
    }
  }

  private appendLine(item: HTMLLIElement): void {
    this.messages.appendChild(item);
    if (typeof this.messages.scrollTo === "function") {
      this.messages.scrollTo(0, this.messages.scrollHeight);
    }
  }

  private showWarning(text: string): void {
    this.modalText.textContent = text;
    this.modal.hidden = false;
  }

  private hideWarning(): void {
    this.modal.hidden = true;
  }

  private showBlockBanner(until: string): void {
    this.setPhase("blocked");
    this.banner.replaceChildren();
    const headline = document.createElement("strong");
    headline.textContent = "Sorry! You have been blocked";
    const detail = document.createElement("span");
    detail.textContent = ` — until ${until}`;
    this.banner.append(headline, detail);
    this.banner.hidden = false;
  }
}
