/**
 * Admin dashboard: a polled table of user flame state, a form that adds
 * censor words live, and per-user unblock/reset actions.
 *
 * All numbers shown come straight from the server's responses — the
 * dashboard computes nothing itself. No API call is made until a token
 * has been entered; a 401 at any point returns to the token prompt.
 */

import { AdminClient, AuthError, UserRow } from "./api.js";

export interface AdminViewOptions {
  root: ParentNode;
  makeApi: (token: string) => AdminClient;
  /** Table refresh period; the dashboard default is 2 s. */
  pollIntervalMs?: number;
}

function requireElement<T extends Element>(root: ParentNode, id: string): T {
  const el = root.querySelector(`#${id}`);
  if (el === null) {
    throw new Error(`admin view: missing element #${id}`);
  }
  return el as T;
}

const CATEGORIES = ["offensive", "hostile", "aggressive", "uninhibited"];

export class AdminView {
  private readonly makeApi: (token: string) => AdminClient;
  private readonly pollIntervalMs: number;

  private readonly auth: HTMLElement;
  private readonly tokenInput: HTMLInputElement;
  private readonly unlockButton: HTMLButtonElement;
  private readonly authError: HTMLElement;
  private readonly dash: HTMLElement;
  private readonly wordInput: HTMLInputElement;
  private readonly categorySelect: HTMLSelectElement;
  private readonly addButton: HTMLButtonElement;
  private readonly confirmation: HTMLElement;
  private readonly toast: HTMLElement;
  private readonly userRows: HTMLTableSectionElement;
  private readonly emptyState: HTMLElement;

  private api: AdminClient | null = null;
  private timer: ReturnType<typeof setInterval> | null = null;

  constructor(options: AdminViewOptions) {
    this.makeApi = options.makeApi;
    this.pollIntervalMs = options.pollIntervalMs ?? 2000;
    const root = options.root;

    this.auth = requireElement(root, "admin-auth");
    this.tokenInput = requireElement(root, "admin-token");
    this.unlockButton = requireElement(root, "admin-unlock");
    this.authError = requireElement(root, "admin-auth-error");
    this.dash = requireElement(root, "admin-dash");
    this.wordInput = requireElement(root, "add-word");
    this.categorySelect = requireElement(root, "add-category");
    this.addButton = requireElement(root, "add-word-btn");
    this.confirmation = requireElement(root, "admin-confirm");
    this.toast = requireElement(root, "admin-toast");
    this.userRows = requireElement(root, "user-rows");
    this.emptyState = requireElement(root, "user-empty");

    for (const category of CATEGORIES) {
      const option = document.createElement("option");
      option.value = category;
      option.textContent = category;
      this.categorySelect.appendChild(option);
    }

    this.unlockButton.addEventListener("click", () => {
      void this.unlock(this.tokenInput.value.trim());
    });
    this.tokenInput.addEventListener("keydown", (event) => {
      if ((event as KeyboardEvent).key === "Enter") {
        void this.unlock(this.tokenInput.value.trim());
      }
    });
    this.addButton.addEventListener("click", () => {
      void this.submitWord();
    });
  }

  // ------------------------------------------------------------------
  // authentication

  async unlock(token: string): Promise<void> {
    if (token === "") {
      this.authError.textContent = "Enter the admin token.";
      this.authError.hidden = false;
      return;
    }
    const api = this.makeApi(token);
    try {
      const users = await api.listUsers();
      this.api = api;
      this.authError.hidden = true;
      this.auth.hidden = true;
      this.dash.hidden = false;
      this.renderUsers(users);
      this.startPolling();
    } catch (error) {
      if (error instanceof AuthError) {
        this.authError.textContent = "Token rejected — try again.";
        this.authError.hidden = false;
      } else {
        this.authError.textContent = `Server unreachable: ${String(error)}`;
        this.authError.hidden = false;
      }
    }
  }

  private returnToAuth(): void {
    this.stopPolling();
    this.api = null;
    this.dash.hidden = true;
    this.auth.hidden = false;
    this.authError.textContent = "Session rejected — enter the token again.";
    this.authError.hidden = false;
  }

  // ------------------------------------------------------------------
  // polling

  startPolling(): void {
    this.stopPolling();
    this.timer = setInterval(() => {
      void this.refreshUsers();
    }, this.pollIntervalMs);
  }

  stopPolling(): void {
    if (this.timer !== null) {
      clearInterval(this.timer);
      this.timer = null;
    }
  }

  async refreshUsers(): Promise<void> {
    if (this.api === null) {
      return;
    }
    try {
      this.renderUsers(await this.api.listUsers());
      this.toast.hidden = true;
    } catch (error) {
      this.handleError(error);
    }
  }

  // ------------------------------------------------------------------
  // rendering

  private renderUsers(users: UserRow[]): void {
    this.userRows.replaceChildren();
    this.emptyState.hidden = users.length > 0;
    for (const user of users) {
      this.userRows.appendChild(this.renderRow(user));
    }
  }

  private renderRow(user: UserRow): HTMLTableRowElement {
    const row = document.createElement("tr");
    row.dataset.name = user.name;
    if (user.blocked) {
      row.className = "blocked";
    } else if (user.hostile) {
      row.className = "hostile";
    }

    const name = document.createElement("td");
    name.textContent = user.name;

    const count = document.createElement("td");
    count.className = "count";
    count.textContent = String(user.count);

    const intensity = document.createElement("td");
    intensity.className = "intensity";
    const meter = document.createElement("span");
    meter.className = "meter";
    meter.style.width = `${user.intensity * 10}%`;
    const value = document.createElement("span");
    value.className = "meter-value";
    value.textContent = String(user.intensity);
    const track = document.createElement("span");
    track.className = "meter-track";
    track.appendChild(meter);
    intensity.append(track, value);

    const hostile = document.createElement("td");
    hostile.className = "hostile-flag";
    hostile.textContent = user.hostile ? "hostile" : "";

    const blockedUntil = document.createElement("td");
    blockedUntil.className = "blocked-until";
    blockedUntil.textContent = user.blocked_until ?? "—";

    const actions = document.createElement("td");
    actions.className = "actions";
    const unblock = document.createElement("button");
    unblock.textContent = "unblock";
    unblock.disabled = !user.blocked;
    unblock.addEventListener("click", () => {
      void this.runAction(() => this.api!.unblock(user.name));
    });
    const reset = document.createElement("button");
    reset.textContent = "reset";
    reset.addEventListener("click", () => {
      void this.runAction(() => this.api!.reset(user.name));
    });
    actions.append(unblock, reset);

    row.append(name, count, intensity, hostile, blockedUntil, actions);
    return row;
  }

  // ------------------------------------------------------------------
  // actions

  private async runAction(action: () => Promise<void>): Promise<void> {
    if (this.api === null) {
      return;
    }
    try {
      await action();
      await this.refreshUsers();
    } catch (error) {
      this.handleError(error);
    }
  }

  async submitWord(): Promise<void> {
    if (this.api === null) {
      return;
    }
    const word = this.wordInput.value.trim();
    if (word === "") {
      return;
    }
    try {
      const result = await this.api.addWord(word, this.categorySelect.value);
      this.confirmation.textContent = result.created
        ? `Added “${result.word}” — lexicon now has ${result.lexicon_size} entries.`
        : `“${result.word}” was already listed (${result.lexicon_size} entries).`;
      this.confirmation.hidden = false;
      this.wordInput.value = "";
    } catch (error) {
      this.handleError(error);
    }
  }

  private handleError(error: unknown): void {
    if (error instanceof AuthError) {
      this.returnToAuth();
      return;
    }
    this.toast.textContent = `Request failed: ${String(error)}`;
    this.toast.hidden = false;
  }
}
