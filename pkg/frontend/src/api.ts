/**
 * Thin client for the chat server's HTTP admin API. Every call carries the
 * bearer token; a 401 raises AuthError so views can prompt for re-auth.
 */

export interface UserRow {
  name: string;
  count: number;
  intensity: number;
  hostile: boolean;
  blocked: boolean;
  blocked_until: string | null;
  tallies: Record<string, number>;
}

export interface LexiconEntry {
  word: string;
  category: string;
}

export interface AddWordResult {
  word: string;
  created: boolean;
  lexicon_size: number;
}

export interface ModerationVerdict {
  action: string;
  masked_text: string;
  new_count: number;
  intensity: number;
  matched: string[];
}

export class AuthError extends Error {
  constructor() {
    super("admin token rejected");
    this.name = "AuthError";
  }
}

export class ApiError extends Error {
  constructor(
    public readonly status: number,
    detail: string,
  ) {
    super(`API error ${status}: ${detail}`);
    this.name = "ApiError";
  }
}

export type FetchLike = typeof fetch;

/** The slice of the admin API a dashboard needs; lets tests fake it. */
export interface AdminClient {
  listUsers(): Promise<UserRow[]>;
  listLexicon(): Promise<{ count: number; entries: LexiconEntry[] }>;
  addWord(word: string, category: string): Promise<AddWordResult>;
  unblock(name: string): Promise<void>;
  reset(name: string): Promise<void>;
}

export class AdminApi implements AdminClient {
  constructor(
    private readonly token: string,
    private readonly base: string = "",
    private readonly fetchImpl: FetchLike = (...args) => fetch(...args),
  ) {}

  private async request(
    method: "GET" | "POST",
    path: string,
    body?: unknown,
  ): Promise<unknown> {
    const headers: Record<string, string> = {
      Authorization: `Bearer ${this.token}`,
    };
    if (body !== undefined) {
      headers["Content-Type"] = "application/json";
    }
    const response = await this.fetchImpl(this.base + path, {
      method,
      headers,
      body: body === undefined ? undefined : JSON.stringify(body),
    });
    if (response.status === 401) {
      throw new AuthError();
    }
    if (!response.ok) {
      let detail = response.statusText;
      try {
        detail = JSON.stringify(await response.json());
      } catch {
        // keep the status text when the body is not JSON
      }
      throw new ApiError(response.status, detail);
    }
    return response.json();
  }

  async listUsers(): Promise<UserRow[]> {
    const data = (await this.request("GET", "/users")) as { users: UserRow[] };
    return data.users;
  }

  async listLexicon(): Promise<{ count: number; entries: LexiconEntry[] }> {
    return (await this.request("GET", "/lexicon")) as {
      count: number;
      entries: LexiconEntry[];
    };
  }

  async addWord(word: string, category: string): Promise<AddWordResult> {
    return (await this.request("POST", "/lexicon", {
      word,
      category,
    })) as AddWordResult;
  }

  async unblock(name: string): Promise<void> {
    await this.request("POST", `/users/${encodeURIComponent(name)}/unblock`);
  }

  async reset(name: string): Promise<void> {
    await this.request("POST", `/users/${encodeURIComponent(name)}/reset`);
  }

  async moderate(author: string, text: string): Promise<ModerationVerdict> {
    return (await this.request("POST", "/moderate", {
      author,
      text,
    })) as ModerationVerdict;
  }
}
