/**
 * Wire frame grammar of the chat server: one UTF-8 line per frame,
 * `verb#payload`, at most 64 KiB. The console is a pure mirror — it
 * renders what the server says and never computes moderation itself.
 */

export const MAX_FRAME_BYTES = 64 * 1024;

const USERNAME_RE = /^[A-Za-z0-9_]{1,32}$/;

export type Frame =
  | { kind: "login"; name: string }
  | { kind: "message"; sender: string; text: string }
  | { kind: "logout"; name: string }
  | { kind: "warn"; text: string }
  | { kind: "block"; name: string; until: string }
  | { kind: "system"; text: string };

export function isValidUsername(name: string): boolean {
  return USERNAME_RE.test(name);
}

function isValidText(text: string): boolean {
  return !text.includes("\n") && !text.includes("\r");
}

const encoder = new TextEncoder();

function byteLength(line: string): number {
  return encoder.encode(line).length;
}

/** Split `payload` on the first ": " into [name, rest], or null. */
function splitNamePayload(payload: string): [string, string] | null {
  const at = payload.indexOf(": ");
  if (at < 0) {
    return null;
  }
  return [payload.slice(0, at), payload.slice(at + 2)];
}

/**
 * Parse one line into a Frame, or null when the line is malformed.
 * Total: never throws on any string input.
 */
export function parseFrame(line: string): Frame | null {
  if (byteLength(line) > MAX_FRAME_BYTES) {
    return null;
  }
  if (!isValidText(line)) {
    return null;
  }
  const hash = line.indexOf("#");
  if (hash < 0) {
    return null;
  }
  const verb = line.slice(0, hash);
  const payload = line.slice(hash + 1);
  switch (verb) {
    case "login": {
      return isValidUsername(payload) ? { kind: "login", name: payload } : null;
    }
    case "logout": {
      return isValidUsername(payload) ? { kind: "logout", name: payload } : null;
    }
    case "warn": {
      return { kind: "warn", text: payload };
    }
    case "system": {
      return { kind: "system", text: payload };
    }
    case "message": {
      const parts = splitNamePayload(payload);
      if (parts === null || !isValidUsername(parts[0])) {
        return null;
      }
      return { kind: "message", sender: parts[0], text: parts[1] };
    }
    case "block": {
      const parts = splitNamePayload(payload);
      if (parts === null || !isValidUsername(parts[0]) || parts[1] === "") {
        return null;
      }
      return { kind: "block", name: parts[0], until: parts[1] };
    }
    default: {
      return null;
    }
  }
}

/** Render a Frame back to its wire line. Throws on invalid field values. */
export function serializeFrame(frame: Frame): string {
  let line: string;
  switch (frame.kind) {
    case "login":
    case "logout": {
      if (!isValidUsername(frame.name)) {
        throw new Error(`invalid username: ${JSON.stringify(frame.name)}`);
      }
      line = `${frame.kind}#${frame.name}`;
      break;
    }
    case "warn":
    case "system": {
      if (!isValidText(frame.text)) {
        throw new Error("frame text must not contain newlines");
      }
      line = `${frame.kind}#${frame.text}`;
      break;
    }
    case "message": {
      if (!isValidUsername(frame.sender)) {
        throw new Error(`invalid username: ${JSON.stringify(frame.sender)}`);
      }
      if (!isValidText(frame.text)) {
        throw new Error("frame text must not contain newlines");
      }
      line = `message#${frame.sender}: ${frame.text}`;
      break;
    }
    case "block": {
      if (!isValidUsername(frame.name)) {
        throw new Error(`invalid username: ${JSON.stringify(frame.name)}`);
      }
      if (frame.until === "" || !isValidText(frame.until)) {
        throw new Error("block frame needs a single-line, non-empty expiry");
      }
      line = `block#${frame.name}: ${frame.until}`;
      break;
    }
  }
  if (byteLength(line) > MAX_FRAME_BYTES) {
    throw new Error("frame exceeds 64 KiB");
  }
  return line;
}
