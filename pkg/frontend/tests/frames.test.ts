import { describe, expect, test } from "vitest";

import {
  Frame,
  MAX_FRAME_BYTES,
  isValidUsername,
  parseFrame,
  serializeFrame,
} from "../src/frames.js";

// Wire lines and their decoded forms, mirrored from the server's codec.
const GOLDEN: Array<[string, Frame]> = [
  ["login#JOHN", { kind: "login", name: "JOHN" }],
  [
    "message#MARY: you asshole",
    { kind: "message", sender: "MARY", text: "you asshole" },
  ],
  [
    "warn#Sorry can't send the censor words",
    { kind: "warn", text: "Sorry can't send the censor words" },
  ],
  [
    "block#JOHN: 2026-01-15T12:00:00Z",
    { kind: "block", name: "JOHN", until: "2026-01-15T12:00:00Z" },
  ],
  ["system#MARY connected", { kind: "system", text: "MARY connected" }],
  ["logout#JOHN", { kind: "logout", name: "JOHN" }],
];

describe("golden frames", () => {
  test.each(GOLDEN)("parse %s", (line, frame) => {
    expect(parseFrame(line)).toEqual(frame);
  });

  test.each(GOLDEN)("serialize back to %s", (line, frame) => {
    expect(serializeFrame(frame)).toBe(line);
  });
});

describe("payload edges", () => {
  test("hash inside text survives", () => {
    expect(parseFrame("message#JOHN: a#b")).toEqual({
      kind: "message",
      sender: "JOHN",
      text: "a#b",
    });
  });

  test("separator inside text belongs to the text", () => {
    expect(parseFrame("message#JOHN: note: details")).toEqual({
      kind: "message",
      sender: "JOHN",
      text: "note: details",
    });
  });

  test("empty message text is a frame", () => {
    expect(parseFrame("message#JOHN: ")).toEqual({
      kind: "message",
      sender: "JOHN",
      text: "",
    });
  });

  test("empty warn and system texts are frames", () => {
    expect(parseFrame("warn#")).toEqual({ kind: "warn", text: "" });
    expect(parseFrame("system#")).toEqual({ kind: "system", text: "" });
  });

  test("trailing spaces are preserved", () => {
    expect(parseFrame("message#JOHN: hi  ")).toEqual({
      kind: "message",
      sender: "JOHN",
      text: "hi  ",
    });
  });
});

describe("malformed lines", () => {
  test.each([
    "",
    "no delimiter here",
    "shout#TEXT",
    "LOGIN#JOHN",
    "Message#JOHN: hi",
    "#payload",
    "login#",
    "login#bad name",
    "login#" + "x".repeat(33),
    "login#na-me",
    "message#JOHN hi",
    "message#JOHN:hi",
    "message#: hi",
    "message#bad name: hi",
    "block#JOHN: ",
    "block#JOHN",
    "warn#two\nlines",
    "warn#carriage\rreturn",
  ])("rejects %j", (line) => {
    expect(parseFrame(line)).toBeNull();
  });
});

describe("size limit", () => {
  test("a frame of exactly 64 KiB parses", () => {
    const line = "warn#" + "a".repeat(MAX_FRAME_BYTES - "warn#".length);
    expect(parseFrame(line)).not.toBeNull();
  });

  test("one byte over is rejected", () => {
    const line = "warn#" + "a".repeat(MAX_FRAME_BYTES - "warn#".length + 1);
    expect(parseFrame(line)).toBeNull();
  });

  test("multibyte characters count as bytes, not characters", () => {
    // 3 bytes each in UTF-8: 30,000 characters -> 90,000 bytes > 64 KiB
    const line = "warn#" + "中".repeat(30_000);
    expect(parseFrame(line)).toBeNull();
  });

  test("serialize refuses overlong frames", () => {
    expect(() =>
      serializeFrame({
        kind: "warn",
        text: "a".repeat(MAX_FRAME_BYTES),
      }),
    ).toThrow(/64 KiB/);
  });
});

describe("serialize validation", () => {
  test("bad usernames are rejected", () => {
    expect(() => serializeFrame({ kind: "login", name: "bad name" })).toThrow(
      /username/,
    );
    expect(() =>
      serializeFrame({ kind: "message", sender: "", text: "hi" }),
    ).toThrow(/username/);
  });

  test("newlines in text are rejected", () => {
    expect(() => serializeFrame({ kind: "warn", text: "a\nb" })).toThrow(
      /newline/,
    );
  });

  test("empty block expiry is rejected", () => {
    expect(() =>
      serializeFrame({ kind: "block", name: "JOHN", until: "" }),
    ).toThrow(/expiry/);
  });
});

describe("username grammar", () => {
  test.each(["J", "JOHN", "a_1", "x".repeat(32)])("accepts %s", (name) => {
    expect(isValidUsername(name)).toBe(true);
  });

  test.each(["", " ", "x".repeat(33), "na-me", "na me", "ünicode"])(
    "rejects %j",
    (name) => {
      expect(isValidUsername(name)).toBe(false);
    },
  );
});

describe("round trip", () => {
  test("parse(serialize(frame)) is the identity on generated frames", () => {
    // deterministic linear-congruential generator; no RNG seeding APIs needed
    let seed = 0x5eed;
    const rand = (bound: number) => {
      seed = (seed * 1103515245 + 12345) & 0x7fffffff;
      return seed % bound;
    };
    const nameAlphabet =
      "ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789_";
    const textAlphabet = "abc XYZ#:*,!?0129éÿ中……";
    const randName = () => {
      const length = 1 + rand(32);
      let out = "";
      for (let i = 0; i < length; i += 1) {
        out += nameAlphabet[rand(nameAlphabet.length)];
      }
      return out;
    };
    const randText = (minLength: number) => {
      const length = minLength + rand(40);
      let out = "";
      for (let i = 0; i < length; i += 1) {
        out += textAlphabet[rand(textAlphabet.length)];
      }
      return out;
    };

    for (let i = 0; i < 2_000; i += 1) {
      let frame: Frame;
      switch (i % 6) {
        case 0:
          frame = { kind: "login", name: randName() };
          break;
        case 1:
          frame = { kind: "message", sender: randName(), text: randText(0) };
          break;
        case 2:
          frame = { kind: "logout", name: randName() };
          break;
        case 3:
          frame = { kind: "warn", text: randText(0) };
          break;
        case 4:
          frame = { kind: "block", name: randName(), until: randText(1) };
          break;
        default:
          frame = { kind: "system", text: randText(0) };
          break;
      }
      expect(parseFrame(serializeFrame(frame))).toEqual(frame);
    }
  });
});
