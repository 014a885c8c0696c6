import { readFileSync } from "node:fs";
import { dirname, join } from "node:path";
import { fileURLToPath } from "node:url";

import { describe, expect, it } from "vitest";

import {
  ApiClient,
  EnhanceResponse,
  FetchLike,
  SuggestResponse,
} from "../src/api.js";
import { EditorState } from "../src/editor.js";
import { EnhanceView, SuggestionPanel, buildCards } from "../src/panels.js";
import { renderEnhanceView, renderPanel } from "../src/render.js";

const FIXTURES = join(
  dirname(fileURLToPath(import.meta.url)),
  "..", "..", "tests", "fixtures",
);

const goldenSuggest = JSON.parse(
  readFileSync(join(FIXTURES, "golden_suggest.json"), "utf-8"),
) as SuggestResponse;
const goldenEnhance = JSON.parse(
  readFileSync(join(FIXTURES, "golden_enhance.json"), "utf-8"),
) as EnhanceResponse;
const poem8 = readFileSync(join(FIXTURES, "poem_8.txt"), "utf-8").trimEnd();

function stubFetch(
  handler: (url: string, body: unknown) => { status: number; payload: unknown },
): FetchLike {
  return async (url, init) => {
    const body = init?.body ? JSON.parse(init.body) : undefined;
    const { status, payload } = handler(url, body);
    return { status, json: async () => payload };
  };
}

function suggestClient(response: SuggestResponse = goldenSuggest): ApiClient {
  return new ApiClient(
    "http://stub",
    stubFetch(() => ({ status: 200, payload: response })),
  );
}

describe("SuggestionPanel", () => {
  it("renders exactly the served candidates in server order", async () => {
    const panel = new SuggestionPanel(suggestClient());
    const state = await panel.requestSuggestions(goldenSuggest.input);
    expect(state.kind).toBe("ready");
    if (state.kind !== "ready") return;
    expect(state.rows.map((r) => r.text)).toEqual(
      goldenSuggest.candidates.map((c) => c.text),
    );
    const html = renderPanel(state);
    const positions = goldenSuggest.candidates.map((c) =>
      html.indexOf(`>${c.text.replace(/&/g, "&amp;")}<`),
    );
    expect(positions.every((p) => p >= 0)).toBe(true);
    expect([...positions].sort((a, b) => a - b)).toEqual(positions);
  });

  it("shows the score badges per candidate", async () => {
    const panel = new SuggestionPanel(suggestClient());
    const state = await panel.requestSuggestions(goldenSuggest.input);
    if (state.kind !== "ready") throw new Error("expected ready");
    const html = renderPanel(state);
    expect(html).toContain("nll ");
    expect(html).toContain("met ");
    expect(html).toContain("sim ");
  });

  it("pins the served seed and reuses it for the next request", async () => {
    const seeds: Array<number | undefined> = [];
    const client = new ApiClient(
      "http://stub",
      stubFetch((_url, body) => {
        seeds.push((body as { seed?: number }).seed);
        return { status: 200, payload: goldenSuggest };
      }),
    );
    const panel = new SuggestionPanel(client);
    await panel.requestSuggestions(goldenSuggest.input);
    await panel.requestSuggestions(goldenSuggest.input);
    expect(seeds).toEqual([undefined, goldenSuggest.seed]);
    expect(panel.seed).toBe(goldenSuggest.seed);
  });

  it("regenerate is an explicit new-seed action", async () => {
    const seeds: Array<number | undefined> = [];
    const client = new ApiClient(
      "http://stub",
      stubFetch((_url, body) => {
        seeds.push((body as { seed?: number }).seed);
        return { status: 200, payload: goldenSuggest };
      }),
    );
    const panel = new SuggestionPanel(client);
    await panel.requestSuggestions(goldenSuggest.input);
    await panel.regenerate(goldenSuggest.input, 12345);
    expect(seeds).toEqual([undefined, 12345]);
  });

  it("empty line disables the action without a request", async () => {
    let called = 0;
    const client = new ApiClient(
      "http://stub",
      stubFetch(() => {
        called += 1;
        return { status: 200, payload: goldenSuggest };
      }),
    );
    const panel = new SuggestionPanel(client);
    expect(panel.canRequest("   ")).toBe(false);
    const state = await panel.requestSuggestions("   ");
    expect(state.kind).toBe("disabled");
    expect(called).toBe(0);
    expect(renderPanel(state)).toContain("line is empty");
  });

  it("backend down produces a retry notice and leaves the document alone", async () => {
    const client = new ApiClient("http://stub", async () => {
      throw new Error("connection refused");
    });
    const editor = new EditorState("The scream filled the night");
    const panel = new SuggestionPanel(client);
    const state = await panel.requestSuggestions(editor.getLine(0));
    expect(state.kind).toBe("error");
    if (state.kind !== "error") return;
    expect(state.retryable).toBe(true);
    expect(renderPanel(state)).toContain("retry");
    expect(editor.document).toBe("The scream filled the night");
    expect(editor.history).toHaveLength(0);
  });

  it("4xx errors surface as inline notices", async () => {
    const client = new ApiClient(
      "http://stub",
      stubFetch(() => ({
        status: 422,
        payload: { code: "no-verb", message: "no verb found in the input" },
      })),
    );
    const panel = new SuggestionPanel(client);
    const state = await panel.requestSuggestions("night night night");
    expect(state.kind).toBe("error");
    if (state.kind !== "error") return;
    expect(state.notice).toContain("no-verb");
    expect(state.retryable).toBe(false);
  });

  it("discards stale responses from superseded requests", async () => {
    const gate: Array<() => void> = [];
    const first: SuggestResponse = {
      ...goldenSuggest,
      seed: 1,
      candidates: [goldenSuggest.candidates[0]!],
    };
    let call = 0;
    const client = new ApiClient("http://stub", async () => {
      const mine = ++call;
      await new Promise<void>((resolve) => gate.push(resolve));
      return {
        status: 200,
        json: async () => (mine === 1 ? first : goldenSuggest),
      };
    });
    const panel = new SuggestionPanel(client);
    const p1 = panel.requestSuggestions(goldenSuggest.input, 1);
    const p2 = panel.requestSuggestions(goldenSuggest.input, 7);
    // resolve in reverse: the newer request lands first, then the stale one
    gate[1]!();
    await p2;
    gate[0]!();
    await p1;
    expect(panel.state.kind).toBe("ready");
    if (panel.state.kind !== "ready") return;
    expect(panel.state.response.seed).toBe(goldenSuggest.seed);
    expect(panel.state.rows).toHaveLength(goldenSuggest.candidates.length);
  });

  it("accepting a rendered candidate replaces exactly that line", async () => {
    const editor = new EditorState(`intro line\n${goldenSuggest.input}\noutro`);
    const panel = new SuggestionPanel(suggestClient());
    const state = await panel.requestSuggestions(editor.getLine(1));
    if (state.kind !== "ready") throw new Error("expected ready");
    panel.accept(editor, 1, state.rows[2]!);
    expect(editor.getLine(1)).toBe(goldenSuggest.candidates[2]!.text);
    expect(editor.getLine(0)).toBe("intro line");
    editor.undo();
    expect(editor.document).toBe(`intro line\n${goldenSuggest.input}\noutro`);
  });
});

describe("EnhanceView", () => {
  const enhanceClient = new ApiClient(
    "http://stub",
    stubFetch((url) => {
      if (!url.endsWith("/enhance")) throw new Error(`unexpected ${url}`);
      return { status: 200, payload: goldenEnhance };
    }),
  );

  it("shows one diff card per quatrain on the 8-line fixture", async () => {
    const view = new EnhanceView(enhanceClient);
    const state = await view.load(poem8, 7);
    expect(state.kind).toBe("ready");
    if (state.kind !== "ready") return;
    expect(state.cards).toHaveLength(goldenEnhance.quatrains.length);
    expect(state.cards).toHaveLength(2);
    const html = renderEnhanceView(state);
    expect(html.match(/class="diff-card"/g)).toHaveLength(2);
  });

  it("disables enhancement for short documents with an explanation", async () => {
    const view = new EnhanceView(enhanceClient);
    expect(view.canEnhance("one\ntwo\nthree")).toBe(false);
    const state = await view.load("one\ntwo\nthree");
    expect(state.kind).toBe("disabled");
    expect(renderEnhanceView(state)).toContain("at least four");
  });

  it("reject-all leaves the document unchanged", async () => {
    const editor = new EditorState(poem8);
    const view = new EnhanceView(enhanceClient);
    await view.load(poem8, 7);
    expect(editor.document).toBe(poem8);
    expect(editor.history).toHaveLength(0);
  });

  it("approving a card applies its single changed line", async () => {
    const editor = new EditorState(poem8);
    const view = new EnhanceView(enhanceClient);
    const state = await view.load(poem8, 7);
    if (state.kind !== "ready") throw new Error("expected ready");
    const card = state.cards[0]!;
    expect(card.changed).toBe(true);
    view.approve(editor, card);
    const diff = goldenEnhance.quatrains[0]!.diff[0]!;
    expect(editor.getLine(diff.line_index)).toBe(diff.after);
    editor.undo();
    expect(editor.document).toBe(poem8);
  });

  it("maps quatrain lines past blank lines to document positions", () => {
    const spaced = poem8.split("\n");
    spaced.splice(4, 0, "", "  ");
    const cards = buildCards(goldenEnhance, spaced.join("\n"));
    // second quatrain starts after the inserted blanks: line 4 -> 6
    expect(cards[1]!.documentLine).toBe(6);
  });
});
