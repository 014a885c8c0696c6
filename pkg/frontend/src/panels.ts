/**
 * Per-line suggestion panel and the poem-enhancement view.
 *
 * Both are plain state machines over the API client; rendering consumes
 * their view models. A panel pins the seed returned by the service so
 * the same candidate set can be reproduced; "regenerate" is an explicit
 * new-seed action. At most one request is in flight per panel and
 * responses from superseded requests are discarded.
 */

import {
  ApiClient,
  EnhanceQuatrain,
  EnhanceResponse,
  ServiceError,
  SuggestCandidate,
  SuggestResponse,
} from "./api.js";
import { EditorState } from "./editor.js";

export type CandidateRow = {
  text: string;
  verbBefore: string | null;
  verbAfter: string | null;
  badges: { nll: number; disc: number; similarity: number };
};

export type PanelState =
  | { kind: "idle" }
  | { kind: "disabled"; reason: string }
  | { kind: "loading" }
  | { kind: "ready"; response: SuggestResponse; rows: CandidateRow[] }
  | { kind: "error"; notice: string; retryable: boolean };

export function candidateRows(response: SuggestResponse): CandidateRow[] {
  // rows are rendered exactly in server order, never re-sorted client-side
  return response.candidates.map((c: SuggestCandidate) => ({
    text: c.text,
    verbBefore: c.verb_before,
    verbAfter: c.verb_after,
    badges: { nll: c.nll, disc: c.disc, similarity: c.similarity },
  }));
}

export class SuggestionPanel {
  state: PanelState = { kind: "idle" };
  private requestCounter = 0;
  private pinnedSeed: number | undefined;

  constructor(private readonly api: ApiClient) {}

  get seed(): number | undefined {
    return this.pinnedSeed;
  }

  canRequest(line: string): boolean {
    return line.trim().length > 0;
  }

  /** Fetch candidates for a line, reusing the pinned seed when present. */
  async requestSuggestions(line: string, seed?: number): Promise<PanelState> {
    if (!this.canRequest(line)) {
      this.state = { kind: "disabled", reason: "line is empty" };
      return this.state;
    }
    const requestId = ++this.requestCounter;
    this.state = { kind: "loading" };
    try {
      const response = await this.api.suggest({
        text: line,
        seed: seed ?? this.pinnedSeed,
      });
      if (requestId !== this.requestCounter) {
        return this.state; // superseded; drop the stale response
      }
      this.pinnedSeed = response.seed;
      this.state = {
        kind: "ready",
        response,
        rows: candidateRows(response),
      };
    } catch (err) {
      if (requestId !== this.requestCounter) {
        return this.state;
      }
      const notice =
        err instanceof ServiceError
          ? err.status === 0
            ? "service unreachable; retry when the backend is up"
            : `${err.body?.code ?? "error"}: ${err.body?.message ?? "request failed"}`
          : String(err);
      this.state = {
        kind: "error",
        notice,
        retryable: err instanceof ServiceError && err.status === 0,
      };
    }
    return this.state;
  }

  /** Explicit new-seed action; the old candidate set stays reproducible. */
  regenerate(line: string, newSeed: number): Promise<PanelState> {
    this.pinnedSeed = undefined;
    return this.requestSuggestions(line, newSeed);
  }

  /** Apply one rendered candidate to the document. */
  accept(editor: EditorState, lineIndex: number, row: CandidateRow) {
    return editor.acceptCandidate(lineIndex, row.text);
  }
}

export type DiffCard = {
  quatrainIndex: number;
  before: string[];
  after: string[];
  changed: boolean;
  /** document line index of the changed line, when one exists */
  documentLine: number | null;
  verbBefore: string | null;
  verbAfter: string | null;
};

export type EnhanceViewState =
  | { kind: "idle" }
  | { kind: "disabled"; reason: string }
  | { kind: "loading" }
  | { kind: "ready"; cards: DiffCard[]; droppedLines: number; seed: number }
  | { kind: "error"; notice: string };

const QUATRAIN = 4;

export function buildCards(
  response: EnhanceResponse,
  documentText: string,
): DiffCard[] {
  // the service groups non-blank lines into quatrains in order; map each
  // quatrain position back onto the document's physical line numbers
  const physical: number[] = [];
  documentText.split("\n").forEach((line, index) => {
    if (line.trim().length > 0) {
      physical.push(index);
    }
  });
  return response.quatrains.map((q: EnhanceQuatrain, i: number) => {
    const diff = q.diff[0];
    const base = i * QUATRAIN;
    return {
      quatrainIndex: i,
      before: q.before,
      after: q.after,
      changed: q.diff.length > 0,
      documentLine:
        diff !== undefined ? (physical[base + diff.line_index] ?? null) : null,
      verbBefore: diff?.verb_before ?? null,
      verbAfter: diff?.verb_after ?? null,
    };
  });
}

export class EnhanceView {
  state: EnhanceViewState = { kind: "idle" };

  constructor(private readonly api: ApiClient) {}

  canEnhance(documentText: string): boolean {
    const nonBlank = documentText
      .split("\n")
      .filter((line) => line.trim().length > 0);
    return nonBlank.length >= QUATRAIN;
  }

  async load(documentText: string, seed?: number): Promise<EnhanceViewState> {
    if (!this.canEnhance(documentText)) {
      this.state = {
        kind: "disabled",
        reason: "a poem needs at least four non-blank lines to enhance",
      };
      return this.state;
    }
    this.state = { kind: "loading" };
    try {
      const response = await this.api.enhance(documentText, seed);
      this.state = {
        kind: "ready",
        cards: buildCards(response, documentText),
        droppedLines: response.dropped_lines,
        seed: response.seed,
      };
    } catch (err) {
      const notice =
        err instanceof ServiceError
          ? `${err.body?.code ?? "error"}: ${err.body?.message ?? "enhance failed"}`
          : String(err);
      this.state = { kind: "error", notice };
    }
    return this.state;
  }

  /** Approving a card applies its single changed line to the document. */
  approve(editor: EditorState, card: DiffCard) {
    if (!card.changed || card.documentLine === null) {
      return null;
    }
    const diffLine = card.after.find((line, i) => line !== card.before[i]);
    if (diffLine === undefined) {
      return null;
    }
    return editor.acceptCandidate(card.documentLine, diffLine);
  }
}
