/**
 * Document state for the studio: lines, explicit accepts, and an undo
 * history that restores prior text byte-exactly. Nothing mutates the
 * document except acceptCandidate/applyLine and undo.
 */

export type HistoryEntry = {
  lineIndex: number;
  before: string;
  after: string;
};

export class EditorState {
  private lines: string[];
  private undoStack: HistoryEntry[] = [];

  constructor(text: string) {
    this.lines = text.split("\n");
  }

  get document(): string {
    return this.lines.join("\n");
  }

  get lineCount(): number {
    return this.lines.length;
  }

  getLine(index: number): string {
    const line = this.lines[index];
    if (line === undefined) {
      throw new RangeError(`line ${index} out of range`);
    }
    return line;
  }

  get history(): readonly HistoryEntry[] {
    return this.undoStack;
  }

  /** Replace one line with an accepted candidate; returns the diff entry. */
  acceptCandidate(lineIndex: number, candidateText: string): HistoryEntry {
    const before = this.getLine(lineIndex);
    const entry: HistoryEntry = { lineIndex, before, after: candidateText };
    this.lines[lineIndex] = candidateText;
    this.undoStack.push(entry);
    return entry;
  }

  /** Undo the most recent accept; returns the entry undone, or null. */
  undo(): HistoryEntry | null {
    const entry = this.undoStack.pop();
    if (!entry) {
      return null;
    }
    this.lines[entry.lineIndex] = entry.before;
    return entry;
  }
}
