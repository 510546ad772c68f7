/**
 * Session state machine for the studio client.
 *
 * Holds the candidate pool and the poem board, mirrors every acknowledged
 * server mutation, and performs optimistic board edits that roll back when
 * the server refuses. The server is the only source of truth: reload()
 * rebuilds everything from API responses.
 */

import { ApiError, LineCard, PoemView, StudioClient, WireEntry } from "./api.js";
import { BoardEntry, renderPoemText } from "./preview.js";

export type EditOutcome =
  | { accepted: true }
  | { accepted: false; summary: string; changes: string[] };

function toWire(entries: readonly BoardEntry[]): WireEntry[] {
  return entries.map((e) =>
    e.kind === "line"
      ? { kind: "line" as const, line_id: e.lineId, display_text: e.displayText }
      : { kind: "break" as const, line_id: null, display_text: null },
  );
}

function fromWire(entries: readonly WireEntry[]): BoardEntry[] {
  return entries.map((e) =>
    e.kind === "line"
      ? { kind: "line" as const, lineId: e.line_id ?? "", displayText: e.display_text ?? "" }
      : { kind: "break" as const },
  );
}

export class SessionStore {
  sessionId = "";
  cards: LineCard[] = [];
  board: BoardEntry[] = [];
  title = "";
  poemId: string | null = null;
  poemStatus: "none" | "draft" | "final" = "none";
  lastError: string | null = null;
  /** Last server-acknowledged board; optimistic mutations roll back to it. */
  private acked: BoardEntry[] = [];

  constructor(private client: StudioClient) {}

  async init(overrides: { seed?: number; temperature?: number } = {}): Promise<void> {
    const session = await this.client.createSession(overrides);
    this.sessionId = session.id;
  }

  /** Rebuild state purely from the server (page reload, reconnect). */
  async reload(sessionId: string): Promise<void> {
    this.sessionId = sessionId;
    const [lines, poems] = await Promise.all([
      this.client.getLines(sessionId),
      this.client.listPoems(sessionId),
    ]);
    this.cards = lines.lines;
    const poem = poems.poems[poems.poems.length - 1];
    if (poem) {
      this.adoptPoem(poem);
    } else {
      this.board = [];
      this.title = "";
      this.poemId = null;
      this.poemStatus = "none";
    }
  }

  private adoptPoem(poem: PoemView): void {
    this.poemId = poem.id;
    this.title = poem.title;
    this.board = fromWire(poem.entries);
    this.acked = fromWire(poem.entries);
    this.poemStatus = poem.status;
  }

  card(lineId: string): LineCard | undefined {
    return this.cards.find((c) => c.id === lineId);
  }

  /** Pull a fresh batch into the pool; never touches the board. */
  async fetchBatch(count: number): Promise<LineCard[]> {
    const { lines } = await this.client.requestLines(this.sessionId, count);
    this.cards.push(...lines);
    return lines;
  }

  async setSelected(lineId: string, selected: boolean): Promise<void> {
    const session = await this.client.updateSelection(
      this.sessionId,
      selected ? [lineId] : [],
      selected ? [] : [lineId],
    );
    const chosen = new Set(session.selected);
    for (const card of this.cards) card.selected = chosen.has(card.id);
  }

  selectedCards(): LineCard[] {
    return this.cards.filter((c) => c.selected);
  }

  onBoard(lineId: string): boolean {
    return this.board.some((e) => e.kind === "line" && e.lineId === lineId);
  }

  /** The human pulls a selected line onto the board (never automatic). */
  addLine(lineId: string, position?: number): void {
    const card = this.card(lineId);
    if (!card || !card.selected || this.onBoard(lineId)) return;
    const entry: BoardEntry = { kind: "line", lineId, displayText: card.text };
    this.board.splice(position ?? this.board.length, 0, entry);
  }

  insertBreak(position?: number): void {
    this.board.splice(position ?? this.board.length, 0, { kind: "break" });
  }

  removeEntry(index: number): void {
    this.board.splice(index, 1);
  }

  /** Reorder an entry (drag target semantics: remove, then reinsert). */
  moveEntry(from: number, to: number): void {
    if (from === to || from < 0 || from >= this.board.length) return;
    const picked = this.board.splice(from, 1);
    if (picked.length !== 1) return;
    const bounded = Math.max(0, Math.min(to, this.board.length));
    this.board.splice(bounded, 0, picked[0]!);
  }

  /**
   * Edit a board line. Validates with the server first; a rejected edit
   * reverts the text and reports the word diff without ever reaching the
   * poem state.
   */
  async editEntry(index: number, newText: string): Promise<EditOutcome> {
    const entry = this.board[index];
    if (!entry || entry.kind !== "line") {
      return { accepted: false, summary: "no such line", changes: [] };
    }
    const card = this.card(entry.lineId);
    if (!card) return { accepted: false, summary: "unknown line", changes: [] };
    const check = await this.client.validateEdit(card.text, newText);
    if (!check.accepted) {
      return { accepted: false, summary: check.summary, changes: check.changes };
    }
    entry.displayText = newText;
    if (this.poemId !== null) await this.savePoem();
    return { accepted: true };
  }

  /** Persist the board: create the draft poem or replace its entries. */
  async savePoem(): Promise<void> {
    try {
      const poem = this.poemId
        ? await this.client.updateEntries(this.poemId, toWire(this.board), this.title)
        : await this.client.createPoem(this.sessionId, this.title, toWire(this.board));
      this.adoptPoem(poem);
      this.lastError = null;
    } catch (err) {
      // rejected mutation: discard the optimistic state entirely
      this.board = this.acked.map((e) => ({ ...e }));
      if (err instanceof ApiError) {
        this.lastError = `${err.code}: ${err.message}`;
      }
      throw err;
    }
  }

  async finalize(): Promise<void> {
    if (!this.poemId) throw new Error("no draft poem to finalize");
    const poem = await this.client.finalizePoem(this.poemId);
    this.adoptPoem(poem);
  }

  async exportText(): Promise<string> {
    if (!this.poemId) throw new Error("no poem to export");
    return this.client.exportText(this.poemId);
  }

  /** Live export preview; must equal the server export byte for byte. */
  preview(): string {
    return renderPoemText(this.title, this.board);
  }
}
