/** SessionStore unit tests against a scripted in-memory fake of the API. */

import { beforeEach, describe, expect, it } from "vitest";

import { EditCheck, LineCard, PoemView, SessionView, StudioClient, WireEntry } from "../src/api.js";
import { renderPoemText } from "../src/preview.js";
import { SessionStore } from "../src/state.js";

function card(id: string, text: string): LineCard {
  return { id, text, tokens: text.split(" "), log_probs: [], overlap: 1,
           selected: false, in_poem: false };
}

class FakeClient {
  offered: LineCard[] = [
    card("l1", "die see praat saggies"),
    card("l2", "wind oor die berg"),
    card("l3", "nag sak oor die land"),
  ];
  selected = new Set<string>();
  poem: PoemView | null = null;
  rejectNextUpdate = false;

  private session(): SessionView {
    return {
      id: "s1", created_at: "", updated_at: "",
      offered_count: this.offered.length,
      selected: [...this.selected].sort(),
      gen: { temperature: 0.9, seed: 0, max_ngram_overlap: 4, max_tokens: 24, allow_unk: false },
    };
  }

  async createSession(): Promise<SessionView> {
    return this.session();
  }

  async getLines(): Promise<{ lines: LineCard[] }> {
    return { lines: this.offered.map((c) => ({ ...c, selected: this.selected.has(c.id) })) };
  }

  async requestLines(_sid: string, count: number): Promise<{ lines: LineCard[] }> {
    const fresh = Array.from({ length: count }, (_, i) =>
      card(`g${this.offered.length + i}`, `reël nommer ${this.offered.length + i}`));
    this.offered.push(...fresh);
    return { lines: fresh };
  }

  async updateSelection(_sid: string, add: string[], remove: string[]): Promise<SessionView> {
    add.forEach((id) => this.selected.add(id));
    remove.forEach((id) => this.selected.delete(id));
    return this.session();
  }

  async validateEdit(original: string, edited: string): Promise<EditCheck> {
    const norm = (s: string) =>
      s.toLowerCase().replace(/[.,!?;:'’]/gu, "").split(/\s+/).filter(Boolean).join(" ");
    const ok = norm(original) === norm(edited);
    return { accepted: ok, summary: ok ? "ok" : "words changed", changes: ok ? [] : ["diff"] };
  }

  async createPoem(_sid: string, title: string, entries: WireEntry[]): Promise<PoemView> {
    this.poem = { id: "p1", session_id: "s1", title, status: "draft", entries };
    return this.poem;
  }

  async listPoems(): Promise<{ poems: PoemView[] }> {
    return { poems: this.poem ? [this.poem] : [] };
  }

  async updateEntries(_pid: string, entries: WireEntry[], title?: string): Promise<PoemView> {
    if (this.rejectNextUpdate) {
      this.rejectNextUpdate = false;
      throw Object.assign(new Error("refused"), { code: "edit_rule_violation", status: 409 });
    }
    this.poem = { ...this.poem!, entries, title: title ?? this.poem!.title };
    return this.poem;
  }

  async finalizePoem(): Promise<PoemView> {
    this.poem = { ...this.poem!, status: "final" };
    return this.poem;
  }

  async exportText(): Promise<string> {
    const entries = this.poem!.entries.map((e) =>
      e.kind === "line"
        ? { kind: "line" as const, lineId: e.line_id!, displayText: e.display_text! }
        : { kind: "break" as const });
    return renderPoemText(this.poem!.title, entries);
  }
}

describe("SessionStore", () => {
  let fake: FakeClient;
  let store: SessionStore;

  beforeEach(async () => {
    fake = new FakeClient();
    store = new SessionStore(fake as unknown as StudioClient);
    await store.init();
    await store.reload("s1");
  });

  it("fetchBatch appends to the pool and never touches the board", async () => {
    await store.fetchBatch(5);
    expect(store.cards.length).toBe(8);
    expect(store.board).toEqual([]);
  });

  it("only selected lines can be added to the board", async () => {
    store.addLine("l1");
    expect(store.board).toEqual([]);
    await store.setSelected("l1", true);
    store.addLine("l1");
    expect(store.board.length).toBe(1);
    store.addLine("l1"); // no duplicates
    expect(store.board.length).toBe(1);
  });

  it("moveEntry reorders and preview reflects the order", async () => {
    await store.setSelected("l1", true);
    await store.setSelected("l2", true);
    store.addLine("l1");
    store.addLine("l2");
    store.insertBreak(1);
    store.title = "Toets";
    expect(store.preview()).toBe("Toets\n\ndie see praat saggies\n\nwind oor die berg\n");
    store.moveEntry(0, 2);
    expect(store.preview()).toBe("Toets\n\n\nwind oor die berg\ndie see praat saggies\n");
  });

  it("accepted edits update the board; rejected edits revert", async () => {
    await store.setSelected("l1", true);
    store.addLine("l1");
    const ok = await store.editEntry(0, "Die see praat saggies.");
    expect(ok.accepted).toBe(true);
    expect(store.board[0]).toMatchObject({ displayText: "Die see praat saggies." });
    const bad = await store.editEntry(0, "die berg praat saggies");
    expect(bad.accepted).toBe(false);
    expect(store.board[0]).toMatchObject({ displayText: "Die see praat saggies." });
  });

  it("savePoem rolls the board back when the server refuses", async () => {
    await store.setSelected("l1", true);
    store.addLine("l1");
    await store.savePoem();
    const before = JSON.parse(JSON.stringify(store.board));
    store.board.push({ kind: "break" });
    fake.rejectNextUpdate = true;
    await expect(store.savePoem()).rejects.toThrow();
    expect(store.board).toEqual(before);
  });

  it("preview equals the server export after a full flow", async () => {
    await store.setSelected("l1", true);
    await store.setSelected("l3", true);
    store.title = "Aand";
    store.addLine("l1");
    store.insertBreak();
    store.addLine("l3");
    await store.savePoem();
    await store.finalize();
    expect(store.poemStatus).toBe("final");
    expect(await store.exportText()).toBe(store.preview());
  });

  it("reload rebuilds state purely from the server", async () => {
    await store.setSelected("l2", true);
    store.addLine("l2");
    store.title = "Herlaai";
    await store.savePoem();
    const fresh = new SessionStore(fake as unknown as StudioClient);
    await fresh.reload("s1");
    expect(fresh.title).toBe("Herlaai");
    expect(fresh.board).toEqual(store.board);
    expect(fresh.cards.map((c) => c.selected)).toEqual(store.cards.map((c) => c.selected));
  });
});
