/**
 * DOM wiring for the studio: candidate pool on the left, poem board on the
 * right, persistent export preview underneath. All state transitions go
 * through SessionStore; this file only renders and forwards events.
 */

import { ApiError, StudioClient } from "./api.js";
import { editAllowed } from "./normalize.js";
import { SessionStore } from "./state.js";

const client = new StudioClient("");
const store = new SessionStore(client);

const el = (id: string) => document.getElementById(id)!;

function flash(message: string, isError = false): void {
  const bar = el("status");
  bar.textContent = message;
  bar.className = isError ? "status error" : "status";
}

async function guard<T>(work: () => Promise<T>): Promise<T | undefined> {
  try {
    return await work();
  } catch (err) {
    if (err instanceof ApiError) {
      flash(`${err.code}: ${err.message}`, true);
      renderAll();
      return undefined;
    }
    throw err;
  }
}

// -- pool --------------------------------------------------------------

function renderPool(): void {
  const pool = el("pool");
  pool.replaceChildren();
  for (const card of store.cards) {
    const row = document.createElement("div");
    row.className = "card" + (card.selected ? " selected" : "");

    const pick = document.createElement("input");
    pick.type = "checkbox";
    pick.checked = card.selected;
    pick.title = "select this line";
    pick.addEventListener("change", () =>
      guard(async () => {
        await store.setSelected(card.id, pick.checked);
        renderAll();
      }),
    );

    const text = document.createElement("span");
    text.className = "line-text";
    text.textContent = card.text;

    const overlap = document.createElement("span");
    overlap.className = "overlap";
    overlap.title = "longest n-gram shared with the training corpus";
    overlap.textContent = card.overlap >= 0 ? `◦${card.overlap}` : "◦–";

    const add = document.createElement("button");
    add.textContent = "→ board";
    add.disabled = !card.selected || store.onBoard(card.id) || store.poemStatus === "final";
    add.addEventListener("click", () =>
      guard(async () => {
        store.addLine(card.id);
        await store.savePoem();
        renderAll();
      }),
    );

    row.append(pick, text, overlap, add);
    pool.append(row);
  }
  el("pool-count").textContent = `${store.cards.length} lines offered`;
}

// -- board --------------------------------------------------------------

let dragFrom: number | null = null;

function renderBoard(): void {
  const board = el("board");
  board.replaceChildren();
  store.board.forEach((entry, index) => {
    const row = document.createElement("div");
    row.className = entry.kind === "line" ? "entry" : "entry break";
    row.draggable = store.poemStatus !== "final";

    row.addEventListener("dragstart", () => {
      dragFrom = index;
    });
    row.addEventListener("dragover", (ev) => ev.preventDefault());
    row.addEventListener("drop", (ev) => {
      ev.preventDefault();
      if (dragFrom === null || dragFrom === index) return;
      store.moveEntry(dragFrom, index);
      dragFrom = null;
      guard(async () => {
        await store.savePoem();
        renderAll();
      });
    });

    if (entry.kind === "break") {
      const label = document.createElement("span");
      label.className = "line-text muted";
      label.textContent = "— stanza break —";
      row.append(label);
    } else {
      const text = document.createElement("input");
      text.type = "text";
      text.value = entry.displayText;
      text.disabled = store.poemStatus === "final";
      text.addEventListener("input", () => {
        // live pre-validation; the server re-checks on commit
        const original = store.card(entry.lineId)?.text ?? "";
        text.classList.toggle("invalid", !editAllowed(original, text.value));
      });
      text.addEventListener("change", () =>
        guard(async () => {
          const outcome = await store.editEntry(index, text.value);
          if (!outcome.accepted) {
            text.value = entry.displayText; // revert
            flash(`edit rejected (${outcome.summary}): ${outcome.changes.join("; ")}`, true);
          } else {
            flash("edit accepted");
          }
          renderAll();
        }),
      );
      row.append(text);
    }

    if (store.poemStatus !== "final") {
      const remove = document.createElement("button");
      remove.textContent = "✕";
      remove.title = entry.kind === "line" ? "return line to the pool" : "remove break";
      remove.addEventListener("click", () =>
        guard(async () => {
          store.removeEntry(index);
          await store.savePoem();
          renderAll();
        }),
      );
      row.append(remove);
    }
    board.append(row);
  });
}

function renderPreview(): void {
  el("preview").textContent = store.preview();
  el("poem-status").textContent =
    store.poemStatus === "none" ? "no draft yet" : `poem: ${store.poemStatus}`;
}

function renderAll(): void {
  renderPool();
  renderBoard();
  renderPreview();
  (el("finalize") as HTMLButtonElement).disabled =
    store.poemStatus !== "draft" || !store.board.some((e) => e.kind === "line");
}

// -- top-level controls ----------------------------------------------------

function wireControls(): void {
  el("fetch").addEventListener("click", () =>
    guard(async () => {
      const count = Math.max(1, Number((el("count") as HTMLInputElement).value) || 25);
      flash("generating…");
      await store.fetchBatch(count);
      flash(`received ${count} lines`);
      renderAll();
    }),
  );

  el("add-break").addEventListener("click", () =>
    guard(async () => {
      store.insertBreak();
      await store.savePoem();
      renderAll();
    }),
  );

  el("title").addEventListener("change", () =>
    guard(async () => {
      store.title = (el("title") as HTMLInputElement).value;
      if (store.poemId) await store.savePoem();
      renderAll();
    }),
  );

  el("finalize").addEventListener("click", () =>
    guard(async () => {
      await store.finalize();
      flash("poem finalized");
      renderAll();
    }),
  );

  el("export").addEventListener("click", () =>
    guard(async () => {
      const text = await store.exportText();
      const blob = new Blob([text], { type: "text/plain;charset=utf-8" });
      const link = document.createElement("a");
      link.href = URL.createObjectURL(blob);
      link.download = (store.title || "poem") + ".txt";
      link.click();
      URL.revokeObjectURL(link.href);
    }),
  );
}

async function boot(): Promise<void> {
  wireControls();
  const existing = new URLSearchParams(location.search).get("session");
  if (existing) {
    await store.reload(existing); // state comes entirely from the server
  } else {
    await store.init();
    history.replaceState(null, "", `?session=${store.sessionId}`);
  }
  el("session-id").textContent = store.sessionId;
  renderAll();
}

boot().catch((err) => flash(String(err), true));
