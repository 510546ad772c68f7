/**
 * Export preview renderer: character-for-character the same output as the
 * server's GET /poems/{id}/export?format=text.
 *
 * Format: title line, one blank line, then one row per entry; stanza
 * breaks render as blank rows; trailing newline.
 */

export type BoardEntry =
  | { kind: "line"; lineId: string; displayText: string }
  | { kind: "break" };

export function renderPoemText(title: string, entries: readonly BoardEntry[]): string {
  const rows = [title, ""];
  for (const entry of entries) {
    rows.push(entry.kind === "line" ? entry.displayText : "");
  }
  return rows.join("\n") + "\n";
}
