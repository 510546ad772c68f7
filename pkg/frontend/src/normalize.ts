/**
 * Client-side mirror of the server's edit rule, for instant feedback while
 * typing. The server stays authoritative: every committed edit still goes
 * through POST /validate-edit.
 *
 * Rule: two texts are equivalent iff, after NFC + lowercasing, stripping
 * every Unicode punctuation character, and collapsing whitespace, their
 * word-token lists are identical.
 */

export function normalizeForEdit(text: string): string[] {
  const lowered = text.normalize("NFC").toLowerCase();
  const stripped = lowered.replace(/\p{P}/gu, "");
  return stripped.split(/\s+/u).filter((t) => t.length > 0);
}

export function editAllowed(original: string, edited: string): boolean {
  const a = normalizeForEdit(original);
  const b = normalizeForEdit(edited);
  return a.length === b.length && a.every((tok, i) => tok === b[i]);
}
