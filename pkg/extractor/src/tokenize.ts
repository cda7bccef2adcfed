/** Whitespace word tokenization used by the static-embedding path. */

export function words(text: string): string[] {
  return text.split(/\s+/).filter((w) => w !== "");
}

export function countWords(text: string): number {
  return words(text).length;
}

export function truncateWords(text: string, maxTokens: number): string {
  const ws = words(text);
  if (ws.length <= maxTokens) {
    return ws.join(" ");
  }
  return ws.slice(0, maxTokens).join(" ");
}

/**
 * Tokens for word-vector lookup: whitespace split with surrounding
 * punctuation stripped; case is preserved (the lookup itself retries
 * lowercased).
 */
export function lookupTokens(text: string): string[] {
  return words(text)
    .map((w) => w.replace(/^[^\p{L}\p{N}]+|[^\p{L}\p{N}]+$/gu, ""))
    .filter((w) => w !== "");
}
