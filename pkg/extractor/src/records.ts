/**
 * Review cleaning: drop rating-less rows, concatenate title and text,
 * truncate to a word budget.
 */

import { readFileSync } from "node:fs";
import { parseCsvWithHeader } from "./csv.js";
import { truncateWords, countWords } from "./tokenize.js";

export interface ReviewRecord {
  id: string;
  rating: number;
  title: string;
  text: string;
  /** title + " " + text, truncated to the word budget */
  combined: string;
}

export interface CleanStats {
  totalRows: number;
  kept: number;
  droppedNoRating: number;
  truncated: number;
}

export interface CleanOptions {
  /** word budget for the combined field (default 512) */
  maxTokens?: number;
  idColumn?: string;
  ratingColumn?: string;
  titleColumn?: string;
  textColumn?: string;
}

const DEFAULTS = {
  maxTokens: 512,
  idColumn: "id",
  ratingColumn: "reviews.rating",
  titleColumn: "reviews.title",
  textColumn: "reviews.text",
};

function parseRating(raw: string): number | null {
  const trimmed = raw.trim();
  if (trimmed === "") return null;
  const value = Number(trimmed);
  if (!Number.isFinite(value) || !Number.isInteger(value)) return null;
  if (value < 1 || value > 5) return null;
  return value;
}

export function combineTitleAndText(title: string, text: string): string {
  // single-space separator, elided when either side is empty
  return [title.trim(), text.trim()].filter((s) => s !== "").join(" ");
}

export function cleanRows(
  header: string[],
  rows: string[][],
  options: CleanOptions = {},
): { records: ReviewRecord[]; stats: CleanStats } {
  const opts = { ...DEFAULTS, ...options };
  const col = (name: string) => {
    const idx = header.indexOf(name);
    if (idx === -1) {
      throw new Error(`required column ${JSON.stringify(name)} missing from input`);
    }
    return idx;
  };
  const idIdx = col(opts.idColumn);
  const ratingIdx = col(opts.ratingColumn);
  const titleIdx = col(opts.titleColumn);
  const textIdx = col(opts.textColumn);

  const records: ReviewRecord[] = [];
  const stats: CleanStats = { totalRows: rows.length, kept: 0, droppedNoRating: 0, truncated: 0 };
  for (let i = 0; i < rows.length; i++) {
    const row = rows[i];
    const rating = parseRating(row[ratingIdx] ?? "");
    if (rating === null) {
      stats.droppedNoRating += 1;
      continue;
    }
    const title = row[titleIdx] ?? "";
    const text = row[textIdx] ?? "";
    const combinedFull = combineTitleAndText(title, text);
    const combined = truncateWords(combinedFull, opts.maxTokens);
    if (countWords(combinedFull) > opts.maxTokens) {
      stats.truncated += 1;
    }
    records.push({
      id: row[idIdx] !== "" ? row[idIdx] : `row${i + 2}`,
      rating,
      title,
      text,
      combined,
    });
    stats.kept += 1;
  }
  return { records, stats };
}

export function loadAndClean(
  path: string,
  options: CleanOptions = {},
): { records: ReviewRecord[]; stats: CleanStats } {
  const { header, rows } = parseCsvWithHeader(readFileSync(path, "utf-8"));
  // trailing newline yields one empty single-field row; ignore such rows
  const dataRows = rows.filter((r) => !(r.length === 1 && r[0] === ""));
  return cleanRows(header, dataRows, options);
}
