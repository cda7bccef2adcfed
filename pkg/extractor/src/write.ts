/**
 * Canonical embedding CSV output: `id,rating,e0,...,e{d-1}` with a
 * `# model=<id>` provenance comment, floats at full round-trip precision
 * (JS number-to-string is shortest-round-trip, so the Python side reads
 * the values back bit-exactly).
 */

import { writeFileSync } from "node:fs";
import { join } from "node:path";
import { csvField } from "./csv.js";
import type { ReviewRecord } from "./records.js";

export type EmbeddingKind = "w2v_avg" | "bert_cls" | "bert_avg";

export const EMBEDDING_KINDS: EmbeddingKind[] = ["w2v_avg", "bert_cls", "bert_avg"];

export function embeddingFileName(dataset: string, kind: EmbeddingKind): string {
  return `${dataset}_${kind}.csv`;
}

export function writeEmbeddings(
  records: ReviewRecord[],
  vectors: Float64Array[],
  path: string,
  modelTag?: string,
): void {
  if (records.length !== vectors.length) {
    throw new Error(
      `record/vector count mismatch: ${records.length} vs ${vectors.length}`,
    );
  }
  if (records.length === 0) {
    throw new Error("nothing to write");
  }
  const dims = vectors[0].length;
  const lines: string[] = [];
  if (modelTag) {
    lines.push(`# model=${modelTag}`);
  }
  const header = ["id", "rating"];
  for (let j = 0; j < dims; j++) {
    header.push(`e${j}`);
  }
  lines.push(header.join(","));
  for (let i = 0; i < records.length; i++) {
    const vec = vectors[i];
    if (vec.length !== dims) {
      throw new Error(`row ${i}: dimensionality ${vec.length} != ${dims}`);
    }
    for (const v of vec) {
      if (!Number.isFinite(v)) {
        throw new Error(`row ${i}: non-finite embedding value`);
      }
    }
    const cells = [csvSafeId(records[i].id), String(records[i].rating)];
    for (const v of vec) {
      cells.push(String(v));
    }
    lines.push(cells.join(","));
  }
  writeFileSync(path, lines.join("\n") + "\n", "utf-8");
}

/** ids must stay comma-free in the interchange format */
function csvSafeId(id: string): string {
  const cleaned = id.replace(/[,\r\n]/g, " ").trim();
  return cleaned === "" ? "_" : csvField(cleaned);
}

export interface KindManifest {
  file: string;
  model: string;
  dims: number;
  rows: number;
  allOovRows?: number;
}

export interface Manifest {
  input: string;
  rows: number;
  droppedNoRating: number;
  truncated: number;
  maxTokens: number;
  kinds: Partial<Record<EmbeddingKind, KindManifest>>;
}

export function writeManifest(outDir: string, manifest: Manifest): string {
  const path = join(outDir, "manifest.json");
  writeFileSync(path, JSON.stringify(manifest, null, 2) + "\n", "utf-8");
  return path;
}
