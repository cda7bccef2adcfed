/**
 * Static word-embedding path: word2vec text-format model, mean of
 * in-vocabulary token vectors per review.
 */

import { createReadStream } from "node:fs";
import { createInterface } from "node:readline";
import { lookupTokens } from "./tokenize.js";
import type { ReviewRecord } from "./records.js";

export class ModelUnavailableError extends Error {}

export interface WordVectorModel {
  id: string;
  dims: number;
  vectors: Map<string, Float64Array>;
}

/**
 * Load a word2vec text-format file: optional "count dims" header line, then
 * one "word v0 v1 ... v{d-1}" line per word.
 */
export async function loadWordVectors(path: string, id?: string): Promise<WordVectorModel> {
  let stream;
  try {
    stream = createReadStream(path, { encoding: "utf-8" });
  } catch (err) {
    throw new ModelUnavailableError(`cannot open word-vector model at ${path}: ${err}`);
  }
  const vectors = new Map<string, Float64Array>();
  let dims = -1;
  let first = true;

  const lines = createInterface({ input: stream, crlfDelay: Infinity });
  try {
    for await (const line of lines) {
      if (line.trim() === "") continue;
      const parts = line.split(" ");
      if (first) {
        first = false;
        // header line is two integers; vector lines are word + floats
        if (parts.length === 2 && /^\d+$/.test(parts[0]) && /^\d+$/.test(parts[1])) {
          dims = Number(parts[1]);
          continue;
        }
      }
      const word = parts[0];
      const values = parts.slice(1).map(Number);
      if (dims === -1) {
        dims = values.length;
      }
      if (values.length !== dims || values.some((v) => !Number.isFinite(v))) {
        throw new ModelUnavailableError(
          `malformed vector line for ${JSON.stringify(word)} in ${path}`,
        );
      }
      vectors.set(word, Float64Array.from(values));
    }
  } catch (err) {
    if (err instanceof ModelUnavailableError) throw err;
    throw new ModelUnavailableError(`cannot read word-vector model at ${path}: ${err}`);
  }
  if (vectors.size === 0 || dims <= 0) {
    throw new ModelUnavailableError(`no vectors found in ${path}`);
  }
  return { id: id ?? path, dims, vectors };
}

function lookup(model: WordVectorModel, token: string): Float64Array | undefined {
  return model.vectors.get(token) ?? model.vectors.get(token.toLowerCase());
}

export interface W2vResult {
  vector: Float64Array;
  inVocab: number;
  outOfVocab: number;
}

/**
 * Mean of the in-vocabulary token vectors; OOV tokens are skipped and an
 * all-OOV review yields the zero vector (the caller logs the warning).
 */
export function embedW2vAverage(model: WordVectorModel, record: ReviewRecord): W2vResult {
  const tokens = lookupTokens(record.combined);
  const sum = new Float64Array(model.dims);
  let inVocab = 0;
  for (const token of tokens) {
    const vec = lookup(model, token);
    if (vec === undefined) continue;
    for (let j = 0; j < model.dims; j++) {
      sum[j] += vec[j];
    }
    inVocab += 1;
  }
  if (inVocab > 0) {
    for (let j = 0; j < model.dims; j++) {
      sum[j] /= inVocab;
    }
  }
  return { vector: sum, inVocab, outOfVocab: tokens.length - inVocab };
}
