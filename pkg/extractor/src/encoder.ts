/**
 * Contextual-encoder interface and the two poolings used downstream.
 *
 * CLS pooling takes the final hidden state at position 0; mean pooling
 * averages final hidden states over real tokens only, excluding padding
 * and special positions (documented choice; flip `includeSpecial` to
 * keep [CLS]/[SEP] in the mean).
 */

import type { ReviewRecord } from "./records.js";

export interface EncodedText {
  /** final layer, one hidden-state vector per token position */
  hiddenStates: number[][];
  /** 1 for real input positions, 0 for padding */
  attentionMask: number[];
  /** 1 for special tokens ([CLS], [SEP], ...), 0 otherwise */
  specialTokensMask: number[];
}

export interface ContextualEncoder {
  readonly id: string;
  readonly dims: number;
  encode(text: string): Promise<EncodedText>;
}

export function clsPool(encoded: EncodedText): Float64Array {
  if (encoded.hiddenStates.length === 0) {
    throw new Error("encoder returned no token positions");
  }
  return Float64Array.from(encoded.hiddenStates[0]);
}

export function meanPool(encoded: EncodedText, includeSpecial = false): Float64Array {
  const { hiddenStates, attentionMask, specialTokensMask } = encoded;
  if (
    hiddenStates.length !== attentionMask.length ||
    hiddenStates.length !== specialTokensMask.length
  ) {
    throw new Error("encoder output arrays disagree in length");
  }
  const dims = hiddenStates[0]?.length ?? 0;
  const sum = new Float64Array(dims);
  let count = 0;
  for (let t = 0; t < hiddenStates.length; t++) {
    if (attentionMask[t] !== 1) continue;
    if (!includeSpecial && specialTokensMask[t] === 1) continue;
    const state = hiddenStates[t];
    for (let j = 0; j < dims; j++) {
      sum[j] += state[j];
    }
    count += 1;
  }
  if (count === 0) {
    throw new Error("nothing to pool: every position is padding or special");
  }
  for (let j = 0; j < dims; j++) {
    sum[j] /= count;
  }
  return sum;
}

export async function embedBertCls(
  encoder: ContextualEncoder,
  record: ReviewRecord,
): Promise<Float64Array> {
  return clsPool(await encoder.encode(record.combined));
}

export async function embedBertAverage(
  encoder: ContextualEncoder,
  record: ReviewRecord,
): Promise<Float64Array> {
  return meanPool(await encoder.encode(record.combined));
}
