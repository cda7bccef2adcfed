/**
 * ContextualEncoder backed by @huggingface/transformers, loaded lazily.
 *
 * The library is an optional peer dependency and the weights may live in a
 * local directory (offline) or be fetched from the hub; either way, any
 * load failure surfaces as ModelUnavailableError so callers can tell
 * "model missing" apart from pipeline bugs.
 */

import type { ContextualEncoder, EncodedText } from "./encoder.js";
import { ModelUnavailableError } from "./w2v.js";

export interface TransformersEncoderOptions {
  /** model id or local path (default bert-base-uncased) */
  model?: string;
  /** tokenizer truncation length (default 512) */
  maxTokens?: number;
}

export async function createTransformersEncoder(
  options: TransformersEncoderOptions = {},
): Promise<ContextualEncoder> {
  const modelId = options.model ?? "bert-base-uncased";
  const maxTokens = options.maxTokens ?? 512;

  let transformers: any;
  try {
    // optional peer dependency, resolved only when a BERT kind is requested
    transformers = await import("@huggingface/transformers" as string);
  } catch (err) {
    throw new ModelUnavailableError(
      `@huggingface/transformers is not installed; cannot load ${modelId}: ${err}`,
    );
  }

  let tokenizer: any;
  let model: any;
  try {
    tokenizer = await transformers.AutoTokenizer.from_pretrained(modelId);
    model = await transformers.AutoModel.from_pretrained(modelId);
  } catch (err) {
    throw new ModelUnavailableError(`cannot load pretrained model ${modelId}: ${err}`);
  }

  const probe = await encodeWith(tokenizer, model, "probe", maxTokens);

  return {
    id: modelId,
    dims: probe.hiddenStates[0].length,
    encode: (text: string) => encodeWith(tokenizer, model, text, maxTokens),
  };
}

async function encodeWith(
  tokenizer: any,
  model: any,
  text: string,
  maxTokens: number,
): Promise<EncodedText> {
  const inputs = await tokenizer(text, { truncation: true, max_length: maxTokens });
  const output = await model(inputs);
  const hidden = output.last_hidden_state; // [1, seq, dims]
  const [, seq, dims] = hidden.dims;
  const data: Float32Array = hidden.data;
  const hiddenStates: number[][] = [];
  for (let t = 0; t < seq; t++) {
    hiddenStates.push(Array.from(data.subarray(t * dims, (t + 1) * dims)));
  }
  const attentionMask = maskToNumbers(inputs.attention_mask.data, seq);
  const ids: number[] = Array.from(inputs.input_ids.data, Number);
  const special = new Set<number>(
    ["cls_token_id", "sep_token_id", "pad_token_id", "mask_token_id"]
      .map((k) => tokenizer[k])
      .filter((v) => typeof v === "number"),
  );
  const specialTokensMask = ids.map((id) => (special.has(id) ? 1 : 0));
  return { hiddenStates, attentionMask, specialTokensMask };
}

function maskToNumbers(data: ArrayLike<number | bigint>, seq: number): number[] {
  const out: number[] = [];
  for (let t = 0; t < seq; t++) {
    out.push(Number(data[t]));
  }
  return out;
}
