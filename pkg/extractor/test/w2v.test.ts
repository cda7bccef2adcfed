import { fileURLToPath } from "node:url";
import { describe, expect, it } from "vitest";
import type { ReviewRecord } from "../src/records.js";
import { embedW2vAverage, loadWordVectors, ModelUnavailableError } from "../src/w2v.js";

const MODEL_PATH = fileURLToPath(new URL("./fixtures/tiny_w2v.txt", import.meta.url));

function record(combined: string): ReviewRecord {
  return { id: "x", rating: 5, title: "", text: combined, combined };
}

describe("loadWordVectors", () => {
  it("reads the word2vec text format with header", async () => {
    const model = await loadWordVectors(MODEL_PATH);
    expect(model.dims).toBe(3);
    expect(model.vectors.size).toBe(5);
    expect(Array.from(model.vectors.get("great")!)).toEqual([1, 2, 3]);
  });

  it("fails cleanly when the file is missing", async () => {
    await expect(loadWordVectors("/no/such/model.txt")).rejects.toThrow(
      ModelUnavailableError,
    );
  });
});

describe("embedW2vAverage", () => {
  it("returns the word vector for a single in-vocabulary word", async () => {
    const model = await loadWordVectors(MODEL_PATH);
    const { vector, inVocab } = embedW2vAverage(model, record("great"));
    expect(Array.from(vector)).toEqual([1, 2, 3]);
    expect(inVocab).toBe(1);
  });

  it("averages elementwise over two words", async () => {
    const model = await loadWordVectors(MODEL_PATH);
    const { vector } = embedW2vAverage(model, record("great tablet"));
    expect(Array.from(vector)).toEqual([2, 2, 2]);
  });

  it("skips out-of-vocabulary tokens", async () => {
    const model = await loadWordVectors(MODEL_PATH);
    const { vector, inVocab, outOfVocab } = embedW2vAverage(
      model,
      record("great zzzunknown tablet"),
    );
    expect(Array.from(vector)).toEqual([2, 2, 2]);
    expect(inVocab).toBe(2);
    expect(outOfVocab).toBe(1);
  });

  it("falls back to the zero vector when everything is OOV", async () => {
    const model = await loadWordVectors(MODEL_PATH);
    const { vector, inVocab } = embedW2vAverage(model, record("zzz qqq"));
    expect(Array.from(vector)).toEqual([0, 0, 0]);
    expect(inVocab).toBe(0);
  });

  it("strips punctuation and retries lowercase for lookup", async () => {
    const model = await loadWordVectors(MODEL_PATH);
    const { vector, inVocab } = embedW2vAverage(model, record('"Great!" (tablet)'));
    expect(inVocab).toBe(2);
    expect(Array.from(vector)).toEqual([2, 2, 2]);
  });
});
