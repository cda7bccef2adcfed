#!/usr/bin/env node
/**
 * extract: raw review CSV -> cleaned records -> embedding CSVs + manifest.
 *
 * The word2vec path needs --w2v-model pointing at a word2vec text-format
 * file; the BERT paths need @huggingface/transformers plus the model
 * weights (hub id or local path via --bert-model). A missing model aborts
 * with a clear error rather than writing partial files silently.
 */

import { mkdirSync } from "node:fs";
import { basename, join } from "node:path";
import { Command } from "commander";
import { loadAndClean } from "./records.js";
import { embedBertAverage, embedBertCls, type ContextualEncoder } from "./encoder.js";
import { createTransformersEncoder } from "./transformers_encoder.js";
import { embedW2vAverage, loadWordVectors, ModelUnavailableError } from "./w2v.js";
import {
  EMBEDDING_KINDS,
  embeddingFileName,
  writeEmbeddings,
  writeManifest,
  type EmbeddingKind,
  type Manifest,
} from "./write.js";

interface CliOptions {
  input: string;
  outDir: string;
  kinds: string;
  maxTokens: string;
  w2vModel?: string;
  bertModel: string;
}

function parseKinds(raw: string): EmbeddingKind[] {
  const kinds = raw.split(",").map((k) => k.trim()).filter((k) => k !== "");
  for (const kind of kinds) {
    if (!EMBEDDING_KINDS.includes(kind as EmbeddingKind)) {
      throw new Error(`unknown embedding kind ${JSON.stringify(kind)}`);
    }
  }
  return kinds as EmbeddingKind[];
}

export async function runExtract(options: CliOptions): Promise<Manifest> {
  const kinds = parseKinds(options.kinds);
  const maxTokens = Number(options.maxTokens);
  if (!Number.isInteger(maxTokens) || maxTokens < 1) {
    throw new Error(`--max-tokens must be a positive integer, got ${options.maxTokens}`);
  }

  mkdirSync(options.outDir, { recursive: true });
  const { records, stats } = loadAndClean(options.input, { maxTokens });
  console.error(
    `[extract] ${stats.totalRows} rows -> ${stats.kept} records ` +
      `(${stats.droppedNoRating} without rating, ${stats.truncated} truncated)`,
  );

  const dataset = basename(options.input).replace(/\.csv$/i, "");
  const manifest: Manifest = {
    input: options.input,
    rows: records.length,
    droppedNoRating: stats.droppedNoRating,
    truncated: stats.truncated,
    maxTokens,
    kinds: {},
  };

  let encoder: ContextualEncoder | null = null;
  const needsBert = kinds.some((k) => k !== "w2v_avg");
  if (needsBert) {
    encoder = await createTransformersEncoder({ model: options.bertModel, maxTokens });
  }

  for (const kind of kinds) {
    const file = join(options.outDir, embeddingFileName(dataset, kind));
    if (kind === "w2v_avg") {
      if (!options.w2vModel) {
        throw new ModelUnavailableError("w2v_avg requested but --w2v-model not given");
      }
      const model = await loadWordVectors(options.w2vModel);
      const vectors: Float64Array[] = [];
      let allOov = 0;
      for (const record of records) {
        const result = embedW2vAverage(model, record);
        if (result.inVocab === 0) {
          allOov += 1;
          console.error(`[extract] warning: review ${record.id} is fully out-of-vocabulary`);
        }
        vectors.push(result.vector);
      }
      writeEmbeddings(records, vectors, file, model.id);
      manifest.kinds[kind] = {
        file,
        model: model.id,
        dims: model.dims,
        rows: records.length,
        allOovRows: allOov,
      };
    } else {
      const enc = encoder!;
      const vectors: Float64Array[] = [];
      for (const record of records) {
        vectors.push(
          kind === "bert_cls"
            ? await embedBertCls(enc, record)
            : await embedBertAverage(enc, record),
        );
      }
      writeEmbeddings(records, vectors, file, enc.id);
      manifest.kinds[kind] = { file, model: enc.id, dims: enc.dims, rows: records.length };
    }
    console.error(`[extract] wrote ${file}`);
  }

  writeManifest(options.outDir, manifest);
  return manifest;
}

export function buildProgram(): Command {
  const program = new Command();
  program
    .name("extract")
    .description("produce embedding CSVs for cluster-bench from a raw review export")
    .requiredOption("--input <raw.csv>", "raw review CSV (27-column export)")
    .requiredOption("--out-dir <dir>", "directory for embedding CSVs and manifest.json")
    .option("--kinds <list>", "comma-separated kinds", EMBEDDING_KINDS.join(","))
    .option("--max-tokens <n>", "word budget per review", "512")
    .option("--w2v-model <path>", "word2vec text-format vectors (300-d pretrained)")
    .option("--bert-model <id>", "contextual model id or local path", "bert-base-uncased")
    .action(async (options: CliOptions) => {
      try {
        await runExtract(options);
      } catch (err) {
        const message = err instanceof Error ? err.message : String(err);
        console.error(`extract: ${message}`);
        process.exitCode = err instanceof ModelUnavailableError ? 3 : 2;
      }
    });
  return program;
}

const entryPoint = process.argv[1];
if (entryPoint && (entryPoint.endsWith("cli.js") || entryPoint.endsWith("extract"))) {
  buildProgram().parseAsync(process.argv);
}
