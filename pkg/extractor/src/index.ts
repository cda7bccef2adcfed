export { parseCsv, parseCsvWithHeader, csvField } from "./csv.js";
export {
  cleanRows,
  combineTitleAndText,
  loadAndClean,
  type CleanOptions,
  type CleanStats,
  type ReviewRecord,
} from "./records.js";
export { countWords, lookupTokens, truncateWords, words } from "./tokenize.js";
export {
  embedW2vAverage,
  loadWordVectors,
  ModelUnavailableError,
  type W2vResult,
  type WordVectorModel,
} from "./w2v.js";
export {
  clsPool,
  embedBertAverage,
  embedBertCls,
  meanPool,
  type ContextualEncoder,
  type EncodedText,
} from "./encoder.js";
export { createTransformersEncoder } from "./transformers_encoder.js";
export {
  EMBEDDING_KINDS,
  embeddingFileName,
  writeEmbeddings,
  writeManifest,
  type EmbeddingKind,
  type KindManifest,
  type Manifest,
} from "./write.js";
export { runExtract, buildProgram } from "./cli.js";
