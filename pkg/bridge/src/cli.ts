/**
 * Bridge CLI.
 *
 *   node dist/cli.js parse --input samples/news.jsonl --out-dir out/
 *   node dist/cli.js embed --input samples/news.jsonl --out-dir out/ [--dim 32]
 *
 * Input: JSONL, one {"doc_id", "text", "label"?} object per line. Outputs the
 * toolkit's CoNLL-U / EMB / offsets formats plus a manifest.
 */

import * as fs from "fs";
import * as path from "path";

import { documentToConllu } from "./conllu";
import {
  DEFAULT_DIM,
  ENCODER_NAME,
  ENCODER_VERSION,
  encodeDocument,
  toEmbFile,
  toOffsetsFile,
} from "./encoder";
import { documentEntry, loadManifest, saveManifest } from "./manifest";
import { PARSER_NAME, PARSER_SCHEME, PARSER_VERSION, parseDocument } from "./parser";
import { segment, wordCount } from "./segment";

export interface RawDocument {
  doc_id: string;
  text: string;
  label?: string;
}

export const MAX_WORDS = 512;

export function readCorpus(inputPath: string): RawDocument[] {
  const lines = fs.readFileSync(inputPath, "utf-8").split("\n");
  const docs: RawDocument[] = [];
  for (const line of lines) {
    if (!line.trim()) continue;
    const raw = JSON.parse(line) as RawDocument;
    if (typeof raw.doc_id !== "string" || typeof raw.text !== "string") {
      throw new Error(`bad corpus line: ${line.slice(0, 80)}`);
    }
    docs.push(raw);
  }
  return docs;
}

function checkLength(doc: RawDocument, warnings: string[]): void {
  const words = wordCount(doc.text);
  if (words > MAX_WORDS) {
    const msg =
      `${doc.doc_id}: ${words} words exceeds ${MAX_WORDS}; ` +
      `processed per sentence (split at sentence boundaries)`;
    warnings.push(msg);
    console.warn(`warning: ${msg}`);
  }
}

export function runParse(inputPath: string, outDir: string): string[] {
  fs.mkdirSync(outDir, { recursive: true });
  const manifest = loadManifest(outDir);
  manifest.parser = { name: PARSER_NAME, version: PARSER_VERSION };
  manifest.scheme = PARSER_SCHEME;
  const written: string[] = [];
  for (const doc of readCorpus(inputPath)) {
    const sentences = segment(doc.text);
    if (sentences.length === 0) {
      const msg = `${doc.doc_id}: empty document skipped`;
      manifest.warnings.push(msg);
      console.warn(`warning: ${msg}`);
      continue;
    }
    checkLength(doc, manifest.warnings);
    const trees = parseDocument(sentences);
    const file = path.join(outDir, `${doc.doc_id}.conllu`);
    fs.writeFileSync(file, documentToConllu(doc.doc_id, trees, doc.label), "utf-8");
    const entry = documentEntry(manifest, doc.doc_id);
    entry.conllu = path.basename(file);
    entry.words = sentences.reduce((n, s) => n + s.length, 0);
    written.push(file);
  }
  saveManifest(outDir, manifest);
  return written;
}

export function runEmbed(inputPath: string, outDir: string, dim: number = DEFAULT_DIM): string[] {
  fs.mkdirSync(outDir, { recursive: true });
  const manifest = loadManifest(outDir);
  manifest.encoder = { name: ENCODER_NAME, version: ENCODER_VERSION, dim };
  const written: string[] = [];
  for (const doc of readCorpus(inputPath)) {
    const sentences = segment(doc.text);
    if (sentences.length === 0) {
      const msg = `${doc.doc_id}: empty document skipped`;
      manifest.warnings.push(msg);
      console.warn(`warning: ${msg}`);
      continue;
    }
    checkLength(doc, manifest.warnings);
    const encoded = encodeDocument(sentences, dim);
    const embFile = path.join(outDir, `${doc.doc_id}.emb`);
    const offsetsFile = path.join(outDir, `${doc.doc_id}.offsets.json`);
    fs.writeFileSync(embFile, toEmbFile(encoded), "utf-8");
    fs.writeFileSync(offsetsFile, toOffsetsFile(encoded), "utf-8");
    const entry = documentEntry(manifest, doc.doc_id);
    entry.emb = path.basename(embFile);
    entry.offsets = path.basename(offsetsFile);
    written.push(embFile, offsetsFile);
  }
  saveManifest(outDir, manifest);
  return written;
}

function argValue(argv: string[], flag: string): string | undefined {
  const i = argv.indexOf(flag);
  return i >= 0 && i + 1 < argv.length ? argv[i + 1] : undefined;
}

export function main(argv: string[]): number {
  const [command] = argv;
  const input = argValue(argv, "--input");
  const outDir = argValue(argv, "--out-dir");
  if (!command || !input || !outDir) {
    console.error(
      "usage: cli.js <parse|embed|all> --input corpus.jsonl --out-dir DIR [--dim N]",
    );
    return 2;
  }
  const dim = Number(argValue(argv, "--dim") ?? DEFAULT_DIM);
  try {
    if (command === "parse") {
      runParse(input, outDir);
    } else if (command === "embed") {
      runEmbed(input, outDir, dim);
    } else if (command === "all") {
      runParse(input, outDir);
      runEmbed(input, outDir, dim);
    } else {
      console.error(`unknown command: ${command}`);
      return 2;
    }
  } catch (err) {
    console.error(`error: ${(err as Error).message}`);
    return 2;
  }
  return 0;
}

if (require.main === module) {
  process.exit(main(process.argv.slice(2)));
}
