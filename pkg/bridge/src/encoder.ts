/**
 * Deterministic token encoder.
 *
 * Words are split into subwords by greedy longest-match over a fixed piece
 * inventory; each subword gets a hash-seeded pseudo-random vector, mixed with
 * its sentence neighbours so embeddings are context-dependent. This stands in
 * for an external transformer encoder (no pretrained weights are available
 * here); the output formats are exactly the toolkit's EMB + offsets files.
 */

import { Sentence } from "./segment";

export const ENCODER_NAME = "hashctx";
export const ENCODER_VERSION = "0.1.0";
export const DEFAULT_DIM = 32;

const PIECES = [
  "tion", "ment", "ness", "able", "ing", "ed", "er", "est", "ly", "al",
  "ous", "ive", "ful", "un", "re", "pre", "dis", "ex", "非" /* never matches */,
].filter((p) => /^[a-z]+$/.test(p));

/** Greedy subword split; every word yields at least one piece. */
export function subwords(word: string): string[] {
  const lower = word.toLowerCase();
  if (lower.length <= 4) return [lower];
  const out: string[] = [];
  let rest = lower;
  // peel one known suffix, then chunk the stem
  for (const piece of PIECES) {
    if (rest.length > piece.length + 2 && rest.endsWith(piece)) {
      rest = rest.slice(0, rest.length - piece.length);
      for (let i = 0; i < rest.length; i += 4) out.push(rest.slice(i, i + 4));
      out.push(`##${piece}`);
      return out;
    }
  }
  for (let i = 0; i < rest.length; i += 4) out.push(rest.slice(i, i + 4));
  return out;
}

function fnv1a(text: string): number {
  let hash = 0x811c9dc5;
  for (let i = 0; i < text.length; i += 1) {
    hash ^= text.charCodeAt(i);
    hash = Math.imul(hash, 0x01000193);
  }
  return hash >>> 0;
}

/** mulberry32: tiny deterministic PRNG over a 32-bit seed. */
function mulberry32(seed: number): () => number {
  let state = seed >>> 0;
  return () => {
    state = (state + 0x6d2b79f5) >>> 0;
    let t = state;
    t = Math.imul(t ^ (t >>> 15), t | 1);
    t ^= t + Math.imul(t ^ (t >>> 7), t | 61);
    return ((t ^ (t >>> 14)) >>> 0) / 4294967296;
  };
}

function pieceVector(piece: string, dim: number): number[] {
  const next = mulberry32(fnv1a(piece));
  const vec = new Array<number>(dim);
  for (let i = 0; i < dim; i += 1) vec[i] = next() * 2 - 1;
  return vec;
}

export interface Encoded {
  /** One row per subword, document-wide, sentence by sentence. */
  rows: number[][];
  /** "<sentIndex>:<wordId>" -> global row indices. */
  offsets: Record<string, number[]>;
  dim: number;
}

export function encodeDocument(sentences: Sentence[], dim: number = DEFAULT_DIM): Encoded {
  const rows: number[][] = [];
  const offsets: Record<string, number[]> = {};
  for (let s = 0; s < sentences.length; s += 1) {
    const sentence = sentences[s];
    const raw: number[][] = [];
    const spans: Array<[number, number]> = [];
    for (const word of sentence) {
      const pieces = subwords(word.form);
      if (pieces.length === 0) {
        throw new Error(`alignment gap: word ${word.id} (${word.form}) has no subwords`);
      }
      const start = raw.length;
      for (const piece of pieces) raw.push(pieceVector(piece, dim));
      spans.push([start, raw.length]);
    }
    // contextual mix over sentence neighbours: 0.6 self, 0.2 each side
    const mixed = raw.map((vec, i) => {
      const parts: Array<[number, number[]]> = [[0.6, vec]];
      if (i > 0) parts.push([0.2, raw[i - 1]]);
      if (i < raw.length - 1) parts.push([0.2, raw[i + 1]]);
      const total = parts.reduce((acc, [w]) => acc + w, 0);
      const out = new Array<number>(dim).fill(0);
      for (const [w, v] of parts) {
        for (let j = 0; j < dim; j += 1) out[j] += (w / total) * v[j];
      }
      return out;
    });
    const base = rows.length;
    for (const row of mixed) rows.push(row);
    sentence.forEach((word, wi) => {
      const [start, end] = spans[wi];
      const ids: number[] = [];
      for (let r = start; r < end; r += 1) ids.push(base + r);
      offsets[`${s}:${word.id}`] = ids;
    });
  }
  return { rows, offsets, dim };
}

/** `EMB 1 <n> <dim>` header + one row of decimal floats per line. */
export function toEmbFile(encoded: Encoded): string {
  const lines = [`EMB 1 ${encoded.rows.length} ${encoded.dim}`];
  for (const row of encoded.rows) {
    lines.push(row.map((x) => String(x)).join(" "));
  }
  return lines.join("\n") + "\n";
}

export function toOffsetsFile(encoded: Encoded): string {
  return JSON.stringify(encoded.offsets, null, 2) + "\n";
}
