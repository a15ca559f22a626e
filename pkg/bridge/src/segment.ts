/**
 * Shared sentence/word segmenter.
 *
 * Both the parser and the encoder consume this module, so their segmentations
 * are identical by construction and offsets keys always resolve downstream.
 */

export interface Word {
  /** 1-based index within the sentence. */
  id: number;
  form: string;
}

export type Sentence = Word[];

const TOKEN = /[A-Za-z]+(?:'[A-Za-z]+)?|[0-9]+(?:\.[0-9]+)?|[^\sA-Za-z0-9]/g;
const SENTENCE_END = /[.!?]/;

export function tokenize(text: string): string[] {
  return text.match(TOKEN) ?? [];
}

/** Split a document into sentences of numbered words. */
export function segment(text: string): Sentence[] {
  const tokens = tokenize(text);
  const sentences: Sentence[] = [];
  let current: string[] = [];
  for (const tok of tokens) {
    current.push(tok);
    if (SENTENCE_END.test(tok) && tok.length === 1) {
      sentences.push(current.map((form, i) => ({ id: i + 1, form })));
      current = [];
    }
  }
  if (current.length > 0) {
    sentences.push(current.map((form, i) => ({ id: i + 1, form })));
  }
  return sentences;
}

export function wordCount(text: string): number {
  return segment(text).reduce((n, sent) => n + sent.length, 0);
}
