/**
 * Compact deterministic dependency parser.
 *
 * Emits ClearNLP-style labels (NSUBJ, DOBJ, PREP, POBJ, PRT, NEG, AUX,
 * AUXPASS, COMPOUND, ...) over the shared segmentation, guaranteeing a
 * single-root acyclic tree per sentence. It is a rule engine over a small
 * lexicon, not a trained model; the manifest records its name and version.
 */

import { Sentence } from "./segment";

export const PARSER_NAME = "rulearc";
export const PARSER_VERSION = "0.1.0";
export const PARSER_SCHEME = "clearnlp";

export interface ParsedToken {
  id: number;
  form: string;
  lemma: string;
  upos: string;
  head: number;
  deprel: string;
}

const DETS = new Set([
  "the", "a", "an", "no", "this", "that", "these", "those", "some", "any",
  "each", "every", "its", "their", "his", "her",
]);

const ADPS = new Set([
  "on", "in", "by", "for", "of", "near", "at", "with", "from", "to", "into",
  "over", "after", "before", "during", "against", "across", "under", "about",
]);

const AUXES = new Set([
  "is", "are", "was", "were", "be", "been", "being", "has", "have", "had",
  "will", "would", "can", "could", "may", "might", "did", "do", "does",
]);

const BE_FORMS = new Set(["is", "are", "was", "were", "be", "been", "being"]);

const CONJS = new Set(["and", "but", "or"]);

const NEGS = new Set(["not", "never"]);

const ADVS = new Set([
  "quickly", "again", "soon", "yesterday", "today", "sharply", "slowly",
  "already", "still", "abroad", "overnight",
]);

const ADJS = new Set([
  "new", "heavy", "major", "rare", "long", "narrow", "early", "national",
  "controversial", "central", "several", "many", "large", "small", "local",
  "strong", "severe", "record", "late", "public", "regional", "dozens",
  "great", "old", "young", "top", "former",
]);

const PARTICLES = new Set(["up", "off", "down", "out", "over", "away", "back"]);

// verb lemma -> inflected forms recognized by the tagger
const VERB_TABLE: Record<string, string[]> = {
  approve: ["approve", "approves", "approved", "approving"],
  praise: ["praise", "praises", "praised", "praising"],
  flood: ["flood", "floods", "flooded", "flooding"],
  arrive: ["arrive", "arrives", "arrived", "arriving"],
  open: ["open", "opens", "opened", "opening"],
  report: ["report", "reports", "reported", "reporting"],
  surprise: ["surprise", "surprises", "surprised", "surprising"],
  cancel: ["cancel", "cancels", "canceled", "cancelled", "canceling"],
  wait: ["wait", "waits", "waited", "waiting"],
  debate: ["debate", "debates", "debated", "debating"],
  fail: ["fail", "fails", "failed", "failing"],
  launch: ["launch", "launches", "launched", "launching"],
  contain: ["contain", "contains", "contained", "containing"],
  win: ["win", "wins", "won", "winning"],
  celebrate: ["celebrate", "celebrates", "celebrated", "celebrating"],
  raise: ["raise", "raises", "raised", "raising"],
  expect: ["expect", "expects", "expected", "expecting"],
  announce: ["announce", "announces", "announced", "announcing"],
  warn: ["warn", "warns", "warned", "warning"],
  visit: ["visit", "visits", "visited", "visiting"],
  sign: ["sign", "signs", "signed", "signing"],
  fall: ["fall", "falls", "fell", "fallen", "falling"],
  rise: ["rise", "rises", "rose", "risen", "rising"],
  close: ["close", "closes", "closed", "closing"],
  delay: ["delay", "delays", "delayed", "delaying"],
  injure: ["injure", "injures", "injured", "injuring"],
  elect: ["elect", "elects", "elected", "electing"],
  vote: ["vote", "votes", "voted", "voting"],
  meet: ["meet", "meets", "met", "meeting"],
  build: ["build", "builds", "built", "building"],
  say: ["say", "says", "said", "saying"],
  go: ["go", "goes", "went", "gone", "going"],
  take: ["take", "takes", "took", "taken", "taking"],
};

const VERB_FORMS = new Map<string, string>();
for (const [lemma, forms] of Object.entries(VERB_TABLE)) {
  for (const form of forms) VERB_FORMS.set(form, lemma);
}

const PARTICIPLES = new Set<string>();
for (const forms of Object.values(VERB_TABLE)) {
  for (const form of forms) {
    if (form.endsWith("ed") || form.endsWith("en") || form === "won" || form === "built") {
      PARTICIPLES.add(form);
    }
  }
}

function isPunct(form: string): boolean {
  return /^[^\sA-Za-z0-9]+$/.test(form);
}

function isCapitalized(form: string): boolean {
  return /^[A-Z]/.test(form) && /[a-z]/.test(form.slice(1)) === true;
}

function nounLemma(form: string): string {
  const lower = form.toLowerCase();
  if (lower.length > 3 && lower.endsWith("s") && !lower.endsWith("ss")) {
    return lower.slice(0, -1);
  }
  return lower;
}

interface Tagged {
  id: number;
  form: string;
  lower: string;
  lemma: string;
  upos: string;
}

/** Deterministic POS tagging over the token forms. */
export function tag(sentence: Sentence): Tagged[] {
  const out: Tagged[] = [];
  for (const word of sentence) {
    const lower = word.form.toLowerCase();
    let upos: string;
    let lemma = lower;
    const prev = out[out.length - 1];
    if (isPunct(word.form)) {
      upos = "PUNCT";
    } else if (/^[0-9]/.test(word.form)) {
      upos = "NUM";
    } else if (DETS.has(lower)) {
      upos = "DET";
    } else if (ADPS.has(lower) || PARTICLES.has(lower)) {
      upos = "ADP";
    } else if (NEGS.has(lower)) {
      upos = "ADV";
    } else if (CONJS.has(lower)) {
      upos = "CCONJ";
    } else if (AUXES.has(lower) && !(prev && (prev.upos === "DET" || prev.upos === "ADJ"))) {
      upos = "AUX";
      lemma = BE_FORMS.has(lower) ? "be" : lower;
    } else if (ADVS.has(lower) || (lower.endsWith("ly") && lower.length > 4)) {
      upos = "ADV";
    } else if (VERB_FORMS.has(lower) && !(prev && (prev.upos === "DET" || prev.upos === "ADJ"))) {
      upos = "VERB";
      lemma = VERB_FORMS.get(lower)!;
    } else if (ADJS.has(lower)) {
      upos = "ADJ";
    } else if (word.id > 1 && isCapitalized(word.form)) {
      upos = "PROPN";
      lemma = word.form;
    } else {
      upos = "NOUN";
      lemma = nounLemma(word.form);
    }
    out.push({ id: word.id, form: word.form, lower, lemma, upos });
  }
  return out;
}

const NOMINAL = new Set(["NOUN", "PROPN", "NUM"]);
const NP_MATERIAL = new Set(["DET", "ADJ", "NUM", "NOUN", "PROPN"]);

interface Phrase {
  start: number; // token indices into the sentence array (0-based)
  end: number;
  headIndex: number;
}

function nounPhrases(tokens: Tagged[]): Phrase[] {
  const phrases: Phrase[] = [];
  let i = 0;
  while (i < tokens.length) {
    if (!NP_MATERIAL.has(tokens[i].upos)) {
      i += 1;
      continue;
    }
    const start = i;
    while (i < tokens.length && NP_MATERIAL.has(tokens[i].upos)) i += 1;
    const end = i - 1;
    let headIndex = end;
    while (headIndex > start && !NOMINAL.has(tokens[headIndex].upos)) headIndex -= 1;
    if (NOMINAL.has(tokens[headIndex].upos)) {
      phrases.push({ start, end, headIndex });
    }
  }
  return phrases;
}

/** Parse one tagged sentence into a single-rooted tree. */
export function parseSentence(sentence: Sentence): ParsedToken[] {
  const tokens = tag(sentence);
  const n = tokens.length;
  const head = new Array<number>(n).fill(0);
  const deprel = new Array<string>(n).fill("");
  const allPhrases = nounPhrases(tokens);

  // root: first VERB, else the head of the first noun phrase, else token 1
  let rootIdx = tokens.findIndex((t) => t.upos === "VERB");
  if (rootIdx < 0 && allPhrases.length > 0) rootIdx = allPhrases[0].headIndex;
  if (rootIdx < 0) rootIdx = 0;
  deprel[rootIdx] = "ROOT";
  head[rootIdx] = 0;

  // passive: a be-form auxiliary run immediately before a participle root
  let passive = false;
  if (tokens[rootIdx].upos === "VERB" && PARTICIPLES.has(tokens[rootIdx].lower)) {
    for (let j = rootIdx - 1; j >= 0 && tokens[j].upos === "AUX"; j -= 1) {
      if (BE_FORMS.has(tokens[j].lower)) passive = true;
    }
  }

  const phrases = allPhrases;
  const phraseOf = new Array<number>(n).fill(-1);
  phrases.forEach((p, k) => {
    for (let j = p.start; j <= p.end; j += 1) phraseOf[j] = k;
  });

  // attach in-phrase material to its head
  for (const p of phrases) {
    const headId = tokens[p.headIndex].id;
    for (let j = p.start; j <= p.end; j += 1) {
      if (j === p.headIndex || j === rootIdx) continue;
      head[j] = headId;
      const upos = tokens[j].upos;
      deprel[j] =
        upos === "DET" ? "DET"
        : upos === "ADJ" ? "AMOD"
        : upos === "NUM" ? "NUMMOD"
        : "COMPOUND";
    }
  }

  // attach phrase heads
  let sawSubject = false;
  let sawObject = false;
  for (const p of phrases) {
    const j = p.headIndex;
    if (j === rootIdx) continue;
    const before = p.start > 0 ? tokens[p.start - 1] : undefined;
    if (before && before.upos === "ADP") {
      head[j] = before.id;
      deprel[j] = "POBJ";
    } else if (j < rootIdx && !sawSubject) {
      head[j] = tokens[rootIdx].id;
      deprel[j] = passive ? "NSUBJPASS" : "NSUBJ";
      sawSubject = true;
    } else if (j > rootIdx && tokens[rootIdx].upos === "VERB" && !sawObject && !passive) {
      head[j] = tokens[rootIdx].id;
      deprel[j] = "DOBJ";
      sawObject = true;
    } else {
      head[j] = tokens[rootIdx].id;
      deprel[j] = "DEP";
    }
  }

  // everything outside noun phrases
  for (let j = 0; j < n; j += 1) {
    if (j === rootIdx || phraseOf[j] >= 0) continue;
    const tok = tokens[j];
    const rootId = tokens[rootIdx].id;
    if (tok.upos === "PUNCT") {
      head[j] = rootId;
      deprel[j] = "PUNCT";
    } else if (tok.upos === "AUX") {
      head[j] = rootId;
      deprel[j] = passive && BE_FORMS.has(tok.lower) && j < rootIdx ? "AUXPASS" : "AUX";
    } else if (NEGS.has(tok.lower)) {
      head[j] = rootId;
      deprel[j] = "NEG";
    } else if (tok.upos === "ADP") {
      if (j === rootIdx + 1 && PARTICLES.has(tok.lower) && tokens[rootIdx].upos === "VERB"
          && (j + 1 >= n || tokens[j + 1].upos === "PUNCT")) {
        head[j] = rootId;
        deprel[j] = "PRT";
      } else {
        head[j] = rootId;
        deprel[j] = passive && tok.lower === "by" ? "AGENT" : "PREP";
      }
    } else if (tok.upos === "ADV") {
      head[j] = rootId;
      deprel[j] = "ADVMOD";
    } else if (tok.upos === "CCONJ") {
      head[j] = rootId;
      deprel[j] = "CC";
    } else if (tok.upos === "VERB") {
      head[j] = rootId;
      deprel[j] = "CONJ";
    } else {
      head[j] = rootId;
      deprel[j] = "DEP";
    }
  }

  return tokens.map((tok, j) => ({
    id: tok.id,
    form: tok.form,
    lemma: tok.lemma,
    upos: tok.upos,
    head: head[j],
    deprel: deprel[j],
  }));
}

/** Structural validation mirroring the toolkit's tree invariants. */
export function validateTree(tree: ParsedToken[]): void {
  const n = tree.length;
  const roots = tree.filter((t) => t.head === 0);
  if (roots.length !== 1) {
    throw new Error(`expected exactly one root, found ${roots.length}`);
  }
  const children = new Map<number, number[]>();
  tree.forEach((t, i) => {
    if (t.id !== i + 1) throw new Error(`non-contiguous id ${t.id}`);
    if (t.head === t.id) throw new Error(`word ${t.id} is its own head`);
    if (t.head < 0 || t.head > n) throw new Error(`head ${t.head} out of range`);
    if (t.head !== 0) {
      const kids = children.get(t.head) ?? [];
      kids.push(t.id);
      children.set(t.head, kids);
    }
  });
  const seen = new Set<number>();
  const stack = [roots[0].id];
  while (stack.length > 0) {
    const cur = stack.pop()!;
    seen.add(cur);
    for (const kid of children.get(cur) ?? []) stack.push(kid);
  }
  if (seen.size !== n) throw new Error("cycle: some words unreachable from the root");
}

export function parseDocument(sentences: Sentence[]): ParsedToken[][] {
  return sentences.map((sentence) => {
    const tree = parseSentence(sentence);
    validateTree(tree);
    return tree;
  });
}
