/**
 * End-to-end smoke: bridge output feeds the Python toolkit through its CLI
 * (extract -> graph -> pool) with zero alignment errors and at least one
 * relational tuple per document.
 */

import { spawnSync } from "child_process";
import * as fs from "fs";
import * as os from "os";
import * as path from "path";

import { beforeAll, describe, expect, it } from "vitest";

import { runEmbed, runParse } from "../src/cli";

const SAMPLES = path.join(__dirname, "..", "samples", "news.jsonl");
const DIM = 16;

let outDir: string;
let docIds: string[];

function python(args: string[]) {
  const result = spawnSync("python3", ["-m", "newskb.cli", ...args], {
    encoding: "utf-8",
  });
  return {
    code: result.status ?? -1,
    stdout: result.stdout ?? "",
    stderr: result.stderr ?? "",
  };
}

beforeAll(() => {
  outDir = fs.mkdtempSync(path.join(os.tmpdir(), "bridge-e2e-"));
  runParse(SAMPLES, outDir);
  runEmbed(SAMPLES, outDir, DIM);
  docIds = fs
    .readFileSync(SAMPLES, "utf-8")
    .split("\n")
    .filter(Boolean)
    .map((line) => JSON.parse(line).doc_id as string);
});

describe("bridge outputs", () => {
  it("emits conllu, emb, and offsets for all 10 documents plus a manifest", () => {
    expect(docIds).toHaveLength(10);
    for (const id of docIds) {
      expect(fs.existsSync(path.join(outDir, `${id}.conllu`))).toBe(true);
      expect(fs.existsSync(path.join(outDir, `${id}.emb`))).toBe(true);
      expect(fs.existsSync(path.join(outDir, `${id}.offsets.json`))).toBe(true);
    }
    const manifest = JSON.parse(
      fs.readFileSync(path.join(outDir, "manifest.json"), "utf-8"),
    );
    expect(manifest.parser.name).toBeTruthy();
    expect(manifest.encoder.dim).toBe(DIM);
    expect(manifest.scheme).toBe("clearnlp");
    expect(manifest.documents).toHaveLength(10);
  });

  it("parser and encoder segmentations agree", () => {
    for (const id of docIds) {
      const conllu = fs.readFileSync(path.join(outDir, `${id}.conllu`), "utf-8");
      const offsets = JSON.parse(
        fs.readFileSync(path.join(outDir, `${id}.offsets.json`), "utf-8"),
      ) as Record<string, number[]>;
      const wordsPerSentence: number[] = [];
      let count = 0;
      for (const line of conllu.split("\n")) {
        if (line.startsWith("#")) continue;
        if (!line.trim()) {
          if (count > 0) wordsPerSentence.push(count);
          count = 0;
          continue;
        }
        count += 1;
      }
      if (count > 0) wordsPerSentence.push(count);
      wordsPerSentence.forEach((words, sent) => {
        for (let w = 1; w <= words; w += 1) {
          expect(offsets[`${sent}:${w}`], `${id} ${sent}:${w}`).toBeDefined();
        }
      });
    }
  });
});

describe("python toolkit consumes bridge output", () => {
  it("extract emits at least one frame per document", () => {
    for (const id of docIds) {
      const { code, stdout, stderr } = python([
        "extract", path.join(outDir, `${id}.conllu`), "--scheme", "clearnlp",
      ]);
      expect(code, stderr).toBe(0);
      const frames = stdout.split("\n").filter(Boolean);
      expect(frames.length, id).toBeGreaterThan(0);
    }
  });

  it("graph -> pool completes with zero alignment errors and >=1 tuple each", () => {
    const kbDir = path.join(outDir, "kb");
    const pooledDir = path.join(outDir, "pooled");
    fs.mkdirSync(pooledDir, { recursive: true });
    for (const id of docIds) {
      const graph = python([
        "graph", path.join(outDir, `${id}.conllu`), "--out-dir", kbDir,
      ]);
      expect(graph.code, graph.stderr).toBe(0);

      const kbFile = path.join(kbDir, `${id}.json`);
      const kb = JSON.parse(fs.readFileSync(kbFile, "utf-8"));
      const predicates = kb.nodes.filter(
        (n: { kind: string }) =>
          n.kind === "PREDICATE" || n.kind === "FUSED_PREDICATE",
      );
      expect(predicates.length, id).toBeGreaterThan(0);
      expect(kb.edges.length, id).toBeGreaterThanOrEqual(2);

      const pool = python([
        "pool",
        "--kb", kbFile,
        "--emb", path.join(outDir, `${id}.emb`),
        "--offsets", path.join(outDir, `${id}.offsets.json`),
        "--out", path.join(pooledDir, `${id}.emb`),
      ]);
      expect(pool.code, pool.stderr).toBe(0);
      expect(pool.stderr).not.toMatch(/alignment|MissingOffset/i);

      const header = fs
        .readFileSync(path.join(pooledDir, `${id}.emb`), "utf-8")
        .split("\n", 1)[0]
        .split(" ");
      expect(Number(header[2])).toBe(kb.nodes.length);
      expect(Number(header[3])).toBe(DIM);
    }
  });

  it("labels carry through to the knowledge bases", () => {
    const kb = JSON.parse(
      fs.readFileSync(path.join(outDir, "kb", "news01.json"), "utf-8"),
    );
    expect(kb.label).toBe("politics");
  });
});
