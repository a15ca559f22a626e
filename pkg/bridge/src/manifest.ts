/** Manifest describing what the bridge produced and with which tools. */

import * as fs from "fs";
import * as path from "path";

export interface DocumentEntry {
  doc_id: string;
  conllu?: string;
  emb?: string;
  offsets?: string;
  words?: number;
}

export interface Manifest {
  parser?: { name: string; version: string };
  encoder?: { name: string; version: string; dim: number };
  scheme?: string;
  documents: DocumentEntry[];
  warnings: string[];
}

export function loadManifest(outDir: string): Manifest {
  const file = path.join(outDir, "manifest.json");
  if (fs.existsSync(file)) {
    return JSON.parse(fs.readFileSync(file, "utf-8")) as Manifest;
  }
  return { documents: [], warnings: [] };
}

export function saveManifest(outDir: string, manifest: Manifest): void {
  const file = path.join(outDir, "manifest.json");
  fs.writeFileSync(file, JSON.stringify(manifest, null, 2) + "\n", "utf-8");
}

export function documentEntry(manifest: Manifest, docId: string): DocumentEntry {
  let entry = manifest.documents.find((d) => d.doc_id === docId);
  if (!entry) {
    entry = { doc_id: docId };
    manifest.documents.push(entry);
  }
  return entry;
}
