/** CoNLL-U serialization for parsed documents (10 columns, LF endings). */

import { ParsedToken } from "./parser";

export function sentenceToConllu(tree: ParsedToken[]): string {
  return tree
    .map((t) =>
      [t.id, t.form, t.lemma, t.upos, "_", "_", t.head, t.deprel, "_", "_"].join("\t"),
    )
    .join("\n") + "\n";
}

export function documentToConllu(
  docId: string,
  trees: ParsedToken[][],
  label?: string,
): string {
  const parts = [`# doc_id = ${docId}\n`];
  if (label !== undefined) parts.push(`# label = ${label}\n`);
  for (const tree of trees) {
    parts.push(sentenceToConllu(tree));
    parts.push("\n");
  }
  return parts.join("");
}
