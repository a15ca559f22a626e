"""Build knowledge-base graphs for the bundled corpus and print the templates.

Run: python3 demos/02_knowledge_graphs.py
"""

from pathlib import Path

from newskb import aggregate, builtin_lexicon, builtin_scheme, classify, parse_conllu, to_edge_list
from newskb.extract import extract_document_frames

CORPUS = Path(__file__).parent.parent / "tests" / "fixtures" / "oracle.conllu"


def main():
    docs = parse_conllu(CORPUS.read_text(encoding="utf-8"), builtin_scheme("clearnlp"))
    lex = builtin_lexicon()

    for doc in docs[:8]:
        frames = extract_document_frames(doc)
        typed = [(frame, classify(frame, lex)) for frame in frames]
        kb = aggregate(typed, doc_id=doc.doc_id, label=doc.label)
        print(f"\n{doc.doc_id}: {doc.sentences[0].text()}")
        print(f"  clause types: {kb.clause_types}")
        for node in kb.nodes:
            print(f"  node {node.id} [{node.kind:>15}] {node.text!r}")
        for edge in kb.edges:
            print(f"  edge {edge.src} -> {edge.dst} ({edge.label})")
        pairs, k = to_edge_list(kb)
        print(f"  symmetrized edge list ({k} nodes): {pairs}")


if __name__ == "__main__":
    main()
