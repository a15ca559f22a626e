"""Walk one sentence through the rule engine, step by step.

Run: python3 demos/01_extraction_walkthrough.py
"""

from newskb import builtin_lexicon, builtin_scheme, classify, parse_conllu
from newskb.extract import (
    expand_predicate_chunk,
    expand_subject_chunk,
    extract_frames,
    extract_objects,
    extract_predicate_head,
    extract_subject_heads,
)

# "She caught up with them." hand-annotated in the ClearNLP-style scheme:
# a phrasal-prepositional predicate (PRT particle + PREP object).
SENTENCE = """\
1\tShe\tshe\tPRON\t_\t_\t2\tnsubj\t_\t_
2\tcaught\tcatch\tVERB\t_\t_\t0\troot\t_\t_
3\tup\tup\tADP\t_\t_\t2\tprt\t_\t_
4\twith\twith\tADP\t_\t_\t2\tprep\t_\t_
5\tthem\tthey\tPRON\t_\t_\t4\tpobj\t_\t_
6\t.\t.\tPUNCT\t_\t_\t2\tpunct\t_\t_
"""


def main():
    doc = parse_conllu(SENTENCE, builtin_scheme("clearnlp"))[0]
    tree = doc.sentences[0]
    print("sentence:", tree.text())

    heads = extract_subject_heads(tree)
    print("subject heads:", heads)

    subject = expand_subject_chunk(tree, heads[0])
    print("subject chunk:", subject.text, subject.word_ids)

    pred_head = extract_predicate_head(tree, heads[0])
    predicate = expand_predicate_chunk(tree, pred_head)
    print("predicate chunk:", predicate.text, predicate.word_ids)

    direct, indirect, preps = extract_objects(tree, pred_head)
    print("direct object:", direct and direct.text)
    print("indirect object:", indirect and indirect.text)
    print("prepositional objects:", [c.text for c in preps])

    frame = extract_frames(tree)[0]
    ctype = classify(frame, builtin_lexicon())
    print("clause type:", ctype.value)


if __name__ == "__main__":
    main()
