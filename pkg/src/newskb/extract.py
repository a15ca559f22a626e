"""Subject / predicate / object / complement / adverbial chunk extraction.

All rules operate on canonical dependency labels (NSUBJ, DOBJ, PRT, ...) and
POS tags (NOUN, VERB, ADP, ...) over immutable trees; everything here is a
pure function, parallelizable per sentence.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, replace

from .conllu import DepTree

SUBJECT_DEPRELS = frozenset({"NSUBJ", "CSUBJ", "NSUBJPASS", "CSUBJPASS"})
SUBJECT_EXPAND_POS = frozenset({"NOUN", "PROPN"})
PREDICATE_FOLD_DEPRELS = frozenset({"PRT", "NEG", "AUX", "AUXPASS"})
COMPLEMENT_DEPRELS = frozenset({"ATTR", "OPRD", "PCOMP", "CCOMP", "XCOMP"})
ADVERBIAL_DEPRELS = frozenset({"ADVCL", "ADVMOD", "NPADVMOD"})
PREP_HEAD_DEPRELS = frozenset({"POBJ", "PREP", "AGENT"})

SUBJECT = "SUBJECT"
PREDICATE = "PREDICATE"
DIRECT_OBJECT = "DIRECT_OBJECT"
INDIRECT_OBJECT = "INDIRECT_OBJECT"
PREP_OBJECT = "PREP_OBJECT"
COMPLEMENT = "COMPLEMENT"
ADVERBIAL = "ADVERBIAL"


@dataclass(frozen=True)
class Chunk:
    """A surface-ordered group of words expressing one frame element."""

    kind: str
    word_ids: tuple[int, ...]
    text: str
    head_id: int
    head_lemma: str


@dataclass(frozen=True)
class ClauseFrame:
    """The chunk set extracted for one predicate: {S, V, Od, Oi, Op, C, A}."""

    subject: Chunk
    predicate: Chunk
    direct_object: Chunk | None
    indirect_object: Chunk | None
    prep_objects: tuple[Chunk, ...]
    complements: tuple[Chunk, ...]
    adverbials: tuple[Chunk, ...]
    negated: bool
    passive: bool
    sent_index: int = 0


def _make_chunk(tree: DepTree, kind: str, word_ids, head_id: int) -> Chunk:
    ids = tuple(sorted(word_ids))
    return Chunk(
        kind=kind,
        word_ids=ids,
        text=" ".join(tree.token(i).form for i in ids),
        head_id=head_id,
        head_lemma=tree.token(head_id).lemma,
    )


def extract_subject_heads(tree: DepTree) -> list[int]:
    """Word indices of subject-labeled tokens, in surface order.

    A sentence without any VERB token falls back to the root as the sole
    subject head (verbless fragments).
    """
    if not tree.has_upos("VERB"):
        return [tree.root_id]
    return [tok.id for tok in tree.tokens if tok.deprel in SUBJECT_DEPRELS]


def expand_subject_chunk(tree: DepTree, head: int) -> Chunk:
    """Grow the subject chunk from its head.

    A descendant joins only if every hop on its path from the head is either a
    COMPOUND dependent or carries a NOUN/PROPN tag; this keeps hierarchically
    distinct subjects in the same subtree apart.
    """
    ids = [head]
    stack = [head]
    while stack:
        cur = stack.pop()
        for child in tree.children(cur):
            if child.deprel == "COMPOUND" or child.upos in SUBJECT_EXPAND_POS:
                ids.append(child.id)
                stack.append(child.id)
    return _make_chunk(tree, SUBJECT, ids, head)


def extract_predicate_head(tree: DepTree, subject_head: int) -> int:
    """The governor of the subject head; the head itself when it is the root."""
    tok = tree.token(subject_head)
    return subject_head if tok.head == 0 else tok.head


def expand_predicate_chunk(tree: DepTree, pred_head: int) -> Chunk:
    """The predicate head plus directly-attached particles, negation, and
    (passive) auxiliaries: PRT, NEG, AUX, AUXPASS children only."""
    ids = [pred_head]
    for child in tree.children(pred_head):
        if child.deprel in PREDICATE_FOLD_DEPRELS:
            ids.append(child.id)
    return _make_chunk(tree, PREDICATE, ids, pred_head)


def predicate_flags(tree: DepTree, predicate: Chunk) -> tuple[bool, bool]:
    """(negated, passive) from what was folded into the predicate chunk."""
    folded = [tree.token(i) for i in predicate.word_ids if i != predicate.head_id]
    negated = any(tok.deprel == "NEG" for tok in folded)
    passive = any(tok.deprel == "AUXPASS" for tok in folded)
    return negated, passive


def _compound_expansion(tree: DepTree, head: int) -> list[int]:
    """`head` plus descendants reachable through COMPOUND links only."""
    ids = [head]
    stack = [head]
    while stack:
        cur = stack.pop()
        for child in tree.children(cur):
            if child.deprel == "COMPOUND":
                ids.append(child.id)
                stack.append(child.id)
    return ids


def _is_prep_head(tok) -> bool:
    if tok.deprel in PREP_HEAD_DEPRELS:
        return True
    return tok.deprel == "DATIVE" and tok.upos == "ADP"


# Children that belong to other frame elements; the prepositional-object
# search never descends into them, so chunks of different kinds cannot
# claim the same words.
_PREP_SEARCH_BLOCKED = SUBJECT_DEPRELS | COMPLEMENT_DEPRELS | ADVERBIAL_DEPRELS


def _prep_object_heads(tree: DepTree, pred_head: int) -> list[int]:
    """Top-most prepositional-object heads in the predicate subtree."""
    heads = []
    stack = list(tree.children(pred_head))
    while stack:
        tok = stack.pop()
        if tok.deprel in _PREP_SEARCH_BLOCKED:
            continue
        if _is_prep_head(tok):
            heads.append(tok.id)
            continue  # one chunk per top-most head; no nesting
        stack.extend(tree.children(tok.id))
    return sorted(heads)


def extract_objects(
    tree: DepTree, pred_head: int
) -> tuple[Chunk | None, Chunk | None, list[Chunk]]:
    """Direct, indirect, and prepositional objects of a predicate head.

    Direct/indirect object heads are DOBJ/DATIVE children without an ADP tag,
    expanded along COMPOUND links. Prepositional heads (POBJ, PREP, AGENT, or
    DATIVE-with-ADP) come from the predicate subtree; a PREP-like head absorbs
    the expansion of its POBJ children into the same chunk.
    """
    direct = indirect = None
    for child in tree.children(pred_head):
        if child.upos == "ADP":
            continue
        if direct is None and child.deprel == "DOBJ":
            direct = _make_chunk(
                tree, DIRECT_OBJECT, _compound_expansion(tree, child.id), child.id
            )
        elif indirect is None and child.deprel == "DATIVE":
            indirect = _make_chunk(
                tree, INDIRECT_OBJECT, _compound_expansion(tree, child.id), child.id
            )
    preps = []
    for head in _prep_object_heads(tree, pred_head):
        ids = _compound_expansion(tree, head)
        for child in tree.children(head):
            if child.deprel == "POBJ":
                ids.extend(_compound_expansion(tree, child.id))
        preps.append(_make_chunk(tree, PREP_OBJECT, ids, head))
    return direct, indirect, preps


def extract_complements(tree: DepTree, pred_head: int) -> list[Chunk]:
    """One full-subtree chunk per ATTR/OPRD/PCOMP/CCOMP/XCOMP child."""
    return [
        _make_chunk(tree, COMPLEMENT, tree.subtree_span(child.id), child.id)
        for child in tree.children(pred_head)
        if child.deprel in COMPLEMENT_DEPRELS
    ]


def extract_adverbials(tree: DepTree, pred_head: int) -> list[Chunk]:
    """One full-subtree chunk per ADVCL/ADVMOD/NPADVMOD child of the predicate.

    Only predicate-attached adverbials qualify; modifiers hanging off other
    words stay inside their parent's chunk.
    """
    return [
        _make_chunk(tree, ADVERBIAL, tree.subtree_span(child.id), child.id)
        for child in tree.children(pred_head)
        if child.deprel in ADVERBIAL_DEPRELS
    ]


_NER_MISC = re.compile(r"NER=([^:|]+):(\d+)-(\d+)")


def ner_spans_from_misc(tree: DepTree) -> list[tuple[int, int]]:
    """Entity spans declared in the MISC column as `NER=<label>:<start>-<end>`."""
    spans = []
    for tok in tree.tokens:
        m = _NER_MISC.search(tok.misc)
        if m:
            span = (int(m.group(2)), int(m.group(3)))
            if span not in spans:
                spans.append(span)
    return spans


def misc_rectifier(tree: DepTree):
    """A rectifier hook serving the spans found in the tree's MISC column."""
    spans = ner_spans_from_misc(tree)

    def rectify(text, chunk_spans):
        return spans

    return rectify


def _rectify_subject(tree: DepTree, chunk: Chunk, rectifier) -> Chunk:
    spans = rectifier(tree.text(), [(chunk.word_ids[0], chunk.word_ids[-1])])
    for start, end in spans:
        if start <= chunk.head_id <= end:
            return _make_chunk(tree, SUBJECT, range(start, end + 1), chunk.head_id)
    return chunk


def extract_frames(tree: DepTree, rectifier=None, sent_index: int = 0) -> list[ClauseFrame]:
    """One clause frame per subject head, ordered by subject surface position.

    Verbless sentences produce a synthetic predicate chunk copying the subject
    chunk, so every frame stays well-formed. An optional NER rectifier replaces
    a subject chunk's span with the entity span containing its head.
    """
    frames = []
    for subj_head in extract_subject_heads(tree):
        subject = expand_subject_chunk(tree, subj_head)
        if rectifier is not None:
            subject = _rectify_subject(tree, subject, rectifier)
        pred_head = extract_predicate_head(tree, subj_head)
        if pred_head == subj_head:
            predicate = replace(subject, kind=PREDICATE)
            negated = passive = False
        else:
            predicate = expand_predicate_chunk(tree, pred_head)
            negated, passive = predicate_flags(tree, predicate)
        direct, indirect, preps = extract_objects(tree, pred_head)
        object_heads = {c.head_id for c in (direct, indirect) if c is not None}
        complements = [
            c for c in extract_complements(tree, pred_head) if c.head_id not in object_heads
        ]
        adverbials = extract_adverbials(tree, pred_head)
        frames.append(
            ClauseFrame(
                subject=subject,
                predicate=predicate,
                direct_object=direct,
                indirect_object=indirect,
                prep_objects=tuple(preps),
                complements=tuple(complements),
                adverbials=tuple(adverbials),
                negated=negated,
                passive=passive,
                sent_index=sent_index,
            )
        )
    return frames


def extract_document_frames(doc, rectifier_factory=None) -> list[ClauseFrame]:
    """Frames for every sentence of a document, in sentence order.

    `rectifier_factory`, when given, is called per tree to build its rectifier
    (e.g. `misc_rectifier`).
    """
    frames = []
    for sent_index, tree in enumerate(doc.sentences):
        rectifier = rectifier_factory(tree) if rectifier_factory else None
        frames.extend(extract_frames(tree, rectifier=rectifier, sent_index=sent_index))
    return frames


def frame_to_dict(frame: ClauseFrame, doc_id: str) -> dict:
    """The JSONL dump shape used by the CLI's `extract --frames`."""

    def text(chunk):
        return None if chunk is None else chunk.text

    spans = {"S": list(frame.subject.word_ids), "V": list(frame.predicate.word_ids)}
    if frame.direct_object is not None:
        spans["Od"] = list(frame.direct_object.word_ids)
    if frame.indirect_object is not None:
        spans["Oi"] = list(frame.indirect_object.word_ids)
    spans["Op"] = [list(c.word_ids) for c in frame.prep_objects]
    spans["C"] = [list(c.word_ids) for c in frame.complements]
    spans["A"] = [list(c.word_ids) for c in frame.adverbials]
    return {
        "doc": doc_id,
        "sent": frame.sent_index,
        "S": frame.subject.text,
        "V": frame.predicate.text,
        "Od": text(frame.direct_object),
        "Oi": text(frame.indirect_object),
        "Op": [c.text for c in frame.prep_objects],
        "C": [c.text for c in frame.complements],
        "A": [c.text for c in frame.adverbials],
        "neg": frame.negated,
        "passive": frame.passive,
        "spans": spans,
    }
