"""Aggregation of classified clause frames into per-document knowledge graphs.

Every clause type maps to a fixed node/edge template; entity nodes with the
same normalized text are merged document-wide, predicate nodes never are.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

from .clauses import ClauseType
from .errors import EmptyDocument, InvalidId
from .extract import Chunk, ClauseFrame

ENTITY = "ENTITY"
PREDICATE = "PREDICATE"
DUMMY = "DUMMY"
FUSED_PREDICATE = "FUSED_PREDICATE"

PRED_EDGE = "PRED"
APPEND_EDGE = "APPEND"


@dataclass
class KbNode:
    id: int
    text: str
    kind: str
    provenance: list[tuple[int, tuple[int, ...]]] = field(default_factory=list)


@dataclass(frozen=True)
class KbEdge:
    src: int
    dst: int
    label: str


@dataclass
class KnowledgeBase:
    doc_id: str
    nodes: list[KbNode]
    edges: list[KbEdge]
    label: str | None = None
    clause_types: dict[str, int] = field(default_factory=dict)


def normalize_text(text: str) -> str:
    """Lowercase with internal whitespace collapsed; the node-identity key."""
    return " ".join(text.split()).lower()


class _Builder:
    def __init__(self):
        self.nodes: list[KbNode] = []
        self.edges: list[KbEdge] = []
        self._entities: dict[str, int] = {}

    def entity(self, chunk: Chunk, sent: int) -> int:
        text = normalize_text(chunk.text)
        node_id = self._entities.get(text)
        if node_id is None:
            node_id = self._add(text, ENTITY)
            self._entities[text] = node_id
        self.nodes[node_id].provenance.append((sent, chunk.word_ids))
        return node_id

    def predicate(self, chunk: Chunk, sent: int) -> int:
        node_id = self._add(normalize_text(chunk.text), PREDICATE)
        self.nodes[node_id].provenance.append((sent, chunk.word_ids))
        return node_id

    def fused(self, pred: Chunk, obj: Chunk, sent: int) -> int:
        node_id = self._add(normalize_text(pred.text + " " + obj.text), FUSED_PREDICATE)
        self.nodes[node_id].provenance.append((sent, pred.word_ids))
        self.nodes[node_id].provenance.append((sent, obj.word_ids))
        return node_id

    def dummy(self) -> int:
        return self._add("", DUMMY)

    def _add(self, text: str, kind: str) -> int:
        node_id = len(self.nodes)
        self.nodes.append(KbNode(id=node_id, text=text, kind=kind))
        return node_id

    def link(self, src: int, dst: int, label: str = PRED_EDGE):
        self.edges.append(KbEdge(src, dst, label))


def _first(chunks) -> Chunk:
    return chunks[0]


def _sva_argument(frame: ClauseFrame) -> Chunk:
    # The linked/appended node is the adverbial when one exists; a clause can
    # also reach SVA/SVOA through a prepositional object alone.
    return _first(frame.adverbials) if frame.adverbials else _first(frame.prep_objects)


def aggregate(frames, doc_id: str = "", label: str | None = None) -> KnowledgeBase:
    """Build the document graph from (ClauseFrame, ClauseType) pairs.

    Templates per type (S->V and V->arg carry PRED; appended nodes hang off
    the object with APPEND):
      SV: S -> V -> DUMMY
      SVO/SVC/SVA: S -> V -> O|C|A
      SVOC/SVOA: S -> V -> O, plus O -> C|A
      SVOO: V and Od fuse into one relation node linking S and Oi
    """
    frames = list(frames)
    if not frames:
        raise EmptyDocument(f"document {doc_id!r} produced no frames")
    b = _Builder()
    histogram: dict[str, int] = {}
    for frame, ctype in frames:
        histogram[ctype.value] = histogram.get(ctype.value, 0) + 1
        sent = frame.sent_index
        s = b.entity(frame.subject, sent)
        if ctype is ClauseType.SVOO:
            fused = b.fused(frame.predicate, frame.direct_object, sent)
            b.link(s, fused)
            b.link(fused, b.entity(frame.indirect_object, sent))
            continue
        v = b.predicate(frame.predicate, sent)
        b.link(s, v)
        if ctype is ClauseType.SV:
            b.link(v, b.dummy())
        elif ctype is ClauseType.SVO:
            b.link(v, b.entity(frame.direct_object, sent))
        elif ctype is ClauseType.SVC:
            b.link(v, b.entity(_first(frame.complements), sent))
        elif ctype is ClauseType.SVA:
            b.link(v, b.entity(_sva_argument(frame), sent))
        elif ctype is ClauseType.SVOC:
            o = b.entity(frame.direct_object, sent)
            b.link(v, o)
            b.link(o, b.entity(_first(frame.complements), sent), APPEND_EDGE)
        elif ctype is ClauseType.SVOA:
            o = b.entity(frame.direct_object, sent)
            b.link(v, o)
            b.link(o, b.entity(_sva_argument(frame), sent), APPEND_EDGE)
    return KnowledgeBase(
        doc_id=doc_id,
        nodes=b.nodes,
        edges=b.edges,
        label=label,
        clause_types=histogram,
    )


def to_edge_list(kb: KnowledgeBase) -> tuple[list[tuple[int, int]], int]:
    """Directed pairs in insertion order with reversed duplicates appended
    (the graph is treated as symmetric downstream), plus the node count."""
    k = len(kb.nodes)
    for edge in kb.edges:
        if not (0 <= edge.src < k and 0 <= edge.dst < k):
            raise InvalidId(f"edge ({edge.src}, {edge.dst}) outside 0..{k - 1}")
    forward = [(e.src, e.dst) for e in kb.edges]
    return forward + [(d, s) for s, d in forward], k


def to_json_dict(kb: KnowledgeBase) -> dict:
    return {
        "doc_id": kb.doc_id,
        "label": kb.label,
        "nodes": [
            {
                "id": n.id,
                "text": n.text,
                "kind": n.kind,
                "provenance": [[sent, list(ids)] for sent, ids in n.provenance],
            }
            for n in kb.nodes
        ],
        "edges": [{"src": e.src, "dst": e.dst, "label": e.label} for e in kb.edges],
        "clause_types": dict(sorted(kb.clause_types.items())),
    }


def from_json_dict(raw: dict) -> KnowledgeBase:
    nodes = [
        KbNode(
            id=n["id"],
            text=n["text"],
            kind=n["kind"],
            provenance=[(sent, tuple(ids)) for sent, ids in n["provenance"]],
        )
        for n in raw["nodes"]
    ]
    edges = [KbEdge(e["src"], e["dst"], e["label"]) for e in raw["edges"]]
    return KnowledgeBase(
        doc_id=raw["doc_id"],
        nodes=nodes,
        edges=edges,
        label=raw["label"],
        clause_types=dict(raw.get("clause_types", {})),
    )


def dumps(kb: KnowledgeBase) -> str:
    """Diff-stable serialization: fixed field order, ascending ids, LF-ended."""
    return json.dumps(to_json_dict(kb), ensure_ascii=False, indent=2) + "\n"


def loads(text: str) -> KnowledgeBase:
    return from_json_dict(json.loads(text))
