import pytest

from newskb.clauses import ClauseType, builtin_lexicon, classify
from newskb.conllu import builtin_scheme, parse_conllu
from newskb.errors import EmptyDocument
from newskb.extract import Chunk, ClauseFrame, extract_document_frames
from newskb.kb import (
    KbNode,
    KnowledgeBase,
    aggregate,
    dumps,
    loads,
    normalize_text,
    to_edge_list,
    to_json_dict,
)

from conftest import FIXTURES
from oracle_data import KB_GOLDEN_DOCS

LEX = builtin_lexicon()


def chunk(kind, text, ids, head=None, lemma=None):
    ids = tuple(ids)
    return Chunk(kind=kind, word_ids=ids, text=text,
                 head_id=head or ids[0], head_lemma=lemma or text.lower())


def sv_frame(subject="Alice", verb="sleeps", s_ids=(1,), v_ids=(2,), sent=0):
    return ClauseFrame(
        subject=chunk("SUBJECT", subject, s_ids),
        predicate=chunk("PREDICATE", verb, v_ids),
        direct_object=None,
        indirect_object=None,
        prep_objects=(),
        complements=(),
        adverbials=(),
        negated=False,
        passive=False,
        sent_index=sent,
    )


def svo_frame(subject, verb, obj, s_ids, v_ids, o_ids):
    frame = sv_frame(subject, verb, s_ids, v_ids)
    return ClauseFrame(
        **{**frame.__dict__, "direct_object": chunk("DIRECT_OBJECT", obj, o_ids)}
    )


class TestAggregate:
    def test_sv_template_adds_dummy(self):
        kb = aggregate([(sv_frame(), ClauseType.SV)], doc_id="x")
        assert [n.text for n in kb.nodes] == ["alice", "sleeps", ""]
        assert [n.kind for n in kb.nodes] == ["ENTITY", "PREDICATE", "DUMMY"]
        assert [(e.src, e.dst, e.label) for e in kb.edges] == [(0, 1, "PRED"), (1, 2, "PRED")]

    def test_svoo_fuses_predicate_and_object(self):
        frame = ClauseFrame(
            subject=chunk("SUBJECT", "She", (1,)),
            predicate=chunk("PREDICATE", "gave", (2,)),
            direct_object=chunk("DIRECT_OBJECT", "book", (5,)),
            indirect_object=chunk("INDIRECT_OBJECT", "him", (3,)),
            prep_objects=(),
            complements=(),
            adverbials=(),
            negated=False,
            passive=False,
        )
        kb = aggregate([(frame, ClauseType.SVOO)], doc_id="x")
        assert len(kb.nodes) == 3
        fused = kb.nodes[1]
        assert fused.kind == "FUSED_PREDICATE"
        assert fused.text == "gave book"
        assert fused.provenance == [(0, (2,)), (0, (5,))]
        assert [(e.src, e.dst) for e in kb.edges] == [(0, 1), (1, 2)]

    def test_shared_subject_deduplicated(self):
        frames = [
            (svo_frame("Alice", "reads", "books", (1,), (2,), (3,)), ClauseType.SVO),
            (svo_frame("Alice", "writes", "essays", (1,), (4,), (5,)), ClauseType.SVO),
        ]
        kb = aggregate(frames, doc_id="x")
        assert len(kb.nodes) == 5
        alice = kb.nodes[0]
        assert alice.text == "alice"
        assert len(alice.provenance) == 2

    def test_predicates_never_deduplicated(self):
        frames = [
            (sv_frame("Alice", "runs", (1,), (2,)), ClauseType.SV),
            (sv_frame("Bob", "runs", (3,), (4,)), ClauseType.SV),
        ]
        kb = aggregate(frames, doc_id="x")
        preds = [n for n in kb.nodes if n.kind == "PREDICATE"]
        assert len(preds) == 2

    def test_dedup_normalizes_case_and_whitespace(self):
        frames = [
            (sv_frame("New  York", "grows", (1, 2), (3,)), ClauseType.SV),
            (sv_frame("new york", "shrinks", (1, 2), (4,)), ClauseType.SV),
        ]
        kb = aggregate(frames, doc_id="x")
        entities = [n for n in kb.nodes if n.kind == "ENTITY"]
        assert [n.text for n in entities] == ["new york"]

    def test_empty_document(self):
        with pytest.raises(EmptyDocument):
            aggregate([], doc_id="nothing")

    def test_clause_type_histogram(self):
        frames = [
            (sv_frame(), ClauseType.SV),
            (svo_frame("He", "runs", "schools", (1,), (2,), (3,)), ClauseType.SVO),
            (sv_frame("Bob", "waits", (4,), (5,)), ClauseType.SV),
        ]
        kb = aggregate(frames, doc_id="x")
        assert kb.clause_types == {"SV": 2, "SVO": 1}


class TestEdgeList:
    def test_symmetrized_pairs(self):
        kb = aggregate([(sv_frame(), ClauseType.SV)], doc_id="x")
        pairs, k = to_edge_list(kb)
        assert pairs == [(0, 1), (1, 2), (1, 0), (2, 1)]
        assert k == 3

    def test_edgeless_graph(self):
        kb = KnowledgeBase(doc_id="x", nodes=[KbNode(0, "a", "ENTITY", [(0, (1,))])], edges=[])
        assert to_edge_list(kb) == ([], 1)

    def test_pair_count_doubles_edges(self):
        text = (FIXTURES / "oracle.conllu").read_text(encoding="utf-8")
        for doc in parse_conllu(text, builtin_scheme("clearnlp")):
            frames = extract_document_frames(doc)
            if not frames:
                continue
            kb = aggregate([(f, classify(f, LEX)) for f in frames], doc_id=doc.doc_id)
            pairs, k = to_edge_list(kb)
            assert len(pairs) == 2 * len(kb.edges)
            assert k == len(kb.nodes)


@pytest.fixture(scope="module")
def corpus_kbs():
    text = (FIXTURES / "oracle.conllu").read_text(encoding="utf-8")
    out = {}
    for doc in parse_conllu(text, builtin_scheme("clearnlp")):
        frames = extract_document_frames(doc)
        typed = [(f, classify(f, LEX)) for f in frames]
        out[doc.doc_id] = aggregate(typed, doc_id=doc.doc_id, label=doc.label)
    return out


class TestInvariants:
    def test_node_ids_contiguous(self, corpus_kbs):
        for kb in corpus_kbs.values():
            assert [n.id for n in kb.nodes] == list(range(len(kb.nodes)))

    def test_predicate_degree_at_least_two(self, corpus_kbs):
        for kb in corpus_kbs.values():
            degree = {n.id: 0 for n in kb.nodes}
            for e in kb.edges:
                degree[e.src] += 1
                degree[e.dst] += 1
            for node in kb.nodes:
                if node.kind in ("PREDICATE", "FUSED_PREDICATE"):
                    assert degree[node.id] >= 2, (kb.doc_id, node)

    def test_non_dummy_nodes_have_provenance(self, corpus_kbs):
        for kb in corpus_kbs.values():
            for node in kb.nodes:
                if node.kind == "DUMMY":
                    assert node.text == "" and node.provenance == []
                else:
                    assert node.provenance

    def test_round_trip(self, corpus_kbs):
        for kb in corpus_kbs.values():
            assert loads(dumps(kb)) == kb


class TestGoldenTemplates:
    @pytest.mark.parametrize("name", sorted(KB_GOLDEN_DOCS))
    def test_templates_byte_identical(self, name, corpus_kbs):
        golden = (FIXTURES / "kb_golden" / f"{name}.json").read_text(encoding="utf-8")
        kb = corpus_kbs[KB_GOLDEN_DOCS[name]]
        assert dumps(kb) == golden
        assert dumps(kb) == dumps(kb)  # stable under re-serialization

    def test_sv_has_three_nodes_with_dummy(self, corpus_kbs):
        kb = corpus_kbs[KB_GOLDEN_DOCS["sv"]]
        assert len(kb.nodes) == 3
        assert [n.kind for n in kb.nodes].count("DUMMY") == 1

    def test_svoo_has_three_nodes_with_fusion(self, corpus_kbs):
        kb = corpus_kbs[KB_GOLDEN_DOCS["svoo"]]
        assert len(kb.nodes) == 3
        assert [n.kind for n in kb.nodes].count("FUSED_PREDICATE") == 1


def test_normalize_text():
    assert normalize_text("  New   YORK  ") == "new york"


def test_json_dict_field_order(corpus_kbs):
    raw = to_json_dict(corpus_kbs["d01"])
    assert list(raw) == ["doc_id", "label", "nodes", "edges", "clause_types"]
    assert list(raw["nodes"][0]) == ["id", "text", "kind", "provenance"]
    assert list(raw["edges"][0]) == ["src", "dst", "label"]
