import numpy as np
import pytest

from newskb.errors import DimMismatch, EmptyBatch, MissingOffset
from newskb.kb import KbEdge, KbNode, KnowledgeBase
from newskb.pooling import (
    EmbeddingTable,
    assemble_batch,
    batch_from_arrays,
    load_table,
    pool_nodes,
    read_emb,
    read_offsets,
    split_features,
    write_emb,
    write_offsets,
)


def graph_of(nodes, edges=(), doc_id="g", label=None):
    return KnowledgeBase(
        doc_id=doc_id,
        nodes=[KbNode(i, t, k, list(p)) for i, (t, k, p) in enumerate(nodes)],
        edges=[KbEdge(s, d, "PRED") for s, d in edges],
        label=label,
    )


def brute_force_pool(kb, rows, offsets, dim):
    """Triple-loop re-computation enumerating every (node, word, subword)."""
    out = []
    for node in kb.nodes:
        if node.kind == "DUMMY":
            out.append([0.0] * dim)
            continue
        acc = [0.0] * dim
        count = 0
        for sent, words in node.provenance:
            for word in words:
                for row in offsets[(sent, word)]:
                    for j in range(dim):
                        acc[j] += rows[row][j]
                    count += 1
        out.append([a / count for a in acc])
    return np.array(out)


def random_instance(rng, max_nodes=10, max_dim=8):
    """A random (graph, table) pair with consistent provenance/offsets."""
    k = int(rng.integers(1, max_nodes + 1))
    dim = int(rng.integers(1, max_dim + 1))
    offsets = {}
    row_count = 0
    words = []
    for word in range(1, 2 * max_nodes + 1):
        n_sub = int(rng.integers(1, 4))
        offsets[(0, word)] = tuple(range(row_count, row_count + n_sub))
        row_count += n_sub
        words.append(word)
    rows = rng.normal(size=(row_count, dim))
    nodes = []
    for i in range(k):
        if i > 0 and rng.random() < 0.2:
            nodes.append(("", "DUMMY", []))
            continue
        chosen = rng.choice(words, size=int(rng.integers(1, 4)), replace=False)
        nodes.append((f"n{i}", "ENTITY", [(0, tuple(int(w) for w in sorted(chosen)))]))
    edges = []
    if k > 1:
        for _ in range(int(rng.integers(0, 2 * k))):
            s, d = rng.integers(0, k, size=2)
            if s != d:
                edges.append((int(s), int(d)))
    return graph_of(nodes, edges), EmbeddingTable(rows=rows, offsets=offsets), dim


class TestPoolNodes:
    def test_mean_of_two_rows(self):
        rows = np.array([[1.0, 3.0], [3.0, 5.0]])
        offsets = {(0, 1): (0,), (0, 2): (1,)}
        kb = graph_of([("a b", "ENTITY", [(0, (1, 2))])])
        table = EmbeddingTable(rows=rows, offsets=offsets)
        np.testing.assert_array_equal(pool_nodes(kb, table), [[2.0, 4.0]])

    def test_single_row_passthrough(self):
        rows = np.array([[7.5, -1.25]])
        kb = graph_of([("a", "ENTITY", [(0, (1,))])])
        table = EmbeddingTable(rows=rows, offsets={(0, 1): (0,)})
        np.testing.assert_array_equal(pool_nodes(kb, table), rows)

    def test_three_node_graph_matches_brute_force(self):
        rows = np.array([[1.0, 2.0], [3.0, 4.0], [5.0, 6.0], [7.0, 8.0]])
        offsets = {(0, 1): (0, 1), (0, 2): (2,), (0, 3): (3,)}
        kb = graph_of(
            [
                ("alice", "ENTITY", [(0, (1,))]),
                ("sleeps", "PREDICATE", [(0, (2, 3))]),
                ("", "DUMMY", []),
            ],
            edges=[(0, 1), (1, 2)],
        )
        table = EmbeddingTable(rows=rows, offsets=offsets)
        expected = brute_force_pool(kb, rows.tolist(), offsets, 2)
        np.testing.assert_allclose(pool_nodes(kb, table), expected, atol=1e-12)

    def test_randomized_against_brute_force(self):
        rng = np.random.default_rng(7)
        for _ in range(25):
            kb, table, dim = random_instance(rng)
            got = pool_nodes(kb, table)
            want = brute_force_pool(kb, table.rows.tolist(), table.offsets, dim)
            np.testing.assert_allclose(got, want, atol=1e-12)

    def test_missing_offset(self):
        kb = graph_of([("a", "ENTITY", [(0, (9,))])])
        table = EmbeddingTable(rows=np.ones((1, 2)), offsets={(0, 1): (0,)})
        with pytest.raises(MissingOffset):
            pool_nodes(kb, table)

    def test_dummy_rows_are_zero(self):
        kb = graph_of([("", "DUMMY", []), ("a", "ENTITY", [(0, (1,))])])
        table = EmbeddingTable(rows=np.ones((1, 3)), offsets={(0, 1): (0,)})
        out = pool_nodes(kb, table)
        np.testing.assert_array_equal(out[0], [0.0, 0.0, 0.0])

    def test_unknown_dummy_policy(self):
        kb = graph_of([("a", "ENTITY", [(0, (1,))])])
        table = EmbeddingTable(rows=np.ones((1, 2)), offsets={(0, 1): (0,)})
        with pytest.raises(ValueError):
            pool_nodes(kb, table, dummy_policy="learned-constant")

    def test_provenance_order_invariant(self):
        rows = np.arange(12.0).reshape(4, 3)
        offsets = {(0, 1): (0,), (0, 2): (1, 2), (1, 1): (3,)}
        one = graph_of([("a", "ENTITY", [(0, (1, 2)), (1, (1,))])])
        two = graph_of([("a", "ENTITY", [(1, (1,)), (0, (1, 2))])])
        table = EmbeddingTable(rows=rows, offsets=offsets)
        np.testing.assert_allclose(pool_nodes(one, table), pool_nodes(two, table), atol=1e-12)

    def test_mean_bounded_by_contributors(self):
        rng = np.random.default_rng(3)
        for _ in range(10):
            kb, table, _ = random_instance(rng)
            pooled = pool_nodes(kb, table)
            bound = np.abs(table.rows).max() + 1e-12
            assert np.abs(pooled).max() <= bound


class TestTableValidation:
    def test_rejects_nan(self):
        with pytest.raises(DimMismatch):
            EmbeddingTable(rows=np.array([[np.nan]]), offsets={})

    def test_rejects_empty_offsets_entry(self):
        with pytest.raises(MissingOffset):
            EmbeddingTable(rows=np.ones((1, 1)), offsets={(0, 1): ()})

    def test_rejects_out_of_range_offsets(self):
        with pytest.raises(MissingOffset):
            EmbeddingTable(rows=np.ones((1, 1)), offsets={(0, 1): (5,)})


class TestBatching:
    def test_cumulative_offsets(self):
        m1, m2 = np.ones((3, 2)), np.zeros((2, 2))
        batch = batch_from_arrays([m1, m2], [[(0, 1)], [(0, 1)]])
        assert batch.edges == [(0, 1), (3, 4)]
        assert batch.sizes == (3, 2)
        assert list(batch.graph_of) == [0, 0, 0, 1, 1]

    def test_single_graph_unchanged(self):
        m = np.arange(6.0).reshape(3, 2)
        batch = batch_from_arrays([m], [[(0, 2)]])
        assert batch.edges == [(0, 2)]
        np.testing.assert_array_equal(batch.features, m)

    def test_b_copies_block_structure(self):
        m = np.ones((4, 3))
        edges = [(0, 1), (1, 2), (2, 3)]
        b = 5
        batch = batch_from_arrays([m] * b, [edges] * b)
        assert batch.features.shape == (b * 4, 3)
        assert len(batch.edges) == b * len(edges)

    def test_split_recovers_inputs_bit_exactly(self):
        rng = np.random.default_rng(11)
        mats = [rng.normal(size=(k, 4)) for k in (3, 1, 6)]
        batch = batch_from_arrays(mats, [[], [], []])
        for original, recovered in zip(mats, split_features(batch)):
            assert np.array_equal(original, recovered)

    def test_dim_mismatch(self):
        with pytest.raises(DimMismatch):
            batch_from_arrays([np.ones((2, 3)), np.ones((2, 4))], [[], []])

    def test_empty_batch(self):
        with pytest.raises(EmptyBatch):
            batch_from_arrays([], [])

    def test_assemble_from_graphs(self):
        rng = np.random.default_rng(5)
        items = []
        for _ in range(3):
            kb, table, _dim = random_instance(rng, max_dim=4)
            items.append((kb, table))
        # all tables must share one dim for a batch
        items = [(kb, t) for kb, t in items if t.dim == items[0][1].dim] or items[:1]
        batch = assemble_batch(items)
        assert batch.labels is None
        assert batch.n_graphs == len(items)
        recovered = split_features(batch)
        for (kb, table), feat in zip(items, recovered):
            assert np.array_equal(feat, pool_nodes(kb, table))

    def test_assemble_with_labels(self):
        kb1 = graph_of([("a", "ENTITY", [(0, (1,))])], doc_id="a", label="x")
        kb2 = graph_of([("b", "ENTITY", [(0, (1,))])], doc_id="b", label="y")
        table = EmbeddingTable(rows=np.ones((1, 2)), offsets={(0, 1): (0,)})
        batch = assemble_batch([(kb1, table), (kb2, table)], label_map={"x": 0, "y": 1})
        assert list(batch.labels) == [0, 1]


class TestFiles:
    def test_emb_round_trip_bit_exact(self, tmp_path):
        rng = np.random.default_rng(13)
        matrix = rng.normal(size=(6, 5)) * 1e3
        path = tmp_path / "doc.emb"
        write_emb(path, matrix)
        assert read_emb(path).tobytes() == matrix.tobytes()
        header = path.read_text(encoding="utf-8").splitlines()[0]
        assert header == "EMB 1 6 5"

    def test_offsets_round_trip(self, tmp_path):
        offsets = {(0, 1): (0, 1), (1, 3): (2,)}
        path = tmp_path / "doc.offsets.json"
        write_offsets(path, offsets)
        assert read_offsets(path) == offsets

    def test_load_table(self, tmp_path):
        matrix = np.array([[1.5, -2.5], [0.0, 4.0]])
        write_emb(tmp_path / "d.emb", matrix)
        write_offsets(tmp_path / "d.json", {(0, 1): (0,), (0, 2): (1,)})
        table = load_table(tmp_path / "d.emb", tmp_path / "d.json")
        assert table.n_tokens == 2 and table.dim == 2

    def test_bad_header(self, tmp_path):
        path = tmp_path / "bad.emb"
        path.write_text("nope\n", encoding="utf-8")
        with pytest.raises(DimMismatch):
            read_emb(path)


def test_batch_rejects_edges_outside_their_block():
    with pytest.raises(DimMismatch):
        batch_from_arrays([np.ones((2, 3))], [[(0, 5)]])
