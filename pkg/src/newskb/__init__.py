"""newskb: rule-based news information extraction into knowledge-base graphs,
embedding pooling, and a numpy graph convolutional network."""

from .clauses import ClauseType, VerbLexicon, builtin_lexicon, classify, is_linking, load_lexicon
from .conllu import (
    DepTree,
    Document,
    TagScheme,
    Token,
    builtin_scheme,
    load_scheme,
    parse_conllu,
    to_conllu,
)
from .extract import (
    Chunk,
    ClauseFrame,
    extract_document_frames,
    extract_frames,
    frame_to_dict,
)
from .gcn import (
    AdamState,
    GcnModel,
    classification_metrics,
    evaluate,
    forward,
    init_adam,
    init_model,
    loss_and_grad,
    normalize_adjacency,
    train,
)
from .kb import KbEdge, KbNode, KnowledgeBase, aggregate, to_edge_list
from .pooling import EmbeddingTable, GraphBatch, assemble_batch, pool_nodes

__version__ = "0.1.0"

__all__ = [
    "AdamState",
    "Chunk",
    "ClauseFrame",
    "ClauseType",
    "DepTree",
    "Document",
    "EmbeddingTable",
    "GcnModel",
    "GraphBatch",
    "KbEdge",
    "KbNode",
    "KnowledgeBase",
    "TagScheme",
    "Token",
    "VerbLexicon",
    "aggregate",
    "assemble_batch",
    "builtin_lexicon",
    "builtin_scheme",
    "classification_metrics",
    "classify",
    "evaluate",
    "extract_document_frames",
    "extract_frames",
    "forward",
    "frame_to_dict",
    "init_adam",
    "init_model",
    "is_linking",
    "load_lexicon",
    "load_scheme",
    "loss_and_grad",
    "normalize_adjacency",
    "parse_conllu",
    "pool_nodes",
    "to_conllu",
    "to_edge_list",
    "train",
]
