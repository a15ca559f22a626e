"""CoNLL-U reading and writing, validated dependency trees, tag-scheme mapping.

Trees are immutable after construction and safe to share across workers.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

from .errors import (
    CycleDetected,
    InvalidId,
    MalformedLine,
    MultipleRoots,
    UnmappedLabel,
)

ID, FORM, LEMMA, UPOS, XPOS, FEATS, HEAD, DEPREL, DEPS, MISC = range(10)

# Reserved label produced for unknown deprels in lenient mode; matches no rule.
OTHER = "OTHER"


@dataclass(frozen=True)
class Token:
    """One word of a sentence. `head` is a 1-based word index, 0 for the root."""

    id: int
    form: str
    lemma: str
    upos: str
    deprel: str
    head: int
    misc: str = "_"


@dataclass(frozen=True)
class DepTree:
    """A rooted dependency tree over the words of one sentence."""

    tokens: tuple[Token, ...]
    root_id: int
    _children: dict[int, tuple[Token, ...]] = field(compare=False, repr=False)

    @classmethod
    def from_tokens(cls, tokens) -> "DepTree":
        """Validate the head relation and build the child index.

        Raises MalformedLine for non-contiguous ids or empty tags,
        MultipleRoots / CycleDetected for structural violations.
        """
        tokens = tuple(tokens)
        n = len(tokens)
        if n == 0:
            raise MalformedLine("sentence has no tokens")
        for i, tok in enumerate(tokens, start=1):
            if tok.id != i:
                raise MalformedLine(f"word ids not contiguous: expected {i}, got {tok.id}")
            if not (0 <= tok.head <= n):
                raise MalformedLine(f"word {tok.id}: head {tok.head} out of range")
            if tok.head == tok.id:
                raise CycleDetected(f"word {tok.id} is its own head")
            if not tok.upos or not tok.deprel:
                raise MalformedLine(f"word {tok.id}: empty POS or dependency label")
        roots = [tok.id for tok in tokens if tok.head == 0]
        if len(roots) > 1:
            raise MultipleRoots(f"words {roots} all claim head 0")
        if not roots:
            raise CycleDetected("no word has head 0")
        root_id = roots[0]

        children: dict[int, list[Token]] = {tok.id: [] for tok in tokens}
        for tok in tokens:
            if tok.head != 0:
                children[tok.head].append(tok)
        # Every token must be reachable from the root; anything else is a cycle.
        seen = set()
        stack = [root_id]
        while stack:
            cur = stack.pop()
            seen.add(cur)
            stack.extend(c.id for c in children[cur])
        if len(seen) != n:
            missing = sorted(set(range(1, n + 1)) - seen)
            raise CycleDetected(f"words {missing} unreachable from the root")
        frozen = {i: tuple(kids) for i, kids in children.items()}
        return cls(tokens=tokens, root_id=root_id, _children=frozen)

    def __len__(self) -> int:
        return len(self.tokens)

    def token(self, word_id: int) -> Token:
        if not 1 <= word_id <= len(self.tokens):
            raise InvalidId(f"word id {word_id} not in 1..{len(self.tokens)}")
        return self.tokens[word_id - 1]

    def children(self, word_id: int) -> tuple[Token, ...]:
        """All tokens whose head is `word_id`, in surface order."""
        self.token(word_id)
        return self._children[word_id]

    def subtree_span(self, word_id: int) -> list[int]:
        """`word_id` plus all of its descendants, sorted by surface order."""
        self.token(word_id)
        span = []
        stack = [word_id]
        while stack:
            cur = stack.pop()
            span.append(cur)
            stack.extend(c.id for c in self._children[cur])
        return sorted(span)

    def text(self) -> str:
        return " ".join(tok.form for tok in self.tokens)

    def has_upos(self, upos: str) -> bool:
        return any(tok.upos == upos for tok in self.tokens)


@dataclass(frozen=True)
class Document:
    """An ordered list of sentence trees sharing a doc id and optional label."""

    doc_id: str
    sentences: tuple[DepTree, ...]
    label: str | None = None


class TagScheme:
    """Maps source-scheme dependency/POS labels onto the canonical inventory.

    Lookup is case-insensitive; results are uppercased. Labels absent from the
    mapping raise UnmappedLabel unless lenient mode is on, which maps them to
    the reserved label OTHER.
    """

    def __init__(self, deprel_map: dict[str, str], pos_map: dict[str, str], name: str = "custom"):
        self.deprel_map = {k.lower(): v.upper() for k, v in deprel_map.items()}
        self.pos_map = {k.lower(): v.upper() for k, v in pos_map.items()}
        self.name = name

    @classmethod
    def from_json(cls, path) -> "TagScheme":
        with open(path, encoding="utf-8") as f:
            raw = json.load(f)
        return cls(raw["deprel_map"], raw["pos_map"], name=str(path))

    def map_deprel(self, label: str, lenient: bool = False) -> str:
        got = self.deprel_map.get(label.lower())
        if got is None:
            if lenient:
                return OTHER
            raise UnmappedLabel(f"dependency label {label!r} not in scheme {self.name!r}")
        return got

    def map_pos(self, tag: str, lenient: bool = False) -> str:
        got = self.pos_map.get(tag.lower())
        if got is None:
            if lenient:
                return OTHER
            raise UnmappedLabel(f"POS tag {tag!r} not in scheme {self.name!r}")
        return got


_UPOS_TAGS = (
    "ADJ ADP ADV AUX CCONJ DET INTJ NOUN NUM PART PRON PROPN PUNCT SCONJ SYM VERB X"
).split()

# ClearNLP-style inventory (the one the extraction rules are written against):
# already canonical, so the shipped scheme is the identity over it.
_CLEARNLP_DEPRELS = (
    "acl acomp advcl advmod agent amod appos attr aux auxpass case cc ccomp "
    "compound conj csubj csubjpass dative dep det dobj expl intj mark meta neg "
    "nmod npadvmod nsubj nsubjpass nummod oprd parataxis pcomp pobj poss "
    "preconj predet prep prt punct quantmod relcl root xcomp"
).split()

# Plain UD v2 labels (plus the UD v1 `neg`), renamed where the canonical
# inventory differs. Labels no rule consumes keep their own name.
_UD_DEPRELS = {
    "acl": "ACL",
    "acl:relcl": "RELCL",
    "advcl": "ADVCL",
    "advmod": "ADVMOD",
    "amod": "AMOD",
    "appos": "APPOS",
    "aux": "AUX",
    "aux:pass": "AUXPASS",
    "case": "PREP",
    "cc": "CC",
    "cc:preconj": "PRECONJ",
    "ccomp": "CCOMP",
    "compound": "COMPOUND",
    "compound:prt": "PRT",
    "conj": "CONJ",
    "cop": "AUX",
    "csubj": "CSUBJ",
    "csubj:pass": "CSUBJPASS",
    "dep": "DEP",
    "det": "DET",
    "det:predet": "PREDET",
    "discourse": "DISCOURSE",
    "dislocated": "DISLOCATED",
    "expl": "EXPL",
    "fixed": "FIXED",
    "flat": "FLAT",
    "goeswith": "GOESWITH",
    "iobj": "DATIVE",
    "list": "LIST",
    "mark": "MARK",
    "neg": "NEG",
    "nmod": "NMOD",
    "nmod:npmod": "NPADVMOD",
    "nmod:poss": "POSS",
    "nmod:tmod": "NPADVMOD",
    "nsubj": "NSUBJ",
    "nsubj:pass": "NSUBJPASS",
    "nummod": "NUMMOD",
    "obj": "DOBJ",
    "obl": "POBJ",
    "obl:agent": "AGENT",
    "obl:npmod": "NPADVMOD",
    "obl:tmod": "NPADVMOD",
    "orphan": "ORPHAN",
    "parataxis": "PARATAXIS",
    "punct": "PUNCT",
    "reparandum": "REPARANDUM",
    "root": "ROOT",
    "vocative": "VOCATIVE",
    "xcomp": "XCOMP",
}

_CANONICAL_DEPRELS = sorted(
    {d.upper() for d in _CLEARNLP_DEPRELS} | set(_UD_DEPRELS.values()) | {OTHER}
)

_BUILTIN_SCHEMES = {
    "clearnlp": TagScheme(
        {d: d.upper() for d in _CLEARNLP_DEPRELS},
        {p: p for p in _UPOS_TAGS},
        name="clearnlp",
    ),
    "ud": TagScheme(_UD_DEPRELS, {p: p for p in _UPOS_TAGS}, name="ud"),
    # Identity over everything the toolkit itself can emit; serialized output
    # re-parses under this scheme.
    "canonical": TagScheme(
        {d: d for d in _CANONICAL_DEPRELS},
        {p: p for p in _UPOS_TAGS + [OTHER]},
        name="canonical",
    ),
}


def builtin_scheme(name: str) -> TagScheme:
    try:
        return _BUILTIN_SCHEMES[name]
    except KeyError:
        raise UnmappedLabel(
            f"no builtin scheme {name!r}; available: {sorted(_BUILTIN_SCHEMES)}"
        ) from None


def load_scheme(name_or_path: str) -> TagScheme:
    """Resolve a scheme by builtin name or JSON file path."""
    if name_or_path in _BUILTIN_SCHEMES:
        return _BUILTIN_SCHEMES[name_or_path]
    return TagScheme.from_json(name_or_path)


def parse_conllu(text: str, scheme: TagScheme, lenient: bool = False) -> list[Document]:
    """Parse CoNLL-U text into validated documents.

    `# doc_id = ...` comments group the following sentences into one document
    (sticky until the next such comment); sentences seen before any doc_id get
    one synthetic document per blank-line block. `# label = ...` sets the
    category label of the current document. Multiword-token ranges (`3-4`) and
    empty nodes (`5.1`) are skipped.
    """
    docs: list[Document] = []
    cur_tokens: list[Token] = []
    cur_sentences: list[DepTree] = []
    cur_doc_id: str | None = None
    cur_label: str | None = None
    pending_label: str | None = None
    synthetic_count = 0

    def flush_sentence():
        nonlocal cur_tokens, synthetic_count, pending_label
        if not cur_tokens:
            return
        tree = DepTree.from_tokens(cur_tokens)
        cur_tokens = []
        if cur_doc_id is None:
            synthetic_count += 1
            docs.append(
                Document(f"doc{synthetic_count:04d}", (tree,), label=pending_label)
            )
            pending_label = None
        else:
            cur_sentences.append(tree)

    def flush_document():
        nonlocal cur_sentences, cur_label
        flush_sentence()
        if cur_doc_id is not None:
            docs.append(Document(cur_doc_id, tuple(cur_sentences), label=cur_label))
        cur_sentences = []
        cur_label = None

    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.rstrip("\r")
        if not line.strip():
            flush_sentence()
            continue
        if line.startswith("#"):
            if cur_tokens:
                continue  # comments inside a sentence block carry no structure
            body = line[1:].strip()
            if body.startswith("doc_id") and "=" in body:
                flush_document()
                cur_doc_id = body.split("=", 1)[1].strip()
            elif body.startswith("label") and "=" in body:
                value = body.split("=", 1)[1].strip()
                if cur_doc_id is None:
                    pending_label = value
                else:
                    cur_label = value
            continue
        cols = line.split("\t")
        if len(cols) != 10:
            raise MalformedLine(f"line {line_no}: expected 10 columns, got {len(cols)}")
        if "-" in cols[ID] or "." in cols[ID]:
            continue  # multiword-token range or empty node
        try:
            word_id = int(cols[ID])
            head = int(cols[HEAD])
        except ValueError:
            raise MalformedLine(f"line {line_no}: non-numeric id or head") from None
        cur_tokens.append(
            Token(
                id=word_id,
                form=cols[FORM],
                lemma=cols[LEMMA],
                upos=scheme.map_pos(cols[UPOS], lenient),
                deprel=scheme.map_deprel(cols[DEPREL], lenient),
                head=head,
                misc=cols[MISC],
            )
        )
    flush_document()
    seen_ids = set()
    for doc in docs:
        if doc.doc_id in seen_ids:
            raise MalformedLine(f"duplicate doc_id {doc.doc_id!r}")
        seen_ids.add(doc.doc_id)
    return docs


def tree_to_conllu(tree: DepTree) -> str:
    lines = []
    for tok in tree.tokens:
        lines.append(
            "\t".join(
                [
                    str(tok.id),
                    tok.form,
                    tok.lemma,
                    tok.upos,
                    "_",
                    "_",
                    str(tok.head),
                    tok.deprel,
                    "_",
                    tok.misc,
                ]
            )
        )
    return "\n".join(lines) + "\n"


def to_conllu(docs) -> str:
    """Serialize documents back to CoNLL-U (canonical labels, LF endings)."""
    parts = []
    for doc in docs:
        parts.append(f"# doc_id = {doc.doc_id}\n")
        if doc.label is not None:
            parts.append(f"# label = {doc.label}\n")
        for tree in doc.sentences:
            parts.append(tree_to_conllu(tree))
            parts.append("\n")
    return "".join(parts)
