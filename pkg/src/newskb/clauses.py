"""Clause type identification over extracted frames.

The seven types (SV, SVO, SVC, SVA, SVOC, SVOA, SVOO) are assigned by a fixed
decision sequence driven by which chunks are present plus whether the
predicate's head lemma is a linking verb.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

from .extract import Chunk, ClauseFrame


class ClauseType(Enum):
    SV = "SV"
    SVO = "SVO"
    SVC = "SVC"
    SVA = "SVA"
    SVOC = "SVOC"
    SVOA = "SVOA"
    SVOO = "SVOO"


# Standard English copular/linking verbs; the only verb property the decision
# sequence consumes is linking-ness.
DEFAULT_LINKING_VERBS = (
    "be seem become appear feel look sound taste smell remain stay grow turn "
    "prove get keep"
).split()


@dataclass(frozen=True)
class VerbLexicon:
    linking_verbs: frozenset[str]
    source: str = "builtin"

    def __contains__(self, lemma: str) -> bool:
        return lemma.lower() in self.linking_verbs


def builtin_lexicon() -> VerbLexicon:
    return VerbLexicon(frozenset(DEFAULT_LINKING_VERBS), source="builtin")


def load_lexicon(path) -> VerbLexicon:
    """One lowercase lemma per line; `#` starts a comment."""
    lemmas = set()
    with open(path, encoding="utf-8") as f:
        for line in f:
            lemma = line.split("#", 1)[0].strip().lower()
            if lemma:
                lemmas.add(lemma)
    return VerbLexicon(frozenset(lemmas), source=str(path))


def is_linking(lex: VerbLexicon, predicate: Chunk) -> bool:
    return predicate.head_lemma.lower() in lex.linking_verbs


def classify(frame: ClauseFrame, lex: VerbLexicon) -> ClauseType:
    """Assign the clause type by the fixed decision sequence.

    1. C with Od but no Oi -> SVOC; any other C -> SVC.
    2. Od and Oi together -> SVOO.
    3. Od alone -> SVOA when (Op or A) is present and the verb links,
       otherwise SVO.
    4. Neither Od nor Oi -> SVA when (Op or A) is present and the verb links.
    5. Everything else -> SV.
    """
    has_c = bool(frame.complements)
    has_od = frame.direct_object is not None
    has_oi = frame.indirect_object is not None
    has_op_or_a = bool(frame.prep_objects) or bool(frame.adverbials)
    linking = is_linking(lex, frame.predicate)

    if has_c:
        if has_od and not has_oi:
            return ClauseType.SVOC
        return ClauseType.SVC
    if has_od and has_oi:
        return ClauseType.SVOO
    if has_od:
        return ClauseType.SVOA if (has_op_or_a and linking) else ClauseType.SVO
    if not has_oi and has_op_or_a and linking:
        return ClauseType.SVA
    return ClauseType.SV
