"""Detection of Spanish omitted subjects (zero pronouns).

Each clause's verb is classified as subject-present, subject-omitted,
impersonal or imperative.  Subject-omitted clauses receive a zero pronoun
placed just before the verb group, carrying the verb's person and number;
gender is filled only when the copulative-attribute rule applies.
"""

from __future__ import annotations

from dataclasses import dataclass

from . import corpus
from .chunker import NP, PP, TOKEN_LEAF, VG, Clause, SlotStructure
from .corpus import (
    ADJ, COPULATIVE, FEM, IMPERATIVE, IMPERSONAL, MASC, PRON, RELATIVE,
    SEM_ANIMAL, SEM_PERSON, UNKNOWN, Document, Token,
)

SUBJECT_PRESENT = "SUBJECT_PRESENT"
SUBJECT_OMITTED = "SUBJECT_OMITTED"
IMPERSONAL_VERB = "IMPERSONAL"
IMPERATIVE_VERB = "IMPERATIVE"

# zero-pronoun taxonomy
ANAPHORIC = "anaphoric"
CATAPHORIC = "cataphoric"
EXOPHORIC = "exophoric"

# attribute lemmas that make *ser* impersonal (time expressions)
SER_TIME_ATTRIBUTES = frozenset(
    "hora tarde temprano mediodía medianoche día noche".split())


class ZeroPronounError(ValueError):
    pass


@dataclass(frozen=True)
class SubjectStatus:
    status: str
    verb_index: int
    verb_person: int | None
    verb_number: str
    subject_marker: int | None = None   # discourse marker of the found subject
    subject_head: int | None = None     # token index of the found subject head


@dataclass(frozen=True)
class ZeroPronoun:
    zid: str                 # s<i>.z<v>
    sid: int
    verb_index: int
    insert_pos: int          # token index the zero slot precedes
    person: int | None
    number: str
    gender: str = UNKNOWN


def load_impersonal_lemmas(lines) -> frozenset:
    if isinstance(lines, str):
        lines = lines.splitlines()
    out = set()
    for raw in lines:
        line = raw.strip()
        if line and not line.startswith("#"):
            out.add(line.lower())
    return frozenset(out)


def default_impersonal_lemmas() -> frozenset:
    from .config import data_text
    return load_impersonal_lemmas(data_text("impersonal_es.txt"))


def _agrees_with_verb(person, number, vperson, vnumber) -> bool:
    if vperson is not None and person is not None and vperson != person:
        return False
    if vnumber != UNKNOWN and number != UNKNOWN and vnumber != number:
        return False
    return True


def _subject_candidates(clause: Clause):
    """Pre-verbal subject candidates, right to left: top-level NPs and bare
    pronoun leaves.  NPs buried in prepositional phrases never count."""
    for cons in reversed(clause.pre_verbal):
        if cons.kind == NP:
            yield cons
        elif cons.kind == TOKEN_LEAF:
            yield cons


def classify_verb(clause: Clause, doc: Document,
                  impersonal_lemmas: frozenset = frozenset()) -> SubjectStatus:
    """Classify one clause as subject-present / omitted / impersonal /
    imperative by scanning pre-verbal constituents right to left for an
    NP or pronoun agreeing with the verb in person and number."""
    if clause.verb_index is None:
        raise ZeroPronounError("no finite verb in clause at s%d" % clause.sid)
    tokens = doc.sentences[clause.sid].tokens
    verb = tokens[clause.verb_index]
    vperson, vnumber = verb.person, verb.number
    found = None
    for cons in _subject_candidates(clause):
        if cons.kind == NP:
            if _agrees_with_verb(cons.person, cons.number, vperson, vnumber):
                found = cons
                break
        else:
            tok = tokens[cons.span[0]]
            if tok.pos != PRON:
                continue
            if tok.pron_subtype == RELATIVE:
                found = cons  # relative pronoun binds the subject slot
                break
            if _agrees_with_verb(tok.person, tok.number, vperson, vnumber):
                found = cons
                break
    if found is not None:
        return SubjectStatus(
            status=SUBJECT_PRESENT, verb_index=clause.verb_index,
            verb_person=vperson, verb_number=vnumber,
            subject_marker=found.discourse_marker,
            subject_head=found.head_index)
    if IMPERATIVE in verb.verb_flags:
        return SubjectStatus(IMPERATIVE_VERB, clause.verb_index, vperson, vnumber)
    if IMPERSONAL in verb.verb_flags or verb.lemma.lower() in impersonal_lemmas \
            or _is_ser_time_expression(clause, tokens):
        return SubjectStatus(IMPERSONAL_VERB, clause.verb_index, vperson, vnumber)
    return SubjectStatus(SUBJECT_OMITTED, clause.verb_index, vperson, vnumber)


def _is_ser_time_expression(clause: Clause, tokens) -> bool:
    verb = tokens[clause.verb_index]
    if verb.lemma.lower() != "ser":
        return False
    for cons in clause.post_verbal:
        for leaf in cons.leaves():
            if tokens[leaf.span[0]].lemma.lower() in SER_TIME_ATTRIBUTES:
                return True
        break  # only the immediate attribute constituent
    return False


def infer_copulative_gender(clause: Clause, doc: Document) -> str:
    """Gender of an omitted subject from the attribute of a copulative verb.

    Applies only when the attribute noun or adjective has an inherently
    gender-varying form (person/animal nouns like *boxeador/boxeadora*, or
    adjectives carrying an explicit gender tag); otherwise unknown.
    """
    if clause.verb_index is None:
        return UNKNOWN
    tokens = doc.sentences[clause.sid].tokens
    verb = tokens[clause.verb_index]
    if COPULATIVE not in verb.verb_flags:
        return UNKNOWN
    for cons in clause.post_verbal:
        if cons.kind == NP:
            head = tokens[cons.head_index]
            if head.sem_category in (SEM_PERSON, SEM_ANIMAL) and \
                    head.gender in (MASC, FEM):
                return head.gender
            # post-head adjective inside the NP
            for leaf in cons.children:
                tok = tokens[leaf.span[0]]
                if tok.pos == ADJ and tok.gender in (MASC, FEM):
                    return tok.gender
            return UNKNOWN
        if cons.kind == TOKEN_LEAF:
            tok = tokens[cons.span[0]]
            if tok.pos == ADJ:
                return tok.gender if tok.gender in (MASC, FEM) else UNKNOWN
            continue
    return UNKNOWN


def insert_zero_pronouns(doc: Document, clauses, statuses=None,
                         impersonal_lemmas: frozenset | None = None):
    """Insert one zero pronoun per subject-omitted clause.

    ``clauses`` is the flat clause list of the document (textual order);
    ``statuses`` may carry pre-computed classifications aligned with it.
    Returns (doc, zero pronoun list); the document itself is unchanged, the
    zeros are overlay records addressed as ``s<i>.z<verb index>``.
    """
    if doc.lang != "ES":
        return doc, []
    if impersonal_lemmas is None:
        impersonal_lemmas = default_impersonal_lemmas()
    zeros = []
    for ci, clause in enumerate(clauses):
        if clause.verb_index is None:
            continue
        status = statuses[ci] if statuses is not None else classify_verb(
            clause, doc, impersonal_lemmas)
        if status.status != SUBJECT_OMITTED:
            continue
        tokens = doc.sentences[clause.sid].tokens
        verb = tokens[clause.verb_index]
        gender = infer_copulative_gender(clause, doc)
        insert_pos = clause.verb_group.span[0] if clause.verb_group is not None \
            else clause.verb_index
        zeros.append(ZeroPronoun(
            zid="s%d.z%d" % (clause.sid, clause.verb_index),
            sid=clause.sid, verb_index=clause.verb_index,
            insert_pos=insert_pos, person=verb.person, number=verb.number,
            gender=gender))
    return doc, zeros


def heuristic_taxonomy(zp: ZeroPronoun, clause: Clause, doc: Document,
                       has_prior_candidate: bool) -> str:
    """Cataphoric when an agreeing NP follows the verb inside the clause and
    nothing agreeing precedes the zero pronoun; anaphoric otherwise.
    (Exophoric zeros are only identifiable from gold annotation.)"""
    if has_prior_candidate:
        return ANAPHORIC
    for cons in clause.post_verbal:
        if cons.kind == NP and _agrees_with_verb(
                cons.person, cons.number, zp.person, zp.number):
            return CATAPHORIC
        if cons.kind == PP:
            continue
    return ANAPHORIC


def label_zero_taxonomy(zp: ZeroPronoun, clause: Clause, doc: Document,
                        has_prior_candidate: bool,
                        gold_label: str | None = None) -> str:
    if gold_label is not None:
        return gold_label
    return heuristic_taxonomy(zp, clause, doc, has_prior_candidate)


def detection_report(statuses) -> list:
    """JSON-ready `{verb, person, status}` rows for detection tallies."""
    return [
        {"verb": st.verb_index, "person": st.verb_person, "status": st.status}
        for st in statuses
    ]
