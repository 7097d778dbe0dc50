"""Anaphora resolution: detect third-person pronouns (including zeros),
filter antecedent candidates by hard constraints, rank the survivors with an
ordered preference list, and maintain coreference chains.

Constraints are applied first and discard candidates; preferences then act as
a sequential filter: each preference keeps its satisfiers when at least one
candidate satisfies it and is skipped otherwise, with textual proximity as
the final tie-break.  Every decision is logged to the resolution's audit
trail so an independent re-run can be compared byte for byte.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace

from . import chunker, corpus, zero_pronoun
from .chunker import (
    Clause, GrammarConfig, NP, PP, SENT, SlotStructure, TOKEN_LEAF, VG,
    default_grammar, is_clitic, iter_nps,
)
from .corpus import (
    ADJ, ADV, DEMONSTRATIVE, DET, FEM, MASC, NEUT, PERSONAL, PL, PREP, PRON,
    PROPER_NOUN, REFLEXIVE, SEM_PERSON, SG, UNKNOWN, VERB, Document, Token,
)
from .zero_pronoun import (
    ANAPHORIC, CATAPHORIC, SUBJECT_OMITTED, ZeroPronoun,
    default_impersonal_lemmas, heuristic_taxonomy,
)

UNRESOLVED = "UNRESOLVED"

# anaphor kinds
KIND_PERSONAL = "personal"
KIND_REFLEXIVE = "reflexive"
KIND_DEMONSTRATIVE = "demonstrative"
KIND_ZERO = "zero"

# grammatical functions (oblique = inside a prepositional phrase)
SUBJ = "subject"
COMPL = "complement"
OBLIQUE = "oblique"

INDEFINITE_DETS = frozenset(
    "un una unos unas uno a an some algún alguna algunos algunas".split())

# surfaces that identify third person when the tag omits it
_THIRD_PERSON_LEMMAS = {
    "EN": frozenset("he she it they him her them".split()),
    "ES": frozenset("él ella ellos ellas le les lo la los las se "
                    "éste ésta éstos éstas".split()),
}

_EN_PERSON_PRONOUNS = frozenset("he she him her".split())
_EN_NONPERSON_PRONOUNS = frozenset(["it"])


class ResolverConfigError(ValueError):
    pass


DEFAULT_PREFERENCE_ORDERS = {
    ("ES", KIND_PERSONAL): ("a", "b", "c", "d", "e"),
    ("ES", KIND_REFLEXIVE): ("a", "b", "c", "d", "e"),
    ("ES", KIND_DEMONSTRATIVE): ("a", "b", "c", "d", "e"),
    ("ES", KIND_ZERO): ("z2", "z1", "a", "b", "c", "d", "e"),
    ("EN", KIND_PERSONAL): ("f", "a", "b", "c", "d", "e"),
    ("EN", KIND_REFLEXIVE): ("f", "a", "b", "c", "d", "e"),
    ("EN", KIND_DEMONSTRATIVE): ("f", "a", "b", "c", "d", "e"),
}

PREFERENCE_IDS = frozenset({"a", "b", "c", "d", "e", "f", "z1", "z2"})


@dataclass(frozen=True)
class ResolverConfig:
    window: int = 4
    semantics: bool = False
    preference_orders: dict = field(default_factory=dict)

    def order_for(self, lang: str, kind: str):
        order = self.preference_orders.get((lang, kind))
        if order is None:
            order = DEFAULT_PREFERENCE_ORDERS.get((lang, kind), ())
        for pid in order:
            if pid not in PREFERENCE_IDS:
                raise ResolverConfigError("unknown preference id %r" % pid)
        return tuple(order)


# ---------------------------------------------------------------------------
# pleonastic *it* patterns
# ---------------------------------------------------------------------------

_BUILTIN_ELEMENTS = frozenset({"IT", "BE", "MOD", "ADJ", "ADV", "COMP",
                               "THAT", "TO", "WHETHER"})
PLEONASTIC_WINDOW = 6


@dataclass(frozen=True)
class PleonasticPatterns:
    patterns: tuple   # tuple of ((element, quantifier), ...)
    classes: dict     # name -> frozenset of lemmas


def load_pleonastic_patterns(lines) -> PleonasticPatterns:
    if isinstance(lines, str):
        lines = lines.splitlines()
    classes = {}
    patterns = []
    for lineno, raw in enumerate(lines, start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "=" in line:
            name, _, members = line.partition("=")
            classes[name.strip().upper()] = frozenset(
                w.lower() for w in members.split())
            continue
        elems = []
        for item in line.split():
            quant = ""
            if item[-1] in "?*":
                item, quant = item[:-1], item[-1]
            name = item.upper()
            if name not in _BUILTIN_ELEMENTS and name not in classes:
                raise ResolverConfigError(
                    "pattern line %d: unknown element %r" % (lineno, item))
            elems.append((name, quant))
        if not elems or elems[0][0] != "IT":
            raise ResolverConfigError(
                "pattern line %d: patterns must start with IT" % lineno)
        patterns.append(tuple(elems))
    return PleonasticPatterns(patterns=tuple(patterns), classes=classes)


def default_pleonastic_patterns() -> PleonasticPatterns:
    from .config import data_text
    return load_pleonastic_patterns(data_text("pleonastic_en.txt"))


def _pleo_elem_match(name: str, tok: Token, classes: dict) -> bool:
    lemma = tok.lemma.lower()
    if name == "BE":
        return lemma == "be"
    if name == "MOD":
        return tok.pos in (ADJ, ADV)
    if name == "ADJ":
        return tok.pos == ADJ
    if name == "ADV":
        return tok.pos == ADV
    if name == "COMP":
        return lemma in ("that", "to", "whether")
    if name == "THAT":
        return lemma == "that"
    if name == "TO":
        return lemma == "to"
    if name == "WHETHER":
        return lemma == "whether"
    return lemma in classes.get(name, frozenset())


def detect_pleonastic_it(sentence: corpus.Sentence,
                         patterns: PleonasticPatterns | None = None) -> list:
    """Indices of non-referential *it* tokens in an English sentence."""
    if patterns is None:
        patterns = default_pleonastic_patterns()
    out = []
    tokens = sentence.tokens
    for i, tok in enumerate(tokens):
        if tok.pos != PRON or tok.lemma.lower() != "it":
            continue
        limit = min(len(tokens), i + 1 + PLEONASTIC_WINDOW)
        for pattern in patterns.patterns:
            pos = i + 1
            ok = True
            for name, quant in pattern[1:]:
                if quant in ("*",):
                    while pos < limit and _pleo_elem_match(name, tokens[pos],
                                                           patterns.classes):
                        pos += 1
                    continue
                if quant == "?":
                    if pos < limit and _pleo_elem_match(name, tokens[pos],
                                                        patterns.classes):
                        pos += 1
                    continue
                if pos < limit and _pleo_elem_match(name, tokens[pos],
                                                    patterns.classes):
                    pos += 1
                else:
                    ok = False
                    break
            if ok:
                out.append(i)
                break
    return out


# ---------------------------------------------------------------------------
# document analysis (chunks, clauses, zeros, entities)
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Entity:
    eid: int
    sid: int
    np: SlotStructure
    head_index: int
    head_lemma: str
    head_surface: str
    gender: str
    number: str
    sem_category: str
    pronominal: bool


@dataclass
class DocumentAnalysis:
    doc: Document
    grammar: GrammarConfig
    sent_structures: list
    clauses: list                 # flat, textual order
    statuses: list                # aligned with clauses (ES verbs), None elsewhere
    zeros: list                   # ZeroPronoun records (all persons)
    pleonastic: dict              # sid -> frozenset of token indices
    entities: dict                # eid -> Entity
    clause_of: dict               # (sid, token index) -> clause position

    def clause_at(self, sid: int, index: int) -> Clause | None:
        ci = self.clause_of.get((sid, index))
        return self.clauses[ci] if ci is not None else None

    def clause_index_at(self, sid: int, index: int):
        return self.clause_of.get((sid, index))


def analyze_document(doc: Document, grammar: GrammarConfig | None = None,
                     impersonal_lemmas: frozenset | None = None,
                     patterns: PleonasticPatterns | None = None,
                     ) -> DocumentAnalysis:
    """Run chunking, clause splitting, zero-pronoun detection and pleonastic
    detection; collect the entity registry (one entity per noun phrase)."""
    if grammar is None:
        grammar = default_grammar()
    if impersonal_lemmas is None and doc.lang == "ES":
        impersonal_lemmas = default_impersonal_lemmas()
    sent_structures = chunker.chunk_document(doc, grammar)
    clauses = []
    clause_of = {}
    for ss, sent in zip(sent_structures, doc.sentences):
        for cl in chunker.split_clauses(ss, sent, grammar, doc.lang):
            ci = len(clauses)
            clauses.append(cl)
            for cons in cl.constituents:
                for i in range(cons.span[0], cons.span[1] + 1):
                    clause_of[(cl.sid, i)] = ci
    statuses = []
    for cl in clauses:
        if doc.lang == "ES" and cl.verb_index is not None:
            statuses.append(zero_pronoun.classify_verb(
                cl, doc, impersonal_lemmas or frozenset()))
        else:
            statuses.append(None)
    _, zeros = zero_pronoun.insert_zero_pronouns(
        doc, clauses, statuses=statuses, impersonal_lemmas=impersonal_lemmas)
    pleo = {}
    if doc.lang == "EN":
        if patterns is None:
            patterns = default_pleonastic_patterns()
        for sent in doc.sentences:
            hits = detect_pleonastic_it(sent, patterns)
            if hits:
                pleo[sent.sid] = frozenset(hits)
    entities = {}
    for ss, sent in zip(sent_structures, doc.sentences):
        for np in iter_nps(ss):
            head = sent.tokens[np.head_index]
            entities[np.discourse_marker] = Entity(
                eid=np.discourse_marker, sid=np.sid, np=np,
                head_index=np.head_index, head_lemma=head.lemma,
                head_surface=head.surface, gender=np.gender,
                number=np.number, sem_category=np.sem_category,
                pronominal=head.pos == PRON)
    return DocumentAnalysis(
        doc=doc, grammar=grammar, sent_structures=sent_structures,
        clauses=clauses, statuses=statuses, zeros=zeros, pleonastic=pleo,
        entities=entities, clause_of=clause_of)


# ---------------------------------------------------------------------------
# anaphor detection
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Anaphor:
    aid: str
    kind: str
    function: str
    person: int | None
    gender: str
    number: str
    sid: int
    position: int             # 2*token index; zeros sit at 2*insert_pos - 1
    token_index: int | None   # None for zeros
    clause_index: int | None
    surface: str
    lemma: str


def _is_third_person(tok: Token, lang: str) -> bool:
    if tok.person == 3:
        return True
    if tok.person is None:
        return tok.lemma.lower() in _THIRD_PERSON_LEMMAS.get(lang, frozenset()) \
            or tok.surface.lower() in _THIRD_PERSON_LEMMAS.get(lang, frozenset())
    return False


def _inside_pp(analysis: DocumentAnalysis, sid: int, index: int) -> bool:
    ss = analysis.sent_structures[sid]
    for child in ss.children:
        if child.kind == PP and child.span[0] <= index <= child.span[1]:
            return True
    return False


def grammatical_function(analysis: DocumentAnalysis, sid: int, index: int,
                         kind: str) -> str:
    if kind == KIND_ZERO:
        return SUBJ
    tok = analysis.doc.sentences[sid].tokens[index]
    if kind == KIND_REFLEXIVE or is_clitic(tok, analysis.doc.lang):
        return COMPL
    if _inside_pp(analysis, sid, index):
        return OBLIQUE
    clause = analysis.clause_at(sid, index)
    if clause is None or clause.verb_index is None:
        return SUBJ
    return SUBJ if index < clause.verb_index else COMPL


def _clitic_is_doubled(analysis: DocumentAnalysis, sid: int, index: int) -> bool:
    """True for complement clitics doubling an overt `a`-marked object in the
    same clause (non-anaphoric: *A Pedro le vi ayer*)."""
    tok = analysis.doc.sentences[sid].tokens[index]
    clause = analysis.clause_at(sid, index)
    if clause is None:
        return False
    tokens = analysis.doc.sentences[sid].tokens
    for cons in clause.constituents:
        if cons.kind != PP:
            continue
        prep = tokens[cons.span[0]]
        if prep.lemma.lower() not in ("a", "al"):
            continue
        if cons.number == UNKNOWN or tok.number == UNKNOWN \
                or cons.number == tok.number:
            return True
    return False


def detect_anaphors(analysis: DocumentAnalysis) -> list:
    """All third-person personal/reflexive/demonstrative/zero pronouns in
    textual order; pleonastic *it* and doubled clitics are excluded."""
    doc = analysis.doc
    anaphors = []
    for sent in doc.sentences:
        pleo = analysis.pleonastic.get(sent.sid, frozenset())
        for tok in sent.tokens:
            if tok.pos != PRON:
                continue
            kind = {PERSONAL: KIND_PERSONAL, REFLEXIVE: KIND_REFLEXIVE,
                    DEMONSTRATIVE: KIND_DEMONSTRATIVE}.get(tok.pron_subtype)
            if kind is None:
                continue
            if not _is_third_person(tok, doc.lang):
                continue
            if tok.index in pleo:
                continue
            if doc.lang == "ES" and is_clitic(tok, doc.lang) \
                    and tok.pron_subtype == PERSONAL \
                    and _clitic_is_doubled(analysis, sent.sid, tok.index):
                continue
            anaphors.append(Anaphor(
                aid="s%d.t%d" % (sent.sid, tok.index), kind=kind,
                function=grammatical_function(analysis, sent.sid, tok.index, kind),
                person=3, gender=tok.gender, number=tok.number,
                sid=sent.sid, position=2 * tok.index, token_index=tok.index,
                clause_index=analysis.clause_index_at(sent.sid, tok.index),
                surface=tok.surface, lemma=tok.lemma.lower()))
    for zp in analysis.zeros:
        if zp.person != 3:
            continue
        anaphors.append(Anaphor(
            aid=zp.zid, kind=KIND_ZERO, function=SUBJ, person=3,
            gender=zp.gender, number=zp.number, sid=zp.sid,
            position=2 * zp.insert_pos - 1, token_index=None,
            clause_index=analysis.clause_index_at(zp.sid, zp.verb_index),
            surface="", lemma=""))
    anaphors.sort(key=lambda a: (a.sid, a.position))
    return anaphors


# ---------------------------------------------------------------------------
# candidates
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Candidate:
    entity: Entity                # canonical (lexical) entity
    mention: Entity               # most recent NP mention backing the entity;
                                  # a resolved subject pronoun re-introduces
                                  # its entity at the pronoun's position
    distance: int
    repetition: int
    is_proper_noun: bool
    is_indefinite: bool
    precedes_its_verb: bool
    solved_a_zero_in_sentence: bool
    same_function_as_anaphor: bool

    @property
    def eid(self) -> int:
        return self.entity.eid


class DocumentState:
    """Left-to-right resolution state: chains, mentions, repetition counts."""

    def __init__(self, analysis: DocumentAnalysis):
        self.analysis = analysis
        self.alias: dict[int, int] = {}      # pronominal entity -> canonical
        self.mentions: dict[int, list] = {}  # canonical eid -> mention keys
        self.pronoun_mentions: dict[int, int] = {}
        self.zero_solutions: dict[int, set] = {}
        for ent in analysis.entities.values():
            if not ent.pronominal:
                self.mentions[ent.eid] = [
                    "s%d.t%d..t%d" % (ent.sid, ent.np.span[0], ent.np.span[1])]
                self.pronoun_mentions[ent.eid] = 0

    def canonical(self, eid: int) -> int:
        while eid in self.alias:
            eid = self.alias[eid]
        return eid

    def record_resolution(self, anaphor: Anaphor, chosen_eid: int):
        canon = self.canonical(chosen_eid)
        key = anaphor.aid
        self.mentions.setdefault(canon, []).append(key)
        self.pronoun_mentions[canon] = self.pronoun_mentions.get(canon, 0) + 1
        if anaphor.kind == KIND_ZERO:
            self.zero_solutions.setdefault(anaphor.sid, set()).add(canon)
        if anaphor.token_index is not None:
            ent = self._pronominal_entity_at(anaphor.sid, anaphor.token_index)
            if ent is not None and ent.eid != canon:
                self.alias[ent.eid] = canon

    def _pronominal_entity_at(self, sid: int, index: int):
        for ent in self.analysis.entities.values():
            if ent.pronominal and ent.sid == sid and ent.head_index == index:
                return ent
        return None

    def repetition_count(self, canon: Entity, anaphor: Anaphor) -> int:
        count = self.pronoun_mentions.get(canon.eid, 0)
        for other in self.analysis.entities.values():
            if other.pronominal:
                continue
            if other.head_lemma.lower() != canon.head_lemma.lower():
                continue
            if (other.sid, 2 * other.np.span[1]) < (anaphor.sid, anaphor.position):
                count += 1
        return max(count, 1)


def _candidate_function(analysis: DocumentAnalysis, ent: Entity) -> str:
    if _inside_pp(analysis, ent.sid, ent.head_index):
        return OBLIQUE
    clause = analysis.clause_at(ent.sid, ent.head_index)
    if clause is None or clause.verb_index is None:
        return SUBJ
    return SUBJ if ent.head_index < clause.verb_index else COMPL


def collect_candidates(anaphor: Anaphor, state: DocumentState,
                       window: int = 4) -> list:
    """NP entities left of the anaphor, from its sentence and the previous
    ``window`` sentences, in textual order.

    Pronoun-headed NPs count once resolved: they stand for their antecedent
    entity at the pronoun's position, so the entity's most recent mention
    carries the positional preferences (same sentence, precedes-verb,
    parallelism); unresolved pronoun NPs are not candidates.
    """
    analysis = state.analysis
    best_mention: dict[int, Entity] = {}
    for ent in sorted(analysis.entities.values(),
                      key=lambda e: (e.sid, e.np.span[0])):
        if ent.sid < anaphor.sid - window or ent.sid > anaphor.sid:
            continue
        if (ent.sid, 2 * ent.np.span[1]) >= (anaphor.sid, anaphor.position):
            continue
        canon = state.canonical(ent.eid)
        if ent.pronominal and canon == ent.eid:
            continue
        cur = best_mention.get(canon)
        if cur is None or (ent.sid, ent.np.span[1]) > (cur.sid, cur.np.span[1]):
            best_mention[canon] = ent
    out = []
    for canon, mention in sorted(best_mention.items(),
                                 key=lambda kv: (kv[1].sid, kv[1].np.span[0])):
        entity = analysis.entities[canon]
        clause = analysis.clause_at(mention.sid, mention.head_index)
        precedes = (clause is not None and clause.verb_index is not None
                    and mention.head_index < clause.verb_index)
        first_tok = analysis.doc.sentences[mention.sid].tokens[mention.np.span[0]]
        indefinite = (first_tok.pos == DET
                      and first_tok.lemma.lower() in INDEFINITE_DETS)
        out.append(Candidate(
            entity=entity, mention=mention,
            distance=anaphor.sid - mention.sid,
            repetition=state.repetition_count(entity, anaphor),
            is_proper_noun=analysis.doc.sentences[mention.sid]
                .tokens[mention.head_index].pos == PROPER_NOUN,
            is_indefinite=indefinite, precedes_its_verb=precedes,
            solved_a_zero_in_sentence=canon
                in state.zero_solutions.get(anaphor.sid, set()),
            same_function_as_anaphor=_candidate_function(analysis, mention)
                == anaphor.function))
    return out


# ---------------------------------------------------------------------------
# constraints
# ---------------------------------------------------------------------------

# English pronouns carrying no usable gender (it is "valid for masculine and
# feminine"); they skip the gender check entirely.
_GENDERLESS_EN = frozenset({"it", "they", "them"})


def _gender_compatible(anaphor: Anaphor, cand: Candidate) -> bool:
    if anaphor.kind == KIND_ZERO and anaphor.gender == UNKNOWN:
        return True
    if anaphor.lemma in _GENDERLESS_EN:
        return True
    a, c = anaphor.gender, cand.entity.gender
    if a == UNKNOWN or c == UNKNOWN:
        return True
    return a == c


def _number_compatible(anaphor: Anaphor, cand: Candidate) -> bool:
    a, c = anaphor.number, cand.entity.number
    if a == UNKNOWN or c == UNKNOWN:
        return True
    return a == c


def _relative_host_eid(analysis: DocumentAnalysis, anaphor: Anaphor):
    """Entity of the NP a relative clause modifies, when the anaphor sits in
    that relative clause; such a pronoun cannot corefer with its host."""
    if anaphor.clause_index is None:
        return None
    clause = analysis.clauses[anaphor.clause_index]
    tokens = analysis.doc.sentences[clause.sid].tokens
    first = tokens[clause.span[0]]
    if not (first.pos == PRON and first.pron_subtype == corpus.RELATIVE):
        return None
    host_end = clause.span[0] - 1
    ss = analysis.sent_structures[clause.sid]
    for np in iter_nps(ss):
        if np.span[1] == host_end:
            return np.discourse_marker
    return None


def apply_constraints(anaphor: Anaphor, candidates, config: ResolverConfig,
                      analysis: DocumentAnalysis | None = None):
    """Hard filters: morphological agreement, clause non-coreference (with
    the relative-clause host exclusion), optional semantic category checks,
    and reflexive locality.  Returns (kept candidates, audit entries)."""
    audit = []
    kept = []
    for cand in candidates:
        if _number_compatible(anaphor, cand) and _gender_compatible(anaphor, cand):
            kept.append(cand)
        else:
            audit.append("constraint:agreement:-e%d" % cand.eid)
    if anaphor.kind != KIND_REFLEXIVE:
        host = _relative_host_eid(analysis, anaphor) if analysis else None
        filtered = []
        for cand in kept:
            same_clause = (
                anaphor.clause_index is not None and analysis is not None
                and analysis.clause_index_at(cand.mention.sid,
                                             cand.mention.head_index)
                == anaphor.clause_index)
            if same_clause or (host is not None
                               and cand.mention.np.discourse_marker == host):
                audit.append("constraint:noncoref:-e%d" % cand.eid)
            else:
                filtered.append(cand)
        kept = filtered
    if config.semantics and analysis is not None and analysis.doc.lang == "EN":
        filtered = []
        for cand in kept:
            sem = cand.entity.sem_category
            bad = False
            if anaphor.lemma in _EN_PERSON_PRONOUNS:
                bad = sem not in (SEM_PERSON, UNKNOWN)
            elif anaphor.lemma in _EN_NONPERSON_PRONOUNS:
                bad = sem == SEM_PERSON
            if bad:
                audit.append("constraint:semantic:-e%d" % cand.eid)
            else:
                filtered.append(cand)
        kept = filtered
    if anaphor.kind == KIND_REFLEXIVE and analysis is not None:
        local = [c for c in kept if analysis.clause_index_at(
            c.mention.sid, c.mention.head_index) == anaphor.clause_index]
        scope = local if local else [c for c in kept
                                     if c.mention.sid == anaphor.sid]
        for cand in kept:
            if cand not in scope:
                audit.append("constraint:reflexive:-e%d" % cand.eid)
        kept = scope
    return kept, audit


# ---------------------------------------------------------------------------
# preferences
# ---------------------------------------------------------------------------

def preference_satisfied(pid: str, anaphor: Anaphor, cand: Candidate) -> bool:
    if pid == "a":
        return cand.distance == 0
    if pid == "b":
        return cand.repetition > 1
    if pid == "c":
        return cand.precedes_its_verb
    if pid == "d":
        return cand.is_proper_noun
    if pid == "e":
        return not cand.is_indefinite
    if pid == "f":
        return cand.same_function_as_anaphor
    if pid == "z1":
        return cand.solved_a_zero_in_sentence
    if pid == "z2":
        return anaphor.gender != UNKNOWN and cand.entity.gender == anaphor.gender
    raise ResolverConfigError("unknown preference id %r" % pid)


def _proximity_sorted(candidates):
    return sorted(candidates,
                  key=lambda c: (-c.mention.sid, -c.mention.head_index, c.eid))


def rank_preferences(anaphor: Anaphor, candidates, order):
    """Sequential preference filter.  Returns (ranked, survivors, audit):
    ranked = proximity-sorted survivors followed by the discarded candidates
    in discard order."""
    survivors = list(candidates)
    discarded = []
    audit = []
    for pid in order:
        if pid not in PREFERENCE_IDS:
            raise ResolverConfigError("unknown preference id %r" % pid)
        sats = [c for c in survivors if preference_satisfied(pid, anaphor, c)]
        if sats:
            discarded.extend(c for c in survivors if c not in sats)
            audit.append("pref:%s:kept=%d" % (pid, len(sats)))
            survivors = sats
        else:
            audit.append("pref:%s:skip" % pid)
    ordered = _proximity_sorted(survivors)
    if len(ordered) > 1:
        audit.append("tie:proximity")
    return ordered + discarded, ordered, audit


# ---------------------------------------------------------------------------
# document resolution
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Resolution:
    anaphor: Anaphor
    chosen: int | None            # canonical entity id, None = unresolved
    chain: int | None
    ranked: tuple                 # candidate entity ids, rank order
    fired: tuple                  # audit trail
    reason: str | None = None     # cataphoric | no_candidates when unresolved

    def to_record(self) -> dict:
        return {
            "anaphor": self.anaphor.aid,
            "kind": self.anaphor.kind,
            "function": self.anaphor.function,
            "surface": self.anaphor.surface,
            "chosen": self.chosen if self.chosen is not None else UNRESOLVED,
            "chain": self.chain,
            "ranked": list(self.ranked),
            "fired": list(self.fired),
            "reason": self.reason,
        }


def resolve_document(doc: Document, config: ResolverConfig | None = None,
                     analysis: DocumentAnalysis | None = None,
                     select=None):
    """Resolve every detected anaphor in textual order.

    ``select`` overrides antecedent selection for baseline strategies: it is
    called with (anaphor, kept candidates, state) and returns the ranked
    candidate list (best first) plus extra audit entries.  Returns
    (resolutions, chains) where chains maps canonical entity ids to their
    ordered mention keys.
    """
    if config is None:
        config = ResolverConfig()
    if analysis is None:
        analysis = analyze_document(doc)
    state = DocumentState(analysis)
    anaphors = detect_anaphors(analysis)
    resolutions = []
    for anaphor in anaphors:
        candidates = collect_candidates(anaphor, state, config.window)
        kept, audit = apply_constraints(anaphor, candidates, config, analysis)
        if anaphor.kind == KIND_ZERO:
            clause = analysis.clauses[anaphor.clause_index]
            taxonomy = heuristic_taxonomy(
                _zero_for(analysis, anaphor), clause, doc,
                has_prior_candidate=bool(kept))
            if taxonomy == CATAPHORIC:
                audit = audit + ["taxonomy:cataphoric"]
                resolutions.append(Resolution(
                    anaphor=anaphor, chosen=None, chain=None, ranked=(),
                    fired=tuple(audit), reason="cataphoric"))
                continue
        if select is not None:
            ordered, extra = select(anaphor, kept, state)
            audit = audit + list(extra)
            ranked = ordered
        else:
            order = config.order_for(doc.lang, anaphor.kind)
            ranked, ordered, pref_audit = rank_preferences(anaphor, kept, order)
            audit = audit + pref_audit
        if not kept:
            resolutions.append(Resolution(
                anaphor=anaphor, chosen=None, chain=None, ranked=(),
                fired=tuple(audit), reason="no_candidates"))
            continue
        chosen = ranked[0]
        canon = state.canonical(chosen.eid)
        resolutions.append(Resolution(
            anaphor=anaphor, chosen=canon, chain=canon,
            ranked=tuple(c.eid for c in ranked), fired=tuple(audit)))
        state.record_resolution(anaphor, chosen.eid)
    chains = {eid: list(keys) for eid, keys in state.mentions.items()}
    return resolutions, chains


def _zero_for(analysis: DocumentAnalysis, anaphor: Anaphor) -> ZeroPronoun:
    for zp in analysis.zeros:
        if zp.zid == anaphor.aid:
            return zp
    raise KeyError(anaphor.aid)
