"""Ingestion of POS-tagged documents, gold annotations, semantic lexicons and
the bilingual dictionary.

The tagged-text format is one token per line::

    surface<TAB>lemma<TAB>POSTAG[<TAB>SEMCAT]

with ``# key: value`` header lines (``# lang: ES|EN`` is mandatory) and a
blank line closing each sentence.  POSTAGs follow the grammar
``CAT[-GEN][-NUM][-PERS][-SUB][-SEM]`` where every dash component is
recognised by its value, e.g. ``PRON-F-SG-3-PERS``, ``VERB-3-SG-FIN``,
``NNP-F-SG-PERSON``.  Category names cover a generic set plus Penn-like
English and EAGLES-like Spanish abbreviations; anything else is an error,
never a guess.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field, replace

# part-of-speech categories
NOUN = "NOUN"
PROPER_NOUN = "PROPER_NOUN"
VERB = "VERB"
ADJ = "ADJ"
DET = "DET"
PRON = "PRON"
PREP = "PREP"
CONJ = "CONJ"
ADV = "ADV"
PUNCT = "PUNCT"
OTHER = "OTHER"

POS_CATEGORIES = frozenset({
    NOUN, PROPER_NOUN, VERB, ADJ, DET, PRON, PREP, CONJ, ADV, PUNCT, OTHER,
})

# morphological feature values
MASC = "masc"
FEM = "fem"
NEUT = "neut"
SG = "sg"
PL = "pl"
UNKNOWN = "unknown"

# pronoun subtypes
PERSONAL = "personal"
REFLEXIVE = "reflexive"
DEMONSTRATIVE = "demonstrative"
RELATIVE = "relative"
POSSESSIVE = "possessive"
NO_SUBTYPE = "none"

# verb flags
FINITE = "finite"
IMPERATIVE = "imperative"
IMPERSONAL = "impersonal"
COPULATIVE = "copulative"

# semantic categories
SEM_PERSON = "person"
SEM_ANIMAL = "animal"
SEM_OBJECT = "object"

LANGUAGES = ("ES", "EN")


class CorpusError(ValueError):
    """Raised on malformed tagged text, gold records, lexicon or dictionary."""


@dataclass(frozen=True)
class Token:
    surface: str
    lemma: str
    pos: str
    person: int | None = None
    gender: str = UNKNOWN
    number: str = UNKNOWN
    pron_subtype: str = NO_SUBTYPE
    verb_flags: frozenset = frozenset()
    sem_category: str = UNKNOWN
    index: int = 0


@dataclass(frozen=True)
class Sentence:
    sid: int
    tokens: tuple


@dataclass(frozen=True)
class Document:
    lang: str
    sentences: tuple = ()

    def token_at(self, sid: int, index: int) -> Token:
        return self.sentences[sid].tokens[index]


# ---------------------------------------------------------------------------
# POSTAG decode tables
# ---------------------------------------------------------------------------

# category -> (pos, base features); shared generic names
_GENERIC_CATS = {
    "NOUN": (NOUN, {}),
    "PROPN": (PROPER_NOUN, {}),
    "PROPER_NOUN": (PROPER_NOUN, {}),
    "VERB": (VERB, {}),
    "ADJ": (ADJ, {}),
    "DET": (DET, {}),
    "PRON": (PRON, {}),
    "PREP": (PREP, {}),
    "CONJ": (CONJ, {}),
    "ADV": (ADV, {}),
    "PUNCT": (PUNCT, {}),
    "OTHER": (OTHER, {}),
}

# Penn-like English abbreviations
_PENN_CATS = {
    "NN": (NOUN, {"number": SG}),
    "NNS": (NOUN, {"number": PL}),
    "NNP": (PROPER_NOUN, {"number": SG}),
    "NNPS": (PROPER_NOUN, {"number": PL}),
    "VB": (VERB, {}),
    "VBD": (VERB, {"verb_flags": {FINITE}}),
    "VBZ": (VERB, {"verb_flags": {FINITE}, "person": 3, "number": SG}),
    "VBP": (VERB, {"verb_flags": {FINITE}}),
    "VBG": (VERB, {}),
    "VBN": (VERB, {}),
    "MD": (VERB, {"verb_flags": {FINITE}}),
    "JJ": (ADJ, {}),
    "JJR": (ADJ, {}),
    "JJS": (ADJ, {}),
    "RB": (ADV, {}),
    "RBR": (ADV, {}),
    "RBS": (ADV, {}),
    "DT": (DET, {}),
    "PDT": (DET, {}),
    "PRP": (PRON, {"pron_subtype": PERSONAL}),
    "PRP$": (PRON, {"pron_subtype": POSSESSIVE}),
    "WP": (PRON, {"pron_subtype": RELATIVE}),
    "WDT": (PRON, {"pron_subtype": RELATIVE}),
    "IN": (PREP, {}),
    "TO": (PREP, {}),
    "CC": (CONJ, {}),
    "CD": (OTHER, {}),
    "EX": (OTHER, {}),
    "UH": (OTHER, {}),
}

# EAGLES-like Spanish abbreviations
_EAGLES_CATS = {
    "NC": (NOUN, {}),
    "NP": (PROPER_NOUN, {}),
    "VM": (VERB, {}),
    "VA": (VERB, {}),
    "VS": (VERB, {"verb_flags": {COPULATIVE}}),
    "AQ": (ADJ, {}),
    "AO": (ADJ, {}),
    "RG": (ADV, {}),
    "RN": (ADV, {}),
    "DA": (DET, {}),
    "DD": (DET, {}),
    "DI": (DET, {}),
    "DP": (DET, {}),
    "DN": (DET, {}),
    "PP": (PRON, {"pron_subtype": PERSONAL}),
    "PD": (PRON, {"pron_subtype": DEMONSTRATIVE}),
    "PX": (PRON, {"pron_subtype": REFLEXIVE}),
    "PR": (PRON, {"pron_subtype": RELATIVE}),
    "PI": (PRON, {}),
    "SP": (PREP, {}),
    "CC": (CONJ, {}),
    "CS": (CONJ, {}),
    "Fp": (PUNCT, {}),
    "Fc": (PUNCT, {}),
    "Fx": (PUNCT, {}),
    "Z": (OTHER, {}),
    "W": (OTHER, {}),
}

TAGSETS = {
    "EN": {**_GENERIC_CATS, **_PENN_CATS},
    "ES": {**_GENERIC_CATS, **_EAGLES_CATS},
}

_GENDER_CODES = {"M": MASC, "F": FEM, "N": NEUT}
_NUMBER_CODES = {"SG": SG, "PL": PL}
_PERSON_CODES = {"1": 1, "2": 2, "3": 3}
_SUBTYPE_CODES = {
    "PERS": PERSONAL,
    "REFL": REFLEXIVE,
    "DEM": DEMONSTRATIVE,
    "REL": RELATIVE,
    "POSS": POSSESSIVE,
}
_VERBFLAG_CODES = {
    "FIN": FINITE,
    "IMP": IMPERATIVE,
    "IMPERS": IMPERSONAL,
    "COP": COPULATIVE,
}
_SEM_CODES = {"PERSON": SEM_PERSON, "ANIMAL": SEM_ANIMAL, "OBJECT": SEM_OBJECT}

# preferred component order when re-encoding a token as a POSTAG
_GENDER_OUT = {MASC: "M", FEM: "F", NEUT: "N"}
_NUMBER_OUT = {SG: "SG", PL: "PL"}
_SUBTYPE_OUT = {v: k for k, v in _SUBTYPE_CODES.items()}
_VERBFLAG_OUT = {v: k for k, v in _VERBFLAG_CODES.items()}
_SEM_OUT = {v: k for k, v in _SEM_CODES.items()}


def decode_tag(postag: str, lang: str):
    """Decode a POSTAG string into (pos, feature dict), context-free.

    The category is looked up in the per-language table; every dash
    component after it must belong to exactly one value class.
    """
    if lang not in TAGSETS:
        raise CorpusError("unknown language %r" % (lang,))
    parts = postag.split("-")
    cat = parts[0]
    table = TAGSETS[lang]
    if cat not in table:
        raise CorpusError("unknown POS tag %r (category %r)" % (postag, cat))
    pos, base = table[cat]
    feats = {
        "person": base.get("person"),
        "gender": base.get("gender", UNKNOWN),
        "number": base.get("number", UNKNOWN),
        "pron_subtype": base.get("pron_subtype", NO_SUBTYPE),
        "verb_flags": set(base.get("verb_flags", ())),
        "sem_category": base.get("sem_category", UNKNOWN),
    }
    for comp in parts[1:]:
        if comp in _GENDER_CODES:
            feats["gender"] = _GENDER_CODES[comp]
        elif comp in _NUMBER_CODES:
            feats["number"] = _NUMBER_CODES[comp]
        elif comp in _PERSON_CODES:
            feats["person"] = _PERSON_CODES[comp]
        elif comp in _SUBTYPE_CODES:
            if pos != PRON:
                raise CorpusError(
                    "pronoun subtype %r on non-pronoun tag %r" % (comp, postag))
            feats["pron_subtype"] = _SUBTYPE_CODES[comp]
        elif comp in _VERBFLAG_CODES:
            if pos != VERB:
                raise CorpusError(
                    "verb flag %r on non-verb tag %r" % (comp, postag))
            feats["verb_flags"].add(_VERBFLAG_CODES[comp])
        elif comp in _SEM_CODES:
            feats["sem_category"] = _SEM_CODES[comp]
        else:
            raise CorpusError("unknown POS tag component %r in %r" % (comp, postag))
    feats["verb_flags"] = frozenset(feats["verb_flags"])
    return pos, feats


def encode_tag(token: Token) -> str:
    """Re-encode a token's features as a generic POSTAG (decode inverse)."""
    parts = [token.pos if token.pos != PROPER_NOUN else "PROPN"]
    if token.gender != UNKNOWN:
        parts.append(_GENDER_OUT[token.gender])
    if token.number != UNKNOWN:
        parts.append(_NUMBER_OUT[token.number])
    if token.person is not None:
        parts.append(str(token.person))
    if token.pron_subtype != NO_SUBTYPE:
        parts.append(_SUBTYPE_OUT[token.pron_subtype])
    for flag in (FINITE, IMPERATIVE, IMPERSONAL, COPULATIVE):
        if flag in token.verb_flags:
            parts.append(_VERBFLAG_OUT[flag])
    if token.sem_category != UNKNOWN:
        parts.append(_SEM_OUT[token.sem_category])
    return "-".join(parts)


# ---------------------------------------------------------------------------
# tagged-text parsing and serialization
# ---------------------------------------------------------------------------

def parse_document(lines, lang: str | None = None) -> Document:
    """Parse a tagged-text stream into a Document.

    ``lines`` is an iterable of text lines (or a whole string).  ``# lang:``
    headers in the stream take precedence over the ``lang`` argument; one of
    the two must provide the language.
    """
    if isinstance(lines, str):
        lines = lines.splitlines()
    sentences = []
    current: list[Token] = []
    doc_lang = lang

    def close_sentence():
        nonlocal current
        if current:
            sentences.append(Sentence(sid=len(sentences), tokens=tuple(current)))
            current = []

    for lineno, raw in enumerate(lines, start=1):
        line = raw.rstrip("\n")
        if line.startswith("#"):
            m = re.match(r"#\s*(\w+)\s*:\s*(\S+)", line)
            if m and m.group(1) == "lang":
                value = m.group(2).upper()
                if value not in LANGUAGES:
                    raise CorpusError(
                        "line %d: unsupported language %r" % (lineno, value))
                doc_lang = value
            continue
        if not line.strip():
            close_sentence()
            continue
        fields = line.split("\t")
        if len(fields) not in (3, 4):
            raise CorpusError(
                "line %d: expected 3 or 4 tab-separated fields, got %d"
                % (lineno, len(fields)))
        if doc_lang is None:
            raise CorpusError(
                "line %d: token before any '# lang:' header" % (lineno,))
        surface, lemma, postag = fields[0], fields[1], fields[2]
        if not surface or not lemma or not postag:
            raise CorpusError("line %d: empty field" % (lineno,))
        try:
            pos, feats = decode_tag(postag, doc_lang)
        except CorpusError as exc:
            raise CorpusError("line %d: %s" % (lineno, exc)) from None
        if len(fields) == 4:
            semcat = fields[3].strip().lower()
            if semcat not in (SEM_PERSON, SEM_ANIMAL, SEM_OBJECT):
                raise CorpusError(
                    "line %d: unknown semantic category %r" % (lineno, fields[3]))
            feats["sem_category"] = semcat
        current.append(Token(
            surface=surface, lemma=lemma, pos=pos, index=len(current), **feats))
    close_sentence()
    if doc_lang is None:
        doc_lang = lang if lang in LANGUAGES else "EN"
    return Document(lang=doc_lang, sentences=tuple(sentences))


def serialize_document(doc: Document) -> str:
    """Render a Document back to tagged text; re-parsing yields an equal doc."""
    out = ["# lang: %s" % doc.lang]
    for sent in doc.sentences:
        for tok in sent.tokens:
            out.append("%s\t%s\t%s" % (tok.surface, tok.lemma, encode_tag(tok)))
        out.append("")
    return "\n".join(out) + "\n" if len(out) > 1 else out[0] + "\n"


def apply_semantic_lexicon(doc: Document, lexicon: "SemanticLexicon") -> Document:
    """Fill unknown token semantic categories from the lexicon (new Document)."""
    new_sentences = []
    for sent in doc.sentences:
        toks = []
        for tok in sent.tokens:
            if tok.sem_category == UNKNOWN:
                cat = lexicon.lookup(tok.lemma)
                if cat != UNKNOWN:
                    tok = replace(tok, sem_category=cat)
            toks.append(tok)
        new_sentences.append(Sentence(sid=sent.sid, tokens=tuple(toks)))
    return Document(lang=doc.lang, sentences=tuple(new_sentences))


# ---------------------------------------------------------------------------
# gold annotations
# ---------------------------------------------------------------------------

ZERO_SYMBOL = "∅"  # ∅


@dataclass(frozen=True)
class PronounLocator:
    """Points at an overt pronoun token or a zero-pronoun slot (``z`` form)."""
    sid: int
    index: int
    is_zero: bool = False

    def key(self) -> str:
        return "s%d.%s%d" % (self.sid, "z" if self.is_zero else "t", self.index)


@dataclass(frozen=True)
class SpanLocator:
    sid: int
    start: int
    end: int  # inclusive

    def key(self) -> str:
        return "s%d.t%d..t%d" % (self.sid, self.start, self.end)


@dataclass(frozen=True)
class AnnotationRecord:
    pronoun: PronounLocator
    antecedent: SpanLocator | None  # None = exophoric
    target_pronoun: str | None      # ZERO_SYMBOL allowed; None = unannotated
    chain_id: int


@dataclass(frozen=True)
class GoldAnnotations:
    records: tuple

    def by_pronoun(self) -> dict:
        return {rec.pronoun.key(): rec for rec in self.records}


_PRON_LOC_RE = re.compile(r"^s(\d+)\.(t|z)(\d+)(?:\.\.t(\d+))?$")
_SPAN_LOC_RE = re.compile(r"^s(\d+)\.t(\d+)(?:\.\.t(\d+))?$")


def _parse_pronoun_locator(text: str, recno: int) -> PronounLocator:
    m = _PRON_LOC_RE.match(text.strip())
    if not m:
        raise CorpusError("record %d: bad pronoun locator %r" % (recno, text))
    sid, kind, idx = int(m.group(1)), m.group(2), int(m.group(3))
    return PronounLocator(sid=sid, index=idx, is_zero=(kind == "z"))


def _parse_span_locator(text: str, recno: int) -> SpanLocator | None:
    text = text.strip()
    if text == "-":
        return None
    m = _SPAN_LOC_RE.match(text)
    if not m:
        raise CorpusError("record %d: bad antecedent locator %r" % (recno, text))
    sid, start = int(m.group(1)), int(m.group(2))
    end = int(m.group(3)) if m.group(3) else start
    if end < start:
        raise CorpusError("record %d: inverted span %r" % (recno, text))
    return SpanLocator(sid=sid, start=start, end=end)


def load_gold(lines, doc: Document) -> GoldAnnotations:
    """Load gold records, validating every locator against ``doc``.

    Format, one record per line::

        s<i>.t<j>[..t<k>] -> s<m>.t<p>..t<q> :: <target or ∅> :: chain <n>

    Zero pronouns use ``s<i>.z<v>`` (v = verb token index); an antecedent of
    ``-`` marks an exophoric zero pronoun (no textual antecedent).
    """
    if isinstance(lines, str):
        lines = lines.splitlines()
    records = []
    recno = 0
    for raw in lines:
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        recno += 1
        parts = [p.strip() for p in line.split("::")]
        if len(parts) != 3:
            raise CorpusError(
                "record %d: expected 'loc -> loc :: target :: chain n'" % recno)
        locpart, target, chainpart = parts
        if "->" not in locpart:
            raise CorpusError("record %d: missing '->'" % recno)
        prontext, antetext = locpart.split("->", 1)
        pron = _parse_pronoun_locator(prontext, recno)
        ante = _parse_span_locator(antetext, recno)
        m = re.match(r"^chain\s+(\d+)$", chainpart)
        if not m:
            raise CorpusError("record %d: bad chain field %r" % (recno, chainpart))
        chain_id = int(m.group(1))
        # bounds checks
        if pron.sid >= len(doc.sentences):
            raise CorpusError("record %d: sentence s%d out of range" % (recno, pron.sid))
        ntok = len(doc.sentences[pron.sid].tokens)
        if pron.index >= ntok:
            raise CorpusError(
                "record %d: token index %d past end of s%d" % (recno, pron.index, pron.sid))
        if ante is not None:
            if ante.sid >= len(doc.sentences):
                raise CorpusError(
                    "record %d: antecedent sentence s%d out of range" % (recno, ante.sid))
            if ante.end >= len(doc.sentences[ante.sid].tokens):
                raise CorpusError(
                    "record %d: antecedent span past end of s%d" % (recno, ante.sid))
        records.append(AnnotationRecord(
            pronoun=pron, antecedent=ante,
            target_pronoun=target if target else None, chain_id=chain_id))
    seen = {}
    for rec in records:
        key = rec.pronoun.key()
        if key in seen and seen[key] != rec.chain_id:
            raise CorpusError("pronoun %s listed in two chains" % key)
        seen[key] = rec.chain_id
    return GoldAnnotations(records=tuple(records))


# ---------------------------------------------------------------------------
# semantic lexicon and bilingual dictionary
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SemanticLexicon:
    entries: dict

    def lookup(self, lemma: str) -> str:
        return self.entries.get(lemma.lower(), UNKNOWN)


def load_lexicon(lines) -> SemanticLexicon:
    """Load ``lemma<TAB>person|animal|object`` lines; duplicate conflicting
    entries are an error, absent lemmas look up as unknown."""
    if isinstance(lines, str):
        lines = lines.splitlines()
    entries = {}
    for lineno, raw in enumerate(lines, start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        fields = line.split("\t")
        if len(fields) != 2:
            raise CorpusError("lexicon line %d: expected 2 fields" % lineno)
        lemma, cat = fields[0].strip().lower(), fields[1].strip().lower()
        if cat not in (SEM_PERSON, SEM_ANIMAL, SEM_OBJECT):
            raise CorpusError("lexicon line %d: bad category %r" % (lineno, cat))
        if lemma in entries and entries[lemma] != cat:
            raise CorpusError(
                "lexicon line %d: conflicting category for %r" % (lineno, lemma))
        entries[lemma] = cat
    return SemanticLexicon(entries=entries)


@dataclass(frozen=True)
class DictEntry:
    es_lemma: str
    es_gender: str  # masc|fem
    es_number: str  # sg|pl
    en_lemma: str
    en_number: str  # sg|pl


@dataclass(frozen=True)
class BilingualDictionary:
    en_to_es: dict
    es_to_en: dict

    def lookup_en(self, en_lemma: str) -> DictEntry | None:
        return self.en_to_es.get(en_lemma.lower())

    def lookup_es(self, es_lemma: str) -> DictEntry | None:
        return self.es_to_en.get(es_lemma.lower())


_DICT_GENDER = {"m": MASC, "f": FEM}
_DICT_NUMBER = {"sg": SG, "pl": PL}


def load_dictionary(lines) -> BilingualDictionary:
    """Load ``en_lemma<TAB>es_lemma<TAB>m|f<TAB>sg|pl[<TAB>en_number]`` lines.

    The optional fifth column records the English number when it differs
    from the default (sg); it backs the inverse Spanish->English map.
    """
    if isinstance(lines, str):
        lines = lines.splitlines()
    en_to_es: dict[str, DictEntry] = {}
    es_to_en: dict[str, DictEntry] = {}
    for lineno, raw in enumerate(lines, start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        fields = line.split("\t")
        if len(fields) not in (4, 5):
            raise CorpusError("dictionary line %d: expected 4 or 5 fields" % lineno)
        en_lemma = fields[0].strip().lower()
        es_lemma = fields[1].strip().lower()
        gender = fields[2].strip().lower()
        number = fields[3].strip().lower()
        if gender not in _DICT_GENDER:
            raise CorpusError(
                "dictionary line %d: missing or bad gender %r" % (lineno, fields[2]))
        if number not in _DICT_NUMBER:
            raise CorpusError(
                "dictionary line %d: bad number %r" % (lineno, fields[3]))
        en_number = SG
        if len(fields) == 5:
            en_num_raw = fields[4].strip().lower()
            if en_num_raw not in _DICT_NUMBER:
                raise CorpusError(
                    "dictionary line %d: bad English number %r" % (lineno, fields[4]))
            en_number = _DICT_NUMBER[en_num_raw]
        entry = DictEntry(
            es_lemma=es_lemma, es_gender=_DICT_GENDER[gender],
            es_number=_DICT_NUMBER[number], en_lemma=en_lemma, en_number=en_number)
        if en_lemma in en_to_es and en_to_es[en_lemma] != entry:
            raise CorpusError(
                "dictionary line %d: conflicting entry for %r" % (lineno, en_lemma))
        en_to_es[en_lemma] = entry
        if es_lemma in es_to_en and es_to_en[es_lemma] != entry:
            raise CorpusError(
                "dictionary line %d: conflicting entry for %r" % (lineno, es_lemma))
        es_to_en[es_lemma] = entry
    return BilingualDictionary(en_to_es=en_to_es, es_to_en=es_to_en)
