"""Morphological generation of target-language pronouns.

A rule table maps (direction, source pronoun class, grammatical function,
antecedent semantic category, antecedent target-language gender, antecedent
target-language number) to exactly one target pronoun.  The shipped default
table is total over that domain: subject/oblique forms agree with the
antecedent's target-language gender and number (él/ella/ellos/ellas for
person and animal antecedents, éste/ésta/éstos/éstas for objects), direct
complements use the clitic series (lo/la/los/las), and the English side
collapses to he/she (person), it (non-person) and they/them (plural).
"""

from __future__ import annotations

from dataclasses import dataclass

from .corpus import (
    BilingualDictionary, FEM, MASC, PL, SEM_ANIMAL, SEM_OBJECT, SEM_PERSON,
    SG, UNKNOWN,
)
from .interlingua import InterlinguaText, IRPronoun
from .resolver import COMPL, OBLIQUE, SUBJ

EN2ES = "EN2ES"
ES2EN = "ES2EN"

ZERO_CLASS = "zero"
ZERO_SURFACE = "∅"
UNTRANSLATABLE = "UNTRANSLATABLE"

FEATURE_FROM_DICTIONARY = "dictionary"
FEATURE_FROM_TAG = "tag"
FEATURE_FROM_DEFAULT = "default"


class GeneratorError(ValueError):
    pass


@dataclass(frozen=True)
class MorphRule:
    direction: str
    pron_class: str
    function: str
    sem_category: str
    gender: str
    number: str
    target: str

    @property
    def lhs(self):
        return (self.direction, self.pron_class, self.function,
                self.sem_category, self.gender, self.number)

    @property
    def rule_id(self) -> str:
        return "%s:%s:%s:%s:%s:%s" % self.lhs


@dataclass(frozen=True)
class PronounTranslation:
    anaphor_id: str
    source: str          # source surface, ∅ for zeros
    target: str
    rule_id: str | None
    gender: str
    number: str
    sem_category: str
    feature_source: str  # dictionary | tag | default
    low_confidence: bool = False
    dictionary_miss: bool = False

    def to_record(self) -> dict:
        return {
            "anaphor": self.anaphor_id, "source": self.source,
            "target": self.target, "rule": self.rule_id,
            "features": {"gender": self.gender, "number": self.number,
                         "sem": self.sem_category,
                         "source": self.feature_source},
            "low_confidence": self.low_confidence,
            "dictionary_miss": self.dictionary_miss,
        }


# ---------------------------------------------------------------------------
# rule table: domain, default table, validation, file format
# ---------------------------------------------------------------------------

_EN_PAIRS = (
    ("he", SUBJ), ("she", SUBJ), ("it", SUBJ), ("they", SUBJ),
    ("him", COMPL), ("her", COMPL), ("it", COMPL), ("them", COMPL),
    ("him", OBLIQUE), ("her", OBLIQUE), ("it", OBLIQUE), ("them", OBLIQUE),
)
_ES_TONIC = ("él", "ella", "ellos", "ellas", "éste", "ésta", "éstos", "éstas")
_ES_PAIRS = tuple(
    [(c, SUBJ) for c in _ES_TONIC + (ZERO_CLASS,)]
    + [(c, COMPL) for c in ("le", "lo", "la", "les", "los", "las")]
    + [(c, OBLIQUE) for c in _ES_TONIC])

_SEMS = (SEM_PERSON, SEM_ANIMAL, SEM_OBJECT)
_GENDERS = (MASC, FEM)
_NUMBERS = (SG, PL)


def lhs_domain():
    """Every valid left-hand side the rule table must cover, both directions."""
    out = []
    for direction, pairs in ((EN2ES, _EN_PAIRS), (ES2EN, _ES_PAIRS)):
        for cls, fn in pairs:
            for sem in _SEMS:
                for gender in _GENDERS:
                    for number in _NUMBERS:
                        out.append((direction, cls, fn, sem, gender, number))
    return tuple(out)


_ES_TONIC_FORMS = {
    (SG, MASC): "él", (SG, FEM): "ella", (PL, MASC): "ellos", (PL, FEM): "ellas"}
_ES_DEM_FORMS = {
    (SG, MASC): "éste", (SG, FEM): "ésta", (PL, MASC): "éstos", (PL, FEM): "éstas"}
_ES_CLITIC_FORMS = {
    (SG, MASC): "lo", (SG, FEM): "la", (PL, MASC): "los", (PL, FEM): "las"}


def _en2es_target(cls, fn, sem, gender, number):
    # he/she/him/her carry their own gender and translate independently of
    # the antecedent
    if cls == "he":
        return "él"
    if cls == "she":
        return "ella"
    if cls == "him":
        return "lo" if fn == COMPL else "él"
    if cls == "her":
        return "la" if fn == COMPL else "ella"
    # it/they/them agree with the antecedent's Spanish gender and number
    if fn == COMPL:
        return _ES_CLITIC_FORMS[(number, gender)]
    if cls in ("they", "them") and number == PL:
        return _ES_TONIC_FORMS[(number, gender)]
    forms = _ES_DEM_FORMS if sem == SEM_OBJECT else _ES_TONIC_FORMS
    return forms[(number, gender)]


def _es2en_target(cls, fn, sem, gender, number):
    if number == PL:
        return "they" if fn == SUBJ else "them"
    if sem == SEM_PERSON:
        if fn == SUBJ:
            return "he" if gender == MASC else "she"
        return "him" if gender == MASC else "her"
    return "it"


def default_rule_table():
    """The shipped table: one ground rule per domain cell."""
    rules = []
    for lhs in lhs_domain():
        direction, cls, fn, sem, gender, number = lhs
        make = _en2es_target if direction == EN2ES else _es2en_target
        rules.append(MorphRule(direction, cls, fn, sem, gender, number,
                               make(cls, fn, sem, gender, number)))
    return tuple(rules)


@dataclass(frozen=True)
class TableReport:
    gaps: tuple
    overlaps: tuple

    @property
    def ok(self) -> bool:
        return not self.gaps and not self.overlaps


def validate_rule_table(table) -> TableReport:
    """Totality and functionality over the lhs domain (report, never raises)."""
    seen: dict[tuple, int] = {}
    for rule in table:
        seen[rule.lhs] = seen.get(rule.lhs, 0) + 1
    gaps = tuple(lhs for lhs in lhs_domain() if lhs not in seen)
    overlaps = tuple(sorted(lhs for lhs, n in seen.items() if n > 1))
    return TableReport(gaps=gaps, overlaps=overlaps)


_FN_CODES = {"SUBJ": SUBJ, "COMPL": COMPL, "OBL": OBLIQUE}
_FN_OUT = {v: k for k, v in _FN_CODES.items()}
_GENDER_CODES = {"m": MASC, "f": FEM}
_GENDER_OUT = {v: k for k, v in _GENDER_CODES.items()}


def load_rule_table(lines):
    """`EN2ES it SUBJ object f sg -> ésta`, one rule per line."""
    if isinstance(lines, str):
        lines = lines.splitlines()
    rules = []
    for lineno, raw in enumerate(lines, start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "->" not in line:
            raise GeneratorError("rule line %d: missing '->'" % lineno)
        left, target = line.split("->", 1)
        fields = left.split()
        if len(fields) != 6:
            raise GeneratorError("rule line %d: expected 6 lhs fields" % lineno)
        direction, cls, fn, sem, gender, number = fields
        if direction not in (EN2ES, ES2EN):
            raise GeneratorError("rule line %d: bad direction %r" % (lineno, direction))
        if fn not in _FN_CODES:
            raise GeneratorError("rule line %d: bad function %r" % (lineno, fn))
        if sem not in _SEMS:
            raise GeneratorError("rule line %d: bad category %r" % (lineno, sem))
        if gender not in _GENDER_CODES:
            raise GeneratorError("rule line %d: bad gender %r" % (lineno, gender))
        if number not in _NUMBERS:
            raise GeneratorError("rule line %d: bad number %r" % (lineno, number))
        rules.append(MorphRule(direction, cls.lower(), _FN_CODES[fn], sem,
                               _GENDER_CODES[gender], number, target.strip()))
    return tuple(rules)


def save_rule_table(table) -> str:
    lines = []
    for rule in table:
        lines.append("%s %s %s %s %s %s -> %s" % (
            rule.direction, rule.pron_class, _FN_OUT[rule.function],
            rule.sem_category, _GENDER_OUT[rule.gender], rule.number,
            rule.target))
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# feature extraction
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class TargetFeatures:
    gender: str
    number: str
    sem_category: str
    source: str
    dictionary_miss: bool = False


def target_features(entity, direction: str,
                    dictionary: BilingualDictionary) -> TargetFeatures:
    """Target-language gender/number/category of an antecedent entity.

    English antecedents get their Spanish gender from the bilingual
    dictionary (a miss falls back to the source tags, flagged).  Number
    normally follows the mention; only entries recording a number
    discrepancy between the two languages (*people* pl / *gente* sg,
    *furniture* sg / *muebles* pl) force the dictionary number.
    """
    sem = entity.sem_category if entity.sem_category != UNKNOWN else SEM_OBJECT
    if direction == EN2ES:
        entry = dictionary.lookup_en(entity.head_lemma)
        if entry is None:
            gender = entity.gender if entity.gender in (MASC, FEM) else MASC
            number = entity.number if entity.number != UNKNOWN else SG
            return TargetFeatures(gender, number, sem, FEATURE_FROM_DEFAULT,
                                  dictionary_miss=True)
        if entry.es_number != entry.en_number:
            number = entry.es_number
        else:
            number = entity.number if entity.number != UNKNOWN else entry.es_number
        return TargetFeatures(entry.es_gender, number, sem,
                              FEATURE_FROM_DICTIONARY)
    gender = entity.gender if entity.gender in (MASC, FEM) else MASC
    source = FEATURE_FROM_TAG if entity.gender in (MASC, FEM) else FEATURE_FROM_DEFAULT
    entry = dictionary.lookup_es(entity.head_lemma)
    if entry is not None and entry.en_number != entry.es_number:
        return TargetFeatures(gender, entry.en_number, sem,
                              FEATURE_FROM_DICTIONARY)
    number = entity.number if entity.number != UNKNOWN else SG
    return TargetFeatures(gender, number, sem, source)


# source-pronoun classes and the features assumed for unresolved anaphors
_EN_CLASS_DEFAULTS = {
    "he": (SEM_PERSON, MASC, SG), "she": (SEM_PERSON, FEM, SG),
    "him": (SEM_PERSON, MASC, SG), "her": (SEM_PERSON, FEM, SG),
    "it": (SEM_OBJECT, MASC, SG),
    "they": (SEM_OBJECT, MASC, PL), "them": (SEM_OBJECT, MASC, PL),
}
_ES_CLASS_DEFAULTS = {
    "él": (SEM_PERSON, MASC, SG), "ella": (SEM_PERSON, FEM, SG),
    "ellos": (SEM_PERSON, MASC, PL), "ellas": (SEM_PERSON, FEM, PL),
    "éste": (SEM_OBJECT, MASC, SG), "ésta": (SEM_OBJECT, FEM, SG),
    "éstos": (SEM_OBJECT, MASC, PL), "éstas": (SEM_OBJECT, FEM, PL),
    "le": (SEM_PERSON, MASC, SG), "les": (SEM_PERSON, MASC, PL),
    "lo": (SEM_OBJECT, MASC, SG), "los": (SEM_OBJECT, MASC, PL),
    "la": (SEM_OBJECT, FEM, SG), "las": (SEM_OBJECT, FEM, PL),
    ZERO_CLASS: (SEM_OBJECT, MASC, SG),
}


def pronoun_class(record: IRPronoun, direction: str) -> str | None:
    if record.kind == "zero":
        return ZERO_CLASS
    surface = record.surface.lower()
    table = _EN_CLASS_DEFAULTS if direction == EN2ES else _ES_CLASS_DEFAULTS
    if surface in table:
        return surface
    if record.lemma in table:
        return record.lemma
    return None


def translate_pronoun(record: IRPronoun, features: TargetFeatures,
                      direction: str, table_index: dict,
                      drop_spanish_subjects: bool = False) -> PronounTranslation:
    """Apply the single matching morphological rule to one pronoun record."""
    source = record.surface if record.surface else ZERO_SURFACE
    cls = pronoun_class(record, direction)
    if cls is None:
        return PronounTranslation(
            anaphor_id=record.anaphor_id, source=source, target=UNTRANSLATABLE,
            rule_id=None, gender=features.gender, number=features.number,
            sem_category=features.sem_category, feature_source=features.source,
            low_confidence=True)
    low_confidence = False
    if record.entity is None:
        # unresolved: fall back to the class's assumed features
        defaults = (_EN_CLASS_DEFAULTS if direction == EN2ES
                    else _ES_CLASS_DEFAULTS)[cls]
        sem, gender, number = defaults
        if record.kind == "zero" and record.number != UNKNOWN:
            number = record.number
        features = TargetFeatures(gender, number, sem, FEATURE_FROM_DEFAULT,
                                  dictionary_miss=False)
        low_confidence = True
    function = record.function if record.function in (SUBJ, COMPL, OBLIQUE) else SUBJ
    key = (direction, cls, function, features.sem_category, features.gender,
           features.number)
    rule = table_index.get(key)
    if rule is None:
        raise GeneratorError("no rule for %r" % (key,))
    target = rule.target
    if drop_spanish_subjects and direction == EN2ES and function == SUBJ \
            and target != UNTRANSLATABLE:
        target = ZERO_SURFACE
    if record.position == 0 and target not in (ZERO_SURFACE, UNTRANSLATABLE):
        target = target[0].upper() + target[1:]
    return PronounTranslation(
        anaphor_id=record.anaphor_id, source=source, target=target,
        rule_id=rule.rule_id, gender=features.gender, number=features.number,
        sem_category=features.sem_category, feature_source=features.source,
        low_confidence=low_confidence,
        dictionary_miss=features.dictionary_miss)


def index_table(table) -> dict:
    report = validate_rule_table(table)
    if report.overlaps:
        raise GeneratorError("rule table has overlapping rules: %r"
                             % (report.overlaps[:3],))
    return {rule.lhs: rule for rule in table}


def translate_document(ir: InterlinguaText, dictionary: BilingualDictionary,
                       table=None, drop_spanish_subjects: bool = False):
    """Translate every pronoun record of an interlingua text."""
    direction = EN2ES if ir.lang == "EN" else ES2EN
    if table is None:
        table = default_rule_table()
    index = index_table(table)
    entities = {e.eid: e for e in ir.entities}
    out = []
    for record in ir.pronouns:
        if record.entity is not None and record.entity in entities:
            features = target_features(entities[record.entity], direction,
                                       dictionary)
        else:
            features = TargetFeatures(MASC, SG, SEM_OBJECT, FEATURE_FROM_DEFAULT)
        out.append(translate_pronoun(record, features, direction, index,
                                     drop_spanish_subjects))
    return out
