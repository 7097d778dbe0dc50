"""Partial parsing: chunk sentences into slot structures and split clauses.

Chunking is rule-driven (longest match, left to right) over an ordered rule
list; anything the rules do not cover stays a bare token leaf, so parsing
never fails.  Every noun phrase gets a fresh discourse marker, the identifier
of the entity it introduces.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

from . import corpus
from .corpus import (
    ADJ, ADV, CONJ, COPULATIVE, DET, FINITE, IMPERATIVE, MASC, FEM, NEUT,
    NOUN, PERSONAL, PL, PREP, PRON, PROPER_NOUN, PUNCT, REFLEXIVE, RELATIVE,
    POSSESSIVE, SG, UNKNOWN, VERB, Sentence, Token,
)

# constituent kinds
NP = "NP"
PP = "PP"
VG = "VG"
CLAUSE = "CLAUSE"
SENT = "SENT"
TOKEN_LEAF = "TOKEN_LEAF"

# Spanish clitic pronoun surfaces; these attach to the verb group and never
# head an NP of their own.
ES_CLITICS = frozenset(
    "me te se nos os le les lo la los las".split())


class GrammarError(ValueError):
    """Raised on malformed grammar configuration."""


@dataclass(frozen=True)
class GrammarConfig:
    rules: tuple            # ((kind, ((element, quantifier), ...)), ...)
    subordinators: dict     # lang -> frozenset of lemmas
    coordinators: dict      # lang -> frozenset of lemmas
    np_coordinators: dict   # lang -> frozenset of lemmas
    lookahead: int = 6      # finite-verb window after a coordinator


_ELEMENTS = frozenset({
    "DET", "ADJ", "ADV", "MOD", "NOUN", "PROPN", "HEAD", "PREP", "VERB",
    "CLITIC", "NP",
})
_LIST_KEYS = ("subordinators", "coordinators", "np_coordinators")


def load_grammar(lines) -> GrammarConfig:
    """Parse a grammar file: chunk rules (`NP: DET? MOD* HEAD ADJ*`) followed
    by per-language trigger lemma lists (`subordinators_es: que porque ...`)."""
    if isinstance(lines, str):
        lines = lines.splitlines()
    rules = []
    lists: dict[str, dict] = {k: {} for k in _LIST_KEYS}
    for lineno, raw in enumerate(lines, start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if ":" not in line:
            raise GrammarError("grammar line %d: missing ':'" % lineno)
        key, rhs = line.split(":", 1)
        key = key.strip()
        rhs = rhs.strip()
        matched_list = False
        for lk in _LIST_KEYS:
            for lang in corpus.LANGUAGES:
                if key == "%s_%s" % (lk, lang.lower()):
                    lists[lk][lang] = frozenset(w.lower() for w in rhs.split())
                    matched_list = True
        if matched_list:
            continue
        if key not in (NP, PP, VG):
            raise GrammarError("grammar line %d: unknown rule kind %r" % (lineno, key))
        elems = []
        for item in rhs.split():
            quant = ""
            if item[-1] in "?*+":
                item, quant = item[:-1], item[-1]
            if item not in _ELEMENTS:
                raise GrammarError(
                    "grammar line %d: unknown element %r" % (lineno, item))
            elems.append((item, quant))
        rules.append((key, tuple(elems)))
    if not rules:
        raise GrammarError("grammar defines no chunk rules")
    for lk in _LIST_KEYS:
        for lang in corpus.LANGUAGES:
            lists[lk].setdefault(lang, frozenset())
    return GrammarConfig(rules=tuple(rules),
                         subordinators=lists["subordinators"],
                         coordinators=lists["coordinators"],
                         np_coordinators=lists["np_coordinators"])


def default_grammar() -> GrammarConfig:
    from .config import data_text
    return load_grammar(data_text("grammar.cfg"))


# ---------------------------------------------------------------------------
# slot structures
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SlotStructure:
    kind: str
    sid: int
    span: tuple                 # (start, end) inclusive token indices
    head_index: int | None
    person: int | None = None
    gender: str = UNKNOWN
    number: str = UNKNOWN
    sem_category: str = UNKNOWN
    discourse_marker: int | None = None
    children: tuple = ()

    def leaves(self):
        if self.kind == TOKEN_LEAF:
            yield self
        for child in self.children:
            yield from child.leaves()

    def to_dict(self) -> dict:
        d = {
            "kind": self.kind, "sid": self.sid, "span": list(self.span),
            "head": self.head_index, "person": self.person,
            "gender": self.gender, "number": self.number,
            "sem": self.sem_category, "dm": self.discourse_marker,
        }
        if self.children:
            d["children"] = [c.to_dict() for c in self.children]
        return d

    def serialize(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, ensure_ascii=False)


@dataclass(frozen=True)
class Clause:
    sid: int
    span: tuple
    verb_index: int | None      # tensed verb token index, None if verbless
    verb_group: SlotStructure | None
    pre_verbal: tuple
    post_verbal: tuple

    @property
    def constituents(self) -> tuple:
        middle = (self.verb_group,) if self.verb_group is not None else ()
        return self.pre_verbal + middle + self.post_verbal


def is_clitic(tok: Token, lang: str) -> bool:
    return (lang == "ES" and tok.pos == PRON
            and tok.pron_subtype in (PERSONAL, REFLEXIVE)
            and tok.surface.lower() in ES_CLITICS)


def is_strong_personal(tok: Token, lang: str) -> bool:
    return (tok.pos == PRON and tok.pron_subtype == PERSONAL
            and not is_clitic(tok, lang))


def _tensed(tok: Token) -> bool:
    return tok.pos == VERB and (FINITE in tok.verb_flags
                                or IMPERATIVE in tok.verb_flags)


def _element_match(elem: str, tok: Token, lang: str) -> bool:
    if elem == "DET":
        return tok.pos == DET or (tok.pos == PRON and tok.pron_subtype == POSSESSIVE)
    if elem == "ADJ":
        return tok.pos == ADJ
    if elem == "ADV":
        return tok.pos == ADV
    if elem == "MOD":
        return tok.pos in (ADJ, ADV)
    if elem == "NOUN":
        return tok.pos == NOUN
    if elem == "PROPN":
        return tok.pos == PROPER_NOUN
    if elem == "HEAD":
        return tok.pos in (NOUN, PROPER_NOUN) or is_strong_personal(tok, lang)
    if elem == "PREP":
        return tok.pos == PREP
    if elem == "VERB":
        return tok.pos == VERB
    if elem == "CLITIC":
        return is_clitic(tok, lang)
    raise GrammarError("element %r is not token-level" % elem)


class _Chunker:
    def __init__(self, sentence: Sentence, grammar: GrammarConfig, lang: str):
        self.tokens = sentence.tokens
        self.sid = sentence.sid
        self.grammar = grammar
        self.lang = lang
        self.np_rules = [r for k, r in grammar.rules if k == NP]

    def _match_elems(self, elems, pos, head=None):
        """Greedy token-class matcher; returns (next position, head index) or
        None.  Element classes of the shipped rules are disjoint, so greedy
        matching is exact."""
        if not elems:
            return pos, head
        (elem, quant), rest = elems[0], elems[1:]
        if elem == "NP":
            sub = self._match_np(pos)
            if sub is None:
                return None if quant not in ("?", "*") else self._match_elems(rest, pos, head)
            nxt, subhead = sub
            return self._match_elems(rest, nxt, head if head is not None else subhead)
        if quant == "":
            if pos < len(self.tokens) and _element_match(elem, self.tokens[pos], self.lang):
                newhead = pos if elem == "HEAD" and head is None else head
                return self._match_elems(rest, pos + 1, newhead)
            return None
        if quant == "?":
            if pos < len(self.tokens) and _element_match(elem, self.tokens[pos], self.lang):
                newhead = pos if elem == "HEAD" and head is None else head
                return self._match_elems(rest, pos + 1, newhead)
            return self._match_elems(rest, pos, head)
        # * or +
        count = 0
        cur = pos
        while cur < len(self.tokens) and _element_match(elem, self.tokens[cur], self.lang):
            cur += 1
            count += 1
        if quant == "+" and count == 0:
            return None
        return self._match_elems(rest, cur, head)

    def _match_np(self, pos):
        for elems in self.np_rules:
            res = self._match_elems(elems, pos)
            if res is not None and res[0] > pos:
                return res
        return None

    def _leaf(self, i: int) -> SlotStructure:
        tok = self.tokens[i]
        return SlotStructure(
            kind=TOKEN_LEAF, sid=self.sid, span=(i, i), head_index=i,
            person=tok.person, gender=tok.gender, number=tok.number,
            sem_category=tok.sem_category)

    def _make_np(self, start, end, head):
        htok = self.tokens[head]
        return SlotStructure(
            kind=NP, sid=self.sid, span=(start, end), head_index=head,
            person=htok.person if htok.person is not None else 3,
            gender=htok.gender, number=htok.number,
            sem_category=htok.sem_category,
            children=tuple(self._leaf(i) for i in range(start, end + 1)))

    def _try_rule(self, kind, elems, pos):
        if kind == PP:
            # PREP NP shape: match the leading token elements, then the NP
            res = self._match_elems(elems, pos)
            if res is None or res[0] == pos:
                return None
            nxt, _ = res
            # rebuild: leading non-NP tokens as leaves, inner NPs as chunks
            children = []
            cur = pos
            i = 0
            while i < len(elems) and elems[i][0] != "NP":
                # leading simple elements were consumed one-by-one or greedily;
                # re-scan to find where the NP starts
                i += 1
            np_sub = None
            scan = pos
            while scan < nxt:
                sub = self._match_np(scan)
                if sub is not None and sub[0] <= nxt:
                    np_sub = (scan, sub[0] - 1, sub[1])
                    break
                scan += 1
            if np_sub is None:
                return None
            np_start, np_end, np_head = np_sub
            children = [self._leaf(i) for i in range(pos, np_start)]
            inner = self._make_np(np_start, np_end, np_head)
            children.append(inner)
            children.extend(self._leaf(i) for i in range(np_end + 1, nxt))
            return SlotStructure(
                kind=PP, sid=self.sid, span=(pos, nxt - 1),
                head_index=inner.head_index, person=inner.person,
                gender=inner.gender, number=inner.number,
                sem_category=inner.sem_category, children=tuple(children)), nxt
        res = self._match_elems(elems, pos)
        if res is None or res[0] == pos:
            return None
        nxt, head = res
        if kind == NP:
            if head is None:
                return None
            return self._make_np(pos, nxt - 1, head), nxt
        # VG: head is the first tensed verb, else the last verb
        verb_idxs = [i for i in range(pos, nxt) if self.tokens[i].pos == VERB]
        tensed = [i for i in verb_idxs if _tensed(self.tokens[i])]
        head = tensed[0] if tensed else verb_idxs[-1]
        htok = self.tokens[head]
        return SlotStructure(
            kind=VG, sid=self.sid, span=(pos, nxt - 1), head_index=head,
            person=htok.person, gender=htok.gender, number=htok.number,
            children=tuple(self._leaf(i) for i in range(pos, nxt))), nxt

    def chunk(self) -> list:
        out = []
        pos = 0
        while pos < len(self.tokens):
            produced = None
            for kind, elems in self.grammar.rules:
                produced = self._try_rule(kind, elems, pos)
                if produced is not None:
                    break
            if produced is None:
                out.append(self._leaf(pos))
                pos += 1
            else:
                ss, nxt = produced
                out.append(ss)
                pos = nxt
        return out


def _merge_gender(genders):
    known = [g for g in genders if g != UNKNOWN]
    if not known:
        return UNKNOWN
    if all(g == FEM for g in known):
        return FEM
    if any(g == MASC for g in known):
        return MASC
    return known[0]


def _merge_coordinated_nps(chunks, tokens, grammar, lang):
    """Fuse adjacent `NP CONJ NP` triples into one plural NP (one entity)."""
    coords = grammar.np_coordinators.get(lang, frozenset())
    out = list(chunks)
    i = 0
    while i + 2 < len(out) + 0 or True:
        if i + 2 >= len(out):
            break
        a, b, c = out[i], out[i + 1], out[i + 2]
        if (a.kind == NP and c.kind == NP and b.kind == TOKEN_LEAF
                and tokens[b.span[0]].pos == CONJ
                and tokens[b.span[0]].lemma.lower() in coords
                and a.span[1] + 1 == b.span[0] and b.span[1] + 1 == c.span[0]):
            sems = {a.sem_category, c.sem_category}
            merged = SlotStructure(
                kind=NP, sid=a.sid, span=(a.span[0], c.span[1]),
                head_index=a.head_index, person=3,
                gender=_merge_gender([a.gender, c.gender]), number=PL,
                sem_category=a.sem_category if len(sems) == 1 else UNKNOWN,
                children=tuple(SlotStructure(
                    kind=TOKEN_LEAF, sid=a.sid, span=(j, j), head_index=j,
                    person=tokens[j].person, gender=tokens[j].gender,
                    number=tokens[j].number, sem_category=tokens[j].sem_category)
                    for j in range(a.span[0], c.span[1] + 1)))
            out[i:i + 3] = [merged]
            continue  # allow chains: X y Y y Z
        i += 1
    return out


def _assign_markers(ss: SlotStructure, counter) -> SlotStructure:
    children = tuple(_assign_markers(c, counter) for c in ss.children)
    marker = ss.discourse_marker
    if ss.kind == NP:
        marker = next(counter)
    if children != ss.children or marker != ss.discourse_marker:
        ss = SlotStructure(
            kind=ss.kind, sid=ss.sid, span=ss.span, head_index=ss.head_index,
            person=ss.person, gender=ss.gender, number=ss.number,
            sem_category=ss.sem_category, discourse_marker=marker,
            children=children)
    return ss


def chunk_sentence(sentence: Sentence, grammar: GrammarConfig, lang: str,
                   marker_counter=None) -> SlotStructure:
    """Chunk one sentence into a SENT slot structure.

    ``marker_counter`` is the per-document discourse-marker allocator (an
    iterator of ints); omit it for standalone use.
    """
    if marker_counter is None:
        marker_counter = iter(range(1, 10 ** 9))
    chunks = _Chunker(sentence, grammar, lang).chunk()
    chunks = _merge_coordinated_nps(chunks, sentence.tokens, grammar, lang)
    chunks = [_assign_markers(c, marker_counter) for c in chunks]
    span = (0, len(sentence.tokens) - 1) if sentence.tokens else (0, -1)
    return SlotStructure(kind=SENT, sid=sentence.sid, span=span,
                         head_index=None, children=tuple(chunks))


def chunk_document(doc: corpus.Document, grammar: GrammarConfig) -> list:
    """Chunk every sentence with one shared discourse-marker counter."""
    counter = iter(range(1, 10 ** 9))
    return [chunk_sentence(s, grammar, doc.lang, counter) for s in doc.sentences]


# ---------------------------------------------------------------------------
# clause splitting
# ---------------------------------------------------------------------------

def _tensed_vg(child: SlotStructure, tokens) -> bool:
    return child.kind == VG and child.head_index is not None and _tensed(
        tokens[child.head_index])


def _is_trigger(child: SlotStructure, tokens, grammar: GrammarConfig,
                lang: str) -> bool:
    if child.kind != TOKEN_LEAF:
        return False
    tok = tokens[child.span[0]]
    if tok.pos == PUNCT and tok.surface in (";", ":"):
        return True
    if tok.pos == PRON and tok.pron_subtype == RELATIVE:
        return True
    if tok.pos == CONJ:
        lemma = tok.lemma.lower()
        if lemma in grammar.subordinators.get(lang, frozenset()):
            return True
        if lemma in grammar.coordinators.get(lang, frozenset()):
            # only a clause boundary when a tensed verb follows soon;
            # NP coordination was already fused by the chunker
            idx = tok.index
            for j in range(idx + 1, min(idx + 1 + grammar.lookahead, len(tokens))):
                if _tensed(tokens[j]):
                    return True
    return False


def split_clauses(sent_ss: SlotStructure, sentence: Sentence,
                  grammar: GrammarConfig, lang: str) -> list:
    """Split a chunked sentence into clauses, one per tensed verb group.

    Boundary triggers open segments; segments holding several tensed verb
    groups split before each extra one; verbless segments merge into the
    nearest governing clause (the preceding one when it exists).
    """
    tokens = sentence.tokens
    children = list(sent_ss.children)
    if not children:
        return []
    # pass 1: segment at boundary triggers
    segments = [[]]
    for child in children:
        if _is_trigger(child, tokens, grammar, lang) and segments[-1]:
            segments.append([])
        segments[-1].append(child)
    # pass 2: one tensed verb group per segment
    refined = []
    for seg in segments:
        cur = []
        seen_tensed = False
        for child in seg:
            if _tensed_vg(child, tokens) and seen_tensed:
                refined.append(cur)
                cur = [child]
                continue
            if _tensed_vg(child, tokens):
                seen_tensed = True
            cur.append(child)
        refined.append(cur)
    # pass 3: merge verbless segments into nearest governing clause
    merged: list[list] = []
    pending: list = []
    for seg in refined:
        if any(_tensed_vg(c, tokens) for c in seg):
            if pending and not merged:
                seg = pending + seg
                pending = []
            merged.append(seg)
        else:
            if merged:
                merged[-1].extend(seg)
            else:
                pending.extend(seg)
    if pending:
        merged.append(pending)  # fully verbless sentence
    clauses = []
    for seg in merged:
        vg = next((c for c in seg if _tensed_vg(c, tokens)), None)
        verb_index = vg.head_index if vg is not None else None
        pre, post = [], []
        for c in seg:
            if c is vg:
                continue
            if vg is not None and c.span[0] > vg.span[1]:
                post.append(c)
            else:
                pre.append(c)
        clauses.append(Clause(
            sid=sentence.sid, span=(seg[0].span[0], seg[-1].span[1]),
            verb_index=verb_index, verb_group=vg,
            pre_verbal=tuple(pre), post_verbal=tuple(post)))
    return clauses


def iter_nps(ss: SlotStructure):
    """All NP slot structures in textual order (including PP-internal ones)."""
    if ss.kind == NP:
        yield ss
    for child in ss.children:
        yield from iter_nps(child)
