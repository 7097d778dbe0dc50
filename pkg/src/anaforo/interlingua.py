"""Clause-based interlingua: feature structures with semantic roles, the
text-wide entity registry, and the pronoun records the generator consumes.

The representation carries no target-language material; generation is a
separate pass, so any analysis side can feed any generation side.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

from . import resolver
from .chunker import NP, PP, TOKEN_LEAF, VG
from .corpus import Document, FINITE, IMPERATIVE, COPULATIVE, UNKNOWN, VERB
from .resolver import (
    Anaphor, DocumentAnalysis, KIND_ZERO, Resolution, SUBJ, UNRESOLVED,
)
from .zero_pronoun import SUBJECT_PRESENT

IR_VERSION = 1

NEGATION_LEMMAS = frozenset("no not never nunca jamás".split())


class InterlinguaError(ValueError):
    """Raised on malformed serialized interlingua input."""

    def __init__(self, message: str, path: str = "$"):
        super().__init__("%s (at %s)" % (message, path))
        self.path = path


@dataclass(frozen=True)
class IRClause:
    cid: str
    verb: str | None           # verb lemma
    sense: str | None          # lexical sense key (input sense tag or lemma)
    roles: dict                # role -> {"entity": id} or {"literal": text}
    features: dict             # verb flags + polarity
    sid: int
    span: tuple


@dataclass(frozen=True)
class IREntity:
    eid: int
    head_lemma: str
    head_surface: str
    gender: str
    number: str
    sem_category: str
    mentions: tuple            # ordered locator keys (zero slots included)


@dataclass(frozen=True)
class IRPronoun:
    anaphor_id: str
    entity: int | None         # None = unresolved
    function: str
    kind: str
    surface: str
    lemma: str
    person: int | None
    gender: str
    number: str
    sid: int
    position: int = -1         # token index (zeros: the slot they precede)


@dataclass(frozen=True)
class InterlinguaText:
    lang: str
    doc_id: str
    clauses: tuple
    entities: tuple
    pronouns: tuple


def _role_value(state_chains, entity_id):
    return {"entity": entity_id}


def build_interlingua(doc: Document, analysis: DocumentAnalysis,
                      resolutions, chains, doc_id: str = "doc") -> InterlinguaText:
    """Assemble the interlingua text after resolution.

    Roles are positional: the subject NP (or the resolved subject pronoun's
    entity) is the agent, the first bare post-verbal NP is the theme, and
    each prepositional phrase contributes an ``other:<prep>`` role.
    """
    res_by_anaphor = {r.anaphor.aid: r for r in resolutions}
    tokens_of = {s.sid: s.tokens for s in doc.sentences}
    zero_by_clause = {}
    for r in resolutions:
        if r.anaphor.kind == KIND_ZERO and r.anaphor.clause_index is not None:
            zero_by_clause[r.anaphor.clause_index] = r

    def canonical(eid):
        # chains hold canonical ids only; aliases were resolved during resolution
        return eid if eid in chains else eid

    clauses_ir = []
    for ci, clause in enumerate(analysis.clauses):
        tokens = tokens_of[clause.sid]
        verb_lemma = tokens[clause.verb_index].lemma if clause.verb_index is not None else None
        roles: dict[str, dict] = {}
        status = analysis.statuses[ci] if ci < len(analysis.statuses) else None
        # agent
        agent = None
        if status is not None and status.status == SUBJECT_PRESENT \
                and status.subject_marker is not None:
            eid = status.subject_marker
            ent = analysis.entities.get(eid)
            if ent is not None and ent.pronominal:
                pr = res_by_anaphor.get("s%d.t%d" % (clause.sid, ent.head_index))
                agent = {"entity": pr.chosen} if pr is not None and pr.chosen is not None \
                    else {"literal": ent.head_surface}
            else:
                agent = {"entity": canonical(eid)}
        elif ci in zero_by_clause:
            r = zero_by_clause[ci]
            agent = {"entity": r.chosen} if r.chosen is not None \
                else {"literal": "∅"}
        elif doc.lang == "EN" and clause.verb_index is not None:
            subj = _en_subject(analysis, clause, res_by_anaphor)
            if subj is not None:
                agent = subj
        if agent is not None:
            roles["agent"] = agent
        # theme: first post-verbal NP not inside a PP
        for cons in clause.post_verbal:
            if cons.kind == NP:
                ent = analysis.entities.get(cons.discourse_marker)
                if ent is not None and not ent.pronominal:
                    roles["theme"] = {"entity": canonical(cons.discourse_marker)}
                else:
                    pr = res_by_anaphor.get("s%d.t%d" % (clause.sid, cons.head_index))
                    roles["theme"] = {"entity": pr.chosen} \
                        if pr is not None and pr.chosen is not None \
                        else {"literal": ent.head_surface if ent else ""}
                break
        # other roles: one per prepositional phrase
        for cons in clause.constituents:
            if cons.kind != PP:
                continue
            prep = tokens[cons.span[0]].lemma.lower()
            inner = next((c for c in cons.children if c.kind == NP), None)
            key = "other:%s" % prep
            n = 2
            while key in roles:
                key = "other:%s:%d" % (prep, n)
                n += 1
            if inner is not None and inner.discourse_marker in analysis.entities \
                    and not analysis.entities[inner.discourse_marker].pronominal:
                roles[key] = {"entity": canonical(inner.discourse_marker)}
            else:
                span_text = " ".join(
                    tokens[i].surface for i in range(cons.span[0], cons.span[1] + 1))
                roles[key] = {"literal": span_text}
        features = {"polarity": "positive"}
        if clause.verb_index is not None:
            vtok = tokens[clause.verb_index]
            features["verb_flags"] = sorted(vtok.verb_flags)
            for cons in clause.pre_verbal:
                for leaf in cons.leaves():
                    if tokens[leaf.span[0]].lemma.lower() in NEGATION_LEMMAS:
                        features["polarity"] = "negative"
        clauses_ir.append(IRClause(
            cid="c%d.%d" % (clause.sid, ci), verb=verb_lemma,
            sense=verb_lemma, roles=roles, features=features,
            sid=clause.sid, span=clause.span))

    entities_ir = []
    for eid in sorted(chains):
        ent = analysis.entities.get(eid)
        if ent is None or ent.pronominal:
            continue
        entities_ir.append(IREntity(
            eid=eid, head_lemma=ent.head_lemma, head_surface=ent.head_surface,
            gender=ent.gender, number=ent.number,
            sem_category=ent.sem_category, mentions=tuple(chains[eid])))

    pronouns_ir = []
    for r in resolutions:
        a = r.anaphor
        position = a.token_index if a.token_index is not None \
            else (a.position + 1) // 2
        pronouns_ir.append(IRPronoun(
            anaphor_id=a.aid, entity=r.chosen, function=a.function,
            kind=a.kind, surface=a.surface, lemma=a.lemma, person=a.person,
            gender=a.gender, number=a.number, sid=a.sid, position=position))
    return InterlinguaText(
        lang=doc.lang, doc_id=doc_id, clauses=tuple(clauses_ir),
        entities=tuple(entities_ir), pronouns=tuple(pronouns_ir))


def _en_subject(analysis, clause, res_by_anaphor):
    """English subject = nearest agreeing pre-verbal NP (mirrors the Spanish
    scan, minus zero insertion)."""
    for cons in reversed(clause.pre_verbal):
        if cons.kind != NP:
            continue
        ent = analysis.entities.get(cons.discourse_marker)
        if ent is None:
            continue
        if ent.pronominal:
            pr = res_by_anaphor.get("s%d.t%d" % (clause.sid, ent.head_index))
            if pr is not None and pr.chosen is not None:
                return {"entity": pr.chosen}
            return {"literal": ent.head_surface}
        return {"entity": ent.eid}
    return None


# ---------------------------------------------------------------------------
# serialization
# ---------------------------------------------------------------------------

def to_dict(ir: InterlinguaText) -> dict:
    return {
        "irv": IR_VERSION,
        "lang": ir.lang,
        "doc_id": ir.doc_id,
        "clauses": [
            {"id": c.cid, "verb": c.verb, "sense": c.sense, "roles": c.roles,
             "features": c.features, "sid": c.sid, "span": list(c.span)}
            for c in ir.clauses],
        "entities": [
            {"id": e.eid, "head": e.head_lemma, "surface": e.head_surface,
             "gender": e.gender, "number": e.number, "sem": e.sem_category,
             "mentions": list(e.mentions)}
            for e in ir.entities],
        "pronouns": [
            {"anaphor": p.anaphor_id,
             "entity": p.entity if p.entity is not None else UNRESOLVED,
             "function": p.function, "kind": p.kind, "surface": p.surface,
             "lemma": p.lemma, "person": p.person, "gender": p.gender,
             "number": p.number, "sid": p.sid, "position": p.position}
            for p in ir.pronouns],
    }


def serialize(ir: InterlinguaText) -> bytes:
    """Canonical JSON bytes (sorted keys, UTF-8)."""
    return json.dumps(to_dict(ir), sort_keys=True, ensure_ascii=False,
                      separators=(",", ":")).encode("utf-8")


def _expect(condition, message, path):
    if not condition:
        raise InterlinguaError(message, path)


def deserialize(data: bytes) -> InterlinguaText:
    try:
        obj = json.loads(data.decode("utf-8") if isinstance(data, bytes) else data)
    except (ValueError, UnicodeDecodeError) as exc:
        raise InterlinguaError("not valid JSON: %s" % exc) from None
    _expect(isinstance(obj, dict), "top level must be an object", "$")
    _expect(obj.get("irv") == IR_VERSION,
            "unsupported interlingua version %r" % obj.get("irv"), "$.irv")
    for key in ("lang", "doc_id", "clauses", "entities", "pronouns"):
        _expect(key in obj, "missing key %r" % key, "$.%s" % key)
    clauses = []
    for i, c in enumerate(obj["clauses"]):
        path = "$.clauses[%d]" % i
        _expect(isinstance(c, dict) and "id" in c and "roles" in c,
                "bad clause", path)
        clauses.append(IRClause(
            cid=c["id"], verb=c.get("verb"), sense=c.get("sense"),
            roles=c["roles"], features=c.get("features", {}),
            sid=c.get("sid", 0), span=tuple(c.get("span", (0, 0)))))
    entities = []
    eids = set()
    for i, e in enumerate(obj["entities"]):
        path = "$.entities[%d]" % i
        _expect(isinstance(e, dict) and "id" in e and "head" in e,
                "bad entity", path)
        entities.append(IREntity(
            eid=e["id"], head_lemma=e["head"], head_surface=e.get("surface", ""),
            gender=e.get("gender", UNKNOWN), number=e.get("number", UNKNOWN),
            sem_category=e.get("sem", UNKNOWN),
            mentions=tuple(e.get("mentions", ()))))
        eids.add(e["id"])
    for i, c in enumerate(clauses):
        for role, value in c.roles.items():
            if isinstance(value, dict) and "entity" in value:
                _expect(value["entity"] in eids,
                        "role %r refers to unknown entity %r" % (role, value["entity"]),
                        "$.clauses[%d].roles" % i)
    pronouns = []
    for i, p in enumerate(obj["pronouns"]):
        path = "$.pronouns[%d]" % i
        _expect(isinstance(p, dict) and "anaphor" in p, "bad pronoun record", path)
        ent = p.get("entity")
        if ent == UNRESOLVED:
            ent = None
        _expect(ent is None or ent in eids,
                "pronoun refers to unknown entity %r" % ent, path)
        pronouns.append(IRPronoun(
            anaphor_id=p["anaphor"], entity=ent,
            function=p.get("function", SUBJ), kind=p.get("kind", "personal"),
            surface=p.get("surface", ""), lemma=p.get("lemma", ""),
            person=p.get("person"), gender=p.get("gender", UNKNOWN),
            number=p.get("number", UNKNOWN), sid=p.get("sid", 0),
            position=p.get("position", -1)))
    return InterlinguaText(
        lang=obj["lang"], doc_id=obj["doc_id"], clauses=tuple(clauses),
        entities=tuple(entities), pronouns=tuple(pronouns))
