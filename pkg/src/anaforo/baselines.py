"""Alternative antecedent-selection strategies for comparison runs.

Each baseline consumes the same detection, candidate window and constraint
filter as the main resolver and replaces only the ranking step.  The
tree-based originals (breadth-first search, salience weighting, functional
centering) are adapted here for flat partial-parse structures.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from . import resolver
from .corpus import Document, UNKNOWN
from .resolver import (
    Anaphor, Candidate, DocumentAnalysis, DocumentState, ResolverConfig,
    SUBJ, COMPL, _proximity_sorted,
)

PROXIMITY = "PROXIMITY"
LINEAR_SEARCH = "LINEAR_SEARCH"
SALIENCE = "SALIENCE"
CENTERING = "CENTERING"
AGIR = "AGIR"

BASELINE_IDS = (PROXIMITY, LINEAR_SEARCH, SALIENCE, CENTERING)

DEFAULT_SALIENCE_WEIGHTS = {
    "recency": 100,
    "subject": 80,
    "head": 80,
    "non_embedded": 50,
    "parallelism": 35,
}


class BaselineError(ValueError):
    pass


def _proximity_select(anaphor, kept, state):
    ranked = _proximity_sorted(kept)
    return ranked, ["baseline:proximity"]


def _linear_select(anaphor, kept, state):
    """Flat adaptation of tree search: scan the anaphor's sentence right to
    left, then earlier sentences left to right (most recent sentence first);
    the first constraint-passing candidate wins."""
    same = [c for c in kept if c.distance == 0]
    same.sort(key=lambda c: (-c.mention.head_index, c.eid))
    ranked = list(same)
    dist = 1
    remaining = [c for c in kept if c.distance > 0]
    while remaining:
        batch = [c for c in remaining if c.distance == dist]
        batch.sort(key=lambda c: (c.mention.head_index, c.eid))
        ranked.extend(batch)
        remaining = [c for c in remaining if c.distance > dist]
        dist += 1
    return ranked, ["baseline:linear"]


def _salience_select(weights):
    def select(anaphor, kept, state):
        analysis = state.analysis

        def score(cand: Candidate) -> float:
            decay = 0.5 ** cand.distance
            total = weights.get("recency", 0) * decay
            fn = resolver._candidate_function(analysis, cand.mention)
            if fn == SUBJ:
                total += weights.get("subject", 0) * decay
            if fn != resolver.OBLIQUE:
                total += weights.get("head", 0) * decay
            clause = analysis.clause_at(cand.mention.sid, cand.mention.head_index)
            # main (first) clause of its sentence counts as non-embedded
            if clause is not None and clause.span[0] == 0:
                total += weights.get("non_embedded", 0) * decay
            if cand.same_function_as_anaphor:
                total += weights.get("parallelism", 0) * decay
            return total

        prox = _proximity_sorted(kept)
        ranked = sorted(prox, key=score, reverse=True)
        # stable sort on a proximity-ordered list = proximity tie-break
        return ranked, ["baseline:salience"]
    return select


def _centering_select(anaphor, kept, state):
    """Functional centering: prefer the best forward-looking center of the
    previous sentence, ranked given-before-new, then by grammatical function
    (subject > object > other); fall back to proximity."""
    analysis = state.analysis
    prev = [c for c in kept if c.distance == 1]
    if prev:
        def rank_key(cand: Candidate):
            given = 0 if cand.repetition > 1 else 1
            fn = resolver._candidate_function(analysis, cand.mention)
            fn_rank = {SUBJ: 0, COMPL: 1}.get(fn, 2)
            return (given, fn_rank, cand.mention.head_index, cand.eid)
        prev_sorted = sorted(prev, key=rank_key)
        rest = _proximity_sorted([c for c in kept if c.distance != 1])
        return prev_sorted + rest, ["baseline:centering"]
    return _proximity_sorted(kept), ["baseline:centering"]


def resolve_baseline(baseline_id: str, doc: Document,
                     config: ResolverConfig | None = None,
                     analysis: DocumentAnalysis | None = None,
                     salience_weights: dict | None = None):
    """Run a full document resolution with the given baseline strategy."""
    if baseline_id == AGIR:
        return resolver.resolve_document(doc, config, analysis)
    if baseline_id == PROXIMITY:
        select = _proximity_select
    elif baseline_id == LINEAR_SEARCH:
        select = _linear_select
    elif baseline_id == SALIENCE:
        select = _salience_select(salience_weights or DEFAULT_SALIENCE_WEIGHTS)
    elif baseline_id == CENTERING:
        select = _centering_select
    else:
        raise BaselineError("unknown baseline %r" % baseline_id)
    return resolver.resolve_document(doc, config, analysis, select=select)


def load_salience_weights(lines) -> dict:
    """`factor<TAB or space>weight` lines for the salience baseline."""
    if isinstance(lines, str):
        lines = lines.splitlines()
    weights = dict(DEFAULT_SALIENCE_WEIGHTS)
    for lineno, raw in enumerate(lines, start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if len(parts) != 2 or parts[0] not in DEFAULT_SALIENCE_WEIGHTS:
            raise BaselineError("weights line %d: bad entry %r" % (lineno, line))
        weights[parts[0]] = float(parts[1])
    return weights
