"""Scoring: precision/recall metrics, kappa agreement, detection tallies and
multi-algorithm comparison reports.

Precision is correct/attempted and recall correct/total-real, both guarded
when the denominator is zero.  A resolution counts as correct when the
chosen entity's coreference chain covers the gold antecedent span; zero
pronouns whose gold record is cataphoric or exophoric are excluded from
both scoring denominators.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from . import baselines, resolver
from .corpus import AnnotationRecord, GoldAnnotations
from .resolver import DocumentAnalysis, ResolverConfig, Resolution
from .zero_pronoun import ANAPHORIC, CATAPHORIC, EXOPHORIC, SUBJECT_OMITTED


class EvalError(ValueError):
    pass


@dataclass(frozen=True)
class Metric:
    correct: int = 0
    attempted: int = 0
    total_real: int = 0

    @property
    def precision(self):
        if self.attempted == 0:
            return None
        return self.correct / self.attempted

    @property
    def recall(self):
        if self.total_real == 0:
            return None
        return self.correct / self.total_real

    def add(self, correct: bool, attempted: bool = True,
            real: bool = True) -> "Metric":
        return Metric(self.correct + (1 if correct else 0),
                      self.attempted + (1 if attempted else 0),
                      self.total_real + (1 if real else 0))


def format_pct(value) -> str:
    """One-decimal percentage, NONE when undefined (485/596 -> '81.4')."""
    if value is None:
        return "NONE"
    return "%.1f" % (value * 100.0)


# ---------------------------------------------------------------------------
# gold taxonomy
# ---------------------------------------------------------------------------

def gold_taxonomy(record: AnnotationRecord) -> str:
    """Anaphoric / cataphoric / exophoric from the gold record geometry:
    no antecedent = exophoric, antecedent after the pronoun = cataphoric."""
    if record.antecedent is None:
        return EXOPHORIC
    ante, pron = record.antecedent, record.pronoun
    if ante.sid > pron.sid or (ante.sid == pron.sid and ante.start > pron.index):
        return CATAPHORIC
    return ANAPHORIC


_MENTION_RE = re.compile(r"^s(\d+)\.(t|z)(\d+)(?:\.\.t(\d+))?$")


def _mention_span(key: str):
    m = _MENTION_RE.match(key)
    if not m:
        return None
    sid, kind, a = int(m.group(1)), m.group(2), int(m.group(3))
    if kind == "z":
        return None
    b = int(m.group(4)) if m.group(4) else a
    return sid, a, b


def _chain_covers(chains: dict, eid: int, gold_span) -> bool:
    for key in chains.get(eid, ()):
        span = _mention_span(key)
        if span is None:
            continue
        sid, a, b = span
        if sid == gold_span.sid and a <= gold_span.end and gold_span.start <= b:
            return True
    return False


# ---------------------------------------------------------------------------
# resolution scoring
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ResolutionScore:
    overall: Metric
    by_kind: dict
    by_function: dict


def score_resolutions(resolutions, chains: dict,
                      gold: GoldAnnotations) -> ResolutionScore:
    """Score resolved anaphors against gold antecedents (chain membership)."""
    gold_by_key = gold.by_pronoun()
    overall = Metric()
    by_kind: dict[str, Metric] = {}
    by_function: dict[str, Metric] = {}
    scored_keys = set()
    for res in resolutions:
        key = res.anaphor.aid
        rec = gold_by_key.get(key)
        if rec is not None and gold_taxonomy(rec) != ANAPHORIC:
            continue  # the paper does not resolve cataphoric/exophoric zeros
        scored_keys.add(key)
        attempted = res.chosen is not None
        correct = bool(attempted and rec is not None and rec.antecedent is not None
                       and _chain_covers(chains, res.chosen, rec.antecedent))
        real = rec is not None
        overall = overall.add(correct, attempted, real)
        by_kind[res.anaphor.kind] = by_kind.get(res.anaphor.kind, Metric()).add(
            correct, attempted, real)
        by_function[res.anaphor.function] = by_function.get(
            res.anaphor.function, Metric()).add(correct, attempted, real)
    # gold anaphors the system never attempted still count toward recall
    for key, rec in gold_by_key.items():
        if key in scored_keys or gold_taxonomy(rec) != ANAPHORIC:
            continue
        overall = overall.add(False, attempted=False, real=True)
    return ResolutionScore(overall=overall, by_kind=by_kind,
                           by_function=by_function)


# ---------------------------------------------------------------------------
# detection scoring (subject omitted or not, per verb person)
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class DetectionScore:
    overall: Metric
    cells: dict     # (person, "omitted"|"not_omitted") -> Metric


def score_detection(analysis: DocumentAnalysis,
                    gold: GoldAnnotations) -> DetectionScore:
    """Verb-classification tally: every clause verb is one attempt; gold
    truth is 'omitted' exactly when a gold zero record names the verb."""
    gold_zero = {(rec.pronoun.sid, rec.pronoun.index)
                 for rec in gold.records if rec.pronoun.is_zero}
    overall = Metric()
    cells: dict[tuple, Metric] = {}
    for clause, status in zip(analysis.clauses, analysis.statuses):
        if status is None:
            continue
        predicted_omitted = status.status == SUBJECT_OMITTED
        truly_omitted = (clause.sid, clause.verb_index) in gold_zero
        correct = predicted_omitted == truly_omitted
        person = status.verb_person if status.verb_person is not None else 0
        cell = (person, "omitted" if predicted_omitted else "not_omitted")
        cells[cell] = cells.get(cell, Metric()).add(correct)
        overall = overall.add(correct)
    return DetectionScore(overall=overall, cells=cells)


# ---------------------------------------------------------------------------
# translation scoring
# ---------------------------------------------------------------------------

def score_translations(translations, gold: GoldAnnotations) -> Metric:
    """Exact-match scoring of proposed target pronouns (∅ matches ∅)."""
    gold_by_key = gold.by_pronoun()
    metric = Metric()
    scored = set()
    for tr in translations:
        rec = gold_by_key.get(tr.anaphor_id)
        if rec is None or rec.target_pronoun in (None, "-"):
            continue
        if gold_taxonomy(rec) != ANAPHORIC:
            continue
        scored.add(tr.anaphor_id)
        metric = metric.add(tr.target == rec.target_pronoun)
    for key, rec in gold_by_key.items():
        if key in scored or rec.target_pronoun in (None, "-"):
            continue
        if gold_taxonomy(rec) != ANAPHORIC:
            continue
        metric = metric.add(False, attempted=False, real=True)
    return metric


# ---------------------------------------------------------------------------
# kappa
# ---------------------------------------------------------------------------

def kappa(labels_a, labels_b) -> float:
    """Cohen's kappa over two equal-length label sequences.

    k = (Po - Pe) / (1 - Pe); perfect observed agreement is 1.0 by
    convention even when chance agreement is also 1.
    """
    a = list(labels_a)
    b = list(labels_b)
    if not a or len(a) != len(b):
        raise EvalError("kappa needs two nonempty label lists of equal length")
    n = len(a)
    po = sum(1 for x, y in zip(a, b) if x == y) / n
    if po == 1.0:
        return 1.0
    labels = set(a) | set(b)
    pe = sum((a.count(l) / n) * (b.count(l) / n) for l in labels)
    return (po - pe) / (1.0 - pe)


# ---------------------------------------------------------------------------
# algorithm comparison
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ComparisonRow:
    algorithm: str
    metric: Metric
    wins: int
    losses: int


def compare(algorithms, doc, gold: GoldAnnotations,
            config: ResolverConfig | None = None,
            analysis: DocumentAnalysis | None = None):
    """Run each algorithm on identical inputs and score them side by side.

    Wins/losses are per anaphor: a win is a correct answer on an anaphor at
    least one other algorithm missed, a loss the reverse; both are invariant
    under permutations of the algorithm list.
    """
    if analysis is None:
        analysis = resolver.analyze_document(doc)
    gold_by_key = gold.by_pronoun()
    correctness: dict[str, dict] = {}
    metrics: dict[str, Metric] = {}
    for algo in algorithms:
        resolutions, chains = baselines.resolve_baseline(
            algo, doc, config, analysis)
        metrics[algo] = score_resolutions(resolutions, chains, gold).overall
        per = {}
        for res in resolutions:
            rec = gold_by_key.get(res.anaphor.aid)
            if rec is None or gold_taxonomy(rec) != ANAPHORIC:
                continue
            per[res.anaphor.aid] = bool(
                res.chosen is not None and rec.antecedent is not None
                and _chain_covers(chains, res.chosen, rec.antecedent))
        correctness[algo] = per
    all_keys = sorted(set().union(*correctness.values()) if correctness else ())
    rows = []
    for algo in sorted(set(algorithms)):
        wins = losses = 0
        for key in all_keys:
            mine = correctness[algo].get(key, False)
            others = [correctness[o].get(key, False)
                      for o in correctness if o != algo]
            if mine and others and not all(others):
                wins += 1
            if not mine and any(others):
                losses += 1
        rows.append(ComparisonRow(algorithm=algo, metric=metrics[algo],
                                  wins=wins, losses=losses))
    return rows


def render_comparison(rows) -> str:
    header = "%-12s %8s %9s %6s %5s %6s" % (
        "algorithm", "correct", "attempted", "P(%)", "wins", "losses")
    lines = [header]
    for row in rows:
        lines.append("%-12s %8d %9d %6s %5d %6d" % (
            row.algorithm, row.metric.correct, row.metric.attempted,
            format_pct(row.metric.precision), row.wins, row.losses))
    return "\n".join(lines)
