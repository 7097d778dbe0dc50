"""Batch front end: parse -> chunk -> detect-zero -> resolve -> interlingua
-> translate -> evaluate/compare, with JSON-lines artifacts between stages.

Every stage re-derives what it needs deterministically from the tagged input
plus (optionally) the previous stage's artifact, so running `translate` in
one go and running the stages separately produce byte-identical output.
"""

from __future__ import annotations

import argparse
import json
import multiprocessing
import sys
from dataclasses import dataclass
from pathlib import Path

import anaforo

from . import baselines, corpus, evaluation, generator, interlingua, resolver
from .chunker import GrammarConfig, default_grammar, load_grammar
from .config import data_path
from .corpus import CorpusError, Document
from .generator import GeneratorError
from .interlingua import InterlinguaError
from .resolver import ResolverConfig, ResolverConfigError
from .zero_pronoun import ZeroPronoun, load_impersonal_lemmas

STAGES = ("chunk", "detect-zero", "resolve", "interlingua", "translate",
          "evaluate", "compare")

_DATA_ERRORS = (CorpusError, GeneratorError, InterlinguaError,
                ResolverConfigError, evaluation.EvalError,
                baselines.BaselineError, OSError, ValueError)


@dataclass
class RunConfig:
    lang_pair: str | None = None
    grammar: GrammarConfig | None = None
    lexicon_es: corpus.SemanticLexicon | None = None
    lexicon_en: corpus.SemanticLexicon | None = None
    dictionary: corpus.BilingualDictionary | None = None
    rule_table: tuple | None = None
    patterns: resolver.PleonasticPatterns | None = None
    impersonal: frozenset | None = None
    algo: str = baselines.AGIR
    semantics: bool = False
    window: int = 4
    drop_spanish_subjects: bool = False
    preference_orders: dict | None = None

    def resolver_config(self) -> ResolverConfig:
        return ResolverConfig(window=self.window, semantics=self.semantics,
                              preference_orders=self.preference_orders or {})


def load_preference_orders(lines) -> dict:
    """`es zero: z2 z1 a b c d e` lines, one per (language, anaphor kind)."""
    if isinstance(lines, str):
        lines = lines.splitlines()
    orders = {}
    for lineno, raw in enumerate(lines, start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if ":" not in line:
            raise ResolverConfigError("prefs line %d: missing ':'" % lineno)
        left, right = line.split(":", 1)
        parts = left.split()
        if len(parts) != 2:
            raise ResolverConfigError("prefs line %d: expected 'lang kind:'" % lineno)
        lang, kind = parts[0].upper(), parts[1].lower()
        orders[(lang, kind)] = tuple(right.split())
    return orders


def _load_doc(path: str, cfg: RunConfig) -> Document:
    doc = corpus.parse_document(Path(path).read_text(encoding="utf-8"))
    lexicon = cfg.lexicon_es if doc.lang == "ES" else cfg.lexicon_en
    if lexicon is not None:
        doc = corpus.apply_semantic_lexicon(doc, lexicon)
    return doc


def _analyze(doc: Document, cfg: RunConfig):
    return resolver.analyze_document(
        doc, grammar=cfg.grammar, impersonal_lemmas=cfg.impersonal,
        patterns=cfg.patterns)


def _jsonl(records) -> str:
    return "".join(json.dumps(r, sort_keys=True, ensure_ascii=False) + "\n"
                   for r in records)


# ---------------------------------------------------------------------------
# stages
# ---------------------------------------------------------------------------

def stage_chunk(doc: Document, cfg: RunConfig, args) -> str:
    analysis = _analyze(doc, cfg)
    return _jsonl(ss.to_dict() for ss in analysis.sent_structures)


def stage_detect_zero(doc: Document, cfg: RunConfig, args) -> str:
    analysis = _analyze(doc, cfg)
    records = []
    for clause, status in zip(analysis.clauses, analysis.statuses):
        if status is None:
            continue
        records.append({"sid": clause.sid, "verb": status.verb_index,
                        "person": status.verb_person, "status": status.status})
    for zp in analysis.zeros:
        records.append({"zero": zp.zid, "sid": zp.sid, "verb": zp.verb_index,
                        "insert": zp.insert_pos, "person": zp.person,
                        "number": zp.number, "gender": zp.gender})
    return _jsonl(records)


def _load_zero_artifact(path: str):
    zeros = []
    for line in Path(path).read_text(encoding="utf-8").splitlines():
        if not line.strip():
            continue
        rec = json.loads(line)
        if "zero" not in rec:
            continue
        zeros.append(ZeroPronoun(
            zid=rec["zero"], sid=rec["sid"], verb_index=rec["verb"],
            insert_pos=rec["insert"], person=rec["person"],
            number=rec["number"], gender=rec["gender"]))
    return zeros


def _resolutions(doc: Document, cfg: RunConfig, args):
    analysis = _analyze(doc, cfg)
    if getattr(args, "zeros", None):
        analysis.zeros = _load_zero_artifact(args.zeros)
    return analysis, baselines.resolve_baseline(
        cfg.algo, doc, cfg.resolver_config(), analysis)


def stage_resolve(doc: Document, cfg: RunConfig, args) -> str:
    _, (resolutions, _) = _resolutions(doc, cfg, args)
    return _jsonl(r.to_record() for r in resolutions)


def _interlingua_text(doc: Document, cfg: RunConfig, args, doc_id: str):
    analysis, (resolutions, chains) = _resolutions(doc, cfg, args)
    return interlingua.build_interlingua(doc, analysis, resolutions, chains,
                                         doc_id=doc_id)


def stage_interlingua(doc: Document, cfg: RunConfig, args, doc_id="doc") -> str:
    ir = _interlingua_text(doc, cfg, args, doc_id)
    return interlingua.serialize(ir).decode("utf-8") + "\n"


def stage_translate(doc: Document, cfg: RunConfig, args, doc_id="doc") -> str:
    if getattr(args, "ir", None):
        ir = interlingua.deserialize(Path(args.ir).read_bytes())
    else:
        ir = _interlingua_text(doc, cfg, args, doc_id)
    if cfg.lang_pair is not None:
        source = cfg.lang_pair.split("-")[0]
        if source != ir.lang:
            raise CorpusError("document language %s does not match --lang-pair %s"
                              % (ir.lang, cfg.lang_pair))
    translations = generator.translate_document(
        ir, cfg.dictionary, cfg.rule_table,
        drop_spanish_subjects=cfg.drop_spanish_subjects)
    return _jsonl(t.to_record() for t in translations)


def stage_evaluate(doc: Document, cfg: RunConfig, args) -> tuple:
    analysis, (resolutions, chains) = _resolutions(doc, cfg, args)
    gold = corpus.load_gold(Path(args.gold).read_text(encoding="utf-8"), doc)
    score = evaluation.score_resolutions(resolutions, chains, gold)
    report = {
        "resolution": {
            "correct": score.overall.correct,
            "attempted": score.overall.attempted,
            "total_real": score.overall.total_real,
            "precision": evaluation.format_pct(score.overall.precision),
            "recall": evaluation.format_pct(score.overall.recall),
            "by_kind": {k: {"correct": m.correct, "attempted": m.attempted,
                            "precision": evaluation.format_pct(m.precision)}
                        for k, m in sorted(score.by_kind.items())},
            "by_function": {k: {"correct": m.correct, "attempted": m.attempted,
                                "precision": evaluation.format_pct(m.precision)}
                            for k, m in sorted(score.by_function.items())},
        }
    }
    if doc.lang == "ES":
        det = evaluation.score_detection(analysis, gold)
        report["detection"] = {
            "correct": det.overall.correct,
            "attempted": det.overall.attempted,
            "precision": evaluation.format_pct(det.overall.precision),
            "cells": {"%s/%s" % cell: {
                "correct": m.correct, "attempted": m.attempted,
                "precision": evaluation.format_pct(m.precision)}
                for cell, m in sorted(det.cells.items())},
        }
    if cfg.dictionary is not None and any(
            rec.target_pronoun not in (None, "-") for rec in gold.records):
        ir = interlingua.build_interlingua(doc, analysis, resolutions, chains)
        translations = generator.translate_document(
            ir, cfg.dictionary, cfg.rule_table,
            drop_spanish_subjects=cfg.drop_spanish_subjects)
        tm = evaluation.score_translations(translations, gold)
        report["translation"] = {
            "correct": tm.correct, "attempted": tm.attempted,
            "total_real": tm.total_real,
            "precision": evaluation.format_pct(tm.precision),
            "recall": evaluation.format_pct(tm.recall),
        }
    out = json.dumps(report, sort_keys=True, ensure_ascii=False, indent=2) + "\n"
    failed = (args.min_precision is not None
              and (score.overall.precision is None
                   or score.overall.precision * 100.0 < args.min_precision))
    return out, failed


def stage_compare(doc: Document, cfg: RunConfig, args) -> str:
    algos = [a.strip().upper() for a in args.algo.split(",") if a.strip()]
    name_map = {"AGIR": baselines.AGIR, "PROXIMITY": baselines.PROXIMITY,
                "LINEAR": baselines.LINEAR_SEARCH,
                "LINEAR_SEARCH": baselines.LINEAR_SEARCH,
                "SALIENCE": baselines.SALIENCE,
                "CENTERING": baselines.CENTERING}
    try:
        algos = [name_map[a] for a in algos]
    except KeyError as exc:
        raise baselines.BaselineError("unknown algorithm %s" % exc) from None
    gold = corpus.load_gold(Path(args.gold).read_text(encoding="utf-8"), doc)
    rows = evaluation.compare(algos, doc, gold, cfg.resolver_config())
    if args.format == "json":
        return _jsonl({"algorithm": r.algorithm,
                       "correct": r.metric.correct,
                       "attempted": r.metric.attempted,
                       "precision": evaluation.format_pct(r.metric.precision),
                       "wins": r.wins, "losses": r.losses}
                      for r in rows)
    return evaluation.render_comparison(rows) + "\n"


# ---------------------------------------------------------------------------
# argument handling
# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="anaforo",
        description="pronominal anaphora resolution and pronoun translation")
    parser.add_argument("--version", action="version",
                        version="anaforo %s (rule table v%d)"
                        % (anaforo.__version__, anaforo.RULE_TABLE_VERSION))
    sub = parser.add_subparsers(dest="command", required=True)
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--in", dest="inputs", nargs="+", required=True,
                        metavar="FILE", help="tagged-text input file(s)")
    common.add_argument("--out", default=None, help="output path (default stdout)")
    common.add_argument("--grammar", default=None)
    common.add_argument("--lexicon", default=None,
                        help="semantic lexicon (overrides the packaged one)")
    common.add_argument("--impersonal", default=None,
                        help="impersonal verb lemma list (Spanish)")
    common.add_argument("--patterns", default=None,
                        help="pleonastic it pattern file (English)")
    common.add_argument("--prefs", default=None,
                        help="preference-order overrides file")
    common.add_argument("--semantics", action="store_true",
                        help="enable semantic-category constraints")
    common.add_argument("--window", type=int, default=4)
    common.add_argument("--algo", default="agir",
                        help="agir|proximity|linear|salience|centering")
    common.add_argument("--jobs", type=int, default=1)

    sub.add_parser("chunk", parents=[common])
    sub.add_parser("detect-zero", parents=[common])
    p = sub.add_parser("resolve", parents=[common])
    p.add_argument("--zeros", default=None, help="detect-zero artifact to reuse")
    p = sub.add_parser("interlingua", parents=[common])
    p.add_argument("--zeros", default=None)
    p = sub.add_parser("translate", parents=[common])
    p.add_argument("--zeros", default=None)
    p.add_argument("--ir", default=None, help="interlingua artifact to reuse")
    p.add_argument("--dict", dest="dictionary", default=None)
    p.add_argument("--rules", default=None, help="morphological rule table file")
    p.add_argument("--lang-pair", default=None, choices=("ES-EN", "EN-ES"))
    p.add_argument("--drop-subjects", action="store_true",
                   help="emit Spanish subject pronouns as zeros")
    p = sub.add_parser("evaluate", parents=[common])
    p.add_argument("--gold", required=True)
    p.add_argument("--zeros", default=None)
    p.add_argument("--dict", dest="dictionary", default=None)
    p.add_argument("--rules", default=None)
    p.add_argument("--min-precision", type=float, default=None)
    p = sub.add_parser("compare", parents=[common])
    p.add_argument("--gold", required=True)
    p.add_argument("--format", default="text", choices=("text", "json"))
    return parser


def _build_config(args) -> RunConfig:
    cfg = RunConfig()
    cfg.window = args.window
    cfg.semantics = args.semantics
    algo_map = {"agir": baselines.AGIR, "proximity": baselines.PROXIMITY,
                "linear": baselines.LINEAR_SEARCH,
                "salience": baselines.SALIENCE,
                "centering": baselines.CENTERING}
    if args.algo.lower() not in algo_map:
        raise baselines.BaselineError("unknown algorithm %r" % args.algo)
    cfg.algo = algo_map[args.algo.lower()]
    cfg.grammar = load_grammar(Path(args.grammar).read_text(encoding="utf-8")) \
        if args.grammar else default_grammar()
    if args.lexicon:
        lex = corpus.load_lexicon(Path(args.lexicon).read_text(encoding="utf-8"))
        cfg.lexicon_es = cfg.lexicon_en = lex
    else:
        for lang, attr in (("es", "lexicon_es"), ("en", "lexicon_en")):
            path = data_path("lexicon_%s.tsv" % lang)
            if path.exists():
                setattr(cfg, attr, corpus.load_lexicon(
                    path.read_text(encoding="utf-8")))
    if args.impersonal:
        cfg.impersonal = load_impersonal_lemmas(
            Path(args.impersonal).read_text(encoding="utf-8"))
    if args.patterns:
        cfg.patterns = resolver.load_pleonastic_patterns(
            Path(args.patterns).read_text(encoding="utf-8"))
    if args.prefs:
        cfg.preference_orders = load_preference_orders(
            Path(args.prefs).read_text(encoding="utf-8"))
    if getattr(args, "dictionary", None):
        cfg.dictionary = corpus.load_dictionary(
            Path(args.dictionary).read_text(encoding="utf-8"))
    elif args.command in ("translate", "evaluate"):
        path = data_path("dictionary.tsv")
        if path.exists():
            cfg.dictionary = corpus.load_dictionary(
                path.read_text(encoding="utf-8"))
    if getattr(args, "rules", None):
        cfg.rule_table = generator.load_rule_table(
            Path(args.rules).read_text(encoding="utf-8"))
    cfg.lang_pair = getattr(args, "lang_pair", None)
    cfg.drop_spanish_subjects = getattr(args, "drop_subjects", False)
    return cfg


def _run_one(command: str, path: str, cfg: RunConfig, args):
    doc = _load_doc(path, cfg)
    doc_id = Path(path).stem
    if command == "chunk":
        return stage_chunk(doc, cfg, args)
    if command == "detect-zero":
        return stage_detect_zero(doc, cfg, args)
    if command == "resolve":
        return stage_resolve(doc, cfg, args)
    if command == "interlingua":
        return stage_interlingua(doc, cfg, args, doc_id)
    if command == "translate":
        return stage_translate(doc, cfg, args, doc_id)
    raise ValueError("bad stage %r" % command)


def _worker(payload):
    command, path, argv = payload
    args = build_parser().parse_args(argv)
    cfg = _build_config(args)
    return _run_one(command, path, cfg, args)


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = _build_config(args)
        if args.command == "evaluate":
            doc = _load_doc(args.inputs[0], cfg)
            out, failed = stage_evaluate(doc, cfg, args)
            _emit(out, args.out)
            return 1 if failed else 0
        if args.command == "compare":
            doc = _load_doc(args.inputs[0], cfg)
            _emit(stage_compare(doc, cfg, args), args.out)
            return 0
        if args.jobs > 1 and len(args.inputs) > 1:
            base_argv = list(argv if argv is not None else sys.argv[1:])
            payloads = []
            for path in args.inputs:
                sub_argv = _argv_for_single(base_argv, args.inputs, path)
                payloads.append((args.command, path, sub_argv))
            with multiprocessing.Pool(args.jobs) as pool:
                pieces = pool.map(_worker, payloads)
        else:
            pieces = [_run_one(args.command, path, cfg, args)
                      for path in args.inputs]
        _emit("".join(pieces), args.out)
        return 0
    except _DATA_ERRORS as exc:
        sys.stderr.write(json.dumps(
            {"error": type(exc).__name__, "message": str(exc)},
            ensure_ascii=False) + "\n")
        return 1


def _argv_for_single(base_argv, inputs, path):
    """Rewrite the --in list down to one file for a worker process."""
    out = []
    skip = False
    i = 0
    while i < len(base_argv):
        token = base_argv[i]
        if token == "--in":
            out.extend(["--in", path])
            i += 1
            while i < len(base_argv) and base_argv[i] in inputs:
                i += 1
            continue
        out.append(token)
        i += 1
    return out


def _emit(text: str, out_path: str | None):
    if out_path:
        Path(out_path).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


if __name__ == "__main__":
    sys.exit(main())
