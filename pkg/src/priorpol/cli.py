"""Command line front end.

Exit codes: 0 on success, 1 on I/O or data errors, 2 on usage errors.
Tables go to stdout; alignment statistics and other diagnostics to stderr.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys

from . import evaluation as ev
from .formulae import (
    AGGREGATORS, FAMILIES, FORMULAS, FormulaError, RandomStream, check_formula,
    is_tie, prior_polarity,
)
from .gold_alignment import GoldError, align, read_gold
from .lemmatizer import default_exceptions, merge_exceptions, read_exceptions
from .significance import CLASS_METRICS, SignificanceError, compare_reports
from .swn_lexicon import LexiconError, export_prior_lexicon, export_raw, read_swn

log = logging.getLogger("priorpol")

DATA_ERRORS = (OSError, LexiconError, GoldError, ev.EvaluationError, SignificanceError,
               FormulaError, UnicodeDecodeError)


class UsageError(Exception):
    pass


def formula_arg(text: str) -> str:
    try:
        return check_formula(text.strip())
    except FormulaError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def formula_list(text: str) -> list[str]:
    if text.strip() == "all":
        return list(FORMULAS)
    names = [t for t in text.replace(",", " ").split() if t]
    if not names:
        raise argparse.ArgumentTypeError("empty formula list")
    return [formula_arg(t) for t in names]


def _common(p: argparse.ArgumentParser, gold: bool = True):
    p.add_argument("--swn", required=True, metavar="PATH", help="SentiWordNet-format file")
    if gold:
        p.add_argument("--gold", required=True, metavar="PATH",
                       help="gold CSV with word,valence_mean,valence_sd columns")
        p.add_argument("--exceptions", metavar="PATH",
                       help="extra inflected<TAB>lemma table, tried before the built-in one")
        p.add_argument("--subset", choices=("all", "affective"), default="all")
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("--strict", action="store_true", help="fail on malformed SWN lines")
    p.add_argument("-v", "--verbose", action="store_true")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="priorpol", description="Prior polarity scores from SentiWordNet and their evaluation.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("score", help="score every lemma#pos with one formula")
    _common(p, gold=False)
    p.add_argument("--formula", required=True, type=formula_arg)

    p = sub.add_parser("export", help="multi-formula lexicon table, or the normalised sense index")
    _common(p, gold=False)
    p.add_argument("--formulas", type=formula_list, default=list(FORMULAS))
    p.add_argument("--raw", action="store_true", help="write the sense index in SWN format")

    p = sub.add_parser("evaluate", help="MAE / success / s-over-e table")
    _common(p)
    p.add_argument("--formulas", type=formula_list, default=list(FORMULAS))
    p.add_argument("--output", choices=("tsv", "json"), default="tsv")

    p = sub.add_parser("classify", help="precision / recall / F1 on the pos/neg task")
    _common(p)
    p.add_argument("--output", choices=("tsv", "json"), default="tsv")

    p = sub.add_parser("significance", help="compare two systems")
    _common(p)
    p.add_argument("--a", required=True, help="formula id, or family/cc for classification metrics")
    p.add_argument("--b", required=True)
    p.add_argument("--metric", required=True, choices=("mae", "success") + CLASS_METRICS)
    p.add_argument("--seed-b", type=int, help="seed for system b (default: --seed)")
    p.add_argument("--iterations", type=int, default=10_000)

    p = sub.add_parser("align-report", help="show how gold words map to lemma#pos keys")
    _common(p)
    p.add_argument("--output", choices=("tsv", "json"), default="tsv")
    return parser


def _system(name: str, metric: str) -> str:
    """Validate a significance system name against the metric."""
    if metric in ("mae", "success"):
        if name not in FORMULAS:
            raise UsageError(f"metric {metric} compares formula ids; {name!r} is not one")
        return name
    family = name.rpartition("_")[0] if name.rpartition("_")[0] in FAMILIES else name
    if family not in FAMILIES and family != "cc":
        raise UsageError(f"metric {metric} compares formula families or cc; {name!r} is not one")
    return family


def _load(args):
    lexicon = read_swn(args.swn, strict=args.strict)
    log.info("lexicon: %d entries, %d lemma#pos", lexicon.entry_count, lexicon.lemma_pos_count)
    if not hasattr(args, "gold"):
        return lexicon, None
    exceptions = default_exceptions()
    if args.exceptions:
        exceptions = merge_exceptions(read_exceptions(args.exceptions), exceptions)
    gold = read_gold(args.gold)
    dataset = align(gold, lexicon, exceptions)
    print(f"alignment: words read {dataset.source_word_count}, aligned {dataset.lemma_count}, "
          f"dropped {len(dataset.dropped)}, lemma#pos {dataset.lemma_pos_count}", file=sys.stderr)
    for word, reason in dataset.dropped:
        log.info("dropped %s (%s)", word, reason)
    if args.subset == "affective":
        before = len(dataset)
        dataset = ev.filter_affective(dataset, lexicon)
        print(f"affective subset: {len(dataset)} of {before} lemma#pos", file=sys.stderr)
    if not dataset.items:
        raise ev.EvaluationError("nothing aligned")
    return lexicon, dataset


def _report_ties(dataset, lexicon):
    for family, agg in AGGREGATORS.items():
        n = sum(is_tie(agg(lexicon.lookup(it.key))) for it in dataset.items)
        if n:
            print(f"ties: {family}_m resolved {n} pos=neg tie(s) as positive", file=sys.stderr)


def cmd_score(args, out):
    for row in export_prior_lexicon(read_swn(args.swn, strict=args.strict), args.formula, args.seed):
        out.write(row)


def cmd_export(args, out):
    lexicon = read_swn(args.swn, strict=args.strict)
    if args.raw:
        out.writelines(export_raw(lexicon))
        return
    stream = RandomStream(args.seed)
    out.write("key\t" + "\t".join(args.formulas) + "\n")
    for key in lexicon:
        senses = lexicon.index[key]
        scores = (prior_polarity(f, senses, key, stream) + 0.0 for f in args.formulas)
        out.write(f"{key}\t" + "\t".join(f"{s:.6f}" for s in scores) + "\n")


def cmd_evaluate(args, out):
    lexicon, dataset = _load(args)
    _report_ties(dataset, lexicon)
    reports = ev.evaluate_formulae(dataset, lexicon, args.formulas, args.seed, args.subset)
    out.write(ev.to_json(reports) + "\n" if args.output == "json" else ev.regression_table(reports))


def cmd_classify(args, out):
    lexicon, dataset = _load(args)
    n_neutral = sum(not it.gold.has_sign for it in dataset.items)
    if n_neutral:
        print(f"classification: skipped {n_neutral} lemma#pos with neutral gold valence", file=sys.stderr)
    reports = ev.classify_formulae(dataset, lexicon, args.seed)
    out.write(ev.to_json(reports) + "\n" if args.output == "json" else ev.classification_table(reports))


def cmd_significance(args, out):
    a, b = _system(args.a, args.metric), _system(args.b, args.metric)
    seed_b = args.seed if args.seed_b is None else args.seed_b
    if a == b and seed_b == args.seed:
        raise UsageError("identical systems")
    lexicon, dataset = _load(args)

    def one(name, seed):
        if args.metric in ("mae", "success"):
            return ev.evaluate_formulae(dataset, lexicon, [name], seed)[0]
        fams = [name] if name != "cc" else []
        reports = ev.classify_formulae(dataset, lexicon, seed, families=fams, committee=name == "cc")
        return reports[0]

    res = compare_reports(one(a, args.seed), one(b, seed_b), args.metric, args.iterations, args.seed)
    out.write(f"{args.a}\t{args.b}\t{args.metric}\t{res}\n")


def cmd_align_report(args, out):
    _, dataset = _load(args)
    if args.output == "json":
        payload = {
            "source_word_count": dataset.source_word_count,
            "lemma_count": dataset.lemma_count,
            "lemma_pos_count": dataset.lemma_pos_count,
            "dropped": [{"word": w, "reason": r} for w, r in dataset.dropped],
            "items": [{"key": str(it.key), "word": it.gold.word, "valence_mu": it.gold.valence_mu,
                       "valence_sigma": it.gold.valence_sigma} for it in dataset.items],
        }
        out.write(json.dumps(payload, indent=2) + "\n")
        return
    out.write("key\tword\tvalence_mu\tvalence_sigma\n")
    for it in dataset.items:
        out.write(f"{it.key}\t{it.gold.word}\t{it.gold.valence_mu:.4f}\t{it.gold.valence_sigma:.4f}\n")


COMMANDS = {
    "score": cmd_score,
    "export": cmd_export,
    "evaluate": cmd_evaluate,
    "classify": cmd_classify,
    "significance": cmd_significance,
    "align-report": cmd_align_report,
}


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else 2
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s: %(message)s", stream=sys.stderr)
    try:
        COMMANDS[args.command](args, out)
    except UsageError as exc:
        print(f"priorpol: error: {exc}", file=sys.stderr)
        return 2
    except DATA_ERRORS as exc:
        print(f"priorpol: error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
