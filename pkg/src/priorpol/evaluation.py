"""Regression and binary-classification evaluation of prior polarity formulae."""

from __future__ import annotations

import json
import math
from collections import Counter
from dataclasses import dataclass, field
from typing import Callable, Iterable, Sequence

from .formulae import (
    COMMITTEE_FAMILIES, FAMILIES, RandomStream, check_formula, family_formula,
    prior_polarity,
)
from .gold_alignment import AlignedDataset, AlignedItem
from .swn_lexicon import LemmaKey, Lexicon

POS, NEG, TIE = "pos", "neg", "tie"

# |error| this close to sigma/2 counts as on the boundary (not a success),
# so decimal inputs like (0.7, 0.3, 0.8) are not let in by rounding.
BOUNDARY_EPS = 1e-12

Scorer = Callable[[AlignedItem], float]


class EvaluationError(ValueError):
    pass


# -- regression metrics -------------------------------------------------------

def mae(rows: Iterable[tuple[float, float]]) -> float:
    errs = [abs(pred - mu) for pred, mu in rows]
    if not errs:
        raise EvaluationError("MAE of an empty list")
    return math.fsum(errs) / len(errs)


def is_success(pred: float, mu: float, sigma: float) -> bool:
    # strict: a zero sigma can never succeed
    return sigma > 0 and abs(pred - mu) < sigma / 2 - BOUNDARY_EPS


def success_rate(rows: Iterable[tuple[float, float, float]]) -> float:
    flags = [is_success(*r) for r in rows]
    if not flags:
        raise EvaluationError("success rate of an empty list")
    return sum(flags) / len(flags)


def s_over_e(success: float, mae_value: float) -> float:
    """success / MAE; infinite when the MAE is zero."""
    if mae_value == 0:
        return math.inf
    return success / mae_value


@dataclass(frozen=True)
class EvalRow:
    key: LemmaKey
    prediction: float
    gold_mu: float
    gold_sigma: float

    @property
    def abs_error(self) -> float:
        return abs(self.prediction - self.gold_mu)

    @property
    def zscore(self) -> float | None:
        if self.gold_sigma == 0:
            return None
        return (self.prediction - self.gold_mu) / self.gold_sigma

    @property
    def success(self) -> bool:
        return is_success(self.prediction, self.gold_mu, self.gold_sigma)

    def as_dict(self) -> dict:
        return {"key": str(self.key), "prediction": self.prediction, "gold_mu": self.gold_mu,
                "gold_sigma": self.gold_sigma, "abs_error": self.abs_error,
                "zscore": self.zscore, "success": self.success}


@dataclass(frozen=True)
class EvalReport:
    formula: str
    rows: tuple[EvalRow, ...]
    subset: str = "all"
    mae: float = field(init=False)
    success_rate: float = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "mae", mae((r.prediction, r.gold_mu) for r in self.rows))
        object.__setattr__(self, "success_rate", sum(r.success for r in self.rows) / len(self.rows))

    @property
    def s_over_e(self) -> float:
        return s_over_e(self.success_rate, self.mae)

    @property
    def successes(self) -> int:
        return sum(r.success for r in self.rows)

    def keys(self) -> tuple[LemmaKey, ...]:
        return tuple(r.key for r in self.rows)

    def as_dict(self) -> dict:
        return {"formula": self.formula, "subset": self.subset, "n": len(self.rows),
                "mae": self.mae, "success": self.success_rate,
                "s_over_e": None if math.isinf(self.s_over_e) else self.s_over_e,
                "rows": [r.as_dict() for r in self.rows]}


def filter_affective(dataset: AlignedDataset, lexicon: Lexicon) -> AlignedDataset:
    """Keep items whose senses carry at least one nonzero score."""
    kept = []
    for item in dataset.items:
        senses = lexicon.lookup(item.key)
        if senses is None:
            raise EvaluationError(f"{item.key} is not in the lexicon")
        if senses.is_affective():
            kept.append(item)
    return dataset.subset(kept)


def _scorer(formula: str, lexicon: Lexicon, stream: RandomStream) -> Scorer:
    check_formula(formula)

    def score(item: AlignedItem) -> float:
        return prior_polarity(formula, lexicon.lookup(item.key), item.key, stream)

    return score


def _report_order(report: EvalReport):
    return (-report.s_over_e, report.formula)


def evaluate_formulae(dataset: AlignedDataset, lexicon: Lexicon,
                      formulas: Sequence[str | tuple[str, Scorer]], seed: int = 42,
                      subset: str = "all") -> list[EvalReport]:
    """One report per formula over the same rows, best s/e first.

    A formula may also be given as ``(name, scorer)`` where ``scorer``
    maps an AlignedItem to a prediction.
    """
    if not formulas:
        raise EvaluationError("no formulas to evaluate")
    if not dataset.items:
        raise EvaluationError("empty dataset")
    stream = RandomStream(seed)
    reports = []
    for f in formulas:
        name, scorer = f if isinstance(f, tuple) else (f, _scorer(f, lexicon, stream))
        rows = tuple(EvalRow(it.key, scorer(it), it.gold.valence_mu, it.gold.valence_sigma)
                     for it in dataset.items)
        reports.append(EvalReport(name, rows, subset))
    return sorted(reports, key=_report_order)


def _fmt3(x: float) -> str:
    return "inf" if math.isinf(x) else f"{x:.3f}"


def regression_table(reports: Sequence[EvalReport]) -> str:
    """Tab-separated table: formulae as columns, MAE/success/s-over-e rows."""
    lines = ["metric\t" + "\t".join(r.formula for r in reports),
             "MAE\t" + "\t".join(_fmt3(r.mae) for r in reports),
             "success\t" + "\t".join(_fmt3(r.success_rate) for r in reports),
             "s/e\t" + "\t".join(_fmt3(r.s_over_e) for r in reports)]
    return "\n".join(lines) + "\n"


# -- classification -----------------------------------------------------------

def label(score: float) -> str:
    if score > 0:
        return POS
    if score < 0:
        return NEG
    return TIE


def classify_word(score: float, gold_mu: float) -> tuple[str, str]:
    """(predicted, actual) labels; zero gold has no sign and is rejected."""
    if gold_mu == 0:
        raise EvaluationError("gold valence is exactly neutral; exclude it before classifying")
    return label(score), label(gold_mu)


def committee_vote(votes: Sequence[str]) -> str:
    """Majority over non-tie votes of the six deterministic families.

    A split vote, including all abstentions, resolves to positive.
    """
    if len(votes) != len(COMMITTEE_FAMILIES):
        raise EvaluationError(f"committee expects {len(COMMITTEE_FAMILIES)} votes, got {len(votes)}")
    c = Counter(votes)
    return NEG if c[NEG] > c[POS] else POS


@dataclass(frozen=True)
class ClassReport:
    name: str
    precision: float
    recall: float
    f1: float
    # confusion[actual][predicted], predicted in pos/neg/tie
    confusion: dict
    predictions: tuple[tuple[str, str], ...] = field(default=(), repr=False)
    keys: tuple[LemmaKey, ...] = field(default=(), repr=False)
    per_class: dict = field(default_factory=dict, repr=False)

    def as_dict(self) -> dict:
        d = {"name": self.name, "precision": self.precision, "recall": self.recall,
             "f1": self.f1, "confusion": self.confusion, "per_class": self.per_class}
        if self.keys:
            d["rows"] = [{"key": str(k), "predicted": p, "actual": a}
                         for k, (p, a) in zip(self.keys, self.predictions)]
        return d


def _prf(tp: int, n_pred: int, n_true: int) -> tuple[float, float, float]:
    p = tp / n_pred if n_pred else 0.0
    r = tp / n_true
    f = 2 * p * r / (p + r) if p + r else 0.0
    return p, r, f


def classification_report(predictions: Sequence[tuple[str, str]], name: str = "",
                          keys: Sequence[LemmaKey] = ()) -> ClassReport:
    """Macro-averaged precision, recall and F1 over the pos and neg classes.

    Tie predictions are wrong for whichever class is true and are counted
    as a prediction of neither class.
    """
    if not predictions:
        raise EvaluationError("no predictions")
    confusion = {a: {POS: 0, NEG: 0, TIE: 0} for a in (POS, NEG)}
    for pred, actual in predictions:
        if actual not in (POS, NEG) or pred not in (POS, NEG, TIE):
            raise EvaluationError(f"bad label pair ({pred!r}, {actual!r})")
        confusion[actual][pred] += 1
    per_class = {}
    for cls in (POS, NEG):
        n_true = sum(confusion[cls].values())
        if n_true == 0:
            raise EvaluationError(f"no gold items of class {cls!r}; recall undefined")
        n_pred = confusion[POS][cls] + confusion[NEG][cls]
        per_class[cls] = dict(zip(("precision", "recall", "f1"), _prf(confusion[cls][cls], n_pred, n_true)))
    macro = {m: (per_class[POS][m] + per_class[NEG][m]) / 2 for m in ("precision", "recall", "f1")}
    return ClassReport(name, macro["precision"], macro["recall"], macro["f1"], confusion,
                       tuple(predictions), tuple(keys), per_class)


def metric_value(report: ClassReport, metric: str) -> float:
    if metric == "accuracy":
        c = report.confusion
        return (c[POS][POS] + c[NEG][NEG]) / len(report.predictions)
    return getattr(report, metric)


def classify_formulae(dataset: AlignedDataset, lexicon: Lexicon, seed: int = 42,
                      families: Sequence[str] = FAMILIES, committee: bool = True,
                      extra: Sequence[tuple[str, Scorer]] = ()) -> list[ClassReport]:
    """Binary pos/neg task over items with a signed gold valence, best F1 first."""
    items = [it for it in dataset.items if it.gold.has_sign]
    if not items:
        raise EvaluationError("no items with a signed gold valence")
    stream = RandomStream(seed)
    actual = [label(it.gold.valence_mu) for it in items]
    keys = tuple(it.key for it in items)

    labels: dict[str, list[str]] = {}
    for fam in families:
        scorer = _scorer(family_formula(fam), lexicon, stream)
        labels[fam] = [label(scorer(it)) for it in items]
    for name, scorer in extra:
        labels[name] = [label(scorer(it)) for it in items]
    if committee:
        voters = [labels.get(f) or [label(_scorer(family_formula(f), lexicon, stream)(it)) for it in items]
                  for f in COMMITTEE_FAMILIES]
        labels["cc"] = [committee_vote(v) for v in zip(*voters)]

    reports = [classification_report(list(zip(pred, actual)), name, keys) for name, pred in labels.items()]
    return sorted(reports, key=lambda r: (-r.f1, r.name))


def classification_table(reports: Sequence[ClassReport]) -> str:
    lines = ["metric\t" + "\t".join(r.name for r in reports)]
    for metric, title in (("precision", "Precision"), ("recall", "Recall"), ("f1", "F1")):
        lines.append(title + "\t" + "\t".join(f"{getattr(r, metric):.3f}" for r in reports))
    return "\n".join(lines) + "\n"


def to_json(reports) -> str:
    return json.dumps([r.as_dict() for r in reports], indent=2, sort_keys=True)
