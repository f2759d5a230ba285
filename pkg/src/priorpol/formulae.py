"""Prior polarity formulae.

Each deterministic formula first aggregates the positive and the negative
sense scores of a lemma#pos separately, then maps the pair to one signed
score with either the max combiner (``_m``) or the difference combiner
(``_d``). ``uni`` and ``rnd`` have a single variant.
"""

from __future__ import annotations

import hashlib
import random
from dataclasses import dataclass
from typing import Callable

from .swn_lexicon import LemmaKey, SenseList

FORMULAS = (
    "rnd",
    "swrnd_m", "swrnd_d",
    "fs_m", "fs_d",
    "mean_m", "mean_d",
    "senti_m", "senti_d",
    "uni",
    "w1_m", "w1_d",
    "w2_m", "w2_d",
)
DETERMINISTIC = tuple(f for f in FORMULAS if f not in ("rnd", "swrnd_m", "swrnd_d"))

# Families used in the binary classification task; _m/_d collapse to one.
FAMILIES = ("fs", "mean", "senti", "uni", "w1", "w2", "swrnd", "rnd")
COMMITTEE_FAMILIES = ("fs", "mean", "senti", "uni", "w1", "w2")


class FormulaError(ValueError):
    pass


def check_formula(name: str) -> str:
    if name not in FORMULAS:
        raise FormulaError(f"unknown formula {name!r}; expected one of {' '.join(FORMULAS)}")
    return name


@dataclass(frozen=True)
class AggregateScore:
    pos: float
    neg: float
    num_pos: int
    num_neg: int
    n: int

    @property
    def pos_weight(self) -> float:
        return self.num_pos / self.n

    @property
    def neg_weight(self) -> float:
        return self.num_neg / self.n


class RandomStream:
    """Seeded source of per-word random substreams.

    Every (seed, purpose, key) triple gets its own generator, so draws do
    not depend on the order in which words are scored.
    """

    def __init__(self, seed: int = 42):
        self.seed = int(seed)

    def substream(self, key: LemmaKey | str, purpose: str) -> random.Random:
        material = f"{self.seed}\x1f{purpose}\x1f{key}".encode()
        digest = hashlib.blake2b(material, digest_size=16).digest()
        return random.Random(int.from_bytes(digest, "big"))

    def __repr__(self):
        return f"RandomStream(seed={self.seed})"


def _counts(senses: SenseList) -> tuple[int, int]:
    return (sum(1 for p, _ in senses.scores if p > 0),
            sum(1 for _, q in senses.scores if q > 0))


def _aggregate(senses: SenseList, pos: float, neg: float) -> AggregateScore:
    num_pos, num_neg = _counts(senses)
    return AggregateScore(pos, neg, num_pos, num_neg, senses.n)


# -- combiners ---------------------------------------------------------------

def combine_max(agg: AggregateScore) -> float:
    """Signed larger magnitude; an exact tie keeps the positive sign."""
    if agg.neg > agg.pos:
        return -agg.neg
    return agg.pos


def combine_diff(agg: AggregateScore) -> float:
    return agg.pos - agg.neg


def is_tie(agg: AggregateScore) -> bool:
    """True when combine_max had to apply its tie policy."""
    return agg.pos == agg.neg and agg.pos != 0


# -- aggregators -------------------------------------------------------------

def aggregate_fs(senses: SenseList) -> AggregateScore:
    p, q = senses.scores[0]
    return _aggregate(senses, p, q)


def aggregate_mean(senses: SenseList) -> AggregateScore:
    n = senses.n
    return _aggregate(senses, sum(senses.pos_scores) / n, sum(senses.neg_scores) / n)


def aggregate_senti(senses: SenseList) -> AggregateScore:
    """Mean over the senses with a nonzero score on each side (0 if none)."""
    num_pos, num_neg = _counts(senses)
    pos = sum(senses.pos_scores) / num_pos if num_pos else 0.0
    neg = sum(senses.neg_scores) / num_neg if num_neg else 0.0
    return AggregateScore(pos, neg, num_pos, num_neg, senses.n)


def _weighted(senses: SenseList, weight: Callable[[int], float]) -> AggregateScore:
    # Normalised by n, not by the sum of the weights.
    n = senses.n
    pos = sum(weight(i) * p for i, (p, _) in enumerate(senses.scores, 1)) / n
    neg = sum(weight(i) * q for i, (_, q) in enumerate(senses.scores, 1)) / n
    return _aggregate(senses, pos, neg)


def aggregate_w1(senses: SenseList) -> AggregateScore:
    """Geometric weights 1, 1/2, 1/4, ... by sense rank."""
    return _weighted(senses, lambda i: 0.5 ** (i - 1))


def aggregate_w2(senses: SenseList) -> AggregateScore:
    """Harmonic weights 1, 1/2, 1/3, ... by sense rank."""
    return _weighted(senses, lambda i: 1.0 / i)


AGGREGATORS = {
    "fs": aggregate_fs,
    "mean": aggregate_mean,
    "senti": aggregate_senti,
    "w1": aggregate_w1,
    "w2": aggregate_w2,
}


# -- single-variant and random formulae ---------------------------------------

def score_uni(senses: SenseList) -> float:
    agg = aggregate_senti(senses)
    if agg.pos > agg.neg:
        return agg.pos
    if agg.neg > agg.pos:
        return -agg.neg
    if agg.neg_weight > agg.pos_weight:
        return -agg.neg
    return agg.pos


def score_rnd(key: LemmaKey | str, stream: RandomStream) -> float:
    return stream.substream(key, "rnd").uniform(-1.0, 1.0)


def swrnd_sense(senses: SenseList, key: LemmaKey | str, stream: RandomStream) -> int:
    """0-based index of the randomly drawn sense; same for both modes."""
    return stream.substream(key, "swrnd").randrange(senses.n)


def score_swrnd(senses: SenseList, key: LemmaKey | str, stream: RandomStream, mode: str = "max") -> float:
    i = swrnd_sense(senses, key, stream)
    p, q = senses.scores[i]
    agg = AggregateScore(p, q, int(p > 0), int(q > 0), 1)
    if mode == "max":
        return combine_max(agg)
    if mode == "diff":
        return combine_diff(agg)
    raise ValueError(f"mode must be 'max' or 'diff', not {mode!r}")


def aggregate_for(formula: str, senses: SenseList) -> AggregateScore | None:
    """The (pos, neg) aggregate behind a two-variant deterministic formula."""
    family = formula.rpartition("_")[0]
    agg = AGGREGATORS.get(family)
    return agg(senses) if agg else None


def prior_polarity(formula: str, senses: SenseList | None, key: LemmaKey | str | None = None,
                   stream: RandomStream | None = None) -> float:
    """Score one lemma#pos with ``formula``.

    ``key`` defaults to the sense list's key; ``stream`` to seed 42.
    """
    check_formula(formula)
    if key is None:
        if senses is None:
            raise FormulaError("a key is needed when no senses are given")
        key = senses.key
    if stream is None:
        stream = RandomStream()
    if formula == "rnd":
        return score_rnd(key, stream)
    if senses is None:
        raise FormulaError(f"no senses for {key}")
    if formula == "uni":
        return score_uni(senses)
    family, _, variant = formula.rpartition("_")
    if family == "swrnd":
        return score_swrnd(senses, key, stream, "max" if variant == "m" else "diff")
    agg = AGGREGATORS[family](senses)
    return combine_max(agg) if variant == "m" else combine_diff(agg)


def family_formula(family: str) -> str:
    """Formula used to label a family in classification.

    The difference variant is used so that an exact pos/neg tie comes out
    as a zero score (an abstention) instead of the max combiner's
    positive tie policy.
    """
    if family in ("uni", "rnd"):
        return family
    if family not in FAMILIES:
        raise FormulaError(f"unknown formula family {family!r}")
    return f"{family}_d"
