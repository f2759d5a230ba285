"""Valence gold standard (ANEW-style CSV) and its alignment to lemma#pos keys."""

from __future__ import annotations

import csv
import io
import re
from dataclasses import dataclass
from typing import Iterable, TextIO

from .lemmatizer import ExceptionTable, lemmatize
from .swn_lexicon import LemmaKey, Lexicon

REQUIRED_COLUMNS = ("word", "valence_mean", "valence_sd")
# header spellings found in circulating copies of the ANEW tables
COLUMN_ALIASES = {
    "description": "word",
    "valmn": "valence_mean",
    "valsd": "valence_sd",
    "valence_mn": "valence_mean",
}
SCALE_MIN, SCALE_MID, SCALE_MAX = 1.0, 5.0, 9.0
HALF_RANGE = (SCALE_MAX - SCALE_MIN) / 2


class GoldError(ValueError):
    pass


@dataclass(frozen=True)
class GoldEntry:
    word: str
    valence_mu: float
    valence_sigma: float
    raw_mu: float
    raw_sigma: float

    @classmethod
    def from_raw(cls, word: str, raw_mu: float, raw_sigma: float) -> "GoldEntry":
        """Rescale 1..9 ratings onto [-1, 1]: mu -> (mu - 5) / 4, sd -> sd / 4."""
        return cls(word, (raw_mu - SCALE_MID) / HALF_RANGE, raw_sigma / HALF_RANGE, raw_mu, raw_sigma)

    @property
    def has_sign(self) -> bool:
        return self.valence_mu != 0


@dataclass(frozen=True)
class AlignedItem:
    key: LemmaKey
    gold: GoldEntry


@dataclass(frozen=True)
class AlignedDataset:
    items: tuple[AlignedItem, ...]
    dropped: tuple[tuple[str, str], ...] = ()
    source_word_count: int = 0
    lemma_count: int = 0

    @property
    def lemma_pos_count(self) -> int:
        return len(self.items)

    def __len__(self):
        return len(self.items)

    def __iter__(self):
        return iter(self.items)

    def keys(self) -> tuple[LemmaKey, ...]:
        return tuple(it.key for it in self.items)

    def subset(self, items: Iterable[AlignedItem]) -> "AlignedDataset":
        """Same provenance counts, fewer items."""
        return AlignedDataset(tuple(items), self.dropped, self.source_word_count, self.lemma_count)


def _norm_header(name: str) -> str:
    name = re.sub(r"[\s\-]+", "_", name.strip().lower())
    return COLUMN_ALIASES.get(name, name)


def load_gold(source: TextIO | Iterable[str] | str) -> list[GoldEntry]:
    """Parse a gold CSV with ``word,valence_mean,valence_sd`` columns.

    Header names are matched case-insensitively with spaces treated as
    underscores, so ``Valence Mean`` works too, and ``Description``,
    ``ValMn`` and ``ValSD`` are accepted as aliases. Other columns are
    ignored.
    """
    if isinstance(source, str):
        source = io.StringIO(source)
    reader = csv.reader(source)
    try:
        header = [_norm_header(h) for h in next(reader)]
    except StopIteration:
        raise GoldError("empty gold file") from None
    missing = [c for c in REQUIRED_COLUMNS if c not in header]
    if missing:
        raise GoldError(f"missing column(s): {', '.join(missing)}")
    idx = [header.index(c) for c in REQUIRED_COLUMNS]

    entries = []
    seen = set()
    for rowno, row in enumerate(reader, 2):
        if not row or not "".join(row).strip():
            continue
        if len(row) <= max(idx):
            raise GoldError(f"row {rowno}: too few columns")
        word, mu_raw, sd_raw = (row[i].strip() for i in idx)
        word = word.lower()
        if not word:
            raise GoldError(f"row {rowno}: empty word")
        try:
            mu, sd = float(mu_raw), float(sd_raw)
        except ValueError:
            raise GoldError(f"row {rowno}: non-numeric value in {mu_raw!r} / {sd_raw!r}") from None
        if not SCALE_MIN <= mu <= SCALE_MAX:
            raise GoldError(f"row {rowno}: valence mean {mu} outside [1, 9]")
        if not sd >= 0:
            raise GoldError(f"row {rowno}: negative valence sd {sd}")
        if word in seen:
            raise GoldError(f"row {rowno}: duplicate word {word!r}")
        seen.add(word)
        entries.append(GoldEntry.from_raw(word, mu, sd))
    return entries


def read_gold(path) -> list[GoldEntry]:
    with open(path, encoding="utf-8-sig", newline="") as fh:
        return load_gold(fh)


def align(gold: Iterable[GoldEntry], lexicon: Lexicon,
          exceptions: ExceptionTable | None = None) -> AlignedDataset:
    """Map each gold word to every lemma#pos it has in the lexicon.

    Words found as-is are never lemmatized; otherwise the first validated
    lemmatizer candidate is used. Unalignable words are dropped with a
    reason.
    """
    items = []
    dropped = []
    n_words = n_aligned = 0
    for entry in gold:
        n_words += 1
        # multiword entries are stored with underscores in the lexicon
        lemma = re.sub(r"\s+", "_", entry.word.strip())
        if not lexicon.has_lemma(lemma):
            cands = lemmatize(lemma, lexicon, exceptions)
            if not cands:
                dropped.append((entry.word, "no-lemma"))
                continue
            lemma = cands[0]
        n_aligned += 1
        items.extend(AlignedItem(LemmaKey(lemma, pos), entry) for pos in lexicon.pos_for(lemma))
    return AlignedDataset(tuple(items), tuple(dropped), n_words, n_aligned)
