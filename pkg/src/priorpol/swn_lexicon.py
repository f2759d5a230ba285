"""SentiWordNet-format lexicon: parsing, sense index and export.

A data line looks like::

    a	1207406	0.0	0.75	cold#1 frigid#2	gloss text...

Columns are PoS, synset offset, PosScore, NegScore, space separated
``lemma#rank`` terms and an optional (ignored) gloss.
"""

from __future__ import annotations

import io
import logging
import re
from collections import defaultdict
from dataclasses import dataclass, field
from types import MappingProxyType
from typing import Iterable, Iterator, Mapping, NamedTuple, TextIO

log = logging.getLogger(__name__)

POS_TAGS = ("n", "v", "a", "r")
SUM_EPS = 1e-9

_TERM_RE = re.compile(r"^(?P<lemma>.+)#(?P<rank>\d+)$")


class LexiconError(ValueError):
    """Raised on malformed SentiWordNet input."""

    def __init__(self, message: str, lineno: int | None = None):
        self.lineno = lineno
        if lineno is not None:
            message = f"line {lineno}: {message}"
        super().__init__(message)


class LemmaKey(NamedTuple):
    lemma: str
    pos: str

    def __str__(self) -> str:
        return f"{self.lemma}#{self.pos}"

    @classmethod
    def parse(cls, text: str) -> "LemmaKey":
        """Build a key from ``lemma#pos``; the lemma is lowercased."""
        lemma, sep, pos = text.strip().rpartition("#")
        if not sep or not lemma or pos not in POS_TAGS + ("s",):
            raise ValueError(f"not a lemma#pos key: {text!r}")
        return cls.of(lemma, pos)

    @classmethod
    def of(cls, lemma: str, pos: str) -> "LemmaKey":
        return cls(lemma.lower(), "a" if pos == "s" else pos)


@dataclass(frozen=True)
class SenseEntry:
    pos: str
    offset: str
    pos_score: float
    neg_score: float
    terms: tuple[tuple[str, int], ...]
    satellite: bool = False  # PoS was ``s`` before folding into ``a``


@dataclass(frozen=True)
class SenseList:
    """Scores of one lemma#pos ordered by sense rank (index 0 is rank 1)."""

    key: LemmaKey
    scores: tuple[tuple[float, float], ...]
    offsets: tuple[str, ...] = field(default=(), compare=False)

    def __post_init__(self):
        if not self.scores:
            raise ValueError(f"{self.key}: a sense list needs at least one sense")

    @property
    def n(self) -> int:
        return len(self.scores)

    @property
    def pos_scores(self) -> tuple[float, ...]:
        return tuple(p for p, _ in self.scores)

    @property
    def neg_scores(self) -> tuple[float, ...]:
        return tuple(q for _, q in self.scores)

    def is_affective(self) -> bool:
        return any(p != 0 or q != 0 for p, q in self.scores)

    @classmethod
    def from_scores(cls, key: LemmaKey | str, scores: Iterable[tuple[float, float]]) -> "SenseList":
        if isinstance(key, str):
            key = LemmaKey.parse(key)
        return cls(key, tuple((float(p), float(q)) for p, q in scores))


@dataclass(frozen=True)
class Lexicon:
    index: Mapping[LemmaKey, SenseList]
    entry_count: int

    @property
    def lemma_pos_count(self) -> int:
        return len(self.index)

    def __len__(self) -> int:
        return len(self.index)

    def __iter__(self) -> Iterator[LemmaKey]:
        return iter(sorted(self.index, key=str))

    def __contains__(self, key) -> bool:
        return self.lookup(key) is not None

    def lookup(self, key: LemmaKey | str) -> SenseList | None:
        """Return the sense list for ``key`` or None when it is absent."""
        if isinstance(key, str):
            try:
                key = LemmaKey.parse(key)
            except ValueError:
                return None
        else:
            key = LemmaKey.of(key.lemma, key.pos)
        return self.index.get(key)

    def pos_for(self, lemma: str) -> list[str]:
        """PoS tags under which ``lemma`` appears, in n, v, a, r order."""
        lemma = lemma.lower()
        return [p for p in POS_TAGS if LemmaKey(lemma, p) in self.index]

    def has_lemma(self, lemma: str) -> bool:
        return bool(self.pos_for(lemma))

    @classmethod
    def from_sense_lists(cls, lists: Iterable[SenseList], entry_count: int | None = None) -> "Lexicon":
        index = {}
        for sl in lists:
            if sl.key in index:
                raise LexiconError(f"duplicate key {sl.key}")
            index[sl.key] = sl
        if entry_count is None:
            entry_count = sum(sl.n for sl in index.values())
        return cls(MappingProxyType(index), entry_count)


def lookup(lexicon: Lexicon, key: LemmaKey | str) -> SenseList | None:
    return lexicon.lookup(key)


def parse_line(line: str, lineno: int | None = None, strict: bool = True) -> SenseEntry | None:
    """Parse one data line. Returns None for blank and comment lines."""
    line = line.rstrip("\r\n")
    if not line.strip() or line.lstrip().startswith("#"):
        return None
    cols = line.split("\t")
    if len(cols) < 5:
        raise LexiconError(f"expected at least 5 tab-separated columns, got {len(cols)}", lineno)
    pos, offset, pos_raw, neg_raw, terms_raw = (c.strip() for c in cols[:5])
    if pos not in POS_TAGS + ("s",):
        raise LexiconError(f"unknown PoS tag {pos!r}", lineno)
    if not offset.isdigit():
        raise LexiconError(f"malformed offset {offset!r}", lineno)
    try:
        pos_score, neg_score = float(pos_raw), float(neg_raw)
    except ValueError:
        raise LexiconError(f"non-numeric score in {pos_raw!r} / {neg_raw!r}", lineno) from None
    for s in (pos_score, neg_score):
        if not 0.0 <= s <= 1.0:
            raise LexiconError(f"score out of range: {s}", lineno)
    if pos_score + neg_score > 1.0 + SUM_EPS:
        msg = f"PosScore + NegScore = {pos_score + neg_score} exceeds 1"
        if strict:
            raise LexiconError(msg, lineno)
        log.warning("line %s: %s", lineno, msg)

    terms = []
    for tok in terms_raw.split():
        m = _TERM_RE.match(tok)
        if m is None or int(m["rank"]) < 1:
            raise LexiconError(f"malformed term token {tok!r}", lineno)
        terms.append((m["lemma"].lower(), int(m["rank"])))
    if not terms:
        raise LexiconError("empty SynsetTerms column", lineno)
    return SenseEntry("a" if pos == "s" else pos, offset, pos_score, neg_score, tuple(terms), pos == "s")


class _Sense(NamedTuple):
    rank: int
    raw_pos: str
    order: int
    entry: SenseEntry


def _resolve_ranks(key: LemmaKey, senses: list[_Sense]) -> list[_Sense]:
    """Order the senses of one key by rank, checking for gaps and duplicates.

    Satellite (``s``) senses are merged into ``a``; if that merge makes
    two senses share a rank they are re-ranked by (rank, file order).
    """
    senses = sorted(senses, key=lambda s: (s.rank, s.order))
    seen: dict[int, set[str]] = defaultdict(set)
    collided = False
    for s in senses:
        if s.raw_pos in seen[s.rank]:
            raise LexiconError(f"duplicate sense {key}#{s.rank} (ambiguous rank)")
        if seen[s.rank]:
            collided = True
        seen[s.rank].add(s.raw_pos)
    ranks = sorted(seen)
    if ranks != list(range(1, len(ranks) + 1)):
        missing = sorted(set(range(1, ranks[-1] + 1)) - set(ranks))
        raise LexiconError(f"{key}: missing sense rank(s) {missing}")
    if collided:
        log.info("%s: a/s rank collision, re-ranked %d senses in file order", key, len(senses))
    return senses


def parse_swn(source: TextIO | Iterable[str] | str, strict: bool = True) -> Lexicon:
    """Build a Lexicon from a SentiWordNet-format line stream.

    ``source`` may be an open file, any iterable of lines, or a string
    holding the whole file. In lenient mode malformed lines, duplicate
    ranks and rank gaps are logged and skipped (the affected key is
    dropped for the latter two); in strict mode they raise LexiconError.
    """
    if isinstance(source, str):
        source = io.StringIO(source)

    by_key: dict[LemmaKey, list[_Sense]] = defaultdict(list)
    entry_count = 0
    order = 0
    for lineno, line in enumerate(source, 1):
        try:
            entry = parse_line(line, lineno, strict)
        except LexiconError as exc:
            if strict:
                raise
            log.warning("skipping %s", exc)
            continue
        if entry is None:
            continue
        raw_pos = "s" if entry.satellite else entry.pos
        entry_count += 1
        for lemma, rank in entry.terms:
            by_key[LemmaKey(lemma, entry.pos)].append(_Sense(rank, raw_pos, order, entry))
            order += 1

    lists = []
    for key, senses in by_key.items():
        try:
            senses = _resolve_ranks(key, senses)
        except LexiconError as exc:
            if strict:
                raise
            log.warning("dropping %s", exc)
            continue
        lists.append(SenseList(
            key,
            tuple((s.entry.pos_score, s.entry.neg_score) for s in senses),
            tuple(s.entry.offset for s in senses),
        ))
    return Lexicon.from_sense_lists(lists, entry_count)


def read_swn(path, strict: bool = False) -> Lexicon:
    with open(path, encoding="utf-8") as fh:
        return parse_swn(fh, strict=strict)


def _fmt(x: float) -> str:
    return repr(float(x))


def export_raw(lexicon: Lexicon) -> Iterator[str]:
    """Dump the sense index back as SentiWordNet lines, one sense per line.

    Ranks are written post-resolution, so the output reparses to an
    equal Lexicon.
    """
    yield "# POS\tID\tPosScore\tNegScore\tSynsetTerms\n"
    for key in lexicon:
        sl = lexicon.index[key]
        offsets = sl.offsets or ("0",) * sl.n
        for rank, ((p, q), off) in enumerate(zip(sl.scores, offsets), 1):
            yield f"{key.pos}\t{off}\t{_fmt(p)}\t{_fmt(q)}\t{key.lemma}#{rank}\n"


def export_prior_lexicon(lexicon: Lexicon, formula: str, seed: int = 42) -> Iterator[str]:
    """Yield ``lemma#pos<TAB>score`` rows for one formula, sorted by key."""
    from .formulae import RandomStream, prior_polarity

    stream = RandomStream(seed)
    for key in lexicon:
        score = prior_polarity(formula, lexicon.index[key], key, stream)
        yield f"{key}\t{score + 0.0:.6f}\n"
