"""Rule-based lemmatizer: exception table lookup plus suffix detachment.

Candidates are only kept if they exist as a lemma in the lexicon.
"""

from __future__ import annotations

from importlib import resources
from typing import Iterable, Mapping

from .swn_lexicon import Lexicon

# (suffix, replacement) in trial order
DETACHMENT_RULES: dict[str, tuple[tuple[str, str], ...]] = {
    "n": (("s", ""), ("ses", "s"), ("xes", "x"), ("zes", "z"), ("ches", "ch"),
          ("shes", "sh"), ("ies", "y"), ("men", "man")),
    "v": (("s", ""), ("ies", "y"), ("es", "e"), ("es", ""), ("ed", "e"),
          ("ed", ""), ("ing", "e"), ("ing", "")),
    "a": (("er", ""), ("est", ""), ("er", "e"), ("est", "e")),
    "r": (),
}

ExceptionTable = Mapping[str, tuple[str, ...]]


def parse_exceptions(lines: Iterable[str]) -> dict[str, tuple[str, ...]]:
    """Read ``inflected<TAB>lemma`` lines; repeated forms keep file order."""
    table: dict[str, list[str]] = {}
    for lineno, line in enumerate(lines, 1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split("\t")
        if len(parts) != 2 or not all(p.strip() for p in parts):
            raise ValueError(f"exceptions line {lineno}: expected 'inflected<TAB>lemma', got {line!r}")
        form, lemma = (p.strip().lower() for p in parts)
        table.setdefault(form, [])
        if lemma not in table[form]:
            table[form].append(lemma)
    return {k: tuple(v) for k, v in table.items()}


def read_exceptions(path) -> dict[str, tuple[str, ...]]:
    with open(path, encoding="utf-8") as fh:
        return parse_exceptions(fh)


def default_exceptions() -> dict[str, tuple[str, ...]]:
    """Small bundled table of irregular English forms."""
    text = resources.files(__package__).joinpath("data/exceptions.tsv").read_text(encoding="utf-8")
    return parse_exceptions(text.splitlines())


def merge_exceptions(*tables: ExceptionTable) -> dict[str, tuple[str, ...]]:
    """Merge tables; entries of earlier tables take priority."""
    merged: dict[str, list[str]] = {}
    for table in tables:
        for form, lemmas in table.items():
            bucket = merged.setdefault(form, [])
            bucket.extend(lem for lem in lemmas if lem not in bucket)
    return {k: tuple(v) for k, v in merged.items()}


def detach(word: str) -> list[str]:
    """All raw suffix-detachment candidates for ``word``, unvalidated."""
    out = []
    for pos in ("n", "v", "a", "r"):
        for suffix, repl in DETACHMENT_RULES[pos]:
            if word.endswith(suffix) and len(word) > len(suffix):
                out.append(word[: -len(suffix)] + repl)
    return out


def lemmatize(word: str, lexicon: Lexicon, exceptions: ExceptionTable | None = None) -> list[str]:
    """Candidate lemmas for ``word`` present in ``lexicon``, best first."""
    word = word.lower()
    raw = list((exceptions or {}).get(word, ())) + detach(word)
    seen = set()
    out = []
    for cand in raw:
        if cand in seen or cand == word:
            continue
        seen.add(cand)
        if lexicon.has_lemma(cand):
            out.append(cand)
    return out
