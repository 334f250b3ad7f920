"""Corpus statistics and summary-quality measures.

Covers token/sentence counts per source, the share of novel n-grams in
a summary (a proxy for abstractiveness), compression rate, and the
tally of a human suitability assessment of document-summary pairs.
"""
from __future__ import annotations

import csv
from collections import Counter
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Mapping, NamedTuple

from .devanagari import tokenize

CATEGORIES = ("summary", "reflective", "unrelated", "other")
WORTHY = frozenset({"summary", "reflective"})


class SourceTotals(NamedTuple):
    total_tokens: int
    unique_tokens: int
    sentence_count: int


@dataclass
class CorpusStats:
    total_tokens: int = 0
    unique_tokens: int = 0
    sentence_count: int = 0
    per_source: dict = field(default_factory=dict)

    def report(self) -> str:
        """Flat ``key=value`` lines, global totals first."""
        lines = [
            f"total_tokens={self.total_tokens}",
            f"unique_tokens={self.unique_tokens}",
            f"sentence_count={self.sentence_count}",
        ]
        for name, t in self.per_source.items():
            lines += [f"{name}.{k}={v}" for k, v in t._asdict().items()]
        return "\n".join(lines) + "\n"

    def table(self) -> str:
        rows = ["source\ttotal_tokens\tunique_tokens\tsentence_count"]
        rows += [f"{n}\t{t.total_tokens}\t{t.unique_tokens}\t{t.sentence_count}"
                 for n, t in self.per_source.items()]
        return "\n".join(rows) + "\n"


def _text(item) -> str:
    return getattr(item, "sentence", item)


def corpus_stats(records) -> CorpusStats:
    """Token and sentence counts, per source and overall.

    ``records`` maps a source name to its sentences (strings or
    :class:`~sanskrit_ats.corpus.SentenceRecord`); a bare iterable is
    treated as one source called ``all``.  Unique counts use exact token
    identity, and the global unique count is over the union of sources.
    """
    if not isinstance(records, Mapping):
        records = {"all": records}
    stats = CorpusStats()
    vocab: set[str] = set()
    for name, items in records.items():
        total = sents = 0
        local: set[str] = set()
        for item in items:
            toks = tokenize(_text(item))
            total += len(toks)
            sents += 1
            local.update(toks)
        stats.per_source[name] = SourceTotals(total, len(local), sents)
        stats.total_tokens += total
        stats.sentence_count += sents
        vocab |= local
    stats.unique_tokens = len(vocab)
    return stats


def ngrams(tokens: list[str], n: int) -> Counter:
    return Counter(tuple(tokens[i:i + n]) for i in range(len(tokens) - n + 1))


def novel_ngram_pct(pair, n: int = 1, multiset: bool = False) -> float:
    """Percentage of summary n-grams that never occur in the document.

    By default n-grams are counted as a set.  With ``multiset=True`` each
    summary occurrence beyond the document's count of that n-gram is
    novel.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    summ, doc = tokenize(pair.summary), tokenize(pair.document)
    if len(summ) < n:
        raise ValueError(f"summary has {len(summ)} tokens, fewer than n={n}")
    s_grams, d_grams = ngrams(summ, n), ngrams(doc, n)
    if multiset:
        novel = sum(max(0, c - d_grams[g]) for g, c in s_grams.items())
        return 100.0 * novel / sum(s_grams.values())
    novel = sum(1 for g in s_grams if g not in d_grams)
    return 100.0 * novel / len(s_grams)


def compression_rate(pair) -> float:
    """Document length over summary length, in tokens."""
    summ = len(tokenize(pair.summary))
    if summ == 0:
        raise ValueError("empty summary")
    return len(tokenize(pair.document)) / summ


@dataclass
class AssessmentTally:
    counts: dict = field(default_factory=lambda: dict.fromkeys(CATEGORIES, 0))

    @property
    def n(self) -> int:
        return sum(self.counts.values())

    @classmethod
    def from_labels(cls, labels: Iterable[str]) -> "AssessmentTally":
        tally = cls()
        for lab in labels:
            lab = lab.strip().lower()
            if lab not in tally.counts:
                raise ValueError(f"unknown category {lab!r}")
            tally.counts[lab] += 1
        return tally


def load_assessment(path: str | Path) -> AssessmentTally:
    """Read a ``pair_id,category`` CSV file."""
    with Path(path).open(encoding="utf-8", newline="") as f:
        reader = csv.DictReader(f)
        if reader.fieldnames is None or [h.strip() for h in reader.fieldnames] != ["pair_id", "category"]:
            raise ValueError(f"{path}: header must be pair_id,category")
        labels = []
        for lineno, row in enumerate(reader, 2):
            cat = (row.get("category") or "").strip().lower()
            if cat not in CATEGORIES:
                raise ValueError(f"{path}:{lineno}: unknown category {cat!r}")
            labels.append(cat)
    return AssessmentTally.from_labels(labels)


@dataclass
class Suitability:
    percentages: dict
    worthy_pct: float

    def rounded(self, ndigits: int = 1) -> "Suitability":
        return Suitability({k: round(v, ndigits) for k, v in self.percentages.items()},
                           round(self.worthy_pct, ndigits))


def assess_suitability(tally: AssessmentTally, worthy: Iterable[str] = WORTHY) -> Suitability:
    n = tally.n
    if n == 0:
        raise ValueError("empty assessment")
    pct = {c: 100.0 * k / n for c, k in tally.counts.items()}
    worthy = set(worthy)
    unknown = worthy - set(pct)
    if unknown:
        raise ValueError(f"unknown categories {sorted(unknown)}")
    return Suitability(pct, 100.0 * sum(tally.counts[c] for c in worthy) / n)
