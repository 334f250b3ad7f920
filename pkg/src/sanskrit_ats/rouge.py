"""ROUGE-1/2/L on whitespace tokens.

No stemming, no stopwords.  ROUGE-L uses a single LCS over the whole
summary.  Any side without n-grams scores zero on every component.
"""
from __future__ import annotations

import csv
from collections import Counter
from pathlib import Path
from typing import Iterable, NamedTuple, Sequence

from .devanagari import tokenize

VARIANTS = ("1", "2", "L")


class RougeScore(NamedTuple):
    recall: float
    precision: float
    f1: float

    @classmethod
    def from_counts(cls, hits: int, ref_total: int, hyp_total: int) -> "RougeScore":
        if ref_total == 0 or hyp_total == 0:
            return cls(0.0, 0.0, 0.0)
        r, p = hits / ref_total, hits / hyp_total
        return cls(r, p, f_score(r, p))


def f_score(recall: float, precision: float) -> float:
    if recall + precision == 0:
        return 0.0
    return 2 * recall * precision / (recall + precision)


def _tokens(x) -> list[str]:
    return tokenize(x) if isinstance(x, str) else list(x)


def _ngrams(tokens: Sequence[str], n: int) -> Counter:
    return Counter(tuple(tokens[i:i + n]) for i in range(len(tokens) - n + 1))


def rouge_n(reference, hypothesis, n: int = 1) -> RougeScore:
    """Clipped n-gram overlap.  Strings are tokenized on whitespace."""
    if n < 1:
        raise ValueError("n must be >= 1")
    ref, hyp = _ngrams(_tokens(reference), n), _ngrams(_tokens(hypothesis), n)
    hits = sum((ref & hyp).values())
    return RougeScore.from_counts(hits, sum(ref.values()), sum(hyp.values()))


def lcs_length(a: Sequence, b: Sequence) -> int:
    if len(a) < len(b):
        a, b = b, a
    prev = [0] * (len(b) + 1)
    for x in a:
        cur = [0]
        for j, y in enumerate(b):
            cur.append(prev[j] + 1 if x == y else max(prev[j + 1], cur[j]))
        prev = cur
    return prev[-1]


def rouge_l(reference, hypothesis) -> RougeScore:
    ref, hyp = _tokens(reference), _tokens(hypothesis)
    return RougeScore.from_counts(lcs_length(ref, hyp), len(ref), len(hyp))


def score(reference, hypothesis, variant: str) -> RougeScore:
    variant = str(variant).upper()
    if variant == "L":
        return rouge_l(reference, hypothesis)
    if variant.isdigit():
        return rouge_n(reference, hypothesis, int(variant))
    raise ValueError(f"unknown ROUGE variant {variant!r}")


def rouge_batch(pairs: Iterable[tuple], variants: Iterable[str] = VARIANTS) -> dict[str, RougeScore]:
    """Macro-average of per-pair recall, precision and F1 for each variant."""
    pairs = list(pairs)
    if not pairs:
        raise ValueError("no pairs to score")
    out = {}
    for v in variants:
        scores = [score(ref, hyp, v) for ref, hyp in pairs]
        k = len(scores)
        out[str(v).upper()] = RougeScore(*(sum(col) / k for col in zip(*scores)))
    return out


def read_pairs_tsv(path: str | Path) -> list[tuple[str, str, str]]:
    """Read ``id<TAB>reference<TAB>hypothesis`` rows (header optional)."""
    rows = []
    with Path(path).open(encoding="utf-8", newline="") as f:
        for lineno, row in enumerate(csv.reader(f, delimiter="\t", quoting=csv.QUOTE_NONE), 1):
            if not row or (lineno == 1 and row[:3] == ["id", "reference", "hypothesis"]):
                continue
            if len(row) != 3:
                raise ValueError(f"{path}:{lineno}: expected id, reference, hypothesis")
            rows.append((row[0], row[1], row[2]))
    return rows


def read_texts_tsv(path: str | Path) -> dict[str, str]:
    """Read ``id<TAB>text`` rows (header optional) into a dict."""
    out = {}
    with Path(path).open(encoding="utf-8", newline="") as f:
        for lineno, row in enumerate(csv.reader(f, delimiter="\t", quoting=csv.QUOTE_NONE), 1):
            if not row or (lineno == 1 and row[0] == "id"):
                continue
            if len(row) != 2:
                raise ValueError(f"{path}:{lineno}: expected id, text")
            out[row[0]] = row[1]
    return out


def format_table(table: dict[str, RougeScore], ndigits: int = 3) -> str:
    lines = ["variant\trecall\tprecision\tf1"]
    for v, s in table.items():
        lines.append(f"{v}\t{s.recall:.{ndigits}f}\t{s.precision:.{ndigits}f}\t{s.f1:.{ndigits}f}")
    return "\n".join(lines) + "\n"
