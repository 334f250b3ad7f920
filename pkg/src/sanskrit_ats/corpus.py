"""Building the LM sentence corpus and the document-summary corpus.

LM corpus lines look like ``17680<TAB>भारतीयविदुषीणाम् दीर्घां परम्परा प्रवर्तते ।``:
every sentence carries the id of the paragraph it came from, so the
paragraph can be recovered later.  Summarization pairs are written as
CSV with the columns ``title,document,summary,id``.
"""
from __future__ import annotations

import csv
import logging
import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from glob import glob
from pathlib import Path
from typing import Callable, Hashable, Iterable, Iterator, Mapping, Sequence, TypeVar

from .config import ConfigError, read_flat
from .devanagari import normalize, segment_sentences

log = logging.getLogger(__name__)

T = TypeVar("T")

PAIR_COLUMNS = ("title", "document", "summary", "id")
SOURCE_KINDS = ("lm", "first-sentence", "journal")

# totals with published train sizes that disagree with the floor rule
REPORTED_SPLITS = {482517: (434265, 48252), 15421: (15268, 155)}


@dataclass(frozen=True)
class SourceSpec:
    name: str
    base_id: int
    has_paragraph_ids: bool = True
    kind: str = "lm"
    inputs: tuple = ()
    split_sandhi: bool = True

    def __post_init__(self):
        if self.base_id < 0:
            raise ValueError(f"{self.name}: base_id must be >= 0")
        if self.kind not in SOURCE_KINDS:
            raise ValueError(f"{self.name}: unknown kind {self.kind!r}")


@dataclass(frozen=True)
class SentenceRecord:
    para_id: int
    sentence: str

    def __post_init__(self):
        if not self.sentence:
            raise ValueError("empty sentence")
        if self.para_id < 0:
            raise ValueError("negative paragraph id")


@dataclass(frozen=True)
class DocSummaryPair:
    title: str
    document: str
    summary: str
    id: int


def paragraphs(article: str, spec: SourceSpec, next_id: int) -> list[tuple[int, str]]:
    """Split an article on blank lines and number its paragraphs.

    Sources without paragraph numbering get ``next_id`` for the whole
    article.
    """
    if next_id < spec.base_id:
        raise ValueError(f"next_id {next_id} below base_id {spec.base_id} of {spec.name}")
    paras = [" ".join(p.split()) for p in article.split("\n\n")]
    paras = [p for p in paras if p]
    if not spec.has_paragraph_ids:
        return [(next_id, p) for p in paras]
    return [(next_id + k, p) for k, p in enumerate(paras)]


def source_paragraphs(articles: Iterable[str], spec: SourceSpec, next_id: int | None = None):
    """Number the paragraphs of consecutive articles from one source."""
    next_id = spec.base_id if next_id is None else next_id
    out = []
    for article in articles:
        paras = paragraphs(article, spec, next_id)
        if paras:
            out += paras
            next_id = paras[-1][0] + 1
    return out


def lm_records(paras: Iterable[tuple[int, str]]) -> list[SentenceRecord]:
    return [SentenceRecord(pid, s) for pid, para in paras for s in segment_sentences(para)]


def dedup_merge(a: Iterable[T], b: Iterable[T], key: Callable[[T], Hashable] | None = None) -> list[T]:
    """Union of ``a`` then ``b`` keeping the first occurrence of each item."""
    key = key or (lambda x: x)
    seen = set()
    out = []
    for item in (*a, *b):
        k = key(item)
        if k not in seen:
            seen.add(k)
            out.append(item)
    return out


def split_sizes(n: int, train_ratio: float) -> tuple[int, int]:
    """``(floor(n * train_ratio), rest)``.

    The ratio is taken at its decimal value, so ``split_sizes(100, 0.29)``
    gives 29 rather than the 28 that binary floating point would.
    """
    if not 0.0 < train_ratio < 1.0:
        raise ValueError(f"train_ratio must lie in (0, 1), got {train_ratio}")
    if n < 0:
        raise ValueError("n must be >= 0")
    train = math.floor(n * Fraction(repr(train_ratio)))
    reported = REPORTED_SPLITS.get(n)
    if reported and reported[0] != train:
        log.warning(
            "split of %d records: floor rule gives %d/%d, published sizes were %d/%d "
            "(train delta %+d, published total %d)",
            n, train, n - train, reported[0], reported[1],
            reported[0] - train, sum(reported),
        )
    return train, n - train


def shuffle_split(records: Sequence[T], train_ratio: float, seed: int = 42) -> tuple[list[T], list[T]]:
    """Seeded permutation followed by a :func:`split_sizes` cut."""
    if not records:
        raise ValueError("nothing to split")
    order = list(range(len(records)))
    random.Random(seed).shuffle(order)
    n_train, _ = split_sizes(len(records), train_ratio)
    return [records[i] for i in order[:n_train]], [records[i] for i in order[n_train:]]


def first_sentence_pair(para_id: int, paragraph: str) -> DocSummaryPair | None:
    """Use the first sentence as the summary of the rest of the paragraph."""
    sents = segment_sentences(paragraph)
    if len(sents) < 2:
        return None
    return DocSummaryPair("", " ".join(sents[1:]), sents[0], para_id)


def first_sentence_pairs(paras: Iterable[tuple[int, str]]) -> list[DocSummaryPair]:
    return [p for p in (first_sentence_pair(i, t) for i, t in paras) if p is not None]


@dataclass
class JournalResult:
    pairs: list = field(default_factory=list)
    skipped: int = 0


def journal_triples(rows: Iterable, base_id: int) -> JournalResult:
    """Turn title/document/summary rows into pairs with consecutive ids.

    ``rows`` may hold mappings with those keys or 3-sequences.  Rows
    without a summary or document are skipped and counted.
    """
    result = JournalResult()
    next_id = base_id
    for k, row in enumerate(rows):
        try:
            if isinstance(row, Mapping):
                title, doc, summ = row.get("title", ""), row["document"], row["summary"]
            else:
                title, doc, summ = row
        except (KeyError, TypeError, ValueError):
            log.warning("journal row %d is malformed, skipped", k)
            result.skipped += 1
            continue
        title, doc, summ = (normalize(str(x or "")) for x in (title, doc, summ))
        if not doc or not summ:
            log.warning("journal row %d has no %s, skipped", k, "document" if not doc else "summary")
            result.skipped += 1
            continue
        result.pairs.append(DocSummaryPair(title, doc, summ, next_id))
        next_id += 1
    return result


def read_journal_article(path: str | Path) -> tuple[str, str, str]:
    """First three lines of a journal file: title, document, summary."""
    lines = Path(path).read_text(encoding="utf-8").split("\n")
    lines += [""] * (3 - len(lines))
    return lines[0], lines[1], lines[2]


def write_lm_corpus(records: Iterable[SentenceRecord], path: str | Path) -> int:
    n = 0
    with Path(path).open("w", encoding="utf-8", newline="\n") as f:
        for r in records:
            f.write(f"{r.para_id}\t{r.sentence}\n")
            n += 1
    return n


def read_lm_corpus(path: str | Path) -> list[SentenceRecord]:
    out = []
    with Path(path).open(encoding="utf-8") as f:
        for lineno, line in enumerate(f, 1):
            line = line.rstrip("\n")
            if not line:
                continue
            pid, sep, sent = line.partition("\t")
            if not sep or not pid.isdigit():
                raise ValueError(f"{path}:{lineno}: expected <para_id>TAB<sentence>")
            out.append(SentenceRecord(int(pid), sent))
    return out


def write_pairs(pairs: Iterable[DocSummaryPair], path: str | Path) -> int:
    n = 0
    with Path(path).open("w", encoding="utf-8", newline="") as f:
        w = csv.writer(f, lineterminator="\n")
        w.writerow(PAIR_COLUMNS)
        for p in pairs:
            w.writerow((p.title, p.document, p.summary, p.id))
            n += 1
    return n


def read_pairs(path: str | Path) -> list[DocSummaryPair]:
    with Path(path).open(encoding="utf-8", newline="") as f:
        reader = csv.DictReader(f)
        if tuple(reader.fieldnames or ()) != PAIR_COLUMNS:
            raise ValueError(f"{path}: header must be {','.join(PAIR_COLUMNS)}")
        return [DocSummaryPair(r["title"], r["document"], r["summary"], int(r["id"])) for r in reader]


def _truthy(v: str) -> bool:
    return v.strip().lower() in ("1", "true", "yes", "on")


def load_manifest(path: str | Path) -> list[SourceSpec]:
    """Read a source manifest.

    Keys have the form ``source.<name>.<field>`` with fields ``base_id``
    (required), ``inputs`` (comma-separated globs relative to the
    manifest), ``paragraph_ids`` (default true), ``split`` (run the
    sandhi splitter, default true) and ``kind`` (``lm``,
    ``first-sentence`` or ``journal``; default ``lm``).  Sources keep
    their order of first appearance.
    """
    path = Path(path)
    values = read_flat(path)
    fields: dict[str, dict[str, str]] = {}
    for key, value in values.items():
        parts = key.split(".")
        if len(parts) != 3 or parts[0] != "source":
            raise ConfigError(f"{path}: unexpected key {key!r}")
        fields.setdefault(parts[1], {})[parts[2]] = value

    specs = []
    for name, f in fields.items():
        if "base_id" not in f:
            raise ConfigError(f"{path}: source {name!r} has no base_id")
        inputs = []
        for pattern in (p.strip() for p in f.get("inputs", "").split(",")):
            if not pattern:
                continue
            full = pattern if Path(pattern).is_absolute() else str(path.parent / pattern)
            matched = sorted(glob(full))
            if not matched:
                raise ConfigError(f"{path}: source {name!r}: no file matches {pattern!r}")
            inputs += matched
        try:
            specs.append(SourceSpec(
                name=name,
                base_id=int(f["base_id"]),
                has_paragraph_ids=_truthy(f.get("paragraph_ids", "true")),
                kind=f.get("kind", "lm"),
                inputs=tuple(inputs),
                split_sandhi=_truthy(f.get("split", "true")),
            ))
        except ValueError as e:
            raise ConfigError(f"{path}: {e}") from None
    return specs


def iter_articles(paths: Iterable[str | Path]) -> Iterator[str]:
    for p in paths:
        yield Path(p).read_text(encoding="utf-8")
