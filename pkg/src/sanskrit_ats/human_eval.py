"""Aggregation of human ratings of system summaries.

Two instruments are supported:

* scaled ratings, 1 (poor) to 5 (excellent) per quality, reported as the
  number of summaries rated Very Good or Excellent (4 or 5) against the
  rest;
* best-worst votes, where a system's score is the number of times it was
  picked best minus the number of times it was picked worst.
"""
from __future__ import annotations

import csv
from collections import Counter
from dataclasses import dataclass
from importlib import resources
from pathlib import Path
from typing import Iterable, Mapping, NamedTuple

QUALITIES = ("coherence_readability", "factual_consistency", "keyword_capture", "overall")
VOTES = {"best": "best", "1": "best", "+1": "best", "worst": "worst", "-1": "worst"}


@dataclass(frozen=True)
class Rating:
    evaluator: str
    system: str
    quality: str
    score: int

    def __post_init__(self):
        if not 1 <= self.score <= 5:
            raise ValueError(f"score {self.score} outside 1..5")
        if self.quality not in QUALITIES:
            raise ValueError(f"unknown quality {self.quality!r}")


@dataclass(frozen=True)
class BWVote:
    evaluator: str
    system: str
    vote: str

    def __post_init__(self):
        if self.vote not in ("best", "worst"):
            raise ValueError(f"vote must be best or worst, got {self.vote!r}")


class ScaledCount(NamedTuple):
    high: int
    low: int
    n: int


class BestWorst(NamedTuple):
    best: int
    worst: int
    score: int


def _read_csv(path, header):
    with Path(path).open(encoding="utf-8", newline="") as f:
        reader = csv.reader(f)
        first = next(reader, None)
        if first is None or [h.strip() for h in first] != list(header):
            raise ValueError(f"{path}: header must be {','.join(header)}")
        for lineno, row in enumerate(reader, 2):
            if not row:
                continue
            if len(row) != len(header):
                raise ValueError(f"{path}:{lineno}: expected {len(header)} columns")
            yield lineno, [c.strip() for c in row]


def load_ratings(path: str | Path) -> list[Rating]:
    out = []
    for lineno, (ev, system, quality, score) in _read_csv(path, ("evaluator", "system", "quality", "score")):
        try:
            out.append(Rating(ev, system, quality, int(score)))
        except ValueError as e:
            raise ValueError(f"{path}:{lineno}: {e}") from None
    return out


def load_votes(path: str | Path) -> list[BWVote]:
    out = []
    for lineno, (ev, system, vote) in _read_csv(path, ("evaluator", "system", "vote")):
        if vote.lower() not in VOTES:
            raise ValueError(f"{path}:{lineno}: vote must be best/worst or 1/-1")
        out.append(BWVote(ev, system, VOTES[vote.lower()]))
    return out


def scaled_counts(ratings: Iterable[Rating], quality: str, threshold: int = 4) -> dict[str, ScaledCount]:
    """Per system, how many ratings of ``quality`` reach ``threshold``."""
    high: Counter = Counter()
    total: Counter = Counter()
    for r in ratings:
        if r.quality != quality:
            continue
        total[r.system] += 1
        high[r.system] += r.score >= threshold
    if not total:
        raise ValueError(f"no ratings for {quality!r}")
    return {s: ScaledCount(high[s], n - high[s], n) for s, n in total.items()}


def best_worst(votes: Iterable[BWVote], systems: Iterable[str] = ()) -> dict[str, BestWorst]:
    """Best minus worst per system; ``systems`` without votes score 0."""
    best: Counter = Counter()
    worst: Counter = Counter()
    order = dict.fromkeys(systems)
    for v in votes:
        order.setdefault(v.system)
        (best if v.vote == "best" else worst)[v.system] += 1
    return {s: BestWorst(best[s], worst[s], best[s] - worst[s]) for s in order}


def rank_systems(scores: Mapping) -> list[str]:
    """Systems by descending score, ties in label order."""
    def value(s):
        v = scores[s]
        return getattr(v, "score", v)
    return sorted(scores, key=lambda s: (-value(s), s))


def scaled_table(counts: Mapping[str, ScaledCount]) -> str:
    lines = ["system\thigh\tlow\tn"]
    lines += [f"{s}\t{c.high}\t{c.low}\t{c.n}" for s, c in counts.items()]
    return "\n".join(lines) + "\n"


def best_worst_table(scores: Mapping[str, BestWorst]) -> str:
    ranks = {s: i for i, s in enumerate(rank_systems(scores), 1)}
    lines = ["system\tbest\tworst\tscore\trank"]
    lines += [f"{s}\t{b.best}\t{b.worst}\t{b.score}\t{ranks[s]}" for s, b in scores.items()]
    lines.append(f"# votes best={sum(b.best for b in scores.values())} "
                 f"worst={sum(b.worst for b in scores.values())}")
    return "\n".join(lines) + "\n"


PUBLISHED = {
    "coherence_readability": "published_coherence_readability.tsv",
    "factual_consistency": "published_factual_consistency.tsv",
    "keyword_capture": "published_keyword_capture.tsv",
    "best_worst": "published_best_worst.tsv",
}


def published_table(name: str) -> list[dict]:
    """Rows of a shipped published table, numeric columns as ints."""
    text = resources.files("sanskrit_ats").joinpath(f"data/{PUBLISHED[name]}").read_text(encoding="utf-8")
    rows = list(csv.DictReader(text.splitlines(), delimiter="\t"))
    return [{k: (v if k == "system" else int(v)) for k, v in r.items()} for r in rows]
