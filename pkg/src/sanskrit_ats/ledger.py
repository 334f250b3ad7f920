"""Epoch-wise training/evaluation loss ledgers.

A ledger file is comma- or tab-separated with a header naming
``epoch``, ``train_loss`` and ``eval_loss`` and optionally
``perplexity``.  Perplexity is ``exp(eval_loss)``.
"""
from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import NamedTuple, Sequence

OVERFIT = "overfit-per-paper-rule"
UNDERFIT = "underfit-per-paper-rule"
CONVERGED = "converged"

PERPLEXITY_RTOL = 1e-3

# shipped ledgers, by model name
FIXTURES = {
    "bert": "ledger_bert.tsv",
    "gpt2": "ledger_gpt2.tsv",
    "roberta": "ledger_roberta.tsv",
    "bert2bert": "ledger_bert2bert.tsv",
    "bert2gpt": "ledger_bert2gpt.tsv",
    "bert2rnd": "ledger_bert2rnd.tsv",
    "bertshare": "ledger_bertshare.tsv",
    "rnd2bert": "ledger_rnd2bert.tsv",
    "rnd2gpt": "ledger_rnd2gpt.tsv",
    "rnd2rnd": "ledger_rnd2rnd.tsv",
    "roberta2gpt": "ledger_roberta2gpt.tsv",
    "robertashare": "ledger_robertashare.tsv",
    "roberta2roberta": "ledger_roberta2roberta.tsv",
}

_ALIASES = {
    "epoch": "epoch",
    "train_loss": "train_loss", "tl": "train_loss", "training loss": "train_loss",
    "eval_loss": "eval_loss", "el": "eval_loss", "evaluation loss": "eval_loss",
    "perplexity": "perplexity",
}


class LedgerError(ValueError):
    pass


@dataclass(frozen=True)
class EpochRecord:
    epoch: int
    train_loss: float
    eval_loss: float
    perplexity: float | None = None


class Mismatch(NamedTuple):
    epoch: int
    printed: float
    computed: float

    @property
    def rel_error(self) -> float:
        return abs(self.printed - self.computed) / abs(self.printed)


@dataclass
class Ledger:
    records: list
    mismatches: list = field(default_factory=list)
    name: str = ""

    def __len__(self):
        return len(self.records)

    def __iter__(self):
        return iter(self.records)

    @property
    def eval_losses(self) -> list[float]:
        return [r.eval_loss for r in self.records]


def perplexity(loss: float) -> float:
    if not math.isfinite(loss):
        raise ValueError(f"loss must be finite, got {loss}")
    return math.exp(loss)


class EarlyStop(NamedTuple):
    best_epoch: int
    stop_epoch: int | None


def early_stop(ledger: Sequence[EpochRecord], patience: int = 3, min_delta: float = 0.0) -> EarlyStop:
    """Replay early stopping on eval loss.

    The running minimum follows every strict improvement, but only an
    improvement larger than ``min_delta`` resets the patience counter.
    Stopping happens at the epoch where the counter reaches
    ``patience``.  ``best_epoch`` is the earliest epoch with the lowest
    eval loss among the epochs seen up to the stop.
    """
    records = list(ledger)
    if not records:
        raise ValueError("empty ledger")
    if patience < 1 or min_delta < 0:
        raise ValueError("patience must be >= 1 and min_delta >= 0")
    best_loss = records[0].eval_loss
    best_epoch = records[0].epoch
    waited = 0
    for r in records[1:]:
        improved_by = best_loss - r.eval_loss
        if r.eval_loss < best_loss:
            best_loss, best_epoch = r.eval_loss, r.epoch
        if improved_by > min_delta:
            waited = 0
        else:
            waited += 1
            if waited >= patience:
                return EarlyStop(best_epoch, r.epoch)
    return EarlyStop(best_epoch, None)


def fit_class(record: EpochRecord, epsilon: float = 0.0) -> str:
    """Label an epoch by the gap between training and evaluation loss.

    Converged within ``epsilon``; otherwise training loss above eval loss
    is labelled overfit and the reverse underfit.  That is the reverse of
    the usual reading, hence the qualified labels.
    """
    gap = record.train_loss - record.eval_loss
    if abs(gap) <= epsilon:
        return CONVERGED
    return OVERFIT if gap > 0 else UNDERFIT


def _parse_rows(rows: list[list[str]], source: str) -> Ledger:
    if not rows:
        raise LedgerError(f"{source}: empty ledger file")
    header = [_ALIASES.get(h.strip().lower()) for h in rows[0]]
    for col in ("epoch", "train_loss", "eval_loss"):
        if col not in header:
            raise LedgerError(f"{source}:1: header lacks {col}")
    idx = {name: i for i, name in enumerate(header) if name}
    records, mismatches = [], []
    last = None
    for lineno, row in enumerate(rows[1:], 2):
        if not any(c.strip() for c in row):
            continue
        try:
            epoch = int(row[idx["epoch"]])
            tl = float(row[idx["train_loss"]])
            el = float(row[idx["eval_loss"]])
            ppl = float(row[idx["perplexity"]]) if "perplexity" in idx and row[idx["perplexity"]].strip() else None
        except (ValueError, IndexError):
            raise LedgerError(f"{source}:{lineno}: cannot parse {row!r}") from None
        if not (math.isfinite(tl) and math.isfinite(el)):
            raise LedgerError(f"{source}:{lineno}: non-finite loss")
        if last is not None and epoch <= last:
            raise LedgerError(f"{source}:{lineno}: epoch {epoch} does not follow {last}")
        last = epoch
        rec = EpochRecord(epoch, tl, el, ppl)
        records.append(rec)
        if ppl is not None:
            m = Mismatch(epoch, ppl, perplexity(el))
            if m.rel_error > PERPLEXITY_RTOL:
                mismatches.append(m)
    if not records:
        raise LedgerError(f"{source}: ledger has no rows")
    return Ledger(records, mismatches, Path(source).stem)


def _rows(text: str) -> list[list[str]]:
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines:
        return []
    delim = "\t" if "\t" in lines[0] else ","
    return list(csv.reader(lines, delimiter=delim))


def load_ledger(path: str | Path) -> Ledger:
    """Parse a ledger file, cross-checking any perplexity column.

    Rows whose printed perplexity differs from ``exp(eval_loss)`` by more
    than 0.1% are listed in :attr:`Ledger.mismatches`.
    """
    path = Path(path)
    return _parse_rows(_rows(path.read_text(encoding="utf-8")), str(path))


def load_fixture(name: str) -> Ledger:
    """One of the shipped ledgers, see :data:`FIXTURES`."""
    fname = FIXTURES[name]
    text = resources.files("sanskrit_ats").joinpath(f"data/{fname}").read_text(encoding="utf-8")
    ledger = _parse_rows(_rows(text), fname)
    ledger.name = name
    return ledger


def summarize(ledger: Ledger, patience: int = 3, min_delta: float = 0.0, epsilon: float = 0.1) -> str:
    """Tab-separated per-epoch report plus an early-stopping footer."""
    lines = ["epoch\ttrain_loss\teval_loss\tperplexity\tfit"]
    for r in ledger:
        lines.append(f"{r.epoch}\t{r.train_loss:g}\t{r.eval_loss:g}\t"
                     f"{perplexity(r.eval_loss):.6g}\t{fit_class(r, epsilon)}")
    es = early_stop(ledger.records, patience, min_delta)
    lines.append(f"# best_epoch={es.best_epoch} stop_epoch={es.stop_epoch} "
                 f"patience={patience} min_delta={min_delta:g}")
    lines.append(f"# perplexity_mismatches={len(ledger.mismatches)}")
    return "\n".join(lines) + "\n"
