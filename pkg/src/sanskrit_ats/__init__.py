"""Data preparation, metrics and bookkeeping for Sanskrit abstractive summarization.

Submodules:

``devanagari``  text normalization, character classes, sentence segmentation
``sandhi``      rule-table sandhi/samyoga splitting
``corpus``      LM sentence corpus and document-summary pairs
``summetrics``  corpus statistics, n-gram novelty, suitability tallies
``rouge``       ROUGE-1/2/L
``ledger``      training-loss ledgers, perplexity, early stopping
``human_eval``  scaled ratings and best-worst aggregation
``cli``         the ``sanskrit-ats`` command
"""
from __future__ import annotations

from .devanagari import CharClass, classify_char, normalize, segment_sentences, tokenize
from .rouge import RougeScore, rouge_batch, rouge_l, rouge_n
from .sandhi import RuleSet, RuleTableError, default_rules, load_rules, split_sandhi

__version__ = "0.1.0"

__all__ = [
    "CharClass", "classify_char", "normalize", "segment_sentences", "tokenize",
    "RougeScore", "rouge_batch", "rouge_l", "rouge_n",
    "RuleSet", "RuleTableError", "default_rules", "load_rules", "split_sandhi",
]
