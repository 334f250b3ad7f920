"""Devanagari text normalization, character classes, tokens and sentences.

Everything downstream (sandhi splitting, corpus building, statistics,
ROUGE) works on text that has been through :func:`normalize`, so the
conventions fixed here decide every token count the toolkit reports:

* only the Devanagari block (U+0900-U+097F), ASCII digits, spaces and
  newlines survive;
* ``!`` and ``?`` become the danda ``।``;
* dandas are always separated from neighbouring words by one space;
* zero-width characters are dropped, other foreign characters act as
  word separators.
"""
from __future__ import annotations

import re
import unicodedata
from enum import Enum

DANDA = "।"
DOUBLE_DANDA = "॥"
DANDAS = frozenset((DANDA, DOUBLE_DANDA))

_ZERO_WIDTH = dict.fromkeys((0x200B, 0x200C, 0x200D, 0xFEFF, 0x2060))
_TERMINATORS = str.maketrans({"!": DANDA, "?": DANDA})
_ABBREVIATION_SIGN = "॰"

# anything outside the block, ASCII digits and newline turns into a separator
_FOREIGN = re.compile(r"[^ऀ-ॿ0-9\n]|॰")
_DANDA_RUN = re.compile(r"[।॥]+")
_SPACES = re.compile(r" {2,}")
_EDGE_SPACES = re.compile(r" *\n *")
_SENTENCE = re.compile(r"[^।॥]*[।॥]+|[^।॥]+$")


class CharClass(str, Enum):
    INDEPENDENT_VOWEL = "independent-vowel"
    CONSONANT = "consonant"
    MATRA = "matra"
    VIRAMA = "virama"
    ANUSVARA = "anusvara"
    VISARGA = "visarga"
    DANDA = "danda"
    DIGIT = "digit"
    OTHER = "other"


def _block_class(cp: int) -> CharClass:
    if cp <= 0x0902:
        return CharClass.ANUSVARA  # inverted candrabindu, candrabindu, anusvara
    if cp == 0x0903:
        return CharClass.VISARGA
    if 0x0904 <= cp <= 0x0914 or cp in (0x093D, 0x0950, 0x0960, 0x0961):
        return CharClass.INDEPENDENT_VOWEL
    if 0x0972 <= cp <= 0x0977:
        return CharClass.INDEPENDENT_VOWEL
    if 0x0915 <= cp <= 0x0939 or 0x0958 <= cp <= 0x095F or cp >= 0x0978:
        return CharClass.CONSONANT
    if cp == 0x094D:
        return CharClass.VIRAMA
    if cp in (0x0964, 0x0965):
        return CharClass.DANDA
    if 0x0966 <= cp <= 0x096F:
        return CharClass.DIGIT
    if cp == 0x0970:
        return CharClass.OTHER
    # vowel signs, nukta, stress and length marks, high spacing dot
    return CharClass.MATRA


def classify_char(c: str) -> CharClass:
    """Return the :class:`CharClass` of a single character."""
    if len(c) != 1:
        raise ValueError(f"expected a single character, got {c!r}")
    cp = ord(c)
    if 0x0900 <= cp <= 0x097F:
        return _block_class(cp)
    if "0" <= c <= "9":
        return CharClass.DIGIT
    return CharClass.OTHER


def normalize(raw: str) -> str:
    """Clean arbitrary text into the canonical Devanagari form.

    The function is total and idempotent.  Line breaks are preserved so
    that paragraph delimiters (``"\\n\\n"``) survive cleaning; spaces at
    line edges are trimmed.

    >>> normalize("अस्ति!")
    'अस्ति ।'
    >>> normalize("abc अस्ति  एव")
    'अस्ति एव'
    """
    if not raw:
        return ""
    s = raw.translate(_ZERO_WIDTH)
    s = unicodedata.normalize("NFC", s).translate(_TERMINATORS)
    s = s.replace("\r\n", "\n").replace("\r", "\n")
    s = _FOREIGN.sub(" ", s)
    s = _DANDA_RUN.sub(lambda m: f" {m.group(0)} ", s)
    s = _SPACES.sub(" ", s)
    s = _EDGE_SPACES.sub("\n", s)
    return s.strip(" \n")


def tokenize(text: str) -> list[str]:
    """Split normalized text into whitespace-delimited tokens."""
    return text.split()


def segment_sentences(paragraph: str) -> list[str]:
    """Split a normalized paragraph after every danda run.

    Each sentence keeps its terminal danda.  Trailing text without a
    danda forms a final sentence of its own.
    """
    flat = " ".join(paragraph.split())
    out = []
    for m in _SENTENCE.finditer(flat):
        sent = m.group(0).strip()
        if sent:
            out.append(sent)
    return out
