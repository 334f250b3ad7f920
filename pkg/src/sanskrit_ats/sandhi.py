"""Two-phase rule-based sandhi / samyoga splitting.

Phase 1 replaces whole tokens listed in a word-specific split dictionary.
Phase 2 walks the remaining tokens once, left to right, and applies at
most one rule per token from an ordered pattern table
(``sandhi_rules.tsv``), preferring the longest matching pattern.

Rule table rows are ``common_error<TAB>correction<TAB>exceptions``.  In
the correction ``+`` stands for a space.  Underscores mark word
boundaries and decide how a row is anchored:

==========================  =========================================
row shape                   anchor
==========================  =========================================
pattern contains a space    ``anywhere``: a token-aligned phrase
leading ``_`` (either col)  ``whole-word``
pattern ends in a danda     ``whole-word``, token must precede a danda
trailing ``_`` (either col) ``word-final-boundary``
self-mapping or lone token  ``whole-word``
anything else               ``word-suffix``
==========================  =========================================

A lone token is a pattern made of a single letter with its signs
(``स``, ``म्``) or one with no letters at all (``!``).
"""
from __future__ import annotations

import logging
from collections import Counter
from dataclasses import dataclass, field, replace
from enum import Enum
from importlib import resources
from pathlib import Path
from typing import Iterable, Mapping

from .devanagari import DANDAS, CharClass, classify_char, normalize, tokenize

log = logging.getLogger(__name__)

HEADER = ("common_error", "correction", "exception")
_BASE = (CharClass.CONSONANT, CharClass.INDEPENDENT_VOWEL)


class RuleTableError(ValueError):
    """A rule table or split dictionary could not be loaded."""


class Anchor(str, Enum):
    WHOLE_WORD = "whole-word"
    WORD_SUFFIX = "word-suffix"
    WORD_FINAL_BOUNDARY = "word-final-boundary"
    ANYWHERE = "anywhere"


@dataclass(frozen=True)
class SplitRule:
    pattern: str
    replacement: str
    exceptions: frozenset = frozenset()
    anchor: Anchor = Anchor.WORD_SUFFIX
    line: int = 0
    correction: str = ""  # replacement as written in the table

    @property
    def core(self) -> str:
        """The pattern without a terminal danda."""
        return self.pattern.rstrip("".join(DANDAS)) or self.pattern

    @property
    def before_danda(self) -> bool:
        return self.anchor is Anchor.WHOLE_WORD and self.core != self.pattern

    @property
    def kind(self) -> str:
        if not self.replacement:
            return "deletion"
        if self.replacement == self.pattern:
            return "identity"
        if len(self.replacement.split()) > len(self.pattern.split()):
            return "split"
        return "correction"

    @property
    def reachable(self) -> bool:
        """False when cleaning can never leave this pattern in a text."""
        return normalize(self.core) == self.core


def _count_bases(s: str) -> int:
    return sum(1 for c in s if classify_char(c) in _BASE)


def _is_lone_token(pattern: str) -> bool:
    n = _count_bases(pattern)
    if n == 0:
        return True
    return n == 1 and classify_char(pattern[0]) in _BASE


def _split_field(s: str) -> str:
    return " ".join(s.replace("+", " ").split())


def make_rule(common_error: str, correction: str, exceptions: str = "", line: int = 0) -> SplitRule:
    """Build one rule from raw table cells, inferring its anchor."""
    raw_pat, raw_rep = common_error.strip(), correction.strip()
    lead = raw_pat.startswith("_") or raw_rep.startswith("_")
    trail = raw_pat.endswith("_") or raw_rep.endswith("_")
    pattern = " ".join(raw_pat.strip("_").split())
    replacement = _split_field(raw_rep.strip("_"))
    if not pattern:
        raise RuleTableError(f"line {line}: empty pattern")
    excs = frozenset(w.strip() for w in exceptions.split(",") if w.strip())

    if " " in pattern:
        anchor = Anchor.ANYWHERE
    elif lead:
        anchor = Anchor.WHOLE_WORD
    elif pattern[-1] in DANDAS and len(pattern) > 1:
        anchor = Anchor.WHOLE_WORD
    elif trail:
        anchor = Anchor.WORD_FINAL_BOUNDARY
    elif pattern == replacement or _is_lone_token(pattern):
        anchor = Anchor.WHOLE_WORD
    else:
        anchor = Anchor.WORD_SUFFIX

    rule = SplitRule(pattern, replacement, excs, anchor, line, replacement)
    dead = sorted(w for w in excs if rule.core not in w)
    if dead:
        raise RuleTableError(
            f"line {line}: exception(s) {', '.join(dead)} do not contain pattern {pattern!r}"
        )
    return rule


class RuleSet:
    """An immutable, ordered rule table with lookup indexes.

    For each token the rule with the longest matching pattern wins; rows
    of equal length keep table order.  On construction every replacement
    is rewritten by the table until it stops changing, so a single pass
    over any text already yields a fixpoint.  The table's own text stays
    available as :attr:`SplitRule.correction`.
    """

    def __init__(self, rules: Iterable[SplitRule], close: bool = True):
        self.rules = tuple(rules)
        self._whole: dict[str, list[int]] = {}
        self._suffix: dict[str, list[int]] = {}
        self._phrase: dict[str, list[int]] = {}
        for i, r in enumerate(self.rules):
            if r.anchor is Anchor.ANYWHERE:
                self._phrase.setdefault(r.pattern.split()[0], []).append(i)
            elif r.anchor is Anchor.WHOLE_WORD:
                self._whole.setdefault(r.core, []).append(i)
            else:
                self._suffix.setdefault(r.pattern, []).append(i)
        self._max_suffix = max((len(p) for p in self._suffix), default=0)
        if close:
            self._close()

    def _close(self, max_rounds: int = 10) -> None:
        closed = []
        for rule in self.rules:
            rep = rule.replacement
            for _ in range(max_rounds):
                nxt = " ".join(_apply_tokens(rep.split(), self, None))
                if nxt == rep:
                    break
                rep = nxt
            closed.append(replace(rule, replacement=rep))
        self.rules = tuple(closed)

    def __len__(self):
        return len(self.rules)

    def __iter__(self):
        return iter(self.rules)

    def __getitem__(self, i):
        return self.rules[i]

    def candidates(self, token: str) -> list[int]:
        """Indices of rules whose pattern could match ``token``, in precedence order."""
        found = list(self._whole.get(token, ()))
        found += self._phrase.get(token, ())
        for k in range(1, min(len(token), self._max_suffix) + 1):
            found += self._suffix.get(token[-k:], ())
        return sorted(found, key=lambda i: (-len(self.rules[i].pattern), i))


def parse_rules(lines: Iterable[str], source: str = "<rules>", audit: bool = True) -> RuleSet:
    rules = []
    for lineno, raw in enumerate(lines, 1):
        line = raw.rstrip("\n").rstrip("\r")
        if not line.strip() or line.lstrip().startswith("#"):
            continue
        cols = line.split("\t")
        if tuple(c.strip() for c in cols) == HEADER:
            continue
        if len(cols) != 3:
            raise RuleTableError(f"{source}:{lineno}: expected 3 tab-separated columns, got {len(cols)}")
        try:
            rules.append(make_rule(*cols, line=lineno))
        except RuleTableError as e:
            msg = str(e).removeprefix(f"line {lineno}: ")
            raise RuleTableError(f"{source}:{lineno}: {msg}") from None
    ruleset = RuleSet(rules)
    if audit:
        report = audit_rules(ruleset)
        if report.non_idempotent:
            bad = report.non_idempotent[0]
            raise RuleTableError(
                f"{source}:{bad.rule.line}: fixpoint audit failed, "
                f"{bad.probe!r} -> {bad.once!r} -> {bad.twice!r}"
            )
    return ruleset


def load_rules(path: str | Path, audit: bool = True) -> RuleSet:
    """Load a rule table; see the module docstring for the format."""
    path = Path(path)
    with path.open(encoding="utf-8") as f:
        return parse_rules(f, source=str(path), audit=audit)


def default_rules() -> RuleSet:
    """The shipped common-pattern table."""
    text = resources.files("sanskrit_ats").joinpath("data/sandhi_rules.tsv").read_text(encoding="utf-8")
    return parse_rules(text.splitlines(), source="sandhi_rules.tsv")


def load_word_splits(path: str | Path) -> dict[str, str]:
    """Read a ``word<TAB>split`` dictionary."""
    splits = {}
    with Path(path).open(encoding="utf-8") as f:
        for lineno, raw in enumerate(f, 1):
            line = raw.rstrip("\n")
            if not line.strip() or line.startswith("#"):
                continue
            cols = line.split("\t")
            if len(cols) != 2:
                raise RuleTableError(f"{path}:{lineno}: expected 2 tab-separated columns")
            word, split = cols[0].strip(), _split_field(cols[1])
            if not word or " " in word:
                raise RuleTableError(f"{path}:{lineno}: key must be a single token")
            splits.setdefault(word, split)
    return splits


def _match(rule: SplitRule, tokens: list[str], i: int, frozen: list[bool]) -> int:
    """Number of tokens consumed when ``rule`` fires at ``i``, else 0."""
    tok = tokens[i]
    if tok in rule.exceptions:
        return 0
    if rule.anchor is Anchor.ANYWHERE:
        words = rule.pattern.split()
        k = len(words)
        if tokens[i:i + k] == words and not any(frozen[i:i + k]):
            return k
        return 0
    if rule.anchor is Anchor.WHOLE_WORD:
        if tok != rule.core:
            return 0
        if rule.before_danda and not (i + 1 < len(tokens) and tokens[i + 1] in DANDAS):
            return 0
        return 1
    return 1 if tok.endswith(rule.pattern) else 0


def _rewrite(rule: SplitRule, tok: str) -> str:
    if rule.anchor is Anchor.ANYWHERE:
        return rule.replacement
    if rule.before_danda:
        return rule.replacement.rstrip("".join(DANDAS) + " ")
    if rule.anchor is Anchor.WHOLE_WORD:
        return rule.replacement
    return tok[: len(tok) - len(rule.pattern)] + rule.replacement


def _apply_tokens(tokens: list[str], rules: RuleSet, fires: Counter | None,
                  frozen: list[bool] | None = None) -> list[str]:
    if frozen is None:
        frozen = [False] * len(tokens)
    out: list[str] = []
    i = 0
    while i < len(tokens):
        tok = tokens[i]
        if frozen[i]:
            out.append(tok)
            i += 1
            continue
        for idx in rules.candidates(tok):
            rule = rules[idx]
            k = _match(rule, tokens, i, frozen)
            if k:
                rep = _rewrite(rule, tok)
                if rep:
                    out.append(rep)
                if fires is not None:
                    fires[rule] += 1
                i += k
                break
        else:
            out.append(tok)
            i += 1
    return " ".join(out).split()


def _per_line(text: str, fn) -> str:
    return "\n".join(" ".join(fn(tokenize(line))) for line in text.split("\n"))


def apply_word_specific(text: str, splits: Mapping[str, str], fires: Counter | None = None) -> str:
    """Replace every token that is exactly a dictionary key by its split."""
    def fn(tokens):
        out = []
        for t in tokens:
            if t in splits:
                out.append(splits[t])
                if fires is not None:
                    fires[t] += 1
            else:
                out.append(t)
        return out
    return _per_line(text, fn)


def apply_common_patterns(text: str, rules: RuleSet, fires: Counter | None = None) -> str:
    """One left-to-right pass of the pattern table over ``text``.

    At most one rule fires per token.  ``fires``, when given, is
    incremented per fired rule.
    """
    return _per_line(text, lambda toks: _apply_tokens(toks, rules, fires))


def split_sandhi(text: str, rules: RuleSet, word_splits: Mapping[str, str] | None = None,
                 fires: Counter | None = None) -> str:
    """Run both phases.  Tokens produced by phase 1 are not touched by phase 2."""
    word_splits = word_splits or {}

    def fn(tokens):
        toks: list[str] = []
        frozen: list[bool] = []
        for t in tokens:
            if t in word_splits:
                parts = word_splits[t].split()
                toks += parts
                frozen += [True] * len(parts)
            else:
                toks.append(t)
                frozen.append(False)
        return _apply_tokens(toks, rules, fires, frozen)
    return _per_line(text, fn)


@dataclass
class SplitReport:
    total_before: int
    total_after: int
    unique_before: int
    unique_after: int
    rule_fire_counts: dict = field(default_factory=dict)


def split_report(before: str, after: str, fires: Mapping | None = None) -> SplitReport:
    b, a = tokenize(before), tokenize(after)
    return SplitReport(len(b), len(a), len(set(b)), len(set(a)), dict(fires or {}))


@dataclass(frozen=True)
class AuditFailure:
    rule: SplitRule
    probe: str
    once: str
    twice: str


@dataclass
class AuditReport:
    non_idempotent: list = field(default_factory=list)
    shadowed: list = field(default_factory=list)
    identity: list = field(default_factory=list)
    unreachable: list = field(default_factory=list)


def _probes(rule: SplitRule) -> list[str]:
    if rule.anchor is Anchor.ANYWHERE:
        return [rule.pattern]
    if rule.before_danda:
        return [f"{rule.core} ।"]
    probes = [rule.core]
    if rule.anchor is not Anchor.WHOLE_WORD:
        probes += ["क" + rule.pattern, "अ" + rule.pattern]
    probes += sorted(rule.exceptions)
    return probes


def audit_rules(rules: RuleSet) -> AuditReport:
    """Check every rule's own probes for single-pass idempotence.

    Also lists rules that can never fire first (an earlier row has the
    same pattern and anchor), self-mapping rows, and rows whose pattern
    cannot survive :func:`~sanskrit_ats.devanagari.normalize`.
    """
    report = AuditReport()
    seen = set()
    for rule in rules:
        key = (rule.pattern, rule.anchor)
        if key in seen:
            report.shadowed.append(rule)
        seen.add(key)
        if rule.kind == "identity":
            report.identity.append(rule)
        if not rule.reachable:
            report.unreachable.append(rule)
            continue
        for probe in _probes(rule):
            once = apply_common_patterns(probe, rules)
            twice = apply_common_patterns(once, rules)
            if once != twice:
                report.non_idempotent.append(AuditFailure(rule, probe, once, twice))
    return report
