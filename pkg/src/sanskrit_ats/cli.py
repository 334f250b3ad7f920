"""Command-line entry point.

Every subcommand writes into the output directory (``--out``, default
``out``) and prints one summary line on stdout; logs go to stderr.
Exit status is 0 on success, 1 on a usage error and 2 on a data error.

Stage layout under the output directory::

    clean/<source>/<file>     normalized text
    split/<source>/<file>     sandhi-split text (copied when split=false)
    split/report.tsv          token counts and rule fire counts
    lm/<source>.txt           <para_id>TAB<sentence> per source
    lm/corpus.txt, lm/train.txt, lm/test.txt
    sum/pairs.csv, sum/train.csv, sum/test.csv
    stats/corpus_stats.txt, stats/per_source.tsv, stats/summary_stats.txt
"""
from __future__ import annotations

import argparse
import logging
import sys
from collections import Counter
from pathlib import Path

from . import corpus, human_eval, ledger, rouge, sandhi, summetrics
from .config import ConfigError, PipelineConfig
from .devanagari import normalize, tokenize

log = logging.getLogger("sanskrit_ats")

COMMANDS = ("clean", "split-sandhi", "build-lm", "build-sum", "stats",
            "rouge", "ledger", "humaneval", "pipeline")

DATA_ERRORS = (ValueError, OSError, KeyError)


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(1)


def _write(path: Path, text: str) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text, encoding="utf-8", newline="\n")


def _stage_path(out: Path, stage: str, src: corpus.SourceSpec, original: str) -> Path:
    return out / stage / src.name / Path(original).name


def _check_names(src: corpus.SourceSpec) -> None:
    names = [Path(p).name for p in src.inputs]
    dupes = sorted(n for n, k in Counter(names).items() if k > 1)
    if dupes:
        raise ValueError(f"source {src.name}: duplicate file names {dupes}")


def _transform(src: corpus.SourceSpec, text: str, fn) -> str:
    """Apply ``fn`` to a file body; journal files keep their three lines."""
    if src.kind == "journal":
        fields = text.split("\n")[:3]
        fields += [""] * (3 - len(fields))
        return "\n".join(fn(" ".join(f.split())) for f in fields) + "\n"
    out = fn(text)
    return out + "\n" if out else ""


# -- stages -----------------------------------------------------------------

def stage_clean(sources, out: Path, from_stage: str | None = None) -> str:
    files = lines = 0
    for src in sources:
        _check_names(src)
        for p in src.inputs:
            text = _transform(src, Path(p).read_text(encoding="utf-8"), normalize)
            _write(_stage_path(out, "clean", src, p), text)
            files += 1
            lines += text.count("\n")
    return f"clean: {files} files, {lines} lines -> {out / 'clean'}"


def stage_split(sources, out: Path, rules, word_splits, read_from: str | None = "clean") -> str:
    fires: Counter = Counter()
    before_all, after_all = [], []
    files = 0
    for src in sources:
        _check_names(src)
        for p in src.inputs:
            inp = _stage_path(out, read_from, src, p) if read_from else Path(p)
            raw = inp.read_text(encoding="utf-8")
            text = _transform(src, raw, normalize)
            if src.split_sandhi:
                result = _transform(
                    src, raw, lambda t: sandhi.split_sandhi(normalize(t), rules, word_splits, fires))
            else:
                result = text
            _write(_stage_path(out, "split", src, p), result)
            before_all.append(text)
            after_all.append(result)
            files += 1
    report = sandhi.split_report("\n".join(before_all), "\n".join(after_all), fires)
    lines = [
        f"# total_before={report.total_before} total_after={report.total_after}",
        f"# unique_before={report.unique_before} unique_after={report.unique_after}",
        "line\tpattern\tanchor\tfires",
    ]
    for rule in sorted(fires, key=lambda r: r.line):
        lines.append(f"{rule.line}\t{rule.pattern}\t{rule.anchor.value}\t{fires[rule]}")
    _write(out / "split" / "report.tsv", "\n".join(lines) + "\n")
    return (f"split-sandhi: {files} files, tokens {report.total_before}->{report.total_after}, "
            f"unique {report.unique_before}->{report.unique_after}, {sum(fires.values())} rule fires")


def _articles(src, paths):
    for p in paths:
        text = Path(p).read_text(encoding="utf-8")
        if src.kind == "journal":
            _, doc, summ = corpus.read_journal_article(p)
            text = f"{doc}\n\n{summ}"
        yield text


def _source_inputs(out: Path, src, read_from: str | None):
    return [_stage_path(out, read_from, src, p) if read_from else Path(p) for p in src.inputs]


def stage_build_lm(sources, out: Path, ratio: float, seed: int, read_from: str | None = "split",
                   dedup: bool = False) -> str:
    all_records = []
    for src in sources:
        paras = corpus.source_paragraphs(_articles(src, _source_inputs(out, src, read_from)), src)
        records = corpus.lm_records(paras)
        corpus.write_lm_corpus(records, _ensure(out / "lm" / f"{src.name}.txt"))
        all_records += records
    if dedup:
        all_records = corpus.dedup_merge(all_records, [], key=lambda r: r.sentence)
    corpus.write_lm_corpus(all_records, out / "lm" / "corpus.txt")
    if all_records:
        train, test = corpus.shuffle_split(all_records, ratio, seed)
    else:
        train, test = [], []
    corpus.write_lm_corpus(train, out / "lm" / "train.txt")
    corpus.write_lm_corpus(test, out / "lm" / "test.txt")
    ids = len({r.para_id for r in all_records})
    return f"build-lm: {len(all_records)} sentences, {ids} paragraph ids, train {len(train)} / test {len(test)}"


def stage_build_sum(sources, out: Path, ratio: float, seed: int, read_from: str | None = "split") -> str:
    pairs = []
    skipped = 0
    for src in sources:
        paths = _source_inputs(out, src, read_from)
        if src.kind == "first-sentence":
            paras = corpus.source_paragraphs(_articles(src, paths), src)
            pairs += corpus.first_sentence_pairs(paras)
        elif src.kind == "journal":
            result = corpus.journal_triples((corpus.read_journal_article(p) for p in paths), src.base_id)
            pairs += result.pairs
            skipped += result.skipped
    corpus.write_pairs(pairs, _ensure(out / "sum" / "pairs.csv"))
    if pairs:
        train, test = corpus.shuffle_split(pairs, ratio, seed)
    else:
        train, test = [], []
    corpus.write_pairs(train, out / "sum" / "train.csv")
    corpus.write_pairs(test, out / "sum" / "test.csv")
    return f"build-sum: {len(pairs)} pairs ({skipped} skipped), train {len(train)} / test {len(test)}"


def _ensure(path: Path) -> Path:
    path.parent.mkdir(parents=True, exist_ok=True)
    return path


def stage_stats(out: Path, lm_files: dict, pairs_file: Path | None, assessment: Path | None = None) -> str:
    groups = {name: corpus.read_lm_corpus(p) for name, p in lm_files.items()}
    stats = summetrics.corpus_stats(groups)
    _write(out / "stats" / "corpus_stats.txt", stats.report())
    _write(out / "stats" / "per_source.tsv", stats.table())
    msg = f"stats: {stats.sentence_count} sentences, {stats.total_tokens} tokens, {stats.unique_tokens} unique"

    if pairs_file is not None and pairs_file.exists():
        pairs = corpus.read_pairs(pairs_file)
        rows = ["id\tdoc_tokens\tsummary_tokens\tcompression_rate\tnovel_1\tnovel_2"]
        cr, n1, n2 = [], [], []
        for p in pairs:
            s_len, d_len = len(tokenize(p.summary)), len(tokenize(p.document))
            c = summetrics.compression_rate(p)
            u = summetrics.novel_ngram_pct(p, 1)
            b = summetrics.novel_ngram_pct(p, 2) if s_len >= 2 else float("nan")
            cr.append(c)
            n1.append(u)
            if s_len >= 2:
                n2.append(b)
            rows.append(f"{p.id}\t{d_len}\t{s_len}\t{c:.3f}\t{u:.1f}\t{b:.1f}")
        _write(out / "stats" / "pairs.tsv", "\n".join(rows) + "\n")
        mean = lambda xs: sum(xs) / len(xs) if xs else float("nan")  # noqa: E731
        _write(out / "stats" / "summary_stats.txt",
               f"pairs={len(pairs)}\nmean_compression_rate={mean(cr):.3f}\n"
               f"novel_unigram_pct={mean(n1):.1f}\nnovel_bigram_pct={mean(n2):.1f}\n")
        msg += f"; {len(pairs)} pairs, novel unigrams {mean(n1):.1f}%"

    if assessment is not None:
        suit = summetrics.assess_suitability(summetrics.load_assessment(assessment)).rounded(1)
        lines = [f"{k}_pct={v}" for k, v in suit.percentages.items()] + [f"worthy_pct={suit.worthy_pct}"]
        _write(out / "stats" / "assessment.txt", "\n".join(lines) + "\n")
        msg += f"; worthy {suit.worthy_pct}%"
    return msg


# -- argument handling --------------------------------------------------------

def _config(args) -> PipelineConfig:
    cfg = PipelineConfig.from_file(args.config) if args.config else PipelineConfig()
    if args.seed is not None:
        cfg.seed = args.seed
    if args.out is not None:
        cfg.out = Path(args.out)
    return cfg


def _sources(args, cfg, kind: str = "lm"):
    """Sources from the manifest, or one ad-hoc source built from FILES."""
    if args.files:
        spec = corpus.SourceSpec(
            name=args.source, base_id=getattr(args, "base_id", 0),
            has_paragraph_ids=not getattr(args, "no_paragraph_ids", False),
            kind=getattr(args, "kind", None) or kind, inputs=tuple(args.files),
        )
        return [spec], None
    manifest = args.manifest or cfg.manifest
    if manifest is None:
        raise UsageError("give input FILES, --manifest, or a --config naming a manifest")
    return corpus.load_manifest(manifest), True


def _rules(args, cfg):
    path = getattr(args, "rules", None) or cfg.rules
    return sandhi.load_rules(path) if path else sandhi.default_rules()


def _word_splits(args, cfg):
    path = getattr(args, "word_splits", None) or cfg.word_splits
    return sandhi.load_word_splits(path) if path else {}


def cmd_clean(args, cfg):
    sources, _ = _sources(args, cfg)
    return stage_clean(sources, cfg.out)


def cmd_split(args, cfg):
    sources, staged = _sources(args, cfg)
    return stage_split(sources, cfg.out, _rules(args, cfg), _word_splits(args, cfg),
                       read_from="clean" if staged else None)


def cmd_build_lm(args, cfg):
    sources, staged = _sources(args, cfg)
    ratio = args.train_ratio or cfg.train_ratio_lm
    return stage_build_lm(sources, cfg.out, ratio, cfg.seed,
                          read_from="split" if staged else None, dedup=args.dedup)


def cmd_build_sum(args, cfg):
    sources, staged = _sources(args, cfg, kind="first-sentence")
    ratio = args.train_ratio or cfg.train_ratio_sum
    return stage_build_sum(sources, cfg.out, ratio, cfg.seed, read_from="split" if staged else None)


def cmd_stats(args, cfg):
    if args.lm:
        lm_files = {Path(p).stem: Path(p) for p in args.lm}
        pairs = Path(args.pairs) if args.pairs else None
    else:
        manifest = args.manifest or cfg.manifest
        if manifest is None:
            raise UsageError("give --lm files, --manifest, or a --config naming a manifest")
        lm_files = {s.name: cfg.out / "lm" / f"{s.name}.txt" for s in corpus.load_manifest(manifest)}
        pairs = Path(args.pairs) if args.pairs else cfg.out / "sum" / "pairs.csv"
    assessment = Path(args.assessment) if args.assessment else None
    return stage_stats(cfg.out, lm_files, pairs, assessment)


def cmd_rouge(args, cfg):
    if args.pairs:
        rows = rouge.read_pairs_tsv(args.pairs)
    elif args.ref and args.hyp:
        refs, hyps = rouge.read_texts_tsv(args.ref), rouge.read_texts_tsv(args.hyp)
        missing = sorted(set(refs) ^ set(hyps))
        if missing:
            raise ValueError(f"ids present in only one file: {missing[:5]}")
        rows = [(i, refs[i], hyps[i]) for i in refs]
    else:
        raise UsageError("give --pairs, or both --ref and --hyp")
    pairs = [(normalize(r), normalize(h)) for _, r, h in rows]
    table = rouge.rouge_batch(pairs)
    _write(cfg.out / "rouge.tsv", rouge.format_table(table))
    if args.detail:
        lines = ["id\tvariant\trecall\tprecision\tf1"]
        for (pid, _, _), (r, h) in zip(rows, pairs):
            for v in rouge.VARIANTS:
                s = rouge.score(r, h, v)
                lines.append(f"{pid}\t{v}\t{s.recall:.3f}\t{s.precision:.3f}\t{s.f1:.3f}")
        _write(cfg.out / "rouge_pairs.tsv", "\n".join(lines) + "\n")
    fs = " ".join(f"{v}={s.f1:.3f}" for v, s in table.items())
    return f"rouge: {len(pairs)} pairs, F1 {fs}"


def cmd_ledger(args, cfg):
    ledgers = [ledger.load_fixture(n) for n in args.fixture or ()]
    ledgers += [ledger.load_ledger(p) for p in args.files]
    if not ledgers:
        raise UsageError("give ledger FILES or --fixture NAME")
    parts = []
    for lg in ledgers:
        _write(cfg.out / "ledger" / f"{lg.name}.tsv",
               ledger.summarize(lg, args.patience, args.min_delta, args.epsilon))
        es = ledger.early_stop(lg.records, args.patience, args.min_delta)
        parts.append(f"{lg.name} {len(lg)} epochs best={es.best_epoch} stop={es.stop_epoch} "
                     f"ppl_mismatches={len(lg.mismatches)}")
    return "ledger: " + "; ".join(parts)


def cmd_humaneval(args, cfg):
    if not args.ratings and not args.votes:
        raise UsageError("give --ratings and/or --votes")
    parts = []
    if args.ratings:
        ratings = human_eval.load_ratings(args.ratings)
        qualities = [q for q in human_eval.QUALITIES if any(r.quality == q for r in ratings)]
        for q in qualities:
            counts = human_eval.scaled_counts(ratings, q, args.threshold)
            _write(cfg.out / "humaneval" / f"scaled_{q}.tsv", human_eval.scaled_table(counts))
        parts.append(f"{len(ratings)} ratings over {len(qualities)} qualities")
    if args.votes:
        votes = human_eval.load_votes(args.votes)
        scores = human_eval.best_worst(votes)
        _write(cfg.out / "humaneval" / "best_worst.tsv", human_eval.best_worst_table(scores))
        top = human_eval.rank_systems(scores)[0]
        parts.append(f"{len(votes)} votes, top system {top} ({scores[top].score:+d})")
    return "humaneval: " + ", ".join(parts)


def cmd_pipeline(args, cfg):
    if cfg.manifest is None:
        raise UsageError("pipeline needs --config with a manifest")
    sources = corpus.load_manifest(cfg.manifest)
    rules = _rules(args, cfg)
    splits = _word_splits(args, cfg)
    msgs = [
        stage_clean(sources, cfg.out),
        stage_split(sources, cfg.out, rules, splits),
        stage_build_lm(sources, cfg.out, cfg.train_ratio_lm, cfg.seed),
        stage_build_sum(sources, cfg.out, cfg.train_ratio_sum, cfg.seed),
        stage_stats(cfg.out, {s.name: cfg.out / "lm" / f"{s.name}.txt" for s in sources},
                    cfg.out / "sum" / "pairs.csv"),
    ]
    for m in msgs[:-1]:
        log.info(m)
    return "pipeline: " + msgs[-1]


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--config", help="flat key=value pipeline config")
    common.add_argument("--seed", type=int, help="shuffle seed (default 42)")
    common.add_argument("--out", help="output directory (default: out)")
    common.add_argument("-v", "--verbose", action="store_true")

    p = _Parser(prog="sanskrit-ats", description="Sanskrit summarization data toolkit")
    sub = p.add_subparsers(dest="command", parser_class=_Parser)

    def inputs(sp, with_source=True):
        sp.add_argument("files", nargs="*", metavar="FILES")
        sp.add_argument("--manifest", help="source manifest (instead of FILES)")
        if with_source:
            sp.add_argument("--source", default="input", help="source name for FILES")

    sp = sub.add_parser("clean", parents=[common], help="normalize raw text")
    inputs(sp)
    sp.set_defaults(func=cmd_clean)

    sp = sub.add_parser("split-sandhi", parents=[common], help="split sandhi and samyoga")
    inputs(sp)
    sp.add_argument("--rules", help="rule table (default: shipped table)")
    sp.add_argument("--word-splits", help="word<TAB>split dictionary")
    sp.set_defaults(func=cmd_split)

    sp = sub.add_parser("build-lm", parents=[common], help="build the LM sentence corpus")
    inputs(sp)
    sp.add_argument("--base-id", type=int, default=0)
    sp.add_argument("--no-paragraph-ids", action="store_true", help="one id per article")
    sp.add_argument("--train-ratio", type=float)
    sp.add_argument("--dedup", action="store_true", help="drop repeated sentences")
    sp.set_defaults(func=cmd_build_lm)

    sp = sub.add_parser("build-sum", parents=[common], help="build document-summary pairs")
    inputs(sp)
    sp.add_argument("--base-id", type=int, default=0)
    sp.add_argument("--kind", choices=("first-sentence", "journal"))
    sp.add_argument("--train-ratio", type=float)
    sp.set_defaults(func=cmd_build_sum)

    sp = sub.add_parser("stats", parents=[common], help="corpus and summary statistics")
    sp.add_argument("--lm", nargs="+", help="LM corpus files, one source each")
    sp.add_argument("--pairs", help="pairs CSV")
    sp.add_argument("--assessment", help="pair_id,category CSV")
    sp.add_argument("--manifest")
    sp.set_defaults(func=cmd_stats)

    sp = sub.add_parser("rouge", parents=[common], help="ROUGE-1/2/L")
    sp.add_argument("--pairs", help="id<TAB>reference<TAB>hypothesis file")
    sp.add_argument("--ref", help="id<TAB>text references")
    sp.add_argument("--hyp", help="id<TAB>text hypotheses")
    sp.add_argument("--detail", action="store_true", help="also write per-pair scores")
    sp.set_defaults(func=cmd_rouge)

    sp = sub.add_parser("ledger", parents=[common], help="perplexity and early stopping")
    sp.add_argument("files", nargs="*", metavar="FILES")
    sp.add_argument("--fixture", action="append", choices=sorted(ledger.FIXTURES))
    sp.add_argument("--patience", type=int, default=3)
    sp.add_argument("--min-delta", type=float, default=0.0)
    sp.add_argument("--epsilon", type=float, default=0.1)
    sp.set_defaults(func=cmd_ledger)

    sp = sub.add_parser("humaneval", parents=[common], help="aggregate human ratings")
    sp.add_argument("--ratings", help="evaluator,system,quality,score CSV")
    sp.add_argument("--votes", help="evaluator,system,vote CSV")
    sp.add_argument("--threshold", type=int, default=4)
    sp.set_defaults(func=cmd_humaneval)

    sp = sub.add_parser("pipeline", parents=[common], help="clean, split, build, stats")
    sp.set_defaults(func=cmd_pipeline)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    if args.command is None:
        parser.print_usage(sys.stderr)
        return 1
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s", stream=sys.stderr)
    try:
        cfg = _config(args)
        print(args.func(args, cfg))
    except UsageError as e:
        print(f"sanskrit-ats {args.command}: {e}", file=sys.stderr)
        return 1
    except (ConfigError, *DATA_ERRORS) as e:
        print(f"sanskrit-ats {args.command}: {e}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
