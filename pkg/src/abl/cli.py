"""Command line: ``abl {learn,select,eval,baseline,run}``.

Exit codes: 0 success, 1 usage or configuration error, 2 data error.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .corpus import (Corpus, StructureError, TreebankError, parse_plain, parse_treebank, strip,
                     write_brackets)
from .evaluation import (MetricError, evaluate, format_keyvalue, format_row, format_table,
                         left_branching, right_branching)
from .experiment import (ALIGNMENTS, ConfigError, RunConfig, format_manifest, parse_manifest,
                         run_experiment, sha256_file, write_atomic)
from .hypothesis import HypothesisSpace, incr_filter, learn
from .selection import METHODS, VARIANTS, select_corpus


class UsageError(Exception):
    pass


class DataError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _read(path) -> str:
    try:
        return Path(path).read_text(encoding="utf-8", errors="surrogateescape")
    except OSError as e:
        raise DataError(f"cannot read {path}: {e.strerror}") from None


def _config(args, **extra) -> RunConfig:
    try:
        return RunConfig(
            alignment=args.alignment,
            selection=args.selection,
            mean=args.mean,
            min_length=args.min_length,
            **extra,
        )
    except ConfigError as e:
        raise UsageError(str(e)) from None


def cmd_learn(args) -> int:
    config = _config(args)
    corpus = parse_plain(_read(args.corpus))
    if not len(corpus):
        raise DataError(f"{args.corpus}: empty corpus")
    filt = incr_filter if config.selection == "incr" else None
    space = learn(corpus, config.alignment, filt, config.min_length)
    out = Path(args.output)
    write_atomic(out / "space.tsv", space.to_table())
    write_atomic(out / "space.manifest", format_manifest({
        "command": "learn",
        "corpus": args.corpus,
        "corpus_sha256": corpus.checksum(),
        "alignment": config.alignment,
        "selection": config.selection,
        "min_length": config.min_length,
        "sentences": len(corpus),
        "hypotheses": len(space),
        "types": len(space.canonical_types()),
        "pair_alignments": space.alignments_done,
        "flagged_pairs": " ".join(f"{a}-{b}" for a, b in space.flagged_pairs) or "none",
    }))
    print(f"{len(space)} hypotheses over {len(corpus)} sentences -> {out / 'space.tsv'}")
    return 0


def cmd_select(args) -> int:
    config = _config(args)
    space_path = Path(args.space)
    try:
        space = HypothesisSpace.from_table(_read(space_path))
    except ValueError as e:
        raise DataError(f"{space_path}: {e}") from None
    checksum = space.corpus.checksum()
    manifest_path = space_path.with_suffix(".manifest")
    if manifest_path.exists():
        expected = parse_manifest(_read(manifest_path)).get("corpus_sha256")
        if expected and expected != checksum:
            raise DataError(f"{space_path} does not match the corpus recorded in {manifest_path}")
    if args.corpus is not None and parse_plain(_read(args.corpus)).checksum() != checksum:
        raise DataError(f"{space_path} was not learned from {args.corpus}")
    try:
        outcome = select_corpus(space, config.selection, config.mean, args.seed)
    except ValueError as e:
        raise DataError(str(e)) from None
    out = Path(args.output)
    write_atomic(out / "selected.txt", write_brackets(space.corpus.sentences, outcome.structures()))
    write_atomic(out / "selected.manifest", format_manifest({
        "command": "select",
        "space_sha256": sha256_file(space_path),
        "corpus_sha256": checksum,
        "selection": config.selection,
        "mean": config.mean,
        "seed": args.seed,
        "constituents": sum(map(len, outcome.chosen)),
    }))
    print(f"{sum(map(len, outcome.chosen))} constituents -> {out / 'selected.txt'}")
    return 0


def _load_treebank(path):
    try:
        return parse_treebank(_read(path))
    except TreebankError as e:
        raise DataError(f"{path}: {e}") from None


def _first_mismatch(a: Corpus, b: Corpus):
    for i, (x, y) in enumerate(zip(a, b)):
        if x.words != y.words:
            return i
    return None if len(a) == len(b) else min(len(a), len(b))


def _evaluate_files(learned_path, gold_path, exclude_trivial):
    learned, gold = _load_treebank(learned_path), _load_treebank(gold_path)
    bad = _first_mismatch(learned.corpus, gold.corpus)
    if bad is not None:
        raise DataError(f"sentence {bad} differs between {learned_path} and {gold_path}")
    try:
        return evaluate([learned.spans(i) for i in range(len(learned))],
                        [gold.spans(i) for i in range(len(gold))],
                        [len(s) for s in gold.corpus], exclude_trivial)
    except MetricError as e:
        raise DataError(str(e)) from None


def _emit_metrics(report, output, title):
    print(format_table(report, title), end="")
    if output:
        write_atomic(Path(output) / "metrics.txt", format_keyvalue(report))


def cmd_eval(args) -> int:
    report = _evaluate_files(args.learned, args.gold, args.exclude_trivial_brackets)
    _emit_metrics(report, args.output, f"{args.learned} vs {args.gold}")
    return 0


def cmd_baseline(args) -> int:
    corpus = strip(_load_treebank(args.input))
    chain = right_branching if args.direction == "right" else left_branching
    structures = [[(sp.begin, sp.end, 0) for sp in chain(len(s))] for s in corpus]
    out = Path(args.output)
    target = out / f"baseline-{args.direction}.txt"
    write_atomic(target, write_brackets(corpus.sentences, structures))
    print(f"{args.direction}-branching brackets -> {target}")
    if args.gold:
        report = _evaluate_files(target, args.gold, args.exclude_trivial_brackets)
        _emit_metrics(report, out, f"{args.direction}-branching vs {args.gold}")
    return 0


def cmd_run(args) -> int:
    if args.manifest:
        try:
            config = RunConfig.from_items(parse_manifest(_read(args.manifest)))
        except (ConfigError, ValueError) as e:
            raise UsageError(f"{args.manifest}: {e}") from None
        recorded = parse_manifest(_read(args.manifest)).get("gold_sha256")
        if recorded and Path(config.gold).exists() and recorded != sha256_file(config.gold):
            raise DataError(f"{config.gold} changed since {args.manifest} was written")
    else:
        if not args.gold:
            raise UsageError("run needs --gold or --manifest")
        config = _config(args, trials=args.trials, seed=args.seed, shuffle=not args.no_shuffle,
                         exclude_trivial_brackets=args.exclude_trivial_brackets, gold=args.gold)
    treebank = _load_treebank(config.gold)
    if not len(treebank):
        raise DataError(f"{config.gold}: empty treebank")
    try:
        exp = run_experiment(config, treebank)
    except MetricError as e:
        raise DataError(str(e)) from None
    out = Path(args.output)
    sentences = strip(treebank).sentences
    for i, trial in enumerate(exp.trials, start=1):
        write_atomic(out / "trials" / f"trial-{i:02d}.txt", write_brackets(sentences, trial.learned))
    header = f"{'system':<16}{'NCBP':>6}{'':8}{'NCBR':>6}{'':8}{'ZCS':>6}\n"
    summary = header + format_row(config.name, exp.summary) + "\n"
    write_atomic(out / "summary.txt", summary)
    write_atomic(out / "metrics.txt", format_keyvalue(exp.summary))
    write_atomic(out / "manifest.txt", format_manifest({
        "command": "run",
        **config.items(),
        "gold_sha256": sha256_file(config.gold),
        "trial_seeds": ",".join(str(t.seed) for t in exp.trials),
        "flagged_pairs": exp.flagged_pairs,
    }))
    print(summary, end="")
    return 0


def _add_method_args(p, selection_default="branch"):
    p.add_argument("--alignment", choices=ALIGNMENTS, default="default")
    p.add_argument("--selection", choices=METHODS, default=selection_default)
    p.add_argument("--mean", choices=VARIANTS, default=None,
                   help="leaf/branch only; default geo")
    p.add_argument("--min-length", type=int, default=2,
                   help="sentences shorter than this are not aligned (default 2)")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="abl", description="Alignment-Based Learning toolkit")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("learn", help="align a plain corpus into a hypothesis space")
    p.add_argument("corpus")
    _add_method_args(p)
    p.add_argument("--output", required=True)
    p.set_defaults(func=cmd_learn)

    p = sub.add_parser("select", help="select non-crossing constituents from a space file")
    p.add_argument("space")
    p.add_argument("--corpus", help="plain corpus the space must match")
    _add_method_args(p)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--output", required=True)
    p.set_defaults(func=cmd_select)

    p = sub.add_parser("eval", help="NCBP/NCBR/ZCS of a bracket file against a gold treebank")
    p.add_argument("learned")
    p.add_argument("gold")
    p.add_argument("--exclude-trivial-brackets", action="store_true")
    p.add_argument("--output")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("baseline", help="right- or left-branching brackets")
    p.add_argument("input", help="plain corpus or treebank")
    p.add_argument("--direction", choices=("right", "left"), default="right")
    p.add_argument("--gold")
    p.add_argument("--exclude-trivial-brackets", action="store_true")
    p.add_argument("--output", required=True)
    p.set_defaults(func=cmd_baseline)

    p = sub.add_parser("run", help="repeated trials of one system against a gold treebank")
    p.add_argument("--gold")
    p.add_argument("--manifest", help="re-run the configuration recorded in a run manifest")
    _add_method_args(p)
    p.add_argument("--trials", type=int, default=10)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--no-shuffle", action="store_true", help="keep corpus order in incr trials")
    p.add_argument("--exclude-trivial-brackets", action="store_true")
    p.add_argument("--output", required=True)
    p.set_defaults(func=cmd_run)
    return parser


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as e:  # --help, or a usage error already reported
        return e.code if isinstance(e.code, int) else 1
    try:
        return args.func(args)
    except UsageError as e:
        print(f"abl: {e}", file=sys.stderr)
        return 1
    except (DataError, TreebankError, StructureError) as e:
        print(f"abl: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
