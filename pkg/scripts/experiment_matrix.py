"""Run every alignment x selection system plus both branching baselines on a gold treebank.

    python3 scripts/experiment_matrix.py GOLD [--trials 10] [--seed 0] [--output DIR]

Without GOLD a small synthetic treebank is used so the script runs anywhere.
"""

import argparse
from pathlib import Path

from abl.corpus import parse_treebank
from abl.evaluation import evaluate, format_row, left_branching, right_branching
from abl.experiment import ALIGNMENTS, RunConfig, run_experiment, write_atomic

SELECTIONS = [("incr", None), ("leaf", "geo"), ("leaf", "geo+"), ("branch", "geo"), ("branch", "geo+")]

SYNTHETIC = """(S (V show me ) (NP the flights (PP from Dallas ) (PP to Boston ) ) )
(S (V show me ) (NP the fares (PP from Denver ) ) )
(S (V show me ) (NP the flights (PP to Boston ) ) )
(S (Q what is ) (NP the price (PP of (NP the flights (PP to Dallas ) ) ) ) )
(S (Q what is ) (NP the code (PP of (NP the fares ) ) ) )
(S (Q what is ) (NP the price (PP of (NP the fares (PP from Boston ) ) ) ) )
(S (V give me ) (NP all flights (PP from Dallas ) (PP to Denver ) ) )
(S (V give me ) (NP the code ) )
"""


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("gold", nargs="?")
    ap.add_argument("--trials", type=int, default=10)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--exclude-trivial-brackets", action="store_true")
    ap.add_argument("--output")
    args = ap.parse_args()

    treebank = parse_treebank(Path(args.gold).read_text() if args.gold else SYNTHETIC)
    gold = [treebank.spans(i) for i in range(len(treebank))]
    lengths = [len(s) for s in treebank.corpus]

    rows = [f"{'system':<16}{'NCBP':>6}{'':8}{'NCBR':>6}{'':8}{'ZCS':>6}"]
    for name, chain in (("right-branching", right_branching), ("left-branching", left_branching)):
        report = evaluate([chain(n) for n in lengths], gold, lengths, args.exclude_trivial_brackets)
        rows.append(format_row(name, report))
    for alignment in ALIGNMENTS:
        for selection, mean in SELECTIONS:
            config = RunConfig(alignment=alignment, selection=selection, mean=mean, trials=args.trials,
                               seed=args.seed, exclude_trivial_brackets=args.exclude_trivial_brackets)
            rows.append(format_row(config.name, run_experiment(config, treebank).summary))
            print(rows[-1], flush=True)
    table = "\n".join(rows) + "\n"
    print()
    print(table, end="")
    if args.output:
        write_atomic(Path(args.output) / "matrix.txt", table)


if __name__ == "__main__":
    main()
