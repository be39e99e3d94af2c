"""Show the same-type nested constituents each system learns on a small corpus.

    python3 scripts/recursion_demo.py [CORPUS]
"""

import sys
from pathlib import Path

from abl.corpus import parse_plain
from abl.evaluation import recursion_report
from abl.experiment import ALIGNMENTS
from abl.hypothesis import incr_filter, learn
from abl.selection import select_corpus

NESTED = """show me the airport of the name of the airport
show me the code
show me the price of the price
what is the code
what is the code of the airport of the name
what is the price of the airport
what is the price of the name of the airport
"""


def show(words, span):
    return " ".join(words[span[0]:span[1]])


def main():
    corpus = parse_plain(Path(sys.argv[1]).read_text() if len(sys.argv) > 1 else NESTED)
    for alignment in ALIGNMENTS:
        for method, mean in (("incr", None), ("leaf", "geo"), ("leaf", "geo+"), ("branch", "geo"), ("branch", "geo+")):
            space = learn(corpus, alignment, incr_filter if method == "incr" else None)
            chosen = select_corpus(space, method, mean, seed=1).chosen
            found = recursion_report(chosen)
            name = f"{alignment}:{method}{'+' if mean == 'geo+' else ''}"
            print(f"{name:<16}{len(found)} nested pair(s)")
            for r in found[:3]:
                words = corpus[r.sid].words
                print(f"    type {r.nt}: [{show(words, r.outer)}] contains [{show(words, r.inner)}]")


if __name__ == "__main__":
    main()
