"""Run configuration, manifests and the repeated-trial experiment runner."""

from __future__ import annotations

import hashlib
import os
import random
import tempfile
from dataclasses import dataclass, field, fields
from pathlib import Path
from typing import Optional

from . import __version__
from .corpus import Corpus, TreeBank, strip
from .evaluation import MetricsReport, aggregate, evaluate
from .hypothesis import HypothesisSpace, incr_filter, learn
from .selection import METHODS, VARIANTS, select_corpus

ALIGNMENTS = ("default", "biased", "all")


class ConfigError(ValueError):
    pass


@dataclass
class RunConfig:
    alignment: str = "default"
    selection: str = "branch"
    mean: Optional[str] = None
    trials: int = 10
    seed: int = 0
    shuffle: bool = True
    min_length: int = 2
    exclude_trivial_brackets: bool = False
    gold: Optional[str] = None

    def __post_init__(self):
        if self.alignment not in ALIGNMENTS:
            raise ConfigError(f"unknown alignment {self.alignment!r}")
        if self.selection not in METHODS:
            raise ConfigError(f"unknown selection {self.selection!r}")
        if self.selection == "incr":
            if self.mean is not None:
                raise ConfigError("--mean applies to leaf and branch only")
        elif self.mean is None:
            self.mean = "geo"
        elif self.mean not in VARIANTS:
            raise ConfigError(f"unknown mean {self.mean!r}")
        if self.trials < 1:
            raise ConfigError("trials must be at least 1")
        if not 0 <= self.seed < 2**64:
            raise ConfigError("seed must fit in 64 bits")
        if self.min_length < 1:
            raise ConfigError("min length must be at least 1")

    @property
    def name(self) -> str:
        return f"{self.alignment}:{self.selection}{'+' if self.mean == 'geo+' else ''}"

    def items(self) -> dict[str, str]:
        return {f.name: _fmt(getattr(self, f.name)) for f in fields(self)}

    @classmethod
    def from_items(cls, items: dict[str, str]) -> "RunConfig":
        kw = {}
        for f in fields(cls):
            if f.name not in items:
                continue
            raw = items[f.name]
            if f.name in ("trials", "seed", "min_length"):
                kw[f.name] = int(raw)
            elif f.name in ("shuffle", "exclude_trivial_brackets"):
                kw[f.name] = raw == "true"
            else:
                kw[f.name] = None if raw == "none" else raw
        return cls(**kw)


def _fmt(v) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    return "none" if v is None else str(v)


def trial_seeds(seed: int, trials: int) -> list[int]:
    rng = random.Random(seed)
    return [rng.getrandbits(64) for _ in range(trials)]


def sha256_file(path) -> str:
    return hashlib.sha256(Path(path).read_bytes()).hexdigest()


def write_atomic(path, text: str):
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.")
    with os.fdopen(fd, "w", encoding="utf-8", errors="surrogateescape", newline="\n") as fh:
        fh.write(text)
    os.replace(tmp, path)


def format_manifest(items: dict) -> str:
    base = {"tool": "abl", "version": __version__}
    base.update(items)
    return "".join(f"{k}={_fmt(v)}\n" for k, v in base.items())


def parse_manifest(text: str) -> dict[str, str]:
    out = {}
    for line in text.splitlines():
        if line.strip() and not line.startswith("#"):
            k, sep, v = line.partition("=")
            if not sep:
                raise ConfigError(f"bad manifest line {line!r}")
            out[k.strip()] = v.strip()
    return out


@dataclass
class Trial:
    seed: int
    learned: list  # per original sentence: list of (begin, end, type)
    report: MetricsReport


@dataclass
class Experiment:
    config: RunConfig
    trials: list[Trial] = field(default_factory=list)
    summary: Optional[MetricsReport] = None
    flagged_pairs: int = 0


def _learn(corpus: Corpus, config: RunConfig) -> HypothesisSpace:
    filt = incr_filter if config.selection == "incr" else None
    return learn(corpus, config.alignment, filt, config.min_length)


def run_experiment(config: RunConfig, treebank: TreeBank) -> Experiment:
    """Strip the treebank, learn and select ``config.trials`` times, score each trial.

    incr trials differ by a seeded shuffle of the sentence order; leaf and
    branch trials share one learned space and differ by tie-break seed.
    """
    corpus = strip(treebank)
    gold = [treebank.spans(i) for i in range(len(treebank))]
    lengths = [len(s) for s in corpus]
    exp = Experiment(config)
    shared = None
    for seed in trial_seeds(config.seed, config.trials):
        order = list(range(len(corpus)))
        if config.selection == "incr":
            if config.shuffle:
                random.Random(seed).shuffle(order)
            space = _learn(corpus.reordered(order), config)
        else:
            if shared is None:
                shared = _learn(corpus, config)
            space = shared
        exp.flagged_pairs = max(exp.flagged_pairs, len(space.flagged_pairs))
        outcome = select_corpus(space, config.selection, config.mean, seed)
        learned = [None] * len(corpus)
        for pos, structure in enumerate(outcome.structures()):
            learned[order[pos]] = structure
        report = evaluate(learned, gold, lengths, config.exclude_trivial_brackets)
        exp.trials.append(Trial(seed, learned, report))
    exp.summary = aggregate([t.report for t in exp.trials])
    return exp
