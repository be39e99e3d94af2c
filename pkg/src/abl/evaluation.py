"""Crossing-bracket metrics, trial aggregation, branching baselines, recursion report."""

from __future__ import annotations

import statistics
from dataclasses import dataclass, field
from typing import Iterable, NamedTuple, Sequence

from .corpus import Span, crossing

METRICS = ("ncbp", "ncbr", "zcs")


class MetricError(ValueError):
    pass


def crosses(a: Span, b: Span) -> bool:
    return crossing(a, b)


def cross_set(u: Iterable, v: Iterable) -> set:
    """Members of ``u`` crossing at least one member of ``v``."""
    v = list(v)
    return {a for a in u if any(crossing(a, b) for b in v)}


def _spans(groups) -> list[set]:
    return [{Span(s[0], s[1]) for s in g} for g in groups]


def _check(learned, gold):
    if len(learned) != len(gold):
        raise MetricError(f"{len(learned)} learned sentences vs {len(gold)} gold sentences")


def ncbp(learned: Sequence[Iterable], gold: Sequence[Iterable]) -> float:
    learned, gold = _spans(learned), _spans(gold)
    _check(learned, gold)
    total = sum(len(o) for o in learned)
    if total == 0:
        raise MetricError("no learned constituents")
    bad = sum(len(cross_set(o, t)) for o, t in zip(learned, gold))
    return 100.0 * (total - bad) / total


def ncbr(learned: Sequence[Iterable], gold: Sequence[Iterable]) -> float:
    learned, gold = _spans(learned), _spans(gold)
    _check(learned, gold)
    total = sum(len(t) for t in gold)
    if total == 0:
        raise MetricError("no gold constituents")
    bad = sum(len(cross_set(t, o)) for o, t in zip(learned, gold))
    return 100.0 * (total - bad) / total


def zcs(learned: Sequence[Iterable], gold: Sequence[Iterable]) -> float:
    learned, gold = _spans(learned), _spans(gold)
    _check(learned, gold)
    if not learned:
        raise MetricError("empty corpus")
    clean = sum(1 for o, t in zip(learned, gold) if not cross_set(o, t))
    return 100.0 * clean / len(learned)


def drop_trivial(spans: Iterable, length: int) -> set:
    """Remove width-1 and whole-sentence brackets."""
    return {Span(s[0], s[1]) for s in spans if s[1] - s[0] > 1 and not (s[0] == 0 and s[1] == length)}


@dataclass
class MetricsReport:
    ncbp: float
    ncbr: float
    zcs: float
    sentences: int
    learned_constituents: int
    gold_constituents: int
    trials: list[dict] = field(default_factory=list)
    std: dict = field(default_factory=lambda: {m: 0.0 for m in METRICS})

    def mean(self, metric: str) -> float:
        return getattr(self, metric)

    def as_dict(self) -> dict:
        out = {}
        for m in METRICS:
            out[f"{m}_mean"] = f"{getattr(self, m):.2f}"
            out[f"{m}_std"] = f"{self.std[m]:.2f}"
        out["sentences"] = str(self.sentences)
        out["learned_constituents"] = str(self.learned_constituents)
        out["gold_constituents"] = str(self.gold_constituents)
        out["trials"] = str(max(1, len(self.trials)))
        for i, t in enumerate(self.trials, start=1):
            for m in METRICS:
                out[f"trial{i:02d}_{m}"] = f"{t[m]:.4f}"
        return out


def evaluate(learned: Sequence[Iterable], gold: Sequence[Iterable], lengths: Sequence[int] = None,
             exclude_trivial: bool = False) -> MetricsReport:
    learned, gold = _spans(learned), _spans(gold)
    _check(learned, gold)
    if exclude_trivial:
        if lengths is None:
            raise ValueError("excluding trivial brackets needs sentence lengths")
        learned = [drop_trivial(o, n) for o, n in zip(learned, lengths)]
        gold = [drop_trivial(t, n) for t, n in zip(gold, lengths)]
    values = {"ncbp": ncbp(learned, gold), "ncbr": ncbr(learned, gold), "zcs": zcs(learned, gold)}
    return MetricsReport(
        sentences=len(learned),
        learned_constituents=sum(map(len, learned)),
        gold_constituents=sum(map(len, gold)),
        trials=[values],
        **values,
    )


def aggregate(trials: Sequence[MetricsReport]) -> MetricsReport:
    """Mean and population standard deviation of each metric over trials."""
    if not trials:
        raise ValueError("no trials to aggregate")
    rows = [{m: getattr(t, m) for m in METRICS} for t in trials]
    means = {m: statistics.fmean(r[m] for r in rows) for m in METRICS}
    std = {m: statistics.pstdev([r[m] for r in rows]) for m in METRICS}
    first = trials[0]
    return MetricsReport(
        sentences=first.sentences,
        learned_constituents=round(statistics.fmean(t.learned_constituents for t in trials)),
        gold_constituents=first.gold_constituents,
        trials=rows,
        std=std,
        **means,
    )


def format_table(report: MetricsReport, title: str = "") -> str:
    lines = []
    if title:
        lines.append(title)
    lines.append(f"{'metric':<8}{'mean':>8}{'stddev':>9}")
    for m in METRICS:
        lines.append(f"{m.upper():<8}{getattr(report, m):>8.2f}{report.std[m]:>9.2f}")
    return "\n".join(lines) + "\n"


def format_row(name: str, report: MetricsReport) -> str:
    """One line shaped like a results-table row: ``name  mean (std) ...``."""
    cells = "  ".join(f"{getattr(report, m):6.2f} ({report.std[m]:.2f})" for m in METRICS)
    return f"{name:<16}{cells}"


def format_keyvalue(report: MetricsReport) -> str:
    return "".join(f"{k}={v}\n" for k, v in report.as_dict().items())


def right_branching(length: int) -> set[Span]:
    return {Span(i, length) for i in range(max(0, length - 1))} | {Span(0, length)}


def left_branching(length: int) -> set[Span]:
    return {Span(0, i) for i in range(2, length + 1)} | {Span(0, length)}


class RecursionInstance(NamedTuple):
    sid: int
    outer: Span
    inner: Span
    nt: int


def recursion_report(chosen: Sequence[Sequence]) -> list[RecursionInstance]:
    """Same-type pairs where one selected span strictly contains another.

    ``chosen`` holds, per sentence, hypotheses with ``span`` and canonical ``nt``.
    """
    out = []
    for sid, hyps in enumerate(chosen):
        for outer in hyps:
            for inner in hyps:
                if outer.nt != inner.nt or outer.span == inner.span:
                    continue
                if outer.span.begin <= inner.span.begin and inner.span.end <= outer.span.end:
                    out.append(RecursionInstance(sid, outer.span, inner.span, outer.nt))
    return sorted(out)
