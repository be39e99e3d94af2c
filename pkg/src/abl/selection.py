"""Selection learning: pick non-crossing constituents among the hypotheses.

``incr`` is applied while learning (see ``hypothesis.incr_filter``); the
probabilistic methods score each hypothesis by yield frequency (``leaf``) or
yield frequency within its non-terminal (``branch``) and keep the maximal
non-crossing combination with the highest geometric mean.

Only hypotheses that cross something are scored. They split into connected
components of the crossing graph; for each component the maximal non-crossing
subsets are enumerated and reduced to a best log-probability sum per subset
size. Components are then combined by a max-plus recursion over total size,
which also counts the tied optima so one uniform draw can pick among them.
"""

from __future__ import annotations

import math
import random
from collections import Counter
from dataclasses import dataclass, field
from typing import Mapping, Optional, Sequence

from .corpus import crossing
from .hypothesis import Hypothesis, HypothesisSpace

EPS = 1e-12
METHODS = ("incr", "leaf", "branch")
VARIANTS = ("geo", "geo+")


class ProbabilityModel:
    """Counts over every stored hypothesis, sentence-level ones included."""

    def __init__(self, space: HypothesisSpace):
        self.space = space
        self.total = 0
        self.by_yield: Counter = Counter()
        self.by_type: Counter = Counter()
        self.by_type_yield: Counter = Counter()
        for h in space:
            y = space.yield_of(h)
            self.total += 1
            self.by_yield[y] += 1
            self.by_type[h.nt] += 1
            self.by_type_yield[h.nt, y] += 1

    def leaf(self, h: Hypothesis) -> float:
        return self.by_yield[self.space.yield_of(h)] / self.total

    def branch(self, h: Hypothesis) -> float:
        r = self.space.store.canonical(h.nt)
        return self.by_type_yield[r, self.space.yield_of(h)] / self.by_type[r]

    def log_leaf(self, h: Hypothesis) -> float:
        return math.log(self.by_yield[self.space.yield_of(h)]) - math.log(self.total)

    def log_branch(self, h: Hypothesis) -> float:
        r = self.space.store.canonical(h.nt)
        return math.log(self.by_type_yield[r, self.space.yield_of(h)]) - math.log(self.by_type[r])

    def log_probability(self, h: Hypothesis, method: str) -> float:
        if method == "leaf":
            return self.log_leaf(h)
        if method == "branch":
            return self.log_branch(h)
        raise ValueError(f"no probability for method {method!r}")


def p_leaf(h: Hypothesis, space: HypothesisSpace) -> float:
    return ProbabilityModel(space).leaf(h)


def p_branch(h: Hypothesis, space: HypothesisSpace) -> float:
    return ProbabilityModel(space).branch(h)


def combine(probs: Sequence[float], variant: str = "geo"):
    """Geometric mean; ``geo+`` returns ``(mean, count)`` for lexicographic comparison."""
    if any(p <= 0 for p in probs):
        raise ValueError("probabilities must be positive")
    mean = math.exp(math.fsum(math.log(p) for p in probs) / len(probs)) if probs else 1.0
    if variant == "geo":
        return mean
    if variant == "geo+":
        return mean, len(probs)
    raise ValueError(f"unknown variant {variant!r}")


def split_conflicts(hyps: Sequence[Hypothesis]) -> tuple[list[Hypothesis], list[Hypothesis]]:
    """``(free, conflicting)``: hypotheses crossing nothing, and the rest."""
    free, conflicting = [], []
    for h in hyps:
        if any(crossing(h.span, o.span) for o in hyps):
            conflicting.append(h)
        else:
            free.append(h)
    return free, conflicting


def _components(hyps: Sequence[Hypothesis]) -> list[list[int]]:
    n = len(hyps)
    seen = [False] * n
    comps = []
    for start in range(n):
        if seen[start]:
            continue
        seen[start] = True
        stack, comp = [start], []
        while stack:
            v = stack.pop()
            comp.append(v)
            for u in range(n):
                if not seen[u] and crossing(hyps[v].span, hyps[u].span):
                    seen[u] = True
                    stack.append(u)
        comps.append(sorted(comp))
    return comps


def _maximal_compatible_sets(comp: list[int], hyps: Sequence[Hypothesis]):
    """Maximal pairwise non-crossing subsets of ``comp`` (Bron-Kerbosch with pivot)."""
    compat = {v: {u for u in comp if u != v and not crossing(hyps[v].span, hyps[u].span)} for v in comp}

    def expand(r, p, x):
        if not p and not x:
            yield r
            return
        pivot = max(p | x, key=lambda u: (len(p & compat[u]), -u))
        for v in sorted(p - compat[pivot]):
            yield from expand(r + (v,), p & compat[v], x & compat[v])
            p = p - {v}
            x = x | {v}

    yield from expand((), set(comp), set())


def _component_table(comp, hyps, logp):
    # size -> (best log sum, [tied subsets])
    by_size: dict[int, list] = {}
    for subset in _maximal_compatible_sets(comp, hyps):
        by_size.setdefault(len(subset), []).append((math.fsum(logp[v] for v in subset), tuple(sorted(subset))))
    table = {}
    for k, scored in by_size.items():
        best = max(s for s, _ in scored)
        table[k] = (best, sorted(sub for s, sub in scored if best - s <= EPS * k))
    return table


class _Search:
    def __init__(self, hyps: Sequence[Hypothesis], logp: Sequence[float]):
        self.hyps = hyps
        self.tables = [_component_table(c, hyps, logp) for c in _components(hyps)]
        # prefix[c][k] = (best sum, number of tied ways) over the first c components
        self.prefix = [{0: (0.0, 1)}]
        for table in self.tables:
            prev = self.prefix[-1]
            best: dict[int, float] = {}
            for k0, (s0, _) in prev.items():
                for k1, (s1, _) in table.items():
                    k, s = k0 + k1, s0 + s1
                    if k not in best or s > best[k]:
                        best[k] = s
            cur = {}
            for k, s_best in best.items():
                ways = sum(w0 * len(subs) for _, _, w0, subs in self._options(prev, table, k, s_best))
                cur[k] = (s_best, ways)
            self.prefix.append(cur)

    @staticmethod
    def _options(prev, table, k, target):
        for k1 in sorted(table):
            k0 = k - k1
            if k0 in prev:
                s = prev[k0][0] + table[k1][0]
                if abs(s - target) <= EPS * max(k, 1):
                    yield k0, k1, prev[k0][1], table[k1][1]

    def winners(self, variant: str) -> list[tuple[int, float, int]]:
        """Optimal total sizes as ``(size, log sum, ways)``."""
        final = self.prefix[-1]
        means = {k: s / k for k, (s, _) in final.items() if k > 0}
        if not means:
            return [(0, 0.0, 1)]
        top = max(means.values())
        tied = sorted(k for k, m in means.items() if abs(m - top) <= EPS)
        if variant == "geo+":
            tied = tied[-1:]
        elif variant != "geo":
            raise ValueError(f"unknown variant {variant!r}")
        return [(k, final[k][0], final[k][1]) for k in tied]

    def decode(self, k: int, r: int) -> list[int]:
        chosen: list[int] = []
        for c in range(len(self.tables), 0, -1):
            prev, table = self.prefix[c - 1], self.tables[c - 1]
            for k0, k1, w0, subs in self._options(prev, table, k, self.prefix[c][k][0]):
                w = w0 * len(subs)
                if r < w:
                    chosen.extend(subs[r % len(subs)])
                    r //= len(subs)
                    k = k0
                    break
                r -= w
            else:
                raise AssertionError("tie bookkeeping out of sync")
        return sorted(chosen)

    def count(self, variant: str) -> int:
        return sum(w for _, _, w in self.winners(variant))

    def pick(self, variant: str, r: int) -> list[int]:
        for k, _, w in self.winners(variant):
            if r < w:
                return self.decode(k, r)
            r -= w
        raise IndexError(r)


def optimal_selections(
    hyps: Sequence[Hypothesis], logp: Mapping[Hypothesis, float], variant: str = "geo"
) -> list[frozenset]:
    """Every optimal choice among the conflicting hypotheses (free ones excluded)."""
    _, conflicting = split_conflicts(hyps)
    search = _Search(conflicting, [logp[h] for h in conflicting])
    found = [frozenset(conflicting[i] for i in search.pick(variant, r)) for r in range(search.count(variant))]
    return sorted(found, key=sorted)


def select(
    hyps: Sequence[Hypothesis],
    logp: Mapping[Hypothesis, float],
    variant: str = "geo",
    rng: Optional[random.Random] = None,
) -> tuple[list[Hypothesis], float]:
    """Choose the non-crossing hypotheses of one sentence.

    ``logp`` maps each hypothesis to its natural-log probability. Returns the
    chosen hypotheses and the geometric mean over the scored (conflicting) ones.
    """
    free, conflicting = split_conflicts(hyps)
    if not conflicting:
        return sorted(free), 1.0
    search = _Search(conflicting, [logp[h] for h in conflicting])
    ways = search.count(variant)
    r = 0
    if ways > 1:
        if rng is None:
            raise ValueError("tied selections need a random generator")
        r = rng.randrange(ways)
    idx = search.pick(variant, r)
    score = math.exp(math.fsum(logp[conflicting[i]] for i in idx) / len(idx))
    return sorted(free + [conflicting[i] for i in idx]), score


def sentence_rng(seed: int, sid: int) -> random.Random:
    return random.Random(seed ^ sid)


@dataclass
class SelectionOutcome:
    chosen: list[list[Hypothesis]]
    scores: list[float]
    seed: int
    method: str
    variant: Optional[str] = None
    sentences: list = field(default_factory=list)

    def structures(self) -> list[list[tuple[int, int, int]]]:
        return [[(h.span.begin, h.span.end, h.nt) for h in hs] for hs in self.chosen]


def select_corpus(space: HypothesisSpace, method: str, variant: Optional[str] = "geo", seed: int = 0) -> SelectionOutcome:
    if method not in METHODS:
        raise ValueError(f"unknown selection method {method!r}")
    chosen, scores = [], []
    if method == "incr":
        for sid in range(len(space.spans)):
            hyps = space.hypotheses(sid)
            _, conflicting = split_conflicts(hyps)
            if conflicting:
                raise ValueError(
                    f"sentence {sid} has crossing hypotheses; incr selects while learning, "
                    "learn the space with the incr filter"
                )
            chosen.append(hyps)
            scores.append(1.0)
        return SelectionOutcome(chosen, scores, seed, method, None, space.corpus.sentences)
    model = ProbabilityModel(space)
    for sid in range(len(space.spans)):
        hyps = space.hypotheses(sid)
        logp = {h: model.log_probability(h, method) for h in hyps}
        picked, score = select(hyps, logp, variant, sentence_rng(seed, sid))
        chosen.append(picked)
        scores.append(score)
    return SelectionOutcome(chosen, scores, seed, method, variant, space.corpus.sentences)
