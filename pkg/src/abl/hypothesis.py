"""Alignment learning: collect typed constituent hypotheses over a corpus."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Iterable, NamedTuple, Optional, Sequence, Union

from .alignment import Aligner, DissimilarPair, extract_dissimilar, make_aligner
from .corpus import Corpus, Sentence, Span, parse_table, write_table

SENTENCE_TYPE = 0

OnlineFilter = Callable[[Iterable[Span], Span], bool]


class TypeStore:
    """Union-find over issued non-terminal ids; the smallest id of a class is canonical."""

    def __init__(self):
        self.parent = [SENTENCE_TYPE]

    def fresh(self) -> int:
        self.parent.append(len(self.parent))
        return len(self.parent) - 1

    def ensure(self, nt: int):
        while len(self.parent) <= nt:
            self.parent.append(len(self.parent))

    def __len__(self):
        return len(self.parent)

    def canonical(self, nt: int) -> int:
        if not 0 <= nt < len(self.parent):
            raise ValueError(f"unknown non-terminal {nt}")
        root = nt
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[nt] != root:
            self.parent[nt], nt = root, self.parent[nt]
        return root

    def merge(self, a: int, b: int) -> int:
        ra, rb = self.canonical(a), self.canonical(b)
        if ra == rb:
            return ra
        lo, hi = min(ra, rb), max(ra, rb)
        self.parent[hi] = lo
        return lo

    def classes(self) -> set[int]:
        return {self.canonical(x) for x in range(len(self.parent))}


class Hypothesis(NamedTuple):
    sid: int
    span: Span
    nt: int


def merge_types(a: int, b: int, store: TypeStore) -> int:
    return store.merge(a, b)


def incr_filter(existing: Iterable[Span], candidate: Span) -> bool:
    """Accept unless the candidate crosses a span that is already stored."""
    b, e = candidate
    for x, y in existing:
        if x < b < y < e or b < x < e < y:
            return False
    return True


def assign_types(
    pairs: Sequence[DissimilarPair],
    sa: dict,
    sb: dict,
    store: TypeStore,
    online_filter: Optional[OnlineFilter] = None,
) -> list[tuple[int, Span, int]]:
    """Type the dissimilar pairs of one alignment, updating ``sa``/``sb`` in place.

    ``sa`` and ``sb`` map span -> raw non-terminal for the two sentences.
    Returns ``(side, span, raw_nt)`` for each stored hypothesis, side 0 or 1.
    """
    added = []
    for pair in pairs:
        sides = ((0, sa, pair.span1), (1, sb, pair.span2))
        known = [store.canonical(st[sp]) for _, st, sp in sides if sp.width and sp in st]
        if len(known) == 2:
            if known[0] != known[1]:
                store.merge(known[0], known[1])
            continue
        new = [(side, st, sp) for side, st, sp in sides if sp.width and sp not in st]
        if online_filter is not None:
            new = [(side, st, sp) for side, st, sp in new if online_filter(st.keys(), sp)]
        if not new:
            continue
        nt = known[0] if known else store.fresh()
        for side, st, sp in new:
            st[sp] = nt
            added.append((side, sp, nt))
    return added


@dataclass
class HypothesisSpace:
    corpus: Corpus
    store: TypeStore = field(default_factory=TypeStore)
    # per sentence: span -> raw non-terminal
    spans: list[dict] = field(default_factory=list)
    alignments_done: int = 0
    flagged_pairs: list[tuple[int, int]] = field(default_factory=list)

    def admit(self, s: Sentence):
        while len(self.spans) <= s.sid:
            self.spans.append({})
        self.spans[s.sid].setdefault(Span(0, len(s)), SENTENCE_TYPE)

    def add(self, sid: int, span: Span, nt: int):
        self.store.ensure(nt)
        span = Span(*span)
        old = self.spans[sid].get(span)
        if old is None:
            self.spans[sid][span] = nt
        elif self.store.canonical(old) != self.store.canonical(nt):
            raise ValueError(f"sentence {sid} span {tuple(span)} already typed {old}")

    def type_at(self, sid: int, span: Span) -> Optional[int]:
        nt = self.spans[sid].get(span)
        return None if nt is None else self.store.canonical(nt)

    def hypotheses(self, sid: int) -> list[Hypothesis]:
        canon = self.store.canonical
        return sorted(Hypothesis(sid, sp, canon(nt)) for sp, nt in self.spans[sid].items())

    def __iter__(self):
        for sid in range(len(self.spans)):
            yield from self.hypotheses(sid)

    def __len__(self):
        return sum(len(x) for x in self.spans)

    def yield_of(self, h: Hypothesis) -> tuple[int, ...]:
        return self.corpus[h.sid].yield_of(h.span)

    def canonical_types(self) -> set[int]:
        return {self.store.canonical(nt) for st in self.spans for nt in st.values()}

    def to_table(self) -> str:
        return write_table(self.corpus.sentences, [[(h.span.begin, h.span.end, h.nt) for h in self.hypotheses(sid)]
                                                   for sid in range(len(self.spans))])

    @classmethod
    def from_table(cls, text: str) -> "HypothesisSpace":
        corpus, structures = parse_table(text)
        space = cls(corpus)
        for s, triples in zip(corpus, structures):
            space.admit(s)
            for b, e, t in triples:
                space.add(s.sid, Span(b, e), t)
        return space


def learn(
    corpus: Corpus,
    aligner: Union[str, Aligner] = "default",
    online_filter: Optional[OnlineFilter] = None,
    min_length: int = 2,
) -> HypothesisSpace:
    """Align each sentence with every earlier one and store the gaps as hypotheses.

    Sentences shorter than ``min_length`` keep their sentence-level hypothesis
    but take no part in alignment.
    """
    if isinstance(aligner, str):
        aligner = make_aligner(aligner)
    space = HypothesisSpace(corpus)
    memory: list[Sentence] = []
    for s in corpus:
        space.admit(s)
        if len(s) < min_length:
            continue
        for old in memory:
            for al in aligner(old, s):
                pairs = extract_dissimilar(old, s, al)
                assign_types(pairs, space.spans[old.sid], space.spans[s.sid], space.store, online_filter)
            space.alignments_done += 1
        memory.append(s)
    space.flagged_pairs = list(aligner.flagged)
    return space
