"""Plain corpora, bracketed treebanks and their text formats.

Plain corpus: one sentence per line, whitespace separated tokens.
Bracket file: per line a stream of ``(LABEL``, tokens and ``)``; a line may
hold several top-level brackets (a forest) or none at all.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, field
from typing import Iterable, NamedTuple, Sequence


class Span(NamedTuple):
    """Half-open token interval ``[begin, end)``."""

    begin: int
    end: int

    @property
    def width(self) -> int:
        return self.end - self.begin


class TreebankError(ValueError):
    def __init__(self, lineno: int, message: str):
        super().__init__(f"line {lineno}: {message}")
        self.lineno = lineno


class StructureError(ValueError):
    pass


class Vocabulary:
    """Interns token surfaces to ids in first-occurrence order."""

    def __init__(self):
        self._ids: dict[str, int] = {}
        self._words: list[str] = []

    def intern(self, word: str) -> int:
        i = self._ids.get(word)
        if i is None:
            i = len(self._words)
            self._ids[word] = i
            self._words.append(word)
        return i

    def word(self, i: int) -> str:
        return self._words[i]

    def __len__(self):
        return len(self._words)

    def __contains__(self, word):
        return word in self._ids


@dataclass(frozen=True)
class Sentence:
    sid: int
    ids: tuple[int, ...]
    words: tuple[str, ...]

    def __len__(self):
        return len(self.ids)

    @property
    def length(self) -> int:
        return len(self.ids)

    def yield_of(self, span: Span) -> tuple[int, ...]:
        return self.ids[span.begin:span.end]

    def text(self) -> str:
        return " ".join(self.words)


@dataclass
class Corpus:
    sentences: list[Sentence] = field(default_factory=list)
    vocab: Vocabulary = field(default_factory=Vocabulary)

    def add(self, words: Sequence[str]) -> Sentence:
        ids = tuple(self.vocab.intern(w) for w in words)
        s = Sentence(len(self.sentences), ids, tuple(words))
        self.sentences.append(s)
        return s

    def __len__(self):
        return len(self.sentences)

    def __iter__(self):
        return iter(self.sentences)

    def __getitem__(self, i) -> Sentence:
        return self.sentences[i]

    def lines(self) -> list[str]:
        return [s.text() for s in self.sentences]

    def checksum(self) -> str:
        h = hashlib.sha256()
        for line in self.lines():
            h.update(line.encode("utf-8", "surrogateescape"))
            h.update(b"\n")
        return h.hexdigest()

    def reordered(self, order: Sequence[int]) -> "Corpus":
        """New corpus holding ``self[order[0]], self[order[1]], ...``."""
        out = Corpus()
        for i in order:
            out.add(self.sentences[i].words)
        return out


def from_sentences(sentences: Iterable[Sequence[str]]) -> Corpus:
    corpus = Corpus()
    for words in sentences:
        corpus.add(list(words))
    return corpus


def parse_plain(text: str) -> Corpus:
    corpus = Corpus()
    for line in text.splitlines():
        words = line.split()
        if words:
            corpus.add(words)
    return corpus


@dataclass
class TreeBank:
    corpus: Corpus
    # per sentence: set of (begin, end, label)
    brackets: list[set[tuple[int, int, str]]]

    def __len__(self):
        return len(self.corpus)

    def spans(self, i: int) -> set[Span]:
        return {Span(b, e) for b, e, _ in self.brackets[i]}


def _closer_count(tok: str) -> int:
    return len(tok) if tok and set(tok) == {")"} else 0


def parse_bracket_line(words_out: list[str], line: str, lineno: int) -> set[tuple[int, int, str]]:
    brackets = set()
    stack: list[tuple[str, int]] = []
    for tok in line.split():
        closers = _closer_count(tok)
        if closers:
            for _ in range(closers):
                if not stack:
                    raise TreebankError(lineno, "unbalanced ')'")
                label, begin = stack.pop()
                end = len(words_out)
                if end == begin:
                    raise TreebankError(lineno, f"empty bracket ({label}")
                brackets.add((begin, end, label))
        elif tok.startswith("(") and len(tok) > 1:
            stack.append((tok[1:], len(words_out)))
        elif tok == "(":
            raise TreebankError(lineno, "bracket without label")
        else:
            words_out.append(tok)
    if stack:
        raise TreebankError(lineno, f"unclosed bracket ({stack[-1][0]}")
    return brackets


def parse_treebank(text: str) -> TreeBank:
    corpus = Corpus()
    brackets = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        if not line.strip():
            continue
        words: list[str] = []
        spans = parse_bracket_line(words, line, lineno)
        if not words:
            raise TreebankError(lineno, "no tokens")
        corpus.add(words)
        brackets.append(spans)
    return TreeBank(corpus, brackets)


def strip(tb: TreeBank) -> Corpus:
    return from_sentences(s.words for s in tb.corpus)


def crossing(a: tuple, b: tuple) -> bool:
    return a[0] < b[0] < a[1] < b[1] or b[0] < a[0] < b[1] < a[1]


def render_brackets(words: Sequence[str], labelled: Iterable[tuple[int, int, object]]) -> str:
    """Bracket one sentence; ``labelled`` holds ``(begin, end, label)`` triples."""
    items = sorted({(b, e, str(lab)) for b, e, lab in labelled}, key=lambda t: (t[0], -t[1], t[2]))
    n = len(words)
    for b, e, _ in items:
        if not 0 <= b < e <= n:
            raise StructureError(f"span ({b},{e}) invalid for sentence of length {n}")
    for x in range(len(items)):
        for y in range(x + 1, len(items)):
            if crossing(items[x], items[y]):
                raise StructureError(
                    f"spans {items[x][:2]} and {items[y][:2]} cross; "
                    "write crossing hypotheses with the tabular format instead"
                )
    out = []
    open_ends: list[int] = []
    k = 0
    for pos in range(n + 1):
        while open_ends and open_ends[-1] == pos:
            open_ends.pop()
            out.append(")")
        while k < len(items) and items[k][0] == pos:
            out.append("(" + items[k][2])
            open_ends.append(items[k][1])
            k += 1
        if pos < n:
            out.append(words[pos])
    return " ".join(out)


def write_brackets(sentences: Sequence[Sentence], structures: Sequence[Iterable[tuple[int, int, object]]]) -> str:
    lines = [render_brackets(s.words, st) for s, st in zip(sentences, structures)]
    return "".join(line + "\n" for line in lines)


def write_treebank(tb: TreeBank) -> str:
    return write_brackets(tb.corpus.sentences, tb.brackets)


def write_plain(corpus: Corpus) -> str:
    return "".join(line + "\n" for line in corpus.lines())


def write_table(sentences: Sequence[Sentence], structures: Sequence[Iterable[tuple[int, int, int]]]) -> str:
    """Tabular format for possibly crossing hypotheses: ``words<TAB>b:e:t b:e:t``."""
    lines = []
    for s, st in zip(sentences, structures):
        cells = " ".join(f"{b}:{e}:{t}" for b, e, t in sorted(st))
        lines.append(f"{s.text()}\t{cells}\n")
    return "".join(lines)


def parse_table(text: str) -> tuple[Corpus, list[list[tuple[int, int, int]]]]:
    corpus = Corpus()
    structures = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        if not line.strip():
            continue
        sent, sep, cells = line.partition("\t")
        words = sent.split()
        if not sep or not words:
            raise TreebankError(lineno, "expected '<sentence>\\t<begin:end:type ...>'")
        triples = []
        for cell in cells.split():
            try:
                b, e, t = (int(x) for x in cell.split(":"))
            except ValueError:
                raise TreebankError(lineno, f"bad hypothesis cell {cell!r}") from None
            if not 0 <= b < e <= len(words) or t < 0:
                raise TreebankError(lineno, f"hypothesis {cell!r} out of range")
            triples.append((b, e, t))
        corpus.add(words)
        structures.append(triples)
    return corpus, structures
