"""Pairwise sentence alignment and extraction of the unaligned gaps.

Three regimes: edit distance under the default cost function, edit distance
under the offset-biased cost function, and enumeration of every maximal
order-preserving matching of equal words.
"""

from __future__ import annotations

import enum
import math
from fractions import Fraction
from typing import Callable, NamedTuple, Optional, Sequence

from .corpus import Sentence, Span

MAX_ALIGNMENTS = 256


class EditOp(enum.Enum):
    MATCH = "match"
    SUBSTITUTE = "substitute"
    DELETE = "delete"  # token of sentence 1 dropped
    INSERT = "insert"  # token of sentence 2 added


class Link(NamedTuple):
    i1: int
    i2: int


Alignment = tuple  # tuple[Link, ...], strictly increasing in both coordinates


class DissimilarPair(NamedTuple):
    span1: Span
    span2: Span


class AlignmentExplosion(RuntimeError):
    pass


Gamma = Callable[..., "int | Fraction"]


def default_gamma(op: EditOp, w1=None, w2=None, i1=None, i2=None, s1=None, s2=None):
    if op is EditOp.INSERT or op is EditOp.DELETE:
        return 1
    if op is EditOp.MATCH:
        if w1 != w2:
            raise ValueError("match of unequal tokens")
        return 0
    return 0 if w1 == w2 else 2


def biased_gamma(op: EditOp, w1=None, w2=None, i1=None, i2=None, s1=None, s2=None):
    """Default costs, except a match costs ``|i1/s1 - i2/s2| * (s1 + s2) / 2``.

    Indices are 0-based offsets and lengths are token counts. The match cost
    is returned as an exact ``Fraction``.
    """
    if op is not EditOp.MATCH:
        return default_gamma(op, w1, w2)
    if w1 != w2:
        raise ValueError("match of unequal tokens")
    if not s1 or not s2:
        raise ValueError("biased cost needs non-empty sentence lengths")
    return Fraction(abs(i1 * s2 - i2 * s1) * (s1 + s2), 2 * s1 * s2)


def _cost_tables(a: Sequence[int], b: Sequence[int], gamma: Gamma):
    n, m = len(a), len(b)
    dele = [gamma(EditOp.DELETE, a[i], None, i, None, n, m) for i in range(n)]
    ins = [gamma(EditOp.INSERT, None, b[j], None, j, n, m) for j in range(m)]
    diag = [
        [gamma(EditOp.MATCH if a[i] == b[j] else EditOp.SUBSTITUTE, a[i], b[j], i, j, n, m) for j in range(m)]
        for i in range(n)
    ]
    # scale to integers so that every comparison in the table is exact
    denom = 1
    for c in dele + ins + [c for row in diag for c in row]:
        d = getattr(c, "denominator", 1)
        if d != 1:
            denom = denom * d // math.gcd(denom, d)
    if denom != 1:
        dele = [int(c * denom) for c in dele]
        ins = [int(c * denom) for c in ins]
        diag = [[int(c * denom) for c in row] for row in diag]
    return dele, ins, diag, denom


def edit_table(a: Sequence[int], b: Sequence[int], gamma: Gamma = default_gamma):
    dele, ins, diag, denom = _cost_tables(a, b, gamma)
    n, m = len(a), len(b)
    d = [[0] * (m + 1) for _ in range(n + 1)]
    for j in range(1, m + 1):
        d[0][j] = d[0][j - 1] + ins[j - 1]
    for i in range(1, n + 1):
        prev, row = d[i - 1], d[i]
        row[0] = prev[0] + dele[i - 1]
        di, cost_i = diag[i - 1], dele[i - 1]
        for j in range(1, m + 1):
            row[j] = min(prev[j - 1] + di[j - 1], prev[j] + cost_i, row[j - 1] + ins[j - 1])
    return d, (dele, ins, diag, denom)


def edit_distance_align(a: Sentence, b: Sentence, gamma: Gamma = default_gamma) -> tuple[Alignment, Fraction]:
    """Links of one minimum-cost edit script, plus that cost.

    Ties in the backtrace go match, substitute, delete, insert.
    """
    x, y = a.ids, b.ids
    d, (dele, ins, diag, denom) = edit_table(x, y, gamma)
    i, j = len(x), len(y)
    links = []
    while i > 0 or j > 0:
        here = d[i][j]
        if i > 0 and j > 0 and here == d[i - 1][j - 1] + diag[i - 1][j - 1]:
            if x[i - 1] == y[j - 1]:
                links.append(Link(i - 1, j - 1))
            i, j = i - 1, j - 1
        elif i > 0 and here == d[i - 1][j] + dele[i - 1]:
            i -= 1
        else:
            j -= 1
    links.reverse()
    return tuple(links), Fraction(d[len(x)][len(y)], denom)


def script_cost(a: Sentence, b: Sentence, links: Sequence[Link], gamma: Gamma) -> Fraction:
    """Cost of the script that matches ``links`` and deletes/inserts the rest."""
    n, m = len(a), len(b)
    total = Fraction(0)
    for i1, i2 in links:
        total += gamma(EditOp.MATCH, a.ids[i1], b.ids[i2], i1, i2, n, m)
    linked1 = {l.i1 for l in links}
    linked2 = {l.i2 for l in links}
    total += sum(gamma(EditOp.DELETE, a.ids[i], None, i, None, n, m) for i in range(n) if i not in linked1)
    total += sum(gamma(EditOp.INSERT, None, b.ids[j], None, j, n, m) for j in range(m) if j not in linked2)
    return total


def all_alignments(a: Sentence, b: Sentence, cap: int = MAX_ALIGNMENTS) -> list[Alignment]:
    """Every maximal order-preserving one-to-one matching of equal tokens.

    A matching is maximal when no equal-token pair fits strictly inside any of
    its gaps. Raises AlignmentExplosion when there are more than ``cap``.
    """
    x, y = a.ids, b.ids
    n, m = len(x), len(y)
    pairs = [(i, j) for i in range(n) for j in range(m) if x[i] == y[j]]

    def free(i0, j0, i1, j1):
        # no equal pair strictly inside the open box (i0, i1) x (j0, j1)
        return not any(i0 < p < i1 and j0 < q < j1 for p, q in pairs)

    memo: dict[tuple[int, int], int] = {}

    def successors(i, j):
        return [(p, q) for p, q in pairs if p > i and q > j and free(i, j, p, q)]

    def count(i, j):
        key = (i, j)
        if key not in memo:
            succ = successors(i, j)
            memo[key] = min(cap + 1, sum(count(p, q) for p, q in succ)) if succ else 1
        return memo[key]

    if count(-1, -1) > cap:
        raise AlignmentExplosion(f"more than {cap} alignments for sentences {a.sid} and {b.sid}")

    out = []

    def walk(i, j, acc):
        succ = successors(i, j)
        if not succ:
            out.append(tuple(acc))
            return
        for p, q in succ:
            acc.append(Link(p, q))
            walk(p, q, acc)
            acc.pop()

    walk(-1, -1, [])
    return out


def extract_dissimilar(a: Sentence, b: Sentence, alignment: Sequence[Link]) -> list[DissimilarPair]:
    out = []
    prev1 = prev2 = -1
    for i1, i2 in list(alignment) + [Link(len(a), len(b))]:
        s1, s2 = Span(prev1 + 1, i1), Span(prev2 + 1, i2)
        if s1.width or s2.width:
            out.append(DissimilarPair(s1, s2))
        prev1, prev2 = i1, i2
    return out


class Aligner:
    """Named alignment regime: returns every alignment to learn from."""

    def __init__(self, name: str, cap: int = MAX_ALIGNMENTS):
        if name not in ("default", "biased", "all"):
            raise ValueError(f"unknown alignment method {name!r}")
        self.name = name
        self.cap = cap
        self.flagged: list[tuple[int, int]] = []

    def __call__(self, a: Sentence, b: Sentence) -> list[Alignment]:
        if self.name == "default":
            return [edit_distance_align(a, b, default_gamma)[0]]
        if self.name == "biased":
            return [edit_distance_align(a, b, biased_gamma)[0]]
        try:
            return all_alignments(a, b, self.cap)
        except AlignmentExplosion:
            self.flagged.append((a.sid, b.sid))
            return [edit_distance_align(a, b, default_gamma)[0]]


def make_aligner(name: str, cap: Optional[int] = None) -> Aligner:
    return Aligner(name, MAX_ALIGNMENTS if cap is None else cap)
