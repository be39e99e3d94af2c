import pytest
from hypothesis import given, strategies as st

from abl.corpus import (Span, StructureError, TreebankError, parse_plain, parse_table, parse_treebank,
                        render_brackets, strip, write_brackets, write_table, write_treebank)


def test_parse_plain_single_sentence():
    corpus = parse_plain("Show me flights\n")
    assert len(corpus) == 1
    assert corpus[0].words == ("Show", "me", "flights")
    assert len(corpus[0]) == 3


def test_parse_plain_empty():
    assert len(parse_plain("")) == 0
    assert len(parse_plain("\n  \n")) == 0


def test_interning_is_deterministic():
    corpus = parse_plain("a b\na b\n")
    assert corpus[0].ids == corpus[1].ids
    assert [s.sid for s in corpus] == [0, 1]


def test_interning_roundtrip_and_injective():
    corpus = parse_plain("x y x\nz y\n")
    assert corpus[0].ids == (0, 1, 0)
    assert corpus[1].ids == (2, 1)
    for s in corpus:
        assert tuple(corpus.vocab.word(i) for i in s.ids) == s.words


def test_parse_treebank_nested():
    tb = parse_treebank("(S What is (NP the name ) )")
    assert tb.brackets[0] == {(0, 4, "S"), (2, 4, "NP")}
    assert tb.corpus[0].words == ("What", "is", "the", "name")


def test_parse_treebank_forest_line():
    tb = parse_treebank("(S a ) (S b )")
    assert tb.brackets[0] == {(0, 1, "S"), (1, 2, "S")}


@pytest.mark.parametrize("line", ["(S a (NP b", "(S a ) )", "(S (NP ) a )"])
def test_parse_treebank_rejects_malformed(line):
    with pytest.raises(TreebankError) as err:
        parse_treebank("(S ok )\n" + line)
    assert err.value.lineno == 2
    assert "line 2" in str(err.value)


def test_parse_treebank_accepts_plain_lines():
    tb = parse_treebank("a b c\n")
    assert tb.brackets == [set()]


def test_strip():
    assert strip(parse_treebank("(S a b )")).lines() == ["a b"]
    assert len(strip(parse_treebank(""))) == 0


def test_strip_matches_plain_parse():
    text = "(S (NP the dog ) (VP barks ) )\n(X y )\n"
    detok = "the dog barks\ny\n"
    assert [s.ids for s in strip(parse_treebank(text))] == [s.ids for s in parse_plain(detok)]


def test_write_learned_brackets():
    corpus = parse_plain("a b")
    assert write_brackets(corpus.sentences, [[(0, 2, 0)]]) == "(0 a b )\n"


def test_write_single_bracket_line():
    corpus = parse_plain("Show me flights from Atlanta to Boston")
    line = render_brackets(corpus[0].words, [(2, 7, 1)])
    assert line == "Show me (1 flights from Atlanta to Boston )"


def test_writer_rejects_crossing():
    with pytest.raises(StructureError, match="tabular"):
        render_brackets("a b c d".split(), [(0, 2, 1), (1, 3, 2)])


def test_table_roundtrip():
    corpus = parse_plain("a b c\nd e")
    structures = [[(0, 3, 0), (0, 2, 1), (1, 3, 2)], [(0, 2, 0)]]
    text = write_table(corpus.sentences, structures)
    assert text.splitlines()[0] == "a b c\t0:2:1 0:3:0 1:3:2"
    back, parsed = parse_table(text)
    assert back.lines() == corpus.lines()
    assert [sorted(p) for p in parsed] == [sorted(s) for s in structures]


def test_table_rejects_bad_cells():
    with pytest.raises(TreebankError):
        parse_table("a b\t0:3:1\n")
    with pytest.raises(TreebankError):
        parse_table("a b\t0-2-1\n")


@st.composite
def laminar_trees(draw):
    n = draw(st.integers(1, 8))
    words = [draw(st.sampled_from(["a", "b", "c", "flights", "é"])) for _ in range(n)]
    spans = set()
    for _ in range(draw(st.integers(0, 6))):
        b = draw(st.integers(0, n - 1))
        e = draw(st.integers(b + 1, n))
        if all(not (x < b < y < e or b < x < e < y) for x, y, _ in spans):
            spans.add((b, e, draw(st.sampled_from(["NP", "S", "0", "17"]))))
    return words, spans


@given(st.lists(laminar_trees(), min_size=1, max_size=4))
def test_bracket_roundtrip(trees):
    text = "".join(render_brackets(w, s) + "\n" for w, s in trees)
    tb = parse_treebank(text)
    assert [list(s.words) for s in tb.corpus] == [w for w, _ in trees]
    assert tb.brackets == [s for _, s in trees]
    assert write_treebank(tb) == text


def test_span_width():
    assert Span(2, 5).width == 3
