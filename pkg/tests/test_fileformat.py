from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from exactmatch.errors import ParseError
from exactmatch.fileformat import Problem, emit, normalize, parse, read, write
from exactmatch.generate import FAMILIES, GeneratorSpec, generate
from exactmatch.graph import BLUE, RED

C4_TEXT = "p em 4 4\ne 1 3 2 r\ne 1 4 1 b\ne 2 3 1 b\ne 2 4 3 r\nk 2\n"


def test_c4_example(c4):
    g, prob = parse(C4_TEXT)
    assert prob.kind == "em" and prob.get("k") == 2
    assert g.n == 4
    assert [(e.u, e.v, e.weight, e.color) for e in g.edges] == [(e.u, e.v, e.weight, e.color) for e in c4.edges]
    assert [e.color for e in g.edges] == [RED, BLUE, BLUE, RED]


@pytest.mark.parametrize("text, line, fragment", [
    ("p em 4 1\ne 1 3 r\n", 2, "missing color"),
    ("p em 4 1\ne 1 3 2 g\n", 2, "unknown color"),
    ("p em 4 1\ne 1 3 0 r\n", 2, "weight must be positive"),
    ("p em 4 1\ne 1 3 -4 b\n", 2, "weight must be positive"),
    ("p em 4 1\ne 1 5 2 b\n", 2, "out of range"),
    ("p em 4 2\ne 1 3 2 b\ne 3 1 2 b\n", 3, "duplicate edge"),
    ("p em 4 2\ne 1 3 2 b\n", 2, "announces 2"),
    ("e 1 3 2 b\n", 1, "missing 'p'"),
    ("p em 4 1\ne 1 2 2 b\npart 0011\n", 3, "inside one side"),
    ("p em 4 1\ne 1 3 2 b\nk two\n", 3, "integer"),
    ("p em 4 1\ne 1 3 2 b\neps 1/0\n", 3, "bad rational"),
    ("p zz 4 1\n", 1, "unknown problem kind"),
    ("p em 4 1\ne 1 3 2 b\nq 1\n", 3, "unknown line type"),
])
def test_errors_carry_line(text, line, fragment):
    with pytest.raises(ParseError) as info:
        parse(text)
    assert info.value.lineno == line
    assert fragment in str(info.value)
    assert str(info.value).startswith(f"line {line}:")


def test_allow_zero():
    text = "p mwem 2 1\ne 1 2 0 r\n"
    with pytest.raises(ParseError):
        parse(text)
    g, _ = parse(text, allow_zero=True)
    assert g.weights == (0,)
    with pytest.raises(ParseError, match="non-negative"):
        parse("p mwem 2 1\ne 1 2 -1 r\n", allow_zero=True)


def test_missing_weight_is_reported():
    with pytest.raises(ParseError) as info:
        parse("p em 4 1\n\nc note\ne 1 3\n")
    assert info.value.lineno == 4
    assert "missing weight" in str(info.value)


def test_params_and_comments():
    text = "c hello\np tkpm 2 1\ne 1 2 7 b\nk 1\neps 1/3\nseed 9\nalpha 2\n"
    g, prob = parse(text)
    assert prob.params == {"k": 1, "eps": Fraction(1, 3), "seed": 9, "alpha": 2}
    assert emit(g, prob) == "p tkpm 2 1\ne 1 2 7 b\nk 1\nalpha 2\neps 1/3\nseed 9\n"


def test_file_io(tmp_path, c4):
    path = tmp_path / "x.txt"
    write(path, c4, Problem("em", {"k": 2}))
    g, prob = read(path)
    assert g.edges == c4.edges and g.bipartition == c4.bipartition
    assert prob.get("k") == 2


def corpus():
    """50 generated files with messy whitespace and comments."""
    out = []
    for i in range(50):
        fam = FAMILIES[i % len(FAMILIES)]
        g = generate(GeneratorSpec(fam, 2 + 2 * (i % 5), seed=i, w_max=10 ** (i % 4 + 1)))
        prob = Problem(["graph", "em", "ewpm", "tkpm"][i % 4], {"k": 1 + i % 3, "seed": i})
        lines = emit(g, prob).splitlines()
        messy = ["c generated", ""] + ["  " + ln.replace(" ", "   ") + "  " for ln in lines]
        out.append("\n".join(messy))
    return out


def test_round_trip_corpus():
    for text in corpus():
        canon = normalize(text)
        g1, p1 = parse(text)
        g2, p2 = parse(emit(g1, p1))
        assert emit(g2, p2) == canon
        assert g1.edges == g2.edges and g1.bipartition == g2.bipartition
        assert g1.meta.get("planted") == g2.meta.get("planted")
        assert p1.params == p2.params and p1.kind == p2.kind


@given(st.sampled_from(FAMILIES), st.sampled_from([2, 4, 6, 8]), st.integers(0, 10 ** 6),
       st.integers(1, 2 ** 64))
def test_round_trip_property(family, n, seed, w_max):
    g = generate(GeneratorSpec(family, n, seed=seed, w_max=w_max))
    text = emit(g, Problem("mwem", {"k": 1, "W": 5}))
    g2, prob = parse(text)
    assert g2.edges == g.edges
    assert g2.bipartition == g.bipartition
    assert emit(g2, prob) == text
