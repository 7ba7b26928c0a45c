from pathlib import Path

import pytest

from twsolve import TreeDecomposition, compute_treewidth, validate
from twsolve.errors import DecompositionError, ParseError
from twsolve.pace import (
    emit_certificate,
    emit_gr,
    emit_td,
    parse_certificate,
    parse_gr,
    parse_td,
)

from conftest import cycle_graph, path_graph

DATA = Path(__file__).parent / "data"


def test_parse_gr_examples():
    g = parse_gr("p tw 3 2\n1 2\n2 3\n")
    assert g.n == 3 and g.edges() == ((1, 2), (2, 3))
    g2 = parse_gr("c x\np tw 4 4\n1 2\n2 3\n3 4\n1 4\n")
    assert g2 == cycle_graph(4)
    with pytest.raises(ParseError) as err:
        parse_gr("p tw 2 2\n1 2\n1 2\n")
    assert "line 3" in str(err.value)


def test_parse_gr_golden_failures():
    for name, needle in [
        ("bad_duplicate.gr", "duplicate"),
        ("bad_range.gr", "range"),
        ("bad_order.gr", "before header"),
        ("bad_count.gr", "declares"),
    ]:
        with pytest.raises(ParseError) as err:
            parse_gr((DATA / name).read_text())
        assert needle in str(err.value), name


def test_gr_roundtrip_golden():
    for name in ["c5.gr", "k4.gr", "p3.gr", "grid3.gr"]:
        g = parse_gr((DATA / name).read_text())
        assert parse_gr(emit_gr(g)) == g


def test_emit_td_examples():
    c4 = cycle_graph(4)
    t = TreeDecomposition([{1, 2, 3}, {1, 3, 4}], [(0, 1)])
    text = emit_td(c4, t)
    assert text.splitlines()[0] == "s td 2 3 4"
    back = parse_td(text)
    assert back.bag_set() == t.bag_set()
    assert sorted(back.tree_edges) == sorted(t.tree_edges)

    from twsolve import Graph

    single = Graph(1)
    text1 = emit_td(single, TreeDecomposition([{1}]))
    assert text1.splitlines()[0] == "s td 1 1 1"
    assert text1.splitlines()[1] == "b 1 1"

    with pytest.raises(DecompositionError):
        emit_td(c4, TreeDecomposition([{1, 2}], []))


def test_td_roundtrip_canonical():
    p5 = path_graph(5)
    cert = compute_treewidth(p5)
    text = emit_td(p5, cert.decomposition)
    back = parse_td(text)
    ok, report = validate(p5, back)
    assert ok, report
    assert emit_td(p5, back) == text


def test_td_parse_errors():
    with pytest.raises(ParseError):
        parse_td("b 1 1\n")
    with pytest.raises(ParseError):
        parse_td("s td 2 2 2\nb 1 1 2\n")  # missing bag
    with pytest.raises(ParseError):
        parse_td("s td 1 3 2\nb 1 1 2\n")  # wrong max bag size


def test_certificate_roundtrip():
    for name in ["c5.gr", "k4.gr", "p3.gr", "grid3.gr"]:
        g = parse_gr((DATA / name).read_text())
        cert = compute_treewidth(g)
        text = emit_certificate(g, cert)
        back = parse_certificate(text, g)
        assert back.width == cert.width
        assert back.obstruction == cert.obstruction
        assert back.witness.parts == cert.witness.parts
        assert back.decomposition.bag_set() == cert.decomposition.bag_set()
        assert emit_certificate(g, back) == text


def test_certificate_parse_errors():
    g = parse_gr((DATA / "c5.gr").read_text())
    cert = compute_treewidth(g)
    text = emit_certificate(g, cert)
    with pytest.raises(ParseError):
        parse_certificate(text.replace("s obs 3 3", "s obs 3 4"), g)
    with pytest.raises(ParseError):
        parse_certificate("\n".join(text.splitlines()[1:]), g)
