import functools

import pytest
from hypothesis import given
from hypothesis import strategies as st

from quadfuse.model import (
    XSD_INTEGER, ConflictCluster, Kind, Node, Quad, ResolvedQuad, bnode, literal, node_compare,
    quad_compare, term_equals, uri,
)

from helpers import nodes, quads

G = uri("http://example.org/g")
S = uri("http://example.org/s")
P = uri("http://example.org/p")


def test_kind_order_puts_uris_before_blanks_before_literals():
    assert uri("http://z") < bnode("a") < literal("a")
    assert Kind.URI < Kind.BLANK < Kind.LITERAL


def test_literal_order_is_lexical_then_datatype_then_language():
    assert literal("a") < literal("b")
    assert literal("1") < literal("1", XSD_INTEGER)
    assert literal("x") < literal("x", language="de") < literal("x", language="en")


def test_language_tag_is_lowercased():
    assert literal("Berlin", language="DE-at").language == "de-at"
    assert literal("Berlin", language="DE") == literal("Berlin", language="de")


def test_absent_datatype_and_language_read_as_none():
    n = literal("x")
    assert n.datatype_iri is None and n.language_tag is None
    assert literal("1", XSD_INTEGER).datatype_iri == XSD_INTEGER


@pytest.mark.parametrize("make", [
    lambda: uri(""),
    lambda: uri("http://a b"),
    lambda: bnode("-x"),
    lambda: bnode(""),
    lambda: Node(Kind.LITERAL, "x", XSD_INTEGER, "en"),
    lambda: literal("x", language="not a tag"),
    lambda: Node(Kind.URI, "http://a", XSD_INTEGER),
])
def test_invalid_terms_are_rejected(make):
    with pytest.raises(ValueError):
        make()


def test_kind_accepts_plain_ints():
    assert Node(0, "http://a") == uri("http://a")


@pytest.mark.parametrize("s, p, g", [
    (literal("x"), P, G),
    (S, bnode("b"), G),
    (S, literal("p"), G),
    (S, P, bnode("g")),
])
def test_quad_positions_are_checked(s, p, g):
    with pytest.raises(ValueError):
        Quad(s, p, literal("o"), g)


def test_term_equality_is_exact():
    assert not term_equals(literal("1.0"), literal("1"))
    assert not term_equals(literal("1"), literal("1", XSD_INTEGER))
    assert term_equals(uri("http://a"), uri("http://a"))


@given(st.text(), st.text())
def test_string_order_matches_utf8_byte_order(a, b):
    assert (a < b) == (a.encode("utf-8") < b.encode("utf-8"))


@given(nodes, nodes, nodes)
def test_node_compare_is_a_total_order(a, b, c):
    assert node_compare(a, b) == -node_compare(b, a)
    assert (node_compare(a, b) == 0) == (a == b)
    if node_compare(a, b) <= 0 and node_compare(b, c) <= 0:
        assert node_compare(a, c) <= 0


@given(st.lists(quads, max_size=12))
def test_sorting_by_quad_compare_matches_tuple_order(qs):
    assert sorted(qs, key=functools.cmp_to_key(quad_compare)) == sorted(qs)


def test_resolved_quad_validation():
    q = Quad(S, P, literal("o"), G)
    assert ResolvedQuad(q, frozenset({G}), 0.5).quality == 0.5
    with pytest.raises(ValueError):
        ResolvedQuad(q, frozenset(), 0.5)
    with pytest.raises(ValueError):
        ResolvedQuad(q, frozenset({G}), 1.5)


def test_conflict_cluster_membership_and_views():
    g2 = uri("http://example.org/g2")
    qs = [Quad(S, P, literal("b"), G), Quad(S, P, literal("a"), g2), Quad(S, P, literal("b"), g2)]
    cluster = ConflictCluster.of(qs)
    assert len(cluster) == 3
    assert cluster.graphs() == {G, g2}
    assert cluster.objects() == [literal("a"), literal("b")]
    with pytest.raises(ValueError):
        ConflictCluster(S, P, (Quad(S, uri("http://other"), literal("a"), G),))
    with pytest.raises(ValueError):
        ConflictCluster.of([qs[0], qs[0]])
    with pytest.raises(ValueError):
        ConflictCluster.of([])


def test_n3_rendering():
    assert uri("http://a").n3() == "<http://a>"
    assert literal('say "hi"', language="en").n3() == '"say \\"hi\\""@en'
