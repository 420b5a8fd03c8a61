"""RDF terms and quads.

Nodes and quads are plain tuples so that the built-in tuple ordering *is* the
term order used for sorting, deduplication and clustering:

* kind rank ``URI < BLANK < LITERAL``;
* then the IRI / label / lexical form, then datatype, then language tag.

Python compares ``str`` by code point, which is the same order as comparing
the UTF-8 encodings byte by byte, so no collation is involved.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from enum import IntEnum
from typing import NamedTuple


class Kind(IntEnum):
    URI = 0
    BLANK = 1
    LITERAL = 2


_WHITESPACE = re.compile(r"\s")
_BLANK_LABEL = re.compile(r"\w(?:[\w.\-]*[\w\-])?")
_LANG_TAG = re.compile(r"[a-zA-Z]+(?:-[a-zA-Z0-9]+)*")

XSD = "http://www.w3.org/2001/XMLSchema#"
XSD_DOUBLE = XSD + "double"
XSD_INTEGER = XSD + "integer"
XSD_STRING = XSD + "string"
RDF_LANGSTRING = "http://www.w3.org/1999/02/22-rdf-syntax-ns#langString"


class _NodeFields(NamedTuple):
    kind: Kind
    value: str
    datatype: str = ""
    language: str = ""


class Node(_NodeFields):
    """An RDF term: URI reference, blank node or literal.

    ``value`` holds the IRI, the blank-node label or the lexical form.
    Absent datatype / language are stored as ``""`` so that ordering stays
    total without special-casing ``None``.
    """

    __slots__ = ()

    def __new__(cls, kind: Kind, value: str, datatype: str = "", language: str = ""):
        kind = Kind(kind)
        if kind is Kind.URI:
            _check_iri(value)
            if datatype or language:
                raise ValueError("URI nodes carry no datatype or language")
        elif kind is Kind.BLANK:
            if not _BLANK_LABEL.fullmatch(value):
                raise ValueError(f"invalid blank node label {value!r}")
            if datatype or language:
                raise ValueError("blank nodes carry no datatype or language")
        elif kind is Kind.LITERAL:
            if language:
                if datatype:
                    raise ValueError("a language-tagged literal has no explicit datatype")
                if not _LANG_TAG.fullmatch(language):
                    raise ValueError(f"invalid language tag {language!r}")
                language = language.lower()
            elif datatype:
                _check_iri(datatype)
        return super().__new__(cls, kind, value, datatype, language)

    @property
    def is_uri(self) -> bool:
        return self.kind is Kind.URI

    @property
    def is_blank(self) -> bool:
        return self.kind is Kind.BLANK

    @property
    def is_literal(self) -> bool:
        return self.kind is Kind.LITERAL

    @property
    def datatype_iri(self) -> str | None:
        return self.datatype or None

    @property
    def language_tag(self) -> str | None:
        return self.language or None

    def __repr__(self) -> str:
        return f"Node({self.n3()})"

    def n3(self) -> str:
        # imported lazily: nquads depends on this module
        from .nquads import format_term

        return format_term(self)


def _check_iri(iri: str) -> None:
    if not isinstance(iri, str) or not iri:
        raise ValueError("IRI must be a non-empty string")
    if _WHITESPACE.search(iri):
        raise ValueError(f"IRI contains whitespace: {iri!r}")


def uri(iri: str) -> Node:
    return Node(Kind.URI, iri)


def bnode(label: str) -> Node:
    return Node(Kind.BLANK, label)


def literal(lexical: str, datatype: str | None = None, language: str | None = None) -> Node:
    return Node(Kind.LITERAL, lexical, datatype or "", language or "")


class _QuadFields(NamedTuple):
    subject: Node
    predicate: Node
    object: Node
    graph: Node


class Quad(_QuadFields):
    """``(subject, predicate, object, graph)``; tuple order is quad order."""

    __slots__ = ()

    def __new__(cls, subject: Node, predicate: Node, object: Node, graph: Node):
        if subject.kind is Kind.LITERAL:
            raise ValueError("quad subject cannot be a literal")
        if predicate.kind is not Kind.URI:
            raise ValueError("quad predicate must be a URI")
        if graph.kind is not Kind.URI:
            raise ValueError("graph name must be a URI")
        return super().__new__(cls, subject, predicate, object, graph)


def node_compare(a: Node, b: Node) -> int:
    """Return -1, 0 or 1."""
    return (a > b) - (a < b)


def quad_compare(a: Quad, b: Quad) -> int:
    return (a > b) - (a < b)


def term_equals(a: Node, b: Node) -> bool:
    """Exact term equality; ``"1.0"`` and ``"1"`` are different terms."""
    return a == b


@dataclass(frozen=True, slots=True)
class ResolvedQuad:
    """A fused quad, the graphs it was selected or derived from, and its F-quality."""

    quad: Quad
    sources: frozenset[Node]
    quality: float

    def __post_init__(self):
        if not self.sources:
            raise ValueError("resolved quad needs at least one source graph")
        if not 0.0 <= self.quality <= 1.0:
            raise ValueError(f"quality {self.quality} outside [0, 1]")


@dataclass(frozen=True, slots=True)
class ConflictCluster:
    """All quads sharing one subject and one predicate."""

    subject: Node
    predicate: Node
    quads: tuple[Quad, ...]

    def __post_init__(self):
        if not self.quads:
            raise ValueError("conflict cluster cannot be empty")
        s, p = self.subject, self.predicate
        for q in self.quads:
            if q.subject != s or q.predicate != p:
                raise ValueError(f"quad {q} does not belong to cluster ({s}, {p})")
        if len(set(self.quads)) != len(self.quads):
            raise ValueError("conflict cluster contains duplicate quads")

    @classmethod
    def _trusted(cls, subject: Node, predicate: Node, quads: tuple[Quad, ...]) -> ConflictCluster:
        """Skip validation; for callers that group deduplicated, sorted quads."""
        self = object.__new__(cls)
        object.__setattr__(self, "subject", subject)
        object.__setattr__(self, "predicate", predicate)
        object.__setattr__(self, "quads", quads)
        return self

    @classmethod
    def of(cls, quads) -> ConflictCluster:
        quads = tuple(quads)
        if not quads:
            raise ValueError("conflict cluster cannot be empty")
        return cls(quads[0].subject, quads[0].predicate, quads)

    def __len__(self) -> int:
        return len(self.quads)

    def graphs(self) -> set[Node]:
        return {q.graph for q in self.quads}

    def objects(self) -> list[Node]:
        """Distinct objects in term order."""
        return sorted({q.object for q in self.quads})
