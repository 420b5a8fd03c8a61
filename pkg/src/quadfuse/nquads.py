"""Streaming N-Quads / N-Triples reader and writer.

Only the line-based W3C grammar is supported (no prefixes, no TriG sugar).
Input is UTF-8. Triples without a graph term are placed in ``default_graph``.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from enum import Enum
from typing import BinaryIO, Iterable, Iterator

from .model import XSD_DOUBLE, Kind, Node, Quad, ResolvedQuad, literal, uri



class Severity(Enum):
    ERROR = "error"
    WARNING = "warning"


@dataclass(frozen=True)
class ParseIssue:
    line_number: int
    message: str
    severity: Severity = Severity.ERROR

    def __str__(self) -> str:
        return f"line {self.line_number}: {self.severity.value}: {self.message}"


class NQuadsSyntaxError(ValueError):
    """Raised in strict mode on the first malformed line."""

    def __init__(self, issue: ParseIssue):
        super().__init__(str(issue))
        self.issue = issue


_IRI_BODY = r'(?:[^<>"{}|^`\\\x00-\x20]|\\u[0-9A-Fa-f]{4}|\\U[0-9A-Fa-f]{8})*'
_LABEL_BODY = r"\w(?:[\w.\-]*[\w\-])?"
_STRING_BODY = r'(?:[^"\\\n\r]|\\[tbnrf"\'\\]|\\u[0-9A-Fa-f]{4}|\\U[0-9A-Fa-f]{8})*'
_WS = r"[ \t]*"


def _iri(name: str) -> str:
    return f"<(?P<{name}>{_IRI_BODY})>"


def _bnode(name: str) -> str:
    return f"_:(?P<{name}>{_LABEL_BODY})"


_STATEMENT = re.compile(
    rf"(?:{_iri('s_iri')}|{_bnode('s_bn')}){_WS}"
    rf"{_iri('p')}{_WS}"
    rf"(?:{_iri('o_iri')}|{_bnode('o_bn')}"
    rf'|"(?P<o_lex>{_STRING_BODY})"(?:@(?P<o_lang>[a-zA-Z]+(?:-[a-zA-Z0-9]+)*)|\^\^{_iri("o_dt")})?)'
    rf"(?:{_WS}(?:{_iri('g_iri')}|{_bnode('g_bn')}))?"
    rf"{_WS}\.{_WS}(?:#.*)?$"
)

_ESCAPE = re.compile(r'\\(?:u([0-9A-Fa-f]{4})|U([0-9A-Fa-f]{8})|([tbnrf"\'\\]))')
_SIMPLE_ESCAPES = {"t": "\t", "b": "\b", "n": "\n", "r": "\r", "f": "\f", '"': '"', "'": "'", "\\": "\\"}


def _unescape_match(m: re.Match) -> str:
    hex4, hex8, char = m.groups()
    if char is not None:
        return _SIMPLE_ESCAPES[char]
    return chr(int(hex4 or hex8, 16))


def unescape(text: str) -> str:
    if "\\" not in text:
        return text
    return _ESCAPE.sub(_unescape_match, text)


class _Interner:
    """Share one Node object per distinct URI / blank node."""

    def __init__(self):
        self._uris: dict[str, Node] = {}
        self._blanks: dict[str, Node] = {}

    def uri(self, raw: str) -> Node:
        node = self._uris.get(raw)
        if node is None:
            node = self._uris[raw] = uri(unescape(raw))
        return node

    def blank(self, label: str) -> Node:
        node = self._blanks.get(label)
        if node is None:
            node = self._blanks[label] = Node(Kind.BLANK, label)
        return node


def parse_line(line: str, default_graph: Node, interner: _Interner | None = None) -> Quad | None:
    """Parse one statement line; ``None`` for blank or comment lines.

    Raises ``ValueError`` with a human-readable message on malformed input.
    """
    stripped = line.strip()
    if not stripped or stripped.startswith("#"):
        return None
    m = _STATEMENT.match(stripped)
    if m is None:
        raise ValueError("malformed statement")
    if m["g_bn"] is not None:
        raise ValueError("blank node graph names are not supported")
    it = interner or _Interner()
    subject = it.uri(m["s_iri"]) if m["s_iri"] is not None else it.blank(m["s_bn"])
    predicate = it.uri(m["p"])
    if m["o_iri"] is not None:
        obj = it.uri(m["o_iri"])
    elif m["o_bn"] is not None:
        obj = it.blank(m["o_bn"])
    else:
        dt = m["o_dt"]
        obj = literal(unescape(m["o_lex"]), unescape(dt) if dt is not None else None, m["o_lang"])
    graph = it.uri(m["g_iri"]) if m["g_iri"] is not None else default_graph
    return Quad(subject, predicate, obj, graph)


def iter_quads(
    stream: Iterable[bytes | str],
    default_graph: Node,
    issues: list[ParseIssue] | None = None,
    strict: bool = False,
) -> Iterator[Quad]:
    """Lazily parse ``stream`` line by line.

    Malformed lines are reported into ``issues`` and skipped, unless
    ``strict`` is set, in which case :class:`NQuadsSyntaxError` is raised.
    """
    interner = _Interner()
    for lineno, raw in enumerate(stream, 1):
        try:
            line = raw.decode("utf-8") if isinstance(raw, bytes) else raw
            quad = parse_line(line, default_graph, interner)
        except (UnicodeDecodeError, ValueError) as exc:
            reason = "invalid UTF-8" if isinstance(exc, UnicodeDecodeError) else str(exc)
            issue = ParseIssue(lineno, reason, Severity.ERROR)
            if strict:
                raise NQuadsSyntaxError(issue) from exc
            if issues is not None:
                issues.append(issue)
            continue
        if quad is not None:
            yield quad


def parse_quads(
    stream: Iterable[bytes | str], default_graph: Node, strict: bool = False
) -> tuple[list[Quad], list[ParseIssue]]:
    issues: list[ParseIssue] = []
    quads = list(iter_quads(stream, default_graph, issues, strict))
    return quads, issues


def parse_file(path, default_graph: Node, strict: bool = False) -> tuple[list[Quad], list[ParseIssue]]:
    with open(path, "rb") as fh:
        return parse_quads(fh, default_graph, strict)


# -- writing ---------------------------------------------------------------

_LITERAL_ESCAPES = {"\\": "\\\\", '"': '\\"', "\n": "\\n", "\r": "\\r"}
_LITERAL_NEEDS_ESCAPE = re.compile(r'[\\"\n\r]')
_IRI_NEEDS_ESCAPE = re.compile(r'[<>"{}|^`\\\x00-\x20]')


def _escape_literal(text: str) -> str:
    return _LITERAL_NEEDS_ESCAPE.sub(lambda m: _LITERAL_ESCAPES[m.group()], text)


def _escape_iri(iri: str) -> str:
    return _IRI_NEEDS_ESCAPE.sub(lambda m: f"\\u{ord(m.group()):04X}", iri)


def format_term(node: Node) -> str:
    kind = node.kind
    if kind is Kind.URI:
        return f"<{_escape_iri(node.value)}>"
    if kind is Kind.BLANK:
        return f"_:{node.value}"
    text = f'"{_escape_literal(node.value)}"'
    if node.language:
        return f"{text}@{node.language}"
    if node.datatype:
        return f"{text}^^<{_escape_iri(node.datatype)}>"
    return text


def format_quad(quad: Quad) -> str:
    s, p, o, g = quad
    return f"{format_term(s)} {format_term(p)} {format_term(o)} {format_term(g)} .\n"


def serialize_quads(quads: Iterable[Quad], out: BinaryIO) -> int:
    """Write canonical N-Quads to a binary stream; returns the number of lines."""
    n = 0
    for quad in quads:
        out.write(format_quad(quad).encode("utf-8"))
        n += 1
    return n


def format_double(x: float) -> str:
    """Shortest round-trip decimal form, without a trailing ``.0``."""
    text = repr(float(x))
    if text.endswith(".0"):
        text = text[:-2]
    return text


@dataclass(frozen=True)
class OutputConfig:
    result_graph_prefix: str = "urn:quadfuse:result:"
    source_predicate: str = "urn:quadfuse:sourceGraph"
    quality_predicate: str = "urn:quadfuse:quality"
    annotation_graph: str = "urn:quadfuse:metadata"


def resolved_to_quads(resolved: Iterable[ResolvedQuad], config: OutputConfig = OutputConfig()) -> Iterator[Quad]:
    """Expand resolved quads into data and annotation quads.

    The i-th resolved quad (1-based) goes to graph ``<prefix><i>``, followed by
    one source-graph annotation per source and one quality annotation.
    """
    source_p = uri(config.source_predicate)
    quality_p = uri(config.quality_predicate)
    annotation_g = uri(config.annotation_graph)
    for i, r in enumerate(resolved, 1):
        minted = uri(f"{config.result_graph_prefix}{i}")
        s, p, o, _ = r.quad
        yield Quad(s, p, o, minted)
        for g in sorted(r.sources):
            yield Quad(minted, source_p, g, annotation_g)
        yield Quad(minted, quality_p, literal(format_double(r.quality), XSD_DOUBLE), annotation_g)


def serialize_resolved(resolved: Iterable[ResolvedQuad], out: BinaryIO, config: OutputConfig = OutputConfig()) -> int:
    return serialize_quads(resolved_to_quads(resolved, config), out)
