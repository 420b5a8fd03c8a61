"""Canonical URIs from ``owl:sameAs``-style links.

Links are treated as undirected edges; every weakly connected component gets
one representative URI and all its members are mapped to it.
"""
from __future__ import annotations

import gc
import logging
import operator
from typing import Callable, Iterable, Iterator, Mapping, Sequence

from .model import Kind, Node, Quad, uri

log = logging.getLogger(__name__)

OWL_SAME_AS = "http://www.w3.org/2002/07/owl#sameAs"
ODCS_EQUIVALENT = "http://opendata.cz/infrastructure/odcleanstore/equivalent"
DEFAULT_LINK_PREDICATES = frozenset({uri(OWL_SAME_AS), uri(ODCS_EQUIVALENT)})


class DisjointSet:
    """Union-find over hashable items with union by rank and path halving."""

    def __init__(self):
        self._index: dict = {}
        self._items: list = []
        self._parent: list[int] = []
        self._rank: list[int] = []

    def __len__(self) -> int:
        return len(self._items)

    def __contains__(self, item) -> bool:
        return item in self._index

    def _id(self, item) -> int:
        i = self._index.get(item)
        if i is None:
            i = self._index[item] = len(self._items)
            self._items.append(item)
            self._parent.append(i)
            self._rank.append(0)
        return i

    def _find(self, i: int) -> int:
        parent = self._parent
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    def add(self, item) -> None:
        self._id(item)

    def find(self, item):
        """Representative item of ``item``'s set (adds ``item`` if unseen)."""
        return self._items[self._find(self._id(item))]

    def union(self, a, b) -> None:
        ra, rb = self._find(self._id(a)), self._find(self._id(b))
        if ra == rb:
            return
        rank = self._rank
        if rank[ra] < rank[rb]:
            ra, rb = rb, ra
        self._parent[rb] = ra
        if rank[ra] == rank[rb]:
            rank[ra] += 1

    def union_all(self, pairs: Iterable[tuple], check: Callable[[object], None] | None = None) -> None:
        """``union`` over many pairs; the hot loop is inlined for speed.

        ``check`` is called once per item the first time it is seen.
        """
        index, items, parent, rank = self._index, self._items, self._parent, self._rank
        for a, b in pairs:
            ia = index.get(a)
            if ia is None:
                if check is not None:
                    check(a)
                ia = index[a] = len(items)
                items.append(a)
                parent.append(ia)
                rank.append(0)
            ib = index.get(b)
            if ib is None:
                if check is not None:
                    check(b)
                ib = index[b] = len(items)
                items.append(b)
                parent.append(ib)
                rank.append(0)
            while parent[ia] != ia:
                parent[ia] = parent[parent[ia]]
                ia = parent[ia]
            while parent[ib] != ib:
                parent[ib] = parent[parent[ib]]
                ib = parent[ib]
            if ia == ib:
                continue
            if rank[ia] < rank[ib]:
                ia, ib = ib, ia
            parent[ib] = ia
            if rank[ia] == rank[ib]:
                rank[ia] += 1

    def groups(self) -> list[list]:
        parent = self._parent
        buckets: list = [None] * len(parent)
        out = []
        for i, item in enumerate(self._items):
            r = i
            while parent[r] != r:
                parent[r] = parent[parent[r]]
                r = parent[r]
            bucket = buckets[r]
            if bucket is None:
                bucket = buckets[r] = []
                out.append(bucket)
            bucket.append(item)
        return out


class CanonicalMap(Mapping[Node, Node]):
    """Immutable partial mapping URI -> canonical URI.

    Every URI that occurs in some link is a key, including the canonical URIs
    themselves (which map to themselves).
    """

    def __init__(self, mapping: dict[Node, Node] | None = None, preferred_namespaces: Sequence[str] = ()):
        self._map = dict(mapping or {})
        self.preferred_namespaces = tuple(preferred_namespaces)

    def __getitem__(self, key: Node) -> Node:
        return self._map[key]

    def __iter__(self):
        return iter(self._map)

    def __len__(self) -> int:
        return len(self._map)

    def __eq__(self, other) -> bool:
        if isinstance(other, CanonicalMap):
            return self._map == other._map
        return NotImplemented

    def __hash__(self):
        return hash(frozenset(self._map.items()))

    def canonical_of(self, u: Node) -> Node:
        return self._map.get(u, u)

    def getter(self):
        """Bound ``dict.get`` of the underlying table, for hot loops."""
        return self._map.get

    def components(self) -> list[set[Node]]:
        groups: dict[Node, set[Node]] = {}
        for member, canon in self._map.items():
            groups.setdefault(canon, set()).add(member)
        return list(groups.values())

    def non_fixed_points(self) -> Iterator[tuple[Node, Node]]:
        """``(u, canonical(u))`` for every ``u`` that is not its own canonical URI, sorted."""
        for u in sorted(self._map):
            c = self._map[u]
            if c != u:
                yield u, c


def canonical_of(mapping: CanonicalMap, u: Node) -> Node:
    return mapping.canonical_of(u)


def extract_links(
    quads: Iterable[Quad], link_predicates: Iterable[Node] = DEFAULT_LINK_PREDICATES
) -> tuple[list[tuple[Node, Node]], int]:
    """Pull ``(subject, object)`` URI pairs out of link statements.

    Returns the links and the number of link statements skipped because the
    subject or object was not a URI.
    """
    predicates = frozenset(link_predicates)
    links: list[tuple[Node, Node]] = []
    skipped = 0
    for q in quads:
        if q.predicate not in predicates:
            continue
        if q.subject.kind is Kind.URI and q.object.kind is Kind.URI:
            links.append((q.subject, q.object))
        else:
            skipped += 1
    if skipped:
        log.warning("skipped %d link statement(s) without URI subject and object", skipped)
    return links, skipped


def _representative_key(node: Node, prefixes: Sequence[str]) -> tuple[int, str]:
    for rank, prefix in enumerate(prefixes):
        if node.value.startswith(prefix):
            return rank, node.value
    return len(prefixes), node.value


_iri = operator.itemgetter(1)


def _require_uri(node: Node) -> None:
    if node.kind is not Kind.URI:
        raise ValueError(f"links must connect URIs, got {node}")


def build_canonical_mapping(
    links: Iterable[tuple[Node, Node]], preferred_namespaces: Sequence[str] = ()
) -> CanonicalMap:
    """Map every linked URI to the representative of its component.

    The representative is the member in the earliest-listed preferred
    namespace; ties and members outside every preferred namespace fall back
    to the lexicographically smallest IRI.
    """
    prefixes = tuple(preferred_namespaces)
    mapping: dict[Node, Node] = {}
    # only acyclic containers are built here; cycle collection passes would
    # rescan the growing tables over and over
    was_enabled = gc.isenabled()
    gc.disable()
    try:
        dsu = DisjointSet()
        dsu.union_all(links, _require_uri)
        for members in dsu.groups():
            if prefixes:
                canon = min(members, key=lambda n: _representative_key(n, prefixes))
            else:
                canon = min(members, key=_iri)  # all URIs: term order is IRI order
            for m in members:
                mapping[m] = canon
    finally:
        if was_enabled:
            gc.enable()
    return CanonicalMap(mapping, prefixes)


def export_canonical(mapping: CanonicalMap) -> Iterator[str]:
    """N-Triples lines ``<u> owl:sameAs <canonical(u)>`` for non-fixed points."""
    from .nquads import format_term

    same_as = format_term(uri(OWL_SAME_AS))
    for u, c in mapping.non_fixed_points():
        yield f"{format_term(u)} {same_as} {format_term(c)} .\n"
