"""The conflict resolution pipeline.

canonical mapping -> URI rewriting -> sort + dedupe -> clustering ->
per-cluster strategy selection and resolution.
"""
from __future__ import annotations

import itertools
import operator
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Sequence

from .canonical import CanonicalMap, build_canonical_mapping
from .functions import INSERTED_AT, ResolutionContext, lookup_function, validate_strategy
from .model import ConflictCluster, Kind, Node, Quad, ResolvedQuad, uri
from .quality import ODCS_SCORE, SECONDS_PER_JULIAN_YEAR
from .strategy import ResolutionPolicy, ResolutionStrategy


@dataclass(frozen=True)
class FusionConfig:
    score_predicate: str = ODCS_SCORE
    timestamp_predicate: str = INSERTED_AT
    default_score: float = 1.0
    date_distance_max: float = SECONDS_PER_JULIAN_YEAR
    preferred_namespaces: tuple[str, ...] = field(default_factory=tuple)
    workers: int = 1
    chunk_size: int = 2000

    def __post_init__(self):
        if self.workers < 1:
            raise ValueError("workers must be >= 1")

    def context(self, metadata: Sequence[Quad]) -> ResolutionContext:
        return ResolutionContext.from_metadata(
            metadata,
            uri(self.score_predicate),
            self.default_score,
            date_distance_max=self.date_distance_max,
            timestamp_predicate=uri(self.timestamp_predicate),
        )


def resolve_uris(quads: Iterable[Quad], mapping: CanonicalMap) -> list[Quad]:
    """Rewrite subject, predicate and URI objects to canonical URIs; graphs stay as they are."""
    if not mapping:
        return list(quads)
    get = mapping.getter()
    uri_kind = Kind.URI
    make = Quad._make  # URIs are replaced by URIs, so positions stay valid
    out = []
    for q in quads:
        s, p, o, g = q
        s2 = get(s, s)
        p2 = get(p, p)
        o2 = get(o, o) if o.kind is uri_kind else o
        if s2 is s and p2 is p and o2 is o:
            out.append(q)
        else:
            out.append(make((s2, p2, o2, g)))
    return out


def _grouped(quads: Iterable[Quad]) -> dict[tuple[Node, Node], list[Quad]]:
    groups: dict[tuple[Node, Node], list[Quad]] = {}
    for q in quads:
        key = (q[0], q[1])
        group = groups.get(key)
        if group is None:
            groups[key] = [q]
        else:
            group.append(q)
    return groups


def _sorted_unique(group: list[Quad]) -> list[Quad]:
    # deduplicating after the per-group sort is much cheaper than hashing every quad
    if len(group) == 1:
        return group
    group.sort()
    prev = group[0]
    out = [prev]
    for q in group:
        if q != prev:
            out.append(q)
            prev = q
    return out


def sort_and_dedupe(quads: Iterable[Quad]) -> list[Quad]:
    """Distinct quads in term order.

    Sorting many small (subject, predicate) groups is much cheaper than one
    global sort of a large list, and yields the same order.
    """
    groups = _grouped(quads)
    out: list[Quad] = []
    for key in sorted(groups):
        out.extend(_sorted_unique(groups[key]))
    return out


def cluster_quads(sorted_quads: Iterable[Quad]) -> Iterator[ConflictCluster]:
    """Group runs of quads sharing subject and predicate; input must be sorted and deduplicated."""
    for (s, p), group in itertools.groupby(sorted_quads, key=operator.itemgetter(0, 1)):
        yield ConflictCluster._trusted(s, p, tuple(group))


def sorted_clusters(quads: Iterable[Quad]) -> Iterator[ConflictCluster]:
    """``cluster_quads(sort_and_dedupe(quads))`` without materializing the flat list."""
    groups = _grouped(quads)
    trusted = ConflictCluster._trusted
    for key in sorted(groups):
        yield trusted(key[0], key[1], tuple(_sorted_unique(groups.pop(key))))


class StrategyTable:
    """Strategy lookup by canonical predicate.

    When several configured properties share one canonical URI, the
    smallest configured URI wins.
    """

    def __init__(self, policy: ResolutionPolicy, mapping: CanonicalMap):
        self.default = policy.default
        self._by_canonical: dict[Node, ResolutionStrategy] = {}
        for prop in sorted(policy.per_property, reverse=True):
            self._by_canonical[mapping.canonical_of(prop)] = policy.per_property[prop]

    def __call__(self, predicate: Node) -> ResolutionStrategy:
        return self._by_canonical.get(predicate, self.default)


def select_strategy(predicate: Node, policy: ResolutionPolicy, mapping: CanonicalMap) -> ResolutionStrategy:
    return StrategyTable(policy, mapping)(predicate)


def validate_policy(policy: ResolutionPolicy) -> None:
    validate_strategy(policy.default)
    for strategy in policy.per_property.values():
        validate_strategy(strategy)


def resolve_clusters(
    clusters: Iterable[ConflictCluster], strategies: StrategyTable, ctx: ResolutionContext
) -> list[ResolvedQuad]:
    out: list[ResolvedQuad] = []
    resolvers: dict[ResolutionStrategy, object] = {}
    for cluster in clusters:
        strategy = strategies(cluster.predicate)
        fn = resolvers.get(strategy)
        if fn is None:
            fn = resolvers[strategy] = lookup_function(strategy.function).resolve
        out.extend(fn(cluster, ctx, strategy))
    return out


def _resolve_chunk(args) -> list[ResolvedQuad]:
    clusters, strategies, ctx = args
    return resolve_clusters(clusters, strategies, ctx)


def _chunks(it: Iterable, size: int) -> Iterator[list]:
    it = iter(it)
    while chunk := list(itertools.islice(it, size)):
        yield chunk


def fuse(
    data: Iterable[Quad],
    metadata: Sequence[Quad],
    links: Iterable[tuple[Node, Node]],
    policy: ResolutionPolicy = ResolutionPolicy(),
    config: FusionConfig = FusionConfig(),
) -> list[ResolvedQuad]:
    """Resolve conflicts in ``data``; output follows cluster sort order."""
    validate_policy(policy)  # fail before any work is done
    mapping = build_canonical_mapping(links, config.preferred_namespaces)
    return fuse_with_mapping(data, metadata, mapping, policy, config)


def fuse_with_mapping(
    data: Iterable[Quad],
    metadata: Sequence[Quad],
    mapping: CanonicalMap,
    policy: ResolutionPolicy = ResolutionPolicy(),
    config: FusionConfig = FusionConfig(),
) -> list[ResolvedQuad]:
    validate_policy(policy)
    clusters = sorted_clusters(resolve_uris(data, mapping))
    ctx = config.context(metadata)
    strategies = StrategyTable(policy, mapping)
    if config.workers == 1:
        return resolve_clusters(clusters, strategies, ctx)
    out: list[ResolvedQuad] = []
    jobs = ((chunk, strategies, ctx) for chunk in _chunks(clusters, config.chunk_size))
    with ProcessPoolExecutor(max_workers=config.workers) as pool:
        for part in pool.map(_resolve_chunk, jobs):
            out.extend(part)
    return out
