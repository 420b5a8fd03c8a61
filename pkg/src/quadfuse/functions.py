"""Conflict resolution functions.

Deciding functions return objects that occur in the conflict cluster;
mediating functions compute new ones. Every output is scored with
:func:`quadfuse.quality.assess_quality` using the settings of the function's
descriptor.
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from decimal import Decimal, localcontext
from enum import Enum
from functools import lru_cache, partial
from typing import Callable, Iterable, Sequence

from .model import XSD_DOUBLE, XSD_INTEGER, ConflictCluster, Kind, Node, Quad, ResolvedQuad, literal, uri
from .quality import (
    SECONDS_PER_JULIAN_YEAR,
    ClusterContext,
    Mode,
    QualityParams,
    ScoreLookup,
    assess_quality,
    assess_unchecked,
    parse_datetime,
    parse_number,
)
from .strategy import Cardinality, ErrorStrategy, ResolutionStrategy

log = logging.getLogger(__name__)

INSERTED_AT = "urn:quadfuse:insertedAt"


class FunctionKind(Enum):
    DECIDING = "Deciding"
    MEDIATING = "Mediating"


class UnknownFunctionError(LookupError):
    def __init__(self, name: str):
        super().__init__(f"unknown resolution function {name!r}")
        self.name = name


class MissingParamError(ValueError):
    pass


class MetadataIndex:
    """``(subject, predicate) -> [objects]`` over metadata quads."""

    def __init__(self, quads: Iterable[Quad] = ()):
        self._index: dict[tuple[Node, Node], list[Node]] = {}
        for q in quads:
            self._index.setdefault((q.subject, q.predicate), []).append(q.object)

    def values(self, subject: Node, predicate: Node) -> list[Node]:
        return self._index.get((subject, predicate), [])


@dataclass
class ResolutionContext:
    """Everything besides the cluster that a resolution function may consult."""

    scores: ScoreLookup = field(default_factory=ScoreLookup)
    metadata: MetadataIndex = field(default_factory=MetadataIndex)
    date_distance_max: float = SECONDS_PER_JULIAN_YEAR
    timestamp_predicate: Node = field(default_factory=lambda: uri(INSERTED_AT))

    @classmethod
    def from_metadata(cls, metadata: Sequence[Quad], score_predicate: Node | None = None,
                      default_score: float = 1.0, **kwargs) -> ResolutionContext:
        return cls(ScoreLookup.from_metadata(metadata, score_predicate, default_score),
                   MetadataIndex(metadata), **kwargs)


ResolveFn = Callable[[ConflictCluster, ResolutionContext, ResolutionStrategy], list[ResolvedQuad]]


@dataclass(frozen=True)
class FunctionDescriptor:
    name: str
    kind: FunctionKind
    consider_conflicts: bool
    consider_support: bool
    required_params: tuple[str, ...] = ()
    resolve: ResolveFn | None = field(default=None, compare=False, repr=False)

    @property
    def mode(self) -> Mode:
        return Mode.DECIDING if self.kind is FunctionKind.DECIDING else Mode.MEDIATING


# -- parameters ----------------------------------------------------------------

def _param(strategy: ResolutionStrategy, key: str) -> str:
    value = strategy.params.get(key)
    if value is None or value == "":
        raise MissingParamError(f"{strategy.function} requires parameter {key!r}")
    return value


def _int_param(strategy: ResolutionStrategy, key: str, minimum: int) -> int:
    raw = _param(strategy, key)
    try:
        value = int(raw)
    except ValueError:
        raise MissingParamError(f"{strategy.function}: parameter {key}={raw!r} is not an integer") from None
    if value < minimum:
        raise MissingParamError(f"{strategy.function}: parameter {key} must be >= {minimum}")
    return value


def _unit_param(strategy: ResolutionStrategy, key: str) -> float:
    raw = _param(strategy, key)
    value = parse_number(raw)
    if value is None or not 0.0 <= value <= 1.0:
        raise MissingParamError(f"{strategy.function}: parameter {key}={raw!r} must be a number in [0, 1]")
    return value


def _iri_param(strategy: ResolutionStrategy, key: str) -> Node:
    raw = _param(strategy, key).strip()
    if raw.startswith("<") and raw.endswith(">"):
        raw = raw[1:-1]
    try:
        return uri(raw)
    except ValueError:
        raise MissingParamError(f"{strategy.function}: parameter {key}={raw!r} is not an IRI") from None


# -- shared machinery ------------------------------------------------------------

@lru_cache(maxsize=256)
def _quality_params(descriptor: FunctionDescriptor, strategy: ResolutionStrategy,
                    default_score: float, date_distance_max: float) -> QualityParams:
    return QualityParams(
        consider_conflicts=descriptor.consider_conflicts and strategy.cardinality is Cardinality.SINGLEVALUED,
        consider_support=descriptor.consider_support,
        agree_coefficient=strategy.agree_coefficient,
        default_source_score=default_score,
        date_distance_max=date_distance_max,
    )


class _Job:
    """One function application: the cluster grouped by object, plus scoring."""

    def __init__(self, cluster: ConflictCluster, ctx: ResolutionContext, strategy: ResolutionStrategy,
                 descriptor: FunctionDescriptor):
        self.cluster = cluster
        self.ctx = ctx
        self.strategy = strategy
        self.cc = ClusterContext(cluster, ctx.scores)
        self.params = _quality_params(descriptor, strategy, ctx.scores.default, ctx.date_distance_max)
        self.mode = descriptor.mode
        groups: dict[Node, list[Node]] = {}
        for q in sorted(cluster.quads):
            groups.setdefault(q.object, []).append(q.graph)
        self.groups = groups

    def emit(self, value: Node, sources: Sequence[Node], quality: float) -> ResolvedQuad:
        c = self.cluster
        return ResolvedQuad(Quad(c.subject, c.predicate, value, min(sources)), frozenset(sources), quality)

    def decide(self, value: Node, params: QualityParams | None = None) -> ResolvedQuad:
        sources = self.groups[value]
        q = assess_unchecked(value, sources, self.cc, params or self.params, Mode.DECIDING)
        return self.emit(value, sources, q)

    def scored_all(self) -> list[ResolvedQuad]:
        return [self.decide(v) for v in self.groups]

    def source_score(self, value: Node) -> float:
        return max(self.ctx.scores(g) for g in self.groups[value])


def _numbers(nodes: Iterable[Node]) -> list[float] | None:
    """Numeric readings of all nodes, or ``None`` if any is not a number."""
    out = []
    for n in nodes:
        v = parse_number(n.value) if n.kind is Kind.LITERAL else None
        if v is None:
            return None
        out.append(v)
    return out


def _utf8_len(node: Node) -> int:
    return len(node.value.encode("utf-8"))


def _by_quality(results: list[ResolvedQuad]) -> list[ResolvedQuad]:
    return sorted(results, key=lambda r: (-r.quality, r.quad.object))


# -- deciding functions ----------------------------------------------------------

def _job(cluster, ctx, strategy, name) -> _Job:
    return _Job(cluster, ctx, strategy, lookup_function(name))


def resolve_all(cluster: ConflictCluster, ctx: ResolutionContext, strategy: ResolutionStrategy) -> list[ResolvedQuad]:
    """Every distinct object, each with the graphs that state it."""
    return _job(cluster, ctx, strategy, "ALL").scored_all()


def resolve_best(cluster: ConflictCluster, ctx: ResolutionContext, strategy: ResolutionStrategy,
                 variant: str = "BEST") -> list[ResolvedQuad]:
    variant = variant.upper()
    job = _job(cluster, ctx, strategy, variant)
    if variant == "BEST":
        return _by_quality(job.scored_all())[:1]
    if variant == "TOPN":
        n = _int_param(strategy, "n", 1)
        return _by_quality(job.scored_all())[:n]
    if variant == "THRESHOLD":
        threshold = _unit_param(strategy, "threshold")
        return [r for r in job.scored_all() if r.quality > threshold]
    raise UnknownFunctionError(variant)


def _filter_bounds(strategy: ResolutionStrategy) -> tuple[str | None, str | None]:
    lo, hi = strategy.params.get("min") or None, strategy.params.get("max") or None
    if lo is None and hi is None:
        raise MissingParamError("FILTER requires parameter 'min' and/or 'max'")
    return lo, hi


def resolve_selector(cluster: ConflictCluster, ctx: ResolutionContext, strategy: ResolutionStrategy,
                     name: str = "ANY") -> list[ResolvedQuad]:
    name = name.upper()
    job = _job(cluster, ctx, strategy, name)
    values = list(job.groups)  # distinct objects in term order
    if name == "NONE":
        return []
    if name == "ANY":
        return [job.decide(values[0])]
    if name == "CERTAIN":
        return [job.decide(values[0])] if len(values) == 1 else []
    if name == "LONGEST":
        return [job.decide(min(values, key=lambda v: (-_utf8_len(v), v)))]
    if name == "SHORTEST":
        return [job.decide(min(values, key=lambda v: (_utf8_len(v), v)))]
    if name in ("MAX", "MIN"):
        numbers = _numbers(values)
        if numbers is not None:
            sign = -1.0 if name == "MAX" else 1.0
            best = min(range(len(values)), key=lambda i: (sign * numbers[i], values[i]))
            return [job.decide(values[best])]
        return [job.decide(values[-1] if name == "MAX" else values[0])]
    if name == "FILTER":
        lo, hi = _filter_bounds(strategy)
        bounds = [b for b in (lo, hi) if b is not None]
        numbers = _numbers(values)
        if numbers is not None and all(parse_number(b) is not None for b in bounds):
            nlo = parse_number(lo) if lo is not None else -math.inf
            nhi = parse_number(hi) if hi is not None else math.inf
            keep = [v for v, x in zip(values, numbers) if nlo <= x <= nhi]
        else:
            keep = [v for v in values if (lo is None or lo <= v.value) and (hi is None or v.value <= hi)]
        return [job.decide(v) for v in keep]
    if name == "BESTSOURCE":
        return [job.decide(min(values, key=lambda v: (-job.source_score(v), v)))]
    if name == "CHOOSESOURCE":
        source = _iri_param(strategy, "source")
        return [job.decide(v) for v in values if source in job.groups[v]]
    raise UnknownFunctionError(name)


def resolve_vote(cluster: ConflictCluster, ctx: ResolutionContext, strategy: ResolutionStrategy,
                 weighted: bool = False) -> list[ResolvedQuad]:
    """Most frequent object; ties go to the higher F-quality, then the smaller term.

    Only tied leaders are scored for the tie-break.
    """
    job = _job(cluster, ctx, strategy, "WEIGHTEDVOTE" if weighted else "VOTE")
    if weighted:
        votes = {v: math.fsum(ctx.scores(g) for g in gs) for v, gs in job.groups.items()}
    else:
        votes = {v: float(len(gs)) for v, gs in job.groups.items()}
    top = max(votes.values())
    leaders = [v for v, n in votes.items() if n == top]
    if len(leaders) == 1:
        return [job.decide(leaders[0])]
    return _by_quality([job.decide(v) for v in leaders])[:1]


def _metadata_order(values: list[Node]) -> Callable[[Node], object]:
    """Sort key for metadata values: numeric, else dateTime, else lexical."""
    if _numbers(values) is not None:
        return lambda n: parse_number(n.value)
    if values and all(n.kind is Kind.LITERAL and parse_datetime(n.value) is not None for n in values):
        return lambda n: parse_datetime(n.value)
    return lambda n: n.value


def resolve_source_metadata(cluster: ConflictCluster, ctx: ResolutionContext, strategy: ResolutionStrategy,
                            mode: str = "MAXSOURCEMETADATA") -> list[ResolvedQuad]:
    """Objects of the graph whose metadata value is maximal (or minimal)."""
    mode = mode.upper()
    job = _job(cluster, ctx, strategy, mode)
    if mode == "LATEST":
        prop = _iri_param(strategy, "metadataProperty") if strategy.params.get("metadataProperty") \
            else ctx.timestamp_predicate
    else:
        prop = _iri_param(strategy, "metadataProperty")
    per_graph = {g: ctx.metadata.values(g, prop) for g in sorted(job.cc.graph_set)}
    per_graph = {g: vs for g, vs in per_graph.items() if vs}
    if not per_graph:
        log.warning("%s: no graph of cluster (%s, %s) has %s; falling back to ANY",
                    mode, cluster.subject, cluster.predicate, prop)
        return [job.decide(next(iter(job.groups)))]
    key = _metadata_order([v for vs in per_graph.values() for v in vs])
    pick_max = mode != "MINSOURCEMETADATA"
    graph_value = {g: (max if pick_max else min)(key(v) for v in vs) for g, vs in per_graph.items()}
    target = (max if pick_max else min)(graph_value.values())
    winner = min(g for g, v in graph_value.items() if v == target)
    return [job.decide(v) for v, gs in job.groups.items() if winner in gs]


# -- mediating functions ---------------------------------------------------------

def _decimal(node: Node) -> Decimal | None:
    if node.kind is not Kind.LITERAL or parse_number(node.value) is None:
        return None
    return Decimal(node.value.strip())


def format_xsd_double(value: Decimal) -> str:
    x = float(value)
    if math.isnan(x):
        return "NaN"
    if math.isinf(x):
        return "INF" if x > 0 else "-INF"
    text = repr(x)
    return text[:-2] if text.endswith(".0") else text


def resolve_mediating(cluster: ConflictCluster, ctx: ResolutionContext, strategy: ResolutionStrategy,
                      name: str = "AVG") -> list[ResolvedQuad]:
    name = name.upper()
    job = _job(cluster, ctx, strategy, name)
    quads = sorted(cluster.quads)

    if name in ("COUNT", "CONCAT", "CONSTANT"):
        if name == "COUNT":
            value = literal(str(len(job.groups)), XSD_INTEGER)
        elif name == "CONCAT":
            separator = strategy.params.get("separator", "; ")
            value = literal(separator.join(v.value for v in job.groups))
        else:
            value = literal(_param(strategy, "value"))
        sources = sorted(job.cc.graph_set)
        q = assess_quality(value, sources, job.cc, params=job.params, mode=Mode.MEDIATING)
        return [job.emit(value, sources, q)]

    numeric: list[tuple[Quad, Decimal]] = []
    rejected: list[Quad] = []
    for quad in quads:
        d = _decimal(quad.object)
        if d is None:
            rejected.append(quad)
        else:
            numeric.append((quad, d))

    out: list[ResolvedQuad] = []
    if numeric:
        with localcontext() as dctx:
            dctx.prec = 60
            xs = [d for _, d in numeric]
            if name == "SUM":
                result = sum(xs, Decimal(0))
            elif name == "AVG":
                result = sum(xs, Decimal(0)) / len(xs)
            elif name == "MEDIAN":
                xs.sort()
                mid = len(xs) // 2
                result = xs[mid] if len(xs) % 2 else (xs[mid - 1] + xs[mid]) / 2
            else:
                raise UnknownFunctionError(name)
        value = literal(format_xsd_double(result), XSD_DOUBLE)
        sources = sorted({quad.graph for quad, _ in numeric})
        q = assess_quality(value, sources, job.cc, params=job.params, mode=Mode.MEDIATING)
        out.append(job.emit(value, sources, q))

    if rejected and strategy.error_strategy is ErrorStrategy.RETURN_ALL:
        passthrough = QualityParams(
            consider_conflicts=strategy.cardinality is Cardinality.SINGLEVALUED,
            consider_support=True,
            agree_coefficient=job.params.agree_coefficient,
            default_source_score=job.params.default_source_score,
            date_distance_max=job.params.date_distance_max,
        )
        for v in sorted({quad.object for quad in rejected}):
            out.append(job.decide(v, passthrough))
    return out


# -- registry --------------------------------------------------------------------

def _register(table: dict, names: Sequence[str], kind: FunctionKind, conflicts: bool, support: bool,
              fn: Callable, arg: str | None, required: dict[str, tuple[str, ...]] | None = None):
    for name in names:
        resolve = partial(fn, **{arg: name}) if arg else fn
        table[name] = FunctionDescriptor(name, kind, conflicts, support, (required or {}).get(name, ()), resolve)


REGISTRY: dict[str, FunctionDescriptor] = {}
_D, _M = FunctionKind.DECIDING, FunctionKind.MEDIATING
_register(REGISTRY, ["ALL"], _D, True, True, resolve_all, None)
_register(REGISTRY, ["BEST", "TOPN", "THRESHOLD"], _D, True, True, resolve_best, "variant",
          {"TOPN": ("n",), "THRESHOLD": ("threshold",)})
_register(REGISTRY, ["ANY", "LONGEST", "SHORTEST", "MAX", "MIN", "FILTER", "BESTSOURCE", "NONE", "CERTAIN",
                     "CHOOSESOURCE"], _D, True, True, resolve_selector, "name", {"CHOOSESOURCE": ("source",)})
REGISTRY["VOTE"] = FunctionDescriptor("VOTE", _D, True, True, (), partial(resolve_vote, weighted=False))
REGISTRY["WEIGHTEDVOTE"] = FunctionDescriptor("WEIGHTEDVOTE", _D, True, True, (), partial(resolve_vote, weighted=True))
_register(REGISTRY, ["MAXSOURCEMETADATA", "MINSOURCEMETADATA", "LATEST"], _D, True, True,
          resolve_source_metadata, "mode",
          {"MAXSOURCEMETADATA": ("metadataProperty",), "MINSOURCEMETADATA": ("metadataProperty",)})
_register(REGISTRY, ["AVG", "MEDIAN"], _M, True, False, resolve_mediating, "name")
_register(REGISTRY, ["SUM", "CONCAT", "COUNT", "CONSTANT"], _M, False, False, resolve_mediating, "name",
          {"CONSTANT": ("value",)})
del _D, _M


def lookup_function(name: str) -> FunctionDescriptor:
    try:
        return REGISTRY[name.upper()]
    except KeyError:
        raise UnknownFunctionError(name) from None


def validate_strategy(strategy: ResolutionStrategy) -> FunctionDescriptor:
    """Check the function name and its parameters without touching any data."""
    desc = lookup_function(strategy.function)
    for key in desc.required_params:
        _param(strategy, key)
    name = desc.name
    if name == "TOPN":
        _int_param(strategy, "n", 1)
    elif name == "THRESHOLD":
        _unit_param(strategy, "threshold")
    elif name == "FILTER":
        _filter_bounds(strategy)
    elif name == "CHOOSESOURCE" or (name.endswith("SOURCEMETADATA")):
        _iri_param(strategy, "source" if name == "CHOOSESOURCE" else "metadataProperty")
    return desc


def resolve(cluster: ConflictCluster, ctx: ResolutionContext, strategy: ResolutionStrategy) -> list[ResolvedQuad]:
    return lookup_function(strategy.function).resolve(cluster, ctx, strategy)
