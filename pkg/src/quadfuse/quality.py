"""F-quality of fused values.

The score of a value combines three factors:

1. the aggregated quality score of the graphs the value came from,
2. a conflict factor: one minus the score-weighted mean distance between the
   value and every object in the conflict cluster,
3. a support bonus when several graphs assert exactly the same value.
"""
from __future__ import annotations

import logging
import math
import re
from dataclasses import dataclass
from datetime import datetime, timedelta, timezone
from enum import Enum
from typing import Iterable, Sequence

from rapidfuzz.distance.Levenshtein import distance as _levenshtein

from .model import RDF_LANGSTRING, XSD_STRING, ConflictCluster, Kind, Node, Quad

log = logging.getLogger(__name__)

ODCS_SCORE = "http://opendata.cz/infrastructure/odcleanstore/score"
SECONDS_PER_JULIAN_YEAR = 31_557_600.0


class Mode(Enum):
    """How source scores are aggregated: max for deciding, mean for mediating."""

    DECIDING = "deciding"
    MEDIATING = "mediating"


class EmptySourcesError(ValueError):
    pass


@dataclass(frozen=True)
class QualityParams:
    consider_conflicts: bool = True
    consider_support: bool = True
    agree_coefficient: float = 4.0
    default_source_score: float = 1.0
    date_distance_max: float = SECONDS_PER_JULIAN_YEAR

    def __post_init__(self):
        if not self.agree_coefficient > 0:
            raise ValueError("agree_coefficient must be positive")
        if not 0.0 <= self.default_source_score <= 1.0:
            raise ValueError("default_source_score must lie in [0, 1]")
        if not self.date_distance_max > 0:
            raise ValueError("date_distance_max must be positive")


class ScoreLookup:
    """Graph name -> quality score in [0, 1], with a default for unknown graphs."""

    def __init__(self, scores: dict[Node, float] | None = None, default: float = 1.0):
        if not 0.0 <= default <= 1.0:
            raise ValueError("default score must lie in [0, 1]")
        self.default = default
        self._scores: dict[Node, float] = {}
        for g, s in (scores or {}).items():
            self._scores[g] = _clamp_score(g, float(s))

    @classmethod
    def from_metadata(
        cls, metadata: Iterable[Quad], score_predicate: Node | None = None, default: float = 1.0
    ) -> ScoreLookup:
        """Collect ``(graph, score_predicate, "x")`` statements.

        Unparseable values are ignored; if a graph has several scores the
        highest one is used.
        """
        from .model import uri

        pred = score_predicate or uri(ODCS_SCORE)
        scores: dict[Node, float] = {}
        for q in metadata:
            if q.predicate != pred:
                continue
            value = parse_number(q.object.value) if q.object.kind is Kind.LITERAL else None
            if value is None:
                log.warning("ignoring non-numeric score %s for %s", q.object, q.subject)
                continue
            scores[q.subject] = max(value, scores.get(q.subject, -math.inf))
        return cls(scores, default)

    def __call__(self, graph: Node) -> float:
        return self._scores.get(graph, self.default)

    score = __call__

    def __contains__(self, graph: Node) -> bool:
        return graph in self._scores

    def __repr__(self) -> str:
        return f"ScoreLookup({len(self._scores)} graphs, default={self.default})"


def _clamp_score(graph: Node, s: float) -> float:
    if 0.0 <= s <= 1.0:
        return s
    clamped = min(max(s, 0.0), 1.0)
    log.warning("score %s for %s outside [0, 1], clamped to %s", s, graph, clamped)
    return clamped


def source_score(graph: Node, lookup: ScoreLookup) -> float:
    return lookup(graph)


def aggregate_score(graphs: Iterable[Node], lookup: ScoreLookup, mode: Mode) -> float:
    get, default = lookup._scores.get, lookup.default
    scores = [get(g, default) for g in graphs]
    if not scores:
        raise EmptySourcesError("cannot aggregate the score of an empty source set")
    if mode is Mode.DECIDING:
        return max(scores)
    return math.fsum(scores) / len(scores)


# -- value parsing -----------------------------------------------------------

_NUMBER = re.compile(r"[+-]?(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?")
_DATE = re.compile(
    r"(?P<y>-?\d{4,})-(?P<mo>\d{2})-(?P<d>\d{2})"
    r"(?:T(?P<h>\d{2}):(?P<mi>\d{2}):(?P<s>\d{2})(?P<frac>\.\d+)?)?"
    r"(?P<tz>Z|[+-]\d{2}:\d{2})?"
)
_EPOCH = datetime(1970, 1, 1, tzinfo=timezone.utc)


def parse_number(text: str) -> float | None:
    text = text.strip()
    if not _NUMBER.fullmatch(text):
        return None
    value = float(text)
    return value if math.isfinite(value) else None


def parse_datetime(text: str) -> float | None:
    """Seconds since the epoch for an xsd:dateTime / xsd:date lexical form.

    Values without a timezone are taken as UTC.
    """
    m = _DATE.fullmatch(text.strip())
    if m is None:
        return None
    tz = timezone.utc
    if m["tz"] and m["tz"] != "Z":
        sign = -1 if m["tz"][0] == "-" else 1
        hours, minutes = int(m["tz"][1:3]), int(m["tz"][4:6])
        tz = timezone(sign * timedelta(hours=hours, minutes=minutes))
    try:
        hour = int(m["h"] or 0)
        extra = 0.0
        if hour == 24:  # 24:00:00 is the end of the day
            hour, extra = 0, 86400.0
        dt = datetime(
            int(m["y"]), int(m["mo"]), int(m["d"]),
            hour, int(m["mi"] or 0), int(m["s"] or 0), tzinfo=tz,
        )
    except ValueError:
        return None
    return (dt - _EPOCH).total_seconds() + extra + float(m["frac"] or 0.0)


def _is_string_literal(node: Node) -> bool:
    return node.kind is Kind.LITERAL and node.datatype in ("", XSD_STRING, RDF_LANGSTRING)


# -- distance ----------------------------------------------------------------

class Prepared:
    """A node together with its numeric / temporal / textual readings."""

    __slots__ = ("node", "number", "seconds", "text")

    def __init__(self, node: Node):
        self.node = node
        self.number = self.seconds = self.text = None
        if node.kind is Kind.LITERAL:
            self.number = parse_number(node.value)
            if self.number is None:
                self.seconds = parse_datetime(node.value)
            if _is_string_literal(node):
                self.text = node.value


_counter = [0]


def distance_evaluations() -> int:
    """Number of distance evaluations since the last reset (instrumentation)."""
    return _counter[0]


def reset_distance_evaluations() -> None:
    _counter[0] = 0


def levenshtein(a: str, b: str) -> int:
    """Unit-cost edit distance between two strings, counted in code points."""
    return _levenshtein(a, b)


def _prepared_distance(a: Prepared, b: Prepared, date_max: float) -> float:
    _counter[0] += 1
    if a.node == b.node:
        return 0.0
    if a.number is not None and b.number is not None:
        v1, v2 = a.number, b.number
        if v1 == v2:
            return 0.0
        mean = v1 / 2.0 + v2 / 2.0  # halves avoid overflow of v1 + v2
        if mean == 0:
            return 1.0
        return min(abs((v1 - v2) / mean), 1.0)
    if a.seconds is not None and b.seconds is not None:
        return min(abs(a.seconds - b.seconds) / date_max, 1.0)
    if a.text is not None and b.text is not None:
        longest = max(len(a.text), len(b.text))
        if longest == 0:
            return 0.0
        return levenshtein(a.text, b.text) / longest
    return 1.0


def distance(a: Node, b: Node, params: QualityParams = QualityParams()) -> float:
    """Distance in [0, 1] between two RDF nodes.

    Numbers use the difference relative to their mean, dates the difference
    relative to ``params.date_distance_max``, plain strings the normalized
    Levenshtein distance, and everything else an inequality indicator.
    """
    return _prepared_distance(Prepared(a), Prepared(b), params.date_distance_max)


# -- assessment --------------------------------------------------------------

class ClusterContext:
    """Per-cluster data reused across several quality assessments."""

    __slots__ = ("cluster", "lookup", "objects", "graphs", "scores", "score_sum", "_graph_set", "_cache")

    def __init__(self, cluster: ConflictCluster, lookup: ScoreLookup):
        self.cluster = cluster
        self.lookup = lookup
        cache: dict[Node, Prepared] = {}
        objects, graphs = [], []
        for q in cluster.quads:
            p = cache.get(q.object)
            if p is None:
                p = cache[q.object] = Prepared(q.object)
            objects.append(p)
            graphs.append(q.graph)
        score_of, default = lookup._scores.get, lookup.default
        scores = [score_of(g, default) for g in graphs]
        self.objects: list[Prepared] = objects
        self.graphs: list[Node] = graphs
        self.scores: list[float] = scores
        self.score_sum = math.fsum(scores)
        self._graph_set: frozenset[Node] | None = None
        self._cache = cache

    @property
    def graph_set(self) -> frozenset[Node]:
        if self._graph_set is None:
            self._graph_set = frozenset(self.graphs)
        return self._graph_set

    def prepared(self, node: Node) -> Prepared:
        p = self._cache.get(node)
        if p is None:
            p = self._cache[node] = Prepared(node)
        return p


def assess_quality(
    value: Node,
    sources: Iterable[Node],
    cluster: ConflictCluster | ClusterContext,
    lookup: ScoreLookup | None = None,
    params: QualityParams = QualityParams(),
    mode: Mode = Mode.DECIDING,
) -> float:
    """F-quality of ``value`` stated by (or derived from) ``sources``."""
    if isinstance(cluster, ClusterContext):
        ctx = cluster
    else:
        if lookup is None:
            lookup = ScoreLookup(default=params.default_source_score)
        ctx = ClusterContext(cluster, lookup)
    sources = list(sources)
    if not sources:
        raise EmptySourcesError("F-quality needs a non-empty source set")
    if not ctx.graph_set.issuperset(sources):
        raise ValueError("sources must be graphs of the conflict cluster")
    return assess_unchecked(value, sources, ctx, params, mode)


def assess_unchecked(value: Node, sources: Sequence[Node], ctx: ClusterContext, params: QualityParams,
                     mode: Mode) -> float:
    """``assess_quality`` for callers that guarantee a non-empty source list drawn from the cluster."""
    q = aggregate_score(sources, ctx.lookup, mode)

    if params.consider_conflicts and ctx.score_sum > 0:
        v = ctx.prepared(value)
        date_max = params.date_distance_max
        weighted = math.fsum(s * _prepared_distance(v, o, date_max) for s, o in zip(ctx.scores, ctx.objects))
        q *= 1.0 - weighted / ctx.score_sum

    if params.consider_support:
        support = [s for s, o in zip(ctx.scores, ctx.objects) if o.node == value]
        if support:
            factor = min((math.fsum(support) - max(support)) / params.agree_coefficient, 1.0)
            q += (1.0 - q) * factor

    return min(max(q, 0.0), 1.0)

