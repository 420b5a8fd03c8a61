"""Completeness, conciseness and consistency of a dataset.

"Objects" are counted as subject entities and "attributes" as predicates.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping

from .canonical import CanonicalMap
from .engine import resolve_uris, sorted_clusters
from .model import Node, Quad


@dataclass(frozen=True)
class DatasetStats:
    total_quads: int
    all_subjects: int
    unique_subjects: int
    all_predicates: int
    unique_predicates: int
    cluster_count: int
    single_valued_clusters: int
    conflict_free_clusters: int
    avg_cluster_size: float

    def __post_init__(self):
        if not (self.unique_subjects <= self.all_subjects and self.unique_predicates <= self.all_predicates
                and self.conflict_free_clusters <= self.single_valued_clusters <= self.cluster_count):
            raise ValueError(f"inconsistent dataset statistics: {self}")


def compute_stats(
    quads: Iterable[Quad], mapping: CanonicalMap, many_valued: Iterable[Node] = ()
) -> DatasetStats:
    quads = list(quads)
    subjects = {q.subject for q in quads}
    predicates = {q.predicate for q in quads}
    canon = mapping.canonical_of
    many = {canon(p) for p in many_valued}

    n_clusters = n_single = n_free = n_clustered = 0
    for cluster in sorted_clusters(resolve_uris(quads, mapping)):
        n_clusters += 1
        n_clustered += len(cluster)
        if cluster.predicate in many:
            continue
        n_single += 1
        first = cluster.quads[0].object
        if all(q.object == first for q in cluster.quads):
            n_free += 1

    return DatasetStats(
        total_quads=len(quads),
        all_subjects=len(subjects),
        unique_subjects=len({canon(s) for s in subjects}),
        all_predicates=len(predicates),
        unique_predicates=len({canon(p) for p in predicates}),
        cluster_count=n_clusters,
        single_valued_clusters=n_single,
        conflict_free_clusters=n_free,
        avg_cluster_size=n_clustered / n_clusters if n_clusters else 0.0,
    )


def _ratio(num: int, den: int) -> float:
    return num / den if den else 1.0


def completeness(dataset: DatasetStats, universe: DatasetStats) -> tuple[float, float]:
    """(extensional, intensional) completeness relative to ``universe``."""
    return (
        _ratio(dataset.unique_subjects, universe.unique_subjects),
        _ratio(dataset.unique_predicates, universe.unique_predicates),
    )


def conciseness(stats: DatasetStats) -> tuple[float, float]:
    return _ratio(stats.unique_subjects, stats.all_subjects), _ratio(stats.unique_predicates, stats.all_predicates)


def consistency(stats: DatasetStats) -> float:
    """Share of single-valued clusters that hold exactly one distinct object."""
    return _ratio(stats.conflict_free_clusters, stats.single_valued_clusters)


METRIC_NAMES = (
    "ext_completeness",
    "int_completeness",
    "ext_conciseness",
    "int_conciseness",
    "consistency",
)


def metric_values(stats: DatasetStats, universe: DatasetStats) -> dict[str, float]:
    ext_c, int_c = completeness(stats, universe)
    ext_s, int_s = conciseness(stats)
    return {
        "ext_completeness": ext_c,
        "int_completeness": int_c,
        "ext_conciseness": ext_s,
        "int_conciseness": int_s,
        "consistency": consistency(stats),
    }


def format_report(columns: Mapping[str, DatasetStats], universe: DatasetStats) -> tuple[str, str]:
    """Render ``(table, key_value_text)`` for the given named datasets.

    The key=value text has one ``[name]`` section per dataset and one
    ``metric=value`` line per metric.
    """
    rows = {name: metric_values(stats, universe) for name, stats in columns.items()}
    counts = (
        ("total_quads", "Total quads"),
        ("all_subjects", "All subjects"),
        ("unique_subjects", "Unique subjects"),
        ("all_predicates", "All predicates"),
        ("unique_predicates", "Unique predicates"),
        ("cluster_count", "Conflict clusters"),
    )
    labels = {
        "ext_completeness": "Ext. completeness",
        "int_completeness": "Int. completeness",
        "ext_conciseness": "Ext. conciseness",
        "int_conciseness": "Int. conciseness",
        "consistency": "Consistency",
    }
    names = list(columns)
    width = max([len(n) for n in names] + [10])
    label_w = 22
    lines = ["".ljust(label_w) + " ".join(n.rjust(width) for n in names)]
    for attr, label in counts:
        lines.append(label.ljust(label_w) + " ".join(f"{getattr(columns[n], attr):>{width},}" for n in names))
    lines.append("Average cluster size".ljust(label_w)
                 + " ".join(f"{columns[n].avg_cluster_size:>{width}.2f}" for n in names))
    for key in METRIC_NAMES:
        lines.append(labels[key].ljust(label_w) + " ".join(f"{rows[n][key] * 100:>{width - 1}.1f}%" for n in names))
    table = "\n".join(lines) + "\n"

    kv = []
    for n in names:
        kv.append(f"[{n}]")
        kv.extend(f"{key}={rows[n][key]:.4f}" for key in METRIC_NAMES)
        kv.append("")
    return table, "\n".join(kv)
