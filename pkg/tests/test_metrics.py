import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from quadfuse.canonical import build_canonical_mapping
from quadfuse.engine import fuse_with_mapping
from quadfuse.metrics import (
    METRIC_NAMES, DatasetStats, completeness, compute_stats, conciseness, consistency, format_report,
    metric_values,
)
from quadfuse.model import Quad, literal, uri
from quadfuse.strategy import Cardinality, ResolutionPolicy, ResolutionStrategy
from quadfuse.synthetic import SyntheticConfig, generate

from helpers import PREFER, sample_inputs


def test_sample_before_and_after():
    data, metadata, links, policy = sample_inputs()
    mapping = build_canonical_mapping(links, PREFER)
    before = compute_stats(data, mapping)
    assert (before.total_quads, before.all_subjects, before.unique_subjects) == (5, 3, 1)
    assert (before.all_predicates, before.unique_predicates, before.cluster_count) == (4, 2, 2)
    assert before.avg_cluster_size == 2.5
    assert conciseness(before) == pytest.approx((1 / 3, 1 / 2))
    assert consistency(before) == 0.0
    fused = [r.quad for r in fuse_with_mapping(data, metadata, mapping, policy)]
    after = compute_stats(fused, mapping)
    assert metric_values(after, before) == {name: 1.0 for name in METRIC_NAMES}


def test_completeness_against_universe():
    g = uri("http://g")
    universe = [Quad(uri(f"http://s{i}"), uri(f"http://p{i % 2}"), literal("x"), g) for i in range(4)]
    mapping = build_canonical_mapping([])
    part = compute_stats(universe[:1], mapping)
    assert completeness(part, compute_stats(universe, mapping)) == (0.25, 0.5)


def test_many_valued_clusters_do_not_count_against_consistency():
    g1, g2 = uri("http://g1"), uri("http://g2")
    s, p = uri("http://s"), uri("http://p")
    quads = [Quad(s, p, literal("a"), g1), Quad(s, p, literal("b"), g2)]
    mapping = build_canonical_mapping([])
    assert consistency(compute_stats(quads, mapping)) == 0.0
    stats = compute_stats(quads, mapping, [p])
    assert stats.single_valued_clusters == 0 and consistency(stats) == 1.0


def test_empty_dataset_metrics_are_one():
    empty = compute_stats([], build_canonical_mapping([]))
    assert metric_values(empty, empty) == {name: 1.0 for name in METRIC_NAMES}


def test_inconsistent_stats_rejected():
    with pytest.raises(ValueError):
        DatasetStats(1, 1, 2, 1, 1, 1, 1, 1, 1.0)
    with pytest.raises(ValueError):
        DatasetStats(1, 1, 1, 1, 1, 1, 1, 2, 1.0)


def test_report_format():
    data, _, links, _ = sample_inputs()
    mapping = build_canonical_mapping(links, PREFER)
    stats = compute_stats(data, mapping)
    table, kv = format_report({"input": stats}, stats)
    assert "Ext. conciseness" in table and "33.3%" in table
    lines = kv.splitlines()
    assert lines[0] == "[input]"
    assert "ext_conciseness=0.3333" in lines
    assert "consistency=0.0000" in lines


@settings(max_examples=15, deadline=None)
@given(st.integers(0, 10_000), st.integers(50, 600))
def test_fused_output_is_concise_and_consistent(seed, n):
    ds = generate(SyntheticConfig(n_quads=n, seed=seed))
    mapping = build_canonical_mapping(ds.links)
    universe = compute_stats(ds.data, mapping)
    best = [r.quad for r in fuse_with_mapping(ds.data, ds.metadata, mapping, ResolutionPolicy(ResolutionStrategy("BEST")))]
    values = metric_values(compute_stats(best, mapping), universe)
    assert values["ext_conciseness"] == values["int_conciseness"] == values["consistency"] == 1.0
    every = [r.quad for r in fuse_with_mapping(ds.data, ds.metadata, mapping, ResolutionPolicy(ResolutionStrategy("ALL")))]
    assert metric_values(compute_stats(every, mapping), universe)["ext_conciseness"] == 1.0


def test_many_valued_policy_keeps_all_values():
    ds = generate(SyntheticConfig(n_quads=400, seed=2))
    mapping = build_canonical_mapping(ds.links)
    policy = ResolutionPolicy(ResolutionStrategy("ALL", cardinality=Cardinality.MANYVALUED))
    fused = [r.quad for r in fuse_with_mapping(ds.data, ds.metadata, mapping, policy)]
    stats = compute_stats(fused, mapping, ds.properties)
    assert consistency(stats) == 1.0 and conciseness(stats)[0] == 1.0
