"""Seeded synthetic multi-source datasets for tests and benchmarks.

Every entity is described by several sources, each using its own URI for
it; ``owl:sameAs`` links connect the aliases. Values per (entity, property)
disagree slightly between sources, so clusters carry realistic conflicts.
"""
from __future__ import annotations

import random
from dataclasses import dataclass

from .canonical import OWL_SAME_AS
from .model import XSD_DOUBLE, Node, Quad, literal, uri
from .quality import ODCS_SCORE

_WORDS = ("berlin", "prague", "vienna", "city", "river", "castle", "bridge", "square", "north", "old")


@dataclass(frozen=True)
class SyntheticConfig:
    n_quads: int = 100_000
    n_sources: int = 5
    n_properties: int = 8
    cluster_size: int = 4
    seed: int = 0
    noise: float = 0.01
    typed_fraction: float = 0.3

    def __post_init__(self):
        if self.n_sources < 1 or self.n_properties < 1 or self.cluster_size < 1 or self.n_quads < 0:
            raise ValueError("synthetic dataset sizes must be positive")


@dataclass
class SyntheticDataset:
    data: list[Quad]
    metadata: list[Quad]
    links: list[tuple[Node, Node]]
    sources: list[Node]
    properties: list[Node]

    def link_quads(self) -> list[Quad]:
        same_as = uri(OWL_SAME_AS)
        g = uri("urn:quadfuse:links")
        return [Quad(a, same_as, b, g) for a, b in self.links]


def _string_value(rng: random.Random, base: str, noise: float) -> str:
    if rng.random() < noise * 20:
        i = rng.randrange(len(base))
        return base[:i] + rng.choice("aeiou") + base[i + 1:]
    return base


def generate(config: SyntheticConfig = SyntheticConfig()) -> SyntheticDataset:
    rng = random.Random(config.seed)
    sources = [uri(f"http://source{i}.example.org/") for i in range(config.n_sources)]
    metadata = [
        Quad(g, uri(ODCS_SCORE), literal(f"{rng.uniform(0.5, 1.0):.2f}"), uri("urn:quadfuse:metadata"))
        for g in sources
    ]
    properties = [uri(f"http://schema.example.org/p{j}") for j in range(config.n_properties)]
    # each source also has a private alias for every property
    prop_alias = [[uri(f"http://source{i}.example.org/vocab/p{j}") for j in range(config.n_properties)]
                  for i in range(config.n_sources)]
    links: list[tuple[Node, Node]] = []
    for i in range(config.n_sources):
        for j in range(config.n_properties):
            links.append((prop_alias[i][j], properties[j]))

    per_cluster = min(config.cluster_size, config.n_sources)
    per_entity = per_cluster * config.n_properties
    n_entities = -(-config.n_quads // per_entity) if config.n_quads else 0
    data: list[Quad] = []
    for e in range(n_entities):
        aliases = [uri(f"http://source{i}.example.org/entity/{e}") for i in range(config.n_sources)]
        for i in range(1, config.n_sources):
            links.append((aliases[i], aliases[0]))
        for j in range(config.n_properties):
            kind = j % 3
            base_num = rng.uniform(-1000, 1000)
            base_str = " ".join(rng.choice(_WORDS) for _ in range(2))
            for i in rng.sample(range(config.n_sources), per_cluster):
                if kind == 0:
                    value = base_num * (1 + rng.gauss(0, config.noise))
                    if rng.random() < config.typed_fraction:
                        obj = literal(repr(value), XSD_DOUBLE)
                    else:
                        obj = literal(f"{value:.4f}")
                elif kind == 1:
                    obj = literal(_string_value(rng, base_str, config.noise))
                else:
                    obj = uri(f"http://schema.example.org/Class{rng.randrange(3)}")
                pred = prop_alias[i][j] if rng.random() < 0.5 else properties[j]
                data.append(Quad(aliases[i], pred, obj, sources[i]))
                if len(data) >= config.n_quads:
                    break
            if len(data) >= config.n_quads:
                break
        if len(data) >= config.n_quads:
            break
    return SyntheticDataset(data, metadata, links, sources, properties)
