"""Quad-level RDF data fusion with per-value quality scores."""
from .canonical import CanonicalMap, build_canonical_mapping, extract_links
from .engine import FusionConfig, fuse, fuse_with_mapping
from .functions import REGISTRY, ResolutionContext, lookup_function
from .model import ConflictCluster, Kind, Node, Quad, ResolvedQuad, bnode, literal, uri
from .nquads import parse_file, parse_quads, serialize_quads, serialize_resolved
from .quality import QualityParams, assess_quality
from .strategy import Cardinality, ErrorStrategy, ResolutionPolicy, ResolutionStrategy

__version__ = "0.1.0"

__all__ = [
    "CanonicalMap", "build_canonical_mapping", "extract_links",
    "FusionConfig", "fuse", "fuse_with_mapping",
    "REGISTRY", "ResolutionContext", "lookup_function",
    "ConflictCluster", "Kind", "Node", "Quad", "ResolvedQuad", "bnode", "literal", "uri",
    "parse_file", "parse_quads", "serialize_quads", "serialize_resolved",
    "QualityParams", "assess_quality",
    "Cardinality", "ErrorStrategy", "ResolutionPolicy", "ResolutionStrategy",
]
