"""Command-line entry point: ``quadfuse --data a.nq --output fused.nq``."""
from __future__ import annotations

import argparse
import logging
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

from . import __version__
from .canonical import build_canonical_mapping, export_canonical, extract_links
from .engine import FusionConfig, fuse_with_mapping, validate_policy
from .functions import INSERTED_AT, MissingParamError, UnknownFunctionError
from .metrics import compute_stats, format_report
from .model import Node, Quad, uri
from .nquads import NQuadsSyntaxError, OutputConfig, ParseIssue, parse_file, serialize_resolved
from .policy import PolicySyntaxError, parse_policy
from .quality import ODCS_SCORE
from .strategy import ResolutionPolicy

log = logging.getLogger("quadfuse")

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_IO = 3
EXIT_POLICY = 4
EXIT_PARSE = 5


@dataclass
class RunConfig:
    output_path: Path
    data_paths: list[Path] = field(default_factory=list)
    same_as_paths: list[Path] = field(default_factory=list)
    metadata_paths: list[Path] = field(default_factory=list)
    policy_path: Path | None = None
    canonical_export_path: Path | None = None
    report_path: Path | None = None
    default_graph_base: str | None = None
    result_graph_prefix: str = "urn:quadfuse:result:"
    score_predicate: str = ODCS_SCORE
    source_predicate: str = "urn:quadfuse:sourceGraph"
    quality_predicate: str = "urn:quadfuse:quality"
    timestamp_predicate: str = INSERTED_AT
    strict_parse: bool = False
    workers: int = 1
    default_source_score: float = 1.0
    preferred_namespaces: list[str] = field(default_factory=list)
    many_valued: list[str] = field(default_factory=list)

    def __post_init__(self):
        if self.workers < 1:
            raise ValueError("workers must be >= 1")


def default_graph_for(path: Path, base: str | None) -> Node:
    if base:
        return uri(base + path.name)
    return uri(path.resolve().as_uri())


def _load(paths: Sequence[Path], config: RunConfig, issues: dict[Path, list[ParseIssue]]) -> dict[Path, list[Quad]]:
    loaded = {}
    for path in paths:
        quads, file_issues = parse_file(path, default_graph_for(path, config.default_graph_base), config.strict_parse)
        loaded[path] = quads
        if file_issues:
            issues[path] = file_issues
    return loaded


def _summarize_issues(issues: dict[Path, list[ParseIssue]]) -> None:
    for path, file_issues in issues.items():
        print(f"quadfuse: {path}: skipped {len(file_issues)} malformed line(s)", file=sys.stderr)
        for issue in file_issues[:5]:
            print(f"  {issue}", file=sys.stderr)
        if len(file_issues) > 5:
            print(f"  ... {len(file_issues) - 5} more", file=sys.stderr)


def run(config: RunConfig) -> int:
    try:
        policy = ResolutionPolicy()
        if config.policy_path is not None:
            policy = parse_policy(config.policy_path.read_text(encoding="utf-8"))
        validate_policy(policy)
    except OSError as exc:
        print(f"quadfuse: cannot read policy: {exc}", file=sys.stderr)
        return EXIT_IO
    except (PolicySyntaxError, UnknownFunctionError, MissingParamError) as exc:
        print(f"quadfuse: policy error: {exc}", file=sys.stderr)
        return EXIT_POLICY

    issues: dict[Path, list[ParseIssue]] = {}
    try:
        data = _load(config.data_paths, config, issues)
        same_as = _load(config.same_as_paths, config, issues)
        metadata = _load(config.metadata_paths, config, issues)
    except NQuadsSyntaxError as exc:
        print(f"quadfuse: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except OSError as exc:
        print(f"quadfuse: cannot read input: {exc}", file=sys.stderr)
        return EXIT_IO
    _summarize_issues(issues)

    links, _ = extract_links(q for quads in same_as.values() for q in quads)
    mapping = build_canonical_mapping(links, config.preferred_namespaces)
    all_data = [q for quads in data.values() for q in quads]
    all_metadata = [q for quads in metadata.values() for q in quads]
    fusion = FusionConfig(
        score_predicate=config.score_predicate,
        timestamp_predicate=config.timestamp_predicate,
        default_score=config.default_source_score,
        preferred_namespaces=tuple(config.preferred_namespaces),
        workers=config.workers,
    )
    resolved = fuse_with_mapping(all_data, all_metadata, mapping, policy, fusion)
    n_bad = sum(len(v) for v in issues.values())
    log.info("read %d data quads (%d malformed lines skipped), %d links; wrote %d resolved quads",
             len(all_data), n_bad, len(links), len(resolved))

    output = OutputConfig(
        result_graph_prefix=config.result_graph_prefix,
        source_predicate=config.source_predicate,
        quality_predicate=config.quality_predicate,
    )
    try:
        with open(config.output_path, "wb") as out:
            serialize_resolved(resolved, out, output)
        if config.canonical_export_path is not None:
            with open(config.canonical_export_path, "w", encoding="utf-8", newline="\n") as out:
                out.writelines(export_canonical(mapping))
        if config.report_path is not None:
            many = policy.many_valued() | {uri(p) for p in config.many_valued}
            universe = compute_stats(all_data, mapping, many)
            columns = {path.name: compute_stats(quads, mapping, many) for path, quads in data.items()}
            columns["all data"] = universe
            columns["fused"] = compute_stats([r.quad for r in resolved], mapping, many)
            table, kv = format_report(columns, universe)
            Path(config.report_path).write_text(kv, encoding="utf-8")
            sys.stdout.write(table)
    except OSError as exc:
        print(f"quadfuse: cannot write output: {exc}", file=sys.stderr)
        return EXIT_IO
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="quadfuse",
        description="Fuse RDF quads from several sources, resolving identifier, schema and value conflicts.",
    )
    p.add_argument("--data", nargs="+", type=Path, default=[], metavar="PATH", help="N-Quads/N-Triples data files")
    p.add_argument("--sameas", nargs="+", type=Path, default=[], metavar="PATH", help="owl:sameAs link files")
    p.add_argument("--metadata", nargs="+", type=Path, default=[], metavar="PATH", help="graph metadata files")
    p.add_argument("--policy", type=Path, help="resolution policy file")
    p.add_argument("--output", type=Path, required=True, help="where to write the fused N-Quads")
    p.add_argument("--export-canonical", type=Path, help="write the canonical URI mapping as N-Triples")
    p.add_argument("--report", type=Path, help="write quality metrics as key=value lines (table goes to stdout)")
    p.add_argument("--default-graph-base", metavar="IRI", help="graph for N-Triples files is IRI + file name")
    p.add_argument("--result-graph-prefix", metavar="IRI", default="urn:quadfuse:result:")
    p.add_argument("--score-predicate", metavar="IRI", default=ODCS_SCORE)
    p.add_argument("--source-predicate", metavar="IRI", default="urn:quadfuse:sourceGraph")
    p.add_argument("--quality-predicate", metavar="IRI", default="urn:quadfuse:quality")
    p.add_argument("--timestamp-predicate", metavar="IRI", default=INSERTED_AT)
    p.add_argument("--default-score", type=float, default=1.0, help="score of graphs without metadata")
    p.add_argument("--prefer-namespace", action="append", default=[], metavar="PREFIX",
                   help="prefer canonical URIs from this namespace (repeatable, ordered)")
    p.add_argument("--many-valued", action="append", default=[], metavar="IRI",
                   help="extra many-valued property for the consistency metric (repeatable)")
    p.add_argument("--strict", action="store_true", help="abort on the first malformed input line")
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("-v", "--verbose", action="store_true")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    return p


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    if args.workers < 1:
        parser.print_usage(sys.stderr)
        print("quadfuse: error: --workers must be >= 1", file=sys.stderr)
        return EXIT_USAGE
    if not 0.0 <= args.default_score <= 1.0:
        parser.print_usage(sys.stderr)
        print("quadfuse: error: --default-score must lie in [0, 1]", file=sys.stderr)
        return EXIT_USAGE
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="quadfuse: %(levelname)s: %(message)s")
    config = RunConfig(
        output_path=args.output,
        data_paths=args.data,
        same_as_paths=args.sameas,
        metadata_paths=args.metadata,
        policy_path=args.policy,
        canonical_export_path=args.export_canonical,
        report_path=args.report,
        default_graph_base=args.default_graph_base,
        result_graph_prefix=args.result_graph_prefix,
        score_predicate=args.score_predicate,
        source_predicate=args.source_predicate,
        quality_predicate=args.quality_predicate,
        timestamp_predicate=args.timestamp_predicate,
        strict_parse=args.strict,
        workers=args.workers,
        default_source_score=args.default_score,
        preferred_namespaces=args.prefer_namespace,
        many_valued=args.many_valued,
    )
    return run(config)


if __name__ == "__main__":
    sys.exit(main())
