"""Fuse the bundled Berlin sample and print every resolved value with its quality."""
from __future__ import annotations

import argparse
import sys
from pathlib import Path

from quadfuse import FusionConfig, extract_links, fuse
from quadfuse.model import uri
from quadfuse.nquads import format_term, parse_file
from quadfuse.policy import parse_policy

DATA = Path(__file__).resolve().parent.parent / "data" / "berlin"


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--data-dir", type=Path, default=DATA)
    ap.add_argument("--prefer-namespace", action="append", default=None, metavar="PREFIX")
    args = ap.parse_args(argv)
    prefer = tuple(args.prefer_namespace or ("http://dbpedia.org/", "http://www.w3.org/"))

    default = uri("urn:default")
    data, _ = parse_file(args.data_dir / "data.nq", default)
    metadata, _ = parse_file(args.data_dir / "metadata.nq", default)
    link_quads, _ = parse_file(args.data_dir / "links.nt", default)
    links, _ = extract_links(link_quads)
    policy = parse_policy((args.data_dir / "policy.txt").read_text(encoding="utf-8"))

    for r in fuse(data, metadata, links, policy, FusionConfig(preferred_namespaces=prefer)):
        s, p, o, _ = r.quad
        sources = ", ".join(g.value for g in sorted(r.sources))
        print(f"{format_term(s)} {format_term(p)} {format_term(o)}")
        print(f"    quality {r.quality:.5f} from {sources}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
