"""Conflict-resolution throughput on seeded synthetic data.

Times canonical mapping plus fusion (parsing excluded) for each function and
dataset size, and prints quads per second.
"""
from __future__ import annotations

import argparse
import gc
import sys
import time

from quadfuse.canonical import build_canonical_mapping
from quadfuse.engine import FusionConfig, fuse_with_mapping
from quadfuse.strategy import ResolutionPolicy, ResolutionStrategy
from quadfuse.synthetic import SyntheticConfig, generate


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--sizes", type=int, nargs="+", default=[100_000, 1_000_000])
    ap.add_argument("--functions", nargs="+", default=["ANY", "BEST"])
    ap.add_argument("--seed", type=int, default=11)
    ap.add_argument("--workers", type=int, default=1)
    args = ap.parse_args(argv)

    config = FusionConfig(workers=args.workers)
    print(f"{'quads':>10} {'function':>8} {'seconds':>8} {'quads/s':>10}")
    for size in args.sizes:
        ds = generate(SyntheticConfig(n_quads=size, seed=args.seed))
        for function in args.functions:
            policy = ResolutionPolicy(ResolutionStrategy(function))
            gc.collect()
            start = time.perf_counter()
            mapping = build_canonical_mapping(ds.links)
            fuse_with_mapping(ds.data, ds.metadata, mapping, policy, config)
            elapsed = time.perf_counter() - start
            print(f"{size:>10} {function:>8} {elapsed:>8.2f} {size / elapsed:>10,.0f}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
