"""Tabulate extension classes for every pair of library groups up to a total order.

    python scripts/classify_small_extensions.py --max-order 8
"""

from __future__ import annotations

import argparse
import time
from collections import Counter
from dataclasses import dataclass

from catkit.config import Limits
from catkit.extensions import classify_extensions
from catkit.smallgroups import library


@dataclass
class Config:
    max_order: int = 8
    max_candidates: int = 10_000_000
    trivial_action: bool = False


def main(cfg: Config) -> None:
    limits = Limits(max_candidates=cfg.max_candidates)
    groups = library()
    print(f"{'G':>10} {'N':>10} {'classes':>8}  middle groups")
    for gname, G in groups:
        for nname, N in groups:
            if G.order * N.order > cfg.max_order or G.order == 1 or N.order == 1:
                continue
            t = time.perf_counter()
            classes = classify_extensions(G, N, limits, cfg.trivial_action)
            mids = Counter(c.middle_group for c in classes)
            summary = ", ".join(f"{k} x{v}" if v > 1 else k for k, v in sorted(mids.items()))
            print(f"{gname:>10} {nname:>10} {len(classes):>8}  {summary}  ({time.perf_counter() - t:.2f}s)")


if __name__ == "__main__":
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--max-order", type=int, default=Config.max_order)
    p.add_argument("--max-candidates", type=int, default=Config.max_candidates)
    p.add_argument("--trivial-action", action="store_true")
    a = p.parse_args()
    main(Config(a.max_order, a.max_candidates, a.trivial_action))
