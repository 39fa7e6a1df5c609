"""Integer homology of BG from truncated nerves, next to the reduced homology of EG.

    python scripts/bar_homology_table.py --k 4 --max-order 4

Orders 5 and 6 at k = 4 take minutes: EG then has thousands of nondegenerate 4-simplices.
"""

from __future__ import annotations

import argparse
from dataclasses import dataclass

from catkit.cohomology import format_abelian
from catkit.nerve import bar_spaces, homology, normalized_chains, reduced_homology
from catkit.smallgroups import library


@dataclass
class Config:
    k: int = 4
    max_order: int = 4


def main(cfg: Config) -> None:
    degrees = range(1, cfg.k)
    head = " ".join(f"{'H_' + str(n):>14}" for n in degrees)
    print(f"{'G':>8} {head}   EG acyclic  EG/G = BG")
    for name, G in library():
        if G.order < 2 or G.order > cfg.max_order:
            continue
        bar = bar_spaces(G, cfg.k)
        cb, ce = normalized_chains(bar.BG), normalized_chains(bar.EG)
        row = " ".join(f"{format_abelian(h.torsion, h.free_rank):>14}" for h in (homology(cb, n) for n in degrees))
        acyclic = all(not h.free_rank and not h.torsion for h in (reduced_homology(ce, n) for n in range(cfg.k)))
        print(f"{name:>8} {row}   {str(acyclic):>10}  {bar.quotient_ok}")


if __name__ == "__main__":
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--k", type=int, default=Config.k)
    p.add_argument("--max-order", type=int, default=Config.max_order)
    a = p.parse_args()
    main(Config(a.k, a.max_order))
