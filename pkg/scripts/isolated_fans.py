"""Tabulate the isolated fans: counts, multiplicities, polytopality and blow-downs.

Usage: python3 scripts/isolated_fans.py [--kmax 10]
"""
import argparse
from collections import Counter
from dataclasses import dataclass

from delzant.constructions import isolated_fan
from delzant.fan import fan_properties, find_blow_downs, realize_polytopal
from delzant.polytope import Polytope


@dataclass
class Config:
    kmax: int = 10


def run(cfg: Config):
    print(f"{'k':>3} {'rays':>5} {'cones':>6} {'mults':>14} {'polytopal':>10} {'blowdowns':>10}")
    for k in range(1, cfg.kmax + 1):
        N = isolated_fan(k)
        rep = fan_properties(N)
        mults = dict(sorted(Counter(rep.multiplicities).items()))
        poly = isinstance(realize_polytopal(N), Polytope)
        bd = len(find_blow_downs(N))
        print(f"{k:>3} {len(N.rays):>5} {len(N.maximal_cones):>6} {str(mults):>14} {str(poly):>10} {bd:>10}")
        bad = [N.cone_vectors(i) for i, m in enumerate(rep.multiplicities) if m != 1]
        for g in bad:
            print(f"      non-unimodular cone: {g}")


if __name__ == "__main__":
    ap = argparse.ArgumentParser()
    ap.add_argument("--kmax", type=int, default=Config.kmax)
    run(Config(**vars(ap.parse_args())))
