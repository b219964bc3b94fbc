"""Statistics of Minkowski path complexity between random Delzant polygons.

Usage: python3 scripts/path_complexity.py [--pairs 200] [--seed 0]
"""
import argparse
import random
from collections import Counter
from dataclasses import dataclass

from delzant.exactmath import multiplicity
from delzant.moduli import minkowski_path, path_complexity
from delzant.polytope import minkowski_combine, normal_fan
from delzant.sampling import random_polygon_pair


@dataclass
class Config:
    pairs: int = 200
    seed: int = 0


def run(cfg: Config):
    rng = random.Random(cfg.seed)
    local, ratio = Counter(), []
    for _ in range(cfg.pairs):
        P, Q = random_polygon_pair(rng)
        c = path_complexity(minkowski_path(P, Q))
        S = normal_fan(minkowski_combine(1, P, 1, Q))
        bound = sum(multiplicity(v) for v in S.cones_as_vectors())
        local[c.local] += 1
        ratio.append(c.global_ / bound)
    print(f"pairs: {cfg.pairs}")
    print("local complexity histogram:", dict(sorted(local.items())))
    print(f"global / multiplicity bound: mean {sum(ratio) / len(ratio):.3f}, max {max(ratio):.3f}")


if __name__ == "__main__":
    ap = argparse.ArgumentParser()
    ap.add_argument("--pairs", type=int, default=Config.pairs)
    ap.add_argument("--seed", type=int, default=Config.seed)
    run(Config(**vars(ap.parse_args())))
