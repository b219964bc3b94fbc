"""Compare the Hausdorff and symmetric-difference distances on thin rectangles
and on random polygon pairs.

Usage: python3 scripts/metric_comparison.py [--mmax 8] [--pairs 50] [--seed 0]
"""
import argparse
import random
from dataclasses import dataclass
from fractions import Fraction

from delzant.metrics import hausdorff_distance, support_uniform_norm_estimate, symmetric_difference_distance
from delzant.polytope import build_from_vertices
from delzant.sampling import random_polygon_pair


@dataclass
class Config:
    mmax: int = 8
    pairs: int = 50
    seed: int = 0
    samples: int = 10 ** 5


def rectangle(m):
    h = Fraction(1, m * m)
    return build_from_vertices([(0, 0), (m, 0), (0, h), (m, h)])


def run(cfg: Config):
    print(f"{'m':>3} {'symdiff':>12} {'hausdorff^2':>14}")
    for m in range(1, cfg.mmax + 1):
        A, B = rectangle(m), rectangle(2 * m)
        dv = symmetric_difference_distance(A, B).exact
        dh = hausdorff_distance(A, B).squared
        print(f"{m:>3} {str(dv):>12} {str(dh):>14}")
    rng = random.Random(cfg.seed)
    worst = 0.0
    for _ in range(cfg.pairs):
        P, Q = random_polygon_pair(rng)
        exact = hausdorff_distance(P, Q).value
        worst = max(worst, exact - support_uniform_norm_estimate(P, Q, cfg.samples))
    print(f"support-norm estimate, worst gap over {cfg.pairs} pairs: {worst:.2e}")


if __name__ == "__main__":
    ap = argparse.ArgumentParser()
    for f, v in vars(Config()).items():
        ap.add_argument(f"--{f}", type=type(v), default=v)
    run(Config(**vars(ap.parse_args())))
