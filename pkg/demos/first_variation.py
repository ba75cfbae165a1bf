"""Central-difference check that the vertical condition is the gradient of the energy density.

Run: python demos/first_variation.py [samples] [seed]
"""
import sys

from sesqui import nil
from sesqui.engine import random_variation_suite, variation_test

n = int(sys.argv[1]) if len(sys.argv) > 1 else 8
seed = int(sys.argv[2]) if len(sys.argv) > 2 else 0

print(f"{'dE/dt':>14s} {'<2 vert, V>':>14s} {'rel err':>10s} {'err ratio h/(h/2)':>18s}")
for X, V, r in random_variation_suite(nil(), (1, 1), n=n, seed=seed):
    half = variation_test(nil(), X, V, (1, 1), step=5e-5)
    ratio = r.abs_err / half.abs_err if half.abs_err else float("nan")
    print(f"{r.lhs:14.8f} {r.rhs:14.8f} {r.rel_err:10.2e} {ratio:18.2f}")
