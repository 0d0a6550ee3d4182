"""
When intermediate measurements help, and when they cannot
=========================================================

Crossed polarizers block light completely, yet inserting k equally rotated
lenses between them raises the transmission toward one: the textbook
inverse-Zeno staircase. The trick depends on the lenses being arranged for
that specific initial/final pair. Random intermediate measurements in a
large space do nothing of the sort: the chain probability stays pinned at
the 1/N floor.
"""

from manyworlds import polarizer_chain, random_projection_chain

print("engineered polarizer chain (2-dimensional, aligned on purpose):")
print(f"{'k':>4} {'transmission':>14}")
for k in (0, 1, 2, 4, 8, 16, 50):
    print(f"{k:>4} {polarizer_chain(k).transmission_probability:>14.6f}")

DIM = 64
TRIALS = 20_000
print(f"\nrandom projection chains in dimension {DIM} "
      f"(baseline 1/{DIM} = {1 / DIM:.5f}):")
print(f"{'k':>4} {'mean chain probability':>24}")
for k in (0, 1, 2, 4):
    report = random_projection_chain(DIM, k, TRIALS, seed=k)
    print(f"{k:>4} {report.transmission_probability:>24.3e}")

print("\nExtra random measurements only multiply small factors: no boost.")
