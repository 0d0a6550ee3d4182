"""
Random transitions fade as 1/N
==============================

The mean squared overlap of two uniformly random states is one over the
Hilbert-space dimension: a transition to one specific high-dimensional
target is hopeless by chance alone.
"""

from manyworlds import overlap_statistics

TRIALS = 20_000

print(f"{'dim':>5} {'mean |<i|f>|^2':>16} {'1/dim':>12} {'std error':>12}")
for dim in (2, 4, 8, 16, 64, 256):
    report = overlap_statistics(dim, TRIALS, seed=dim)
    print(f"{dim:>5} {report.mean_overlap_sq:>16.6f} {1 / dim:>12.6f} "
          f"{report.std_error:>12.2e}")

print("\nmean * dim stays pinned near 1 across three orders of magnitude.")
