"""
Preferred-basis decomposition of bipartite states
=================================================

A composite state either factorizes into its two subsystems (one world) or
it does not (several). The bi-orthogonal decomposition makes that split
explicit: both reduced density matrices share one spectrum, and the number
of nonzero coefficients counts the worlds.
"""

import numpy as np

from manyworlds import (
    BipartiteSplit,
    basis_state,
    entanglement_entropy,
    haar_random_state,
    make_state,
    reconstruct,
    schmidt_decompose,
    spectra_gap,
    tensor,
)

# A product state: rank 1, nothing has happened yet.
product = tensor(basis_state(0, 2), basis_state(1, 2))
dec = schmidt_decompose(product, BipartiteSplit(2, 2))
print("product state      rank:", dec.rank, " coefficients:", dec.lambdas)
print("                entropy:", entanglement_entropy(dec), "nats")

# A maximally entangled pair: two equally weighted worlds.
bell = make_state([1, 0, 0, 1], [2, 2])
dec = schmidt_decompose(bell, BipartiteSplit(2, 2))
print("\nentangled pair     rank:", dec.rank, " coefficients:", dec.lambdas)
print("                entropy:", entanglement_entropy(dec), "nats  (ln 2 = 0.6931...)")

# A random state on a 4x6 split: full rank, but both reduced matrices
# still agree on their spectra to machine precision.
psi = haar_random_state(24, seed=2024)
split = BipartiteSplit(4, 6)
dec = schmidt_decompose(psi, split)
print("\nrandom 4x6 state   rank:", dec.rank)
print("     coefficients:", np.array_str(dec.lambdas, precision=4))
print("      spectra gap:", f"{spectra_gap(psi, split):.2e}")

# The decomposition is lossless: summing sqrt(lambda_n) left_n x right_n
# returns the original amplitudes.
rebuilt = reconstruct(dec)
print("   reconstruction:", f"{np.linalg.norm(rebuilt.amplitudes - psi.amplitudes):.2e}",
      "away from the input")
