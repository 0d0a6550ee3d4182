"""Bi-orthogonal (Schmidt) decomposition of bipartite pure states.

The decomposition diagonalizes both reduced density matrices at once and is
the preferred basis along which worlds split: rank one means the state
factorizes, rank above one means it has defactorized into branches.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .hilbert import (
    EPS_EIG,
    EPS_RANK,
    BipartiteSplit,
    StateVector,
    eig_hermitian,
    partial_trace,
)


class DecompositionError(RuntimeError):
    """Internal consistency failure while pairing the two subsystem bases."""


@dataclass(frozen=True)
class SchmidtDecomposition:
    """Descending coefficients with paired orthonormal subsystem vectors.

    ``left_vectors`` and ``right_vectors`` hold one column per retained
    coefficient; coefficients at or below EPS_RANK are treated as exact
    zeros and dropped.
    """

    lambdas: np.ndarray       # descending, each in (EPS_RANK, 1]
    left_vectors: np.ndarray  # (d_left, rank), orthonormal columns
    right_vectors: np.ndarray # (d_right, rank), orthonormal columns
    rank: int
    split: BipartiteSplit

    def __post_init__(self):
        lam = np.asarray(self.lambdas, dtype=np.float64)
        left = np.asarray(self.left_vectors, dtype=np.complex128)
        right = np.asarray(self.right_vectors, dtype=np.complex128)
        if lam.ndim != 1 or lam.size != self.rank:
            raise DecompositionError("coefficient count must equal the rank")
        if self.rank < 1 or self.rank > min(self.split.d_left, self.split.d_right):
            raise DecompositionError(
                f"rank {self.rank} outside [1, min{self.split.d_left, self.split.d_right}]"
            )
        if np.any(np.diff(lam) > 0):
            raise DecompositionError("coefficients must be sorted descending")
        if np.any(lam <= EPS_RANK):
            raise DecompositionError("retained coefficient at or below the zero threshold")
        if abs(lam.sum() - 1.0) > EPS_EIG:
            raise DecompositionError(f"coefficients sum to {lam.sum()!r}, not 1")
        for name, mat, d in (("left", left, self.split.d_left),
                             ("right", right, self.split.d_right)):
            if mat.shape != (d, self.rank):
                raise DecompositionError(f"{name} vectors have shape {mat.shape}")
            gram_dev = np.max(np.abs(mat.conj().T @ mat - np.eye(self.rank)))
            if gram_dev > EPS_EIG:
                raise DecompositionError(
                    f"{name} vectors not orthonormal (deviation {gram_dev:.3e})"
                )
        lam = lam.copy(); lam.flags.writeable = False
        left = left.copy(); left.flags.writeable = False
        right = right.copy(); right.flags.writeable = False
        object.__setattr__(self, "lambdas", lam)
        object.__setattr__(self, "left_vectors", left)
        object.__setattr__(self, "right_vectors", right)


def schmidt_decompose(psi: StateVector, split: BipartiteSplit) -> SchmidtDecomposition:
    """Decompose a pure state across a bipartite split.

    Eigendecomposes the left reduced matrix, then obtains each right vector
    by contracting the state with the corresponding left vector and
    normalizing; this guarantees phase-consistent pairs, which independent
    two-sided eigensolves do not. The reconstruction is verified against the
    input before returning.
    """
    split.require_match(psi)
    values, vectors = eig_hermitian(partial_trace(psi, split, "left"))
    retained = values > EPS_RANK
    lambdas = values[retained]
    left = vectors[:, retained]

    m = psi.amplitudes.reshape(split.d_left, split.d_right)
    raw_right = m.T @ left.conj()            # column n: <left_n| psi, a right-side vector
    norms = np.linalg.norm(raw_right, axis=0)
    if np.any(norms**2 <= EPS_RANK):
        raise DecompositionError(
            "retained coefficient vanished during pairing; state is numerically pathological"
        )
    right = raw_right / norms

    dec = SchmidtDecomposition(lambdas, left, right, int(lambdas.size), split)
    residual = np.linalg.norm(_reconstruction_amplitudes(dec) - psi.amplitudes)
    if residual > EPS_EIG:
        raise DecompositionError(
            f"reconstruction misses the input by {residual:.3e} (> {EPS_EIG})"
        )
    return dec


def schmidt_rank(dec: SchmidtDecomposition) -> int:
    """Number of retained coefficients; 1 exactly when the state factorizes."""
    return dec.rank


def spectra_gap(psi: StateVector, split: BipartiteSplit) -> float:
    """Self-diagnostic: distance between the two reduced spectra.

    Both reduced matrices of a pure state must share their nonzero spectrum;
    this returns the max elementwise difference between the two descending
    nonzero spectra, with the shorter list padded by zeros.
    """
    split.require_match(psi)
    spectra = []
    for side in ("left", "right"):
        w = np.linalg.eigvalsh(partial_trace(psi, split, side).entries)[::-1]
        spectra.append(w[w > EPS_RANK])
    n = max(s.size for s in spectra)
    padded = [np.pad(s, (0, n - s.size)) for s in spectra]
    return float(np.max(np.abs(padded[0] - padded[1]))) if n else 0.0


def _reconstruction_amplitudes(dec: SchmidtDecomposition) -> np.ndarray:
    weighted = dec.left_vectors * np.sqrt(dec.lambdas)
    return (weighted @ dec.right_vectors.T).reshape(-1)


def reconstruct(dec: SchmidtDecomposition) -> StateVector:
    """Rebuild the state as sum_n sqrt(lambda_n) left_n (x) right_n.

    Renormalized, which restores the weight lost when near-zero
    coefficients were truncated.
    """
    amps = _reconstruction_amplitudes(dec)
    amps /= np.linalg.norm(amps)
    return StateVector(amps, (dec.split.d_left, dec.split.d_right))


def entanglement_entropy(dec: SchmidtDecomposition) -> float:
    """Von Neumann entropy -sum lambda ln lambda of the coefficients, in nats."""
    value = float(-np.dot(dec.lambdas, np.log(dec.lambdas)))
    return max(value, 0.0) + 0.0  # + 0.0 normalizes -0.0
