"""Dense finite-dimensional quantum state and operator arithmetic.

State vectors carry an explicit list of subsystem dimensions over a
tensor-product basis. All values are immutable after construction and all
operations are pure functions, so they are safe to share across workers.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Literal

import numpy as np

from .rng import gaussian_amplitudes, rng_from_seed

# Numerical tolerances, fixed once for the whole package.
EPS_NORM = 1e-12    # allowed deviation from unit norm
EPS_HERM = 1e-12    # allowed Hermiticity / trace deviation
EPS_EIG = 1e-10     # eigensolve residual and orthonormality tolerance
EPS_RANK = 1e-10    # spectrum entries at or below this count as exact zeros
DIM_CAP = 2**14     # hard cap on total dimension (dense storage only)

# Eigenvalues closer than this are treated as one degenerate cluster and get
# a deterministic basis; see eig_hermitian.
DEGENERACY_GAP = 1e-9

Side = Literal["left", "right"]


class ShapeError(ValueError):
    """Array lengths or dimensions inconsistent with the requested operation."""


class DegenerateStateError(ValueError):
    """A zero (or numerically zero) vector cannot represent a state."""


class CapacityError(RuntimeError):
    """A hard resource cap (dimension or branch count) would be exceeded."""


def _as_complex_vector(values) -> np.ndarray:
    arr = np.asarray(values, dtype=np.complex128)
    if arr.ndim != 1:
        raise ShapeError(f"expected a 1-d amplitude sequence, got shape {arr.shape}")
    return arr


def _check_dims(dims) -> tuple[int, ...]:
    out = tuple(int(d) for d in dims)
    if not out:
        raise ShapeError("dims must name at least one subsystem")
    if any(d < 1 for d in out):
        raise ShapeError(f"subsystem dimensions must be >= 1, got {out}")
    total = math.prod(out)
    if total > DIM_CAP:
        raise CapacityError(f"total dimension {total} exceeds the cap {DIM_CAP}")
    return out


@dataclass(frozen=True)
class StateVector:
    """Normalized complex amplitudes over a composite tensor-product basis."""

    amplitudes: np.ndarray
    dims: tuple[int, ...]

    def __post_init__(self):
        amps = _as_complex_vector(self.amplitudes)
        dims = _check_dims(self.dims)
        if amps.size != math.prod(dims):
            raise ShapeError(
                f"{amps.size} amplitudes do not fill subsystems of dims {dims}"
            )
        norm = np.linalg.norm(amps)
        if abs(norm - 1.0) > EPS_NORM:
            raise DegenerateStateError(
                f"state norm {norm!r} deviates from 1 by more than {EPS_NORM}"
            )
        amps = amps.copy()
        amps.flags.writeable = False
        object.__setattr__(self, "amplitudes", amps)
        object.__setattr__(self, "dims", dims)

    @property
    def dim(self) -> int:
        """Total Hilbert-space dimension."""
        return self.amplitudes.size


@dataclass(frozen=True)
class DensityMatrix:
    """Hermitian, trace-one, positive-semidefinite matrix."""

    entries: np.ndarray
    dim: int

    def __post_init__(self):
        mat = np.asarray(self.entries, dtype=np.complex128)
        if mat.ndim != 2 or mat.shape[0] != mat.shape[1]:
            raise ShapeError(f"density matrix must be square, got shape {mat.shape}")
        if mat.shape[0] != self.dim:
            raise ShapeError(f"declared dim {self.dim} != matrix size {mat.shape[0]}")
        herm_dev = np.max(np.abs(mat - mat.conj().T))
        if herm_dev > EPS_HERM:
            raise ShapeError(f"matrix is not Hermitian (max deviation {herm_dev:.3e})")
        trace_dev = abs(np.trace(mat).real - 1.0)
        if trace_dev > EPS_HERM:
            raise ShapeError(f"trace deviates from 1 by {trace_dev:.3e}")
        smallest = float(np.linalg.eigvalsh(mat)[0])
        if smallest < -EPS_RANK:
            raise ShapeError(f"matrix not positive semidefinite (min eig {smallest:.3e})")
        mat = mat.copy()
        mat.flags.writeable = False
        object.__setattr__(self, "entries", mat)


@dataclass(frozen=True)
class BipartiteSplit:
    """Division of a composite space into a left and a right factor."""

    d_left: int
    d_right: int

    def __post_init__(self):
        if self.d_left < 1 or self.d_right < 1:
            raise ShapeError(f"split factors must be >= 1, got {self}")

    @property
    def total(self) -> int:
        return self.d_left * self.d_right

    def require_match(self, psi: StateVector) -> None:
        if self.total != psi.dim:
            raise ShapeError(
                f"split {self.d_left}x{self.d_right} does not factor a "
                f"{psi.dim}-dimensional state"
            )


@dataclass(frozen=True)
class UnitaryOperator:
    """Square matrix with U†U = I within EPS_EIG (max-entry deviation)."""

    entries: np.ndarray
    dim: int

    def __post_init__(self):
        mat = np.asarray(self.entries, dtype=np.complex128)
        if mat.ndim != 2 or mat.shape[0] != mat.shape[1]:
            raise ShapeError(f"unitary must be square, got shape {mat.shape}")
        if mat.shape[0] != self.dim:
            raise ShapeError(f"declared dim {self.dim} != matrix size {mat.shape[0]}")
        if not _is_permutation_with_unit_entries(mat):
            dev = np.max(np.abs(mat.conj().T @ mat - np.eye(self.dim)))
            if dev > EPS_EIG:
                raise ShapeError(f"operator is not unitary (max |U†U - I| = {dev:.3e})")
        mat = mat.copy()
        mat.flags.writeable = False
        object.__setattr__(self, "entries", mat)


def _is_permutation_with_unit_entries(mat: np.ndarray) -> bool:
    # O(dim^2) screen that avoids the O(dim^3) U†U product for the
    # permutation operators used in measurement models at large dims.
    nonzero = np.abs(mat) > 0.0
    if np.count_nonzero(nonzero) != mat.shape[0]:
        return False
    if not (nonzero.sum(axis=0) == 1).all() or not (nonzero.sum(axis=1) == 1).all():
        return False
    return bool(np.all(np.abs(np.abs(mat[nonzero]) - 1.0) <= EPS_EIG))


def make_state(amplitudes, dims) -> StateVector:
    """Normalize raw amplitudes into a StateVector with the given dims.

    Raises DegenerateStateError for a zero vector and ShapeError when the
    amplitude count does not match the product of dims.
    """
    amps = _as_complex_vector(amplitudes)
    dims = _check_dims(dims)
    if amps.size != math.prod(dims):
        raise ShapeError(
            f"{amps.size} amplitudes do not fill subsystems of dims {dims}"
        )
    norm = np.linalg.norm(amps)
    if norm <= 0.0:
        raise DegenerateStateError("degenerate state: zero amplitude vector")
    return StateVector(amps / norm, dims)


def basis_state(index: int, dim: int) -> StateVector:
    """Computational basis vector |index> of the given dimension."""
    if not 0 <= index < dim:
        raise ShapeError(f"basis index {index} outside [0, {dim})")
    amps = np.zeros(dim, dtype=np.complex128)
    amps[index] = 1.0
    return StateVector(amps, (dim,))


def tensor(a: StateVector, b: StateVector) -> StateVector:
    """Kronecker product; dims are concatenated, norm is preserved."""
    _check_dims(a.dims + b.dims)  # enforces the dimension cap early
    return StateVector(np.kron(a.amplitudes, b.amplitudes), a.dims + b.dims)


def apply_unitary(u: UnitaryOperator, psi: StateVector) -> StateVector:
    """Return U|psi>. The construction re-checks the unit norm."""
    if u.dim != psi.dim:
        raise ShapeError(f"operator dim {u.dim} != state dim {psi.dim}")
    return StateVector(u.entries @ psi.amplitudes, psi.dims)


def density_of(psi: StateVector) -> DensityMatrix:
    """Rank-one projector |psi><psi|."""
    return DensityMatrix(np.outer(psi.amplitudes, psi.amplitudes.conj()), psi.dim)


def partial_trace(psi: StateVector, split: BipartiteSplit, keep: Side) -> DensityMatrix:
    """Reduced density matrix of one side of a pure bipartite state.

    keep="left" traces out the right factor and vice versa. The split must
    factor the state's total dimension exactly.
    """
    split.require_match(psi)
    m = psi.amplitudes.reshape(split.d_left, split.d_right)
    if keep == "left":
        reduced = m @ m.conj().T
        dim = split.d_left
    elif keep == "right":
        reduced = m.T @ m.conj()
        dim = split.d_right
    else:
        raise ShapeError(f"keep must be 'left' or 'right', got {keep!r}")
    return DensityMatrix(reduced, dim)


def eig_hermitian(rho: DensityMatrix) -> tuple[np.ndarray, np.ndarray]:
    """Descending eigenvalues and deterministically canonicalized eigenvectors.

    Within a degenerate cluster (eigenvalue gap below DEGENERACY_GAP) the
    eigenbasis is rebuilt by Gram-Schmidt over the cluster projector's
    columns in standard basis order, and every eigenvector's global phase is
    fixed so its first component of modulus above 1e-9 is real positive.
    Identical inputs therefore always produce identical outputs.
    """
    values, vectors = np.linalg.eigh(rho.entries)
    values = values[::-1].copy()
    vectors = vectors[:, ::-1].copy()

    for lo, hi in _degenerate_clusters(values):
        if hi - lo > 1:
            vectors[:, lo:hi] = _canonical_cluster_basis(vectors[:, lo:hi])
    for col in range(vectors.shape[1]):
        vectors[:, col] = _fix_global_phase(vectors[:, col])
    return values, vectors


def _degenerate_clusters(descending: np.ndarray):
    """Index ranges [lo, hi) of eigenvalues linked by gaps < DEGENERACY_GAP."""
    n = descending.size
    lo = 0
    for i in range(1, n + 1):
        if i == n or descending[i - 1] - descending[i] >= DEGENERACY_GAP:
            yield lo, i
            lo = i


def _canonical_cluster_basis(vectors: np.ndarray) -> np.ndarray:
    """Deterministic orthonormal basis of the subspace spanned by `vectors`.

    Projects the standard basis vectors onto the subspace in index order and
    keeps the Gram-Schmidt survivors. The result depends only on the
    subspace, not on the arbitrary eigenbasis the eigensolver returned.
    """
    n, k = vectors.shape
    projector = vectors @ vectors.conj().T
    chosen: list[np.ndarray] = []
    for j in range(n):
        cand = projector[:, j].copy()
        for u in chosen:
            cand -= u * np.vdot(u, cand)
        nrm = np.linalg.norm(cand)
        if nrm <= 1e-7:
            continue
        cand /= nrm
        for u in chosen:  # second pass keeps orthogonality near machine precision
            cand -= u * np.vdot(u, cand)
        cand /= np.linalg.norm(cand)
        chosen.append(cand)
        if len(chosen) == k:
            return np.column_stack(chosen)
    raise ShapeError("degenerate cluster basis could not be completed")


def _fix_global_phase(vec: np.ndarray) -> np.ndarray:
    significant = np.flatnonzero(np.abs(vec) > 1e-9)
    if significant.size == 0:
        return vec
    pivot = vec[significant[0]]
    return vec * (pivot.conjugate() / abs(pivot))


def haar_random_state(dim: int, seed: int) -> StateVector:
    """Uniformly random state: 2*dim seeded Gaussians, normalized.

    The same seed always reproduces the same state bit for bit.
    """
    if dim < 1:
        raise ShapeError(f"dimension must be >= 1, got {dim}")
    _check_dims((dim,))
    return make_state(gaussian_amplitudes(rng_from_seed(seed), dim), (dim,))


def haar_random_unitary(dim: int, seed: int) -> UnitaryOperator:
    """Haar-distributed unitary via QR of a seeded complex Gaussian matrix.

    The QR phases are normalized with the diagonal of R so the distribution
    is exactly Haar rather than merely orthonormal.
    """
    if dim < 1:
        raise ShapeError(f"dimension must be >= 1, got {dim}")
    rng = rng_from_seed(seed)
    z = (rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim)))
    z /= math.sqrt(2.0)
    q, r = np.linalg.qr(z)
    diag = np.diagonal(r)
    q = q * (diag / np.abs(diag))
    return UnitaryOperator(q, dim)
