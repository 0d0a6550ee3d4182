"""Objective branching dynamics with an explicit world tree and entropy ledger.

A branch tree starts from a single root world. Interacting a leaf with a
unitary either leaves it a single world (the post-interaction state still
factorizes) or splits it into one child per retained Schmidt coefficient.
Each child is born in the factorized pair state with its weight rescaled to
one, so its own entropy clock restarts at zero; the ledger tracks the total
entropy of the leaf ensemble and its per-branch decomposition at every step.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import NamedTuple, Optional

import numpy as np

from .hilbert import (
    DIM_CAP,
    BipartiteSplit,
    CapacityError,
    ShapeError,
    StateVector,
    UnitaryOperator,
    apply_unitary,
    basis_state,
    haar_random_state,
    make_state,
    tensor,
)
from .schmidt import entanglement_entropy, schmidt_decompose

DEFAULT_MAX_LEAVES = 4096


class PointerOverflowError(ValueError):
    """The measuring device has too few pointer states for the outcomes."""


class LedgerRecord(NamedTuple):
    step: int
    total_entropy: float
    branch_entropies: tuple[float, ...]


@dataclass
class EntropyLedger:
    """Per-step record of the total entropy and its branch decomposition.

    ``branch_entropies`` holds one term per current leaf, computed from the
    leaf's cumulative weight, so the total is their sum at every record.
    """

    records: list[LedgerRecord] = field(default_factory=list)

    def append(self, step: int, total: float, branch_entropies: tuple[float, ...]) -> None:
        self.records.append(LedgerRecord(step, total, branch_entropies))

    def total_entropies(self) -> list[float]:
        return [r.total_entropy for r in self.records]

    def __len__(self) -> int:
        return len(self.records)

    def __iter__(self):
        return iter(self.records)


class _BranchEvent(NamedTuple):
    step: int
    rescaled_entropy: float
    state: StateVector
    split: Optional[BipartiteSplit]


@dataclass
class BranchNode:
    """One world line: weight, factorized post-branching state, entropies."""

    id: int
    parent_id: Optional[int]
    weight: float              # relative to the parent at branching time
    cumulative_weight: float   # product of weights from the root
    state: StateVector
    relative_entropy: float    # -weight * ln(weight)
    rescaled_entropy: float    # entropy accumulated since birth; 0 at birth
    birth_step: int
    children: list[int] = field(default_factory=list)
    history: list[_BranchEvent] = field(default_factory=list)


def _weight_entropy(w: float) -> float:
    # + 0.0 turns -0.0 into 0.0 at w == 1
    return -w * math.log(w) + 0.0


def branch_entropy(node: BranchNode) -> float:
    """Entropy contribution -w ln w of a branch weight, in nats."""
    return _weight_entropy(node.weight)


class BranchTree:
    """Mutable world tree; single-writer, mutated only through module functions."""

    def __init__(self, root_state: StateVector, max_leaves: int = DEFAULT_MAX_LEAVES):
        if max_leaves < 1:
            raise CapacityError(f"max_leaves must be >= 1, got {max_leaves}")
        self.max_leaves = int(max_leaves)
        self.step_counter = 0
        self.root_id = 0
        self._next_id = 1
        root = BranchNode(
            id=0,
            parent_id=None,
            weight=1.0,
            cumulative_weight=1.0,
            state=root_state,
            relative_entropy=0.0,
            rescaled_entropy=0.0,
            birth_step=0,
            history=[_BranchEvent(0, 0.0, root_state, None)],
        )
        self.nodes: dict[int, BranchNode] = {0: root}
        self.ledger = EntropyLedger()
        self._record_ledger()

    def node(self, node_id: int) -> BranchNode:
        try:
            return self.nodes[node_id]
        except KeyError:
            raise KeyError(f"unknown branch id {node_id}") from None

    def is_leaf(self, node_id: int) -> bool:
        return not self.node(node_id).children

    def leaf_ids(self) -> list[int]:
        return [nid for nid, node in self.nodes.items() if not node.children]

    def attach_ancilla(self, leaf_id: int, ancilla: StateVector) -> None:
        """Extend a leaf's state with a fresh factorized register.

        Pure bookkeeping: weights and entropies are untouched and the step
        counter does not advance.
        """
        node = self.node(leaf_id)
        if node.children:
            raise ShapeError(f"branch {leaf_id} is not a leaf")
        node.state = tensor(node.state, ancilla)

    def _allocate_id(self) -> int:
        nid = self._next_id
        self._next_id += 1
        return nid

    def _record_ledger(self) -> None:
        entropies = tuple(
            _weight_entropy(self.nodes[nid].cumulative_weight) for nid in self.leaf_ids()
        )
        self.ledger.append(self.step_counter, math.fsum(entropies), entropies)


def total_entropy(tree: BranchTree) -> float:
    """Entropy -sum w ln w of the current leaf weight distribution, in nats."""
    return math.fsum(
        _weight_entropy(tree.nodes[nid].cumulative_weight) for nid in tree.leaf_ids()
    )


def premeasurement_unitary(n_outcomes: int, device_dim: int) -> UnitaryOperator:
    """Generalized-CNOT coupling of an object register to a device register.

    Maps |i>|0> to |i>|i> for every outcome i by cyclically shifting the
    device index by the object index; the object register is never altered.
    For n_outcomes = device_dim = 2 this is the standard CNOT.
    """
    return _conditional_shift(n_outcomes, 1, device_dim)


def _conditional_shift(n_outcomes: int, middle_dim: int, device_dim: int) -> UnitaryOperator:
    """Device-shift unitary with an untouched register between object and device."""
    if n_outcomes < 1 or device_dim < 1 or middle_dim < 1:
        raise ShapeError("register dimensions must be >= 1")
    if device_dim < n_outcomes:
        raise PointerOverflowError(
            f"pointer overflow: device of dim {device_dim} cannot distinguish "
            f"{n_outcomes} outcomes"
        )
    total = n_outcomes * middle_dim * device_dim
    if total > DIM_CAP:
        raise CapacityError(f"operator dimension {total} exceeds the cap {DIM_CAP}")
    src = np.arange(total)
    obj = src // (middle_dim * device_dim)
    mid = (src // device_dim) % middle_dim
    dev = src % device_dim
    tgt = (obj * middle_dim + mid) * device_dim + (dev + obj) % device_dim
    entries = np.zeros((total, total), dtype=np.complex128)
    entries[tgt, src] = 1.0
    return UnitaryOperator(entries, total)


def interact_and_branch(
    tree: BranchTree,
    leaf_id: int,
    u: UnitaryOperator,
    split: BipartiteSplit,
) -> list[int]:
    """Apply a unitary to a leaf and split it along the Schmidt basis.

    Returns the new leaf ids, or an empty list when the post-interaction
    state still factorizes (the leaf is then updated in place). Every call
    advances the step counter and appends a ledger record.
    """
    node = tree.node(leaf_id)
    if node.children:
        raise ShapeError(f"branch {leaf_id} is not a leaf")
    new_state = apply_unitary(u, node.state)
    dec = schmidt_decompose(new_state, split)
    step = tree.step_counter + 1
    within_branch = entanglement_entropy(dec)

    if dec.rank == 1:
        node.state = new_state
        node.rescaled_entropy = within_branch
        node.history.append(_BranchEvent(step, within_branch, new_state, split))
        tree.step_counter = step
        tree._record_ledger()
        return []

    n_leaves_after = len(tree.leaf_ids()) - 1 + dec.rank
    if n_leaves_after > tree.max_leaves:
        raise CapacityError(
            f"branching to {n_leaves_after} leaves exceeds the cap {tree.max_leaves}"
        )

    node.state = new_state
    node.rescaled_entropy = within_branch
    node.history.append(_BranchEvent(step, within_branch, new_state, split))

    child_ids: list[int] = []
    for n in range(dec.rank):
        weight = float(dec.lambdas[n])
        child_state = StateVector(
            np.kron(dec.left_vectors[:, n], dec.right_vectors[:, n]),
            (split.d_left, split.d_right),
        )
        child = BranchNode(
            id=tree._allocate_id(),
            parent_id=leaf_id,
            weight=weight,
            cumulative_weight=node.cumulative_weight * weight,
            state=child_state,
            relative_entropy=_weight_entropy(weight),
            rescaled_entropy=0.0,
            birth_step=step,
            history=[_BranchEvent(step, 0.0, child_state, split)],
        )
        tree.nodes[child.id] = child
        child_ids.append(child.id)
    node.children = child_ids

    tree.step_counter = step
    tree._record_ledger()
    return child_ids


def rescaled_entropy_trace(
    tree: BranchTree,
    node_id: int,
    schmidt_split: Optional[BipartiteSplit] = None,
) -> list[tuple[int, float]]:
    """Entropy accumulated within one branch since its birth, step by step.

    The trace starts at exactly zero at the branch's birth step. With the
    default ``schmidt_split=None`` each later entry carries the entropy
    computed across the split of the interaction that produced it; passing
    a split recomputes every post-birth entry across that split instead,
    which requires the branch dimension to have stayed constant.
    """
    node = tree.node(node_id)
    trace = [(node.history[0].step, 0.0)]
    for event in node.history[1:]:
        if schmidt_split is None:
            trace.append((event.step, event.rescaled_entropy))
        else:
            dec = schmidt_decompose(event.state, schmidt_split)
            trace.append((event.step, entanglement_entropy(dec)))
    return trace


def _preparation_unitary(amplitudes: np.ndarray) -> np.ndarray:
    """Unitary whose first column is the given unit vector (deterministic QR)."""
    dim = amplitudes.size
    m = np.eye(dim, dtype=np.complex128)
    m[:, 0] = amplitudes
    q, _ = np.linalg.qr(m)
    phase = np.vdot(q[:, 0], amplitudes)
    q[:, 0] = q[:, 0] * phase
    return q


def _swap_indices(dim: int, a: int, b: int) -> np.ndarray:
    perm = np.eye(dim, dtype=np.complex128)
    if a != b:
        perm[[a, b]] = perm[[b, a]]
    return perm


def _object_outcome(state: StateVector, object_dim: int) -> int:
    """Index of the (essentially definite) object register of a branch state."""
    marginal = np.abs(state.amplitudes.reshape(object_dim, -1)) ** 2
    return int(np.argmax(marginal.sum(axis=1)))


def build_chain_tree(
    object_dim: int,
    n_devices: int,
    amplitudes=None,
    seed: int = 0,
    max_leaves: int = DEFAULT_MAX_LEAVES,
) -> BranchTree:
    """Couple an object to a chain of fresh devices, branching at each step.

    Each device starts in its ready state |0> and is coupled through the
    conditional-shift premeasurement. After every branching the followed
    branch (highest weight, lowest index on ties) has its object register
    rotated back to the initial superposition by a deterministic
    re-preparation unitary, itself applied as a further rank-preserving
    interaction. When ``amplitudes`` is omitted the object state is drawn
    uniformly from the seed.
    """
    if object_dim < 1:
        raise ShapeError(f"object dimension must be >= 1, got {object_dim}")
    if n_devices < 1:
        raise ShapeError(f"need at least one device, got {n_devices}")
    final_dim = object_dim ** (n_devices + 1)
    if final_dim > DIM_CAP:
        raise CapacityError(
            f"chain of {n_devices} devices reaches dimension {final_dim}, "
            f"beyond the cap {DIM_CAP}"
        )

    if amplitudes is None:
        obj = haar_random_state(object_dim, seed)
    else:
        obj = make_state(amplitudes, (object_dim,))
    prep = _preparation_unitary(obj.amplitudes)
    ready = basis_state(0, object_dim)

    tree = BranchTree(obj, max_leaves=max_leaves)
    followed = tree.root_id
    for _ in range(n_devices):
        prior_dim = tree.node(followed).state.dim
        tree.attach_ancilla(followed, ready)
        middle_dim = prior_dim // object_dim
        shift = _conditional_shift(object_dim, middle_dim, object_dim)
        split = BipartiteSplit(prior_dim, object_dim)
        children = interact_and_branch(tree, followed, shift, split)
        if not children:
            continue
        weights = [tree.node(c).weight for c in children]
        followed = children[int(np.argmax(weights))]
        outcome = _object_outcome(tree.node(followed).state, object_dim)
        rest_dim = tree.node(followed).state.dim // object_dim
        reprep = np.kron(
            prep @ _swap_indices(object_dim, 0, outcome),
            np.eye(rest_dim, dtype=np.complex128),
        )
        interact_and_branch(
            tree,
            followed,
            UnitaryOperator(reprep, tree.node(followed).state.dim),
            split,
        )
    return tree


def run_chain_protocol(
    object_dim: int,
    n_devices: int,
    amplitudes=None,
    seed: int = 0,
    max_leaves: int = DEFAULT_MAX_LEAVES,
) -> EntropyLedger:
    """Entropy ledger of the device-chain protocol; see build_chain_tree."""
    return build_chain_tree(object_dim, n_devices, amplitudes, seed, max_leaves).ledger
