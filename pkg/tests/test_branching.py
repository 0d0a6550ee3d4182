import math

import numpy as np
import pytest

from manyworlds import (
    BipartiteSplit,
    BranchTree,
    CapacityError,
    PointerOverflowError,
    ShapeError,
    UnitaryOperator,
    apply_unitary,
    basis_state,
    branch_entropy,
    build_chain_tree,
    haar_random_state,
    haar_random_unitary,
    interact_and_branch,
    make_state,
    partial_trace,
    premeasurement_unitary,
    rescaled_entropy_trace,
    run_chain_protocol,
    tensor,
    total_entropy,
)

LN2 = 0.6931471805599453
LN4 = 1.3862943611198906
HADAMARD = np.array([[1, 1], [1, -1]]) / math.sqrt(2)
CNOT = np.eye(4)[[0, 1, 3, 2]]


def plus_device():
    return tensor(make_state([1, 1], [2]), basis_state(0, 2))


def equal_split_unitary():
    """Sends |i>|i> to an equal-weight rank-2 state across the 2x2 split."""
    return UnitaryOperator(CNOT @ np.kron(HADAMARD, np.eye(2)), 4)


class TestPremeasurementUnitary:
    def test_two_outcomes_is_cnot(self):
        u = premeasurement_unitary(2, 2)
        assert np.array_equal(u.entries.real, CNOT)

    @pytest.mark.parametrize("n,device", [(2, 2), (3, 3), (3, 5), (4, 4)])
    def test_copies_each_outcome_to_pointer(self, n, device):
        u = premeasurement_unitary(n, device)
        for i in range(n):
            before = tensor(basis_state(i, n), basis_state(0, device))
            after = apply_unitary(u, before)
            want = tensor(basis_state(i, n), basis_state(i, device))
            assert np.allclose(after.amplitudes, want.amplitudes)

    def test_object_register_never_altered(self):
        n, device = 3, 4
        u = premeasurement_unitary(n, device)
        for i in range(n):
            for j in range(device):
                before = tensor(basis_state(i, n), basis_state(j, device))
                after = apply_unitary(u, before).amplitudes.reshape(n, device)
                assert np.argmax(np.abs(after).sum(axis=1)) == i

    def test_linearity_matches_expansion(self):
        amps = np.sqrt([0.5, 0.3, 0.2]).astype(complex)
        u = premeasurement_unitary(3, 3)
        got = apply_unitary(u, tensor(make_state(amps, [3]), basis_state(0, 3)))
        want = np.zeros(9, dtype=complex)
        for i in range(3):
            want[i * 3 + i] = amps[i]
        assert np.max(np.abs(got.amplitudes - want)) < 1e-15

    def test_pointer_overflow(self):
        with pytest.raises(PointerOverflowError, match="pointer overflow"):
            premeasurement_unitary(3, 2)

    def test_unit_outcome_is_identity(self):
        u = premeasurement_unitary(1, 4)
        assert np.array_equal(u.entries.real, np.eye(4))


class TestBranchEntropy:
    def test_certain_branch_carries_nothing(self):
        tree = BranchTree(basis_state(0, 2))
        assert branch_entropy(tree.node(tree.root_id)) == 0.0

    def test_half_weight(self):
        tree = BranchTree(plus_device())
        (a, _) = interact_and_branch(
            tree, tree.root_id, premeasurement_unitary(2, 2), BipartiteSplit(2, 2)
        )
        assert abs(branch_entropy(tree.node(a)) - 0.34657359027997264) < 1e-12

    def test_three_way_split_sums(self):
        amps = np.sqrt([0.5, 0.3, 0.2]).astype(complex)
        tree = BranchTree(tensor(make_state(amps, [3]), basis_state(0, 3)))
        kids = interact_and_branch(
            tree, tree.root_id, premeasurement_unitary(3, 3), BipartiteSplit(3, 3)
        )
        total = sum(branch_entropy(tree.node(k)) for k in kids)
        assert abs(total - 1.0296530140645737) < 1e-10


class TestInteractAndBranch:
    def test_equal_superposition_splits_in_two(self):
        tree = BranchTree(plus_device())
        kids = interact_and_branch(
            tree, tree.root_id, premeasurement_unitary(2, 2), BipartiteSplit(2, 2)
        )
        assert len(kids) == 2
        weights = [tree.node(k).weight for k in kids]
        assert np.allclose(weights, [0.5, 0.5], atol=1e-12)

    def test_definite_outcome_does_not_branch(self):
        tree = BranchTree(tensor(basis_state(0, 2), basis_state(0, 2)))
        kids = interact_and_branch(
            tree, tree.root_id, premeasurement_unitary(2, 2), BipartiteSplit(2, 2)
        )
        assert kids == []
        assert tree.leaf_ids() == [tree.root_id]
        assert tree.step_counter == 1

    def test_product_preserving_unitary_never_adds_leaves(self):
        # local rotations keep factorized states factorized
        local = UnitaryOperator(np.kron(HADAMARD, np.eye(2)), 4)
        tree = BranchTree(tensor(basis_state(0, 2), basis_state(0, 2)))
        for _ in range(4):
            assert interact_and_branch(tree, tree.root_id, local, BipartiteSplit(2, 2)) == []
        assert len(tree.leaf_ids()) == 1

    def test_three_outcome_weights_match_reduced_spectrum(self):
        amps = np.sqrt([0.5, 0.3, 0.2]).astype(complex)
        obj = make_state(amps, [3])
        tree = BranchTree(tensor(obj, basis_state(0, 3)))
        u = premeasurement_unitary(3, 3)
        kids = interact_and_branch(tree, tree.root_id, u, BipartiteSplit(3, 3))
        weights = np.array([tree.node(k).weight for k in kids])
        assert np.max(np.abs(weights - [0.5, 0.3, 0.2])) < 1e-10
        # independent oracle: spectrum of the reduced matrix of U(obj x |0>)
        premeasured = apply_unitary(u, tensor(obj, basis_state(0, 3)))
        w = np.linalg.eigvalsh(partial_trace(premeasured, BipartiteSplit(3, 3), "left").entries)
        oracle = np.sort(w)[::-1][: len(kids)]
        assert np.max(np.abs(weights - oracle)) < 1e-10

    def test_children_states_are_factorized_pairs(self):
        tree = BranchTree(plus_device())
        kids = interact_and_branch(
            tree, tree.root_id, premeasurement_unitary(2, 2), BipartiteSplit(2, 2)
        )
        for k, i in zip(kids, range(2)):
            want = tensor(basis_state(i, 2), basis_state(i, 2))
            assert np.max(np.abs(tree.node(k).state.amplitudes - want.amplitudes)) < 1e-12

    def test_non_leaf_rejected(self):
        tree = BranchTree(plus_device())
        interact_and_branch(
            tree, tree.root_id, premeasurement_unitary(2, 2), BipartiteSplit(2, 2)
        )
        with pytest.raises(ShapeError, match="not a leaf"):
            interact_and_branch(
                tree, tree.root_id, premeasurement_unitary(2, 2), BipartiteSplit(2, 2)
            )

    def test_dimension_mismatch_rejected(self):
        tree = BranchTree(plus_device())
        with pytest.raises(ShapeError):
            interact_and_branch(
                tree, tree.root_id, premeasurement_unitary(3, 3), BipartiteSplit(3, 3)
            )

    def test_attach_ancilla_only_on_leaves(self):
        tree = BranchTree(plus_device())
        interact_and_branch(
            tree, tree.root_id, premeasurement_unitary(2, 2), BipartiteSplit(2, 2)
        )
        with pytest.raises(ShapeError, match="not a leaf"):
            tree.attach_ancilla(tree.root_id, basis_state(0, 2))

    def test_leaf_cap_is_loud_and_leaves_tree_intact(self):
        amps = np.sqrt([0.5, 0.3, 0.2]).astype(complex)
        tree = BranchTree(
            tensor(make_state(amps, [3]), basis_state(0, 3)), max_leaves=2
        )
        with pytest.raises(CapacityError):
            interact_and_branch(
                tree, tree.root_id, premeasurement_unitary(3, 3), BipartiteSplit(3, 3)
            )
        assert tree.leaf_ids() == [tree.root_id]
        assert tree.step_counter == 0

    @pytest.mark.parametrize("seed", range(10))
    def test_weight_conservation_over_random_cascades(self, seed):
        tree = BranchTree(haar_random_state(4, seed))
        frontier = [tree.root_id]
        for level in range(3):
            next_frontier = []
            for leaf in frontier:
                u = haar_random_unitary(4, 1000 * seed + 10 * level + leaf)
                kids = interact_and_branch(tree, leaf, u, BipartiteSplit(2, 2))
                next_frontier.extend(kids or [leaf])
            frontier = next_frontier
        leaf_sum = sum(tree.node(n).cumulative_weight for n in tree.leaf_ids())
        assert abs(leaf_sum - 1.0) < 1e-9

    def test_ledger_identity_at_every_record(self):
        tree = BranchTree(haar_random_state(4, 5))
        frontier = [tree.root_id]
        for level in range(3):
            next_frontier = []
            for leaf in frontier:
                u = haar_random_unitary(4, 77 * level + leaf)
                kids = interact_and_branch(tree, leaf, u, BipartiteSplit(2, 2))
                next_frontier.extend(kids or [leaf])
            frontier = next_frontier
        for record in tree.ledger:
            assert abs(record.total_entropy - math.fsum(record.branch_entropies)) < 1e-10


class TestTotalEntropy:
    def test_single_leaf_zero(self):
        assert total_entropy(BranchTree(basis_state(0, 2))) == 0.0

    def test_one_equal_branching_ln2(self):
        tree = BranchTree(plus_device())
        interact_and_branch(
            tree, tree.root_id, premeasurement_unitary(2, 2), BipartiteSplit(2, 2)
        )
        assert abs(total_entropy(tree) - LN2) < 1e-12

    def test_two_equal_branchings_on_both_leaves_ln4(self):
        tree = BranchTree(plus_device())
        kids = interact_and_branch(
            tree, tree.root_id, premeasurement_unitary(2, 2), BipartiteSplit(2, 2)
        )
        for k in kids:
            interact_and_branch(tree, k, equal_split_unitary(), BipartiteSplit(2, 2))
        assert len(tree.leaf_ids()) == 4
        assert abs(total_entropy(tree) - LN4) < 1e-12
        # direct evaluation of -sum w ln w over the four quarter-weight leaves
        direct = -math.fsum(0.25 * math.log(0.25) for _ in range(4))
        assert abs(total_entropy(tree) - direct) < 1e-12


class TestRescaledEntropyTrace:
    def test_fresh_branch_starts_at_exactly_zero(self):
        tree = BranchTree(plus_device())
        kids = interact_and_branch(
            tree, tree.root_id, premeasurement_unitary(2, 2), BipartiteSplit(2, 2)
        )
        for k in kids:
            trace = rescaled_entropy_trace(tree, k)
            assert trace[0] == (tree.node(k).birth_step, 0.0)

    def test_never_reinteracting_branch_stays_zero(self):
        tree = BranchTree(plus_device())
        kids = interact_and_branch(
            tree, tree.root_id, premeasurement_unitary(2, 2), BipartiteSplit(2, 2)
        )
        trace = rescaled_entropy_trace(tree, kids[1])
        assert trace == [(1, 0.0)]

    def test_entropy_just_before_second_branching_is_ln2(self):
        tree = BranchTree(plus_device())
        kids = interact_and_branch(
            tree, tree.root_id, premeasurement_unitary(2, 2), BipartiteSplit(2, 2)
        )
        followed = kids[0]
        interact_and_branch(tree, followed, equal_split_unitary(), BipartiteSplit(2, 2))
        trace = rescaled_entropy_trace(tree, followed)
        assert trace[0][1] == 0.0
        assert abs(trace[-1][1] - LN2) < 1e-10

    def test_recompute_across_given_split(self):
        tree = BranchTree(plus_device())
        kids = interact_and_branch(
            tree, tree.root_id, premeasurement_unitary(2, 2), BipartiteSplit(2, 2)
        )
        followed = kids[0]
        interact_and_branch(tree, followed, equal_split_unitary(), BipartiteSplit(2, 2))
        stored = rescaled_entropy_trace(tree, followed)
        recomputed = rescaled_entropy_trace(tree, followed, BipartiteSplit(2, 2))
        assert len(stored) == len(recomputed)
        for (s1, v1), (s2, v2) in zip(stored, recomputed):
            assert s1 == s2 and abs(v1 - v2) < 1e-10

    def test_unknown_node_rejected(self):
        tree = BranchTree(basis_state(0, 2))
        with pytest.raises(KeyError):
            rescaled_entropy_trace(tree, 99)


class TestChainProtocol:
    def test_definite_object_never_grows_entropy(self):
        ledger = run_chain_protocol(2, 5, amplitudes=[1, 0], seed=4)
        assert all(t == 0.0 for t in ledger.total_entropies())

    def test_single_device_equal_superposition_gives_ln2(self):
        ledger = run_chain_protocol(2, 1, amplitudes=[1, 1], seed=4)
        assert abs(ledger.total_entropies()[-1] - LN2) < 1e-12

    def test_five_devices_match_hand_accumulated_formula(self):
        ledger = run_chain_protocol(2, 5, amplitudes=[1, 1], seed=4)
        totals = ledger.total_entropies()
        expected = [0.0]
        acc, weight = 0.0, 1.0
        for _ in range(5):
            acc += weight * LN2   # branching step
            expected += [acc, acc]  # re-preparation step leaves the total alone
            weight *= 0.5
        assert len(totals) == len(expected)
        assert max(abs(a - b) for a, b in zip(totals, expected)) < 1e-12

    def test_entropy_never_decreases(self):
        for seed in range(10):
            ledger = run_chain_protocol(3, 3, amplitudes=None, seed=seed)
            totals = ledger.total_entropies()
            assert all(b >= a - 1e-12 for a, b in zip(totals, totals[1:]))

    def test_every_branch_trace_starts_at_zero(self):
        tree = build_chain_tree(2, 5, amplitudes=[1, 1], seed=4)
        for nid in tree.nodes:
            trace = rescaled_entropy_trace(tree, nid)
            assert trace[0][1] == 0.0

    def test_seed_determines_object_state(self):
        a = run_chain_protocol(2, 3, amplitudes=None, seed=11)
        b = run_chain_protocol(2, 3, amplitudes=None, seed=11)
        c = run_chain_protocol(2, 3, amplitudes=None, seed=12)
        assert a.total_entropies() == b.total_entropies()
        assert a.total_entropies() != c.total_entropies()

    def test_dimension_cap(self):
        with pytest.raises(CapacityError):
            run_chain_protocol(2, 14, amplitudes=[1, 1], seed=0)
