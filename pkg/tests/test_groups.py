import itertools
from fractions import Fraction
from math import prod

import pytest
from hypothesis import given
from hypothesis import strategies as st

import oracles
from conftest import SHAPES_12, SHAPES_16
from maxloc.groups import (
    BoundExceeded,
    GroupMismatch,
    GroupSpec,
    Subgroup,
    annihilator,
    enumerate_subgroups,
    enumerate_symmetric_homs,
    pairing,
    parse_group,
    smith_canonicalize,
    transversal,
)
from maxloc.phase import UnitPhase

Z4 = GroupSpec((4,))


@pytest.mark.parametrize(
    "text, orders",
    [("Z4", (4,)), ("Z2xZ4", (2, 4)), ("z3xz3xz2", (3, 3, 2)), (" Z1 ", (1,)), ("Z4xZ2", (4, 2))],
)
def test_parse_group(text, orders):
    assert parse_group(text).cyclic_orders == orders


@pytest.mark.parametrize("text", ["", "Z", "Q4", "Z0", "Z2*Z3", "Z-2"])
def test_parse_group_rejects(text):
    with pytest.raises(ValueError):
        parse_group(text)


def test_haar_normalisation():
    A = GroupSpec((2, 6))
    assert A.order == 12
    assert A.haar_weight_primal == 1
    assert A.haar_weight_dual == Fraction(1, 12)
    assert A.haar_weight_primal * A.order * A.haar_weight_dual * A.order == A.order


def test_index_is_lexicographic():
    A = GroupSpec((2, 3))
    els = A.elements
    assert els == sorted(els)
    assert [A.index(x) for x in els] == list(range(6))
    assert A.reduce((3, -1)) == (1, 2)


@pytest.mark.parametrize(
    "orders, x, xi, phase",
    [((4,), (1,), (2,), UnitPhase(1, 2)), ((2, 3), (1, 1), (1, 2), UnitPhase(1, 6)), ((5,), (0,), (3,), UnitPhase(0, 1))],
)
def test_pairing(orders, x, xi, phase):
    assert pairing(GroupSpec(orders), x, xi) == phase


def test_pairing_rejects_mismatch():
    with pytest.raises(GroupMismatch):
        pairing(Z4, (1, 0), (1,))


@pytest.mark.parametrize("orders", [(4,), (2, 2), (2, 3), (3, 3), (2, 4)])
def test_pairing_is_bicharacter_exhaustive(orders):
    A = GroupSpec(orders)
    for x, y, xi in itertools.product(A.elements, repeat=3):
        assert pairing(A, A.add(x, y), xi) == pairing(A, x, xi) + pairing(A, y, xi)
        assert pairing(A, xi, x) == pairing(A, x, xi)


@pytest.mark.parametrize(
    "gens, expected",
    [([(2,)], [(0,), (2,)]), ([], [(0,), (1,), (2,), (3,)]), ([(1,)], [(0,)])],
)
def test_annihilator_examples(gens, expected):
    H = Subgroup.generated_by(Z4, gens)
    assert annihilator(H).elements == expected


# number of subgroups, from the closure-based oracle
SUBGROUP_COUNTS = {(1,): 1, (2,): 2, (4,): 3, (2, 2): 5, (6,): 4, (8,): 4, (2, 4): 8, (3, 3): 6, (2, 2, 2): 16, (12,): 6, (2, 6): 10}


@pytest.mark.parametrize("orders, count", sorted(SUBGROUP_COUNTS.items()))
def test_subgroup_counts(orders, count):
    subs = enumerate_subgroups(GroupSpec(orders))
    assert len(subs) == count
    assert {frozenset(H.elements) for H in subs} == set(oracles.all_subgroups(orders))


def test_subgroup_order_is_deterministic():
    subs = enumerate_subgroups(Z4)
    assert [H.elements for H in subs] == [[(0,)], [(0,), (2,)], [(0,), (1,), (2,), (3,)]]
    keys = [(H.order, H.indices) for H in enumerate_subgroups(GroupSpec((2, 4)))]
    assert keys == sorted(keys)


def test_enumeration_bound():
    with pytest.raises(BoundExceeded):
        enumerate_subgroups(GroupSpec((8, 9)), bound=64)


@pytest.mark.parametrize("orders", SHAPES_16)
def test_annihilator_duality(orders):
    A = GroupSpec(orders)
    for H in enumerate_subgroups(A):
        Hp = annihilator(H)
        assert H.order * Hp.order == A.order
        assert annihilator(Hp) == H
        assert all(not pairing(A, x, xi) for x in H.elements for xi in Hp.elements)


@pytest.mark.parametrize(
    "orders, gens, factors",
    [((2, 2), [(1, 1)], (2,)), ((4, 4), [(2, 0), (0, 2)], (2, 2)), ((6,), [(1,)], (6,)), ((2, 4), [(1, 1)], (4,))],
)
def test_smith_basis(orders, gens, factors):
    A = GroupSpec(orders)
    H = Subgroup.generated_by(A, gens)
    basis = smith_canonicalize(H)
    assert tuple(d for _, d in basis) == factors
    assert Subgroup.generated_by(A, [g for g, _ in basis]) == H
    assert all(A.element_order(g) == d for g, d in basis)


@pytest.mark.parametrize("orders", SHAPES_16)
def test_smith_basis_is_direct_and_divisible(orders):
    A = GroupSpec(orders)
    for H in enumerate_subgroups(A):
        ds = H.invariant_factors
        assert prod(ds) == H.order
        assert all(b % a == 0 for a, b in zip(ds, ds[1:]))
        assert len(H.basis_coordinates) == H.order  # distinct sums, so the sum is direct


@pytest.mark.parametrize(
    "gens, reps",
    [([(2,)], [(0,), (1,)]), ([(1,)], [(0,)]), ([], [(0,), (1,), (2,), (3,)])],
)
def test_transversal_examples(gens, reps):
    assert transversal(Z4, Subgroup.generated_by(Z4, gens)) == reps


@pytest.mark.parametrize("orders", SHAPES_12)
def test_transversal_partitions(orders):
    A = GroupSpec(orders)
    for S in enumerate_subgroups(A):
        reps = transversal(A, S)
        cosets = [frozenset(A.add(r, s) for s in S.elements) for r in reps]
        assert len(reps) == A.order // S.order
        assert frozenset().union(*cosets) == frozenset(A.elements)
        assert sum(len(c) for c in cosets) == A.order
        assert all(r == min(c) for r, c in zip(reps, cosets))


@pytest.mark.parametrize("orders, gens, count", [((2,), [(1,)], 2), ((3,), [(1,)], 3), ((4,), [], 1), ((2, 2), [(1, 0), (0, 1)], 8)])
def test_symmetric_hom_counts(orders, gens, count):
    A = GroupSpec(orders)
    assert len(enumerate_symmetric_homs(Subgroup.generated_by(A, gens))) == count


def _all_homs(H):
    """Every homomorphism H -> A^/H^perp, by brute force over generator images."""
    A = H.parent
    Hp = annihilator(H)
    reps = transversal(A, Hp)
    basis = H.canonical_basis
    out = []
    for imgs in itertools.product(reps, repeat=len(basis)):
        if all(A.scale(im, d) in Hp for im, (_, d) in zip(imgs, basis)):
            out.append(imgs)
    return out


@pytest.mark.parametrize("orders", SHAPES_12)
def test_symmetric_homs_match_filtered_homs(orders):
    A = GroupSpec(orders)
    for H in enumerate_subgroups(A):
        homs = enumerate_symmetric_homs(H)
        els = H.elements
        for phi in homs:
            for x, y in itertools.product(els, repeat=2):
                assert pairing(A, x, phi(y)) == pairing(A, y, phi(x))
        sym = [
            imgs
            for imgs in _all_homs(H)
            if all(
                pairing(A, g, imgs[j]) == pairing(A, h, imgs[i])
                for i, (g, _) in enumerate(H.canonical_basis)
                for j, (h, _) in enumerate(H.canonical_basis)
            )
        ]
        assert len(homs) == len(sym)


@given(st.lists(st.integers(1, 6), min_size=1, max_size=3), st.data())
def test_reduce_idempotent(orders, data):
    A = GroupSpec(tuple(orders))
    x = tuple(data.draw(st.integers(-50, 50)) for _ in orders)
    r = A.reduce(x)
    assert A.reduce(r) == r
    assert all(0 <= c < n for c, n in zip(r, orders))
    assert A.add(r, A.neg(r)) == A.zero
