import itertools

import numpy as np
import pytest

import oracles
from conftest import SHAPES_12, SHAPES_8
from maxloc.groups import (
    GroupSpec,
    Homomorphism,
    Subgroup,
    annihilator,
    enumerate_subgroups,
    enumerate_symmetric_homs,
    pairing,
)
from maxloc.phase import UnitPhase
from maxloc.second_degree import (
    SecondDegreeCharacter,
    ambiguity_closed_form,
    construct_second_degree,
    cyclic_subcharacter,
    enumerate_second_degree,
    phase_space_character,
    subcharacter,
    verify_second_degree,
)
from maxloc.symplectic import enumerate_maximal_isotropic, subgroup_from_triple
from maxloc.tf import ambiguity, support


def whole(n):
    A = GroupSpec((n,))
    return A, Subgroup.whole(A)


def test_weil_formula_on_z3():
    A, H = whole(3)
    f = construct_second_degree(H, Homomorphism(H, A, [(1,)]))
    assert f((1,)) == UnitPhase(2, 3)
    assert f((2,)) == UnitPhase(2, 3)  # <2, phi(2 * 2)> = 2 * 4 / 3


def test_zero_phi_gives_trivial_character():
    A = GroupSpec((2, 4))
    H = Subgroup.whole(A)
    f = construct_second_degree(H, Homomorphism(H, A, [(0, 0)] * len(H.canonical_basis)))
    assert all(p == UnitPhase(0, 1) for p in f.values.values())


def test_identity_on_z2_smallest_root():
    A, H = whole(2)
    phi = Homomorphism(H, A, [(1,)])
    f = construct_second_degree(H, phi)
    assert f((0,)) == UnitPhase(0, 1) and f((1,)) == UnitPhase(1, 4)
    sols = enumerate_second_degree(H, phi)
    assert sorted(str(s((1,))) for s in sols) == ["1/4", "3/4"]
    ones = SecondDegreeCharacter(H, phi, {(0,): UnitPhase(0, 1), (1,): UnitPhase(0, 1)})
    assert not verify_second_degree(ones)


def test_characters_verify_for_zero_phi():
    A, H = whole(6)
    zero = Homomorphism(H, A, [(0,)])
    for xi in range(6):
        chi = SecondDegreeCharacter(H, zero, {x: pairing(A, x, (xi,)) for x in H.elements})
        assert verify_second_degree(chi)
    B, K = whole(2)
    assert len(enumerate_second_degree(K, Homomorphism(K, B, [(0,)]))) == 2


def test_non_symmetric_phi_rejected():
    A = GroupSpec((2, 2))
    H = Subgroup.whole(A)
    phi = Homomorphism(H, A, [(0, 1), (0, 0)])  # <e1, phi(e2)> = 0 but <e2, phi(e1)> = 1/2
    with pytest.raises(ValueError):
        construct_second_degree(H, phi)


def _phases(f):
    return {x: p.fraction for x, p in f.values.items()}


@pytest.mark.parametrize("orders", SHAPES_8)
def test_torsor_matches_dfs_oracle(orders):
    A = GroupSpec(orders)
    for H in enumerate_subgroups(A):
        for phi in enumerate_symmetric_homs(H):
            sols = enumerate_second_degree(H, phi)
            mine = {frozenset(_phases(f).items()) for f in sols}
            ref = oracles.second_degree_solutions(orders, set(H.elements), {x: phi(x) for x in H.elements})
            assert len(mine) == H.order
            assert mine == {frozenset(r.items()) for r in ref}


@pytest.mark.parametrize("orders", SHAPES_12)
def test_ratios_are_characters(orders):
    A = GroupSpec(orders)
    for H in enumerate_subgroups(A):
        if H.order > 8:
            continue
        for phi in enumerate_symmetric_homs(H):
            sols = enumerate_second_degree(H, phi)
            for f, g in itertools.combinations(sols, 2):
                d = {x: f(x) - g(x) for x in H.elements}
                assert all(d[A.add(x, y)] == d[x] + d[y] for x in H.elements for y in H.elements)


@pytest.mark.parametrize("orders", [(3,), (5,), (9,), (3, 3), (15,), (7,)])
def test_weil_and_generators_differ_by_a_character(orders):
    A = GroupSpec(orders)
    for H in enumerate_subgroups(A):
        for phi in enumerate_symmetric_homs(H):
            w = construct_second_degree(H, phi, "weil")
            g = construct_second_degree(H, phi, "generators")
            assert verify_second_degree(w) and verify_second_degree(g)
            d = {x: w(x) - g(x) for x in H.elements}
            assert all(d[A.add(x, y)] == d[x] + d[y] for x in H.elements for y in H.elements)


def test_weil_needs_odd_order():
    A, H = whole(4)
    with pytest.raises(ValueError):
        construct_second_degree(H, Homomorphism(H, A, [(1,)]), "weil")


def test_cyclic_subcharacter_examples():
    h = cyclic_subcharacter(4, 2, 1)
    assert h.H.elements == [(0,), (2,)]
    assert h.character((0,)) == UnitPhase(0, 1) and h.character((2,)) == UnitPhase(3, 4)
    assert h((2,)) == -1j and h((1,)) == 0
    d = cyclic_subcharacter(7, 1, 0)
    assert d.H.elements == [(0,)]
    ind = cyclic_subcharacter(6, 3, 0)
    assert ind.H.elements == [(0,), (2,), (4,)]
    assert all(p == UnitPhase(0, 1) for p in ind.character.values.values())


@pytest.mark.parametrize("N", range(1, 13))
def test_cyclic_family_is_valid_and_reaches_every_maximal_isotropic(N):
    seen = set()
    for b in (d for d in range(1, N + 1) if N % d == 0):
        for p in range(b):
            h = cyclic_subcharacter(N, b, p)
            assert verify_second_degree(h.character)
            a = N // b
            G = {(m * a % N, (n * b + m * p) % N) for m in range(N) for n in range(N)}
            got = subgroup_from_triple(h.triple())
            assert set(got.elements) == G
            seen.add(frozenset(G))
    assert len(seen) == sum(d for d in range(1, N + 1) if N % d == 0)


@pytest.mark.parametrize("N, b, p", [(4, 3, 0), (4, 2, 2), (4, 0, 0), (6, 4, 1)])
def test_cyclic_subcharacter_rejects(N, b, p):
    with pytest.raises(ValueError):
        cyclic_subcharacter(N, b, p)


def test_closed_form_examples():
    A = GroupSpec((4,))
    H = Subgroup.generated_by(A, [(2,)])
    h = subcharacter(H, Homomorphism(H, A, [(0,)]))
    V = ambiguity_closed_form(h)
    expected = {(x, xi) for x in (0, 2) for xi in (0, 2)}
    assert {(z[0][0], z[1][0]) for z in support(V).points()} == expected
    assert np.allclose(np.abs(V.values[V.values != 0]), 2)
    V = ambiguity_closed_form(cyclic_subcharacter(4, 2, 1))
    assert {(z[0][0], z[1][0]) for z in support(V).points()} == {(0, 0), (0, 2), (2, 1), (2, 3)}
    V = ambiguity_closed_form(cyclic_subcharacter(5, 1, 0))
    assert {(z[0][0], z[1][0]) for z in support(V).points()} == {(0, xi) for xi in range(5)}


@pytest.mark.parametrize("orders", SHAPES_12)
def test_closed_form_equals_transform(orders):
    A = GroupSpec(orders)
    for t in enumerate_maximal_isotropic(A):
        for normalized in (False, True):
            h = subcharacter(t.H, t.phi, normalized)
            assert ambiguity_closed_form(h).exact.equals(ambiguity(h.window()).exact)


@pytest.mark.parametrize("orders", SHAPES_12)
def test_phase_space_restriction_is_second_degree(orders):
    A = GroupSpec(orders)
    for t in enumerate_maximal_isotropic(A):
        h = subcharacter(t.H, t.phi)
        assert verify_second_degree(phase_space_character(h))
        # |H|^-1 V_h h on G is the reflected version, also of second degree for phi'
        assert verify_second_degree(phase_space_character(h, reflect=True))


def test_subcharacter_window_normalisation():
    h = cyclic_subcharacter(8, 4, 1, normalized=True)
    w = h.window()
    assert w.norm_sq() == 1
    assert np.allclose(np.abs(w.values[w.values != 0]), 0.5)
    assert h.triple().K == annihilator(h.H)
