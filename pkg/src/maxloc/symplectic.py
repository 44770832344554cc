"""Subgroups of the phase space ``A x A^`` and their symplectic structure.

Every subgroup ``G`` of ``A x A^`` is described by a triple ``(H, K, phi)``:
``H`` its projection to ``A``, ``K`` its fibre over ``0`` and
``phi: H -> A^/K`` (stored as lifts into ``A^``) so that
``G = {(x, xi) : x in H, xi in phi(x) + K}``.  ``G`` is isotropic iff
``K`` is inside ``H^perp`` and ``phi`` is symmetric, and maximal isotropic iff
moreover ``K = H^perp``, i.e. iff ``|G| = |A|`` (Haar measure one).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .groups import (
    DEFAULT_MAX_ORDER,
    GroupMismatch,
    GroupSpec,
    Homomorphism,
    Subgroup,
    annihilator,
    coords_table,
    enumerate_subgroups,
    enumerate_symmetric_homs,
    indices_of,
    is_symmetric,
    pairing_table,
    phase_space,
)
from .phase import UnitPhase
from .tf import split_point


class NotIsotropic(ValueError):
    pass


def symplectic_pairing(A: GroupSpec, z, w) -> UnitPhase:
    """Phase of ``sigma((x,xi),(y,eta)) = <y,xi> conj<x,eta>``."""
    x, xi = split_point(A, z)
    y, eta = split_point(A, w)
    P = pairing_table(A)
    return UnitPhase(int(P[A.index(y), A.index(xi)] - P[A.index(x), A.index(eta)]), A.exponent)


def sigma_int(A: GroupSpec, zs, ws) -> np.ndarray:
    """Vectorised symplectic phases (units of ``1/exponent``) for flat point indices."""
    zs, ws = np.asarray(zs), np.asarray(ws)
    n = A.order
    P = pairing_table(A)
    return (P[ws // n, zs % n] - P[zs // n, ws % n]) % A.exponent


def measure(G: Subgroup) -> Fraction:
    """Haar measure of a subgroup of ``A x A^``."""
    n = _base(G).order
    return Fraction(G.order, n)


def _base(G: Subgroup) -> GroupSpec:
    orders = G.parent.cyclic_orders
    k = len(orders) // 2
    A = GroupSpec(orders[:k])
    if len(orders) % 2 or phase_space(A) != G.parent:
        raise GroupMismatch(f"{G.parent} is not a phase space")
    return A


@dataclass(frozen=True)
class IsotropicTriple:
    H: Subgroup
    K: Subgroup
    phi: Homomorphism

    @property
    def group(self) -> GroupSpec:
        return self.H.parent

    @property
    def is_symmetric(self) -> bool:
        return self.K.issubset(annihilator(self.H)) and is_symmetric(self.phi)

    @property
    def is_maximal(self) -> bool:
        return self.is_symmetric and self.K == annihilator(self.H)

    @property
    def measure(self) -> Fraction:
        return self.H.order * Fraction(self.K.order, self.group.order)

    def same_as(self, other: IsotropicTriple) -> bool:
        """Equal ``H`` and ``K``, and lifts equal modulo ``K``."""
        if self.H != other.H or self.K != other.K:
            return False
        A = self.group
        return all(A.sub(a, b) in self.K for a, b in zip(self.phi.images, other.phi.images))


def subgroup_from_triple(t: IsotropicTriple) -> Subgroup:
    A = t.group
    if t.phi.source != t.H:
        raise ValueError("phi must be defined on H")
    if not t.phi.is_well_defined(modulo=t.K):
        raise ValueError("phi is not well defined into A^/K")
    n = A.order
    C = coords_table(A)
    xs = np.array([A.index(x) for x in t.H.elements], dtype=np.int64)
    lifts = np.array([A.index(t.phi(x)) for x in t.H.elements], dtype=np.int64)
    ks = C[np.array(t.K.indices, dtype=np.int64)]
    fibres = indices_of(A, C[lifts][:, None, :] + ks[None, :, :])
    idx = (xs[:, None] * n + fibres).ravel()
    return Subgroup(phase_space(A), np.unique(idx))


def triple_from_subgroup(G: Subgroup) -> IsotropicTriple:
    """Projection ``H``, fibre ``K`` and lexicographically minimal lifts of ``phi``."""
    A = _base(G)
    n = A.order
    idx = np.array(G.indices, dtype=np.int64)
    H = Subgroup(A, np.unique(idx // n))
    K = Subgroup(A, idx[idx < n])
    images = []
    for e, _ in H.canonical_basis:
        lo = A.index(e) * n
        fibre = idx[(idx >= lo) & (idx < lo + n)]
        images.append(A.element(int(fibre.min()) - lo))
    return IsotropicTriple(H, K, Homomorphism(H, A, images))


def is_isotropic(G: Subgroup, method: str = "triple") -> bool:
    """Isotropy via the triple criterion or by brute force over all pairs."""
    if method == "direct":
        A = _base(G)
        idx = np.array(G.indices, dtype=np.int64)
        return bool(np.all(sigma_int(A, idx[:, None], idx[None, :]) == 0))
    if method == "triple":
        return triple_from_subgroup(G).is_symmetric
    raise ValueError(f"unknown method {method!r}")


def is_maximal_isotropic(G: Subgroup) -> bool:
    """``K = H^perp`` for an isotropic ``G``; cross-checked against ``|G| = 1``."""
    t = triple_from_subgroup(G)
    if not t.is_symmetric:
        raise NotIsotropic("subgroup is not isotropic")
    by_fibre = t.K == annihilator(t.H)
    by_measure = measure(G) == 1
    if by_fibre != by_measure:
        raise AssertionError("maximality criteria disagree")
    return by_fibre


def saturate(G: Subgroup) -> Subgroup:
    """Maximal isotropic subgroup containing ``G``: same ``H`` and ``phi``, fibre ``H^perp``."""
    t = triple_from_subgroup(G)
    if not t.is_symmetric:
        raise NotIsotropic("only isotropic subgroups can be saturated")
    return subgroup_from_triple(IsotropicTriple(t.H, annihilator(t.H), t.phi))


def enumerate_maximal_isotropic(A: GroupSpec, bound: int | None = DEFAULT_MAX_ORDER) -> list:
    """All maximal isotropic subgroups of ``A x A^`` as triples ``(H, H^perp, phi)``."""
    A.check_bound(bound)
    out = []
    for H in enumerate_subgroups(A):
        Hp = annihilator(H)
        for phi in enumerate_symmetric_homs(H, bound=None):
            out.append(IsotropicTriple(H, Hp, phi))
    return out


def generated_subgroup(A: GroupSpec, points) -> Subgroup:
    """Subgroup of ``A x A^`` generated by the given points."""
    P = phase_space(A)
    gens = [x + xi for x, xi in (split_point(A, z) for z in points)]
    return Subgroup.generated_by(P, gens)


def induced_phi_prime(G: Subgroup) -> Homomorphism:
    """``phi': G -> G^`` with ``<(x,xi), phi'(y,eta)> = conj<x,eta>``.

    In the coordinates of ``(A x A^)^`` this is ``(y, eta) -> (-eta, 0)``.
    """
    A = _base(G)
    if not is_maximal_isotropic(G):
        raise ValueError("phi' is defined for maximal isotropic subgroups")
    P = G.parent
    k = A.rank
    images = [A.neg(g[k:]) + A.zero for g, _ in G.canonical_basis]
    return Homomorphism(G, P, images)
