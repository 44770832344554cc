"""Characters and subcharacters of second degree.

A character of second degree on ``H`` for a symmetric ``phi: H -> H^`` is a
unimodular ``f`` with ``f(x + y) = f(x) f(y) <x, phi(y)>``.  Solutions for a
fixed ``phi`` form a torsor under the characters of ``H``.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .cyclotomic import CyclotomicArray, _lcm
from .groups import (
    GroupSpec,
    Homomorphism,
    Subgroup,
    annihilator,
    is_symmetric,
    pairing,
    pairing_table,
    transversal,
)
from .phase import ExactScalar, UnitPhase, nth_root_solutions
from .symplectic import IsotropicTriple, induced_phi_prime, subgroup_from_triple
from .tf import PhaseSpaceFunction, Window


@dataclass
class SecondDegreeCharacter:
    domain: Subgroup
    phi: Homomorphism
    values: dict  # element -> UnitPhase

    def __call__(self, x) -> UnitPhase:
        return self.values[self.domain.parent.reduce(x)]

    def times_character(self, xi) -> SecondDegreeCharacter:
        A = self.domain.parent
        vals = {x: p + pairing(A, x, xi) for x, p in self.values.items()}
        return SecondDegreeCharacter(self.domain, self.phi, vals)


def _check_phi(H: Subgroup, phi: Homomorphism):
    if phi.source != H:
        raise ValueError("phi must be defined on H")
    if not is_symmetric(phi):
        raise ValueError("phi is not symmetric; no character of second degree exists for it")


def _weil(H: Subgroup, phi: Homomorphism) -> dict:
    A = H.parent
    e = max((d for _, d in H.canonical_basis), default=1)
    half = (e + 1) // 2  # inverse of 2 modulo the odd exponent of H
    return {x: pairing(A, x, phi(A.scale(x, half))) for x in H.elements}


def _by_generators(H: Subgroup, phi: Homomorphism) -> dict:
    A = H.parent
    basis = H.canonical_basis
    r = len(basis)
    B = [[pairing(A, basis[i][0], phi.images[j]).fraction for j in range(r)] for i in range(r)]
    roots = []
    for i, (_, d) in enumerate(basis):
        target = UnitPhase.of(-Fraction(d * (d - 1), 2) * B[i][i])
        roots.append(nth_root_solutions(target, d)[0].fraction)
    out = {}
    for cs in itertools.product(*(range(d) for _, d in basis)):
        ph = Fraction(0)
        for i, c in enumerate(cs):
            ph += c * roots[i] + Fraction(c * (c - 1), 2) * B[i][i]
            for j in range(i + 1, r):
                ph += c * cs[j] * B[i][j]
        el = A.zero
        for c, (g, _) in zip(cs, basis):
            el = A.add(el, A.scale(g, c))
        out[el] = UnitPhase.of(ph)
    return out


def construct_second_degree(H: Subgroup, phi: Homomorphism, method: str = "auto") -> SecondDegreeCharacter:
    """A character of second degree on ``H`` for ``phi``.

    ``method="generators"`` solves ``f(e_i)**d_i = conj<e_i, phi(e_i)>**(d_i(d_i-1)/2)``
    on the Smith generators (smallest root) and extends as a quadratic form;
    ``"weil"`` uses ``f(x) = <x, phi(x/2)>`` and needs ``|H|`` odd; ``"auto"``
    takes the latter whenever it applies.
    """
    _check_phi(H, phi)
    if method == "auto":
        method = "weil" if H.order % 2 else "generators"
    if method == "weil":
        if H.order % 2 == 0:
            raise ValueError("the halving formula needs |H| odd")
        vals = _weil(H, phi)
    elif method == "generators":
        vals = _by_generators(H, phi)
    else:
        raise ValueError(f"unknown method {method!r}")
    return SecondDegreeCharacter(H, phi, vals)


def _as_ints(f: SecondDegreeCharacter, M: int, elements: list) -> np.ndarray:
    return np.array([f.values[x].numerator * (M // f.values[x].denominator) for x in elements], dtype=np.int64)


def verify_second_degree(f: SecondDegreeCharacter, phi: Homomorphism | None = None) -> bool:
    """Exhaustive exact check of ``f(x+y) = f(x) f(y) <x, phi(y)>`` over ``H x H``."""
    phi = f.phi if phi is None else phi
    H = f.domain
    A = H.parent
    els = H.elements
    if set(f.values) != set(els):
        return False
    if f.values[A.zero]:
        return False
    e = A.exponent
    M = _lcm(e, *(p.denominator for p in f.values.values()))
    fv = _as_ints(f, M, els)
    pos = {x: k for k, x in enumerate(els)}
    idx = np.array([A.index(x) for x in els])
    lifts = np.array([A.index(phi(x)) for x in els])
    P = pairing_table(A)[np.ix_(idx, lifts)] * (M // e)
    S = np.array([[pos[A.add(x, y)] for y in els] for x in els])
    lhs = fv[S]
    rhs = fv[:, None] + fv[None, :] + P
    return bool(np.all((lhs - rhs) % M == 0))


def enumerate_second_degree(H: Subgroup, phi: Homomorphism, bound: int | None = 64) -> list:
    """All ``|H|`` characters of second degree for ``phi``: ``f0`` times each character of ``H``."""
    if bound is not None and H.order > bound:
        from .groups import BoundExceeded

        raise BoundExceeded(f"|H| = {H.order} exceeds the enumeration bound {bound}")
    f0 = construct_second_degree(H, phi)
    reps = transversal(H.parent, annihilator(H))
    return [f0.times_character(xi) for xi in reps]


@dataclass
class Subcharacter:
    """A character of second degree on ``H`` extended by zero to ``A``."""

    character: SecondDegreeCharacter
    normalized: bool = False

    @property
    def H(self) -> Subgroup:
        return self.character.domain

    @property
    def phi(self) -> Homomorphism:
        return self.character.phi

    @property
    def group(self) -> GroupSpec:
        return self.H.parent

    def __call__(self, x) -> complex:
        A = self.group
        x = A.reduce(x)
        if x not in self.H:
            return 0j
        s = 1 / math.sqrt(self.H.order) if self.normalized else 1.0
        return s * self.character(x).to_complex()

    def window(self) -> Window:
        scale = Fraction(1, self.H.order) if self.normalized else Fraction(1)
        return Window.from_exact(self.group, dict(self.character.values), scale)

    def as_normalized(self) -> Subcharacter:
        return Subcharacter(self.character, True)

    def triple(self) -> IsotropicTriple:
        return IsotropicTriple(self.H, annihilator(self.H), self.phi)


def subcharacter(H: Subgroup, phi: Homomorphism, normalized: bool = False, method: str = "auto") -> Subcharacter:
    return Subcharacter(construct_second_degree(H, phi, method), normalized)


def cyclic_subcharacter(N: int, b: int, p: int, xi: int = 0, normalized: bool = False) -> Subcharacter:
    """``M_xi h_{b,p}`` on ``Z_N``: support ``aZ_N`` (``a = N/b``) with phases
    ``p x^2 b (1 + b) / (2 N^2)`` at the representative ``x`` in ``[0, N)``."""
    if N < 1 or b < 1 or N % b:
        raise ValueError(f"b={b} must be a positive divisor of N={N}")
    if not 0 <= p < b:
        raise ValueError(f"p={p} must lie in [0, b)")
    A = GroupSpec((N,))
    a = N // b
    H = Subgroup.generated_by(A, [(a,)])
    vals = {}
    for m in range(b):
        x = m * a
        ph = UnitPhase(p * x * x * b * (1 + b), 2 * N * N) + UnitPhase(x * xi, N)
        vals[(x,)] = ph
    # phi(m a) = m p mod b Z_N, read off from G_h = {(m a, n b + m p)}
    images = [((g[0] // a) * p % b,) for g, _ in H.canonical_basis]
    phi = Homomorphism(H, A, images)
    return Subcharacter(SecondDegreeCharacter(H, phi, vals), normalized)


def ambiguity_closed_form(h: Subcharacter) -> PhaseSpaceFunction:
    """``V_h h(x, xi) = |H| conj(h(-x)) chi_G(x, xi)``, exactly."""
    A = h.group
    G = subgroup_from_triple(h.triple())
    n = A.order
    entries = {}
    for i in G.indices:
        x = A.element(i // n)
        entries[i] = ExactScalar(h.H.order, -h.character(A.neg(x)))
    s = Fraction(1, h.H.order) if h.normalized else Fraction(1)
    ex = CyclotomicArray.from_scalars((n, n), entries, s * s)
    return PhaseSpaceFunction(A, ex.to_complex(), ex, float(s * h.H.order))


def phase_space_character(h: Subcharacter, reflect: bool = False) -> SecondDegreeCharacter:
    """``(x, xi) -> conj h(x)`` on ``G`` (or ``conj h(-x)`` with ``reflect``), a
    character of second degree for ``phi'``."""
    A = h.group
    G = subgroup_from_triple(h.triple())
    k = A.rank
    vals = {}
    for z in G.elements:
        x = z[:k] if not reflect else A.neg(z[:k])
        vals[z] = -h.character(x)
    return SecondDegreeCharacter(G, induced_phi_prime(G), vals)
