"""Finite abelian groups ``Z_n1 x ... x Z_nk``, their duals and subgroups.

Elements are tuples of residues.  The dual group uses the same coordinates,
with ``<x, xi> = exp(2 pi i sum_j x_j xi_j / n_j)``.  Haar measure is counting
measure on the group and counting measure divided by ``|A|`` on the dual, so
that ``|H| * |H^perp| = 1`` for every subgroup ``H``.
"""

from __future__ import annotations

import functools
import itertools
import math
import re
from dataclasses import dataclass
from fractions import Fraction

import numpy as np
from sympy import Matrix, ZZ
from sympy.matrices.normalforms import smith_normal_decomp

from .phase import UnitPhase

Element = tuple

DEFAULT_MAX_ORDER = 64


class GroupMismatch(ValueError):
    pass


class BoundExceeded(RuntimeError):
    """An enumeration was asked for a group beyond the configured size."""


@dataclass(frozen=True)
class GroupSpec:
    cyclic_orders: tuple

    def __post_init__(self):
        orders = tuple(int(n) for n in self.cyclic_orders)
        if not orders or any(n < 1 for n in orders):
            raise ValueError(f"invalid cyclic orders {self.cyclic_orders!r}")
        object.__setattr__(self, "cyclic_orders", orders)

    @property
    def order(self) -> int:
        return math.prod(self.cyclic_orders)

    @property
    def rank(self) -> int:
        return len(self.cyclic_orders)

    @property
    def exponent(self) -> int:
        return math.lcm(*self.cyclic_orders)

    @property
    def haar_weight_primal(self) -> Fraction:
        return Fraction(1)

    @property
    def haar_weight_dual(self) -> Fraction:
        return Fraction(1, self.order)

    @property
    def zero(self) -> Element:
        return (0,) * self.rank

    def __str__(self):
        return "x".join(f"Z{n}" for n in self.cyclic_orders)

    # element arithmetic

    def reduce(self, coords) -> Element:
        if len(coords) != self.rank:
            raise GroupMismatch(f"{coords!r} is not an element of {self}")
        return tuple(int(c) % n for c, n in zip(coords, self.cyclic_orders))

    def add(self, a, b) -> Element:
        return tuple((x + y) % n for x, y, n in zip(a, b, self.cyclic_orders))

    def neg(self, a) -> Element:
        return tuple(-x % n for x, n in zip(a, self.cyclic_orders))

    def sub(self, a, b) -> Element:
        return tuple((x - y) % n for x, y, n in zip(a, b, self.cyclic_orders))

    def scale(self, a, k: int) -> Element:
        return tuple(x * k % n for x, n in zip(a, self.cyclic_orders))

    def element_order(self, a) -> int:
        return math.lcm(*(n // math.gcd(x, n) for x, n in zip(a, self.cyclic_orders)))

    @property
    def elements(self) -> list:
        """All elements, lexicographic (equal to index order)."""
        return list(itertools.product(*(range(n) for n in self.cyclic_orders)))

    def index(self, a) -> int:
        i = 0
        for x, n in zip(a, self.cyclic_orders):
            i = i * n + x
        return i

    def element(self, i: int) -> Element:
        out = []
        for n in reversed(self.cyclic_orders):
            i, r = divmod(i, n)
            out.append(r)
        return tuple(reversed(out))

    def check_bound(self, bound: int | None):
        if bound is not None and self.order > bound:
            raise BoundExceeded(f"|{self}| = {self.order} exceeds the enumeration bound {bound}")


def parse_group(text: str) -> GroupSpec:
    """Parse ``"Z4"``, ``"Z2xZ4"``, ``"z3xz3xz2"``; factor order is kept as given."""
    parts = text.strip().lower().split("x")
    orders = []
    for part in parts:
        m = re.fullmatch(r"z(\d+)", part.strip())
        if not m:
            raise ValueError(f"cannot parse group spec {text!r}")
        orders.append(int(m.group(1)))
    return GroupSpec(tuple(orders))


def phase_space(A: GroupSpec) -> GroupSpec:
    """``A x A^`` as a group; ``(x, xi)`` has index ``index(x) * |A| + index(xi)``."""
    return GroupSpec(A.cyclic_orders + A.cyclic_orders)


@functools.lru_cache(maxsize=64)
def coords_table(A: GroupSpec) -> np.ndarray:
    """``(|A|, rank)`` array of element coordinates in index order."""
    grids = np.meshgrid(*(np.arange(n) for n in A.cyclic_orders), indexing="ij")
    return np.stack([g.ravel() for g in grids], axis=-1).astype(np.int64)


def _radix(A: GroupSpec) -> np.ndarray:
    w = np.ones(A.rank, dtype=np.int64)
    for j in range(A.rank - 2, -1, -1):
        w[j] = w[j + 1] * A.cyclic_orders[j + 1]
    return w


def indices_of(A: GroupSpec, coords: np.ndarray) -> np.ndarray:
    """Vectorised :meth:`GroupSpec.index` on reduced or unreduced coordinates."""
    n = np.array(A.cyclic_orders, dtype=np.int64)
    return (np.asarray(coords) % n) @ _radix(A)


@functools.lru_cache(maxsize=64)
def sub_table(A: GroupSpec) -> np.ndarray:
    """``T[y, x] = index(y - x)``."""
    C = coords_table(A)
    return indices_of(A, C[:, None, :] - C[None, :, :])


@functools.lru_cache(maxsize=64)
def add_table(A: GroupSpec) -> np.ndarray:
    C = coords_table(A)
    return indices_of(A, C[:, None, :] + C[None, :, :])


@functools.lru_cache(maxsize=64)
def pairing_table(A: GroupSpec) -> np.ndarray:
    """``P[x, xi]`` = pairing phase in units of ``1/exponent``."""
    C = coords_table(A)
    e = A.exponent
    w = np.array([e // n for n in A.cyclic_orders], dtype=np.int64)
    return ((C * w) @ C.T) % e


def pairing(A: GroupSpec, x, xi) -> UnitPhase:
    """Phase of ``<x, xi>``: ``sum_j x_j xi_j / n_j mod 1``."""
    if len(x) != A.rank or len(xi) != A.rank:
        raise GroupMismatch("pairing needs two elements of the same group")
    e = A.exponent
    return UnitPhase(sum(a * b * (e // n) for a, b, n in zip(x, xi, A.cyclic_orders)), e)


# subgroups


def _span_indices(A: GroupSpec, gens) -> np.ndarray:
    C = coords_table(A)
    current = np.array([0], dtype=np.int64)
    for g in gens:
        g = np.array(A.reduce(g), dtype=np.int64)
        k = A.element_order(tuple(g))
        multiples = np.arange(k)[:, None] * g[None, :]
        cyc = indices_of(A, multiples)
        if np.isin(cyc, current).all():
            continue
        current = np.unique(indices_of(A, C[current][:, None, :] + C[cyc][None, :, :]).ravel())
    return current


def _smith(m: list) -> tuple:
    D, S, T = smith_normal_decomp(Matrix(m), domain=ZZ)
    return D, S, T


class Subgroup:
    """A subgroup of ``parent``, stored by its sorted element indices.

    Generators and the canonical (Smith) basis are derived from the element
    set only, so equal subgroups always carry identical bases.
    """

    def __init__(self, parent: GroupSpec, indices):
        self.parent = parent
        self.indices = tuple(sorted(int(i) for i in indices))
        self._index_set = frozenset(self.indices)

    @classmethod
    def generated_by(cls, parent: GroupSpec, gens) -> Subgroup:
        return cls(parent, _span_indices(parent, list(gens)))

    @classmethod
    def from_elements(cls, parent: GroupSpec, elements, check: bool = True) -> Subgroup:
        idx = [parent.index(parent.reduce(e)) for e in elements]
        if check and not is_subgroup_indices(parent, idx):
            raise ValueError("element set is not a subgroup")
        return cls(parent, set(idx))

    @classmethod
    def whole(cls, parent: GroupSpec) -> Subgroup:
        return cls(parent, range(parent.order))

    @classmethod
    def trivial(cls, parent: GroupSpec) -> Subgroup:
        return cls(parent, [0])

    @property
    def order(self) -> int:
        return len(self.indices)

    def __len__(self):
        return len(self.indices)

    def __eq__(self, other):
        return isinstance(other, Subgroup) and self.parent == other.parent and self.indices == other.indices

    def __hash__(self):
        return hash((self.parent, self.indices))

    def __repr__(self):
        return f"Subgroup({self.parent}, order={self.order}, gens={self.generators})"

    def __contains__(self, el) -> bool:
        return self.parent.index(self.parent.reduce(el)) in self._index_set

    def contains_index(self, i: int) -> bool:
        return i in self._index_set

    def issubset(self, other: Subgroup) -> bool:
        return self._index_set <= other._index_set

    @functools.cached_property
    def elements(self) -> list:
        return [self.parent.element(i) for i in self.indices]

    @functools.cached_property
    def generators(self) -> tuple:
        """Greedy lexicographic generating set."""
        gens, span = [], {0}
        for i in self.indices:
            if i not in span:
                gens.append(self.parent.element(i))
                span = set(_span_indices(self.parent, gens).tolist())
                if len(span) == self.order:
                    break
        return tuple(gens)

    @functools.cached_property
    def canonical_basis(self) -> tuple:
        return smith_canonicalize(self)

    @property
    def invariant_factors(self) -> tuple:
        return tuple(d for _, d in self.canonical_basis)

    @functools.cached_property
    def basis_coordinates(self) -> dict:
        """Map element -> coefficient tuple in the canonical basis."""
        A = self.parent
        basis = self.canonical_basis
        out = {}
        for cs in itertools.product(*(range(d) for _, d in basis)):
            el = A.zero
            for c, (g, _) in zip(cs, basis):
                el = A.add(el, A.scale(g, c))
            out[el] = cs
        return out


def is_subgroup_indices(A: GroupSpec, idx) -> bool:
    idx = np.unique(np.asarray(list(idx), dtype=np.int64))
    if idx.size == 0 or idx[0] != 0:
        return False
    C = coords_table(A)
    sums = indices_of(A, C[idx][:, None, :] - C[idx][None, :, :])
    return bool(np.isin(sums, idx).all())


def smith_canonicalize(S: Subgroup) -> tuple:
    """Independent generators ``(g_i, d_i)`` with ``d_1 | d_2 | ...`` spanning ``S``.

    ``S`` is ``L / D Z^k`` with ``L`` the preimage lattice of ``S`` in ``Z^k``
    and ``D = diag(n_j)``.  A first Smith decomposition gives a basis of ``L``;
    a second one diagonalises ``D`` in that basis.
    """
    A = S.parent
    k = A.rank
    gens = list(S.generators)
    if not gens:
        return ()
    cols = [list(g) for g in gens] + [[A.cyclic_orders[j] if i == j else 0 for i in range(k)] for j in range(k)]
    Mx = Matrix(k, len(cols), lambda i, j: cols[j][i])
    D1, P1, Q1 = _smith(Mx)
    delta = Matrix.diag(*[D1[i, i] for i in range(k)])
    B = P1.inv() * delta  # columns: basis of L
    C = B.inv() * Matrix.diag(*A.cyclic_orders)
    D2, P2, Q2 = _smith(C)
    G = B * P2.inv()
    out = []
    for i in range(k):
        d = abs(int(D2[i, i]))
        if d > 1:
            out.append((A.reduce([int(G[r, i]) for r in range(k)]), d))
    out.sort(key=lambda t: t[1])
    return tuple(out)


def annihilator(H: Subgroup) -> Subgroup:
    """``H^perp`` inside the dual group (same coordinates as ``H.parent``)."""
    A = H.parent
    P = pairing_table(A)
    gen_idx = [A.index(g) for g in H.generators]
    if not gen_idx:
        return Subgroup.whole(A)
    mask = np.all(P[gen_idx, :] == 0, axis=0)
    return Subgroup(A, np.nonzero(mask)[0])


def measure_dual(K: Subgroup) -> Fraction:
    return K.order * K.parent.haar_weight_dual


def enumerate_subgroups(A: GroupSpec, bound: int | None = None) -> list:
    """Every subgroup once, sorted by ``(order, element list)``."""
    A.check_bound(bound)
    C = coords_table(A)
    cyclic = {}
    for i in range(A.order):
        g = C[i]
        k = A.element_order(tuple(g.tolist()))
        key = tuple(np.unique(indices_of(A, np.arange(k)[:, None] * g[None, :])).tolist())
        cyclic.setdefault(key, None)
    cyclic_sets = [np.array(c, dtype=np.int64) for c in cyclic]
    table = add_table(A) if A.order <= 4096 else None
    seen = {(0,)}
    frontier = [(0,)]
    while frontier:
        nxt = []
        for s in frontier:
            s_arr = np.array(s, dtype=np.int64)
            s_set = set(s)
            for c in cyclic_sets:
                if all(int(v) in s_set for v in c):
                    continue
                if table is not None:
                    joined = np.unique(table[np.ix_(s_arr, c)].ravel())
                else:
                    joined = np.unique(indices_of(A, C[s_arr][:, None, :] + C[c][None, :, :]).ravel())
                key = tuple(joined.tolist())
                if key not in seen:
                    seen.add(key)
                    nxt.append(key)
        frontier = nxt
    return [Subgroup(A, s) for s in sorted(seen, key=lambda s: (len(s), s))]


def transversal(A: GroupSpec, S: Subgroup) -> list:
    """Lexicographically minimal representative of each coset of ``S``."""
    if S.parent != A:
        raise GroupMismatch("subgroup lives in a different group")
    C = coords_table(A)
    sub = np.array(S.indices, dtype=np.int64)
    covered = np.zeros(A.order, dtype=bool)
    reps = []
    for i in range(A.order):
        if covered[i]:
            continue
        reps.append(A.element(i))
        covered[indices_of(A, C[i][None, :] + C[sub])] = True
    return reps


def coset_labels(A: GroupSpec, S: Subgroup) -> np.ndarray:
    """Index of the minimal element of ``z + S`` for every ``z``."""
    C = coords_table(A)
    sub = C[np.array(S.indices, dtype=np.int64)]
    return indices_of(A, C[:, None, :] + sub[None, :, :]).min(axis=1)


class Homomorphism:
    """A homomorphism out of ``source`` given by one image per canonical generator.

    Images live in ``target_parent``; for maps into a quotient ``A^/K`` the
    images are lifts and the coset is ``image + K``.
    """

    def __init__(self, source: Subgroup, target_parent: GroupSpec, images):
        self.source = source
        self.target_parent = target_parent
        self.images = tuple(target_parent.reduce(v) for v in images)
        if len(self.images) != len(source.canonical_basis):
            raise ValueError("need one image per canonical generator")

    def __call__(self, x) -> Element:
        T = self.target_parent
        cs = self.source.basis_coordinates[self.source.parent.reduce(x)]
        out = T.zero
        for c, v in zip(cs, self.images):
            out = T.add(out, T.scale(v, c))
        return out

    def is_well_defined(self, modulo: Subgroup | None = None) -> bool:
        """``d_i * image_i`` vanishes (in the target, or modulo ``modulo``)."""
        T = self.target_parent
        for (_, d), v in zip(self.source.canonical_basis, self.images):
            w = T.scale(v, d)
            if modulo is None:
                if w != T.zero:
                    return False
            elif w not in modulo:
                return False
        return True

    def __repr__(self):
        return f"Homomorphism(images={self.images})"


def hom_pairing_matrix(phi: Homomorphism) -> list:
    """``B[i][j] = <e_j, phi(e_i)>`` over the canonical generators of the source."""
    A = phi.source.parent
    basis = phi.source.canonical_basis
    return [[pairing(A, e, v) for e, _ in basis] for v in phi.images]


def is_symmetric(phi: Homomorphism) -> bool:
    B = hom_pairing_matrix(phi)
    return all(B[i][j] == B[j][i] for i in range(len(B)) for j in range(i))


def dual_lifts(H: Subgroup) -> dict:
    """Map restriction signature ``(<e_j, xi>)_j`` -> lexicographically minimal ``xi``."""
    A = H.parent
    P = pairing_table(A)
    e = A.exponent
    gen_idx = [A.index(g) for g, _ in H.canonical_basis]
    out = {}
    for xi in range(A.order):
        sig = tuple(UnitPhase(int(P[g, xi]), e) for g in gen_idx)
        out.setdefault(sig, A.element(xi))
    return out


def enumerate_symmetric_homs(H: Subgroup, bound: int | None = DEFAULT_MAX_ORDER) -> list:
    """All symmetric homomorphisms ``H -> H^``, as lifts into the dual group.

    A homomorphism is determined by the matrix ``B[i][j] = <e_j, phi(e_i)>``
    whose entries lie in ``(1/gcd(d_i, d_j)) Z / Z``; symmetric ones are the
    symmetric matrices.  Lifts are lexicographically minimal mod ``H^perp``.
    """
    if bound is not None and H.order > bound:
        raise BoundExceeded(f"|H| = {H.order} exceeds the enumeration bound {bound}")
    A = H.parent
    basis = H.canonical_basis
    r = len(basis)
    if r == 0:
        return [Homomorphism(H, A, [])]
    lifts = dual_lifts(H)
    pairs = [(i, j) for i in range(r) for j in range(i, r)]
    ranges = [range(math.gcd(basis[i][1], basis[j][1])) for i, j in pairs]
    out = []
    for choice in itertools.product(*ranges):
        B = [[None] * r for _ in range(r)]
        for (i, j), c in zip(pairs, choice):
            p = UnitPhase(c, math.gcd(basis[i][1], basis[j][1]))
            B[i][j] = B[j][i] = p
        images = [lifts[tuple(B[i])] for i in range(r)]
        out.append(Homomorphism(H, A, images))
    return out
