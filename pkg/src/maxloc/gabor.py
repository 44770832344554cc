"""Gabor systems, orthonormal-basis tests and optimizer classification."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import NamedTuple

import numpy as np

from .groups import GroupSpec, Subgroup, annihilator, coset_labels, is_subgroup_indices, pairing_table, phase_space, sub_table, transversal
from .phase import UnitPhase
from .second_degree import Subcharacter, subcharacter
from .symplectic import (
    IsotropicTriple,
    generated_subgroup,
    is_isotropic,
    saturate,
    subgroup_from_triple,
    symplectic_pairing,
    triple_from_subgroup,
)
from .tf import (
    Window,
    ZeroWindow,
    ambiguity,
    index_point,
    point_index,
    split_point,
    stft,
    support,
    tf_shift,
    translate,
)

RANK_TOL = 1e-10


@dataclass
class GaborSystem:
    window: Window
    lattice: list

    def __post_init__(self):
        A = self.window.group
        self.lattice = [split_point(A, z) for z in self.lattice]

    def vectors(self) -> np.ndarray:
        """Rows ``pi(z) f`` for ``z`` in the lattice."""
        return synthesis_matrix(self.window, self.lattice)


def synthesis_matrix(f: Window, lattice) -> np.ndarray:
    A = f.group
    T = sub_table(A)
    P = pairing_table(A)
    xs = np.array([A.index(split_point(A, z)[0]) for z in lattice], dtype=np.int64)
    xis = np.array([A.index(split_point(A, z)[1]) for z in lattice], dtype=np.int64)
    shifted = f.values[T[:, xs].T]
    return shifted * np.exp(2j * np.pi * P[:, xis].T / A.exponent)


def numerical_rank(M: np.ndarray, tol: float = RANK_TOL) -> int:
    """Rank by Gaussian elimination with full pivoting."""
    M = np.array(M, dtype=complex)
    rank = 0
    rows, cols = M.shape
    for _ in range(min(rows, cols)):
        sub = np.abs(M[rank:, rank:])
        if sub.size == 0:
            break
        i, j = np.unravel_index(np.argmax(sub), sub.shape)
        if sub[i, j] <= tol:
            break
        i += rank
        j += rank
        M[[rank, i]] = M[[i, rank]]
        M[:, [rank, j]] = M[:, [j, rank]]
        pivot = M[rank, rank]
        M[rank + 1 :] -= np.outer(M[rank + 1 :, rank] / pivot, M[rank])
        rank += 1
    return rank


@dataclass
class BasisReport:
    is_basis: bool
    size: int
    rank: int
    gram_max_offdiag: float
    gram_max_diag_dev: float


def is_orthonormal_basis(sys: GaborSystem, tol: float = 1e-12) -> BasisReport:
    A = sys.window.group
    if not sys.lattice:
        raise ValueError("empty lattice")
    if abs(sys.window.norm() - 1) > 1e-9:
        raise ValueError("window must have unit norm")
    S = sys.vectors()
    gram = S @ S.conj().T
    off = gram - np.diag(np.diag(gram))
    max_off = float(np.abs(off).max()) if len(S) > 1 else 0.0
    max_diag = float(np.abs(np.diag(gram) - 1).max())
    rank = numerical_rank(S)
    ok = len(S) == A.order and rank == A.order and max_off <= tol and max_diag <= tol
    return BasisReport(ok, len(S), rank, max_off, max_diag)


class LocalizedBasis(NamedTuple):
    window: Window
    lattice: list
    subgroup: Subgroup
    subcharacter: Subcharacter


def build_max_localized_basis(t: IsotropicTriple) -> LocalizedBasis:
    """``|H|^{-1/2} h`` for a subcharacter of ``(H, phi)``, over a transversal of ``G``."""
    if not t.is_maximal:
        raise ValueError("triple is not maximal isotropic")
    A = t.group
    h = subcharacter(t.H, t.phi, normalized=True)
    G = subgroup_from_triple(t)
    P = phase_space(A)
    k = A.rank
    lattice = [(z[:k], z[k:]) for z in transversal(P, G)]
    return LocalizedBasis(h.window(), lattice, G, h)


def tiling_check(A: GroupSpec, lattice, G: Subgroup) -> bool:
    """Do the cosets ``z + G`` for ``z`` in the lattice partition ``A x A^``?"""
    P = phase_space(A)
    labels = coset_labels(P, G)
    got = [int(labels[point_index(A, z)]) for z in lattice]
    return len(set(got)) == len(got) == P.order // G.order


@dataclass
class ClassificationVerdict:
    optimizer: bool
    support_measure: Fraction
    failed: str | None = None
    c: complex | None = None
    x0: tuple | None = None
    h: Subcharacter | None = None
    triple: IsotropicTriple | None = None
    subgroup: Subgroup | None = None
    shift: tuple | None = None
    residual: float | None = None

    @property
    def kind(self) -> str:
        return "Optimizer" if self.optimizer else "NotOptimizer"

    def reconstruct(self) -> Window:
        return translate(self.h.window(), self.x0).scaled(self.c)


def _not(measure, why) -> ClassificationVerdict:
    return ClassificationVerdict(False, Fraction(measure), why)


def _character_table(A: GroupSpec, G: Subgroup) -> np.ndarray:
    """``C[(y, eta), z] = <x, eta> conj<y, xi>`` (as phases) for ``z = (x, xi)`` in ``G``."""
    n = A.order
    P = pairing_table(A)
    g = np.array(G.indices, dtype=np.int64)
    gx, gxi = g // n, g % n
    ys, etas = np.divmod(np.arange(n * n), n)
    return (P[gx[None, :], etas[:, None]] - P[ys[:, None], gxi[None, :]]) % A.exponent


def classify_optimizer(f: Window, tol: float | None = None) -> ClassificationVerdict:
    """Decide whether the ambiguity support of ``f`` has measure one, and if so
    recover ``f = c T_{x0} h`` with ``h`` a normalized subcharacter of second degree.

    The witness is found as in the classification proof: the triple of
    ``G_f`` gives a reference subcharacter ``h0``; the quotient of ``V_f f`` by
    ``|H|^{-1} V_{h0} h0`` on ``G_f`` is a character ``<x,eta> conj<y,xi>``,
    and ``f`` is a multiple of ``pi(y, eta) h0``.
    """
    n2 = float(f.norm_sq())
    if n2 == 0:
        raise ZeroWindow("cannot classify the zero window")
    A = f.group
    n = A.order
    V = ambiguity(f)
    S = support(V, tol)
    if S.measure != 1:
        return _not(S.measure, "support measure")
    idx = sorted(S.indices)
    P = phase_space(A)
    if not is_subgroup_indices(P, idx):
        return _not(S.measure, "support is not a subgroup")
    G = Subgroup(P, idx)
    if not is_isotropic(G):
        return _not(S.measure, "support is not isotropic")
    t = triple_from_subgroup(G)
    if t.K != annihilator(t.H):
        return _not(S.measure, "support is not maximal isotropic")
    h0 = subcharacter(t.H, t.phi, normalized=True)
    # |H|^{-1} V_{h0} h0 on G is conj h0(-x); compare with V_f f / ||f||^2
    g = np.array(G.indices, dtype=np.int64)
    ref = np.array([(-h0.character(A.neg(A.element(int(i) // n)))).to_complex() for i in g])
    ratio = V.values.ravel()[g] / n2 / ref
    chars = np.exp(2j * np.pi * _character_table(A, G) / A.exponent)
    err = np.abs(chars - ratio[None, :]).max(axis=1)
    best = int(np.argmin(err))
    if err[best] > 1e-6:
        return _not(S.measure, "no character matches the ambiguity phase")
    y, eta = index_point(A, best)
    base = tf_shift(h0.window(), (y, eta))
    c = complex(np.vdot(base.values, f.values))
    h = Subcharacter(h0.character.times_character(eta), True)
    c_fold = c * UnitPhase.of(_pair_frac(A, y, eta)).to_complex()
    verdict = ClassificationVerdict(True, S.measure, None, c_fold, y, h, t, G, (y, eta))
    verdict.residual = float(np.linalg.norm(f.values - verdict.reconstruct().values))
    return verdict


def _pair_frac(A, x, xi) -> Fraction:
    from .groups import pairing

    return pairing(A, x, xi).fraction


@dataclass
class PairVerdict:
    optimizer: bool
    support_measure: Fraction
    failed: str | None = None
    h: Subcharacter | None = None
    c1: complex | None = None
    z1: tuple | None = None
    c2: complex | None = None
    z2: tuple | None = None
    subgroup: Subgroup | None = None
    coset_ok: bool | None = None
    residual_f: float | None = None
    residual_g: float | None = None

    @property
    def kind(self) -> str:
        return "Optimizer" if self.optimizer else "NotOptimizer"

    @property
    def residual(self) -> float:
        return max(self.residual_f, self.residual_g)


def classify_pair(f: Window, g: Window, tol: float | None = None) -> PairVerdict:
    """Two-window version: ``|supp V_g f| = 1`` iff ``f = c1 pi(z1) h``, ``g = c2 pi(z2) h``."""
    if f.norm_sq() == 0 or g.norm_sq() == 0:
        raise ZeroWindow("cannot classify a pair with a zero window")
    A = f.group
    V = stft(f, g)
    S = support(V, tol)
    if S.measure != 1:
        return PairVerdict(False, S.measure, "support measure")
    z0 = min(S.indices)
    y0, xi0 = index_point(A, z0)
    c = complex(V.values.ravel()[z0]) / float(g.norm_sq())
    vg = classify_optimizer(g, tol)
    if not vg.optimizer:
        return PairVerdict(False, S.measure, "g is not maximally localized")
    P = phase_space(A)
    shifted = {int(i) for i in _translate_indices(P, z0, vg.subgroup.indices)}
    coset_ok = shifted == set(S.indices)
    x0 = vg.x0
    z1 = (A.add(y0, x0), xi0)
    z2 = (x0, A.zero)
    c1, c2 = c * vg.c, vg.c
    hw = vg.h.window()
    rf = float(np.linalg.norm(f.values - c1 * tf_shift(hw, z1).values))
    rg = float(np.linalg.norm(g.values - c2 * tf_shift(hw, z2).values))
    return PairVerdict(True, S.measure, None, vg.h, c1, z1, c2, z2, vg.subgroup, coset_ok, rf, rg)


def _translate_indices(P: GroupSpec, z: int, indices) -> np.ndarray:
    from .groups import coords_table, indices_of

    C = coords_table(P)
    return indices_of(P, C[np.array(indices, dtype=np.int64)] + C[z])


@dataclass
class EigenResult:
    success: bool
    window: Window | None = None
    lattice: list | None = None
    subgroup: Subgroup | None = None
    eigenvalues: dict = field(default_factory=dict)
    residual: float | None = None
    witness: tuple | None = None  # (z, w, sigma phase) for a non-commuting pair


def common_eigenfunction_basis(A: GroupSpec, points) -> EigenResult:
    """A maximally localized Gabor basis of common eigenfunctions of ``pi(z)``, ``z`` in ``points``,
    or a pair with nontrivial symplectic phase when the operators do not commute."""
    pts = [split_point(A, z) for z in points]
    for i, z in enumerate(pts):
        for w in pts[i + 1 :]:
            s = symplectic_pairing(A, z, w)
            if s:
                return EigenResult(False, witness=(z, w, s))
    G = saturate(generated_subgroup(A, pts))
    basis = build_max_localized_basis(triple_from_subgroup(G))
    f = basis.window
    vecs = synthesis_matrix(f, basis.lattice)
    worst = 0.0
    eig = {}
    for z in pts:
        for k, v in enumerate(vecs):
            w = Window(A, v)
            pv = tf_shift(w, z).values
            lam = complex(np.vdot(v, pv))
            worst = max(worst, float(np.linalg.norm(pv - lam * v)), abs(abs(lam) - 1))
            if k == 0:
                eig[z] = lam
    return EigenResult(True, f, basis.lattice, G, eig, worst)
