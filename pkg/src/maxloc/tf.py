"""Windows on ``A``, functions on ``A x A^``, and the short-time Fourier transform.

Conventions::

    T_x f(y)      = f(y - x)
    M_xi f(y)     = <y, xi> f(y)
    pi(x, xi)     = M_xi T_x
    V_g f(x, xi)  = sum_y conj<y, xi> f(y) conj g(y - x)

Norms on ``A`` use counting measure; every point of ``A x A^`` weighs
``1/|A|``.  Windows built from :class:`~maxloc.phase.ExactScalar` data keep an
exact backing, and transforms of two exact windows are exact as well.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .cyclotomic import CyclotomicArray, _lcm
from .groups import (
    GroupMismatch,
    GroupSpec,
    coords_table,
    indices_of,
    pairing,
    pairing_table,
    sub_table,
)
from .phase import ExactScalar, UnitPhase

DEFAULT_TOL = 1e-10


class ZeroWindow(ValueError):
    pass


@dataclass(frozen=True)
class ExactData:
    """Support indices with rational magnitudes and phases, times ``sqrt(scale_sq)``."""

    support: tuple
    mags: tuple
    phases: tuple
    scale_sq: Fraction = Fraction(1)

    def __post_init__(self):
        if not (len(self.support) == len(self.mags) == len(self.phases)):
            raise ValueError("support, mags and phases must have equal length")


class Window:
    """A function on ``A``, dense complex, optionally with an exact backing."""

    def __init__(self, group: GroupSpec, values=None, exact: ExactData | None = None):
        self.group = group
        self.exact = exact
        if exact is not None:
            vals = np.zeros(group.order, dtype=complex)
            s = math.sqrt(exact.scale_sq)
            for i, m, p in zip(exact.support, exact.mags, exact.phases):
                vals[i] = s * float(m) * p.to_complex()
            self.values = vals
        else:
            vals = np.asarray(values, dtype=complex).ravel()
            if vals.shape != (group.order,):
                raise GroupMismatch(f"expected {group.order} values for {group}, got {vals.size}")
            self.values = vals
        self.values.setflags(write=False)

    @classmethod
    def from_values(cls, group: GroupSpec, values) -> Window:
        return cls(group, values)

    @classmethod
    def from_exact(cls, group: GroupSpec, entries: dict, scale_sq=Fraction(1)) -> Window:
        """``entries`` maps elements (or indices) to ExactScalar / UnitPhase values."""
        items = []
        for key, val in entries.items():
            i = key if isinstance(key, (int, np.integer)) else group.index(group.reduce(key))
            if isinstance(val, UnitPhase):
                val = ExactScalar(Fraction(1), val)
            if val.magnitude != 0:
                items.append((int(i), val))
        items.sort()
        data = ExactData(
            tuple(i for i, _ in items),
            tuple(v.magnitude for _, v in items),
            tuple(v.phase for _, v in items),
            Fraction(scale_sq),
        )
        return cls(group, exact=data)

    @classmethod
    def delta(cls, group: GroupSpec, x=None) -> Window:
        x = group.zero if x is None else x
        return cls.from_exact(group, {group.reduce(x): UnitPhase()})

    @classmethod
    def indicator(cls, group: GroupSpec, elements, scale_sq=Fraction(1)) -> Window:
        return cls.from_exact(group, {group.reduce(e): UnitPhase() for e in elements}, scale_sq)

    @property
    def is_exact(self) -> bool:
        return self.exact is not None

    def norm_sq(self):
        if self.exact is not None:
            return self.exact.scale_sq * sum(m * m for m in self.exact.mags)
        return float(np.vdot(self.values, self.values).real)

    def norm(self) -> float:
        return math.sqrt(self.norm_sq())

    def floating(self) -> Window:
        return Window(self.group, self.values)

    def scaled(self, c: complex) -> Window:
        return Window(self.group, c * self.values)

    def normalized(self) -> Window:
        n2 = self.norm_sq()
        if n2 == 0:
            raise ZeroWindow("cannot normalise the zero window")
        if self.exact is not None:
            e = self.exact
            return Window(self.group, exact=ExactData(e.support, e.mags, e.phases, e.scale_sq / n2))
        return Window(self.group, self.values / math.sqrt(n2))

    def __add__(self, other: Window) -> Window:
        _same_group(self, other)
        return Window(self.group, self.values + other.values)

    def __sub__(self, other: Window) -> Window:
        _same_group(self, other)
        return Window(self.group, self.values - other.values)

    def __repr__(self):
        kind = "exact" if self.is_exact else "floating"
        return f"Window({self.group}, {kind}, norm={self.norm():.6g})"


def _same_group(f: Window, g: Window):
    if f.group != g.group:
        raise GroupMismatch(f"windows live on {f.group} and {g.group}")


def split_point(A: GroupSpec, z) -> tuple:
    """Accept ``(x, xi)`` as a pair of elements / ints, or a flat coordinate tuple."""
    z = tuple(z)
    if len(z) == 2 * A.rank and all(isinstance(c, (int, np.integer)) for c in z):
        return A.reduce(z[: A.rank]), A.reduce(z[A.rank :])
    if len(z) == 2:
        x, xi = z
        x = (x,) if isinstance(x, (int, np.integer)) else tuple(x)
        xi = (xi,) if isinstance(xi, (int, np.integer)) else tuple(xi)
        return A.reduce(x), A.reduce(xi)
    raise GroupMismatch(f"{z!r} is not a point of {A} x {A}^")


def point_index(A: GroupSpec, z) -> int:
    x, xi = split_point(A, z)
    return A.index(x) * A.order + A.index(xi)


def index_point(A: GroupSpec, i: int) -> tuple:
    return A.element(i // A.order), A.element(i % A.order)


def translate(f: Window, x) -> Window:
    A = f.group
    x = A.reduce(x if not isinstance(x, (int, np.integer)) else (x,))
    xi = A.index(x)
    if f.exact is not None:
        e = f.exact
        C = coords_table(A)
        new = indices_of(A, C[list(e.support)] + np.array(x)) if e.support else []
        return Window.from_exact(
            A, {int(i): ExactScalar(m, p) for i, m, p in zip(new, e.mags, e.phases)}, e.scale_sq
        )
    return Window(A, f.values[sub_table(A)[:, xi]])


def modulate(f: Window, xi) -> Window:
    A = f.group
    xi = A.reduce(xi if not isinstance(xi, (int, np.integer)) else (xi,))
    if f.exact is not None:
        e = f.exact
        entries = {
            i: ExactScalar(m, p + pairing(A, A.element(i), xi)) for i, m, p in zip(e.support, e.mags, e.phases)
        }
        return Window.from_exact(A, entries, e.scale_sq)
    P = pairing_table(A)[:, A.index(xi)]
    return Window(A, f.values * np.exp(2j * np.pi * P / A.exponent))


def tf_shift(f: Window, z) -> Window:
    x, xi = split_point(f.group, z)
    return modulate(translate(f, x), xi)


@dataclass
class PhaseSpaceFunction:
    """Values on ``A x A^`` as an ``(|A|, |A|)`` array indexed ``[x, xi]``."""

    group: GroupSpec
    values: np.ndarray
    exact: CyclotomicArray | None = None
    ref: float = 1.0
    measure_weight: Fraction = field(init=False)

    def __post_init__(self):
        self.measure_weight = self.group.haar_weight_primal * self.group.haar_weight_dual

    def __call__(self, z) -> complex:
        x, xi = split_point(self.group, z)
        return complex(self.values[self.group.index(x), self.group.index(xi)])

    @property
    def is_exact(self) -> bool:
        return self.exact is not None


@dataclass(frozen=True)
class SupportSet:
    """Points of ``A x A^`` (flat indices) with their Haar measure."""

    group: GroupSpec
    indices: frozenset
    measure: Fraction
    degenerate: bool = False

    def __contains__(self, z) -> bool:
        return point_index(self.group, z) in self.indices

    def __len__(self):
        return len(self.indices)

    def points(self) -> list:
        return [index_point(self.group, i) for i in sorted(self.indices)]


def _exact_stft(f: Window, g: Window) -> CyclotomicArray:
    A = f.group
    n, e = A.order, A.exponent
    ef, eg = f.exact, g.exact
    M = _lcm(e, *(p.denominator for p in ef.phases + eg.phases))
    Df = _lcm(1, *(m.denominator for m in ef.mags))
    Dg = _lcm(1, *(m.denominator for m in eg.mags))
    pf = np.zeros(n, dtype=np.int64)
    pg = np.zeros(n, dtype=np.int64)
    wf = np.zeros(n, dtype=np.int64)
    wg = np.zeros(n, dtype=np.int64)
    for i, m, p in zip(ef.support, ef.mags, ef.phases):
        pf[i] = p.numerator * (M // p.denominator)
        wf[i] = int(m * Df)
    for i, m, p in zip(eg.support, eg.mags, eg.phases):
        pg[i] = p.numerator * (M // p.denominator)
        wg[i] = int(m * Dg)
    P = pairing_table(A) * (M // e)
    T = sub_table(A)
    supp_f = np.array(ef.support, dtype=np.int64)
    raw = np.zeros((n, n, M), dtype=np.int64)
    xis = np.arange(n)
    for x in range(n):
        if supp_f.size == 0:
            break
        shifted = T[supp_f, x]
        keep = wg[shifted] != 0
        ys, ym = supp_f[keep], shifted[keep]
        if ys.size == 0:
            continue
        expo = (pf[ys][None, :] - pg[ym][None, :] - P[ys][:, xis].T) % M
        w = np.broadcast_to(wf[ys] * wg[ym], expo.shape)
        flat = (xis[:, None] * M + expo).ravel()
        raw[x] = np.bincount(flat, weights=w.ravel().astype(float), minlength=n * M).reshape(n, M).round().astype(
            np.int64
        )
    return CyclotomicArray.from_raw(M, raw, Df * Dg, ef.scale_sq * eg.scale_sq)


def stft(f: Window, g: Window, exact: bool | None = None) -> PhaseSpaceFunction:
    """``V_g f``.  Exact when both windows are exact (unless ``exact=False``)."""
    _same_group(f, g)
    A = f.group
    ref = math.sqrt(float(f.norm_sq()) * float(g.norm_sq()))
    use_exact = f.is_exact and g.is_exact if exact is None else exact
    if use_exact:
        if not (f.is_exact and g.is_exact):
            raise ValueError("exact STFT needs two exact windows")
        ex = _exact_stft(f, g)
        return PhaseSpaceFunction(A, ex.to_complex(), ex, ref)
    T = sub_table(A)
    Q = f.values[None, :] * np.conj(g.values)[T.T]
    E = np.exp(-2j * np.pi * pairing_table(A) / A.exponent)
    return PhaseSpaceFunction(A, Q @ E, None, ref)


def ambiguity(f: Window, exact: bool | None = None) -> PhaseSpaceFunction:
    return stft(f, f, exact)


def support(F: PhaseSpaceFunction, tol: float | None = None) -> SupportSet:
    """Points where ``F`` does not vanish.

    Exact functions are tested exactly; floating ones against ``tol * F.ref``
    (``F.ref`` is ``||f|| ||g||`` for an STFT).
    """
    A = F.group
    if F.exact is not None and tol in (None, 0):
        mask = F.exact.nonzero()
    else:
        tol = DEFAULT_TOL if tol is None else tol
        if tol < 0:
            raise ValueError("tolerance must be nonnegative")
        mask = np.abs(F.values) > tol * F.ref
    idx = np.flatnonzero(mask.ravel())
    return SupportSet(A, frozenset(idx.tolist()), Fraction(idx.size, A.order), idx.size == 0)


def lp_norm(F: PhaseSpaceFunction, p: float) -> float:
    if p <= 0:
        raise ValueError("p must be positive")
    s = float(np.sum(np.abs(F.values) ** p)) * float(F.measure_weight)
    return s ** (1.0 / p)


def max_modulus_set(f: Window, tol: float | None = None) -> SupportSet:
    """``{z : |V_f f(z)| = ||f||^2}``; exact for exact windows."""
    n2 = f.norm_sq()
    if n2 == 0:
        raise ZeroWindow("the zero window has no maximum-modulus set")
    V = ambiguity(f)
    A = f.group
    if V.exact is not None and tol in (None, 0):
        sq = V.exact.abs_sq()
        target = Fraction(n2) ** 2
        root = math.isqrt(sq.scale_sq.numerator), math.isqrt(sq.scale_sq.denominator)
        s = Fraction(*root)
        if s * s != sq.scale_sq:
            raise ValueError("exact max-modulus test needs a square scale")
        # value = s * c0 / denom with all higher coefficients zero
        lhs = sq.coeffs[..., 0].astype(object) * s.numerator * target.denominator
        rhs = target.numerator * sq.denom * s.denominator
        mask = np.all(sq.coeffs[..., 1:] == 0, axis=-1) & (lhs == rhs)
    else:
        tol = DEFAULT_TOL if tol is None else tol
        mask = np.abs(np.abs(V.values) - n2) <= tol * n2
    idx = np.flatnonzero(np.asarray(mask, dtype=bool).ravel())
    return SupportSet(A, frozenset(idx.tolist()), Fraction(idx.size, A.order))


def covariance_check(f: Window, g: Window, z, w=None) -> float:
    """Largest residual of the two covariance identities of the STFT.

    ``V_g(pi(z) f)(w) = <x,xi> conj<x,eta> V_g f(y - x, eta - xi)`` and
    ``V_{pi(z) g}(pi(z) f)(w) = <y,xi> conj<x,eta> V_g f(w)`` with
    ``z = (x, xi)``, ``w = (y, eta)``; over all ``w`` when ``w`` is None.
    Exact windows give exactly ``0.0`` when the identities hold.
    """
    _same_group(f, g)
    A = f.group
    n, e = A.order, A.exponent
    x, xi = split_point(A, z)
    xi_i, x_i = A.index(xi), A.index(x)
    P = pairing_table(A)
    T = sub_table(A)
    ys, etas = np.meshgrid(np.arange(n), np.arange(n), indexing="ij")
    ph8 = (P[x_i, xi_i] - P[x_i, etas]) % e
    ph9 = (P[ys, xi_i] - P[x_i, etas]) % e
    V = stft(f, g)
    L8 = stft(tf_shift(f, (x, xi)), g)
    L9 = stft(tf_shift(f, (x, xi)), tf_shift(g, (x, xi)))
    perm = (T[ys, x_i], T[etas, xi_i])
    if V.exact is not None:
        def phase_array(ph):
            entries = {int(k): ExactScalar(1, UnitPhase(int(v), e)) for k, v in enumerate(ph.ravel())}
            return CyclotomicArray.from_scalars((n, n), entries)

        R8 = phase_array(ph8) * CyclotomicArray(V.exact.M, V.exact.coeffs[perm], V.exact.denom, V.exact.scale_sq)
        R9 = phase_array(ph9) * V.exact
        sel = (slice(None), slice(None)) if w is None else _point_slice(A, w)
        ok8 = _sub(L8.exact, sel).equals(_sub(R8, sel))
        ok9 = _sub(L9.exact, sel).equals(_sub(R9, sel))
        if ok8 and ok9:
            return 0.0
    r8 = np.exp(2j * np.pi * ph8 / e) * V.values[perm]
    r9 = np.exp(2j * np.pi * ph9 / e) * V.values
    d8, d9 = np.abs(L8.values - r8), np.abs(L9.values - r9)
    if w is not None:
        y, eta = split_point(A, w)
        k = (A.index(y), A.index(eta))
        return float(max(d8[k], d9[k]))
    return float(max(d8.max(), d9.max()))


def _point_slice(A: GroupSpec, w) -> tuple:
    y, eta = split_point(A, w)
    i, j = A.index(y), A.index(eta)
    return (slice(i, i + 1), slice(j, j + 1))


def _sub(C: CyclotomicArray, sel) -> CyclotomicArray:
    return CyclotomicArray(C.M, C.coeffs[sel], C.denom, C.scale_sq)
