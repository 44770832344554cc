"""L^p bounds for the STFT on finite groups, where the constant is 1.

For ``p >= 2`` one has ``||V_g f||_p <= ||f|| ||g||`` and for ``p <= 2`` the
reverse inequality; ``p = 2`` is Parseval.  Groups here are finite, the
``d = 0`` case of the Euclidean constants ``(2/p)^(d/p)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .gabor import PairVerdict, classify_pair
from .second_degree import subcharacter
from .symplectic import IsotropicTriple
from .tf import PhaseSpaceFunction, Window, ZeroWindow, stft, support, tf_shift

EQUALITY_TOL = 1e-12
PROPAGATION_PS = (0.5, 1.0, 3.0, 4.0)


@dataclass
class LiebReport:
    p: float
    norm: float
    bound: float
    margin: float
    regime: str  # "upper" for p >= 2, "lower" for p < 2
    equality: bool

    def as_dict(self) -> dict:
        return {"p": self.p, "norm": self.norm, "bound": self.bound, "margin": self.margin, "equality": self.equality}


def _check(f: Window, g: Window, p: float):
    if p <= 0 or not math.isfinite(p):
        raise ValueError(f"p must be a positive real, got {p}")
    if f.norm_sq() == 0 or g.norm_sq() == 0:
        raise ZeroWindow("the STFT of a zero window carries no information")


def stft_lp_norm(V: PhaseSpaceFunction, p: float, tol: float | None = None) -> float:
    """``||V||_p`` with points below the support threshold treated as exact zeros.

    Without the cut, rounding noise of size 1e-17 raised to ``p = 1/2`` would
    contribute terms of size 1e-9.
    """
    idx = np.array(sorted(support(V, tol).indices), dtype=np.int64)
    mods = np.abs(V.values.ravel()[idx])
    s = float(np.sum(mods**p)) * float(V.measure_weight)
    return s ** (1.0 / p)


def lieb_check(f: Window, g: Window, p: float, tol: float = EQUALITY_TOL) -> LiebReport:
    _check(f, g, p)
    V = stft(f, g)
    norm = stft_lp_norm(V, p)
    bound = f.norm() * g.norm()
    if p >= 2:
        regime, margin = "upper", bound - norm
    else:
        regime, margin = "lower", norm - bound
    return LiebReport(float(p), norm, bound, margin, regime, abs(margin) <= tol * max(1.0, bound))


@dataclass
class EqualityVerdict:
    equality: bool
    report: LiebReport
    pair: PairVerdict
    propagation: dict = field(default_factory=dict)  # p -> LiebReport at the extra exponents

    @property
    def kind(self) -> str:
        return "Equality" if self.equality else "NotEquality"

    @property
    def consistent(self) -> bool:
        """Numerical equality agrees with the structural verdict at every tested ``p``."""
        reps = [self.report, *self.propagation.values()]
        return all(r.equality == self.equality for r in reps)


def equality_diagnose(f: Window, g: Window, p: float, tol: float = EQUALITY_TOL) -> EqualityVerdict:
    """Equality for some ``p != 2`` holds iff ``f, g`` are a matched pair of subcharacters."""
    if p == 2:
        raise ValueError("every pair is extremal at p = 2")
    report = lieb_check(f, g, p, tol)
    pair = classify_pair(f, g)
    matched = pair.optimizer and pair.residual <= 1e-9
    prop = {}
    if matched:
        prop = {q: lieb_check(f, g, q, tol) for q in PROPAGATION_PS}
    return EqualityVerdict(matched, report, pair, prop)


@dataclass
class BridgeReport:
    values: list  # (p, integral of |V|^p) for unit-norm f, g
    extrapolated: float
    limit: Fraction  # exact Haar measure of supp V_g f
    indicator: bool  # |V| only takes the values 0 and ||f|| ||g||
    identity_exact: bool | None  # exact check of the indicator case, None for floating data

    @property
    def monotone(self) -> bool:
        ys = [v for _, v in self.values]
        return all(b >= a - 1e-12 for a, b in zip(ys, ys[1:]))

    def within(self, rel: float) -> bool:
        return abs(self.values[-1][1] - float(self.limit)) <= rel * float(self.limit)


def _exact_indicator(V: PhaseSpaceFunction, n2: Fraction) -> bool | None:
    """Is ``|V|^2`` exactly ``n2`` on the support?  ``None`` when no exact data."""
    if V.exact is None:
        return None
    sq = V.exact.abs_sq().rational_values()
    if sq is None:
        return False
    vals = set(sq.ravel().tolist())
    return vals <= {Fraction(0), n2}


def p_to_zero_bridge(f: Window, g: Window, p_grid=(1, 0.5, 0.25, 0.125, 0.0625)) -> BridgeReport:
    """``int |V_g f|^p`` for unit-norm windows as ``p`` decreases to zero.

    The limit is the Haar measure of the support.  The last two samples are
    extrapolated linearly to ``p = 0``.
    """
    ps = [float(p) for p in p_grid]
    if not ps or any(p <= 0 for p in ps) or any(b >= a for a, b in zip(ps, ps[1:])):
        raise ValueError("p_grid must be positive and strictly decreasing")
    _check(f, g, ps[0])
    V = stft(f, g)
    S = support(V)
    bound = f.norm() * g.norm()
    idx = np.array(sorted(S.indices), dtype=np.int64)
    mods = np.abs(V.values.ravel()[idx]) / bound
    w = float(V.measure_weight)
    values = [(p, float(np.sum(mods**p)) * w) for p in ps]
    if len(values) > 1:
        (p1, v1), (p2, v2) = values[-2], values[-1]
        extrap = v2 - p2 * (v1 - v2) / (p1 - p2)
    else:
        extrap = values[-1][1]
    n2 = f.norm_sq() * g.norm_sq()
    exact = _exact_indicator(V, n2) if isinstance(n2, Fraction) else None
    indicator = exact if exact is not None else bool(np.all(np.abs(mods - 1) <= 1e-10))
    return BridgeReport(values, extrap, S.measure, indicator, exact)


def matched_subcharacter_pair(t: IsotropicTriple, c1: complex, c2: complex, z1, z2) -> tuple:
    """``(c1 pi(z1) h, c2 pi(z2) h)`` for the normalized subcharacter ``h`` of ``t``."""
    if not t.is_maximal:
        raise ValueError("triple is not maximal isotropic")
    if c1 == 0 or c2 == 0:
        raise ValueError("scalars must be nonzero")
    h = subcharacter(t.H, t.phi, normalized=True).window()
    f = tf_shift(h, z1)
    g = tf_shift(h, z2)
    f = f if c1 == 1 else f.scaled(c1)
    g = g if c2 == 1 else g.scaled(c2)
    return f, g
