"""Exact arithmetic on the unit circle.

A :class:`UnitPhase` is an element of Q/Z, standing for ``exp(2*pi*i*phase)``.
All unimodular quantities in the library (pairings, symplectic phases,
values of characters of second degree) are carried this way so that
identities between them can be checked with zero tolerance.
"""

from __future__ import annotations

import cmath
import functools
import math
from dataclasses import dataclass
from fractions import Fraction

__all__ = [
    "UnitPhase",
    "ExactScalar",
    "phase_add",
    "phase_scale",
    "phase_neg",
    "to_complex",
    "nth_root_solutions",
]


@functools.total_ordering
@dataclass(frozen=True)
class UnitPhase:
    """Reduced fraction ``numerator/denominator`` in ``[0, 1)``."""

    numerator: int = 0
    denominator: int = 1

    def __post_init__(self):
        if self.denominator <= 0:
            raise ValueError("denominator must be positive")
        g = math.gcd(self.numerator, self.denominator)
        n, d = self.numerator // g, self.denominator // g
        object.__setattr__(self, "numerator", n % d)
        object.__setattr__(self, "denominator", d)

    @classmethod
    def of(cls, value) -> UnitPhase:
        """Coerce an int, Fraction, UnitPhase or ``"n/d"`` string."""
        if isinstance(value, UnitPhase):
            return value
        if isinstance(value, str):
            value = Fraction(value)
        if isinstance(value, int):
            return cls(0, 1)
        if isinstance(value, Fraction):
            return cls(value.numerator, value.denominator)
        raise TypeError(f"cannot make a phase from {value!r}")

    @property
    def fraction(self) -> Fraction:
        return Fraction(self.numerator, self.denominator)

    def __add__(self, other):
        if not isinstance(other, UnitPhase):
            return NotImplemented
        return phase_add(self, other)

    def __sub__(self, other):
        if not isinstance(other, UnitPhase):
            return NotImplemented
        return phase_add(self, phase_neg(other))

    def __neg__(self):
        return phase_neg(self)

    def __mul__(self, k):
        if not isinstance(k, int):
            return NotImplemented
        return phase_scale(self, k)

    __rmul__ = __mul__

    def __lt__(self, other):
        if not isinstance(other, UnitPhase):
            return NotImplemented
        return self.fraction < other.fraction

    def __bool__(self):
        return self.numerator != 0

    def to_complex(self) -> complex:
        return _unit(self.numerator, self.denominator)

    def __str__(self):
        return f"{self.numerator}/{self.denominator}"


def _unit(num: int, den: int) -> complex:
    # Exact values at the quarter points keep -1, i, -i free of rounding noise.
    r = (4 * num) % (4 * den)
    if r % den == 0:
        return (1, 1j, -1, -1j)[r // den]
    return cmath.exp(2j * math.pi * num / den)


def phase_add(p: UnitPhase, q: UnitPhase) -> UnitPhase:
    d = p.denominator * q.denominator // math.gcd(p.denominator, q.denominator)
    return UnitPhase(p.numerator * (d // p.denominator) + q.numerator * (d // q.denominator), d)


def phase_scale(p: UnitPhase, k: int) -> UnitPhase:
    return UnitPhase(p.numerator * k, p.denominator)


def phase_neg(p: UnitPhase) -> UnitPhase:
    return UnitPhase(-p.numerator, p.denominator)


@dataclass(frozen=True)
class ExactScalar:
    """``magnitude * exp(2*pi*i*phase)`` with a rational magnitude."""

    magnitude: Fraction = Fraction(1)
    phase: UnitPhase = UnitPhase()

    def __post_init__(self):
        mag = Fraction(self.magnitude)
        if mag < 0:
            raise ValueError("magnitude must be nonnegative")
        object.__setattr__(self, "magnitude", mag)
        if mag == 0:
            object.__setattr__(self, "phase", UnitPhase())

    def __mul__(self, other):
        if not isinstance(other, ExactScalar):
            return NotImplemented
        return ExactScalar(self.magnitude * other.magnitude, self.phase + other.phase)

    def conjugate(self) -> ExactScalar:
        return ExactScalar(self.magnitude, -self.phase)

    def to_complex(self) -> complex:
        return to_complex(self)


def to_complex(s) -> complex:
    """Floating value of an :class:`ExactScalar` (or bare :class:`UnitPhase`)."""
    if isinstance(s, UnitPhase):
        return s.to_complex()
    if s.magnitude == 0:
        return 0j
    return float(s.magnitude) * s.phase.to_complex()


def nth_root_solutions(target: UnitPhase, n: int) -> list[UnitPhase]:
    """All ``p`` with ``n*p == target`` in Q/Z, ascending."""
    if n < 1:
        raise ValueError("n must be >= 1")
    t = target.fraction
    return sorted(UnitPhase.of((t + k) / n) for k in range(n))
