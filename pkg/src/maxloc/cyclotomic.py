"""Arrays of exact sums of roots of unity.

An entry is ``sqrt(scale_sq) / denom * sum_k c_k * zeta_M**k`` with integer
``c_k`` reduced modulo the cyclotomic polynomial of order ``M``, so the
coefficient vector is a canonical form: two entries are equal exactly when
their vectors coincide.  This is only as much of Q(zeta_M) as the exact
short-time Fourier transform needs (sums, conjugates, products, zero tests).
"""

from __future__ import annotations

import functools
import math
from fractions import Fraction

import numpy as np
from sympy import cyclotomic_poly, totient
from sympy.abc import x as _x

from .phase import ExactScalar


@functools.lru_cache(maxsize=None)
def _reduction_matrix(M: int) -> np.ndarray:
    """Row ``k`` holds the coefficients of ``x**k mod Phi_M(x)``."""
    phi = int(totient(M))
    poly = [int(c) for c in cyclotomic_poly(M, _x, polys=True).all_coeffs()]
    # Phi_M is monic of degree phi: x**phi = -(lower terms).
    low = np.array(poly[::-1][:phi], dtype=np.int64)
    R = np.zeros((M, phi), dtype=np.int64)
    for k in range(min(M, phi)):
        R[k, k] = 1
    for k in range(phi, M):
        prev = R[k - 1]
        top = prev[-1]
        row = np.zeros(phi, dtype=np.int64)
        row[1:] = prev[:-1]
        row -= top * low
        R[k] = row
    return R


def _lcm(*ns: int) -> int:
    out = 1
    for n in ns:
        out = out * n // math.gcd(out, n)
    return out


def _is_rational_square(q: Fraction) -> Fraction | None:
    if q < 0:
        return None
    a, b = math.isqrt(q.numerator), math.isqrt(q.denominator)
    if a * a == q.numerator and b * b == q.denominator:
        return Fraction(a, b)
    return None


class CyclotomicArray:
    """Exact array over Q(zeta_M), times a common positive real ``sqrt(scale_sq)``."""

    def __init__(self, M: int, coeffs: np.ndarray, denom: int = 1, scale_sq: Fraction = Fraction(1)):
        self.M = int(M)
        self.coeffs = np.asarray(coeffs, dtype=np.int64)
        self.denom = int(denom)
        self.scale_sq = Fraction(scale_sq)
        if self.coeffs.shape[-1] != int(totient(self.M)):
            raise ValueError("coefficient length must equal phi(M)")

    @classmethod
    def from_raw(cls, M: int, raw: np.ndarray, denom: int = 1, scale_sq=Fraction(1)) -> CyclotomicArray:
        """Build from unreduced counts ``raw[..., k]`` of ``zeta_M**k``."""
        raw = np.asarray(raw, dtype=np.int64)
        return cls(M, raw @ _reduction_matrix(M), denom, scale_sq)

    @classmethod
    def from_scalars(cls, shape, entries: dict, scale_sq=Fraction(1)) -> CyclotomicArray:
        """Array with ``entries[flat_index] = ExactScalar`` and zeros elsewhere."""
        M = _lcm(1, *(s.phase.denominator for s in entries.values()))
        D = _lcm(1, *(s.magnitude.denominator for s in entries.values()))
        size = int(np.prod(shape))
        raw = np.zeros((size, M), dtype=np.int64)
        for idx, s in entries.items():
            k = s.phase.numerator * (M // s.phase.denominator)
            raw[idx, k] += int(s.magnitude * D)
        return cls.from_raw(M, raw.reshape(tuple(shape) + (M,)), D, scale_sq)

    @property
    def shape(self):
        return self.coeffs.shape[:-1]

    def raw(self) -> np.ndarray:
        """Coefficients padded to length ``M`` (still a valid representative)."""
        out = np.zeros(self.shape + (self.M,), dtype=np.int64)
        out[..., : self.coeffs.shape[-1]] = self.coeffs
        return out

    def lift(self, M2: int) -> CyclotomicArray:
        """Same values written over ``zeta_M2`` (``M`` must divide ``M2``)."""
        if M2 % self.M:
            raise ValueError("target order must be a multiple")
        if M2 == self.M:
            return self
        step = M2 // self.M
        raw = np.zeros(self.shape + (M2,), dtype=np.int64)
        raw[..., ::step] = self.raw()
        return CyclotomicArray.from_raw(M2, raw, self.denom, self.scale_sq)

    def nonzero(self) -> np.ndarray:
        return np.any(self.coeffs != 0, axis=-1)

    def to_complex(self) -> np.ndarray:
        k = np.arange(self.coeffs.shape[-1])
        zeta = np.exp(2j * np.pi * k / self.M)
        return (self.coeffs @ zeta) * (math.sqrt(self.scale_sq) / self.denom)

    def conjugate(self) -> CyclotomicArray:
        raw = self.raw()
        idx = (-np.arange(self.M)) % self.M
        out = np.zeros_like(raw)
        out[..., idx] = raw
        return CyclotomicArray.from_raw(self.M, out, self.denom, self.scale_sq)

    def __mul__(self, other: CyclotomicArray) -> CyclotomicArray:
        M = _lcm(self.M, other.M)
        a, b = self.lift(M), other.lift(M)
        ar, br = a.raw(), b.raw()
        out = np.zeros(np.broadcast_shapes(a.shape, b.shape) + (M,), dtype=np.int64)
        for k in range(a.coeffs.shape[-1]):
            out += ar[..., k, None] * np.roll(br, k, axis=-1)
        return CyclotomicArray.from_raw(M, out, a.denom * b.denom, a.scale_sq * b.scale_sq)

    def abs_sq(self) -> CyclotomicArray:
        return self * self.conjugate()

    def rational_values(self) -> np.ndarray | None:
        """Entries as Fractions when every entry is rational, else ``None``.

        Only meaningful when ``scale_sq`` is a rational square (true for
        ``abs_sq`` outputs, whose scale is a square by construction).
        """
        if np.any(self.coeffs[..., 1:] != 0):
            return None
        s = _is_rational_square(self.scale_sq)
        if s is None:
            return None
        flat = [Fraction(int(c), self.denom) * s for c in self.coeffs[..., 0].ravel()]
        return np.array(flat, dtype=object).reshape(self.shape)

    def equals(self, other: CyclotomicArray) -> bool:
        """Exact entrywise equality."""
        if self.shape != other.shape:
            return False
        a_nz, b_nz = self.nonzero(), other.nonzero()
        if not np.array_equal(a_nz, b_nz):
            return False
        if not a_nz.any():
            return True
        ratio = _is_rational_square(self.scale_sq / other.scale_sq)
        if ratio is None:
            raise ValueError("scales differ by an irrational factor; compare in floating point")
        M = _lcm(self.M, other.M)
        a, b = self.lift(M), other.lift(M)
        # a.c * sqrt(sa)/da == b.c * sqrt(sb)/db  <=>  a.c * r * db == b.c * da
        lhs = a.coeffs * (ratio.numerator * b.denom)
        rhs = b.coeffs * (ratio.denominator * a.denom)
        return bool(np.array_equal(lhs, rhs))

    def __repr__(self):
        return f"CyclotomicArray(M={self.M}, shape={self.shape}, denom={self.denom}, scale_sq={self.scale_sq})"


def scalar_array(value: ExactScalar) -> CyclotomicArray:
    return CyclotomicArray.from_scalars((), {0: value})
